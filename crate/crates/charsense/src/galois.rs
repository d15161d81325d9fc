//! Exact arithmetic in GF(p) and GF(p^m) with full log/antilog tables.
//!
//! Elements are integers in `[0, q)` encoding polynomial-basis coefficient
//! vectors base `p` (coefficient of `x^i` is the i-th base-`p` digit), so a
//! table index doubles as the canonical element id. The discrete logarithm
//! follows the convention `log(0) = 0`, which downstream makes the
//! multiplicative character take the value 1 at zero.
//!
//! Primality and irreducibility are decided by brute force; the table cap of
//! `q <= 2^20` keeps every scan exact and fast at the scales this crate
//! targets.

use crate::error::{Error, Result};

/// Largest supported field size; log/antilog tables stay comfortably in memory.
pub const FIELD_CAP: u64 = 1 << 20;

/// A finite field GF(p^m) with a fixed primitive element and log tables.
#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u64,
    m: u32,
    q: u64,
    /// Coefficients of the monic irreducible modulus, ascending degree
    /// (length m+1); empty when m = 1.
    modulus_poly: Vec<u64>,
    /// Primitive element, as an element code.
    alpha: u64,
    /// antilog[t] = alpha^t for t in [0, q-2].
    antilog: Vec<u64>,
    /// log[x] = t with alpha^t = x for nonzero x; log[0] = 0 by convention.
    log: Vec<u64>,
}

impl FieldContext {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus_poly
    }

    /// alpha^t for t in [0, q-2].
    pub fn antilog(&self, t: u64) -> u64 {
        self.antilog[t as usize]
    }

    /// Field addition: digit-wise mod p on the base-p coefficient vectors.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let mut out = 0;
        let mut place = 1;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    /// Field multiplication through the log tables.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let t = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.antilog[t as usize]
    }

    /// Discrete logarithm with `log(0) = 0`.
    pub fn discrete_log(&self, x: u64) -> u64 {
        debug_assert!(x < self.q);
        self.log[x as usize]
    }

    /// Prime field GF(p) with the canonical (smallest) primitive root.
    pub fn prime_field(p: u64) -> Result<Self> {
        let g = find_primitive_root(p)?;
        Self::prime_field_with_root(p, g)
    }

    /// Prime field GF(p) with a caller-chosen primitive root. Rejects
    /// non-primitive candidates.
    pub fn prime_field_with_root(p: u64, g: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::RangeError("p must be an odd prime".into()));
        }
        if p > FIELD_CAP {
            return Err(Error::CapExceeded { q: p, cap: FIELD_CAP });
        }
        if g == 0 || g >= p || multiplicative_order(g, p) != p - 1 {
            return Err(Error::RangeError(format!(
                "{g} is not a primitive root modulo {p}"
            )));
        }
        let (antilog, log) = tables_from(p, g, |a, b| a * b % p);
        Ok(FieldContext {
            p,
            m: 1,
            q: p,
            modulus_poly: Vec::new(),
            alpha: g,
            antilog,
            log,
        })
    }

    /// GF(p^m). For m = 1 this is `prime_field`. For m > 1 the modulus is the
    /// first monic irreducible degree-m polynomial, in ascending element-code
    /// order of its non-leading coefficients, whose root x is primitive; the
    /// root then serves as alpha. Should no scanned modulus have a primitive
    /// root, the first irreducible one is kept and alpha is the smallest
    /// primitive element code instead.
    pub fn extension_field(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::RangeError("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Self::prime_field(p);
        }
        let q = p.checked_pow(m).unwrap_or(u64::MAX);
        if q > FIELD_CAP {
            return Err(Error::CapExceeded { q, cap: FIELD_CAP });
        }

        let mut fallback: Option<Vec<u64>> = None;
        let mut chosen: Option<(Vec<u64>, u64)> = None;
        for v in 0..q {
            let mut coeffs = digits(v, p, m as usize);
            coeffs.push(1); // monic
            if !is_irreducible(&coeffs, p) {
                continue;
            }
            if fallback.is_none() {
                fallback = Some(coeffs.clone());
            }
            // Element code of x is p (coefficient vector (0, 1, 0, ...)).
            if element_order(p, q, &coeffs, p) == q - 1 {
                chosen = Some((coeffs, p));
                break;
            }
        }
        let (modulus, alpha) = match chosen {
            Some(pair) => pair,
            None => {
                let modulus = fallback.expect("an irreducible polynomial always exists");
                let alpha = (2..q)
                    .find(|&a| element_order(p, q, &modulus, a) == q - 1)
                    .expect("a primitive element always exists");
                (modulus, alpha)
            }
        };

        let (antilog, log) = tables_from(q, alpha, |a, b| poly_mul_mod(a, b, &modulus, p));
        Ok(FieldContext {
            p,
            m,
            q,
            modulus_poly: modulus,
            alpha,
            antilog,
            log,
        })
    }
}

/// Smallest primitive root modulo an odd prime, with the order verified
/// through the prime factorization of p-1.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::RangeError("p must be an odd prime".into()));
    }
    let factors = prime_factors(p - 1);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("every prime has a primitive root");
    Ok(g)
}

/// GF(p^m) constructor mirroring `FieldContext::extension_field`.
pub fn build_field(p: u64, m: u32) -> Result<FieldContext> {
    FieldContext::extension_field(p, m)
}

/// Trial-division primality; exact at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn multiplicative_order(g: u64, p: u64) -> u64 {
    let mut t = 1;
    let mut acc = g % p;
    while acc != 1 {
        acc = acc * g % p;
        t += 1;
        if t > p {
            return 0; // g not invertible; cannot happen for 0 < g < p prime
        }
    }
    t
}

/// Base-p digits of `v`, least significant (degree 0) first.
fn digits(v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    let mut v = v;
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn code_of(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies two element codes modulo the modulus polynomial, by schoolbook
/// polynomial multiplication and long division over GF(p).
fn poly_mul_mod(a: u64, b: u64, modulus: &[u64], p: u64) -> u64 {
    let m = modulus.len() - 1;
    let da = digits(a, p, m);
    let db = digits(b, p, m);
    let mut prod = vec![0u64; 2 * m];
    for (i, &ca) in da.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca * cb) % p;
        }
    }
    // Reduce: x^m = -(modulus minus leading term).
    for deg in (m..2 * m).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &mc) in modulus.iter().enumerate().take(m) {
            let idx = deg - m + i;
            prod[idx] = (prod[idx] + c * (p - mc) % p) % p;
        }
    }
    code_of(&prod[..m], p)
}

fn poly_pow_mod(base: u64, mut exp: u64, modulus: &[u64], p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(acc, base, modulus, p);
        }
        base = poly_mul_mod(base, base, modulus, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of an element code in GF(q) defined by `modulus`.
fn element_order(p: u64, q: u64, modulus: &[u64], elem: u64) -> u64 {
    if elem == 0 {
        return 0;
    }
    let group = q - 1;
    if poly_pow_mod(elem, group, modulus, p) != 1 {
        return 0; // never happens in a field, guards a bad modulus
    }
    let mut order = group;
    for f in prime_factors(group) {
        while order % f == 0 && poly_pow_mod(elem, order / f, modulus, p) == 1 {
            order /= f;
        }
    }
    order
}

/// Brute-force irreducibility: a monic polynomial of degree m is reducible
/// iff some monic polynomial of degree in [1, m/2] divides it.
fn is_irreducible(coeffs: &[u64], p: u64) -> bool {
    let m = coeffs.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for v in 0..count {
            let mut g = digits(v, p, d);
            g.push(1);
            if poly_rem_is_zero(coeffs, &g, p) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `g` divides monic `f` over GF(p).
fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dg;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + lead * (p - gc) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Builds antilog/log tables by repeated multiplication by alpha.
fn tables_from(q: u64, alpha: u64, mul: impl Fn(u64, u64) -> u64) -> (Vec<u64>, Vec<u64>) {
    let order = (q - 1) as usize;
    let mut antilog = Vec::with_capacity(order);
    let mut log = vec![0u64; q as usize];
    let mut acc = 1u64;
    for t in 0..order {
        antilog.push(acc);
        log[acc as usize] = t as u64;
        acc = mul(acc, alpha);
    }
    debug_assert_eq!(acc, 1, "alpha must have order q-1");
    (antilog, log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smallest_primitive_roots() {
        assert_eq!(find_primitive_root(3).unwrap(), 2);
        assert_eq!(find_primitive_root(7).unwrap(), 3);
        assert_eq!(find_primitive_root(47).unwrap(), 5);
    }

    #[test]
    fn primitive_root_order_is_maximal_bruteforce() {
        // Independent check: exhaust orders rather than trusting the
        // factorization shortcut.
        for p in [7u64, 11, 13, 47] {
            let g = find_primitive_root(p).unwrap();
            assert_eq!(multiplicative_order(g, p), p - 1);
            for smaller in 2..g {
                assert_ne!(multiplicative_order(smaller, p), p - 1);
            }
        }
    }

    #[test]
    fn rejects_non_primes() {
        assert!(matches!(find_primitive_root(9), Err(Error::NotPrime(9))));
        assert!(matches!(find_primitive_root(2), Err(Error::RangeError(_))));
        assert!(matches!(build_field(15, 1), Err(Error::NotPrime(15))));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_field(2, 21),
            Err(Error::CapExceeded { .. })
        ));
        assert!(build_field(2, 20).is_ok());
    }

    #[test]
    fn gf3_tables() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.alpha(), 2);
        assert_eq!((f.antilog(0), f.antilog(1)), (1, 2));
    }

    #[test]
    fn gf9_uses_expected_modulus() {
        let f = build_field(3, 2).unwrap();
        // x^2 + x + 2, ascending coefficients.
        assert_eq!(f.modulus_poly(), &[2, 1, 1]);
        assert_eq!(f.alpha(), 3); // the element x
        assert_eq!(f.antilog(4), 2); // alpha^4 = 2
        assert_eq!(f.mul(f.antilog(4), f.antilog(4)), 1); // alpha^8 = 1
    }

    #[test]
    fn gf49_builds() {
        let f = build_field(7, 2).unwrap();
        assert_eq!(f.q(), 49);
        // Every nonzero element appears exactly once in the antilog table.
        let mut seen = vec![false; 49];
        for t in 0..48 {
            let x = f.antilog(t);
            assert!(!seen[x as usize]);
            seen[x as usize] = true;
        }
        assert!(!seen[0]);
    }

    #[test]
    fn discrete_log_convention() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.discrete_log(0), 0);
        assert_eq!(f.discrete_log(1), 0);
        assert_eq!(f.discrete_log(6), 3); // 3^3 = 27 = 6 (mod 7)
    }

    #[test]
    fn log_product_rule_random_pairs() {
        for (p, m) in [(7, 1), (47, 1), (3, 2), (7, 2), (3, 3), (2, 6)] {
            let f = build_field(p, m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..1000 {
                let x = rng.gen_range(1..f.q());
                let y = rng.gen_range(1..f.q());
                let lhs = f.discrete_log(f.mul(x, y));
                let rhs = (f.discrete_log(x) + f.discrete_log(y)) % (f.q() - 1);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn antilog_bijective_exhaustive() {
        for (p, m) in [(2, 8), (3, 4), (5, 3), (13, 2), (127, 1)] {
            let f = build_field(p, m).unwrap();
            let mut seen = vec![false; f.q() as usize];
            for t in 0..f.q() - 1 {
                let x = f.antilog(t);
                assert!(x > 0 && !seen[x as usize]);
                seen[x as usize] = true;
                assert_eq!(f.discrete_log(x), t);
            }
        }
    }

    #[test]
    fn modulus_has_no_roots_and_no_small_divisors() {
        for (p, m) in [(3, 2), (7, 2), (3, 3), (5, 3), (3, 4), (13, 2), (2, 6)] {
            let f = build_field(p, m).unwrap();
            let modulus = f.modulus_poly();
            for x in 0..p {
                let mut acc = 0u64;
                for &c in modulus.iter().rev() {
                    acc = (acc * x + c) % p;
                }
                assert_ne!(acc, 0, "root {x} in GF({p}) for modulus of GF({p}^{m})");
            }
            assert!(is_irreducible(modulus, p));
        }
    }

    #[test]
    fn rebuild_is_deterministic() {
        let a = build_field(7, 2).unwrap();
        let b = build_field(7, 2).unwrap();
        assert_eq!(a.modulus_poly(), b.modulus_poly());
        assert_eq!(a.alpha(), b.alpha());
        assert_eq!(a.antilog, b.antilog);
        assert_eq!(a.log, b.log);
    }

    #[test]
    fn addition_is_characteristic_p() {
        let f = build_field(3, 2).unwrap();
        for x in 0..f.q() {
            let mut acc = 0;
            for _ in 0..3 {
                acc = f.add(acc, x);
            }
            assert_eq!(acc, 0);
        }
        let g = build_field(2, 4).unwrap();
        for x in 0..g.q() {
            assert_eq!(g.add(x, x), 0);
        }
    }

    #[test]
    fn forced_root_must_be_primitive() {
        assert!(FieldContext::prime_field_with_root(7, 3).is_ok());
        assert!(FieldContext::prime_field_with_root(7, 5).is_ok());
        assert!(FieldContext::prime_field_with_root(7, 2).is_err()); // order 3
        assert!(FieldContext::prime_field_with_root(7, 6).is_err()); // order 2
    }
}
