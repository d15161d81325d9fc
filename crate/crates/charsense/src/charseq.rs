//! M-ary power residue and Sidelnikov sequences, their modulation to complex
//! roots of unity, and a brute-force character-sum bound oracle.
//!
//! Symbols are kept as integers mod M for as long as possible; the only
//! floating-point step is the final cosine/sine evaluation, so modulated
//! entries are exact roots of unity and matrices rebuild bit-identically.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galois::FieldContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceFamily {
    PowerResidue,
    Sidelnikov,
}

/// An M-ary sequence over Z_M together with the field that generated it.
#[derive(Debug, Clone)]
pub struct SymbolSequence {
    family: SequenceFamily,
    m_ary: u32,
    symbols: Vec<u32>,
    field: Arc<FieldContext>,
}

impl SymbolSequence {
    pub fn family(&self) -> SequenceFamily {
        self.family
    }

    /// Alphabet size M.
    pub fn m_ary(&self) -> u32 {
        self.m_ary
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// p for power residue sequences, p^m - 1 for Sidelnikov sequences.
    pub fn period(&self) -> usize {
        self.symbols.len()
    }

    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }
}

fn check_alphabet(m_ary: u32, group_order: u64) -> Result<()> {
    if m_ary <= 2 || group_order % m_ary as u64 != 0 {
        return Err(Error::AlphabetMismatch { m_ary, group_order });
    }
    Ok(())
}

/// Power residue sequence of period p: symbol k is `log(k) mod M`, so
/// symbol 0 is 0 by the log convention.
pub fn power_residue_sequence(field: &Arc<FieldContext>, m_ary: u32) -> Result<SymbolSequence> {
    if field.m() != 1 {
        return Err(Error::PrimeFieldRequired {
            p: field.p(),
            m: field.m(),
        });
    }
    check_alphabet(m_ary, field.q() - 1)?;
    let symbols = (0..field.q())
        .map(|k| (field.discrete_log(k) % m_ary as u64) as u32)
        .collect();
    Ok(SymbolSequence {
        family: SequenceFamily::PowerResidue,
        m_ary,
        symbols,
        field: Arc::clone(field),
    })
}

/// Sidelnikov sequence of period q - 1: symbol k is `log(alpha^k + 1) mod M`.
/// At the unique k with alpha^k = -1 the argument is zero and the symbol is 0.
pub fn sidelnikov_sequence(field: &Arc<FieldContext>, m_ary: u32) -> Result<SymbolSequence> {
    check_alphabet(m_ary, field.q() - 1)?;
    let symbols = (0..field.q() - 1)
        .map(|t| {
            let x = field.add(field.antilog(t), 1);
            (field.discrete_log(x) % m_ary as u64) as u32
        })
        .collect();
    Ok(SymbolSequence {
        family: SequenceFamily::Sidelnikov,
        m_ary,
        symbols,
        field: Arc::clone(field),
    })
}

/// The M complex M-th roots of unity, index e holding `exp(j*2*pi*e/M)`.
pub fn roots_of_unity(m_ary: u32) -> Vec<Complex64> {
    (0..m_ary)
        .map(|e| {
            let theta = TAU * e as f64 / m_ary as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// Modulates a constant multiple of a cyclic shift of the sequence onto the
/// unit circle: entry k is `omega_M^(c * symbols[(k+b) mod period])`, with the
/// exponent reduced mod M in integer arithmetic before any trigonometry.
pub fn modulate(seq: &SymbolSequence, multiplier: u32, shift: usize) -> Result<Vec<Complex64>> {
    let m = seq.m_ary;
    let period = seq.period();
    if multiplier == 0 || multiplier >= m {
        return Err(Error::RangeError(format!(
            "multiplier c = {multiplier} outside [1, {}]",
            m - 1
        )));
    }
    if shift >= period {
        return Err(Error::RangeError(format!(
            "shift b = {shift} outside [0, {}]",
            period - 1
        )));
    }
    let roots = roots_of_unity(m);
    Ok((0..period)
        .map(|k| {
            let sym = seq.symbols[(k + shift) % period] as u64;
            roots[((multiplier as u64 * sym) % m as u64) as usize]
        })
        .collect())
}

/// Outcome of one character-sum bound check.
#[derive(Debug, Clone, Copy)]
pub struct WeilCheck {
    /// |sum over x of psi^c1(x+b1) * psi^c2(x+b2)|, computed by brute force.
    pub magnitude: f64,
    /// (d-1)*sqrt(q) + e for the two linear factors involved.
    pub bound: f64,
    pub holds: bool,
}

/// Reusable brute-force checker for character sums over one field and
/// alphabet; precomputes the root table and, for small fields, the full
/// addition table.
pub struct WeilOracle<'a> {
    field: &'a FieldContext,
    m_ary: u32,
    roots: Vec<Complex64>,
    add_table: Option<Vec<u32>>,
}

const ADD_TABLE_MAX_Q: u64 = 512;

impl<'a> WeilOracle<'a> {
    pub fn new(field: &'a FieldContext, m_ary: u32) -> Result<Self> {
        check_alphabet(m_ary, field.q() - 1)?;
        let q = field.q();
        let add_table = (q <= ADD_TABLE_MAX_Q).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for x in 0..q {
                for y in 0..q {
                    t[(x * q + y) as usize] = field.add(x, y) as u32;
                }
            }
            t
        });
        Ok(WeilOracle {
            field,
            m_ary,
            roots: roots_of_unity(m_ary),
            add_table,
        })
    }

    #[inline]
    fn add(&self, x: u64, y: u64) -> u64 {
        match &self.add_table {
            Some(t) => t[(x * self.field.q() + y) as usize] as u64,
            None => self.field.add(x, y),
        }
    }

    /// Checks |sum_x psi^c1(x+b1) psi^c2(x+b2)| against (d-1)sqrt(q) + e,
    /// where d = e = 2 for distinct shifts and d = e = 1 when the two linear
    /// factors coincide. Errors when the product character is identically 1.
    pub fn check(&self, c1: u32, c2: u32, b1: u64, b2: u64) -> Result<WeilCheck> {
        let q = self.field.q();
        if b1 >= q || b2 >= q {
            return Err(Error::RangeError(format!(
                "shifts must be field elements below {q}"
            )));
        }
        let m = self.m_ary as u64;
        let (c1, c2) = (c1 as u64 % m, c2 as u64 % m);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut nontrivial = false;
        for x in 0..q {
            let l1 = self.field.discrete_log(self.add(x, b1));
            let l2 = self.field.discrete_log(self.add(x, b2));
            let e = ((c1 * l1 + c2 * l2) % m) as usize;
            nontrivial |= e != 0;
            sum += self.roots[e];
        }
        if !nontrivial {
            return Err(Error::TrivialCharacter);
        }
        let magnitude = sum.norm();
        let bound = if b1 == b2 {
            1.0
        } else {
            (q as f64).sqrt() + 2.0
        };
        Ok(WeilCheck {
            magnitude,
            bound,
            holds: magnitude <= bound + 1e-9,
        })
    }
}

/// One-shot convenience wrapper around [`WeilOracle`].
pub fn weil_sum_check(
    field: &FieldContext,
    m_ary: u32,
    c1: u32,
    c2: u32,
    b1: u64,
    b2: u64,
) -> Result<WeilCheck> {
    WeilOracle::new(field, m_ary)?.check(c1, c2, b1, b2)
}
