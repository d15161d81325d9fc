//! Deterministic compressed sensing matrices from M-ary power residue and
//! Sidelnikov sequences.
//!
//! The crate builds K x N measurement matrices whose columns are constant
//! multiples of cyclic shifts of a single base sequence modulated onto the
//! unit circle, analyzes their geometry (coherence, spectral norm, condition
//! number statistics), and runs seeded matching-pursuit recovery experiments
//! on noiseless and noisy measurements.
//!
//! Start with the runnable programs under `examples/`, one per capability,
//! or the `charsense` binary for the same operations behind a CLI.

pub mod analysis;
pub mod charseq;
pub mod cli;
pub mod error;
pub mod galois;
pub mod recovery;
pub mod rng;
pub mod sensing;

pub use error::{Error, Result};
