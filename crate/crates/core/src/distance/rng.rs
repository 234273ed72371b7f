//! Seeded streams and interconnection sampling.
//!
//! Every draw comes from a ChaCha20 stream keyed by `(seed, kind, outer,
//! inner)`, so a sample depends only on its index and never on evaluation
//! order or thread count. Runs that share a seed see the same draws.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::NumericNds;
use crate::error::{Error, Result};

/// Stream kinds.
pub const OUTER: u64 = 1;
pub const INNER: u64 = 2;
pub const PRBS: u64 = 3;

pub fn stream(seed: u64, kind: u64, outer: u64, inner: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    for (k, word) in [seed, kind, outer, inner].iter().enumerate() {
        key[8 * k..8 * k + 8].copy_from_slice(&word.to_le_bytes());
    }
    ChaCha20Rng::from_seed(key)
}

/// Uniform on the open interval `(-1, 1)`.
pub fn open_unit(rng: &mut impl Rng) -> f64 {
    loop {
        let x = 2.0 * rng.gen::<f64>() - 1.0;
        if x > -1.0 {
            return x;
        }
    }
}

/// Draws `Φ` with free entries uniform on `(-1, 1)` and fixed entries kept,
/// redrawing until the interconnection is well-posed.
pub fn sample_scm(m: &NumericNds, rng: &mut impl Rng, max_attempts: usize) -> Result<DMatrix<f64>> {
    for _ in 0..max_attempts {
        let mut phi = m.phi_fixed.clone();
        for &(i, j) in &m.free {
            phi[(i, j)] = open_unit(rng);
        }
        if m.well_posed(&phi) {
            return Ok(phi);
        }
    }
    Err(Error::SamplingExhausted { attempts: max_attempts })
}
