//! Monte-Carlo distance from a network to the set of unidentifiable ones.
//!
//! For sampled pairs of interconnections the distance is the ratio of the
//! change in the input-output map to `σ̄(Φ2 - Φ1)`, measured either as an
//! `H∞` norm over a frequency grid ([`dsid_freq`]) or as a normalized `ℓ2`
//! norm of simulated PRBS responses ([`dsid_time`]). The infimum over pairs is
//! small when the structure is close to unidentifiable.
//!
//! Everything here is double precision; the exact core only supplies the
//! realized matrices.

mod freq;
mod linalg;
pub mod rng;
mod time;

pub use freq::{dsid_freq, linf_norm, linf_norm_with, pair_distance, pair_response, FreqEstimate, FreqGrid, NormEstimate};
pub use linalg::{sigma_max, sigma_max_real, to_dmatrix, CMatrix, C64};
pub use time::{dsid_time, prbs, simulate, zoh_discretize, SimConfig, TimeEstimate};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::Result;
use crate::model::{circuit::reference_nds, NdsModel};
use crate::ratpoly::{rat, rat_to_f64, Rat};

/// Network matrices in double precision with the free pattern of `Φ`.
#[derive(Debug, Clone)]
pub struct NumericNds {
    pub a_xx: DMatrix<f64>,
    pub a_xv: DMatrix<f64>,
    pub b_x: DMatrix<f64>,
    pub a_zx: DMatrix<f64>,
    pub a_zv: DMatrix<f64>,
    pub b_z: DMatrix<f64>,
    pub c_x: DMatrix<f64>,
    pub c_v: DMatrix<f64>,
    pub d_u: DMatrix<f64>,
    /// Values of the fixed entries of `Φ` (free entries are overwritten).
    pub phi_fixed: DMatrix<f64>,
    pub free: Vec<(usize, usize)>,
}

/// Closed-loop state-space matrices.
#[derive(Debug, Clone)]
pub struct NumericRealization {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl NumericNds {
    pub fn from_model(m: &NdsModel) -> Result<Self> {
        let n = m.network()?;
        let phi = &m.scm.phi;
        let free = (0..phi.rows())
            .flat_map(|i| (0..phi.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| m.scm.is_free(i, j))
            .collect();
        Ok(NumericNds {
            a_xx: to_dmatrix(&n.a_xx),
            a_xv: to_dmatrix(&n.a_xv),
            b_x: to_dmatrix(&n.b_x),
            a_zx: to_dmatrix(&n.a_zx),
            a_zv: to_dmatrix(&n.a_zv),
            b_z: to_dmatrix(&n.b_z),
            c_x: to_dmatrix(&n.c_x),
            c_v: to_dmatrix(&n.c_v),
            d_u: to_dmatrix(&n.d_u),
            phi_fixed: to_dmatrix(phi),
            free,
        })
    }

    pub fn m_v(&self) -> usize {
        self.a_xv.ncols()
    }

    pub fn m_z(&self) -> usize {
        self.a_zx.nrows()
    }

    /// `Φ (I - A_zv Φ)⁻¹`, or `None` when `I - A_zv Φ` is numerically singular.
    fn loop_map(&self, phi: &DMatrix<f64>) -> Option<DMatrix<f64>> {
        if self.a_zv.iter().all(|x| *x == 0.0) {
            return Some(phi.clone());
        }
        let inner = DMatrix::identity(self.m_z(), self.m_z()) - &self.a_zv * phi;
        let s = inner.clone().svd(false, false).singular_values;
        if s.min() <= 1e-10 * s.max().max(1.0) {
            return None;
        }
        inner.try_inverse().map(|inv| phi * inv)
    }

    pub fn well_posed(&self, phi: &DMatrix<f64>) -> bool {
        self.loop_map(phi).is_some()
    }

    pub fn closed_loop(&self, phi: &DMatrix<f64>) -> Result<NumericRealization> {
        let lam = self.loop_map(phi).ok_or(crate::Error::IllPosedNds)?;
        let av = &self.a_xv * &lam;
        let cv = &self.c_v * &lam;
        Ok(NumericRealization {
            a: &self.a_xx + &av * &self.a_zx,
            b: &self.b_x + &av * &self.b_z,
            c: &self.c_x + &cv * &self.a_zx,
            d: &self.d_u + &cv * &self.b_z,
        })
    }
}

/// Result of [`estimate`] for one network.
#[derive(Debug, Clone)]
pub struct DistanceEstimate {
    pub d_freq: f64,
    pub d_time: f64,
    /// `σ̄(Φ2 - Φ1)` of the minimizing pair.
    pub d_scm: f64,
    pub phi1: DMatrix<f64>,
    pub phi2: DMatrix<f64>,
    pub omega: f64,
    pub n1: usize,
    pub n2: usize,
    pub seed: u64,
    pub time: TimeEstimate,
}

/// Frequency-domain search followed by a simulation of the minimizing pair.
pub fn estimate(model: &NdsModel, n1: usize, n2: usize, seed: u64) -> Result<DistanceEstimate> {
    let num = NumericNds::from_model(model)?;
    let f = dsid_freq(&num, n1, n2, seed, &FreqGrid::default())?;
    let time = dsid_time(&num, &f.phi1, &f.phi2, &SimConfig::new(seed))?;
    Ok(DistanceEstimate {
        d_freq: f.value,
        d_time: time.value,
        d_scm: f.d_scm,
        phi1: f.phi1,
        phi2: f.phi2,
        omega: f.omega,
        n1,
        n2,
        seed,
        time,
    })
}

/// `0.05, 0.10, …, 0.95` as exact rationals.
pub fn k1_grid() -> Vec<Rat> {
    (1..=19).map(|k| rat(k, 20)).collect()
}

/// One row of a gain sweep over the reference circuit.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub k1: f64,
    pub d_scm: f64,
    pub d_freq: f64,
    pub d_time: f64,
}

/// Estimates for the reference circuit at each first-stage gain. The same
/// seed is used for every gain so all rows share their random draws.
pub fn sweep(k1s: &[Rat], n1: usize, n2: usize, seed: u64) -> Result<Vec<SweepRow>> {
    k1s.par_iter()
        .map(|k1| {
            let e = estimate(&reference_nds(k1)?, n1, n2, seed)?;
            Ok(SweepRow { k1: rat_to_f64(k1), d_scm: e.d_scm, d_freq: e.d_freq, d_time: e.d_time })
        })
        .collect()
}
