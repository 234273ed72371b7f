//! Time-domain distance from sampled PRBS responses.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::linalg::sigma_max_real;
use super::rng::{stream, PRBS};
use super::{NumericNds, NumericRealization};
use crate::error::{Error, Result};

/// Sampling rules for [`dsid_time`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    /// Overrides the period `0.1 / ρ_max`.
    pub period: Option<f64>,
    /// Overrides the count `max(min_samples, ⌈100 ρ_max / ρ_min⌉)`.
    pub samples: Option<usize>,
    pub min_samples: usize,
    pub max_samples: usize,
}

impl SimConfig {
    pub fn new(seed: u64) -> Self {
        SimConfig { seed, period: None, samples: None, min_samples: 20_000, max_samples: 2_000_000 }
    }

    fn resolve(&self, rho_max: f64, rho_min: f64) -> Result<(f64, usize)> {
        let period = match self.period {
            Some(h) => h,
            None if rho_max > 0.0 => 0.1 / rho_max,
            None => return Err(Error::InvalidParam("state matrix has no nonzero eigenvalue".into())),
        };
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParam(format!("sample period {period} must be positive")));
        }
        let samples = self.samples.unwrap_or_else(|| {
            let ratio = if rho_min > 0.0 { (100.0 * rho_max / rho_min).ceil() } else { f64::INFINITY };
            (ratio.min(self.max_samples as f64) as usize).max(self.min_samples)
        });
        if samples == 0 {
            return Err(Error::InvalidParam("sample count must be positive".into()));
        }
        Ok((period, samples))
    }
}

/// `(exp(Ah), ∫₀ʰ exp(As) ds B)` from the exponential of `[A B; 0 0] h`.
pub fn zoh_discretize(a: &DMatrix<f64>, b: &DMatrix<f64>, h: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let (n, m) = (a.nrows(), b.ncols());
    let mut aug = DMatrix::zeros(n + m, n + m);
    aug.view_mut((0, 0), (n, n)).copy_from(&(a * h));
    aug.view_mut((0, n), (n, m)).copy_from(&(b * h));
    let e = aug.exp();
    (e.view((0, 0), (n, n)).into_owned(), e.view((0, n), (n, m)).into_owned())
}

/// Independent ±1 sequences, one per channel, drawn step by step.
pub struct Prbs {
    rng: ChaCha20Rng,
    channels: usize,
}

impl Prbs {
    pub fn new(channels: usize, seed: u64) -> Self {
        Prbs { rng: stream(seed, PRBS, 0, 0), channels }
    }

    pub fn fill(&mut self, u: &mut DVector<f64>) {
        for k in 0..self.channels {
            u[k] = if self.rng.gen::<bool>() { 1.0 } else { -1.0 };
        }
    }
}

/// `channels × length` PRBS signal; column `k` is the input at step `k`.
pub fn prbs(channels: usize, length: usize, seed: u64) -> DMatrix<f64> {
    let mut p = Prbs::new(channels, seed);
    let mut u = DVector::zeros(channels);
    let mut out = DMatrix::zeros(channels, length);
    for k in 0..length {
        p.fill(&mut u);
        out.set_column(k, &u);
    }
    out
}

/// Discrete simulation from the zero state: `x⁺ = A_d x + B_d u`,
/// `y = C x + D u`, one output column per input column.
pub fn simulate(ad: &DMatrix<f64>, bd: &DMatrix<f64>, c: &DMatrix<f64>, d: &DMatrix<f64>, u: &DMatrix<f64>) -> DMatrix<f64> {
    let mut x = DVector::zeros(ad.nrows());
    let mut next = x.clone();
    let mut y = DMatrix::zeros(c.nrows(), u.ncols());
    for k in 0..u.ncols() {
        let uk = u.column(k);
        y.set_column(k, &(c * &x + d * uk));
        next.gemv(1.0, ad, &x, 0.0);
        next.gemv(1.0, bd, &uk, 1.0);
        std::mem::swap(&mut x, &mut next);
    }
    y
}

/// Outcome of [`dsid_time`] with the sampling actually used.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeEstimate {
    pub value: f64,
    pub period: f64,
    pub samples: usize,
    pub rho_max: f64,
    pub rho_min: f64,
}

fn spectral_extent(parts: &[&DMatrix<f64>]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for a in parts.iter().filter(|a| a.nrows() > 0) {
        for z in a.complex_eigenvalues().iter() {
            let r = z.norm();
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    (hi, if lo.is_finite() { lo } else { 0.0 })
}

struct Stepper {
    ad: DMatrix<f64>,
    bd: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
    x: DVector<f64>,
    next: DVector<f64>,
    y: DVector<f64>,
}

impl Stepper {
    fn new(r: &NumericRealization, h: f64) -> Self {
        let (ad, bd) = zoh_discretize(&r.a, &r.b, h);
        let n = ad.nrows();
        Stepper { ad, bd, c: r.c.clone(), d: r.d.clone(), x: DVector::zeros(n), next: DVector::zeros(n), y: DVector::zeros(r.c.nrows()) }
    }

    fn step(&mut self, u: &DVector<f64>) {
        self.y.gemv(1.0, &self.c, &self.x, 0.0);
        self.y.gemv(1.0, &self.d, u, 1.0);
        self.next.gemv(1.0, &self.ad, &self.x, 0.0);
        self.next.gemv(1.0, &self.bd, u, 1.0);
        std::mem::swap(&mut self.x, &mut self.next);
    }
}

/// `sqrt(Σ_k eᵀ(k) e(k)) / (M σ̄(Φ2 - Φ1))` where `e` is the output difference
/// of the two closed loops under a shared PRBS, sampled at `t = 0, …, M-1`.
///
/// Period and count follow the extreme eigenvalue magnitudes of both
/// closed-loop state matrices unless fixed in `cfg`.
pub fn dsid_time(m: &NumericNds, phi1: &DMatrix<f64>, phi2: &DMatrix<f64>, cfg: &SimConfig) -> Result<TimeEstimate> {
    let r1 = m.closed_loop(phi1)?;
    let r2 = m.closed_loop(phi2)?;
    let (rho_max, rho_min) = spectral_extent(&[&r1.a, &r2.a]);
    let (period, samples) = cfg.resolve(rho_max, rho_min)?;
    let dn = sigma_max_real(&(phi2 - phi1));
    if dn == 0.0 {
        return Ok(TimeEstimate { value: 0.0, period, samples, rho_max, rho_min });
    }
    let (mut s1, mut s2) = (Stepper::new(&r1, period), Stepper::new(&r2, period));
    let mut src = Prbs::new(r1.b.ncols(), cfg.seed);
    let mut u = DVector::zeros(r1.b.ncols());
    let mut energy = 0.0;
    for k in 0..samples {
        src.fill(&mut u);
        s1.step(&u);
        s2.step(&u);
        energy += (&s2.y - &s1.y).norm_squared();
        if !energy.is_finite() {
            return Err(Error::DivergentSimulation { step: k });
        }
    }
    Ok(TimeEstimate { value: energy.sqrt() / (samples as f64 * dn), period, samples, rho_max, rho_min })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoh_trivial_cases() {
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let (ad, bd) = zoh_discretize(&DMatrix::zeros(2, 2), &b, 0.5);
        assert!((ad - DMatrix::identity(2, 2)).norm() < 1e-14);
        assert!((bd - &b * 0.5).norm() < 1e-14);
        let (ad, bd) = zoh_discretize(&DMatrix::from_element(1, 1, -2.0), &DMatrix::from_element(1, 1, 1.0), 0.3);
        assert!((ad[(0, 0)] - (-0.6f64).exp()).abs() < 1e-14);
        assert!((bd[(0, 0)] - (1.0 - (-0.6f64).exp()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zoh_semigroup() {
        let a = DMatrix::from_row_slice(4, 4, &[
            -1.0, 0.3, 0.0, 0.2, -0.4, -2.0, 0.5, 0.0, 0.1, 0.0, -0.7, 0.3, 0.0, -0.2, 0.1, -1.5,
        ]);
        let b = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.5, -1.0, 0.0, 2.0, 0.3, 0.3]);
        let (ad, bd) = zoh_discretize(&a, &b, 1.0);
        let (a10, b10) = zoh_discretize(&a, &b, 0.1);
        let mut ac = DMatrix::identity(4, 4);
        let mut bc = DMatrix::zeros(4, 2);
        for _ in 0..10 {
            bc = &a10 * bc + &b10;
            ac = &a10 * ac;
        }
        assert!((ad - ac).amax() < 1e-10);
        assert!((bd - bc).amax() < 1e-10);
    }

    #[test]
    fn prbs_properties() {
        let p = prbs(4, 100_000, 7);
        assert!(p.iter().all(|x| *x == 1.0 || *x == -1.0));
        assert_eq!(p, prbs(4, 100_000, 7));
        for r in 0..4 {
            assert!(p.row(r).mean().abs() < 0.02);
        }
        assert_ne!(p.row(0), p.row(1));
    }

    #[test]
    fn zero_padding_only_rescales() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.5, 0.0, -2.0]);
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let c = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        let d = DMatrix::zeros(1, 1);
        let (ad, bd) = zoh_discretize(&a, &b, 0.1);
        let u = prbs(1, 50, 3);
        let mut padded = DMatrix::zeros(1, 100);
        padded.view_mut((0, 0), (1, 50)).copy_from(&u);
        let y1 = simulate(&ad, &bd, &c, &d, &u);
        let y2 = simulate(&ad, &bd, &c, &d, &padded);
        assert_eq!(y1, y2.columns(0, 50).into_owned());
    }
}
