//! Frequency-domain distance.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::linalg::{complexify, sigma_max, sigma_max_real, CMatrix, C64};
use super::rng::{sample_scm, stream, INNER, OUTER};
use super::NumericNds;
use crate::error::{Error, Result};
use crate::polymat::RatMatrix;
use crate::ratpoly::{rat_to_f64, Poly};

/// Redraws allowed per sample before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

/// Evaluations above this magnitude are treated as a pole.
const BLOWUP: f64 = 1e12;

/// Log-spaced frequency grid with golden-section refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Width of the refined bracket in `log10 ω`.
    pub tol: f64,
}

impl Default for FreqGrid {
    /// `[1e-3, 1e3]` rad/s at 120 points per decade.
    fn default() -> Self {
        FreqGrid { lo: 1e-3, hi: 1e3, points: 721, tol: 1e-6 }
    }
}

impl FreqGrid {
    fn log_at(&self, i: usize) -> f64 {
        let (a, b) = (self.lo.log10(), self.hi.log10());
        if self.points <= 1 {
            return a;
        }
        a + (b - a) * i as f64 / (self.points - 1) as f64
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.points).map(|i| 10f64.powf(self.log_at(i))).collect()
    }

    /// Grid indices, sparse strides first, so large values show up early.
    fn scan_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.points];
        let mut order = Vec::with_capacity(self.points);
        let mut stride = self.points.next_power_of_two();
        while stride >= 1 {
            for i in (0..self.points).step_by(stride) {
                if !seen[i] {
                    seen[i] = true;
                    order.push(i);
                }
            }
            if self.points > 0 && !seen[self.points - 1] {
                seen[self.points - 1] = true;
                order.push(self.points - 1);
            }
            stride /= 2;
        }
        order
    }
}

/// Largest value of a scalar function of `ω` and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub omega: f64,
}

/// Golden-section maximization of `f` over `[a, b]`.
fn golden_max(f: &mut impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

fn checked(v: Option<f64>, omega: f64) -> Result<f64> {
    match v {
        Some(x) if x.is_finite() && x < BLOWUP => Ok(x),
        _ => Err(Error::PoleOnGrid { omega }),
    }
}

/// Grid scan of `σ̄(H(jω))` followed by refinement around the largest value.
pub fn linf_norm_with(grid: &FreqGrid, eval: impl Fn(f64) -> Option<CMatrix>) -> Result<NormEstimate> {
    let mut f = |t: f64| {
        let w = 10f64.powf(t);
        checked(eval(w).map(|m| sigma_max(&m)), w)
    };
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..grid.points {
        let v = f(grid.log_at(i))?;
        if v > best.1 {
            best = (i, v);
        }
    }
    refine(grid, best.0, best.1, &mut f)
}

fn refine(grid: &FreqGrid, i: usize, at_grid: f64, f: &mut impl FnMut(f64) -> Result<f64>) -> Result<NormEstimate> {
    let a = grid.log_at(i.saturating_sub(1));
    let b = grid.log_at((i + 1).min(grid.points.saturating_sub(1)));
    let (t, v) = if b > a { golden_max(f, a, b, grid.tol)? } else { (a, at_grid) };
    Ok(if v > at_grid {
        NormEstimate { value: v, omega: 10f64.powf(t) }
    } else {
        NormEstimate { value: at_grid, omega: 10f64.powf(grid.log_at(i)) }
    })
}

fn poly_at(p: &Poly, s: C64) -> C64 {
    p.coeffs().iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * s + rat_to_f64(c))
}

/// `H∞` estimate of a rational matrix over the grid.
pub fn linf_norm(h: &RatMatrix, grid: &FreqGrid) -> Result<NormEstimate> {
    linf_norm_with(grid, |w| {
        let s = C64::new(0.0, w);
        let m = CMatrix::from_fn(h.rows(), h.cols(), |i, j| poly_at(h[(i, j)].num(), s) / poly_at(h[(i, j)].den(), s));
        m.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(m)
    })
}

/// Open-loop network responses at one frequency.
struct Responses {
    yv: CMatrix,
    zu: CMatrix,
    zv: CMatrix,
}

fn responses(m: &NumericNds, w: f64) -> Option<Responses> {
    let n = m.a_xx.nrows();
    let s = C64::new(0.0, w);
    let lhs = CMatrix::identity(n, n) * s - complexify(&m.a_xx);
    let mv = m.a_xv.ncols();
    let mut rhs = CMatrix::zeros(n, mv + m.b_x.ncols());
    rhs.view_mut((0, 0), (n, mv)).copy_from(&complexify(&m.a_xv));
    rhs.view_mut((0, mv), (n, m.b_x.ncols())).copy_from(&complexify(&m.b_x));
    let sol = lhs.lu().solve(&rhs)?;
    let rv = sol.columns(0, mv).into_owned();
    let ru = sol.columns(mv, sol.ncols() - mv).into_owned();
    let azx = complexify(&m.a_zx);
    Some(Responses {
        yv: complexify(&m.c_x) * &rv + complexify(&m.c_v),
        zu: &azx * ru + complexify(&m.b_z),
        zv: azx * rv + complexify(&m.a_zv),
    })
}

/// `(I - Φ G_zv)⁻¹ Φ`.
fn loop_response(r: &Responses, phi: &CMatrix) -> Option<CMatrix> {
    let n = phi.nrows();
    (CMatrix::identity(n, n) - phi * &r.zv).try_inverse().map(|inv| inv * phi)
}

/// `σ̄(H(jω, Φ2) - H(jω, Φ1)) = σ̄(G_yv (X2 - X1) G_zu)`.
fn gap(r: &Responses, x1: &CMatrix, phi2: &CMatrix) -> Option<f64> {
    let x2 = loop_response(r, phi2)?;
    Some(sigma_max(&(&r.yv * (x2 - x1) * &r.zu)))
}

fn gap_at(m: &NumericNds, w: f64, phi1: &CMatrix, phi2: &CMatrix) -> Result<f64> {
    let v = responses(m, w).and_then(|r| {
        let x1 = loop_response(&r, phi1)?;
        gap(&r, &x1, phi2)
    });
    checked(v, w)
}

/// `‖H(·, Φ2) - H(·, Φ1)‖∞ / σ̄(Φ2 - Φ1)` for one pair; zero when `Φ1 = Φ2`.
pub fn pair_distance(m: &NumericNds, phi1: &DMatrix<f64>, phi2: &DMatrix<f64>, grid: &FreqGrid) -> Result<NormEstimate> {
    let dn = sigma_max_real(&(phi2 - phi1));
    if dn == 0.0 {
        return Ok(NormEstimate { value: 0.0, omega: grid.lo });
    }
    let (p1, p2) = (complexify(phi1), complexify(phi2));
    let n = linf_norm_with(grid, |w| {
        let r = responses(m, w)?;
        let x1 = loop_response(&r, &p1)?;
        let x2 = loop_response(&r, &p2)?;
        Some(&r.yv * (x2 - x1) * &r.zu)
    })?;
    Ok(NormEstimate { value: n.value / dn, omega: n.omega })
}

/// `(ω, σ̄(H(jω, Φ2) - H(jω, Φ1)))` over the grid, for plotting.
pub fn pair_response(m: &NumericNds, phi1: &DMatrix<f64>, phi2: &DMatrix<f64>, grid: &FreqGrid) -> Result<Vec<(f64, f64)>> {
    let (p1, p2) = (complexify(phi1), complexify(phi2));
    grid.omegas().into_iter().map(|w| Ok((w, gap_at(m, w, &p1, &p2)?))).collect()
}

/// Minimizing pair of a frequency-domain search.
#[derive(Debug, Clone)]
pub struct FreqEstimate {
    pub value: f64,
    pub omega: f64,
    pub phi1: DMatrix<f64>,
    pub phi2: DMatrix<f64>,
    pub d_scm: f64,
    pub outer: usize,
    pub inner: usize,
}

struct Cache<'a> {
    model: &'a NumericNds,
    grid: &'a FreqGrid,
    omegas: Vec<f64>,
    resp: Vec<Responses>,
    order: Vec<usize>,
}

impl Cache<'_> {
    /// Minimum over the inner samples of one outer sample.
    ///
    /// A pair is abandoned as soon as one grid value reaches the current
    /// minimum, since its supremum can only be larger.
    fn outer(&self, o: usize, n2: usize, seed: u64) -> Result<Option<FreqEstimate>> {
        let m = self.model;
        let phi1 = sample_scm(m, &mut stream(seed, OUTER, o as u64, 0), MAX_ATTEMPTS)?;
        let p1 = complexify(&phi1);
        let x1 = self
            .resp
            .iter()
            .zip(&self.omegas)
            .map(|(r, &w)| loop_response(r, &p1).ok_or(Error::PoleOnGrid { omega: w }))
            .collect::<Result<Vec<_>>>()?;
        let mut best: Option<FreqEstimate> = None;
        for inner in 0..n2 {
            let phi2 = sample_scm(m, &mut stream(seed, INNER, o as u64, inner as u64), MAX_ATTEMPTS)?;
            let dn = sigma_max_real(&(&phi2 - &phi1));
            if dn == 0.0 {
                continue;
            }
            let p2 = complexify(&phi2);
            let bound = best.as_ref().map_or(f64::INFINITY, |b| b.value * dn);
            let mut top = (0, f64::NEG_INFINITY);
            let mut beaten = false;
            for &i in &self.order {
                let v = checked(gap(&self.resp[i], &x1[i], &p2), self.omegas[i])?;
                if v > top.1 {
                    top = (i, v);
                }
                if v >= bound {
                    beaten = true;
                    break;
                }
            }
            if beaten {
                continue;
            }
            let mut f = |t: f64| gap_at(m, 10f64.powf(t), &p1, &p2);
            let est = refine(self.grid, top.0, top.1, &mut f)?;
            let value = est.value / dn;
            if best.as_ref().map_or(true, |b| value < b.value) {
                best = Some(FreqEstimate {
                    value,
                    omega: est.omega,
                    phi1: phi1.clone(),
                    phi2,
                    d_scm: dn,
                    outer: o,
                    inner,
                });
            }
        }
        Ok(best)
    }
}

/// Smallest normalized `H∞` gap over `n1` outer by `n2` inner sampled pairs.
///
/// Outer samples run in parallel; each keeps its own running minimum and the
/// results are reduced by value, then by outer index, so the answer does not
/// depend on the number of threads.
pub fn dsid_freq(m: &NumericNds, n1: usize, n2: usize, seed: u64, grid: &FreqGrid) -> Result<FreqEstimate> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParam("sample counts must be positive".into()));
    }
    if m.free.is_empty() {
        return Err(Error::InvalidParam("interconnection has no free entries".into()));
    }
    let omegas = grid.omegas();
    let resp = omegas
        .iter()
        .map(|&w| responses(m, w).ok_or(Error::PoleOnGrid { omega: w }))
        .collect::<Result<Vec<_>>>()?;
    let cache = Cache { model: m, grid, omegas, resp, order: grid.scan_order() };
    let per_outer = (0..n1).into_par_iter().map(|o| cache.outer(o, n2, seed)).collect::<Result<Vec<_>>>()?;
    per_outer
        .into_iter()
        .flatten()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.outer.cmp(&b.outer)))
        .ok_or_else(|| Error::Internal("every sampled pair coincided".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymat::Mat;
    use crate::ratpoly::{int, rat, RatFunc};

    fn scalar(num: &[i64], den: Vec<crate::ratpoly::Rat>) -> RatMatrix {
        Mat::from_rows(vec![vec![RatFunc::new(Poly::from_ints(num), Poly::new(den)).unwrap()]])
    }

    #[test]
    fn scan_order_covers_grid_once() {
        let g = FreqGrid::default();
        let mut o = g.scan_order();
        assert_eq!(o[0], 0);
        o.sort_unstable();
        assert_eq!(o, (0..721).collect::<Vec<_>>());
    }

    #[test]
    fn constant_and_first_order() {
        let g = FreqGrid::default();
        let c = RatMatrix::from_rows(vec![vec![RatFunc::constant(int(3)), RatFunc::constant(int(4))]]);
        assert!((linf_norm(&c, &g).unwrap().value - 5.0).abs() < 1e-12);
        let h = scalar(&[1], vec![int(1), int(1)]);
        let n = linf_norm(&h, &g).unwrap();
        assert!((n.value - 1.0).abs() < 1e-6 && n.omega < 2e-3);
    }

    #[test]
    fn resonance_matches_dense_scan() {
        let g = FreqGrid::default();
        let h = scalar(&[1], vec![int(1), rat(1, 10), int(1)]);
        let n = linf_norm(&h, &g).unwrap();
        let exact = 1.0 / (0.1 * (1.0f64 - 0.0025).sqrt());
        assert!((n.value - exact).abs() / exact < 1e-6, "{}", n.value);
        let dense = (0..1_000_000)
            .map(|i| {
                let w = 10f64.powf(-3.0 + 6.0 * i as f64 / 999_999.0);
                let s = C64::new(0.0, w);
                (s * s + s * 0.1 + 1.0).inv().norm()
            })
            .fold(0.0, f64::max);
        assert!((n.value - dense).abs() / dense < 1e-4);
    }

    #[test]
    fn pole_on_axis_is_reported() {
        let h = scalar(&[1], vec![int(1), int(0), int(1)]);
        let g = FreqGrid { lo: 0.1, hi: 10.0, points: 3, tol: 1e-6 };
        assert!(matches!(linf_norm(&h, &g), Err(Error::PoleOnGrid { .. })));
    }
}
