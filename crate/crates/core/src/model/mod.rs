//! Subsystems, interconnections and their transfer function matrices.
//!
//! A subsystem is given either directly by its realized matrices or as a
//! linear fractional transformation (LFT) of a nominal realization with a
//! parameter block `P` closed around the channels `w -> r`:
//!
//! ```text
//! x' = A_xx0 x + A_xv0 v + B_x0 u + H_x r
//! z  = A_zx0 x + A_zv0 v + B_z0 u + H_z r
//! y  = C_x0  x + C_v0  v + D_u0 u + H_y r
//! w  = F_x   x + F_v   v + F_u  u + G   r,    r = P w
//! ```
//!
//! Subsystems are joined through `v = Φ z`.

pub mod circuit;
mod resolvent;

pub use resolvent::{resolvent, transfer, Resolvent};

use crate::error::{Error, Result};
use crate::polymat::{rat_inverse, Mat, QMatrix, RatMatrix};
use crate::ratpoly::RatFunc;

/// Channel dimensions of one subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Dims {
    pub m_x: usize,
    pub m_v: usize,
    pub m_u: usize,
    pub m_y: usize,
    pub m_z: usize,
    pub m_g: usize,
    pub m_p: usize,
}

/// Realized subsystem matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemRealized {
    pub a_xx: QMatrix,
    pub a_xv: QMatrix,
    pub b_x: QMatrix,
    pub a_zx: QMatrix,
    pub a_zv: QMatrix,
    pub b_z: QMatrix,
    pub c_x: QMatrix,
    pub c_v: QMatrix,
    pub d_u: QMatrix,
}

/// Subsystem in LFT form.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemLft {
    pub nominal: SubsystemRealized,
    pub h_x: QMatrix,
    pub h_z: QMatrix,
    pub h_y: QMatrix,
    pub f_x: QMatrix,
    pub f_v: QMatrix,
    pub f_u: QMatrix,
    pub g: QMatrix,
    pub p: QMatrix,
}

/// Interconnection matrix with an optional structural zero pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Scm {
    pub phi: QMatrix,
    /// `true` where the entry is a free parameter; `None` means all free.
    pub free: Option<Mat<bool>>,
}

/// Networked system: subsystems joined by `v = Φ z`.
#[derive(Debug, Clone, PartialEq)]
pub struct NdsModel {
    pub subsystems: Vec<SubsystemLft>,
    pub scm: Scm,
}

/// Transfer function matrices from `(v, u)` to `(z, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfmBundle {
    pub g_yu: RatMatrix,
    pub g_yv: RatMatrix,
    pub g_zu: RatMatrix,
    pub g_zv: RatMatrix,
}

/// Transfer function matrices of the open LFT, from `(r, v, u)` to `(w, z, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedTfms {
    pub wr: RatMatrix,
    pub wv: RatMatrix,
    pub wu: RatMatrix,
    pub zr: RatMatrix,
    pub zv: RatMatrix,
    pub zu: RatMatrix,
    pub yr: RatMatrix,
    pub yv: RatMatrix,
    pub yu: RatMatrix,
}

/// State-space realization `(A, B, C, D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub a: QMatrix,
    pub b: QMatrix,
    pub c: QMatrix,
    pub d: QMatrix,
}

fn expect_shape(name: &str, m: &QMatrix, r: usize, c: usize) -> Result<()> {
    if m.shape() != (r, c) {
        return Err(Error::ShapeMismatch(format!(
            "{name}: expected {r}x{c}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl SubsystemRealized {
    pub fn dims(&self) -> Dims {
        Dims {
            m_x: self.a_xx.rows(),
            m_v: self.a_xv.cols(),
            m_u: self.b_x.cols(),
            m_y: self.c_x.rows(),
            m_z: self.a_zx.rows(),
            m_g: 0,
            m_p: 0,
        }
    }

    /// All-zero matrices of the given dimensions.
    pub fn zeros(d: Dims) -> Self {
        SubsystemRealized {
            a_xx: QMatrix::zeros(d.m_x, d.m_x),
            a_xv: QMatrix::zeros(d.m_x, d.m_v),
            b_x: QMatrix::zeros(d.m_x, d.m_u),
            a_zx: QMatrix::zeros(d.m_z, d.m_x),
            a_zv: QMatrix::zeros(d.m_z, d.m_v),
            b_z: QMatrix::zeros(d.m_z, d.m_u),
            c_x: QMatrix::zeros(d.m_y, d.m_x),
            c_v: QMatrix::zeros(d.m_y, d.m_v),
            d_u: QMatrix::zeros(d.m_y, d.m_u),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dims();
        expect_shape("A_xx", &self.a_xx, d.m_x, d.m_x)?;
        expect_shape("A_xv", &self.a_xv, d.m_x, d.m_v)?;
        expect_shape("B_x", &self.b_x, d.m_x, d.m_u)?;
        expect_shape("A_zx", &self.a_zx, d.m_z, d.m_x)?;
        expect_shape("A_zv", &self.a_zv, d.m_z, d.m_v)?;
        expect_shape("B_z", &self.b_z, d.m_z, d.m_u)?;
        expect_shape("C_x", &self.c_x, d.m_y, d.m_x)?;
        expect_shape("C_v", &self.c_v, d.m_y, d.m_v)?;
        expect_shape("D_u", &self.d_u, d.m_y, d.m_u)
    }

    /// LFT with an empty parameter block.
    pub fn into_lft(self) -> SubsystemLft {
        let d = self.dims();
        SubsystemLft {
            h_x: QMatrix::zeros(d.m_x, 0),
            h_z: QMatrix::zeros(d.m_z, 0),
            h_y: QMatrix::zeros(d.m_y, 0),
            f_x: QMatrix::zeros(0, d.m_x),
            f_v: QMatrix::zeros(0, d.m_v),
            f_u: QMatrix::zeros(0, d.m_u),
            g: QMatrix::zeros(0, 0),
            p: QMatrix::zeros(0, 0),
            nominal: self,
        }
    }

    /// Transfer function matrices via the exact resolvent.
    pub fn tfms(&self) -> TfmBundle {
        let r = resolvent(&self.a_xx);
        TfmBundle {
            g_yu: transfer(&r, &self.c_x, &self.b_x, &self.d_u),
            g_yv: transfer(&r, &self.c_x, &self.a_xv, &self.c_v),
            g_zu: transfer(&r, &self.a_zx, &self.b_x, &self.b_z),
            g_zv: transfer(&r, &self.a_zx, &self.a_xv, &self.a_zv),
        }
    }
}

impl SubsystemLft {
    pub fn dims(&self) -> Dims {
        Dims { m_g: self.p.cols(), m_p: self.p.rows(), ..self.nominal.dims() }
    }

    pub fn validate(&self) -> Result<()> {
        self.nominal.validate()?;
        let d = self.dims();
        expect_shape("H_x", &self.h_x, d.m_x, d.m_p)?;
        expect_shape("H_z", &self.h_z, d.m_z, d.m_p)?;
        expect_shape("H_y", &self.h_y, d.m_y, d.m_p)?;
        expect_shape("F_x", &self.f_x, d.m_g, d.m_x)?;
        expect_shape("F_v", &self.f_v, d.m_g, d.m_v)?;
        expect_shape("F_u", &self.f_u, d.m_g, d.m_u)?;
        expect_shape("G", &self.g, d.m_g, d.m_p)?;
        expect_shape("P", &self.p, d.m_p, d.m_g)
    }

    /// `P (I - G P)⁻¹`, failing when the loop `r = P w` is not well-posed.
    fn loop_gain(&self, index: usize) -> Result<QMatrix> {
        let m_g = self.p.cols();
        let inner = QMatrix::identity(m_g).sub(&self.g.mul(&self.p));
        let inv = inner.inverse().map_err(|_| Error::IllPosedSubsystem { index })?;
        Ok(self.p.mul(&inv))
    }

    /// Closes the parameter loop.
    pub fn realize(&self) -> Result<SubsystemRealized> {
        self.realize_indexed(0)
    }

    pub(crate) fn realize_indexed(&self, index: usize) -> Result<SubsystemRealized> {
        self.validate()?;
        let k = self.loop_gain(index)?;
        let n = &self.nominal;
        let close = |base: &QMatrix, left: &QMatrix, right: &QMatrix| base.add(&left.mul(&k).mul(right));
        Ok(SubsystemRealized {
            a_xx: close(&n.a_xx, &self.h_x, &self.f_x),
            a_xv: close(&n.a_xv, &self.h_x, &self.f_v),
            b_x: close(&n.b_x, &self.h_x, &self.f_u),
            a_zx: close(&n.a_zx, &self.h_z, &self.f_x),
            a_zv: close(&n.a_zv, &self.h_z, &self.f_v),
            b_z: close(&n.b_z, &self.h_z, &self.f_u),
            c_x: close(&n.c_x, &self.h_y, &self.f_x),
            c_v: close(&n.c_v, &self.h_y, &self.f_v),
            d_u: close(&n.d_u, &self.h_y, &self.f_u),
        })
    }

    /// Open-loop transfer matrices of the nominal part with `r` as an extra input.
    pub fn augmented_tfms(&self) -> AugmentedTfms {
        let n = &self.nominal;
        let r = resolvent(&n.a_xx);
        let t = |c: &QMatrix, b: &QMatrix, d: &QMatrix| transfer(&r, c, b, d);
        AugmentedTfms {
            wr: t(&self.f_x, &self.h_x, &self.g),
            wv: t(&self.f_x, &n.a_xv, &self.f_v),
            wu: t(&self.f_x, &n.b_x, &self.f_u),
            zr: t(&n.a_zx, &self.h_x, &self.h_z),
            zv: t(&n.a_zx, &n.a_xv, &n.a_zv),
            zu: t(&n.a_zx, &n.b_x, &n.b_z),
            yr: t(&n.c_x, &self.h_x, &self.h_y),
            yv: t(&n.c_x, &n.a_xv, &n.c_v),
            yu: t(&n.c_x, &n.b_x, &n.d_u),
        }
    }

    /// Transfer matrices through the closed parameter loop, computed on the
    /// open LFT rather than on the realization.
    pub fn lft_tfms(&self) -> Result<TfmBundle> {
        self.validate()?;
        let h = self.augmented_tfms();
        let p = self.p.to_ratfunc();
        let inner = RatMatrix::identity(self.p.cols()).sub(&h.wr.mul(&p));
        let k = p.mul(&rat_inverse(&inner).map_err(|_| Error::IllPosedSubsystem { index: 0 })?);
        let close = |base: &RatMatrix, left: &RatMatrix, right: &RatMatrix| base.add(&left.mul(&k).mul(right));
        Ok(TfmBundle {
            g_yu: close(&h.yu, &h.yr, &h.wu),
            g_yv: close(&h.yv, &h.yr, &h.wv),
            g_zu: close(&h.zu, &h.zr, &h.wu),
            g_zv: close(&h.zv, &h.zr, &h.wv),
        })
    }

    /// Transposed subsystem whose `G_yv` is `G_zuᵀ` of the original.
    ///
    /// Inputs `(r, v, u)` and outputs `(w, z, y)` swap roles and the parameter
    /// block becomes `Pᵀ`.
    pub fn dual(&self) -> SubsystemLft {
        let n = &self.nominal;
        let t = |m: &QMatrix| m.transpose();
        SubsystemLft {
            nominal: SubsystemRealized {
                a_xx: t(&n.a_xx),
                a_xv: t(&n.a_zx),
                b_x: t(&n.c_x),
                a_zx: t(&n.a_xv),
                a_zv: t(&n.a_zv),
                b_z: t(&n.c_v),
                c_x: t(&n.b_x),
                c_v: t(&n.b_z),
                d_u: t(&n.d_u),
            },
            h_x: t(&self.f_x),
            h_z: t(&self.f_v),
            h_y: t(&self.f_u),
            f_x: t(&self.h_x),
            f_v: t(&self.h_z),
            f_u: t(&self.h_y),
            g: t(&self.g),
            p: t(&self.p),
        }
    }
}

impl From<SubsystemRealized> for SubsystemLft {
    fn from(s: SubsystemRealized) -> Self {
        s.into_lft()
    }
}

impl Scm {
    pub fn new(phi: QMatrix) -> Self {
        Scm { phi, free: None }
    }

    pub fn is_free(&self, i: usize, j: usize) -> bool {
        self.free.as_ref().map_or(true, |f| f[(i, j)])
    }
}

/// Offsets of consecutive blocks with the given sizes.
pub fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

impl NdsModel {
    pub fn new(subsystems: Vec<SubsystemLft>, scm: Scm) -> Result<Self> {
        let m = NdsModel { subsystems, scm };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.subsystems.iter().enumerate() {
            s.validate()
                .map_err(|e| Error::ShapeMismatch(format!("subsystem {i}: {e}")))?;
        }
        let (mv, mz) = (self.total(|d| d.m_v), self.total(|d| d.m_z));
        expect_shape("Phi", &self.scm.phi, mv, mz)?;
        if let Some(f) = &self.scm.free {
            if f.shape() != (mv, mz) {
                return Err(Error::ShapeMismatch("Phi pattern".into()));
            }
            for i in 0..mv {
                for j in 0..mz {
                    if !f[(i, j)] && !num_traits::Zero::is_zero(&self.scm.phi[(i, j)]) {
                        return Err(Error::ShapeMismatch(format!(
                            "Phi({i},{j}) is nonzero but marked structurally zero"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<Dims> {
        self.subsystems.iter().map(|s| s.dims()).collect()
    }

    fn total(&self, f: impl Fn(&Dims) -> usize) -> usize {
        self.subsystems.iter().map(|s| f(&s.dims())).sum()
    }

    /// Row offsets of the `v` blocks of `Φ`.
    pub fn v_offsets(&self) -> Vec<usize> {
        offsets(&self.dims().iter().map(|d| d.m_v).collect::<Vec<_>>())
    }

    /// Column offsets of the `z` blocks of `Φ`.
    pub fn z_offsets(&self) -> Vec<usize> {
        offsets(&self.dims().iter().map(|d| d.m_z).collect::<Vec<_>>())
    }

    pub fn realize(&self) -> Result<Vec<SubsystemRealized>> {
        self.subsystems.iter().enumerate().map(|(i, s)| s.realize_indexed(i)).collect()
    }

    /// Block-diagonal network realization.
    pub fn network(&self) -> Result<SubsystemRealized> {
        let parts = self.realize()?;
        let bd = |f: &dyn Fn(&SubsystemRealized) -> &QMatrix| {
            Mat::block_diag(&parts.iter().map(f).collect::<Vec<_>>())
        };
        Ok(SubsystemRealized {
            a_xx: bd(&|s| &s.a_xx),
            a_xv: bd(&|s| &s.a_xv),
            b_x: bd(&|s| &s.b_x),
            a_zx: bd(&|s| &s.a_zx),
            a_zv: bd(&|s| &s.a_zv),
            b_z: bd(&|s| &s.b_z),
            c_x: bd(&|s| &s.c_x),
            c_v: bd(&|s| &s.c_v),
            d_u: bd(&|s| &s.d_u),
        })
    }

    /// Per-subsystem transfer matrices of the realized subsystems.
    pub fn subsystem_tfms(&self) -> Result<Vec<TfmBundle>> {
        Ok(self.realize()?.iter().map(|s| s.tfms()).collect())
    }

    /// Block-diagonal network transfer matrices.
    pub fn network_tfms(&self) -> Result<TfmBundle> {
        Ok(block_diag_tfms(&self.subsystem_tfms()?))
    }

    /// Whether `I - Φ A_zv` is invertible for the given `Φ`.
    pub fn well_posed(&self, phi: &QMatrix) -> Result<bool> {
        let net = self.network()?;
        let m = QMatrix::identity(phi.rows()).sub(&phi.mul(&net.a_zv));
        Ok(m.rank() == m.rows())
    }

    /// Closed-loop realization for the interconnection `phi`.
    pub fn closed_loop(&self, phi: &QMatrix) -> Result<Realization> {
        let n = self.network()?;
        let inner = QMatrix::identity(n.a_zv.rows()).sub(&n.a_zv.mul(phi));
        let lam = phi.mul(&inner.inverse().map_err(|_| Error::IllPosedNds)?);
        Ok(Realization {
            a: n.a_xx.add(&n.a_xv.mul(&lam).mul(&n.a_zx)),
            b: n.b_x.add(&n.a_xv.mul(&lam).mul(&n.b_z)),
            c: n.c_x.add(&n.c_v.mul(&lam).mul(&n.a_zx)),
            d: n.d_u.add(&n.c_v.mul(&lam).mul(&n.b_z)),
        })
    }
}

/// Block-diagonal stacking of subsystem bundles.
pub fn block_diag_tfms(parts: &[TfmBundle]) -> TfmBundle {
    let bd = |f: &dyn Fn(&TfmBundle) -> &RatMatrix| Mat::block_diag(&parts.iter().map(f).collect::<Vec<_>>());
    TfmBundle {
        g_yu: bd(&|t| &t.g_yu),
        g_yv: bd(&|t| &t.g_yv),
        g_zu: bd(&|t| &t.g_zu),
        g_zv: bd(&|t| &t.g_zv),
    }
}

/// `H(λ, Φ) = G_yu + G_yv Φ (I - G_zv Φ)⁻¹ G_zu` from network transfer matrices.
pub fn nds_tfm_from(t: &TfmBundle, phi: &QMatrix) -> Result<RatMatrix> {
    let phi = phi.to_ratfunc();
    let inner = RatMatrix::identity(t.g_zv.rows()).sub(&t.g_zv.mul(&phi));
    let inv = rat_inverse(&inner).map_err(|_| Error::IllPosedNds)?;
    Ok(t.g_yu.add(&t.g_yv.mul(&phi).mul(&inv).mul(&t.g_zu)))
}

/// Input-output transfer matrix of the whole network for `phi`.
pub fn nds_tfm(model: &NdsModel, phi: &QMatrix) -> Result<RatMatrix> {
    if !model.well_posed(phi)? {
        return Err(Error::IllPosedNds);
    }
    nds_tfm_from(&model.network_tfms()?, phi)
}

/// `(C_x + G_yv Φ (I - G_zv Φ)⁻¹ A_zx)(λI - A_xx)⁻¹`: response of `y` to the
/// initial state.
pub fn free_response_tfm(model: &NdsModel, phi: &QMatrix) -> Result<RatMatrix> {
    if !model.well_posed(phi)? {
        return Err(Error::IllPosedNds);
    }
    let net = model.network()?;
    let t = model.network_tfms()?;
    let ph = phi.to_ratfunc();
    let inner = RatMatrix::identity(t.g_zv.rows()).sub(&t.g_zv.mul(&ph));
    let inv = rat_inverse(&inner).map_err(|_| Error::IllPosedNds)?;
    let left = net.c_x.to_ratfunc().add(&t.g_yv.mul(&ph).mul(&inv).mul(&net.a_zx.to_ratfunc()));
    let r = resolvent(&net.a_xx);
    Ok(left.mul(&r.inverse_matrix()))
}

/// Entry-wise value of a constant rational matrix as rational functions.
pub fn constant(m: &QMatrix) -> RatMatrix {
    m.map(|x| RatFunc::constant(x.clone()))
}
