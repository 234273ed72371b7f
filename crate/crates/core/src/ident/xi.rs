//! Coefficient stacks of `V Δ U ≡ 0` and the pairwise tests built on them.

use num_traits::Zero;

use super::{IdentVerdict, Method, PairCheck, Status, Witness};
use crate::error::{Error, Result};
use crate::model::{nds_tfm_from, NdsModel, TfmBundle};
use crate::polymat::{is_fncr, is_fnrr, smith_mcmillan, Mat, PolyMatrix, QMatrix, RatMatrix, SmithMcMillanForm};
use crate::ratpoly::Rat;

/// Matrix `Ξ` with `vec(V(λ) Δ U(λ)) = Σ_k λ^k Ξ_k vec(Δ)`, stacked over `k`.
///
/// `v` is `r × a` and `u` is `b × s`; `Ξ` has `(d_u + d_v + 1)·r·s` rows and
/// `a·b` columns, with `vec` taken column-major.
pub fn xi_matrix(v: &PolyMatrix, u: &PolyMatrix) -> QMatrix {
    let (r, a) = v.shape();
    let (b, s) = u.shape();
    let dv = v.degree().finite().unwrap_or(0);
    let du = u.degree().finite().unwrap_or(0);
    let vk: Vec<QMatrix> = (0..=dv).map(|k| v.coeff_matrix(k)).collect();
    let uk: Vec<QMatrix> = (0..=du).map(|k| u.coeff_matrix(k).transpose()).collect();
    let block_rows = r * s;
    let mut xi = QMatrix::zeros((du + dv + 1) * block_rows, a * b);
    for k in 0..=du + dv {
        let mut acc = QMatrix::zeros(block_rows, a * b);
        for (sv, vm) in vk.iter().enumerate() {
            if sv > k || k - sv > du || vm.is_zero() {
                continue;
            }
            let um = &uk[k - sv];
            if um.is_zero() {
                continue;
            }
            acc = acc.add(&um.kron(vm));
        }
        xi.set_block(k * block_rows, 0, &acc);
    }
    xi
}

/// Column indices of `vec(Δ)` that are free in block `(i, j)` of `Φ`.
fn free_columns(model: &NdsModel, i: usize, j: usize) -> Vec<usize> {
    let (vo, zo) = (model.v_offsets(), model.z_offsets());
    let rows = vo[i + 1] - vo[i];
    let cols = zo[j + 1] - zo[j];
    (0..rows * cols)
        .filter(|c| model.scm.is_free(vo[i] + c % rows, zo[j] + c / rows))
        .collect()
}

/// Rank test of `Ξ` for block `(i, j)`, with a null vector when it fails.
fn pair_test(model: &NdsModel, i: usize, j: usize, v: &PolyMatrix, u: &PolyMatrix) -> (PairCheck, Option<QMatrix>) {
    let xi = xi_matrix(v, u);
    let free = free_columns(model, i, j);
    let reduced = xi.select_cols(&free);
    let rank = reduced.rank();
    let check = PairCheck { i, j, rows: xi.rows(), cols: xi.cols(), free_cols: free.len(), rank, fcr: rank == free.len() };
    if check.fcr {
        return (check, None);
    }
    let null = reduced.nullspace();
    let mut full = vec![Rat::zero(); xi.cols()];
    for (k, &c) in free.iter().enumerate() {
        full[c] = null[(k, 0)].clone();
    }
    let (a, b) = (v.cols(), u.rows());
    (check, Some(QMatrix::unvec(&full, a, b)))
}

/// Embeds `delta` as block `(i, j)` of a zero matrix shaped like `Φ`.
fn embed(model: &NdsModel, i: usize, j: usize, delta: &QMatrix) -> QMatrix {
    let mut e = QMatrix::zeros(model.scm.phi.rows(), model.scm.phi.cols());
    e.set_block(model.v_offsets()[i], model.z_offsets()[j], delta);
    e
}

/// Builds a verified witness: two well-posed interconnections differing by a
/// multiple of `delta` in block `(i, j)` with identical input-output maps.
pub(crate) fn build_witness(
    model: &NdsModel,
    tfms: &TfmBundle,
    i: usize,
    j: usize,
    delta: &QMatrix,
) -> Result<Witness> {
    let base = if model.well_posed(&model.scm.phi)? {
        model.scm.phi.clone()
    } else {
        QMatrix::zeros(model.scm.phi.rows(), model.scm.phi.cols())
    };
    let h1 = nds_tfm_from(tfms, &base)?;
    for n in 1..=64i64 {
        let scaled = delta.scale(&Rat::new(1.into(), n.into()));
        let phi2 = base.add(&embed(model, i, j, &scaled));
        if !model.well_posed(&phi2)? {
            continue;
        }
        let h2 = nds_tfm_from(tfms, &phi2)?;
        if h1 != h2 {
            return Err(Error::Internal(format!("witness for block ({i},{j}) changes the input-output map")));
        }
        return Ok(Witness { i, j, delta: scaled, phi1: base, phi2 });
    }
    Err(Error::Internal("no well-posed scaling of the witness found".into()))
}

fn sm_all(parts: &[RatMatrix]) -> Vec<SmithMcMillanForm> {
    parts.iter().map(smith_mcmillan).collect()
}

fn pairwise(
    model: &NdsModel,
    tfms: &TfmBundle,
    left: &[SmithMcMillanForm],
    right: &[SmithMcMillanForm],
    method: Method,
) -> Result<IdentVerdict> {
    let mut pairs = Vec::new();
    let mut witness = None;
    let mut notes = Vec::new();
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            let (check, null) = pair_test(model, i, j, &l.v_head(), &r.u_head());
            if let (Some(delta), None) = (null, &witness) {
                notes.push(format!("block ({i},{j}) of Phi: coefficient stack rank {} < {}", check.rank, check.free_cols));
                witness = Some(build_witness(model, tfms, i, j, &delta)?);
            }
            pairs.push(check);
        }
    }
    let status = if witness.is_some() { Status::Unidentifiable } else { Status::Identifiable };
    Ok(IdentVerdict { status, method, subsystems: Vec::new(), pairs, witness, notes })
}

/// Exact test for networks whose internal transfer `G_zv` vanishes: the
/// structure is identifiable iff every coefficient stack built from the
/// Smith-McMillan forms of `G_yv(i)` and `G_zu(j)` has full column rank.
pub fn check_coefficient_stack(model: &NdsModel) -> Result<IdentVerdict> {
    let subs = model.subsystem_tfms()?;
    if let Some(i) = subs.iter().position(|t| !t.g_zv.is_zero()) {
        return Err(Error::PreconditionViolated(format!("G_zv of subsystem {i} is not identically zero")));
    }
    let tfms = crate::model::block_diag_tfms(&subs);
    let yv = sm_all(&subs.iter().map(|t| t.g_yv.clone()).collect::<Vec<_>>());
    let zu = sm_all(&subs.iter().map(|t| t.g_zu.clone()).collect::<Vec<_>>());
    pairwise(model, &tfms, &yv, &zu, Method::CoefficientStack)
}

/// Factorization `G_yv = Ḡ_yv G_zv`, `G_zu = G_zv Ḡ_zu` at network level.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub gbar_yv: RatMatrix,
    pub gbar_zu: RatMatrix,
}

/// Exact test given a factorization through `G_zv` with `Ḡ_yv` of full normal
/// column rank and `Ḡ_zu` of full normal row rank: the coefficient stacks are
/// built from `G_zv(i)` and `G_zv(j)`.
pub fn check_factored(model: &NdsModel, f: &Factorization) -> Result<IdentVerdict> {
    let subs = model.subsystem_tfms()?;
    let tfms = crate::model::block_diag_tfms(&subs);
    let shape_ok = f.gbar_yv.shape() == (tfms.g_yv.rows(), tfms.g_zv.rows())
        && f.gbar_zu.shape() == (tfms.g_zv.cols(), tfms.g_zu.cols());
    if !shape_ok {
        return Err(Error::FactorizationInvalid("factor shapes do not match the network".into()));
    }
    if f.gbar_yv.mul(&tfms.g_zv) != tfms.g_yv {
        return Err(Error::FactorizationInvalid("G_yv != Gbar_yv G_zv".into()));
    }
    if tfms.g_zv.mul(&f.gbar_zu) != tfms.g_zu {
        return Err(Error::FactorizationInvalid("G_zu != G_zv Gbar_zu".into()));
    }
    if !is_fncr(&f.gbar_yv) {
        return Err(Error::FactorizationInvalid("Gbar_yv lacks full normal column rank".into()));
    }
    if !is_fnrr(&f.gbar_zu) {
        return Err(Error::FactorizationInvalid("Gbar_zu lacks full normal row rank".into()));
    }
    let zv = sm_all(&subs.iter().map(|t| t.g_zv.clone()).collect::<Vec<_>>());
    pairwise(model, &tfms, &zv, &zv, Method::Factored)
}

/// Network-level factorization from per-subsystem constant factors
/// `G_yv(i) = S_i G_zv(i)` and `G_zu(i) = G_zv(i) R_i`.
pub fn block_factorization(s: &[QMatrix], r: &[QMatrix]) -> Factorization {
    let s: Vec<RatMatrix> = s.iter().map(|m| m.to_ratfunc()).collect();
    let r: Vec<RatMatrix> = r.iter().map(|m| m.to_ratfunc()).collect();
    Factorization {
        gbar_yv: Mat::block_diag(&s.iter().collect::<Vec<_>>()),
        gbar_zu: Mat::block_diag(&r.iter().collect::<Vec<_>>()),
    }
}

/// Whether a witness is exact: both interconnections well-posed, differing
/// only in block `(i, j)` and giving the same input-output map.
pub fn verify_witness(model: &NdsModel, w: &Witness) -> Result<bool> {
    if w.delta.is_zero() || !model.well_posed(&w.phi1)? || !model.well_posed(&w.phi2)? {
        return Ok(false);
    }
    if w.phi2.sub(&w.phi1) != embed(model, w.i, w.j, &w.delta) {
        return Ok(false);
    }
    let t = model.network_tfms()?;
    Ok(nds_tfm_from(&t, &w.phi1)? == nds_tfm_from(&t, &w.phi2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::Poly;

    #[test]
    fn xi_matches_direct_product() {
        let p = |c: &[i64]| Poly::from_ints(c);
        let v = Mat::from_rows(vec![vec![p(&[1, 1]), p(&[0, 2])]]);
        let u = Mat::from_rows(vec![vec![p(&[3]), p(&[1, 0, 1])], vec![p(&[0, 1]), p(&[2])]]);
        let delta = QMatrix::from_ints(&[&[1, -2], &[3, 5]]);
        let xi = xi_matrix(&v, &u);
        let prod = v.mul(&delta.to_poly()).mul(&u);
        let stacked = xi.mul(&QMatrix::from_col(&delta.vec()));
        let deg = 3;
        assert_eq!(xi.rows(), (deg + 1) * 2);
        for k in 0..=deg {
            let ck = prod.coeff_matrix(k).vec();
            for (t, c) in ck.iter().enumerate() {
                assert_eq!(&stacked[(k * 2 + t, 0)], c);
            }
        }
    }
}
