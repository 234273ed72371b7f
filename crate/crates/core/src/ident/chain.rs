//! Normal column rank of `G_yv` decided on constant matrices.
//!
//! The subsystem pencil `M(λ)` stacks the state, output and parameter-loop
//! equations so that `M` has full normal column rank iff `G_yv` does. Pinning
//! the output row to zero with a constant null basis `N` and bringing the state
//! rows to Kronecker form leaves only the `L` blocks, whose polynomial kernels
//! reduce the question to the constant data `PΘ - Π`.

use num_traits::One;

use crate::error::Result;
use crate::model::SubsystemLft;
use crate::pencil::{canonical_block, kcf, BlockKind, KroneckerForm, MatrixPencil};
use crate::polymat::{const_nullspace, normal_rank_poly, Mat, PolyMatrix, QMatrix};
use crate::ratpoly::{Poly, Rat};

/// Pencil `λG + H` with
/// `M(λ) = [λI - A, -A_xv, -H_x; C_x, C_v, H_y; P F_x, P F_v, P G - I]`
/// built from the nominal (open-loop) matrices.
pub fn pencil_m(s: &SubsystemLft) -> MatrixPencil {
    let n = &s.nominal;
    let d = s.dims();
    let mut g = QMatrix::zeros(d.m_x + d.m_y + d.m_p, d.m_x + d.m_v + d.m_p);
    g.set_block(0, 0, &QMatrix::identity(d.m_x));
    let pgi = s.p.mul(&s.g).sub(&QMatrix::identity(d.m_p));
    let h = Mat::block(&[
        vec![&n.a_xx.neg(), &n.a_xv.neg(), &s.h_x.neg()],
        vec![&n.c_x, &n.c_v, &s.h_y],
        vec![&s.p.mul(&s.f_x), &s.p.mul(&s.f_v), &pgi],
    ]);
    MatrixPencil { g, h }
}

/// Intermediate data of the chain for one subsystem.
#[derive(Debug, Clone)]
pub struct PencilChain {
    /// Null basis of `[C_x C_v H_y]`, split by `(x, v, r)`.
    pub n_x: QMatrix,
    pub n_v: QMatrix,
    pub n_w: QMatrix,
    /// `λN_x - (A N_x + A_xv N_v + H_x N_w)`.
    pub upper: MatrixPencil,
    /// `W = F_x N_x + F_v N_v + G N_w`.
    pub w: QMatrix,
    pub p: QMatrix,
    pub kcf: KroneckerForm,
    /// Sizes of the `L` blocks of `upper`, in block order.
    pub xi: Vec<usize>,
    /// `W` and `N_w` applied to the `L` columns of the transformation.
    pub theta: QMatrix,
    pub pi: QMatrix,
}

pub fn pencil_chain(s: &SubsystemLft) -> Result<PencilChain> {
    s.validate()?;
    let n = &s.nominal;
    let d = s.dims();
    let out = Mat::hcat(&[&n.c_x, &n.c_v, &s.h_y]);
    let basis = const_nullspace(&out);
    let k = basis.cols();
    let n_x = basis.sub_matrix(0, d.m_x, 0, k);
    let n_v = basis.sub_matrix(d.m_x, d.m_x + d.m_v, 0, k);
    let n_w = basis.sub_matrix(d.m_x + d.m_v, d.m_x + d.m_v + d.m_p, 0, k);
    let x = n.a_xx.mul(&n_x).add(&n.a_xv.mul(&n_v)).add(&s.h_x.mul(&n_w));
    let upper = MatrixPencil { g: n_x.clone(), h: x.neg() };
    let w = s.f_x.mul(&n_x).add(&s.f_v.mul(&n_v)).add(&s.g.mul(&n_w));
    let form = kcf(&upper)?;
    let xi = form.sizes(BlockKind::L);
    let m = form.l_columns();
    let head = form.v_inv.sub_matrix(0, k, 0, m);
    Ok(PencilChain {
        theta: w.mul(&head),
        pi: n_w.mul(&head),
        n_x,
        n_v,
        n_w,
        upper,
        w,
        p: s.p.clone(),
        kcf: form,
        xi,
    })
}

/// `[1, -λ, λ², …]ᵀ` of length `len`.
fn l_kernel(len: usize) -> PolyMatrix {
    Mat::from_fn(len, 1, |k, _| {
        let c = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        Poly::monomial(c, k)
    })
}

impl PencilChain {
    pub fn zeta_l(&self) -> usize {
        self.xi.len()
    }

    /// Constant lower rows `PΘ - Π`, one column group per `L` block.
    pub fn lower(&self) -> QMatrix {
        self.p.mul(&self.theta).sub(&self.pi)
    }

    fn groups(&self) -> Vec<(usize, usize)> {
        let mut off = 0;
        self.xi
            .iter()
            .map(|&x| {
                let g = (off, off + x + 1);
                off += x + 1;
                g
            })
            .collect()
    }

    /// `[diag(L_ξ); PΘ - Π]` as a polynomial matrix.
    pub fn mtilde(&self) -> PolyMatrix {
        let blocks: Vec<MatrixPencil> =
            self.xi.iter().map(|&x| canonical_block(BlockKind::L, x).expect("L blocks exist for every size")).collect();
        let diag = MatrixPencil::block_diag(&blocks.iter().collect::<Vec<_>>());
        diag.to_poly().vstack(&self.lower().to_poly())
    }

    /// `P Θ(λ) - Π(λ)`: the lower rows applied to the polynomial kernels of
    /// the `L` blocks, one column per block.
    pub fn reduced(&self) -> PolyMatrix {
        let lower = self.lower().to_poly();
        let cols: Vec<PolyMatrix> = self
            .groups()
            .iter()
            .map(|&(a, b)| lower.sub_matrix(0, lower.rows(), a, b).mul(&l_kernel(b - a)))
            .collect();
        if cols.is_empty() {
            return PolyMatrix::zeros(self.p.rows(), 0);
        }
        Mat::hcat(&cols.iter().collect::<Vec<_>>())
    }

    /// Full normal column rank of `G_yv`, decided by the reduced matrix.
    pub fn fncr(&self) -> bool {
        self.zeta_l() == 0 || normal_rank_poly(&self.reduced()) == self.zeta_l()
    }
}

/// Constant matrix whose full column rank is necessary for the chain to
/// certify full normal column rank: column `j` is `vec(PΘ_j - Π_j)`, with the
/// blocks zero-padded to the widest one.
pub fn gamma_matrix(c: &PencilChain) -> QMatrix {
    let lower = c.lower();
    let width = c.xi.iter().map(|x| x + 1).max().unwrap_or(0);
    let rows = lower.rows();
    let mut gamma = QMatrix::zeros(rows * width, c.zeta_l());
    for (j, (a, b)) in c.groups().into_iter().enumerate() {
        for col in a..b {
            for r in 0..rows {
                gamma[((col - a) * rows + r, j)] = lower[(r, col)].clone();
            }
        }
    }
    gamma
}

/// Whether `G_yv` of the subsystem has full normal column rank.
pub fn subsystem_fncr_by_chain(s: &SubsystemLft) -> Result<bool> {
    Ok(pencil_chain(s)?.fncr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::circuit::{circuit_subsystem, CircuitParams};
    use crate::polymat::{normal_rank, normal_rank_poly};
    use crate::ratpoly::{int, rat};

    fn circuit(k1: Rat) -> SubsystemLft {
        circuit_subsystem(&CircuitParams { t: int(1), k1, k2: rat(2, 5) }).unwrap()
    }

    #[test]
    fn pencil_rank_tracks_tfm_rank() {
        for k1 in [rat(2, 5), rat(1, 2)] {
            let s = circuit(k1);
            let d = s.dims();
            let t = s.realize().unwrap().tfms();
            let m = normal_rank_poly(&pencil_m(&s).to_poly());
            assert_eq!(m, d.m_x + d.m_p + normal_rank(&t.g_yv));
            let md = normal_rank_poly(&pencil_m(&s.dual()).to_poly());
            assert_eq!(md, d.m_x + d.m_g + normal_rank(&t.g_zu));
        }
    }

    #[test]
    fn chain_lower_is_kernel_image() {
        let s = circuit(rat(1, 2)).dual();
        let c = pencil_chain(&s).unwrap();
        assert!(!c.fncr());
        let mt = c.mtilde();
        assert_eq!(normal_rank_poly(&mt) < mt.cols(), !c.fncr());
        let g = gamma_matrix(&c);
        assert_eq!(g.cols(), c.zeta_l());
    }
}
