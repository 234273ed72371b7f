//! Matrix pencils `λG + H` and their Kronecker canonical form.

mod kcf;
pub mod subspace;

pub use kcf::{kcf, solve_gen_sylvester};

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polymat::{Mat, PolyMatrix, QMatrix};
use crate::ratpoly::{Poly, Rat};

/// The pencil `λG + H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPencil {
    pub g: QMatrix,
    pub h: QMatrix,
}

impl MatrixPencil {
    pub fn new(g: QMatrix, h: QMatrix) -> Result<Self> {
        if g.shape() != h.shape() {
            return Err(Error::ShapeMismatch(format!(
                "pencil parts {:?} and {:?}",
                g.shape(),
                h.shape()
            )));
        }
        Ok(MatrixPencil { g, h })
    }

    pub fn rows(&self) -> usize {
        self.g.rows()
    }

    pub fn cols(&self) -> usize {
        self.g.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.g.shape()
    }

    pub fn eval(&self, x: &Rat) -> QMatrix {
        self.g.scale(x).add(&self.h)
    }

    pub fn to_poly(&self) -> PolyMatrix {
        Mat::from_fn(self.rows(), self.cols(), |i, j| {
            Poly::new(vec![self.h[(i, j)].clone(), self.g[(i, j)].clone()])
        })
    }

    pub fn transpose(&self) -> Self {
        MatrixPencil { g: self.g.transpose(), h: self.h.transpose() }
    }

    /// `A · (λG + H) · B`.
    pub fn transform(&self, a: &QMatrix, b: &QMatrix) -> Self {
        MatrixPencil { g: a.mul(&self.g).mul(b), h: a.mul(&self.h).mul(b) }
    }

    pub fn sub_pencil(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        MatrixPencil { g: self.g.sub_matrix(r0, r1, c0, c1), h: self.h.sub_matrix(r0, r1, c0, c1) }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        MatrixPencil { g: self.g.vstack(&other.g), h: self.h.vstack(&other.h) }
    }

    pub fn block_diag(parts: &[&MatrixPencil]) -> Self {
        let g: Vec<&QMatrix> = parts.iter().map(|p| &p.g).collect();
        let h: Vec<&QMatrix> = parts.iter().map(|p| &p.h).collect();
        MatrixPencil { g: Mat::block_diag(&g), h: Mat::block_diag(&h) }
    }
}

/// Kinds of Kronecker blocks.
///
/// `H`: regular with only nonzero finite eigenvalues. `K`: Jordan block at
/// zero. `N`: nilpotent block at infinity. `L`, `J`: right and left singular
/// blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    L,
    H,
    K,
    N,
    J,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockKind::H => "H",
            BlockKind::K => "K",
            BlockKind::N => "N",
            BlockKind::L => "L",
            BlockKind::J => "J",
        };
        f.write_str(s)
    }
}

/// One diagonal block of a Kronecker form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerBlock {
    pub kind: BlockKind,
    /// `m` in `K_m`, `N_m`, `L_m`, `J_m`; the dimension for `H`.
    pub size: usize,
    pub pencil: MatrixPencil,
}

/// `λG + H = U · diag(blocks) · V` with blocks ordered L, H, K, N, J.
#[derive(Debug, Clone)]
pub struct KroneckerForm {
    pub u: QMatrix,
    pub v: QMatrix,
    pub v_inv: QMatrix,
    pub blocks: Vec<KroneckerBlock>,
}

/// Block multiset; invariant under strict equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockInventory {
    pub h: usize,
    pub k: Vec<usize>,
    pub n: Vec<usize>,
    pub l: Vec<usize>,
    pub j: Vec<usize>,
}

impl KroneckerForm {
    pub fn canonical(&self) -> MatrixPencil {
        let parts: Vec<&MatrixPencil> = self.blocks.iter().map(|b| &b.pencil).collect();
        MatrixPencil::block_diag(&parts)
    }

    /// `U · diag(blocks) · V`.
    pub fn reassemble(&self) -> MatrixPencil {
        self.canonical().transform(&self.u, &self.v)
    }

    pub fn sizes(&self, kind: BlockKind) -> Vec<usize> {
        self.blocks.iter().filter(|b| b.kind == kind).map(|b| b.size).collect()
    }

    /// Number of `L` blocks.
    pub fn zeta_l(&self) -> usize {
        self.sizes(BlockKind::L).len()
    }

    /// Number of columns occupied by the `L` blocks.
    pub fn l_columns(&self) -> usize {
        self.sizes(BlockKind::L).iter().map(|s| s + 1).sum()
    }

    pub fn inventory(&self) -> BlockInventory {
        let sorted = |k| {
            let mut v = self.sizes(k);
            v.sort_unstable();
            v
        };
        BlockInventory {
            h: self.sizes(BlockKind::H).iter().sum(),
            k: sorted(BlockKind::K),
            n: sorted(BlockKind::N),
            l: sorted(BlockKind::L),
            j: sorted(BlockKind::J),
        }
    }
}

fn shift_matrix(m: usize) -> QMatrix {
    Mat::from_fn(m, m, |i, j| if j == i + 1 { Rat::from_integer(1.into()) } else { Rat::zero() })
}

/// `L_m = λ[I 0] + [0 I]`, of size `m × (m+1)`.
fn l_block(m: usize) -> MatrixPencil {
    let g = QMatrix::identity(m).hstack(&QMatrix::zeros(m, 1));
    let h = QMatrix::zeros(m, 1).hstack(&QMatrix::identity(m));
    MatrixPencil { g, h }
}

/// Canonical pencil of the given kind.
///
/// `H_m` has no single canonical representative; `λI + I` is returned.
pub fn canonical_block(kind: BlockKind, m: usize) -> Result<MatrixPencil> {
    let need_positive = matches!(kind, BlockKind::H | BlockKind::K | BlockKind::N);
    if need_positive && m == 0 {
        return Err(Error::InvalidParam(format!("{kind} block needs size >= 1")));
    }
    Ok(match kind {
        BlockKind::H => MatrixPencil { g: QMatrix::identity(m), h: QMatrix::identity(m) },
        BlockKind::K => MatrixPencil { g: QMatrix::identity(m), h: shift_matrix(m) },
        BlockKind::N => MatrixPencil { g: shift_matrix(m), h: QMatrix::identity(m) },
        BlockKind::L => l_block(m),
        BlockKind::J => l_block(m).transpose(),
    })
}

/// Null space of a canonical block evaluated at `λ0`.
///
/// `K_m` loses rank only at zero (kernel `e_1`), `L_m` always has the kernel
/// `[1, -λ0, λ0², …]ᵀ`, and `N_m`, `J_m` have full column rank everywhere.
pub fn block_nullspace(kind: BlockKind, m: usize, x: &Rat) -> Result<QMatrix> {
    let b = canonical_block(kind, m)?;
    let n = b.cols();
    Ok(match kind {
        BlockKind::K if x.is_zero() => Mat::from_fn(n, 1, |i, _| Rat::from_integer((i == 0).into())),
        BlockKind::K | BlockKind::N | BlockKind::J => QMatrix::zeros(n, 0),
        BlockKind::L => {
            let mut v = Vec::with_capacity(n);
            let mut p = Rat::from_integer(1.into());
            for _ in 0..n {
                v.push(p.clone());
                p = -(p * x);
            }
            QMatrix::from_col(&v)
        }
        BlockKind::H => b.eval(x).nullspace(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{int, rat};

    #[test]
    fn degenerate_singular_blocks() {
        assert_eq!(canonical_block(BlockKind::L, 0).unwrap().shape(), (0, 1));
        assert_eq!(canonical_block(BlockKind::J, 0).unwrap().shape(), (1, 0));
        assert!(canonical_block(BlockKind::K, 0).is_err());
    }

    #[test]
    fn closed_form_nullspaces_match_elimination() {
        let pts = [int(0), int(1), int(-1), rat(3, 2), rat(-7, 5)];
        for kind in [BlockKind::K, BlockKind::N, BlockKind::L, BlockKind::J, BlockKind::H] {
            for m in 0..5 {
                let Ok(b) = canonical_block(kind, m) else { continue };
                for x in &pts {
                    let closed = block_nullspace(kind, m, x).unwrap();
                    let direct = b.eval(x).nullspace();
                    assert_eq!(closed.cols(), direct.cols(), "{kind}{m} at {x}");
                    assert!(b.eval(x).mul(&closed).is_zero());
                }
            }
        }
    }

    #[test]
    fn l_block_shape() {
        let l2 = canonical_block(BlockKind::L, 2).unwrap();
        assert_eq!(l2.g, QMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(l2.h, QMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]]));
    }
}
