//! Matrices over rationals, polynomials and rational functions.
//!
//! Exact linear algebra ([`Mat`]), Smith and Smith-McMillan forms, and the
//! normal rank of rational matrices.

mod dense;
mod smith;

pub use dense::{Field, Mat, PolyMatrix, QMatrix, RatMatrix, Ring, Rref};
pub use smith::{smith_form, smith_mcmillan, SmithForm, SmithMcMillanForm};

use crate::error::{Error, Result};
use crate::ratpoly::{rat, Rat};

/// Rational evaluation points used for the rank fast path.
fn probe_points() -> impl Iterator<Item = Rat> {
    [(7, 3), (-11, 5), (13, 4), (-17, 9), (23, 7), (29, 11), (-31, 13), (37, 6)]
        .into_iter()
        .map(|(n, d)| rat(n, d))
}

/// Rank over the field of rational functions.
///
/// The rank at any regular point bounds the normal rank from below, so a
/// full-rank evaluation settles the question; otherwise the rank is
/// computed by elimination over rational functions.
pub fn normal_rank(g: &RatMatrix) -> usize {
    let full = g.rows().min(g.cols());
    if full == 0 {
        return 0;
    }
    let mut best = 0;
    for x in probe_points() {
        if let Some(v) = g.eval(&x) {
            best = best.max(v.rank());
            if best == full {
                return full;
            }
        }
    }
    g.rank()
}

/// Normal rank of a polynomial matrix.
pub fn normal_rank_poly(m: &PolyMatrix) -> usize {
    normal_rank(&m.to_ratfunc())
}

/// Full normal column rank.
pub fn is_fncr(g: &RatMatrix) -> bool {
    normal_rank(g) == g.cols()
}

/// Full normal row rank.
pub fn is_fnrr(g: &RatMatrix) -> bool {
    normal_rank(g) == g.rows()
}

/// Exact inverse of a square rational matrix.
pub fn rat_inverse(g: &RatMatrix) -> Result<RatMatrix> {
    g.inverse()
}

/// Basis of `{x : A x = 0}` as columns; an empty basis has zero columns.
pub fn const_nullspace(a: &QMatrix) -> QMatrix {
    a.nullspace()
}

/// Determinant over rational functions.
pub fn rat_det(g: &RatMatrix) -> Result<crate::ratpoly::RatFunc> {
    if !g.is_square() {
        return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    g.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{int, Poly, RatFunc};

    fn f(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn rank_deficient_needs_exact_path() {
        let a = f(&[1], &[1, 1]);
        let b = f(&[0, 1], &[2, 1]);
        let g = Mat::from_rows(vec![vec![a.clone(), b.clone()], vec![&a * &a, &a * &b]]);
        assert_eq!(normal_rank(&g), 1);
        assert!(!is_fncr(&g));
        assert!(is_fnrr(&Mat::from_rows(vec![vec![a, b]])));
    }

    #[test]
    fn inverse_of_rational() {
        let g = Mat::from_rows(vec![
            vec![f(&[1], &[1, 1]), f(&[1], &[1])],
            vec![f(&[0], &[1]), f(&[1], &[2, 1])],
        ]);
        let inv = rat_inverse(&g).unwrap();
        assert!(g.mul(&inv).is_identity());
        let sing = Mat::from_rows(vec![vec![f(&[1], &[1, 1]); 2]; 2]);
        assert_eq!(rat_inverse(&sing), Err(Error::SingularMatrix));
    }

    #[test]
    fn empty_nullspace_has_zero_columns() {
        let n = const_nullspace(&QMatrix::identity(3));
        assert_eq!(n.shape(), (3, 0));
        let _ = int(0);
    }
}
