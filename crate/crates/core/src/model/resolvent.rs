//! Exact resolvent `(λI - A)⁻¹ = adj(λI - A) / det(λI - A)`.

use num_traits::Zero;

use crate::polymat::{Mat, PolyMatrix, QMatrix, RatMatrix};
use crate::ratpoly::{int, Poly, Rat, RatFunc};

/// Characteristic polynomial and adjugate of `λI - A`.
#[derive(Debug, Clone)]
pub struct Resolvent {
    /// `det(λI - A)`, monic of degree `n`.
    pub charpoly: Poly,
    /// `adj(λI - A)`.
    pub adjugate: PolyMatrix,
}

impl Resolvent {
    pub fn inverse_matrix(&self) -> RatMatrix {
        self.adjugate
            .map(|p| RatFunc::new(p.clone(), self.charpoly.clone()).expect("monic charpoly"))
    }
}

/// Faddeev-LeVerrier recursion.
pub fn resolvent(a: &QMatrix) -> Resolvent {
    let n = a.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = int(1);
    let mut mats: Vec<QMatrix> = Vec::with_capacity(n);
    let mut m = QMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&QMatrix::identity(n).scale(&coeffs[n - k + 1]));
        let am = a.mul(&m);
        coeffs[n - k] = -am.trace() / int(k as i64);
        mats.push(m.clone());
    }
    // adj(λI - A) = Σ_k M_k λ^{n-k}
    let adjugate = Mat::from_fn(n, n, |i, j| {
        let mut c = vec![Rat::zero(); n];
        for (k, mk) in mats.iter().enumerate() {
            c[n - 1 - k] = mk[(i, j)].clone();
        }
        Poly::new(c)
    });
    Resolvent { charpoly: Poly::new(coeffs), adjugate }
}

/// `C (λI - A)⁻¹ B + D`.
pub fn transfer(r: &Resolvent, c: &QMatrix, b: &QMatrix, d: &QMatrix) -> RatMatrix {
    let n = r.charpoly.degree().finite().unwrap_or(0);
    let mut parts = Vec::with_capacity(n);
    for k in 0..n {
        parts.push(c.mul(&r.adjugate.coeff_matrix(k)).mul(b));
    }
    Mat::from_fn(d.rows(), d.cols(), |i, j| {
        let num = Poly::new(parts.iter().map(|m| m[(i, j)].clone()).collect());
        let num = &num + &r.charpoly.scale(&d[(i, j)]);
        RatFunc::new(num, r.charpoly.clone()).expect("monic charpoly")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn resolvent_inverts(v in prop::collection::vec(-3i64..=3, 9), x in -5i64..=5) {
            let a = Mat::from_fn(3, 3, |i, j| int(v[3 * i + j]));
            let r = resolvent(&a);
            let x = crate::ratpoly::rat(2 * x + 1, 7);
            let lhs = QMatrix::identity(3).scale(&x).sub(&a);
            let det = r.charpoly.eval(&x);
            prop_assert_eq!(lhs.det().unwrap(), det.clone());
            let adj = r.adjugate.eval(&x);
            prop_assert_eq!(lhs.mul(&adj), QMatrix::identity(3).scale(&det));
        }
    }

    #[test]
    fn empty_state() {
        let r = resolvent(&QMatrix::zeros(0, 0));
        assert_eq!(r.charpoly, Poly::one());
        let d = QMatrix::from_ints(&[&[2]]);
        let t = transfer(&r, &QMatrix::zeros(1, 0), &QMatrix::zeros(0, 1), &d);
        assert_eq!(t[(0, 0)], RatFunc::constant(int(2)));
    }
}
