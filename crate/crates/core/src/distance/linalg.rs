//! Small double-precision helpers.

use nalgebra::{Complex, DMatrix};

use crate::polymat::QMatrix;
use crate::ratpoly::rat_to_f64;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub fn to_dmatrix(q: &QMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(q.rows(), q.cols(), |i, j| rat_to_f64(&q[(i, j)]))
}

pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Largest singular value. Matrices with a side of at most two go through the
/// closed-form eigenvalues of the small Gram matrix.
pub fn sigma_max(m: &CMatrix) -> f64 {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return 0.0;
    }
    if r.min(c) > 2 {
        return m.clone().svd(false, false).singular_values.max();
    }
    let g = if r <= c { m * m.adjoint() } else { m.adjoint() * m };
    if g.nrows() == 1 {
        return g[(0, 0)].re.max(0.0).sqrt();
    }
    let (a, d, b) = (g[(0, 0)].re, g[(1, 1)].re, g[(0, 1)].norm());
    let half = 0.5 * (a - d);
    (0.5 * (a + d) + (half * half + b * b).sqrt()).max(0.0).sqrt()
}

pub fn sigma_max_real(m: &DMatrix<f64>) -> f64 {
    sigma_max(&complexify(m))
}
