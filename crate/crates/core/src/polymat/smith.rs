//! Smith and Smith-McMillan forms with unimodular transforms.

use crate::polymat::dense::{Mat, PolyMatrix, RatMatrix};
use crate::ratpoly::{Poly, Rat, RatFunc};

/// `M = U · diag(d_1, …, d_r, 0, …) · V` with unimodular `U`, `V` and monic
/// invariant factors `d_1 | d_2 | … | d_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm {
    pub u: PolyMatrix,
    /// Invariant factors `d_1, …, d_r`.
    pub factors: Vec<Poly>,
    pub v: PolyMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The `rows × cols` diagonal matrix of invariant factors.
    pub fn diagonal(&self) -> PolyMatrix {
        let mut d = Mat::zeros(self.u.cols(), self.v.rows());
        for (k, f) in self.factors.iter().enumerate() {
            d[(k, k)] = f.clone();
        }
        d
    }
}

/// `G = U · diag(α_1/β_1, …, α_r/β_r, 0, …) · V`; each `α_j/β_j` is coprime
/// and monic, `α_j | α_{j+1}` and `β_{j+1} | β_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithMcMillanForm {
    pub u: PolyMatrix,
    pub alpha: Vec<Poly>,
    pub beta: Vec<Poly>,
    pub v: PolyMatrix,
}

impl SmithMcMillanForm {
    pub fn rank(&self) -> usize {
        self.alpha.len()
    }

    pub fn diagonal(&self) -> RatMatrix {
        let mut d = Mat::zeros(self.u.cols(), self.v.rows());
        for k in 0..self.rank() {
            d[(k, k)] = RatFunc::new(self.alpha[k].clone(), self.beta[k].clone()).expect("monic");
        }
        d
    }

    /// `U · diag · V`, for checking the factorization.
    pub fn reassemble(&self) -> RatMatrix {
        self.u.to_ratfunc().mul(&self.diagonal()).mul(&self.v.to_ratfunc())
    }

    /// First `rank` rows of `V`.
    pub fn v_head(&self) -> PolyMatrix {
        self.v.sub_matrix(0, self.rank(), 0, self.v.cols())
    }

    /// First `rank` columns of `U`.
    pub fn u_head(&self) -> PolyMatrix {
        self.u.sub_matrix(0, self.u.rows(), 0, self.rank())
    }
}

struct Tracker {
    a: PolyMatrix,
    u: PolyMatrix,
    v: PolyMatrix,
}

impl Tracker {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_cols(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_rows(x, y);
    }

    /// row_i += q · row_k
    fn add_row(&mut self, i: usize, k: usize, q: &Poly) {
        for j in 0..self.a.cols() {
            let t = &self.a[(k, j)] * q;
            if !t.is_zero() {
                self.a[(i, j)] = &self.a[(i, j)] + &t;
            }
        }
        for r in 0..self.u.rows() {
            let t = &self.u[(r, i)] * q;
            if !t.is_zero() {
                self.u[(r, k)] = &self.u[(r, k)] - &t;
            }
        }
    }

    /// col_j += q · col_k
    fn add_col(&mut self, j: usize, k: usize, q: &Poly) {
        for i in 0..self.a.rows() {
            let t = &self.a[(i, k)] * q;
            if !t.is_zero() {
                self.a[(i, j)] = &self.a[(i, j)] + &t;
            }
        }
        for c in 0..self.v.cols() {
            let t = &self.v[(j, c)] * q;
            if !t.is_zero() {
                self.v[(k, c)] = &self.v[(k, c)] - &t;
            }
        }
    }

    fn scale_row(&mut self, k: usize, c: &Rat) {
        for j in 0..self.a.cols() {
            self.a[(k, j)] = self.a[(k, j)].scale(c);
        }
        let inv = c.recip();
        for r in 0..self.u.rows() {
            self.u[(r, k)] = self.u[(r, k)].scale(&inv);
        }
    }
}

/// Smith form by elementary unimodular operations.
pub fn smith_form(m: &PolyMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut t = Tracker { a: m.clone(), u: Mat::identity(rows), v: Mat::identity(cols) };
    let mut factors = Vec::new();
    'outer: for k in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    let e = &t.a[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| e.degree() < t.a[(bi, bj)].degree()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            t.swap_rows(k, pi);
            t.swap_cols(k, pj);
            let pivot = t.a[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                if t.a[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = t.a[(i, k)].div_rem(&pivot).expect("nonzero pivot");
                t.add_row(i, k, &-q);
                dirty |= !r.is_zero();
            }
            for j in k + 1..cols {
                if t.a[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = t.a[(k, j)].div_rem(&pivot).expect("nonzero pivot");
                t.add_col(j, k, &-q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !t.a[(i, j)].divisible_by(&pivot)));
            match offender {
                Some(i) => t.add_row(k, i, &Poly::one()),
                None => break,
            }
        }
        let lead = t.a[(k, k)].lead();
        t.scale_row(k, &lead.recip());
        factors.push(t.a[(k, k)].clone());
    }
    SmithForm { u: t.u, factors, v: t.v }
}

/// Smith-McMillan form of a rational matrix, via the Smith form of `d · G`
/// where `d` is the monic least common denominator.
pub fn smith_mcmillan(g: &RatMatrix) -> SmithMcMillanForm {
    let (n, d) = g.split_common_denominator();
    let s = smith_form(&n);
    let mut alpha = Vec::with_capacity(s.rank());
    let mut beta = Vec::with_capacity(s.rank());
    for f in &s.factors {
        let r = RatFunc::new(f.clone(), d.clone()).expect("monic denominator");
        alpha.push(r.num().monic());
        beta.push(r.den().clone());
    }
    SmithMcMillanForm { u: s.u, alpha, beta, v: s.v }
}
