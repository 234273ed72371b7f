//! Subspaces of `Q^n` represented by column bases.

use crate::polymat::QMatrix;

/// Canonical basis of the column span.
pub fn span(m: &QMatrix) -> QMatrix {
    m.colspace()
}

/// `{x : A x ∈ span(S)}`.
pub fn preimage(a: &QMatrix, s: &QMatrix) -> QMatrix {
    let n = a.cols();
    let null = a.hstack(&s.neg()).nullspace();
    span(&null.sub_matrix(0, n, 0, null.cols()))
}

pub fn image(a: &QMatrix, s: &QMatrix) -> QMatrix {
    span(&a.mul(s))
}

pub fn intersect(s1: &QMatrix, s2: &QMatrix) -> QMatrix {
    let null = s1.hstack(&s2.neg()).nullspace();
    span(&s1.mul(&null.sub_matrix(0, s1.cols(), 0, null.cols())))
}

pub fn sum(s1: &QMatrix, s2: &QMatrix) -> QMatrix {
    span(&s1.hstack(s2))
}

/// Columns of `within` that extend `s` to a basis of `span(s) + span(within)`.
pub fn complement(s: &QMatrix, within: &QMatrix) -> QMatrix {
    let mut acc = s.clone();
    let mut picked = Vec::new();
    let mut rank = acc.rank();
    for j in 0..within.cols() {
        let cand = acc.hstack(&within.select_cols(&[j]));
        let r = cand.rank();
        if r > rank {
            acc = cand;
            rank = r;
            picked.push(j);
        }
    }
    within.select_cols(&picked)
}

/// Limit of `V_{i+1} = {x : H x ∈ G V_i}` from `V_0 = Q^n`.
pub fn wong_v(g: &QMatrix, h: &QMatrix) -> QMatrix {
    let mut v = QMatrix::identity(g.cols());
    loop {
        let next = preimage(h, &image(g, &v));
        if next.cols() == v.cols() {
            return next;
        }
        v = next;
    }
}

/// Limit of `W_{i+1} = {x : G x ∈ H W_i}` from `W_0 = {0}`.
pub fn wong_w(g: &QMatrix, h: &QMatrix) -> QMatrix {
    let mut w = QMatrix::zeros(g.cols(), 0);
    loop {
        let next = preimage(g, &image(h, &w));
        if next.cols() == w.cols() {
            return next;
        }
        w = next;
    }
}
