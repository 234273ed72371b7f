//! Exact Kronecker canonical form.
//!
//! The pencil is first brought to block upper triangular form with the Wong
//! sequences, separating the right singular, regular and left singular parts.
//! The off-diagonal couplings are removed by solving generalized Sylvester
//! equations, and each part is then put in canonical form: minimal polynomial
//! bases for the singular parts, and Jordan chains for the regular part.

use num_traits::{One, Zero};

use super::subspace::{complement, image, intersect, span, sum, wong_v, wong_w};
use super::{canonical_block, BlockKind, KroneckerBlock, KroneckerForm, MatrixPencil};
use crate::error::{Error, Result};
use crate::polymat::{Mat, QMatrix};
use crate::ratpoly::Rat;

/// Solves `G1 X - Y G2 = C_G`, `H1 X - Y H2 = C_H` for `X` (`n1 × n2`) and
/// `Y` (`m1 × m2`), where `p1` is `m1 × n1` and `p2` is `m2 × n2`.
pub fn solve_gen_sylvester(
    p1: &MatrixPencil,
    p2: &MatrixPencil,
    c: &MatrixPencil,
) -> Option<(QMatrix, QMatrix)> {
    let (m1, n1) = p1.shape();
    let (m2, n2) = p2.shape();
    let nx = n1 * n2;
    let ny = m1 * m2;
    if nx + ny == 0 || m1 * n2 == 0 {
        let ok = c.g.is_zero() && c.h.is_zero();
        return ok.then(|| (QMatrix::zeros(n1, n2), QMatrix::zeros(m1, m2)));
    }
    let i_n2 = QMatrix::identity(n2);
    let i_m1 = QMatrix::identity(m1);
    let top = i_n2.kron(&p1.g).hstack(&p2.g.transpose().kron(&i_m1).neg());
    let bottom = i_n2.kron(&p1.h).hstack(&p2.h.transpose().kron(&i_m1).neg());
    let a = top.vstack(&bottom);
    let mut rhs = c.g.vec();
    rhs.extend(c.h.vec());
    let z = a.solve(&QMatrix::from_col(&rhs))?;
    let z = z.col(0);
    Some((QMatrix::unvec(&z[..nx], n1, n2), QMatrix::unvec(&z[nx..], m1, m2)))
}

fn internal(msg: &str) -> Error {
    Error::Internal(format!("Kronecker form: {msg}"))
}

/// Upper block identity `[[I, M], [0, I]]` with `M` of size `a × b`.
fn unipotent(m: &QMatrix) -> QMatrix {
    let (a, b) = m.shape();
    let mut t = QMatrix::identity(a + b);
    t.set_block(0, a, m);
    t
}

/// Result of canonicalizing one part: `Π · X = Y · diag(blocks)`.
struct PartForm {
    x: QMatrix,
    y: QMatrix,
    blocks: Vec<KroneckerBlock>,
}

fn block(kind: BlockKind, size: usize) -> KroneckerBlock {
    KroneckerBlock { kind, size, pencil: canonical_block(kind, size).expect("valid size") }
}

/// Block Toeplitz matrix whose kernel holds the coefficient stacks of the
/// polynomial solutions of `(λG + H) x(λ) = 0` with `deg x ≤ d`.
fn toeplitz(p: &MatrixPencil, d: usize) -> QMatrix {
    let (m, n) = p.shape();
    let mut t = QMatrix::zeros((d + 2) * m, (d + 1) * n);
    for c in 0..=d {
        t.set_block(c * m, c * n, &p.h);
        t.set_block((c + 1) * m, c * n, &p.g);
    }
    t
}

/// Canonical form of a pencil with only `L` blocks.
fn l_part(p: &MatrixPencil) -> Result<PartForm> {
    let (m, n) = p.shape();
    if n < m {
        return Err(internal("right singular part has more rows than columns"));
    }
    let count = n - m;
    let mut chosen: Vec<(usize, Vec<Vec<Rat>>)> = Vec::new();
    for d in 0..=m {
        if chosen.len() == count {
            break;
        }
        let null = toeplitz(p, d).nullspace();
        if null.cols() == 0 {
            continue;
        }
        let len = (d + 1) * n;
        let mut acc = QMatrix::zeros(len, 0);
        for (e, coeffs) in &chosen {
            for s in 0..=(d - e) {
                let mut col = vec![Rat::zero(); len];
                for (k, c) in coeffs.iter().enumerate() {
                    col[(s + k) * n..(s + k + 1) * n].clone_from_slice(c);
                }
                acc = acc.hstack(&QMatrix::from_col(&col));
            }
        }
        let mut rank = acc.rank();
        for j in 0..null.cols() {
            if chosen.len() == count {
                break;
            }
            let cand = acc.hstack(&null.select_cols(&[j]));
            let r = cand.rank();
            if r > rank {
                acc = cand;
                rank = r;
                let col = null.col(j);
                let coeffs = (0..=d).map(|k| col[k * n..(k + 1) * n].to_vec()).collect();
                chosen.push((d, coeffs));
            }
        }
    }
    if chosen.len() != count {
        return Err(internal("minimal basis incomplete"));
    }
    let mut xs = QMatrix::zeros(n, 0);
    let mut ys = QMatrix::zeros(m, 0);
    let mut blocks = Vec::new();
    for (eps, coeffs) in &chosen {
        let mut chain = QMatrix::zeros(n, eps + 1);
        for (k, c) in coeffs.iter().enumerate() {
            let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
            for (i, v) in c.iter().enumerate() {
                chain[(i, k)] = v * &sign;
            }
        }
        let y = p.g.mul(&chain.sub_matrix(0, n, 0, *eps));
        xs = xs.hstack(&chain);
        ys = ys.hstack(&y);
        blocks.push(block(BlockKind::L, *eps));
    }
    if xs.rank() != n || ys.rank() != m {
        return Err(internal("singular chain basis"));
    }
    Ok(PartForm { x: xs, y: ys, blocks })
}

/// Canonical form of a pencil with only `J` blocks, via the transpose.
fn j_part(p: &MatrixPencil) -> Result<PartForm> {
    let t = l_part(&p.transpose())?;
    // Πᵀ X = Y L  ⇒  Π · Y⁻ᵀ = X⁻ᵀ · Lᵀ
    let x = t.y.transpose().inverse()?;
    let y = t.x.transpose().inverse()?;
    let blocks = t.blocks.iter().map(|b| block(BlockKind::J, b.size)).collect();
    Ok(PartForm { x, y, blocks })
}

/// Jordan chains of a nilpotent matrix: `N X = X · diag(S_{m_1}, …)` with
/// `S` the upper shift, blocks sorted by increasing size.
fn jordan_chains(nil: &QMatrix) -> Result<(QMatrix, Vec<usize>)> {
    let n = nil.rows();
    let mut powers = vec![QMatrix::identity(n)];
    while !powers.last().expect("nonempty").is_zero() {
        if powers.len() > n + 1 {
            return Err(internal("matrix is not nilpotent"));
        }
        let next = powers.last().expect("nonempty").mul(nil);
        powers.push(next);
    }
    let index = powers.len() - 1;
    let kernels: Vec<QMatrix> = powers.iter().map(|p| p.nullspace()).collect();
    let mut tops: Vec<(usize, Vec<Rat>)> = Vec::new();
    for k in (1..=index).rev() {
        let mut acc = kernels[k - 1].clone();
        for (level, t) in &tops {
            let v = powers[level - k].mul(&QMatrix::from_col(t));
            acc = acc.hstack(&v);
        }
        let mut rank = acc.rank();
        for j in 0..kernels[k].cols() {
            let cand = acc.hstack(&kernels[k].select_cols(&[j]));
            let r = cand.rank();
            if r > rank {
                acc = cand;
                rank = r;
                tops.push((k, kernels[k].col(j)));
            }
        }
    }
    tops.sort_by_key(|(k, _)| *k);
    let mut x = QMatrix::zeros(n, 0);
    let mut sizes = Vec::new();
    for (k, t) in &tops {
        let t = QMatrix::from_col(t);
        for i in (0..*k).rev() {
            x = x.hstack(&powers[i].mul(&t));
        }
        sizes.push(*k);
    }
    if x.cols() != n || x.rank() != n {
        return Err(internal("incomplete Jordan basis"));
    }
    Ok((x, sizes))
}

/// Canonical form of a regular pencil: `H`, then `K`, then `N` blocks.
fn regular_part(p: &MatrixPencil) -> Result<PartForm> {
    let n = p.rows();
    let vb = wong_v(&p.g, &p.h);
    let wb = wong_w(&p.g, &p.h);
    let nf = vb.cols();
    if nf + wb.cols() != n {
        return Err(internal("regular part is not regular"));
    }
    let t1 = vb.hstack(&wb);
    let t2 = p.g.mul(&vb).hstack(&p.h.mul(&wb));
    let t2_inv = t2.inverse().map_err(|_| internal("singular Weierstrass transform"))?;
    let w = p.transform(&t2_inv, &t1);
    let hf = w.h.sub_matrix(0, nf, 0, nf);
    let ninf = w.g.sub_matrix(nf, n, nf, n);

    let mut pw = QMatrix::identity(nf);
    for _ in 0..nf {
        pw = pw.mul(&hf);
    }
    let range = span(&pw);
    let kernel = pw.nullspace();
    let nh = range.cols();
    let tf = range.hstack(&kernel);
    let split = tf.inverse()?.mul(&hf).mul(&tf);
    let inv_part = split.sub_matrix(0, nh, 0, nh);
    let nil = split.sub_matrix(nh, nf, nh, nf);
    let (xk, ksizes) = jordan_chains(&nil)?;
    let (xn, nsizes) = jordan_chains(&ninf)?;

    let finite = tf.mul(&Mat::block_diag(&[&QMatrix::identity(nh), &xk]));
    let inner = Mat::block_diag(&[&finite, &xn]);
    let mut blocks = Vec::new();
    if nh > 0 {
        blocks.push(KroneckerBlock {
            kind: BlockKind::H,
            size: nh,
            pencil: MatrixPencil { g: QMatrix::identity(nh), h: inv_part },
        });
    }
    blocks.extend(ksizes.iter().map(|&s| block(BlockKind::K, s)));
    blocks.extend(nsizes.iter().map(|&s| block(BlockKind::N, s)));
    Ok(PartForm { x: t1.mul(&inner), y: t2.mul(&inner), blocks })
}

/// Kronecker canonical form `λG + H = U · diag(blocks) · V`.
///
/// Blocks are ordered `L, H, K, N, J`, each kind by increasing size, so the
/// `L` blocks occupy the leading columns of `V⁻¹`.
pub fn kcf(p: &MatrixPencil) -> Result<KroneckerForm> {
    let (m, n) = p.shape();
    let vs = wong_v(&p.g, &p.h);
    let ws = wong_w(&p.g, &p.h);
    let p1 = intersect(&vs, &ws);
    let r1 = complement(&p1, &sum(&vs, &ws));
    let q1 = complement(&p1.hstack(&r1), &QMatrix::identity(n));
    let gv = image(&p.g, &vs);
    let hw = image(&p.h, &ws);
    let p2 = intersect(&gv, &hw);
    let r2 = complement(&p2, &sum(&gv, &hw));
    let q2 = complement(&p2.hstack(&r2), &QMatrix::identity(m));
    let (np, nr) = (p1.cols(), r1.cols());
    let (mp, mr) = (p2.cols(), r2.cols());
    if nr != mr {
        return Err(internal("regular part is not square"));
    }
    let t1 = Mat::hcat(&[&p1, &r1, &q1]);
    let t2 = Mat::hcat(&[&p2, &r2, &q2]);
    // Π · v_inv = u · cur
    let mut u = t2.clone();
    let mut v_inv = t1;
    let mut cur = p.transform(&t2.inverse()?, &v_inv);
    let lower_zero = cur.sub_pencil(mp, m, 0, np);
    let corner_zero = cur.sub_pencil(mp + mr, m, np, np + nr);
    for z in [&lower_zero, &corner_zero] {
        if !(z.g.is_zero() && z.h.is_zero()) {
            return Err(internal("triangular form failed"));
        }
    }

    for (r0, c0) in [(mp, np), (mp + mr, np + nr)] {
        let head = cur.sub_pencil(0, r0, 0, c0);
        let tail = cur.sub_pencil(r0, m, c0, n);
        let coupling = cur.sub_pencil(0, r0, c0, n);
        let neg = MatrixPencil { g: coupling.g.neg(), h: coupling.h.neg() };
        let (x, y) = solve_gen_sylvester(&head, &tail, &neg)
            .ok_or_else(|| internal("coupling equation has no solution"))?;
        let rcol = unipotent(&x);
        let lrow_inv = unipotent(&y);
        cur = cur.transform(&unipotent(&y.neg()), &rcol);
        v_inv = v_inv.mul(&rcol);
        u = u.mul(&lrow_inv);
    }
    let off = [cur.sub_pencil(0, mp, np, n), cur.sub_pencil(mp, mp + mr, np + nr, n)];
    if off.iter().any(|o| !(o.g.is_zero() && o.h.is_zero())) {
        return Err(internal("decoupling failed"));
    }

    let lp = l_part(&cur.sub_pencil(0, mp, 0, np))?;
    let rp = regular_part(&cur.sub_pencil(mp, mp + mr, np, np + nr))?;
    let jp = j_part(&cur.sub_pencil(mp + mr, m, np + nr, n))?;
    v_inv = v_inv.mul(&Mat::block_diag(&[&lp.x, &rp.x, &jp.x]));
    u = u.mul(&Mat::block_diag(&[&lp.y, &rp.y, &jp.y]));
    let mut blocks = lp.blocks;
    blocks.extend(rp.blocks);
    blocks.extend(jp.blocks);
    let v = v_inv.inverse()?;
    let form = KroneckerForm { u, v, v_inv, blocks };
    if form.reassemble() != *p {
        return Err(internal("reassembly mismatch"));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::super::BlockInventory;
    use super::*;

    fn pencil(g: &[&[i64]], h: &[&[i64]]) -> MatrixPencil {
        MatrixPencil::new(QMatrix::from_ints(g), QMatrix::from_ints(h)).unwrap()
    }

    #[test]
    fn regular_mixture() {
        // λ·diag(1, 1, 0) + diag(2, 0, 1): H_1, K_1, N_1
        let p = pencil(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]], &[&[2, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let f = kcf(&p).unwrap();
        assert_eq!(
            f.inventory(),
            BlockInventory { h: 1, k: vec![1], n: vec![1], l: vec![], j: vec![] }
        );
    }

    #[test]
    fn single_l_block() {
        let p = pencil(&[&[1, 0]], &[&[0, 1]]);
        let f = kcf(&p).unwrap();
        assert_eq!(f.inventory().l, vec![1]);
        assert_eq!(f.zeta_l(), 1);
    }

    #[test]
    fn zero_pencil() {
        let p = MatrixPencil::new(QMatrix::zeros(2, 3), QMatrix::zeros(2, 3)).unwrap();
        let f = kcf(&p).unwrap();
        assert_eq!(f.inventory().l, vec![0, 0, 0]);
        assert_eq!(f.inventory().j, vec![0, 0]);
    }

    #[test]
    fn nilpotent_chains() {
        let n = QMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let (x, sizes) = jordan_chains(&n).unwrap();
        assert_eq!(sizes, vec![3]);
        let s = canonical_block(BlockKind::K, 3).unwrap().h;
        assert_eq!(n.mul(&x), x.mul(&s));
    }

    #[test]
    fn sylvester_solution() {
        let a = canonical_block(BlockKind::L, 1).unwrap();
        let b = canonical_block(BlockKind::K, 2).unwrap();
        let c = MatrixPencil::new(
            QMatrix::from_ints(&[&[1, 2]]),
            QMatrix::from_ints(&[&[3, -1]]),
        )
        .unwrap();
        let (x, y) = solve_gen_sylvester(&a, &b, &c).unwrap();
        assert_eq!(a.g.mul(&x).sub(&y.mul(&b.g)), c.g);
        assert_eq!(a.h.mul(&x).sub(&y.mul(&b.h)), c.h);
    }
}
