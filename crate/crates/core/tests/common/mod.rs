#![allow(dead_code)]

use ndsid::pencil::{canonical_block, BlockInventory, BlockKind, MatrixPencil};
use ndsid::polymat::{Mat, QMatrix};
use ndsid::ratpoly::int;
use rand::Rng;

/// Square integer matrix with entries in `-k..=k`, redrawn until invertible.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, k: i64) -> QMatrix {
    loop {
        let m = Mat::from_fn(n, n, |_, _| int(rng.gen_range(-k..=k)));
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, r: usize, c: usize, k: i64, density: f64) -> QMatrix {
    Mat::from_fn(r, c, |_, _| if rng.gen_bool(density) { int(rng.gen_range(-k..=k)) } else { int(0) })
}

/// Block-diagonal pencil assembled from a random inventory, at most
/// `max_rows × max_cols`, together with that inventory.
pub fn random_kronecker_pencil<R: Rng>(
    rng: &mut R,
    max_rows: usize,
    max_cols: usize,
) -> (MatrixPencil, BlockInventory) {
    let mut parts = Vec::new();
    let mut inv = BlockInventory::default();
    let (mut r, mut c) = (0, 0);
    for _ in 0..rng.gen_range(1..=6) {
        let kind = match rng.gen_range(0..5) {
            0 => BlockKind::L,
            1 => BlockKind::J,
            2 => BlockKind::K,
            3 => BlockKind::N,
            _ => BlockKind::H,
        };
        let size = match kind {
            BlockKind::L | BlockKind::J => rng.gen_range(0..=2),
            _ => rng.gen_range(1..=2),
        };
        let block = match kind {
            BlockKind::H => {
                let a = random_invertible(rng, size, 2);
                MatrixPencil::new(QMatrix::identity(size), a).unwrap()
            }
            _ => canonical_block(kind, size).unwrap(),
        };
        if r + block.rows() > max_rows || c + block.cols() > max_cols {
            continue;
        }
        r += block.rows();
        c += block.cols();
        match kind {
            BlockKind::H => inv.h += size,
            BlockKind::K => inv.k.push(size),
            BlockKind::N => inv.n.push(size),
            BlockKind::L => inv.l.push(size),
            BlockKind::J => inv.j.push(size),
        }
        parts.push(block);
    }
    for v in [&mut inv.k, &mut inv.n, &mut inv.l, &mut inv.j] {
        v.sort_unstable();
    }
    let refs: Vec<&MatrixPencil> = parts.iter().collect();
    (MatrixPencil::block_diag(&refs), inv)
}

/// Applies a random strict equivalence `U · P · V`.
pub fn scramble<R: Rng>(rng: &mut R, p: &MatrixPencil) -> MatrixPencil {
    let u = random_invertible(rng, p.rows(), 2);
    let v = random_invertible(rng, p.cols(), 2);
    p.transform(&u, &v)
}

use ndsid::model::{NdsModel, Scm, SubsystemLft, SubsystemRealized, TfmBundle};
use ndsid::polymat::RatMatrix;
use ndsid::ratpoly::{rat, Poly, RatFunc};

/// Random subsystem in LFT form with a well-posed parameter loop; sparse
/// small-integer blocks so rank deficiency is common.
pub fn random_lft<R: Rng>(rng: &mut R, max_x: usize, max_p: usize) -> SubsystemLft {
    let m_x = rng.gen_range(1..=max_x);
    let m_v = rng.gen_range(1..=3);
    let m_u = rng.gen_range(1..=2);
    let m_y = rng.gen_range(1..=3);
    let m_z = rng.gen_range(1..=2);
    let m_p = rng.gen_range(0..=max_p);
    let m_g = rng.gen_range(0..=max_p);
    let d = 0.5;
    loop {
        let mut q = |r, c| random_int_matrix(rng, r, c, 2, d);
        let s = SubsystemLft {
            nominal: SubsystemRealized {
                a_xx: q(m_x, m_x),
                a_xv: q(m_x, m_v),
                b_x: q(m_x, m_u),
                a_zx: q(m_z, m_x),
                a_zv: q(m_z, m_v),
                b_z: q(m_z, m_u),
                c_x: q(m_y, m_x),
                c_v: q(m_y, m_v),
                d_u: q(m_y, m_u),
            },
            h_x: q(m_x, m_p),
            h_z: q(m_z, m_p),
            h_y: q(m_y, m_p),
            f_x: q(m_g, m_x),
            f_v: q(m_g, m_v),
            f_u: q(m_g, m_u),
            g: q(m_g, m_p),
            p: q(m_p, m_g),
        };
        if s.realize().is_ok() {
            return s;
        }
    }
}

/// Subsystem whose internal transfer `G_zv` vanishes: `v` drives only the
/// first state group, `z` reads only the second, and the state matrix is
/// block upper triangular.
pub fn random_zero_gzv<R: Rng>(rng: &mut R) -> SubsystemLft {
    let n1 = rng.gen_range(1..=2);
    let n2 = rng.gen_range(1..=2);
    let n = n1 + n2;
    let m_v = rng.gen_range(1..=2);
    let m_z = rng.gen_range(1..=2);
    let m_y = (m_v + rng.gen_range(0..=1)).min(3);
    let m_u = (m_z + rng.gen_range(0..=1)).min(3);
    let mut a = random_int_matrix(rng, n, n, 2, 0.6);
    for i in n1..n {
        for j in 0..n1 {
            a[(i, j)] = int(0);
        }
    }
    let mut a_xv = QMatrix::zeros(n, m_v);
    a_xv.set_block(0, 0, &random_int_matrix(rng, n1, m_v, 2, 0.7));
    let mut a_zx = QMatrix::zeros(m_z, n);
    a_zx.set_block(0, n1, &random_int_matrix(rng, m_z, n2, 2, 0.7));
    SubsystemRealized {
        a_xx: a,
        a_xv,
        b_x: random_int_matrix(rng, n, m_u, 2, 0.6),
        a_zx,
        a_zv: QMatrix::zeros(m_z, m_v),
        b_z: random_int_matrix(rng, m_z, m_u, 1, 0.5),
        c_x: random_int_matrix(rng, m_y, n, 2, 0.7),
        c_v: random_int_matrix(rng, m_y, m_v, 1, 0.5),
        d_u: QMatrix::zeros(m_y, m_u),
    }
    .into_lft()
}

/// Two subsystems with `G_zv ≡ 0` and a random free pattern.
pub fn random_zero_gzv_nds<R: Rng>(rng: &mut R) -> NdsModel {
    let subs = vec![random_zero_gzv(rng), random_zero_gzv(rng)];
    let m_v: usize = subs.iter().map(|s| s.dims().m_v).sum();
    let m_z: usize = subs.iter().map(|s| s.dims().m_z).sum();
    let mut scm = Scm::new(random_int_matrix(rng, m_v, m_z, 1, 0.3));
    if rng.gen_bool(0.5) {
        let mask = Mat::from_fn(m_v, m_z, |_, _| rng.gen_bool(0.5));
        scm.phi = Mat::from_fn(m_v, m_z, |i, j| if mask[(i, j)] { scm.phi[(i, j)].clone() } else { int(0) });
        scm.free = Some(mask);
    }
    NdsModel::new(subs, scm).unwrap()
}

pub fn random_poly<R: Rng>(rng: &mut R, deg: usize, monic: bool) -> Poly {
    let mut c: Vec<_> = (0..=deg).map(|_| int(rng.gen_range(-3..=3))).collect();
    if monic {
        c[deg] = int(1);
    }
    Poly::new(c)
}

pub fn random_ratfunc_matrix<R: Rng>(rng: &mut R, r: usize, c: usize) -> RatMatrix {
    Mat::from_fn(r, c, |_, _| {
        let dn = rng.gen_range(0..=2);
        let dd = rng.gen_range(0..=2);
        RatFunc::new(random_poly(rng, dn, false), random_poly(rng, dd, true)).unwrap()
    })
}

/// Kernel of `Δ ↦ G_yv(i)(λ) Δ G_zu(j)(λ)` over the free entries, from
/// enough sample points to pin down the polynomial identity.
pub fn sampled_pair_fcr(m: &NdsModel, t: &[TfmBundle], i: usize, j: usize) -> bool {
    let (vo, zo) = (m.v_offsets(), m.z_offsets());
    let (a, b) = (t[i].g_yv.cols(), t[j].g_zu.rows());
    let free: Vec<usize> =
        (0..a * b).filter(|c| m.scm.is_free(vo[i] + c % a, zo[j] + c / a)).collect();
    let deg = t[i].g_yv.common_denominator().degree().finite().unwrap_or(0)
        + t[j].g_zu.common_denominator().degree().finite().unwrap_or(0);
    let need = 2 * deg + 3;
    let mut blocks = Vec::new();
    let mut k = 0i64;
    while blocks.len() < need {
        k += 1;
        let x = rat(7 * k - 3, 5);
        let (Some(yv), Some(zu)) = (t[i].g_yv.eval(&x), t[j].g_zu.eval(&x)) else { continue };
        blocks.push(zu.transpose().kron(&yv).select_cols(&free));
    }
    let stack = Mat::vcat(&blocks.iter().collect::<Vec<_>>());
    stack.rank() == free.len()
}
