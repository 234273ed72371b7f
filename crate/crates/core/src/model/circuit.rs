//! RC circuit subsystem with two tunable gains, used as a running example.
//!
//! Each subsystem has three states, one internal input `v`, two external
//! inputs, two internal outputs `z` and one measured output. The gains enter
//! through `P = diag(k1/(k1+1), k2/(k2+1))`, which closes to a loop gain of
//! `diag(k1, k2)`.

use num_traits::{One, Zero};

use super::{NdsModel, Scm, SubsystemLft, SubsystemRealized};
use crate::error::{Error, Result};
use crate::polymat::QMatrix;
use crate::ratpoly::{int, Rat};

/// Circuit parameters: time constant `t` and gains `k1`, `k2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitParams {
    pub t: Rat,
    pub k1: Rat,
    pub k2: Rat,
}

fn q(rows: &[&[i64]]) -> QMatrix {
    QMatrix::from_ints(rows)
}

/// One circuit subsystem in LFT form.
pub fn circuit_subsystem(p: &CircuitParams) -> Result<SubsystemLft> {
    if p.t <= Rat::zero() {
        return Err(Error::InvalidParam("time constant must be positive".into()));
    }
    for k in [&p.k1, &p.k2] {
        if *k <= Rat::zero() || *k > Rat::one() {
            return Err(Error::InvalidParam(format!("gain {k} outside (0, 1]")));
        }
    }
    let s = -(Rat::one() / &p.t);
    let gain = |k: &Rat| k / (k + Rat::one());
    let mut pm = QMatrix::zeros(2, 2);
    pm[(0, 0)] = gain(&p.k1);
    pm[(1, 1)] = gain(&p.k2);
    Ok(SubsystemLft {
        nominal: SubsystemRealized {
            a_xx: q(&[&[3, 0, 0], &[1, 2, 0], &[1, 0, 1]]).scale(&s),
            a_xv: q(&[&[1], &[0], &[0]]).scale(&s),
            b_x: q(&[&[-1, 0], &[0, 1], &[0, 1]]).scale(&s),
            a_zx: q(&[&[-1, 1, 0], &[0, 0, 1]]),
            a_zv: QMatrix::zeros(2, 1),
            b_z: QMatrix::zeros(2, 2),
            c_x: q(&[&[1, 0, 0]]),
            c_v: QMatrix::zeros(1, 1),
            d_u: QMatrix::zeros(1, 2),
        },
        h_x: q(&[&[1, 0], &[0, 1], &[0, 0]]).scale(&s),
        h_z: q(&[&[2, -2], &[0, 0]]),
        h_y: QMatrix::zeros(1, 2),
        f_x: q(&[&[1, 0, 0], &[0, 1, 0]]),
        f_v: QMatrix::zeros(2, 1),
        f_u: QMatrix::zeros(2, 2),
        g: QMatrix::identity(2),
        p: pm,
    })
}

/// Two circuit subsystems with an all-free, zero-valued interconnection.
pub fn circuit_nds(t: &Rat, gains: [(Rat, Rat); 2]) -> Result<NdsModel> {
    let subs = gains
        .iter()
        .map(|(k1, k2)| circuit_subsystem(&CircuitParams { t: t.clone(), k1: k1.clone(), k2: k2.clone() }))
        .collect::<Result<Vec<_>>>()?;
    NdsModel::new(subs, Scm::new(QMatrix::zeros(2, 4)))
}

/// The reference circuit network: `T = 1`, first gains `k1`, second gains
/// `0.4` and `0.9`.
pub fn reference_nds(k1: &Rat) -> Result<NdsModel> {
    let k12 = Rat::new(2.into(), 5.into());
    let k22 = Rat::new(9.into(), 10.into());
    circuit_nds(&int(1), [(k1.clone(), k12), (k1.clone(), k22)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymat::rat_det;
    use crate::ratpoly::{rat, Poly, RatFunc};

    #[test]
    fn loop_gain_is_k() {
        let p = CircuitParams { t: int(1), k1: rat(2, 5), k2: rat(9, 10) };
        let r = circuit_subsystem(&p).unwrap().realize().unwrap();
        assert_eq!(r.a_xx[(0, 0)], rat(-17, 5));
        assert_eq!(r.a_xx[(1, 1)], rat(-29, 10));
    }

    #[test]
    fn zu_determinant_closed_form() {
        for (t, k1, k2) in [(int(1), rat(1, 2), rat(2, 5)), (rat(3, 2), rat(1, 5), int(1))] {
            let s = circuit_subsystem(&CircuitParams { t: t.clone(), k1: k1.clone(), k2 }).unwrap();
            let g = s.realize().unwrap().tfms().g_zu;
            let num = Poly::constant(-(int(2) * &k1 - int(1)));
            let den = &Poly::new(vec![int(1), t.clone()]) * &Poly::new(vec![&k1 + int(3), t.clone()]);
            assert_eq!(rat_det(&g).unwrap(), RatFunc::new(num, den).unwrap());
            let e = RatFunc::new(Poly::constant(int(-1)), Poly::new(vec![int(1), t])).unwrap();
            assert_eq!(g[(1, 1)], e);
        }
    }
}
