//! Identifiability certificates for the interconnection `Φ`.
//!
//! Four tests are provided. [`check_sufficient`] and [`check_pencil_chain`]
//! decide a rank condition on each subsystem that implies identifiability but
//! cannot refute it. [`check_coefficient_stack`] (for `G_zv ≡ 0`) and
//! [`check_factored`] are exact and return a verified witness pair when the
//! structure is not identifiable.

mod chain;
mod xi;

use std::fmt;

pub use chain::{gamma_matrix, pencil_chain, pencil_m, subsystem_fncr_by_chain, PencilChain};
pub use xi::{
    block_factorization, check_coefficient_stack, check_factored, verify_witness, xi_matrix, Factorization,
};

use crate::error::Result;
use crate::model::NdsModel;
use crate::polymat::{normal_rank, QMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Identifiable,
    Unidentifiable,
    /// A sufficient condition failed; nothing is known either way.
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Identifiable => "identifiable",
            Status::Unidentifiable => "unidentifiable",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Per-subsystem rank of `G_yv(i)` and `G_zu(i)`.
    Sufficient,
    /// Coefficient stacks from `G_yv(i)` and `G_zu(j)`; requires `G_zv ≡ 0`.
    CoefficientStack,
    /// Coefficient stacks from `G_zv`, given a factorization through it.
    Factored,
    /// Same condition as [`Method::Sufficient`], decided on constant pencils.
    PencilChain,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sufficient => "sufficient",
            Method::CoefficientStack => "coefficient-stack",
            Method::Factored => "factored",
            Method::PencilChain => "pencil-chain",
        })
    }
}

/// Method selection for [`check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    /// Factored if a factorization is supplied, coefficient stack if
    /// `G_zv ≡ 0`, otherwise the sufficient test.
    #[default]
    Auto,
    Fixed(Method),
}

/// Rank findings for one subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemRanks {
    pub index: usize,
    pub m_v: usize,
    pub m_z: usize,
    /// Normal rank of `G_yv(i)`, when computed.
    pub rank_yv: Option<usize>,
    /// Normal rank of `G_zu(i)`, when computed.
    pub rank_zu: Option<usize>,
    pub fncr_yv: bool,
    pub fnrr_zu: bool,
}

/// Rank of the coefficient stack for block `(i, j)` of `Φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub rows: usize,
    pub cols: usize,
    /// Columns kept after removing fixed entries of `Φ`.
    pub free_cols: usize,
    pub rank: usize,
    pub fcr: bool,
}

/// Two well-posed interconnections with the same input-output map.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    /// Nonzero change of block `(i, j)`.
    pub delta: QMatrix,
    pub phi1: QMatrix,
    pub phi2: QMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentVerdict {
    pub status: Status,
    pub method: Method,
    pub subsystems: Vec<SubsystemRanks>,
    pub pairs: Vec<PairCheck>,
    pub witness: Option<Witness>,
    /// Human-readable localization of failures.
    pub notes: Vec<String>,
}

fn rank_verdict(method: Method, subsystems: Vec<SubsystemRanks>) -> IdentVerdict {
    let mut notes = Vec::new();
    for s in &subsystems {
        if !s.fncr_yv {
            notes.push(format!("subsystem {}: G_yv lacks full normal column rank", s.index));
        }
        if !s.fnrr_zu {
            notes.push(format!("subsystem {}: G_zu lacks full normal row rank", s.index));
        }
    }
    let status = if notes.is_empty() { Status::Identifiable } else { Status::Inconclusive };
    IdentVerdict { status, method, subsystems, pairs: Vec::new(), witness: None, notes }
}

/// Identifiable if every `G_yv(i)` has full normal column rank and every
/// `G_zu(i)` full normal row rank; inconclusive otherwise.
pub fn check_sufficient(model: &NdsModel) -> Result<IdentVerdict> {
    let subs = model.subsystem_tfms()?;
    let ranks = subs
        .iter()
        .enumerate()
        .map(|(index, t)| {
            let (ry, rz) = (normal_rank(&t.g_yv), normal_rank(&t.g_zu));
            SubsystemRanks {
                index,
                m_v: t.g_yv.cols(),
                m_z: t.g_zu.rows(),
                rank_yv: Some(ry),
                rank_zu: Some(rz),
                fncr_yv: ry == t.g_yv.cols(),
                fnrr_zu: rz == t.g_zu.rows(),
            }
        })
        .collect();
    Ok(rank_verdict(Method::Sufficient, ranks))
}

/// The sufficient condition decided through constant pencils: `G_yv(i)` via
/// the chain of the subsystem and `G_zu(i)` via the chain of its dual.
pub fn check_pencil_chain(model: &NdsModel) -> Result<IdentVerdict> {
    let ranks = model
        .subsystems
        .iter()
        .enumerate()
        .map(|(index, s)| {
            let d = s.dims();
            Ok(SubsystemRanks {
                index,
                m_v: d.m_v,
                m_z: d.m_z,
                rank_yv: None,
                rank_zu: None,
                fncr_yv: subsystem_fncr_by_chain(s)?,
                fnrr_zu: subsystem_fncr_by_chain(&s.dual())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rank_verdict(Method::PencilChain, ranks))
}

/// Runs the selected test.
pub fn check(model: &NdsModel, choice: MethodChoice, factorization: Option<&Factorization>) -> Result<IdentVerdict> {
    let method = match choice {
        MethodChoice::Fixed(m) => m,
        MethodChoice::Auto if factorization.is_some() => Method::Factored,
        MethodChoice::Auto => {
            if model.subsystem_tfms()?.iter().all(|t| t.g_zv.is_zero()) {
                Method::CoefficientStack
            } else {
                Method::Sufficient
            }
        }
    };
    match method {
        Method::Sufficient => check_sufficient(model),
        Method::CoefficientStack => check_coefficient_stack(model),
        Method::PencilChain => check_pencil_chain(model),
        Method::Factored => match factorization {
            Some(f) => check_factored(model, f),
            None => Err(crate::Error::FactorizationInvalid("no factorization supplied".into())),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::circuit::reference_nds;
    use crate::model::{NdsModel, Scm, SubsystemRealized};
    use crate::ratpoly::rat;

    #[test]
    fn circuit_verdicts() {
        let v = check_sufficient(&reference_nds(&rat(2, 5)).unwrap()).unwrap();
        assert_eq!(v.status, Status::Identifiable);
        let v = check_sufficient(&reference_nds(&rat(1, 2)).unwrap()).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(v.subsystems.iter().all(|s| s.fncr_yv));
        assert!(v.subsystems.iter().all(|s| !s.fnrr_zu && s.rank_zu == Some(1)));
        assert_eq!(v.notes.len(), 2);
    }

    #[test]
    fn chain_agrees_on_circuit() {
        for k in [rat(2, 5), rat(1, 2), rat(3, 4)] {
            let m = reference_nds(&k).unwrap();
            let a = check_sufficient(&m).unwrap();
            let b = check_pencil_chain(&m).unwrap();
            assert_eq!(a.status, b.status);
            for (x, y) in a.subsystems.iter().zip(&b.subsystems) {
                assert_eq!((x.fncr_yv, x.fnrr_zu), (y.fncr_yv, y.fnrr_zu));
            }
        }
    }

    fn static_sub(c_v: &[&[i64]], b_z: &[&[i64]]) -> crate::model::SubsystemLft {
        let c_v = QMatrix::from_ints(c_v);
        let b_z = QMatrix::from_ints(b_z);
        let (m_y, m_v) = c_v.shape();
        let (m_z, m_u) = b_z.shape();
        SubsystemRealized {
            a_xx: QMatrix::from_ints(&[&[-1]]),
            a_xv: QMatrix::zeros(1, m_v),
            b_x: QMatrix::zeros(1, m_u),
            a_zx: QMatrix::zeros(m_z, 1),
            a_zv: QMatrix::zeros(m_z, m_v),
            b_z,
            c_x: QMatrix::zeros(m_y, 1),
            c_v,
            d_u: QMatrix::zeros(m_y, m_u),
        }
        .into_lft()
    }

    #[test]
    fn coefficient_stack_finds_witness() {
        // y = v1 + v2 from a single output hides which entry of Φ acts.
        let s0 = static_sub(&[&[1, 1]], &[&[1]]);
        let s1 = static_sub(&[&[1]], &[&[1], &[1]]);
        let model = NdsModel::new(vec![s0, s1], Scm::new(QMatrix::zeros(3, 3))).unwrap();
        let v = check(&model, MethodChoice::Auto, None).unwrap();
        assert_eq!(v.method, Method::CoefficientStack);
        assert_eq!(v.status, Status::Unidentifiable);
        let w = v.witness.unwrap();
        assert!(verify_witness(&model, &w).unwrap());
    }

    #[test]
    fn coefficient_stack_respects_mask() {
        let s0 = static_sub(&[&[1, 1]], &[&[1]]);
        let mut scm = Scm::new(QMatrix::zeros(2, 1));
        scm.free = Some(crate::polymat::Mat::from_fn(2, 1, |i, _| i == 0));
        let model = NdsModel::new(vec![s0], scm).unwrap();
        let v = check_coefficient_stack(&model).unwrap();
        assert_eq!(v.status, Status::Identifiable);
        assert_eq!(v.pairs[0].free_cols, 1);
    }
}
