mod common;

use ndsid::polymat::{normal_rank, rat_det, smith_form, smith_mcmillan, Mat, PolyMatrix};
use ndsid::ratpoly::Degree;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly_matrix<R: Rng>(rng: &mut R, r: usize, c: usize) -> PolyMatrix {
    Mat::from_fn(r, c, |_, _| {
        if rng.gen_bool(0.3) {
            ndsid::ratpoly::Poly::zero()
        } else {
            let d = rng.gen_range(0..=2);
            common::random_poly(rng, d, false)
        }
    })
}

fn is_unimodular(m: &PolyMatrix) -> bool {
    let d = rat_det(&m.to_ratfunc()).unwrap();
    d.as_constant().is_some_and(|c| c != ndsid::ratpoly::int(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn smith_form_is_sound(seed in any::<u64>(), r in 1usize..4, c in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_poly_matrix(&mut rng, r, c);
        let s = smith_form(&m);
        prop_assert_eq!(s.u.mul(&s.diagonal()).mul(&s.v), m.clone());
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        prop_assert_eq!(s.rank(), normal_rank(&m.to_ratfunc()));
        for f in &s.factors {
            prop_assert!(f.is_monic());
        }
        for w in s.factors.windows(2) {
            prop_assert!(w[1].divisible_by(&w[0]));
        }
    }

    #[test]
    fn smith_mcmillan_is_sound(seed in any::<u64>(), r in 1usize..4, c in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_ratfunc_matrix(&mut rng, r, c);
        let s = smith_mcmillan(&g);
        prop_assert_eq!(s.reassemble(), g.clone());
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        prop_assert_eq!(s.rank(), normal_rank(&g));
        for (a, b) in s.alpha.iter().zip(&s.beta) {
            prop_assert!(a.is_monic() && b.is_monic());
            prop_assert_eq!(ndsid::ratpoly::Poly::gcd(a, b).degree(), Degree::Fin(0));
        }
        for k in 1..s.rank() {
            prop_assert!(s.alpha[k].divisible_by(&s.alpha[k - 1]));
            prop_assert!(s.beta[k - 1].divisible_by(&s.beta[k]));
        }
    }
}

#[test]
fn zero_matrix_has_rank_zero() {
    let s = smith_mcmillan(&ndsid::polymat::RatMatrix::zeros(2, 3));
    assert_eq!(s.rank(), 0);
    assert_eq!(s.v_head().rows(), 0);
    assert_eq!(s.u_head().cols(), 0);
}
