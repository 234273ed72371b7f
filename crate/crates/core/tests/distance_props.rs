mod common;

use nalgebra::DMatrix;
use ndsid::distance::{dsid_time, estimate, pair_distance, rng, to_dmatrix, FreqGrid, NumericNds, SimConfig};
use ndsid::ident::{check_coefficient_stack, Status};
use ndsid::model::circuit::reference_nds;
use ndsid::ratpoly::rat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn short_sim(seed: u64) -> SimConfig {
    SimConfig { samples: Some(2000), ..SimConfig::new(seed) }
}

#[test]
fn witness_pairs_have_zero_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut seen = 0;
    while seen < 10 {
        let m = common::random_zero_gzv_nds(&mut rng);
        let v = check_coefficient_stack(&m).unwrap();
        if v.status != Status::Unidentifiable {
            continue;
        }
        let w = v.witness.unwrap();
        let num = NumericNds::from_model(&m).unwrap();
        let (p1, p2) = (to_dmatrix(&w.phi1), to_dmatrix(&w.phi2));
        let d = pair_distance(&num, &p1, &p2, &FreqGrid::default()).unwrap();
        assert!(d.value <= 1e-9, "frequency distance {}", d.value);
        // Unstable closed loops can blow up in simulation; only stable ones are compared.
        if let Ok(t) = dsid_time(&num, &p1, &p2, &short_sim(1)) {
            assert!(t.value <= 1e-6 || !t.value.is_finite(), "time distance {}", t.value);
        }
        seen += 1;
    }
}

#[test]
fn equal_pair_has_zero_time_distance() {
    let num = NumericNds::from_model(&reference_nds(&rat(3, 10)).unwrap()).unwrap();
    let phi = rng::sample_scm(&num, &mut rng::stream(5, 1, 0, 0), 100).unwrap();
    assert_eq!(dsid_time(&num, &phi, &phi, &short_sim(5)).unwrap().value, 0.0);
}

#[test]
fn single_sample_is_finite_and_positive() {
    let e = estimate(&reference_nds(&rat(7, 10)).unwrap(), 1, 1, 9).unwrap();
    assert!(e.d_freq.is_finite() && e.d_freq > 0.0);
    assert!(e.d_time.is_finite() && e.d_time > 0.0);
    assert!(e.d_scm > 0.0);
}

#[test]
fn estimate_ignores_thread_count() {
    let m = reference_nds(&rat(1, 4)).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| estimate(&m, 12, 16, 42).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.d_freq.to_bits(), b.d_freq.to_bits());
    assert_eq!(a.d_time.to_bits(), b.d_time.to_bits());
    assert_eq!(a.phi1, b.phi1);
    assert_eq!(a.phi2, b.phi2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pair_distance_is_symmetric(seed in any::<u64>(), k in 1i64..20) {
        let num = NumericNds::from_model(&reference_nds(&rat(k, 20)).unwrap()).unwrap();
        let p1 = rng::sample_scm(&num, &mut rng::stream(seed, 1, 0, 0), 100).unwrap();
        let p2 = rng::sample_scm(&num, &mut rng::stream(seed, 2, 0, 0), 100).unwrap();
        let g = FreqGrid::default();
        let a = pair_distance(&num, &p1, &p2, &g).unwrap().value;
        let b = pair_distance(&num, &p2, &p1, &g).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn same_seed_same_estimate(seed in any::<u64>()) {
        let m = reference_nds(&rat(3, 5)).unwrap();
        let a = estimate(&m, 3, 4, seed).unwrap();
        let b = estimate(&m, 3, 4, seed).unwrap();
        prop_assert_eq!(a.d_freq.to_bits(), b.d_freq.to_bits());
        prop_assert_eq!(a.d_time.to_bits(), b.d_time.to_bits());
    }

    #[test]
    fn sampled_scm_respects_pattern(seed in any::<u64>()) {
        let num = NumericNds::from_model(&reference_nds(&rat(1, 2)).unwrap()).unwrap();
        let phi: DMatrix<f64> = rng::sample_scm(&num, &mut rng::stream(seed, 1, 0, 0), 100).unwrap();
        for i in 0..phi.nrows() {
            for j in 0..phi.ncols() {
                if !num.free.contains(&(i, j)) {
                    prop_assert_eq!(phi[(i, j)], num.phi_fixed[(i, j)]);
                } else {
                    prop_assert!(phi[(i, j)].abs() < 1.0);
                }
            }
        }
    }
}
