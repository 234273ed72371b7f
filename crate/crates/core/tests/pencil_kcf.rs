mod common;

use ndsid::pencil::kcf;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inventory_survives_strict_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, inv) = common::random_kronecker_pencil(&mut rng, 6, 8);
        let q = common::scramble(&mut rng, &p);
        let f = kcf(&q).unwrap();
        prop_assert_eq!(f.reassemble(), q);
        prop_assert_eq!(f.inventory(), inv);
        prop_assert!(f.v.mul(&f.v_inv).is_identity());
    }

    #[test]
    fn dense_random_pencils_reassemble(seed in any::<u64>(), r in 1usize..5, c in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_int_matrix(&mut rng, r, c, 2, 0.6);
        let h = common::random_int_matrix(&mut rng, r, c, 2, 0.6);
        let p = ndsid::pencil::MatrixPencil::new(g, h).unwrap();
        let f = kcf(&p).unwrap();
        prop_assert_eq!(f.reassemble(), p);
    }
}
