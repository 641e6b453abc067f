use nlbench::isogeny::IsogenyMatrix;
use nlbench::siegel::{orthogonality_identities, phi_plane, period_vector, SiegelPair, Tolerance};
use nlbench::{SiegelPairF32, SiegelPairF64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(g: usize) -> impl Strategy<Value = IsogenyMatrix> {
    prop::collection::vec([-7i64..=7, -7i64..=7], 2 * g).prop_map(move |rows| IsogenyMatrix::new(g, rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identities_hold_in_double_precision(b in (1usize..=3).prop_flat_map(matrix), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = SiegelPairF64::random(b.genus(), &mut rng);
        let r = orthogonality_identities(&b, &pair, Tolerance::default()).unwrap();
        prop_assert!(r.max_rel_residual < 1e-9);
        prop_assert!(r.verdicts_agree());
        prop_assert!(phi_plane(&pair).unwrap().is_negative_definite(1e-9));
    }

    #[test]
    fn period_is_linear_in_the_matrix(b1 in matrix(2), b2 in matrix(2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = SiegelPairF64::random(2, &mut rng);
        let sum: Vec<[i64; 2]> = b1.rows().iter().zip(b2.rows()).map(|(x, y)| [x[0] + y[0], x[1] + y[1]]).collect();
        let bs = IsogenyMatrix::new(2, sum).unwrap();
        let (p1, p2, ps) = (period_vector(&b1, &pair).unwrap(), period_vector(&b2, &pair).unwrap(), period_vector(&bs, &pair).unwrap());
        for j in 0..2 {
            prop_assert!((p1[j] + p2[j] - ps[j]).norm() < 1e-9);
        }
    }

    #[test]
    fn identities_hold_in_single_precision(b in matrix(2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = SiegelPairF32::random(2, &mut rng);
        let tol = Tolerance { abs: 1e-3f32, rel: 1e-3 };
        let r = orthogonality_identities(&b, &pair, tol).unwrap();
        prop_assert!(r.max_rel_residual < 1e-3, "{}", r.max_rel_residual);
    }
}

#[test]
fn pair_validation_is_generic() {
    use num_complex::Complex;
    let bad = SiegelPair::<f32>::new(Complex::new(0.0, -1.0), vec![vec![Complex::new(0.0, 1.0)]], 1e-6);
    assert!(bad.is_err());
}
