use nlbench::star::{satisfies_star, witness_is_valid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn star_is_inherited_by_multiples(n in 1u64..100_000, k in 1u64..2_000) {
        let v = satisfies_star(n).unwrap();
        prop_assert!(witness_is_valid(&v));
        if v.satisfied {
            prop_assert!(satisfies_star(n * k).unwrap().satisfied);
        }
    }
}
