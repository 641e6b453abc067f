use nlbench::lattice::{determinant, tensor_symplectic, GramLattice};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn gram_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(-6i64..=6, n * (n + 1) / 2).prop_map(move |upper| {
            let mut g = vec![vec![0; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i..n {
                    let x = it.next().unwrap();
                    g[i][j] = x;
                    g[j][i] = x;
                }
            }
            g
        })
    })
}

/// Product of elementary moves `e_i += t·e_j`, sign flips and swaps.
fn unimodular(n: usize, ops: &[(usize, usize, i64, u8)]) -> Vec<Vec<i64>> {
    let mut t: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, s, kind) in ops {
        let (i, j) = (i % n, j % n);
        match kind % 3 {
            0 if i != j => {
                for r in t.iter_mut() {
                    r[i] += s * r[j];
                }
            }
            1 => {
                for r in t.iter_mut() {
                    r[i] = -r[i];
                }
            }
            _ => {
                for r in t.iter_mut() {
                    r.swap(i, j);
                }
            }
        }
    }
    t
}

fn congruent(g: &[Vec<i64>], t: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                for b in 0..n {
                    out[i][j] += t[a][i] * g[a][b] * t[b][j];
                }
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn discriminant_invariant_under_base_change(
        g in gram_strategy(),
        ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2, 0u8..3), 0..8),
    ) {
        let l = GramLattice::from_rows(&g);
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let t = unimodular(g.len(), &ops);
        let m = GramLattice::from_rows(&congruent(&g, &t)).unwrap();
        prop_assert_eq!(l.discriminant_group(), m.discriminant_group());
        prop_assert_eq!(l.signature(), m.signature());
        prop_assert_eq!(l.determinant(), m.determinant());
    }

    #[test]
    fn order_is_absolute_determinant(g in gram_strategy()) {
        let l = GramLattice::from_rows(&g);
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let d = l.discriminant_group();
        prop_assert_eq!(d.order().clone(), determinant(l.gram()).abs());
        prop_assert!(d.divisibility_chain_holds());
    }

    #[test]
    fn signature_matches_determinant_sign(g in gram_strategy()) {
        let l = GramLattice::from_rows(&g);
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let (p, n) = l.signature();
        prop_assert_eq!(p + n, l.rank());
        let det = l.determinant();
        prop_assert_eq!(det.is_negative(), n % 2 == 1);
    }

    #[test]
    fn rescaling_multiplies_order(g in gram_strategy(), k in 1u64..6) {
        let l = GramLattice::from_rows(&g);
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let scaled = l.rescale(k).discriminant_group();
        let want = l.discriminant_group().order() * num_traits::pow(BigInt::from(k), l.rank());
        prop_assert_eq!(scaled.order().clone(), want);
    }

    #[test]
    fn json_round_trip(g in gram_strategy()) {
        let l = GramLattice::from_rows(&g);
        prop_assume!(l.is_ok());
        let l = l.unwrap();
        let back = GramLattice::from_json(&l.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, l);
    }
}

#[test]
fn tensor_lattices_are_unimodular_and_split() {
    for g in 1..=4 {
        let l = tensor_symplectic(g);
        assert!(l.discriminant_group().is_trivial());
        assert!(l.is_even());
        assert_eq!(l.signature(), (2 * g, 2 * g));
        assert!(!l.determinant().is_zero());
    }
}
