use std::collections::BTreeMap;

use nlbench::arith::frac;
use nlbench::theta::{short_vectors, theta_coset};
use nlbench::GramLattice;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

/// Even positive-definite Gram `2·AᵀA + 2·I`.
fn even_pd() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-2i64..=2, n * n).prop_map(move |a| {
            let mut g = vec![vec![0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    g[i][j] = 2 * (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum::<i64>();
                }
                g[i][i] += 2;
            }
            g
        })
    })
}

/// Box scan: `|x_i| ≤ √(M·(G⁻¹)_ii)` bounds every vector of norm `≤ M`.
fn box_scan(g: &[Vec<i64>], coset: &[f64], max_norm: f64) -> BTreeMap<i64, usize> {
    let n = g.len();
    let gf: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let inv = nlbench::linalg::inverse(&gf).unwrap();
    let bound: Vec<i64> = (0..n).map(|i| (max_norm * inv[i][i]).sqrt().ceil() as i64 + 1).collect();
    let mut out = BTreeMap::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        x: &mut Vec<i64>,
        bound: &[i64],
        g: &[Vec<i64>],
        coset: &[f64],
        max_norm: f64,
        out: &mut BTreeMap<i64, usize>,
    ) {
        if i == x.len() {
            let v: Vec<f64> = x.iter().zip(coset).map(|(a, c)| *a as f64 + c).collect();
            let q: f64 = (0..v.len()).map(|a| (0..v.len()).map(|b| v[a] * g[a][b] as f64 * v[b]).sum::<f64>()).sum();
            if q <= max_norm + 1e-9 {
                // norms scaled by 1000 to key on exact-enough values
                *out.entry((q * 1000.0).round() as i64).or_insert(0) += 1;
            }
            return;
        }
        for t in -bound[i]..=bound[i] {
            x[i] = t;
            rec(i + 1, x, bound, g, coset, max_norm, out);
        }
    }
    rec(0, &mut x, &bound, g, coset, max_norm, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn short_vectors_match_box_scan(g in even_pd(), m in 2i64..16) {
        let lat = GramLattice::from_rows(&g).unwrap();
        let zero = vec![BigRational::zero(); g.len()];
        let list = short_vectors(&lat, &zero, &BigRational::from_integer(m.into())).unwrap();
        let brute = box_scan(&g, &vec![0.0; g.len()], m as f64);
        let mine: BTreeMap<i64, usize> = list
            .by_norm
            .iter()
            .map(|(k, v)| (((k * BigRational::from_integer(1000.into())).to_integer()).try_into().unwrap(), v.len()))
            .collect();
        prop_assert_eq!(mine, brute);
        prop_assert!(list.closed_under_negation());
    }

    #[test]
    fn theta_coefficients_count_vectors(g in even_pd()) {
        let lat = GramLattice::from_rows(&g).unwrap();
        let zero = vec![BigRational::zero(); g.len()];
        let prec = 4u64;
        let q = theta_coset(&lat, &zero, prec).unwrap();
        let brute = box_scan(&g, &vec![0.0; g.len()], 2.0 * prec as f64);
        for k in 0..prec as i64 {
            let want = brute.get(&(2000 * k)).copied().unwrap_or(0);
            let e = BigRational::from_integer(k.into());
            prop_assert_eq!(q.coefficient_at(&e), BigInt::from(want));
        }
    }

    #[test]
    fn coset_series_symmetric_under_negation(g in even_pd(), pick in 0usize..64) {
        let lat = GramLattice::from_rows(&g).unwrap();
        let reps = lat.coset_representatives(1 << 12);
        prop_assume!(reps.is_ok());
        let reps = reps.unwrap();
        let delta = &reps[pick % reps.len()];
        let neg: Vec<BigRational> = delta.iter().map(|x| frac(&-x.clone())).collect();
        let a = theta_coset(&lat, delta, 3).unwrap();
        let b = theta_coset(&lat, &neg, 3).unwrap();
        prop_assert_eq!(a, b);
        let df: Vec<f64> = delta.iter().map(nlbench::arith::rat_to_f64).collect();
        let list = short_vectors(&lat, delta, &BigRational::from_integer(6.into())).unwrap();
        let brute = box_scan(&g, &df, 6.0);
        prop_assert_eq!(list.count(), brute.values().sum::<usize>());
    }
}
