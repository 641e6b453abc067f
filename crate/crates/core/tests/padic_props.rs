use nlbench::arith::{rat, rat_int};
use nlbench::padic::{fourier_transform, CyclotomicScalar, PadicBox, Polarization, SchwartzFunction};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

type Term = (i64, i64, u32, Vec<(i64, i64, i64)>);

fn build(p: u64, dim: usize, terms: &[Term]) -> SchwartzFunction {
    let mut f = SchwartzFunction::zero(p, dim);
    let p2 = (p * p) as i64;
    for (num, den, root, coords) in terms {
        let c = CyclotomicScalar::root(p, &rat(*root as i64, p2)).scale(&rat(*num, *den));
        let boxes: Vec<(BigRational, i64)> = coords
            .iter()
            .take(dim)
            .map(|&(a, e, k)| (rat_int(a) * nlbench::arith::p_pow(p, -e), k))
            .collect();
        f.push(c, PadicBox::new(p, &boxes));
    }
    f
}

fn inputs() -> impl Strategy<Value = (u64, usize, Vec<Term>)> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=2).prop_flat_map(|(p, dim)| {
        let term = (-5i64..=5, 1i64..=4, 0u32..25, prop::collection::vec((0i64..30, 0i64..=1, -1i64..=2), 2));
        (Just(p), Just(dim), prop::collection::vec(term, 1..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn double_transform_is_reflection((p, dim, terms) in inputs()) {
        let f = build(p, dim, &terms);
        let pol = Polarization::full(dim);
        let ff = fourier_transform(&fourier_transform(&f, &pol).unwrap(), &pol).unwrap();
        prop_assert!(ff.same_function(&f.reflect()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn integral_is_transform_at_zero((p, dim, terms) in inputs()) {
        let f = build(p, dim, &terms);
        let hat = fourier_transform(&f, &Polarization::full(dim)).unwrap();
        prop_assert_eq!(f.integral(), hat.eval(&vec![BigRational::zero(); dim]));
    }

    #[test]
    fn normal_form_preserves_values((p, dim, terms) in inputs(), pts in prop::collection::vec((-40i64..40, 0i64..=2), 2)) {
        let f = build(p, dim, &terms);
        let n = f.normalized().unwrap();
        let x: Vec<BigRational> = pts.iter().take(dim).map(|&(a, e)| rat_int(a) * nlbench::arith::p_pow(p, -e)).collect();
        prop_assert_eq!(f.eval(&x), n.eval(&x));
        prop_assert_eq!(f.integral(), n.integral());
    }

    #[test]
    fn scalars_form_a_ring(p in prop::sample::select(vec![2u64, 3, 5, 7]), a in 0i64..49, b in 0i64..49, c in 0i64..343, q in -9i64..9) {
        let x = CyclotomicScalar::root(p, &rat(a, (p * p) as i64)).add(&CyclotomicScalar::rational(p, rat_int(q)));
        let y = CyclotomicScalar::root(p, &rat(b, (p * p) as i64));
        let z = CyclotomicScalar::root(p, &rat(c, (p * p * p) as i64)).scale(&rat(q, 7));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        let num = (x.mul(&y).to_complex() - x.to_complex() * y.to_complex()).norm();
        prop_assert!(num < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn section_agrees_with_plain_box_form(
        p in prop::sample::select(vec![2u64, 3, 5]),
        shifts in prop::collection::vec((0i64..9, -1i64..=2), 4),
        g in (1i64..6, -5i64..5, -5i64..5, 0i64..=2),
    ) {
        let mut f = SchwartzFunction::zero(p, 4);
        let cell: Vec<(BigRational, i64)> = shifts.iter().map(|&(a, k)| (rat_int(a), k)).collect();
        f.push(CyclotomicScalar::one(p), PadicBox::new(p, &cell));
        let hat = fourier_transform(&f, &Polarization::m2_first_row()).unwrap();
        let (a, b, c, e) = g;
        let m = nlbench::padic::section::m2(
            rat_int(a),
            rat_int(b),
            rat_int(c) * nlbench::arith::p_pow(p, e),
            rat_int(1 + a * b * 3),
        );
        prop_assume!(!nlbench::padic::section::det(&m).is_zero());
        let direct = nlbench::padic::siegel_weil_section(&hat, &m).unwrap();
        let plain = nlbench::padic::siegel_weil_section(&hat.normalized().unwrap(), &m).unwrap();
        prop_assert_eq!(direct, plain);
    }
}
