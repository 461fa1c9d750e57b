use num_complex::Complex64;
use proptest::prelude::*;
use wbinom_core::binomial::wbinom;
use wbinom_core::coeffs::{relative_error, Indeterminate, Monomial, SymPoly};
use wbinom_core::elliptic::theta;
use wbinom_core::ncalgebra::{normalize_formal, Atom, NCElement, Word};
use wbinom_core::oracle::{naive_normalize, single_rewrites};
use wbinom_core::symmetric::{complete_h, elementary_e};
use wbinom_core::weights::{small_weight, specialize, Family, WeightSpec};

fn weight_var() -> impl Strategy<Value = Indeterminate> {
    prop_oneof![
        3 => (1u32..4, 1u32..4).prop_map(|(s, t)| Indeterminate::w(s, t)),
        1 => (0u32..3, 1u32..3).prop_map(|(s, t)| Indeterminate::v(s, t)),
    ]
}

fn poly() -> impl Strategy<Value = SymPoly> {
    prop::collection::vec((-3i64..=3, prop::collection::vec((weight_var(), 1i32..=2), 0..3)), 1..4).prop_map(|terms| {
        terms.into_iter().fold(SymPoly::zero(), |acc, (c, factors)| {
            acc + SymPoly::monomial(Monomial::from_factors(factors)) * SymPoly::integer(c)
        })
    })
}

fn element() -> impl Strategy<Value = NCElement> {
    prop::collection::vec((0u32..3, 0u32..3, poly()), 0..4).prop_map(|terms| {
        let mut e = NCElement::zero();
        for (k, l, c) in terms {
            e.add_term(k, l, c);
        }
        e
    })
}

fn complex(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo.ln()..hi.ln(), 0.0..std::f64::consts::TAU).prop_map(|(r, phi)| Complex64::from_polar(r.exp(), phi))
}

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        4 => Just(Atom::X),
        4 => Just(Atom::Y),
        1 => weight_var().prop_map(|x| Atom::Weight(Monomial::var(x))),
    ]
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(atom(), 0..=10)
        .prop_filter("at most three weight atoms", |atoms| {
            atoms.iter().filter(|a| matches!(a, Atom::Weight(_))).count() <= 3
        })
        .prop_map(Word::new)
}

fn elliptic_spec() -> impl Strategy<Value = WeightSpec> {
    (complex(0.3, 1.5), complex(0.3, 1.5), complex(0.7, 1.3), complex(0.05, 0.3))
        .prop_filter_map("degenerate weights", |(a, b, q, p)| WeightSpec::elliptic(a, b, q, p).ok())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
    }

    #[test]
    fn multiplication_distributes(a in element(), b in element(), c in element()) {
        prop_assert_eq!(a.multiply(&b.add(&c)), a.multiply(&b).add(&a.multiply(&c)));
        prop_assert_eq!(b.add(&c).multiply(&a), b.multiply(&a).add(&c.multiply(&a)));
    }

    #[test]
    fn one_is_neutral(a in element()) {
        prop_assert_eq!(NCElement::one().multiply(&a), a.clone());
        prop_assert_eq!(a.multiply(&NCElement::one()), a);
    }

    #[test]
    fn specialization_is_a_ring_map(f in poly(), g in poly(), spec in elliptic_spec()) {
        let (Ok(fg), Ok(sf), Ok(sg)) = (
            specialize::<Complex64>(&(f.clone() * g.clone()), &spec),
            specialize::<Complex64>(&f, &spec),
            specialize::<Complex64>(&g, &spec),
        ) else {
            return Ok(());
        };
        prop_assert!(relative_error(fg, sf * sg) < 1e-9 || (fg - sf * sg).norm() < 1e-9);
        let sum = specialize::<Complex64>(&(f + g), &spec).unwrap();
        prop_assert!((sum - (sf + sg)).norm() <= 1e-9 * (1.0 + sf.norm() + sg.norm()));
    }

    #[test]
    fn json_round_trips(e in element(), spec in elliptic_spec()) {
        let text = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<NCElement>(&text).unwrap(), e);
        let back: WeightSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn every_rewrite_keeps_the_normal_form(w in word()) {
        let target = normalize_formal(&w);
        prop_assert_eq!(&naive_normalize(&w), &target);
        for r in single_rewrites(&w) {
            prop_assert_eq!(&normalize_formal(&r), &target);
        }
    }

    #[test]
    fn degrees_are_preserved(w in word()) {
        let (k, l, _) = normalize_formal(&w);
        prop_assert_eq!((k, l), w.degrees());
    }

    #[test]
    fn shifts_compose(ds1 in 0u32..3, dt1 in 0u32..3, ds2 in 0u32..3, dt2 in 0u32..3, s in 1u32..4, t in 1u32..4) {
        let spec = WeightSpec::generic();
        let twice: SymPoly = small_weight(&spec.shifted(ds1, dt1).shifted(ds2, dt2), s, t).unwrap();
        let once: SymPoly = small_weight(&spec.shifted(ds1 + ds2, dt1 + dt2), s, t).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn elliptic_shift_is_a_parameter_change(spec in elliptic_spec(), ds in 0u32..3, dt in 0u32..3, s in 1u32..4, t in 1u32..4) {
        let shifted = spec.shifted(ds, dt);
        if let (Ok(x), Ok(y)) = (
            small_weight::<Complex64>(&shifted, s, t),
            small_weight::<Complex64>(&shifted.absorb_shift().unwrap(), s, t),
        ) {
            prop_assert!(relative_error(x, y) < 1e-10);
        }
    }

    #[test]
    fn symmetric_functions_ignore_order(
        vars in prop::collection::vec(complex(0.2, 2.0), 1..6).prop_shuffle(),
        k in 0usize..5,
    ) {
        let mut sorted = vars.clone();
        sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
        prop_assert!(relative_error(complete_h(k, &vars), complete_h(k, &sorted)) < 1e-12);
        prop_assert!((elementary_e(k, &vars) - elementary_e(k, &sorted)).norm() <= 1e-12 * (1.0 + elementary_e(k, &sorted).norm()));
    }

    #[test]
    fn theta_inversion(x in complex(0.2, 2.0), p in complex(0.05, 0.35)) {
        let lhs = theta(x, p).unwrap();
        let rhs = -x * theta(x.inv(), p).unwrap();
        prop_assert!(relative_error(lhs, rhs) < 1e-11 || (lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn borders_and_gaussian_q(n in 0i64..9, qre in 0.5f64..1.5) {
        let spec = WeightSpec::generic();
        prop_assert_eq!(wbinom::<SymPoly>(&spec, n, 0).unwrap(), SymPoly::one());
        prop_assert_eq!(wbinom::<SymPoly>(&spec, n, n).unwrap(), SymPoly::one());
        prop_assert!(wbinom::<SymPoly>(&spec, n, n + 1).unwrap().is_zero());
        prop_assert!(wbinom::<SymPoly>(&spec, n, -1).unwrap().is_zero());
        // With constant weight q the coefficients satisfy the q-Pascal rule
        // [n+1,k] = [n,k] + q^{n+1-k}·[n,k-1].
        let q = Complex64::new(qre, 0.0);
        let qspec = WeightSpec::new(Family::Q { q: Some(q) }).unwrap();
        for k in 1..=n {
            let next: Complex64 = wbinom(&qspec, n + 1, k).unwrap();
            let want = wbinom::<Complex64>(&qspec, n, k).unwrap()
                + q.powi((n + 1 - k) as i32) * wbinom::<Complex64>(&qspec, n, k - 1).unwrap();
            prop_assert!(relative_error(next, want) < 1e-12);
        }
    }
}
