//! Property-based invariants over randomly generated laws.

use proptest::prelude::*;

use qid::charfn::eval_cf;
use qid::law::make_law;
use qid::DiscreteLaw;

fn arb_law() -> impl Strategy<Value = DiscreteLaw> {
    // Up to 8 atoms with distinct positions and positive weights; weights are
    // normalized by make_law.
    proptest::collection::vec((-50.0f64..50.0, 0.05f64..1.0), 1..8).prop_filter_map(
        "distinct positions",
        |pairs| {
            let mut xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if xs.windows(2).any(|w| (w[1] - w[0]).abs() < 1e-6) {
                return None;
            }
            let total: f64 = pairs.iter().map(|p| p.1).sum();
            let scaled: Vec<(f64, f64)> = pairs.iter().map(|&(x, p)| (x, p / total)).collect();
            make_law(&scaled, 0.0).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn law_json_round_trip(law in arb_law()) {
        let text = law.to_json_string();
        let law2 = DiscreteLaw::from_json_str(&text).unwrap();
        prop_assert_eq!(law.atoms().len(), law2.atoms().len());
        for (a, b) in law.atoms().iter().zip(law2.atoms()) {
            prop_assert_eq!(a.x, b.x);
            // Loading renormalizes the masses, which may drift by one ulp.
            prop_assert!((a.p - b.p).abs() <= 1e-15);
        }
        prop_assert_eq!(law.tail_mass(), law2.tail_mass());
    }

    #[test]
    fn cf_conjugate_symmetry(law in arb_law(), t in -100.0f64..100.0) {
        let a = eval_cf(&law, t);
        let b = eval_cf(&law, -t).conj();
        prop_assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn cf_bounded_and_normalized(law in arb_law(), t in -100.0f64..100.0) {
        prop_assert!(eval_cf(&law, t).norm() <= 1.0 + 1e-12);
        prop_assert!((eval_cf(&law, 0.0) - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn masses_sum_to_one(law in arb_law()) {
        let total: f64 = law.atoms().iter().map(|a| a.p).sum::<f64>() + law.tail_mass();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
