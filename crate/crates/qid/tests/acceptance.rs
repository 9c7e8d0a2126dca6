//! End-to-end acceptance suite. Each criterion prints a single PASS/FAIL
//! line; run with `cargo test --test acceptance -- --nocapture` to see them
//! on the terminal.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use qid::charfn::{eval_cf, SearchBudget, VerdictTag};
use qid::diagnostics::{psi_bound, psi_scan};
use qid::law::{detect_generating_basis, detect_lattice, make_law};
use qid::laws;
use qid::spectral::{bohr_coefficient, eval_from_spectrum, spectrum_lattice, spectrum_torus};
use qid::triplet::{
    cumulative, eval_levy_exponent, jordan_split, reconstruct_lattice_law, to_triplet,
    verify_factorization,
};
use qid::{qid_verdict, DiscreteLaw, SpectralDecomposition};

fn report(name: &str, f: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(f) {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(e) => {
            println!("acceptance {name}: FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

fn coeff_at(spec: &SpectralDecomposition, u: f64) -> f64 {
    spec.coeffs
        .iter()
        .find(|c| (c.u - u).abs() < 1e-9)
        .map(|c| c.lambda)
        .unwrap_or(0.0)
}

/// The QID lattice laws exercised across the round-trip criteria.
fn qid_lattice_corpus() -> Vec<(&'static str, DiscreteLaw, f64)> {
    vec![
        ("bernoulli(0.3)", laws::bernoulli(0.3), 0.4),
        ("bernoulli(0.25)", laws::bernoulli(0.25), 0.5),
        ("bernoulli(0.75)", laws::bernoulli(0.75), 0.5),
        ("poisson(2)", laws::poisson(2.0), (-4f64).exp()),
        ("poisson(1.5)", laws::poisson(1.5), (-3f64).exp()),
        ("geometric(0.5)", laws::geometric(0.5), 1.0 / 3.0),
    ]
}

fn lattice_spectrum(law: &DiscreteLaw, mu: f64) -> SpectralDecomposition {
    let n0 = (4 * law.atoms().len()).next_power_of_two().max(1024);
    qid::spectral::spectrum_lattice_auto(law, mu, n0, 1e-14).unwrap()
}

#[test]
fn criterion_1_verdict_corpus() {
    report("criterion 1 (QID criterion corpus)", || {
        let t0 = Instant::now();
        let budget = SearchBudget::default();

        let v = qid_verdict(&laws::bernoulli(0.3), &budget);
        assert_eq!(v.tag, VerdictTag::Qid);
        assert!((v.mu.unwrap() - 0.4).abs() < 1e-9, "mu = {:?}", v.mu);

        let v = qid_verdict(&laws::bernoulli(0.5), &budget);
        assert_eq!(v.tag, VerdictTag::NotQid);
        assert!((v.witness.unwrap() - PI).abs() < 1e-6);

        let v = qid_verdict(&laws::dirac(2.5), &budget);
        assert_eq!(v.tag, VerdictTag::Qid);
        assert!((v.mu.unwrap() - 1.0).abs() < 1e-12);

        let v = qid_verdict(&laws::uniform(&[0.0, 1.0, 2.0]), &budget);
        assert_eq!(v.tag, VerdictTag::NotQid);
        assert!((v.witness.unwrap() - TAU / 3.0).abs() < 1e-6);

        let mut budget = SearchBudget::default();
        budget.max_evals = 400_000;
        let v = qid_verdict(&laws::uniform(&[0.0, 1.0, 2f64.sqrt()]), &budget);
        assert_eq!(v.tag, VerdictTag::Inconclusive);
        let rec = &v.report.record_minima;
        assert!(rec.len() >= 3, "records: {}", rec.len());
        for w in rec.windows(2) {
            assert!(w[1].1 < w[0].1, "records not strictly decreasing");
        }
        assert!(rec.last().unwrap().1 < 0.05, "last record {}", rec.last().unwrap().1);

        assert!(t0.elapsed().as_secs_f64() < 10.0, "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_2_spectral_oracles() {
    report("criterion 2 (closed-form spectral oracles)", || {
        let t0 = Instant::now();

        let spec = spectrum_lattice(&laws::bernoulli(0.25), 0.5, 1024, 1e-14).unwrap();
        for n in 1..=20 {
            let expect = if n % 2 == 1 { 1.0 } else { -1.0 } / (3f64.powi(n) * n as f64);
            assert!(
                (coeff_at(&spec, n as f64) - expect).abs() < 1e-10,
                "bernoulli(0.25) lambda_{n}"
            );
        }

        let spec = spectrum_lattice(&laws::bernoulli(0.75), 0.5, 1024, 1e-14).unwrap();
        assert!((spec.gamma0 - 1.0).abs() < 1e-10, "gamma0 = {}", spec.gamma0);
        for n in 1..=20 {
            let expect = if n % 2 == 1 { 1.0 } else { -1.0 } / (3f64.powi(n) * n as f64);
            assert!(
                (coeff_at(&spec, -(n as f64)) - expect).abs() < 1e-10,
                "bernoulli(0.75) lambda_-{n}"
            );
        }

        let spec = lattice_spectrum(&laws::poisson(2.0), (-4f64).exp());
        assert!((coeff_at(&spec, 1.0) - 2.0).abs() < 1e-10);
        for c in &spec.coeffs {
            if (c.u - 1.0).abs() > 1e-9 {
                assert!(c.lambda.abs() < 1e-10, "poisson lambda at u = {}", c.u);
            }
        }

        let spec = lattice_spectrum(&laws::geometric(0.5), 1.0 / 3.0);
        for n in 1..=20 {
            let expect = 0.5f64.powi(n) / n as f64;
            assert!(
                (coeff_at(&spec, n as f64) - expect).abs() < 1e-10,
                "geometric lambda_{n}"
            );
        }
        for c in &spec.coeffs {
            assert!(c.lambda >= 0.0, "geometric must be infinitely divisible");
        }

        assert!(t0.elapsed().as_secs_f64() < 5.0, "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_3_round_trip() {
    report("criterion 3 (representation round-trip)", || {
        let t0 = Instant::now();
        for (name, law, mu) in qid_lattice_corpus() {
            let lat = detect_lattice(&law, 1_000_000, 1e-9).unwrap();
            let spec = lattice_spectrum(&law, mu);

            // One period of |f| in t has length 2 pi / span.
            let period = TAU / lat.span;
            let n = 4096;
            let mut worst = 0.0f64;
            for j in 0..n {
                let t = -period / 2.0 + period * j as f64 / (n - 1) as f64;
                let d = (eval_from_spectrum(&spec, t) - eval_cf(&law, t)).norm();
                worst = worst.max(d);
            }
            assert!(worst < 1e-8, "{name}: cf mismatch {worst}");

            let trip = to_triplet(&spec);
            let n_fft = (4 * law.atoms().len()).next_power_of_two().max(4096);
            let rec = reconstruct_lattice_law(&trip, &lat, n_fft).unwrap();
            let mut worst_mass = 0.0f64;
            for a in law.atoms() {
                let got = rec
                    .atoms()
                    .iter()
                    .find(|b| (b.x - a.x).abs() < 1e-9)
                    .map(|b| b.p)
                    .unwrap_or(0.0);
                worst_mass = worst_mass.max((got - a.p).abs());
            }
            for b in rec.atoms() {
                if !law.atoms().iter().any(|a| (b.x - a.x).abs() < 1e-9) {
                    worst_mass = worst_mass.max(b.p);
                }
            }
            assert!(worst_mass < 1e-6, "{name}: mass discrepancy {worst_mass}");
        }
        assert!(t0.elapsed().as_secs_f64() < 10.0, "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_4_triplet_formulas() {
    report("criterion 4 (triplet exponent and cumulative)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (name, law, mu) in qid_lattice_corpus() {
            let spec = lattice_spectrum(&law, mu);
            let trip = to_triplet(&spec);
            for _ in 0..10_000 {
                let t: f64 = rng.gen_range(-100.0..100.0);
                let a = eval_levy_exponent(&trip, t);
                let b = eval_from_spectrum(&spec, t);
                assert!((a - b).norm() < 1e-12, "{name}: exponent mismatch at t = {t}");
            }
            // Cumulative values against direct partial sums of the series.
            for j in 0..100 {
                let x = -25.0 + 50.5 * j as f64 / 99.0;
                if x == 0.0 {
                    continue;
                }
                let direct: f64 = if x < 0.0 {
                    trip.atoms.iter().filter(|a| a.u <= x).map(|a| a.w).sum()
                } else {
                    -trip.atoms.iter().filter(|a| a.u > x).map(|a| a.w).sum::<f64>()
                };
                let got = cumulative(&trip, x).unwrap();
                assert!((got - direct).abs() < 1e-12, "{name}: cumulative at x = {x}");
            }
        }
    });
}

#[test]
fn criterion_5_rational_factorization() {
    report("criterion 5 (rational factorization)", || {
        for (name, law, mu) in qid_lattice_corpus() {
            let spec = lattice_spectrum(&law, mu);
            let trip = to_triplet(&spec);
            let (pos, neg) = jordan_split(&trip).unwrap();
            assert!(pos.is_infinitely_divisible(), "{name}: positive factor");
            assert!(neg.is_infinitely_divisible(), "{name}: negative factor");
            let grid: Vec<f64> = (0..1024).map(|j| -40.0 + 80.0 * j as f64 / 1023.0).collect();
            let resid = verify_factorization(&law, &pos, &neg, &grid);
            assert!(resid < 1e-8, "{name}: residual {resid}");
        }
    });
}

#[test]
fn criterion_6_psi_bound() {
    report("criterion 6 (psi_tau uniform bound)", || {
        let t0 = Instant::now();
        let window = 12.0 * PI;
        let n = 100_000;
        for (name, law, mu) in qid_lattice_corpus() {
            let spec = lattice_spectrum(&law, mu);
            let trip = to_triplet(&spec);
            for i in 1..=32 {
                let tau = i as f64 * PI / 16.0;
                let rep = psi_scan(&law, Some(&trip), tau, window, n).unwrap();
                let b = psi_bound(&trip, tau);
                assert!(
                    rep.sup_observed <= b * (1.0 + 1e-6),
                    "{name}: tau = {tau}, sup {} > bound {b}",
                    rep.sup_observed
                );
            }
        }

        // Poisson(1.5) attains the bound with equality at tau = pi.
        let law = laws::poisson(1.5);
        let spec = lattice_spectrum(&law, (-3f64).exp());
        let trip = to_triplet(&spec);
        let rep = psi_scan(&law, Some(&trip), PI, window, n).unwrap();
        let b = psi_bound(&trip, PI);
        assert!((rep.sup_observed / b - 1.0).abs() < 1e-6, "sup {} bound {b}", rep.sup_observed);
        assert!((b - 6f64.exp()).abs() < 1e-6 * 6f64.exp());

        // Bernoulli(0.5) has a zero: |psi_1| blows up past 1e3.
        let rep = psi_scan(&laws::bernoulli(0.5), None, 1.0, window, n).unwrap();
        assert!(rep.sup_observed > 1e3, "sup {}", rep.sup_observed);

        assert!(t0.elapsed().as_secs_f64() < 20.0, "took {:?}", t0.elapsed());
    });
}

#[test]
fn criterion_7_bohr_cross_check() {
    report("criterion 7 (Bohr mean cross-check)", || {
        for (law, mu) in [
            (laws::poisson(2.0), (-4f64).exp()),
            (laws::bernoulli(0.25), 0.5),
        ] {
            let spec = lattice_spectrum(&law, mu);
            for n in 1..=5 {
                let c = bohr_coefficient(&law, n as f64, 100.0 * PI, (1 << 20) + 1).unwrap();
                let expect = coeff_at(&spec, n as f64);
                assert!(
                    (c - Complex64::new(expect, 0.0)).norm() < 1e-9,
                    "u = {n}: bohr {c} vs fft {expect}"
                );
            }
        }
    });
}

#[test]
fn criterion_8_torus_lift() {
    report("criterion 8 (torus lift)", || {
        let t0 = Instant::now();
        let s = 2f64.sqrt();
        let law = make_law(&[(0.0, 0.8), (1.0, 0.1), (s, 0.1)], 0.0).unwrap();

        let budget = SearchBudget::default();
        let v = qid_verdict(&law, &budget);
        assert_eq!(v.tag, VerdictTag::Qid);
        assert!(v.report.certified);
        assert!((v.mu.unwrap() - 0.6).abs() < 1e-6, "mu = {:?}", v.mu);

        let basis = detect_generating_basis(&law, 3, 1000, 1e-9).unwrap();
        let spec = spectrum_torus(&law, &basis, 0.6, 1024, 1e-14).unwrap();
        // Bivariate Mercator series for log(0.8 + 0.1 z + 0.1 w):
        // lambda_{m,k} of z^m w^k from log(1 + (z+w)/8); the leading terms.
        assert!((coeff_at(&spec, 1.0) - 0.125).abs() < 1e-8);
        assert!((coeff_at(&spec, s) - 0.125).abs() < 1e-8);
        assert!((coeff_at(&spec, 1.0 + s) + 0.015625).abs() < 1e-8);

        let n = 4096;
        let mut worst = 0.0f64;
        for j in 0..n {
            let t = -50.0 + 100.0 * j as f64 / (n - 1) as f64;
            worst = worst.max((eval_from_spectrum(&spec, t) - eval_cf(&law, t)).norm());
        }
        assert!(worst < 1e-6, "round-trip worst {worst}");

        assert!(t0.elapsed().as_secs_f64() < 60.0, "took {:?}", t0.elapsed());
    });
}
