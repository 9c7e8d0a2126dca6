//! Ready-made discrete laws used throughout the tests and examples.

use crate::law::{make_law, DiscreteLaw};

/// Degenerate law at `a`.
pub fn dirac(a: f64) -> DiscreteLaw {
    make_law(&[(a, 1.0)], 0.0).expect("valid dirac law")
}

/// Bernoulli law: mass `1-p` at 0 and `p` at 1.
pub fn bernoulli(p: f64) -> DiscreteLaw {
    assert!(p > 0.0 && p < 1.0);
    make_law(&[(0.0, 1.0 - p), (1.0, p)], 0.0).expect("valid bernoulli law")
}

/// Uniform law on the given distinct points.
pub fn uniform(points: &[f64]) -> DiscreteLaw {
    let p = 1.0 / points.len() as f64;
    let pairs: Vec<(f64, f64)> = points.iter().map(|&x| (x, p)).collect();
    make_law(&pairs, 0.0).expect("valid uniform law")
}

/// Poisson law truncated where the pmf falls below 1e-18 past the mean;
/// the removed mass is tracked as tail_mass.
pub fn poisson(lambda: f64) -> DiscreteLaw {
    assert!(lambda > 0.0);
    let mut pairs = Vec::new();
    let mut pmf = (-lambda).exp();
    let mut total = 0.0;
    let mut k = 0usize;
    loop {
        pairs.push((k as f64, pmf));
        total += pmf;
        pmf *= lambda / (k + 1) as f64;
        k += 1;
        if pmf < 1e-18 && k as f64 > lambda {
            break;
        }
    }
    make_law(&pairs, (1.0 - total).max(0.0)).expect("valid poisson law")
}

/// Geometric law P(k) = p (1-p)^k, truncated with tracked tail.
pub fn geometric(p: f64) -> DiscreteLaw {
    assert!(p > 0.0 && p < 1.0);
    let q = 1.0 - p;
    let mut pairs = Vec::new();
    let mut pmf = p;
    let mut total = 0.0;
    let mut k = 0usize;
    while pmf >= 1e-18 {
        pairs.push((k as f64, pmf));
        total += pmf;
        pmf *= q;
        k += 1;
    }
    make_law(&pairs, (1.0 - total).max(0.0)).expect("valid geometric law")
}
