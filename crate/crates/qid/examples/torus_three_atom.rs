//! Torus lift for a law with rationally independent support {0, 1, sqrt 2}:
//! f(t) = Phi(t, sqrt2 t) for the bivariate polynomial Phi, the line is dense
//! on the torus, and min |Phi| over the torus certifies inf |f| on the line.
//!
//! Run with: cargo run --release --example torus_three_atom

use qid::charfn::{qid_verdict, SearchBudget};
use qid::law::{detect_generating_basis, make_law};
use qid::spectral::{eval_from_spectrum, spectrum_torus};
use qid::charfn::eval_cf;

fn main() {
    let s = 2f64.sqrt();
    let law = make_law(&[(0.0, 0.8), (1.0, 0.1), (s, 0.1)], 0.0).unwrap();

    let v = qid_verdict(&law, &SearchBudget::default());
    println!(
        "{{0: 0.8, 1: 0.1, sqrt2: 0.1}}: {:?}, inf|f| = {:.9} (certified: {})",
        v.tag,
        v.mu.unwrap(),
        v.report.certified
    );

    let basis = detect_generating_basis(&law, 3, 1000, 1e-9).unwrap();
    println!("generators: {:?}", basis.generators);
    let spec = spectrum_torus(&law, &basis, v.mu.unwrap(), 1024, 1e-14).unwrap();
    println!("spectral coefficients (leading):");
    for c in spec.coeffs.iter().take(6) {
        println!("  lambda at u = {:>12.9}: {:+.9e}", c.u, c.lambda);
    }

    let mut worst = 0.0f64;
    for j in 0..2000 {
        let t = -50.0 + 100.0 * j as f64 / 1999.0;
        worst = worst.max((eval_from_spectrum(&spec, t) - eval_cf(&law, t)).norm());
    }
    println!("round-trip error on [-50, 50]: {worst:.3e}");
}
