//! Scan the ratio psi_tau(t) = f(t+tau) f(t-tau) / f(t)^2 and compare the
//! observed supremum with the uniform bound
//! exp{-sigma^2 tau^2 + 2 sum (1 - cos tau u) |lambda_u|}, which every
//! quasi-infinitely divisible law must respect. A law whose characteristic
//! function has a zero shows unbounded growth instead.
//!
//! Run with: cargo run --release --example psi_bound

use std::f64::consts::PI;

use qid::diagnostics::{psi_bound, psi_scan};
use qid::laws;
use qid::spectral::spectrum_lattice_auto;
use qid::triplet::to_triplet;

fn main() {
    let law = laws::poisson(1.5);
    let spec = spectrum_lattice_auto(&law, (-3f64).exp(), 1024, 1e-14).unwrap();
    let trip = to_triplet(&spec);

    println!("poisson(1.5): sup |psi_tau| against the uniform bound");
    for i in [4, 8, 12, 16] {
        let tau = i as f64 * PI / 16.0;
        let rep = psi_scan(&law, Some(&trip), tau, 12.0 * PI, 50_000).unwrap();
        let b = psi_bound(&trip, tau);
        println!(
            "  tau = {tau:.6}: sup = {:>12.6}  bound = {:>12.6}  hint = {:?}",
            rep.sup_observed, b, rep.verdict_hint
        );
    }

    // Bernoulli(0.5) has f(pi) = 0: psi_1 blows up near the zero.
    let rep = psi_scan(&laws::bernoulli(0.5), None, 1.0, 12.0 * PI, 50_000).unwrap();
    println!(
        "bernoulli(0.5): sup |psi_1| = {:.3e} ({} points skipped, hint = {:?})",
        rep.sup_observed, rep.skipped, rep.verdict_hint
    );
}
