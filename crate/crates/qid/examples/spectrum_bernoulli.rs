//! Compute the spectral decomposition log f(t) = it gamma0 + sum lambda_u
//! (e^{itu} - 1) for Bernoulli laws and compare against the Mercator series
//! log(1 + x/3) = sum (-1)^{n+1} 3^{-n} x^n / n.
//!
//! Run with: cargo run --release --example spectrum_bernoulli

use qid::laws;
use qid::spectral::spectrum_lattice;

fn main() {
    for p in [0.25, 0.75] {
        let law = laws::bernoulli(p);
        let spec = spectrum_lattice(&law, 0.5, 1024, 1e-14).unwrap();
        println!("bernoulli({p}): gamma0 = {:.12}, l1 norm = {:.12}", spec.gamma0, spec.l1_norm);
        for c in spec.coeffs.iter().take(8) {
            let n = c.u.abs() as i32;
            let series = if n % 2 == 1 { 1.0 } else { -1.0 } / (3f64.powi(n) * n as f64);
            println!(
                "  lambda at u = {:4}: {:+.12e}   series: {:+.12e}",
                c.u, c.lambda, series
            );
        }
    }
}
