//! Cross-check the FFT spectral coefficients against Bohr mean values
//! (1/2T) \int_{-T}^{T} log f(t) e^{-iut} dt computed with the distinguished
//! logarithm along the line — an almost-periodic-function view of the same
//! coefficients.
//!
//! Run with: cargo run --release --example bohr_crosscheck

use std::f64::consts::PI;

use qid::laws;
use qid::spectral::{bohr_coefficient, spectrum_lattice_auto};

fn main() {
    let law = laws::poisson(2.0);
    let spec = spectrum_lattice_auto(&law, (-4f64).exp(), 1024, 1e-14).unwrap();

    println!("poisson(2): FFT coefficients vs Bohr means over T = 100 pi");
    for n in 1..=5 {
        let fft = spec
            .coeffs
            .iter()
            .find(|c| (c.u - n as f64).abs() < 1e-9)
            .map_or(0.0, |c| c.lambda);
        let bohr = bohr_coefficient(&law, n as f64, 100.0 * PI, (1 << 20) + 1).unwrap();
        println!(
            "  u = {n}: fft = {fft:+.12e}   bohr = {:+.12e} {:+.3e}i",
            bohr.re, bohr.im
        );
    }
}
