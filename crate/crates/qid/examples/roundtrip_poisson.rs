//! Full pipeline on a truncated Poisson law: law -> spectrum -> triplet ->
//! reconstructed law, reporting the worst atom-mass discrepancy.
//!
//! Run with: cargo run --release --example roundtrip_poisson

use qid::law::detect_lattice;
use qid::laws;
use qid::spectral::spectrum_lattice_auto;
use qid::triplet::{reconstruct_lattice_law, to_triplet};

fn main() {
    let law = laws::poisson(2.0);
    let mu = (-2.0f64 * 2.0).exp(); // |f(pi)| = e^{-2 lambda}
    let lat = detect_lattice(&law, 1_000_000, 1e-9).unwrap();

    let spec = spectrum_lattice_auto(&law, mu, 1024, 1e-14).unwrap();
    let trip = to_triplet(&spec);
    println!(
        "poisson(2): gamma0 = {:.12}, leading lambda = {:.12} at u = {}",
        spec.gamma0, spec.coeffs[0].lambda, spec.coeffs[0].u
    );

    let rec = reconstruct_lattice_law(&trip, &lat, 4096).unwrap();
    let mut worst = 0.0f64;
    for a in law.atoms() {
        let got = rec
            .atoms()
            .iter()
            .find(|b| (b.x - a.x).abs() < 1e-9)
            .map_or(0.0, |b| b.p);
        worst = worst.max((got - a.p).abs());
    }
    println!("reconstructed {} atoms, worst mass discrepancy = {worst:.3e}", rec.atoms().len());
}
