//! Factorize a quasi-infinitely divisible law into a ratio of two infinitely
//! divisible laws f = f_pos / f_neg (equivalently F_pos = F * F_neg) and
//! report the numerical residual of the identity.
//!
//! Run with: cargo run --release --example factorize

use qid::laws;
use qid::spectral::spectrum_lattice;
use qid::triplet::{jordan_split, to_triplet, verify_factorization};

fn main() {
    let law = laws::bernoulli(0.25);
    let spec = spectrum_lattice(&law, 0.5, 1024, 1e-14).unwrap();
    let trip = to_triplet(&spec);
    let (pos, neg) = jordan_split(&trip).unwrap();

    println!("gamma = {:.12}, total variation = {:.12}", trip.gamma, trip.total_variation());
    println!(
        "positive factor: gamma = {:.12}, {} atoms, infinitely divisible: {}",
        pos.gamma,
        pos.atoms.len(),
        pos.is_infinitely_divisible()
    );
    println!(
        "negative factor: gamma = {:.12}, {} atoms, infinitely divisible: {}",
        neg.gamma,
        neg.atoms.len(),
        neg.is_infinitely_divisible()
    );

    let grid: Vec<f64> = (0..2048).map(|j| -30.0 + 60.0 * j as f64 / 2047.0).collect();
    let residual = verify_factorization(&law, &pos, &neg, &grid);
    println!("factorization residual over the grid: {residual:.3e}");
}
