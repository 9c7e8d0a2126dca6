//! The Levy-type triplet `(gamma, sigma^2, Lambda)` with a finite signed
//! atomic spectral function, conversions from spectra, the exponent
//! evaluation, the Jordan split into two infinitely divisible factors, and
//! FFT-based reconstruction of lattice laws.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::charfn::eval_cf;
use crate::error::TripletError;
use crate::law::{make_law, DiscreteLaw, LatticeStructure};
use crate::spectral::SpectralDecomposition;

use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaAtom {
    pub u: f64,
    pub w: f64,
}

/// Quasi-Levy triplet: drift, Gaussian variance, and a finite signed atomic
/// spectral function. Atoms are sorted by position and never sit at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiLevyTriplet {
    pub gamma: f64,
    pub sigma2: f64,
    pub atoms: Vec<LambdaAtom>,
}

impl QuasiLevyTriplet {
    pub fn new(gamma: f64, sigma2: f64, mut atoms: Vec<LambdaAtom>) -> Self {
        assert!(sigma2 >= 0.0);
        atoms.retain(|a| a.w != 0.0);
        assert!(atoms.iter().all(|a| a.u != 0.0), "no atom at u = 0");
        atoms.sort_by(|a, b| a.u.partial_cmp(&b.u).unwrap());
        for w in atoms.windows(2) {
            assert!(w[0].u < w[1].u, "atoms must be distinct");
        }
        QuasiLevyTriplet { gamma, sigma2, atoms }
    }

    /// Total variation of the spectral function.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.w.abs()).sum()
    }

    /// All atom weights nonnegative: the triplet is an ordinary infinitely
    /// divisible compound-Poisson-with-drift triplet.
    pub fn is_infinitely_divisible(&self) -> bool {
        self.atoms.iter().all(|a| a.w >= 0.0)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("triplet serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map_err(|e| format!("triplet JSON: {e}"))
    }
}

/// Convert a spectrum to its triplet: `gamma = gamma0 + sum lambda_u sin(u)`,
/// `sigma^2 = 0`, atoms straight from the coefficients.
pub fn to_triplet(spec: &SpectralDecomposition) -> QuasiLevyTriplet {
    let gamma = spec.gamma0
        + spec
            .coeffs
            .iter()
            .map(|c| c.lambda * c.u.sin())
            .sum::<f64>();
    let atoms = spec
        .coeffs
        .iter()
        .map(|c| LambdaAtom { u: c.u, w: c.lambda })
        .collect();
    QuasiLevyTriplet::new(gamma, 0.0, atoms)
}

/// The cumulative spectral function: sum of weights at or below `x` for
/// `x < 0`, minus the sum of weights above `x` for `x > 0`. Undefined at 0.
pub fn cumulative(trip: &QuasiLevyTriplet, x: f64) -> Result<f64, TripletError> {
    if x == 0.0 {
        return Err(TripletError::XIsZero);
    }
    if x < 0.0 {
        Ok(trip.atoms.iter().filter(|a| a.u <= x).map(|a| a.w).sum())
    } else {
        Ok(-trip.atoms.iter().filter(|a| a.u > x).map(|a| a.w).sum::<f64>())
    }
}

/// Evaluate the Levy-type exponent representation at t:
/// `exp(it gamma - sigma^2 t^2 / 2 + sum (e^{itu} - 1 - it sin u) w_u)`.
///
/// The compensator is `it sin u`, matching the drift formula of
/// [`to_triplet`] so the two parameterizations agree exactly.
pub fn eval_levy_exponent(trip: &QuasiLevyTriplet, t: f64) -> Complex64 {
    let mut exponent = Complex64::new(-trip.sigma2 * t * t / 2.0, t * trip.gamma);
    for a in &trip.atoms {
        let (s, c) = (t * a.u).sin_cos();
        exponent += a.w * Complex64::new(c - 1.0, s - t * a.u.sin());
    }
    exponent.exp()
}

/// Split a discrete-case triplet into two infinitely divisible triplets with
/// nonnegative atoms, so that `f = f_pos / f_neg`. The base drift is assigned
/// wholly to the positive factor.
pub fn jordan_split(
    trip: &QuasiLevyTriplet,
) -> Result<(QuasiLevyTriplet, QuasiLevyTriplet), TripletError> {
    if trip.sigma2 != 0.0 {
        return Err(TripletError::SigmaNotZero(trip.sigma2));
    }
    let pos: Vec<LambdaAtom> = trip.atoms.iter().filter(|a| a.w > 0.0).cloned().collect();
    let neg: Vec<LambdaAtom> = trip
        .atoms
        .iter()
        .filter(|a| a.w < 0.0)
        .map(|a| LambdaAtom { u: a.u, w: -a.w })
        .collect();
    let gamma_neg: f64 = neg.iter().map(|a| a.w * a.u.sin()).sum();
    let gamma_pos = trip.gamma + gamma_neg;
    Ok((
        QuasiLevyTriplet::new(gamma_pos, 0.0, pos),
        QuasiLevyTriplet::new(gamma_neg, 0.0, neg),
    ))
}

/// Max over the grid of `|f(t) f_neg(t) - f_pos(t)|`: the zero-free residual
/// of the rational factorization `f = f_pos / f_neg`.
pub fn verify_factorization(
    law: &DiscreteLaw,
    pos: &QuasiLevyTriplet,
    neg: &QuasiLevyTriplet,
    grid: &[f64],
) -> f64 {
    assert!(!grid.is_empty());
    grid.iter()
        .map(|&t| {
            (eval_cf(law, t) * eval_levy_exponent(neg, t) - eval_levy_exponent(pos, t)).norm()
        })
        .fold(0.0, f64::max)
}

/// Invert a lattice triplet back into a discrete law by sampling the exponent
/// over one period and inverse FFT. Atom positions of the triplet must lie on
/// the lattice. Small negative masses (FFT noise above -1e-9) are clipped;
/// anything more negative means the triplet is not a probability law.
pub fn reconstruct_lattice_law(
    trip: &QuasiLevyTriplet,
    structure: &LatticeStructure,
    n_fft: usize,
) -> Result<DiscreteLaw, TripletError> {
    if trip.sigma2 != 0.0 {
        return Err(TripletError::SigmaNotZero(trip.sigma2));
    }
    let h = structure.span;
    let a0 = structure.offset;
    for atom in &trip.atoms {
        let n = (atom.u / h).round();
        if (atom.u - n * h).abs() > 1e-9 * atom.u.abs().max(1.0) {
            return Err(TripletError::NotOnLattice(atom.u));
        }
    }
    let n = n_fft;
    let mut samples: Vec<Complex64> = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / (n as f64 * h);
            eval_levy_exponent(trip, t) * Complex64::from_polar(1.0, -t * a0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut samples);
    let scale = 1.0 / n as f64;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut clipped = 0.0;
    for (m, v) in samples.iter().enumerate() {
        let mass = v.re * scale;
        if mass < -1e-9 {
            return Err(TripletError::NotAProbabilityLaw { index: m, mass });
        }
        if mass > 1e-12 {
            pairs.push((a0 + m as f64 * h, mass));
        } else {
            clipped += mass.max(0.0);
        }
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let tail = (1.0 - total).max(0.0).max(clipped);
    make_law(&pairs, tail).map_err(|_| TripletError::NotAProbabilityLaw { index: 0, mass: 0.0 })
}
