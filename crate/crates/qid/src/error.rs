//! Error types for every stage of the pipeline.

use thiserror::Error;

use crate::charfn::InfimumReport;

/// Errors from constructing or validating a [`crate::law::DiscreteLaw`].
#[derive(Debug, Error)]
pub enum LawError {
    #[error("duplicate atom position {0}")]
    DuplicateAtom(f64),
    #[error("masses plus tail sum to {total}, deviation from 1 exceeds 1e-9")]
    MassNotNormalized { total: f64 },
    #[error("law has no atoms with positive mass")]
    EmptySupport,
    #[error("negative mass {mass} at position {x}")]
    NegativeMass { x: f64, mass: f64 },
    #[error("negative tail mass {0}")]
    NegativeTailMass(f64),
}

/// Errors from the modulus-infimum search.
#[derive(Debug, Error)]
pub enum CharfnError {
    #[error("evaluation budget exhausted before certification")]
    BudgetExhausted { report: InfimumReport },
}

/// Errors from spectral extraction.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid too coarse for safe phase unwrapping (max arg jump {max_jump:.3} rad)")]
    GridTooCoarse { max_jump: f64 },
    #[error("law support is not a lattice")]
    NotLattice,
    #[error("Fourier coefficient at u={u} has imaginary part {imag:.3e} above tolerance")]
    CoefficientNotReal { u: f64, imag: f64 },
    #[error("constant Fourier mode off by {deviation:.3e}; spectrum does not normalize f(0)=1")]
    NormalizationFailed { deviation: f64 },
    #[error("two multi-indices map to frequencies {u0} and {u1} closer than the separation tolerance")]
    BasisCollision { u0: f64, u1: f64 },
    #[error("n_fft must be a power of two and at least 4x the atom count (got {0})")]
    BadGrid(usize),
    #[error("torus dimension {0} exceeds the supported cap of 3")]
    DimensionTooLarge(usize),
    #[error("zero of f on the integration path at t={0}")]
    ZeroOnPath(f64),
}

/// Errors from triplet operations.
#[derive(Debug, Error)]
pub enum TripletError {
    #[error("cumulative spectral function is undefined at x=0")]
    XIsZero,
    #[error("sigma^2 = {0} but the discrete pipeline requires sigma^2 = 0")]
    SigmaNotZero(f64),
    #[error("atom at u={0} does not lie on the reconstruction lattice")]
    NotOnLattice(f64),
    #[error("reconstruction produced mass {mass:.3e} at lattice index {index}; not a probability law")]
    NotAProbabilityLaw { index: usize, mass: f64 },
}

/// Errors from the psi_tau diagnostics.
#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("|f(t)| = {abs_f:.3e} at t={t}; denominator of psi_tau is numerically zero")]
    DenominatorNearZero { t: f64, abs_f: f64 },
    #[error("every scan point had |f| below the zero tolerance")]
    AllPointsSkipped,
    #[error("infimum report carries no record minima to probe")]
    NoRecordMinima,
}
