//! The ratio `psi_tau(t) = f(t+tau) f(t-tau) / f(t)^2` and its explicit
//! uniform bound for quasi-infinitely divisible laws.
//!
//! For a law with triplet `(gamma, sigma^2, Lambda)` the ratio satisfies
//! `sup_t |psi_tau| <= exp(-sigma^2 tau^2 + 2 int (1 - cos(tau x)) d|Lambda|)`.
//! A law whose |f| creeps toward zero while staying zero-free blows this sup
//! up along the record minima, which is the mechanism the divergence probe
//! turns into empirical evidence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charfn::{eval_cf, eval_cf_grid, modulus_infimum, SearchBudget};
use crate::error::{CharfnError, DiagnosticsError};
use crate::law::DiscreteLaw;
use crate::triplet::QuasiLevyTriplet;

use std::f64::consts::PI;

/// |f| at or below this counts as a vanishing denominator.
pub const DENOM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictHint {
    #[serde(rename = "BOUND_RESPECTED")]
    BoundRespected,
    #[serde(rename = "BOUND_VIOLATED")]
    BoundViolated,
    #[serde(rename = "UNBOUNDED_EVIDENCE")]
    UnboundedEvidence,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiReport {
    pub tau: f64,
    pub sup_observed: f64,
    pub t_at_sup: f64,
    /// Present when a triplet was supplied.
    pub bound: Option<f64>,
    /// Grid points actually evaluated (skips excluded).
    pub samples: usize,
    pub skipped: usize,
    pub verdict_hint: VerdictHint,
}

/// `f(t+tau) f(t-tau) / f(t)^2`.
pub fn psi_tau(law: &DiscreteLaw, tau: f64, t: f64) -> Result<Complex64, DiagnosticsError> {
    let denom = eval_cf(law, t);
    if denom.norm() <= DENOM_TOL {
        return Err(DiagnosticsError::DenominatorNearZero { t, abs_f: denom.norm() });
    }
    Ok(eval_cf(law, t + tau) * eval_cf(law, t - tau) / (denom * denom))
}

/// The atomic form of the uniform bound:
/// `exp(-sigma^2 tau^2 + 2 sum_u (1 - cos(tau u)) |w_u|)`.
pub fn psi_bound(trip: &QuasiLevyTriplet, tau: f64) -> f64 {
    let sum: f64 = trip
        .atoms
        .iter()
        .map(|a| (1.0 - (tau * a.u).cos()) * a.w.abs())
        .sum();
    (-trip.sigma2 * tau * tau + 2.0 * sum).exp()
}

/// Scan |psi_tau| over `n` points of `[-window, window]`, skipping points
/// with a vanishing denominator, and compare against the triplet bound when
/// one is supplied. The observed sup is sharpened by golden-section ascent
/// around the best grid point.
pub fn psi_scan(
    law: &DiscreteLaw,
    trip: Option<&QuasiLevyTriplet>,
    tau: f64,
    window: f64,
    n: usize,
) -> Result<PsiReport, DiagnosticsError> {
    assert!(n >= 2 && window > 0.0);
    let f0 = eval_cf_grid(law, -window, window, n);
    let fp = eval_cf_grid(law, -window + tau, window + tau, n);
    let fm = eval_cf_grid(law, -window - tau, window - tau, n);
    let dt = 2.0 * window / (n - 1) as f64;
    let mut sup = f64::NEG_INFINITY;
    let mut t_at = 0.0;
    let mut skipped = 0usize;
    for j in 0..n {
        let d = f0[j].norm();
        if d <= DENOM_TOL {
            skipped += 1;
            continue;
        }
        let v = fp[j].norm() * fm[j].norm() / (d * d);
        if v > sup {
            sup = v;
            t_at = -window + j as f64 * dt;
        }
    }
    if skipped == n {
        return Err(DiagnosticsError::AllPointsSkipped);
    }
    // Sharpen around the best grid point.
    let mut evals = 0usize;
    let neg_abs = |t: f64| {
        let d = eval_cf(law, t).norm();
        if d <= DENOM_TOL {
            return f64::INFINITY;
        }
        -(eval_cf(law, t + tau).norm() * eval_cf(law, t - tau).norm() / (d * d))
    };
    let (t_ref, neg_v) = golden_ascend(neg_abs, t_at - dt, t_at + dt, &mut evals);
    if -neg_v > sup {
        sup = -neg_v;
        t_at = t_ref;
    }
    let bound = trip.map(|tr| psi_bound(tr, tau));
    let verdict_hint = match bound {
        Some(b) if sup > b * (1.0 + 1e-9) => VerdictHint::BoundViolated,
        Some(_) => VerdictHint::BoundRespected,
        None if sup > 1e3 => VerdictHint::UnboundedEvidence,
        None => VerdictHint::BoundRespected,
    };
    Ok(PsiReport {
        tau,
        sup_observed: sup,
        t_at_sup: t_at,
        bound,
        samples: n - skipped,
        skipped,
        verdict_hint,
    })
}

fn golden_ascend<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64, evals: &mut usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);
    *evals += 2;
    while b - a > 1e-12 && *evals < 500 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
        *evals += 1;
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Outcome of the tau search along the record-minima trail.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Candidate tau grid.
    pub tau_grid: Vec<f64>,
    /// max_m |psi_tau(t_m)| per candidate.
    pub per_tau_max: Vec<f64>,
    /// Candidate with the strongest growth.
    pub best_tau: f64,
    /// |psi_best_tau(t_m)| along the trail, in trail order.
    pub growth: Vec<f64>,
}

impl ProbeReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("probe report serializes")
    }
}

/// Pair the record-minima trail with a coarse tau grid: for each candidate
/// tau report `max_m |psi_tau(t_m)|`, then return the best candidate and its
/// growth sequence. Monotone unbounded growth is empirical (not rigorous)
/// evidence of non-quasi-infinite-divisibility.
pub fn divergence_probe(
    law: &DiscreteLaw,
    budget: &SearchBudget,
) -> Result<ProbeReport, DiagnosticsError> {
    let report = match modulus_infimum(law, budget) {
        Ok(r) => r,
        Err(CharfnError::BudgetExhausted { report }) => report,
    };
    if report.record_minima.is_empty() {
        return Err(DiagnosticsError::NoRecordMinima);
    }
    let tau_grid: Vec<f64> = (1..=32).map(|i| i as f64 * PI / 32.0).collect();
    let mut per_tau_max = Vec::with_capacity(tau_grid.len());
    let mut best = (tau_grid[0], f64::NEG_INFINITY);
    for &tau in &tau_grid {
        let mut m = 0.0f64;
        for &(t, _) in &report.record_minima {
            if let Ok(v) = psi_tau(law, tau, t) {
                m = m.max(v.norm());
            }
        }
        per_tau_max.push(m);
        if m > best.1 {
            best = (tau, m);
        }
    }
    let growth: Vec<f64> = report
        .record_minima
        .iter()
        .filter_map(|&(t, _)| psi_tau(law, best.0, t).ok().map(|v| v.norm()))
        .collect();
    Ok(ProbeReport {
        tau_grid,
        per_tau_max,
        best_tau: best.0,
        growth,
    })
}
