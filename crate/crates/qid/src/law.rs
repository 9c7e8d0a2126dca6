//! Discrete probability laws and the arithmetic structure of their support.
//!
//! A law is a finite list of atoms `(x_k, p_k)` plus a tracked `tail_mass`
//! for laws (Poisson, geometric, ...) that had an infinite support truncated.
//! The support structure comes in two flavours: a lattice `a + h*Z`, or a
//! small set of rationally independent generators of the module of integer
//! combinations of support points.

use serde::{Deserialize, Serialize};

use crate::error::LawError;

/// Default relative tolerance for structure detection.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default denominator bound for lattice detection.
pub const DEFAULT_DENOM_BOUND: u64 = 1_000_000;
/// Default coefficient bound for the integer-relation search.
pub const DEFAULT_RELATION_BOUND: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub p: f64,
}

/// A finite (possibly tail-truncated) atomic probability law.
///
/// Invariants enforced at construction: positions strictly increasing,
/// all masses positive, `sum(p) + tail_mass = 1` to within 1e-12.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteLaw {
    atoms: Vec<Atom>,
    tail_mass: f64,
}

#[derive(Deserialize)]
struct LawFile {
    atoms: Vec<Atom>,
    #[serde(default)]
    tail_mass: f64,
}

impl DiscreteLaw {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.x)
    }

    /// Smallest gap between adjacent atom positions (infinite for a single atom).
    pub fn min_gap(&self) -> f64 {
        self.atoms
            .windows(2)
            .map(|w| w[1].x - w[0].x)
            .fold(f64::INFINITY, f64::min)
    }

    /// Parse the law JSON format `{"atoms": [{"x": .., "p": ..}, ..], "tail_mass": ..}`.
    /// Atoms need not be sorted in the file.
    pub fn from_json_str(s: &str) -> Result<Self, String> {
        let file: LawFile = serde_json::from_str(s).map_err(|e| format!("law JSON: {e}"))?;
        let pairs: Vec<(f64, f64)> = file.atoms.iter().map(|a| (a.x, a.p)).collect();
        make_law(&pairs, file.tail_mass).map_err(|e| e.to_string())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("law serializes")
    }
}

/// Build and validate a law from `(position, mass)` pairs.
///
/// Zero-mass pairs are dropped, positions are sorted, and masses are
/// renormalized so `sum(p) + tail_mass = 1` holds at 1e-12. Duplicate
/// positions are an error rather than being merged.
pub fn make_law(pairs: &[(f64, f64)], tail_mass: f64) -> Result<DiscreteLaw, LawError> {
    if tail_mass < 0.0 {
        return Err(LawError::NegativeTailMass(tail_mass));
    }
    let mut atoms: Vec<Atom> = Vec::with_capacity(pairs.len());
    for &(x, p) in pairs {
        if p < 0.0 {
            return Err(LawError::NegativeMass { x, mass: p });
        }
        if p > 0.0 {
            atoms.push(Atom { x, p });
        }
    }
    if atoms.is_empty() {
        return Err(LawError::EmptySupport);
    }
    atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("finite positions"));
    for w in atoms.windows(2) {
        if w[0].x == w[1].x {
            return Err(LawError::DuplicateAtom(w[0].x));
        }
    }
    let total: f64 = atoms.iter().map(|a| a.p).sum::<f64>() + tail_mass;
    if (total - 1.0).abs() > 1e-9 {
        return Err(LawError::MassNotNormalized { total });
    }
    let scale = 1.0 / total;
    for a in &mut atoms {
        a.p *= scale;
    }
    Ok(DiscreteLaw {
        atoms,
        tail_mass: tail_mass * scale,
    })
}

/// Lattice support structure: every atom is `offset + index * span`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeStructure {
    pub offset: f64,
    pub span: f64,
    pub indices: Vec<i64>,
}

/// Finite generating basis of the module of integer combinations of
/// support points: `x_k = sum_j coords[k][j] * generators[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleBasis {
    pub generators: Vec<f64>,
    pub coords: Vec<Vec<i64>>,
    /// No integer relation with coefficients up to this bound was found
    /// among the generators.
    pub independence_bound: i64,
}

/// Best rational approximation p/q of `x` with q <= bound, by continued
/// fractions. Returns the first convergent whose error is below `tol_per_q / q`,
/// or None if no convergent with denominator within the bound reaches it.
///
/// The per-denominator tolerance is what separates genuine rationals
/// (whose f64 ratio error is ~1e-16) from good irrational approximants
/// like convergents of sqrt(2), whose error at denominator q is ~1/q^2.
fn rational_approx(x: f64, bound: u64, tol_per_q: f64) -> Option<(i64, u64)> {
    let neg = x < 0.0;
    let mut x_abs = x.abs();
    // Convergent recurrence.
    let (mut p0, mut q0): (i64, i64) = (1, 0);
    let (mut p1, mut q1): (i64, i64) = (x_abs.floor() as i64, 1);
    for _ in 0..64 {
        let err = (x.abs() - p1 as f64 / q1 as f64).abs();
        if err <= tol_per_q / q1 as f64 {
            if q1 as u64 > bound {
                return None;
            }
            return Some((if neg { -p1 } else { p1 }, q1 as u64));
        }
        let frac = x_abs - x_abs.floor();
        if frac == 0.0 {
            break;
        }
        x_abs = 1.0 / frac;
        let a = x_abs.floor() as i64;
        let (p2, q2) = (a.checked_mul(p1)?.checked_add(p0)?, a.checked_mul(q1)?.checked_add(q0)?);
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
        if q1 as u64 > bound.saturating_mul(1000) {
            break;
        }
    }
    None
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Detect the maximal-span lattice `offset + span*Z` containing all atoms,
/// if the pairwise difference ratios admit a common rational structure with
/// denominators up to `denom_bound` at tolerance `tol`.
pub fn detect_lattice(law: &DiscreteLaw, denom_bound: u64, tol: f64) -> Option<LatticeStructure> {
    let xs: Vec<f64> = law.positions().collect();
    let a = xs[0];
    if xs.len() == 1 {
        return Some(LatticeStructure {
            offset: a,
            span: 1.0,
            indices: vec![0],
        });
    }
    // Real gcd of the differences via continued fractions.
    let mut h = xs[1] - a;
    for &x in &xs[2..] {
        let r = (x - a) / h;
        let (p, q) = rational_approx(r, denom_bound, tol)?;
        if p == 0 {
            return None;
        }
        let g = gcd_i64(p, q as i64);
        h /= (q as i64 / g) as f64;
        if (h / (xs[1] - a)).abs() < 1.0 / (denom_bound as f64 * 10.0) {
            return None;
        }
    }
    let mut indices: Vec<i64> = Vec::with_capacity(xs.len());
    for &x in &xs {
        let n = ((x - a) / h).round();
        if (x - (a + n * h)).abs() > tol * x.abs().max(1.0) {
            return None;
        }
        indices.push(n as i64);
    }
    // Maximality: indices (minus the minimal one, which is 0) must have gcd 1.
    let g = indices.iter().fold(0i64, |acc, &n| gcd_i64(acc, n));
    if g > 1 {
        h *= g as f64;
        for n in &mut indices {
            *n /= g;
        }
    }
    Some(LatticeStructure {
        offset: a,
        span: h,
        indices,
    })
}

/// Express `x` in the current generators with integer coefficients bounded
/// by `bound`, if possible.
fn represent(x: f64, gens: &[f64], bound: i64, tol: f64) -> Option<Vec<i64>> {
    let ok = |err: f64| err <= tol * x.abs().max(1.0);
    match gens.len() {
        0 => None,
        1 => {
            let c = (x / gens[0]).round();
            if c.abs() as i64 <= bound && ok((x - c * gens[0]).abs()) {
                Some(vec![c as i64])
            } else {
                None
            }
        }
        2 => {
            for c0 in -bound..=bound {
                let r = x - c0 as f64 * gens[0];
                let c1 = (r / gens[1]).round();
                if (c1.abs() as i64) <= bound && ok((r - c1 * gens[1]).abs()) {
                    return Some(vec![c0, c1 as i64]);
                }
            }
            None
        }
        _ => {
            for c0 in -bound..=bound {
                for c1 in -bound..=bound {
                    let r = x - c0 as f64 * gens[0] - c1 as f64 * gens[1];
                    let c2 = (r / gens[2]).round();
                    if (c2.abs() as i64) <= bound && ok((r - c2 * gens[2]).abs()) {
                        return Some(vec![c0, c1, c2 as i64]);
                    }
                }
            }
            None
        }
    }
}

/// Find a small generating basis for the module of integer combinations
/// of support points. A lattice law yields d=1 (or d=2 when the offset is
/// not commensurable with the span); otherwise generators are built
/// greedily with a bounded integer-relation search. Empty result if more
/// than `d_max` generators would be needed.
pub fn detect_generating_basis(
    law: &DiscreteLaw,
    d_max: usize,
    relation_bound: i64,
    tol: f64,
) -> Option<ModuleBasis> {
    if let Some(lat) = detect_lattice(law, DEFAULT_DENOM_BOUND, tol) {
        let a = lat.offset;
        if a.abs() <= tol {
            return Some(ModuleBasis {
                generators: vec![lat.span],
                coords: lat.indices.iter().map(|&n| vec![n]).collect(),
                independence_bound: relation_bound,
            });
        }
        // Offset commensurable with the span folds into a finer d=1 lattice.
        if let Some((p, q)) = rational_approx(a / lat.span, DEFAULT_DENOM_BOUND, tol) {
            let h = lat.span / q as f64;
            return Some(ModuleBasis {
                generators: vec![h],
                coords: lat.indices.iter().map(|&n| vec![n * q as i64 + p]).collect(),
                independence_bound: relation_bound,
            });
        }
        if d_max < 2 {
            return None;
        }
        return Some(ModuleBasis {
            generators: vec![lat.span, a],
            coords: lat.indices.iter().map(|&n| vec![n, 1]).collect(),
            independence_bound: relation_bound,
        });
    }
    let d_max = d_max.min(3);
    let mut gens: Vec<f64> = Vec::new();
    let mut coords: Vec<Vec<i64>> = Vec::new();
    for x in law.positions() {
        if x.abs() <= tol {
            coords.push(vec![]);
            continue;
        }
        match represent(x, &gens, relation_bound, tol) {
            Some(c) => coords.push(c),
            None => {
                if gens.len() == d_max {
                    return None;
                }
                gens.push(x);
                let mut c = vec![0i64; gens.len()];
                c[gens.len() - 1] = 1;
                coords.push(c);
            }
        }
    }
    let d = gens.len();
    for c in &mut coords {
        c.resize(d, 0);
    }
    Some(ModuleBasis {
        generators: gens,
        coords,
        independence_bound: relation_bound,
    })
}
