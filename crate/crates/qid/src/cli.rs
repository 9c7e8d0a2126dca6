//! Command surface behind the `qid` binary: verdicts, spectra,
//! factorizations, round-trips, and plot-ready CSV dumps.
//!
//! Every run maps to exactly one exit code: 0 success (QID where the
//! command decides divisibility), 1 input error, 10 NOT_QID, 20
//! INCONCLUSIVE, 30 unrecoverable grid refusal.

use serde::Serialize;

use crate::charfn::{qid_verdict, eval_cf_grid, SearchBudget, Verdict, VerdictTag};
use crate::diagnostics::DENOM_TOL;
use crate::error::SpectralError;
use crate::law::{detect_generating_basis, DiscreteLaw, DEFAULT_TOL};
use crate::spectral::{
    spectrum_lattice_auto, spectrum_torus, SpectralDecomposition, SupportStructure,
};
use crate::triplet::{jordan_split, reconstruct_lattice_law, to_triplet, verify_factorization};

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_NOT_QID: i32 = 10;
pub const EXIT_INCONCLUSIVE: i32 = 20;
pub const EXIT_GRID_TOO_COARSE: i32 = 30;

#[derive(Debug, Clone)]
pub enum CommandKind {
    Check,
    Spectrum,
    Factor,
    Roundtrip,
    Psi { tau: f64, window: f64, n: usize },
    DumpCf { t0: f64, t1: f64, n: usize },
}

/// Fully resolved configuration for one command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input_path: PathBuf,
    /// Output file (or prefix, for the multi-file commands). None prints
    /// to stdout where that makes sense.
    pub output_path: Option<PathBuf>,
    pub max_evals: usize,
    pub window0: Option<f64>,
    pub growth: f64,
    pub zero_tol: f64,
    pub n_fft: usize,
    pub drop_tol: f64,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: CommandKind, input: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input_path: input.into(),
            output_path: None,
            max_evals: 2_000_000,
            window0: None,
            growth: 4.0,
            zero_tol: 1e-10,
            n_fft: 4096,
            drop_tol: 1e-14,
            seed: 0,
        }
    }

    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_evals: self.max_evals,
            window0: self.window0,
            growth: self.growth,
            zero_tol: self.zero_tol,
            jitter_seed: self.seed,
            ..SearchBudget::default()
        }
    }
}

#[derive(Serialize)]
struct VerdictFile<'a> {
    tag: &'a VerdictTag,
    mu: Option<f64>,
    witness: Option<f64>,
    certified: bool,
    window: f64,
    record_minima: &'a [(f64, f64)],
}

fn load_law(path: &Path) -> Result<DiscreteLaw, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    DiscreteLaw::from_json_str(&text)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn with_suffix(prefix: &Option<PathBuf>, suffix: &str) -> Option<PathBuf> {
    prefix.as_ref().map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    })
}

fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Decide quasi-infinite divisibility and write the verdict JSON.
pub fn cmd_check(cfg: &RunConfig) -> i32 {
    let law = match load_law(&cfg.input_path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let verdict = qid_verdict(&law, &cfg.budget());
    let file = VerdictFile {
        tag: &verdict.tag,
        mu: verdict.mu,
        witness: verdict.witness,
        certified: verdict.report.certified,
        window: verdict.report.window,
        record_minima: &verdict.report.record_minima,
    };
    let json = serde_json::to_string_pretty(&file).expect("verdict serializes");
    if let Err(e) = emit(&cfg.output_path, &(json + "\n")) {
        eprintln!("error: {e}");
        return EXIT_INPUT_ERROR;
    }
    match verdict.tag {
        VerdictTag::Qid => EXIT_OK,
        VerdictTag::NotQid => EXIT_NOT_QID,
        VerdictTag::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn compute_spectrum(
    law: &DiscreteLaw,
    verdict: &Verdict,
    cfg: &RunConfig,
) -> Result<SpectralDecomposition, i32> {
    match verdict.tag {
        VerdictTag::Qid => {}
        VerdictTag::NotQid => return Err(EXIT_NOT_QID),
        VerdictTag::Inconclusive => return Err(EXIT_INCONCLUSIVE),
    }
    let mu = verdict.mu.expect("QID verdict carries mu");
    let lattice = crate::law::detect_lattice(law, crate::law::DEFAULT_DENOM_BOUND, DEFAULT_TOL);
    let result = if lattice.is_some() {
        spectrum_lattice_auto(law, mu, cfg.n_fft, cfg.drop_tol)
    } else {
        let basis = detect_generating_basis(law, 3, crate::law::DEFAULT_RELATION_BOUND, DEFAULT_TOL)
            .ok_or(EXIT_INCONCLUSIVE)?;
        spectrum_torus(law, &basis, mu, cfg.n_fft, cfg.drop_tol)
    };
    result.map_err(|e| {
        eprintln!("error: {e}");
        match e {
            SpectralError::GridTooCoarse { .. } => EXIT_GRID_TOO_COARSE,
            _ => EXIT_INPUT_ERROR,
        }
    })
}

/// Compute and write the spectrum JSON and the triplet JSON.
pub fn cmd_spectrum(cfg: &RunConfig) -> i32 {
    let law = match load_law(&cfg.input_path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let verdict = qid_verdict(&law, &cfg.budget());
    let spec = match compute_spectrum(&law, &verdict, cfg) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let trip = to_triplet(&spec);
    println!(
        "gamma0 = {}  gamma = {}  l1_norm = {}  truncation_bound = {}",
        sig17(spec.gamma0),
        sig17(trip.gamma),
        sig17(spec.l1_norm),
        sig17(spec.truncation_bound)
    );
    let r1 = emit(&with_suffix(&cfg.output_path, ".spectrum.json"), &(spec.to_json_string() + "\n"));
    let r2 = emit(&with_suffix(&cfg.output_path, ".triplet.json"), &(trip.to_json_string() + "\n"));
    if let Err(e) = r1.and(r2) {
        eprintln!("error: {e}");
        return EXIT_INPUT_ERROR;
    }
    EXIT_OK
}

/// Factorize into two infinitely divisible triplets and report the residual.
pub fn cmd_factor(cfg: &RunConfig) -> i32 {
    let law = match load_law(&cfg.input_path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let verdict = qid_verdict(&law, &cfg.budget());
    let spec = match compute_spectrum(&law, &verdict, cfg) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let trip = to_triplet(&spec);
    let (pos, neg) = match jordan_split(&trip) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let grid: Vec<f64> = match &spec.structure {
        SupportStructure::Lattice(lat) => {
            let period = TAU / lat.span;
            (0..4096).map(|j| j as f64 * period / 4096.0).collect()
        }
        SupportStructure::Basis(_) => (0..4096).map(|j| -50.0 + j as f64 * 100.0 / 4095.0).collect(),
    };
    let residual = verify_factorization(&law, &pos, &neg, &grid);
    println!("factorization residual = {}", sig17(residual));
    let r1 = emit(&with_suffix(&cfg.output_path, ".pos.json"), &(pos.to_json_string() + "\n"));
    let r2 = emit(&with_suffix(&cfg.output_path, ".neg.json"), &(neg.to_json_string() + "\n"));
    if let Err(e) = r1.and(r2) {
        eprintln!("error: {e}");
        return EXIT_INPUT_ERROR;
    }
    if residual < 1e-6 {
        EXIT_OK
    } else {
        EXIT_INPUT_ERROR
    }
}

/// Full pipeline law -> spectrum -> triplet -> reconstructed law; report the
/// worst atom-mass discrepancy.
pub fn cmd_roundtrip(cfg: &RunConfig) -> i32 {
    let law = match load_law(&cfg.input_path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let verdict = qid_verdict(&law, &cfg.budget());
    let spec = match compute_spectrum(&law, &verdict, cfg) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let lat = match &spec.structure {
        SupportStructure::Lattice(lat) => lat.clone(),
        SupportStructure::Basis(_) => {
            eprintln!("error: roundtrip requires a lattice law");
            return EXIT_INPUT_ERROR;
        }
    };
    let trip = to_triplet(&spec);
    let rec = match reconstruct_lattice_law(&trip, &lat, cfg.n_fft) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let mut worst = 0.0f64;
    for atom in law.atoms() {
        let found = rec
            .atoms()
            .iter()
            .find(|b| (b.x - atom.x).abs() < 1e-9 * atom.x.abs().max(1.0))
            .map_or(0.0, |b| b.p);
        worst = worst.max((found - atom.p).abs());
    }
    for atom in rec.atoms() {
        if !law
            .atoms()
            .iter()
            .any(|b| (b.x - atom.x).abs() < 1e-9 * atom.x.abs().max(1.0))
        {
            worst = worst.max(atom.p);
        }
    }
    println!("max mass discrepancy = {}", sig17(worst));
    if worst < 1e-6 {
        EXIT_OK
    } else {
        EXIT_INPUT_ERROR
    }
}

/// Write the |psi_tau| scan CSV: columns t, abs_psi, skipped_flag.
pub fn cmd_psi(cfg: &RunConfig) -> i32 {
    let (tau, window, n) = match cfg.command {
        CommandKind::Psi { tau, window, n } => (tau, window, n),
        _ => unreachable!("cmd_psi requires a Psi command"),
    };
    let law = match load_law(&cfg.input_path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let f0 = eval_cf_grid(&law, -window, window, n);
    let fp = eval_cf_grid(&law, -window + tau, window + tau, n);
    let fm = eval_cf_grid(&law, -window - tau, window - tau, n);
    let dt = 2.0 * window / (n - 1) as f64;
    let mut csv = String::from("t,abs_psi,skipped_flag\n");
    for j in 0..n {
        let t = -window + j as f64 * dt;
        let d = f0[j].norm();
        if d <= DENOM_TOL {
            csv.push_str(&format!("{},{},1\n", sig17(t), sig17(0.0)));
        } else {
            let v = fp[j].norm() * fm[j].norm() / (d * d);
            csv.push_str(&format!("{},{},0\n", sig17(t), sig17(v)));
        }
    }
    if let Err(e) = emit(&cfg.output_path, &csv) {
        eprintln!("error: {e}");
        return EXIT_INPUT_ERROR;
    }
    EXIT_OK
}

/// Write the characteristic-function grid CSV: columns t, re_f, im_f, abs_f.
pub fn cmd_dump_cf(cfg: &RunConfig) -> i32 {
    let (t0, t1, n) = match cfg.command {
        CommandKind::DumpCf { t0, t1, n } => (t0, t1, n),
        _ => unreachable!("cmd_dump_cf requires a DumpCf command"),
    };
    let law = match load_law(&cfg.input_path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let grid = eval_cf_grid(&law, t0, t1, n);
    let dt = (t1 - t0) / (n - 1) as f64;
    let mut csv = String::from("t,re_f,im_f,abs_f\n");
    for (j, v) in grid.iter().enumerate() {
        let t = t0 + j as f64 * dt;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            sig17(t),
            sig17(v.re),
            sig17(v.im),
            sig17(v.norm())
        ));
    }
    if let Err(e) = emit(&cfg.output_path, &csv) {
        eprintln!("error: {e}");
        return EXIT_INPUT_ERROR;
    }
    EXIT_OK
}

/// Dispatch a resolved configuration.
pub fn run(cfg: &RunConfig) -> i32 {
    match cfg.command {
        CommandKind::Check => cmd_check(cfg),
        CommandKind::Spectrum => cmd_spectrum(cfg),
        CommandKind::Factor => cmd_factor(cfg),
        CommandKind::Roundtrip => cmd_roundtrip(cfg),
        CommandKind::Psi { .. } => cmd_psi(cfg),
        CommandKind::DumpCf { .. } => cmd_dump_cf(cfg),
    }
}
