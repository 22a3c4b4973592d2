//! The four subcommands as library functions returning structured reports;
//! `main` only parses arguments, renders, and maps warnings to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use eoplab_core::{
    bell_state, convexity_violation, entropy, theorem1_upper_bound, werner, ComplexMatrix,
    DeltaGrid, DeltaPoint, DensityOperator, EopCertificate, OptimizerOptions, Provenance,
    StartKind, WernerParams, C64,
};

use crate::files::{load_decomposition, load_state};
use crate::format::sig12;
use crate::runner::estimate_parallel;

/// Exact CSV header emitted and required by the sweep commands.
pub const SWEEP_HEADER: &str = "f,eop_upper,entropy,delta,n_restarts,n_distinct_minima,seed";

/// Resolution at which per-restart minima count as the same minimum.
pub const MINIMA_CLUSTER_TOL: f64 = 1e-6;

/// What the `eop` subcommand should estimate.
#[derive(Debug, Clone)]
pub enum StateInput {
    File(PathBuf),
    Werner(f64),
}

impl StateInput {
    fn load(&self) -> Result<(DensityOperator, String)> {
        match self {
            StateInput::File(path) => {
                Ok((load_state(path)?, format!("file {}", path.display())))
            }
            StateInput::Werner(f) => {
                let p = WernerParams::new(*f).map_err(|e| anyhow::anyhow!("{e}"))?;
                Ok((werner(p), format!("werner f={}", sig12(*f))))
            }
        }
    }
}

/// Printed result of one estimation run.
#[derive(Debug)]
pub struct EopReport {
    pub label: String,
    pub best_value: f64,
    pub best_start: StartKind,
    pub ancilla_dims: (usize, usize),
    pub seed: u64,
    pub n_starts: usize,
    pub iterations: u64,
    pub line_search_failures: usize,
    /// (cluster representative value, multiplicity), ascending.
    pub minima: Vec<(f64, usize)>,
}

fn cluster_minima(values: &[f64]) -> Vec<(f64, usize)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("objective values are finite"));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some((rep, count)) if v - *rep <= MINIMA_CLUSTER_TOL => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn start_name(kind: StartKind) -> String {
    match kind {
        StartKind::TrivialA => "trivial-a".to_string(),
        StartKind::TrivialB => "trivial-b".to_string(),
        StartKind::Product => "product".to_string(),
        StartKind::Random(k) => format!("random[{k}]"),
    }
}

impl EopReport {
    pub fn from_certificate(label: String, cert: &EopCertificate) -> Self {
        Self {
            label,
            best_value: cert.best_value(),
            best_start: cert.best_start(),
            ancilla_dims: cert.ancilla_dims(),
            seed: cert.seed(),
            n_starts: cert.per_restart_values().len(),
            iterations: cert.iterations(),
            line_search_failures: cert.line_search_failures(),
            minima: cluster_minima(cert.per_restart_values()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.line_search_failures > 0 {
            crate::exit::QUALITY_WARNING
        } else {
            crate::exit::OK
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "state: {}", self.label);
        let _ = writeln!(s, "ancilla: {} x {}", self.ancilla_dims.0, self.ancilla_dims.1);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "starts: {}", self.n_starts);
        let _ = writeln!(s, "best_value: {}", sig12(self.best_value));
        let _ = writeln!(s, "best_start: {}", start_name(self.best_start));
        let _ = writeln!(s, "distinct_minima: {}", self.minima.len());
        let shown = self.minima.iter().take(8);
        let list: Vec<String> =
            shown.map(|(v, k)| format!("{} x{}", sig12(*v), k)).collect();
        let ellipsis = if self.minima.len() > 8 { ", ..." } else { "" };
        let _ = writeln!(s, "minima: {}{}", list.join(", "), ellipsis);
        let _ = writeln!(s, "iterations: {}", self.iterations);
        let _ = writeln!(s, "line_search_failures: {}", self.line_search_failures);
        s
    }
}

/// Estimate the entanglement of purification of a state.
pub fn run_eop(input: &StateInput, opts: &OptimizerOptions, threads: usize) -> Result<EopReport> {
    let (rho, label) = input.load()?;
    let cert = estimate_parallel(&rho, opts, threads).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(EopReport::from_certificate(label, &cert))
}

/// One emitted sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub f: f64,
    pub eop_upper: f64,
    pub entropy: f64,
    pub delta: f64,
    pub n_restarts: usize,
    pub n_distinct_minima: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub out_path: PathBuf,
    pub line_search_failures: usize,
}

/// Werner sweep over [fmin, fmax] writing one CSV row per grid point.
/// Deterministic for a fixed seed; every row reuses the same base seed.
pub fn run_werner_sweep(
    fmin: f64,
    fmax: f64,
    steps: usize,
    opts: &OptimizerOptions,
    out: &Path,
    threads: usize,
) -> Result<SweepOutcome> {
    if !(0.0..=1.0).contains(&fmin) || !(0.0..=1.0).contains(&fmax) || !(fmin < fmax) {
        bail!("sweep range needs 0 <= fmin < fmax <= 1, got [{fmin}, {fmax}]");
    }
    if steps < 2 {
        bail!("sweep needs at least 2 steps, got {steps}");
    }

    let mut rows = Vec::with_capacity(steps);
    let mut failures = 0usize;
    for i in 0..steps {
        let f = fmin + (fmax - fmin) * (i as f64) / ((steps - 1) as f64);
        let p = WernerParams::new(f).map_err(|e| anyhow::anyhow!("{e}"))?;
        let rho = werner(p);
        let cert = estimate_parallel(&rho, opts, threads).map_err(|e| anyhow::anyhow!("{e}"))?;
        let s = entropy(&rho).map_err(|e| anyhow::anyhow!("{e}"))?;
        failures += cert.line_search_failures();
        rows.push(SweepRow {
            f,
            eop_upper: cert.best_value(),
            entropy: s,
            delta: cert.best_value() - s,
            n_restarts: cert.per_restart_values().len(),
            n_distinct_minima: cert.distinct_minima(MINIMA_CLUSTER_TOL),
            seed: cert.seed(),
        });
    }

    write_sweep_csv(out, &rows)
        .with_context(|| format!("cannot write sweep to {}", out.display()))?;
    Ok(SweepOutcome { rows, out_path: out.to_path_buf(), line_search_failures: failures })
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut file = fs::File::create(path)?;
    let mut text = String::new();
    text.push_str(SWEEP_HEADER);
    text.push('\n');
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            sig12(r.f),
            sig12(r.eop_upper),
            sig12(r.entropy),
            sig12(r.delta),
            r.n_restarts,
            r.n_distinct_minima,
            r.seed
        );
    }
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Parses an emitted sweep CSV back into rows.
pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read sweep file {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == SWEEP_HEADER => {}
        Some(h) => bail!("unexpected CSV header {h:?} (expected {SWEEP_HEADER:?})"),
        None => bail!("empty sweep file"),
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 7 {
            bail!("row {} has {} fields, expected 7", lineno + 2, parts.len());
        }
        let num = |i: usize| -> Result<f64> {
            parts[i]
                .parse()
                .with_context(|| format!("bad number {:?} in row {}", parts[i], lineno + 2))
        };
        rows.push(SweepRow {
            f: num(0)?,
            eop_upper: num(1)?,
            entropy: num(2)?,
            delta: num(3)?,
            n_restarts: parts[4].parse().context("bad n_restarts")?,
            n_distinct_minima: parts[5].parse().context("bad n_distinct_minima")?,
            seed: parts[6].parse().context("bad seed")?,
        });
    }
    Ok(rows)
}

/// Builds the delta grid from parsed rows. The stored delta column must
/// agree with eop_upper - entropy to printed precision; the grid itself is
/// rebuilt from the difference so its internal identity holds exactly.
pub fn grid_from_rows(rows: &[SweepRow]) -> Result<DeltaGrid> {
    let mut points = Vec::with_capacity(rows.len());
    for r in rows {
        if (r.delta - (r.eop_upper - r.entropy)).abs() > 1e-9 {
            bail!(
                "delta column {} inconsistent with eop_upper - entropy = {} at f = {}",
                r.delta,
                r.eop_upper - r.entropy,
                r.f
            );
        }
        points.push(DeltaPoint {
            x: r.f,
            eop_upper: r.eop_upper,
            entropy: r.entropy,
            delta_upper: r.eop_upper - r.entropy,
        });
    }
    DeltaGrid::new(points).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Printed result of the bound combinator.
#[derive(Debug)]
pub struct BoundReport {
    pub components: usize,
    pub weights: Vec<f64>,
    pub provenance: Vec<Provenance>,
    pub weighted_upper: f64,
    pub chi: f64,
    pub bound: f64,
    pub dims: Vec<usize>,
    /// Singlet fraction of the averaged state, when it is Bell diagonal.
    pub werner_fraction: Option<f64>,
}

fn provenance_name(p: Provenance) -> &'static str {
    match p {
        Provenance::Exact => "exact",
        Provenance::SingleCopyEstimate => "single-copy-estimate",
        Provenance::External => "external",
    }
}

/// Singlet fraction <Psi0|rho|Psi0> when rho is Bell diagonal within 1e-10.
fn bell_diagonal_fraction(rho: &DensityOperator) -> Option<f64> {
    if rho.dims() != [2, 2] {
        return None;
    }
    let m = rho.matrix();
    let mut weights = [0.0; 4];
    let mut reconstructed = ComplexMatrix::zeros(4, 4);
    for (i, w) in weights.iter_mut().enumerate() {
        let amps = bell_state(i).expect("0..=3").amplitudes().to_vec();
        let mut overlap = C64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                overlap += amps[a].conj() * m[(a, b)] * amps[b];
            }
        }
        *w = overlap.re;
        for a in 0..4 {
            for b in 0..4 {
                let add = amps[a] * amps[b].conj() * overlap.re;
                reconstructed[(a, b)] += add;
            }
        }
    }
    let dev = reconstructed.sub(m).expect("4x4").max_abs_entry();
    (dev <= 1e-10).then_some(weights[0])
}

impl BoundReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "components: {}", self.components);
        let list: Vec<String> = self.weights.iter().map(|w| sig12(*w)).collect();
        let _ = writeln!(s, "weights: {}", list.join(", "));
        let list: Vec<&str> = self.provenance.iter().map(|p| provenance_name(*p)).collect();
        let _ = writeln!(s, "provenance: {}", list.join(", "));
        let _ = writeln!(s, "weighted_u: {}", sig12(self.weighted_upper));
        let _ = writeln!(s, "chi: {}", sig12(self.chi));
        let _ = writeln!(s, "bound: {}", sig12(self.bound));
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, "average_dims: {}", dims.join("x"));
        if let Some(f) = self.werner_fraction {
            let _ = writeln!(s, "werner_fraction: {}", sig12(f));
        }
        s
    }
}

/// Combine a decomposition file into a regularized-EoP upper bound.
pub fn run_bound(path: &Path) -> Result<BoundReport> {
    let decomposition = load_decomposition(path)?;
    let out = theorem1_upper_bound(&decomposition).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(BoundReport {
        components: decomposition.components().len(),
        weights: decomposition.components().iter().map(|c| c.weight).collect(),
        provenance: out.provenance.clone(),
        weighted_upper: out.weighted_upper,
        chi: out.chi,
        bound: out.bound,
        dims: out.average.dims().to_vec(),
        werner_fraction: bell_diagonal_fraction(&out.average),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeFlag {
    Nonconvex,
    Inconclusive,
}

/// Printed result of the convexity probe.
#[derive(Debug)]
pub struct ProbeReport {
    pub points: usize,
    pub max_violation: f64,
    pub witness: (f64, f64, f64),
    pub threshold: f64,
    pub flag: ProbeFlag,
}

impl ProbeReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "points: {}", self.points);
        let _ = writeln!(s, "max_violation: {}", sig12(self.max_violation));
        let _ = writeln!(
            s,
            "witness: {} {} {}",
            sig12(self.witness.0),
            sig12(self.witness.1),
            sig12(self.witness.2)
        );
        let _ = writeln!(s, "threshold: {}", sig12(self.threshold));
        let _ = writeln!(
            s,
            "flag: {}",
            match self.flag {
                ProbeFlag::Nonconvex => "NONCONVEX",
                ProbeFlag::Inconclusive => "INCONCLUSIVE",
            }
        );
        s
    }
}

/// Scan a sweep CSV for midpoint convexity violations of the delta curve.
pub fn run_delta_probe(path: &Path, threshold: f64) -> Result<ProbeReport> {
    let rows = read_sweep_csv(path)?;
    if rows.len() < 3 {
        bail!("convexity probe needs at least 3 rows, got {}", rows.len());
    }
    let grid = grid_from_rows(&rows)?;
    let report = convexity_violation(&grid).map_err(|e| anyhow::anyhow!("{e}"))?;
    let flag = if report.max_violation > threshold {
        ProbeFlag::Nonconvex
    } else {
        ProbeFlag::Inconclusive
    };
    Ok(ProbeReport {
        points: rows.len(),
        max_violation: report.max_violation,
        witness: report.witness,
        threshold,
        flag,
    })
}
