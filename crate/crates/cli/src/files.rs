//! On-disk formats: state files, decomposition files, sweep CSV.
//!
//! A state file is a UTF-8 JSON document
//!
//! ```json
//! { "dims": [2, 2],
//!   "matrix": [[[re, im], ...], ...] }
//! ```
//!
//! with `matrix` row-major. Invariants are checked at an ingestion tolerance
//! of 1e-8; accepted matrices are then symmetrized, eigenvalue noise in
//! [-1e-8, 0) is projected out, and the trace is renormalized to exactly 1.
//!
//! A decomposition file lists weighted components with their upper bounds:
//!
//! ```json
//! { "components": [
//!     { "weight": 0.5, "state": "werner:0",    "u": 1.0,    "provenance": "exact" },
//!     { "weight": 0.5, "state": "werner:0.01", "u": 0.9226, "provenance": "single-copy-estimate" } ] }
//! ```
//!
//! where `state` is either the `werner:<f>` shorthand or an inline state
//! object, and `provenance` is one of `exact`, `single-copy-estimate`,
//! `external`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use eoplab_core::{
    hermitian_eig, werner, BoundComponent, ComplexMatrix, DensityOperator,
    EnsembleDecomposition, Provenance, WernerParams, C64,
};

/// Ingestion tolerance for hermiticity, trace and positivity.
const INGEST_TOL: f64 = 1e-8;

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    /// Row-major entries as [re, im] pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityOperator) -> Self {
        let side = rho.dim();
        let m = rho.matrix();
        let matrix = (0..side)
            .map(|i| (0..side).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dims: rho.dims().to_vec(), matrix }
    }

    /// Validates at the ingestion tolerance and sanitizes into a strict
    /// density operator.
    pub fn into_density(self) -> Result<DensityOperator> {
        let side: usize = self.dims.iter().product();
        if self.dims.is_empty() || self.dims.iter().any(|&d| d == 0) {
            bail!("invalid dims {:?}", self.dims);
        }
        if self.matrix.len() != side || self.matrix.iter().any(|r| r.len() != side) {
            bail!(
                "matrix must be {side}x{side} for dims {:?}, got {} rows",
                self.dims,
                self.matrix.len()
            );
        }
        let mut m = ComplexMatrix::zeros(side, side);
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    bail!("non-finite entry at ({i}, {j})");
                }
                m[(i, j)] = C64::new(re, im);
            }
        }

        let dev = m.hermitian_deviation();
        if dev > INGEST_TOL {
            bail!("matrix is not Hermitian: max deviation {dev:.3e} exceeds {INGEST_TOL:.0e}");
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > INGEST_TOL || tr.im.abs() > INGEST_TOL {
            bail!("trace {:.12}{:+.3e}i is not 1 within {INGEST_TOL:.0e}", tr.re, tr.im);
        }

        // Sanitize: symmetrize, project off eigenvalue noise, renormalize.
        let m = m.hermitian_part();
        let (eigs, u) = hermitian_eig(&m).map_err(|e| anyhow::anyhow!("{e}"))?;
        if eigs[0] < -INGEST_TOL {
            bail!(
                "matrix is not positive semidefinite: smallest eigenvalue {:.3e}",
                eigs[0]
            );
        }
        let m = if eigs[0] < 0.0 {
            let clipped: Vec<f64> = eigs.iter().map(|&l| l.max(0.0)).collect();
            let lam = ComplexMatrix::diag(&clipped);
            u.mul(&lam)
                .and_then(|p| p.mul(&u.adjoint()))
                .map_err(|e| anyhow::anyhow!("{e}"))?
        } else {
            m
        };
        let m = m.scale_real(1.0 / m.trace().re);
        DensityOperator::new(self.dims, m)
            .map_err(|e| anyhow::anyhow!("sanitized state still invalid: {e}"))
    }
}

pub fn load_state(path: &Path) -> Result<DensityOperator> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read state file {}", path.display()))?;
    let parsed: StateFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse state file {}", path.display()))?;
    parsed
        .into_density()
        .with_context(|| format!("invalid state in {}", path.display()))
}

/// `werner:<f>` shorthand or an inline state document.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Shorthand(String),
    Inline(StateFile),
}

impl StateSpec {
    pub fn into_density(self) -> Result<DensityOperator> {
        match self {
            StateSpec::Shorthand(s) => {
                let f = s
                    .strip_prefix("werner:")
                    .with_context(|| format!("unknown state shorthand {s:?}"))?;
                let f: f64 = f.parse().with_context(|| format!("bad singlet fraction in {s:?}"))?;
                Ok(werner(
                    WernerParams::new(f).map_err(|e| anyhow::anyhow!("{e}"))?,
                ))
            }
            StateSpec::Inline(file) => file.into_density(),
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct DecompositionEntry {
    pub weight: f64,
    pub state: StateSpec,
    /// Upper bound on the regularized entanglement of purification, ebits.
    pub u: f64,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
pub struct DecompositionFile {
    pub components: Vec<DecompositionEntry>,
}

fn parse_provenance(s: &str) -> Result<Provenance> {
    match s {
        "exact" => Ok(Provenance::Exact),
        "single-copy-estimate" => Ok(Provenance::SingleCopyEstimate),
        "external" => Ok(Provenance::External),
        other => bail!(
            "unknown provenance {other:?} (expected exact, single-copy-estimate or external)"
        ),
    }
}

pub fn load_decomposition(path: &Path) -> Result<EnsembleDecomposition> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read decomposition file {}", path.display()))?;
    let parsed: DecompositionFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse decomposition file {}", path.display()))?;
    let mut components = Vec::with_capacity(parsed.components.len());
    for (i, entry) in parsed.components.into_iter().enumerate() {
        let provenance = parse_provenance(&entry.provenance)
            .with_context(|| format!("component {i}"))?;
        let state = entry
            .state
            .into_density()
            .with_context(|| format!("component {i}"))?;
        components.push(BoundComponent {
            weight: entry.weight,
            state,
            upper_bound: entry.u,
            provenance,
        });
    }
    EnsembleDecomposition::new(components).map_err(|e| anyhow::anyhow!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_file_round_trip() {
        let w = werner(WernerParams::new(0.37).unwrap());
        let file = StateFile::from_density(&w);
        let back = file.into_density().unwrap();
        assert!(eoplab_core::trace_distance(&back, &w).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes_and_invariants() {
        // wrong row count
        let f = StateFile { dims: vec![2], matrix: vec![vec![[1.0, 0.0], [0.0, 0.0]]] };
        assert!(f.into_density().is_err());
        // non-hermitian
        let f = StateFile {
            dims: vec![2],
            matrix: vec![
                vec![[0.5, 0.0], [0.3, 0.0]],
                vec![[0.0, 0.0], [0.5, 0.0]],
            ],
        };
        assert!(f.into_density().is_err());
        // trace 2
        let f = StateFile {
            dims: vec![2],
            matrix: vec![
                vec![[1.0, 0.0], [0.0, 0.0]],
                vec![[0.0, 0.0], [1.0, 0.0]],
            ],
        };
        assert!(f.into_density().is_err());
        // negative eigenvalue beyond tolerance
        let f = StateFile {
            dims: vec![2],
            matrix: vec![
                vec![[1.1, 0.0], [0.0, 0.0]],
                vec![[0.0, 0.0], [-0.1, 0.0]],
            ],
        };
        assert!(f.into_density().is_err());
    }

    #[test]
    fn sanitizes_noise_at_ingestion_tolerance() {
        // Hermitian up to 3e-9, eigenvalue -2e-9, trace off by 1e-9: all
        // within ingestion tolerance, fixed up on load.
        let f = StateFile {
            dims: vec![2],
            matrix: vec![
                vec![[1.0 + 1e-9, 0.0], [1e-9, 3e-9]],
                vec![[-2e-9, 3e-9], [-2e-9, 0.0]],
            ],
        };
        let rho = f.into_density().unwrap();
        let tr = rho.matrix().trace();
        assert!((tr.re - 1.0).abs() < 1e-14);
        assert!(rho.matrix().hermitian_deviation() < 1e-15);
    }

    #[test]
    fn werner_shorthand() {
        let s = StateSpec::Shorthand("werner:0.25".into());
        let rho = s.into_density().unwrap();
        let expect = werner(WernerParams::new(0.25).unwrap());
        assert!(eoplab_core::trace_distance(&rho, &expect).unwrap() < 1e-14);
        assert!(StateSpec::Shorthand("werner:1.5".into()).into_density().is_err());
        assert!(StateSpec::Shorthand("bell:0".into()).into_density().is_err());
    }
}
