//! Certificates for the regularized entanglement of purification.
//!
//! For a decomposition rho = sum_i p_i rho_i, the regularized quantity obeys
//!
//! ```text
//! E_inf(rho) <= sum_i p_i u_i + chi({p_i; rho_i}),
//! ```
//!
//! whenever each u_i upper-bounds E_inf(rho_i); chi is the Holevo
//! information of the ensemble. Single-copy estimates are valid u_i because
//! the regularization never exceeds the single-copy value. Since the bound
//! rearranges to convexity of E_inf - S, a non-convex single-copy curve
//! separates the single-copy quantity from its regularization; the midpoint
//! detector here measures exactly that on a sampled grid.
//!
//! The detector speaks about the plotted upper-estimate curve. Whether the
//! true curve behaves the same way depends on the estimates being tight,
//! which multi-start descent cannot certify.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::state::{entropy, DensityOperator, Ensemble};
use crate::{holevo_chi, Error, Result, WEIGHT_TOL};

/// How a per-component upper bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Known exactly (closed form or rigorous result).
    Exact,
    /// Single-copy numerical estimate; valid because E_inf <= E_P.
    SingleCopyEstimate,
    /// Supplied by the caller from elsewhere.
    External,
}

/// One ensemble component with its upper bound on the regularized quantity.
#[derive(Debug, Clone)]
pub struct BoundComponent {
    pub weight: f64,
    pub state: DensityOperator,
    /// Upper bound u_i on E_inf(state), in ebits.
    pub upper_bound: f64,
    pub provenance: Provenance,
}

/// Weighted decomposition rho = sum_i p_i rho_i with caller-supplied,
/// provenance-tagged bounds. Bounds are never synthesized here: silently
/// conflating estimates with exact values would corrupt certificates.
#[derive(Debug, Clone)]
pub struct EnsembleDecomposition {
    components: Vec<BoundComponent>,
}

impl EnsembleDecomposition {
    pub fn new(components: Vec<BoundComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidEnsemble("empty decomposition".into()));
        }
        if components.iter().any(|c| c.weight < 0.0 || !c.weight.is_finite()) {
            return Err(Error::InvalidEnsemble("weights must be non-negative".into()));
        }
        let sum: f64 = components.iter().map(|c| c.weight).sum();
        if math::abs(sum - 1.0) > WEIGHT_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {sum:.15}")));
        }
        if components.iter().any(|c| c.upper_bound < 0.0 || !c.upper_bound.is_finite()) {
            return Err(Error::InvalidEnsemble("upper bounds must be non-negative".into()));
        }
        let dims = components[0].state.dims().to_vec();
        if components.iter().any(|c| c.state.dims() != dims) {
            return Err(Error::InvalidEnsemble("components have different dims".into()));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[BoundComponent] {
        &self.components
    }
}

/// Output of the bound combinator.
#[derive(Debug, Clone)]
pub struct Theorem1Bound {
    /// sum_i p_i u_i + chi.
    pub bound: f64,
    /// Holevo information of the decomposition.
    pub chi: f64,
    /// sum_i p_i u_i alone.
    pub weighted_upper: f64,
    /// The state the bound applies to: sum_i p_i rho_i.
    pub average: DensityOperator,
    /// Per-component provenance, in input order.
    pub provenance: Vec<Provenance>,
}

/// Upper bound on the regularized entanglement of purification of the
/// averaged state: sum_i p_i u_i + chi({p_i; rho_i}).
pub fn theorem1_upper_bound(d: &EnsembleDecomposition) -> Result<Theorem1Bound> {
    let ensemble = Ensemble::new(
        d.components().iter().map(|c| (c.weight, c.state.clone())).collect(),
    )?;
    let chi = holevo_chi(&ensemble)?;
    let weighted_upper: f64 =
        d.components().iter().map(|c| c.weight * c.upper_bound).sum();
    Ok(Theorem1Bound {
        bound: weighted_upper + chi,
        chi,
        weighted_upper,
        average: ensemble.average(),
        provenance: d.components().iter().map(|c| c.provenance).collect(),
    })
}

/// delta = eop_upper - S(rho); negative wherever the state's own entropy
/// exceeds the estimate.
pub fn delta(eop_upper: f64, rho: &DensityOperator) -> Result<f64> {
    if eop_upper < 0.0 || !eop_upper.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "eop upper estimate {eop_upper} must be a non-negative number"
        )));
    }
    Ok(eop_upper - entropy(rho)?)
}

/// One grid point of the delta functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPoint {
    /// Sweep parameter (singlet fraction for Werner sweeps).
    pub x: f64,
    pub eop_upper: f64,
    pub entropy: f64,
    /// eop_upper - entropy; validated on grid construction.
    pub delta_upper: f64,
}

/// Strictly increasing grid of delta values.
#[derive(Debug, Clone)]
pub struct DeltaGrid {
    points: Vec<DeltaPoint>,
}

impl DeltaGrid {
    pub fn new(points: Vec<DeltaPoint>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[0].x < w[1].x)) {
            return Err(Error::InvalidParameter(
                "grid x values must be strictly increasing".into(),
            ));
        }
        for p in &points {
            if math::abs(p.delta_upper - (p.eop_upper - p.entropy)) > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "delta {} inconsistent with eop {} - entropy {} at x = {}",
                    p.delta_upper, p.eop_upper, p.entropy, p.x
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[DeltaPoint] {
        &self.points
    }
}

/// Result of the midpoint convexity probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    /// Largest delta(x) - (delta(x-h) + delta(x+h))/2 over equally spaced
    /// triples; positive certifies non-convexity of the sampled curve.
    pub max_violation: f64,
    /// The (x-h, x, x+h) triple attaining the maximum.
    pub witness: (f64, f64, f64),
}

const X_TOL: f64 = 1e-12;

/// Scans all equally spaced triples present in the grid (within an
/// x-tolerance of 1e-12) for midpoint convexity violations. Affine shifts
/// of the delta values leave the result unchanged.
pub fn convexity_violation(grid: &DeltaGrid) -> Result<ConvexityReport> {
    let pts = grid.points();
    if pts.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "convexity probe needs at least 3 points, got {}",
            pts.len()
        )));
    }
    let mut best: Option<ConvexityReport> = None;
    for i in 0..pts.len() {
        for k in (i + 2)..pts.len() {
            let target = 0.5 * (pts[i].x + pts[k].x);
            // Binary search for the midpoint, then check the neighborhood.
            let mut lo = i + 1;
            let mut hi = k;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if pts[mid].x < target - X_TOL {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            for j in lo.saturating_sub(1)..=lo.min(k - 1) {
                if j <= i || j >= k {
                    continue;
                }
                if math::abs(2.0 * pts[j].x - pts[i].x - pts[k].x) > X_TOL {
                    continue;
                }
                let violation = pts[j].delta_upper
                    - 0.5 * (pts[i].delta_upper + pts[k].delta_upper);
                let report = ConvexityReport {
                    max_violation: violation,
                    witness: (pts[i].x, pts[j].x, pts[k].x),
                };
                if best.map_or(true, |b| violation > b.max_violation) {
                    best = Some(report);
                }
            }
        }
    }
    best.ok_or(Error::NoEquallySpacedTriple)
}

/// What a benchmark value means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkKind {
    /// Rigorously known value of the entanglement of purification.
    Exact,
    /// Published upper bound from single-copy numerics.
    SingleCopyUpperBound,
    /// Published upper bound on the regularized quantity.
    RegularizedUpperBound,
}

/// One row of the static Werner benchmark table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkRow {
    pub f: f64,
    pub value: f64,
    pub kind: BenchmarkKind,
}

/// The reference values acceptance runs compare against: exact points of
/// the Werner curve plus the published numerical bounds.
pub fn werner_benchmark() -> Vec<BenchmarkRow> {
    vec![
        BenchmarkRow { f: 0.0, value: 1.0, kind: BenchmarkKind::Exact },
        BenchmarkRow {
            f: 0.005,
            value: 0.9663,
            kind: BenchmarkKind::RegularizedUpperBound,
        },
        BenchmarkRow {
            f: 0.01,
            value: 0.9226,
            kind: BenchmarkKind::SingleCopyUpperBound,
        },
        BenchmarkRow { f: 0.25, value: 0.0, kind: BenchmarkKind::Exact },
        BenchmarkRow { f: 1.0, value: 1.0, kind: BenchmarkKind::Exact },
    ]
}
