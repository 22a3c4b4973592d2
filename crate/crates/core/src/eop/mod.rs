//! Upper estimation of the entanglement of purification by multi-start
//! local descent over purifying isometries.
//!
//! For a bipartite state rho, every purification on A B A' B' is reached
//! from a fixed reference purification |phi> on A B A' (ancilla dimension =
//! rank rho) through an isometry V: A' -> A' tensor B'; ancilla dimensions
//! equal to the rank suffice for the true minimum. The estimator descends
//! from trivial embeddings plus Haar-random starts and reports the smallest
//! local minimum found.
//!
//! Everything here is an upper bound: local descent certifies concrete
//! feasible points, never global optimality.

mod isometry;
mod minimize;
mod objective;

pub use isometry::{
    apply_isometry, project_tangent, retract, trivial_embedding, IsometryPoint, Side,
};
pub use minimize::{local_minimize, LineSearchParams, MinimizeOutcome, OptimizerOptions};
pub use objective::{euclidean_gradient, objective, objective_matrix};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{ComplexMatrix, C_ZERO};
use crate::sampling;
use crate::state::{entropy, partial_trace, standard_purification, DensityOperator, PureState};
use crate::{Error, Result};

/// Cap on d_A * d_B * |A'| * |B'|; beyond it the dense eigensolver is the
/// wrong tool.
pub const MAX_TOTAL_DIM: usize = 4096;

/// Which starting point a restart used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartKind {
    TrivialA,
    TrivialB,
    /// Tensor product of the two single-copy best isometries
    /// (product experiments only).
    Product,
    /// Haar-random start with the given stream ordinal.
    Random(usize),
}

/// A multi-start estimation problem with a fixed reference purification.
///
/// Starts are indexed; `run_start` is a pure function of the index, so
/// callers may fan the indices out across threads and [`EopSearch::certify`]
/// the collected outcomes without affecting the result.
pub struct EopSearch {
    phi: PureState,
    d_in: usize,
    d_out_a: usize,
    d_out_b: usize,
    opts: OptimizerOptions,
    starts: Vec<StartKind>,
    product_start: Option<IsometryPoint>,
}

impl EopSearch {
    /// Sets up the search for a bipartite density operator, with ancilla
    /// dimensions defaulting to its rank.
    pub fn new(rho: &DensityOperator, opts: &OptimizerOptions) -> Result<Self> {
        if rho.dims().len() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "estimation needs a bipartite state, got {} subsystems",
                rho.dims().len()
            )));
        }
        let phi = standard_purification(rho)?;
        Self::from_purification(phi, opts, None)
    }

    fn from_purification(
        phi: PureState,
        opts: &OptimizerOptions,
        product_start: Option<IsometryPoint>,
    ) -> Result<Self> {
        opts.validate()?;
        let d_in = *phi.dims().last().expect("purification has dims");
        let d_out_a = opts.ancilla_a.unwrap_or(d_in);
        let d_out_b = opts.ancilla_b.unwrap_or(d_in);
        if d_out_a == 0 || d_out_b == 0 || d_out_a * d_out_b < d_in {
            return Err(Error::InvalidOptions(format!(
                "ancilla dims {d_out_a}x{d_out_b} cannot receive a {d_in}-dimensional input"
            )));
        }
        let total = phi.dims()[0] * phi.dims()[1] * d_out_a * d_out_b;
        if total > MAX_TOTAL_DIM {
            return Err(Error::InvalidOptions(format!(
                "total dimension {total} exceeds the {MAX_TOTAL_DIM} cap"
            )));
        }
        if let Some(p) = &product_start {
            if p.d_in() != d_in || p.d_out_a() != d_out_a || p.d_out_b() != d_out_b {
                return Err(Error::DimensionMismatch(
                    "product start incompatible with search dimensions".into(),
                ));
            }
        }

        let mut starts = Vec::new();
        if opts.include_trivial_starts {
            if d_in <= d_out_a {
                starts.push(StartKind::TrivialA);
            }
            if d_in <= d_out_b {
                starts.push(StartKind::TrivialB);
            }
        }
        if product_start.is_some() {
            starts.push(StartKind::Product);
        }
        for k in 0..opts.restarts {
            starts.push(StartKind::Random(k));
        }
        Ok(Self {
            phi,
            d_in,
            d_out_a,
            d_out_b,
            opts: *opts,
            starts,
            product_start,
        })
    }

    pub fn num_starts(&self) -> usize {
        self.starts.len()
    }

    pub fn start_kinds(&self) -> &[StartKind] {
        &self.starts
    }

    pub fn ancilla_dims(&self) -> (usize, usize) {
        (self.d_out_a, self.d_out_b)
    }

    pub fn reference_purification(&self) -> &PureState {
        &self.phi
    }

    /// Materializes the starting isometry for a start index. Random starts
    /// draw from the (seed, ordinal) ChaCha stream, so the result does not
    /// depend on which other starts are enabled.
    pub fn build_start(&self, index: usize) -> Result<IsometryPoint> {
        match self.starts[index] {
            StartKind::TrivialA => {
                trivial_embedding(self.d_in, self.d_out_a, self.d_out_b, Side::A)
            }
            StartKind::TrivialB => {
                trivial_embedding(self.d_in, self.d_out_a, self.d_out_b, Side::B)
            }
            StartKind::Product => Ok(self
                .product_start
                .clone()
                .expect("Product start only listed when present")),
            StartKind::Random(ordinal) => {
                let mut rng = sampling::stream_rng(self.opts.seed, ordinal as u64);
                let m = sampling::haar_isometry_from_rng(
                    &mut rng,
                    self.d_out_a * self.d_out_b,
                    self.d_in,
                )?;
                Ok(IsometryPoint::new(self.d_in, self.d_out_a, self.d_out_b, m)
                    .expect("orthonormalized matrix is an isometry"))
            }
        }
    }

    /// Runs local descent from start `index`.
    pub fn run_start(&self, index: usize) -> Result<MinimizeOutcome> {
        let start = self.build_start(index)?;
        local_minimize(&self.phi, &start, &self.opts)
    }

    /// Reduces outcomes (ordered by start index) into a certificate. The
    /// minimum is taken deterministically: ties go to the lowest index.
    pub fn certify(&self, outcomes: Vec<MinimizeOutcome>) -> Result<EopCertificate> {
        if outcomes.len() != self.starts.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} outcomes, got {}",
                self.starts.len(),
                outcomes.len()
            )));
        }
        let mut best = 0usize;
        for (i, out) in outcomes.iter().enumerate() {
            if out.value < outcomes[best].value {
                best = i;
            }
        }
        let iterations = outcomes.iter().map(|o| o.iterations as u64).sum();
        let line_search_failures =
            outcomes.iter().filter(|o| o.line_search_failed).count();
        Ok(EopCertificate {
            best_value: outcomes[best].value,
            per_restart_values: outcomes.iter().map(|o| o.value).collect(),
            start_kinds: self.starts.clone(),
            best_start: self.starts[best],
            best_isometry: outcomes[best].point.clone(),
            ancilla_dims: (self.d_out_a, self.d_out_b),
            seed: self.opts.seed,
            iterations,
            line_search_failures,
        })
    }
}

/// Best objective value found by a multi-start run, with per-restart values
/// and convergence metadata. Semantically an upper bound on the
/// entanglement of purification, never the value itself.
#[derive(Debug, Clone)]
pub struct EopCertificate {
    best_value: f64,
    per_restart_values: Vec<f64>,
    start_kinds: Vec<StartKind>,
    best_start: StartKind,
    best_isometry: IsometryPoint,
    ancilla_dims: (usize, usize),
    seed: u64,
    iterations: u64,
    line_search_failures: usize,
}

impl EopCertificate {
    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    /// Local-minimum values in start order (trivials, then product if any,
    /// then random starts by ordinal).
    pub fn per_restart_values(&self) -> &[f64] {
        &self.per_restart_values
    }

    pub fn start_kinds(&self) -> &[StartKind] {
        &self.start_kinds
    }

    pub fn best_start(&self) -> StartKind {
        self.best_start
    }

    pub fn best_isometry(&self) -> &IsometryPoint {
        &self.best_isometry
    }

    /// (|A'|, |B'|) used by the search.
    pub fn ancilla_dims(&self) -> (usize, usize) {
        self.ancilla_dims
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total descent iterations across all starts.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn line_search_failures(&self) -> usize {
        self.line_search_failures
    }

    /// Number of clusters in the per-restart values when grouped at the
    /// given resolution.
    pub fn distinct_minima(&self, tol: f64) -> usize {
        let mut sorted = self.per_restart_values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite objective values"));
        let mut clusters = 0;
        let mut last = f64::NEG_INFINITY;
        for v in sorted {
            if clusters == 0 || v - last > tol {
                clusters += 1;
                last = v;
            }
        }
        clusters
    }
}

/// Multi-start upper estimate of the entanglement of purification of a
/// bipartite state. Runs all starts serially; use [`EopSearch`] directly to
/// fan restarts out. Deterministic for a fixed seed.
pub fn eop_estimate(rho: &DensityOperator, opts: &OptimizerOptions) -> Result<EopCertificate> {
    let search = EopSearch::new(rho, opts)?;
    let outcomes = (0..search.num_starts())
        .map(|i| search.run_start(i))
        .collect::<Result<Vec<_>>>()?;
    search.certify(outcomes)
}

/// Exact entanglement of purification of a bipartite pure state: S(rho^A),
/// no optimization.
pub fn eop_pure(psi: &PureState) -> Result<f64> {
    if psi.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "pure-state shortcut needs a bipartite state, got {} subsystems",
            psi.dims().len()
        )));
    }
    entropy(&psi.reduced_density(&[0])?)
}

/// [`eop_pure`] for a density operator, guarded by a purity check
/// (tr rho^2 >= 1 - 1e-8).
pub fn eop_pure_from_density(rho: &DensityOperator) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "pure-state shortcut needs a bipartite state, got {} subsystems",
            rho.dims().len()
        )));
    }
    let purity = rho.purity();
    if purity < 1.0 - 1e-8 {
        return Err(Error::NotPure { purity });
    }
    entropy(&partial_trace(rho, &[0])?)
}

/// Upper estimate for rho tensor sigma across the A1 A2 : B1 B2 cut.
///
/// The reference purification is the reordered tensor product of the two
/// single-copy standard purifications, so the start set can include the
/// tensor product of the two single-copy best isometries; descent from it
/// pins the result at or below the sum of the single-copy estimates. Both
/// inputs must be two-qubit states, which keeps the total dimension within
/// [`MAX_TOTAL_DIM`].
pub fn eop_product_estimate(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    opts: &OptimizerOptions,
) -> Result<EopCertificate> {
    for (name, state) in [("rho", rho), ("sigma", sigma)] {
        if state.dims() != [2, 2] {
            return Err(Error::DimensionMismatch(format!(
                "{name} must be a two-qubit state, got dims {:?}",
                state.dims()
            )));
        }
    }
    // Single-copy runs with default (rank) ancillas and the same seed.
    let mut single_opts = *opts;
    single_opts.ancilla_a = None;
    single_opts.ancilla_b = None;
    let cert1 = eop_estimate(rho, &single_opts)?;
    let cert2 = eop_estimate(sigma, &single_opts)?;

    let phi1 = standard_purification(rho)?;
    let phi2 = standard_purification(sigma)?;
    let (r1, r2) = (*phi1.dims().last().unwrap(), *phi2.dims().last().unwrap());

    // phi on (A1 A2, B1 B2, ancilla): a = a1*2 + a2, b = b1*2 + b2,
    // m = m1*r2 + m2.
    let big_r = r1 * r2;
    let mut amps = vec![C_ZERO; 16 * big_r];
    let (a1d, a2d) = (phi1.amplitudes(), phi2.amplitudes());
    for a1 in 0..2 {
        for a2 in 0..2 {
            for b1 in 0..2 {
                for b2 in 0..2 {
                    for m1 in 0..r1 {
                        for m2 in 0..r2 {
                            let a = a1 * 2 + a2;
                            let b = b1 * 2 + b2;
                            let m = m1 * r2 + m2;
                            amps[(a * 4 + b) * big_r + m] = a1d[(a1 * 2 + b1) * r1 + m1]
                                * a2d[(a2 * 2 + b2) * r2 + m2];
                        }
                    }
                }
            }
        }
    }
    let phi = PureState::new(vec![4, 4, big_r], amps)?;

    let mut product_opts = *opts;
    product_opts.ancilla_a = Some(opts.ancilla_a.unwrap_or(big_r));
    product_opts.ancilla_b = Some(opts.ancilla_b.unwrap_or(big_r));

    // The reordered tensor product of the single-copy best isometries; only
    // fits when the product ancillas are left at their defaults.
    let product_start = build_product_start(
        cert1.best_isometry(),
        cert2.best_isometry(),
        product_opts.ancilla_a.unwrap(),
        product_opts.ancilla_b.unwrap(),
    );

    let search = EopSearch::from_purification(phi, &product_opts, product_start)?;
    let outcomes = (0..search.num_starts())
        .map(|i| search.run_start(i))
        .collect::<Result<Vec<_>>>()?;
    search.certify(outcomes)
}

fn build_product_start(
    v1: &IsometryPoint,
    v2: &IsometryPoint,
    d_out_a: usize,
    d_out_b: usize,
) -> Option<IsometryPoint> {
    let d_in = v1.d_in() * v2.d_in();
    if v1.d_out_a() * v2.d_out_a() != d_out_a || v1.d_out_b() * v2.d_out_b() != d_out_b {
        return None;
    }
    let (a2, b2) = (v2.d_out_a(), v2.d_out_b());
    let (m1d, m2d) = (v1.d_in(), v2.d_in());
    let mut m = ComplexMatrix::zeros(d_out_a * d_out_b, d_in);
    for p1 in 0..v1.d_out_a() {
        for p2 in 0..a2 {
            for q1 in 0..v1.d_out_b() {
                for q2 in 0..b2 {
                    for c1 in 0..m1d {
                        for c2 in 0..m2d {
                            let p = p1 * a2 + p2;
                            let q = q1 * b2 + q2;
                            let row = p * d_out_b + q;
                            let col = c1 * m2d + c2;
                            m[(row, col)] = v1.matrix()[(p1 * v1.d_out_b() + q1, c1)]
                                * v2.matrix()[(p2 * b2 + q2, c2)];
                        }
                    }
                }
            }
        }
    }
    Some(IsometryPoint::from_parts_unchecked(d_in, d_out_a, d_out_b, m))
}
