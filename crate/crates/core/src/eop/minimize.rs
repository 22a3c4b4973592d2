//! Local descent on the isometry manifold.
//!
//! Polak-Ribiere conjugate gradient with projection-based vector transport,
//! Armijo backtracking, and polar retraction. The constraint stays satisfied
//! at every accepted iterate and the objective never increases.

use alloc::format;

use crate::eop::isometry::{project_tangent, retract, IsometryPoint};
use crate::eop::objective::{objective_matrix, value_and_gradient};
use crate::math;
use crate::matrix::ComplexMatrix;
use crate::state::PureState;
use crate::{Error, Result};

/// Backtracking line-search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchParams {
    /// Trial step at the start of every backtracking run.
    pub initial_step: f64,
    /// Multiplicative shrink per rejection.
    pub shrink: f64,
    /// Armijo sufficient-decrease constant.
    pub sufficient_decrease: f64,
    /// Rejections before the search gives up.
    pub max_halvings: u32,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        Self { initial_step: 1.0, shrink: 0.5, sufficient_decrease: 1e-4, max_halvings: 60 }
    }
}

/// Knobs for the multi-start estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Number of Haar-random starting points.
    pub restarts: usize,
    /// Iteration cap per start.
    pub max_iters: usize,
    /// Convergence threshold on the projected gradient norm.
    pub grad_tol: f64,
    /// Base seed; start k draws from the (seed, k) ChaCha stream.
    pub seed: u64,
    /// Also descend from both trivial embeddings, which pins the estimate
    /// at or below min(S(A), S(B)).
    pub include_trivial_starts: bool,
    /// Ancilla output dimension |A'|; `None` means rank(rho).
    pub ancilla_a: Option<usize>,
    /// Ancilla output dimension |B'|; `None` means rank(rho).
    pub ancilla_b: Option<usize>,
    pub line_search: LineSearchParams,
    /// A failed line search with projected gradient norm at or below this
    /// counts as converged: the remaining decrease is under f64 resolution
    /// of an O(1) objective. Above it the outcome is flagged.
    pub stall_tol: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 5000,
            grad_tol: 1e-8,
            seed: 0,
            include_trivial_starts: true,
            ancilla_a: None,
            ancilla_b: None,
            line_search: LineSearchParams::default(),
            stall_tol: 1e-6,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidOptions("restarts must be >= 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidOptions("grad_tol must be > 0".into()));
        }
        let ls = &self.line_search;
        if !(ls.initial_step > 0.0) || !(ls.shrink > 0.0 && ls.shrink < 1.0) {
            return Err(Error::InvalidOptions(format!(
                "bad line search: initial_step {} shrink {}",
                ls.initial_step, ls.shrink
            )));
        }
        if !(ls.sufficient_decrease > 0.0 && ls.sufficient_decrease < 1.0) {
            return Err(Error::InvalidOptions("sufficient_decrease must be in (0,1)".into()));
        }
        if self.stall_tol < 0.0 {
            return Err(Error::InvalidOptions("stall_tol must be >= 0".into()));
        }
        Ok(())
    }
}

/// Result of one descent run.
#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub value: f64,
    pub point: IsometryPoint,
    pub iterations: usize,
    /// Projected gradient norm at the returned point.
    pub grad_norm: f64,
    /// The search could no longer make progress while the gradient was
    /// still above `stall_tol`.
    pub line_search_failed: bool,
}

/// Accepted decreases at or below `STAGNATION_TOL * max(1, |f|)` are
/// indistinguishable from f64 rounding noise of the entropy objective.
const STAGNATION_TOL: f64 = 1e-15;
/// Consecutive noise-level iterations before the run is declared stalled.
const STAGNATION_RUN: usize = 20;

fn tangent_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.inner(b).re
}

/// Descends from `start` until the projected gradient norm drops to
/// `grad_tol` or the iteration budget runs out. Monotone: the returned value
/// never exceeds the objective at the start.
pub fn local_minimize(
    phi: &PureState,
    start: &IsometryPoint,
    opts: &OptimizerOptions,
) -> Result<MinimizeOutcome> {
    opts.validate()?;
    let ls = opts.line_search;
    let mut point = start.clone();
    let (mut value, grad) = value_and_gradient(
        phi,
        point.matrix(),
        point.d_out_a(),
        point.d_out_b(),
    )?;
    let mut z = project_tangent(&point, &grad)?;
    let mut gnorm_sq = tangent_inner(&z, &z);
    let mut direction = z.scale_real(-1.0);
    let mut iterations = 0usize;
    let mut line_search_failed = false;
    let mut stagnant = 0usize;

    while iterations < opts.max_iters && math::sqrt(gnorm_sq) > opts.grad_tol {
        // Keep the search direction a descent direction.
        let mut dd = tangent_inner(&z, &direction);
        if dd >= 0.0 {
            direction = z.scale_real(-1.0);
            dd = -gnorm_sq;
        }

        let mut step = ls.initial_step;
        let mut accepted = None;
        for _ in 0..ls.max_halvings {
            match retract(&point, &direction.scale_real(step)) {
                Ok(candidate) => {
                    let trial = objective_matrix(
                        phi,
                        candidate.matrix(),
                        candidate.d_out_a(),
                        candidate.d_out_b(),
                    )?;
                    if trial <= value + ls.sufficient_decrease * step * dd {
                        accepted = Some((candidate, trial));
                        break;
                    }
                }
                // Step too large collapsed a direction; halve and retry.
                Err(Error::RankDeficientRetraction) => {}
                Err(e) => return Err(e),
            }
            step *= ls.shrink;
        }

        let Some((next_point, next_value)) = accepted else {
            line_search_failed = math::sqrt(gnorm_sq) > opts.stall_tol;
            break;
        };

        // Sustained noise-level progress is a stall in slow motion; stop it
        // through the same gate as a failed line search. The forgone step is
        // worth at most STAGNATION_TOL, so the last accepted iterate stands.
        if value - next_value <= STAGNATION_TOL * math::max(1.0, math::abs(value)) {
            stagnant += 1;
            if stagnant >= STAGNATION_RUN {
                line_search_failed = math::sqrt(gnorm_sq) > opts.stall_tol;
                break;
            }
        } else {
            stagnant = 0;
        }

        iterations += 1;
        point = next_point;
        value = next_value;
        let (_, grad) = value_and_gradient(
            phi,
            point.matrix(),
            point.d_out_a(),
            point.d_out_b(),
        )?;
        let z_new = project_tangent(&point, &grad)?;
        let gnorm_sq_new = tangent_inner(&z_new, &z_new);

        // Polak-Ribiere(+) with projection transport.
        let z_old_t = project_tangent(&point, &z)?;
        let beta_num = tangent_inner(&z_new, &z_new.sub(&z_old_t)?);
        let beta = math::max(0.0, beta_num / gnorm_sq);
        let dir_t = project_tangent(&point, &direction)?;
        direction = dir_t.scale_real(beta).sub(&z_new)?;

        z = z_new;
        gnorm_sq = gnorm_sq_new;
    }

    Ok(MinimizeOutcome {
        value,
        point,
        iterations,
        grad_norm: math::sqrt(gnorm_sq),
        line_search_failed,
    })
}
