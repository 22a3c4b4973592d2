//! Points on the isometry manifold {V : V^dagger V = 1} and the maps the
//! optimizer needs: trivial embeddings, application to a purification,
//! tangent projection and polar retraction.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::inv_sqrt_pd;
use crate::matrix::{ComplexMatrix, C64, C_ONE, C_ZERO};
use crate::state::PureState;
use crate::{Error, Result, ISOMETRY_TOL};

/// Which output factor a trivial embedding routes the ancilla into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// V|m> = |m>_{A'} |0>_{B'}: all ancilla content stays on the A side.
    A,
    /// V|m> = |0>_{A'} |m>_{B'}: all ancilla content moves to the B side.
    B,
}

/// An isometry V: A' -> A' tensor B', the optimization variable.
///
/// The matrix has shape `(d_out_a * d_out_b) x d_in` with the output row
/// index `r = a' * d_out_b + b'` following the crate-wide row-major
/// convention, and satisfies `V^dagger V = 1` within [`ISOMETRY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryPoint {
    d_in: usize,
    d_out_a: usize,
    d_out_b: usize,
    matrix: ComplexMatrix,
}

impl IsometryPoint {
    pub fn new(
        d_in: usize,
        d_out_a: usize,
        d_out_b: usize,
        matrix: ComplexMatrix,
    ) -> Result<Self> {
        if d_in == 0 || d_out_a == 0 || d_out_b == 0 {
            return Err(Error::DimensionMismatch("zero isometry dimension".into()));
        }
        if matrix.rows() != d_out_a * d_out_b || matrix.cols() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "isometry for {d_in} -> {d_out_a}x{d_out_b} needs shape {}x{d_in}, got {}x{}",
                d_out_a * d_out_b,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if d_out_a * d_out_b < d_in {
            return Err(Error::DimensionMismatch(format!(
                "no isometry into a smaller space: {d_in} -> {}",
                d_out_a * d_out_b
            )));
        }
        let point = Self { d_in, d_out_a, d_out_b, matrix };
        let dev = point.isometry_deviation();
        if dev > ISOMETRY_TOL {
            return Err(Error::InvalidParameter(format!(
                "V^dagger V deviates from identity by {dev:.3e}"
            )));
        }
        Ok(point)
    }

    pub(crate) fn from_parts_unchecked(
        d_in: usize,
        d_out_a: usize,
        d_out_b: usize,
        matrix: ComplexMatrix,
    ) -> Self {
        debug_assert_eq!(matrix.rows(), d_out_a * d_out_b);
        debug_assert_eq!(matrix.cols(), d_in);
        Self { d_in, d_out_a, d_out_b, matrix }
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out_a(&self) -> usize {
        self.d_out_a
    }

    pub fn d_out_b(&self) -> usize {
        self.d_out_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Max entrywise |V^dagger V - 1|.
    pub fn isometry_deviation(&self) -> f64 {
        let gram = self.matrix.adjoint().mul(&self.matrix).expect("shapes match");
        gram.sub(&ComplexMatrix::identity(self.d_in))
            .expect("square")
            .max_abs_entry()
    }
}

/// The embedding that keeps the ancilla on one side and pads the other with
/// |0>. At the A-side embedding the objective equals S(rho^B); at the B-side
/// embedding it equals S(rho^A).
pub fn trivial_embedding(
    d_in: usize,
    d_out_a: usize,
    d_out_b: usize,
    side: Side,
) -> Result<IsometryPoint> {
    let fits = match side {
        Side::A => d_in <= d_out_a,
        Side::B => d_in <= d_out_b,
    };
    if !fits {
        return Err(Error::DimensionMismatch(format!(
            "trivial {side:?}-side embedding needs the ancilla ({d_in}) to fit into \
             that output factor ({d_out_a}x{d_out_b})"
        )));
    }
    let mut m = ComplexMatrix::zeros(d_out_a * d_out_b, d_in);
    for col in 0..d_in {
        let row = match side {
            Side::A => col * d_out_b,
            Side::B => col,
        };
        m[(row, col)] = C_ONE;
    }
    Ok(IsometryPoint::from_parts_unchecked(d_in, d_out_a, d_out_b, m))
}

/// Raw application of a matrix V to the ancilla of a three-party
/// purification, without isometry or normalization checks; the optimizer's
/// line search and the finite-difference oracle both evaluate off-manifold
/// points through this.
pub(crate) fn apply_matrix(
    phi: &PureState,
    v: &ComplexMatrix,
    d_out_a: usize,
    d_out_b: usize,
) -> Result<Vec<C64>> {
    let dims = phi.dims();
    if dims.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "purification must have three subsystems (A, B, A'), got {dims:?}"
        )));
    }
    let (d_a, d_b, d_in) = (dims[0], dims[1], dims[2]);
    if v.cols() != d_in || v.rows() != d_out_a * d_out_b {
        return Err(Error::DimensionMismatch(format!(
            "isometry shape {}x{} incompatible with ancilla {d_in} -> {d_out_a}x{d_out_b}",
            v.rows(),
            v.cols()
        )));
    }
    let amps = phi.amplitudes();
    let out_block = d_out_a * d_out_b;
    let mut out = vec![C_ZERO; d_a * d_b * out_block];
    for ab in 0..(d_a * d_b) {
        let in_base = ab * d_in;
        let out_base = ab * out_block;
        for r in 0..out_block {
            let mut acc = C_ZERO;
            for m in 0..d_in {
                acc += v[(r, m)] * amps[in_base + m];
            }
            out[out_base + r] = acc;
        }
    }
    Ok(out)
}

/// |psi>^{ABA'B'} = (1_{AB} tensor V)|phi>^{ABA'}.
pub fn apply_isometry(phi: &PureState, v: &IsometryPoint) -> Result<PureState> {
    let amps = apply_matrix(phi, v.matrix(), v.d_out_a(), v.d_out_b())?;
    let dims = vec![phi.dims()[0], phi.dims()[1], v.d_out_a(), v.d_out_b()];
    // V isometric and phi normalized make psi a unit vector.
    Ok(PureState::from_parts_unchecked(dims, amps))
}

/// Projects an ambient gradient onto the tangent space at `v`, removing the
/// component that violates V^dagger V = 1 to first order:
/// `Z = G - V (V^dagger G + G^dagger V)/2`.
pub fn project_tangent(v: &IsometryPoint, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let vm = v.matrix();
    if g.rows() != vm.rows() || g.cols() != vm.cols() {
        return Err(Error::DimensionMismatch(format!(
            "gradient shape {}x{} vs isometry {}x{}",
            g.rows(),
            g.cols(),
            vm.rows(),
            vm.cols()
        )));
    }
    let vg = vm.adjoint().mul(g)?;
    let herm = vg.hermitian_part();
    g.sub(&vm.mul(&herm)?)
}

/// Polar retraction: re-orthonormalizes V + step through
/// `(V + step) ((V + step)^dagger (V + step))^{-1/2}`.
///
/// Errors with [`Error::RankDeficientRetraction`] when the step collapses a
/// direction; callers treat that as "step too large", halve and retry.
pub fn retract(v: &IsometryPoint, step: &ComplexMatrix) -> Result<IsometryPoint> {
    let vm = v.matrix();
    if step.rows() != vm.rows() || step.cols() != vm.cols() {
        return Err(Error::DimensionMismatch(format!(
            "step shape {}x{} vs isometry {}x{}",
            step.rows(),
            step.cols(),
            vm.rows(),
            vm.cols()
        )));
    }
    let x = vm.add(step)?;
    let gram = x.adjoint().mul(&x)?;
    let correction = inv_sqrt_pd(&gram)?;
    let out = x.mul(&correction)?;
    Ok(IsometryPoint::from_parts_unchecked(
        v.d_in(),
        v.d_out_a(),
        v.d_out_b(),
        out,
    ))
}
