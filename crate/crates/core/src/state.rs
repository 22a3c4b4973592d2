//! Quantum states on small composite systems and the operations the
//! estimator needs: partial traces, entropy, Bell and Werner states,
//! purifications, Holevo information.
//!
//! # Index bookkeeping
//!
//! This is the one place that fixes how composite indices work; every other
//! module goes through the helpers here.
//!
//! For subsystem dimensions `dims = [d_0, ..., d_{k-1}]` a basis label
//! `(i_0, ..., i_{k-1})` maps to the flat index
//!
//! ```text
//! I = i_0 * (d_1 * ... * d_{k-1}) + i_1 * (d_2 * ... * d_{k-1}) + ... + i_{k-1}
//! ```
//!
//! i.e. row-major with the leftmost subsystem most significant. Four-party
//! states always order subsystems as `(A, B, A', B')`; a purification built
//! by [`standard_purification`] appends its ancilla as the last (least
//! significant) subsystem, giving `(A, B, A')`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::hermitian_eig;
use crate::math;
use crate::matrix::{ComplexMatrix, C64, C_ZERO};
use crate::{Error, Result, HERMITIAN_TOL, NORM_TOL, PSD_TOL, RANK_TOL, TRACE_TOL, WEIGHT_TOL};

/// Strides for row-major composite indexing: `stride[j] = prod(dims[j+1..])`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

/// Flat offsets of every index combination of the given sub-board, in
/// row-major order of `dims`, each weighted by its stride in the full board.
fn enumerate_offsets(dims: &[usize], strides_in_full: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; dims.len()];
    for _ in 0..total {
        out.push(idx.iter().zip(strides_in_full).map(|(&i, &s)| i * s).sum());
        for pos in (0..dims.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < dims[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
    out
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(Error::DimensionMismatch(format!("bad subsystem dims {dims:?}")));
    }
    Ok(dims.iter().product())
}

/// Trace-one positive-semidefinite operator on a composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity before accepting.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if matrix.rows() != total || matrix.cols() != total {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} give side {total}, matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "hermitian deviation {dev:.3e} exceeds {HERMITIAN_TOL:.0e}"
            )));
        }
        let tr = matrix.trace();
        if math::hypot(tr.re - 1.0, tr.im) > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace {:.12} + {:.3e}i is not 1",
                tr.re, tr.im
            )));
        }
        let (eigs, _) = hermitian_eig(&matrix)?;
        if eigs[0] < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "smallest eigenvalue {:.3e} below -{PSD_TOL:.0e}",
                eigs[0]
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// For states that are valid by construction (partial traces of unit
    /// vectors, convex mixtures of valid states); skips the eigensolve.
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// tr(rho^2); equals 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).expect("square").trace().re
    }

    /// Numerical rank: eigenvalues above [`RANK_TOL`].
    pub fn rank(&self) -> usize {
        let (eigs, _) = hermitian_eig(&self.matrix).expect("validated on construction");
        eigs.iter().filter(|&&l| l > RANK_TOL).count()
    }
}

/// Unit vector on a composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {total} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let n: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if math::abs(n - 1.0) > NORM_TOL {
            return Err(Error::InvalidDensity(format!("squared norm {n:.15} is not 1")));
        }
        Ok(Self { dims, amplitudes })
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), dims.iter().product::<usize>());
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// |psi><psi| as a density operator.
    pub fn density(&self) -> DensityOperator {
        let n = self.amplitudes.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityOperator::from_parts_unchecked(self.dims.clone(), m)
    }

    /// Reduced density operator on the kept subsystems (`keep` strictly
    /// increasing), formed directly from the amplitudes so the full
    /// |psi><psi| is never materialized.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOperator> {
        let (kept_offsets, traced_offsets, kept_dims) =
            split_offsets(&self.dims, keep)?;
        let k = kept_offsets.len();
        let mut m = ComplexMatrix::zeros(k, k);
        for (r, &ro) in kept_offsets.iter().enumerate() {
            for (c, &co) in kept_offsets.iter().enumerate() {
                let mut acc = C_ZERO;
                for &t in &traced_offsets {
                    acc += self.amplitudes[ro + t] * self.amplitudes[co + t].conj();
                }
                m[(r, c)] = acc;
            }
        }
        Ok(DensityOperator::from_parts_unchecked(kept_dims, m))
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Splits the composite board into kept and traced offset tables.
fn split_offsets(
    dims: &[usize],
    keep: &[usize],
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::InvalidIndex("keep set is empty".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndex(format!(
            "keep {keep:?} must be strictly increasing"
        )));
    }
    if *keep.last().unwrap() >= dims.len() {
        return Err(Error::InvalidIndex(format!(
            "keep {keep:?} out of range for {} subsystems",
            dims.len()
        )));
    }
    let st = strides(dims);
    let kept_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let kept_strides: Vec<usize> = keep.iter().map(|&i| st[i]).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let traced_strides: Vec<usize> = traced.iter().map(|&i| st[i]).collect();
    let kept_offsets = enumerate_offsets(&kept_dims, &kept_strides);
    let traced_offsets = if traced.is_empty() {
        vec![0]
    } else {
        enumerate_offsets(&traced_dims, &traced_strides)
    };
    Ok((kept_offsets, traced_offsets, kept_dims))
}

/// Partial trace over the complement of `keep` (strictly increasing indices).
/// The kept subsystems keep their relative order; the trace is preserved.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let (kept_offsets, traced_offsets, kept_dims) = split_offsets(rho.dims(), keep)?;
    let k = kept_offsets.len();
    let mut m = ComplexMatrix::zeros(k, k);
    let full = rho.matrix();
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            let mut acc = C_ZERO;
            for &t in &traced_offsets {
                acc += full[(ro + t, co + t)];
            }
            m[(r, c)] = acc;
        }
    }
    Ok(DensityOperator::from_parts_unchecked(kept_dims, m))
}

/// Base-2 von Neumann entropy of a list of eigenvalues, with the 0 log 0 = 0
/// convention. Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero; anything
/// more negative is the caller's bug.
pub(crate) fn entropy_from_eigenvalues(eigs: &[f64]) -> f64 {
    let mut s = 0.0;
    for &l in eigs {
        if l <= 0.0 {
            continue;
        }
        s -= l * math::log2(l);
    }
    s
}

/// Von Neumann entropy S(rho) = -tr rho log2 rho, in ebits.
pub fn entropy(rho: &DensityOperator) -> Result<f64> {
    let (eigs, _) = hermitian_eig(rho.matrix())?;
    if eigs[0] < -PSD_TOL {
        return Err(Error::InvalidDensity(format!(
            "smallest eigenvalue {:.3e} below -{PSD_TOL:.0e}",
            eigs[0]
        )));
    }
    Ok(entropy_from_eigenvalues(&eigs))
}

/// Trace distance (1/2)||rho - sigma||_1 via the spectrum of the difference.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let diff = rho.matrix().sub(sigma.matrix())?;
    let (eigs, _) = hermitian_eig(&diff)?;
    Ok(0.5 * eigs.iter().map(|&l| math::abs(l)).sum::<f64>())
}

/// The four Bell states on two qubits, indexed 0..=3 starting with the
/// singlet. Convention (phases on the completion are not observable in any
/// quantity this crate computes):
///
/// ```text
/// Psi_0 = (|01> - |10>)/sqrt(2)    Psi_1 = (|01> + |10>)/sqrt(2)
/// Psi_2 = (|00> - |11>)/sqrt(2)    Psi_3 = (|00> + |11>)/sqrt(2)
/// ```
pub fn bell_state(i: usize) -> Result<PureState> {
    let s = 1.0 / math::sqrt(2.0);
    let amp = |v: [f64; 4]| v.iter().map(|&x| C64::new(x * s, 0.0)).collect::<Vec<_>>();
    let amps = match i {
        0 => amp([0.0, 1.0, -1.0, 0.0]),
        1 => amp([0.0, 1.0, 1.0, 0.0]),
        2 => amp([1.0, 0.0, 0.0, -1.0]),
        3 => amp([1.0, 0.0, 0.0, 1.0]),
        _ => return Err(Error::InvalidParameter(format!("bell index {i} not in 0..=3"))),
    };
    Ok(PureState::from_parts_unchecked(vec![2, 2], amps))
}

/// Singlet fraction of a two-qubit Werner state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    f: f64,
}

impl WernerParams {
    pub fn new(f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::InvalidParameter(format!(
                "singlet fraction {f} outside [0, 1]"
            )));
        }
        Ok(Self { f })
    }

    pub fn f(&self) -> f64 {
        self.f
    }
}

/// Werner state W(f) = f Psi_0 + (1-f)/3 (1 - Psi_0); spectrum
/// {f, (1-f)/3 x3}.
pub fn werner(p: WernerParams) -> DensityOperator {
    let f = p.f;
    let psi0 = bell_state(0).expect("index 0").density();
    let id = ComplexMatrix::identity(4);
    let rest = id.sub(psi0.matrix()).expect("same shape").scale_real((1.0 - f) / 3.0);
    let m = psi0.matrix().scale_real(f).add(&rest).expect("same shape");
    DensityOperator::from_parts_unchecked(vec![2, 2], m)
}

/// Purification |phi> = sum_i sqrt(lambda_i) |e_i>|i>, with the ancilla
/// appended as the last subsystem and its dimension equal to the numerical
/// rank. Eigenvalues are enumerated in descending order, so ancilla basis
/// state |0> carries the dominant eigenvector.
pub fn standard_purification(rho: &DensityOperator) -> Result<PureState> {
    let (eigs, u) = hermitian_eig(rho.matrix())?;
    let n = rho.dim();
    // Ascending from the solver; walk from the top.
    let kept: Vec<usize> = (0..n).rev().filter(|&k| eigs[k] > RANK_TOL).collect();
    let r = kept.len().max(1);
    let mut amps = vec![C_ZERO; n * r];
    for (m, &k) in kept.iter().enumerate() {
        let w = math::sqrt(eigs[k]);
        for s in 0..n {
            amps[s * r + m] = u[(s, k)] * w;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(r);
    Ok(PureState::from_parts_unchecked(dims, amps))
}

/// Ensemble {p_i; rho_i} of states with identical subsystem dimensions.
#[derive(Debug, Clone)]
pub struct Ensemble {
    items: Vec<(f64, DensityOperator)>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityOperator)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidEnsemble("empty ensemble".into()));
        }
        if items.iter().any(|(p, _)| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidEnsemble("weights must be non-negative".into()));
        }
        let sum: f64 = items.iter().map(|(p, _)| p).sum();
        if math::abs(sum - 1.0) > WEIGHT_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {sum:.15}")));
        }
        let dims = items[0].1.dims().to_vec();
        if items.iter().any(|(_, r)| r.dims() != dims) {
            return Err(Error::InvalidEnsemble("components have different dims".into()));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[(f64, DensityOperator)] {
        &self.items
    }

    /// Convex mixture sum_i p_i rho_i.
    pub fn average(&self) -> DensityOperator {
        let dims = self.items[0].1.dims().to_vec();
        let side = self.items[0].1.dim();
        let mut m = ComplexMatrix::zeros(side, side);
        for (p, rho) in &self.items {
            m = m.add(&rho.matrix().scale_real(*p)).expect("same shape");
        }
        DensityOperator::from_parts_unchecked(dims, m)
    }
}

/// Holevo information chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i),
/// clamped to be non-negative. A value below -PSD_TOL before clamping
/// signals broken inputs and errors out.
pub fn holevo_chi(e: &Ensemble) -> Result<f64> {
    let avg = entropy(&e.average())?;
    let mut mean = 0.0;
    for (p, rho) in e.items() {
        mean += p * entropy(rho)?;
    }
    let chi = avg - mean;
    if chi < -PSD_TOL {
        return Err(Error::InvalidEnsemble(format!(
            "concavity violated: chi = {chi:.3e}"
        )));
    }
    Ok(math::max(chi, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form Werner entropy from the spectrum {f, (1-f)/3 x3}; the
    /// independent route used to pin expected values.
    pub(crate) fn werner_entropy_formula(f: f64) -> f64 {
        let mut s = 0.0;
        for &l in &[f, (1.0 - f) / 3.0, (1.0 - f) / 3.0, (1.0 - f) / 3.0] {
            if l > 0.0 {
                s -= l * math::log2(l);
            }
        }
        s
    }

    #[test]
    fn bell_states_orthonormal() {
        for i in 0..4 {
            for j in 0..4 {
                let a = bell_state(i).unwrap();
                let b = bell_state(j).unwrap();
                let ip = a.inner(&b).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(math::hypot(ip.re - expected, ip.im) < 1e-15, "({i},{j})");
            }
        }
        assert!(bell_state(4).is_err());
        // singlet has no |00> component
        assert_eq!(bell_state(0).unwrap().amplitudes()[0], C_ZERO);
    }

    #[test]
    fn singlet_marginal_is_maximally_mixed() {
        let rho = bell_state(0).unwrap().density();
        let a = partial_trace(&rho, &[0]).unwrap();
        let dev = a
            .matrix()
            .sub(&ComplexMatrix::identity(2).scale_real(0.5))
            .unwrap()
            .max_abs_entry();
        assert!(dev < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = werner(WernerParams::new(0.8).unwrap());
        let b = bell_state(3).unwrap().density();
        let prod = crate::matrix::kron(a.matrix(), b.matrix());
        let rho = DensityOperator::new(vec![2, 2, 2, 2], prod).unwrap();
        let back = partial_trace(&rho, &[0, 1]).unwrap();
        let dev = back.matrix().sub(a.matrix()).unwrap().max_abs_entry();
        assert!(dev < 1e-12);
    }

    #[test]
    fn werner_marginals_maximally_mixed_for_all_f() {
        for f in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let w = werner(WernerParams::new(f).unwrap());
            let b = partial_trace(&w, &[1]).unwrap();
            let dev = b
                .matrix()
                .sub(&ComplexMatrix::identity(2).scale_real(0.5))
                .unwrap()
                .max_abs_entry();
            assert!(dev < 1e-12, "f = {f}");
        }
    }

    #[test]
    fn werner_spectrum() {
        let w = werner(WernerParams::new(0.6).unwrap());
        let (eigs, _) = hermitian_eig(w.matrix()).unwrap();
        let expected = [2.0 / 15.0, 2.0 / 15.0, 2.0 / 15.0, 0.6];
        for (e, x) in eigs.iter().zip(expected) {
            assert!(math::abs(e - x) < 1e-12);
        }
        assert!(WernerParams::new(1.2).is_err());
        assert!(WernerParams::new(-0.1).is_err());
    }

    #[test]
    fn werner_edge_cases() {
        let w1 = werner(WernerParams::new(1.0).unwrap());
        let psi0 = bell_state(0).unwrap().density();
        assert!(w1.matrix().sub(psi0.matrix()).unwrap().max_abs_entry() < 1e-15);

        let wq = werner(WernerParams::new(0.25).unwrap());
        let id4 = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(wq.matrix().sub(&id4).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn entropy_values() {
        let mixed = DensityOperator::new(vec![2], ComplexMatrix::identity(2).scale_real(0.5))
            .unwrap();
        assert!(math::abs(entropy(&mixed).unwrap() - 1.0) < 1e-14);

        let pure = bell_state(2).unwrap().density();
        assert!(math::abs(entropy(&pure).unwrap()) < 1e-12);

        let w0 = werner(WernerParams::new(0.0).unwrap());
        assert!(math::abs(entropy(&w0).unwrap() - math::log2(3.0)) < 1e-12);

        let wq = werner(WernerParams::new(0.25).unwrap());
        assert!(math::abs(entropy(&wq).unwrap() - 2.0) < 1e-12);
    }

    #[test]
    fn entropy_matches_closed_form_on_werner_family() {
        for f in [0.0, 0.005, 0.01, 0.3, 0.77, 1.0] {
            let w = werner(WernerParams::new(f).unwrap());
            let s = entropy(&w).unwrap();
            assert!(
                math::abs(s - werner_entropy_formula(f)) < 1e-12,
                "f = {f}: {s} vs {}",
                werner_entropy_formula(f)
            );
        }
    }

    #[test]
    fn trace_distance_cases() {
        let w0 = werner(WernerParams::new(0.0).unwrap());
        assert!(trace_distance(&w0, &w0).unwrap() < 1e-15);

        // orthogonal pure states
        let a = bell_state(0).unwrap().density();
        let b = bell_state(1).unwrap().density();
        assert!(math::abs(trace_distance(&a, &b).unwrap() - 1.0) < 1e-12);

        // spectrum of W(0) - W(1) is {-1, 1/3, 1/3, 1/3}: distance 1
        let w1 = werner(WernerParams::new(1.0).unwrap());
        assert!(math::abs(trace_distance(&w0, &w1).unwrap() - 1.0) < 1e-12);

        let q = DensityOperator::new(vec![2], ComplexMatrix::identity(2).scale_real(0.5))
            .unwrap();
        assert!(trace_distance(&w0, &q).is_err());
    }

    #[test]
    fn purification_round_trip() {
        for f in [0.0, 0.5, 1.0] {
            let w = werner(WernerParams::new(f).unwrap());
            let phi = standard_purification(&w).unwrap();
            let expected_rank = if f == 0.0 { 3 } else if f == 1.0 { 1 } else { 4 };
            assert_eq!(*phi.dims().last().unwrap(), expected_rank, "f = {f}");
            let back = phi.reduced_density(&[0, 1]).unwrap();
            assert!(trace_distance(&back, &w).unwrap() < 1e-9, "f = {f}");
        }
    }

    #[test]
    fn purification_of_pure_state_has_unit_ancilla() {
        let rho = bell_state(0).unwrap().density();
        let phi = standard_purification(&rho).unwrap();
        assert_eq!(phi.dims(), &[2, 2, 1]);
        let back = phi.reduced_density(&[0, 1]).unwrap();
        assert!(trace_distance(&back, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn holevo_chi_cases() {
        let w = werner(WernerParams::new(0.3).unwrap());
        let e = Ensemble::new(vec![(0.5, w.clone()), (0.5, w)]).unwrap();
        assert!(holevo_chi(&e).unwrap() < 1e-12);

        let a = bell_state(0).unwrap().density();
        let b = bell_state(1).unwrap().density();
        let e = Ensemble::new(vec![(0.5, a), (0.5, b)]).unwrap();
        assert!(math::abs(holevo_chi(&e).unwrap() - 1.0) < 1e-12);
    }

    #[test]
    fn holevo_chi_werner_mixture_matches_entropy_formula() {
        // chi for {1/2 W(0), 1/2 W(0.01)}; the mixture is W(0.005).
        let w0 = werner(WernerParams::new(0.0).unwrap());
        let w01 = werner(WernerParams::new(0.01).unwrap());
        let e = Ensemble::new(vec![(0.5, w0), (0.5, w01)]).unwrap();
        let chi = holevo_chi(&e).unwrap();
        let expected = werner_entropy_formula(0.005)
            - 0.5 * (werner_entropy_formula(0.0) + werner_entropy_formula(0.01));
        assert!(math::abs(expected - 0.005018124385838707) < 1e-15);
        assert!(math::abs(chi - expected) < 1e-11, "chi = {chi}");
    }

    #[test]
    fn ensemble_validation() {
        let w = werner(WernerParams::new(0.3).unwrap());
        assert!(Ensemble::new(vec![]).is_err());
        assert!(Ensemble::new(vec![(0.7, w.clone())]).is_err());
        assert!(Ensemble::new(vec![(1.5, w.clone()), (-0.5, w)]).is_err());
    }

    #[test]
    fn density_operator_validation() {
        // non-hermitian
        let mut m = ComplexMatrix::identity(2).scale_real(0.5);
        m[(0, 1)] = C64::new(0.3, 0.0);
        assert!(DensityOperator::new(vec![2], m).is_err());
        // wrong trace
        let m = ComplexMatrix::identity(2);
        assert!(DensityOperator::new(vec![2], m).is_err());
        // negative eigenvalue
        let m = ComplexMatrix::diag(&[1.5, -0.5]);
        assert!(DensityOperator::new(vec![2], m).is_err());
        // wrong side
        let m = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        assert!(DensityOperator::new(vec![2], m).is_err());
    }

    #[test]
    fn partial_trace_bad_keep_rejected() {
        let w = werner(WernerParams::new(0.5).unwrap());
        assert!(partial_trace(&w, &[]).is_err());
        assert!(partial_trace(&w, &[2]).is_err());
        assert!(partial_trace(&w, &[1, 0]).is_err());
        assert!(partial_trace(&w, &[0, 0]).is_err());
    }

    #[test]
    fn pure_state_validation() {
        let amps = vec![C64::new(0.7, 0.0), C64::new(0.7, 0.0)];
        assert!(PureState::new(vec![2], amps).is_err());
        let amps = vec![C64::new(1.0, 0.0)];
        assert!(PureState::new(vec![2], amps).is_err());
    }
}
