//! Dense Hermitian eigendecomposition and orthonormalization.
//!
//! The eigensolver is a cyclic complex Jacobi iteration: at the sizes this
//! crate touches (64 x 64 and below on the hot path) it is simple, accurate
//! to machine precision, and fully deterministic. Orthonormalization is a
//! thin Householder QR; the Q-factor phase fix makes Gaussian inputs
//! Haar-distributed.

use alloc::vec::Vec;

use crate::math;
use crate::matrix::{cabs, ComplexMatrix, C64, C_ONE, C_ZERO};
use crate::{Error, Result, HERMITIAN_TOL};

const MAX_JACOBI_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and a unitary whose columns are the
/// matching eigenvectors, so `h = U diag(lambda) U^dagger`. Rejects inputs
/// whose entrywise deviation from Hermitian exceeds [`HERMITIAN_TOL`]; the
/// iteration itself runs on the Hermitian part.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(alloc::format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_deviation: dev });
    }

    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut u = ComplexMatrix::identity(n);
    let scale = math::max(a.frobenius_norm(), f64::MIN_POSITIVE);
    let stop = 1e-15 * scale;

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = cabs(apq);
                if b <= stop {
                    continue;
                }
                rotated = true;
                let phase = apq / b; // e^{i arg(apq)}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * b);
                let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (math::abs(tau) + math::sqrt(1.0 + tau * tau));
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;

                // Rotation J: identity except the (p,q) block
                //   [ c            s           ]
                //   [ -s conj(ph)  c conj(ph)  ],
                // chosen so (J^dagger A J)_{pq} = 0. Columns first, then rows.
                let sp = phase.conj() * s;
                let cp = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * sp;
                    a[(k, q)] = akp * s + akq * cp;
                }
                let spc = phase * s;
                let cpc = phase * c;
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * spc;
                    a[(q, k)] = apk * s + aqk * cpc;
                }
                for k in 0..n {
                    let ukp = u[(k, p)];
                    let ukq = u[(k, q)];
                    u[(k, p)] = ukp * c - ukq * sp;
                    u[(k, q)] = ukp * s + ukq * cp;
                }
                a[(p, q)] = C_ZERO;
                a[(q, p)] = C_ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap_or(core::cmp::Ordering::Equal)
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new_col)] = u[(k, old_col)];
        }
    }
    Ok((eigenvalues, vectors))
}

/// Thin QR orthonormalization with the Haar phase fix.
///
/// For an m x n input with m >= n and full column rank, returns Q with
/// orthonormal columns spanning the same space; applied to an i.i.d. complex
/// Gaussian matrix the result is Haar-distributed on the isometries.
pub fn orthonormalize(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < cols {
        return Err(Error::DimensionMismatch(alloc::format!(
            "orthonormalize needs rows >= cols, got {rows}x{cols}"
        )));
    }
    let mut a = m.clone();
    // Householder vectors and their beta = 2 / |v|^2, one per column.
    let mut reflectors: Vec<(Vec<C64>, f64)> = Vec::with_capacity(cols);
    let mut r_diag: Vec<C64> = Vec::with_capacity(cols);

    for k in 0..cols {
        let mut norm_sq = 0.0;
        for i in k..rows {
            norm_sq += a[(i, k)].norm_sqr();
        }
        let norm = math::sqrt(norm_sq);
        if norm < 1e-300 {
            return Err(Error::RankDeficientRetraction);
        }
        let x0 = a[(k, k)];
        let phase = if cabs(x0) > 0.0 { x0 / cabs(x0) } else { C_ONE };
        let alpha = phase * (-norm);
        let mut v: Vec<C64> = (k..rows).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq < 1e-300 {
            // Column already aligned with -phase e_k; no reflection needed.
            reflectors.push((v, 0.0));
            r_diag.push(alpha);
            a[(k, k)] = alpha;
            continue;
        }
        let beta = 2.0 / v_norm_sq;
        for j in k..cols {
            let mut dot = C_ZERO;
            for i in k..rows {
                dot += v[i - k].conj() * a[(i, j)];
            }
            let f = dot * beta;
            for i in k..rows {
                let vi = v[i - k];
                a[(i, j)] -= vi * f;
            }
        }
        r_diag.push(a[(k, k)]);
        reflectors.push((v, beta));
    }

    // Accumulate the thin Q by applying reflectors to the first `cols`
    // columns of the identity, in reverse order.
    let mut q = ComplexMatrix::zeros(rows, cols);
    for j in 0..cols {
        q[(j, j)] = C_ONE;
    }
    for k in (0..cols).rev() {
        let (ref v, beta) = reflectors[k];
        if beta == 0.0 {
            continue;
        }
        for j in 0..cols {
            let mut dot = C_ZERO;
            for i in k..rows {
                dot += v[i - k].conj() * q[(i, j)];
            }
            let f = dot * beta;
            for i in k..rows {
                let vi = v[i - k];
                q[(i, j)] -= vi * f;
            }
        }
    }

    // Phase fix: make the implicit R diagonal positive so Q is unique
    // (and Haar for Gaussian input).
    for j in 0..cols {
        let r = r_diag[j];
        let mag = cabs(r);
        if mag < 1e-300 {
            return Err(Error::RankDeficientRetraction);
        }
        let lambda = r / mag;
        for i in 0..rows {
            let qij = q[(i, j)];
            q[(i, j)] = qij * lambda;
        }
    }
    Ok(q)
}

/// Inverse square root of a Hermitian positive-definite matrix.
///
/// Errors with [`Error::RankDeficientRetraction`] when the smallest
/// eigenvalue drops below `1e-14` times the largest, which is how an
/// oversized retraction step announces itself.
pub(crate) fn inv_sqrt_pd(c: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (eigs, u) = hermitian_eig(c)?;
    let largest = eigs.last().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return Err(Error::RankDeficientRetraction);
    }
    if eigs[0] < 1e-14 * largest {
        return Err(Error::RankDeficientRetraction);
    }
    let n = c.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    // U diag(1/sqrt(lambda)) U^dagger
    for i in 0..n {
        for j in 0..n {
            let mut acc = C_ZERO;
            for (k, &lam) in eigs.iter().enumerate() {
                acc += u[(i, k)] * u[(j, k)].conj() * (1.0 / math::sqrt(lam));
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn reconstruct(eigs: &[f64], u: &ComplexMatrix) -> ComplexMatrix {
        let lam = ComplexMatrix::diag(eigs);
        u.mul(&lam).unwrap().mul(&u.adjoint()).unwrap()
    }

    #[test]
    fn pauli_z_spectrum() {
        let z = ComplexMatrix::diag(&[1.0, -1.0]);
        let (eigs, _) = hermitian_eig(&z).unwrap();
        assert_eq!(eigs, vec![-1.0, 1.0]);
    }

    #[test]
    fn maximally_mixed_spectrum() {
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        let (eigs, _) = hermitian_eig(&m).unwrap();
        for e in eigs {
            assert!((e - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn reconstruction_and_unitarity() {
        // Deterministic dense Hermitian test matrix.
        let n = 6;
        let mut h = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let re = ((i * 7 + j * 3) % 11) as f64 / 11.0;
                let im = ((i * 5 + j * 2) % 7) as f64 / 7.0 - 0.5;
                h[(i, j)] = c(re, im);
            }
        }
        let h = h.hermitian_part();
        let (eigs, u) = hermitian_eig(&h).unwrap();
        let err = reconstruct(&eigs, &u).sub(&h).unwrap().frobenius_norm();
        assert!(err < 1e-9, "reconstruction error {err}");
        let gram = u.adjoint().mul(&u).unwrap();
        let dev = gram.sub(&ComplexMatrix::identity(n)).unwrap().max_abs_entry();
        assert!(dev < 1e-10, "unitarity deviation {dev}");
        for w in eigs.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn orthonormalize_produces_isometry() {
        let mut m = ComplexMatrix::zeros(6, 3);
        for i in 0..6 {
            for j in 0..3 {
                m[(i, j)] = c(((i + 2 * j) % 5) as f64 - 2.0, ((3 * i + j) % 4) as f64 / 4.0);
            }
        }
        let q = orthonormalize(&m).unwrap();
        let gram = q.adjoint().mul(&q).unwrap();
        let dev = gram.sub(&ComplexMatrix::identity(3)).unwrap().max_abs_entry();
        assert!(dev < 1e-12, "gram deviation {dev}");
    }

    #[test]
    fn inv_sqrt_of_identity_scaling() {
        let m = ComplexMatrix::identity(3).scale_real(4.0);
        let s = inv_sqrt_pd(&m).unwrap();
        let dev = s.sub(&ComplexMatrix::identity(3).scale_real(0.5)).unwrap().max_abs_entry();
        assert!(dev < 1e-12);
    }

    #[test]
    fn inv_sqrt_rejects_singular() {
        let m = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!(matches!(inv_sqrt_pd(&m), Err(Error::RankDeficientRetraction)));
    }
}
