//! Seeded sampling of states and isometries.
//!
//! Everything is keyed by a `u64` seed through ChaCha8, with independent
//! streams for independent draws, so any run is reproducible bit for bit on
//! any target. Gaussians come from Box-Muller on the raw uniform output.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::orthonormalize;
use crate::math;
use crate::matrix::{ComplexMatrix, C64};
use crate::state::{DensityOperator, PureState};
use crate::{Error, Result};

/// RNG for a (seed, stream) pair; parallel and serial consumers of the same
/// pair see the same draws.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard normal pair via Box-Muller.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let r = math::sqrt(-2.0 * math::ln(1.0 - u1));
    let theta = 2.0 * core::f64::consts::PI * u2;
    (r * math::cos(theta), r * math::sin(theta))
}

/// Standard complex Gaussian (independent N(0,1) real and imaginary parts).
pub(crate) fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    let (re, im) = gaussian_pair(rng);
    C64::new(re, im)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian_c64(rng);
        }
    }
    m
}

/// Haar-distributed isometry (orthonormalized Gaussian matrix), rows >= cols.
pub(crate) fn haar_isometry_from_rng(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
) -> Result<ComplexMatrix> {
    orthonormalize(&gaussian_matrix(rng, rows, cols))
}

/// Haar-random unitary on `dim` dimensions.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, 0);
    haar_isometry_from_rng(&mut rng, dim, dim).expect("square Gaussian is full rank")
}

/// Unitarily invariant random pure state on the given subsystem dimensions.
pub fn random_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || total == 0 {
        return Err(Error::DimensionMismatch(format!("bad dims {dims:?}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut amps: Vec<C64> = (0..total).map(|_| gaussian_c64(&mut rng)).collect();
    let norm = math::sqrt(amps.iter().map(|z| z.norm_sqr()).sum());
    for a in &mut amps {
        *a /= norm;
    }
    PureState::new(dims.to_vec(), amps)
}

/// Random density operator of the given rank: normalized G G^dagger with a
/// dim x rank complex Gaussian G.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} not in 1..={dim}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let g = gaussian_matrix(&mut rng, dim, rank);
    let m = g.mul(&g.adjoint()).expect("shapes match");
    let tr = m.trace().re;
    DensityOperator::new(vec![dim], m.scale_real(1.0 / tr))
}

/// Random two-qubit state supported on the symmetric subspace
/// span{|00>, (|01>+|10>)/sqrt(2), |11>}: a Ginibre density on the
/// three-dimensional symmetric sector, embedded back into two qubits.
pub fn random_symmetric_state(seed: u64) -> DensityOperator {
    let mut rng = stream_rng(seed, 0);
    let g = gaussian_matrix(&mut rng, 3, 3);
    let tau = g.mul(&g.adjoint()).expect("3x3");
    let tau = tau.scale_real(1.0 / tau.trace().re);

    let s = 1.0 / math::sqrt(2.0);
    // Columns of the embedding: symmetric basis vectors in C^4.
    let basis = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..3 {
        for j in 0..3 {
            let t = tau[(i, j)];
            for a in 0..4 {
                for b in 0..4 {
                    let add = basis[i][a] * basis[j][b].conj() * t;
                    m[(a, b)] += add;
                }
            }
        }
    }
    DensityOperator::new(vec![2, 2], m).expect("embedding preserves validity")
}
