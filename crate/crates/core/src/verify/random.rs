use nalgebra::QR;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::DensityMatrix;
use crate::error::Result;
use crate::linalg::{c, CMatrix, CVector, C64};

/// Deterministic generator for trial `stream` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed element of SU(d): QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`, then the determinant phase
/// divided out.
pub fn random_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = QR::new(g);
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let root = C64::from_polar(1.0, -det.arg() / d as f64);
    q * root
}

/// Uniformly distributed unit vector.
pub fn random_pure_state<R: Rng>(n: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

/// Full-rank density matrix `G G† / Tr` with a complex Gaussian `G`.
pub fn random_density_matrix<R: Rng>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.unscale(tr), "random")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitaries_are_special_unitary() {
        let mut rng = trial_rng(3, 0);
        for d in 1..=5 {
            let u = random_unitary(d, &mut rng);
            let defect = (u.adjoint() * &u - CMatrix::identity(d, d)).norm();
            assert!(defect < 1e-12);
            assert!((u.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_pure_state(4, &mut trial_rng(9, 1));
        let b = random_pure_state(4, &mut trial_rng(9, 1));
        let other = random_pure_state(4, &mut trial_rng(9, 2));
        assert_eq!(a, b);
        assert_ne!(a, other);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }
}
