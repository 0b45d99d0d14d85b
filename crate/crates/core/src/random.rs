//! Seeded random generators for matrices, unitaries, frames, and probe
//! vectors. All sampling is deterministic given the seed; ChaCha8 keeps the
//! streams identical across platforms.

use nalgebra::QR;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::frames::Frame;
use crate::linalg::{CMatrix, CVector};

/// Seed used by library operations that need a completion direction but do
/// not expose a seed parameter.
pub const DEFAULT_SEED: u64 = 0x6672616d65;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2f64.sqrt()
}

/// Matrix with i.i.d. complex standard Gaussian entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    CVector::from_fn(dim, |_, _| gaussian(rng))
}

/// Random unit vector, uniform on the sphere.
pub fn unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let v = gaussian_vector(dim, rng);
        let n = v.norm();
        if n > 1e-8 {
            return v.unscale(n);
        }
    }
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases fixed
/// by the sign of the R diagonal.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let qr = QR::new(g);
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `k` orthonormal columns in dimension `dim` (Haar on the Stiefel manifold).
pub fn orthonormal_set(dim: usize, k: usize, rng: &mut impl Rng) -> Vec<CVector> {
    assert!(k <= dim, "cannot draw {k} orthonormal vectors in dim {dim}");
    let u = haar_unitary(dim, rng);
    (0..k).map(|j| u.column(j).into_owned()).collect()
}

/// Square matrix `U diag(σ) V*` with Haar factors and the given singular
/// values; gives precise control over conditioning.
pub fn matrix_with_singular_values(sv: &[f64], rng: &mut impl Rng) -> CMatrix {
    let d = sv.len();
    let u = haar_unitary(d, rng);
    let v = haar_unitary(d, rng);
    let mut scaled = u;
    for (j, s) in sv.iter().enumerate() {
        for i in 0..d {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * v.adjoint()
}

fn uniform_singular_values(n: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Random frame of `count >= dim` vectors whose synthesis operator has
/// singular values in `[0.5, 2]`, so the frame bounds stay in `[0.25, 4]`.
pub fn frame(dim: usize, count: usize, rng: &mut impl Rng) -> Frame {
    assert!(count >= dim, "a frame needs at least dim vectors");
    let sv = uniform_singular_values(dim, 0.5, 2.0, rng);
    let u = haar_unitary(dim, rng);
    let v = haar_unitary(count, rng);
    // synthesis = U [diag(σ) 0] V*
    let mut rect = CMatrix::zeros(dim, count);
    for (j, s) in sv.iter().enumerate() {
        rect[(j, j)] = Complex64::new(*s, 0.0);
    }
    let synthesis = &u * rect * v.adjoint();
    Frame::from_synthesis(&synthesis)
}

/// Random Riesz basis (square well-conditioned frame).
pub fn riesz_basis(dim: usize, rng: &mut impl Rng) -> Frame {
    frame(dim, dim, rng)
}

/// Random topological isomorphism with `‖T‖ <= 1`; singular values are
/// drawn from `[0.2, 1)`.
pub fn contractive_isomorphism(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let sv = uniform_singular_values(dim, 0.2, 1.0, rng);
    matrix_with_singular_values(&sv, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        let mut r1 = rng(7);
        let u1 = haar_unitary(6, &mut r1);
        let mut r2 = rng(7);
        let u2 = haar_unitary(6, &mut r2);
        assert_eq!(u1, u2);
        assert!((u1.adjoint() * &u1 - linalg::identity(6)).norm() <= 1e-12);
    }

    #[test]
    fn controlled_singular_values_come_back_from_svd() {
        let mut r = rng(3);
        let m = matrix_with_singular_values(&[2.0, 1.0, 0.5], &mut r);
        let f = linalg::spectral_factorize(&m).unwrap();
        let sv = f.singular_values;
        assert!((sv[0] - 2.0).abs() <= 1e-10);
        assert!((sv[1] - 1.0).abs() <= 1e-10);
        assert!((sv[2] - 0.5).abs() <= 1e-10);
    }

    #[test]
    fn contractive_isomorphism_respects_bounds() {
        let mut r = rng(11);
        for _ in 0..5 {
            let t = contractive_isomorphism(5, &mut r);
            let f = linalg::spectral_factorize(&t).unwrap();
            assert!(f.largest() <= 1.0 + 1e-12);
            assert!(f.smallest() >= 0.2 - 1e-12);
        }
    }
}
