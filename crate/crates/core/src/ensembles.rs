//! Seeded random ensembles: Hermitian matrices, unitaries, pure and mixed
//! density operators.
//!
//! Unitaries come from QR of complex Gaussian matrices with the R-diagonal
//! phase fix (Haar measure); mixed spectra are normalized squared Gaussians
//! conjugated by random unitaries. Everything takes an explicit RNG so draws
//! are reproducible; degenerate corner cases are constructed explicitly where
//! tests need them rather than hoped for.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::equilibrium::DensityOperator;
use crate::spectral::HermitianOperator;

/// Complex matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian_matrix<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Random Hermitian matrix (A + A†)/2 with O(1) spectral range.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> HermitianOperator {
    let a = random_gaussian_matrix(dim, rng);
    let h = (&a + a.adjoint()) * Complex64::new(0.5 / (dim as f64).sqrt(), 0.0);
    // Exactly Hermitian by construction up to rounding; enforce it bitwise.
    let mut m = h;
    for i in 0..dim {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..dim {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    HermitianOperator::new(m).expect("symmetrized matrix is Hermitian")
}

/// Haar-distributed random unitary.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let a = random_gaussian_matrix(dim, rng);
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}

/// Normalized random complex vector.
pub fn random_state_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Random rank-one projector ρ = |ψ⟩⟨ψ|.
pub fn random_pure_density<R: Rng>(dim: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::pure(&random_state_vector(dim, rng)).expect("normalized pure state is valid")
}

/// Random full-rank mixed state: squared-Gaussian spectrum, random basis.
pub fn random_mixed_density<R: Rng>(dim: usize, rng: &mut R) -> DensityOperator {
    let mut spectrum: Vec<f64> = (0..dim)
        .map(|_| {
            let g: f64 = rng.sample(StandardNormal);
            g * g
        })
        .collect();
    let total: f64 = spectrum.iter().sum();
    for p in &mut spectrum {
        *p /= total;
    }
    let u = random_unitary(dim, rng);
    DensityOperator::from_spectrum_and_basis(&spectrum, &u)
        .expect("normalized spectrum in a unitary basis is valid")
}

/// Mixed state with an explicitly near-singular spectrum
/// (1 − ε, ε/(dim−1), …) in a random basis; exercises the 0·ln 0 edge.
pub fn near_singular_density<R: Rng>(dim: usize, epsilon: f64, rng: &mut R) -> DensityOperator {
    assert!(dim >= 2);
    let mut spectrum = vec![epsilon / (dim as f64 - 1.0); dim];
    spectrum[0] = 1.0 - epsilon;
    let u = random_unitary(dim, rng);
    DensityOperator::from_spectrum_and_basis(&spectrum, &u)
        .expect("near-singular spectrum in a unitary basis is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_columns_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [2usize, 5, 16] {
            let u = random_unitary(dim, &mut rng);
            let gram = u.adjoint() * &u;
            for i in 0..dim {
                for j in 0..dim {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[(i, j)] - Complex64::new(target, 0.0)).norm() < 1e-12,
                        "dim {dim}: gram defect at ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn draws_are_reproducible() {
        let a = random_hermitian(4, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_hermitian(4, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.entries(), b.entries());
    }
}
