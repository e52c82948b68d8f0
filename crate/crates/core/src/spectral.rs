//! Dense complex-Hermitian eigendecomposition and spectral matrix functions.
//!
//! Hamiltonians, observables, and density operators are all dense complex
//! Hermitian matrices here; everything downstream (canonical states, entropy,
//! tensor composition) runs through [`eigh`] and [`spectral_map`]. Complex
//! support is mandatory: momentum operators and random unitaries have
//! imaginary entries.
//!
//! Eigenvectors inside a degenerate block are basis-dependent; downstream
//! checks use only basis-independent quantities (traces, spectra, entropies).
//! For reproducibility, degenerate columns are ordered by the index of their
//! first significant component and each column's phase is fixed so that
//! component is real and positive.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{tol, Error, Result};

/// Dense complex Hermitian matrix (a Hamiltonian or observable).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates Hermiticity elementwise within [`tol::HERMITICITY`] and
    /// rejects with the max asymmetry otherwise.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols || rows == 0 {
            return Err(Error::DimensionMismatch {
                left: rows,
                right: cols,
            });
        }
        let mut max_asymmetry = 0.0f64;
        for i in 0..rows {
            for j in i..rows {
                let diff = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                max_asymmetry = max_asymmetry.max(diff);
            }
        }
        if max_asymmetry > tol::HERMITICITY {
            return Err(Error::NotHermitian {
                max_asymmetry,
                tolerance: tol::HERMITICITY,
            });
        }
        Ok(Self {
            dim: rows,
            entries,
        })
    }

    /// Real diagonal operator.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self { dim, entries: m }
    }

    /// Real symmetric matrix promoted to complex.
    pub fn from_real(real: &DMatrix<f64>) -> Result<Self> {
        Self::new(real.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Tr H (real for Hermitian input).
    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Ascending eigenvalues paired with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Max |V†V − I| entry.
    pub fn orthonormality_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        let gram = v.adjoint() * v;
        let n = self.dim();
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                defect = defect.max((gram[(i, j)] - target).norm());
            }
        }
        defect
    }

    /// V diag(λ) V†, the operator this decomposition came from.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let lambda = Complex64::new(self.eigenvalues[j], 0.0);
            for i in 0..n {
                scaled[(i, j)] *= lambda;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian operator with ascending eigenvalues.
///
/// Deterministic for a fixed input: ties in degenerate blocks are broken by
/// the index of the first significant eigenvector component, and phases are
/// normalized so that component is real positive.
pub fn eigh(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let se = h.entries.clone().symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(se.eigenvalues[src]);
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }

    // Within numerically degenerate groups, order columns by their first
    // significant component; then fix each column's phase.
    let scale = 1.0 + eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let group_tol = 1e-9 * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[start]).abs() <= group_tol {
            end += 1;
        }
        if end - start > 1 {
            let mut cols: Vec<(usize, nalgebra::DVector<Complex64>)> = (start..end)
                .map(|j| {
                    let col = eigenvectors.column(j).into_owned();
                    (first_significant(col.as_slice()), col)
                })
                .collect();
            cols.sort_by_key(|(lead, _)| *lead);
            for (offset, (_, col)) in cols.into_iter().enumerate() {
                eigenvectors.set_column(start + offset, &col);
            }
        }
        start = end;
    }
    for j in 0..n {
        let lead = first_significant(eigenvectors.column(j).as_slice());
        let pivot = eigenvectors[(lead, j)];
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / pivot.norm();
            for i in 0..n {
                eigenvectors[(i, j)] *= phase;
            }
        }
    }

    let decomp = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };
    debug_assert!(decomp.orthonormality_defect() < tol::ORTHONORMALITY);
    Ok(decomp)
}

fn first_significant(column: &[Complex64]) -> usize {
    column
        .iter()
        .position(|z| z.norm() > 1e-8)
        .unwrap_or(0)
}

/// Apply a real scalar function to a Hermitian operator through its spectrum:
/// f(H) = V diag(f(λ)) V†.
///
/// Rejects when f is undefined (non-finite) at any eigenvalue, naming the
/// offending one.
///
/// Conditioning note: composing exp with log round-trips to ~1e-8 relative
/// while the spectral spread stays below ~20; past that, e^spread exceeds
/// the eigensolver's 1/ε dynamic range, the compressed end of the exp'd
/// spectrum drops under its absolute noise floor, and the log map either
/// degrades or rejects a numerically nonpositive eigenvalue.
pub fn spectral_map<F>(h: &HermitianOperator, f: F) -> Result<HermitianOperator>
where
    F: Fn(f64) -> f64,
{
    let decomp = eigh(h)?;
    let n = decomp.dim();
    let mut mapped = Vec::with_capacity(n);
    for (index, &lambda) in decomp.eigenvalues.iter().enumerate() {
        let value = f(lambda);
        if !value.is_finite() {
            return Err(Error::UndefinedAtEigenvalue {
                index,
                eigenvalue: lambda,
                value,
            });
        }
        mapped.push(value);
    }
    let transformed = SpectralDecomposition {
        eigenvalues: mapped,
        eigenvectors: decomp.eigenvectors,
    }
    .reconstruct();
    // Rounding leaves ~1e-16 asymmetry; symmetrize before revalidating.
    let hermitized = (&transformed + transformed.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::new(hermitized)
}
