//! Canonical stable-equilibrium states and the entropy functional.
//!
//! For a level list {e_i} the stable equilibrium state at inverse temperature
//! β has occupations p_i = e^{−β e_i}/Z; it is the unique entropy maximizer
//! among all occupation vectors with the same mean energy (second law:
//! exactly one stable equilibrium state per (E, n, V)). Entropy is
//! S/k = −Σ p ln p for diagonal states and S/k = −Tr[ρ ln ρ] for density
//! operators, with 0·ln 0 ≡ 0 by continuity.
//!
//! Negative β is admitted only for spectra flagged complete (an upper energy
//! limit, e.g. spin ladders); on a truncated unbounded spectrum a negative β
//! would be an artifact of the cutoff and is rejected.
//!
//! All exponentials are max-shifted (the extremal level is subtracted before
//! exponentiating) so no overflow occurs for |β·E| up to 700.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{eigh, HermitianOperator};
use crate::{par, tol, Error, Result};

// ───────────────────────── level spectra ─────────────────────────

/// Ascending energy levels, with a flag recording whether the list is the
/// complete spectrum (bounded above) or a truncation of an unbounded one.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpectrum {
    levels: Vec<f64>,
    complete: bool,
}

impl LevelSpectrum {
    pub fn new(mut levels: Vec<f64>, complete: bool) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::Invalid("level list contains non-finite energy".into()));
        }
        levels.sort_by(f64::total_cmp);
        Ok(Self { levels, complete })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn min_level(&self) -> f64 {
        self.levels[0]
    }

    pub fn max_level(&self) -> f64 {
        *self.levels.last().expect("non-empty")
    }

    pub fn spread(&self) -> f64 {
        self.max_level() - self.min_level()
    }

    /// Energy at β → 0: the uniform average over retained levels.
    pub fn uniform_mean(&self) -> f64 {
        self.levels.iter().sum::<f64>() / self.len() as f64
    }

    /// Prefix of levels with energy ≤ cutoff. The result is never flagged
    /// complete unless nothing was dropped.
    pub fn truncate_to_energy(&self, cutoff: f64) -> Result<Self> {
        let kept: Vec<f64> = self
            .levels
            .iter()
            .copied()
            .take_while(|&e| e <= cutoff)
            .collect();
        if kept.is_empty() {
            return Err(Error::CutoffBelowGround {
                cutoff,
                ground: self.min_level(),
            });
        }
        let complete = self.complete && kept.len() == self.len();
        Ok(Self {
            levels: kept,
            complete,
        })
    }
}

// ───────────────────────── canonical states ─────────────────────────

/// Canonical occupations p_i = e^{−β e_i}/Z over a level list, with the
/// derived bulk quantities. `entropy` is S/k; `beta` is 1/kT.
#[derive(Debug, Clone)]
pub struct CanonicalState {
    spectrum: LevelSpectrum,
    beta: f64,
    occupations: Vec<f64>,
    log_partition: f64,
    energy: f64,
    entropy: f64,
    energy_variance: f64,
}

impl CanonicalState {
    pub fn spectrum(&self) -> &LevelSpectrum {
        &self.spectrum
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// S/k.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    /// Var(E) = ⟨e²⟩ − ⟨e⟩²; equals −dE/dβ along the canonical family.
    pub fn energy_variance(&self) -> f64 {
        self.energy_variance
    }
}

struct Weights {
    occupations: Vec<f64>,
    log_partition: f64,
    energy: f64,
    entropy: f64,
    energy_variance: f64,
}

/// Chunk size for fixed-shape partial sums. Per-chunk partials are combined
/// sequentially in chunk order, so sums come out bit-identical whether the
/// chunks were evaluated in parallel or not.
const SUM_CHUNK: usize = 8192;

/// Shift level so all Boltzmann exponents are ≤ 0: the minimum level for
/// β ≥ 0, the maximum for β < 0. Levels arrive sorted ascending.
fn reference_level(levels: &[f64], beta: f64) -> f64 {
    debug_assert!(levels.windows(2).all(|w| w[1] >= w[0]));
    if beta >= 0.0 {
        levels[0]
    } else {
        levels[levels.len() - 1]
    }
}

/// (Σ e^{−β(e−e_ref)}, Σ e·e^{−β(e−e_ref)}) without materializing weights;
/// this is the whole cost of one bisection step in `beta_for_energy`.
fn canonical_sums(levels: &[f64], beta: f64, e_ref: f64) -> (f64, f64) {
    let partials = par::map_chunks(levels, SUM_CHUNK, |chunk| {
        let mut z = 0.0;
        let mut ze = 0.0;
        for &e in chunk {
            let w = (-beta * (e - e_ref)).exp();
            z += w;
            ze += w * e;
        }
        (z, ze)
    });
    let mut z = 0.0;
    let mut ze = 0.0;
    for (a, b) in partials {
        z += a;
        ze += b;
    }
    (z, ze)
}

fn canonical_energy(levels: &[f64], beta: f64) -> f64 {
    let e_ref = reference_level(levels, beta);
    let (z, ze) = canonical_sums(levels, beta, e_ref);
    ze / z
}

/// Max-shifted Boltzmann weights over a raw level slice. All exponents are
/// ≤ 0, so overflow is impossible; weights below the underflow threshold
/// come out as exact zeros and contribute 0·ln 0 = 0 to the entropy.
fn boltzmann(levels: &[f64], beta: f64) -> Weights {
    let e_ref = reference_level(levels, beta);
    let weights = par::map_collect_fine(levels, |&e| (-beta * (e - e_ref)).exp());

    // Same chunked grouping as the energy-only path, so both agree bitwise.
    let (z_shifted, energy_weighted) = {
        let mut z = 0.0;
        let mut ze = 0.0;
        for (a, b) in zip_sums(&weights, levels) {
            z += a;
            ze += b;
        }
        (z, ze)
    };
    let ln_z_shifted = z_shifted.ln();
    let log_partition = ln_z_shifted - beta * e_ref;
    let energy = energy_weighted / z_shifted;

    let occupations: Vec<f64> = weights.iter().map(|w| w / z_shifted).collect();
    let mut second_moment = 0.0;
    let mut entropy = 0.0;
    for (&p, &e) in occupations.iter().zip(levels) {
        if p > 0.0 {
            let exponent = -beta * (e - e_ref);
            second_moment += p * e * e;
            entropy += p * (ln_z_shifted - exponent);
        }
    }
    let energy_variance = (second_moment - energy * energy).max(0.0);
    Weights {
        occupations,
        log_partition,
        energy,
        entropy,
        energy_variance,
    }
}

/// Per-chunk (Σw, Σw·e) partials over parallel slices, chunked exactly like
/// `canonical_sums`.
fn zip_sums(weights: &[f64], levels: &[f64]) -> Vec<(f64, f64)> {
    weights
        .chunks(SUM_CHUNK)
        .zip(levels.chunks(SUM_CHUNK))
        .map(|(ws, es)| {
            let mut z = 0.0;
            let mut ze = 0.0;
            for (&w, &e) in ws.iter().zip(es) {
                z += w;
                ze += w * e;
            }
            (z, ze)
        })
        .collect()
}

/// Canonical stable-equilibrium state at inverse temperature β.
///
/// β < 0 requires a spectrum flagged complete (upper energy limit).
pub fn canonical_state(spectrum: &LevelSpectrum, beta: f64) -> Result<CanonicalState> {
    if !beta.is_finite() {
        return Err(Error::Invalid(format!("beta must be finite, got {beta}")));
    }
    if beta < 0.0 && !spectrum.complete() {
        return Err(Error::NegativeBetaUnbounded { beta });
    }
    let w = boltzmann(spectrum.levels(), beta);
    Ok(CanonicalState {
        spectrum: spectrum.clone(),
        beta,
        occupations: w.occupations,
        log_partition: w.log_partition,
        energy: w.energy,
        entropy: w.entropy,
        energy_variance: w.energy_variance,
    })
}

/// Invert the strictly decreasing canonical map E(β) by bisection.
///
/// The bracket is ±700/spread (0 to +700/spread for truncated unbounded
/// spectra, where only β ≥ 0 is meaningful); monotonicity makes bisection
/// safe. The returned β satisfies |E(β) − target| < 1e-9 · spread.
pub fn beta_for_energy(spectrum: &LevelSpectrum, target: f64) -> Result<f64> {
    let levels = spectrum.levels();
    let spread = spectrum.spread();
    if spread == 0.0 {
        // Single achievable energy; β is arbitrary there, 0 by convention.
        if (target - spectrum.min_level()).abs() <= f64::EPSILON * target.abs().max(1.0) {
            return Ok(0.0);
        }
        return Err(Error::EnergyOutOfRange {
            target,
            low: spectrum.min_level(),
            high: spectrum.max_level(),
        });
    }

    let beta_max = tol::EXP_GUARD / spread;
    let beta_lo = if spectrum.complete() { -beta_max } else { 0.0 };
    let energy_at = |beta: f64| canonical_energy(levels, beta);

    // E(β) is decreasing: the achievable range is (E(β_max), E(β_lo)).
    let low = energy_at(beta_max);
    let high = energy_at(beta_lo);
    if !(target > low && target < high) {
        return Err(Error::EnergyOutOfRange {
            target,
            low,
            high,
        });
    }

    let residual_tol = tol::BETA_RESIDUAL_REL * 1e-3 * spread;
    let mut lo = beta_lo;
    let mut hi = beta_max;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let e_mid = energy_at(mid);
        if (e_mid - target).abs() <= residual_tol {
            return Ok(mid);
        }
        if e_mid > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= f64::EPSILON * mid.abs().max(1e-300) {
            break;
        }
    }
    let final_residual = (energy_at(mid) - target).abs();
    if final_residual < tol::BETA_RESIDUAL_REL * spread {
        Ok(mid)
    } else {
        Err(Error::EnergyOutOfRange {
            target,
            low,
            high,
        })
    }
}

// ───────────────────────── density operators ─────────────────────────

/// Trace-one Hermitian operator with spectrum in [0, 1] (the ρ ≥ ρ² class).
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: HermitianOperator,
    eigenvalues: Vec<f64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace (within 1e-10), and the eigenvalue
    /// window [−1e-10, 1 + 1e-10].
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let op = HermitianOperator::new(entries).map_err(|e| Error::InvalidDensity {
            reason: e.to_string(),
        })?;
        let trace = op.trace();
        if (trace - 1.0).abs() > tol::DENSITY_TRACE {
            return Err(Error::InvalidDensity {
                reason: format!("trace {trace} differs from 1 by more than {:e}", tol::DENSITY_TRACE),
            });
        }
        let decomp = eigh(&op)?;
        let window = -tol::DENSITY_EIGENVALUE..=(1.0 + tol::DENSITY_EIGENVALUE);
        for (i, &lambda) in decomp.eigenvalues.iter().enumerate() {
            if !window.contains(&lambda) {
                return Err(Error::InvalidDensity {
                    reason: format!("eigenvalue λ_{i} = {lambda} outside [0, 1]"),
                });
            }
        }
        Ok(Self {
            op,
            eigenvalues: decomp.eigenvalues,
        })
    }

    /// Rank-one projector ρ = |ψ⟩⟨ψ| (ψ is normalized first).
    pub fn pure(state: &[Complex64]) -> Result<Self> {
        let dim = state.len();
        if dim == 0 {
            return Err(Error::InvalidDensity {
                reason: "empty state vector".into(),
            });
        }
        let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidDensity {
                reason: "zero-norm state vector".into(),
            });
        }
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = state[i] * state[j].conj() / (norm * norm);
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDensity {
                reason: "dimension must be at least 1".into(),
            });
        }
        let p = 1.0 / dim as f64;
        Ok(Self::new(DMatrix::from_diagonal_element(
            dim,
            dim,
            Complex64::new(p, 0.0),
        ))
        .expect("uniform diagonal is a valid density operator"))
    }

    /// ρ = B diag(p) B† for an occupation vector in an orthonormal basis.
    pub fn from_spectrum_and_basis(spectrum: &[f64], basis: &DMatrix<Complex64>) -> Result<Self> {
        let dim = spectrum.len();
        if basis.nrows() != dim || basis.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: basis.nrows(),
            });
        }
        let mut scaled = basis.clone();
        for j in 0..dim {
            for i in 0..dim {
                scaled[(i, j)] *= Complex64::new(spectrum[j], 0.0);
            }
        }
        let m = scaled * basis.adjoint();
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self::new(sym)
    }

    /// Canonical state ρ = e^{−βH}/Z of a dense Hamiltonian. A finite matrix
    /// always has an upper energy limit, so any finite β is admissible.
    pub fn canonical(hamiltonian: &HermitianOperator, beta: f64) -> Result<Self> {
        let decomp = eigh(hamiltonian)?;
        let w = boltzmann(&decomp.eigenvalues, beta);
        Self::from_spectrum_and_basis(&w.occupations, &decomp.eigenvectors)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        self.op.entries()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    /// Eigenvalues ascending (cached from validation).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// S/k = −Σ λ ln λ over the spectrum of ρ, with 0·ln 0 ≡ 0. Always ≥ 0.
    pub fn entropy(&self) -> f64 {
        entropy_from_eigenvalues(&self.eigenvalues)
    }

    /// Tr(ρ²); equals 1 exactly on projectors.
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }

    /// ⟨O⟩ = Tr[ρ O].
    pub fn expectation(&self, observable: &HermitianOperator) -> Result<Complex64> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: observable.dim(),
            });
        }
        let n = self.dim();
        let rho = self.entries();
        let o = observable.entries();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                tr += rho[(i, j)] * o[(j, i)];
            }
        }
        Ok(tr)
    }
}

fn entropy_from_eigenvalues(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| {
            let l = l.clamp(0.0, 1.0);
            if l < tol::OCCUPATION_CLAMP {
                0.0
            } else {
                -l * l.ln()
            }
        })
        .sum()
}

/// Entropy of a raw occupation vector, in units of k.
///
/// Rejects entries below −1e-10 or a total off 1 by more than 1e-8; values
/// below the clamp threshold are treated as exact zeros.
pub fn occupation_entropy(occupations: &[f64]) -> Result<f64> {
    if occupations.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut total = 0.0;
    for (i, &p) in occupations.iter().enumerate() {
        if !p.is_finite() || p < -tol::OCCUPATION_NEGATIVE {
            return Err(Error::InvalidDensity {
                reason: format!("occupation p[{i}] = {p} is negative beyond tolerance"),
            });
        }
        total += p;
    }
    if (total - 1.0).abs() > tol::OCCUPATION_TRACE {
        return Err(Error::InvalidDensity {
            reason: format!("occupations sum to {total}, off 1 by more than {:e}", tol::OCCUPATION_TRACE),
        });
    }
    Ok(entropy_from_eigenvalues(occupations))
}

/// Tr[ρP] for a Hermitian observable, guaranteed real for a Hermitian pair;
/// the residual imaginary part is checked against 1e-10.
///
/// For canonical states of real-symmetric Hamiltonians and the (purely
/// imaginary) momentum observable the value vanishes: nothing moves in a
/// stable equilibrium state.
pub fn mean_momentum(rho: &DensityOperator, momentum: &HermitianOperator) -> Result<f64> {
    let tr = rho.expectation(momentum)?;
    let scale = 1.0 + tr.re.abs();
    if tr.im.abs() > 1e-10 * scale {
        return Err(Error::Invalid(format!(
            "Tr[ρP] has non-negligible imaginary part {}",
            tr.im
        )));
    }
    Ok(tr.re)
}

// ───────────────────────── fundamental-relation derivatives ─────────────────────────

/// Level family parameterized by volume through isotropic scaling: every
/// level scales as (V/V₀)^(−2/3), the rectangular-box law.
#[derive(Debug, Clone)]
pub struct ScaledLevelFamily {
    base: LevelSpectrum,
    base_volume: f64,
}

impl ScaledLevelFamily {
    pub fn new(base: LevelSpectrum, base_volume: f64) -> Result<Self> {
        if base_volume <= 0.0 {
            return Err(Error::NonPositive {
                name: "base_volume",
                value: base_volume,
            });
        }
        Ok(Self { base, base_volume })
    }

    pub fn base_volume(&self) -> f64 {
        self.base_volume
    }

    pub fn levels_at(&self, volume: f64) -> Result<LevelSpectrum> {
        if volume <= 0.0 {
            return Err(Error::NonPositive {
                name: "volume",
                value: volume,
            });
        }
        let factor = (volume / self.base_volume).powf(-2.0 / 3.0);
        LevelSpectrum::new(
            self.base.levels().iter().map(|&e| e * factor).collect(),
            self.base.complete(),
        )
    }
}

/// Derivative properties of the canonical fundamental relation at (E, V):
/// `inverse_temperature` is the central finite difference (∂S/∂E)_V,
/// `beta` the directly fitted inverse temperature it must match, and
/// `pressure` is T·(∂S/∂V)_E.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalDerivatives {
    pub inverse_temperature: f64,
    pub beta: f64,
    pub pressure: f64,
}

fn canonical_entropy_at(spectrum: &LevelSpectrum, energy: f64) -> Result<f64> {
    let beta = beta_for_energy(spectrum, energy)?;
    Ok(canonical_state(spectrum, beta)?.entropy())
}

/// Probe S(E, V) of the canonical family with central differences
/// (relative step `rel_step`, typically 1e-4).
pub fn fundamental_derivatives(
    family: &ScaledLevelFamily,
    energy: f64,
    volume: f64,
    rel_step: f64,
) -> Result<FundamentalDerivatives> {
    if rel_step <= 0.0 {
        return Err(Error::NonPositive {
            name: "rel_step",
            value: rel_step,
        });
    }
    let spectrum = family.levels_at(volume)?;
    let beta = beta_for_energy(&spectrum, energy)?;

    let h_e = rel_step * energy.abs().max(f64::MIN_POSITIVE);
    let s_plus = canonical_entropy_at(&spectrum, energy + h_e)?;
    let s_minus = canonical_entropy_at(&spectrum, energy - h_e)?;
    let inverse_temperature = (s_plus - s_minus) / (2.0 * h_e);

    let h_v = rel_step * volume;
    let s_v_plus = canonical_entropy_at(&family.levels_at(volume + h_v)?, energy)?;
    let s_v_minus = canonical_entropy_at(&family.levels_at(volume - h_v)?, energy)?;
    let ds_dv = (s_v_plus - s_v_minus) / (2.0 * h_v);
    if beta == 0.0 {
        return Err(Error::Invalid(
            "pressure undefined at beta = 0 (temperature diverges)".into(),
        ));
    }
    let pressure = ds_dv / beta;

    Ok(FundamentalDerivatives {
        inverse_temperature,
        beta,
        pressure,
    })
}

// ───────────────────────── max-entropy witness ─────────────────────────

/// Outcome of the stable-equilibrium uniqueness probe: every trace- and
/// energy-preserving perturbation of the canonical occupations lowered the
/// entropy by the recorded margin.
#[derive(Debug, Clone)]
pub struct MaxEntropyReport {
    pub seed: u64,
    pub trials: usize,
    pub canonical_entropy: f64,
    pub beta: f64,
    /// S(canonical) − S(perturbed) per trial; all strictly positive when the
    /// canonical state is the unique maximizer.
    pub margins: Vec<f64>,
}

impl MaxEntropyReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Perturb the canonical occupations at fixed (Σp, Σp·e) along random
/// three-level directions and report the entropy drop of every trial.
///
/// Two constraints leave no freedom among two levels of distinct energy, so
/// perturbations act on triples (which degenerate to pair swaps when two of
/// the three energies coincide); the spectrum must have at least 3 levels.
pub fn max_entropy_witness(
    spectrum: &LevelSpectrum,
    energy: f64,
    trials: usize,
    seed: u64,
) -> Result<MaxEntropyReport> {
    if spectrum.len() < 3 {
        return Err(Error::Invalid(
            "max-entropy witness needs at least 3 levels; with 2 levels the energy fixes the state"
                .into(),
        ));
    }
    let beta = beta_for_energy(spectrum, energy)?;
    let state = canonical_state(spectrum, beta)?;
    let p_star = state.occupations();
    let levels = spectrum.levels();
    let n = levels.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margins = Vec::with_capacity(trials);
    let mut completed = 0;
    let mut attempts = 0;
    while completed < trials {
        attempts += 1;
        if attempts > 100 * trials.max(1) {
            return Err(Error::Invalid(
                "could not draw feasible perturbations (spectrum too degenerate?)".into(),
            ));
        }
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let k = rng.gen_range(0..n);
        if i == j || j == k || i == k {
            continue;
        }
        // Null direction of (Σp, Σp·e) restricted to the triple.
        let d = [
            levels[j] - levels[k],
            levels[k] - levels[i],
            levels[i] - levels[j],
        ];
        let d_scale = d.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if d_scale < 1e-14 * (1.0 + spectrum.spread()) {
            continue; // all three energies coincide
        }
        let idx = [i, j, k];
        // Positivity bounds: p + t·d ≥ 0 componentwise.
        let mut t_lo = f64::NEG_INFINITY;
        let mut t_hi = f64::INFINITY;
        for m in 0..3 {
            if d[m] > 0.0 {
                t_lo = t_lo.max(-p_star[idx[m]] / d[m]);
            } else if d[m] < 0.0 {
                t_hi = t_hi.min(-p_star[idx[m]] / d[m]);
            }
        }
        let width = t_hi - t_lo;
        if !(width.is_finite() && width > 0.0) {
            continue;
        }
        let t = t_lo + rng.gen::<f64>() * width;
        if t.abs() < 0.05 * width {
            continue; // keep a measurable distance from the maximizer
        }
        let mut p = p_star.to_vec();
        for m in 0..3 {
            p[idx[m]] = (p[idx[m]] + t * d[m]).max(0.0);
        }
        let perturbed_entropy = occupation_entropy(&p)?;
        margins.push(state.entropy() - perturbed_entropy);
        completed += 1;
    }

    Ok(MaxEntropyReport {
        seed,
        trials,
        canonical_entropy: state.entropy(),
        beta,
        margins,
    })
}
