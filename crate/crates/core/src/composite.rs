//! Two-phase composition: tensor-product Hamiltonians and states, the
//! log-occupation/energy relation for product canonical states, mutual and
//! partial mutual equilibrium, and escaping-tendency flow direction.
//!
//! A composite of noninteracting subsystems has Hamiltonian
//! H = H_s ⊗ I_c + I_s ⊗ H_c, spectrum {e_i + ε_j}, and (for product states)
//! occupations p_ij = p_i·p_j. When both factors are canonical at a common
//! temperature T the identity
//!
//!   ln(p_ij / p_kl) = [(e_k − e_i) + (ε_l − ε_j)] / kT
//!
//! holds for every pair of index pairs; its max residual is the
//! equilibrium check exposed here.
//!
//! Energy flows between two stable-equilibrium states from A to B exactly
//! when 1/T_A < 1/T_B, for positive and negative temperatures alike; the
//! implementation decides by the underlying maximization (which small
//! transfer raises the total entropy) rather than by comparing temperatures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::{beta_for_energy, canonical_state, CanonicalState, LevelSpectrum};
use crate::fundamental::TotalPotential;
use crate::spectral::HermitianOperator;
use crate::{par, tol, Error, Result};

/// Dense composites above this dimension are refused; compose level lists
/// instead (the dense path is only for operator-level checks).
pub const DENSE_COMPOSITE_CAP: usize = 2048;

/// Retained composite levels (i, j, e_i + ε_j).
#[derive(Debug, Clone)]
pub struct CompositeSpectrum {
    pairs: Vec<(usize, usize, f64)>,
    dim_a: usize,
    dim_b: usize,
    complete: bool,
}

impl CompositeSpectrum {
    /// All pairwise sums of two level lists.
    pub fn new(a: &LevelSpectrum, b: &LevelSpectrum) -> Self {
        let mut pairs = Vec::with_capacity(a.len() * b.len());
        for (i, &ea) in a.levels().iter().enumerate() {
            for (j, &eb) in b.levels().iter().enumerate() {
                pairs.push((i, j, ea + eb));
            }
        }
        Self {
            pairs,
            dim_a: a.len(),
            dim_b: b.len(),
            complete: a.complete() && b.complete(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize, f64)] {
        &self.pairs
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// Flattened level list (sorted ascending); complete only when both
    /// factors were complete.
    pub fn to_level_spectrum(&self) -> Result<LevelSpectrum> {
        LevelSpectrum::new(
            self.pairs.iter().map(|&(_, _, e)| e).collect(),
            self.complete,
        )
    }
}

/// Occupations p_ij over the retained composite pairs.
#[derive(Debug, Clone)]
pub struct CompositeOccupations {
    spectrum: CompositeSpectrum,
    occupations: Vec<f64>,
    entropy: f64,
}

impl CompositeOccupations {
    pub fn spectrum(&self) -> &CompositeSpectrum {
        &self.spectrum
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    /// S/k of the composite occupation vector.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }
}

/// H = H_s ⊗ I_c + I_s ⊗ H_c on the dense tensor-product space.
pub fn compose_hamiltonians(
    h_a: &HermitianOperator,
    h_b: &HermitianOperator,
) -> Result<HermitianOperator> {
    let dim = h_a.dim() * h_b.dim();
    if dim > DENSE_COMPOSITE_CAP {
        return Err(Error::CompositeTooLarge {
            dim,
            cap: DENSE_COMPOSITE_CAP,
        });
    }
    let id_a = nalgebra::DMatrix::identity(h_a.dim(), h_a.dim());
    let id_b = nalgebra::DMatrix::identity(h_b.dim(), h_b.dim());
    let sum = h_a.entries().kronecker(&id_b) + id_a.kronecker(h_b.entries());
    HermitianOperator::new(sum)
}

/// Product state p_ij = p_i·p_j of two canonical factors. The composite
/// entropy is the sum of the factor entropies (additivity).
pub fn product_state(a: &CanonicalState, b: &CanonicalState) -> CompositeOccupations {
    let spectrum = CompositeSpectrum::new(a.spectrum(), b.spectrum());
    let pa = a.occupations();
    let pb = b.occupations();
    let occupations: Vec<f64> = spectrum
        .pairs()
        .iter()
        .map(|&(i, j, _)| pa[i] * pb[j])
        .collect();
    CompositeOccupations {
        spectrum,
        occupations,
        entropy: a.entropy() + b.entropy(),
    }
}

/// Max residual of ln(p_ij/p_kl) − [(e_k − e_i) + (ε_l − ε_j)]/kT over index
/// pairs. All pairs are checked when there are at most `sample_cap` of them,
/// otherwise `sample_cap` seeded samples.
///
/// For product canonical states at temperature T = 1/β the residual is zero
/// up to rounding; at mismatched factor temperatures it measures the
/// disequilibrium.
pub fn log_occupation_residual(
    occ: &CompositeOccupations,
    temperature: f64,
    sample_cap: usize,
    seed: u64,
) -> Result<f64> {
    if temperature == 0.0 || !temperature.is_finite() {
        return Err(Error::Invalid(format!(
            "temperature must be finite and nonzero, got {temperature}"
        )));
    }
    let beta = 1.0 / temperature;
    let pairs = occ.spectrum().pairs();
    let p = occ.occupations();
    for (index, &value) in p.iter().enumerate() {
        if value <= 0.0 {
            let (i, j, _) = pairs[index];
            return Err(Error::ZeroOccupation { index, value, i, j });
        }
    }
    let n = pairs.len();
    let total = n * n;

    let residual_at = |a: usize, b: usize| -> f64 {
        let (_, _, e_ab) = pairs[a];
        let (_, _, e_kl) = pairs[b];
        // (e_k − e_i) + (ε_l − ε_j) is the energy of the second pair minus
        // the first, already summed per pair.
        ((p[a] / p[b]).ln() - beta * (e_kl - e_ab)).abs()
    };

    let residuals: Vec<f64> = if total <= sample_cap {
        par::map_indices_fine(total, |t| residual_at(t / n, t % n))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<(usize, usize)> = (0..sample_cap)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        par::map_collect_fine(&draws, |&(a, b)| residual_at(a, b))
    };
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Direction of the spontaneous energy flow between two stable-equilibrium
/// states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowDirection {
    AToB,
    BToA,
    None,
}

/// Decide the flow direction by entropy maximization: transfer a small
/// energy quantum each way and keep the direction that raises S_A + S_B.
///
/// The default quantum is 1e-6·min(spread_A, spread_B). The outcome agrees
/// with the escaping-tendency rule (flow from A to B iff 1/T_A < 1/T_B, both
/// temperature signs included); `None` is returned when the inverse
/// temperatures agree within 1e-9 in units of k.
pub fn flow_direction(
    a: &CanonicalState,
    b: &CanonicalState,
    exchange: Option<f64>,
) -> Result<FlowDirection> {
    if (a.beta() - b.beta()).abs() < tol::FLOW_NONE {
        return Ok(FlowDirection::None);
    }
    let delta = match exchange {
        Some(q) => {
            if !(q > 0.0 && q.is_finite()) {
                return Err(Error::NonPositive {
                    name: "exchange quantum",
                    value: q,
                });
            }
            q
        }
        None => 1e-6 * a.spectrum().spread().min(b.spectrum().spread()),
    };

    let total = a.entropy() + b.entropy();
    let moved = |from: &CanonicalState, to: &CanonicalState| -> f64 {
        let s_from = entropy_at(from.spectrum(), from.energy() - delta);
        let s_to = entropy_at(to.spectrum(), to.energy() + delta);
        match (s_from, s_to) {
            (Some(f), Some(t)) => f + t - total,
            _ => f64::NEG_INFINITY, // transfer infeasible in this direction
        }
    };
    let gain_ab = moved(a, b);
    let gain_ba = moved(b, a);

    let floor = 1e-13 * (1.0 + total.abs());
    if gain_ab > gain_ba && gain_ab > floor {
        Ok(FlowDirection::AToB)
    } else if gain_ba > gain_ab && gain_ba > floor {
        Ok(FlowDirection::BToA)
    } else {
        Ok(FlowDirection::None)
    }
}

fn entropy_at(spectrum: &LevelSpectrum, energy: f64) -> Option<f64> {
    let beta = beta_for_energy(spectrum, energy).ok()?;
    Some(canonical_state(spectrum, beta).ok()?.entropy())
}

/// Equilibrium classification of two phases in contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutualEquilibrium {
    /// Equal temperatures and equal total potentials.
    Full,
    /// Equal temperatures but unequal total potentials — e.g. a solvent in
    /// contact with an insoluble colloid, where the absent constituent's
    /// potential is −∞ on one side.
    Partial,
    /// Temperatures differ; energy still flows.
    NotEquilibrated,
}

/// Classify two phases by their inverse temperatures and (optionally) the
/// total potentials of a shared constituent. Unequal potentials at equal
/// temperature are not an error: that is partial mutual equilibrium.
pub fn classify_mutual_equilibrium(
    beta_a: f64,
    beta_b: f64,
    mu_a: Option<TotalPotential>,
    mu_b: Option<TotalPotential>,
) -> MutualEquilibrium {
    if (beta_a - beta_b).abs() >= tol::FLOW_NONE {
        return MutualEquilibrium::NotEquilibrated;
    }
    match (mu_a, mu_b) {
        (Some(a), Some(b)) if !a.approx_eq(&b, 1e-9) => MutualEquilibrium::Partial,
        _ => MutualEquilibrium::Full,
    }
}
