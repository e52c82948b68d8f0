//! Classical closed-form fundamental relations S(E, n, V).
//!
//! Two models: the monatomic ideal gas (Sackur–Tetrode form in reduced units
//! m = h = k = 1, all unit conventions folded into one constant) and the
//! two-state spin lattice whose bounded spectrum realizes both zero-
//! temperature endpoints, 1/T = +∞ at empty filling and 1/T = −∞ at full
//! filling.
//!
//! Temperature, pressure, and total potentials come from the derivatives
//! 1/T = (∂S/∂E)_{n,V},  μ = −T(∂S/∂n)_{E,V} = (∂E/∂n)_{S,V},
//! p = T(∂S/∂V)_{E,n}. An absent constituent (n = 0) has total potential
//! −∞, carried as an explicit marker that serializes as the string "-inf";
//! this infinite escaping-tendency gap is what drives the interface
//! reallocation traced by the shape module.

use serde::{Serialize, Serializer};

use crate::equilibrium::{beta_for_energy, canonical_state};
use crate::hamiltonians::{box_spectrum, BoxShape, Cutoff};
use crate::{tol, Error, Result};

/// Total potential μ of a constituent; −∞ marks an absent constituent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TotalPotential {
    Finite(f64),
    NegInfinity,
}

impl TotalPotential {
    pub fn as_f64(&self) -> f64 {
        match self {
            TotalPotential::Finite(x) => *x,
            TotalPotential::NegInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TotalPotential::Finite(_))
    }

    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        match (self, other) {
            (TotalPotential::Finite(a), TotalPotential::Finite(b)) => (a - b).abs() <= tolerance,
            (TotalPotential::NegInfinity, TotalPotential::NegInfinity) => true,
            _ => false,
        }
    }
}

impl Serialize for TotalPotential {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TotalPotential::Finite(x) => serializer.serialize_f64(*x),
            TotalPotential::NegInfinity => serializer.serialize_str("-inf"),
        }
    }
}

impl std::fmt::Display for TotalPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TotalPotential::Finite(x) => write!(f, "{x}"),
            TotalPotential::NegInfinity => write!(f, "-inf"),
        }
    }
}

/// Derivative properties of a fundamental relation at one state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PropertyBundle {
    pub inverse_temperature: f64,
    pub pressure: f64,
    pub total_potential: TotalPotential,
}

/// Closed-form fundamental relation selected by kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FundamentalRelation {
    /// Monatomic ideal gas with `amount` particles in volume `volume`.
    IdealGas { amount: f64, volume: f64 },
    /// `spins` two-state spins with level gap `gap`.
    SpinLattice { spins: f64, gap: f64 },
}

impl FundamentalRelation {
    /// S/k at the given energy, holding the other state variables fixed.
    pub fn entropy(&self, energy: f64) -> Result<f64> {
        match *self {
            FundamentalRelation::IdealGas { amount, volume } => {
                ideal_gas_entropy(energy, amount, volume)
            }
            FundamentalRelation::SpinLattice { spins, gap } => {
                let filling = energy / (spins * gap);
                Ok(spin_fundamental(spins, gap, filling)?.entropy)
            }
        }
    }
}

// ───────────────────────── ideal gas ─────────────────────────

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::NonPositive { name, value });
    }
    Ok(())
}

/// Sackur–Tetrode entropy in reduced units:
/// S/k = n[ln((V/n)(4πE/(3n))^{3/2}) + 5/2]. Finite for all positive inputs
/// and extensive: S(2E, 2n, 2V) = 2·S(E, n, V).
pub fn ideal_gas_entropy(energy: f64, amount: f64, volume: f64) -> Result<f64> {
    require_positive("energy", energy)?;
    require_positive("amount", amount)?;
    require_positive("volume", volume)?;
    let per_particle = (volume / amount)
        * (4.0 * std::f64::consts::PI * energy / (3.0 * amount)).powf(1.5);
    Ok(amount * (per_particle.ln() + 2.5))
}

/// Inverse of the entropy relation: E(S, n, V) in closed form; the second
/// route to the total potential, μ = (∂E/∂n)_{S,V}.
pub fn ideal_gas_energy(entropy: f64, amount: f64, volume: f64) -> Result<f64> {
    require_positive("amount", amount)?;
    require_positive("volume", volume)?;
    let per_particle = (entropy / amount - 2.5).exp();
    Ok(3.0 * amount / (4.0 * std::f64::consts::PI)
        * (amount / volume * per_particle).powf(2.0 / 3.0))
}

/// kT = 2E/3n from (∂S/∂E)⁻¹.
pub fn ideal_gas_temperature(energy: f64, amount: f64) -> f64 {
    2.0 * energy / (3.0 * amount)
}

/// p = nT/V = 2E/3V, the ideal-gas law.
pub fn ideal_gas_pressure(energy: f64, volume: f64) -> f64 {
    2.0 * energy / (3.0 * volume)
}

/// μ = −T(∂S/∂n)_{E,V} in closed form. Returns the −∞ marker at n = 0
/// exactly (an absent constituent), and diverges to −∞ as n → 0⁺.
pub fn total_potential(energy: f64, amount: f64, volume: f64) -> Result<TotalPotential> {
    if amount == 0.0 {
        return Ok(TotalPotential::NegInfinity);
    }
    require_positive("energy", energy)?;
    require_positive("amount", amount)?;
    require_positive("volume", volume)?;
    let t = ideal_gas_temperature(energy, amount);
    let ds_dn = (volume / amount
        * (4.0 * std::f64::consts::PI * energy / (3.0 * amount)).powf(1.5))
    .ln();
    Ok(TotalPotential::Finite(-t * ds_dn))
}

/// μ at fixed temperature: μ = kT·ln(n·λ³/V) with λ = (2πT)^{−1/2} in these
/// units. Strictly increasing in n; −∞ at n = 0.
pub fn total_potential_at_temperature(
    temperature: f64,
    amount: f64,
    volume: f64,
) -> Result<TotalPotential> {
    if amount == 0.0 {
        return Ok(TotalPotential::NegInfinity);
    }
    require_positive("temperature", temperature)?;
    require_positive("amount", amount)?;
    require_positive("volume", volume)?;
    let lambda_cubed = (2.0 * std::f64::consts::PI * temperature).powf(-1.5);
    Ok(TotalPotential::Finite(
        temperature * (amount * lambda_cubed / volume).ln(),
    ))
}

/// All three derivative properties of the ideal gas at (E, n, V).
pub fn ideal_gas_properties(energy: f64, amount: f64, volume: f64) -> Result<PropertyBundle> {
    let mu = total_potential(energy, amount, volume)?;
    require_positive("energy", energy)?;
    Ok(PropertyBundle {
        inverse_temperature: 1.0 / ideal_gas_temperature(energy, amount),
        pressure: ideal_gas_pressure(energy, volume),
        total_potential: mu,
    })
}

// ───────────────────────── spin lattice ─────────────────────────

/// One point of the spin fundamental relation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpinPoint {
    /// S/k = −N[f ln f + (1−f) ln(1−f)].
    pub entropy: f64,
    /// 1/T = (k/gap)·ln((1−f)/f); +∞ and −∞ are approached at the two
    /// zero-temperature endpoints f → 0 and f → 1.
    pub inverse_temperature: f64,
}

/// Fundamental relation of N two-state spins at filling f = E/(N·gap),
/// 0 < f < 1 strictly (the endpoints are zero-entropy limits for the
/// caller to take).
pub fn spin_fundamental(spins: f64, gap: f64, filling: f64) -> Result<SpinPoint> {
    require_positive("spins", spins)?;
    require_positive("gap", gap)?;
    if !(filling > 0.0 && filling < 1.0) {
        return Err(Error::Invalid(format!(
            "filling must lie strictly inside (0, 1), got {filling}"
        )));
    }
    let f = filling;
    Ok(SpinPoint {
        entropy: -spins * (f * f.ln() + (1.0 - f) * (1.0 - f).ln()),
        inverse_temperature: ((1.0 - f) / f).ln() / gap,
    })
}

// ───────────────────────── semiclassical comparison ─────────────────────────

/// Comparison of the truncated-box canonical entropy against the classical
/// single-particle-in-box relation S/k = ln(V/λ³) + 3/2, at matched energy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SemiclassicalComparison {
    pub quantum_entropy: f64,
    pub classical_entropy: f64,
    pub relative_deviation: f64,
    pub beta: f64,
    /// exp(S_q): the effective number of thermally occupied levels.
    pub thermal_level_count: f64,
}

/// Cutoff deep enough that the Weyl tail at the β matching `energy` is far
/// below the 1e-8 mass bound (β·E_cutoff ≈ 45 at equipartition).
pub fn semiclassical_cutoff(energy: f64) -> Cutoff {
    Cutoff::MaxEnergy(30.0 * energy)
}

/// Single-particle box at energy E in volume V versus the classical
/// relation. Requires at least 10³ thermally occupied levels (exp(S) ≥ 10³)
/// and a neglected tail mass below 1e-8; the relative deviation shrinks as
/// E grows.
pub fn semiclassical_box_vs_ideal_gas(
    energy: f64,
    volume: f64,
    cutoff: &Cutoff,
) -> Result<SemiclassicalComparison> {
    require_positive("energy", energy)?;
    require_positive("volume", volume)?;
    let shape = BoxShape::cube(volume.cbrt())?;
    let spectrum = box_spectrum(&shape, cutoff)?;
    let levels = spectrum.to_level_spectrum()?;
    let beta = beta_for_energy(&levels, energy)?;
    let state = canonical_state(&levels, beta)?;

    let tail_fraction = spectrum.tail_fraction(beta, state.log_partition());
    if tail_fraction > tol::TAIL_MASS {
        return Err(Error::TailBoundExceeded {
            tail_fraction,
            limit: tol::TAIL_MASS,
        });
    }

    let quantum_entropy = state.entropy();
    let thermal_level_count = quantum_entropy.exp();
    if thermal_level_count < 1e3 {
        return Err(Error::Invalid(format!(
            "only {thermal_level_count:.1} levels thermally occupied; the \
             semiclassical comparison needs at least 1e3 (raise the energy)"
        )));
    }

    // The classical relation is a function of (E, V) alone: equipartition
    // fixes kT = 2E/3, and the thermal wavelength in box units
    // (level = n²/side²) is λ³ = (4β_cl/π)^{3/2}. Using the classical
    // temperature keeps S_cl(E, 8V) − S_cl(E, V) = ln 8 exact.
    let beta_classical = 1.5 / energy;
    let lambda_cubed = (4.0 * beta_classical / std::f64::consts::PI).powf(1.5);
    let classical_entropy = (volume / lambda_cubed).ln() + 1.5;

    Ok(SemiclassicalComparison {
        quantum_entropy,
        classical_entropy,
        relative_deviation: (quantum_entropy - classical_entropy).abs() / classical_entropy.abs(),
        beta,
        thermal_level_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn extensivity() {
        let s1 = ideal_gas_entropy(1.3, 2.0, 0.7).unwrap();
        let s2 = ideal_gas_entropy(2.6, 4.0, 1.4).unwrap();
        assert_abs_diff_eq!(s2, 2.0 * s1, epsilon = 1e-10);
    }

    #[test]
    fn temperature_from_finite_difference() {
        let (e, n, v) = (1.7, 2.0, 3.0);
        let h = 1e-5 * e;
        let fd = (ideal_gas_entropy(e + h, n, v).unwrap()
            - ideal_gas_entropy(e - h, n, v).unwrap())
            / (2.0 * h);
        let closed = 1.0 / ideal_gas_temperature(e, n);
        assert!(
            (fd - closed).abs() / closed < 1e-6,
            "∂S/∂E = {fd} vs 3n/2E = {closed}"
        );
    }

    #[test]
    fn pressure_from_finite_difference() {
        let (e, n, v) = (1.7, 2.0, 3.0);
        let h = 1e-5 * v;
        let fd = (ideal_gas_entropy(e, n, v + h).unwrap()
            - ideal_gas_entropy(e, n, v - h).unwrap())
            / (2.0 * h);
        let t = ideal_gas_temperature(e, n);
        let p_fd = t * fd;
        let p_closed = ideal_gas_pressure(e, v);
        assert!(
            (p_fd - p_closed).abs() / p_closed < 1e-6,
            "p = {p_fd} vs nT/V = {p_closed}"
        );
    }

    #[test]
    fn nonpositive_inputs_rejected() {
        assert!(ideal_gas_entropy(-1.0, 1.0, 1.0).is_err());
        assert!(ideal_gas_entropy(1.0, 0.0, 1.0).is_err());
        assert!(ideal_gas_entropy(1.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn absent_constituent_marker() {
        let mu = total_potential(1.0, 0.0, 1.0).unwrap();
        assert_eq!(mu, TotalPotential::NegInfinity);
        assert_eq!(mu.to_string(), "-inf");
        assert_eq!(serde_json::to_string(&mu).unwrap(), "\"-inf\"");
        let finite = total_potential(1.0, 1.0, 1.0).unwrap();
        assert!(finite.is_finite());
    }

    #[test]
    fn total_potential_monotone_in_amount() {
        let t = 0.8;
        let v = 2.0;
        let mut last = f64::NEG_INFINITY;
        for k in 1..=40 {
            let n = k as f64 * 0.05;
            let mu = total_potential_at_temperature(t, n, v).unwrap().as_f64();
            assert!(mu > last, "μ not increasing at n = {n}");
            last = mu;
        }
    }

    #[test]
    fn halving_drives_mu_unbounded() {
        // 100 halvings from n = 1 at fixed T push μ below −50·kT.
        let t = 1.0;
        let v = 1.0;
        let mut n = 1.0f64;
        for _ in 0..100 {
            n *= 0.5;
        }
        let mu = total_potential_at_temperature(t, n, v).unwrap().as_f64();
        assert!(mu / t < -50.0, "μ/kT = {}", mu / t);
    }

    #[test]
    fn both_potential_routes_agree() {
        // −T(∂S/∂n) against (∂E/∂n) at fixed S, by central difference of the
        // inverted relation.
        for &(e, n, v) in &[(1.0, 1.0, 1.0), (2.5, 0.7, 3.0), (0.4, 2.0, 0.5)] {
            let s = ideal_gas_entropy(e, n, v).unwrap();
            let h = 1e-5 * n;
            let e_plus = ideal_gas_energy(s, n + h, v).unwrap();
            let e_minus = ideal_gas_energy(s, n - h, v).unwrap();
            let mu_energy_route = (e_plus - e_minus) / (2.0 * h);
            let mu_entropy_route = total_potential(e, n, v).unwrap().as_f64();
            assert!(
                (mu_energy_route - mu_entropy_route).abs()
                    / mu_entropy_route.abs().max(1e-10)
                    < 1e-5,
                "(E,n,V)=({e},{n},{v}): routes {mu_energy_route} vs {mu_entropy_route}"
            );
        }
    }

    #[test]
    fn energy_inverts_entropy() {
        let (e, n, v) = (1.9, 1.3, 0.8);
        let s = ideal_gas_entropy(e, n, v).unwrap();
        let back = ideal_gas_energy(s, n, v).unwrap();
        assert_abs_diff_eq!(back, e, epsilon = 1e-12);
    }

    #[test]
    fn spin_symmetric_point() {
        let p = spin_fundamental(1.0, 1.0, 0.5).unwrap();
        assert_abs_diff_eq!(p.inverse_temperature, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.entropy, 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn spin_known_filling() {
        // f = 1/(1+e) gives 1/T = 1/gap exactly.
        let f = 1.0 / (1.0 + std::f64::consts::E);
        let p = spin_fundamental(1.0, 1.0, f).unwrap();
        assert_abs_diff_eq!(p.inverse_temperature, 1.0, epsilon = 1e-12);
        let p2 = spin_fundamental(1.0, 2.0, f).unwrap();
        assert_abs_diff_eq!(p2.inverse_temperature, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn spin_entropy_symmetric_and_vanishing_at_endpoints() {
        for f in [1e-3, 0.1, 0.3, 0.49] {
            let a = spin_fundamental(3.0, 1.0, f).unwrap().entropy;
            let b = spin_fundamental(3.0, 1.0, 1.0 - f).unwrap().entropy;
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        assert!(spin_fundamental(1.0, 1.0, 1e-12).unwrap().entropy < 1e-9);
        assert!(spin_fundamental(1.0, 1.0, 1.0 - 1e-12).unwrap().entropy < 1e-9);
        assert!(spin_fundamental(1.0, 1.0, 0.0).is_err());
        assert!(spin_fundamental(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn spin_inverse_temperature_strictly_decreasing() {
        let mut last = f64::INFINITY;
        for k in 1..=1000 {
            let f = k as f64 / 1001.0;
            let inv_t = spin_fundamental(1.0, 1.0, f).unwrap().inverse_temperature;
            assert!(inv_t < last, "1/T not decreasing at f = {f}");
            last = inv_t;
        }
    }

    #[test]
    fn relation_entropy_is_concave_in_energy() {
        for relation in [
            FundamentalRelation::IdealGas {
                amount: 1.0,
                volume: 1.0,
            },
            FundamentalRelation::SpinLattice {
                spins: 1.0,
                gap: 1.0,
            },
        ] {
            let (lo, hi) = match relation {
                FundamentalRelation::IdealGas { .. } => (0.2, 5.0),
                FundamentalRelation::SpinLattice { .. } => (0.02, 0.98),
            };
            let n = 60;
            let entropies: Vec<f64> = (0..n)
                .map(|i| {
                    let e = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                    relation.entropy(e).unwrap()
                })
                .collect();
            for w in entropies.windows(3) {
                let second = w[2] - 2.0 * w[1] + w[0];
                assert!(second <= tol::CONCAVITY_SLACK, "second difference {second}");
            }
        }
    }

    #[test]
    fn classical_escaping_tendency() {
        // Energy moving from the smaller-1/T body to the larger raises the
        // total entropy.
        let (n, v) = (1.0, 1.0);
        let e_hot = 3.0; // 1/T = 0.5
        let e_cold = 1.0; // 1/T = 1.5
        let delta = 1e-6;
        let before =
            ideal_gas_entropy(e_hot, n, v).unwrap() + ideal_gas_entropy(e_cold, n, v).unwrap();
        let after = ideal_gas_entropy(e_hot - delta, n, v).unwrap()
            + ideal_gas_entropy(e_cold + delta, n, v).unwrap();
        assert!(after > before);
        // And the reverse transfer lowers it.
        let wrong = ideal_gas_entropy(e_hot + delta, n, v).unwrap()
            + ideal_gas_entropy(e_cold - delta, n, v).unwrap();
        assert!(wrong < before);
    }

    #[test]
    fn semiclassical_deviation_shrinks_with_energy() {
        let v = 1.0;
        let low = semiclassical_box_vs_ideal_gas(100.0, v, &semiclassical_cutoff(100.0)).unwrap();
        let high = semiclassical_box_vs_ideal_gas(200.0, v, &semiclassical_cutoff(200.0)).unwrap();
        assert!(
            high.relative_deviation < low.relative_deviation,
            "deviation {} at E=200 vs {} at E=100",
            high.relative_deviation,
            low.relative_deviation
        );
        assert!(high.thermal_level_count >= 1e3);
    }

    #[test]
    fn semiclassical_volume_shift() {
        // (E, V) → (E, 8V) adds exactly ln 8 to the classical side; the
        // quantum side follows within the regime tolerance.
        let e = 200.0;
        let a = semiclassical_box_vs_ideal_gas(e, 1.0, &semiclassical_cutoff(e)).unwrap();
        let b = semiclassical_box_vs_ideal_gas(e, 8.0, &semiclassical_cutoff(e)).unwrap();
        let classical_shift = b.classical_entropy - a.classical_entropy;
        assert_abs_diff_eq!(classical_shift, 8f64.ln(), epsilon = 1e-6);
        let quantum_shift = b.quantum_entropy - a.quantum_entropy;
        assert!(
            (quantum_shift - classical_shift).abs() / classical_shift
                < tol::IDEAL_GAS_REDUCTION_REL,
            "quantum shift {quantum_shift} vs ln 8 = {classical_shift}"
        );
    }

    #[test]
    fn semiclassical_rejects_cold_regime() {
        assert!(matches!(
            semiclassical_box_vs_ideal_gas(10.0, 1.0, &semiclassical_cutoff(10.0)),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn semiclassical_rejects_shallow_cutoff() {
        assert!(matches!(
            semiclassical_box_vs_ideal_gas(200.0, 1.0, &Cutoff::MaxEnergy(600.0)),
            Err(Error::TailBoundExceeded { .. })
        ));
    }
}
