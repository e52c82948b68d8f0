//! A desk-scale laboratory for nonstatistical quantum thermodynamics.
//!
//! The library builds canonical stable-equilibrium states for model systems
//! (rectangular boxes, finite-difference wells, bounded spin ladders),
//! evaluates the entropy functional S = −k Tr[ρ ln ρ] together with the nine
//! criteria it must satisfy, composes two-phase systems as tensor products,
//! differentiates fundamental relations S(E, n, V), and traces constant-volume
//! shape changes as occupation reallocations over the evolving spectrum.
//!
//! Units: the Boltzmann constant is k ≡ 1 throughout, so entropies are
//! returned in units of k and β = 1/kT is numerically 1/T. Box levels use the
//! convention ħ²π²/2m ≡ 1, so a rectangular box with sides (b, c, d) has
//! levels n_x²/b² + n_y²/c² + n_z²/d². Finite-difference wells discretize
//! −d²/dx² + v(x) with Dirichlet boundaries. [`Units`] rescales outputs for
//! any other value of k.
//!
//! Everything is pure and deterministic: seeded randomness is passed
//! explicitly, and with the default `parallel` feature the embarrassingly
//! parallel sweeps (level sums, trials, trajectory samples) fan out over
//! rayon while keeping bit-identical results (element-wise maps only;
//! reductions stay sequential).

pub mod composite;
pub mod criteria;
pub mod ensembles;
pub mod equilibrium;
mod error;
pub mod fundamental;
pub mod hamiltonians;
pub mod output;
mod par;
pub mod shape;
pub mod spectral;
pub mod tol;

pub use error::{Error, Result};

/// Unit conventions. The library computes with k ≡ 1; this helper rescales
/// the dimensionless outputs (S in units of k, β in units of 1/k per energy)
/// to a caller-chosen Boltzmann constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub k: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { k: 1.0 }
    }
}

impl Units {
    pub fn new(k: f64) -> Self {
        Units { k }
    }

    /// S in physical units from S/k.
    pub fn entropy(&self, entropy_over_k: f64) -> f64 {
        self.k * entropy_over_k
    }

    /// 1/T in physical units from β (β = 1/kT, so 1/T = kβ).
    pub fn inverse_temperature(&self, beta: f64) -> f64 {
        self.k * beta
    }

    /// kT in energy units from β.
    pub fn thermal_energy(&self, beta: f64) -> f64 {
        1.0 / beta
    }
}

#[cfg(test)]
mod tests {
    use super::Units;

    #[test]
    fn unit_rescaling() {
        let u = Units::new(2.0);
        assert_eq!(u.entropy(3.0), 6.0);
        assert_eq!(u.inverse_temperature(0.5), 1.0);
        assert_eq!(Units::default().k, 1.0);
    }
}
