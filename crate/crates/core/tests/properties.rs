//! Cross-module property tests: randomized invariants that back the
//! per-module example-based tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qtherm::equilibrium::{canonical_state, occupation_entropy, LevelSpectrum};
use qtherm::shape::isochoric_family;
use qtherm::spectral::{eigh, spectral_map, HermitianOperator};

fn hermitian_from_parts(dim: usize, parts: &[f64]) -> HermitianOperator {
    // parts supplies dim real diagonals then dim(dim−1)/2 (re, im) pairs.
    let mut m = DMatrix::zeros(dim, dim);
    let mut cursor = 0;
    for i in 0..dim {
        m[(i, i)] = Complex64::new(parts[cursor], 0.0);
        cursor += 1;
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = Complex64::new(parts[cursor], parts[cursor + 1]);
            cursor += 2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).expect("constructed Hermitian")
}

proptest! {
    #[test]
    fn eigh_reconstructs_arbitrary_hermitian(
        dim in 2usize..6,
        parts in proptest::collection::vec(-5.0f64..5.0, 36),
    ) {
        let h = hermitian_from_parts(dim, &parts);
        let d = eigh(&h).unwrap();
        prop_assert!(d.orthonormality_defect() < 1e-10);
        let scale = 1.0 + d.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let defect = (d.reconstruct() - h.entries())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        prop_assert!(defect < 1e-9 * scale, "defect {defect:.2e}");
        for w in d.eigenvalues.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn exp_log_round_trip_on_bounded_spectra(
        dim in 2usize..5,
        parts in proptest::collection::vec(-1.4f64..1.4, 25),
    ) {
        // Spectra of these draws stay inside [−20, 20] with spectral spread
        // below ~20, the region where the exp→log round trip is well
        // conditioned in f64 (see the spread-20 boundary test in spectral).
        let h = hermitian_from_parts(dim, &parts);
        let back = spectral_map(&spectral_map(&h, f64::exp).unwrap(), f64::ln).unwrap();
        let scale = h.entries().iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
        let defect = (back.entries() - h.entries())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        prop_assert!(defect < 1e-8 * scale, "round-trip defect {defect:.2e}");
    }

    #[test]
    fn canonical_states_satisfy_gibbs_identity(
        raw_levels in proptest::collection::vec(0.0f64..10.0, 2..12),
        beta in -2.0f64..5.0,
    ) {
        let spectrum = LevelSpectrum::new(raw_levels, true).unwrap();
        let state = canonical_state(&spectrum, beta).unwrap();
        let total: f64 = state.occupations().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "occupations sum {total}");
        let direct = occupation_entropy(state.occupations()).unwrap();
        let gibbs = beta * state.energy() + state.log_partition();
        prop_assert!((direct - gibbs).abs() < 1e-10, "{direct} vs {gibbs}");
        prop_assert!(state.entropy() >= 0.0);
    }

    #[test]
    fn isochoric_shapes_hit_the_volume_exactly(
        volume in 1e-3f64..1e3,
        ratio_bc in 1e-2f64..1e2,
        ratio_cd in 1e-2f64..1e2,
    ) {
        let shape = isochoric_family(volume, ratio_bc, ratio_cd).unwrap();
        let relative = (shape.volume() - volume).abs() / volume;
        prop_assert!(relative < 1e-14, "relative volume error {relative:.2e}");
        let (b, c, d) = shape.sides();
        prop_assert!((b / c - ratio_bc).abs() / ratio_bc < 1e-12);
        prop_assert!((c / d - ratio_cd).abs() / ratio_cd < 1e-12);
    }
}
