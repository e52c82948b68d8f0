//! Two-phase runs: a solvent box and a colloid box deforming at constant
//! common temperature stay in mutual stable equilibrium at every instant.

use qtherm::composite::{log_occupation_residual, product_state};
use qtherm::equilibrium::canonical_state;
use qtherm::hamiltonians::{box_spectrum, Cutoff};
use qtherm::shape::{isochoric_family, TrajectoryConfig, TrajectoryPoint};
use qtherm::tol;

fn wiggling(volume: f64, phase: f64, samples: usize) -> TrajectoryConfig {
    TrajectoryConfig {
        volume,
        mode: "constant_temperature".into(),
        temperature: Some(7.0),
        energy: None,
        samples: (0..samples)
            .map(|k| {
                let t = k as f64 * 0.11;
                TrajectoryPoint {
                    t,
                    r_b: 1.0 + 0.25 * (t + phase).sin(),
                    r_c: 1.0 + 0.25 * (2.0 * t - phase).cos(),
                }
            })
            .collect(),
    }
}

#[test]
fn constant_temperature_two_phase_run_is_equilibrated_everywhere() {
    let temperature = 7.0;
    let beta = 1.0 / temperature;
    // Unequal volumes on purpose: the phases share T, not geometry.
    let solvent = wiggling(1.0, 0.0, 12).build().unwrap();
    let colloid = wiggling(0.4, 1.3, 12).build().unwrap();

    let mut worst = 0.0f64;
    for (&(_, shape_s), &(_, shape_c)) in solvent.samples().iter().zip(colloid.samples()) {
        let levels_s = box_spectrum(&shape_s, &Cutoff::MaxCount(48))
            .unwrap()
            .to_level_spectrum()
            .unwrap();
        let levels_c = box_spectrum(&shape_c, &Cutoff::MaxCount(48))
            .unwrap()
            .to_level_spectrum()
            .unwrap();
        let state_s = canonical_state(&levels_s, beta).unwrap();
        let state_c = canonical_state(&levels_c, beta).unwrap();
        let joint = product_state(&state_s, &state_c);
        let residual = log_occupation_residual(&joint, temperature, 10_000, 5).unwrap();
        worst = worst.max(residual);
    }
    assert!(
        worst < tol::LOG_OCCUPATION_RESIDUAL,
        "log-occupation residual {worst:.3e} at some sample of the two-phase run"
    );
}

#[test]
fn isochoric_shapes_preserve_their_own_volumes() {
    // The two phases keep V_s and V_c separately fixed while both deform.
    for volume in [1.0, 0.4] {
        let config = wiggling(volume, 0.7, 30);
        let trajectory = config.build().unwrap();
        for (_, shape) in trajectory.samples() {
            assert!((shape.volume() - volume).abs() / volume < tol::VOLUME_REL);
        }
    }
    // And the family constructor hits requested ratios exactly.
    let shape = isochoric_family(0.4, 1.25, 0.8).unwrap();
    let (b, c, d) = shape.sides();
    assert!((b / c - 1.25).abs() < 1e-12);
    assert!((c / d - 0.8).abs() < 1e-12);
}
