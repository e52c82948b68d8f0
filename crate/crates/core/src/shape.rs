//! Constant-volume shape families, the neutral-equilibrium entropy
//! comparison, and quasistatic shape trajectories producing reallocation
//! traces.
//!
//! The fundamental relation of a box depends on its volume but not, in the
//! semiclassical limit, on its shape: two equal-volume boxes at the same
//! (E, n, V) have equal entropies (neutral stable equilibrium). At finite
//! quantum scale the low-lying spectra differ, so the gap is nonzero and
//! only shrinks as more levels are thermally occupied; [`semiclassical_scan`]
//! quantifies the trend.
//!
//! A trajectory of shapes at fixed volume is traversed quasistatically: each
//! sample is an exact stable-equilibrium state for the instantaneous shape
//! (no equation of motion is involved), and the trace records how the
//! occupations are continuously reallocated over the evolving levels. The
//! reallocation metric is the total variation distance ½Σ|Δp| between
//! consecutive samples, matching levels by their quantum numbers so level
//! crossings do not masquerade as reallocation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{beta_for_energy, canonical_state};
use crate::hamiltonians::{box_spectrum, BoxShape, BoxSpectrum, Cutoff};
use crate::output::sig12;
use crate::{par, tol, Error, Result};

/// Levels retained in trace output by default (the full set is used
/// internally for states and reallocation steps).
pub const DEFAULT_RETAINED_LEVELS: usize = 64;

/// Box with sides in the prescribed ratios b/c = `ratio_bc`, c/d = `ratio_cd`
/// and the exact requested volume.
pub fn isochoric_family(volume: f64, ratio_bc: f64, ratio_cd: f64) -> Result<BoxShape> {
    for (name, value) in [
        ("volume", volume),
        ("ratio_bc", ratio_bc),
        ("ratio_cd", ratio_cd),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositive { name, value });
        }
    }
    let c = (volume * ratio_cd / ratio_bc).cbrt();
    BoxShape::new(ratio_bc * c, c, c / ratio_cd)
}

fn check_equal_volumes(a: &BoxShape, b: &BoxShape) -> Result<()> {
    let (va, vb) = (a.volume(), b.volume());
    let relative = (va - vb).abs() / va.max(vb);
    if relative > tol::VOLUME_REL {
        return Err(Error::UnequalVolumes {
            left: va,
            right: vb,
            relative,
            tolerance: tol::VOLUME_REL,
        });
    }
    Ok(())
}

fn canonical_at_energy(
    spectrum: &BoxSpectrum,
    energy: f64,
    tail_limit: f64,
) -> Result<(f64, crate::equilibrium::CanonicalState)> {
    let levels = spectrum.to_level_spectrum()?;
    let beta = beta_for_energy(&levels, energy)?;
    let state = canonical_state(&levels, beta)?;
    let tail_fraction = spectrum.tail_fraction(beta, state.log_partition());
    if tail_fraction > tail_limit {
        return Err(Error::TailBoundExceeded {
            tail_fraction,
            limit: tail_limit,
        });
    }
    Ok((beta, state))
}

/// |S_A(E) − S_B(E)| for two equal-volume shapes at matched energy, with the
/// neglected tail mass of both truncated spectra enforced below 1e-8.
pub fn entropy_gap(
    shape_a: &BoxShape,
    shape_b: &BoxShape,
    energy: f64,
    cutoff: &Cutoff,
) -> Result<f64> {
    let (s_a, s_b) = entropy_pair(shape_a, shape_b, energy, cutoff, tol::TAIL_MASS)?;
    Ok((s_a - s_b).abs())
}

fn entropy_pair(
    shape_a: &BoxShape,
    shape_b: &BoxShape,
    energy: f64,
    cutoff: &Cutoff,
    tail_limit: f64,
) -> Result<(f64, f64)> {
    check_equal_volumes(shape_a, shape_b)?;
    let spec_a = box_spectrum(shape_a, cutoff)?;
    let spec_b = box_spectrum(shape_b, cutoff)?;
    let (_, state_a) = canonical_at_energy(&spec_a, energy, tail_limit)?;
    let (_, state_b) = canonical_at_energy(&spec_b, energy, tail_limit)?;
    Ok((state_a.entropy(), state_b.entropy()))
}

/// One row of a semiclassical shape-gap scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapPoint {
    pub energy: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
    pub gap: f64,
    /// gap / mean(S_A, S_B).
    pub relative_gap: f64,
}

/// Entropy gap across an energy grid, cutoff scaled per point as
/// `energy_multiplier`·E. Rows come back sorted by energy ascending; the
/// relative gap falls as E grows (neutral equilibrium emerging in the
/// semiclassical limit).
pub fn semiclassical_scan(
    shape_a: &BoxShape,
    shape_b: &BoxShape,
    energy_grid: &[f64],
    energy_multiplier: f64,
) -> Result<Vec<GapPoint>> {
    semiclassical_scan_with_tail_limit(
        shape_a,
        shape_b,
        energy_grid,
        energy_multiplier,
        tol::TAIL_MASS,
    )
}

/// [`semiclassical_scan`] with the neglected-tail-mass limit overridden
/// (tightening it forces deeper cutoffs to be rejected earlier).
pub fn semiclassical_scan_with_tail_limit(
    shape_a: &BoxShape,
    shape_b: &BoxShape,
    energy_grid: &[f64],
    energy_multiplier: f64,
    tail_limit: f64,
) -> Result<Vec<GapPoint>> {
    if energy_grid.is_empty() {
        return Err(Error::Invalid("empty energy grid".into()));
    }
    if !(energy_multiplier > 1.0 && energy_multiplier.is_finite()) {
        return Err(Error::NonPositive {
            name: "energy_multiplier (must exceed 1)",
            value: energy_multiplier,
        });
    }
    let mut grid = energy_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let rows = par::map_collect(&grid, |&energy| -> Result<GapPoint> {
        let cutoff = Cutoff::MaxEnergy(energy_multiplier * energy);
        let (entropy_a, entropy_b) =
            entropy_pair(shape_a, shape_b, energy, &cutoff, tail_limit)?;
        let gap = (entropy_a - entropy_b).abs();
        Ok(GapPoint {
            energy,
            entropy_a,
            entropy_b,
            gap,
            relative_gap: gap / (0.5 * (entropy_a + entropy_b)),
        })
    });
    rows.into_iter().collect()
}

// ───────────────────────── trajectories ─────────────────────────

/// Constraint held along a quasistatic trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum TraceMode {
    ConstantTemperature(f64),
    ConstantEnergy(f64),
}

/// Timed sequence of equal-volume shapes.
#[derive(Debug, Clone)]
pub struct ShapeTrajectory {
    samples: Vec<(f64, BoxShape)>,
    mode: TraceMode,
}

impl ShapeTrajectory {
    /// Validates strictly increasing times and volume constancy within
    /// 1e-12 relative.
    pub fn new(samples: Vec<(f64, BoxShape)>, mode: TraceMode) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidTrajectory {
                reason: "no samples".into(),
            });
        }
        if let Some((t, _)) = samples.iter().find(|(t, _)| !t.is_finite()) {
            return Err(Error::InvalidTrajectory {
                reason: format!("non-finite sample time {t}"),
            });
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidTrajectory {
                    reason: format!("times not strictly increasing: {} then {}", w[0].0, w[1].0),
                });
            }
        }
        let first = samples[0].1;
        for (t, shape) in &samples {
            check_equal_volumes(&first, shape).map_err(|e| Error::InvalidTrajectory {
                reason: format!("at t = {t}: {e}"),
            })?;
        }
        if let TraceMode::ConstantTemperature(t) = mode {
            if t == 0.0 || !t.is_finite() {
                return Err(Error::InvalidTrajectory {
                    reason: format!("temperature must be finite and nonzero, got {t}"),
                });
            }
        }
        Ok(Self { samples, mode })
    }

    pub fn samples(&self) -> &[(f64, BoxShape)] {
        &self.samples
    }

    pub fn mode(&self) -> TraceMode {
        self.mode
    }

    pub fn volume(&self) -> f64 {
        self.samples[0].1.volume()
    }
}

/// On-disk trajectory description: aspect ratios per instant plus the shared
/// volume and constraint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub volume: f64,
    /// "constant_temperature" or "constant_energy".
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    pub samples: Vec<TrajectoryPoint>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub r_b: f64,
    pub r_c: f64,
}

impl TrajectoryConfig {
    pub fn build(&self) -> Result<ShapeTrajectory> {
        let mode = match (self.mode.as_str(), self.temperature, self.energy) {
            ("constant_temperature", Some(t), _) => TraceMode::ConstantTemperature(t),
            ("constant_energy", _, Some(e)) => TraceMode::ConstantEnergy(e),
            ("constant_temperature", None, _) => {
                return Err(Error::InvalidTrajectory {
                    reason: "constant_temperature mode needs a \"temperature\" field".into(),
                })
            }
            ("constant_energy", _, None) => {
                return Err(Error::InvalidTrajectory {
                    reason: "constant_energy mode needs an \"energy\" field".into(),
                })
            }
            (other, _, _) => {
                return Err(Error::InvalidTrajectory {
                    reason: format!(
                        "unknown mode {other:?} (expected constant_temperature or constant_energy)"
                    ),
                })
            }
        };
        let samples = self
            .samples
            .iter()
            .map(|p| Ok((p.t, isochoric_family(self.volume, p.r_b, p.r_c)?)))
            .collect::<Result<Vec<_>>>()?;
        ShapeTrajectory::new(samples, mode)
    }
}

/// One sample of a reallocation trace. `level_energies` and `occupations`
/// hold the lowest retained levels only; `entropy`, `energy`, `beta`, and
/// `realloc_step` are computed from the full truncated spectrum.
#[derive(Debug, Clone)]
pub struct TraceSample {
    pub time: f64,
    pub shape: BoxShape,
    pub level_energies: Vec<f64>,
    pub occupations: Vec<f64>,
    pub entropy: f64,
    pub energy: f64,
    pub beta: f64,
    pub realloc_step: f64,
}

/// Quasistatic reallocation trace along a shape trajectory.
#[derive(Debug, Clone)]
pub struct ReallocationTrace {
    samples: Vec<TraceSample>,
    retained: usize,
}

impl ReallocationTrace {
    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }

    pub fn retained(&self) -> usize {
        self.retained
    }

    /// CSV with header `t,b,c,d,beta,energy,entropy,realloc_step,p_0..p_{m-1}`
    /// and all floats at 12 significant digits. Samples with fewer than m
    /// retained levels pad occupations with zeros.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        write!(out, "t,b,c,d,beta,energy,entropy,realloc_step")?;
        for i in 0..self.retained {
            write!(out, ",p_{i}")?;
        }
        writeln!(out)?;
        for s in &self.samples {
            let (b, c, d) = s.shape.sides();
            write!(
                out,
                "{},{},{},{},{},{},{},{}",
                sig12(s.time),
                sig12(b),
                sig12(c),
                sig12(d),
                sig12(s.beta),
                sig12(s.energy),
                sig12(s.entropy),
                sig12(s.realloc_step)
            )?;
            for i in 0..self.retained {
                let p = s.occupations.get(i).copied().unwrap_or(0.0);
                write!(out, ",{}", sig12(p))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Quantum numbers identifying one box level across shape changes.
type LevelKey = (u32, u32, u32);

struct SampleState {
    time: f64,
    shape: BoxShape,
    // (quantum numbers, occupation), sorted by quantum numbers, full set.
    keyed: Vec<(LevelKey, f64)>,
    level_energies: Vec<f64>,
    occupations: Vec<f64>,
    entropy: f64,
    energy: f64,
    beta: f64,
}

/// Recompute the box spectrum and the canonical state per mode at every
/// sample, then chain the reallocation steps. Deterministic; samples are
/// independent (quasistatic), so they evaluate in parallel.
pub fn trajectory_run(
    trajectory: &ShapeTrajectory,
    cutoff: &Cutoff,
    retained: usize,
) -> Result<ReallocationTrace> {
    if retained == 0 {
        return Err(Error::NonPositive {
            name: "retained",
            value: 0.0,
        });
    }
    let mode = trajectory.mode();
    let states = par::map_collect(trajectory.samples(), |&(time, shape)| {
        evaluate_sample(time, shape, mode, cutoff)
    });
    let mut states: Vec<SampleState> = states
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::InfeasibleSample {
                index,
                time: trajectory.samples()[index].0,
                reason: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::with_capacity(states.len());
    let mut previous: Option<&[(LevelKey, f64)]> = None;
    let mut steps = Vec::with_capacity(states.len());
    for state in &states {
        let step = match previous {
            None => 0.0,
            Some(prev) => total_variation(prev, &state.keyed),
        };
        steps.push(step);
        previous = Some(&state.keyed);
    }
    for (mut state, step) in states.drain(..).zip(steps) {
        // Entropy, energy, and the step came from the full spectrum; only
        // the lowest retained levels go into the trace rows.
        state.level_energies.truncate(retained);
        state.occupations.truncate(retained);
        samples.push(TraceSample {
            time: state.time,
            shape: state.shape,
            level_energies: state.level_energies,
            occupations: state.occupations,
            entropy: state.entropy,
            energy: state.energy,
            beta: state.beta,
            realloc_step: step,
        });
    }
    Ok(ReallocationTrace { samples, retained })
}

fn evaluate_sample(
    time: f64,
    shape: BoxShape,
    mode: TraceMode,
    cutoff: &Cutoff,
) -> Result<SampleState> {
    let spectrum = box_spectrum(&shape, cutoff)?;
    let levels = spectrum.to_level_spectrum()?;
    let beta = match mode {
        TraceMode::ConstantTemperature(t) => 1.0 / t,
        TraceMode::ConstantEnergy(e) => beta_for_energy(&levels, e)?,
    };
    let state = canonical_state(&levels, beta)?;

    let total: f64 = state.occupations().iter().sum();
    if (total - 1.0).abs() > tol::TRACE_OCCUPATION {
        return Err(Error::Invalid(format!(
            "occupations sum to {total} at t = {time}"
        )));
    }
    if let TraceMode::ConstantEnergy(target) = mode {
        let relative = (state.energy() - target).abs() / target.abs().max(f64::MIN_POSITIVE);
        if relative > 1e-9 {
            return Err(Error::Invalid(format!(
                "energy constraint missed by {relative:.2e} (relative) at t = {time}"
            )));
        }
    }

    let mut keyed: Vec<(LevelKey, f64)> = spectrum
        .levels()
        .iter()
        .zip(state.occupations())
        .map(|(level, &p)| ((level.nx, level.ny, level.nz), p))
        .collect();
    keyed.sort_by_key(|&(key, _)| key);

    Ok(SampleState {
        time,
        shape,
        level_energies: spectrum.levels().iter().map(|l| l.energy).collect(),
        occupations: state.occupations().to_vec(),
        entropy: state.entropy(),
        energy: state.energy(),
        beta,
        keyed,
    })
}

/// ½ Σ |p_a − p_b| over the union of levels, matched by quantum numbers;
/// levels retained in only one sample count with occupation 0 in the other.
fn total_variation(a: &[(LevelKey, f64)], b: &[(LevelKey, f64)]) -> f64 {
    let mut sum = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Equal => {
                sum += (a[i].1 - b[j].1).abs();
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                sum += a[i].1.abs();
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                sum += b[j].1.abs();
                j += 1;
            }
        }
    }
    sum += a[i..].iter().map(|&(_, p)| p.abs()).sum::<f64>();
    sum += b[j..].iter().map(|&(_, p)| p.abs()).sum::<f64>();
    0.5 * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cube() -> BoxShape {
        BoxShape::cube(1.0).unwrap()
    }

    fn prism() -> BoxShape {
        BoxShape::new(2.0, 1.0, 0.5).unwrap()
    }

    #[test]
    fn unit_ratios_give_cube() {
        let s = isochoric_family(1.0, 1.0, 1.0).unwrap();
        let (b, c, d) = s.sides();
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ratios_two_two_give_prism() {
        let s = isochoric_family(1.0, 2.0, 2.0).unwrap();
        let (b, c, d) = s.sides();
        assert_abs_diff_eq!(b, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn volume_exact_across_parameter_range() {
        for &(v, rb, rc) in &[
            (1.0, 1.3, 0.4),
            (2.5, 0.2, 5.0),
            (0.03, 7.0, 7.0),
            (10.0, 1.0, 0.01),
        ] {
            let s = isochoric_family(v, rb, rc).unwrap();
            assert!(
                (s.volume() - v).abs() / v < 1e-14,
                "volume {} vs {v}",
                s.volume()
            );
        }
    }

    #[test]
    fn identical_shapes_have_zero_gap() {
        let gap = entropy_gap(&cube(), &cube(), 20.0, &Cutoff::MaxEnergy(300.0)).unwrap();
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn low_energy_gap_is_positive() {
        let gap = entropy_gap(&cube(), &prism(), 8.0, &Cutoff::MaxEnergy(500.0)).unwrap();
        assert!(gap > 0.0, "low-lying spectra differ, gap must be positive");
    }

    #[test]
    fn unequal_volumes_rejected() {
        let bigger = BoxShape::cube(1.1).unwrap();
        assert!(matches!(
            entropy_gap(&cube(), &bigger, 10.0, &Cutoff::MaxEnergy(200.0)),
            Err(Error::UnequalVolumes { .. })
        ));
    }

    #[test]
    fn shallow_cutoff_rejected_with_tail_advice() {
        assert!(matches!(
            entropy_gap(&cube(), &prism(), 50.0, &Cutoff::MaxEnergy(120.0)),
            Err(Error::TailBoundExceeded { .. })
        ));
    }

    #[test]
    fn scan_single_point_matches_entropy_gap() {
        let rows = semiclassical_scan(&cube(), &prism(), &[12.0], 30.0).unwrap();
        assert_eq!(rows.len(), 1);
        let gap = entropy_gap(&cube(), &prism(), 12.0, &Cutoff::MaxEnergy(360.0)).unwrap();
        assert_abs_diff_eq!(rows[0].gap, gap, epsilon = 1e-14);
    }

    #[test]
    fn scan_of_identical_pair_is_identically_zero() {
        let rows = semiclassical_scan(&cube(), &cube(), &[8.0, 20.0, 50.0], 30.0).unwrap();
        for row in rows {
            assert_eq!(row.gap, 0.0);
            assert_eq!(row.relative_gap, 0.0);
        }
    }

    #[test]
    fn relative_gap_shrinks_over_two_decades() {
        let rows = semiclassical_scan(&cube(), &prism(), &[6.0, 60.0, 600.0], 30.0).unwrap();
        assert!(
            rows[2].relative_gap < rows[0].relative_gap,
            "relative gap {} at E=600 vs {} at E=6",
            rows[2].relative_gap,
            rows[0].relative_gap
        );
    }

    fn sinuous_config(samples: usize, mode: &str) -> TrajectoryConfig {
        let points: Vec<TrajectoryPoint> = (0..samples)
            .map(|k| {
                let t = k as f64 * 0.05;
                TrajectoryPoint {
                    t,
                    r_b: 1.0 + 0.3 * t.sin(),
                    r_c: 1.0 + 0.3 * (2.0 * t).cos(),
                }
            })
            .collect();
        TrajectoryConfig {
            volume: 1.0,
            mode: mode.into(),
            temperature: if mode == "constant_temperature" {
                Some(8.0)
            } else {
                None
            },
            energy: if mode == "constant_energy" {
                Some(14.0)
            } else {
                None
            },
            samples: points,
        }
    }

    #[test]
    fn constant_shape_trajectory_never_reallocates() {
        let points: Vec<TrajectoryPoint> = (0..10)
            .map(|k| TrajectoryPoint {
                t: k as f64,
                r_b: 1.4,
                r_c: 0.8,
            })
            .collect();
        let config = TrajectoryConfig {
            volume: 1.0,
            mode: "constant_temperature".into(),
            temperature: Some(5.0),
            energy: None,
            samples: points,
        };
        let trace = trajectory_run(&config.build().unwrap(), &Cutoff::MaxCount(300), 16).unwrap();
        for s in trace.samples() {
            assert_eq!(s.realloc_step, 0.0);
            assert_eq!(s.entropy, trace.samples()[0].entropy);
            assert_eq!(s.energy, trace.samples()[0].energy);
        }
    }

    #[test]
    fn closed_loop_returns_to_start() {
        // Cube → prism → cube; quasistatic states depend only on the shape.
        let points = vec![
            TrajectoryPoint { t: 0.0, r_b: 1.0, r_c: 1.0 },
            TrajectoryPoint { t: 1.0, r_b: 1.5, r_c: 0.7 },
            TrajectoryPoint { t: 2.0, r_b: 2.0, r_c: 2.0 },
            TrajectoryPoint { t: 3.0, r_b: 1.5, r_c: 0.7 },
            TrajectoryPoint { t: 4.0, r_b: 1.0, r_c: 1.0 },
        ];
        let config = TrajectoryConfig {
            volume: 1.0,
            mode: "constant_temperature".into(),
            temperature: Some(6.0),
            energy: None,
            samples: points,
        };
        let trace = trajectory_run(&config.build().unwrap(), &Cutoff::MaxCount(400), 16).unwrap();
        let first = trace.samples().first().unwrap();
        let last = trace.samples().last().unwrap();
        let max_dev = first
            .occupations
            .iter()
            .zip(&last.occupations)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(max_dev < tol::TRACE_OCCUPATION, "loop deviation {max_dev:.2e}");
    }

    #[test]
    fn sinuous_trajectory_reallocates_at_every_step() {
        let trace = trajectory_run(
            &sinuous_config(50, "constant_temperature").build().unwrap(),
            &Cutoff::MaxCount(300),
            16,
        )
        .unwrap();
        for (k, s) in trace.samples().iter().enumerate().skip(1) {
            assert!(s.realloc_step > 0.0, "zero reallocation at sample {k}");
        }
        // Entropy varies while the volume stays fixed.
        let s0 = trace.samples()[0].entropy;
        assert!(trace
            .samples()
            .iter()
            .any(|s| (s.entropy - s0).abs() > 1e-6));
    }

    #[test]
    fn constant_energy_mode_holds_energy() {
        let trace = trajectory_run(
            &sinuous_config(20, "constant_energy").build().unwrap(),
            &Cutoff::MaxCount(400),
            16,
        )
        .unwrap();
        for s in trace.samples() {
            assert!(
                (s.energy - 14.0).abs() / 14.0 < 1e-9,
                "energy drifted to {}",
                s.energy
            );
        }
        // β now varies instead.
        let b0 = trace.samples()[0].beta;
        assert!(trace.samples().iter().any(|s| (s.beta - b0).abs() > 1e-9));
    }

    #[test]
    fn constant_temperature_mode_holds_beta() {
        let trace = trajectory_run(
            &sinuous_config(20, "constant_temperature").build().unwrap(),
            &Cutoff::MaxCount(300),
            16,
        )
        .unwrap();
        for s in trace.samples() {
            assert_eq!(s.beta, 1.0 / 8.0);
        }
    }

    #[test]
    fn reallocation_invariant_under_time_reparameterization() {
        let base = sinuous_config(30, "constant_temperature");
        let mut stretched = base.clone();
        for (k, p) in stretched.samples.iter_mut().enumerate() {
            p.t = (k as f64).exp() * 0.01; // same shapes, warped clock
        }
        let a = trajectory_run(&base.build().unwrap(), &Cutoff::MaxCount(200), 8).unwrap();
        let b = trajectory_run(&stretched.build().unwrap(), &Cutoff::MaxCount(200), 8).unwrap();
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert_eq!(x.realloc_step, y.realloc_step);
        }
    }

    #[test]
    fn volume_conserved_along_trajectory() {
        let traj = sinuous_config(40, "constant_temperature").build().unwrap();
        let v0 = traj.volume();
        for (_, shape) in traj.samples() {
            assert!((shape.volume() - v0).abs() / v0 < tol::VOLUME_REL);
        }
    }

    #[test]
    fn infeasible_constant_energy_names_the_sample() {
        // Energy below the prism's ground level is unreachable there.
        let points = vec![
            TrajectoryPoint { t: 0.0, r_b: 1.0, r_c: 1.0 },
            TrajectoryPoint { t: 1.0, r_b: 2.0, r_c: 2.0 },
        ];
        let config = TrajectoryConfig {
            volume: 1.0,
            mode: "constant_energy".into(),
            temperature: None,
            energy: Some(4.0), // cube ground 3 < 4 < prism ground 5.25
            samples: points,
        };
        match trajectory_run(&config.build().unwrap(), &Cutoff::MaxCount(200), 8) {
            Err(Error::InfeasibleSample { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected InfeasibleSample, got {other:?}"),
        }
    }

    #[test]
    fn trajectory_validation() {
        let shapes = vec![(0.0, cube()), (0.0, cube())];
        assert!(matches!(
            ShapeTrajectory::new(shapes, TraceMode::ConstantTemperature(1.0)),
            Err(Error::InvalidTrajectory { .. })
        ));
        let mixed = vec![(0.0, cube()), (1.0, BoxShape::cube(1.01).unwrap())];
        assert!(ShapeTrajectory::new(mixed, TraceMode::ConstantTemperature(1.0)).is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = sinuous_config(5, "constant_energy");
        let text = serde_json::to_string(&config).unwrap();
        let back: TrajectoryConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.samples.len(), 5);
        assert_eq!(back.energy, Some(14.0));
        back.build().unwrap();
    }

    #[test]
    fn csv_has_expected_header_and_row_count() {
        let trace = trajectory_run(
            &sinuous_config(6, "constant_temperature").build().unwrap(),
            &Cutoff::MaxCount(100),
            4,
        )
        .unwrap();
        let mut buffer = Vec::new();
        trace.write_csv(&mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,b,c,d,beta,energy,entropy,realloc_step,p_0,p_1,p_2,p_3"
        );
        assert_eq!(lines.count(), 6);
    }

    #[test]
    fn total_variation_handles_disjoint_level_sets() {
        let a = vec![((1u32, 1u32, 1u32), 0.6), ((2, 1, 1), 0.4)];
        let b = vec![((1u32, 1u32, 1u32), 0.5), ((1, 2, 1), 0.5)];
        // ½(|0.6−0.5| + 0.4 + 0.5) = 0.5.
        assert_abs_diff_eq!(total_variation(&a, &b), 0.5, epsilon = 1e-15);
    }
}
