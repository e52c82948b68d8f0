//! Builders for the model systems: rectangular boxes with shape parameters,
//! 1-D finite-difference wells, bounded spin ladders, and the momentum
//! observable.
//!
//! Box levels are analytic and are kept as level lists, never materialized as
//! matrices: a box with sides (b, c, d) has levels n_x²/b² + n_y²/c² + n_z²/d²
//! (energy unit ħ²π²/2m ≡ 1), and semiclassical cutoffs retain far more
//! levels than any dense solver could hold. Degenerate levels stay as
//! separate entries so occupation bookkeeping is uniform.
//!
//! Wells discretize −d²/dx² + v(x) on a uniform grid with Dirichlet
//! boundaries: diagonal 2/h² + v_i, off-diagonal −1/h².

use std::io::BufRead;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::equilibrium::LevelSpectrum;
use crate::spectral::HermitianOperator;
use crate::{Error, Result};

// ───────────────────────── box shapes and spectra ─────────────────────────

/// Rectangular box with sides (b, c, d) in dimensionless length units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxShape {
    b: f64,
    c: f64,
    d: f64,
}

impl BoxShape {
    pub fn new(b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, value) in [("b", b), ("c", c), ("d", d)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositive { name, value });
            }
        }
        Ok(Self { b, c, d })
    }

    pub fn cube(side: f64) -> Result<Self> {
        Self::new(side, side, side)
    }

    pub fn sides(&self) -> (f64, f64, f64) {
        (self.b, self.c, self.d)
    }

    pub fn volume(&self) -> f64 {
        self.b * self.c * self.d
    }

    /// Level energy for quantum numbers (n_x, n_y, n_z), all ≥ 1.
    pub fn level_energy(&self, nx: u32, ny: u32, nz: u32) -> f64 {
        let fx = nx as f64 / self.b;
        let fy = ny as f64 / self.c;
        let fz = nz as f64 / self.d;
        fx * fx + fy * fy + fz * fz
    }

    /// Ground level (1, 1, 1).
    pub fn ground_energy(&self) -> f64 {
        self.level_energy(1, 1, 1)
    }
}

/// Retention rule for box spectra: keep everything up to an energy, or the
/// lowest `count` levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    MaxEnergy(f64),
    MaxCount(usize),
}

/// One retained box level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxLevel {
    pub nx: u32,
    pub ny: u32,
    pub nz: u32,
    pub energy: f64,
}

/// Truncated box spectrum, sorted by energy ascending with deterministic
/// tie-breaking on quantum numbers. No level at or below `energy_cutoff` is
/// omitted.
#[derive(Debug, Clone)]
pub struct BoxSpectrum {
    shape: BoxShape,
    levels: Vec<BoxLevel>,
    energy_cutoff: f64,
}

impl BoxSpectrum {
    pub fn shape(&self) -> &BoxShape {
        &self.shape
    }

    pub fn levels(&self) -> &[BoxLevel] {
        &self.levels
    }

    pub fn cutoff_count(&self) -> usize {
        self.levels.len()
    }

    pub fn energy_cutoff(&self) -> f64 {
        self.energy_cutoff
    }

    /// Level list for canonical sums; truncated box spectra are never
    /// complete (the true spectrum is unbounded above).
    pub fn to_level_spectrum(&self) -> Result<LevelSpectrum> {
        LevelSpectrum::new(self.levels.iter().map(|l| l.energy).collect(), false)
    }

    /// ln of a Weyl-law upper estimate of the neglected partition-function
    /// mass Σ_tail e^{−βE} at inverse temperature β.
    ///
    /// The semiclassical level density is g(E) = (π/4)·V·√E; bounding
    /// √E ≤ E/√E_c on the tail gives the closed form
    /// (π/4)(V/√E_c)·e^{−βE_c}·(E_c/β + 1/β²). Returns +∞ for β ≤ 0, where
    /// a truncated unbounded spectrum has no meaningful tail.
    pub fn log_tail_weight_bound(&self, beta: f64) -> f64 {
        if beta <= 0.0 {
            return f64::INFINITY;
        }
        let e_c = self.energy_cutoff;
        let v = self.shape.volume();
        (std::f64::consts::PI / 4.0 * v).ln() - 0.5 * e_c.ln()
            + (e_c / beta + 1.0 / (beta * beta)).ln()
            - beta * e_c
    }

    /// Neglected mass relative to the retained partition function,
    /// exp(ln tail − ln Z); computed in log space so deep tails do not
    /// underflow to spurious zeros before the comparison.
    pub fn tail_fraction(&self, beta: f64, log_partition: f64) -> f64 {
        (self.log_tail_weight_bound(beta) - log_partition).exp()
    }
}

/// Enumerate all box levels up to the cutoff.
///
/// `MaxEnergy` keeps every level with energy ≤ the bound (inclusive);
/// `MaxCount` keeps exactly the lowest `count` levels, ties broken by
/// quantum numbers. Rejects cutoffs that retain no level.
pub fn box_spectrum(shape: &BoxShape, cutoff: &Cutoff) -> Result<BoxSpectrum> {
    match *cutoff {
        Cutoff::MaxEnergy(e_max) => {
            if e_max < shape.ground_energy() {
                return Err(Error::CutoffBelowGround {
                    cutoff: e_max,
                    ground: shape.ground_energy(),
                });
            }
            let levels = enumerate_levels(shape, e_max);
            Ok(BoxSpectrum {
                shape: *shape,
                levels,
                energy_cutoff: e_max,
            })
        }
        Cutoff::MaxCount(count) => {
            if count == 0 {
                return Err(Error::NonPositive {
                    name: "cutoff count",
                    value: 0.0,
                });
            }
            // Weyl guess N(E) ≈ (π/6)·V·E^(3/2), inflated and grown until
            // enough levels are enumerated.
            let v = shape.volume();
            let mut e_max = (6.0 * count as f64 / (std::f64::consts::PI * v)).powf(2.0 / 3.0);
            e_max = 1.5 * e_max + 4.0 * shape.ground_energy();
            let mut levels = enumerate_levels(shape, e_max);
            while levels.len() < count {
                e_max *= 1.6;
                levels = enumerate_levels(shape, e_max);
            }
            levels.truncate(count);
            let energy_cutoff = levels.last().expect("count >= 1").energy;
            Ok(BoxSpectrum {
                shape: *shape,
                levels,
                energy_cutoff,
            })
        }
    }
}

fn enumerate_levels(shape: &BoxShape, e_max: f64) -> Vec<BoxLevel> {
    let mut levels = Vec::new();
    let (b, c, d) = shape.sides();
    let nx_max = (b * e_max.sqrt()).floor() as u32 + 1;
    for nx in 1..=nx_max {
        let ex = (nx as f64 / b).powi(2);
        if ex > e_max {
            break;
        }
        let ny_max = (c * (e_max - ex).sqrt()).floor() as u32 + 1;
        for ny in 1..=ny_max {
            let exy = ex + (ny as f64 / c).powi(2);
            if exy > e_max {
                break;
            }
            let nz_max = (d * (e_max - exy).sqrt()).floor() as u32 + 1;
            for nz in 1..=nz_max {
                let energy = shape.level_energy(nx, ny, nz);
                if energy <= e_max {
                    levels.push(BoxLevel { nx, ny, nz, energy });
                }
            }
        }
    }
    levels.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.nx.cmp(&b.nx))
            .then(a.ny.cmp(&b.ny))
            .then(a.nz.cmp(&b.nz))
    });
    levels
}

// ───────────────────────── finite-difference wells ─────────────────────────

/// Uniform Dirichlet grid for a 1-D potential well.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWell {
    grid_points: usize,
    step: f64,
    potential: Vec<f64>,
}

impl GridWell {
    pub fn new(step: f64, potential: Vec<f64>) -> Result<Self> {
        let grid_points = potential.len();
        if grid_points < 3 {
            return Err(Error::GridTooSmall { grid_points });
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::NonPositive {
                name: "step",
                value: step,
            });
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("potential contains non-finite value".into()));
        }
        Ok(Self {
            grid_points,
            step,
            potential,
        })
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Domain length implied by the Dirichlet discretization.
    pub fn length(&self) -> f64 {
        (self.grid_points as f64 + 1.0) * self.step
    }
}

/// Read a potential vector from CSV text, one value per line. Blank lines
/// are skipped; anything non-numeric is rejected with its line number.
pub fn potential_from_csv<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Invalid(format!("read error: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| {
            Error::Invalid(format!(
                "line {}: expected one number per line, got {trimmed:?}",
                lineno + 1
            ))
        })?;
        values.push(value);
    }
    Ok(values)
}

/// Finite-difference Hamiltonian −d²/dx² + v(x): real symmetric tridiagonal
/// with diagonal 2/h² + v_i and off-diagonal −1/h².
pub fn fd_well(well: &GridWell) -> HermitianOperator {
    let n = well.grid_points();
    let h2 = well.step() * well.step();
    let diag = 2.0 / h2;
    let off = -1.0 / h2;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(diag + well.potential()[i], 0.0);
        if i + 1 < n {
            m[(i, i + 1)] = Complex64::new(off, 0.0);
            m[(i + 1, i)] = Complex64::new(off, 0.0);
        }
    }
    HermitianOperator::new(m).expect("tridiagonal real symmetric matrix is Hermitian")
}

/// Central-difference momentum observable −i d/dx on the well's grid:
/// entries (j, j+1) = −i/2h and (j+1, j) = +i/2h, Hermitian by construction.
pub fn momentum_operator(well: &GridWell) -> HermitianOperator {
    let n = well.grid_points();
    let coeff = 1.0 / (2.0 * well.step());
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n - 1 {
        m[(j, j + 1)] = Complex64::new(0.0, -coeff);
        m[(j + 1, j)] = Complex64::new(0.0, coeff);
    }
    HermitianOperator::new(m).expect("antisymmetric imaginary tridiagonal is Hermitian")
}

// ───────────────────────── bounded spin ladders ─────────────────────────

/// Diagonal spin-ladder Hamiltonian with cumulative gap energies and ground
/// energy 0. The spectrum is bounded above, so canonical states exist at
/// both signs of the temperature.
pub fn spin_system(num_levels: usize, gaps: &[f64]) -> Result<HermitianOperator> {
    let levels = spin_levels(num_levels, gaps)?;
    Ok(HermitianOperator::from_diagonal(&levels))
}

/// The same ladder as a complete level list for canonical sums.
pub fn spin_level_spectrum(num_levels: usize, gaps: &[f64]) -> Result<LevelSpectrum> {
    LevelSpectrum::new(spin_levels(num_levels, gaps)?, true)
}

fn spin_levels(num_levels: usize, gaps: &[f64]) -> Result<Vec<f64>> {
    if num_levels < 2 || gaps.len() + 1 != num_levels {
        return Err(Error::SpinLevelMismatch {
            num_levels,
            gaps: gaps.len(),
        });
    }
    for &g in gaps {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::NonPositive {
                name: "gap",
                value: g,
            });
        }
    }
    let mut levels = Vec::with_capacity(num_levels);
    let mut e = 0.0;
    levels.push(e);
    for &g in gaps {
        e += g;
        levels.push(e);
    }
    Ok(levels)
}
