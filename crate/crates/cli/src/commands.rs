//! Subcommand bodies: build inputs, call the library, write artifacts.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use qtherm::composite::{
    flow_direction, log_occupation_residual, product_state, FlowDirection,
};
use qtherm::criteria::{run_criteria_suite, CriteriaConfig};
use qtherm::equilibrium::{beta_for_energy, canonical_state, LevelSpectrum};
use qtherm::fundamental::{
    ideal_gas_entropy, ideal_gas_pressure, ideal_gas_temperature, spin_fundamental,
    total_potential, TotalPotential,
};
use qtherm::hamiltonians::{
    box_spectrum, fd_well, momentum_operator, potential_from_csv, BoxShape, Cutoff, GridWell,
};
use qtherm::output::sig12;
use qtherm::shape::{
    isochoric_family, semiclassical_scan_with_tail_limit, trajectory_run, TrajectoryConfig,
};
use qtherm::spectral::eigh;
use qtherm::Units;

use crate::json;
use crate::svg;
use crate::{
    CompositeArgs, CriteriaArgs, CutoffArgs, FundamentalArgs, GibbsArgs, RunConfig,
    ShapeGapArgs, ShapeTraceArgs, SpectrumArgs, SpinArgs,
};

fn parse_floats(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<f64>()
                .with_context(|| format!("{what}: {piece:?} is not a number"))
        })
        .collect()
}

fn parse_shape(text: &str, what: &str) -> Result<BoxShape> {
    let sides = parse_floats(text, what)?;
    if sides.len() != 3 {
        bail!("{what}: expected three sides b,c,d, got {}", sides.len());
    }
    Ok(BoxShape::new(sides[0], sides[1], sides[2])?)
}

fn resolve_box(source: &crate::BoxSource) -> Result<Option<BoxShape>> {
    match (&source.sides, source.volume) {
        (Some(sides), None) => Ok(Some(parse_shape(sides, "--sides")?)),
        (None, Some(volume)) => {
            let (rb, rc) = (
                source.ratio_bc.expect("clap requires ratio_bc"),
                source.ratio_cd.expect("clap requires ratio_cd"),
            );
            Ok(Some(isochoric_family(volume, rb, rc)?))
        }
        (None, None) => Ok(None),
        (Some(_), Some(_)) => bail!("--sides conflicts with --volume"),
    }
}

fn resolve_cutoff(args: &CutoffArgs) -> Result<Cutoff> {
    match (args.max_count, args.max_energy) {
        (Some(count), None) => Ok(Cutoff::MaxCount(count)),
        (None, Some(energy)) => Ok(Cutoff::MaxEnergy(energy)),
        (None, None) => bail!("a cutoff is required: pass --max-count or --max-energy"),
        (Some(_), Some(_)) => bail!("--max-count conflicts with --max-energy"),
    }
}

fn write_artifact(run: &RunConfig, name: &str, content: &str) -> Result<PathBuf> {
    fs::create_dir_all(&run.out_dir)
        .with_context(|| format!("cannot create output directory {}", run.out_dir.display()))?;
    let path = run.out_dir.join(name);
    fs::write(&path, content).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

// ───────────────────────── spectrum ─────────────────────────

pub fn spectrum(run: &RunConfig, args: &SpectrumArgs) -> Result<()> {
    match (&args.well_potential, resolve_box(&args.source)?) {
        (Some(path), None) => well_spectrum(run, path, args.step),
        (None, Some(shape)) => box_level_csv(run, &shape, &resolve_cutoff(&args.cutoff)?),
        (None, None) => bail!(
            "spectrum needs a source: --sides, --volume with ratios, or --well-potential"
        ),
        (Some(_), Some(_)) => bail!("--well-potential conflicts with box arguments"),
    }
}

fn box_level_csv(run: &RunConfig, shape: &BoxShape, cutoff: &Cutoff) -> Result<()> {
    let spectrum = box_spectrum(shape, cutoff)?;
    let mut out = String::from("nx,ny,nz,energy\n");
    for level in spectrum.levels() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            level.nx,
            level.ny,
            level.nz,
            sig12(level.energy)
        ));
    }
    write_artifact(run, "spectrum.csv", &out)?;
    println!(
        "box sides ({}, {}, {}), {} levels up to energy {}",
        sig12(shape.sides().0),
        sig12(shape.sides().1),
        sig12(shape.sides().2),
        spectrum.cutoff_count(),
        sig12(spectrum.energy_cutoff())
    );
    Ok(())
}

fn well_spectrum(run: &RunConfig, potential_path: &Path, step: Option<f64>) -> Result<()> {
    let step = step.context("--well-potential needs --step")?;
    let file = fs::File::open(potential_path)
        .with_context(|| format!("cannot open {}", potential_path.display()))?;
    let potential = potential_from_csv(BufReader::new(file))?;
    let well = GridWell::new(step, potential)?;
    let decomposition = eigh(&fd_well(&well))?;

    // The momentum expectation in every canonical state of this well is the
    // zero-velocity check; report it alongside the levels.
    let momentum = momentum_operator(&well);
    let rho = qtherm::equilibrium::DensityOperator::canonical(&fd_well(&well), 1.0)?;
    let mean_p = qtherm::equilibrium::mean_momentum(&rho, &momentum)?;

    let mut out = String::from("index,energy\n");
    for (index, energy) in decomposition.eigenvalues.iter().enumerate() {
        out.push_str(&format!("{index},{}\n", sig12(*energy)));
    }
    write_artifact(run, "spectrum.csv", &out)?;
    println!(
        "well with {} grid points, length {}; |Tr[rho P]| at beta=1: {}",
        well.grid_points(),
        sig12(well.length()),
        sig12(mean_p.abs())
    );
    Ok(())
}

// ───────────────────────── gibbs ─────────────────────────

#[derive(Serialize)]
struct GibbsOutput {
    k: f64,
    beta: f64,
    inverse_temperature: f64,
    log_partition: f64,
    energy: f64,
    entropy: f64,
    levels: Vec<f64>,
    occupations: Vec<f64>,
}

fn level_source(args: &GibbsArgs) -> Result<LevelSpectrum> {
    match (&args.levels, resolve_box(&args.source)?) {
        (Some(text), None) => {
            // An explicit list is a finite spectrum with an upper energy
            // limit, so negative temperatures are admissible.
            Ok(LevelSpectrum::new(parse_floats(text, "--levels")?, true)?)
        }
        (None, Some(shape)) => Ok(box_spectrum(&shape, &resolve_cutoff(&args.cutoff)?)?
            .to_level_spectrum()?),
        (None, None) => bail!("gibbs needs --levels or a box source"),
        (Some(_), Some(_)) => bail!("--levels conflicts with box arguments"),
    }
}

pub fn gibbs(run: &RunConfig, args: &GibbsArgs) -> Result<()> {
    let levels = level_source(args)?;
    let beta = match (args.beta, args.energy) {
        (Some(beta), None) => beta,
        (None, Some(energy)) => beta_for_energy(&levels, energy)?,
        (None, None) => bail!("gibbs needs --beta or --energy"),
        (Some(_), Some(_)) => bail!("--beta conflicts with --energy"),
    };
    let state = canonical_state(&levels, beta)?;
    let units = Units::new(run.k);
    let output = GibbsOutput {
        k: run.k,
        beta,
        inverse_temperature: units.inverse_temperature(beta),
        log_partition: state.log_partition(),
        energy: state.energy(),
        entropy: units.entropy(state.entropy()),
        levels: levels.levels().to_vec(),
        occupations: state.occupations().to_vec(),
    };
    write_artifact(run, "gibbs.json", &json::to_string(&output)?)?;
    println!(
        "beta {} -> energy {}, entropy {}",
        sig12(beta),
        sig12(output.energy),
        sig12(output.entropy)
    );
    Ok(())
}

// ───────────────────────── composite ─────────────────────────

#[derive(Serialize)]
struct CompositeOutput {
    k: f64,
    beta_a: f64,
    beta_b: f64,
    entropy_a: f64,
    entropy_b: f64,
    composite_entropy: f64,
    additivity_defect: f64,
    reference_temperature: f64,
    log_occupation_residual: f64,
    flow: &'static str,
    pair_count: usize,
}

pub fn composite(run: &RunConfig, args: &CompositeArgs) -> Result<()> {
    let seed = run.seed().map_err(anyhow::Error::msg)?;
    let levels_a = LevelSpectrum::new(parse_floats(&args.levels_a, "--levels-a")?, true)?;
    let levels_b = LevelSpectrum::new(parse_floats(&args.levels_b, "--levels-b")?, true)?;
    let beta_b = args.beta_b.unwrap_or(args.beta_a);
    let a = canonical_state(&levels_a, args.beta_a)?;
    let b = canonical_state(&levels_b, beta_b)?;
    let prod = product_state(&a, &b);

    let direct = qtherm::equilibrium::occupation_entropy(prod.occupations())?;
    let reference_temperature = 1.0 / args.beta_a;
    let residual = log_occupation_residual(&prod, reference_temperature, 10_000, seed)?;
    let flow = match flow_direction(&a, &b, None)? {
        FlowDirection::AToB => "a_to_b",
        FlowDirection::BToA => "b_to_a",
        FlowDirection::None => "none",
    };

    let units = Units::new(run.k);
    let output = CompositeOutput {
        k: run.k,
        beta_a: args.beta_a,
        beta_b,
        entropy_a: units.entropy(a.entropy()),
        entropy_b: units.entropy(b.entropy()),
        composite_entropy: units.entropy(direct),
        additivity_defect: (direct - a.entropy() - b.entropy()).abs(),
        reference_temperature,
        log_occupation_residual: residual,
        flow,
        pair_count: prod.spectrum().pairs().len(),
    };
    write_artifact(run, "composite.json", &json::to_string(&output)?)?;
    println!(
        "additivity defect {}, log-occupation residual {}, flow {}",
        sig12(output.additivity_defect),
        sig12(residual),
        flow
    );
    Ok(())
}

// ───────────────────────── shape-trace ─────────────────────────

pub fn shape_trace(run: &RunConfig, args: &ShapeTraceArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read {}", args.config.display()))?;
    let config: TrajectoryConfig = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid trajectory config", args.config.display()))?;
    let trajectory = config.build()?;
    let cutoff = match (args.cutoff.max_count, args.cutoff.max_energy) {
        (None, None) => Cutoff::MaxCount(400),
        _ => resolve_cutoff(&args.cutoff)?,
    };
    let trace = trajectory_run(&trajectory, &cutoff, args.retained)?;

    let mut buffer = Vec::new();
    trace.write_csv(&mut buffer)?;
    write_artifact(run, "trace.csv", &String::from_utf8(buffer)?)?;

    if args.svg {
        let entropy_series: Vec<(f64, f64)> = trace
            .samples()
            .iter()
            .map(|s| (s.time, s.entropy))
            .collect();
        let realloc_series: Vec<(f64, f64)> = trace
            .samples()
            .iter()
            .map(|s| (s.time, s.realloc_step))
            .collect();
        let chart = svg::line_chart(
            "entropy and reallocation step vs time",
            &[("entropy", entropy_series), ("realloc_step", realloc_series)],
        );
        write_artifact(run, "trace.svg", &chart)?;
    }

    let total_reallocation: f64 = trace.samples().iter().map(|s| s.realloc_step).sum();
    println!(
        "{} samples, total reallocation {}",
        trace.samples().len(),
        sig12(total_reallocation)
    );
    Ok(())
}

// ───────────────────────── shape-gap ─────────────────────────

pub fn shape_gap(run: &RunConfig, args: &ShapeGapArgs) -> Result<()> {
    if args.points < 1 {
        bail!("--points must be at least 1");
    }
    if !(args.e_min > 0.0 && args.e_max >= args.e_min) {
        bail!("energy grid needs 0 < --e-min <= --e-max");
    }
    let shape_a = parse_shape(&args.shape_a, "--shape-a")?;
    let shape_b = parse_shape(&args.shape_b, "--shape-b")?;
    let grid: Vec<f64> = if args.points == 1 {
        vec![args.e_min]
    } else {
        (0..args.points)
            .map(|i| {
                args.e_min
                    * (args.e_max / args.e_min).powf(i as f64 / (args.points - 1) as f64)
            })
            .collect()
    };
    let tail_limit = run.tail_mass_limit.unwrap_or(qtherm::tol::TAIL_MASS);
    let rows =
        semiclassical_scan_with_tail_limit(&shape_a, &shape_b, &grid, args.multiplier, tail_limit)?;
    let mut out = String::from("energy,entropy_a,entropy_b,gap,relative_gap\n");
    for row in &rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(row.energy),
            sig12(row.entropy_a),
            sig12(row.entropy_b),
            sig12(row.gap),
            sig12(row.relative_gap)
        ));
    }
    write_artifact(run, "gap.csv", &out)?;
    println!(
        "relative gap {} at E = {} down to {} at E = {}",
        sig12(rows.first().expect("non-empty").relative_gap),
        sig12(rows.first().expect("non-empty").energy),
        sig12(rows.last().expect("non-empty").relative_gap),
        sig12(rows.last().expect("non-empty").energy)
    );
    Ok(())
}

// ───────────────────────── criteria ─────────────────────────

pub fn criteria(run: &RunConfig, args: &CriteriaArgs) -> Result<()> {
    let dims = args
        .dims
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<usize>()
                .with_context(|| format!("--dims: {piece:?} is not an integer"))
        })
        .collect::<Result<Vec<_>>>()?;
    let config = CriteriaConfig {
        dims,
        trials: args.trials,
        seed: run.seed().map_err(anyhow::Error::msg)?,
    };
    let report = run_criteria_suite(&config)?;
    write_artifact(run, "criteria.json", &json::to_string(&report)?)?;
    print!("{}", report.render_text());
    if report.all_pass() {
        println!("all nine criteria pass (seed {})", report.seed);
        Ok(())
    } else {
        bail!("criteria suite reported failures (seed {})", report.seed)
    }
}

// ───────────────────────── fundamental ─────────────────────────

pub fn fundamental(run: &RunConfig, args: &FundamentalArgs) -> Result<()> {
    if args.points < 2 {
        bail!("--points must be at least 2");
    }
    if !(args.e_min > 0.0 && args.e_max > args.e_min) {
        bail!("energy grid needs 0 < --e-min < --e-max");
    }
    let units = Units::new(run.k);
    let mut out = String::from(
        "# ideal gas in reduced units: m = h = 1; entropy and inverse_temperature scaled by k\n",
    );
    out.push_str("energy,entropy,inverse_temperature,pressure,total_potential\n");
    for i in 0..args.points {
        let energy =
            args.e_min + (args.e_max - args.e_min) * i as f64 / (args.points - 1) as f64;
        let entropy = ideal_gas_entropy(energy, args.amount, args.volume)?;
        let inverse_t = 1.0 / ideal_gas_temperature(energy, args.amount);
        let pressure = ideal_gas_pressure(energy, args.volume);
        let mu = total_potential(energy, args.amount, args.volume)?;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(energy),
            sig12(units.entropy(entropy)),
            sig12(units.inverse_temperature(inverse_t)),
            sig12(pressure),
            sig12(mu.as_f64())
        ));
    }
    write_artifact(run, "fundamental.csv", &out)?;

    if let Some(halvings) = args.halvings {
        let temperature = ideal_gas_temperature(args.e_max, args.amount);
        let mut sweep = String::from("amount,total_potential,mu_over_kT\n");
        let mut amount = args.amount;
        for _ in 0..=halvings {
            let mu = qtherm::fundamental::total_potential_at_temperature(
                temperature,
                amount,
                args.volume,
            )?;
            sweep.push_str(&format!(
                "{},{},{}\n",
                sig12(amount),
                sig12(mu.as_f64()),
                sig12(mu.as_f64() / temperature)
            ));
            amount *= 0.5;
        }
        let absent = TotalPotential::NegInfinity;
        sweep.push_str(&format!("{},{},{}\n", sig12(0.0), absent, absent));
        write_artifact(run, "mu_sweep.csv", &sweep)?;
    }
    Ok(())
}

// ───────────────────────── spin ─────────────────────────

pub fn spin(run: &RunConfig, args: &SpinArgs) -> Result<()> {
    if args.points < 1 {
        bail!("--points must be at least 1");
    }
    let units = Units::new(run.k);
    let mut out = String::from("filling,entropy,inverse_temperature\n");
    for i in 1..=args.points {
        let filling = i as f64 / (args.points + 1) as f64;
        let point = spin_fundamental(args.spins, args.gap, filling)?;
        out.push_str(&format!(
            "{},{},{}\n",
            sig12(filling),
            sig12(units.entropy(point.entropy)),
            sig12(units.inverse_temperature(point.inverse_temperature))
        ));
    }
    write_artifact(run, "spin.csv", &out)?;
    Ok(())
}
