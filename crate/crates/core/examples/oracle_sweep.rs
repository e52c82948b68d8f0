//! Development sweep: prints the semiclassical convergence tables used to
//! pin the regression thresholds in the acceptance suite.

use qtherm::fundamental::{semiclassical_box_vs_ideal_gas, semiclassical_cutoff};
use qtherm::hamiltonians::BoxShape;
use qtherm::shape::semiclassical_scan;

fn main() {
    println!("== box vs classical ideal gas (cube, V = 1) ==");
    for energy in [100.0, 150.0, 200.0, 300.0, 400.0, 800.0] {
        match semiclassical_box_vs_ideal_gas(energy, 1.0, &semiclassical_cutoff(energy)) {
            Ok(c) => println!(
                "E = {energy:7.1}  S_q = {:.6}  S_cl = {:.6}  rel_dev = {:.6}  N_eff = {:.0}  beta = {:.6}",
                c.quantum_entropy,
                c.classical_entropy,
                c.relative_deviation,
                c.thermal_level_count,
                c.beta
            ),
            Err(error) => println!("E = {energy:7.1}  -> {error}"),
        }
    }

    println!("\n== cube vs (2,1,0.5) prism entropy gap, V = 1, cutoff 30E ==");
    let cube = BoxShape::cube(1.0).unwrap();
    let prism = BoxShape::new(2.0, 1.0, 0.5).unwrap();
    let grid: Vec<f64> = (0..9)
        .map(|k| 6.0 * (600.0f64 / 6.0).powf(k as f64 / 8.0))
        .collect();
    match semiclassical_scan(&cube, &prism, &grid, 30.0) {
        Ok(rows) => {
            for r in rows {
                println!(
                    "E = {:9.3}  S_a = {:.6}  S_b = {:.6}  gap = {:.6e}  rel_gap = {:.6e}",
                    r.energy, r.entropy_a, r.entropy_b, r.gap, r.relative_gap
                );
            }
        }
        Err(e) => println!("scan failed: {e}"),
    }
}
