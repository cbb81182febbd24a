//! Scan the (alpha, beta) parameter plane on both benchmarks and locate the
//! most accurate mean. The error is close to constant along lines
//! alpha + beta = const; the optimal line depends on the problem.
//!
//! ```bash
//! cargo run --release --example alpha_beta_sweep
//! ```

use std::sync::Arc;

use rayon::prelude::*;
use stolarsky_fv::analysis::error_report;
use stolarsky_fv::assembly::assemble;
use stolarsky_fv::linsolve::{default_max_iter, DEFAULT_TOL};
use stolarsky_fv::means::MeanSpec;
use stolarsky_fv::mesh::{build_interval_mesh, IntervalLayout};
use stolarsky_fv::presets;
use stolarsky_fv::reference::shoot_reference;

fn main() {
    for (label, problem) in [("benchmark 1", presets::example1()), ("benchmark 2", presets::example2())] {
        let reference = Arc::new(shoot_reference(&problem, presets::REFERENCE_GRID, 1e-12).unwrap());
        let mesh =
            Arc::new(build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(1025)).unwrap());

        let grid: Vec<(f64, f64)> = (0..=20)
            .flat_map(|i| (0..=20).map(move |j| (-4.0 + 0.5 * i as f64, -4.0 + 0.5 * j as f64)))
            .collect();
        let results: Vec<(f64, f64, f64, f64)> = grid
            .par_iter()
            .map(|&(alpha, beta)| {
                let system =
                    assemble(&problem, mesh.clone(), MeanSpec::General { alpha, beta }).unwrap();
                let (u_rel, _) = system
                    .solve(DEFAULT_TOL, default_max_iter(system.n_unknowns()))
                    .unwrap();
                let report = error_report(&system, &u_rel, &reference).unwrap();
                (alpha, beta, report.err_u_l2, report.err_flux_l2)
            })
            .collect();

        let best_u = results
            .iter()
            .min_by(|a, b| a.2.partial_cmp(&b.2).unwrap())
            .unwrap();
        let best_flux = results
            .iter()
            .min_by(|a, b| a.3.partial_cmp(&b.3).unwrap())
            .unwrap();
        println!("{label} on a 21 x 21 grid, step 0.5, n = 1025:");
        println!(
            "  min err_u    = {:.4e} at (alpha, beta) = ({}, {}), alpha + beta = {}",
            best_u.2,
            best_u.0,
            best_u.1,
            best_u.0 + best_u.1
        );
        println!(
            "  min err_flux = {:.4e} at (alpha, beta) = ({}, {}), alpha + beta = {}",
            best_flux.3,
            best_flux.0,
            best_flux.1,
            best_flux.0 + best_flux.1
        );

        // show the near-invariance along one alpha + beta line
        let line: Vec<&(f64, f64, f64, f64)> = results
            .iter()
            .filter(|r| (r.0 + r.1 - (best_u.0 + best_u.1)).abs() < 1e-9)
            .collect();
        let max = line.iter().map(|r| r.2).fold(0.0f64, f64::max);
        let min = line.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
        println!(
            "  err_u spread along that line: max/min = {:.6} over {} cells\n",
            max / min,
            line.len()
        );
    }
}
