//! Mesh-refinement study on the first benchmark: quadratic convergence for
//! every interface mean, with constants that depend on the mean.
//!
//! ```bash
//! cargo run --release --example convergence_study
//! ```

use std::sync::Arc;

use stolarsky_fv::analysis::{error_report, ConvergenceTable};
use stolarsky_fv::assembly::assemble;
use stolarsky_fv::linsolve::{default_max_iter, DEFAULT_TOL};
use stolarsky_fv::means::MeanSpec;
use stolarsky_fv::mesh::{build_interval_mesh, IntervalLayout};
use stolarsky_fv::presets;
use stolarsky_fv::reference::shoot_reference;

fn main() {
    let problem = presets::example1();
    let reference = Arc::new(shoot_reference(&problem, presets::REFERENCE_GRID, 1e-12).unwrap());

    for mean in [
        MeanSpec::ScharfetterGummel,
        MeanSpec::Geometric,
        MeanSpec::Arithmetic,
        MeanSpec::Harmonic,
        MeanSpec::General { alpha: 3.2, beta: 1.0 },
    ] {
        let mut rows = Vec::new();
        println!("mean = {mean}");
        println!("      n        h          err_u_L2      err_flux_L2");
        for k in 5..=10u32 {
            let n = (1usize << k) + 1;
            let mesh =
                Arc::new(build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(n)).unwrap());
            let system = assemble(&problem, mesh, mean).unwrap();
            let (u_rel, _) = system
                .solve(DEFAULT_TOL, default_max_iter(system.n_unknowns()))
                .unwrap();
            let report = error_report(&system, &u_rel, &reference).unwrap();
            println!(
                "  {n:>6}   {:.6}   {:.6e}   {:.6e}",
                report.h, report.err_u_l2, report.err_flux_l2
            );
            rows.push(report);
        }
        let table = ConvergenceTable::from_rows(rows).unwrap();
        println!("  fitted orders: eoc_u = {:.4}, eoc_flux = {:.4}\n", table.eoc_u, table.eoc_flux);
    }
}
