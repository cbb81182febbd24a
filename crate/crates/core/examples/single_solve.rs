//! Solve the first benchmark problem with the Scharfetter-Gummel mean and
//! compare against the shooting reference.
//!
//! ```bash
//! cargo run --release --example single_solve
//! ```

use std::sync::Arc;

use stolarsky_fv::analysis::error_report;
use stolarsky_fv::assembly::assemble;
use stolarsky_fv::linsolve::{default_max_iter, DEFAULT_TOL};
use stolarsky_fv::means::MeanSpec;
use stolarsky_fv::mesh::{build_interval_mesh, IntervalLayout};
use stolarsky_fv::presets;
use stolarsky_fv::reference::shoot_reference;

fn main() {
    let problem = presets::example1();
    let n = 1025;
    let mesh = Arc::new(build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(n)).unwrap());
    let system = assemble(&problem, mesh.clone(), MeanSpec::ScharfetterGummel).unwrap();
    let (u_rel, solve) = system
        .solve(DEFAULT_TOL, default_max_iter(system.n_unknowns()))
        .unwrap();
    let u = system.to_density(&u_rel);
    println!(
        "solved {} unknowns via {:?}, residual {:.2e}",
        system.n_unknowns(),
        solve.method,
        solve.residual_norm
    );

    println!("\n     x          u(x)        U(x) = u/pi");
    for k in (0..n).step_by(128) {
        let x = mesh.cells[k].center[0];
        println!("  {x:.4}   {:>12.8}   {:>12.8}", u.values[k], u_rel.values[k]);
    }

    let reference = shoot_reference(&problem, presets::REFERENCE_GRID, 1e-12).unwrap();
    let report = error_report(&system, &u_rel, &reference).unwrap();
    println!("\nerrors against the {}-node reference:", presets::REFERENCE_GRID);
    println!("  |u - u_ref|_L2       = {:.6e}", report.err_u_l2);
    println!("  |u - u_ref|_L2_pi    = {:.6e}", report.err_u_l2pi);
    println!("  |J - J_ref|_L2       = {:.6e}", report.err_flux_l2);
    println!("  |J - J_ref|_L2_S     = {:.6e}", report.err_flux_l2s);
    println!("  energy norm of U-err = {:.6e}", report.err_ht);
}
