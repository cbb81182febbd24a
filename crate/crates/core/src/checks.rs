//! Embedded property suite behind the `check` subcommand.
//!
//! A fast, seeded subset of the crate's randomized invariants: mean
//! identities, the exact single-edge flux oracle, stationarity of the
//! Boltzmann state, discrete integration by parts, the discrete Poincare
//! inequality and solver determinism.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

use crate::assembly::{assemble, Problem};
use crate::field::ScalarField;
use crate::linsolve;
use crate::means::{stolarsky, weight_b, MeanSpec};
use crate::mesh::{build_interval_mesh, validate_mesh, AxisBox, IntervalLayout};
use crate::reference::{edge_flux_exact, pi_mean_quadrature};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

fn outcome(name: &'static str, result: Result<(), String>) -> CheckOutcome {
    match result {
        Ok(()) => CheckOutcome { name, passed: true, details: String::new() },
        Err(details) => CheckOutcome { name, passed: false, details },
    }
}

fn check_mean_identities(rng: &mut StdRng) -> Result<(), String> {
    for _ in 0..1000 {
        let x = 10f64.powf(rng.gen_range(-4.0..4.0));
        let y = 10f64.powf(rng.gen_range(-4.0..4.0));
        let spec = MeanSpec::General {
            alpha: rng.gen_range(-6.0..6.0),
            beta: rng.gen_range(-6.0..6.0),
        };
        let s = stolarsky(spec, x, y).map_err(|e| e.to_string())?;
        if s < x.min(y) || s > x.max(y) {
            return Err(format!("mean bound violated: S{spec}({x},{y}) = {s}"));
        }
        let sw = stolarsky(spec, y, x).unwrap();
        if (s - sw).abs() > 1e-14 * s {
            return Err(format!("symmetry violated for {spec} at ({x},{y})"));
        }
        if stolarsky(spec, x, x).unwrap() != x {
            return Err(format!("diagonal violated for {spec} at {x}"));
        }
        let v = rng.gen_range(-25.0..25.0);
        let lhs = weight_b(spec, -v);
        let rhs = v.exp() * weight_b(spec, v);
        if (lhs - rhs).abs() > 1e-12 * lhs.abs().max(rhs.abs()) {
            return Err(format!("detailed balance violated for {spec} at v = {v}"));
        }
    }
    Ok(())
}

fn check_edge_flux_oracle(rng: &mut StdRng) -> Result<(), String> {
    for _ in 0..100 {
        let kappa: f64 = rng.gen_range(0.1..10.0);
        let h: f64 = rng.gen_range(0.01..2.0);
        let q: f64 = rng.gen_range(-15.0..15.0) / h.max(0.1);
        let (u0, uh) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        // single edge with V = -q x: pi_0 = 1, pi_h = e^{q h}
        let (pi0, pih) = (1.0, (q * h).exp());
        let s = stolarsky(MeanSpec::ScharfetterGummel, pi0, pih).unwrap();
        let j_disc = -kappa / h * s * (uh / pih - u0 / pi0);
        let j_exact = edge_flux_exact(kappa, h, q, u0, uh);
        if (j_disc - j_exact).abs() > 1e-12 * j_exact.abs().max(1e-3) {
            return Err(format!("SG flux {j_disc} vs exact {j_exact}"));
        }
    }
    for _ in 0..20 {
        let c0 = rng.gen_range(-2.0..2.0);
        let c1 = rng.gen_range(-4.0..4.0);
        let h = rng.gen_range(0.1..1.5);
        let got = pi_mean_quadrature(|x| c0 + c1 * x, h, 64);
        let (v0, vh) = (c0, c0 + c1 * h);
        let expected = if (vh - v0).abs() < 1e-12 {
            (-v0).exp()
        } else {
            (vh - v0) / (vh.exp() - v0.exp())
        };
        if (got - expected).abs() > 1e-10 * expected.abs() {
            return Err(format!("pi_mean {got} vs affine closed form {expected}"));
        }
    }
    Ok(())
}

fn check_stationarity() -> Result<(), String> {
    let mesh = Arc::new(
        build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(65))
            .map_err(|e| e.to_string())?,
    );
    let problem = Problem {
        domain: AxisBox::interval(0.0, 1.0),
        potential: ScalarField::parse("2*sin(2*pi*x)").unwrap(),
        source: ScalarField::Constant(0.0),
        diffusion: ScalarField::Constant(1.0),
        dirichlet: Some(ScalarField::func(|p| {
            (-2.0 * (2.0 * std::f64::consts::PI * p[0]).sin()).exp()
        })),
    };
    for mean in MeanSpec::named() {
        let sys = assemble(&problem, mesh.clone(), mean).map_err(|e| e.to_string())?;
        let (u_rel, _) = sys.solve(1e-13, 1000).map_err(|e| e.to_string())?;
        let u = sys.to_density(&u_rel);
        for (ui, pi) in u.values.iter().zip(&sys.pi) {
            if ((ui - pi) / pi).abs() > 1e-11 {
                return Err(format!("{mean}: |u - pi|/pi = {:e}", ((ui - pi) / pi).abs()));
            }
        }
    }
    Ok(())
}

fn check_integration_by_parts(rng: &mut StdRng) -> Result<(), String> {
    for _ in 0..50 {
        let n = rng.gen_range(4..30);
        let mut nodes: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..0.98)).collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-4);
        let mesh = build_interval_mesh(0.0, 1.0, IntervalLayout::Nodes(nodes))
            .map_err(|e| e.to_string())?;
        let mut u: Vec<f64> = (0..mesh.n_points()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for p in 0..mesh.n_points() {
            if mesh.is_dirichlet_point(p) {
                u[p] = 0.0;
            }
        }
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        let mut jumps = 0.0;
        for f in &mesh.interfaces {
            let (p, q) = f.points;
            let d = u[q] - u[p];
            lhs += d * u[p] + (u[p] - u[q]) * u[q];
            rhs -= d * d;
            jumps += f.area * d * d;
        }
        if (lhs - rhs).abs() > 1e-12 * rhs.abs().max(1e-12) {
            return Err(format!("integration by parts: {lhs} vs {rhs}"));
        }
        // discrete Poincare with the explicit constant
        let l2: f64 = mesh.cells.iter().map(|c| c.volume * u[c.index] * u[c.index]).sum();
        let (h_inf, h_sup) = mesh.point_distance_extremes();
        let bound = mesh.domain.diameter().powi(2) * (h_sup / h_inf) * jumps;
        if l2 > 0.0 && l2 >= bound {
            return Err(format!("Poincare inequality: {l2} >= {bound}"));
        }
    }
    Ok(())
}

fn check_solver_determinism() -> Result<(), String> {
    let mesh = Arc::new(
        build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(65))
            .map_err(|e| e.to_string())?,
    );
    let problem = crate::presets::example1();
    let sys = assemble(&problem, mesh, MeanSpec::ScharfetterGummel).map_err(|e| e.to_string())?;
    let a = linsolve::solve(&sys.matrix, &sys.rhs, 1e-12, 1000).map_err(|e| e.to_string())?;
    let b = linsolve::solve(&sys.matrix, &sys.rhs, 1e-12, 1000).map_err(|e| e.to_string())?;
    for (x, y) in a.solution.iter().zip(&b.solution) {
        if x.to_bits() != y.to_bits() {
            return Err("repeated solve differs bitwise".into());
        }
    }
    Ok(())
}

fn check_mesh_validation() -> Result<(), String> {
    for n in [33usize, 257] {
        let mesh = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(n))
            .map_err(|e| e.to_string())?;
        let v = validate_mesh(&mesh);
        if !v.is_empty() {
            return Err(format!("mesh with {n} nodes: {v:?}"));
        }
    }
    Ok(())
}

/// Run the embedded property suite with a fixed seed.
pub fn run_property_suite(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(seed);
    vec![
        outcome("stolarsky-identities", check_mean_identities(&mut rng)),
        outcome("edge-flux-oracle", check_edge_flux_oracle(&mut rng)),
        outcome("stationarity", check_stationarity()),
        outcome("integration-by-parts-and-poincare", check_integration_by_parts(&mut rng)),
        outcome("solver-determinism", check_solver_determinism()),
        outcome("mesh-validation", check_mesh_validation()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_embedded_suite_passes() {
        for c in run_property_suite(0) {
            assert!(c.passed, "{}: {}", c.name, c.details);
        }
    }
}
