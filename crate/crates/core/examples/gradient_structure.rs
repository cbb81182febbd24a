//! The discrete gradient structure: relative entropy, cosh dissipation and
//! the kinetic coefficient. With the geometric interface mean the product
//! S(pi_i, pi_j) a_ij = sqrt(u_i u_j) is independent of the potential, and
//! the derivative of the dissipation at the entropy gradient reproduces the
//! assembled operator.
//!
//! ```bash
//! cargo run --example gradient_structure
//! ```

use std::sync::Arc;

use stolarsky_fv::assembly::{assemble, DiscreteField, Problem};
use stolarsky_fv::field::ScalarField;
use stolarsky_fv::gradientflow::{cosh_dissipation, energy, kinetic_coefficient};
use stolarsky_fv::means::{stolarsky, MeanSpec};
use stolarsky_fv::mesh::{build_interval_mesh, AxisBox, IntervalLayout};

fn main() {
    println!("factorization S_geo(pi_i, pi_j) a_ij = sqrt(u_i u_j):");
    for (u_i, u_j, pi_i, pi_j) in [(2.0, 0.5, 1.0, 1.0), (2.0, 0.5, 0.1, 7.0), (4.0, 9.0, 0.3, 0.02)] {
        let s = stolarsky(MeanSpec::Geometric, pi_i, pi_j).unwrap();
        let a = kinetic_coefficient(u_i, u_j, pi_i, pi_j).unwrap();
        println!(
            "  pi = ({pi_i}, {pi_j}): S*a = {:.12}, sqrt(u_i u_j) = {:.12}",
            s * a,
            (u_i * u_j).sqrt()
        );
    }
    println!("(the arithmetic mean does not factorize:)");
    for (pi_i, pi_j) in [(1.0, 1.0), (0.25, 4.0)] {
        let s = stolarsky(MeanSpec::Arithmetic, pi_i, pi_j).unwrap();
        let a = kinetic_coefficient(2.0, 0.5, pi_i, pi_j).unwrap();
        println!("  pi = ({pi_i}, {pi_j}): S*a = {:.12}", s * a);
    }

    let mesh = Arc::new(build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(9)).unwrap());
    let problem = Problem {
        domain: AxisBox::interval(0.0, 1.0),
        potential: ScalarField::parse("sin(2*pi*x)").unwrap(),
        source: ScalarField::Constant(0.0),
        diffusion: ScalarField::Constant(1.0),
        dirichlet: Some(ScalarField::Constant(1.0)),
    };
    let sys = assemble(&problem, mesh.clone(), MeanSpec::Geometric).unwrap();

    // perturb the Boltzmann state and watch entropy and dissipation
    let u: Vec<f64> = sys
        .pi
        .iter()
        .enumerate()
        .map(|(k, pi)| pi * (1.0 + 0.05 * (k as f64 * 1.7).sin()))
        .collect();
    // the entropy floor is E(pi) = sum m_i (1 - pi_i), hit exactly at u = pi
    let e = energy(&mesh, &u, &sys.pi).unwrap();
    let floor: f64 = mesh.cells.iter().map(|c| c.volume * (1.0 - sys.pi[c.index])).sum();
    println!("\nentropy of the perturbed state: {e:.6e}");
    println!("entropy of the Boltzmann state: {:.6e} (floor {floor:.6e})", {
        let pi = sys.pi.clone();
        energy(&mesh, &pi, &sys.pi).unwrap()
    });

    let xi: Vec<f64> = u.iter().zip(&sys.pi).map(|(u, pi)| -(u / pi).ln()).collect();
    let psi = cosh_dissipation(&mesh, &sys.kappa_edge, &u, &xi).unwrap();
    println!("cosh dissipation at xi = -DE(u):         {psi:.6e}");

    // finite differences of the dissipation reproduce the operator action
    let operator = sys.apply_operator_u_form(&DiscreteField::new(u.clone()));
    let eps = 1e-6;
    println!("\nd/dxi Psi* vs -(operator action), interior nodes:");
    for (row, &p) in sys.point_of_unknown.iter().enumerate() {
        let mut xp = xi.clone();
        xp[p] += eps;
        let mut xm = xi.clone();
        xm[p] -= eps;
        let fd = (cosh_dissipation(&mesh, &sys.kappa_edge, &u, &xp).unwrap()
            - cosh_dissipation(&mesh, &sys.kappa_edge, &u, &xm).unwrap())
            / (2.0 * eps);
        println!("  node {p}: {fd:>14.8e} vs {:>14.8e}", -operator[row]);
    }
}
