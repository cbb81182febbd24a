//! Discrete gradient-structure evaluators.
//!
//! The scheme with the geometric interface mean is the steepest descent of
//! the relative entropy
//!
//! ```text
//! E(u) = sum_i m_i (u_i log(u_i/pi_i) - u_i + 1)
//! ```
//!
//! under the cosh dissipation potential
//!
//! ```text
//! Psi*(u, xi) = sum_i sum_{j~i} kappa_ij m_ij h_ij sqrt(u_i u_j) C*(xi_i - xi_j) / h_ij^2 ,
//! C*(r) = 2 (cosh(r/2) - 1),
//! ```
//!
//! where the double sum counts every undirected edge twice. The kinetic
//! coefficient of the cosh structure factorizes as
//! a_ij = sqrt(u_i u_j / (pi_i pi_j)), and S_geometric(pi_i, pi_j) a_ij =
//! sqrt(u_i u_j) is the only combination independent of the potential.

use thiserror::Error;

use crate::mesh::Mesh;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GradientFlowError {
    #[error("non-positive entry in {what}: {value}")]
    NonPositive { what: &'static str, value: f64 },
}

fn check_positive(what: &'static str, values: &[f64]) -> Result<(), GradientFlowError> {
    for &v in values {
        if !(v > 0.0) {
            return Err(GradientFlowError::NonPositive { what, value: v });
        }
    }
    Ok(())
}

/// Relative entropy E(u) = sum_i m_i (u_i log(u_i/pi_i) - u_i + 1) over cells.
///
/// Vanishes exactly at u = pi = 1 and is convex in u.
pub fn energy(mesh: &Mesh, u: &[f64], pi: &[f64]) -> Result<f64, GradientFlowError> {
    assert!(u.len() >= mesh.n_cells() && pi.len() >= mesh.n_cells());
    check_positive("u", &u[..mesh.n_cells()])?;
    check_positive("pi", &pi[..mesh.n_cells()])?;
    Ok(mesh
        .cells
        .iter()
        .map(|c| {
            let (ui, pii) = (u[c.index], pi[c.index]);
            c.volume * (ui * (ui / pii).ln() - ui + 1.0)
        })
        .sum())
}

/// C*(r) = 2 (cosh(r/2) - 1), evaluated as 4 sinh^2(r/4) so small gaps do
/// not cancel.
pub fn cosh_potential(r: f64) -> f64 {
    let s = (0.25 * r).sinh();
    4.0 * s * s
}

/// The cosh dissipation potential; `kappa_edge` is indexed like the
/// interface list. Per the displayed double-sum convention each undirected
/// edge contributes twice. Non-negative; zero iff xi is edge-wise constant.
pub fn cosh_dissipation(
    mesh: &Mesh,
    kappa_edge: &[f64],
    u: &[f64],
    xi: &[f64],
) -> Result<f64, GradientFlowError> {
    assert_eq!(kappa_edge.len(), mesh.interfaces.len());
    assert!(u.len() >= mesh.n_cells() && xi.len() >= mesh.n_cells());
    check_positive("u", &u[..mesh.n_cells()])?;
    let mut total = 0.0;
    for (k, f) in mesh.interior_interfaces() {
        let (p, q) = f.points;
        let kinetic = (u[p] * u[q]).sqrt();
        let c = cosh_potential(xi[p] - xi[q]);
        // 2x: the (i,j) and (j,i) terms of the double sum
        total += 2.0 * kappa_edge[k] * f.area * f.node_distance * kinetic * c
            / (f.node_distance * f.node_distance);
    }
    Ok(total)
}

/// Kinetic coefficient of the cosh structure, a_ij = sqrt(u_i u_j / (pi_i pi_j)).
pub fn kinetic_coefficient(u_i: f64, u_j: f64, pi_i: f64, pi_j: f64) -> Result<f64, GradientFlowError> {
    for (what, v) in [("u", u_i), ("u", u_j), ("pi", pi_i), ("pi", pi_j)] {
        if !(v > 0.0) {
            return Err(GradientFlowError::NonPositive { what, value: v });
        }
    }
    Ok(((u_i / pi_i) * (u_j / pi_j)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble, DiscreteField, Problem};
    use crate::field::ScalarField;
    use crate::means::{stolarsky, MeanSpec};
    use crate::mesh::{build_interval_mesh, AxisBox, IntervalLayout};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn unit_mesh(n: usize) -> Mesh {
        build_interval_mesh(0.0, 1.0, IntervalLayout::UniformCells(n)).unwrap()
    }

    #[test]
    fn energy_examples() {
        let mesh = unit_mesh(4);
        let n = mesh.n_cells();
        // u = pi = 1 is the zero of the entropy
        assert_eq!(energy(&mesh, &vec![1.0; n], &vec![1.0; n]).unwrap(), 0.0);
        // u = 2 against pi = 1 on a unit-volume mesh gives 2 log 2 - 1
        let got = energy(&mesh, &vec![2.0; n], &vec![1.0; n]).unwrap();
        assert!((got - (2.0 * 2.0f64.ln() - 1.0)).abs() < 1e-14);
        // u = pi generally leaves sum m_i (1 - pi_i)
        let pi: Vec<f64> = (0..n).map(|k| 0.5 + 0.3 * k as f64).collect();
        let got = energy(&mesh, &pi, &pi).unwrap();
        let expected: f64 = mesh.cells.iter().map(|c| c.volume * (1.0 - pi[c.index])).sum();
        assert!((got - expected).abs() < 1e-14);
        assert!(energy(&mesh, &vec![-1.0; n], &vec![1.0; n]).is_err());
    }

    #[test]
    fn dissipation_examples() {
        // single interior edge with m = h = 1: domain [0, 2], two unit cells
        let mesh = build_interval_mesh(0.0, 2.0, IntervalLayout::UniformCells(2)).unwrap();
        let kappa = vec![1.0; mesh.interfaces.len()];
        // constant xi dissipates nothing
        let z = cosh_dissipation(&mesh, &kappa, &[1.0, 1.0], &[0.7, 0.7]).unwrap();
        assert_eq!(z, 0.0);
        // gap r = 2: C*(2) = 2(cosh 1 - 1), doubled by the sum convention
        let got = cosh_dissipation(&mesh, &kappa, &[1.0, 1.0], &[2.0, 0.0]).unwrap();
        let expected = 2.0 * cosh_potential(2.0);
        assert!((got - expected).abs() < 1e-14);
        assert!((cosh_potential(2.0) - 2.0 * (1f64.cosh() - 1.0)).abs() < 1e-15);
        // small gaps: the doubled edge contributes C*(r) ~ r^2/2 in total
        let r = 1e-4;
        let got = cosh_dissipation(&mesh, &kappa, &[1.0, 1.0], &[r, 0.0]).unwrap();
        assert!((got - 0.5 * r * r).abs() < 1e-12 * r);
    }

    #[test]
    fn kinetic_coefficient_examples() {
        assert_eq!(kinetic_coefficient(1.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(kinetic_coefficient(4.0, 1.0, 1.0, 4.0).unwrap(), 1.0);
        assert_eq!(kinetic_coefficient(2.0, 2.0, 1.0, 1.0).unwrap(), 2.0);
        assert!(kinetic_coefficient(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn geometric_mean_factorizes_the_kinetic_coefficient() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..10_000 {
            let u_i = 10f64.powf(rng.gen_range(-3.0..3.0));
            let u_j = 10f64.powf(rng.gen_range(-3.0..3.0));
            let pi_i = 10f64.powf(rng.gen_range(-3.0..3.0));
            let pi_j = 10f64.powf(rng.gen_range(-3.0..3.0));
            let s = stolarsky(MeanSpec::Geometric, pi_i, pi_j).unwrap();
            let a = kinetic_coefficient(u_i, u_j, pi_i, pi_j).unwrap();
            let expected = (u_i * u_j).sqrt();
            assert!(
                (s * a - expected).abs() <= 1e-12 * expected,
                "{} vs {expected}",
                s * a
            );
        }
    }

    #[test]
    fn other_means_do_not_factorize() {
        // at fixed u the product S a must move with pi for the arithmetic mean
        let (u_i, u_j) = (2.0, 0.5);
        let prod = |pi_i: f64, pi_j: f64| {
            stolarsky(MeanSpec::Arithmetic, pi_i, pi_j).unwrap()
                * kinetic_coefficient(u_i, u_j, pi_i, pi_j).unwrap()
        };
        let variation = (prod(1.0, 1.0) - prod(0.25, 4.0)).abs();
        assert!(variation > 1e-3, "variation {variation}");
    }

    #[test]
    fn energy_is_convex() {
        let mesh = unit_mesh(6);
        let n = mesh.n_cells();
        let mut rng = StdRng::seed_from_u64(32);
        for _ in 0..200 {
            let pi: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
            let lambda: f64 = rng.gen_range(0.0..1.0);
            let mix: Vec<f64> = u
                .iter()
                .zip(&v)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect();
            let e_mix = energy(&mesh, &mix, &pi).unwrap();
            let e_sum = lambda * energy(&mesh, &u, &pi).unwrap()
                + (1.0 - lambda) * energy(&mesh, &v, &pi).unwrap();
            assert!(e_mix <= e_sum + 1e-12);
        }
    }

    /// The derivative of the cosh dissipation at xi = -DE(u) reproduces the
    /// operator action of the geometric-mean scheme.
    #[test]
    fn steepest_descent_matches_the_assembled_operator() {
        let mesh = Arc::new(
            build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(5)).unwrap(),
        );
        let problem = Problem {
            domain: AxisBox::interval(0.0, 1.0),
            potential: ScalarField::parse("sin(2*pi*x)").unwrap(),
            source: ScalarField::Constant(0.0),
            diffusion: ScalarField::parse("1+x/2").unwrap(),
            dirichlet: Some(ScalarField::Constant(1.0)),
        };
        let sys = assemble(&problem, mesh.clone(), MeanSpec::Geometric).unwrap();
        // u near the Boltzmann state
        let u: Vec<f64> = sys
            .pi
            .iter()
            .enumerate()
            .map(|(k, pi)| pi * (1.0 + 1e-2 * ((k as f64) - 2.0)))
            .collect();
        let xi: Vec<f64> = u
            .iter()
            .zip(&sys.pi)
            .map(|(ui, pii)| -(ui / pii).ln())
            .collect();
        let operator = sys.apply_operator_u_form(&DiscreteField::new(u.clone()));
        let eps = 1e-6;
        for (row, &p) in sys.point_of_unknown.iter().enumerate() {
            let mut xp = xi.clone();
            xp[p] += eps;
            let mut xm = xi.clone();
            xm[p] -= eps;
            let dplus = cosh_dissipation(&mesh, &sys.kappa_edge, &u, &xp).unwrap();
            let dminus = cosh_dissipation(&mesh, &sys.kappa_edge, &u, &xm).unwrap();
            let fd = (dplus - dminus) / (2.0 * eps);
            // d/dxi_i Psi* at xi = -DE equals minus the operator action
            assert!(
                (fd + operator[row]).abs() <= 1e-6 * operator[row].abs().max(1.0),
                "row {row}: {fd} vs {}",
                -operator[row]
            );
        }
    }
}
