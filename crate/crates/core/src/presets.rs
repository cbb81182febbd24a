//! Built-in benchmark problems.
//!
//! Both run on the unit interval with kappa = 1, source f(x) = x(1 - x) and
//! Dirichlet values u(0) = 0, u(1) = 1:
//!
//! - `example1`: the oscillating potential V(x) = 2 sin(2 pi x) (moderate
//!   gradients; the optimal interface mean is a non-obvious member of the
//!   family);
//! - `example2`: the steep quadratic potential V(x) = 5 (x + 1) x (strong
//!   drift; the Scharfetter-Gummel mean dominates).
//!
//! The reference grid default of 136474 nodes puts the oracle error many
//! orders below the coarsest scheme error.

use crate::assembly::Problem;
use crate::field::ScalarField;
use crate::mesh::AxisBox;

/// Default node count of the shooting reference grid.
pub const REFERENCE_GRID: usize = 136_474;

fn unit_interval_problem(potential: &str) -> Problem {
    Problem {
        domain: AxisBox::interval(0.0, 1.0),
        potential: ScalarField::parse(potential).expect("preset potential parses"),
        source: ScalarField::parse("x*(1-x)").expect("preset source parses"),
        diffusion: ScalarField::Constant(1.0),
        dirichlet: Some(ScalarField::func(|p| p[0])), // u(0) = 0, u(1) = 1
    }
}

/// Benchmark problem with the oscillating potential 2 sin(2 pi x).
pub fn example1() -> Problem {
    unit_interval_problem("2*sin(2*pi*x)")
}

/// Benchmark problem with the steep potential 5 (x + 1) x.
pub fn example2() -> Problem {
    unit_interval_problem("5*(x+1)*x")
}
