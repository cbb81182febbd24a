//! Assembly of the discrete drift-diffusion system.
//!
//! In the relative density U = u/pi (pi = e^-V the Boltzmann state) the
//! scheme reads, for every interior node i,
//!
//! ```text
//! sum_{j ~ i} (m_ij / h_ij) kappa_ij S(pi_i, pi_j) (U_i - U_j) = f_i ,
//! ```
//!
//! with f_i the cell integral of the source, kappa_ij the distance-weighted
//! harmonic mean of the cell-averaged diffusion coefficient, and S any
//! Stolarsky mean. The matrix is symmetric by construction and an M-matrix:
//! positive diagonal, non-positive off-diagonal entries, zero row sums away
//! from the Dirichlet elimination.
//!
//! Dirichlet data enter in two equivalent ways depending on the mesh family:
//! through boundary interfaces (cell-centered meshes, edge length replaced
//! by the node-boundary distance) or through boundary nodes that own cells
//! but no unknowns (vertex-centered interval meshes).

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, ScalarField};
use crate::linsolve::{self, SolveError, SolveReport, SparseSymMatrix};
use crate::means::{self, MeanError, MeanSpec};
use crate::mesh::{AxisBox, InterfaceSide, Mesh};
use crate::quadrature::integrate_box;

/// Continuous problem data on an axis-aligned box.
#[derive(Clone, Debug)]
pub struct Problem {
    pub domain: AxisBox,
    /// Potential V.
    pub potential: ScalarField,
    /// Source term f.
    pub source: ScalarField,
    /// Diffusion coefficient kappa, strictly positive.
    pub diffusion: ScalarField,
    /// Prescribed density u on the domain boundary.
    pub dirichlet: Option<ScalarField>,
}

impl Problem {
    /// The Boltzmann weight e^-V at a point.
    pub fn boltzmann(&self, point: &[f64]) -> Result<f64, FieldError> {
        Ok((-self.potential.eval(point)?).exp())
    }
}

/// Values attached to every mesh point (cells first, then boundary points).
#[derive(Clone, Debug)]
pub struct DiscreteField {
    pub values: Vec<f64>,
}

impl DiscreteField {
    pub fn new(values: Vec<f64>) -> Self {
        DiscreteField { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("the mesh carries Dirichlet points but the problem has no boundary data")]
    MissingDirichlet,
    #[error("evaluating {what}: {source}")]
    Field {
        what: &'static str,
        #[source]
        source: FieldError,
    },
    #[error("invalid problem data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Mean(#[from] MeanError),
}

fn eval_field(field: &ScalarField, what: &'static str, point: &[f64]) -> Result<f64, AssemblyError> {
    field
        .eval(point)
        .map_err(|source| AssemblyError::Field { what, source })
}

impl AssemblyError {
    /// Adapter for `map_err` at field evaluation sites.
    pub fn from_field(what: &'static str) -> impl Fn(FieldError) -> AssemblyError {
        move |source| AssemblyError::Field { what, source }
    }
}

/// The interface diffusion coefficient
/// kappa_ij = h_ij k_i k_j / (k_i d_i + k_j d_j)
/// built from the cell averages k_i of kappa; equals kappa for constant
/// coefficients and reduces to the plain harmonic mean for centered nodes.
pub fn kappa_edge_coefficient(kbar_i: f64, kbar_j: f64, d_i: f64, d_j: f64, h: f64) -> f64 {
    h * kbar_i * kbar_j / (kbar_i * d_i + kbar_j * d_j)
}

/// Cell average of the diffusion coefficient by the 2-point Gauss rule.
pub fn kappa_cell_average(problem: &Problem, mesh: &Mesh, cell: usize) -> Result<f64, AssemblyError> {
    let c = &mesh.cells[cell];
    let integral = integrate_box(&c.lo, &c.hi, mesh.dim, |p| {
        eval_field(&problem.diffusion, "kappa", p)
    })?;
    let avg = integral / c.volume;
    if !(avg > 0.0) {
        return Err(AssemblyError::Invalid(format!(
            "cell-averaged kappa is not positive on cell {cell}: {avg}"
        )));
    }
    Ok(avg)
}

/// The coefficient kappa_ij of a single interface, averages computed on the fly.
pub fn kappa_edge(problem: &Problem, mesh: &Mesh, interface: usize) -> Result<f64, AssemblyError> {
    let f = &mesh.interfaces[interface];
    let ki = kappa_cell_average(problem, mesh, f.left)?;
    match f.right {
        InterfaceSide::Cell(j) => {
            let kj = kappa_cell_average(problem, mesh, j)?;
            let (di, dj) = f.sub_distances;
            Ok(kappa_edge_coefficient(ki, kj, di, dj, f.node_distance))
        }
        InterfaceSide::Boundary(_) => Ok(ki),
    }
}

/// The assembled system in the relative density U, Dirichlet data eliminated.
#[derive(Clone, Debug)]
pub struct DiscreteSystem {
    pub mesh: Arc<Mesh>,
    pub mean: MeanSpec,
    /// V at every point.
    pub potential: Vec<f64>,
    /// pi_i = e^-V(x_i) at every point.
    pub pi: Vec<f64>,
    /// kappa_ij per interface.
    pub kappa_edge: Vec<f64>,
    /// S(pi_i, pi_j) per interface.
    pub s_edge: Vec<f64>,
    /// Symmetric operator over the unknowns (interior nodes), acting on U.
    pub matrix: SparseSymMatrix,
    /// f_i plus the eliminated Dirichlet contributions.
    pub rhs: Vec<f64>,
    /// Prescribed U at Dirichlet points, indexed by point; NaN elsewhere.
    pub dirichlet_u: Vec<f64>,
    pub unknown_of_point: Vec<Option<usize>>,
    pub point_of_unknown: Vec<usize>,
}

impl DiscreteSystem {
    pub fn n_unknowns(&self) -> usize {
        self.point_of_unknown.len()
    }

    /// (m_ij / h_ij) kappa_ij S_ij of an interface.
    pub fn edge_conductance(&self, interface: usize) -> f64 {
        let f = &self.mesh.interfaces[interface];
        f.area / f.node_distance * self.kappa_edge[interface] * self.s_edge[interface]
    }

    /// Solve for U and return the full field over all points, Dirichlet
    /// values filled in.
    pub fn solve(&self, tol: f64, max_iter: usize) -> Result<(DiscreteField, SolveReport), SolveError> {
        let report = linsolve::solve(&self.matrix, &self.rhs, tol, max_iter)?;
        Ok((self.full_field(&report.solution), report))
    }

    /// Spread unknown values into a field over all points.
    pub fn full_field(&self, unknowns: &[f64]) -> DiscreteField {
        assert_eq!(unknowns.len(), self.n_unknowns());
        let values = (0..self.mesh.n_points())
            .map(|p| match self.unknown_of_point[p] {
                Some(k) => unknowns[k],
                None => self.dirichlet_u[p],
            })
            .collect();
        DiscreteField::new(values)
    }

    /// Map the relative density U back to the density u = U pi, pointwise.
    pub fn to_density(&self, u_rel: &DiscreteField) -> DiscreteField {
        assert_eq!(u_rel.len(), self.pi.len());
        DiscreteField::new(
            u_rel
                .values
                .iter()
                .zip(&self.pi)
                .map(|(u, pi)| u * pi)
                .collect(),
        )
    }

    /// Residual of the scheme written directly in the density u with the
    /// weight function B: for each interior node i,
    /// -(sum_j (m_ij/h_ij) kappa_ij (B(V_i - V_j) u_j - B(V_j - V_i) u_i)).
    ///
    /// Algebraically identical to the U-form row action.
    pub fn apply_operator_u_form(&self, u: &DiscreteField) -> Vec<f64> {
        assert_eq!(u.len(), self.mesh.n_points());
        let mut out = vec![0.0; self.n_unknowns()];
        for (row, &p) in self.point_of_unknown.iter().enumerate() {
            let mut acc = 0.0;
            for &k in &self.mesh.cell_interfaces[p] {
                let f = &self.mesh.interfaces[k];
                let (a, b) = f.points;
                let q = if a == p { b } else { a };
                let w = f.area / f.node_distance * self.kappa_edge[k];
                let b_ij = means::weight_b(self.mean, self.potential[p] - self.potential[q]);
                let b_ji = means::weight_b(self.mean, self.potential[q] - self.potential[p]);
                acc += w * (b_ij * u.values[q] - b_ji * u.values[p]);
            }
            out[row] = -acc;
        }
        out
    }
}

/// Assemble the discrete system for a problem, mesh and interface mean.
pub fn assemble(
    problem: &Problem,
    mesh: Arc<Mesh>,
    mean: MeanSpec,
) -> Result<DiscreteSystem, AssemblyError> {
    let n_points = mesh.n_points();
    let dim = mesh.dim;

    let mut potential = Vec::with_capacity(n_points);
    for p in 0..n_points {
        let x = mesh.point(p);
        potential.push(eval_field(&problem.potential, "V", &x[..dim])?);
    }
    let pi: Vec<f64> = potential.iter().map(|v| (-v).exp()).collect();
    if pi.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
        return Err(AssemblyError::Invalid(
            "potential produces a degenerate Boltzmann weight".into(),
        ));
    }

    let kbar: Vec<f64> = (0..mesh.n_cells())
        .map(|c| kappa_cell_average(problem, &mesh, c))
        .collect::<Result<_, _>>()?;

    let mut kappa_edge = Vec::with_capacity(mesh.interfaces.len());
    let mut s_edge = Vec::with_capacity(mesh.interfaces.len());
    for f in &mesh.interfaces {
        let k = match f.right {
            InterfaceSide::Cell(j) => {
                let (di, dj) = f.sub_distances;
                kappa_edge_coefficient(kbar[f.left], kbar[j], di, dj, f.node_distance)
            }
            InterfaceSide::Boundary(_) => kbar[f.left],
        };
        kappa_edge.push(k);
        let (p, q) = f.points;
        // S_ij = pi_j B(V_i - V_j); the weight form never differences e^-V
        let s = pi[q] * means::weight_b(mean, potential[p] - potential[q]);
        s_edge.push(s.clamp(pi[p].min(pi[q]), pi[p].max(pi[q])));
    }

    // unknowns = points that are not Dirichlet carriers
    let mut unknown_of_point = vec![None; n_points];
    let mut point_of_unknown = Vec::new();
    for p in 0..n_points {
        if !mesh.is_dirichlet_point(p) {
            unknown_of_point[p] = Some(point_of_unknown.len());
            point_of_unknown.push(p);
        }
    }

    let mut dirichlet_u = vec![f64::NAN; n_points];
    let has_dirichlet = (0..n_points).any(|p| mesh.is_dirichlet_point(p));
    if has_dirichlet {
        let g = problem
            .dirichlet
            .as_ref()
            .ok_or(AssemblyError::MissingDirichlet)?;
        for p in 0..n_points {
            if mesh.is_dirichlet_point(p) {
                let x = mesh.point(p);
                let u = eval_field(g, "dirichlet data", &x[..dim])?;
                dirichlet_u[p] = u / pi[p];
            }
        }
    }

    // f_i = cell integral of the source, for unknown rows
    let mut rhs = vec![0.0; point_of_unknown.len()];
    for (row, &p) in point_of_unknown.iter().enumerate() {
        let c = &mesh.cells[p];
        rhs[row] = integrate_box(&c.lo, &c.hi, dim, |x| eval_field(&problem.source, "f", x))?;
    }

    let mut diag = vec![0.0; point_of_unknown.len()];
    let mut edges = Vec::new();
    for (k, f) in mesh.interfaces.iter().enumerate() {
        let a = f.area / f.node_distance * kappa_edge[k] * s_edge[k];
        let (p, q) = f.points;
        match (unknown_of_point[p], unknown_of_point[q]) {
            (Some(rp), Some(rq)) => {
                diag[rp] += a;
                diag[rq] += a;
                edges.push((rp, rq, -a));
            }
            (Some(rp), None) => {
                diag[rp] += a;
                rhs[rp] += a * dirichlet_u[q];
            }
            (None, Some(rq)) => {
                diag[rq] += a;
                rhs[rq] += a * dirichlet_u[p];
            }
            (None, None) => {}
        }
    }

    let matrix = SparseSymMatrix::from_edges(diag, &edges);
    Ok(DiscreteSystem {
        mesh,
        mean,
        potential,
        pi,
        kappa_edge,
        s_edge,
        matrix,
        rhs,
        dirichlet_u,
        unknown_of_point,
        point_of_unknown,
    })
}
