//! Discrete norms, fluxes, error reports, convergence orders and the
//! computable consistency estimator.
//!
//! The discrete norms are the natural quadratic forms of the scheme:
//!
//! ```text
//! |U|^2_{L2(P)}    = sum_i m_i U_i^2         |U|^2_{L2_pi(P)} = sum_i m_i U_i^2 / pi_i
//! |J|^2_{L2(E)}    = sum_ij m_ij h_ij J_ij^2  |J|^2_{L2_S(E)}  = sum_ij m_ij h_ij J_ij^2 / S_ij
//! ```
//!
//! Point norms run over cells, edge norms over interior interfaces. The
//! energy norm weights the squared edge differences with
//! (m_ij/h_ij) kappa_ij S_ij; it is exposed with a square root so that it is
//! homogeneous of degree one.

use thiserror::Error;

use crate::assembly::{
    kappa_cell_average, kappa_edge_coefficient, AssemblyError, DiscreteField, DiscreteSystem,
    Problem,
};
use crate::means::{self, MeanSpec};
use crate::mesh::{InterfaceSide, Mesh};
use crate::quadrature::gauss2_nodes;
use crate::reference::ReferenceSolution;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("the two systems do not share a mesh")]
    MeshMismatch,
    #[error("need at least 3 rows with distinct mesh sizes, got {0}")]
    NotEnoughRows(usize),
    #[error("degenerate refinement levels (equal h or vanishing errors)")]
    DegenerateLevels,
    #[error("point {0} lies outside the reference grid")]
    OutsideReference(f64),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

fn expect_len(what: &'static str, got: usize, expected: usize) -> Result<(), AnalysisError> {
    if got == expected {
        Ok(())
    } else {
        Err(AnalysisError::LengthMismatch { what, expected, got })
    }
}

/// |v|_{L2(P)} over cells; `v` may be indexed by cells or by all points.
pub fn norm_l2_p(mesh: &Mesh, v: &[f64]) -> Result<f64, AnalysisError> {
    if v.len() != mesh.n_cells() {
        expect_len("point vector", v.len(), mesh.n_points())?;
    }
    Ok(mesh
        .cells
        .iter()
        .map(|c| c.volume * v[c.index] * v[c.index])
        .sum::<f64>()
        .sqrt())
}

/// The pi-weighted point norm |v|_{L2_pi(P)}.
pub fn norm_l2pi_p(mesh: &Mesh, pi: &[f64], v: &[f64]) -> Result<f64, AnalysisError> {
    if v.len() != mesh.n_cells() {
        expect_len("point vector", v.len(), mesh.n_points())?;
    }
    if pi.len() < mesh.n_cells() {
        expect_len("pi vector", pi.len(), mesh.n_points())?;
    }
    Ok(mesh
        .cells
        .iter()
        .map(|c| c.volume * v[c.index] * v[c.index] / pi[c.index])
        .sum::<f64>()
        .sqrt())
}

/// |w|_{L2(E)} over interior interfaces; `w` is indexed by the interface list.
pub fn norm_l2_e(mesh: &Mesh, w: &[f64]) -> Result<f64, AnalysisError> {
    expect_len("edge vector", w.len(), mesh.interfaces.len())?;
    Ok(mesh
        .interior_interfaces()
        .map(|(k, f)| f.area * f.node_distance * w[k] * w[k])
        .sum::<f64>()
        .sqrt())
}

/// The S-weighted edge norm |w|_{L2_S(E)} over interior interfaces.
pub fn norm_l2s_e(mesh: &Mesh, s: &[f64], w: &[f64]) -> Result<f64, AnalysisError> {
    expect_len("edge vector", w.len(), mesh.interfaces.len())?;
    expect_len("weight vector", s.len(), mesh.interfaces.len())?;
    Ok(mesh
        .interior_interfaces()
        .map(|(k, f)| f.area * f.node_distance * w[k] * w[k] / s[k])
        .sum::<f64>()
        .sqrt())
}

/// Discrete fluxes J_ij = -(kappa_ij / h_ij) S_ij (U_j - U_i), for every
/// interface, oriented from the left cell to the right side. Antisymmetric
/// under orientation flip.
pub fn discrete_flux(system: &DiscreteSystem, u_rel: &DiscreteField) -> Vec<f64> {
    let mesh = &system.mesh;
    assert_eq!(u_rel.len(), mesh.n_points());
    mesh.interfaces
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let (p, q) = f.points;
            -system.kappa_edge[k] / f.node_distance
                * system.s_edge[k]
                * (u_rel.values[q] - u_rel.values[p])
        })
        .collect()
}

/// The reference flux evaluated at every interface point of a 1D mesh.
pub fn reference_flux_on_edges(
    mesh: &Mesh,
    reference: &ReferenceSolution,
) -> Result<Vec<f64>, AnalysisError> {
    let (lo, hi) = (reference.grid[0], *reference.grid.last().unwrap());
    mesh.interfaces
        .iter()
        .map(|f| {
            let x = f.midpoint[0];
            if x < lo - 1e-12 || x > hi + 1e-12 {
                Err(AnalysisError::OutsideReference(x))
            } else {
                Ok(reference.flux_at(x))
            }
        })
        .collect()
}

/// Discrete errors of one solve against the reference.
#[derive(Clone, Debug)]
pub struct ErrorReport {
    /// |u - u_ref|_{L2(P)} over interior nodes.
    pub err_u_l2: f64,
    /// pi-weighted variant.
    pub err_u_l2pi: f64,
    /// |J^S U - J_ref|_{L2(E)} over interior interfaces.
    pub err_flux_l2: f64,
    /// S-weighted variant.
    pub err_flux_l2s: f64,
    /// Energy norm of the U-error: sqrt(sum (m/h) kappa S (dU)^2).
    pub err_ht: f64,
    /// Mesh diameter.
    pub h: f64,
    /// Cell count.
    pub n: usize,
    pub mean: MeanSpec,
}

/// Compare a discrete solution (in relative density form) against the
/// reference solution, in all norms at once.
pub fn error_report(
    system: &DiscreteSystem,
    u_rel: &DiscreteField,
    reference: &ReferenceSolution,
) -> Result<ErrorReport, AnalysisError> {
    let mesh = &system.mesh;
    let u = system.to_density(u_rel);

    // density error on the interior nodes
    let mut e_u2 = 0.0;
    let mut e_u2pi = 0.0;
    for &p in &system.point_of_unknown {
        let c = &mesh.cells[p];
        let diff = u.values[p] - reference.u_at(c.center[0]);
        e_u2 += c.volume * diff * diff;
        e_u2pi += c.volume * diff * diff / system.pi[p];
    }

    // flux error on interior interfaces
    let j_disc = discrete_flux(system, u_rel);
    let j_ref = reference_flux_on_edges(mesh, reference)?;
    let mut e_j2 = 0.0;
    let mut e_j2s = 0.0;
    let mut e_ht = 0.0;
    for (k, f) in mesh.interior_interfaces() {
        let d = j_disc[k] - j_ref[k];
        e_j2 += f.area * f.node_distance * d * d;
        e_j2s += f.area * f.node_distance * d * d / system.s_edge[k];
        let (p, q) = f.points;
        let ep = u_rel.values[p] - reference.u_at(mesh.point(p)[0]) / system.pi[p];
        let eq = u_rel.values[q] - reference.u_at(mesh.point(q)[0]) / system.pi[q];
        e_ht += system.edge_conductance(k) * (eq - ep) * (eq - ep);
    }

    Ok(ErrorReport {
        err_u_l2: e_u2.sqrt(),
        err_u_l2pi: e_u2pi.sqrt(),
        err_flux_l2: e_j2.sqrt(),
        err_flux_l2s: e_j2s.sqrt(),
        err_ht: e_ht.sqrt(),
        h: mesh.diameter,
        n: mesh.n_cells(),
        mean: system.mean,
    })
}

/// Least-squares slope of log(err) against log(h).
pub fn fit_eoc(rows: &[(f64, f64)]) -> Result<f64, AnalysisError> {
    if rows.len() < 3 {
        return Err(AnalysisError::NotEnoughRows(rows.len()));
    }
    let mut xs = Vec::with_capacity(rows.len());
    let mut ys = Vec::with_capacity(rows.len());
    for &(h, err) in rows {
        if !(h > 0.0) || !(err > 0.0) {
            return Err(AnalysisError::DegenerateLevels);
        }
        xs.push(h.ln());
        ys.push(err.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(AnalysisError::DegenerateLevels);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Error reports over a refinement ladder with fitted convergence orders.
#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub rows: Vec<ErrorReport>,
    pub eoc_u: f64,
    pub eoc_flux: f64,
}

impl ConvergenceTable {
    pub fn from_rows(mut rows: Vec<ErrorReport>) -> Result<Self, AnalysisError> {
        rows.sort_by(|a, b| b.h.partial_cmp(&a.h).unwrap());
        let eoc_u = fit_eoc(&rows.iter().map(|r| (r.h, r.err_u_l2)).collect::<Vec<_>>())?;
        let eoc_flux = fit_eoc(&rows.iter().map(|r| (r.h, r.err_flux_l2)).collect::<Vec<_>>())?;
        Ok(ConvergenceTable { rows, eoc_u, eoc_flux })
    }
}

/// Measured flux gap between two schemes and the corresponding a priori
/// bound.
#[derive(Clone, Copy, Debug)]
pub struct SchemeComparison {
    /// |J^S U - J^S~ U~|_{L2_S^(E)} in the hat-weighted edge norm.
    pub flux_gap: f64,
    /// Right-hand side of the comparison estimate, computed with the
    /// measured supremum factors; flux_gap^2 <= bound_rhs.
    pub bound_rhs: f64,
}

/// Compare the discrete fluxes of two schemes on the same mesh and problem.
pub fn compare_schemes(
    sys_a: &DiscreteSystem,
    sys_b: &DiscreteSystem,
    sol_a: &DiscreteField,
    sol_b: &DiscreteField,
    hat: MeanSpec,
) -> Result<SchemeComparison, AnalysisError> {
    if !std::sync::Arc::ptr_eq(&sys_a.mesh, &sys_b.mesh) {
        return Err(AnalysisError::MeshMismatch);
    }
    let mesh = &sys_a.mesh;
    let j_a = discrete_flux(sys_a, sol_a);
    let j_b = discrete_flux(sys_b, sol_b);

    let mut gap2 = 0.0;
    let mut norm_a2 = 0.0;
    let mut norm_b2 = 0.0;
    let mut sup_a: f64 = 0.0;
    let mut sup_b: f64 = 0.0;
    let mut kappa_max = f64::NEG_INFINITY;
    let mut kappa_min = f64::INFINITY;
    for (k, f) in mesh.interior_interfaces() {
        let (p, q) = f.points;
        let s_hat = (sys_a.pi[q] * means::weight_b(hat, sys_a.potential[p] - sys_a.potential[q]))
            .clamp(sys_a.pi[p].min(sys_a.pi[q]), sys_a.pi[p].max(sys_a.pi[q]));
        let mh = f.area * f.node_distance;
        let d = j_a[k] - j_b[k];
        gap2 += mh * d * d / s_hat;
        norm_a2 += mh * j_a[k] * j_a[k] / sys_a.s_edge[k];
        norm_b2 += mh * j_b[k] * j_b[k] / sys_b.s_edge[k];
        let da = s_hat - sys_a.s_edge[k];
        let db = s_hat - sys_b.s_edge[k];
        sup_a = sup_a.max(da * da / (s_hat * sys_a.s_edge[k]));
        sup_b = sup_b.max(db * db / (s_hat * sys_b.s_edge[k]));
        kappa_max = kappa_max.max(sys_a.kappa_edge[k]);
        kappa_min = kappa_min.min(sys_a.kappa_edge[k]);
    }
    let bound_rhs = 2.0 * kappa_max / kappa_min * (sup_a * norm_a2 + sup_b * norm_b2);
    Ok(SchemeComparison {
        flux_gap: gap2.sqrt(),
        bound_rhs,
    })
}

/// A smooth field with a known gradient, for manufactured consistency tests.
pub trait SmoothField: Sync {
    fn value(&self, p: &[f64]) -> f64;
    fn gradient(&self, p: &[f64]) -> [f64; 3];
}

/// Smooth field from a pair of closures.
pub struct AnalyticField<V, G> {
    pub value: V,
    pub gradient: G,
}

impl<V, G> SmoothField for AnalyticField<V, G>
where
    V: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64]) -> [f64; 3] + Sync,
{
    fn value(&self, p: &[f64]) -> f64 {
        (self.value)(p)
    }
    fn gradient(&self, p: &[f64]) -> [f64; 3] {
        (self.gradient)(p)
    }
}

/// The relative density U = u/pi of a reference solution, with its exact
/// derivative U' = -J/(kappa pi); panics if the problem fields fail to
/// evaluate (they were already sampled when the reference was built).
pub struct ReferenceRelativeDensity<'a> {
    pub reference: &'a ReferenceSolution,
    pub problem: &'a Problem,
}

impl SmoothField for ReferenceRelativeDensity<'_> {
    fn value(&self, p: &[f64]) -> f64 {
        let pi = self.problem.boltzmann(p).expect("potential evaluates");
        self.reference.u_at(p[0]) / pi
    }

    fn gradient(&self, p: &[f64]) -> [f64; 3] {
        let pi = self.problem.boltzmann(p).expect("potential evaluates");
        let kappa = self.problem.diffusion.eval(p).expect("kappa evaluates");
        [-self.reference.flux_at(p[0]) / (kappa * pi), 0.0, 0.0]
    }
}

/// Computable consistency-error estimator for a smooth relative density U:
///
/// ```text
/// est^2 = sum_interior (h_ij/m_ij) (kappa_ij S_ij)^-1
///         ( int_sigma kappa pi grad U . nu  -  kappa_ij S_ij (m_ij/h_ij)(U_j - U_i) )^2
/// ```
///
/// with the interface integral by the 2-point Gauss rule per face axis.
/// Decays like h^2 on cubic meshes for smooth data.
pub fn consistency_estimator(
    problem: &Problem,
    mesh: &Mesh,
    mean: MeanSpec,
    u: &dyn SmoothField,
) -> Result<f64, AnalysisError> {
    let dim = mesh.dim;
    let kbar: Vec<f64> = (0..mesh.n_cells())
        .map(|c| kappa_cell_average(problem, mesh, c))
        .collect::<Result<_, AssemblyError>>()?;
    let mut est2 = 0.0;
    for (_, f) in mesh.interior_interfaces() {
        let j = match f.right {
            InterfaceSide::Cell(j) => j,
            _ => unreachable!(),
        };
        let (di, dj) = f.sub_distances;
        let kappa_ij = kappa_edge_coefficient(kbar[f.left], kbar[j], di, dj, f.node_distance);
        let pi_i = problem.boltzmann(&mesh.cells[f.left].center[..dim]).map_err(AssemblyError::from_field("V"))?;
        let pi_j = problem.boltzmann(&mesh.cells[j].center[..dim]).map_err(AssemblyError::from_field("V"))?;
        let s_ij = means::stolarsky(mean, pi_i, pi_j).map_err(AssemblyError::from)?;

        // face integral of kappa pi grad U . nu by the tensorized 2-point rule
        let normal_axis = (0..dim)
            .max_by(|&p, &q| {
                f.unit_normal[p]
                    .abs()
                    .partial_cmp(&f.unit_normal[q].abs())
                    .unwrap()
            })
            .unwrap();
        let mut nodes_per_axis = vec![[0.0f64; 2]; 0];
        let mut tangents = Vec::new();
        for d in 0..dim {
            if d != normal_axis {
                let half = 0.5 * f.node_distance; // faces of cubic cells span h
                nodes_per_axis.push(gauss2_nodes(
                    f.midpoint[d] - half,
                    f.midpoint[d] + half,
                ));
                tangents.push(d);
            }
        }
        let n_nodes = 1usize << tangents.len();
        let weight = f.area / n_nodes as f64;
        let mut integral = 0.0;
        for maskbits in 0..n_nodes {
            let mut p = f.midpoint;
            for (t, d) in tangents.iter().enumerate() {
                p[*d] = nodes_per_axis[t][(maskbits >> t) & 1];
            }
            let kappa = problem
                .diffusion
                .eval(&p[..dim])
                .map_err(AssemblyError::from_field("kappa"))?;
            let pi = problem.boltzmann(&p[..dim]).map_err(AssemblyError::from_field("V"))?;
            let grad = u.gradient(&p[..dim]);
            let gn: f64 = (0..3).map(|d| grad[d] * f.unit_normal[d]).sum();
            integral += weight * kappa * pi * gn;
        }

        let ui = u.value(&mesh.cells[f.left].center[..dim]);
        let uj = u.value(&mesh.cells[j].center[..dim]);
        let two_point = kappa_ij * s_ij * f.area / f.node_distance * (uj - ui);
        let defect = integral - two_point;
        est2 += f.node_distance / f.area / (kappa_ij * s_ij) * defect * defect;
    }
    Ok(est2.sqrt())
}
