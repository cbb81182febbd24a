//! Finite volume meshes.
//!
//! Two mesh families are supported, both orthogonal by construction so the
//! two-point flux between neighboring nodes is admissible:
//!
//! - arbitrary (possibly non-uniform) 1D interval meshes, either
//!   cell-centered (nodes strictly inside the domain, boundary interfaces
//!   carrying the Dirichlet points) or vertex-centered (nodes include the
//!   endpoints, which become Dirichlet nodes owning half-width cells);
//! - uniform cubic meshes in dimensions up to 3, cell-centered.
//!
//! Meshes are immutable after construction and safe to share across threads.

use thiserror::Error;

/// Spatial point; only the first `dim` coordinates are meaningful.
pub type Point = [f64; 3];

pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn norm(p: &Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
}

/// Axis-aligned box domain.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    pub lo: Point,
    pub hi: Point,
    pub dim: usize,
}

impl AxisBox {
    pub fn interval(a: f64, b: f64) -> Self {
        AxisBox {
            lo: [a, 0.0, 0.0],
            hi: [b, 0.0, 0.0],
            dim: 1,
        }
    }

    pub fn new(lo: &[f64], hi: &[f64]) -> Self {
        let dim = lo.len();
        let mut l = [0.0; 3];
        let mut h = [0.0; 3];
        l[..dim].copy_from_slice(lo);
        h[..dim].copy_from_slice(hi);
        AxisBox { lo: l, hi: h, dim }
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|d| self.hi[d] - self.lo[d]).product()
    }

    /// Largest pairwise distance in the box.
    pub fn diameter(&self) -> f64 {
        (0..self.dim)
            .map(|d| (self.hi[d] - self.lo[d]).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// A control volume with its node.
#[derive(Clone, Debug)]
pub struct Cell {
    pub index: usize,
    /// The node x_i associated with the cell.
    pub center: Point,
    /// Cell measure m_i.
    pub volume: f64,
    /// Bounding box of the cell (cells are boxes for both mesh families).
    pub lo: Point,
    pub hi: Point,
    /// True when the node lies on the domain boundary; such cells carry
    /// Dirichlet values instead of unknowns (vertex-centered meshes).
    pub on_boundary: bool,
}

/// What an interface connects the owning cell to.
#[derive(Clone, Debug)]
pub enum InterfaceSide {
    /// Neighboring cell index.
    Cell(usize),
    /// Domain boundary, with the foot point y_sigma of the orthogonal line
    /// through the node.
    Boundary(Point),
}

/// A (d-1)-dimensional interface between a cell and a neighbor or the boundary.
#[derive(Clone, Debug)]
pub struct Interface {
    pub left: usize,
    pub right: InterfaceSide,
    /// Interface measure m_ij (1 in 1D).
    pub area: f64,
    /// Node distance h_ij = |x_i - x_j|, or the distance to y_sigma.
    pub node_distance: f64,
    /// Distances from the two nodes to the interface plane (d_i, d_j);
    /// the boundary side has d_j = 0.
    pub sub_distances: (f64, f64),
    pub midpoint: Point,
    /// Unit normal oriented from `left` towards `right`.
    pub unit_normal: Point,
    /// Point indices of the two sides: cell indices, or
    /// `n_cells + boundary_ordinal` for boundary points.
    pub points: (usize, usize),
}

impl Interface {
    pub fn is_interior(&self) -> bool {
        matches!(self.right, InterfaceSide::Cell(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshKind {
    Interval,
    Cubic { h: f64 },
}

/// A finite volume mesh: cells, interfaces at cell boundaries, adjacency.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub dim: usize,
    pub domain: AxisBox,
    pub cells: Vec<Cell>,
    pub interfaces: Vec<Interface>,
    /// Prescribed-value points y_sigma of the boundary interfaces, in order;
    /// boundary point k has global point index `n_cells + k`.
    pub boundary_points: Vec<Point>,
    /// For each cell, the indices of the interfaces touching it.
    pub cell_interfaces: Vec<Vec<usize>>,
    /// sup over interfaces of the node distance.
    pub diameter: f64,
    pub kind: MeshKind,
}

/// How to lay out a 1D interval mesh.
#[derive(Clone, Debug)]
pub enum IntervalLayout {
    /// `n` equal cells with nodes at the cell midpoints; the Dirichlet data
    /// live on two boundary interfaces at the endpoints.
    UniformCells(usize),
    /// `n` equally spaced nodes including both endpoints; the endpoint nodes
    /// own half-width cells and carry the Dirichlet values directly. This is
    /// the layout used by the built-in benchmark runs with `2^k + 1` nodes.
    UniformNodes(usize),
    /// Explicit nodes strictly inside the interval; cells are their Voronoi
    /// intervals clipped to the domain, Dirichlet data on boundary interfaces.
    Nodes(Vec<f64>),
}

impl Mesh {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Number of points carrying field values: cells plus boundary points.
    pub fn n_points(&self) -> usize {
        self.cells.len() + self.boundary_points.len()
    }

    pub fn point(&self, idx: usize) -> Point {
        if idx < self.cells.len() {
            self.cells[idx].center
        } else {
            self.boundary_points[idx - self.cells.len()]
        }
    }

    /// True when the point carries a prescribed Dirichlet value: boundary
    /// points always, cells when their node sits on the domain boundary.
    pub fn is_dirichlet_point(&self, idx: usize) -> bool {
        if idx < self.cells.len() {
            self.cells[idx].on_boundary
        } else {
            true
        }
    }

    pub fn interior_interfaces(&self) -> impl Iterator<Item = (usize, &Interface)> {
        self.interfaces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_interior())
    }

    /// Smallest and largest pairwise distance among all points.
    pub fn point_distance_extremes(&self) -> (f64, f64) {
        let n = self.n_points();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = norm(&sub(&self.point(i), &self.point(j)));
                lo = lo.min(d);
                hi = hi.max(d);
            }
        }
        (lo, hi)
    }
}

fn finish(mut mesh: Mesh) -> Mesh {
    let mut incident = vec![Vec::new(); mesh.cells.len()];
    let mut diameter: f64 = 0.0;
    for (k, f) in mesh.interfaces.iter().enumerate() {
        incident[f.left].push(k);
        if let InterfaceSide::Cell(j) = f.right {
            incident[j].push(k);
        }
        diameter = diameter.max(f.node_distance);
    }
    mesh.cell_interfaces = incident;
    mesh.diameter = diameter;
    mesh
}

/// Build a 1D interval mesh on `[a, b]`.
pub fn build_interval_mesh(a: f64, b: f64, layout: IntervalLayout) -> Result<Mesh, MeshError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(MeshError::InvalidArgument(format!(
            "domain [{a}, {b}] is not a proper interval"
        )));
    }
    // nodes plus the cell edges between them
    let (nodes, edges, boundary_is_node) = match layout {
        IntervalLayout::UniformCells(n) => {
            if n < 2 {
                return Err(MeshError::InvalidArgument(format!(
                    "need at least 2 cells, got {n}"
                )));
            }
            let w = (b - a) / n as f64;
            let nodes: Vec<f64> = (0..n).map(|k| a + (k as f64 + 0.5) * w).collect();
            let edges: Vec<f64> = (0..=n).map(|k| a + k as f64 * w).collect();
            (nodes, edges, false)
        }
        IntervalLayout::UniformNodes(n) => {
            if n < 3 {
                return Err(MeshError::InvalidArgument(format!(
                    "need at least 3 nodes, got {n}"
                )));
            }
            let h = (b - a) / (n - 1) as f64;
            let nodes: Vec<f64> = (0..n).map(|k| a + k as f64 * h).collect();
            let mut edges = Vec::with_capacity(n + 1);
            edges.push(a);
            for k in 0..n - 1 {
                edges.push(a + (k as f64 + 0.5) * h);
            }
            edges.push(b);
            (nodes, edges, true)
        }
        IntervalLayout::Nodes(nodes) => {
            if nodes.is_empty() {
                return Err(MeshError::InvalidMesh("empty node list".into()));
            }
            for w in nodes.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(MeshError::InvalidMesh(format!(
                        "nodes must be strictly increasing, got {} then {}",
                        w[0], w[1]
                    )));
                }
            }
            if nodes[0] <= a || *nodes.last().unwrap() >= b {
                return Err(MeshError::InvalidMesh(
                    "nodes must lie strictly inside the domain".into(),
                ));
            }
            let mut edges = Vec::with_capacity(nodes.len() + 1);
            edges.push(a);
            for w in nodes.windows(2) {
                edges.push(0.5 * (w[0] + w[1]));
            }
            edges.push(b);
            (nodes, edges, false)
        }
    };

    let n = nodes.len();
    let cells: Vec<Cell> = (0..n)
        .map(|k| Cell {
            index: k,
            center: [nodes[k], 0.0, 0.0],
            volume: edges[k + 1] - edges[k],
            lo: [edges[k], 0.0, 0.0],
            hi: [edges[k + 1], 0.0, 0.0],
            on_boundary: boundary_is_node && (k == 0 || k == n - 1),
        })
        .collect();

    let mut interfaces = Vec::new();
    let mut boundary_points = Vec::new();
    for k in 0..n - 1 {
        let h = nodes[k + 1] - nodes[k];
        let x = edges[k + 1];
        interfaces.push(Interface {
            left: k,
            right: InterfaceSide::Cell(k + 1),
            area: 1.0,
            node_distance: h,
            sub_distances: (x - nodes[k], nodes[k + 1] - x),
            midpoint: [x, 0.0, 0.0],
            unit_normal: [1.0, 0.0, 0.0],
            points: (k, k + 1),
        });
    }
    if !boundary_is_node {
        for (cell, y, normal) in [(0usize, a, -1.0), (n - 1, b, 1.0)] {
            let d = (nodes[cell] - y).abs();
            boundary_points.push([y, 0.0, 0.0]);
            interfaces.push(Interface {
                left: cell,
                right: InterfaceSide::Boundary([y, 0.0, 0.0]),
                area: 1.0,
                node_distance: d,
                sub_distances: (d, 0.0),
                midpoint: [y, 0.0, 0.0],
                unit_normal: [normal, 0.0, 0.0],
                points: (cell, n + boundary_points.len() - 1),
            });
        }
    }

    Ok(finish(Mesh {
        dim: 1,
        domain: AxisBox::interval(a, b),
        cells,
        interfaces,
        boundary_points,
        cell_interfaces: Vec::new(),
        diameter: 0.0,
        kind: MeshKind::Interval,
    }))
}

/// Build a uniform cubic mesh of cell width `h` on an axis-aligned box.
///
/// Every box side must be an integer multiple of `h` (within 1e-12 relative).
pub fn build_cubic_mesh(domain: &AxisBox, h: f64) -> Result<Mesh, MeshError> {
    if !(h > 0.0) {
        return Err(MeshError::InvalidArgument(format!(
            "cell width must be positive, got {h}"
        )));
    }
    let dim = domain.dim;
    let mut counts = [1usize; 3];
    for d in 0..dim {
        let side = domain.hi[d] - domain.lo[d];
        let n = (side / h).round();
        if n < 1.0 || (n * h - side).abs() > 1e-12 * side.abs() {
            return Err(MeshError::InvalidArgument(format!(
                "side {side} along axis {d} is not an integer multiple of h = {h}"
            )));
        }
        counts[d] = n as usize;
    }
    let (nx, ny, nz) = (counts[0], counts[1], counts[2]);
    let total = nx * ny * nz;
    let volume = h.powi(dim as i32);
    let area = h.powi(dim as i32 - 1);

    let index_of = |ix: usize, iy: usize, iz: usize| ix + nx * (iy + ny * iz);
    let mut cells = Vec::with_capacity(total);
    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                let idx = [ix, iy, iz];
                let mut center = [0.0; 3];
                let mut lo = [0.0; 3];
                let mut hi = [0.0; 3];
                for d in 0..dim {
                    lo[d] = domain.lo[d] + idx[d] as f64 * h;
                    hi[d] = lo[d] + h;
                    center[d] = lo[d] + 0.5 * h;
                }
                cells.push(Cell {
                    index: index_of(ix, iy, iz),
                    center,
                    volume,
                    lo,
                    hi,
                    on_boundary: false,
                });
            }
        }
    }

    let mut interfaces = Vec::new();
    let mut boundary_points = Vec::new();
    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                let i = index_of(ix, iy, iz);
                let idx = [ix, iy, iz];
                for d in 0..dim {
                    // interior face towards the positive axis direction
                    let mut normal = [0.0; 3];
                    normal[d] = 1.0;
                    let mut mid = cells[i].center;
                    mid[d] += 0.5 * h;
                    if idx[d] + 1 < counts[d] {
                        let mut jdx = idx;
                        jdx[d] += 1;
                        let j = index_of(jdx[0], jdx[1], jdx[2]);
                        interfaces.push(Interface {
                            left: i,
                            right: InterfaceSide::Cell(j),
                            area,
                            node_distance: h,
                            sub_distances: (0.5 * h, 0.5 * h),
                            midpoint: mid,
                            unit_normal: normal,
                            points: (i, j),
                        });
                    } else {
                        boundary_points.push(mid);
                        interfaces.push(Interface {
                            left: i,
                            right: InterfaceSide::Boundary(mid),
                            area,
                            node_distance: 0.5 * h,
                            sub_distances: (0.5 * h, 0.0),
                            midpoint: mid,
                            unit_normal: normal,
                            points: (i, total + boundary_points.len() - 1),
                        });
                    }
                    if idx[d] == 0 {
                        let mut normal = [0.0; 3];
                        normal[d] = -1.0;
                        let mut mid = cells[i].center;
                        mid[d] -= 0.5 * h;
                        boundary_points.push(mid);
                        interfaces.push(Interface {
                            left: i,
                            right: InterfaceSide::Boundary(mid),
                            area,
                            node_distance: 0.5 * h,
                            sub_distances: (0.5 * h, 0.0),
                            midpoint: mid,
                            unit_normal: normal,
                            points: (i, total + boundary_points.len() - 1),
                        });
                    }
                }
            }
        }
    }

    Ok(finish(Mesh {
        dim,
        domain: domain.clone(),
        cells,
        interfaces,
        boundary_points,
        cell_interfaces: Vec::new(),
        diameter: 0.0,
        kind: MeshKind::Cubic { h },
    }))
}

const GEOM_TOL: f64 = 1e-10;

/// Check the mesh invariants; returns one description per violation
/// (empty = valid).
pub fn validate_mesh(mesh: &Mesh) -> Vec<String> {
    let mut out = Vec::new();

    let vol: f64 = mesh.cells.iter().map(|c| c.volume).sum();
    let dom = mesh.domain.volume();
    if (vol - dom).abs() > 1e-10 * dom.abs() {
        out.push(format!(
            "cell volumes sum to {vol}, domain volume is {dom}"
        ));
    }

    for (k, c) in mesh.cells.iter().enumerate() {
        if !(c.volume > 0.0) {
            out.push(format!("cell {k} has non-positive volume {}", c.volume));
        }
        for d in 0..mesh.dim {
            if c.center[d] < c.lo[d] - GEOM_TOL || c.center[d] > c.hi[d] + GEOM_TOL {
                out.push(format!("cell {k}: node lies outside the closed cell"));
                break;
            }
        }
    }

    let mut seen = std::collections::HashSet::new();
    for (k, f) in mesh.interfaces.iter().enumerate() {
        if !(f.area > 0.0) {
            out.push(format!("interface {k} has non-positive area {}", f.area));
        }
        if !(f.node_distance > 0.0) {
            out.push(format!(
                "interface {k} has non-positive node distance {}",
                f.node_distance
            ));
        }
        let expected_area = match mesh.kind {
            MeshKind::Interval => 1.0,
            MeshKind::Cubic { h } => h.powi(mesh.dim as i32 - 1),
        };
        if (f.area - expected_area).abs() > 1e-12 * expected_area {
            out.push(format!(
                "interface {k} area {} does not match the mesh geometry ({expected_area})",
                f.area
            ));
        }
        let (di, dj) = f.sub_distances;
        if (di + dj - f.node_distance).abs() > 1e-12 * f.node_distance {
            out.push(format!(
                "interface {k}: sub-distances {di} + {dj} do not sum to h = {}",
                f.node_distance
            ));
        }
        match &f.right {
            InterfaceSide::Cell(j) => {
                if f.left >= mesh.cells.len() || *j >= mesh.cells.len() {
                    out.push(format!("interface {k} references a missing cell"));
                    continue;
                }
                if f.left == *j {
                    out.push(format!("interface {k} connects cell {j} to itself"));
                    continue;
                }
                if !seen.insert((f.left.min(*j), f.left.max(*j))) {
                    out.push(format!("interface {k}: duplicate adjacency"));
                }
                if mesh.dim == 1 && f.left.abs_diff(*j) != 1 {
                    out.push(format!(
                        "interface {k}: 1D cells {} and {j} are not consecutive",
                        f.left
                    ));
                }
                // orthogonality (the node line is parallel to the face normal)
                let dvec = sub(&mesh.cells[*j].center, &mesh.cells[f.left].center);
                let h = norm(&dvec);
                let mut dev: f64 = 0.0;
                for d in 0..3 {
                    dev = dev.max((dvec[d] / h - f.unit_normal[d]).abs());
                }
                if dev > GEOM_TOL {
                    out.push(format!(
                        "interface {k}: node line deviates from the face normal by {dev:e}"
                    ));
                }
                if (h - f.node_distance).abs() > 1e-12 * h {
                    out.push(format!(
                        "interface {k}: stored node distance {} vs geometric {h}",
                        f.node_distance
                    ));
                }
            }
            InterfaceSide::Boundary(y) => {
                let on_boundary = (0..mesh.dim).any(|d| {
                    (y[d] - mesh.domain.lo[d]).abs() <= GEOM_TOL
                        || (y[d] - mesh.domain.hi[d]).abs() <= GEOM_TOL
                });
                if !on_boundary {
                    out.push(format!(
                        "interface {k}: boundary point {y:?} is not on the domain boundary"
                    ));
                }
                let dvec = sub(y, &mesh.cells[f.left].center);
                let d = norm(&dvec);
                if d <= 0.0 {
                    out.push(format!(
                        "interface {k}: node lies on its own boundary interface"
                    ));
                } else {
                    let mut dev: f64 = 0.0;
                    for c in 0..3 {
                        dev = dev.max((dvec[c] / d - f.unit_normal[c]).abs());
                    }
                    if dev > GEOM_TOL {
                        out.push(format!(
                            "interface {k}: line to boundary point deviates from the normal by {dev:e}"
                        ));
                    }
                }
            }
        }
    }

    if let MeshKind::Cubic { .. } = mesh.kind {
        let expected = 2 * mesh.dim;
        for (c, faces) in mesh.cell_interfaces.iter().enumerate() {
            if faces.len() != expected {
                out.push(format!(
                    "cell {c} touches {} interfaces, expected {expected}",
                    faces.len()
                ));
            }
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_bisection() {
        let m = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformCells(2)).unwrap();
        assert_eq!(m.n_cells(), 2);
        assert_eq!(m.cells[0].center[0], 0.25);
        assert_eq!(m.cells[1].center[0], 0.75);
        let interior: Vec<_> = m.interior_interfaces().collect();
        assert_eq!(interior.len(), 1);
        let f = interior[0].1;
        assert_eq!(f.midpoint[0], 0.5);
        assert_eq!(f.area, 1.0);
        assert_eq!(f.node_distance, 0.5);
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn uniform_cells_1025() {
        let m = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformCells(1025)).unwrap();
        assert_eq!(m.interior_interfaces().count(), 1024);
        assert!((m.cells[0].volume - 1.0 / 1025.0).abs() < 1e-15);
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn vertex_centered_nodes() {
        // nodes at k/1024 with half cells at the ends
        let m = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(1025)).unwrap();
        assert_eq!(m.n_cells(), 1025);
        assert_eq!(m.interior_interfaces().count(), 1024);
        assert!(m.boundary_points.is_empty());
        assert!(m.cells[0].on_boundary && m.cells[1024].on_boundary);
        assert_eq!(m.cells[0].center[0], 0.0);
        assert!((m.cells[0].volume - 0.5 / 1024.0).abs() < 1e-15);
        assert!((m.diameter - 1.0 / 1024.0).abs() < 1e-15);
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn explicit_voronoi_nodes() {
        let m = build_interval_mesh(
            0.0,
            1.0,
            IntervalLayout::Nodes(vec![0.1, 0.5, 0.6]),
        )
        .unwrap();
        let interior: Vec<_> = m.interior_interfaces().map(|(_, f)| f).collect();
        assert_eq!(interior.len(), 2);
        assert!((interior[0].midpoint[0] - 0.3).abs() < 1e-15);
        assert!((interior[1].midpoint[0] - 0.55).abs() < 1e-15);
        for f in interior {
            let (di, dj) = f.sub_distances;
            assert_eq!(di + dj, f.node_distance);
        }
        // boundary interfaces carry the endpoints
        assert_eq!(m.boundary_points.len(), 2);
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn rejects_bad_node_lists() {
        assert!(matches!(
            build_interval_mesh(0.0, 1.0, IntervalLayout::Nodes(vec![0.5, 0.4])),
            Err(MeshError::InvalidMesh(_))
        ));
        assert!(matches!(
            build_interval_mesh(0.0, 1.0, IntervalLayout::UniformCells(1)),
            Err(MeshError::InvalidArgument(_))
        ));
        assert!(matches!(
            build_interval_mesh(0.0, 1.0, IntervalLayout::Nodes(vec![0.0, 0.5])),
            Err(MeshError::InvalidMesh(_))
        ));
    }

    #[test]
    fn cubic_unit_square() {
        let dom = AxisBox::new(&[0.0, 0.0], &[1.0, 1.0]);
        let m = build_cubic_mesh(&dom, 0.5).unwrap();
        assert_eq!(m.n_cells(), 4);
        assert_eq!(m.interior_interfaces().count(), 4);
        for (_, f) in m.interior_interfaces() {
            assert_eq!(f.area, 0.5);
            assert_eq!(f.node_distance, 0.5);
        }
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn cubic_unit_cube_counts() {
        let dom = AxisBox::new(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]);
        let m = build_cubic_mesh(&dom, 1.0 / 3.0).unwrap();
        assert_eq!(m.n_cells(), 27);
        // per axis: 3*3 faces per layer gap, 2 gaps -> 18; 3 axes -> 54
        assert_eq!(m.interior_interfaces().count(), 54);
        assert!(validate_mesh(&m).is_empty());
    }

    #[test]
    fn cubic_degenerates_to_interval_cells() {
        let dom = AxisBox::new(&[0.0], &[1.0]);
        let c = build_cubic_mesh(&dom, 0.25).unwrap();
        let i = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformCells(4)).unwrap();
        assert_eq!(c.n_cells(), i.n_cells());
        assert_eq!(c.interfaces.len(), i.interfaces.len());
        for (a, b) in c.cells.iter().zip(i.cells.iter()) {
            assert!((a.center[0] - b.center[0]).abs() < 1e-15);
            assert!((a.volume - b.volume).abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_rejects_non_multiple_side() {
        let dom = AxisBox::new(&[0.0, 0.0], &[1.0, 0.9]);
        assert!(matches!(
            build_cubic_mesh(&dom, 0.25),
            Err(MeshError::InvalidArgument(_))
        ));
    }

    #[test]
    fn perturbed_area_is_reported() {
        let mut m = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformCells(4)).unwrap();
        m.interfaces[1].area = 1.5;
        let violations = validate_mesh(&m);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].contains("interface 1"), "{violations:?}");
    }

    #[test]
    fn cone_identity_on_cubic_meshes() {
        // sum over interior faces of m_ij h_ij = |domain| (d - sum_a 1/N_a)
        for (dim, lens, h) in [(1usize, vec![1.0], 0.125), (2, vec![1.0, 2.0], 0.25)] {
            let dom = AxisBox::new(&vec![0.0; dim], &lens);
            let m = build_cubic_mesh(&dom, h).unwrap();
            let sum: f64 = m
                .interior_interfaces()
                .map(|(_, f)| f.area * f.node_distance)
                .sum();
            let vol = dom.volume();
            let deficit: f64 = lens.iter().map(|l| vol / (l / h)).sum();
            let expected = dim as f64 * vol - deficit;
            assert!(
                (sum - expected).abs() < 1e-12 * expected.abs(),
                "dim {dim}: {sum} vs {expected}"
            );
        }
    }

    #[test]
    fn refinement_halves_the_diameter() {
        for n in [8usize, 64, 256] {
            let m1 = build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(n + 1)).unwrap();
            let m2 =
                build_interval_mesh(0.0, 1.0, IntervalLayout::UniformNodes(2 * n + 1)).unwrap();
            assert!((m1.diameter / m2.diameter - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonality_holds_on_every_generated_mesh() {
        let meshes = vec![
            build_interval_mesh(0.0, 1.0, IntervalLayout::Nodes(vec![0.13, 0.2, 0.77, 0.9]))
                .unwrap(),
            build_cubic_mesh(&AxisBox::new(&[0.0, 0.0], &[1.0, 1.0]), 0.25).unwrap(),
        ];
        for m in &meshes {
            for (_, f) in m.interior_interfaces() {
                let dvec = sub(
                    &m.cells[match f.right {
                        InterfaceSide::Cell(j) => j,
                        _ => unreachable!(),
                    }]
                    .center,
                    &m.cells[f.left].center,
                );
                let h = norm(&dvec);
                for d in 0..3 {
                    assert!((dvec[d] / h - f.unit_normal[d]).abs() <= 1e-10);
                }
            }
        }
    }
}
