//! Solvers for the assembled symmetric positive definite systems.
//!
//! 1D systems are tridiagonal and go through direct elimination (Thomas
//! algorithm, exact up to roundoff). Everything else runs Jacobi
//! preconditioned conjugate gradients. Both paths are deterministic: fixed
//! iteration order, no data races, bit-identical repeated solves.

use thiserror::Error;

/// Default relative residual tolerance; far below the O(h^2) scheme error
/// of every acceptance run.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default iteration budget for the conjugate gradient path.
pub fn default_max_iter(n: usize) -> usize {
    10 * n.max(1)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("iteration budget exhausted after {iterations} iterations, best residual {best_residual:e}")]
    NonConvergence { best_residual: f64, iterations: usize },
    #[error("non-finite entries in the {0}")]
    NonFinite(&'static str),
    #[error("matrix is not tridiagonal")]
    NotTridiagonal,
}

/// Sparse symmetric matrix in CSR form; both triangles are stored and the
/// paired off-diagonal entries share the same assembled value, so symmetry
/// is exact by construction.
#[derive(Clone, Debug)]
pub struct SparseSymMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Build from per-row diagonal values and undirected off-diagonal edges.
    pub fn from_edges(diag: Vec<f64>, edges: &[(usize, usize, f64)]) -> Self {
        let n = diag.len();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, d) in diag.into_iter().enumerate() {
            rows[i].push((i, d));
        }
        for &(i, j, v) in edges {
            assert!(i != j && i < n && j < n, "bad edge ({i}, {j})");
            rows[i].push((j, v));
            rows[j].push((i, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|(c, _)| *c);
            for &(c, v) in row.iter() {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        SparseSymMatrix { n, row_ptr, col_idx, values }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|(c, _)| *c == j).map(|(_, v)| v).unwrap_or(0.0)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(c, _)| c.abs_diff(i) <= 1))
    }

    fn residual_norm(&self, x: &[f64], b: &[f64]) -> f64 {
        let mut r = vec![0.0; self.n];
        self.matvec(x, &mut r);
        let num: f64 = r
            .iter()
            .zip(b)
            .map(|(ri, bi)| (ri - bi) * (ri - bi))
            .sum::<f64>()
            .sqrt();
        let den: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    DirectTridiagonal,
    ConjugateGradient,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// Relative residual |Ax - b| / |b|, recomputed from the returned solution.
    pub residual_norm: f64,
    /// 0 for the direct path.
    pub iterations: usize,
    pub method: SolveMethod,
}

fn check_finite(m: &SparseSymMatrix, b: &[f64]) -> Result<(), SolveError> {
    if m.values.iter().any(|v| !v.is_finite()) {
        return Err(SolveError::NonFinite("matrix"));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(SolveError::NonFinite("right-hand side"));
    }
    Ok(())
}

/// Solve a symmetric positive definite system.
///
/// Tridiagonal systems take the direct path; everything else runs
/// preconditioned conjugate gradients with the given tolerance and budget.
pub fn solve(m: &SparseSymMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<SolveReport, SolveError> {
    assert_eq!(m.n, b.len());
    check_finite(m, b)?;
    if b.iter().all(|v| *v == 0.0) {
        return Ok(SolveReport {
            solution: vec![0.0; m.n],
            residual_norm: 0.0,
            iterations: 0,
            method: SolveMethod::DirectTridiagonal,
        });
    }
    if m.is_tridiagonal() {
        solve_direct_tridiagonal(m, b, tol)
    } else {
        solve_cg(m, b, tol, max_iter)
    }
}

/// Thomas elimination for tridiagonal systems.
pub fn solve_direct_tridiagonal(
    m: &SparseSymMatrix,
    b: &[f64],
    tol: f64,
) -> Result<SolveReport, SolveError> {
    if !m.is_tridiagonal() {
        return Err(SolveError::NotTridiagonal);
    }
    check_finite(m, b)?;
    let n = m.n;
    let mut diag = vec![0.0; n];
    let mut lower = vec![0.0; n]; // lower[i] = A[i, i-1]
    let mut upper = vec![0.0; n]; // upper[i] = A[i, i+1]
    for i in 0..n {
        for (c, v) in m.row(i) {
            if c == i {
                diag[i] = v;
            } else if c + 1 == i {
                lower[i] = v;
            } else {
                upper[i] = v;
            }
        }
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = b[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / denom;
        d[i] = (b[i] - lower[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(SolveError::NonFinite("solution"));
    }
    let residual_norm = m.residual_norm(&x, b);
    if residual_norm > tol {
        return Err(SolveError::NonConvergence {
            best_residual: residual_norm,
            iterations: 0,
        });
    }
    Ok(SolveReport {
        solution: x,
        residual_norm,
        iterations: 0,
        method: SolveMethod::DirectTridiagonal,
    })
}

/// Jacobi preconditioned conjugate gradients.
pub fn solve_cg(
    m: &SparseSymMatrix,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport, SolveError> {
    check_finite(m, b)?;
    let n = m.n;
    let inv_diag: Vec<f64> = (0..n).map(|i| 1.0 / m.entry(i, i)).collect();
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        return Ok(SolveReport {
            solution: vec![0.0; n],
            residual_norm: 0.0,
            iterations: 0,
            method: SolveMethod::ConjugateGradient,
        });
    }
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    let mut best = f64::INFINITY;
    for it in 1..=max_iter {
        m.matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if !pap.is_finite() || pap <= 0.0 {
            return Err(SolveError::NonFinite("conjugate gradient direction"));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let r_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        best = best.min(r_norm / b_norm);
        if r_norm <= tol * b_norm {
            let residual_norm = m.residual_norm(&x, b);
            if residual_norm <= tol * 4.0 {
                return Ok(SolveReport {
                    solution: x,
                    residual_norm,
                    iterations: it,
                    method: SolveMethod::ConjugateGradient,
                });
            }
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(SolveError::NonConvergence {
        best_residual: best,
        iterations: max_iter,
    })
}
