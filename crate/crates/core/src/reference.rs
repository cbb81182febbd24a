//! Ground-truth oracles for 1D problems.
//!
//! The reference solver integrates the first-order system
//!
//! ```text
//! u' = -J/kappa - u V',      J' = f,
//! ```
//!
//! (so that J = -kappa (u' + u V') is the flux and J' = f is the
//! conservation law in 1D) with the classical fourth-order Runge-Kutta
//! scheme on a fine uniform grid, and adjusts the initial flux J(a) by
//! Brent's root finding until the right boundary value is met. V' is
//! obtained by central differences with step 1e-6; the expression language
//! has no symbolic derivatives.
//!
//! Also here: the exact constant flux of the affine-potential two-point
//! boundary value problem, the exact edge average `pi_mean` by quadrature,
//! and the piecewise-linear potential construction whose edge average is
//! the geometric mean.

use thiserror::Error;

use crate::assembly::Problem;
use crate::field::FieldError;
use crate::means::{weight_b, MeanSpec};
use crate::quadrature::integrate_composite;

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("invalid bracket: no sign change between {lo} and {hi}")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("no bracket found after {0} expansions")]
    BracketNotFound(usize),
    #[error("root finding budget exhausted, best |g| = {best:e}")]
    NoConvergence { best: f64 },
    #[error("boundary tolerance not reachable on this grid, best residual {best:e}")]
    ToleranceNotReached { best: f64 },
    #[error("invalid reference problem: {0}")]
    BadProblem(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Converged root and the number of Brent iterations it took.
#[derive(Clone, Copy, Debug)]
pub struct BrentResult {
    pub root: f64,
    pub iterations: usize,
}

/// Brent's method: inverse quadratic interpolation, secant and bisection
/// with the usual safeguards. Terminates when |g| <= tol or the bracket
/// width falls below tol.
pub fn brent_root(
    mut g: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<BrentResult, ReferenceError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa * fb > 0.0 {
        return Err(ReferenceError::InvalidBracket { lo, hi });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iterations in 0..=max_iter {
        if fb == 0.0 || fb.abs() <= tol {
            return Ok(BrentResult { root: b, iterations });
        }
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 {
            return Ok(BrentResult { root: b, iterations });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant
                (2.0 * xm * s, 1.0 - s)
            } else {
                // inverse quadratic
                let qq = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0)),
                    (qq - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b);
    }
    Err(ReferenceError::NoConvergence { best: fb.abs() })
}

/// Exact constant flux of the two-point boundary value problem
/// J = -kappa (u' - q u) on [0, h], u(0) = u0, u(h) = uh, with constant
/// force q and diffusion kappa:
///
/// ```text
/// J = (kappa / h) (u0 B(-q h) - uh B(q h)),    B(r) = r / (e^r - 1).
/// ```
///
/// This equals the Scharfetter-Gummel discrete flux identically.
pub fn edge_flux_exact(kappa: f64, h: f64, q: f64, u0: f64, uh: f64) -> f64 {
    let b = |r: f64| weight_b(MeanSpec::ScharfetterGummel, r);
    kappa / h * (u0 * b(-q * h) - uh * b(q * h))
}

/// Exact edge average pi_mean = ( (1/h) int_0^h e^{V} )^-1 ... inverted
/// harmonic average of pi = e^-V, by composite Gauss quadrature with
/// `n_quad` total points.
///
/// For affine V it converges to (V_h - V_0)/(e^{V_h} - e^{V_0}), the
/// Scharfetter-Gummel mean of the endpoint Boltzmann weights.
pub fn pi_mean_quadrature(v: impl Fn(f64) -> f64, h: f64, n_quad: usize) -> f64 {
    h / integrate_composite(|x| v(x).exp(), 0.0, h, n_quad)
}

/// Piecewise linear potential with a plateau that reproduces the geometric
/// mean as its exact edge average.
#[derive(Clone, Copy, Debug)]
pub struct SqraPotential {
    /// First breakpoint x1 = alpha h.
    pub x1: f64,
    /// Second breakpoint x2 = (1 - beta) h.
    pub x2: f64,
    /// Plateau value V_c = (V_0 + V_h) / 2.
    pub plateau: f64,
    /// The ratio lambda = alpha / beta of the two ramp fractions.
    pub lambda: f64,
    pub v0: f64,
    pub vh: f64,
    pub h: f64,
}

impl SqraPotential {
    /// Evaluate the potential at x in [0, h].
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x1 {
            if self.x1 == 0.0 {
                self.plateau
            } else {
                self.v0 + (self.plateau - self.v0) * x / self.x1
            }
        } else if x <= self.x2 || self.h == self.x2 {
            self.plateau
        } else {
            self.plateau + (self.vh - self.plateau) * (x - self.x2) / (self.h - self.x2)
        }
    }

    /// Largest deviation from the affine interpolant between the endpoint
    /// values (attained at the breakpoints).
    pub fn gap_to_affine_interpolant(&self) -> f64 {
        let affine = |x: f64| self.v0 + (self.vh - self.v0) * x / self.h;
        let d1 = (self.eval(self.x1) - affine(self.x1)).abs();
        let d2 = (self.eval(self.x2) - affine(self.x2)).abs();
        d1 + d2
    }

    /// (1/h) int_0^h e^{V} by composite Gauss quadrature applied piecewise
    /// between the breakpoints, where the integrand is a smooth exponential.
    /// Equals e^{(V0 + Vh)/2} by construction.
    pub fn edge_average_quadrature(&self, n_points: usize) -> f64 {
        let mut cuts = vec![0.0, self.x1, self.x2, self.h];
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * self.h);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            total += integrate_composite(|x| self.eval(x).exp(), w[0], w[1], n_points);
        }
        total / self.h
    }
}

/// Construct the plateau potential on [0, h] whose edge average
/// (1/h) int e^{V} equals e^{(V0+Vh)/2}, i.e. whose pi_mean is the
/// geometric mean of the endpoint Boltzmann weights. The ramp fractions
/// satisfy alpha/beta = lambda with alpha + beta = 1.
pub fn sqra_potential_construct(v0: f64, vh: f64, h: f64) -> SqraPotential {
    let vbar = vh - v0;
    let t = 0.5 * vbar;
    let lambda = if vbar.abs() < 1e-4 {
        // (e^t - t - 1)/(e^-t + t - 1) = 1 + vbar/3 + vbar^2/18 + O(vbar^3)
        1.0 + vbar / 3.0 + vbar * vbar / 18.0
    } else {
        (t.exp_m1() - t) / ((-t).exp_m1() + t)
    };
    let alpha = lambda / (1.0 + lambda);
    let beta = 1.0 / (1.0 + lambda);
    SqraPotential {
        x1: alpha * h,
        x2: (1.0 - beta) * h,
        plateau: 0.5 * (v0 + vh),
        lambda,
        v0,
        vh,
        h,
    }
}

/// Reference solution of a 1D problem on a fine uniform grid.
#[derive(Clone, Debug)]
pub struct ReferenceSolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    /// Flux J = -kappa (u' + u V') along the trajectory.
    pub flux: Vec<f64>,
    /// The converged initial flux J(a).
    pub shoot_parameter: f64,
    pub brent_iterations: usize,
    /// |u(b) - u_b| of the returned trajectory.
    pub boundary_residual: f64,
}

impl ReferenceSolution {
    fn h(&self) -> f64 {
        (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64
    }

    /// Density at an arbitrary point by local cubic interpolation.
    pub fn u_at(&self, x: f64) -> f64 {
        cubic_interp(self.grid[0], self.h(), &self.u, x)
    }

    /// Flux at an arbitrary point by local cubic interpolation.
    pub fn flux_at(&self, x: f64) -> f64 {
        cubic_interp(self.grid[0], self.h(), &self.flux, x)
    }
}

/// 4-point Lagrange interpolation on a uniform grid.
fn cubic_interp(a: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    assert!(n >= 4, "need at least 4 samples");
    let s = (x - a) / h;
    let i = (s.floor() as isize).clamp(1, n as isize - 3) as usize;
    let t = s - i as f64;
    let f = [values[i - 1], values[i], values[i + 1], values[i + 2]];
    let w = [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ];
    w.iter().zip(&f).map(|(w, f)| w * f).sum()
}

/// Coefficient tables on the half-step grid used by the RK4 stages.
struct OdeTables {
    a: f64,
    step: f64,
    n_steps: usize,
    /// V', kappa and f at a + k step/2 for k = 0..=2 n_steps.
    vprime: Vec<f64>,
    kappa: Vec<f64>,
    source: Vec<f64>,
    v_min: f64,
    v_max: f64,
    kappa_max: f64,
}

fn build_tables(problem: &Problem, a: f64, b: f64, n_steps: usize) -> Result<OdeTables, ReferenceError> {
    let step = (b - a) / n_steps as f64;
    let m = 2 * n_steps + 1;
    let mut vprime = Vec::with_capacity(m);
    let mut kappa = Vec::with_capacity(m);
    let mut source = Vec::with_capacity(m);
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    let mut kappa_max: f64 = 0.0;
    let fd = 1e-6;
    for k in 0..m {
        let x = a + 0.5 * step * k as f64;
        let vp = (problem.potential.eval_1d(x + fd)? - problem.potential.eval_1d(x - fd)?) / (2.0 * fd);
        let v = problem.potential.eval_1d(x)?;
        let kap = problem.diffusion.eval_1d(x)?;
        if !(kap > 0.0) {
            return Err(ReferenceError::BadProblem(format!(
                "kappa({x}) = {kap} is not positive"
            )));
        }
        vprime.push(vp);
        kappa.push(kap);
        source.push(problem.source.eval_1d(x)?);
        v_min = v_min.min(v);
        v_max = v_max.max(v);
        kappa_max = kappa_max.max(kap);
    }
    Ok(OdeTables {
        a,
        step,
        n_steps,
        vprime,
        kappa,
        source,
        v_min,
        v_max,
        kappa_max,
    })
}

impl OdeTables {
    #[inline]
    fn rhs(&self, idx: usize, u: f64, j: f64) -> (f64, f64) {
        (-j / self.kappa[idx] - u * self.vprime[idx], self.source[idx])
    }

    fn rk4_step(&self, k: usize, u: f64, j: f64) -> (f64, f64) {
        let h = self.step;
        let i0 = 2 * k;
        let (k1u, k1j) = self.rhs(i0, u, j);
        let (k2u, k2j) = self.rhs(i0 + 1, u + 0.5 * h * k1u, j + 0.5 * h * k1j);
        let (k3u, k3j) = self.rhs(i0 + 1, u + 0.5 * h * k2u, j + 0.5 * h * k2j);
        let (k4u, k4j) = self.rhs(i0 + 2, u + h * k3u, j + h * k3j);
        (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            j + h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j),
        )
    }

    fn final_u(&self, u0: f64, j0: f64) -> f64 {
        let (mut u, mut j) = (u0, j0);
        for k in 0..self.n_steps {
            (u, j) = self.rk4_step(k, u, j);
        }
        u
    }

    fn trajectory(&self, u0: f64, j0: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let mut grid = Vec::with_capacity(self.n_steps + 1);
        let mut us = Vec::with_capacity(self.n_steps + 1);
        let mut js = Vec::with_capacity(self.n_steps + 1);
        let (mut u, mut j) = (u0, j0);
        grid.push(self.a);
        us.push(u);
        js.push(j);
        for k in 0..self.n_steps {
            (u, j) = self.rk4_step(k, u, j);
            grid.push(self.a + self.step * (k + 1) as f64);
            us.push(u);
            js.push(j);
        }
        (grid, us, js)
    }
}

/// Integrate the flux ODE with a prescribed initial flux, no shooting.
/// Returns (grid, u, J) on `n_steps + 1` nodes.
pub fn integrate_flux_ode(
    problem: &Problem,
    n_steps: usize,
    u0: f64,
    j0: f64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), ReferenceError> {
    let (a, b) = (problem.domain.lo[0], problem.domain.hi[0]);
    let tables = build_tables(problem, a, b, n_steps)?;
    Ok(tables.trajectory(u0, j0))
}

/// Solve the 1D Dirichlet problem by shooting on `n_grid` nodes.
///
/// Brent's method adjusts the initial flux until |u(b) - u_b| <= tol; for
/// these linear ODEs the boundary mismatch is affine in J(a), so the root
/// finder converges in a couple of iterations.
pub fn shoot_reference(
    problem: &Problem,
    n_grid: usize,
    tol: f64,
) -> Result<ReferenceSolution, ReferenceError> {
    if problem.domain.dim != 1 {
        return Err(ReferenceError::BadProblem(
            "the reference solver handles 1D problems".into(),
        ));
    }
    if n_grid < 1000 {
        return Err(ReferenceError::BadProblem(format!(
            "reference grid too coarse: {n_grid} nodes (need >= 1000)"
        )));
    }
    let (a, b) = (problem.domain.lo[0], problem.domain.hi[0]);
    let g = problem.dirichlet.as_ref().ok_or_else(|| {
        ReferenceError::BadProblem("reference needs Dirichlet data at both ends".into())
    })?;
    let u_a = g.eval_1d(a)?;
    let u_b = g.eval_1d(b)?;

    let tables = build_tables(problem, a, b, n_grid - 1)?;
    let mismatch = |j0: f64| tables.final_u(u_a, j0) - u_b;

    // bracket seeding: an a priori flux scale, doubled until the sign changes
    let mut m = tables.kappa_max * (u_a.abs() + u_b.abs()).max(1e-3) / (b - a)
        * (tables.v_max - tables.v_min).exp();
    if !m.is_finite() {
        return Err(ReferenceError::BadProblem(
            "bracket seed overflowed; potential range too large".into(),
        ));
    }
    let mut bracket = None;
    for _ in 0..60 {
        if mismatch(-m) * mismatch(m) <= 0.0 {
            bracket = Some((-m, m));
            break;
        }
        m *= 2.0;
    }
    let (lo, hi) = bracket.ok_or(ReferenceError::BracketNotFound(60))?;

    let result = brent_root(mismatch, lo, hi, tol, 100)?;
    let (grid, u, flux) = tables.trajectory(u_a, result.root);
    let boundary_residual = (u[u.len() - 1] - u_b).abs();
    if boundary_residual > tol {
        return Err(ReferenceError::ToleranceNotReached {
            best: boundary_residual,
        });
    }
    Ok(ReferenceSolution {
        grid,
        u,
        flux,
        shoot_parameter: result.root,
        brent_iterations: result.iterations,
        boundary_residual,
    })
}
