//! Gauss-Legendre quadrature helpers.
//!
//! Cell integrals (`f_i`, cell averages of `kappa`) use a tensorized 2-point
//! rule per axis, which is exact for cubics and leaves an O(h^4) local error,
//! far below the O(h^2) scheme error. Edge means along a 1D segment use a
//! composite 8-point rule.

/// 2-point Gauss-Legendre nodes on [-1, 1].
const GL2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL8_X: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL8_W: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_29,
    0.362_683_783_378_361_98,
    0.362_683_783_378_361_98,
    0.313_706_645_877_887_29,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// The two Gauss points of the 2-point rule on `[a, b]` (equal weights `(b-a)/2`).
pub fn gauss2_nodes(a: f64, b: f64) -> [f64; 2] {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    [mid + half * GL2[0], mid + half * GL2[1]]
}

/// Tensorized 2-point Gauss rule over an axis-aligned box of dimension `dim`.
///
/// Calls `f` with each node (coordinates in the first `dim` slots) and the
/// corresponding weight; returns the weighted sum, i.e. the approximate
/// integral of `f` over the box.
pub fn integrate_box<E>(
    lo: &[f64; 3],
    hi: &[f64; 3],
    dim: usize,
    mut f: impl FnMut(&[f64]) -> Result<f64, E>,
) -> Result<f64, E> {
    let mut nodes_per_axis = [[0.0f64; 2]; 3];
    let mut w = 1.0;
    for d in 0..dim {
        nodes_per_axis[d] = gauss2_nodes(lo[d], hi[d]);
        w *= 0.5 * (hi[d] - lo[d]);
    }
    let mut sum = 0.0;
    let count = 1usize << dim;
    let mut p = [0.0f64; 3];
    for mask in 0..count {
        for d in 0..dim {
            p[d] = nodes_per_axis[d][(mask >> d) & 1];
        }
        sum += f(&p[..dim])?;
    }
    Ok(sum * w)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]`.
///
/// `n_points` is the total point budget; it is split into ceil(n/8) panels
/// of the 8-point rule.
pub fn integrate_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, n_points: usize) -> f64 {
    let panels = n_points.div_ceil(8).max(1);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut s = 0.0;
        for k in 0..8 {
            s += GL8_W[k] * f(mid + half * GL8_X[k]);
        }
        total += s * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_rule_is_exact_for_cubics() {
        let lo = [0.0, 0.0, 0.0];
        let hi = [2.0, 3.0, 0.0];
        let got: f64 = integrate_box(&lo, &hi, 2, |p| {
            Ok::<_, ()>(p[0].powi(3) + p[0] * p[1] + 1.0)
        })
        .unwrap();
        // int x^3 over [0,2]x[0,3] = 12; int xy = 9; int 1 = 6
        assert!((got - 27.0).abs() < 1e-12);
    }

    #[test]
    fn composite_rule_converges_on_exponentials() {
        let got = integrate_composite(|x| x.exp(), 0.0, 1.0, 64);
        assert!((got - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }
}
