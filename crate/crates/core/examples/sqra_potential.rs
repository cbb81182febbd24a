//! The plateau-potential construction: a continuous piecewise-linear
//! potential between two endpoint values whose exact edge average
//! (1/h) int e^V equals e^{(V0+Vh)/2}, i.e. whose induced interface mean is
//! the geometric one. The ramp-fraction ratio follows a closed formula with
//! the expansion lambda ~ 1 + Vbar/3 + Vbar^2/18, and the potential stays
//! within O(Vbar^2) of the affine interpolant.
//!
//! ```bash
//! cargo run --example sqra_potential
//! ```

use stolarsky_fv::reference::sqra_potential_construct;

fn main() {
    println!("  Vbar    lambda(closed)  lambda(expansion)   average defect   gap to affine");
    for vbar in [0.01f64, 0.1, 0.5, 1.0, 2.0, 4.0] {
        let sq = sqra_potential_construct(0.0, vbar, 1.0);
        let expansion = 1.0 + vbar / 3.0 + vbar * vbar / 18.0;
        let exact = (0.5 * vbar).exp();
        let defect = (sq.edge_average_quadrature(64) - exact).abs() / exact;
        println!(
            "  {vbar:<6} {:<15.10} {:<18.10} {defect:<16.3e} {:.6e}",
            sq.lambda,
            expansion,
            sq.gap_to_affine_interpolant()
        );
    }

    println!("\nshape for V0 = 0, Vh = 2 on [0, 1]:");
    let sq = sqra_potential_construct(0.0, 2.0, 1.0);
    println!("  breakpoints x1 = {:.6}, x2 = {:.6}, plateau = {}", sq.x1, sq.x2, sq.plateau);
    for k in 0..=10 {
        let x = k as f64 / 10.0;
        println!("  V({x:.1}) = {:.6}", sq.eval(x));
    }
    println!("\nsup gap to the affine interpolant: {:.6e} (~ Vbar^2/6 = {:.6e})",
        sq.gap_to_affine_interpolant(), 4.0 / 6.0);
}
