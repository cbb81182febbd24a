//! Tour of the Stolarsky mean family: the named special cases, their weight
//! functions, the detailed-balance identity and the diagonal curvature.
//!
//! ```bash
//! cargo run --example mean_zoo
//! ```

use stolarsky_fv::means::{diag_second_derivative, stolarsky, weight_b, MeanSpec};

fn main() {
    let (x, y) = (1.0, 3.0);
    println!("S(x, y) for x = {x}, y = {y}:");
    println!("{:<14} {:>12} {:>10} {:>8} {:>14}", "mean", "S(1,3)", "B(1)", "a+b", "d2S(x,x)*12x");
    for mean in MeanSpec::named() {
        let s = stolarsky(mean, x, y).unwrap();
        let b = weight_b(mean, 1.0);
        let (alpha, beta) = mean.alpha_beta();
        let curvature = diag_second_derivative(mean, 1.0)
            .map(|d| format!("{:>14.4}", 12.0 * d))
            .unwrap_or_else(|_| format!("{:>14}", "(unbounded)"));
        println!(
            "{:<14} {:>12.6} {:>10.6} {:>8} {curvature}",
            mean.to_string(),
            s,
            b,
            if alpha.is_finite() { format!("{}", alpha + beta) } else { format!("{alpha}") },
        );
    }

    println!("\ndetailed balance B(-v) = e^v B(v), v = 2.5:");
    for mean in [MeanSpec::ScharfetterGummel, MeanSpec::Geometric, MeanSpec::General { alpha: 3.2, beta: 1.0 }] {
        let v = 2.5;
        let lhs = weight_b(mean, -v);
        let rhs = v.exp() * weight_b(mean, v);
        println!("  {:<14} B(-v) = {lhs:.12}, e^v B(v) = {rhs:.12}", mean.to_string());
    }

    println!("\nthe mean interpolates its arguments (general:0.5,-3 between 2 and 5):");
    let spec = MeanSpec::General { alpha: 0.5, beta: -3.0 };
    for t in 0..=4 {
        let y = 2.0 + 0.75 * t as f64;
        println!("  S(2, {y:.2}) = {:.6}", stolarsky(spec, 2.0, y).unwrap());
    }
}
