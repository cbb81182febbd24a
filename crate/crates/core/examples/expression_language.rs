//! The expression mini-language used for problem definitions: parsing,
//! evaluation, precedence, typed errors with byte offsets.
//!
//! ```bash
//! cargo run --example expression_language
//! ```

use stolarsky_fv::exprparse::parse;

fn main() {
    for (text, point) in [
        ("2*sin(2*pi*x)", vec![0.25]),
        ("x*(1-x)", vec![0.5]),
        ("5*(x+1)*x", vec![1.0]),
        ("2^3^2", vec![]),
        ("-2^2", vec![]),
        ("exp(-x)+sqrt(abs(-4))", vec![0.0]),
        ("sin(x)*cos(y)", vec![0.3, 0.7]),
    ] {
        let expr = parse(text).unwrap();
        println!("{text:<24} at {point:?} = {:?}", expr.eval(&point).unwrap());
    }

    println!("\nprinted form is fully parenthesized and reparses identically:");
    let expr = parse("1+2*x^-2").unwrap();
    println!("  1+2*x^-2 -> {expr}");
    assert_eq!(parse(&expr.to_string()).unwrap(), expr);

    println!("\nerrors are typed and carry positions:");
    for text in ["1 + foo(2)", "(1+2", "log(x)"] {
        match parse(text) {
            Err(e) => println!("  parse '{text}': {e}"),
            Ok(expr) => match expr.eval(&[-1.0]) {
                Err(e) => println!("  eval  '{text}' at x = -1: {e}"),
                Ok(v) => println!("  eval  '{text}' = {v}"),
            },
        }
    }
}
