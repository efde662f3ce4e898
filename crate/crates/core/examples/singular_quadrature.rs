//! Integrates functions with declared endpoint, logarithmic and removable
//! singularities.
//!
//! cargo run --example singular_quadrature

use std::f64::consts::PI;

use delta_robin::quadrature::{integrate, IntegrandSpec};

fn main() {
    let arcsine = IntegrandSpec::new(|x: f64| 1.0 / ((1.0 - x) * (1.0 + x)).sqrt(), -1.0, 1.0)
        .inverse_sqrt_endpoint(-1.0)
        .inverse_sqrt_endpoint(1.0);
    let res = integrate(&arcsine, 1e-12).unwrap();
    println!("∫ dx/√(1-x²) over [-1,1] = {:.15} (π = {PI:.15}), {} evaluations", res.value, res.evaluations);

    let log = IntegrandSpec::new(|x: f64| (x - 0.3).abs().ln(), 0.0, 1.0).log_point(0.3);
    let exact = 0.3 * 0.3f64.ln() + 0.7 * 0.7f64.ln() - 1.0;
    let res = integrate(&log, 1e-12).unwrap();
    println!("∫ log|x-0.3| over [0,1] = {:.15} (exact {exact:.15})", res.value);

    let sinc = IntegrandSpec::new(|x: f64| x.sin() / x, 0.0, PI).removable_point(0.0, 1.0);
    let res = integrate(&sinc, 1e-12).unwrap();
    println!("∫ sin x / x over [0,π] = {:.15} ± {:.1e}", res.value, res.error_estimate);

    let undeclared = IntegrandSpec::new(|x: f64| 1.0 / x, 0.0, 1.0);
    match integrate(&undeclared, 1e-10) {
        Ok(res) => println!("∫ dx/x over [0,1] unexpectedly gave {}", res.value),
        Err(e) => println!("∫ dx/x over [0,1]: {e}"),
    }
}
