//! Robin constant, density and potential of the equilibrium measure of
//! [-r, r].
//!
//! cargo run --example interval_equilibrium -- 2.0

use delta_robin::real_equilibrium::{
    arcsine_height_integral, density_at, weighted_potential, RealEquilibriumMeasure, RealIntervalSpec,
};

fn main() {
    let r: f64 = std::env::args().nth(1).map_or(2.0, |s| s.parse().expect("r must be a number"));
    let spec = RealIntervalSpec::new(r).expect("r must be positive");
    let measure = RealEquilibriumMeasure::new(spec).unwrap();
    println!("[-{r}, {r}], {:?} regime", spec.regime());
    println!("V_δ = {:.12}", measure.robin());
    if let Some(aux) = measure.aux() {
        println!("arcsine mass B_f = {:.12}, C_f = {:.12}", aux.b_f, aux.c_f);
    }
    println!("arcsine-law height integral = {:.12}", arcsine_height_integral(&spec).unwrap());

    println!("{:>8} {:>16} {:>16}", "x", "density", "potential");
    for i in 0..=10 {
        let x = -r + 2.0 * r * i as f64 / 10.0 * 0.999 + 0.0005 * r;
        let g = density_at(&spec, x).unwrap();
        let u = weighted_potential(&spec, x).unwrap();
        println!("{x:>8.4} {g:>16.10} {u:>16.10}");
    }
}
