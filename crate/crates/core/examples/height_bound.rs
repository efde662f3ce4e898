//! Lower bound for the height of totally real numbers in [-2, 2] that lie
//! in 2^-1 Z_2 at the prime 2, with the classical bounds beside it.
//!
//! cargo run --example height_bound

use delta_robin::field::LocalFieldSpec;
use delta_robin::height_bounds::{global_lower_bound, PlaceSpec};
use delta_robin::real_equilibrium::RealIntervalSpec;

fn main() {
    let places = [
        PlaceSpec::archimedean(RealIntervalSpec::new(2.0).unwrap()),
        PlaceSpec::nonarchimedean(LocalFieldSpec::rational(2).unwrap(), -1),
    ];
    let report = global_lower_bound(&places).unwrap();
    for place in &report.per_place {
        println!("{:?}: V_δ = {:.9}, contributes {:.9}", place.parameters, place.v_delta_float, place.contribution);
    }
    println!("liminf h ≥ {:.9}", report.total);
    for r in &report.references {
        println!("  {} bound: {:.9}", r.name, r.value);
    }
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
