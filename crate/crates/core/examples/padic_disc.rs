//! Equilibrium measure and Robin constant of the disc π^n O_K.
//!
//! cargo run --example padic_disc -- 3 -4

use delta_robin::field::LocalFieldSpec;
use delta_robin::kernel::fraction_string;
use delta_robin::padic_equilibrium::{
    capacity_ball, capacity_shell, equilibrium_coefficients, potential_at, robin_constant_padic, robin_limit,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().map_or(2, |s| s.parse().expect("p"));
    let n: i64 = args.next().map_or(-3, |s| s.parse().expect("n"));
    let field = LocalFieldSpec::rational(p).expect("p must be prime");

    println!("{field}, disc π^{n} O_K");
    println!("log capacity of the ball  = {}", capacity_ball(&field, n));
    println!("log capacity of the shell = {}", capacity_shell(&field, n));

    let measure = equilibrium_coefficients(&field, n).unwrap();
    for (k, c) in measure.iter() {
        println!("c_{k} = {}", fraction_string(c));
    }
    let v = robin_constant_padic(&field, n);
    println!("V_δ = {v} = {:.12}", v.to_f64());
    println!("potential at 0 = {}", potential_at(&measure, 0).unwrap());
    println!("limit as n → -∞: {}", robin_limit(&field));
    println!("{}", measure.to_json());
}
