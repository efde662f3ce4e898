//! Evaluates the kernel -log δ at the real place and in Q_2.
//!
//! cargo run --example spherical_kernel

use delta_robin::field::LocalFieldSpec;
use delta_robin::kernel::{neg_log_delta_padic, neg_log_delta_real, PAdicBallCode, ProjectivePointReal};

fn main() {
    println!("real place");
    for (x, y) in [(0.0, 3.0), (0.5, 2.0), (1.0, -1.0), (-4.0, 7.5)] {
        println!("  -log δ({x}, {y}) = {:.12}", neg_log_delta_real(x.into(), y.into()));
    }
    println!(
        "  -log δ(-5, ∞) = {:.12}",
        neg_log_delta_real((-5.0).into(), ProjectivePointReal::Infinity)
    );

    let q2 = LocalFieldSpec::rational(2).unwrap();
    let point = |v: i64, digits: Vec<u64>| PAdicBallCode::new(q2, v, digits).unwrap();
    println!("2-adic place");
    for (x, y) in [
        (point(-1, vec![1]), point(2, vec![1])),
        (point(1, vec![1]), point(2, vec![1])),
        (point(-1, vec![1, 1]), point(-1, vec![1, 0, 1])),
    ] {
        let v = neg_log_delta_padic(&x, &y).unwrap();
        println!("  -log δ({x}, {y}) = {v} = {:.12}", v.to_f64());
    }
}
