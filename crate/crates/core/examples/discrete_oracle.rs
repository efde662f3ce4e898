//! Minimizes the discretized energy and compares with the analytic answers.
//!
//! cargo run --release --example discrete_oracle -- 1000

use delta_robin::discrete_oracle::{
    Energy,
    build_padic_energy_matrix, build_real_energy_matrix, compare_measure_real, minimize_energy, shell_masses,
};
use delta_robin::field::LocalFieldSpec;
use delta_robin::kernel::fraction_string;
use delta_robin::padic_equilibrium::robin_constant_padic;
use delta_robin::quadrature::DEFAULT_TOL;
use delta_robin::real_equilibrium::{robin_constant_real, RealIntervalSpec};

fn main() {
    let m: usize = std::env::args().nth(1).map_or(1000, |s| s.parse().expect("m"));

    for r in [1.0, 2.0] {
        let spec = RealIntervalSpec::new(r).unwrap();
        let min = minimize_energy(&build_real_energy_matrix(&spec, m).unwrap()).unwrap();
        let v = robin_constant_real(&spec).unwrap();
        let bins = compare_measure_real(&min.measure, &spec, DEFAULT_TOL).unwrap();
        println!(
            "r = {r}, m = {m}: discrete {:.9}, analytic {v:.9}, residual {:.1e}, worst bin error {:.1e}",
            min.energy.to_f64(),
            min.residual,
            bins.max_discrepancy
        );
    }

    let field = LocalFieldSpec::rational(3).unwrap();
    for depth in [1, 2] {
        let min = minimize_energy(&build_padic_energy_matrix(&field, -2, depth).unwrap()).unwrap();
        let masses: Vec<String> = shell_masses(&min.measure)
            .iter()
            .rev()
            .map(|(k, c)| format!("c_{k} = {}", fraction_string(c)))
            .collect();
        println!(
            "Q_3, n = -2, depth {depth}: {} cells, energy {}, analytic {}, {}",
            min.measure.len(),
            exact_energy(&min.energy),
            robin_constant_padic(&field, -2),
            masses.join(", ")
        );
    }
}

fn exact_energy(e: &Energy) -> String {
    match e {
        Energy::Exact(v) => v.to_string(),
        Energy::Float(v) => format!("{v:.12}"),
    }
}
