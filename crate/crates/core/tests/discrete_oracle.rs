use std::time::Instant;

use num_rational::BigRational;

use delta_robin::discrete_oracle::*;
use delta_robin::field::LocalFieldSpec;
use delta_robin::padic_equilibrium::{equilibrium_coefficients, robin_constant_padic};
use delta_robin::quadrature::DEFAULT_TOL;
use delta_robin::real_equilibrium::{mass_between, robin_constant_real, RealIntervalSpec};

fn spec(r: f64) -> RealIntervalSpec {
    RealIntervalSpec::new(r).unwrap()
}

fn real_minimum(r: f64, m: usize) -> Minimizer {
    minimize_energy(&build_real_energy_matrix(&spec(r), m).unwrap()).unwrap()
}

#[test]
fn padic_oracle_is_exact() {
    for p in [2u64, 3] {
        let field = LocalFieldSpec::rational(p).unwrap();
        for n in [-1i64, -2, -3] {
            for depth in [1i64, 2] {
                let start = Instant::now();
                let matrix = build_padic_energy_matrix(&field, n, depth).unwrap();
                assert_eq!(matrix.len() as u64, p.pow((depth - n) as u32));
                let min = minimize_energy(&matrix).unwrap();
                assert_eq!(
                    min.energy,
                    Energy::Exact(robin_constant_padic(&field, n)),
                    "p={p} n={n} depth={depth}"
                );
                let shells = shell_masses(&min.measure);
                let analytic = equilibrium_coefficients(&field, n).unwrap();
                for (k, c) in analytic.iter() {
                    assert_eq!(&shells[&k], c, "p={p} n={n} depth={depth} k={k}");
                }
                let Weights::Exact(w) = min.measure.weights() else { panic!() };
                let total: BigRational = w.iter().sum();
                assert_eq!(total, BigRational::from_integer(1.into()));
                eprintln!("p={p} n={n} depth={depth}: {:?}", start.elapsed());
            }
        }
    }
}

#[test]
fn real_oracle_converges() {
    for r in [1.0, 2.0] {
        let v = robin_constant_real(&spec(r)).unwrap();
        let errors: Vec<f64> = [500, 1000, 2000]
            .into_iter()
            .map(|m| {
                let min = real_minimum(r, m);
                assert!(min.residual < 1e-8, "r={r} m={m}: residual {}", min.residual);
                assert!(min.kkt_gap >= -1e-6);
                (min.energy.to_f64() - v).abs()
            })
            .collect();
        eprintln!("r={r}: errors {errors:?}");
        assert!(errors[2] < 1e-3, "r={r}: {errors:?}");
        assert!(errors[0] > errors[1] && errors[1] > errors[2], "r={r}: {errors:?}");
    }
}

#[test]
fn real_minimizer_shape() {
    for (r, tol) in [(1.0, 5e-3), (2.0, 1e-2)] {
        let min = real_minimum(r, 2000);
        let report = compare_measure_real(&min.measure, &spec(r), DEFAULT_TOL).unwrap();
        assert_eq!(report.bins.len(), COMPARISON_BINS);
        for bin in &report.bins {
            assert!((bin.analytic - 1.0 / COMPARISON_BINS as f64).abs() < 1e-8);
        }
        eprintln!("r={r}: max bin discrepancy {}", report.max_discrepancy);
        assert!(report.max_discrepancy < tol, "r={r}: {}", report.max_discrepancy);
        if r == 2.0 {
            let discrete = min.measure.mass_in(1.0, 2.0);
            let analytic = mass_between(&spec(2.0), 1.0, 2.0, DEFAULT_TOL).unwrap();
            assert!((discrete - analytic).abs() < 1e-2);
        }
    }
}

#[test]
fn minimizer_is_a_probability_vector() {
    let min = real_minimum(1.5, 300);
    let Weights::Float(w) = min.measure.weights() else { panic!() };
    assert!(w.iter().all(|&x| x >= 0.0));
    assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let csv = min.measure.to_csv();
    assert!(csv.starts_with("lo,hi,weight\n"));
    assert_eq!(csv.lines().count(), 301);
}
