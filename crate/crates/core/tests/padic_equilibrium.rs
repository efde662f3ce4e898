use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use delta_robin::kernel::ScaledLog;
use delta_robin::padic_equilibrium::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Residue field orders on the grid, as `(p, f)` with `q = p^f`.
const GRID_FIELDS: [(u64, u32); 7] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)];

fn grid() -> impl Iterator<Item = (LocalFieldSpec, i64)> {
    GRID_FIELDS.into_iter().flat_map(|(p, f)| {
        let field = LocalFieldSpec::new(p, 1, f).unwrap();
        (-8..=-1).map(move |n| (field, n))
    })
}

/// Expected valuations `E[v(x - y)]` and `E[max(0, -v(y))]` for `y` drawn
/// from Haar measure on `O_K` or on a shell `π^l O_K^×`, computed straight
/// from the valuation distribution of Haar measure.
///
/// On `O_K`, `P(v(y) ≥ j) = q^{-j}`; on the units, `P(v(1 - u) ≥ j) =
/// q^{1-j}/(q - 1)` for `j ≥ 1`. The expectations are tail sums of these
/// geometric series, summed in closed form.
struct HaarValuations {
    q: BigRational,
}

impl HaarValuations {
    /// `Σ_{j≥1} q^{-j}`.
    fn mean_valuation_on_integers(&self) -> BigRational {
        BigRational::one() / (&self.q - BigRational::one())
    }

    /// `Σ_{j≥1} q^{1-j}/(q - 1)`.
    fn mean_valuation_of_one_minus_unit(&self) -> BigRational {
        let geometric = &self.q / (&self.q - BigRational::one());
        geometric / (&self.q - BigRational::one())
    }
}

/// `U(x) / log|π|^{-1}` for `x = 0` (`k = 0`) or `x = π^k`, by integrating
/// `v(x - y) + max(0, -v(x)) + max(0, -v(y))` against each component.
fn potential_oracle(field: &LocalFieldSpec, coeffs: &[(i64, BigRational)], k: i64) -> BigRational {
    let h = HaarValuations { q: field.q_rational() };
    let vx_pole = if k == 0 { 0 } else { (-k).max(0) };
    let mut total = BigRational::zero();
    for (l, c) in coeffs {
        let (mean_diff, y_pole) = if *l == 0 {
            // y uniform on O_K.
            let mean = if k == 0 { h.mean_valuation_on_integers() } else { int(k.min(0)) };
            (mean, BigRational::zero())
        } else {
            // y uniform on π^l O_K^×, l < 0.
            let mean = if k == 0 {
                int(*l)
            } else if k == *l {
                int(k) + h.mean_valuation_of_one_minus_unit()
            } else {
                int(k.min(*l))
            };
            (mean, int(-l))
        };
        total += c * (mean_diff + int(vx_pole) + y_pole);
    }
    total
}

fn as_pairs(m: &PAdicEquilibriumMeasure) -> Vec<(i64, BigRational)> {
    m.iter().map(|(k, c)| (k, c.clone())).collect()
}

#[test]
fn system_consistency_on_grid() {
    for (field, n) in grid() {
        let m = equilibrium_coefficients(&field, n).unwrap();
        let pairs = as_pairs(&m);
        assert_eq!(pairs.len(), n.unsigned_abs() as usize + 1);
        let sum: BigRational = pairs.iter().map(|(_, c)| c.clone()).sum();
        assert!(sum.is_one(), "{field} n={n}");

        let q = field.q_rational();
        let c0 = (&q + field.q_pow(2 * n)) / (&q + BigRational::one());
        assert_eq!(m.coefficient(0), Some(&c0));
        assert!(pairs.iter().all(|(_, c)| !c.is_negative()), "{field} n={n}");

        let v = robin_constant_padic(&field, n);
        for k in std::iter::once(0).chain(n..=-1) {
            assert_eq!(potential_at(&m, k).unwrap(), v, "{field} n={n} k={k}");
        }
    }
}

#[test]
fn potentials_match_direct_integration() {
    for (field, n) in grid() {
        let m = equilibrium_coefficients(&field, n).unwrap();
        let pairs = as_pairs(&m);
        for k in std::iter::once(0).chain(n..=-1) {
            let oracle = ScaledLog::new(potential_oracle(&field, &pairs, k) * field.inv_e(), field.p());
            assert_eq!(potential_at(&m, k).unwrap(), oracle, "{field} n={n} k={k}");
        }
    }
}

#[test]
fn ramified_fields_scale_by_ramification() {
    for e in [2u32, 3] {
        let field = LocalFieldSpec::new(3, e, 1).unwrap();
        let base = LocalFieldSpec::rational(3).unwrap();
        for n in [-3, -1, 0, 2] {
            let v = robin_constant_padic(&field, n);
            let w = robin_constant_padic(&base, n);
            assert_eq!(v.coeff() * int(e as i64), w.coeff().clone());
        }
        let m = equilibrium_coefficients(&field, -2).unwrap();
        let pairs = as_pairs(&m);
        for k in [0, -1, -2] {
            let oracle = ScaledLog::new(potential_oracle(&field, &pairs, k) * field.inv_e(), 3);
            assert_eq!(potential_at(&m, k).unwrap(), oracle);
        }
    }
}

#[test]
fn transformed_rows() {
    // Row k minus 1/(q-1) times the normalization row:
    // -q c_k/(q-1)² + Σ_{l=k}^{-1} (l - 1/(q-1)) c_l + Σ_{l=n}^{k-1} (k - 1/(q-1)) c_l = -1/(q-1).
    for (field, n) in grid() {
        let m = equilibrium_coefficients(&field, n).unwrap();
        let q = field.q_rational();
        let d = BigRational::one() / (&q - BigRational::one());
        let c = |l: i64| m.coefficient(l).unwrap().clone();
        for k in n..=-1 {
            let mut lhs = -(&q * &d * &d * c(k));
            for l in k..=-1 {
                lhs += (int(l) - &d) * c(l);
            }
            for l in n..k {
                lhs += (int(k) - &d) * c(l);
            }
            assert_eq!(lhs, -d.clone(), "{field} n={n} k={k}");
        }
    }
}

#[test]
fn q2_n_minus_two_coefficients() {
    let m = equilibrium_coefficients(&LocalFieldSpec::rational(2).unwrap(), -2).unwrap();
    assert_eq!(m.coefficient(0), Some(&r(11, 16)));
    let rest = m.coefficient(-1).unwrap() + m.coefficient(-2).unwrap();
    assert_eq!(rest, r(5, 16));
}

#[test]
fn nonnegative_n_reduces_to_ball_capacity() {
    for (p, f) in GRID_FIELDS {
        let field = LocalFieldSpec::new(p, 1, f).unwrap();
        for n in 0..6 {
            assert_eq!(robin_constant_padic(&field, n), -capacity_ball(&field, n));
        }
    }
    // Q_p, n = 0: log p / (p - 1).
    for p in [2u64, 3, 5, 7, 11] {
        let v = robin_constant_padic(&LocalFieldSpec::rational(p).unwrap(), 0);
        assert_eq!(v, ScaledLog::new(r(1, p as i64 - 1), p));
    }
}

#[test]
fn shell_ball_decomposition() {
    // Haar on π^n O_K is (1/q) Haar on π^{n+1} O_K plus ((q-1)/q) Haar on the
    // shell, and the potential at π^n of the first part is n log|π|.
    for (p, f) in GRID_FIELDS {
        let field = LocalFieldSpec::new(p, 1, f).unwrap();
        let q = field.q_rational();
        for n in -5..5 {
            let lhs = capacity_ball(&field, n);
            let ball_part = field.times_log_abs_uniformizer(&(int(n) / &q));
            let shell_part = &capacity_shell(&field, n) * &((&q - BigRational::one()) / &q);
            assert_eq!(lhs, &ball_part + &shell_part, "q={q} n={n}");
        }
    }
}

#[test]
fn approach_to_projective_line() {
    let field = LocalFieldSpec::rational(2).unwrap();
    let v = robin_constant_padic(&field, -20);
    assert_eq!(v.coeff(), &((int(2) + field.q_pow(-40)) / int(3)));
    let gap = &v - &robin_limit(&field);
    assert!(gap.coeff().is_positive());
    assert!(gap.to_f64() < 1e-12 * 2f64.ln());
    for (p, f) in GRID_FIELDS {
        let field = LocalFieldSpec::new(p, 1, f).unwrap();
        let limit = robin_limit(&field);
        let mut prev = robin_constant_padic(&field, -1);
        for n in (-12..=-2).rev() {
            let v = robin_constant_padic(&field, n);
            assert!(v < prev && v > limit, "q={} n={n}", field.q());
            prev = v;
        }
    }
}

#[test]
fn json_coefficients_are_fractions() {
    let m = equilibrium_coefficients(&LocalFieldSpec::rational(3).unwrap(), -1).unwrap();
    let json = m.to_json();
    assert_eq!(json["coefficients"]["0"], "7/9");
    assert_eq!(json["coefficients"]["-1"], "2/9");
    let haar = equilibrium_coefficients(&LocalFieldSpec::rational(3).unwrap(), 1).unwrap();
    assert_eq!(haar.to_json()["measure"], "haar");
}
