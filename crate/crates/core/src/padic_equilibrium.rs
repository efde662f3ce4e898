//! Capacities, equilibrium measures and δ-Robin constants of the discs
//! `π^n O_K` in a finite extension `K` of `Q_p`.
//!
//! Everything here is exact: results are [`ScaledLog`] values whose rational
//! coefficient multiplies `log p`.
//!
//! For `n ≥ 0` the disc lies inside `O_K`, where `δ(x, y) = |x - y|`, and the
//! equilibrium measure is the normalized Haar measure `λ_n`. For `n < 0` it is
//! a combination `c_0 λ_0 + c_{-1} ν_{-1} + … + c_n ν_n` of Haar measure on
//! `O_K` and on the shells `π^k O_K^×`, with the `c_k` fixed by requiring the
//! δ-potential to take the same value at `0, π^{-1}, …, π^n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::exact::{self, ExactSolveError};
use crate::kernel::{fraction_string, ScaledLog};

pub use crate::field::LocalFieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PAdicError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("equilibrium system could not be solved: {0}")]
    Solve(#[from] ExactSolveError),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquilibriumCoefficients {
    /// Normalized Haar measure on the disc itself (`n ≥ 0`).
    Haar,
    /// `c_0, c_{-1}, …, c_n`, in that order.
    Shells(Vec<BigRational>),
}

/// The δ-equilibrium measure of `π^n O_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicEquilibriumMeasure {
    field: LocalFieldSpec,
    n: i64,
    coeffs: EquilibriumCoefficients,
}

impl PAdicEquilibriumMeasure {
    pub fn field(&self) -> &LocalFieldSpec {
        &self.field
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn coefficients(&self) -> &EquilibriumCoefficients {
        &self.coeffs
    }

    /// `c_k` for `k ∈ {0, -1, …, n}`; `None` outside that range or for a Haar
    /// measure.
    pub fn coefficient(&self, k: i64) -> Option<&BigRational> {
        match &self.coeffs {
            EquilibriumCoefficients::Haar => None,
            EquilibriumCoefficients::Shells(c) => {
                if k > 0 || k < self.n {
                    None
                } else {
                    c.get(k.unsigned_abs() as usize)
                }
            }
        }
    }

    /// `(k, c_k)` pairs in the order `0, -1, …, n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        let coeffs: &[BigRational] = match &self.coeffs {
            EquilibriumCoefficients::Haar => &[],
            EquilibriumCoefficients::Shells(c) => c,
        };
        coeffs.iter().enumerate().map(|(j, c)| (-(j as i64), c))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("measure serializes")
    }
}

impl Serialize for PAdicEquilibriumMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("p", &self.field.p())?;
        map.serialize_entry("e", &self.field.e())?;
        map.serialize_entry("f", &self.field.f())?;
        map.serialize_entry("n", &self.n)?;
        match &self.coeffs {
            EquilibriumCoefficients::Haar => {
                map.serialize_entry("measure", "haar")?;
            }
            EquilibriumCoefficients::Shells(_) => {
                map.serialize_entry("measure", "shells")?;
                let ordered: Vec<(String, String)> = self
                    .iter()
                    .map(|(k, c)| (k.to_string(), fraction_string(c)))
                    .collect();
                map.serialize_entry("coefficients", &OrderedPairs(&ordered))?;
            }
        }
        map.end()
    }
}

struct OrderedPairs<'a>(&'a [(String, String)]);

impl Serialize for OrderedPairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// `1/(q-1)`.
fn inv_q_minus_one(field: &LocalFieldSpec) -> BigRational {
    (field.q_rational() - BigRational::one()).recip()
}

/// `q/(q-1)²`, the mean of `v(1 - u)` over units `u`.
fn shell_self_term(field: &LocalFieldSpec) -> BigRational {
    let d = inv_q_minus_one(field);
    field.q_rational() * &d * &d
}

/// `log γ_∞(π^n O_K) = (n + 1/(q-1)) log|π|`.
pub fn capacity_ball(field: &LocalFieldSpec, n: i64) -> ScaledLog {
    field.times_log_abs_uniformizer(&(int(n) + inv_q_minus_one(field)))
}

/// `log γ_∞(π^n O_K^×) = (n + q/(q-1)²) log|π|`.
pub fn capacity_shell(field: &LocalFieldSpec, n: i64) -> ScaledLog {
    field.times_log_abs_uniformizer(&(int(n) + shell_self_term(field)))
}

/// `c_0 = (q + q^{2n})/(q + 1)`.
pub fn central_coefficient(field: &LocalFieldSpec, n: i64) -> BigRational {
    let q = field.q_rational();
    (&q + field.q_pow(2 * n)) / (q + BigRational::one())
}

/// Solves for the equilibrium measure of `π^n O_K`. For `n ≥ 0` this is the
/// Haar measure; for `n < 0` the `|n| + 1` coefficients come from an exact
/// linear solve.
pub fn equilibrium_coefficients(
    field: &LocalFieldSpec,
    n: i64,
) -> Result<PAdicEquilibriumMeasure, PAdicError> {
    if n >= 0 {
        return Ok(PAdicEquilibriumMeasure {
            field: *field,
            n,
            coeffs: EquilibriumCoefficients::Haar,
        });
    }
    let (a, b) = equilibrium_system(field, n);
    let c = exact::solve(&a, &b)?;

    let expected = central_coefficient(field, n);
    if c[0] != expected {
        return Err(PAdicError::InvariantViolation(format!(
            "c_0 = {} but (q + q^(2n))/(q + 1) = {}",
            fraction_string(&c[0]),
            fraction_string(&expected)
        )));
    }
    if let Some((j, ck)) = c.iter().enumerate().find(|(_, ck)| ck.is_negative()) {
        return Err(PAdicError::InvariantViolation(format!(
            "c_{} = {} is negative",
            -(j as i64),
            fraction_string(ck)
        )));
    }
    Ok(PAdicEquilibriumMeasure {
        field: *field,
        n,
        coeffs: EquilibriumCoefficients::Shells(c),
    })
}

/// `(A, b)` with unknowns ordered `c_0, c_{-1}, …, c_n`: the normalization
/// row followed by one row per shell `k = -1, …, n`.
pub fn equilibrium_system(field: &LocalFieldSpec, n: i64) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    assert!(n < 0, "shell system needs n < 0");
    let dim = n.unsigned_abs() as usize + 1;
    let idx = |k: i64| k.unsigned_abs() as usize;
    let mut a = vec![vec![BigRational::zero(); dim]; dim];
    let mut b = vec![BigRational::zero(); dim];

    a[0].iter_mut().for_each(|v| *v = BigRational::one());
    b[0] = BigRational::one();

    let d = inv_q_minus_one(field);
    let self_term = shell_self_term(field);
    for k in (n..=-1).rev() {
        let row = &mut a[idx(k)];
        row[0] += &d;
        row[idx(k)] -= &self_term;
        for l in k..=-1 {
            row[idx(l)] += int(l);
        }
        for l in n..k {
            row[idx(l)] += int(k);
        }
    }
    (a, b)
}

/// `U_δ^μ` at `0` (`k = 0`) or at `π^k` (`n ≤ k ≤ -1`).
pub fn potential_at(measure: &PAdicEquilibriumMeasure, k: i64) -> Result<ScaledLog, PAdicError> {
    let field = &measure.field;
    let n = measure.n;
    match &measure.coeffs {
        EquilibriumCoefficients::Haar => {
            if k != 0 {
                return Err(PAdicError::Domain(format!(
                    "Haar measure on π^{n} O_K: only the point 0 (k = 0) is supported, got k = {k}"
                )));
            }
            Ok(-capacity_ball(field, n))
        }
        EquilibriumCoefficients::Shells(c) => {
            if k > 0 || k < n {
                return Err(PAdicError::Domain(format!(
                    "k = {k} is outside {{0, -1, …, {n}}}"
                )));
            }
            let d = inv_q_minus_one(field);
            if k == 0 {
                return Ok(field.times_log_abs_uniformizer(&-(&c[0] * d)));
            }
            let idx = |l: i64| l.unsigned_abs() as usize;
            let mut m = -(shell_self_term(field) * &c[idx(k)]);
            for l in k..=-1 {
                m += int(l) * &c[idx(l)];
            }
            for l in n..k {
                m += int(k) * &c[idx(l)];
            }
            Ok(field.times_log_abs_uniformizer(&m))
        }
    }
}

/// `V_δ(π^n O_K)`.
pub fn robin_constant_padic(field: &LocalFieldSpec, n: i64) -> ScaledLog {
    if n >= 0 {
        return -capacity_ball(field, n);
    }
    let q = field.q_rational();
    let num = &q + field.q_pow(2 * n);
    let den = &q * &q - BigRational::one();
    ScaledLog::new(num / den * field.inv_e(), field.p())
}

/// `V_δ(P¹(K)) = q/((q² - 1) e) · log p`, the limit of `V_δ(π^n O_K)` as
/// `n → -∞`.
pub fn robin_limit(field: &LocalFieldSpec) -> ScaledLog {
    let q = field.q_rational();
    let den = &q * &q - BigRational::one();
    ScaledLog::new(q / den * field.inv_e(), field.p())
}
