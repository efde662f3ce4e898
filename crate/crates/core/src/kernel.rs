//! The spherical metric `δ` on the projective line and the energy kernel
//! `-log δ`, at the archimedean place and at non-archimedean places.
//!
//! In the affine chart,
//!
//! ```text
//! δ(x, y) = |x - y| / (max(1, |x|) · max(1, |y|)),    δ(x, ∞) = 1 / max(1, |x|)
//! ```
//!
//! At a non-archimedean place the ultrametric inequality gives `δ ≤ 1`, so
//! `-log δ ≥ 0`; on the real line `δ` reaches `2` at `(1, -1)` and the kernel
//! is only bounded below by `-log 2`. Non-archimedean kernel values are
//! rational multiples of `log p` and are returned exactly as [`ScaledLog`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::field::LocalFieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("points are indistinguishable at the given digit precision")]
    InsufficientPrecision,
    #[error("points live in different local fields ({0} and {1})")]
    FieldMismatch(String, String),
    #[error("digit {digit} is not a residue class index below q = {q}")]
    DigitOutOfRange { digit: u64, q: u64 },
}

/// A point of `P^1(R)` in the affine chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectivePointReal {
    Finite(f64),
    Infinity,
}

impl From<f64> for ProjectivePointReal {
    fn from(x: f64) -> Self {
        ProjectivePointReal::Finite(x)
    }
}

/// `log max(1, |x|)`
#[inline]
pub fn log_plus(x: f64) -> f64 {
    let a = x.abs();
    if a > 1.0 {
        a.ln()
    } else {
        0.0
    }
}

/// `-log δ(x, y)` on the real projective line. Returns `+∞` when `x = y`.
pub fn neg_log_delta_real(x: ProjectivePointReal, y: ProjectivePointReal) -> f64 {
    use ProjectivePointReal::*;
    match (x, y) {
        (Infinity, Infinity) => f64::INFINITY,
        (Finite(a), Infinity) | (Infinity, Finite(a)) => log_plus(a),
        (Finite(a), Finite(b)) => {
            if a == b {
                return f64::INFINITY;
            }
            // A fixed argument order makes the result exactly symmetric.
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            -(hi - lo).ln() + log_plus(lo) + log_plus(hi)
        }
    }
}

/// An exact quantity `coeff · ln(prime)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledLog {
    coeff: BigRational,
    prime: u64,
}

impl ScaledLog {
    pub fn new(coeff: BigRational, prime: u64) -> Self {
        Self { coeff, prime }
    }

    pub fn zero(prime: u64) -> Self {
        Self::new(BigRational::zero(), prime)
    }

    pub fn from_integer(k: i64, prime: u64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(k)), prime)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::NAN) * (self.prime as f64).ln()
    }

    /// The coefficient as `"num/den"`, or `"num"` when integral.
    pub fn coeff_string(&self) -> String {
        fraction_string(&self.coeff)
    }

    fn check_prime(&self, other: &ScaledLog) {
        assert_eq!(
            self.prime, other.prime,
            "ScaledLog arithmetic across different primes"
        );
    }
}

pub fn fraction_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl PartialOrd for ScaledLog {
    /// Only values over the same prime are comparable.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.prime == other.prime {
            Some(self.coeff.cmp(&other.coeff))
        } else {
            None
        }
    }
}

impl fmt::Display for ScaledLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} · log {}", self.coeff_string(), self.prime)
    }
}

impl Neg for ScaledLog {
    type Output = ScaledLog;
    fn neg(self) -> ScaledLog {
        ScaledLog::new(-self.coeff, self.prime)
    }
}

impl<'a> Add<&'a ScaledLog> for &'a ScaledLog {
    type Output = ScaledLog;
    fn add(self, rhs: &ScaledLog) -> ScaledLog {
        self.check_prime(rhs);
        ScaledLog::new(&self.coeff + &rhs.coeff, self.prime)
    }
}

impl Add for ScaledLog {
    type Output = ScaledLog;
    fn add(self, rhs: ScaledLog) -> ScaledLog {
        &self + &rhs
    }
}

impl<'a> Sub<&'a ScaledLog> for &'a ScaledLog {
    type Output = ScaledLog;
    fn sub(self, rhs: &ScaledLog) -> ScaledLog {
        self.check_prime(rhs);
        ScaledLog::new(&self.coeff - &rhs.coeff, self.prime)
    }
}

impl Sub for ScaledLog {
    type Output = ScaledLog;
    fn sub(self, rhs: ScaledLog) -> ScaledLog {
        &self - &rhs
    }
}

impl<'a> Mul<&'a BigRational> for &'a ScaledLog {
    type Output = ScaledLog;
    fn mul(self, rhs: &BigRational) -> ScaledLog {
        ScaledLog::new(&self.coeff * rhs, self.prime)
    }
}

#[derive(Serialize, Deserialize)]
struct ScaledLogRepr {
    coeff: String,
    prime: u64,
}

impl Serialize for ScaledLog {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScaledLogRepr {
            coeff: self.coeff_string(),
            prime: self.prime,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaledLog {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ScaledLogRepr::deserialize(d)?;
        let coeff = parse_fraction(&repr.coeff).map_err(serde::de::Error::custom)?;
        Ok(ScaledLog::new(coeff, repr.prime))
    }
}

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_fraction(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| format!("bad denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(num, den))
}

/// A ball (or, read as a point, its center) in a non-archimedean field.
///
/// The center is `π^base_valuation · Σ_i digits[i] · π^i`, where each digit
/// indexes a fixed set of residue-class representatives with `0 ↦ 0`. The
/// ball has radius `|π|^(base_valuation + digits.len())`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicBallCode {
    base_valuation: i64,
    digits: Vec<u64>,
    field: LocalFieldSpec,
}

impl PAdicBallCode {
    pub fn new(
        field: LocalFieldSpec,
        base_valuation: i64,
        digits: Vec<u64>,
    ) -> Result<Self, KernelError> {
        if let Some(&digit) = digits.iter().find(|&&d| d >= field.q()) {
            return Err(KernelError::DigitOutOfRange { digit, q: field.q() });
        }
        Ok(Self {
            base_valuation,
            digits,
            field,
        })
    }

    /// The point `u · π^v` for a residue digit `u ≠ 0`.
    pub fn monomial(field: LocalFieldSpec, v: i64, u: u64) -> Result<Self, KernelError> {
        Self::new(field, v, vec![u])
    }

    pub fn field(&self) -> &LocalFieldSpec {
        &self.field
    }

    pub fn base_valuation(&self) -> i64 {
        self.base_valuation
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Exponent `k` of the ball radius `|π|^k`.
    pub fn radius_exponent(&self) -> i64 {
        self.base_valuation + self.digits.len() as i64
    }

    /// Valuation of the center, `None` when the center is `0`.
    pub fn valuation(&self) -> Option<i64> {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .map(|i| self.base_valuation + i as i64)
    }

    fn digit_at(&self, absolute: i64) -> u64 {
        let i = absolute - self.base_valuation;
        if i < 0 || i >= self.digits.len() as i64 {
            0
        } else {
            self.digits[i as usize]
        }
    }

    /// Valuation of the difference of the two centers, `None` if they agree.
    pub fn difference_valuation(&self, other: &PAdicBallCode) -> Option<i64> {
        let lo = self.base_valuation.min(other.base_valuation);
        let hi = self.radius_exponent().max(other.radius_exponent());
        (lo..hi).find(|&v| self.digit_at(v) != other.digit_at(v))
    }

    /// Whether `other`'s center lies in this ball.
    pub fn contains_center_of(&self, other: &PAdicBallCode) -> bool {
        match self.difference_valuation(other) {
            None => true,
            Some(v) => v >= self.radius_exponent(),
        }
    }
}

impl fmt::Display for PAdicBallCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(
            f,
            "pi^{}[{}]+pi^{}O",
            self.base_valuation,
            digits.join("."),
            self.radius_exponent()
        )
    }
}

/// `max(0, -v)`, i.e. `log^+|π^v|` in units of `-log|π|`.
fn log_plus_units(v: Option<i64>) -> i64 {
    v.map_or(0, |v| (-v).max(0))
}

/// `-log δ(x, y)` between the centers of two codes, exactly.
///
/// Writing `v(·)` for valuations, the value is
/// `(v(x - y) + max(0, -v(x)) + max(0, -v(y))) · (log p)/e`.
pub fn neg_log_delta_padic(x: &PAdicBallCode, y: &PAdicBallCode) -> Result<ScaledLog, KernelError> {
    if x.field != y.field {
        return Err(KernelError::FieldMismatch(
            x.field.to_string(),
            y.field.to_string(),
        ));
    }
    let v_diff = x
        .difference_valuation(y)
        .ok_or(KernelError::InsufficientPrecision)?;
    let units = v_diff + log_plus_units(x.valuation()) + log_plus_units(y.valuation());
    let coeff = BigRational::from_integer(BigInt::from(units)) * x.field.inv_e();
    Ok(ScaledLog::new(coeff, x.field.p()))
}
