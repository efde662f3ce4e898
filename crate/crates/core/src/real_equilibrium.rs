//! The δ-equilibrium measure of a symmetric interval `[-r, r]` and its
//! δ-Robin constant.
//!
//! On `[-r, r]` the spherical kernel splits as
//! `-log δ(x, y) = -log|x - y| + log^+|x| + log^+|y|`, so the problem is the
//! classical logarithmic energy problem in the external field `log^+|x|`.
//! For `r < 1` the field vanishes on the set and the minimizer is the arcsine
//! law. For `r ≥ 1` the minimizer has density
//!
//! ```text
//! G(x) = 2 arcsin(1/r) / (π² √(r² - x²))
//!      + 1/(π² x) · log|(x+1)(r² - x + √(r² - x²)√(r² - 1)) / ((x-1)(r² + x + √(r² - x²)√(r² - 1)))|
//! ```
//!
//! which blows up like `(r² - x²)^(-1/2)` at `±r`, logarithmically at `±1`,
//! and has a removable singularity at `0`.

use std::f64::consts::PI;

use crate::kernel::log_plus;
use crate::quadrature::{
    integrate, integrate_against_density, IntegrandSpec, IntervalDensity, QuadratureError,
    DEFAULT_TOL,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RealError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Below this distance from `0` the density's `log(…)/x` term is replaced
/// by its limit.
const REMOVABLE_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `r < 1`: the arcsine law, `V_δ = log(2/r)`.
    Classical,
    /// `r ≥ 1`: the external field `log^+|x|` is active on the set.
    Weighted,
}

/// The interval `[-r, r]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealIntervalSpec {
    r: f64,
}

impl RealIntervalSpec {
    pub fn new(r: f64) -> Result<Self, RealError> {
        if r > 0.0 && r.is_finite() {
            Ok(Self { r })
        } else {
            Err(RealError::Domain(format!(
                "half-width must be positive and finite, got {r}"
            )))
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn regime(&self) -> Regime {
        if self.r >= 1.0 {
            Regime::Weighted
        } else {
            Regime::Classical
        }
    }

    fn contains_open(&self, x: f64) -> bool {
        x.abs() < self.r
    }
}

/// `r² - x²`, formed as a product to stay accurate near `±r`.
#[inline]
fn gap(r: f64, x: f64) -> f64 {
    (r - x) * (r + x)
}

/// `log|(x+1)/(x-1)|`.
#[inline]
fn log_ratio_unit(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        2.0 * x.atanh()
    } else if a > 1.0 {
        2.0 * (1.0 / x).atanh()
    } else {
        x.signum() * f64::INFINITY
    }
}

/// The logarithm in the second term of `G`, written with `atanh` and
/// `ln_1p` so that it stays accurate as `x → 0`.
fn log_factor(r: f64, x: f64) -> f64 {
    let s = (r * r - 1.0).sqrt() * gap(r, x).sqrt();
    log_ratio_unit(x) + (-2.0 * x / (r * r + x + s)).ln_1p()
}

/// `lim_{x→0} log_factor(r, x) / x`.
fn log_factor_slope_at_zero(r: f64) -> f64 {
    2.0 - 2.0 / (r * r + r * (r * r - 1.0).sqrt())
}

fn density_unchecked(r: f64, x: f64) -> f64 {
    let x = x.abs();
    if r < 1.0 {
        return 1.0 / (PI * gap(r, x).sqrt());
    }
    let pi2 = PI * PI;
    let arcsine_part = 2.0 * (1.0 / r).asin() / (pi2 * gap(r, x).sqrt());
    let field_part = if x < REMOVABLE_CUTOFF {
        log_factor_slope_at_zero(r)
    } else {
        log_factor(r, x) / x
    };
    arcsine_part + field_part / pi2
}

/// `dμ/dx` of the δ-equilibrium measure of `[-r, r]` at `x`.
///
/// Returns `+∞` at `x = ±1` when `r > 1`; those singularities are integrable.
pub fn density_at(spec: &RealIntervalSpec, x: f64) -> Result<f64, RealError> {
    if !spec.contains_open(x) {
        return Err(RealError::Domain(format!(
            "x = {x} is not inside (-{r}, {r})",
            r = spec.r
        )));
    }
    Ok(density_unchecked(spec.r, x))
}

/// The antiderivative in `s` of `(2/π²) √(1-t²) / (√(1-s²)(s²-t²))`:
///
/// ```text
/// F_t(s) = 1/(π² t) · log|(s-t)(1 + st + √(1-t²)√(1-s²)) / ((s+t)(1 - st + √(1-t²)√(1-s²)))|
/// ```
///
/// At `s = ±t` the value is a signed infinity.
pub fn antiderivative_f(t: f64, s: f64) -> Result<f64, RealError> {
    if !(t != 0.0 && t.abs() < 1.0) {
        return Err(RealError::Domain(format!(
            "t = {t} must satisfy 0 < |t| < 1"
        )));
    }
    if !(s.abs() <= 1.0) {
        return Err(RealError::Domain(format!("s = {s} must satisfy |s| ≤ 1")));
    }
    let root = (gap(1.0, t) * gap(1.0, s)).sqrt();
    let log = (s - t).abs().ln() - (s + t).abs().ln() + (1.0 + s * t + root).ln()
        - (1.0 - s * t + root).ln();
    Ok(log / (PI * PI * t))
}

/// The arcsine law `dx / (π √(r² - x²))` on `[-r, r]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcsineDensity {
    pub r: f64,
}

impl IntervalDensity for ArcsineDensity {
    fn half_width(&self) -> f64 {
        self.r
    }

    fn density(&self, x: f64) -> f64 {
        1.0 / (PI * gap(self.r, x).sqrt())
    }
}

/// Constants of the integral-equation solution on `[-1, 1]` for `r ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxConstants {
    /// `B_f = (2/π) arcsin(1/r)`, the mass carried by the arcsine part.
    pub b_f: f64,
    /// `C_f = (2/π) ∫_1^r log x / √(r² - x²) dx + log 2`.
    pub c_f: f64,
}

/// The δ-equilibrium measure of `[-r, r]` together with its Robin constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEquilibriumMeasure {
    spec: RealIntervalSpec,
    robin: f64,
    aux: Option<AuxConstants>,
}

impl RealEquilibriumMeasure {
    pub fn new(spec: RealIntervalSpec) -> Result<Self, RealError> {
        Self::with_tol(spec, DEFAULT_TOL)
    }

    pub fn with_tol(spec: RealIntervalSpec, tol: f64) -> Result<Self, RealError> {
        let robin = robin_constant_real_with_tol(&spec, tol)?;
        let aux = match spec.regime() {
            Regime::Classical => None,
            Regime::Weighted => Some(AuxConstants {
                b_f: 2.0 / PI * (1.0 / spec.r).asin(),
                c_f: 2.0 / PI * field_integral(spec.r, tol)? + 2f64.ln(),
            }),
        };
        Ok(Self { spec, robin, aux })
    }

    pub fn spec(&self) -> &RealIntervalSpec {
        &self.spec
    }

    /// `V_δ([-r, r])`.
    pub fn robin(&self) -> f64 {
        self.robin
    }

    pub fn aux(&self) -> Option<&AuxConstants> {
        self.aux.as_ref()
    }

    pub fn density_at(&self, x: f64) -> Result<f64, RealError> {
        density_at(&self.spec, x)
    }
}

impl IntervalDensity for RealEquilibriumMeasure {
    fn half_width(&self) -> f64 {
        self.spec.r
    }

    fn density(&self, x: f64) -> f64 {
        density_unchecked(self.spec.r, x)
    }
}

/// A bare density handle for a spec, without computing the Robin constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumDensity(pub RealIntervalSpec);

impl IntervalDensity for EquilibriumDensity {
    fn half_width(&self) -> f64 {
        self.0.r
    }

    fn density(&self, x: f64) -> f64 {
        density_unchecked(self.0.r, x)
    }
}

/// `∫_1^r log x / √(r² - x²) dx`, zero for `r ≤ 1`.
fn field_integral(r: f64, tol: f64) -> Result<f64, QuadratureError> {
    if r <= 1.0 {
        return Ok(0.0);
    }
    let spec = IntegrandSpec::new(|x: f64| x.ln() / gap(r, x).sqrt(), 1.0, r).inverse_sqrt_endpoint(r);
    Ok(integrate(&spec, tol)?.value)
}

/// `∫_1^r G(x) log x dx`, zero for `r ≤ 1`.
fn weighted_tail_integral(r: f64, tol: f64) -> Result<f64, QuadratureError> {
    if r <= 1.0 {
        return Ok(0.0);
    }
    let spec = IntegrandSpec::new(|x: f64| density_unchecked(r, x) * x.ln(), 1.0, r)
        .inverse_sqrt_endpoint(r)
        .log_point(1.0);
    Ok(integrate(&spec, tol)?.value)
}

pub fn robin_constant_real(spec: &RealIntervalSpec) -> Result<f64, RealError> {
    robin_constant_real_with_tol(spec, DEFAULT_TOL)
}

/// `V_δ([-r, r])`.
///
/// For `r ≥ 1` this is `log(2/r) + (2/π) ∫_1^r log x / √(r² - x²) dx + 2 ∫_1^r G(x) log x dx`;
/// for `r < 1` it is `log(2/r)`, minus the log of the capacity `r/2`.
pub fn robin_constant_real_with_tol(spec: &RealIntervalSpec, tol: f64) -> Result<f64, RealError> {
    let r = spec.r;
    let base = (2.0 / r).ln();
    match spec.regime() {
        Regime::Classical => Ok(base),
        Regime::Weighted => {
            Ok(base + 2.0 / PI * field_integral(r, tol)? + 2.0 * weighted_tail_integral(r, tol)?)
        }
    }
}

/// The value the weighted potential takes on the whole interval:
/// `log(2/r) + (2/π) ∫_1^r log x / √(r² - x²) dx`.
pub fn potential_constant(spec: &RealIntervalSpec) -> Result<f64, RealError> {
    potential_constant_with_tol(spec, DEFAULT_TOL)
}

pub fn potential_constant_with_tol(spec: &RealIntervalSpec, tol: f64) -> Result<f64, RealError> {
    Ok((2.0 / spec.r).ln() + 2.0 / PI * field_integral(spec.r, tol)?)
}

pub fn weighted_potential(spec: &RealIntervalSpec, y: f64) -> Result<f64, RealError> {
    weighted_potential_with_tol(spec, y, DEFAULT_TOL)
}

/// `-∫ G(x) log|x - y| dx + log^+|y|` for `y ∈ [-r, r]`.
///
/// The equilibrium condition makes this equal to [`potential_constant`] for
/// every `y` in the interval.
pub fn weighted_potential_with_tol(
    spec: &RealIntervalSpec,
    y: f64,
    tol: f64,
) -> Result<f64, RealError> {
    let r = spec.r;
    if !(y.abs() <= r) {
        return Err(RealError::Domain(format!(
            "y = {y} is not inside [-{r}, {r}]"
        )));
    }
    let mut integrand = IntegrandSpec::new(
        |x: f64| density_unchecked(r, x) * (x - y).abs().ln(),
        -r,
        r,
    )
    .inverse_sqrt_endpoint(-r)
    .inverse_sqrt_endpoint(r)
    .log_point(y);
    if r > 1.0 {
        integrand = integrand.log_point(-1.0).log_point(1.0);
    }
    let log_potential = integrate(&integrand, tol)?.value;
    Ok(-log_potential + log_plus(y))
}

/// `∫_0^t G(x) dx` for `0 ≤ t ≤ r`.
fn mass_from_zero(r: f64, t: f64, tol: f64) -> Result<f64, QuadratureError> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut spec = IntegrandSpec::new(move |x: f64| density_unchecked(r, x), 0.0, t);
    if t == r {
        spec = spec.inverse_sqrt_endpoint(t);
    }
    if r > 1.0 && t >= 1.0 {
        spec = spec.log_point(1.0);
    }
    Ok(integrate(&spec, tol)?.value)
}

/// Equilibrium mass of `[a, b] ⊆ [-r, r]`.
pub fn mass_between(spec: &RealIntervalSpec, a: f64, b: f64, tol: f64) -> Result<f64, RealError> {
    let r = spec.r;
    if !(-r <= a && a <= b && b <= r) {
        return Err(RealError::Domain(format!(
            "[{a}, {b}] is not a subinterval of [-{r}, {r}]"
        )));
    }
    let signed = |x: f64| -> Result<f64, QuadratureError> {
        Ok(x.signum() * mass_from_zero(r, x.abs(), tol)?)
    };
    Ok(signed(b)? - signed(a)?)
}

pub fn arcsine_height_integral(spec: &RealIntervalSpec) -> Result<f64, RealError> {
    arcsine_height_integral_with_tol(spec, DEFAULT_TOL)
}

/// `∫ log^+|x| dx / (π √(r² - x²))` over `[-r, r]`: the limiting height of
/// algebraic integers equidistributed by the arcsine law.
pub fn arcsine_height_integral_with_tol(spec: &RealIntervalSpec, tol: f64) -> Result<f64, RealError> {
    if spec.r <= 1.0 {
        return Ok(0.0);
    }
    Ok(integrate_against_density(
        &ArcsineDensity { r: spec.r },
        log_plus,
        tol,
    )?)
}
