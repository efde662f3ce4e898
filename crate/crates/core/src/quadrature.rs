//! Adaptive Gauss–Kronrod integration on a finite interval with declared
//! singularities.
//!
//! Three singularity kinds are understood:
//!
//! * [`SingularityKind::InverseSqrtEndpoint`]: `f ~ (x - a)^(-1/2)` at an
//!   endpoint. Pieces touching such an endpoint are integrated in the variable
//!   `θ` with `x = u + (v - u) sin²θ`, which absorbs the square root.
//! * [`SingularityKind::LogPoint`]: an integrable `log|x - c|` singularity.
//!   The interval is split at `c` and the initial mesh is graded
//!   geometrically toward it before adaptive bisection takes over.
//! * [`SingularityKind::RemovablePoint`]: `f` has a finite limit at `c` but
//!   cannot be evaluated there. A symmetric `ε`-interval around `c` is cut out
//!   and replaced by `2ε · limit`.
//!
//! Panels are refined globally (worst error first) until the summed error
//! estimate drops below the absolute tolerance. The final value is summed
//! over the panel list in a fixed order, so results do not depend on the
//! refinement schedule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MIN_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_PANELS: usize = 20_000;

/// Half-width of the excised interval around a removable point, relative to
/// the length of the integration interval.
const REMOVABLE_RELATIVE_HALF_WIDTH: f64 = 1e-7;
const GRADING_RATIO: f64 = 0.25;
const GRADING_LEVELS: i32 = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("tolerance {tol:e} not met: best value {value} with estimated error {error_estimate:e}")]
    ToleranceNotMet {
        value: f64,
        error_estimate: f64,
        tol: f64,
    },
    #[error("integrand is not finite at x = {at:e}, where no singularity was declared")]
    UndeclaredSingularity { at: f64 },
    #[error("invalid integrand: {0}")]
    InvalidSpec(String),
    #[error("tolerance must be at least {MIN_TOL:e}, got {0:e}")]
    InvalidTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularityKind {
    InverseSqrtEndpoint,
    LogPoint,
    RemovablePoint { limit: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub location: f64,
    pub kind: SingularityKind,
}

/// An integrand on `(a, b)` together with its known singular points.
pub struct IntegrandSpec<F> {
    f: F,
    a: f64,
    b: f64,
    singularities: Vec<Singularity>,
}

impl<F: Fn(f64) -> f64> IntegrandSpec<F> {
    pub fn new(f: F, a: f64, b: f64) -> Self {
        Self {
            f,
            a,
            b,
            singularities: Vec::new(),
        }
    }

    pub fn with_singularity(mut self, location: f64, kind: SingularityKind) -> Self {
        self.singularities.push(Singularity { location, kind });
        self
    }

    pub fn inverse_sqrt_endpoint(self, location: f64) -> Self {
        self.with_singularity(location, SingularityKind::InverseSqrtEndpoint)
    }

    pub fn log_point(self, location: f64) -> Self {
        self.with_singularity(location, SingularityKind::LogPoint)
    }

    pub fn removable_point(self, location: f64, limit: f64) -> Self {
        self.with_singularity(location, SingularityKind::RemovablePoint { limit })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(QuadratureError::InvalidSpec(format!(
                "interval ({}, {}) must be finite with a < b",
                self.a, self.b
            )));
        }
        for s in &self.singularities {
            if !(self.a..=self.b).contains(&s.location) {
                return Err(QuadratureError::InvalidSpec(format!(
                    "singularity at {} lies outside [{}, {}]",
                    s.location, self.a, self.b
                )));
            }
            if s.kind == SingularityKind::InverseSqrtEndpoint
                && s.location != self.a
                && s.location != self.b
            {
                return Err(QuadratureError::InvalidSpec(format!(
                    "inverse square root singularity at {} is not an endpoint",
                    s.location
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

pub fn integrate<F: Fn(f64) -> f64>(
    spec: &IntegrandSpec<F>,
    tol: f64,
) -> Result<QuadratureResult, QuadratureError> {
    integrate_with(
        spec,
        QuadratureOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    spec: &IntegrandSpec<F>,
    opts: QuadratureOptions,
) -> Result<QuadratureResult, QuadratureError> {
    if !(opts.tol >= MIN_TOL) {
        return Err(QuadratureError::InvalidTolerance(opts.tol));
    }
    spec.validate()?;
    let (a, b) = (spec.a, spec.b);

    let has = |loc: f64, pred: fn(&SingularityKind) -> bool| {
        spec.singularities
            .iter()
            .any(|s| s.location == loc && pred(&s.kind))
    };
    let isqrt = |loc: f64| has(loc, |k| *k == SingularityKind::InverseSqrtEndpoint);
    let is_log = |loc: f64| has(loc, |k| *k == SingularityKind::LogPoint);

    // Cut points and excised gaps.
    let eps = REMOVABLE_RELATIVE_HALF_WIDTH * (b - a);
    let mut cuts: Vec<f64> = vec![a, b];
    let mut gaps: Vec<(f64, f64, f64)> = Vec::new();
    for s in &spec.singularities {
        match s.kind {
            SingularityKind::LogPoint => cuts.push(s.location),
            SingularityKind::RemovablePoint { limit } => {
                let lo = (s.location - eps).max(a);
                let hi = (s.location + eps).min(b);
                gaps.push((lo, hi, limit));
                cuts.push(lo);
                cuts.push(hi);
            }
            SingularityKind::InverseSqrtEndpoint => {}
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let mut value_parts: Vec<f64> = Vec::new();
    let mut error_total = 0.0;
    let mut evaluations = 0usize;

    // Excised gaps contribute their limit value; the mismatch at the gap
    // edges bounds the error of doing so.
    for &(lo, hi, limit) in &gaps {
        let w = hi - lo;
        value_parts.push(w * limit);
        let mut mismatch = 0.0;
        for x in [lo, hi] {
            if x > a && x < b {
                let y = (spec.f)(x);
                evaluations += 1;
                if y.is_finite() {
                    mismatch = f64::max(mismatch, (y - limit).abs());
                }
            }
        }
        error_total += w * mismatch;
    }

    let mut pieces: Vec<Piece> = Vec::new();
    for pair in cuts.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        if v <= u || gaps.iter().any(|&(lo, hi, _)| u >= lo && v <= hi) {
            continue;
        }
        let left_isqrt = u == a && isqrt(a);
        let right_isqrt = v == b && isqrt(b);
        let map = if left_isqrt || right_isqrt {
            Map::SinSquared { u, v }
        } else {
            Map::Identity { u, v }
        };
        let (s0, s1) = map.param_range(u, v);
        pieces.push(Piece {
            map,
            s0,
            s1,
            grade_left: is_log(u),
            grade_right: is_log(v),
        });
    }

    let mut heap = BinaryHeap::new();
    let f = &spec.f;
    for (idx, piece) in pieces.iter().enumerate() {
        for (lo, hi) in piece.initial_panels() {
            let panel = eval_panel(f, piece.map, idx, lo, hi, &mut evaluations)?;
            heap.push(panel);
        }
    }

    let base_error = error_total;
    let sum_errors = |heap: &BinaryHeap<Panel>| base_error + heap.iter().map(|p| p.error).sum::<f64>();
    let mut current = sum_errors(&heap);
    let mut steps = 0usize;
    while current > opts.tol {
        if heap.len() >= opts.max_panels {
            break;
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            heap.push(worst);
            break;
        }
        let piece = &pieces[worst.piece];
        let left = eval_panel(f, piece.map, worst.piece, worst.lo, mid, &mut evaluations)?;
        let right = eval_panel(f, piece.map, worst.piece, mid, worst.hi, &mut evaluations)?;
        current += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        steps += 1;
        if steps % 64 == 0 || current <= opts.tol {
            current = sum_errors(&heap);
        }
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| {
        x.piece
            .cmp(&y.piece)
            .then(x.lo.partial_cmp(&y.lo).unwrap_or(Ordering::Equal))
    });
    value_parts.extend(panels.iter().map(|p| p.value));
    let value = neumaier_sum(&value_parts);
    let error_estimate = sum_errors_vec(base_error, &panels);

    if error_estimate > opts.tol {
        return Err(QuadratureError::ToleranceNotMet {
            value,
            error_estimate,
            tol: opts.tol,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

fn sum_errors_vec(base: f64, panels: &[Panel]) -> f64 {
    base + panels.iter().map(|p| p.error).sum::<f64>()
}

fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity { u: f64, v: f64 },
    /// `x = u + (v - u) sin²θ` for `θ ∈ [0, π/2]`.
    SinSquared { u: f64, v: f64 },
}

impl Map {
    fn param_range(&self, u: f64, v: f64) -> (f64, f64) {
        match self {
            Map::Identity { .. } => (u, v),
            Map::SinSquared { .. } => (0.0, FRAC_PI_2),
        }
    }

    /// Returns `(x, dx/ds)`. Nodes that round onto a piece endpoint are
    /// moved one ulp inside, so declared singular points are never sampled.
    #[inline]
    fn apply(&self, s: f64) -> (f64, f64) {
        let (x, jac) = self.apply_raw(s);
        let (u, v) = match *self {
            Map::Identity { u, v } | Map::SinSquared { u, v } => (u, v),
        };
        (x.clamp(u.next_up(), v.next_down()), jac)
    }

    #[inline]
    fn apply_raw(&self, s: f64) -> (f64, f64) {
        match *self {
            Map::Identity { .. } => (s, 1.0),
            Map::SinSquared { u, v } => {
                let w = v - u;
                let (sn, cs) = s.sin_cos();
                // Measure from the nearer endpoint to keep x - u or v - x accurate.
                let x = if s < 0.25 * std::f64::consts::PI {
                    u + w * sn * sn
                } else {
                    v - w * cs * cs
                };
                (x, 2.0 * w * sn * cs)
            }
        }
    }
}

struct Piece {
    map: Map,
    s0: f64,
    s1: f64,
    grade_left: bool,
    grade_right: bool,
}

impl Piece {
    /// Initial mesh, geometrically graded toward logarithmic endpoints.
    fn initial_panels(&self) -> Vec<(f64, f64)> {
        let (s0, s1) = (self.s0, self.s1);
        match (self.grade_left, self.grade_right) {
            (false, false) => vec![(s0, s1)],
            (true, false) => graded(s0, s1, true),
            (false, true) => graded(s0, s1, false),
            (true, true) => {
                let mid = 0.5 * (s0 + s1);
                let mut out = graded(s0, mid, true);
                out.extend(graded(mid, s1, false));
                out
            }
        }
    }
}

fn graded(s0: f64, s1: f64, toward_left: bool) -> Vec<(f64, f64)> {
    let len = s1 - s0;
    let mut marks: Vec<f64> = (1..=GRADING_LEVELS)
        .map(|k| len * GRADING_RATIO.powi(k))
        .map(|d| if toward_left { s0 + d } else { s1 - d })
        .collect();
    marks.push(s0);
    marks.push(s1);
    marks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    marks.dedup();
    marks.windows(2).map(|w| (w[0], w[1])).collect()
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    piece: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
            .then_with(|| other.piece.cmp(&self.piece))
    }
}

fn eval_panel<F: Fn(f64) -> f64>(
    f: &F,
    map: Map,
    piece: usize,
    lo: f64,
    hi: f64,
    evaluations: &mut usize,
) -> Result<Panel, QuadratureError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut eval = |s: f64| -> Result<f64, QuadratureError> {
        let (x, jac) = map.apply(s);
        let y = f(x);
        *evaluations += 1;
        if !y.is_finite() {
            return Err(QuadratureError::UndeclaredSingularity { at: x });
        }
        Ok(y * jac)
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    let floor = 10.0 * f64::EPSILON * abs_sum * half.abs();
    Ok(Panel {
        piece,
        lo,
        hi,
        value,
        error: raw.max(floor),
    })
}

// 15-point Kronrod abscissae (descending, the last is the center) and
// weights, with the embedded 7-point Gauss weights. Values from QUADPACK.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// A probability density on `[-r, r]` whose singular structure is known:
/// inverse square root blow-up at `±r`, logarithmic blow-up at `±1` when
/// `r > 1`, and a removable point at `0`.
pub trait IntervalDensity {
    fn half_width(&self) -> f64;
    /// Density value at `x`, `|x| < r`.
    fn density(&self, x: f64) -> f64;
}

/// `∫ g·h` over `[-r, r]` with the density's singular points pre-declared.
///
/// `±1` are declared as logarithmic points whenever `r > 1`, whether or not
/// the density itself is singular there, since every field weight in use
/// (`log^+|x|`) has a kink at `±1`. `h` must be continuous at `0`.
pub fn integrate_against_density<D, H>(g: &D, h: H, tol: f64) -> Result<f64, QuadratureError>
where
    D: IntervalDensity + ?Sized,
    H: Fn(f64) -> f64,
{
    let r = g.half_width();
    if !(r > 0.0 && r.is_finite()) {
        return Err(QuadratureError::InvalidSpec(format!(
            "density half-width must be positive, got {r}"
        )));
    }
    let limit = g.density(0.0) * h(0.0);
    let mut spec = IntegrandSpec::new(|x: f64| g.density(x) * h(x), -r, r)
        .inverse_sqrt_endpoint(-r)
        .inverse_sqrt_endpoint(r)
        .removable_point(0.0, limit);
    if r > 1.0 {
        spec = spec.log_point(-1.0).log_point(1.0);
    }
    integrate(&spec, tol).map(|res| res.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn arcsine_total_mass() {
        let spec = IntegrandSpec::new(|x: f64| 1.0 / (1.0 - x * x).sqrt(), -1.0, 1.0)
            .inverse_sqrt_endpoint(-1.0)
            .inverse_sqrt_endpoint(1.0);
        let res = integrate(&spec, 1e-12).unwrap();
        assert!((res.value - PI).abs() <= 1e-12, "{}", res.value);
        assert!(res.error_estimate <= 1e-12);
        assert!(res.evaluations > 0);
    }

    /// Refined trapezoid rule on the substituted variable `x = 2 - s²`,
    /// where the integrand becomes `2 log(2 - s²) / sqrt(4 - s²)` on [0, 1].
    fn log_over_sqrt_trapezoid(panels: usize) -> f64 {
        let g = |s: f64| 2.0 * (2.0 - s * s).ln() / (4.0 - s * s).sqrt();
        let h = 1.0 / panels as f64;
        let inner: f64 = (1..panels).map(|i| g(i as f64 * h)).sum();
        h * (0.5 * (g(0.0) + g(1.0)) + inner)
    }

    #[test]
    fn log_times_inverse_sqrt_matches_trapezoid() {
        let oracle = log_over_sqrt_trapezoid(1_000_000);
        let spec = IntegrandSpec::new(|x: f64| x.ln() / (4.0 - x * x).sqrt(), 1.0, 2.0)
            .inverse_sqrt_endpoint(2.0);
        let res = integrate(&spec, 1e-12).unwrap();
        assert!((res.value - oracle).abs() < 1e-10, "{} vs {}", res.value, oracle);
    }

    #[test]
    fn interior_log_point_against_arcsine() {
        // The arcsine law on [-2, 2] has capacity 1: its potential vanishes.
        let spec = IntegrandSpec::new(
            |x: f64| x.abs().ln() / (PI * (4.0 - x * x).sqrt()),
            -2.0,
            2.0,
        )
        .inverse_sqrt_endpoint(-2.0)
        .inverse_sqrt_endpoint(2.0)
        .log_point(0.0);
        let res = integrate(&spec, 1e-10).unwrap();
        assert!(res.value.abs() < 1e-10, "{}", res.value);
    }

    #[test]
    fn removable_point_uses_limit() {
        let spec = IntegrandSpec::new(
            |x: f64| if x == 0.0 { f64::NAN } else { x.sin() / x },
            -1.0,
            1.0,
        )
        .removable_point(0.0, 1.0);
        let res = integrate(&spec, 1e-12).unwrap();
        // Si(1) = 0.946083070367183...
        assert!((res.value - 2.0 * 0.946_083_070_367_183_0).abs() < 1e-12);
    }

    #[test]
    fn undeclared_singularity_is_reported() {
        let spec = IntegrandSpec::new(|x: f64| if x > 0.3 { f64::NAN } else { x }, 0.0, 1.0);
        assert!(matches!(
            integrate(&spec, 1e-10),
            Err(QuadratureError::UndeclaredSingularity { at }) if at > 0.3
        ));
    }

    #[test]
    fn budget_exhaustion_reports_best_value() {
        let spec = IntegrandSpec::new(|x: f64| (50.0 * x).sin(), 0.0, 10.0);
        let err = integrate_with(
            &spec,
            QuadratureOptions {
                tol: 1e-14,
                max_panels: 3,
            },
        )
        .unwrap_err();
        match err {
            QuadratureError::ToleranceNotMet {
                value,
                error_estimate,
                ..
            } => {
                assert!(value.is_finite());
                assert!(error_estimate > 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs() {
        let f = |x: f64| x;
        assert!(matches!(
            integrate(&IntegrandSpec::new(f, 1.0, 0.0), 1e-10),
            Err(QuadratureError::InvalidSpec(_))
        ));
        assert!(matches!(
            integrate(&IntegrandSpec::new(f, 0.0, 1.0).inverse_sqrt_endpoint(0.5), 1e-10),
            Err(QuadratureError::InvalidSpec(_))
        ));
        assert!(matches!(
            integrate(&IntegrandSpec::new(f, 0.0, 1.0).log_point(2.0), 1e-10),
            Err(QuadratureError::InvalidSpec(_))
        ));
        assert_eq!(
            integrate(&IntegrandSpec::new(f, 0.0, 1.0), 1e-15),
            Err(QuadratureError::InvalidTolerance(1e-15))
        );
    }

    #[test]
    fn log_point_at_endpoint() {
        // ∫_0^1 log x dx = -1
        let spec = IntegrandSpec::new(|x: f64| x.ln(), 0.0, 1.0).log_point(0.0);
        let res = integrate(&spec, 1e-12).unwrap();
        assert!((res.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_refinement_on_corpus() {
        let cases: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64, bool, bool)> = vec![
            (Box::new(|x: f64| x.abs().ln()), -1.0, 2.0, 2f64.ln() * 2.0 - 3.0, false, true),
            (
                Box::new(|x: f64| 1.0 / (1.0 - x * x).sqrt()),
                -1.0,
                1.0,
                PI,
                true,
                false,
            ),
        ];
        for (f, a, b, exact, isq, logp) in cases {
            let mut spec = IntegrandSpec::new(f, a, b);
            if isq {
                spec = spec.inverse_sqrt_endpoint(a).inverse_sqrt_endpoint(b);
            }
            if logp {
                spec = spec.log_point(0.0);
            }
            let mut last = f64::INFINITY;
            let mut tol = 1e-4;
            while tol >= 1e-12 {
                let err = (integrate(&spec, tol).unwrap().value - exact).abs();
                assert!(err <= last + 1e-15, "tol {tol}: {err} > {last}");
                assert!(err <= tol);
                last = err;
                tol /= 2.0;
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_integral(c: &[f64], a: f64, b: f64) -> f64 {
            c.iter()
                .enumerate()
                .map(|(k, ck)| ck * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
                .sum()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn false_endpoint_declaration_is_harmless(
                coeffs in prop::collection::vec(-3.0f64..3.0, 1..6),
                a in -2.0f64..0.0,
                w in 0.5f64..3.0,
                left in any::<bool>(),
            ) {
                let b = a + w;
                let c = coeffs.clone();
                let f = move |x: f64| c.iter().rev().fold(0.0, |acc, ck| acc * x + ck);
                let mut spec = IntegrandSpec::new(f, a, b);
                spec = if left { spec.inverse_sqrt_endpoint(a) } else {
                    spec.inverse_sqrt_endpoint(a).inverse_sqrt_endpoint(b)
                };
                let tol = 1e-10;
                let got = integrate(&spec, tol).unwrap().value;
                prop_assert!((got - poly_integral(&coeffs, a, b)).abs() <= tol);
            }

            #[test]
            fn even_function_symmetry(r in 0.5f64..4.0, k in 0.1f64..3.0) {
                let tol = 1e-10;
                let f = move |x: f64| (k * x * x).cos() / (r * r - x * x).sqrt();
                let whole = IntegrandSpec::new(f, -r, r)
                    .inverse_sqrt_endpoint(-r)
                    .inverse_sqrt_endpoint(r);
                let half = IntegrandSpec::new(f, 0.0, r).inverse_sqrt_endpoint(r);
                let w = integrate(&whole, tol).unwrap().value;
                let h = integrate(&half, tol).unwrap().value;
                prop_assert!((w - 2.0 * h).abs() <= 2.0 * tol);
            }
        }
    }
}
