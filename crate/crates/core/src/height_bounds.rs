//! Global lower bounds for the height of algebraic numbers whose conjugates
//! lie in prescribed sets at finitely many places, and the classical bounds
//! they are compared against.
//!
//! If every conjugate of `α` lies in `E_v` at each place `v` of a finite set,
//! then `liminf h(α) ≥ ½ Σ_v N_v V_δ(E_v)`. The report assembled here
//! evaluates that right-hand side. Whether infinitely many such `α` exist is
//! not checked; see [`BoundReport::notes`].

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::field::{is_prime, LocalFieldSpec};
use crate::kernel::{fraction_string, ScaledLog};
use crate::padic_equilibrium::robin_constant_padic;
use crate::quadrature::DEFAULT_TOL;
use crate::real_equilibrium::{robin_constant_real_with_tol, RealError, RealIntervalSpec};

/// `ζ(3)` to 30 significant digits (Apéry's constant).
pub const ZETA_3: f64 = 1.202_056_903_159_594_285_399_738_161_51;

/// The golden ratio `(1 + √5)/2` to 30 significant digits.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_894_848_204_586_834_37;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HeightError {
    #[error("prime {0} appears at more than one place")]
    DuplicatePrime(u64),
    #[error("at most one archimedean place is allowed")]
    MultipleArchimedean,
    #[error("weight {0} is not in (0, 1]")]
    InvalidWeight(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the set of primes is empty")]
    EmptyPrimeSet,
    #[error(transparent)]
    Real(#[from] RealError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlaceKind {
    /// Conjugates in `[-r, r]` at the real place.
    Archimedean(RealIntervalSpec),
    /// Conjugates in `π^n O_K` at a place above `p`.
    NonArchimedean { field: LocalFieldSpec, n: i64 },
}

/// One place together with its local degree weight `N_v = [K_v : Q_v]/[K : Q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaceSpec {
    kind: PlaceKind,
    weight: BigRational,
}

impl PlaceSpec {
    pub fn new(kind: PlaceKind, weight: BigRational) -> Result<Self, HeightError> {
        if !weight.is_positive() || weight > BigRational::one() {
            return Err(HeightError::InvalidWeight(fraction_string(&weight)));
        }
        Ok(Self { kind, weight })
    }

    pub fn archimedean(spec: RealIntervalSpec) -> Self {
        Self {
            kind: PlaceKind::Archimedean(spec),
            weight: BigRational::one(),
        }
    }

    pub fn nonarchimedean(field: LocalFieldSpec, n: i64) -> Self {
        Self {
            kind: PlaceKind::NonArchimedean { field, n },
            weight: BigRational::one(),
        }
    }

    pub fn with_weight(self, weight: BigRational) -> Result<Self, HeightError> {
        Self::new(self.kind, weight)
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaceParameters {
    Archimedean { r: f64 },
    Nonarchimedean { p: u64, e: u32, f: u32, n: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaceContribution {
    #[serde(flatten)]
    pub parameters: PlaceParameters,
    pub weight: String,
    /// Exact value for non-archimedean places.
    pub v_delta_exact: Option<ScaledLog>,
    pub v_delta_float: f64,
    /// `½ N_v V_δ(E_v)`.
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceBound {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub schema_version: &'static str,
    pub per_place: Vec<PlaceContribution>,
    pub total: f64,
    pub references: Vec<ReferenceBound>,
    pub notes: Vec<String>,
}

pub fn global_lower_bound(places: &[PlaceSpec]) -> Result<BoundReport, HeightError> {
    global_lower_bound_with_tol(places, DEFAULT_TOL)
}

/// `½ Σ_v N_v V_δ(E_v)`, with reference bounds for the same set of places.
pub fn global_lower_bound_with_tol(places: &[PlaceSpec], tol: f64) -> Result<BoundReport, HeightError> {
    let mut primes = BTreeSet::new();
    let mut has_archimedean = false;
    for place in places {
        match &place.kind {
            PlaceKind::Archimedean(_) => {
                if has_archimedean {
                    return Err(HeightError::MultipleArchimedean);
                }
                has_archimedean = true;
            }
            PlaceKind::NonArchimedean { field, .. } => {
                if !primes.insert(field.p()) {
                    return Err(HeightError::DuplicatePrime(field.p()));
                }
            }
        }
    }

    let half = BigRational::new(1.into(), 2.into());
    let mut per_place = Vec::with_capacity(places.len());
    for place in places {
        let weight = place.weight.to_f64().expect("weight is finite");
        let entry = match &place.kind {
            PlaceKind::Archimedean(spec) => {
                let v = robin_constant_real_with_tol(spec, tol)?;
                PlaceContribution {
                    parameters: PlaceParameters::Archimedean { r: spec.r() },
                    weight: fraction_string(&place.weight),
                    v_delta_exact: None,
                    v_delta_float: v,
                    contribution: 0.5 * weight * v,
                }
            }
            PlaceKind::NonArchimedean { field, n } => {
                let v = robin_constant_padic(field, *n);
                let contribution = &v * &(&place.weight * &half);
                PlaceContribution {
                    parameters: PlaceParameters::Nonarchimedean {
                        p: field.p(),
                        e: field.e(),
                        f: field.f(),
                        n: *n,
                    },
                    weight: fraction_string(&place.weight),
                    v_delta_float: v.to_f64(),
                    v_delta_exact: Some(v),
                    contribution: contribution.to_f64(),
                }
            }
        };
        per_place.push(entry);
    }
    let total = per_place.iter().map(|p| p.contribution).sum();

    let mut references = Vec::new();
    if has_archimedean {
        references.push(ReferenceBound {
            name: "schinzel".into(),
            value: reference_schinzel(),
        });
    }
    let prime_list: Vec<u64> = primes.iter().copied().collect();
    if !prime_list.is_empty() {
        references.push(ReferenceBound {
            name: "bombieri_zannier".into(),
            value: reference_bombieri_zannier(&prime_list)?,
        });
    }
    if has_archimedean || !prime_list.is_empty() {
        references.push(ReferenceBound {
            name: "whole_field".into(),
            value: reference_whole_field(&prime_list, has_archimedean)?,
        });
    }

    let mut notes = Vec::new();
    if !places.is_empty() {
        notes.push(
            "no place uses all of Q_p, so infinitude of the admissible set of algebraic numbers \
             is not guaranteed by the simple sufficient condition; the bound holds regardless"
                .to_string(),
        );
    }

    Ok(BoundReport {
        schema_version: SCHEMA_VERSION,
        per_place,
        total,
        references,
        notes,
    })
}

/// `½ log((1 + √5)/2)`, the lower bound for totally real `α ≠ 0, ±1`.
pub fn reference_schinzel() -> f64 {
    0.5 * GOLDEN_RATIO.ln()
}

/// `½ Σ_{p ∈ S} log p / (p + 1)`, the bound for numbers that are totally
/// `p`-adic at every `p ∈ S`.
pub fn reference_bombieri_zannier(primes: &[u64]) -> Result<f64, HeightError> {
    if primes.is_empty() {
        return Err(HeightError::EmptyPrimeSet);
    }
    check_primes(primes)?;
    Ok(0.5 * primes.iter().map(|&p| (p as f64).ln() / (p as f64 + 1.0)).sum::<f64>())
}

/// `½ Σ_{p ∈ S} p log p / (p² - 1)`, plus `7ζ(3)/(4π²)` when the real place
/// is included: the bound when conjugates are only required to lie in `Q_p`
/// and `R`, i.e. the Robin constants of the whole projective lines.
pub fn reference_whole_field(primes: &[u64], include_infinity: bool) -> Result<f64, HeightError> {
    check_primes(primes)?;
    let finite: f64 = primes
        .iter()
        .map(|&p| {
            let p = p as f64;
            p * p.ln() / (p * p - 1.0)
        })
        .sum();
    let infinite = if include_infinity {
        7.0 * ZETA_3 / (4.0 * PI * PI)
    } else {
        0.0
    };
    Ok(0.5 * finite + infinite)
}

fn check_primes(primes: &[u64]) -> Result<(), HeightError> {
    let mut seen = BTreeSet::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(HeightError::NotPrime(p));
        }
        if !seen.insert(p) {
            return Err(HeightError::DuplicatePrime(p));
        }
    }
    Ok(())
}
