//! Brute-force check of the equilibrium results: discretize the set, minimize
//! the discrete δ-energy `wᵀ A w` over the probability simplex, and compare
//! with the analytic Robin constants and measures.
//!
//! Entry `A_ij` is the δ-energy between the normalized uniform (real) or Haar
//! (p-adic) measures on cells `i` and `j`. Off the diagonal the kernel is
//! evaluated between cell representatives; on the diagonal it is the exact
//! self-energy of the cell. In the p-adic case both are exact, so the
//! discrete minimum equals `V_δ` whenever the equilibrium measure is
//! piecewise Haar on the cells.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{self, ExactSolveError};
use crate::field::LocalFieldSpec;
use crate::kernel::{fraction_string, log_plus, neg_log_delta_padic, neg_log_delta_real, PAdicBallCode, ScaledLog};
use crate::padic_equilibrium::capacity_ball;
use crate::quadrature::QuadratureError;
use crate::real_equilibrium::{mass_between, RealError, RealIntervalSpec};

/// Fewest cells accepted for the real discretization.
pub const MIN_REAL_CELLS: usize = 10;

/// Most leaves accepted for the p-adic discretization.
pub const MAX_PADIC_LEAVES: usize = 10_000;

/// Stationarity target on the support of the real minimizer.
pub const REAL_RESIDUAL_TOL: f64 = 1e-8;

/// Slack allowed in `(Aw)_i ≥ wᵀAw` off the support.
pub const KKT_SLACK: f64 = 1e-6;

const MAX_ACTIVE_SET_ROUNDS: usize = 64;

/// Number of equal-mass bins used by [`compare_measure_real`].
pub const COMPARISON_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("at least {MIN_REAL_CELLS} cells are required, got {0}")]
    TooFewCells(usize),
    #[error("disc π^{n} O_K is not a proper superset of O_K")]
    NonNegativeExponent { n: i64 },
    #[error("depth must be at least 1, got {0}")]
    BadDepth(i64),
    #[error("{leaves} leaves exceed the budget of {MAX_PADIC_LEAVES}")]
    LeafBudget { leaves: u128 },
    #[error("minimizer did not converge: residual {residual:e} after {rounds} active-set rounds")]
    NonConvergence { residual: f64, rounds: usize },
    #[error("restricted energy matrix is singular")]
    Singular,
    #[error("measure does not match the matrix or spec: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Real(#[from] RealError),
}

impl From<QuadratureError> for OracleError {
    fn from(e: QuadratureError) -> Self {
        OracleError::Real(RealError::Quadrature(e))
    }
}

impl From<ExactSolveError> for OracleError {
    fn from(_: ExactSolveError) -> Self {
        OracleError::Singular
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Interval { lo: f64, hi: f64 },
    Ball(PAdicBallCode),
}

impl Cell {
    pub fn midpoint(&self) -> Option<f64> {
        match self {
            Cell::Interval { lo, hi } => Some(0.5 * (lo + hi)),
            Cell::Ball(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Float(Vec<f64>),
    Exact(Vec<BigRational>),
}

/// A probability measure on finitely many cells.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    cells: Vec<Cell>,
    weights: Weights,
}

impl DiscreteMeasure {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Mass of `[a, b]`, spreading each interval cell's weight uniformly.
    pub fn mass_in(&self, a: f64, b: f64) -> f64 {
        let Weights::Float(w) = &self.weights else {
            return 0.0;
        };
        self.cells
            .iter()
            .zip(w)
            .map(|(cell, &wi)| match cell {
                Cell::Interval { lo, hi } => {
                    let overlap = (hi.min(b) - lo.max(a)).max(0.0);
                    wi * overlap / (hi - lo)
                }
                Cell::Ball(_) => 0.0,
            })
            .sum()
    }

    /// `(cell, weight)` rows with a header; real cells as `lo,hi,weight`,
    /// p-adic cells as `ball,weight` with exact weights.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.weights {
            Weights::Float(w) => {
                out.push_str("lo,hi,weight\n");
                for (cell, wi) in self.cells.iter().zip(w) {
                    if let Cell::Interval { lo, hi } = cell {
                        out.push_str(&format!("{lo},{hi},{wi}\n"));
                    }
                }
            }
            Weights::Exact(w) => {
                out.push_str("ball,weight\n");
                for (cell, wi) in self.cells.iter().zip(w) {
                    if let Cell::Ball(b) = cell {
                        out.push_str(&format!("{b},{}\n", fraction_string(wi)));
                    }
                }
            }
        }
        out
    }
}

/// Symmetric matrix of pairwise cell energies.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyMatrix {
    Real {
        cells: Vec<Cell>,
        entries: DMatrix<f64>,
    },
    /// Entries are coefficients of `log p`.
    PAdic {
        field: LocalFieldSpec,
        cells: Vec<Cell>,
        entries: Vec<Vec<BigRational>>,
    },
}

impl EnergyMatrix {
    pub fn cells(&self) -> &[Cell] {
        match self {
            EnergyMatrix::Real { cells, .. } | EnergyMatrix::PAdic { cells, .. } => cells,
        }
    }

    pub fn len(&self) -> usize {
        self.cells().len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells().is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            EnergyMatrix::Real { entries, .. } => entries == &entries.transpose(),
            EnergyMatrix::PAdic { entries, .. } => {
                let n = entries.len();
                (0..n).all(|i| (0..i).all(|j| entries[i][j] == entries[j][i]))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Energy {
    Float(f64),
    Exact(ScaledLog),
}

impl Energy {
    pub fn to_f64(&self) -> f64 {
        match self {
            Energy::Float(v) => *v,
            Energy::Exact(v) => v.to_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimizer {
    pub measure: DiscreteMeasure,
    pub energy: Energy,
    /// `max |(Aw)_i - wᵀAw|` over the support (zero in exact mode).
    pub residual: f64,
    /// `min_i (Aw)_i - wᵀAw` over all cells; nonnegative up to rounding at
    /// a global minimizer.
    pub kkt_gap: f64,
}

/// `m` equal cells of `[-r, r]`.
pub fn build_real_energy_matrix(spec: &RealIntervalSpec, m: usize) -> Result<EnergyMatrix, OracleError> {
    if m < MIN_REAL_CELLS {
        return Err(OracleError::TooFewCells(m));
    }
    let r = spec.r();
    let width = 2.0 * r / m as f64;
    let cells: Vec<Cell> = (0..m)
        .map(|i| {
            let lo = -r + width * i as f64;
            let hi = if i + 1 == m { r } else { -r + width * (i + 1) as f64 };
            Cell::Interval { lo, hi }
        })
        .collect();
    let mids: Vec<f64> = cells.iter().map(|c| c.midpoint().unwrap()).collect();
    let mut entries = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        // Uniform measure on an interval of length w has log-energy 3/2 - log w.
        entries[(i, i)] = 1.5 - width.ln() + 2.0 * log_plus(mids[i]);
        for j in 0..i {
            let v = neg_log_delta_real(mids[i].into(), mids[j].into());
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(EnergyMatrix::Real { cells, entries })
}

/// Leaves are the balls of radius `|π|^depth` inside `π^n O_K`.
pub fn build_padic_energy_matrix(
    field: &LocalFieldSpec,
    n: i64,
    depth: i64,
) -> Result<EnergyMatrix, OracleError> {
    if n >= 0 {
        return Err(OracleError::NonNegativeExponent { n });
    }
    if depth < 1 {
        return Err(OracleError::BadDepth(depth));
    }
    let len = (depth - n) as u32;
    let leaves = (field.q() as u128).checked_pow(len).unwrap_or(u128::MAX);
    if leaves > MAX_PADIC_LEAVES as u128 {
        return Err(OracleError::LeafBudget { leaves });
    }
    let q = field.q();
    let codes: Vec<PAdicBallCode> = (0..leaves as u64)
        .map(|mut idx| {
            let mut digits = vec![0u64; len as usize];
            for d in digits.iter_mut().rev() {
                *d = idx % q;
                idx /= q;
            }
            PAdicBallCode::new(*field, n, digits).expect("digits below q")
        })
        .collect();

    let self_energy_in_integers = -capacity_ball(field, depth);
    let count = codes.len();
    let mut entries = vec![vec![BigRational::zero(); count]; count];
    for i in 0..count {
        let pole = codes[i].valuation().map_or(0, |v| (-v).max(0));
        let spherical = BigRational::from_integer((2 * pole).into()) * field.inv_e();
        entries[i][i] = self_energy_in_integers.coeff() + &spherical;
        for j in 0..i {
            let v = neg_log_delta_padic(&codes[i], &codes[j])
                .expect("distinct leaves have distinct centers")
                .coeff()
                .clone();
            entries[j][i] = v.clone();
            entries[i][j] = v;
        }
    }
    Ok(EnergyMatrix::PAdic {
        field: *field,
        cells: codes.into_iter().map(Cell::Ball).collect(),
        entries,
    })
}

/// Minimizes `wᵀ A w` over the probability simplex.
///
/// Both modes solve the equal-potential system `A_SS w_S = λ 1` on a support
/// `S`, starting from all cells, dropping coordinates that come out negative
/// and re-admitting cells whose potential falls below `λ`. The real mode uses
/// a dense LU factorization, the p-adic mode exact rational elimination.
/// The final support satisfies the KKT conditions, which certify a global
/// minimum because energy matrices are conditionally positive definite.
pub fn minimize_energy(matrix: &EnergyMatrix) -> Result<Minimizer, OracleError> {
    match matrix {
        EnergyMatrix::Real { cells, entries } => minimize_real(cells, entries),
        EnergyMatrix::PAdic { field, cells, entries } => minimize_padic(field, cells, entries),
    }
}

fn minimize_real(cells: &[Cell], a: &DMatrix<f64>) -> Result<Minimizer, OracleError> {
    let m = a.nrows();
    let mut support: Vec<usize> = (0..m).collect();
    let mut last_residual = f64::INFINITY;
    for _ in 0..MAX_ACTIVE_SET_ROUNDS {
        let k = support.len();
        let sub = DMatrix::from_fn(k, k, |i, j| a[(support[i], support[j])]);
        let z = sub
            .lu()
            .solve(&DVector::from_element(k, 1.0))
            .ok_or(OracleError::Singular)?;
        let total: f64 = z.iter().sum();
        let mut w = vec![0.0; m];
        for (&s, zi) in support.iter().zip(z.iter()) {
            w[s] = zi / total;
        }

        let negative: Vec<usize> = support.iter().copied().filter(|&s| w[s] < 0.0).collect();
        if !negative.is_empty() {
            support.retain(|s| w[*s] >= 0.0);
            continue;
        }

        let wv = DVector::from_vec(w);
        let potential = a * &wv;
        let energy = wv.dot(&potential);
        let residual = support
            .iter()
            .map(|&s| (potential[s] - energy).abs())
            .fold(0.0, f64::max);
        let kkt_gap = potential.iter().map(|p| p - energy).fold(f64::INFINITY, f64::min);
        last_residual = residual;

        let violated = (0..m)
            .filter(|i| wv[*i] == 0.0 && potential[*i] < energy - KKT_SLACK)
            .min_by(|&i, &j| potential[i].total_cmp(&potential[j]));
        if let Some(i) = violated {
            support.push(i);
            support.sort_unstable();
            continue;
        }
        if residual >= REAL_RESIDUAL_TOL {
            break;
        }
        return Ok(Minimizer {
            measure: DiscreteMeasure {
                cells: cells.to_vec(),
                weights: Weights::Float(wv.iter().copied().collect()),
            },
            energy: Energy::Float(energy),
            residual,
            kkt_gap,
        });
    }
    Err(OracleError::NonConvergence {
        residual: last_residual,
        rounds: MAX_ACTIVE_SET_ROUNDS,
    })
}

fn minimize_padic(
    field: &LocalFieldSpec,
    cells: &[Cell],
    a: &[Vec<BigRational>],
) -> Result<Minimizer, OracleError> {
    let m = a.len();
    let mut support: Vec<usize> = (0..m).collect();
    for _ in 0..MAX_ACTIVE_SET_ROUNDS {
        let sub: Vec<Vec<BigRational>> = support
            .iter()
            .map(|&i| support.iter().map(|&j| a[i][j].clone()).collect())
            .collect();
        let z = exact::solve(&sub, &vec![BigRational::one(); support.len()])?;
        let total: BigRational = z.iter().sum();
        if !total.is_positive() {
            return Err(OracleError::Singular);
        }
        let mut w = vec![BigRational::zero(); m];
        for (&s, zi) in support.iter().zip(&z) {
            w[s] = zi / &total;
        }
        if support.iter().any(|&s| w[s].is_negative()) {
            support.retain(|&s| !w[s].is_negative());
            continue;
        }

        let potential: Vec<BigRational> = a
            .iter()
            .map(|row| row.iter().zip(&w).filter(|(_, wi)| !wi.is_zero()).map(|(x, wi)| x * wi).sum())
            .collect();
        let energy: BigRational = potential.iter().zip(&w).map(|(p, wi)| p * wi).sum();
        let violated = (0..m)
            .filter(|&i| w[i].is_zero() && potential[i] < energy)
            .min_by(|&i, &j| potential[i].cmp(&potential[j]));
        if let Some(i) = violated {
            support.push(i);
            support.sort_unstable();
            continue;
        }
        let kkt_gap = potential
            .iter()
            .map(|p| p - &energy)
            .min()
            .map_or(0.0, |g| ScaledLog::new(g, field.p()).to_f64());
        return Ok(Minimizer {
            measure: DiscreteMeasure {
                cells: cells.to_vec(),
                weights: Weights::Exact(w),
            },
            energy: Energy::Exact(ScaledLog::new(energy, field.p())),
            residual: 0.0,
            kkt_gap,
        });
    }
    panic!("active-set iteration cycled on a p-adic energy matrix");
}

/// Total weight on `O_K` (key `0`) and on each shell `π^k O_K^×` (key `k < 0`).
pub fn shell_masses(measure: &DiscreteMeasure) -> BTreeMap<i64, BigRational> {
    let mut out = BTreeMap::new();
    let Weights::Exact(w) = &measure.weights else {
        return out;
    };
    for (cell, wi) in measure.cells.iter().zip(w) {
        if let Cell::Ball(code) = cell {
            let k = code.valuation().map_or(0, |v| v.min(0));
            *out.entry(k).or_insert_with(BigRational::zero) += wi;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub discrete: f64,
    pub analytic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinReport {
    pub bins: Vec<Bin>,
    pub max_discrepancy: f64,
}

/// Compares a real minimizer with the equilibrium measure on
/// [`COMPARISON_BINS`] bins of equal equilibrium mass.
pub fn compare_measure_real(
    minimizer: &DiscreteMeasure,
    spec: &RealIntervalSpec,
    tol: f64,
) -> Result<BinReport, OracleError> {
    let r = spec.r();
    if !matches!(minimizer.weights, Weights::Float(_)) {
        return Err(OracleError::Mismatch("expected a real-mode measure".into()));
    }
    let mut edges = vec![-r];
    for j in 1..COMPARISON_BINS {
        let target = j as f64 / COMPARISON_BINS as f64;
        let (mut lo, mut hi) = (-r, r);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if mass_between(spec, -r, mid, tol)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        edges.push(0.5 * (lo + hi));
    }
    edges.push(r);

    let mut bins = Vec::with_capacity(COMPARISON_BINS);
    let mut max_discrepancy = 0.0f64;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let discrete = minimizer.mass_in(lo, hi);
        let analytic = mass_between(spec, lo, hi, tol)?;
        max_discrepancy = max_discrepancy.max((discrete - analytic).abs());
        bins.push(Bin { lo, hi, discrete, analytic });
    }
    Ok(BinReport { bins, max_discrepancy })
}
