//! Non-archimedean local fields, parametrized by the residue characteristic,
//! the ramification index and the residue degree.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::kernel::ScaledLog;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ramification index must be at least 1, got {0}")]
    BadRamification(u32),
    #[error("residue degree must be at least 1, got {0}")]
    BadResidueDegree(u32),
    #[error("residue field order {p}^{f} does not fit in 64 bits")]
    ResidueOrderOverflow { p: u64, f: u32 },
}

/// A finite extension `K` of `Q_p` with ramification index `e` and residue
/// degree `f`.
///
/// The absolute value is normalized by `|p| = 1/p`, so a uniformizer has
/// `|π| = p^(-1/e)` and the residue field has `q = p^f` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalFieldSpec {
    p: u64,
    e: u32,
    f: u32,
    q: u64,
}

impl LocalFieldSpec {
    pub fn new(p: u64, e: u32, f: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::BadRamification(e));
        }
        if f == 0 {
            return Err(FieldError::BadResidueDegree(f));
        }
        let q = p
            .checked_pow(f)
            .ok_or(FieldError::ResidueOrderOverflow { p, f })?;
        Ok(Self { p, e, f, q })
    }

    /// The field `Q_p` itself.
    pub fn rational(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Order of the residue field.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    pub fn q_rational(&self) -> BigRational {
        BigRational::from_integer(self.q_big())
    }

    /// `q^k` for any integer `k`, exactly.
    pub fn q_pow(&self, k: i64) -> BigRational {
        let base = self.q_rational();
        if k >= 0 {
            Pow::pow(base, k.unsigned_abs())
        } else {
            Pow::pow(base.recip(), k.unsigned_abs())
        }
    }

    /// `1/e` as an exact rational.
    pub fn inv_e(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.e))
    }

    /// `-log|π| = (log p)/e`.
    pub fn neg_log_abs_uniformizer(&self) -> ScaledLog {
        ScaledLog::new(self.inv_e(), self.p)
    }

    /// `log|π| = -(log p)/e`.
    pub fn log_abs_uniformizer(&self) -> ScaledLog {
        -self.neg_log_abs_uniformizer()
    }

    /// Converts a multiple `m · log|π|` into a [`ScaledLog`] over `p`.
    pub fn times_log_abs_uniformizer(&self, m: &BigRational) -> ScaledLog {
        ScaledLog::new(-(m * self.inv_e()), self.p)
    }

    pub fn is_unramified_rational(&self) -> bool {
        self.e == 1 && self.f == 1
    }
}

impl fmt::Display for LocalFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unramified_rational() {
            write!(f, "Q_{}", self.p)
        } else {
            write!(f, "K/Q_{} (e={}, f={})", self.p, self.e, self.f)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}
