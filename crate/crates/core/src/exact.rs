//! Exact solution of rational linear systems by fraction-free (Bareiss)
//! elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactSolveError {
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {rows}x{cols} matrix with right-hand side of length {rhs}")]
    Shape { rows: usize, cols: usize, rhs: usize },
}

/// Solves `a · x = b` exactly. `a` is given row-major and must be square.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>, ExactSolveError> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(ExactSolveError::Shape {
            rows: n,
            cols: a.first().map_or(0, Vec::len),
            rhs: b.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // Clear denominators row by row; the solution is unchanged.
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let lcm = row
                .iter()
                .chain(std::iter::once(rhs))
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();

    bareiss_forward(&mut m)?;

    // Back substitution on the integer upper-triangular system.
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
            }
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// In-place fraction-free forward elimination of an augmented `n × (n+1)`
/// integer matrix. Every intermediate division is exact.
fn bareiss_forward(m: &mut [Vec<BigInt>]) -> Result<(), ExactSolveError> {
    let n = m.len();
    let width = m[0].len();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let swap = (k + 1..n)
                .find(|&i| !m[i][k].is_zero())
                .ok_or(ExactSolveError::Singular)?;
            m.swap(k, swap);
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        for row in tail.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..width {
                let v = &row[j] * pivot - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    Ok(())
}
