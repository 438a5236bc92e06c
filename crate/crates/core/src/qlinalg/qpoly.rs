use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{HallError, Result};

/// Polynomial in the formal variable `q` with integer coefficients,
/// lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c q^deg`
    pub fn monomial(c: i64, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = BigInt::from(c);
        QPolynomial::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_u64(&self, q: u64) -> Option<u64> {
        self.eval(&BigInt::from(q)).to_u64()
    }

    /// Exact division; `None` if `divisor` does not divide `self` over the
    /// integers.
    pub fn div_exact(&self, divisor: &QPolynomial) -> Option<QPolynomial> {
        let dd = divisor.degree()?;
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return self.is_zero().then(QPolynomial::zero);
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd];
            if c.is_zero() {
                continue;
            }
            let (qc, r) = c.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &qc * dc;
            }
            quot[i] = qc;
        }
        rem.iter().all(Zero::is_zero).then(|| QPolynomial::from_coeffs(quot))
    }

    pub fn pow(&self, e: usize) -> QPolynomial {
        (0..e).fold(QPolynomial::one(), |acc, _| &acc * self)
    }
}

impl<'a> Add<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_default() + rhs.coeffs.get(i).cloned().unwrap_or_default())
            .collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_default() - rhs.coeffs.get(i).cloned().unwrap_or_default())
            .collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl<'a> Mul<&'a QPolynomial> for &'a QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            write!(f, "{sign}")?;
            match (deg, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}")?,
            }
            match deg {
                0 => {}
                1 => write!(f, "q")?,
                d => write!(f, "q^{d}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Gaussian binomial `[n choose k]_q` via `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn gaussian_binomial(n: usize, k: usize) -> Result<QPolynomial> {
    if k > n {
        return Err(HallError::InvalidArgument(format!("gaussian_binomial({n},{k}): k > n")));
    }
    // row[k] holds [m, k] for the current m
    let mut row = vec![QPolynomial::one()];
    for m in 1..=n {
        let mut next = vec![QPolynomial::one(); m + 1];
        for j in 1..m {
            next[j] = &row[j - 1] + &(&QPolynomial::monomial(1, j) * &row[j]);
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)` as a polynomial in `q`.
pub fn gl_order_poly(n: usize) -> QPolynomial {
    (0..n).fold(QPolynomial::one(), |acc, i| &acc * &(&QPolynomial::monomial(1, n) - &QPolynomial::monomial(1, i)))
}

/// Order of the block upper-triangular parabolic with the given diagonal
/// block sizes: `prod |GL_{d_i}| * q^{sum_{i<j} d_i d_j}`.
pub fn parabolic_order_poly(blocks: &[usize]) -> QPolynomial {
    let unipotent: usize = (0..blocks.len())
        .flat_map(|i| ((i + 1)..blocks.len()).map(move |j| (i, j)))
        .map(|(i, j)| blocks[i] * blocks[j])
        .sum();
    blocks.iter().fold(QPolynomial::monomial(1, unipotent), |acc, &d| &acc * &gl_order_poly(d))
}
