//! Dense Gaussian elimination over `f64` and exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Scalars the solver can eliminate over.
pub trait Field: Clone + std::fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    /// Absolute value as an `f64`, used to rank pivots and to report
    /// condition estimates.
    fn abs_f64(&self) -> f64;
    /// Whether a pivot should be treated as zero given the scale-relative
    /// `threshold`. Exact types ignore the threshold.
    fn negligible(&self, threshold: f64) -> bool;
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
    fn negligible(&self, threshold: f64) -> bool {
        !(self.abs() >= threshold) || *self == 0.0
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn abs_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            // never rank a non-zero pivot below an exact zero
            self.abs().to_f64().unwrap_or(f64::MAX).max(f64::MIN_POSITIVE)
        }
    }
    fn negligible(&self, _threshold: f64) -> bool {
        self.is_zero()
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Result of a successful elimination.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub x: Vec<T>,
    /// Absolute values of the pivots in elimination order.
    pub pivots: Vec<f64>,
}

impl<T> Solution<T> {
    /// Largest over smallest pivot magnitude.
    pub fn condition(&self) -> f64 {
        pivot_ratio(&self.pivots)
    }
}

pub(crate) fn pivot_ratio(pivots: &[f64]) -> f64 {
    let max = pivots.iter().copied().fold(0.0, f64::max);
    let min = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if pivots.is_empty() {
        1.0
    } else {
        max / min
    }
}

/// Largest absolute row sum, the scale for the singularity threshold.
pub fn max_row_norm<T: Field>(a: &[T], n: usize) -> f64 {
    a.chunks(n.max(1)).map(|r| r.iter().map(Field::abs_f64).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `a · x = b` for row-major `n × n` matrix `a` by elimination with
/// partial pivoting. Returns `None` as soon as the best available pivot is
/// negligible relative to `rel_threshold × max_row_norm(a)`.
pub fn solve<T: Field>(a: &[T], b: &[T], n: usize, rel_threshold: f64) -> Option<Solution<T>> {
    assert_eq!(a.len(), n * n, "matrix is not {n}x{n}");
    assert_eq!(b.len(), n, "right-hand side has wrong length");
    let threshold = rel_threshold * max_row_norm(a, n);
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    let mut pivots = Vec::with_capacity(n);

    for col in 0..n {
        let (best, mag) = (col..n)
            .map(|r| (r, m[r * n + col].abs_f64()))
            .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if m[best * n + col].negligible(threshold) {
            return None;
        }
        if best != col {
            for j in 0..n {
                m.swap(best * n + j, col * n + j);
            }
            rhs.swap(best, col);
        }
        pivots.push(mag);
        let p = m[col * n + col].clone();
        for r in col + 1..n {
            let factor = m[r * n + col].div(&p);
            if factor == T::zero() {
                continue;
            }
            for j in col..n {
                let v = m[r * n + j].sub(&factor.mul(&m[col * n + j]));
                m[r * n + j] = v;
            }
            rhs[r] = rhs[r].sub(&factor.mul(&rhs[col]));
        }
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            acc = acc.sub(&m[i * n + j].mul(&x[j]));
        }
        x[i] = acc.div(&m[i * n + i]);
    }
    Some(Solution { x, pivots })
}

/// Pivots of symmetric elimination without row exchanges, or `None` at the
/// first pivot that is not above `rel_threshold × max_row_norm(a)`.
pub fn symmetric_pivots(a: &[f64], n: usize, rel_threshold: f64) -> Option<Vec<f64>> {
    let threshold = rel_threshold * max_row_norm(a, n);
    let mut m = a.to_vec();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = m[k * n + k];
        if !(p > threshold) {
            return None;
        }
        pivots.push(p);
        for i in k + 1..n {
            let f = m[i * n + k] / p;
            for j in k..n {
                m[i * n + j] -= f * m[k * n + j];
            }
        }
    }
    Some(pivots)
}
