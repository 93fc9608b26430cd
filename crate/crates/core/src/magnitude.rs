//! Similarity matrices, weightings and magnitude.
//!
//! For a finite space `X` scaled by `t ≥ 0` the similarity matrix is
//! `Z(x, x') = e^{−t·d(x, x')}` (with `e^{−∞} = 0`). A weighting is a
//! solution of `Z·w = 1`; when one exists the magnitude is `Σ w`, which is
//! also the sum of the entries of `Z⁻¹`. For a finite category the matrix
//! holds hom-set cardinalities and the magnitude is an exact rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Field};
use crate::space::{GenMetricSpace, Labels, SpaceKind};

/// Largest scale grid [`linear_grid`] and [`log_grid`] will build.
pub const MAX_SCALE_SAMPLES: usize = 10_000_000;

/// Pivots below this multiple of the largest absolute row sum mark a
/// matrix as singular in floating point.
pub const SINGULAR_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix<T> {
    labels: Labels,
    entries: Vec<T>,
}

impl<T: Field> SimilarityMatrix<T> {
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("similarity matrix needs {n}x{n} entries for {n} labels")));
        }
        Ok(SimilarityMatrix { labels: labels.into(), entries: rows.into_iter().flatten().collect() })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.len() + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }
}

impl SimilarityMatrix<f64> {
    pub fn from_f64(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(GenMetricSpace::numbered(rows.len()), rows.iter().map(|r| r.to_vec()).collect())
    }
}

impl SimilarityMatrix<BigRational> {
    /// Hom-set cardinalities `|C(c, c')|` of a finite category.
    pub fn from_counts(labels: Vec<String>, counts: &[Vec<u64>]) -> Result<Self> {
        let rows = counts
            .iter()
            .map(|r| r.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
            .collect();
        Self::from_rows(labels, rows)
    }

    /// The zeta matrix of a finite poset: `Z(i, j) = 1` when `i ≤ j`.
    pub fn from_poset(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let counts: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(leq(i, j))).collect()).collect();
        Self::from_counts(GenMetricSpace::numbered(n), &counts)
    }
}

/// `Z(x, x') = e^{−t·d(x, x')}` with `0·∞ = 0` and `e^{−∞} = 0`.
pub fn similarity_matrix(x: &GenMetricSpace, t: f64) -> Result<SimilarityMatrix<f64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("scale factor must be finite and non-negative, got {t}")));
    }
    let n = x.len();
    let entries = (0..n * n).map(|k| (-x.d(k / n, k % n).scale(t).to_f64()).exp()).collect();
    Ok(SimilarityMatrix { labels: x.labels().clone(), entries })
}

/// Either a value or the finding that the similarity matrix is singular.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    Defined(T),
    Singular,
}

impl<T> Outcome<T> {
    pub fn defined(self) -> Option<T> {
        match self {
            Outcome::Defined(v) => Some(v),
            Outcome::Singular => None,
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, Outcome::Singular)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Defined(v) => Outcome::Defined(f(v)),
            Outcome::Singular => Outcome::Singular,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Weighting<T> {
    pub labels: Labels,
    pub w: Vec<T>,
    /// Ratio of the largest to the smallest pivot magnitude.
    pub condition: f64,
}

impl<T: Field> Weighting<T> {
    pub fn total(&self) -> T {
        self.w.iter().fold(T::zero(), |acc, v| acc.add(v))
    }
}

fn solve_with_pivots<T: Field>(z: &SimilarityMatrix<T>) -> (Outcome<Weighting<T>>, f64) {
    let n = z.len();
    let ones = vec![T::one(); n];
    match linalg::solve(&z.entries, &ones, n, SINGULAR_RTOL) {
        Some(sol) => {
            let condition = sol.condition();
            (Outcome::Defined(Weighting { labels: z.labels.clone(), w: sol.x, condition }), condition)
        }
        None => (Outcome::Singular, f64::INFINITY),
    }
}

/// `w` with `Z·w = 1`, by elimination with partial pivoting. Floating
/// point matrices are singular when a pivot drops below
/// [`SINGULAR_RTOL`] times the largest absolute row sum; rational ones only
/// when a pivot is exactly zero.
pub fn solve_weighting<T: Field>(z: &SimilarityMatrix<T>) -> Outcome<Weighting<T>> {
    solve_with_pivots(z).0
}

pub fn magnitude<T: Field>(z: &SimilarityMatrix<T>) -> Outcome<T> {
    solve_weighting(z).map(|w| w.total())
}

/// The same computation as [`magnitude`], under the name used for a
/// similarity matrix of species.
pub fn effective_species(f: &SimilarityMatrix<f64>) -> Outcome<f64> {
    magnitude(f)
}

/// Exact magnitude of a finite category given by hom-set counts.
pub fn category_magnitude(z: &SimilarityMatrix<BigRational>) -> Result<Outcome<BigRational>> {
    for (k, v) in z.entries.iter().enumerate() {
        if !v.is_integer() || v.is_negative() {
            return Err(Error::domain(format!("hom-set count {v} is not a non-negative integer")));
        }
        if k / z.len() == k % z.len() && v.is_zero() {
            return Err(Error::domain("every object needs an identity, so diagonal counts must be at least 1"));
        }
    }
    Ok(magnitude(z))
}

/// Whether symmetric elimination without row exchanges produces only
/// pivots above the singularity threshold.
pub fn is_positive_definite(z: &SimilarityMatrix<f64>) -> Result<bool> {
    let n = z.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (*z.get(i, j), *z.get(j, i));
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::domain(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(linalg::symmetric_pivots(&z.entries, n, SINGULAR_RTOL).is_some())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeSample {
    pub t: f64,
    pub value: Outcome<f64>,
    /// `+∞` for singular samples.
    pub condition: f64,
}

/// `t ↦ |tX|` on a sorted grid of non-negative scales.
pub fn magnitude_function(x: &GenMetricSpace, grid: &[f64]) -> Result<Vec<MagnitudeSample>> {
    if let Some(bad) = grid.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::domain(format!("scale {bad} is not a finite non-negative number")));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("scale grid must be sorted"));
    }
    grid.par_iter()
        .map(|&t| {
            let z = similarity_matrix(x, t)?;
            let (w, condition) = solve_with_pivots(&z);
            Ok(MagnitudeSample { t, value: w.map(|w| w.total()), condition })
        })
        .collect()
}

/// `count` evenly spaced values from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    check_range(min, max, count)?;
    if count == 1 {
        return Ok(vec![min]);
    }
    let h = (max - min) / (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { max } else { min + h * i as f64 }).collect())
}

/// `count` geometrically spaced values from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    check_range(min, max, count)?;
    if !(min > 0.0) {
        return Err(Error::domain("a log grid needs a positive lower end"));
    }
    let (a, b) = (min.ln(), max.ln());
    Ok(linear_grid(a, b, count)?
        .into_iter()
        .enumerate()
        .map(|(i, v)| match i {
            0 => min,
            _ if i + 1 == count => max,
            _ => v.exp(),
        })
        .collect())
}

fn check_range(min: f64, max: f64, count: usize) -> Result<()> {
    if !min.is_finite() || !max.is_finite() || min > max || count == 0 || (count > 1 && min == max) {
        return Err(Error::domain(format!("bad grid range {min}:{max}:{count}")));
    }
    if count > MAX_SCALE_SAMPLES {
        return Err(Error::ResourceLimit { requested: count as u128, cap: MAX_SCALE_SAMPLES as u128 });
    }
    Ok(())
}

/// First index from which every sample is defined and the values never
/// decrease by more than `slack`. A heuristic for where the eventual
/// increasing regime starts.
pub fn increasing_tail_start(samples: &[MagnitudeSample], slack: f64) -> Option<usize> {
    let mut start = samples.len();
    let mut next: Option<f64> = None;
    for (i, s) in samples.iter().enumerate().rev() {
        match (&s.value, next) {
            (Outcome::Defined(v), Some(n)) if *v <= n + slack => {}
            (Outcome::Defined(_), None) => {}
            _ => break,
        }
        next = s.value.clone().defined();
        start = i;
    }
    (start < samples.len()).then_some(start)
}

/// The graph metric of the complete bipartite graph `K_{m,n}`: distance 1
/// across the parts and 2 within a part.
pub fn complete_bipartite_space(m: usize, n: usize) -> Result<GenMetricSpace> {
    let labels: Vec<String> =
        (0..m).map(|i| format!("u{i}")).chain((0..n).map(|j| format!("v{j}"))).collect();
    GenMetricSpace::from_fn(labels, SpaceKind::ClassicalMetric, |i, j| {
        let d = if i == j {
            0.0
        } else if (i < m) == (j < m) {
            2.0
        } else {
            1.0
        };
        crate::ext::ExtReal::Finite(d)
    })
}

/// `num / den` as an exact rational.
pub fn rational_from_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
