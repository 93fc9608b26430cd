//! Finite generalized metric spaces: enriched categories over `[0, ∞]` or
//! `[−∞, ∞]` given by a square distance matrix.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::{ExtReal, Flavor, NegInf, PosInf, DEFAULT_TOL};

/// Which axioms a distance matrix is meant to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Zero self-distance, non-negative entries, triangle inequality.
    RplusCategory,
    /// Self-distance `0` or `−∞`, signed triangle inequality, and infinite
    /// points only at infinite distance from everything.
    RbarCategory,
    /// An `RplusCategory` that is also symmetric, finite and separated.
    ClassicalMetric,
}

impl SpaceKind {
    pub fn flavor(self) -> Flavor {
        match self {
            SpaceKind::RbarCategory => Flavor::Signed,
            SpaceKind::RplusCategory | SpaceKind::ClassicalMetric => Flavor::NonNeg,
        }
    }
}

/// Labels shared between a space and the functions defined on it.
pub type Labels = Arc<[String]>;

#[derive(Clone, Debug, PartialEq)]
pub struct GenMetricSpace {
    labels: Labels,
    dist: Vec<ExtReal>,
    kind: SpaceKind,
}

impl GenMetricSpace {
    /// Builds a space from labels and matrix rows. Only the shape and the
    /// labels are checked here; call [`GenMetricSpace::validate`] for the
    /// axioms.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<ExtReal>>, kind: SpaceKind) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Shape("a space needs at least one point".into()));
        }
        check_labels(&labels)?;
        if rows.len() != n {
            return Err(Error::Shape(format!("{n} labels but {} rows", rows.len())));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            dist.extend(row);
        }
        Ok(GenMetricSpace { labels: labels.into(), dist, kind })
    }

    pub fn from_fn(labels: Vec<String>, kind: SpaceKind, mut d: impl FnMut(usize, usize) -> ExtReal) -> Result<Self> {
        let n = labels.len();
        let rows = (0..n).map(|i| (0..n).map(|j| d(i, j)).collect()).collect();
        Self::new(labels, rows, kind)
    }

    /// Convenience constructor from finite `f64` entries (IEEE infinities map
    /// to the infinite variants).
    pub fn from_f64(labels: &[&str], rows: &[&[f64]], kind: SpaceKind) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| ExtReal::new(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels.iter().map(|s| s.to_string()).collect(), rows, kind)
    }

    /// Points labelled `0, 1, …, n−1`.
    pub fn numbered(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// Discrete space: zero self-distance, `+∞` between distinct points.
    pub fn discrete(labels: Vec<String>) -> Result<Self> {
        Self::from_fn(labels, SpaceKind::RplusCategory, |i, j| if i == j { ExtReal::ZERO } else { PosInf })
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

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn flavor(&self) -> Flavor {
        self.kind.flavor()
    }

    pub fn with_kind(mut self, kind: SpaceKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Distance from point `i` to point `j`.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> ExtReal {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[ExtReal] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ExtReal]> {
        self.dist.chunks(self.len())
    }

    /// Largest finite off-diagonal distance, or `None` if some off-diagonal
    /// distance is infinite. A one-point space has diameter 0.
    pub fn diameter(&self) -> Option<f64> {
        let mut diam = 0.0f64;
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i == j {
                    continue;
                }
                diam = diam.max(self.d(i, j).finite()?);
            }
        }
        Some(diam)
    }

    /// Smallest off-diagonal distance (`+∞` for a one-point space).
    pub fn min_distance(&self) -> ExtReal {
        let mut m = PosInf;
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j {
                    m = m.min(self.d(i, j));
                }
            }
        }
        m
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with_tol(DEFAULT_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.len();
        let kind = self.kind;

        for i in 0..n {
            let dii = self.d(i, i);
            let ok = match kind {
                SpaceKind::RbarCategory => dii == NegInf || dii.approx_eq(ExtReal::ZERO, tol),
                _ => dii.approx_eq(ExtReal::ZERO, tol),
            };
            if !ok {
                violations.push(Violation::Diagonal { i, value: dii });
            }
        }

        if kind != SpaceKind::RbarCategory {
            for i in 0..n {
                for j in 0..n {
                    let v = self.d(i, j);
                    if !v.in_flavor(Flavor::NonNeg) {
                        violations.push(Violation::Negative { i, j, value: v });
                    }
                }
            }
        }

        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let via = self.d(i, j).plus(self.d(j, k));
                    if !via.approx_ge(self.d(i, k), tol) {
                        violations.push(Violation::Triangle { i, j, k, via, direct: self.d(i, k) });
                    }
                }
            }
        }

        if kind == SpaceKind::RbarCategory {
            for i in 0..n {
                if self.d(i, i) != NegInf {
                    continue;
                }
                for j in 0..n {
                    if self.d(i, j).is_finite() || self.d(j, i).is_finite() {
                        violations.push(Violation::InfinitePoint { i, j });
                    }
                }
            }
        }

        if kind == SpaceKind::ClassicalMetric {
            for i in 0..n {
                for j in 0..n {
                    let v = self.d(i, j);
                    if !v.is_finite() {
                        violations.push(Violation::Infinite { i, j });
                    }
                    if j > i && !v.approx_eq(self.d(j, i), tol) {
                        violations.push(Violation::Asymmetric { i, j, forward: v, backward: self.d(j, i) });
                    }
                    if i != j && v.approx_eq(ExtReal::ZERO, tol) {
                        violations.push(Violation::NotSeparated { i, j });
                    }
                }
            }
        }

        ValidationReport { violations }
    }

    /// The space `tX` with every distance multiplied by `t ≥ 0`
    /// (`0 · ∞ = 0`).
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) || t.is_infinite() {
            return Err(Error::domain(format!("scale factor must be a finite non-negative real, got {t}")));
        }
        Ok(GenMetricSpace {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|d| d.scale(t)).collect(),
            kind: self.kind,
        })
    }

    /// `d'(i, j) = max(d(i, j), d(j, i))`.
    pub fn symmetrize(&self) -> Result<Self> {
        if self.kind == SpaceKind::RbarCategory {
            return Err(Error::domain("symmetrize expects a non-negative space"));
        }
        let n = self.len();
        let mut dist = self.dist.clone();
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = self.d(i, j).max(self.d(j, i));
            }
        }
        Ok(GenMetricSpace { labels: self.labels.clone(), dist, kind: self.kind })
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Checks that a matrix is square before validating it as a space with
/// numbered points.
pub fn validate_matrix(rows: Vec<Vec<ExtReal>>, kind: SpaceKind) -> Result<ValidationReport> {
    let space = GenMetricSpace::new(GenMetricSpace::numbered(rows.len()), rows, kind)?;
    Ok(space.validate())
}

pub fn discrete_space(labels: Vec<String>) -> Result<GenMetricSpace> {
    GenMetricSpace::discrete(labels)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Diagonal { i: usize, value: ExtReal },
    Negative { i: usize, j: usize, value: ExtReal },
    Triangle { i: usize, j: usize, k: usize, via: ExtReal, direct: ExtReal },
    InfinitePoint { i: usize, j: usize },
    Infinite { i: usize, j: usize },
    Asymmetric { i: usize, j: usize, forward: ExtReal, backward: ExtReal },
    NotSeparated { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { i, value } => write!(f, "diagonal ({i}): d = {value}"),
            Violation::Negative { i, j, value } => write!(f, "negative ({i},{j}): d = {value}"),
            Violation::Triangle { i, j, k, via, direct } => {
                write!(f, "triangle ({i},{j},{k}): d(i,j) + d(j,k) = {via} < d(i,k) = {direct}")
            }
            Violation::InfinitePoint { i, j } => {
                write!(f, "infinite point ({i},{j}): point {i} has self-distance -inf but a finite distance to {j}")
            }
            Violation::Infinite { i, j } => write!(f, "infinite ({i},{j})"),
            Violation::Asymmetric { i, j, forward, backward } => {
                write!(f, "asymmetric ({i},{j}): {forward} vs {backward}")
            }
            Violation::NotSeparated { i, j } => write!(f, "not separated ({i},{j}): distinct points at distance 0"),
        }
    }
}

/// Every violated axiom, in scan order. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn triangle_violations(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.violations.iter().filter_map(|v| match *v {
            Violation::Triangle { i, j, k, .. } => Some((i, j, k)),
            _ => None,
        })
    }
}

/// A function from the points of a space to the extended reals: a presheaf
/// or copresheaf once a variance is chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarFunction {
    labels: Labels,
    values: Vec<ExtReal>,
    flavor: Flavor,
}

impl ScalarFunction {
    pub fn new(space: &GenMetricSpace, values: Vec<ExtReal>, flavor: Flavor) -> Result<Self> {
        Self::on_labels(space.labels().clone(), values, flavor)
    }

    pub fn on_labels(labels: Labels, values: Vec<ExtReal>, flavor: Flavor) -> Result<Self> {
        if values.len() != labels.len() {
            return Err(Error::Shape(format!("{} values for {} points", values.len(), labels.len())));
        }
        if let Some(bad) = values.iter().find(|v| !v.in_flavor(flavor)) {
            return Err(Error::OutOfFlavor { value: bad.to_string(), flavor });
        }
        Ok(ScalarFunction { labels, values, flavor })
    }

    pub fn nonneg(space: &GenMetricSpace, values: &[f64]) -> Result<Self> {
        let values = values.iter().map(|&x| ExtReal::new(x)).collect::<Result<Vec<_>>>()?;
        Self::new(space, values, Flavor::NonNeg)
    }

    pub fn signed(space: &GenMetricSpace, values: &[f64]) -> Result<Self> {
        let values = values.iter().map(|&x| ExtReal::new(x)).collect::<Result<Vec<_>>>()?;
        Self::new(space, values, Flavor::Signed)
    }

    pub fn constant(space: &GenMetricSpace, value: ExtReal, flavor: Flavor) -> Result<Self> {
        Self::new(space, vec![value; space.len()], flavor)
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_on(&self, labels: &Labels) -> bool {
        Arc::ptr_eq(&self.labels, labels) || self.labels == *labels
    }

    /// Largest pointwise gap, `None` if infinities disagree somewhere.
    pub fn sup_gap(&self, other: &ScalarFunction) -> Option<f64> {
        self.values
            .iter()
            .zip(&other.values)
            .try_fold(0.0f64, |acc, (a, b)| Some(acc.max(a.gap(*b)?)))
    }
}

/// Distance in the functor category of scalar-valued maps:
/// `sup_x hom(f(x), g(x))`, using the truncated difference for the
/// non-negative flavor and extended subtraction for the signed one.
pub fn funcat_distance(space: &GenMetricSpace, f: &ScalarFunction, g: &ScalarFunction) -> Result<ExtReal> {
    if !f.is_on(space.labels()) || !g.is_on(space.labels()) {
        return Err(Error::DomainMismatch);
    }
    if f.flavor != g.flavor {
        return Err(Error::FlavorMismatch { left: f.flavor, right: g.flavor });
    }
    Ok(sup_hom(f.flavor, &f.values, &g.values))
}

pub(crate) fn sup_hom(flavor: Flavor, f: &[ExtReal], g: &[ExtReal]) -> ExtReal {
    match flavor {
        Flavor::NonNeg => f
            .iter()
            .zip(g)
            .fold(ExtReal::ZERO, |acc, (&a, &b)| acc.max(ExtReal::hom_plus(a, b))),
        Flavor::Signed => f
            .iter()
            .zip(g)
            .fold(NegInf, |acc, (&a, &b)| acc.max(ExtReal::hom_signed(a, b))),
    }
}

/// Whether `map` (given as the label of each image point, in the order of
/// `x`'s points) is distance non-increasing from `x` to `y`.
pub fn is_short_map(x: &GenMetricSpace, y: &GenMetricSpace, map: &[&str]) -> Result<bool> {
    if map.len() != x.len() {
        return Err(Error::Shape(format!("map has {} entries for {} points", map.len(), x.len())));
    }
    let image = map.iter().map(|l| y.index_of(l)).collect::<Result<Vec<_>>>()?;
    Ok(is_short_map_indexed(x, y, &image, DEFAULT_TOL))
}

pub fn is_short_map_indexed(x: &GenMetricSpace, y: &GenMetricSpace, image: &[usize], tol: f64) -> bool {
    (0..x.len()).all(|i| (0..x.len()).all(|j| x.d(i, j).approx_ge(y.d(image[i], image[j]), tol)))
}
