//! Profunctors between finite `[0, ∞]`-categories, their Isbell-type
//! adjunction, and the nucleus of the hom profunctor (the Isbell
//! completion, or directed tight span).
//!
//! For a profunctor `P: C ⇸ D` the two adjoint operators are
//!
//! ```text
//! push(φ)(c) = sup_d { P(c, d) ∸ φ(d) }     copresheaf on D → presheaf on C
//! pull(ψ)(d) = sup_c { P(c, d) ∸ ψ(c) }     presheaf on C → copresheaf on D
//! ```
//!
//! The Isbell completion `I(X)` is the set of fixed points of
//! `push ∘ pull` for `P = X(−, −)`. It is represented here by a membership
//! test and a grid sampler rather than as a polyhedral complex. The
//! classical tight span of a metric space is the symmetric part of `I(X)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ext::{ExtReal, Flavor, PosInf};
use crate::space::{sup_hom, GenMetricSpace, ScalarFunction, SpaceKind};

/// Grid sizes above this are refused by [`sample_isbell_completion`].
pub const MAX_SAMPLE_POINTS: u128 = 5_000_000;

/// A contravariant scalar-valued function on the source of a profunctor.
#[derive(Clone, Debug, PartialEq)]
pub struct Presheaf(pub ScalarFunction);

/// A covariant scalar-valued function on the target of a profunctor.
#[derive(Clone, Debug, PartialEq)]
pub struct Copresheaf(pub ScalarFunction);

impl Presheaf {
    pub fn new(space: &GenMetricSpace, values: Vec<ExtReal>) -> Result<Self> {
        ScalarFunction::new(space, values, Flavor::NonNeg).map(Presheaf)
    }

    pub fn from_f64(space: &GenMetricSpace, values: &[f64]) -> Result<Self> {
        ScalarFunction::nonneg(space, values).map(Presheaf)
    }

    pub fn values(&self) -> &[ExtReal] {
        self.0.values()
    }
}

impl Copresheaf {
    pub fn new(space: &GenMetricSpace, values: Vec<ExtReal>) -> Result<Self> {
        ScalarFunction::new(space, values, Flavor::NonNeg).map(Copresheaf)
    }

    pub fn from_f64(space: &GenMetricSpace, values: &[f64]) -> Result<Self> {
        ScalarFunction::nonneg(space, values).map(Copresheaf)
    }

    pub fn values(&self) -> &[ExtReal] {
        self.0.values()
    }
}

/// `P(c, d)` for `c` in the source and `d` in the target, row-major by `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Profunctor {
    source: GenMetricSpace,
    target: GenMetricSpace,
    values: Vec<ExtReal>,
}

impl Profunctor {
    pub fn new(source: GenMetricSpace, target: GenMetricSpace, rows: Vec<Vec<ExtReal>>) -> Result<Self> {
        if rows.len() != source.len() || rows.iter().any(|r| r.len() != target.len()) {
            return Err(Error::Shape(format!(
                "profunctor needs a {}x{} matrix",
                source.len(),
                target.len()
            )));
        }
        let values: Vec<ExtReal> = rows.into_iter().flatten().collect();
        if let Some(bad) = values.iter().find(|v| !v.in_flavor(Flavor::NonNeg)) {
            return Err(Error::OutOfFlavor { value: bad.to_string(), flavor: Flavor::NonNeg });
        }
        Ok(Profunctor { source, target, values })
    }

    pub fn source(&self) -> &GenMetricSpace {
        &self.source
    }

    pub fn target(&self) -> &GenMetricSpace {
        &self.target
    }

    #[inline]
    pub fn get(&self, c: usize, d: usize) -> ExtReal {
        self.values[c * self.target.len() + d]
    }

    /// Quadruples `(c', c, d, d')` where
    /// `C(c', c) + P(c, d) + D(d, d') ≥ P(c', d')` fails.
    pub fn compatibility_violations(&self, tol: f64) -> Vec<(usize, usize, usize, usize)> {
        let (m, n) = (self.source.len(), self.target.len());
        let mut out = Vec::new();
        for c2 in 0..m {
            for c in 0..m {
                for d in 0..n {
                    for d2 in 0..n {
                        let lhs = self.source.d(c2, c).plus(self.get(c, d)).plus(self.target.d(d, d2));
                        if !lhs.approx_ge(self.get(c2, d2), tol) {
                            out.push((c2, c, d, d2));
                        }
                    }
                }
            }
        }
        out
    }

    fn push_values(&self, phi: &[ExtReal]) -> Vec<ExtReal> {
        (0..self.source.len())
            .map(|c| {
                phi.iter()
                    .enumerate()
                    .fold(ExtReal::ZERO, |acc, (d, &p)| acc.max(ExtReal::hom_plus(p, self.get(c, d))))
            })
            .collect()
    }

    fn pull_values(&self, psi: &[ExtReal]) -> Vec<ExtReal> {
        (0..self.target.len())
            .map(|d| {
                psi.iter()
                    .enumerate()
                    .fold(ExtReal::ZERO, |acc, (c, &p)| acc.max(ExtReal::hom_plus(p, self.get(c, d))))
            })
            .collect()
    }
}

/// `P(x, x') = X(x, x')`.
pub fn hom_profunctor(x: &GenMetricSpace) -> Result<Profunctor> {
    let rows = x.rows().map(<[ExtReal]>::to_vec).collect();
    Profunctor::new(x.clone(), x.clone(), rows)
}

/// `push(φ)(c) = sup_d { P(c, d) ∸ φ(d) }`.
pub fn push(p: &Profunctor, phi: &Copresheaf) -> Result<Presheaf> {
    if !phi.0.is_on(p.target.labels()) {
        return Err(Error::DomainMismatch);
    }
    Presheaf::new(&p.source, p.push_values(phi.values()))
}

/// `pull(ψ)(d) = sup_c { P(c, d) ∸ ψ(c) }`.
pub fn pull(p: &Profunctor, psi: &Presheaf) -> Result<Copresheaf> {
    if !psi.0.is_on(p.source.labels()) {
        return Err(Error::DomainMismatch);
    }
    Copresheaf::new(&p.target, p.pull_values(psi.values()))
}

/// The representable presheaf `x' ↦ X(x', x)`.
pub fn yoneda(x: &GenMetricSpace, point: &str) -> Result<Presheaf> {
    yoneda_at(x, x.index_of(point)?)
}

pub fn yoneda_at(x: &GenMetricSpace, index: usize) -> Result<Presheaf> {
    if index >= x.len() {
        return Err(Error::Shape(format!("point index {index} out of range")));
    }
    Presheaf::new(x, (0..x.len()).map(|i| x.d(i, index)).collect())
}

fn hull_values(x: &GenMetricSpace, psi: &[ExtReal]) -> Vec<ExtReal> {
    let n = x.len();
    // pull through the hom profunctor, then push back
    let pulled: Vec<ExtReal> = (0..n)
        .map(|d| (0..n).fold(ExtReal::ZERO, |acc, c| acc.max(ExtReal::hom_plus(psi[c], x.d(c, d)))))
        .collect();
    (0..n)
        .map(|c| (0..n).fold(ExtReal::ZERO, |acc, d| acc.max(ExtReal::hom_plus(pulled[d], x.d(c, d)))))
        .collect()
}

/// `push(pull(ψ))` for the hom profunctor of `x`: the closure of `ψ` in the
/// Isbell completion.
pub fn isbell_hull(x: &GenMetricSpace, psi: &Presheaf) -> Result<Presheaf> {
    if !psi.0.is_on(x.labels()) {
        return Err(Error::DomainMismatch);
    }
    Presheaf::new(x, hull_values(x, psi.values()))
}

/// Whether `ψ` is a fixed point of the hull, within `tol` on finite values
/// and exactly on infinities.
pub fn is_isbell_point(x: &GenMetricSpace, psi: &Presheaf, tol: f64) -> Result<bool> {
    let hull = isbell_hull(x, psi)?;
    Ok(fixed_within(hull.values(), psi.values(), tol))
}

fn fixed_within(hull: &[ExtReal], psi: &[ExtReal], tol: f64) -> bool {
    hull.iter().zip(psi).all(|(h, p)| h.approx_eq(*p, tol))
}

/// `I(X)(ψ1, ψ2) = sup_x (ψ2(x) ∸ ψ1(x))`.
pub fn isbell_distance(x: &GenMetricSpace, psi1: &Presheaf, psi2: &Presheaf) -> Result<ExtReal> {
    if !psi1.0.is_on(x.labels()) || !psi2.0.is_on(x.labels()) {
        return Err(Error::DomainMismatch);
    }
    Ok(sup_hom(Flavor::NonNeg, psi1.values(), psi2.values()))
}

fn require_classical(m: &GenMetricSpace) -> Result<()> {
    if m.kind() == SpaceKind::ClassicalMetric {
        Ok(())
    } else {
        Err(Error::domain("the classical tight span needs a space of kind ClassicalMetric"))
    }
}

/// Classical tight-span membership of a finite-valued `f`:
/// `M(m, m') ≥ f(m') − f(m)` and `f(m) = sup_{m'} {M(m, m') − f(m')}` for
/// all points, within `tol`.
pub fn in_tight_span(m: &GenMetricSpace, f: &ScalarFunction, tol: f64) -> Result<bool> {
    require_classical(m)?;
    if !f.is_on(m.labels()) {
        return Err(Error::DomainMismatch);
    }
    let Some(vals) = f.values().iter().map(|v| v.finite()).collect::<Option<Vec<f64>>>() else {
        return Ok(false);
    };
    tight_span_conditions(m, &vals, tol)
}

fn tight_span_conditions(m: &GenMetricSpace, f: &[f64], tol: f64) -> Result<bool> {
    let n = m.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = m
                .d(i, j)
                .finite()
                .ok_or_else(|| Error::domain("classical spaces have finite distances"))?;
        }
    }
    for i in 0..n {
        let mut sup = f64::NEG_INFINITY;
        for j in 0..n {
            let d = dist[i * n + j];
            if d < f[j] - f[i] - tol {
                return Ok(false);
            }
            sup = sup.max(d - f[j]);
        }
        if (f[i] - sup).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Leg lengths of the tripod spanned by a three-point metric space with
/// `d(b, c) = r`, `d(c, a) = s`, `d(a, b) = t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tripod {
    pub leg_a: f64,
    pub leg_b: f64,
    pub leg_c: f64,
}

impl Tripod {
    /// The tripod centre as a function on `(a, b, c)`: its distance to each
    /// point is the corresponding leg.
    pub fn center(&self) -> [f64; 3] {
        [self.leg_a, self.leg_b, self.leg_c]
    }
}

pub fn tripod_lengths(r: f64, s: f64, t: f64) -> Result<Tripod> {
    if ![r, s, t].iter().all(|v| v.is_finite() && *v >= 0.0) {
        return Err(Error::domain("tripod side lengths must be finite and non-negative"));
    }
    if r > s + t || s > r + t || t > r + s {
        return Err(Error::domain(format!("({r}, {s}, {t}) violates the triangle inequality")));
    }
    Ok(Tripod { leg_a: (s + t - r) / 2.0, leg_b: (r + t - s) / 2.0, leg_c: (r + s - t) / 2.0 })
}

/// The three-point space `a, b, c` with `d(b, c) = r`, `d(c, a) = s`,
/// `d(a, b) = t`.
pub fn three_point_space(r: f64, s: f64, t: f64) -> Result<GenMetricSpace> {
    GenMetricSpace::from_f64(
        &["a", "b", "c"],
        &[&[0.0, t, s], &[t, 0.0, r], &[s, r, 0.0]],
        SpaceKind::ClassicalMetric,
    )
}

/// Grid points of the Isbell completion, in lexicographic order of their
/// grid coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct IsbellSample {
    pub points: Vec<Presheaf>,
    /// Largest grid value per coordinate.
    pub grid_bound: f64,
    /// False when the bound is only a heuristic: every fixed point of a
    /// classical space is bounded by its diameter, but no such bound is
    /// known for asymmetric spaces.
    pub bound_is_complete: bool,
}

/// All functions in `{0, step, 2·step, …}^X` up to the diameter of `X`
/// that pass [`is_isbell_point`] within `tol`.
pub fn sample_isbell_completion(x: &GenMetricSpace, step: f64, tol: f64) -> Result<IsbellSample> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::domain(format!("sampling step must be positive, got {step}")));
    }
    let diam = x
        .diameter()
        .ok_or_else(|| Error::domain("sampling needs a space with finite diameter"))?;
    let per_axis = (diam / step + 1e-9).floor() as u128 + 1;
    let n = x.len() as u32;
    let total = per_axis.checked_pow(n).filter(|t| *t <= MAX_SAMPLE_POINTS).ok_or(Error::ResourceLimit {
        requested: per_axis.saturating_pow(n),
        cap: MAX_SAMPLE_POINTS,
    })?;
    let per_axis = per_axis as usize;
    let n = n as usize;

    let fixed: Vec<Vec<ExtReal>> = (0..total as usize)
        .into_par_iter()
        .filter_map(|idx| {
            let mut digits = vec![ExtReal::ZERO; n];
            let mut rest = idx;
            for slot in digits.iter_mut().rev() {
                *slot = ExtReal::Finite((rest % per_axis) as f64 * step);
                rest /= per_axis;
            }
            let hull = hull_values(x, &digits);
            fixed_within(&hull, &digits, tol).then_some(digits)
        })
        .collect();

    let points = fixed.into_iter().map(|v| Presheaf::new(x, v)).collect::<Result<Vec<_>>>()?;
    Ok(IsbellSample {
        points,
        grid_bound: (per_axis - 1) as f64 * step,
        bound_is_complete: x.kind() == SpaceKind::ClassicalMetric,
    })
}

/// Candidates that lie in the classical tight span, with the largest
/// asymmetry `|I(f, g) − I(g, f)|` seen among them.
#[derive(Clone, Debug, PartialEq)]
pub struct TightSpanSelection {
    pub members: Vec<Presheaf>,
    pub max_asymmetry: f64,
}

impl TightSpanSelection {
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_asymmetry <= tol
    }
}

pub fn tight_span_filter(m: &GenMetricSpace, candidates: &[Presheaf], tol: f64) -> Result<TightSpanSelection> {
    require_classical(m)?;
    let mut members = Vec::new();
    for c in candidates {
        if in_tight_span(m, &c.0, tol)? {
            members.push(c.clone());
        }
    }
    let mut max_asymmetry = 0.0f64;
    for (i, f) in members.iter().enumerate() {
        for g in &members[i + 1..] {
            let fg = isbell_distance(m, f, g)?;
            let gf = isbell_distance(m, g, f)?;
            max_asymmetry = max_asymmetry.max(fg.gap(gf).unwrap_or(f64::INFINITY));
        }
    }
    Ok(TightSpanSelection { members, max_asymmetry })
}

/// Constant `+∞` presheaf, the bottom of the Isbell order.
pub fn infinite_presheaf(x: &GenMetricSpace) -> Presheaf {
    Presheaf::new(x, vec![PosInf; x.len()]).expect("+inf is non-negative")
}
