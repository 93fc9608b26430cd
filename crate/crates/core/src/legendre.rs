//! The Legendre-Fenchel transform of extended-real functions sampled on
//! uniform grids in one or two dimensions.
//!
//! `f̂(k) = sup_x {⟨k, x⟩ − f(x)}` and `ǧ(x) = sup_k {⟨k, x⟩ − g(k)}`, with
//! the sup taken over grid points and the difference following the signed
//! hom conventions (`+∞ − +∞ = −∞`, `a − (−∞) = +∞`). On a bounded grid the
//! sup is truncated, so every transformed value records whether its maxima
//! all sit on the grid boundary.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ext::{ExtReal, Flavor, NegInf, PosInf};
use crate::space::sup_hom;

/// Constant in the grid tolerance `C·(h + h²·max|k|)`.
pub const GRID_TOL_FACTOR: f64 = 4.0;

/// Points per grid refused above this, to keep the quadratic transform
/// bounded.
pub const MAX_GRID_POINTS: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    min: f64,
    max: f64,
    count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || !(min < max) {
            return Err(Error::domain(format!("axis needs finite min < max, got {min}:{max}")));
        }
        if count < 2 {
            return Err(Error::domain(format!("axis needs at least 2 samples, got {count}")));
        }
        Ok(Axis { min, max, count })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    /// Computed as `min + (max − min)·i/(count − 1)` so that round values
    /// such as kinks at integers land exactly on the grid.
    pub fn coord(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.coord(i))
    }
}

/// A uniform grid in one or two dimensions, points enumerated
/// lexicographically with the last axis varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if !(1..=2).contains(&axes.len()) {
            return Err(Error::domain(format!("grids have dimension 1 or 2, got {}", axes.len())));
        }
        let total = axes.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.count));
        match total {
            Some(t) if t <= MAX_GRID_POINTS => Ok(Grid { axes }),
            _ => Err(Error::ResourceLimit {
                requested: axes.iter().map(|a| a.count as u128).product(),
                cap: MAX_GRID_POINTS as u128,
            }),
        }
    }

    pub fn line(min: f64, max: f64, count: usize) -> Result<Self> {
        Grid::new(vec![Axis::new(min, max, count)?])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest axis spacing.
    pub fn spacing(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).fold(0.0, f64::max)
    }

    fn indices(&self, idx: usize) -> [usize; 2] {
        match self.axes.as_slice() {
            [_] => [idx, 0],
            [_, b] => [idx / b.count, idx % b.count],
            _ => unreachable!("grid dimension is checked on construction"),
        }
    }

    /// Coordinates of point `idx`, padded with zero in one dimension.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let ij = self.indices(idx);
        let mut p = [0.0; 2];
        for (d, axis) in self.axes.iter().enumerate() {
            p[d] = axis.coord(ij[d]);
        }
        p
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        let ij = self.indices(idx);
        self.axes.iter().enumerate().any(|(d, a)| ij[d] == 0 || ij[d] + 1 == a.count)
    }

    /// Largest `|coordinate|` over the grid, attained at a corner.
    pub fn max_abs(&self) -> f64 {
        self.axes.iter().map(|a| a.min.abs().max(a.max.abs())).fold(0.0, f64::max)
    }
}

/// A grid read as slopes `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualGrid(pub Grid);

/// Signed extended-real values, one per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<ExtReal>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<ExtReal>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| ExtReal::new(f(grid.point(i)))).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid, value: ExtReal) -> Self {
        let values = vec![value; grid.len()];
        SampledFunction { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ExtReal> {
        self.values
    }

    fn same_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }
}

/// A transformed function with, per point, the first grid point attaining
/// the max and whether every maximiser lies on the source grid's boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform {
    pub function: SampledFunction,
    pub witness: Vec<Option<usize>>,
    pub at_boundary: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Best {
    value: ExtReal,
    witness: Option<usize>,
    interior: bool,
}

fn dot(k: [f64; 2], x: [f64; 2]) -> f64 {
    k[0] * x[0] + k[1] * x[1]
}

fn check_dims(a: &Grid, b: &Grid) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::domain(format!("cannot pair a {}-d grid with a {}-d grid", a.dim(), b.dim())))
    }
}

struct Source {
    points: Vec<[f64; 2]>,
    boundary: Vec<bool>,
    finite: Option<Vec<f64>>,
}

impl Source {
    fn new(f: &SampledFunction) -> Self {
        let g = &f.grid;
        Source {
            points: (0..g.len()).map(|i| g.point(i)).collect(),
            boundary: (0..g.len()).map(|i| g.is_boundary(i)).collect(),
            finite: f.values.iter().map(|v| v.finite()).collect(),
        }
    }

    fn eval(&self, values: &[ExtReal], k: [f64; 2]) -> Best {
        if let Some(vals) = &self.finite {
            let mut best = Best { value: NegInf, witness: None, interior: false };
            let mut top = f64::NEG_INFINITY;
            for (i, (&x, &v)) in self.points.iter().zip(vals).enumerate() {
                let term = dot(k, x) - v;
                if term > top {
                    top = term;
                    best.witness = Some(i);
                    best.interior = !self.boundary[i];
                } else if term == top && !self.boundary[i] {
                    best.interior = true;
                }
            }
            best.value = ExtReal::new(top).unwrap_or(NegInf);
            return best;
        }
        let mut best = Best { value: NegInf, witness: None, interior: false };
        for (i, (&x, &v)) in self.points.iter().zip(values).enumerate() {
            let term = ExtReal::hom_signed(v, ExtReal::Finite(dot(k, x)));
            if term == NegInf {
                continue;
            }
            if best.witness.is_none() || term > best.value {
                best = Best { value: term, witness: Some(i), interior: !self.boundary[i] };
            } else if term == best.value && !self.boundary[i] {
                best.interior = true;
            }
        }
        best
    }
}

fn conjugate(f: &SampledFunction, target: &Grid) -> Result<Transform> {
    check_dims(&f.grid, target)?;
    let src = Source::new(f);
    let best: Vec<Best> = (0..target.len())
        .into_par_iter()
        .map(|j| src.eval(&f.values, target.point(j)))
        .collect();
    let function = SampledFunction::new(target.clone(), best.iter().map(|b| b.value).collect())?;
    Ok(Transform {
        function,
        witness: best.iter().map(|b| b.witness).collect(),
        at_boundary: best.iter().map(|b| b.witness.is_some() && !b.interior).collect(),
    })
}

/// `f̂(k) = max_x {⟨k, x⟩ − f(x)}` for every `k` in `dual`.
pub fn lf_forward(f: &SampledFunction, dual: &DualGrid) -> Result<Transform> {
    conjugate(f, &dual.0)
}

/// `ǧ(x) = max_k {⟨k, x⟩ − g(k)}` for every `x` in `primal`.
pub fn lf_reverse(g: &SampledFunction, primal: &Grid) -> Result<Transform> {
    conjugate(g, primal)
}

/// `f̂(k)` at a single slope, with the first maximiser and the boundary
/// flag.
pub fn conjugate_at(f: &SampledFunction, k: &[f64]) -> Result<(ExtReal, Option<usize>, bool)> {
    if k.len() != f.grid.dim() {
        return Err(Error::domain(format!("slope has {} components, grid has {}", k.len(), f.grid.dim())));
    }
    let mut kk = [0.0; 2];
    kk[..k.len()].copy_from_slice(k);
    let b = Source::new(f).eval(&f.values, kk);
    Ok((b.value, b.witness, b.witness.is_some() && !b.interior))
}

/// `min(ǧ∘f̂, f)` on the grid of `f`. The double transform is already
/// below `f` in exact arithmetic; the `min` keeps that true after
/// rounding.
pub fn convex_hull(f: &SampledFunction, dual: &DualGrid) -> Result<SampledFunction> {
    let forward = lf_forward(f, dual)?;
    let back = lf_reverse(&forward.function, &f.grid)?;
    let values = back.function.values.iter().zip(&f.values).map(|(h, v)| h.min(*v)).collect();
    SampledFunction::new(f.grid.clone(), values)
}

/// Slopes spanning the finite-difference slopes of `f` along each axis,
/// widened by 10% on both sides, with the sample counts of `f`'s grid.
pub fn default_dual_grid(f: &SampledFunction) -> Result<DualGrid> {
    let g = &f.grid;
    let mut axes = Vec::with_capacity(g.dim());
    for (d, axis) in g.axes.iter().enumerate() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..g.len() {
            let ij = g.indices(i);
            if ij[d] + 1 == axis.count {
                continue;
            }
            let next = if d == 0 && g.dim() == 2 { i + g.axes[1].count } else { i + 1 };
            if let (Some(a), Some(b)) = (f.values[i].finite(), f.values[next].finite()) {
                let s = (b - a) / (axis.coord(ij[d] + 1) - axis.coord(ij[d]));
                lo = lo.min(s);
                hi = hi.max(s);
            }
        }
        let (lo, hi) = if lo > hi {
            (-1.0, 1.0)
        } else {
            let pad = if hi > lo { 0.1 * (hi - lo) } else { 0.1 * lo.abs().max(1.0) };
            (lo - pad, hi + pad)
        };
        axes.push(Axis::new(lo, hi, axis.count)?);
    }
    Ok(DualGrid(Grid::new(axes)?))
}

/// `C·(h + h²·max|k|)` with `h` the primal spacing and `max|k|` the
/// largest slope magnitude on the dual grid.
pub fn grid_tolerance(primal: &Grid, dual: &DualGrid) -> f64 {
    let h = primal.spacing();
    GRID_TOL_FACTOR * (h + h * h * dual.0.max_abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub slope: Vec<f64>,
    /// `−f̂(k)`, the value of the hyperplane at the origin.
    pub intercept: f64,
    /// First grid point where the hyperplane meets the graph.
    pub touch: usize,
}

/// The hyperplane `z = ⟨k, x⟩ − f̂(k)`, which lies below the graph of `f`
/// and touches it. `None` when `f̂(k)` is infinite or when it is only
/// attained on the grid boundary, where the bounded grid has cut off the
/// sup.
pub fn supporting_hyperplane(f: &SampledFunction, k: &[f64]) -> Result<Option<Hyperplane>> {
    let (value, witness, at_boundary) = conjugate_at(f, k)?;
    Ok(match (value.finite(), witness) {
        (Some(v), Some(touch)) if !at_boundary => Some(Hyperplane { slope: k.to_vec(), intercept: -v, touch }),
        _ => None,
    })
}

/// `sup_x {f'(x) − f(x)}` over the shared grid.
pub fn lf_distance(f: &SampledFunction, f2: &SampledFunction) -> Result<ExtReal> {
    f.same_grid(f2)?;
    Ok(sup_hom(Flavor::Signed, &f.values, &f2.values))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolandSinger {
    /// Distance from `f` to `g` on the primal grid.
    pub lhs: ExtReal,
    /// Distance from `ĝ` to `f̂` on the dual grid.
    pub rhs: ExtReal,
    pub pass: bool,
}

pub fn toland_singer_check(f: &SampledFunction, g: &SampledFunction, dual: &DualGrid, tol: f64) -> Result<TolandSinger> {
    let lhs = lf_distance(f, g)?;
    let fh = lf_forward(f, dual)?.function;
    let gh = lf_forward(g, dual)?.function;
    let rhs = lf_distance(&gh, &fh)?;
    Ok(TolandSinger { lhs, rhs, pass: lhs.approx_eq(rhs, tol) })
}

/// Whether `f` agrees with its double transform within `tol`, infinities
/// matched exactly.
pub fn is_closed_convex(f: &SampledFunction, dual: &DualGrid, tol: f64) -> Result<bool> {
    let hull = convex_hull(f, dual)?;
    Ok(hull.values.iter().zip(&f.values).all(|(h, v)| h.approx_eq(*v, tol)))
}

/// Largest `|f − g|` over finite pairs, or `None` when the infinities
/// differ.
pub fn sup_gap(f: &SampledFunction, g: &SampledFunction) -> Result<Option<f64>> {
    f.same_grid(g)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .try_fold(0.0f64, |acc, (a, b)| a.gap(*b).map(|d| acc.max(d))))
}

/// The constant `+∞` function, whose transform is the constant `−∞`.
pub fn infinite_function(grid: Grid) -> SampledFunction {
    SampledFunction::constant(grid, PosInf)
}
