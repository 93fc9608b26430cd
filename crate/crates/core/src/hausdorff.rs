//! The asymmetric Hausdorff distance on finite subsets of a finite space.
//!
//! `S(A, B) = sup_{a∈A} inf_{b∈B} d(a, b)` with the empty-set conventions
//! `sup ∅ = 0` and `inf ∅ = +∞`, so `S(∅, B) = 0` and `S(A, ∅) = ∞` for
//! non-empty `A`. `S(A, B) = 0` exactly when `A ⊆ B`; the classical
//! Hausdorff distance is the symmetrization.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::{ExtReal, PosInf};
use crate::space::{GenMetricSpace, Labels, SpaceKind};

/// A set of point indices of some base space, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetSelection {
    labels: Labels,
    members: Vec<usize>,
}

impl SubsetSelection {
    pub fn new(base: &GenMetricSpace, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i >= base.len()) {
            return Err(Error::Shape(format!("index {bad} out of range for {} points", base.len())));
        }
        members.sort_unstable();
        members.dedup();
        Ok(SubsetSelection { labels: base.labels().clone(), members })
    }

    pub fn from_labels(base: &GenMetricSpace, labels: &[&str]) -> Result<Self> {
        let idx = labels.iter().map(|l| base.index_of(l)).collect::<Result<Vec<_>>>()?;
        Self::new(base, idx)
    }

    pub fn empty(base: &GenMetricSpace) -> Self {
        SubsetSelection { labels: base.labels().clone(), members: Vec::new() }
    }

    /// Every subset of `base`, ordered by bitmask. Only sensible for small
    /// spaces.
    pub fn all(base: &GenMetricSpace) -> Vec<SubsetSelection> {
        let n = base.len();
        assert!(n < 20, "refusing to enumerate 2^{n} subsets");
        (0u32..1 << n)
            .map(|mask| SubsetSelection {
                labels: base.labels().clone(),
                members: (0..n).filter(|i| mask & (1 << i) != 0).collect(),
            })
            .collect()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &SubsetSelection) -> bool {
        self.members.iter().all(|i| other.members.binary_search(i).is_ok())
    }

    fn check_base(&self, base: &GenMetricSpace) -> Result<()> {
        if Arc::ptr_eq(&self.labels, base.labels()) || self.labels == *base.labels() {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    fn name(&self) -> String {
        let inner: Vec<&str> = self.members.iter().map(|&i| self.labels[i].as_str()).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// `sup_{a∈A} inf_{b∈B} d(a, b)`.
pub fn directed_hausdorff(m: &GenMetricSpace, a: &SubsetSelection, b: &SubsetSelection) -> Result<ExtReal> {
    a.check_base(m)?;
    b.check_base(m)?;
    Ok(directed(m, a, b))
}

fn directed(m: &GenMetricSpace, a: &SubsetSelection, b: &SubsetSelection) -> ExtReal {
    a.members.iter().fold(ExtReal::ZERO, |sup, &i| {
        let nearest = b.members.iter().fold(PosInf, |inf, &j| inf.min(m.d(i, j)));
        sup.max(nearest)
    })
}

/// Classical Hausdorff distance `max(S(A, B), S(B, A))` for non-empty
/// subsets.
pub fn hausdorff(m: &GenMetricSpace, a: &SubsetSelection, b: &SubsetSelection) -> Result<ExtReal> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("the Hausdorff distance is defined for non-empty subsets"));
    }
    Ok(directed_hausdorff(m, a, b)?.max(directed_hausdorff(m, b, a)?))
}

/// The generalized metric space whose points are `subsets` and whose
/// distances are directed Hausdorff distances.
pub fn subset_space(m: &GenMetricSpace, subsets: &[SubsetSelection]) -> Result<GenMetricSpace> {
    for s in subsets {
        s.check_base(m)?;
    }
    let labels = subsets.iter().map(SubsetSelection::name).collect();
    GenMetricSpace::from_fn(labels, SpaceKind::RplusCategory, |i, j| directed(m, &subsets[i], &subsets[j]))
}
