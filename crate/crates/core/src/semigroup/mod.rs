//! The full inverse semigroup `[[G]]` of a finite pmp groupoid.
//!
//! A [`Bisection`] is a set of arrows on which both the source and the range
//! maps are injective; bisections multiply as sets
//! (`αβ = {ab : s(a) = r(b)}`) and invert arrow-wise. The idempotents are
//! exactly the sets of unit arrows, identified with subsets of the unit space
//! ([`MAlgElement`]). A [`FullGroupElement`] is a bisection whose source and
//! range are the whole unit space.
//!
//! Bisections are plain canonically ordered arrow sets; the groupoid they
//! live in is passed explicitly to every operation. Arrows that do not belong
//! to that groupoid are reported as [`SemigroupError::ForeignArrow`] by the
//! checked operations.

mod enumerate;
mod extend;
mod ops;

pub(crate) use enumerate::partial_injections;
pub use enumerate::EnumKind;
pub use ops::Projections;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::groupoid::{Arrow, FiniteGroupoid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("arrow {0:?} does not belong to the groupoid")]
    ForeignArrow(Arrow),
    #[error("arrows {0:?} and {1:?} share source unit {2}")]
    SourceCollision(Arrow, Arrow, usize),
    #[error("arrows {0:?} and {1:?} share range unit {2}")]
    RangeCollision(Arrow, Arrow, usize),
    #[error("not a full-group element: unit {0} is missing from the {1}")]
    NotFull(usize, &'static str),
    #[error("unit {0} is not in the groupoid")]
    UnknownUnit(usize),
    #[error("enumeration would produce {predicted} elements, over the cap of {cap}")]
    CapExceeded { predicted: u128, cap: u128 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bisection {
    arrows: Vec<Arrow>,
}

impl Bisection {
    /// Checks membership and injectivity of both the source and range maps.
    pub fn new(
        g: &FiniteGroupoid,
        arrows: impl IntoIterator<Item = Arrow>,
    ) -> Result<Self, SemigroupError> {
        let mut arrows: Vec<Arrow> = arrows.into_iter().collect();
        arrows.sort_unstable();
        arrows.dedup();
        let b = Bisection { arrows };
        g.check(&b)?;
        Ok(b)
    }

    pub fn empty() -> Self {
        Bisection::default()
    }

    pub(crate) fn from_sorted_unchecked(arrows: Vec<Arrow>) -> Self {
        debug_assert!(arrows.windows(2).all(|w| w[0] < w[1]));
        Bisection { arrows }
    }

    pub(crate) fn from_unsorted_unchecked(mut arrows: Vec<Arrow>) -> Self {
        arrows.sort_unstable();
        arrows.dedup();
        Bisection { arrows }
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, a: &Arrow) -> bool {
        self.arrows.binary_search(a).is_ok()
    }

    pub fn is_subset(&self, other: &Bisection) -> bool {
        self.arrows.iter().all(|a| other.contains(a))
    }

    /// Idempotent iff every arrow is a unit.
    pub fn is_idempotent(&self) -> bool {
        self.arrows.iter().all(Arrow::is_unit)
    }

    /// Arrows in exactly one of the two sets.
    pub fn symmetric_difference(&self, other: &Bisection) -> Vec<Arrow> {
        let (a, b) = (&self.arrows, &other.arrows);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }
}

impl FromIterator<Arrow> for Bisection {
    /// Unchecked collection; prefer [`Bisection::new`] for untrusted input.
    fn from_iter<I: IntoIterator<Item = Arrow>>(iter: I) -> Self {
        Bisection::from_unsorted_unchecked(iter.into_iter().collect())
    }
}

/// An element of the measure algebra of the unit space: a set of flat unit
/// indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MAlgElement {
    units: BTreeSet<usize>,
}

impl MAlgElement {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_units(units: impl IntoIterator<Item = usize>) -> Self {
        MAlgElement {
            units: units.into_iter().collect(),
        }
    }

    pub fn full(g: &FiniteGroupoid) -> Self {
        Self::from_units(0..g.unit_count())
    }

    pub fn units(&self) -> &BTreeSet<usize> {
        &self.units
    }

    pub fn contains(&self, u: usize) -> bool {
        self.units.contains(&u)
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_units(self.units.intersection(&other.units).copied())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_units(self.units.union(&other.units).copied())
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_units(self.units.difference(&other.units).copied())
    }

    pub fn complement(&self, g: &FiniteGroupoid) -> Self {
        Self::from_units((0..g.unit_count()).filter(|u| !self.units.contains(u)))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.units.is_disjoint(&other.units)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.units.is_subset(&other.units)
    }
}

/// A bisection with `s(α) = r(α) = G⁽⁰⁾`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FullGroupElement(Bisection);

impl FullGroupElement {
    pub fn new(g: &FiniteGroupoid, b: Bisection) -> Result<Self, SemigroupError> {
        g.check(&b)?;
        let mut has_source = vec![false; g.unit_count()];
        let mut has_range = vec![false; g.unit_count()];
        for a in b.arrows() {
            has_source[g.source(a)] = true;
            has_range[g.range(a)] = true;
        }
        if let Some(u) = has_source.iter().position(|&x| !x) {
            return Err(SemigroupError::NotFull(u, "source"));
        }
        if let Some(u) = has_range.iter().position(|&x| !x) {
            return Err(SemigroupError::NotFull(u, "range"));
        }
        Ok(FullGroupElement(b))
    }

    pub(crate) fn new_unchecked(b: Bisection) -> Self {
        FullGroupElement(b)
    }

    pub fn as_bisection(&self) -> &Bisection {
        &self.0
    }

    pub fn into_bisection(self) -> Bisection {
        self.0
    }
}

impl AsRef<Bisection> for FullGroupElement {
    fn as_ref(&self) -> &Bisection {
        &self.0
    }
}
