//! Finite pmp groupoids in normal form.
//!
//! A [`FiniteGroupoid`] is a weighted disjoint union of connected pieces
//! `Γ × Y²`, where `Γ` is a finite group and `Y² ` the full equivalence
//! relation on `Y = {0, …, |Y|-1}`. The arrow `(g, (y_to, y_from))` goes from
//! the unit `y_from` to the unit `y_to`; composition is
//! `(g, (z, y)) · (h, (y, x)) = (gh, (z, x))`.
//!
//! Units are addressed by a flat index: unit `y` of component `c` is
//! `unit_offset(c) + y`. The measure gives every unit of component `c` the
//! mass `weight_c / |Y_c|`, the only measure making the piece pmp.

mod build;
mod raw;

pub use build::{
    convex_combination, corner_restriction, fiber_decomposition, product_groupoid, Corner,
    FiberClass, ProductGroupoid,
};
pub use raw::{
    decompose, from_group_action, validate_raw, Decomposition, MalformedRaw, RawArrow, RawGroupoid,
    ValidationOutcome, Violation,
};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::group::CayleyTable;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("a groupoid needs at least one component")]
    NoComponents,
    #[error("component {component} has empty base set")]
    EmptyBase { component: usize },
    #[error("component {component} has non-positive weight {weight}")]
    NonPositiveWeight { component: usize, weight: String },
    #[error("weights sum to {sum}, expected 1")]
    WeightsNotNormalized { sum: String },
    #[error(transparent)]
    Malformed(#[from] MalformedRaw),
    #[error("groupoid axioms violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Axioms(Vec<Violation>),
    #[error("unit {unit} has no mass")]
    MissingMass { unit: u64 },
    #[error("unit {unit} has non-positive mass {mass}")]
    NonPositiveMass { unit: u64, mass: String },
    #[error(
        "pmp violation: units {a} and {b} are connected but carry masses {mass_a} and {mass_b}"
    )]
    PmpViolation {
        a: u64,
        b: u64,
        mass_a: String,
        mass_b: String,
    },
    #[error(
        "masses not invariant: element {g} moves point {x} of mass {from} to a point of mass {to}"
    )]
    NonInvariantMasses {
        g: usize,
        x: usize,
        from: String,
        to: String,
    },
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("restriction to an empty unit set")]
    EmptyRestriction,
    #[error("unit {unit} is not in the groupoid")]
    UnknownUnit { unit: usize },
    #[error("internal decomposition failure: {0}")]
    Decomposition(String),
}

/// One connected piece `Γ × Y²` with its convex weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub group: CayleyTable,
    pub base_size: usize,
    pub weight: Rational,
}

impl Component {
    pub fn new(group: CayleyTable, base_size: usize, weight: Rational) -> Self {
        Component {
            group,
            base_size,
            weight,
        }
    }

    /// `|s⁻¹(x)| = |Γ|·|Y|` for every unit `x` of the piece.
    pub fn fiber_size(&self) -> usize {
        self.group.order() * self.base_size
    }

    pub fn arrow_count(&self) -> usize {
        self.group.order() * self.base_size * self.base_size
    }
}

/// A single groupoid element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub component: usize,
    pub g: usize,
    pub y_to: usize,
    pub y_from: usize,
}

impl Arrow {
    pub const fn new(component: usize, g: usize, y_to: usize, y_from: usize) -> Self {
        Arrow {
            component,
            g,
            y_to,
            y_from,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.g == 0 && self.y_to == self.y_from
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroupoid {
    components: Vec<Component>,
    unit_offsets: Vec<usize>,
    unit_count: usize,
}

impl FiniteGroupoid {
    pub fn new(components: Vec<Component>) -> Result<Self, GroupoidError> {
        if components.is_empty() {
            return Err(GroupoidError::NoComponents);
        }
        let mut sum = Rational::zero();
        for (i, c) in components.iter().enumerate() {
            if c.base_size == 0 {
                return Err(GroupoidError::EmptyBase { component: i });
            }
            if c.weight <= Rational::zero() {
                return Err(GroupoidError::NonPositiveWeight {
                    component: i,
                    weight: format_rational(&c.weight),
                });
            }
            sum += c.weight;
        }
        if !sum.is_one() {
            return Err(GroupoidError::WeightsNotNormalized {
                sum: format_rational(&sum),
            });
        }
        let mut unit_offsets = Vec::with_capacity(components.len());
        let mut unit_count = 0;
        for c in &components {
            unit_offsets.push(unit_count);
            unit_count += c.base_size;
        }
        Ok(FiniteGroupoid {
            components,
            unit_offsets,
            unit_count,
        })
    }

    /// The group `Γ` viewed as a groupoid with one unit.
    pub fn from_group(group: CayleyTable) -> Self {
        Self::new(vec![Component::new(group, 1, Rational::one())]).expect("valid")
    }

    /// The full equivalence relation on `n` points with counting measure;
    /// its full semigroup is `[[n]]`.
    pub fn full_relation(n: usize) -> Self {
        Self::new(vec![Component::new(
            CayleyTable::trivial(),
            n,
            Rational::one(),
        )])
        .expect("n > 0")
    }

    /// A connected piece `Γ × Y²` with weight 1.
    pub fn connected(group: CayleyTable, base_size: usize) -> Self {
        Self::new(vec![Component::new(group, base_size, Rational::one())]).expect("valid")
    }

    pub fn point() -> Self {
        Self::full_relation(1)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &Component {
        &self.components[c]
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Component `c` alone, renormalized to weight 1.
    pub fn component_groupoid(&self, c: usize) -> FiniteGroupoid {
        let comp = &self.components[c];
        Self::connected(comp.group.clone(), comp.base_size)
    }

    pub fn unit_count(&self) -> usize {
        self.unit_count
    }

    pub fn unit_offset(&self, c: usize) -> usize {
        self.unit_offsets[c]
    }

    pub fn unit_index(&self, c: usize, y: usize) -> usize {
        self.unit_offsets[c] + y
    }

    /// Inverse of [`unit_index`](Self::unit_index).
    pub fn unit_location(&self, unit: usize) -> (usize, usize) {
        let c = match self.unit_offsets.binary_search(&unit) {
            Ok(c) => c,
            Err(c) => c - 1,
        };
        (c, unit - self.unit_offsets[c])
    }

    pub fn unit_mass(&self, unit: usize) -> Rational {
        let (c, _) = self.unit_location(unit);
        let comp = &self.components[c];
        comp.weight / Rational::from_integer(comp.base_size as i64)
    }

    pub fn unit_masses(&self) -> Vec<Rational> {
        (0..self.unit_count).map(|u| self.unit_mass(u)).collect()
    }

    pub fn arrow_count(&self) -> usize {
        self.components.iter().map(Component::arrow_count).sum()
    }

    /// All arrows in canonical (derived `Ord`) order.
    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.components.iter().enumerate().flat_map(|(c, comp)| {
            let n = comp.base_size;
            (0..comp.group.order()).flat_map(move |g| {
                (0..n)
                    .flat_map(move |y_to| (0..n).map(move |y_from| Arrow::new(c, g, y_to, y_from)))
            })
        })
    }

    pub fn contains(&self, a: &Arrow) -> bool {
        a.component < self.components.len() && {
            let comp = &self.components[a.component];
            a.g < comp.group.order() && a.y_to < comp.base_size && a.y_from < comp.base_size
        }
    }

    #[inline]
    pub fn source(&self, a: &Arrow) -> usize {
        self.unit_offsets[a.component] + a.y_from
    }

    #[inline]
    pub fn range(&self, a: &Arrow) -> usize {
        self.unit_offsets[a.component] + a.y_to
    }

    pub fn unit_arrow(&self, unit: usize) -> Arrow {
        let (c, y) = self.unit_location(unit);
        Arrow::new(c, 0, y, y)
    }

    #[inline]
    pub fn inverse_arrow(&self, a: &Arrow) -> Arrow {
        let grp = &self.components[a.component].group;
        Arrow::new(a.component, grp.inv(a.g), a.y_from, a.y_to)
    }

    /// `ab`, defined iff `s(a) = r(b)`.
    #[inline]
    pub fn compose_arrows(&self, a: &Arrow, b: &Arrow) -> Option<Arrow> {
        if a.component != b.component || a.y_from != b.y_to {
            return None;
        }
        let grp = &self.components[a.component].group;
        Some(Arrow::new(a.component, grp.mul(a.g, b.g), a.y_to, b.y_from))
    }

    /// Same components up to weights (the same groupoid carrying possibly
    /// different measures).
    pub fn same_structure(&self, other: &FiniteGroupoid) -> bool {
        self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.group == b.group && a.base_size == b.base_size)
    }

    /// Renders the normal form as a raw composition table. Unit `u` gets the
    /// identifier `u` (both as unit and as unit arrow); the remaining arrows
    /// are numbered from `unit_count()` on in canonical order.
    pub fn to_raw(&self) -> (RawGroupoid, Vec<Arrow>) {
        let mut ids = std::collections::HashMap::new();
        let mut by_id: Vec<Arrow> = (0..self.unit_count).map(|u| self.unit_arrow(u)).collect();
        for (u, a) in by_id.iter().enumerate() {
            ids.insert(*a, u as u64);
        }
        for a in self.arrows() {
            if !a.is_unit() {
                ids.insert(a, by_id.len() as u64);
                by_id.push(a);
            }
        }
        let arrows = by_id
            .iter()
            .enumerate()
            .map(|(id, a)| RawArrow {
                id: id as u64,
                source: self.source(a) as u64,
                range: self.range(a) as u64,
            })
            .collect();
        let mut compositions = std::collections::BTreeMap::new();
        for a in &by_id {
            for b in &by_id {
                if let Some(ab) = self.compose_arrows(a, b) {
                    compositions.insert((ids[a], ids[b]), ids[&ab]);
                }
            }
        }
        let masses = (0..self.unit_count)
            .map(|u| (u as u64, self.unit_mass(u)))
            .collect();
        let raw = RawGroupoid {
            units: (0..self.unit_count as u64).collect(),
            arrows,
            compositions,
            masses,
        };
        (raw, by_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rejects_bad_weights() {
        let z2 = CayleyTable::cyclic(2);
        let err = FiniteGroupoid::new(vec![Component::new(z2.clone(), 1, rat(1, 2))]).unwrap_err();
        assert!(matches!(err, GroupoidError::WeightsNotNormalized { .. }));
        let err = FiniteGroupoid::new(vec![
            Component::new(z2.clone(), 1, rat(3, 2)),
            Component::new(z2.clone(), 1, rat(-1, 2)),
        ])
        .unwrap_err();
        assert!(matches!(
            err,
            GroupoidError::NonPositiveWeight { component: 1, .. }
        ));
        let err = FiniteGroupoid::new(vec![Component::new(z2, 0, rat(1, 1))]).unwrap_err();
        assert_eq!(err, GroupoidError::EmptyBase { component: 0 });
        assert_eq!(
            FiniteGroupoid::new(vec![]).unwrap_err(),
            GroupoidError::NoComponents
        );
    }

    #[test]
    fn units_and_masses() {
        let g = FiniteGroupoid::new(vec![
            Component::new(CayleyTable::cyclic(2), 2, rat(1, 3)),
            Component::new(CayleyTable::trivial(), 3, rat(2, 3)),
        ])
        .unwrap();
        assert_eq!(g.unit_count(), 5);
        assert_eq!(g.unit_location(0), (0, 0));
        assert_eq!(g.unit_location(1), (0, 1));
        assert_eq!(g.unit_location(2), (1, 0));
        assert_eq!(g.unit_location(4), (1, 2));
        assert_eq!(g.unit_mass(1), rat(1, 6));
        assert_eq!(g.unit_mass(3), rat(2, 9));
        let total: Rational = g.unit_masses().into_iter().sum();
        assert_eq!(total, rat(1, 1));
        assert_eq!(g.arrow_count(), 8 + 9);
        assert_eq!(g.arrows().count(), 17);
    }

    #[test]
    fn arrow_algebra() {
        let g = FiniteGroupoid::connected(CayleyTable::cyclic(3), 2);
        let a = Arrow::new(0, 1, 1, 0);
        let b = Arrow::new(0, 2, 0, 1);
        assert_eq!(g.compose_arrows(&a, &b), Some(Arrow::new(0, 0, 1, 1)));
        assert_eq!(g.compose_arrows(&a, &a), None);
        assert_eq!(g.inverse_arrow(&a), Arrow::new(0, 2, 0, 1));
        assert_eq!(g.source(&a), 0);
        assert_eq!(g.range(&a), 1);
        assert!(g.unit_arrow(1).is_unit());
    }
}
