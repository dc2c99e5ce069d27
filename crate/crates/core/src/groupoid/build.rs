//! Constructions of new normal forms from old ones.

use num_traits::{One, Zero};

use super::{Arrow, Component, FiniteGroupoid, GroupoidError};
use crate::rational::{format_rational, Rational};
use crate::semigroup::{Bisection, MAlgElement};

/// `Σ tᵢ Gᵢ`: components concatenated in order, weights rescaled by `tᵢ`.
pub fn convex_combination(
    parts: &[(Rational, FiniteGroupoid)],
) -> Result<FiniteGroupoid, GroupoidError> {
    let mut total = Rational::zero();
    for (i, (t, _)) in parts.iter().enumerate() {
        if *t <= Rational::zero() {
            return Err(GroupoidError::NonPositiveWeight {
                component: i,
                weight: format_rational(t),
            });
        }
        total += t;
    }
    if !total.is_one() {
        return Err(GroupoidError::WeightsNotNormalized {
            sum: format_rational(&total),
        });
    }
    let components = parts
        .iter()
        .flat_map(|(t, g)| {
            g.components()
                .iter()
                .map(move |c| Component::new(c.group.clone(), c.base_size, c.weight * t))
        })
        .collect();
    FiniteGroupoid::new(components)
}

/// `G × H` with the product measure, remembering both factors.
///
/// Component `(i, j)` sits at index `i·|H.components| + j` and is
/// `(Γᵢ × Γⱼ) × (Yᵢ × Yⱼ)²` with weight `tᵢuⱼ`. Group pairs `(a, b)` are
/// indexed `a·|Γⱼ| + b` and base pairs `(y, y')` are indexed `y·|Yⱼ| + y'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductGroupoid {
    pub groupoid: FiniteGroupoid,
    pub left: FiniteGroupoid,
    pub right: FiniteGroupoid,
}

pub fn product_groupoid(left: &FiniteGroupoid, right: &FiniteGroupoid) -> ProductGroupoid {
    let mut components = Vec::new();
    for a in left.components() {
        for b in right.components() {
            components.push(Component::new(
                a.group.direct_product(&b.group),
                a.base_size * b.base_size,
                a.weight * b.weight,
            ));
        }
    }
    ProductGroupoid {
        groupoid: FiniteGroupoid::new(components).expect("product of probability measures"),
        left: left.clone(),
        right: right.clone(),
    }
}

impl ProductGroupoid {
    pub fn pair(&self, a: &Arrow, b: &Arrow) -> Arrow {
        let rc = self.right.component(b.component);
        let (m, n) = (rc.group.order(), rc.base_size);
        Arrow::new(
            a.component * self.right.components().len() + b.component,
            a.g * m + b.g,
            a.y_to * n + b.y_to,
            a.y_from * n + b.y_from,
        )
    }

    pub fn split(&self, p: &Arrow) -> (Arrow, Arrow) {
        let k = self.right.components().len();
        let (ca, cb) = (p.component / k, p.component % k);
        let rc = self.right.component(cb);
        let (m, n) = (rc.group.order(), rc.base_size);
        (
            Arrow::new(ca, p.g / m, p.y_to / n, p.y_from / n),
            Arrow::new(cb, p.g % m, p.y_to % n, p.y_from % n),
        )
    }

    pub fn pair_units(&self, u: usize, v: usize) -> usize {
        self.groupoid
            .range(&self.pair(&self.left.unit_arrow(u), &self.right.unit_arrow(v)))
    }

    /// `α × β = {(a, b) : a ∈ α, b ∈ β}`.
    pub fn rectangle(&self, alpha: &Bisection, beta: &Bisection) -> Bisection {
        Bisection::from_sorted_unchecked({
            let mut v: Vec<Arrow> = alpha
                .arrows()
                .iter()
                .flat_map(|a| beta.arrows().iter().map(move |b| (a, b)))
                .map(|(a, b)| self.pair(a, b))
                .collect();
            v.sort_unstable();
            v
        })
    }
}

/// The restriction `H = {g : s(g), r(g) ∈ A}` with measure `μ(·)/μ(A)`.
///
/// In normal form every nonempty unit set gives a groupoid with unit space
/// `A`: on component `c` it is `Γ_c × (Y_c ∩ A)²`. Components missing `A`
/// entirely are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corner {
    pub groupoid: FiniteGroupoid,
    pub parent: FiniteGroupoid,
    /// Parent component of each corner component.
    component_map: Vec<usize>,
    /// For each corner component, parent base index of each corner point.
    point_map: Vec<Vec<usize>>,
    /// Parent unit -> corner unit.
    unit_back: Vec<Option<usize>>,
    pub mass: Rational,
}

pub fn corner_restriction(
    g: &FiniteGroupoid,
    units: &MAlgElement,
) -> Result<Corner, GroupoidError> {
    if units.is_empty() {
        return Err(GroupoidError::EmptyRestriction);
    }
    if let Some(&u) = units.units().iter().find(|&&u| u >= g.unit_count()) {
        return Err(GroupoidError::UnknownUnit { unit: u });
    }
    let mass: Rational = units.units().iter().map(|&u| g.unit_mass(u)).sum();
    let mut components = Vec::new();
    let mut component_map = Vec::new();
    let mut point_map = Vec::new();
    for (c, comp) in g.components().iter().enumerate() {
        let points: Vec<usize> = (0..comp.base_size)
            .filter(|&y| units.contains(g.unit_index(c, y)))
            .collect();
        if points.is_empty() {
            continue;
        }
        let weight = comp.weight * Rational::new(points.len() as i64, comp.base_size as i64) / mass;
        components.push(Component::new(comp.group.clone(), points.len(), weight));
        component_map.push(c);
        point_map.push(points);
    }
    let groupoid = FiniteGroupoid::new(components)?;
    let mut unit_back = vec![None; g.unit_count()];
    for (k, points) in point_map.iter().enumerate() {
        for (y, &py) in points.iter().enumerate() {
            unit_back[g.unit_index(component_map[k], py)] = Some(groupoid.unit_index(k, y));
        }
    }
    Ok(Corner {
        groupoid,
        parent: g.clone(),
        component_map,
        point_map,
        unit_back,
        mass,
    })
}

impl Corner {
    pub fn to_parent(&self, a: &Arrow) -> Arrow {
        let pts = &self.point_map[a.component];
        Arrow::new(
            self.component_map[a.component],
            a.g,
            pts[a.y_to],
            pts[a.y_from],
        )
    }

    /// `None` unless both ends of `a` lie in the corner.
    pub fn from_parent(&self, a: &Arrow) -> Option<Arrow> {
        let r = self.unit_back[self.parent.range(a)]?;
        let s = self.unit_back[self.parent.source(a)]?;
        let (c, y_to) = self.groupoid.unit_location(r);
        let (_, y_from) = self.groupoid.unit_location(s);
        Some(Arrow::new(c, a.g, y_to, y_from))
    }

    pub fn unit_to_parent(&self, u: usize) -> usize {
        self.parent
            .range(&self.to_parent(&self.groupoid.unit_arrow(u)))
    }

    pub fn lift(&self, beta: &Bisection) -> Bisection {
        Bisection::from_unsorted_unchecked(
            beta.arrows().iter().map(|a| self.to_parent(a)).collect(),
        )
    }

    /// Keeps the arrows of `alpha` inside the corner.
    pub fn restrict(&self, alpha: &Bisection) -> Bisection {
        Bisection::from_unsorted_unchecked(
            alpha
                .arrows()
                .iter()
                .filter_map(|a| self.from_parent(a))
                .collect(),
        )
    }
}

/// Components grouped by fiber size `|s⁻¹(x)| = |Γ|·|Y|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberClass {
    pub fiber_size: usize,
    pub components: Vec<usize>,
}

impl FiberClass {
    /// The units of this class, as a measure-algebra element of the parent.
    pub fn units(&self, g: &FiniteGroupoid) -> MAlgElement {
        MAlgElement::from_units(
            self.components
                .iter()
                .flat_map(|&c| (0..g.component(c).base_size).map(move |y| g.unit_index(c, y))),
        )
    }
}

pub fn fiber_decomposition(g: &FiniteGroupoid) -> Vec<FiberClass> {
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (c, comp) in g.components().iter().enumerate() {
        classes.entry(comp.fiber_size()).or_default().push(c);
    }
    classes
        .into_iter()
        .map(|(fiber_size, components)| FiberClass {
            fiber_size,
            components,
        })
        .collect()
}
