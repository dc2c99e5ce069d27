//! Raw composition tables: axiom checking and reduction to normal form.
//!
//! A raw groupoid lists its units, its arrows `(id, source, range)` and a
//! composition table `(a, b) ↦ ab`, where `ab` is defined exactly when
//! `source(a) = range(b)`. Every unit `u` must also appear as the arrow
//! `(u, u, u)`: unit identifiers double as the identifiers of the unit
//! arrows.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Arrow, Component, FiniteGroupoid, GroupoidError};
use crate::group::CayleyTable;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawArrow {
    pub id: u64,
    pub source: u64,
    pub range: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawGroupoid {
    pub units: Vec<u64>,
    pub arrows: Vec<RawArrow>,
    pub compositions: BTreeMap<(u64, u64), u64>,
    /// Per-unit masses; may be empty when the caller supplies weights.
    pub masses: BTreeMap<u64, Rational>,
}

/// Structural problems, reported separately from axiom violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedRaw {
    #[error("unit {0} declared twice")]
    DuplicateUnit(u64),
    #[error("arrow {0} declared twice")]
    DuplicateArrow(u64),
    #[error("arrow {arrow} has undeclared {end} unit {unit}")]
    DanglingEndpoint {
        arrow: u64,
        end: &'static str,
        unit: u64,
    },
    #[error("composition entry ({left}, {right}) -> {result} references unknown arrow {unknown}")]
    DanglingComposition {
        left: u64,
        right: u64,
        result: u64,
        unknown: u64,
    },
    #[error("composition ({left}, {right}) given twice")]
    DuplicateComposition { left: u64, right: u64 },
    #[error("mass given for undeclared unit {0}")]
    DanglingMass(u64),
}

/// A failed groupoid axiom, naming the offending tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    MissingUnitArrow { unit: u64 },
    MissingComposition { left: u64, right: u64 },
    NotComposable { left: u64, right: u64 },
    Endpoints { left: u64, right: u64, result: u64 },
    LeftUnit { unit: u64, arrow: u64 },
    RightUnit { arrow: u64, unit: u64 },
    Associativity { a: u64, b: u64, c: u64 },
    Inverse { arrow: u64 },
    InverseNotUnique { arrow: u64, candidates: Vec<u64> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingUnitArrow { unit } => write!(f, "unit arrow missing at {unit}"),
            Violation::MissingComposition { left, right } => {
                write!(f, "composition undefined on composable pair ({left}, {right})")
            }
            Violation::NotComposable { left, right } => {
                write!(f, "composition defined on non-composable pair ({left}, {right})")
            }
            Violation::Endpoints {
                left,
                right,
                result,
            } => write!(
                f,
                "endpoints of ({left}, {right}) -> {result} do not match source({right}) and range({left})"
            ),
            Violation::LeftUnit { unit, arrow } => write!(f, "left unit law at ({unit}, {arrow})"),
            Violation::RightUnit { arrow, unit } => {
                write!(f, "right unit law at ({arrow}, {unit})")
            }
            Violation::Associativity { a, b, c } => write!(f, "associativity at ({a}, {b}, {c})"),
            Violation::Inverse { arrow } => write!(f, "inverse law at {arrow}"),
            Violation::InverseNotUnique { arrow, candidates } => {
                write!(f, "inverse not unique at {arrow}: {candidates:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationOutcome {
    pub violations: Vec<Violation>,
}

impl ValidationOutcome {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Index over a structurally sound raw table.
struct RawIndex<'a> {
    raw: &'a RawGroupoid,
    arrow: HashMap<u64, RawArrow>,
    into: HashMap<u64, Vec<u64>>,
    out_of: HashMap<u64, Vec<u64>>,
}

impl<'a> RawIndex<'a> {
    fn build(raw: &'a RawGroupoid) -> Result<Self, MalformedRaw> {
        let mut units = BTreeSet::new();
        for &u in &raw.units {
            if !units.insert(u) {
                return Err(MalformedRaw::DuplicateUnit(u));
            }
        }
        let mut arrow = HashMap::new();
        let mut into: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut out_of: HashMap<u64, Vec<u64>> = HashMap::new();
        for a in &raw.arrows {
            for (end, unit) in [("source", a.source), ("range", a.range)] {
                if !units.contains(&unit) {
                    return Err(MalformedRaw::DanglingEndpoint {
                        arrow: a.id,
                        end,
                        unit,
                    });
                }
            }
            if arrow.insert(a.id, *a).is_some() {
                return Err(MalformedRaw::DuplicateArrow(a.id));
            }
            into.entry(a.range).or_default().push(a.id);
            out_of.entry(a.source).or_default().push(a.id);
        }
        for (&(left, right), &result) in &raw.compositions {
            for unknown in [left, right, result] {
                if !arrow.contains_key(&unknown) {
                    return Err(MalformedRaw::DanglingComposition {
                        left,
                        right,
                        result,
                        unknown,
                    });
                }
            }
        }
        for &u in raw.masses.keys() {
            if !units.contains(&u) {
                return Err(MalformedRaw::DanglingMass(u));
            }
        }
        for v in into.values_mut().chain(out_of.values_mut()) {
            v.sort_unstable();
        }
        Ok(RawIndex {
            raw,
            arrow,
            into,
            out_of,
        })
    }

    fn mul(&self, a: u64, b: u64) -> Option<u64> {
        self.raw.compositions.get(&(a, b)).copied()
    }

    fn arriving(&self, unit: u64) -> &[u64] {
        self.into.get(&unit).map_or(&[], Vec::as_slice)
    }

    fn out_of(&self, unit: u64) -> &[u64] {
        self.out_of.get(&unit).map_or(&[], Vec::as_slice)
    }

    /// Two-sided inverses of `g`: arrows `h: r(g) → s(g)` with `gh = r(g)`
    /// and `hg = s(g)`.
    fn inverses(&self, g: u64) -> Vec<u64> {
        let a = self.arrow[&g];
        self.out_of(a.range)
            .iter()
            .copied()
            .filter(|&h| self.arrow[&h].range == a.source)
            .filter(|&h| self.mul(g, h) == Some(a.range) && self.mul(h, g) == Some(a.source))
            .collect()
    }
}

/// Checks the groupoid axioms on a raw table.
///
/// Returns `Err` only for structural problems (dangling identifiers,
/// duplicates); axiom failures are collected in the outcome, each naming the
/// offending tuple.
pub fn validate_raw(raw: &RawGroupoid) -> Result<ValidationOutcome, MalformedRaw> {
    let ix = RawIndex::build(raw)?;
    let mut violations = Vec::new();

    let mut units_ok = true;
    for &u in &raw.units {
        let ok = ix
            .arrow
            .get(&u)
            .is_some_and(|a| a.source == u && a.range == u);
        if !ok {
            violations.push(Violation::MissingUnitArrow { unit: u });
            units_ok = false;
        }
    }

    for (&(left, right), &result) in &raw.compositions {
        let (a, b, c) = (ix.arrow[&left], ix.arrow[&right], ix.arrow[&result]);
        if a.source != b.range {
            violations.push(Violation::NotComposable { left, right });
        } else if c.source != b.source || c.range != a.range {
            violations.push(Violation::Endpoints {
                left,
                right,
                result,
            });
        }
    }
    for a in &raw.arrows {
        for &b in ix.arriving(a.source) {
            if ix.mul(a.id, b).is_none() {
                violations.push(Violation::MissingComposition {
                    left: a.id,
                    right: b,
                });
            }
        }
    }

    if units_ok {
        for a in &raw.arrows {
            if ix.mul(a.range, a.id) != Some(a.id) {
                violations.push(Violation::LeftUnit {
                    unit: a.range,
                    arrow: a.id,
                });
            }
            if ix.mul(a.id, a.source) != Some(a.id) {
                violations.push(Violation::RightUnit {
                    arrow: a.id,
                    unit: a.source,
                });
            }
        }
    }

    // (ab)c = a(bc) over composable triples where all products exist
    for b in &raw.arrows {
        let lefts: Vec<u64> = ix.out_of(b.range).to_vec();
        let rights: Vec<u64> = ix.arriving(b.source).to_vec();
        for &a in &lefts {
            let Some(ab) = ix.mul(a, b.id) else { continue };
            for &c in &rights {
                let Some(bc) = ix.mul(b.id, c) else { continue };
                // a missing product is already reported above
                if let (Some(x), Some(y)) = (ix.mul(ab, c), ix.mul(a, bc)) {
                    if x != y {
                        violations.push(Violation::Associativity { a, b: b.id, c });
                    }
                }
            }
        }
    }

    if units_ok {
        for a in &raw.arrows {
            let inv = ix.inverses(a.id);
            match inv.len() {
                0 => violations.push(Violation::Inverse { arrow: a.id }),
                1 => {}
                _ => violations.push(Violation::InverseNotUnique {
                    arrow: a.id,
                    candidates: inv,
                }),
            }
        }
    }

    violations.sort();
    violations.dedup();
    Ok(ValidationOutcome { violations })
}

/// Normal form together with the isomorphism it was obtained by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub groupoid: FiniteGroupoid,
    pub isomorphism: BTreeMap<u64, Arrow>,
}

impl Decomposition {
    /// Normal-form unit of a raw unit.
    pub fn unit(&self, raw_unit: u64) -> Option<usize> {
        self.isomorphism
            .get(&raw_unit)
            .map(|a| self.groupoid.range(a))
    }
}

/// Reduces a raw table to normal form.
///
/// `weights` overrides the masses stored in `raw`. Masses must be positive,
/// sum to 1 and be constant on connected components. Within a component the
/// base point is the lowest unit id, the isotropy group lists the base unit
/// first and the other loops by ascending id, and the transversal arrow to
/// each other unit is the lowest-id arrow from the base point. Components
/// are ordered by `(|Γ|, |Y|, weight)`, ties by first appearance in
/// `raw.units`.
pub fn decompose(
    raw: &RawGroupoid,
    weights: Option<&BTreeMap<u64, Rational>>,
) -> Result<Decomposition, GroupoidError> {
    let outcome = validate_raw(raw)?;
    if !outcome.is_ok() {
        return Err(GroupoidError::Axioms(outcome.violations));
    }
    let ix = RawIndex::build(raw)?;
    let masses = weights.unwrap_or(&raw.masses);

    let mut total = Rational::zero();
    for &u in &raw.units {
        let m = *masses
            .get(&u)
            .ok_or(GroupoidError::MissingMass { unit: u })?;
        if m <= Rational::zero() {
            return Err(GroupoidError::NonPositiveMass {
                unit: u,
                mass: format_rational(&m),
            });
        }
        total += m;
    }
    if !total.is_one() {
        return Err(GroupoidError::WeightsNotNormalized {
            sum: format_rational(&total),
        });
    }

    // connected components of units, by union-find over arrows
    let position: HashMap<u64, usize> =
        raw.units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut parent: Vec<usize> = (0..raw.units.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in &raw.arrows {
        let (x, y) = (
            find(&mut parent, position[&a.source]),
            find(&mut parent, position[&a.range]),
        );
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (i, &u) in raw.units.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(u);
    }

    struct Piece {
        first: usize,
        component: Component,
        map: Vec<(u64, usize, usize, usize)>,
    }
    let mut pieces = Vec::new();
    for (first, mut units) in groups {
        units.sort_unstable();
        let base = units[0];
        let mass = masses[&base];
        for &u in &units[1..] {
            if masses[&u] != mass {
                return Err(GroupoidError::PmpViolation {
                    a: base,
                    b: u,
                    mass_a: format_rational(&mass),
                    mass_b: format_rational(&masses[&u]),
                });
            }
        }
        let y_of: HashMap<u64, usize> = units.iter().enumerate().map(|(y, &u)| (u, y)).collect();

        let mut isotropy: Vec<u64> = ix
            .out_of(base)
            .iter()
            .copied()
            .filter(|&g| ix.arrow[&g].range == base && g != base)
            .collect();
        isotropy.insert(0, base);
        let gindex: HashMap<u64, usize> =
            isotropy.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut table = vec![vec![0; isotropy.len()]; isotropy.len()];
        for (i, &g) in isotropy.iter().enumerate() {
            for (j, &h) in isotropy.iter().enumerate() {
                let gh = ix.mul(g, h).ok_or_else(|| {
                    GroupoidError::Decomposition(format!("loop product ({g}, {h})"))
                })?;
                table[i][j] = gindex[&gh];
            }
        }
        let group = CayleyTable::new(table)
            .map_err(|e| GroupoidError::Decomposition(format!("isotropy at {base}: {e}")))?;

        // transversal arrows base -> y, and their inverses
        let mut tau = HashMap::new();
        tau.insert(base, base);
        for &u in &units[1..] {
            let t = ix
                .out_of(base)
                .iter()
                .copied()
                .find(|&g| ix.arrow[&g].range == u)
                .ok_or_else(|| GroupoidError::Decomposition(format!("no arrow {base} -> {u}")))?;
            tau.insert(u, t);
        }
        let tau_inv: HashMap<u64, u64> =
            tau.iter().map(|(&u, &t)| (u, ix.inverses(t)[0])).collect();

        let mut map = Vec::new();
        for &u in &units {
            for &g in ix.out_of(u) {
                let a = ix.arrow[&g];
                let moved = ix
                    .mul(g, tau[&a.source])
                    .and_then(|gt| ix.mul(tau_inv[&a.range], gt))
                    .ok_or_else(|| GroupoidError::Decomposition(format!("conjugating {g}")))?;
                map.push((g, gindex[&moved], y_of[&a.range], y_of[&a.source]));
            }
        }
        let weight = mass * Rational::from_integer(units.len() as i64);
        pieces.push(Piece {
            first,
            component: Component::new(group, units.len(), weight),
            map,
        });
    }
    pieces.sort_by(|p, q| {
        let key = |p: &Piece| {
            (
                p.component.group.order(),
                p.component.base_size,
                p.component.weight,
            )
        };
        key(p).cmp(&key(q)).then(p.first.cmp(&q.first))
    });

    let mut isomorphism = BTreeMap::new();
    let mut components = Vec::with_capacity(pieces.len());
    for (c, piece) in pieces.into_iter().enumerate() {
        for (id, g, y_to, y_from) in piece.map {
            isomorphism.insert(id, Arrow::new(c, g, y_to, y_from));
        }
        components.push(piece.component);
    }
    Ok(Decomposition {
        groupoid: FiniteGroupoid::new(components)?,
        isomorphism,
    })
}

/// The transformation groupoid `Γ ⋉ X` of an action `action[g][x] = g·x`.
///
/// Units are the points `0..|X|`; the arrow `(g, x)` has identifier
/// `g·|X| + x`, source `x` and range `g·x`, and `(h, g·x)(g, x) = (hg, x)`.
#[allow(clippy::needless_range_loop)]
pub fn from_group_action(
    group: &CayleyTable,
    action: &[Vec<usize>],
    point_masses: &[Rational],
) -> Result<RawGroupoid, GroupoidError> {
    let n = point_masses.len();
    if n == 0 {
        return Err(GroupoidError::NotAnAction("no points".into()));
    }
    if action.len() != group.order() {
        return Err(GroupoidError::NotAnAction(format!(
            "{} rows for a group of order {}",
            action.len(),
            group.order()
        )));
    }
    for (g, row) in action.iter().enumerate() {
        if row.len() != n || row.iter().any(|&x| x >= n) {
            return Err(GroupoidError::NotAnAction(format!(
                "row {g} is not a map on {n} points"
            )));
        }
    }
    for x in 0..n {
        if action[0][x] != x {
            return Err(GroupoidError::NotAnAction(format!("identity moves {x}")));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action[group.mul(h, g)][x] != action[h][action[g][x]] {
                    return Err(GroupoidError::NotAnAction(format!(
                        "(hg)x != h(gx) at h={h}, g={g}, x={x}"
                    )));
                }
            }
        }
    }
    let mut total = Rational::zero();
    for (x, m) in point_masses.iter().enumerate() {
        if *m <= Rational::zero() {
            return Err(GroupoidError::NonPositiveMass {
                unit: x as u64,
                mass: format_rational(m),
            });
        }
        total += m;
    }
    if !total.is_one() {
        return Err(GroupoidError::WeightsNotNormalized {
            sum: format_rational(&total),
        });
    }
    for g in 0..group.order() {
        for x in 0..n {
            if point_masses[action[g][x]] != point_masses[x] {
                return Err(GroupoidError::NonInvariantMasses {
                    g,
                    x,
                    from: format_rational(&point_masses[x]),
                    to: format_rational(&point_masses[action[g][x]]),
                });
            }
        }
    }

    let id = |g: usize, x: usize| (g * n + x) as u64;
    let mut arrows = Vec::with_capacity(group.order() * n);
    for g in 0..group.order() {
        for x in 0..n {
            arrows.push(RawArrow {
                id: id(g, x),
                source: x as u64,
                range: action[g][x] as u64,
            });
        }
    }
    let mut compositions = BTreeMap::new();
    for g in 0..group.order() {
        for x in 0..n {
            for h in 0..group.order() {
                compositions.insert((id(h, action[g][x]), id(g, x)), id(group.mul(h, g), x));
            }
        }
    }
    Ok(RawGroupoid {
        units: (0..n as u64).collect(),
        arrows,
        compositions,
        masses: point_masses
            .iter()
            .enumerate()
            .map(|(x, m)| (x as u64, *m))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn z2_raw(gg: u64) -> RawGroupoid {
        // unit 0 (= arrow 0), non-unit arrow 1
        RawGroupoid {
            units: vec![0],
            arrows: vec![
                RawArrow {
                    id: 0,
                    source: 0,
                    range: 0,
                },
                RawArrow {
                    id: 1,
                    source: 0,
                    range: 0,
                },
            ],
            compositions: [((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), gg)]
                .into_iter()
                .collect(),
            masses: [(0, rat(1, 1))].into_iter().collect(),
        }
    }

    /// Full relation on units {0, 1}: arrows 0=(0,0), 1=(1,1), 2=(1,0), 3=(0,1)
    /// written as (range, source).
    fn pair_relation() -> RawGroupoid {
        let pairs = [(0u64, 0u64), (1, 1), (1, 0), (0, 1)];
        let id = |r: u64, s: u64| pairs.iter().position(|&p| p == (r, s)).unwrap() as u64;
        let arrows = pairs
            .iter()
            .enumerate()
            .map(|(i, &(r, s))| RawArrow {
                id: i as u64,
                source: s,
                range: r,
            })
            .collect();
        let mut compositions = BTreeMap::new();
        for &(x, y) in &pairs {
            for &(y2, z) in &pairs {
                if y == y2 {
                    compositions.insert((id(x, y), id(y2, z)), id(x, z));
                }
            }
        }
        RawGroupoid {
            units: vec![0, 1],
            arrows,
            compositions,
            masses: [(0, rat(1, 2)), (1, rat(1, 2))].into_iter().collect(),
        }
    }

    #[test]
    fn z2_table_is_a_groupoid() {
        assert!(validate_raw(&z2_raw(0)).unwrap().is_ok());
    }

    #[test]
    fn idempotent_generator_breaks_inverse_law() {
        let outcome = validate_raw(&z2_raw(1)).unwrap();
        assert_eq!(outcome.violations, vec![Violation::Inverse { arrow: 1 }]);
        assert_eq!(outcome.violations[0].to_string(), "inverse law at 1");
    }

    #[test]
    fn full_relation_on_two_points() {
        assert!(validate_raw(&pair_relation()).unwrap().is_ok());
    }

    #[test]
    fn malformed_is_distinct_from_violation() {
        let mut raw = z2_raw(0);
        raw.arrows.push(RawArrow {
            id: 7,
            source: 0,
            range: 9,
        });
        assert_eq!(
            validate_raw(&raw).unwrap_err(),
            MalformedRaw::DanglingEndpoint {
                arrow: 7,
                end: "range",
                unit: 9
            }
        );
        let mut raw = z2_raw(0);
        raw.compositions.insert((1, 5), 0);
        assert!(matches!(
            validate_raw(&raw).unwrap_err(),
            MalformedRaw::DanglingComposition { unknown: 5, .. }
        ));
    }

    #[test]
    fn missing_composition_and_unit_arrow() {
        let mut raw = z2_raw(0);
        raw.compositions.remove(&(1, 1));
        let v = validate_raw(&raw).unwrap().violations;
        assert!(v.contains(&Violation::MissingComposition { left: 1, right: 1 }));
        let mut raw = pair_relation();
        raw.arrows[1].source = 0; // arrow 1 was the unit at 1
        raw.compositions.retain(|&(a, b), _| a != 1 && b != 1);
        let v = validate_raw(&raw).unwrap().violations;
        assert!(v.contains(&Violation::MissingUnitArrow { unit: 1 }));
    }

    #[test]
    fn associativity_failure_is_named() {
        // Z3 table with one corrupted entry: 1*1 = 0 instead of 2
        let mut raw = RawGroupoid {
            units: vec![0],
            arrows: (0..3)
                .map(|i| RawArrow {
                    id: i,
                    source: 0,
                    range: 0,
                })
                .collect(),
            compositions: BTreeMap::new(),
            masses: [(0, rat(1, 1))].into_iter().collect(),
        };
        for a in 0..3u64 {
            for b in 0..3u64 {
                raw.compositions.insert((a, b), (a + b) % 3);
            }
        }
        raw.compositions.insert((1, 1), 0);
        let v = validate_raw(&raw).unwrap().violations;
        assert!(
            v.iter()
                .any(|x| matches!(x, Violation::Associativity { .. })),
            "{v:?}"
        );
    }

    #[test]
    fn free_swap_is_one_trivial_component() {
        let z2 = CayleyTable::cyclic(2);
        let raw =
            from_group_action(&z2, &[vec![0, 1], vec![1, 0]], &[rat(1, 2), rat(1, 2)]).unwrap();
        let d = decompose(&raw, None).unwrap();
        assert_eq!(d.groupoid.components().len(), 1);
        let c = &d.groupoid.components()[0];
        assert_eq!(c.group.order(), 1);
        assert_eq!(c.base_size, 2);
    }

    #[test]
    fn trivial_action_gives_two_components() {
        let z2 = CayleyTable::cyclic(2);
        let raw =
            from_group_action(&z2, &[vec![0, 1], vec![0, 1]], &[rat(1, 2), rat(1, 2)]).unwrap();
        let d = decompose(&raw, None).unwrap();
        assert_eq!(d.groupoid.components().len(), 2);
        for c in d.groupoid.components() {
            assert_eq!(c.group.order(), 2);
            assert_eq!(c.base_size, 1);
            assert_eq!(c.weight, rat(1, 2));
        }
    }

    #[test]
    fn unequal_masses_on_a_component_are_rejected() {
        let w: BTreeMap<u64, Rational> = [(0, rat(1, 3)), (1, rat(2, 3))].into_iter().collect();
        let err = decompose(&pair_relation(), Some(&w)).unwrap_err();
        assert!(matches!(
            err,
            GroupoidError::PmpViolation { a: 0, b: 1, .. }
        ));
    }

    #[test]
    fn action_examples() {
        let z2 = CayleyTable::cyclic(2);
        let raw = from_group_action(&z2, &[vec![0], vec![0]], &[rat(1, 1)]).unwrap();
        assert_eq!(raw.arrows.len(), 2);
        let d = decompose(&raw, None).unwrap();
        assert_eq!(d.groupoid.components()[0].group.order(), 2);

        let triv = CayleyTable::trivial();
        let raw = from_group_action(&triv, &[vec![0, 1, 2]], &[rat(1, 3); 3]).unwrap();
        assert_eq!(raw.arrows.len(), 3);
        assert!(raw
            .arrows
            .iter()
            .all(|a| a.source == a.range && a.id == a.source));
        assert!(validate_raw(&raw).unwrap().is_ok());

        let err =
            from_group_action(&z2, &[vec![0, 1], vec![1, 0]], &[rat(1, 4), rat(3, 4)]).unwrap_err();
        assert!(matches!(err, GroupoidError::NonInvariantMasses { .. }));
        let err =
            from_group_action(&z2, &[vec![0, 1], vec![1, 1]], &[rat(1, 2), rat(1, 2)]).unwrap_err();
        assert!(matches!(err, GroupoidError::NotAnAction(_)));
    }

    #[test]
    fn isomorphism_preserves_composition() {
        let s3 = CayleyTable::symmetric(3);
        // S3 acting on 3 points by permutation
        let perms = crate::group::permutations_lex(3);
        let action: Vec<Vec<usize>> = perms.clone();
        let raw = from_group_action(&s3, &action, &[rat(1, 3); 3]).unwrap();
        let d = decompose(&raw, None).unwrap();
        assert_eq!(d.groupoid.components().len(), 1);
        assert_eq!(d.groupoid.components()[0].group.order(), 2);
        assert_eq!(d.groupoid.components()[0].base_size, 3);
        for (&(a, b), &c) in &raw.compositions {
            let (ia, ib) = (d.isomorphism[&a], d.isomorphism[&b]);
            assert_eq!(d.groupoid.compose_arrows(&ia, &ib), Some(d.isomorphism[&c]));
        }
        for &u in &raw.units {
            assert!(d.isomorphism[&u].is_unit());
        }
    }
}
