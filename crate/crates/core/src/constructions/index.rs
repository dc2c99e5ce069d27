//! Finite-index subgroupoids and the block-matrix lift
//! `Ξ(α) = ⋃_{i,j} Φ(α_{i,j}) ⊗ E_{i,j}` with `α_{i,j} = ψ_i⁻¹αψ_j ∩ H`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{ConstructionError, SemigroupMap};
use crate::groupoid::{
    decompose, product_groupoid, Arrow, Decomposition, FiniteGroupoid, ProductGroupoid, RawArrow,
    RawGroupoid,
};
use crate::semigroup::{Bisection, FullGroupElement};

/// A subgroupoid `H ⊆ G` containing every unit of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroupoid {
    parent: FiniteGroupoid,
    arrows: BTreeSet<Arrow>,
}

impl Subgroupoid {
    /// Checks membership, that every unit is present, and closure under
    /// products and inverses.
    pub fn new(
        g: &FiniteGroupoid,
        arrows: impl IntoIterator<Item = Arrow>,
    ) -> Result<Self, ConstructionError> {
        let arrows: BTreeSet<Arrow> = arrows.into_iter().collect();
        if let Some(a) = arrows.iter().find(|a| !g.contains(a)) {
            return Err(ConstructionError::NotSubgroupoid(format!(
                "{a:?} is not an arrow of the groupoid"
            )));
        }
        if let Some(u) = (0..g.unit_count()).find(|&u| !arrows.contains(&g.unit_arrow(u))) {
            return Err(ConstructionError::NotUnitFull(u));
        }
        for a in &arrows {
            if !arrows.contains(&g.inverse_arrow(a)) {
                return Err(ConstructionError::NotSubgroupoid(format!(
                    "missing inverse of {a:?}"
                )));
            }
            for b in &arrows {
                if let Some(ab) = g.compose_arrows(a, b) {
                    if !arrows.contains(&ab) {
                        return Err(ConstructionError::NotSubgroupoid(format!(
                            "missing product of {a:?} and {b:?}"
                        )));
                    }
                }
            }
        }
        Ok(Subgroupoid {
            parent: g.clone(),
            arrows,
        })
    }

    /// `⋃_c K_c × {(y, y)}`: for each component a subgroup of its isotropy,
    /// acting on every point with no arrows between points.
    pub fn diagonal(
        g: &FiniteGroupoid,
        subgroups: &[Vec<usize>],
    ) -> Result<Self, ConstructionError> {
        let arrows = g.components().iter().enumerate().flat_map(|(c, comp)| {
            let ks = subgroups.get(c).cloned().unwrap_or_else(|| vec![0]);
            (0..comp.base_size)
                .flat_map(move |y| ks.clone().into_iter().map(move |k| Arrow::new(c, k, y, y)))
        });
        Subgroupoid::new(g, arrows)
    }

    pub fn units_only(g: &FiniteGroupoid) -> Self {
        Subgroupoid {
            parent: g.clone(),
            arrows: (0..g.unit_count()).map(|u| g.unit_arrow(u)).collect(),
        }
    }

    pub fn whole(g: &FiniteGroupoid) -> Self {
        Subgroupoid {
            parent: g.clone(),
            arrows: g.arrows().collect(),
        }
    }

    pub fn parent(&self) -> &FiniteGroupoid {
        &self.parent
    }

    pub fn arrows(&self) -> &BTreeSet<Arrow> {
        &self.arrows
    }

    pub fn contains(&self, a: &Arrow) -> bool {
        self.arrows.contains(a)
    }

    /// `α ∩ H`.
    pub fn intersect(&self, alpha: &Bisection) -> Bisection {
        alpha
            .arrows()
            .iter()
            .filter(|a| self.contains(a))
            .copied()
            .collect()
    }

    /// `ψH = {ah : a ∈ ψ, h ∈ H, s(a) = r(h)}`.
    pub fn left_translate(&self, psi: &Bisection) -> BTreeSet<Arrow> {
        let g = &self.parent;
        let mut by_source: Vec<Option<Arrow>> = vec![None; g.unit_count()];
        for a in psi.arrows() {
            by_source[g.source(a)] = Some(*a);
        }
        self.arrows
            .iter()
            .filter_map(|h| by_source[g.range(h)].and_then(|a| g.compose_arrows(&a, h)))
            .collect()
    }

    /// `H` in normal form, with the parent's unit masses, and the embedding
    /// of its arrows.
    pub fn normal_form(&self) -> Result<(Decomposition, HashMap<Arrow, Arrow>), ConstructionError> {
        let g = &self.parent;
        let units = g.unit_count();
        let mut ids: HashMap<Arrow, u64> = HashMap::new();
        let mut by_id: Vec<Arrow> = (0..units).map(|u| g.unit_arrow(u)).collect();
        for (u, a) in by_id.iter().enumerate() {
            ids.insert(*a, u as u64);
        }
        for a in &self.arrows {
            if !a.is_unit() {
                ids.insert(*a, by_id.len() as u64);
                by_id.push(*a);
            }
        }
        let mut compositions = BTreeMap::new();
        for a in &by_id {
            for b in &by_id {
                if let Some(ab) = g.compose_arrows(a, b) {
                    compositions.insert((ids[a], ids[b]), ids[&ab]);
                }
            }
        }
        let raw = RawGroupoid {
            units: (0..units as u64).collect(),
            arrows: by_id
                .iter()
                .enumerate()
                .map(|(id, a)| RawArrow {
                    id: id as u64,
                    source: g.source(a) as u64,
                    range: g.range(a) as u64,
                })
                .collect(),
            compositions,
            masses: (0..units).map(|u| (u as u64, g.unit_mass(u))).collect(),
        };
        let dec = decompose(&raw, None)?;
        let embed = by_id
            .iter()
            .enumerate()
            .map(|(id, a)| (*a, dec.isomorphism[&(id as u64)]))
            .collect();
        Ok((dec, embed))
    }
}

/// Full-group elements `ψ_1, …, ψ_N` whose translates `ψ_iH` partition `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalSystem {
    subgroupoid: Subgroupoid,
    transversals: Vec<FullGroupElement>,
}

impl TransversalSystem {
    /// Checks that the translates are pairwise disjoint and cover `G`.
    pub fn new(
        h: Subgroupoid,
        transversals: Vec<FullGroupElement>,
    ) -> Result<Self, ConstructionError> {
        let g = h.parent();
        let mut covered: BTreeSet<Arrow> = BTreeSet::new();
        for (i, psi) in transversals.iter().enumerate() {
            g.check(psi.as_bisection())?;
            for a in h.left_translate(psi.as_bisection()) {
                if !covered.insert(a) {
                    return Err(ConstructionError::NoTransversals(format!(
                        "translate {i} overlaps an earlier one at {a:?}"
                    )));
                }
            }
        }
        if covered.len() != g.arrow_count() {
            return Err(ConstructionError::NoTransversals(format!(
                "translates cover {} of {} arrows",
                covered.len(),
                g.arrow_count()
            )));
        }
        Ok(TransversalSystem {
            subgroupoid: h,
            transversals,
        })
    }

    pub fn subgroupoid(&self) -> &Subgroupoid {
        &self.subgroupoid
    }

    pub fn transversals(&self) -> &[FullGroupElement] {
        &self.transversals
    }

    pub fn index(&self) -> usize {
        self.transversals.len()
    }
}

/// Backtracking search for a transversal system.
///
/// At each range point the arrows split into classes `aH`; every `ψ_i`
/// picks one arrow per range point, using each class exactly once across
/// `i`, with sources injective within each `ψ_i`. Candidates are tried in
/// ascending arrow order.
pub fn find_transversals(h: &Subgroupoid) -> Result<TransversalSystem, ConstructionError> {
    let g = h.parent();
    let units = g.unit_count();
    // classes[y] = list of classes at range y, each a sorted arrow list
    let mut classes: Vec<Vec<Vec<Arrow>>> = vec![Vec::new(); units];
    let mut into: Vec<Vec<Arrow>> = vec![Vec::new(); units];
    for a in g.arrows() {
        into[g.range(&a)].push(a);
    }
    for (y, arrows) in into.iter().enumerate() {
        let mut assigned: BTreeSet<Arrow> = BTreeSet::new();
        for a in arrows {
            if assigned.contains(a) {
                continue;
            }
            let ai = g.inverse_arrow(a);
            let class: Vec<Arrow> = arrows
                .iter()
                .filter(|b| g.compose_arrows(&ai, b).is_some_and(|x| h.contains(&x)))
                .copied()
                .collect();
            assigned.extend(class.iter().copied());
            classes[y].push(class);
        }
    }
    let n = classes[0].len();
    if let Some(y) = (0..units).find(|&y| classes[y].len() != n) {
        return Err(ConstructionError::NoTransversals(format!(
            "unit 0 has {n} cosets but unit {y} has {}",
            classes[y].len()
        )));
    }

    struct Search<'a> {
        g: &'a FiniteGroupoid,
        classes: &'a [Vec<Vec<Arrow>>],
        class_used: Vec<Vec<bool>>,
        source_used: Vec<Vec<bool>>,
        choice: Vec<Vec<Arrow>>,
    }
    impl Search<'_> {
        fn run(&mut self, pos: usize, n: usize, units: usize) -> bool {
            if pos == n * units {
                return true;
            }
            let (i, y) = (pos / units, pos % units);
            for c in 0..self.classes[y].len() {
                if self.class_used[y][c] {
                    continue;
                }
                for a in &self.classes[y][c] {
                    let s = self.g.source(a);
                    if self.source_used[i][s] {
                        continue;
                    }
                    self.class_used[y][c] = true;
                    self.source_used[i][s] = true;
                    self.choice[i].push(*a);
                    if self.run(pos + 1, n, units) {
                        return true;
                    }
                    self.choice[i].pop();
                    self.source_used[i][s] = false;
                    self.class_used[y][c] = false;
                }
            }
            false
        }
    }
    let mut search = Search {
        g,
        classes: &classes,
        class_used: vec![vec![false; n]; units],
        source_used: vec![vec![false; units]; n],
        choice: vec![Vec::new(); n],
    };
    if !search.run(0, n, units) {
        return Err(ConstructionError::NoTransversals(format!(
            "no injective choice of representatives at index {n}"
        )));
    }
    let transversals = search
        .choice
        .into_iter()
        .map(|arrows| FullGroupElement::new(g, Bisection::from_unsorted_unchecked(arrows)))
        .collect::<Result<Vec<_>, _>>()?;
    TransversalSystem::new(h.clone(), transversals)
}

/// `α_{i,j} = ψ_i⁻¹ α ψ_j ∩ H` as bisections of `G`.
///
/// Asserts `(α_{i,j})⁻¹ = (α⁻¹)_{j,i}`, that the entries of a row have
/// disjoint ranges (`α_{i,j}⁻¹ α_{i,l} = ∅` for `j ≠ l`) and that the
/// entries of a column have disjoint sources (`α_{i,j} α_{k,j}⁻¹ = ∅` for
/// `i ≠ k`).
pub fn block_components(alpha: &Bisection, system: &TransversalSystem) -> Vec<Vec<Bisection>> {
    let blocks = raw_blocks(alpha, system);
    let g = system.subgroupoid.parent();
    let inverse_blocks = raw_blocks(&g.invert(alpha), system);
    let n = system.index();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(
                g.invert(&blocks[i][j]),
                inverse_blocks[j][i],
                "block inverse law at ({i}, {j})"
            );
            for l in 0..n {
                if l != j {
                    let x = g.compose_unchecked(&g.invert(&blocks[i][j]), &blocks[i][l]);
                    assert!(x.is_empty(), "row {i}: blocks {j} and {l} share a range");
                }
            }
            for k in 0..n {
                if k != i {
                    let x = g.compose_unchecked(&blocks[i][j], &g.invert(&blocks[k][j]));
                    assert!(
                        x.is_empty(),
                        "column {j}: blocks {i} and {k} share a source"
                    );
                }
            }
        }
    }
    blocks
}

fn raw_blocks(alpha: &Bisection, system: &TransversalSystem) -> Vec<Vec<Bisection>> {
    let g = system.subgroupoid.parent();
    let h = &system.subgroupoid;
    let psis = &system.transversals;
    psis.iter()
        .map(|pi| {
            let left = g.compose_unchecked(&g.invert(pi.as_bisection()), alpha);
            psis.iter()
                .map(|pj| h.intersect(&g.compose_unchecked(&left, pj.as_bisection())))
                .collect()
        })
        .collect()
}

/// `Ξ : [[G]] → [[F × Y_N²]]` for a transversal system of index `N` and a
/// map `Φ : [[H]] → [[F]]` on the normal form of `H`.
#[derive(Debug, Clone)]
pub struct FiniteIndexLift {
    system: TransversalSystem,
    h_normal: FiniteGroupoid,
    to_normal: HashMap<Arrow, Arrow>,
    phi: SemigroupMap,
    codomain: ProductGroupoid,
}

impl FiniteIndexLift {
    /// `phi` defaults to the identity of `[[H]]`.
    pub fn new(
        system: TransversalSystem,
        phi: Option<SemigroupMap>,
    ) -> Result<Self, ConstructionError> {
        let (dec, to_normal) = system.subgroupoid.normal_form()?;
        let h_normal = dec.groupoid;
        let phi = phi.unwrap_or_else(|| SemigroupMap::identity(&h_normal));
        if !phi.domain().same_structure(&h_normal) {
            return Err(ConstructionError::DomainMismatch);
        }
        let codomain = product_groupoid(
            phi.codomain(),
            &FiniteGroupoid::full_relation(system.index()),
        );
        Ok(FiniteIndexLift {
            system,
            h_normal,
            to_normal,
            phi,
            codomain,
        })
    }

    pub fn system(&self) -> &TransversalSystem {
        &self.system
    }

    pub fn h_normal(&self) -> &FiniteGroupoid {
        &self.h_normal
    }

    pub fn codomain(&self) -> &ProductGroupoid {
        &self.codomain
    }

    /// A block of `α` (a bisection of `G` inside `H`) as a bisection of the
    /// normal form of `H`.
    pub fn to_h(&self, block: &Bisection) -> Bisection {
        block.arrows().iter().map(|a| self.to_normal[a]).collect()
    }

    pub fn lift(&self, alpha: &Bisection) -> Result<Bisection, ConstructionError> {
        let blocks = block_components(alpha, &self.system);
        let mut out = Vec::new();
        for (i, row) in blocks.iter().enumerate() {
            for (j, block) in row.iter().enumerate() {
                let e_ij = Arrow::new(0, 0, i, j);
                let image = self.phi.apply(&self.to_h(block));
                out.extend(image.arrows().iter().map(|a| self.codomain.pair(a, &e_ij)));
            }
        }
        let xi = Bisection::from_unsorted_unchecked(out);
        self.codomain
            .groupoid
            .check(&xi)
            .map_err(|e| ConstructionError::Disjointness(e.to_string()))?;
        Ok(xi)
    }

    /// `Ξ` as a map; panics where [`lift`](Self::lift) would report overlap.
    pub fn as_map(&self) -> SemigroupMap {
        let me = self.clone();
        SemigroupMap::new(
            self.system.subgroupoid.parent().clone(),
            self.codomain.groupoid.clone(),
            format!(
                "finite_index(N={}, {})",
                self.system.index(),
                self.phi.label()
            ),
            move |alpha| {
                me.lift(alpha)
                    .expect("transversal system yields disjoint blocks")
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CayleyTable;
    use crate::semigroup::EnumKind;

    fn z4() -> FiniteGroupoid {
        FiniteGroupoid::from_group(CayleyTable::cyclic(4))
    }

    fn single(g: &FiniteGroupoid, k: usize) -> Bisection {
        Bisection::new(g, [Arrow::new(0, k, 0, 0)]).unwrap()
    }

    #[test]
    fn whole_groupoid_has_index_one() {
        let g = FiniteGroupoid::full_relation(3);
        let t = find_transversals(&Subgroupoid::whole(&g)).unwrap();
        assert_eq!(t.index(), 1);
        assert_eq!(t.transversals()[0].as_bisection(), &g.identity());
    }

    #[test]
    fn cyclic_four_over_two() {
        let g = z4();
        let h = Subgroupoid::diagonal(&g, &[vec![0, 2]]).unwrap();
        let t = find_transversals(&h).unwrap();
        assert_eq!(t.index(), 2);
        assert_eq!(t.transversals()[0].as_bisection(), &single(&g, 0));
        assert_eq!(t.transversals()[1].as_bisection(), &single(&g, 1));

        let b = block_components(&single(&g, 1), &t);
        assert!(b[0][0].is_empty() && b[1][1].is_empty());
        assert_eq!(b[0][1], single(&g, 2));
        assert_eq!(b[1][0], single(&g, 0));

        let b = block_components(&single(&g, 2), &t);
        assert_eq!(b[0][0], single(&g, 2));
        assert_eq!(b[1][1], single(&g, 2));
        assert!(b[0][1].is_empty() && b[1][0].is_empty());
    }

    #[test]
    fn pair_relation_over_units() {
        let g = FiniteGroupoid::full_relation(2);
        let t = find_transversals(&Subgroupoid::units_only(&g)).unwrap();
        assert_eq!(t.index(), 2);
        assert_eq!(t.transversals()[0].as_bisection(), &g.identity());
        let swap = Bisection::new(&g, [Arrow::new(0, 0, 1, 0), Arrow::new(0, 0, 0, 1)]).unwrap();
        assert_eq!(t.transversals()[1].as_bisection(), &swap);

        let lift = FiniteIndexLift::new(t, None).unwrap();
        let xi = lift.lift(&swap).unwrap();
        let f = &lift.codomain().groupoid;
        assert_eq!(xi.len(), 4);
        assert_eq!(f.trace(&xi), g.trace(&swap));
        assert_eq!(lift.lift(&g.identity()).unwrap(), f.identity());
    }

    #[test]
    fn lift_is_multiplicative_on_z4() {
        let g = z4();
        let h = Subgroupoid::diagonal(&g, &[vec![0, 2]]).unwrap();
        let lift = FiniteIndexLift::new(find_transversals(&h).unwrap(), None).unwrap();
        let f = lift.codomain().groupoid.clone();
        let a = single(&g, 1);
        let xa = lift.lift(&a).unwrap();
        assert_eq!(
            f.compose(&xa, &xa).unwrap(),
            lift.lift(&single(&g, 2)).unwrap()
        );
        assert_eq!(f.trace(&xa), g.trace(&a));
        for x in g.enumerate(EnumKind::Semigroup, 100).unwrap() {
            for y in g.enumerate(EnumKind::Semigroup, 100).unwrap() {
                let lhs = lift.lift(&g.compose(&x, &y).unwrap()).unwrap();
                let rhs = f
                    .compose(&lift.lift(&x).unwrap(), &lift.lift(&y).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rejects_bad_subgroupoids() {
        let g = z4();
        assert!(matches!(
            Subgroupoid::diagonal(&g, &[vec![0, 1]]),
            Err(ConstructionError::NotSubgroupoid(_))
        ));
        let g2 = FiniteGroupoid::full_relation(2);
        assert_eq!(
            Subgroupoid::new(&g2, [g2.unit_arrow(0)]).unwrap_err(),
            ConstructionError::NotUnitFull(1)
        );
    }

    #[test]
    fn unequal_coset_counts_fail() {
        // two components: Z2 at one unit, trivial at another; H = units
        let g = crate::groupoid::convex_combination(&[
            (
                crate::rational::rat(1, 2),
                FiniteGroupoid::from_group(CayleyTable::cyclic(2)),
            ),
            (crate::rational::rat(1, 2), FiniteGroupoid::point()),
        ])
        .unwrap();
        let err = find_transversals(&Subgroupoid::units_only(&g)).unwrap_err();
        assert!(matches!(err, ConstructionError::NoTransversals(_)));
    }
}
