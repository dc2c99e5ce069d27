//! Rectangle decompositions in `[[G × H]]` and the product map
//! `Φ ⊗ Ψ(⋃ αᵢ × βᵢ) = ⋃ Φ(αᵢ) × Ψ(βᵢ)`.

use super::SemigroupMap;
use crate::groupoid::{product_groupoid, ProductGroupoid};
use crate::semigroup::Bisection;

/// `⋃ αᵢ × βᵢ`. Membership in the rectangle monoid requires, for `i ≠ j`,
/// `s(αᵢ) ∩ s(αⱼ) = ∅` or `s(βᵢ) ∩ s(βⱼ) = ∅`, and the same for ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleUnion {
    pub rectangles: Vec<(Bisection, Bisection)>,
}

impl RectangleUnion {
    pub fn len(&self) -> usize {
        self.rectangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rectangles.is_empty()
    }

    /// Whether the disjointness conditions hold pairwise.
    pub fn in_monoid(&self, p: &ProductGroupoid) -> bool {
        let rs = &self.rectangles;
        (0..rs.len()).all(|i| (i + 1..rs.len()).all(|j| compatible(p, &rs[i], &rs[j])))
    }

    /// The bisection of `G × H` the union denotes.
    pub fn union(&self, p: &ProductGroupoid) -> Bisection {
        self.rectangles
            .iter()
            .flat_map(|(a, b)| p.rectangle(a, b).arrows().to_vec())
            .collect()
    }
}

fn compatible(p: &ProductGroupoid, x: &(Bisection, Bisection), y: &(Bisection, Bisection)) -> bool {
    let (g, h) = (&p.left, &p.right);
    let sources = g.source_set(&x.0).is_disjoint(&g.source_set(&y.0))
        || h.source_set(&x.1).is_disjoint(&h.source_set(&y.1));
    let ranges = g.range_set(&x.0).is_disjoint(&g.range_set(&y.0))
        || h.range_set(&x.1).is_disjoint(&h.range_set(&y.1));
    sources && ranges
}

/// Order in which candidate pairs are scanned while merging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOrder {
    Forward,
    Reverse,
}

/// Splits `φ` into singleton rectangles, then repeatedly merges two
/// rectangles sharing a factor while the result stays in the monoid.
/// The union always equals `φ`.
pub fn rectangle_decompose(
    p: &ProductGroupoid,
    phi: &Bisection,
    order: MergeOrder,
) -> RectangleUnion {
    let mut rects: Vec<(Bisection, Bisection)> = phi
        .arrows()
        .iter()
        .map(|x| {
            let (a, b) = p.split(x);
            (
                Bisection::from_sorted_unchecked(vec![a]),
                Bisection::from_sorted_unchecked(vec![b]),
            )
        })
        .collect();
    if order == MergeOrder::Reverse {
        rects.reverse();
    }
    'merge: loop {
        for i in 0..rects.len() {
            for j in i + 1..rects.len() {
                if let Some(merged) = try_merge(p, &rects[i], &rects[j]) {
                    let ok = rects
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .all(|(_, r)| compatible(p, &merged, r));
                    if ok {
                        rects[i] = merged;
                        rects.remove(j);
                        continue 'merge;
                    }
                }
            }
        }
        break;
    }
    let out = RectangleUnion { rectangles: rects };
    assert!(out.in_monoid(p), "decomposition left the rectangle monoid");
    assert_eq!(&out.union(p), phi, "decomposition changed the bisection");
    out
}

fn try_merge(
    p: &ProductGroupoid,
    x: &(Bisection, Bisection),
    y: &(Bisection, Bisection),
) -> Option<(Bisection, Bisection)> {
    let join = |a: &Bisection, b: &Bisection| -> Bisection {
        a.arrows().iter().chain(b.arrows()).copied().collect()
    };
    if x.0 == y.0 {
        let b = join(&x.1, &y.1);
        p.right.check(&b).ok()?;
        Some((x.0.clone(), b))
    } else if x.1 == y.1 {
        let a = join(&x.0, &y.0);
        p.left.check(&a).ok()?;
        Some((a, x.1.clone()))
    } else {
        None
    }
}

/// `⋃ Φ(αᵢ) × Ψ(βᵢ)` in the product of the codomains.
pub fn product_embedding(
    phi: &SemigroupMap,
    psi: &SemigroupMap,
    union: &RectangleUnion,
    codomain: &ProductGroupoid,
) -> Bisection {
    union
        .rectangles
        .iter()
        .flat_map(|(a, b)| {
            codomain
                .rectangle(&phi.apply(a), &psi.apply(b))
                .arrows()
                .to_vec()
        })
        .collect()
}

/// `Φ ⊗ Ψ : [[G × H]] → [[F × F']]`.
#[derive(Debug, Clone)]
pub struct ProductEmbedding {
    pub domain: ProductGroupoid,
    pub codomain: ProductGroupoid,
    phi: SemigroupMap,
    psi: SemigroupMap,
}

impl ProductEmbedding {
    pub fn new(phi: &SemigroupMap, psi: &SemigroupMap) -> Self {
        ProductEmbedding {
            domain: product_groupoid(phi.domain(), psi.domain()),
            codomain: product_groupoid(phi.codomain(), psi.codomain()),
            phi: phi.clone(),
            psi: psi.clone(),
        }
    }

    /// Images through the forward and reverse decompositions.
    pub fn apply_both(&self, x: &Bisection) -> (Bisection, Bisection) {
        let fwd = rectangle_decompose(&self.domain, x, MergeOrder::Forward);
        let rev = rectangle_decompose(&self.domain, x, MergeOrder::Reverse);
        (
            product_embedding(&self.phi, &self.psi, &fwd, &self.codomain),
            product_embedding(&self.phi, &self.psi, &rev, &self.codomain),
        )
    }

    /// Panics if the two decompositions disagree.
    pub fn apply(&self, x: &Bisection) -> Bisection {
        let (a, b) = self.apply_both(x);
        assert_eq!(a, b, "image depends on the rectangle decomposition");
        a
    }

    pub fn as_map(&self) -> SemigroupMap {
        let me = self.clone();
        SemigroupMap::new(
            self.domain.groupoid.clone(),
            self.codomain.groupoid.clone(),
            format!("product({}, {})", self.phi.label(), self.psi.label()),
            move |x| me.apply(x),
        )
    }
}
