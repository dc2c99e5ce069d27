use super::{Bisection, FullGroupElement, MAlgElement, SemigroupError};
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::rational::Rational;

/// The four unit sets attached to a bisection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projections {
    pub source: MAlgElement,
    pub range: MAlgElement,
    pub fix: MAlgElement,
    pub supp: MAlgElement,
}

impl FiniteGroupoid {
    /// Membership of every arrow plus injectivity of `s` and `r`.
    pub fn check(&self, b: &Bisection) -> Result<(), SemigroupError> {
        let mut by_source: Vec<Option<Arrow>> = vec![None; self.unit_count()];
        let mut by_range: Vec<Option<Arrow>> = vec![None; self.unit_count()];
        for a in b.arrows() {
            if !self.contains(a) {
                return Err(SemigroupError::ForeignArrow(*a));
            }
            let (s, r) = (self.source(a), self.range(a));
            if let Some(prev) = by_source[s].replace(*a) {
                return Err(SemigroupError::SourceCollision(prev, *a, s));
            }
            if let Some(prev) = by_range[r].replace(*a) {
                return Err(SemigroupError::RangeCollision(prev, *a, r));
            }
        }
        Ok(())
    }

    fn check_members(&self, b: &Bisection) -> Result<(), SemigroupError> {
        match b.arrows().iter().find(|a| !self.contains(a)) {
            Some(a) => Err(SemigroupError::ForeignArrow(*a)),
            None => Ok(()),
        }
    }

    fn check_malg(&self, a: &MAlgElement) -> Result<(), SemigroupError> {
        match a.units().iter().find(|&&u| u >= self.unit_count()) {
            Some(&u) => Err(SemigroupError::UnknownUnit(u)),
            None => Ok(()),
        }
    }

    /// `1_G`, all unit arrows.
    pub fn identity(&self) -> Bisection {
        self.idempotent(&MAlgElement::full(self))
    }

    /// The idempotent bisection of unit arrows over `a`.
    pub fn idempotent(&self, a: &MAlgElement) -> Bisection {
        Bisection::from_unsorted_unchecked(a.units().iter().map(|&u| self.unit_arrow(u)).collect())
    }

    pub fn identity_element(&self) -> FullGroupElement {
        FullGroupElement::new_unchecked(self.identity())
    }

    /// `αβ = {ab : s(a) = r(b)}`.
    pub fn compose(
        &self,
        alpha: &Bisection,
        beta: &Bisection,
    ) -> Result<Bisection, SemigroupError> {
        self.check_members(alpha)?;
        self.check_members(beta)?;
        Ok(self.compose_unchecked(alpha, beta))
    }

    pub(crate) fn compose_unchecked(&self, alpha: &Bisection, beta: &Bisection) -> Bisection {
        let mut by_source: Vec<Option<Arrow>> = vec![None; self.unit_count()];
        for a in alpha.arrows() {
            by_source[self.source(a)] = Some(*a);
        }
        let out = beta
            .arrows()
            .iter()
            .filter_map(|b| {
                let a = by_source[self.range(b)]?;
                self.compose_arrows(&a, b)
            })
            .collect();
        Bisection::from_unsorted_unchecked(out)
    }

    /// Arrow-wise inverse. Panics on arrows outside the groupoid.
    pub fn invert(&self, alpha: &Bisection) -> Bisection {
        Bisection::from_unsorted_unchecked(
            alpha
                .arrows()
                .iter()
                .map(|a| self.inverse_arrow(a))
                .collect(),
        )
    }

    /// `μ(α ∩ G⁽⁰⁾)`.
    pub fn trace(&self, alpha: &Bisection) -> Rational {
        alpha
            .arrows()
            .iter()
            .filter(|a| a.is_unit())
            .map(|a| self.unit_mass(self.source(a)))
            .sum()
    }

    pub fn measure(&self, a: &MAlgElement) -> Rational {
        a.units().iter().map(|&u| self.unit_mass(u)).sum()
    }

    /// `μ(s(α △ β))`.
    pub fn distance(
        &self,
        alpha: &Bisection,
        beta: &Bisection,
    ) -> Result<Rational, SemigroupError> {
        self.check_members(alpha)?;
        self.check_members(beta)?;
        Ok(self.distance_unchecked(alpha, beta))
    }

    pub(crate) fn distance_unchecked(&self, alpha: &Bisection, beta: &Bisection) -> Rational {
        let diff = alpha.symmetric_difference(beta);
        self.mass_of(diff.iter().map(|a| self.source(a)))
    }

    /// `μ(r(α △ β))`. Equal to [`distance`](Self::distance) on full-group
    /// elements, not in general.
    pub fn range_distance(
        &self,
        alpha: &Bisection,
        beta: &Bisection,
    ) -> Result<Rational, SemigroupError> {
        self.check_members(alpha)?;
        self.check_members(beta)?;
        let diff = alpha.symmetric_difference(beta);
        Ok(self.mass_of(diff.iter().map(|a| self.range(a))))
    }

    fn mass_of(&self, units: impl Iterator<Item = usize>) -> Rational {
        let mut us: Vec<usize> = units.collect();
        us.sort_unstable();
        us.dedup();
        us.into_iter().map(|u| self.unit_mass(u)).sum()
    }

    pub fn source_set(&self, alpha: &Bisection) -> MAlgElement {
        MAlgElement::from_units(alpha.arrows().iter().map(|a| self.source(a)))
    }

    pub fn range_set(&self, alpha: &Bisection) -> MAlgElement {
        MAlgElement::from_units(alpha.arrows().iter().map(|a| self.range(a)))
    }

    pub fn fix(&self, alpha: &Bisection) -> MAlgElement {
        MAlgElement::from_units(
            alpha
                .arrows()
                .iter()
                .filter(|a| a.is_unit())
                .map(|a| self.source(a)),
        )
    }

    /// `s(α) ∖ fix α`.
    pub fn supp(&self, alpha: &Bisection) -> MAlgElement {
        MAlgElement::from_units(
            alpha
                .arrows()
                .iter()
                .filter(|a| !a.is_unit())
                .map(|a| self.source(a)),
        )
    }

    pub fn projections(&self, alpha: &Bisection) -> Projections {
        Projections {
            source: self.source_set(alpha),
            range: self.range_set(alpha),
            fix: self.fix(alpha),
            supp: self.supp(alpha),
        }
    }

    /// `α·A = r(s|_α⁻¹(A))`.
    pub fn act(
        &self,
        alpha: &FullGroupElement,
        a: &MAlgElement,
    ) -> Result<MAlgElement, SemigroupError> {
        self.check_malg(a)?;
        Ok(self.act_partial(alpha.as_bisection(), a))
    }

    /// The image of `A ∩ s(α)` under a bisection.
    pub fn act_partial(&self, alpha: &Bisection, a: &MAlgElement) -> MAlgElement {
        MAlgElement::from_units(
            alpha
                .arrows()
                .iter()
                .filter(|x| a.contains(self.source(x)))
                .map(|x| self.range(x)),
        )
    }

    /// `α ∪ β`, provided `β⁻¹α` and `βα⁻¹` are idempotent.
    pub fn union_compatible(
        &self,
        alpha: &Bisection,
        beta: &Bisection,
    ) -> Result<Bisection, SemigroupError> {
        self.check_members(alpha)?;
        self.check_members(beta)?;
        let union = Bisection::from_unsorted_unchecked(
            alpha
                .arrows()
                .iter()
                .chain(beta.arrows())
                .copied()
                .collect(),
        );
        self.check(&union)?;
        Ok(union)
    }

    /// Whether the pair satisfies the compatibility hypothesis literally.
    pub fn are_compatible(&self, alpha: &Bisection, beta: &Bisection) -> bool {
        let bi = self.invert(beta);
        self.compose_unchecked(&bi, alpha).is_idempotent()
            && self
                .compose_unchecked(beta, &self.invert(alpha))
                .is_idempotent()
    }

    /// Whether `α ∈ [G]`.
    pub fn is_full(&self, alpha: &Bisection) -> bool {
        alpha.len() == self.unit_count() && self.check(alpha).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pinj(g: &FiniteGroupoid, pairs: &[(usize, usize)]) -> Bisection {
        Bisection::new(g, pairs.iter().map(|&(x, y)| Arrow::new(0, 0, y, x))).unwrap()
    }

    #[test]
    fn compose_examples() {
        let g = FiniteGroupoid::full_relation(2);
        let a = pinj(&g, &[(0, 1)]);
        let b = pinj(&g, &[(1, 0)]);
        assert_eq!(g.compose(&a, &b).unwrap(), pinj(&g, &[(1, 1)]));
        assert_eq!(g.compose(&a, &g.identity()).unwrap(), a);
        assert!(g.compose(&a, &Bisection::empty()).unwrap().is_empty());
        let foreign = Bisection::from_sorted_unchecked(vec![Arrow::new(1, 0, 0, 0)]);
        assert!(matches!(
            g.compose(&a, &foreign),
            Err(SemigroupError::ForeignArrow(_))
        ));
    }

    #[test]
    fn invert_examples() {
        let g = FiniteGroupoid::full_relation(2);
        assert_eq!(g.invert(&g.identity()), g.identity());
        assert_eq!(g.invert(&pinj(&g, &[(0, 1)])), pinj(&g, &[(1, 0)]));
    }

    #[test]
    fn trace_examples() {
        let g = FiniteGroupoid::full_relation(2);
        assert_eq!(g.trace(&g.identity()), rat(1, 1));
        assert_eq!(g.trace(&pinj(&g, &[(0, 1), (1, 0)])), rat(0, 1));
        assert_eq!(g.trace(&pinj(&g, &[(0, 0)])), rat(1, 2));
    }

    #[test]
    fn distance_examples() {
        let g = FiniteGroupoid::full_relation(2);
        let swap = pinj(&g, &[(0, 1), (1, 0)]);
        assert_eq!(g.distance(&swap, &swap).unwrap(), rat(0, 1));
        assert_eq!(g.distance(&g.identity(), &swap).unwrap(), rat(1, 1));
        assert_eq!(
            g.distance(&Bisection::empty(), &g.identity()).unwrap(),
            rat(1, 1)
        );
    }

    #[test]
    fn source_and_range_distances_differ_off_the_full_group() {
        let g = FiniteGroupoid::full_relation(2);
        let a = pinj(&g, &[(0, 0)]);
        let b = pinj(&g, &[(0, 1)]);
        assert_eq!(g.distance(&a, &b).unwrap(), rat(1, 2));
        assert_eq!(g.range_distance(&a, &b).unwrap(), rat(1, 1));
    }

    #[test]
    fn projection_examples() {
        let g3 = FiniteGroupoid::full_relation(3);
        let swap = pinj(&g3, &[(0, 1), (1, 0), (2, 2)]);
        let p = g3.projections(&swap);
        assert_eq!(p.fix, MAlgElement::from_units([2]));
        assert_eq!(p.supp, MAlgElement::from_units([0, 1]));
        assert_eq!(p.source, MAlgElement::full(&g3));
        assert_eq!(p.range, MAlgElement::full(&g3));

        let p = g3.projections(&g3.identity());
        assert_eq!(p.fix, MAlgElement::full(&g3));
        assert!(p.supp.is_empty());

        let g2 = FiniteGroupoid::full_relation(2);
        let p = g2.projections(&pinj(&g2, &[(0, 1)]));
        assert_eq!(p.source, MAlgElement::from_units([0]));
        assert_eq!(p.range, MAlgElement::from_units([1]));
        assert!(p.fix.is_empty());
        assert_eq!(p.supp, MAlgElement::from_units([0]));
    }

    #[test]
    fn act_examples() {
        let g = FiniteGroupoid::full_relation(3);
        let swap = FullGroupElement::new(&g, pinj(&g, &[(0, 1), (1, 0), (2, 2)])).unwrap();
        let a = MAlgElement::from_units([0, 2]);
        assert_eq!(g.act(&swap, &a).unwrap(), MAlgElement::from_units([1, 2]));
        assert_eq!(g.act(&g.identity_element(), &a).unwrap(), a);
        let full = MAlgElement::full(&g);
        assert_eq!(g.act(&swap, &full).unwrap(), full);
        assert!(g.act(&swap, &MAlgElement::from_units([5])).is_err());
    }

    #[test]
    fn union_examples() {
        let g = FiniteGroupoid::full_relation(2);
        let a = pinj(&g, &[(0, 1)]);
        assert_eq!(g.union_compatible(&a, &Bisection::empty()).unwrap(), a);
        let swap = g.union_compatible(&a, &pinj(&g, &[(1, 0)])).unwrap();
        assert_eq!(swap, pinj(&g, &[(0, 1), (1, 0)]));
        let err = g.union_compatible(&a, &pinj(&g, &[(0, 0)])).unwrap_err();
        assert!(matches!(err, SemigroupError::SourceCollision(_, _, 0)));
        assert!(!g.are_compatible(&a, &pinj(&g, &[(0, 0)])));
        assert!(g.are_compatible(&a, &pinj(&g, &[(1, 0)])));
    }
}
