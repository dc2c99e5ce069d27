use super::{Bisection, FullGroupElement, MAlgElement};
use crate::groupoid::FiniteGroupoid;

impl FiniteGroupoid {
    /// Completes a bisection `γ` to a full-group element `γ̃ ⊇ γ`.
    ///
    /// `γ̃ = γ ∪ ⋃_{n≥1} γ_n ∪ (G⁽⁰⁾ ∖ (s(γ) ∪ r(γ)))` with
    /// `γ_n = {g ∈ γ⁻ⁿ : s(g) ∉ s(γ), r(g) ∉ r(γ)}`. The pieces are asserted
    /// to have pairwise disjoint sources and ranges.
    ///
    /// Panics if `γ` contains arrows outside the groupoid.
    pub fn extend_to_full_group(&self, gamma: &Bisection) -> FullGroupElement {
        let s_gamma = self.source_set(gamma);
        let r_gamma = self.range_set(gamma);
        let mut used_source = vec![false; self.unit_count()];
        let mut used_range = vec![false; self.unit_count()];
        let mut arrows = Vec::with_capacity(self.unit_count());
        let mut take =
            |a: crate::groupoid::Arrow, used_source: &mut [bool], used_range: &mut [bool]| {
                let (s, r) = (self.source(&a), self.range(&a));
                assert!(!used_source[s], "extension pieces overlap at source {s}");
                assert!(!used_range[r], "extension pieces overlap at range {r}");
                used_source[s] = true;
                used_range[r] = true;
                arrows.push(a);
            };
        for a in gamma.arrows() {
            take(*a, &mut used_source, &mut used_range);
        }

        let inv = self.invert(gamma);
        let mut power = inv.clone();
        let mut n = 1;
        while !power.is_empty() && n <= self.arrow_count() {
            for a in power.arrows() {
                if !s_gamma.contains(self.source(a)) && !r_gamma.contains(self.range(a)) {
                    take(*a, &mut used_source, &mut used_range);
                }
            }
            power = self.compose_unchecked(&power, &inv);
            n += 1;
        }

        let moved = s_gamma.union(&r_gamma);
        for u in MAlgElement::full(self).difference(&moved).units() {
            take(self.unit_arrow(*u), &mut used_source, &mut used_range);
        }

        let tilde = Bisection::from_unsorted_unchecked(arrows);
        assert!(
            self.is_full(&tilde),
            "extension is not a full-group element"
        );
        assert!(gamma.is_subset(&tilde));
        FullGroupElement::new_unchecked(tilde)
    }
}
