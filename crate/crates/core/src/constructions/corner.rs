use num_traits::Zero;

use super::{ConstructionError, SemigroupMap};
use crate::groupoid::{corner_restriction, Corner};
use crate::semigroup::{Bisection, MAlgElement};

/// `θ_H(α) = θ(1_H)·θ(α)·θ(1_H)`, read in the corner of the codomain cut out
/// by the idempotent `θ(1_H)`. Both corners carry normalized measures.
#[derive(Debug, Clone)]
pub struct RestrictedMap {
    pub map: SemigroupMap,
    pub domain_corner: Corner,
    pub codomain_corner: Corner,
    /// `θ(1_H)` in the original codomain.
    pub corner_unit_image: Bisection,
}

pub fn restrict_almost_morphism(
    theta: &SemigroupMap,
    units: &MAlgElement,
) -> Result<RestrictedMap, ConstructionError> {
    let g = theta.domain();
    let f = theta.codomain();
    let domain_corner = corner_restriction(g, units)?;
    let e = theta.apply(&g.idempotent(units));
    if !e.is_idempotent() {
        return Err(ConstructionError::NotIdempotent);
    }
    if f.trace(&e).is_zero() {
        return Err(ConstructionError::ZeroTraceCorner);
    }
    let codomain_corner = corner_restriction(f, &f.source_set(&e))?;
    let label = format!("restrict({}, units={:?})", theta.label(), units.units());
    let (th, dc, cc, ee) = (
        theta.clone(),
        domain_corner.clone(),
        codomain_corner.clone(),
        e.clone(),
    );
    let map = SemigroupMap::new(
        domain_corner.groupoid.clone(),
        codomain_corner.groupoid.clone(),
        label,
        move |alpha| {
            let f = th.codomain();
            let image = th.apply(&dc.lift(alpha));
            let sandwiched = f.compose_unchecked(&f.compose_unchecked(&ee, &image), &ee);
            cc.restrict(&sandwiched)
        },
    );
    Ok(RestrictedMap {
        map,
        domain_corner,
        codomain_corner,
        corner_unit_image: e,
    })
}
