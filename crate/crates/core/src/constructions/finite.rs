use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ConstructionError, SemigroupMap};
use crate::groupoid::{convex_combination, Arrow, Component, FiniteGroupoid};
use crate::rational::{format_rational, Rational};
use crate::semigroup::Bisection;

/// `[[Γ × Y²]] → [[(Γ × Y)²]]`: the arrow `(g, (y, x))` becomes the partial
/// bijection `(h, x) ↦ (gh, y)` of `Γ × Y`, with the point `(h, x)` at index
/// `x·|Γ| + h`.
pub fn embed_connected(g: &FiniteGroupoid) -> Result<SemigroupMap, ConstructionError> {
    if !g.is_connected() {
        return Err(ConstructionError::NotConnected(g.components().len()));
    }
    let comp = g.component(0).clone();
    let m = comp.group.order();
    let codomain = FiniteGroupoid::full_relation(m * comp.base_size);
    let label = format!("embed_connected(order={}, base={})", m, comp.base_size);
    Ok(SemigroupMap::new(
        g.clone(),
        codomain,
        label,
        move |alpha| {
            alpha
                .arrows()
                .iter()
                .flat_map(|a| {
                    let grp = &comp.group;
                    (0..m).map(move |h| {
                        Arrow::new(0, 0, a.y_to * m + grp.mul(a.g, h), a.y_from * m + h)
                    })
                })
                .collect()
        },
    ))
}

/// Whether `g` is a full relation `Y²` with trivial isotropy.
fn is_full_relation(g: &FiniteGroupoid) -> bool {
    g.components().len() == 1 && g.component(0).group.order() == 1
}

/// `[[Σ tᵢ Gᵢ]] → [[([q] × X₀ × … × X_{k−1})²]]` from stage maps
/// `Φᵢ : [[Gᵢ]] → [[Xᵢ²]]`.
///
/// `q` is the lcm of the weight denominators and component `i` owns
/// `tᵢq` consecutive blocks of `[q]`. On a point `(j, x)` with `j` owned by
/// `i`, the image of `α` moves only the coordinate `xᵢ`, by `Φᵢ(α ∩ Gᵢ)`.
/// Points are indexed in mixed radix with `j` most significant.
pub fn embed_convex(
    g: &FiniteGroupoid,
    stages: Vec<SemigroupMap>,
) -> Result<SemigroupMap, ConstructionError> {
    let k = g.components().len();
    if stages.len() != k {
        return Err(ConstructionError::StageMismatch {
            index: stages.len().min(k),
            reason: format!("{} stage maps for {} components", stages.len(), k),
        });
    }
    for (i, st) in stages.iter().enumerate() {
        if !st.domain().same_structure(&g.component_groupoid(i)) {
            return Err(ConstructionError::StageMismatch {
                index: i,
                reason: "domain differs from the component".into(),
            });
        }
        if !is_full_relation(st.codomain()) {
            return Err(ConstructionError::StageMismatch {
                index: i,
                reason: "codomain is not a symmetric inverse monoid".into(),
            });
        }
    }
    let q = g
        .components()
        .iter()
        .fold(1i64, |acc, c| acc.lcm(c.weight.denom())) as usize;
    let mut owner = Vec::with_capacity(q);
    for (i, c) in g.components().iter().enumerate() {
        let blocks = (c.weight * Rational::from_integer(q as i64)).to_integer() as usize;
        owner.extend(std::iter::repeat_n(i, blocks));
    }
    debug_assert_eq!(owner.len(), q);
    let sizes: Vec<usize> = stages.iter().map(|s| s.codomain().unit_count()).collect();
    // stride of coordinate i; the block index has stride `inner`
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    let inner: usize = sizes.iter().product();
    let total = q * inner;
    let codomain = FiniteGroupoid::full_relation(total);
    let label = format!(
        "embed_convex(q={q}, stages=[{}])",
        stages
            .iter()
            .map(|s| s.label())
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(SemigroupMap::new(
        g.clone(),
        codomain,
        label,
        move |alpha| {
            let images: Vec<Vec<Option<usize>>> = (0..k)
                .map(|i| {
                    let part: Bisection = alpha
                        .arrows()
                        .iter()
                        .filter(|a| a.component == i)
                        .map(|a| Arrow::new(0, a.g, a.y_to, a.y_from))
                        .collect();
                    let mut map = vec![None; sizes[i]];
                    for b in stages[i].apply(&part).arrows() {
                        map[b.y_from] = Some(b.y_to);
                    }
                    map
                })
                .collect();
            let mut out = Vec::new();
            for point in 0..total {
                let j = point / inner;
                let i = owner[j];
                let x = (point / strides[i]) % sizes[i];
                if let Some(y) = images[i][x] {
                    let target = point - x * strides[i] + y * strides[i];
                    out.push(Arrow::new(0, 0, target, point));
                }
            }
            Bisection::from_unsorted_unchecked(out)
        },
    ))
}

/// [`embed_convex`] with [`embed_connected`] on every component.
pub fn embed_convex_default(g: &FiniteGroupoid) -> Result<SemigroupMap, ConstructionError> {
    let stages = (0..g.components().len())
        .map(|i| embed_connected(&g.component_groupoid(i)))
        .collect::<Result<Vec<_>, _>>()?;
    embed_convex(g, stages)
}

/// `Φ(α) = Φ_ν(α) ∪ Φ_ρ(α)` into the convex combination `t·F_ν + (1−t)·F_ρ`
/// of the codomains.
///
/// The two domains must be the same groupoid up to weights; the domain of
/// the result carries the weights `t·w_ν + (1−t)·w_ρ`. At `t = 1` or `t = 0`
/// the corresponding map is returned unchanged.
pub fn embed_convex_pair(
    phi_nu: &SemigroupMap,
    phi_rho: &SemigroupMap,
    t: Rational,
) -> Result<SemigroupMap, ConstructionError> {
    if !phi_nu.domain().same_structure(phi_rho.domain()) {
        return Err(ConstructionError::DomainMismatch);
    }
    if t < Rational::zero() || t > Rational::one() {
        return Err(ConstructionError::BadParameter(format_rational(&t)));
    }
    if t.is_one() {
        return Ok(phi_nu.clone());
    }
    if t.is_zero() {
        return Ok(phi_rho.clone());
    }
    let s = Rational::one() - t;
    let components = phi_nu
        .domain()
        .components()
        .iter()
        .zip(phi_rho.domain().components())
        .map(|(a, b)| Component::new(a.group.clone(), a.base_size, t * a.weight + s * b.weight))
        .collect();
    let domain = FiniteGroupoid::new(components)?;
    let codomain = convex_combination(&[
        (t, phi_nu.codomain().clone()),
        (s, phi_rho.codomain().clone()),
    ])?;
    let offset = phi_nu.codomain().components().len();
    let label = format!(
        "embed_convex_pair(t={}, {}, {})",
        format_rational(&t),
        phi_nu.label(),
        phi_rho.label()
    );
    let (nu, rho) = (phi_nu.clone(), phi_rho.clone());
    Ok(SemigroupMap::new(domain, codomain, label, move |alpha| {
        let mut out: Vec<Arrow> = nu.apply(alpha).arrows().to_vec();
        out.extend(rho.apply(alpha).arrows().iter().map(|a| Arrow {
            component: a.component + offset,
            ..*a
        }));
        Bisection::from_unsorted_unchecked(out)
    }))
}
