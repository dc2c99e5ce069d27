use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{population, SuiteBudget, Tuples, VerifyError};
use crate::constructions::SemigroupMap;
use crate::groupoid::FiniteGroupoid;
use crate::rational::{self, abs_diff, Rational};
use crate::semigroup::{Bisection, EnumKind};

/// A candidate `π : [[G]] → [[F]]`, possibly defined only on a finite set.
pub trait Evaluate: Sync {
    fn domain(&self) -> &FiniteGroupoid;
    fn codomain(&self) -> &FiniteGroupoid;
    fn label(&self) -> String;
    /// `None` where `π` is undefined.
    fn eval(&self, alpha: &Bisection) -> Option<Bisection>;
}

impl Evaluate for SemigroupMap {
    fn domain(&self) -> &FiniteGroupoid {
        SemigroupMap::domain(self)
    }

    fn codomain(&self) -> &FiniteGroupoid {
        SemigroupMap::codomain(self)
    }

    fn label(&self) -> String {
        SemigroupMap::label(self).to_string()
    }

    fn eval(&self, alpha: &Bisection) -> Option<Bisection> {
        Some(self.apply(alpha))
    }
}

/// `π` given by a finite list of `(α, π(α))` pairs.
#[derive(Debug, Clone)]
pub struct PairMap {
    domain: FiniteGroupoid,
    codomain: FiniteGroupoid,
    table: HashMap<Bisection, Bisection>,
}

impl PairMap {
    /// Rejects pairs outside either groupoid and inputs listed twice with
    /// different images.
    pub fn new(
        domain: FiniteGroupoid,
        codomain: FiniteGroupoid,
        pairs: impl IntoIterator<Item = (Bisection, Bisection)>,
    ) -> Result<Self, VerifyError> {
        let mut table = HashMap::new();
        for (a, b) in pairs {
            domain.check(&a).map_err(VerifyError::Domain)?;
            codomain.check(&b).map_err(VerifyError::Codomain)?;
            if let Some(prev) = table.insert(a.clone(), b.clone()) {
                if prev != b {
                    return Err(VerifyError::Conflict(format!("{:?}", a.arrows())));
                }
            }
        }
        Ok(PairMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl Evaluate for PairMap {
    fn domain(&self) -> &FiniteGroupoid {
        &self.domain
    }

    fn codomain(&self) -> &FiniteGroupoid {
        &self.codomain
    }

    fn label(&self) -> String {
        format!("pairs({})", self.table.len())
    }

    fn eval(&self, alpha: &Bisection) -> Option<Bisection> {
        self.table.get(alpha).cloned()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub alpha: Bisection,
    pub beta: Bisection,
    #[serde(with = "rational::serde_str")]
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementWitness {
    pub alpha: Bisection,
    #[serde(with = "rational::serde_str")]
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostMorphismReport {
    pub label: String,
    pub k_size: usize,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    /// `max d(π(αβ), π(α)π(β))` over `α, β ∈ K`.
    #[serde(with = "rational::serde_str")]
    pub max_product_deviation: Rational,
    /// `max |tr(α) − tr(π(α))|` over `α ∈ K`.
    #[serde(with = "rational::serde_str")]
    pub max_trace_deviation: Rational,
    /// `max |d(α, β) − d(π(α), π(β))|` over `α, β ∈ K`.
    #[serde(with = "rational::serde_str")]
    pub max_distance_deviation: Rational,
    pub pass: bool,
    pub pairs_tested: u64,
    /// Worst offenders; absent when the deviation is zero.
    pub product_witness: Option<PairWitness>,
    pub trace_witness: Option<ElementWitness>,
    pub distance_witness: Option<PairWitness>,
}

/// `(deviation, index)`: larger deviation wins, ties go to the lower index.
type Worst = (Rational, u64);

fn worse(a: Worst, b: Worst) -> Worst {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn none() -> Worst {
    (Rational::zero(), u64::MAX)
}

/// Exact `(K, ε)` certificate: `pass ⟺ max_product < ε ∧ max_trace < ε`.
pub fn check_almost_morphism(
    pi: &dyn Evaluate,
    k: &[Bisection],
    epsilon: Rational,
) -> Result<AlmostMorphismReport, VerifyError> {
    let (g, f) = (pi.domain(), pi.codomain());
    for a in k {
        g.check(a).map_err(VerifyError::Domain)?;
    }
    let image = |a: &Bisection| -> Result<Bisection, VerifyError> {
        let b = pi
            .eval(a)
            .ok_or_else(|| VerifyError::Incomplete(format!("{:?}", a.arrows())))?;
        f.check(&b).map_err(VerifyError::Codomain)?;
        Ok(b)
    };
    let images = k.iter().map(&image).collect::<Result<Vec<_>, _>>()?;
    let n = k.len();
    let pairs = (n as u64) * (n as u64);
    let split = |i: u64| ((i / n as u64) as usize, (i % n as u64) as usize);

    // every product must have an image before any deviation is reported
    let products: Vec<Bisection> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let (a, b) = split(i);
            image(&g.compose_unchecked(&k[a], &k[b]))
        })
        .collect::<Result<_, _>>()?;

    let (prod, dist) = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let (a, b) = split(i);
            let composed = f.compose_unchecked(&images[a], &images[b]);
            let p = f.distance_unchecked(&products[i as usize], &composed);
            let d = abs_diff(
                g.distance_unchecked(&k[a], &k[b]),
                f.distance_unchecked(&images[a], &images[b]),
            );
            ((p, i), (d, i))
        })
        .reduce(
            || (none(), none()),
            |x, y| (worse(x.0, y.0), worse(x.1, y.1)),
        );
    let trace = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            (
                abs_diff(g.trace(&k[i as usize]), f.trace(&images[i as usize])),
                i,
            )
        })
        .reduce(none, worse);

    let pair_witness = |w: Worst| {
        (!w.0.is_zero()).then(|| {
            let (a, b) = split(w.1);
            PairWitness {
                alpha: k[a].clone(),
                beta: k[b].clone(),
                deviation: w.0,
            }
        })
    };
    Ok(AlmostMorphismReport {
        label: pi.label(),
        k_size: n,
        epsilon,
        max_product_deviation: prod.0,
        max_trace_deviation: trace.0,
        max_distance_deviation: dist.0,
        pass: prod.0 < epsilon && trace.0 < epsilon,
        pairs_tested: pairs,
        product_witness: pair_witness(prod),
        trace_witness: (!trace.0.is_zero()).then(|| ElementWitness {
            alpha: k[trace.1 as usize].clone(),
            deviation: trace.0,
        }),
        distance_witness: pair_witness(dist),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub label: String,
    pub elements_tested: usize,
    pub pairs_tested: u64,
    pub exhaustive: bool,
    pub multiplicative: bool,
    pub trace_preserving: bool,
    /// Traces preserved on `s(α)`, `s(α)s(β)` and `β⁻¹α` for tested pairs:
    /// the terms of `d(α,β) = tr(s(α)) + tr(s(β)) − tr(s(α)s(β)) − tr(β⁻¹α)`.
    pub closure_trace_preserving: bool,
    pub isometric: bool,
    pub injective: bool,
    pub unital: bool,
    /// False when the observed flags contradict the trace/distance identities;
    /// that would be a defect of this implementation.
    pub consistent: bool,
    pub pass: bool,
    #[serde(with = "rational::serde_str")]
    pub max_product_deviation: Rational,
    #[serde(with = "rational::serde_str")]
    pub max_trace_deviation: Rational,
    #[serde(with = "rational::serde_str")]
    pub max_distance_deviation: Rational,
    pub product_witness: Option<PairWitness>,
    pub trace_witness: Option<ElementWitness>,
    pub distance_witness: Option<PairWitness>,
    pub injectivity_witness: Option<(Bisection, Bisection)>,
}

/// Multiplicativity, trace preservation, isometry, injectivity and
/// unitality of a total map over its enumerated (or sampled) domain.
pub fn check_embedding(
    map: &SemigroupMap,
    budget: &SuiteBudget,
) -> Result<EmbeddingReport, VerifyError> {
    let (g, f) = (map.domain(), map.codomain());
    let pop = population(g, EnumKind::Semigroup, budget);
    let els = &pop.elements;
    let images: Vec<Bisection> = els
        .par_iter()
        .map(|a| {
            let b = map.apply(a);
            f.check(&b).map(|_| b)
        })
        .collect::<Result<_, _>>()
        .map_err(VerifyError::Codomain)?;
    let tuples: Tuples<2> = Tuples::new(els.len(), budget, 0xE3B);
    let tr_dev = |x: &Bisection| abs_diff(g.trace(x), f.trace(&map.apply(x)));

    let trace = (0..els.len() as u64)
        .into_par_iter()
        .map(|i| {
            (
                abs_diff(g.trace(&els[i as usize]), f.trace(&images[i as usize])),
                i,
            )
        })
        .reduce(none, worse);

    // (product, distance, closure-trace) worst cases
    let (prod, dist, closure) = tuples.fold(
        |i, [a, b]| {
            let (x, y) = (&els[a], &els[b]);
            let composed = f.compose_unchecked(&images[a], &images[b]);
            let p = f.distance_unchecked(&map.apply(&g.compose_unchecked(x, y)), &composed);
            let d = abs_diff(
                g.distance_unchecked(x, y),
                f.distance_unchecked(&images[a], &images[b]),
            );
            let sx = g.idempotent(&g.source_set(x));
            let sy = g.idempotent(&g.source_set(y));
            let c = [
                sx.clone(),
                g.compose_unchecked(&sx, &sy),
                g.compose_unchecked(&g.invert(y), x),
            ]
            .iter()
            .map(tr_dev)
            .max()
            .unwrap_or_else(Rational::zero);
            ((p, i), (d, i), (c, i))
        },
        || (none(), none(), none()),
        |x, y| (worse(x.0, y.0), worse(x.1, y.1), worse(x.2, y.2)),
    );

    let mut seen: HashMap<&Bisection, usize> = HashMap::new();
    let mut injectivity_witness = None;
    for (i, img) in images.iter().enumerate() {
        if let Some(&j) = seen.get(img) {
            if els[i] != els[j] && injectivity_witness.is_none() {
                injectivity_witness = Some((els[j].clone(), els[i].clone()));
            }
        } else {
            seen.insert(img, i);
        }
    }

    let unital = map.apply(&g.identity()) == f.identity();
    let multiplicative = prod.0.is_zero();
    let trace_preserving = trace.0.is_zero();
    let closure_trace_preserving = trace_preserving && closure.0.is_zero();
    let isometric = dist.0.is_zero();
    let injective = injectivity_witness.is_none();
    let consistent = !(multiplicative && closure_trace_preserving && !isometric)
        && !(multiplicative && unital && isometric && !trace_preserving);

    let pair_witness = |w: Worst| {
        (!w.0.is_zero()).then(|| {
            let [a, b] = tuples.get(w.1);
            PairWitness {
                alpha: els[a].clone(),
                beta: els[b].clone(),
                deviation: w.0,
            }
        })
    };
    Ok(EmbeddingReport {
        label: map.label().to_string(),
        elements_tested: els.len(),
        pairs_tested: tuples.count(),
        exhaustive: pop.exhaustive && tuples.exhaustive(),
        multiplicative,
        trace_preserving,
        closure_trace_preserving,
        isometric,
        injective,
        unital,
        consistent,
        pass: multiplicative && trace_preserving && isometric && injective && unital && consistent,
        max_product_deviation: prod.0,
        max_trace_deviation: trace.0,
        max_distance_deviation: dist.0,
        product_witness: pair_witness(prod),
        trace_witness: (!trace.0.is_zero()).then(|| ElementWitness {
            alpha: els[trace.1 as usize].clone(),
            deviation: trace.0,
        }),
        distance_witness: pair_witness(dist),
        injectivity_witness,
    })
}
