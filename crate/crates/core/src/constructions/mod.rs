//! Explicit maps between full semigroups.
//!
//! Each construction returns a [`SemigroupMap`]: a total function from the
//! bisections of one finite groupoid to those of another, tagged with a
//! label naming the construction and its parameters. At finite stages all of
//! them are exact: multiplicative, trace-preserving and isometric. The
//! `verify` module certifies this on enumerated or sampled domains.

mod corner;
mod finite;
mod index;
mod product;

pub use corner::{restrict_almost_morphism, RestrictedMap};
pub use finite::{embed_connected, embed_convex, embed_convex_default, embed_convex_pair};
pub use index::{
    block_components, find_transversals, FiniteIndexLift, Subgroupoid, TransversalSystem,
};
pub use product::{
    product_embedding, rectangle_decompose, MergeOrder, ProductEmbedding, RectangleUnion,
};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groupoid::{FiniteGroupoid, GroupoidError};
use crate::semigroup::{Bisection, SemigroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("groupoid has {0} components; a connected groupoid is required")]
    NotConnected(usize),
    #[error("stage map {index} does not match component {index}: {reason}")]
    StageMismatch { index: usize, reason: String },
    #[error("domains are not the same groupoid")]
    DomainMismatch,
    #[error("convex parameter {0} is outside [0, 1]")]
    BadParameter(String),
    #[error("image of the corner unit is not idempotent")]
    NotIdempotent,
    #[error("image of the corner unit has zero trace")]
    ZeroTraceCorner,
    #[error("subgroupoid does not contain the unit at {0}")]
    NotUnitFull(usize),
    #[error("arrow set is not a subgroupoid: {0}")]
    NotSubgroupoid(String),
    #[error("no transversal system: {0}")]
    NoTransversals(String),
    #[error("lifted blocks overlap: {0}")]
    Disjointness(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

type Evaluator = dyn Fn(&Bisection) -> Bisection + Send + Sync;

/// A map `[[G]] → [[F]]` given by an evaluator.
#[derive(Clone)]
pub struct SemigroupMap {
    domain: Arc<FiniteGroupoid>,
    codomain: Arc<FiniteGroupoid>,
    evaluator: Arc<Evaluator>,
    label: String,
}

impl SemigroupMap {
    pub fn new(
        domain: FiniteGroupoid,
        codomain: FiniteGroupoid,
        label: impl Into<String>,
        evaluator: impl Fn(&Bisection) -> Bisection + Send + Sync + 'static,
    ) -> Self {
        SemigroupMap {
            domain: Arc::new(domain),
            codomain: Arc::new(codomain),
            evaluator: Arc::new(evaluator),
            label: label.into(),
        }
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        SemigroupMap::new(g.clone(), g.clone(), "identity", |b| b.clone())
    }

    pub fn apply(&self, alpha: &Bisection) -> Bisection {
        (self.evaluator)(alpha)
    }

    /// Checks that `alpha` is a bisection of the domain first.
    pub fn try_apply(&self, alpha: &Bisection) -> Result<Bisection, SemigroupError> {
        self.domain.check(alpha)?;
        Ok(self.apply(alpha))
    }

    pub fn domain(&self) -> &FiniteGroupoid {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroupoid {
        &self.codomain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn domain_arc(&self) -> Arc<FiniteGroupoid> {
        Arc::clone(&self.domain)
    }

    pub(crate) fn codomain_arc(&self) -> Arc<FiniteGroupoid> {
        Arc::clone(&self.codomain)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SemigroupMap) -> SemigroupMap {
        let (f, g) = (self.clone(), other.clone());
        SemigroupMap {
            domain: self.domain_arc(),
            codomain: other.codomain_arc(),
            label: format!("{} ; {}", self.label, other.label),
            evaluator: Arc::new(move |b| g.apply(&f.apply(b))),
        }
    }
}

impl fmt::Debug for SemigroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemigroupMap")
            .field("label", &self.label)
            .field("domain_units", &self.domain.unit_count())
            .field("codomain_units", &self.codomain.unit_count())
            .finish()
    }
}
