use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SuiteBudget;
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::semigroup::{Bisection, EnumKind};

/// A random bisection: each point of each component is in the domain with
/// probability 1/2 (always, when `full`), with a uniformly chosen unused
/// target and a uniform isotropy label.
pub fn random_bisection<R: Rng>(g: &FiniteGroupoid, rng: &mut R, full: bool) -> Bisection {
    let mut arrows = Vec::new();
    for (c, comp) in g.components().iter().enumerate() {
        let mut free: Vec<usize> = (0..comp.base_size).collect();
        for x in 0..comp.base_size {
            if full || rng.gen_bool(0.5) {
                let y = free.swap_remove(rng.gen_range(0..free.len()));
                arrows.push(Arrow::new(c, rng.gen_range(0..comp.group.order()), y, x));
            }
        }
    }
    Bisection::from_unsorted_unchecked(arrows)
}

/// Elements a check ranges over.
#[derive(Debug, Clone)]
pub struct Population {
    pub elements: Vec<Bisection>,
    pub exhaustive: bool,
}

/// All elements of the requested kind when their number is within the cap,
/// otherwise `sample_count` seeded draws.
pub fn population(g: &FiniteGroupoid, kind: EnumKind, budget: &SuiteBudget) -> Population {
    let cap = u128::from(budget.exhaustive_cap);
    if let Ok(elements) = g.enumerate(kind, cap) {
        return Population {
            elements,
            exhaustive: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let elements = (0..budget.sample_count)
        .map(|_| match kind {
            EnumKind::Semigroup => random_bisection(g, &mut rng, false),
            EnumKind::Group => random_bisection(g, &mut rng, true),
            EnumKind::Malg => (0..g.unit_count())
                .filter(|_| rng.gen_bool(0.5))
                .map(|u| g.unit_arrow(u))
                .collect(),
        })
        .collect();
    Population {
        elements,
        exhaustive: false,
    }
}

/// Index tuples into a population: every tuple in lexicographic order when
/// `lenᴷ` is within the cap, otherwise `sample_count` seeded draws.
#[derive(Debug, Clone)]
pub struct Tuples<const K: usize> {
    len: usize,
    total: u64,
    sampled: Option<Vec<[usize; K]>>,
}

/// Outcome of a predicate over tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tally<const K: usize> {
    pub tested: u64,
    pub failures: u64,
    /// Lowest-index failing tuple.
    pub first: Option<[usize; K]>,
}

impl<const K: usize> Tally<K> {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

impl<const K: usize> Tuples<K> {
    pub fn new(len: usize, budget: &SuiteBudget, salt: u64) -> Self {
        let total = (len as u64).checked_pow(K as u32);
        match total {
            Some(t) if t <= budget.exhaustive_cap => Tuples {
                len,
                total: t,
                sampled: None,
            },
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ salt.rotate_left(17));
                let items: Vec<[usize; K]> = if len == 0 {
                    Vec::new()
                } else {
                    (0..budget.sample_count)
                        .map(|_| std::array::from_fn(|_| rng.gen_range(0..len)))
                        .collect()
                };
                Tuples {
                    len,
                    total: items.len() as u64,
                    sampled: Some(items),
                }
            }
        }
    }

    pub fn exhaustive(&self) -> bool {
        self.sampled.is_none()
    }

    pub fn count(&self) -> u64 {
        self.total
    }

    pub fn get(&self, i: u64) -> [usize; K] {
        match &self.sampled {
            Some(items) => items[i as usize],
            None => {
                let mut out = [0; K];
                let mut rest = i;
                for slot in out.iter_mut().rev() {
                    *slot = (rest % self.len as u64) as usize;
                    rest /= self.len as u64;
                }
                out
            }
        }
    }

    /// Runs `ok` on every tuple in parallel.
    pub fn check(&self, ok: impl Fn([usize; K]) -> bool + Sync) -> Tally<K> {
        let (failures, first) = (0..self.total)
            .into_par_iter()
            .filter(|&i| !ok(self.get(i)))
            .map(|i| (1u64, i))
            .reduce(|| (0, u64::MAX), |a, b| (a.0 + b.0, a.1.min(b.1)));
        Tally {
            tested: self.total,
            failures,
            first: (failures > 0).then(|| self.get(first)),
        }
    }

    /// Parallel map, then a reduction that must be associative and
    /// commutative for the result to be schedule-independent.
    pub fn fold<T: Send>(
        &self,
        map: impl Fn(u64, [usize; K]) -> T + Sync,
        identity: impl Fn() -> T + Sync + Send,
        reduce: impl Fn(T, T) -> T + Sync + Send,
    ) -> T {
        (0..self.total)
            .into_par_iter()
            .map(|i| map(i, self.get(i)))
            .reduce(identity, reduce)
    }
}
