//! The symmetric inverse monoids `[[n]]` and the ladder embeddings between
//! them.
//!
//! A [`PartialInjection`] on `n` points is the same thing as a bisection of
//! the full relation on `n` units: `x ↦ α(x)` is the arrow `(α(x), x)`. All
//! operations here agree with the groupoid-level ones under that
//! identification, and the unit mass is `1/n`.
//!
//! The ladder sends `[[n]]` into `[[p]]` for `p ≥ n` by `q = ⌊p/n⌋` block
//! copies `qn + j ↦ qn + α(j)` followed by `p mod n` literal inclusions
//! `[[m]] ⊆ [[m+1]]` (undefined at the new point). Block copying is an
//! isometric, trace-preserving monoid morphism; every inclusion step is
//! multiplicative and moves distances and traces by at most `1/(m+1)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::SemigroupMap;
use crate::groupoid::{Arrow, FiniteGroupoid};
use crate::rational::{self, abs_diff, Rational};
use crate::semigroup::{partial_injections, Bisection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetricError {
    #[error("[[0]] is not allowed; n must be positive")]
    ZeroPoints,
    #[error("point {point} is outside 0..{n}")]
    OutOfRange { point: usize, n: usize },
    #[error("points {0} and {1} both map to {2}")]
    NotInjective(usize, usize, usize),
    #[error("sizes differ: [[{0}]] vs [[{1}]]")]
    SizeMismatch(usize, usize),
    #[error("cannot embed [[{n}]] into the smaller [[{p}]]")]
    TargetTooSmall { n: usize, p: usize },
    #[error("block multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("bisection is not in the full relation on {0} points")]
    NotFullRelation(usize),
}

/// A partial injection of `0..n`; `map[x]` is the image of `x`, if defined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialInjection {
    n: usize,
    map: Vec<Option<usize>>,
}

impl PartialInjection {
    pub fn new(n: usize, map: Vec<Option<usize>>) -> Result<Self, SymmetricError> {
        if n == 0 {
            return Err(SymmetricError::ZeroPoints);
        }
        if map.len() != n {
            return Err(SymmetricError::OutOfRange {
                point: map.len().max(n),
                n,
            });
        }
        let mut preimage: Vec<Option<usize>> = vec![None; n];
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = *y {
                if y >= n {
                    return Err(SymmetricError::OutOfRange { point: y, n });
                }
                if let Some(x0) = preimage[y].replace(x) {
                    return Err(SymmetricError::NotInjective(x0, x, y));
                }
            }
        }
        Ok(PartialInjection { n, map })
    }

    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, SymmetricError> {
        if n == 0 {
            return Err(SymmetricError::ZeroPoints);
        }
        let mut map = vec![None; n];
        for (x, y) in pairs {
            if x >= n {
                return Err(SymmetricError::OutOfRange { point: x, n });
            }
            if let Some(prev) = map[x] {
                if prev != y {
                    return Err(SymmetricError::NotInjective(x, x, y));
                }
            }
            map[x] = Some(y);
        }
        Self::new(n, map)
    }

    pub fn identity(n: usize) -> Self {
        PartialInjection {
            n,
            map: (0..n).map(Some).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        PartialInjection {
            n,
            map: vec![None; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn domain_size(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn is_permutation(&self) -> bool {
        self.domain_size() == self.n
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, SymmetricError> {
        if self.n != other.n {
            return Err(SymmetricError::SizeMismatch(self.n, other.n));
        }
        Ok(self.compose_same(other))
    }

    fn compose_same(&self, other: &Self) -> Self {
        PartialInjection {
            n: self.n,
            map: other
                .map
                .iter()
                .map(|y| y.and_then(|y| self.map[y]))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![None; self.n];
        for (x, y) in self.pairs() {
            map[y] = Some(x);
        }
        PartialInjection { n: self.n, map }
    }

    pub fn fixed_points(&self) -> usize {
        self.pairs().filter(|(x, y)| x == y).count()
    }

    /// `|{x : α(x) = x}| / n`.
    pub fn trace(&self) -> Rational {
        Rational::new(self.fixed_points() as i64, self.n as i64)
    }

    /// Points where the two maps disagree (one undefined counts).
    pub fn disagreements(&self, other: &Self) -> usize {
        self.map
            .iter()
            .zip(&other.map)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn distance(&self, other: &Self) -> Result<Rational, SymmetricError> {
        if self.n != other.n {
            return Err(SymmetricError::SizeMismatch(self.n, other.n));
        }
        Ok(Rational::new(
            self.disagreements(other) as i64,
            self.n as i64,
        ))
    }

    /// `Σ_k C(n,k)² k!`.
    pub fn count(n: usize) -> u128 {
        let n = n as u128;
        (0..=n)
            .map(|k| {
                let b: u128 = num_integer::binomial(n, k);
                b * b * (1..=k).product::<u128>()
            })
            .sum()
    }

    /// Every element of `[[n]]`, by domain size, then domain, then image.
    pub fn enumerate(n: usize) -> Vec<Self> {
        partial_injections(n, false)
            .into_iter()
            .map(|pairs| {
                let mut map = vec![None; n];
                for (x, y) in pairs {
                    map[x] = Some(y);
                }
                PartialInjection { n, map }
            })
            .collect()
    }

    /// Draws an element with each point defined with probability 1/2 and
    /// images chosen uniformly among unused targets.
    pub fn sample<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut free: Vec<usize> = (0..n).collect();
        let map = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    let i = rng.gen_range(0..free.len());
                    Some(free.swap_remove(i))
                } else {
                    None
                }
            })
            .collect();
        PartialInjection { n, map }
    }

    pub fn to_bisection(&self) -> Bisection {
        self.pairs().map(|(x, y)| Arrow::new(0, 0, y, x)).collect()
    }

    pub fn from_bisection(g: &FiniteGroupoid, b: &Bisection) -> Result<Self, SymmetricError> {
        let n = g.unit_count();
        let is_relation = g.components().len() == 1 && g.component(0).group.order() == 1;
        if !is_relation || g.check(b).is_err() {
            return Err(SymmetricError::NotFullRelation(n));
        }
        Self::from_pairs(n, b.arrows().iter().map(|a| (a.y_from, a.y_to)))
    }
}

/// Literal inclusion `[[n]] ⊆ [[n+1]]`; undefined at the new point `n`.
pub fn embed_step(alpha: &PartialInjection) -> PartialInjection {
    let mut map = alpha.map.clone();
    map.push(None);
    PartialInjection {
        n: alpha.n + 1,
        map,
    }
}

/// `k` block copies: `qn + j ↦ qn + α(j)` in `[[kn]]`.
pub fn embed_multiple(
    alpha: &PartialInjection,
    k: usize,
) -> Result<PartialInjection, SymmetricError> {
    if k == 0 {
        return Err(SymmetricError::ZeroMultiplicity);
    }
    let n = alpha.n;
    let map = (0..k)
        .flat_map(|q| alpha.map.iter().map(move |y| y.map(|y| q * n + y)))
        .collect();
    Ok(PartialInjection { n: k * n, map })
}

/// `⌊p/n⌋` block copies, then `p mod n` inclusion steps.
pub fn embed_general(
    alpha: &PartialInjection,
    p: usize,
) -> Result<PartialInjection, SymmetricError> {
    let n = alpha.n;
    if p < n {
        return Err(SymmetricError::TargetTooSmall { n, p });
    }
    let mut out = embed_multiple(alpha, p / n)?;
    for _ in 0..p % n {
        out = embed_step(&out);
    }
    Ok(out)
}

/// `n/(p−n)`, or zero when `p = n` (the ladder is the identity there).
pub fn ladder_bound(n: usize, p: usize) -> Rational {
    if p == n {
        Rational::from_integer(0)
    } else {
        Rational::new(n as i64, (p - n) as i64)
    }
}

/// A map between the bisection monoids of full relations, given on partial
/// injections.
fn injection_map(
    n: usize,
    p: usize,
    label: String,
    f: impl Fn(&PartialInjection) -> PartialInjection + Send + Sync + 'static,
) -> SemigroupMap {
    let domain = FiniteGroupoid::full_relation(n);
    let d = domain.clone();
    SemigroupMap::new(domain, FiniteGroupoid::full_relation(p), label, move |b| {
        let a = PartialInjection::from_bisection(&d, b).expect("bisection of the full relation");
        f(&a).to_bisection()
    })
}

/// [`embed_general`] as a map `[[n]] → [[p]]`.
pub fn ladder_map(n: usize, p: usize) -> Result<SemigroupMap, SymmetricError> {
    if n == 0 {
        return Err(SymmetricError::ZeroPoints);
    }
    if p < n {
        return Err(SymmetricError::TargetTooSmall { n, p });
    }
    Ok(injection_map(
        n,
        p,
        format!("ladder(n={n}, p={p})"),
        move |a| embed_general(a, p).expect("p >= n"),
    ))
}

/// [`embed_step`] as a map `[[n]] → [[n+1]]`.
pub fn step_map(n: usize) -> Result<SemigroupMap, SymmetricError> {
    if n == 0 {
        return Err(SymmetricError::ZeroPoints);
    }
    Ok(injection_map(n, n + 1, format!("step(n={n})"), embed_step))
}

/// [`embed_multiple`] as a map `[[n]] → [[kn]]`.
pub fn multiple_map(n: usize, k: usize) -> Result<SemigroupMap, SymmetricError> {
    if n == 0 {
        return Err(SymmetricError::ZeroPoints);
    }
    if k == 0 {
        return Err(SymmetricError::ZeroMultiplicity);
    }
    Ok(injection_map(
        n,
        k * n,
        format!("blocks(n={n}, k={k})"),
        move |a| embed_multiple(a, k).expect("k >= 1"),
    ))
}

/// Exhaustive versus sampled regime for [`ladder_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderBudget {
    /// Largest number of ordered pairs checked exhaustively.
    pub exhaustive_cap: u128,
    /// Pairs drawn when the cap is exceeded.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for LadderBudget {
    fn default() -> Self {
        LadderBudget {
            exhaustive_cap: 1_000_000,
            sample_count: 20_000,
            seed: 0x5EED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub n: usize,
    pub p: usize,
    /// Largest `|d_p(πα, πβ) − d_n(α, β)|` over tested pairs.
    #[serde(with = "rational::serde_str")]
    pub observed_sup: Rational,
    /// Largest `|tr_p(πα) − tr_n(α)|` over tested elements.
    #[serde(with = "rational::serde_str")]
    pub observed_trace_sup: Rational,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub within_bound: bool,
    pub pairs_tested: u64,
    pub exhaustive: bool,
    pub seed: u64,
    /// A pair attaining `observed_sup`, as maps `src → dst`.
    pub witness: Option<(BTreeMap<usize, usize>, BTreeMap<usize, usize>)>,
}

/// One report per target size. Exhaustive over all ordered pairs of `[[n]]`
/// when their number is within the cap, seeded sampling otherwise.
pub fn ladder_profile(
    n: usize,
    p_list: &[usize],
    budget: &LadderBudget,
) -> Result<Vec<DistortionReport>, SymmetricError> {
    if n == 0 {
        return Err(SymmetricError::ZeroPoints);
    }
    if let Some(&p) = p_list.iter().find(|&&p| p < n) {
        return Err(SymmetricError::TargetTooSmall { n, p });
    }
    let count = PartialInjection::count(n);
    let exhaustive = count
        .checked_mul(count)
        .is_some_and(|c| c <= budget.exhaustive_cap);
    let pairs: Vec<(PartialInjection, PartialInjection)> = if exhaustive {
        let all = PartialInjection::enumerate(n);
        all.iter()
            .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        (0..budget.sample_count)
            .map(|_| {
                (
                    PartialInjection::sample(n, &mut rng),
                    PartialInjection::sample(n, &mut rng),
                )
            })
            .collect()
    };
    p_list
        .iter()
        .map(|&p| profile_one(n, p, &pairs, exhaustive, budget.seed))
        .collect()
}

fn profile_one(
    n: usize,
    p: usize,
    pairs: &[(PartialInjection, PartialInjection)],
    exhaustive: bool,
    seed: u64,
) -> Result<DistortionReport, SymmetricError> {
    let zero = Rational::from_integer(0);
    // (deviation, pair index); ties resolve to the lowest index
    let best = pairs
        .par_iter()
        .enumerate()
        .map(
            |(i, (a, b))| -> Result<(Rational, Rational, usize), SymmetricError> {
                let (ia, ib) = (embed_general(a, p)?, embed_general(b, p)?);
                let dev = abs_diff(ia.distance(&ib)?, a.distance(b)?);
                let tr = abs_diff(ia.trace(), a.trace()).max(abs_diff(ib.trace(), b.trace()));
                Ok((dev, tr, i))
            },
        )
        .try_reduce(
            || (zero, zero, usize::MAX),
            |x, y| {
                let tr = x.1.max(y.1);
                let pick = if y.0 > x.0 || (y.0 == x.0 && y.2 < x.2) {
                    y
                } else {
                    x
                };
                Ok((pick.0, tr, pick.2))
            },
        )?;
    let (observed_sup, observed_trace_sup, at) = best;
    let bound = ladder_bound(n, p);
    let as_map = |a: &PartialInjection| a.pairs().collect::<BTreeMap<_, _>>();
    Ok(DistortionReport {
        n,
        p,
        observed_sup,
        observed_trace_sup,
        bound,
        within_bound: observed_sup <= bound,
        pairs_tested: pairs.len() as u64,
        exhaustive,
        seed,
        witness: pairs.get(at).map(|(a, b)| (as_map(a), as_map(b))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn swap_fixing_rest(n: usize) -> PartialInjection {
        let mut map: Vec<Option<usize>> = (0..n).map(Some).collect();
        map.swap(0, 1);
        PartialInjection::new(n, map).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(
            PartialInjection::new(2, vec![Some(1), Some(1)]).unwrap_err(),
            SymmetricError::NotInjective(0, 1, 1)
        );
        assert!(PartialInjection::new(2, vec![Some(2), None]).is_err());
        assert_eq!(
            PartialInjection::new(0, vec![]).unwrap_err(),
            SymmetricError::ZeroPoints
        );
    }

    #[test]
    fn counts() {
        let expected = [(1, 2), (2, 7), (3, 34), (4, 209)];
        for (n, c) in expected {
            assert_eq!(PartialInjection::count(n), c);
            assert_eq!(PartialInjection::enumerate(n).len() as u128, c);
        }
    }

    #[test]
    fn step_examples() {
        let id2 = PartialInjection::identity(2);
        let img = embed_step(&id2);
        assert_eq!(img.n(), 3);
        assert_eq!(img.get(2), None);
        assert_eq!(img.trace(), rat(2, 3));
        assert_eq!(embed_step(&PartialInjection::empty(2)).trace(), rat(0, 1));

        let swap = swap_fixing_rest(2);
        let d_before = swap.distance(&id2).unwrap();
        let d_after = embed_step(&swap).distance(&embed_step(&id2)).unwrap();
        assert_eq!(d_before, rat(1, 1));
        assert_eq!(d_after, rat(2, 3));
        let id3 = PartialInjection::identity(3);
        assert_eq!(embed_step(&swap).distance(&id3).unwrap(), d_before);
    }

    #[test]
    fn multiple_examples() {
        let swap = swap_fixing_rest(2);
        let img = embed_multiple(&swap, 2).unwrap();
        assert_eq!(
            img,
            PartialInjection::from_pairs(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap()
        );
        assert_eq!(
            embed_multiple(&PartialInjection::identity(3), 4).unwrap(),
            PartialInjection::identity(12)
        );
        for a in PartialInjection::enumerate(3) {
            assert_eq!(embed_multiple(&a, 3).unwrap().trace(), a.trace());
        }
    }

    #[test]
    fn general_example_three_into_seven() {
        let swap = swap_fixing_rest(3);
        let img = embed_general(&swap, 7).unwrap();
        let expected =
            PartialInjection::from_pairs(7, [(0, 1), (1, 0), (2, 2), (3, 4), (4, 3), (5, 5)])
                .unwrap();
        assert_eq!(img, expected);
        assert_eq!(abs_diff(img.trace(), swap.trace()), rat(1, 21));
        let id = PartialInjection::identity(3);
        let d = img.distance(&embed_general(&id, 7).unwrap()).unwrap();
        assert_eq!(swap.distance(&id).unwrap(), rat(2, 3));
        assert_eq!(d, rat(4, 7));
        assert!(embed_general(&swap, 2).is_err());
    }

    #[test]
    fn bisection_round_trip() {
        let g = FiniteGroupoid::full_relation(3);
        for a in PartialInjection::enumerate(3) {
            let b = a.to_bisection();
            assert!(g.check(&b).is_ok());
            assert_eq!(PartialInjection::from_bisection(&g, &b).unwrap(), a);
            assert_eq!(g.trace(&b), a.trace());
        }
    }

    #[test]
    fn ladder_small_cases() {
        let reports = ladder_profile(2, &[4, 8, 16], &LadderBudget::default()).unwrap();
        let bounds: Vec<_> = reports.iter().map(|r| r.bound).collect();
        assert_eq!(bounds, vec![rat(1, 1), rat(1, 3), rat(1, 7)]);
        assert!(reports
            .iter()
            .all(|r| r.exhaustive && r.pairs_tested == 49 && r.within_bound));
        assert_eq!(reports[0].observed_sup, rat(0, 1));

        let r = &ladder_profile(3, &[100], &LadderBudget::default()).unwrap()[0];
        assert_eq!(r.bound, rat(3, 97));
        assert!(r.within_bound);
    }

    #[test]
    fn sampled_regime_is_reproducible() {
        let budget = LadderBudget {
            exhaustive_cap: 10,
            sample_count: 200,
            seed: 7,
        };
        let a = ladder_profile(5, &[11], &budget).unwrap();
        let b = ladder_profile(5, &[11], &budget).unwrap();
        assert_eq!(a, b);
        assert!(!a[0].exhaustive);
        assert_eq!(a[0].pairs_tested, 200);
    }
}
