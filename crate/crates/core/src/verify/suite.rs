use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_almost_morphism, check_embedding, population, EmbeddingReport, SuiteBudget, Tally,
    Tuples, VerifyError,
};
use crate::constructions::{
    block_components, embed_connected, embed_convex_default, embed_convex_pair, find_transversals,
    rectangle_decompose, restrict_almost_morphism, ConstructionError, FiniteIndexLift, MergeOrder,
    ProductEmbedding, SemigroupMap, Subgroupoid,
};
use crate::group::CayleyTable;
use crate::groupoid::{product_groupoid, Arrow, Component, FiniteGroupoid};
use crate::rational::{format_rational, rat, Rational};
use crate::semigroup::{Bisection, EnumKind, MAlgElement};
use crate::symmetric::{ladder_map, ladder_profile, multiple_map, step_map, LadderBudget};

/// Every suite [`run_suite`] knows.
pub const SUITES: &[&str] = &[
    "metric-prop",
    "trace-distance",
    "inverse-monoid",
    "enumeration",
    "ladder",
    "embed-connected",
    "embed-convex",
    "finite-index",
    "extension",
    "supports",
    "products",
    "corner",
];

/// Optional groupoid replacing a suite's built-in instances.
#[derive(Debug, Clone, Default)]
pub struct SuiteInput {
    pub groupoid: Option<FiniteGroupoid>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub instance: String,
    pub pass: bool,
    pub tested: u64,
    pub exhaustive: bool,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Elements of the first failing tuple.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<Bisection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub tool_version: String,
    pub seed: u64,
    pub budget: SuiteBudget,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

/// Runs a named suite. The report is a function of `(name, input, budget)`.
pub fn run_suite(
    name: &str,
    input: &SuiteInput,
    budget: &SuiteBudget,
) -> Result<SuiteReport, VerifyError> {
    if budget.exhaustive_cap == 0 || budget.sample_count == 0 {
        return Err(VerifyError::ZeroBudget);
    }
    let mut run = Run {
        budget,
        checks: Vec::new(),
    };
    let given = |label: &str| input.groupoid.clone().map(|g| vec![(label.to_string(), g)]);
    match name {
        "metric-prop" => {
            for (inst, g) in given("input").unwrap_or_else(|| vec![fr("[[2]]", 2), fr("[[3]]", 3)])
            {
                run.metric_prop(&inst, &g);
            }
        }
        "trace-distance" => {
            for (inst, g) in given("input").unwrap_or_else(|| vec![fr("[[3]]", 3), z2y2()]) {
                run.trace_distance(&inst, &g);
            }
        }
        "inverse-monoid" => {
            for (inst, g) in
                given("input").unwrap_or_else(|| vec![fr("[[2]]", 2), fr("[[3]]", 3), z2y2()])
            {
                run.inverse_monoid(&inst, &g);
            }
        }
        "enumeration" => match &input.groupoid {
            Some(g) => run.enumeration_input(g)?,
            None => run.enumeration(),
        },
        "ladder" => {
            if input.groupoid.is_some() {
                return Err(bad(
                    name,
                    "the ladder suite works on [[n]] and takes no groupoid",
                ));
            }
            run.ladder()?;
        }
        "embed-connected" => {
            let defaults = || {
                let groups = [
                    ("Z2", CayleyTable::cyclic(2)),
                    ("Z3", CayleyTable::cyclic(3)),
                    ("S3", CayleyTable::symmetric(3)),
                ];
                groups
                    .iter()
                    .flat_map(|(n, t)| {
                        (1..=2).map(move |y| {
                            (
                                format!("{n}x|Y|={y}"),
                                FiniteGroupoid::connected(t.clone(), y),
                            )
                        })
                    })
                    .collect()
            };
            for (inst, g) in given("input").unwrap_or_else(defaults) {
                if !g.is_connected() {
                    return Err(bad(name, "groupoid is not connected"));
                }
                let report = check_embedding(&embed_connected(&g)?, budget)?;
                run.embedding(&inst, &report);
            }
        }
        "embed-convex" => run.embed_convex(input.groupoid.as_ref())?,
        "finite-index" => {
            let cases = match &input.groupoid {
                Some(g) => vec![("input/units".to_string(), Subgroupoid::units_only(g))],
                None => finite_index_cases()?,
            };
            for (inst, h) in cases {
                run.finite_index(&inst, &h)?;
            }
        }
        "extension" => {
            for (inst, g) in given("input").unwrap_or_else(|| vec![fr("[[4]]", 4), z2y2()]) {
                run.extension(&inst, &g);
            }
        }
        "supports" => {
            for (inst, g) in given("input").unwrap_or_else(|| vec![fr("[4]", 4), z2y2()]) {
                run.supports(&inst, &g);
            }
        }
        "products" => {
            let g = input
                .groupoid
                .clone()
                .unwrap_or_else(|| FiniteGroupoid::full_relation(2));
            let inst = if input.groupoid.is_some() {
                "input x input"
            } else {
                "[[2]]x[[2]]"
            };
            run.products(inst, &g)?;
        }
        "corner" => run.corner(input.groupoid.as_ref())?,
        _ => return Err(VerifyError::UnknownSuite(name.to_string())),
    }
    let pass = run.checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: name.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: budget.seed,
        budget: *budget,
        checks: run.checks,
        pass,
    })
}

fn bad(suite: &str, reason: &str) -> VerifyError {
    VerifyError::BadInput {
        suite: suite.to_string(),
        reason: reason.to_string(),
    }
}

fn fr(label: &str, n: usize) -> (String, FiniteGroupoid) {
    (label.to_string(), FiniteGroupoid::full_relation(n))
}

fn z2y2() -> (String, FiniteGroupoid) {
    (
        "Z2x|Y|=2".to_string(),
        FiniteGroupoid::connected(CayleyTable::cyclic(2), 2),
    )
}

/// Stable per-check salt so that sampled checks draw independent tuples.
fn salt(name: &str, instance: &str) -> u64 {
    name.bytes()
        .chain([0])
        .chain(instance.bytes())
        .fold(0xcbf2_9ce4_8422_2325, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
        })
}

fn finite_index_cases() -> Result<Vec<(String, Subgroupoid)>, ConstructionError> {
    let z4 = FiniteGroupoid::from_group(CayleyTable::cyclic(4));
    let s3_table = CayleyTable::symmetric(3);
    // the rotation subgroup: elements of order dividing 3
    let rotations: Vec<usize> = (0..s3_table.order())
        .filter(|&x| s3_table.mul(x, s3_table.mul(x, x)) == 0)
        .collect();
    let s3 = FiniteGroupoid::from_group(s3_table);
    let two = FiniteGroupoid::full_relation(2);
    Ok(vec![
        (
            "Z4>Z2".to_string(),
            Subgroupoid::diagonal(&z4, &[vec![0, 2]])?,
        ),
        (
            "S3>Z3".to_string(),
            Subgroupoid::diagonal(&s3, &[rotations])?,
        ),
        ("[[2]]>units".to_string(), Subgroupoid::units_only(&two)),
    ])
}

struct Run<'a> {
    budget: &'a SuiteBudget,
    checks: Vec<CheckOutcome>,
}

impl Run<'_> {
    fn tuples<const K: usize>(&self, len: usize, name: &str, instance: &str) -> Tuples<K> {
        Tuples::new(len, self.budget, salt(name, instance))
    }

    fn record<const K: usize>(
        &mut self,
        name: &str,
        instance: &str,
        exhaustive: bool,
        tally: Tally<K>,
        witness: impl FnOnce([usize; K]) -> Vec<Bisection>,
    ) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            instance: instance.to_string(),
            pass: tally.pass(),
            tested: tally.tested,
            exhaustive,
            failures: tally.failures,
            detail: None,
            witness: tally.first.map(witness).unwrap_or_default(),
        });
    }

    /// A predicate over `K`-tuples drawn from one population.
    fn over<const K: usize>(
        &mut self,
        name: &str,
        instance: &str,
        elements: &[Bisection],
        exhaustive: bool,
        ok: impl Fn([&Bisection; K]) -> bool + Sync,
    ) {
        let t: Tuples<K> = self.tuples(elements.len(), name, instance);
        let tally = t.check(|ix| ok(ix.map(|i| &elements[i])));
        self.record(name, instance, exhaustive && t.exhaustive(), tally, |ix| {
            ix.iter().map(|&i| elements[i].clone()).collect()
        });
    }

    fn flag(
        &mut self,
        name: &str,
        instance: &str,
        pass: bool,
        tested: u64,
        exhaustive: bool,
        detail: Option<String>,
    ) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            instance: instance.to_string(),
            pass,
            tested,
            exhaustive,
            failures: u64::from(!pass),
            detail,
            witness: Vec::new(),
        });
    }

    fn embedding(&mut self, instance: &str, r: &EmbeddingReport) {
        let inst = format!("{instance}: {}", r.label);
        let pair = |w: &Option<super::PairWitness>| {
            w.as_ref()
                .map(|w| vec![w.alpha.clone(), w.beta.clone()])
                .unwrap_or_default()
        };
        let flags: [(&str, bool, Option<Rational>, Vec<Bisection>); 6] = [
            (
                "multiplicative",
                r.multiplicative,
                Some(r.max_product_deviation),
                pair(&r.product_witness),
            ),
            (
                "trace-preserving",
                r.trace_preserving,
                Some(r.max_trace_deviation),
                r.trace_witness.iter().map(|w| w.alpha.clone()).collect(),
            ),
            (
                "isometric",
                r.isometric,
                Some(r.max_distance_deviation),
                pair(&r.distance_witness),
            ),
            (
                "injective",
                r.injective,
                None,
                r.injectivity_witness
                    .iter()
                    .flat_map(|(a, b)| [a.clone(), b.clone()])
                    .collect(),
            ),
            ("unital", r.unital, None, Vec::new()),
            ("consistent", r.consistent, None, Vec::new()),
        ];
        for (name, pass, dev, witness) in flags {
            self.checks.push(CheckOutcome {
                name: name.to_string(),
                instance: inst.clone(),
                pass,
                tested: r.pairs_tested,
                exhaustive: r.exhaustive,
                failures: u64::from(!pass),
                detail: dev
                    .filter(|d| !d.is_zero())
                    .map(|d| format!("max deviation {}", format_rational(&d))),
                witness,
            });
        }
    }

    fn metric_prop(&mut self, inst: &str, g: &FiniteGroupoid) {
        let pop = population(g, EnumKind::Semigroup, self.budget);
        let (els, ex) = (&pop.elements, pop.exhaustive);
        let d = |a: &Bisection, b: &Bisection| g.distance_unchecked(a, b);
        let c = |a: &Bisection, b: &Bisection| g.compose_unchecked(a, b);
        self.over("distance-inverse", inst, els, ex, |[a, b]| {
            d(&g.invert(a), &g.invert(b)) == d(a, b)
        });
        let group = population(g, EnumKind::Group, self.budget);
        self.over(
            "distance-inverse-full-group",
            inst,
            &group.elements,
            group.exhaustive,
            |[a, b]| d(&g.invert(a), &g.invert(b)) == d(a, b),
        );
        let table = ProductTable::new(g, els, self.budget);
        let t: Tuples<4> = self.tuples(els.len(), "distance-product", inst);
        let tally = t.check(|[a, b, x, y]| {
            d(&table.get(a, b), &table.get(x, y)) <= d(&els[a], &els[x]) + d(&els[b], &els[y])
        });
        self.record(
            "distance-product",
            inst,
            ex && t.exhaustive(),
            tally,
            |ix| ix.iter().map(|&i| els[i].clone()).collect(),
        );
        self.over("distance-inverse-bound", inst, els, ex, |[a, b]| {
            let aba = c(&c(a, b), a);
            let bab = c(&c(b, a), b);
            d(a, &g.invert(b)) <= d(a, &aba) + d(b, &bab)
        });
    }

    fn trace_distance(&mut self, inst: &str, g: &FiniteGroupoid) {
        let pop = population(g, EnumKind::Semigroup, self.budget);
        let one = g.identity();
        let s = |a: &Bisection| g.idempotent(&g.source_set(a));
        self.over(
            "trace-identity",
            inst,
            &pop.elements,
            pop.exhaustive,
            |[a]| {
                let sa = s(a);
                g.trace(a)
                    == Rational::one()
                        - g.distance_unchecked(&sa, &one)
                        - g.distance_unchecked(&sa, a)
            },
        );
        self.over(
            "distance-identity",
            inst,
            &pop.elements,
            pop.exhaustive,
            |[a, b]| {
                let (sa, sb) = (s(a), s(b));
                let rhs = g.trace(&sa) + g.trace(&sb)
                    - g.trace(&g.compose_unchecked(&sa, &sb))
                    - g.trace(&g.compose_unchecked(&g.invert(b), a));
                g.distance_unchecked(a, b) == rhs
            },
        );
        self.over(
            "distance-forms-agree-full-group",
            inst,
            &population(g, EnumKind::Group, self.budget).elements,
            pop.exhaustive,
            |[a, b]| g.distance(a, b).ok() == g.range_distance(a, b).ok(),
        );
    }

    fn inverse_monoid(&mut self, inst: &str, g: &FiniteGroupoid) {
        let pop = population(g, EnumKind::Semigroup, self.budget);
        let (els, ex) = (&pop.elements, pop.exhaustive);
        let c = |a: &Bisection, b: &Bisection| g.compose_unchecked(a, b);
        let one = g.identity();
        let zero = Bisection::empty();
        self.over("regularity", inst, els, ex, |[a]| {
            let ai = g.invert(a);
            c(&c(a, &ai), a) == *a && c(&c(&ai, a), &ai) == ai
        });
        self.over("unit-and-zero", inst, els, ex, |[a]| {
            c(a, &one) == *a && c(&one, a) == *a && c(a, &zero).is_empty() && c(&zero, a).is_empty()
        });
        self.over("inverse-reverses-products", inst, els, ex, |[a, b]| {
            g.invert(&c(a, b)) == c(&g.invert(b), &g.invert(a))
        });
        self.over("associativity", inst, els, ex, |[a, b, x]| {
            c(&c(a, b), x) == c(a, &c(b, x))
        });
        self.over("union-compatibility", inst, els, ex, |[a, b]| {
            g.are_compatible(a, b) == g.union_compatible(a, b).is_ok()
        });
        let idem = population(g, EnumKind::Malg, self.budget);
        self.over(
            "idempotents-commute",
            inst,
            &idem.elements,
            idem.exhaustive,
            |[e, f]| e.is_idempotent() && c(e, f) == c(f, e),
        );
        self.over("idempotents-are-units", inst, els, ex, |[a]| {
            let e = c(a, &g.invert(a));
            e.is_idempotent() && e == g.idempotent(&g.range_set(a))
        });
    }

    fn enumeration(&mut self) {
        for n in 1..=4 {
            let g = FiniteGroupoid::full_relation(n);
            let inst = format!("[[{n}]]");
            let closed: u128 = (0..=n as u128)
                .map(|k| binomial(n as u128, k).pow(2) * factorial(k))
                .sum();
            self.enumeration_counts(&inst, &g, Some(closed), Some(factorial(n as u128)));
        }
    }

    fn enumeration_input(&mut self, g: &FiniteGroupoid) -> Result<(), VerifyError> {
        if g.arrow_count() > 20 {
            return Err(bad("enumeration", "brute force needs at most 20 arrows"));
        }
        self.enumeration_counts("input", g, None, None);
        Ok(())
    }

    /// Brute force over all arrow subsets against the enumerator and the
    /// count formula, and optionally a closed form.
    fn enumeration_counts(
        &mut self,
        inst: &str,
        g: &FiniteGroupoid,
        closed: Option<u128>,
        group_closed: Option<u128>,
    ) {
        let arrows: Vec<Arrow> = g.arrows().collect();
        let subset = |mask: u64| {
            arrows
                .iter()
                .enumerate()
                .filter(move |(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| *a)
        };
        let subsets = 1u64 << arrows.len();
        let (brute, brute_full) = (0..subsets)
            .into_par_iter()
            .map(|mask| match Bisection::new(g, subset(mask)) {
                Ok(b) => (1u128, u128::from(g.is_full(&b))),
                Err(_) => (0, 0),
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
        let cap = u128::from(self.budget.exhaustive_cap);
        for (kind, name, brute, closed) in [
            (EnumKind::Semigroup, "semigroup-count", brute, closed),
            (EnumKind::Group, "group-count", brute_full, group_closed),
            (EnumKind::Malg, "malg-count", 1u128 << g.unit_count(), None),
        ] {
            let listed = g.enumerate(kind, cap);
            let predicted = g.predicted_count(kind);
            let (count, distinct) = match &listed {
                Ok(v) => {
                    let mut sorted = v.clone();
                    sorted.sort();
                    sorted.dedup();
                    (Some(v.len() as u128), sorted.len() == v.len())
                }
                Err(_) => (None, false),
            };
            let pass = count == Some(brute)
                && predicted == brute
                && distinct
                && closed.is_none_or(|c| c == brute);
            let detail = format!(
                "brute {brute}, enumerated {}, predicted {predicted}{}",
                count.map_or("-".to_string(), |c| c.to_string()),
                closed.map_or(String::new(), |c| format!(", closed form {c}")),
            );
            self.flag(name, inst, pass, subsets, true, Some(detail));
        }
    }

    fn ladder(&mut self) -> Result<(), VerifyError> {
        let lb = LadderBudget {
            exhaustive_cap: u128::from(self.budget.exhaustive_cap),
            sample_count: self.budget.sample_count as usize,
            seed: self.budget.seed,
        };
        for n in 2..=3usize {
            let ps: Vec<usize> = (n + 1..=12).collect();
            for r in ladder_profile(n, &ps, &lb)? {
                let pass = r.observed_sup <= r.bound && (r.p % n != 0 || r.observed_sup.is_zero());
                let detail = format!(
                    "observed_sup {}, bound {}, trace_sup {}",
                    format_rational(&r.observed_sup),
                    format_rational(&r.bound),
                    format_rational(&r.observed_trace_sup)
                );
                self.flag(
                    "ladder-bound",
                    &format!("n={n} p={}", r.p),
                    pass,
                    r.pairs_tested,
                    r.exhaustive,
                    Some(detail),
                );
            }
        }
        for n in 1..=3usize {
            let g = FiniteGroupoid::full_relation(n);
            let pop = population(&g, EnumKind::Semigroup, self.budget);
            let step = check_almost_morphism(&step_map(n)?, &pop.elements, Rational::one())?;
            let limit = rat(1, n as i64 + 1);
            let pass = step.max_product_deviation.is_zero()
                && step.max_trace_deviation <= limit
                && step.max_distance_deviation <= limit;
            let detail = format!(
                "trace {}, distance {}, limit {}",
                format_rational(&step.max_trace_deviation),
                format_rational(&step.max_distance_deviation),
                format_rational(&limit)
            );
            self.flag(
                "step-perturbation",
                &format!("n={n}"),
                pass,
                step.pairs_tested,
                pop.exhaustive,
                Some(detail),
            );
            for k in 1..=3 {
                let r = check_embedding(&multiple_map(n, k)?, self.budget)?;
                self.embedding(&format!("n={n} k={k}"), &r);
            }
        }
        let g = FiniteGroupoid::full_relation(3);
        let pop = population(&g, EnumKind::Semigroup, self.budget);
        let r = check_almost_morphism(&ladder_map(3, 7)?, &pop.elements, rat(4, 5))?;
        let pass = r.pass && r.max_distance_deviation <= rat(3, 4);
        let detail = format!(
            "distance deviation {}",
            format_rational(&r.max_distance_deviation)
        );
        self.flag(
            "ladder-almost-morphism",
            "n=3 p=7 eps=4/5",
            pass,
            r.pairs_tested,
            pop.exhaustive,
            Some(detail),
        );
        Ok(())
    }

    fn embed_convex(&mut self, input: Option<&FiniteGroupoid>) -> Result<(), VerifyError> {
        let weighted = |parts: &[(CayleyTable, usize, Rational)]| {
            FiniteGroupoid::new(
                parts
                    .iter()
                    .map(|(t, y, w)| Component::new(t.clone(), *y, *w))
                    .collect(),
            )
        };
        let cases = match input {
            Some(g) => vec![("input".to_string(), g.clone())],
            None => vec![
                (
                    "1/2 Z2 + 1/2 point".to_string(),
                    weighted(&[
                        (CayleyTable::cyclic(2), 1, rat(1, 2)),
                        (CayleyTable::trivial(), 1, rat(1, 2)),
                    ])
                    .map_err(ConstructionError::from)?,
                ),
                (
                    "1/3 Z2 + 2/3 [[2]]".to_string(),
                    weighted(&[
                        (CayleyTable::cyclic(2), 1, rat(1, 3)),
                        (CayleyTable::trivial(), 2, rat(2, 3)),
                    ])
                    .map_err(ConstructionError::from)?,
                ),
            ],
        };
        for (inst, g) in cases {
            let r = check_embedding(&embed_convex_default(&g)?, self.budget)?;
            self.embedding(&inst, &r);
        }
        if input.is_some() {
            return Ok(());
        }
        let two = FiniteGroupoid::full_relation(2);
        let id = SemigroupMap::identity(&two);
        let blocks = multiple_map(2, 2)?;
        for (nu, rho, t) in [(&id, &id, rat(1, 2)), (&id, &blocks, rat(1, 3))] {
            let map = embed_convex_pair(nu, rho, t)?;
            let inst = format!("pair t={}", format_rational(&t));
            let r = check_embedding(&map, self.budget)?;
            self.embedding(&inst, &r);
            let pop = population(map.domain(), EnumKind::Semigroup, self.budget);
            let s = Rational::one() - t;
            self.over(
                "pair-trace-mixture",
                &inst,
                &pop.elements,
                pop.exhaustive,
                |[a]| {
                    map.codomain().trace(&map.apply(a))
                        == t * nu.codomain().trace(&nu.apply(a))
                            + s * rho.codomain().trace(&rho.apply(a))
                },
            );
        }
        Ok(())
    }

    fn finite_index(&mut self, inst: &str, h: &Subgroupoid) -> Result<(), VerifyError> {
        let g = h.parent();
        let system = find_transversals(h)?;
        let n = system.index();
        let inst = format!("{inst} N={n}");
        let pop = population(g, EnumKind::Semigroup, self.budget);
        let els = &pop.elements;
        let blocks: Vec<Vec<Vec<Bisection>>> = els
            .par_iter()
            .map(|a| block_components(a, &system))
            .collect();
        let t: Tuples<2> = self.tuples(els.len(), "block-identity", &inst);
        let tally = t.check(|[a, b]| {
            let ab = block_components(&g.compose_unchecked(&els[a], &els[b]), &system);
            (0..n).all(|i| {
                (0..n).all(|l| {
                    let joined: Bisection = (0..n)
                        .flat_map(|j| {
                            g.compose_unchecked(&blocks[a][i][j], &blocks[b][j][l])
                                .arrows()
                                .to_vec()
                        })
                        .collect();
                    joined == ab[i][l]
                })
            })
        });
        self.record(
            "block-identity",
            &inst,
            pop.exhaustive && t.exhaustive(),
            tally,
            |[a, b]| vec![els[a].clone(), els[b].clone()],
        );
        let t: Tuples<1> = self.tuples(els.len(), "block-trace", &inst);
        let tally = t.check(|[a]| (0..n).all(|i| g.trace(&blocks[a][i][i]) == g.trace(&els[a])));
        self.record("block-trace", &inst, pop.exhaustive, tally, |[a]| {
            vec![els[a].clone()]
        });
        let lift = FiniteIndexLift::new(system, None)?;
        let t: Tuples<1> = self.tuples(els.len(), "well-defined", &inst);
        let tally = t.check(|[a]| lift.lift(&els[a]).is_ok());
        self.record("well-defined", &inst, pop.exhaustive, tally, |[a]| {
            vec![els[a].clone()]
        });
        if tally.pass() {
            let r = check_embedding(&lift.as_map(), self.budget)?;
            self.embedding(&inst, &r);
        }
        Ok(())
    }

    fn extension(&mut self, inst: &str, g: &FiniteGroupoid) {
        let pop = population(g, EnumKind::Semigroup, self.budget);
        self.over(
            "extension-contains",
            inst,
            &pop.elements,
            pop.exhaustive,
            |[a]| a.is_subset(g.extend_to_full_group(a).as_bisection()),
        );
        self.over(
            "extension-is-full",
            inst,
            &pop.elements,
            pop.exhaustive,
            |[a]| g.is_full(g.extend_to_full_group(a).as_bisection()),
        );
        self.over(
            "extension-fixes-full-group",
            inst,
            &pop.elements,
            pop.exhaustive,
            |[a]| !g.is_full(a) || g.extend_to_full_group(a).as_bisection() == a,
        );
    }

    fn supports(&mut self, inst: &str, g: &FiniteGroupoid) {
        let group = population(g, EnumKind::Group, self.budget);
        let (els, ex) = (&group.elements, group.exhaustive);
        let one = g.identity();
        let d = |a: &Bisection, b: &Bisection| g.distance_unchecked(a, b);
        self.over("supp-equals-fix", inst, els, ex, |[a, b]| {
            (g.supp(a) == g.fix(b)) == (d(a, b).is_one() && (g.trace(a) + g.trace(b)).is_one())
        });
        self.over("disjoint-supports", inst, els, ex, |[a, b]| {
            g.supp(a).is_disjoint(&g.supp(b)) == (d(a, b) == d(&one, a) + d(&one, b))
        });
        self.over("support-covariance", inst, els, ex, |[a, b]| {
            let conj = g.compose_unchecked(&g.compose_unchecked(a, b), &g.invert(a));
            g.supp(&conj) == g.act_partial(a, &g.supp(b))
        });
        let sets = population(g, EnumKind::Malg, self.budget);
        let units: Vec<MAlgElement> = sets.elements.iter().map(|e| g.source_set(e)).collect();
        self.over(
            "action-preserves-mass",
            inst,
            els,
            ex && sets.exhaustive,
            |[a]| {
                units
                    .iter()
                    .all(|u| g.measure(&g.act_partial(a, u)) == g.measure(u))
            },
        );
        let t: Tuples<2> = self.tuples(els.len(), "corner-product", inst);
        let tally = t.check(|[x, y]| {
            let (a, b) = (&els[x], &els[y]);
            let ab = g.compose_unchecked(a, b);
            let b_inv = g.invert(b);
            sets.elements.iter().zip(&units).all(|(ea, ua)| {
                sets.elements.iter().zip(&units).all(|(eb, ub)| {
                    let lhs = g.compose_unchecked(
                        &g.compose_unchecked(a, ea),
                        &g.compose_unchecked(b, eb),
                    );
                    let cut = ub.intersection(&g.act_partial(&b_inv, ua));
                    lhs == g.compose_unchecked(&ab, &g.idempotent(&cut))
                })
            })
        });
        let inner = (sets.elements.len() as u64).pow(2);
        let tally = Tally {
            tested: tally.tested * inner,
            ..tally
        };
        self.record(
            "corner-product",
            inst,
            ex && t.exhaustive() && sets.exhaustive,
            tally,
            |[x, y]| vec![els[x].clone(), els[y].clone()],
        );
    }

    fn products(&mut self, inst: &str, g: &FiniteGroupoid) -> Result<(), VerifyError> {
        let p = product_groupoid(g, g);
        let pop = population(&p.groupoid, EnumKind::Semigroup, self.budget);
        let (els, ex) = (&pop.elements, pop.exhaustive);
        self.over("rectangle-decomposition", inst, els, ex, |[phi]| {
            [MergeOrder::Forward, MergeOrder::Reverse].iter().all(|&o| {
                let u = rectangle_decompose(&p, phi, o);
                u.in_monoid(&p) && u.union(&p) == *phi
            })
        });
        let id = SemigroupMap::identity(g);
        let mut maps = vec![("id(x)id".to_string(), id.clone(), id.clone())];
        if g.same_structure(&FiniteGroupoid::full_relation(2)) {
            maps.push(("blocks2(x)id".to_string(), multiple_map(2, 2)?, id.clone()));
            maps.push((
                "blocks2(x)blocks3".to_string(),
                multiple_map(2, 2)?,
                multiple_map(2, 3)?,
            ));
        }
        let factor = population(g, EnumKind::Semigroup, self.budget);
        for (label, phi, psi) in &maps {
            let pe = ProductEmbedding::new(phi, psi);
            let inst = format!("{inst} {label}");
            self.over("redecomposition-invariance", &inst, els, ex, |[x]| {
                let (a, b) = pe.apply_both(x);
                a == b
            });
            let (fg, fh, cod) = (phi.codomain(), psi.codomain(), &pe.codomain.groupoid);
            self.over(
                "rectangle-trace",
                &inst,
                &factor.elements,
                factor.exhaustive,
                |[a, b]| {
                    let rect = p.rectangle(a, b);
                    let tr = g.trace(a) * g.trace(b);
                    p.groupoid.trace(&rect) == tr
                        && cod.trace(&pe.apply(&rect))
                            == fg.trace(&phi.apply(a)) * fh.trace(&psi.apply(b))
                        && cod.trace(&pe.apply(&rect)) == tr
                },
            );
            let r = check_embedding(&pe.as_map(), self.budget)?;
            self.embedding(&inst, &r);
        }
        Ok(())
    }

    fn corner(&mut self, input: Option<&FiniteGroupoid>) -> Result<(), VerifyError> {
        let two = FiniteGroupoid::full_relation(2);
        let z2 = FiniteGroupoid::connected(CayleyTable::cyclic(2), 2);
        let cases: Vec<(String, SemigroupMap, MAlgElement)> = match input {
            Some(g) => vec![(
                "input {0}".into(),
                SemigroupMap::identity(g),
                MAlgElement::from_units([0]),
            )],
            None => vec![
                (
                    "[[2]] {0}".into(),
                    SemigroupMap::identity(&two),
                    MAlgElement::from_units([0]),
                ),
                (
                    "[[2]] {0,1}".into(),
                    SemigroupMap::identity(&two),
                    MAlgElement::from_units([0, 1]),
                ),
                (
                    "[[3]] {0,2}".into(),
                    multiple_map(3, 2)?,
                    MAlgElement::from_units([0, 2]),
                ),
                (
                    "Z2x|Y|=2 {0}".into(),
                    embed_connected(&z2)?,
                    MAlgElement::from_units([0]),
                ),
            ],
        };
        for (inst, theta, units) in cases {
            let r = restrict_almost_morphism(&theta, &units)?;
            let inst = format!("{inst}: {}", theta.label());
            let (g, f) = (theta.domain(), theta.codomain());
            let e = &r.corner_unit_image;
            let (mass, image_mass) = (g.measure(&units), f.trace(e));
            let pop = population(&r.domain_corner.groupoid, EnumKind::Semigroup, self.budget);
            let h = &r.domain_corner.groupoid;
            self.over(
                "normalized-trace-domain",
                &inst,
                &pop.elements,
                pop.exhaustive,
                |[a]| h.trace(a) == g.trace(&r.domain_corner.lift(a)) / mass,
            );
            self.over(
                "normalized-trace-codomain",
                &inst,
                &pop.elements,
                pop.exhaustive,
                |[a]| {
                    r.codomain_corner.groupoid.trace(&r.map.apply(a))
                        == f.trace(&theta.apply(&r.domain_corner.lift(a))) / image_mass
                },
            );
            self.over(
                "corner-agrees",
                &inst,
                &pop.elements,
                pop.exhaustive,
                |[a]| {
                    r.codomain_corner.lift(&r.map.apply(a)) == theta.apply(&r.domain_corner.lift(a))
                },
            );
            let report = check_embedding(&r.map, self.budget)?;
            self.embedding(&inst, &report);
        }
        if input.is_none() {
            let zero = SemigroupMap::new(two.clone(), two.clone(), "zero".to_string(), |_| {
                Bisection::empty()
            });
            let swap: Bisection = [Arrow::new(0, 0, 1, 0), Arrow::new(0, 0, 0, 1)]
                .into_iter()
                .collect();
            let constant = SemigroupMap::new(
                two.clone(),
                two.clone(),
                "constant swap".to_string(),
                move |_| swap.clone(),
            );
            let units = MAlgElement::from_units([0]);
            let zero_err = restrict_almost_morphism(&zero, &units);
            self.flag(
                "zero-trace-rejected",
                "[[2]] {0}: zero",
                matches!(zero_err, Err(ConstructionError::ZeroTraceCorner)),
                1,
                true,
                None,
            );
            let swap_err = restrict_almost_morphism(&constant, &units);
            self.flag(
                "non-idempotent-rejected",
                "[[2]] {0}: constant swap",
                matches!(swap_err, Err(ConstructionError::NotIdempotent)),
                1,
                true,
                None,
            );
        }
        Ok(())
    }
}

/// `αβ` for every pair, precomputed when the table fits the budget.
struct ProductTable<'a> {
    g: &'a FiniteGroupoid,
    els: &'a [Bisection],
    table: Option<Vec<Bisection>>,
}

impl<'a> ProductTable<'a> {
    fn new(g: &'a FiniteGroupoid, els: &'a [Bisection], budget: &SuiteBudget) -> Self {
        let n = els.len() as u64;
        let table = (n * n <= budget.exhaustive_cap).then(|| {
            (0..n * n)
                .into_par_iter()
                .map(|i| g.compose_unchecked(&els[(i / n) as usize], &els[(i % n) as usize]))
                .collect()
        });
        ProductTable { g, els, table }
    }

    fn get(&self, a: usize, b: usize) -> std::borrow::Cow<'_, Bisection> {
        match &self.table {
            Some(t) => std::borrow::Cow::Borrowed(&t[a * self.els.len() + b]),
            None => std::borrow::Cow::Owned(self.g.compose_unchecked(&self.els[a], &self.els[b])),
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}
