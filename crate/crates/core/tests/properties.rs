use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use soficlab::constructions::SemigroupMap;
use soficlab::group::CayleyTable;
use soficlab::groupoid::{Component, FiniteGroupoid};
use soficlab::io::PartialInjectionFile;
use soficlab::rational::{format_rational, parse_rational, rat, Rational};
use soficlab::semigroup::Bisection;
use soficlab::symmetric::{
    embed_general, embed_multiple, embed_step, ladder_bound, PartialInjection,
};
use soficlab::verify::{check_almost_morphism, random_bisection};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn injections(n: usize, seed: u64) -> [PartialInjection; 3] {
    let mut r = rng(seed);
    std::array::from_fn(|_| PartialInjection::sample(n, &mut r))
}

/// Pointwise oracle: points where the two maps differ (including definedness).
fn naive_disagreements(a: &PartialInjection, b: &PartialInjection) -> usize {
    (0..a.n()).filter(|&x| a.get(x) != b.get(x)).count()
}

fn naive_compose(a: &PartialInjection, b: &PartialInjection) -> Vec<Option<usize>> {
    (0..a.n())
        .map(|x| b.get(x).and_then(|y| a.get(y)))
        .collect()
}

/// A random weighted groupoid with up to three components.
fn groupoid(seed: u64) -> FiniteGroupoid {
    let mut r = rng(seed);
    let k = r.gen_range(1..=3usize);
    let parts: Vec<(CayleyTable, usize, i64)> = (0..k)
        .map(|_| {
            let group = match r.gen_range(0..3) {
                0 => CayleyTable::trivial(),
                1 => CayleyTable::cyclic(r.gen_range(2..=3)),
                _ => CayleyTable::symmetric(3),
            };
            (group, r.gen_range(1..=3usize), r.gen_range(1..=4i64))
        })
        .collect();
    let total: i64 = parts.iter().map(|p| p.2).sum();
    FiniteGroupoid::new(
        parts
            .into_iter()
            .map(|(g, y, w)| Component::new(g, y, rat(w, total)))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn injections_match_bisections(n in 1usize..=6, seed in any::<u64>()) {
        let g = FiniteGroupoid::full_relation(n);
        let [a, b, _] = injections(n, seed);
        let (ba, bb) = (a.to_bisection(), b.to_bisection());
        prop_assert!(g.check(&ba).is_ok());
        let composed = g.compose(&ba, &bb).unwrap();
        let expected = PartialInjection::new(n, naive_compose(&a, &b)).unwrap();
        prop_assert_eq!(PartialInjection::from_bisection(&g, &composed).unwrap(), expected.clone());
        prop_assert_eq!(a.compose(&b).unwrap(), expected);
        prop_assert_eq!(g.invert(&ba), a.inverse().to_bisection());
        let fixed = (0..n).filter(|&x| a.get(x) == Some(x)).count();
        prop_assert_eq!(g.trace(&ba), rat(fixed as i64, n as i64));
        let d = rat(naive_disagreements(&a, &b) as i64, n as i64);
        prop_assert_eq!(g.distance(&ba, &bb).unwrap(), d);
        prop_assert_eq!(a.distance(&b).unwrap(), d);
    }

    #[test]
    fn inverse_monoid_laws(seed in any::<u64>()) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 1);
        let [a, b, c]: [Bisection; 3] = std::array::from_fn(|_| random_bisection(&g, &mut r, false));
        let m = |x: &Bisection, y: &Bisection| g.compose(x, y).unwrap();
        let ai = g.invert(&a);
        prop_assert_eq!(m(&m(&a, &ai), &a), a.clone());
        prop_assert_eq!(m(&m(&ai, &a), &ai), ai.clone());
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(g.invert(&m(&a, &b)), m(&g.invert(&b), &ai));
        let (e, f) = (m(&a, &ai), m(&b, &g.invert(&b)));
        prop_assert!(e.is_idempotent());
        prop_assert_eq!(m(&e, &f), m(&f, &e));
        prop_assert_eq!(m(&a, &g.identity()), a.clone());
    }

    #[test]
    fn metric_inequalities(seed in any::<u64>()) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 2);
        let [a, b, c, d]: [Bisection; 4] = std::array::from_fn(|_| random_bisection(&g, &mut r, false));
        let dist = |x: &Bisection, y: &Bisection| g.distance(x, y).unwrap();
        let m = |x: &Bisection, y: &Bisection| g.compose(x, y).unwrap();
        prop_assert!(dist(&m(&a, &b), &m(&c, &d)) <= dist(&a, &c) + dist(&b, &d));
        prop_assert!(dist(&a, &g.invert(&b)) <= dist(&a, &m(&m(&a, &b), &a)) + dist(&b, &m(&m(&b, &a), &b)));
        prop_assert_eq!(dist(&a, &b), dist(&b, &a));
        prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c));
    }

    #[test]
    fn inverse_invariance_holds_on_full_group(seed in any::<u64>()) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 3);
        let a = random_bisection(&g, &mut r, true);
        let b = random_bisection(&g, &mut r, true);
        let d = g.distance(&a, &b).unwrap();
        prop_assert_eq!(g.distance(&g.invert(&a), &g.invert(&b)).unwrap(), d);
        prop_assert_eq!(g.range_distance(&a, &b).unwrap(), d);
    }

    #[test]
    fn trace_distance_identities(seed in any::<u64>()) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 4);
        let a = random_bisection(&g, &mut r, false);
        let b = random_bisection(&g, &mut r, false);
        let s = |x: &Bisection| g.idempotent(&g.source_set(x));
        let one = g.identity();
        let d = |x: &Bisection, y: &Bisection| g.distance(x, y).unwrap();
        prop_assert_eq!(g.trace(&a), Rational::from_integer(1) - d(&s(&a), &one) - d(&s(&a), &a));
        let rhs = g.trace(&s(&a)) + g.trace(&s(&b))
            - g.trace(&g.compose(&s(&a), &s(&b)).unwrap())
            - g.trace(&g.compose(&g.invert(&b), &a).unwrap());
        prop_assert_eq!(d(&a, &b), rhs);
    }

    #[test]
    fn extension_contains_and_is_full(seed in any::<u64>()) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 5);
        let a = random_bisection(&g, &mut r, false);
        let ext = g.extend_to_full_group(&a).into_bisection();
        prop_assert!(a.is_subset(&ext));
        prop_assert!(g.is_full(&ext));
        let full = random_bisection(&g, &mut r, true);
        prop_assert_eq!(g.extend_to_full_group(&full).into_bisection(), full);
    }

    #[test]
    fn action_preserves_measure(seed in any::<u64>()) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 6);
        let a = random_bisection(&g, &mut r, true);
        let set = g.source_set(&random_bisection(&g, &mut r, false));
        let image = g.act_partial(&a, &set);
        prop_assert_eq!(g.measure(&image), g.measure(&set));
        let back = g.act_partial(&g.invert(&a), &image);
        prop_assert_eq!(back, set);
    }

    #[test]
    fn ladder_within_bound(n in 1usize..=5, extra in 1usize..=15, seed in any::<u64>()) {
        let p = n + extra;
        let [a, b, _] = injections(n, seed);
        let (ia, ib) = (embed_general(&a, p).unwrap(), embed_general(&b, p).unwrap());
        let dev = (ia.distance(&ib).unwrap() - a.distance(&b).unwrap()).abs();
        prop_assert!(dev <= ladder_bound(n, p));
        prop_assert_eq!(ladder_bound(n, p), rat(n as i64, extra as i64));
        if p % n == 0 {
            prop_assert_eq!(dev, Rational::from_integer(0));
            prop_assert_eq!(ia.trace(), a.trace());
        }
        prop_assert_eq!(embed_general(&a.compose(&b).unwrap(), p).unwrap(), ia.compose(&ib).unwrap());
    }

    #[test]
    fn block_copies_are_exact(n in 1usize..=5, k in 1usize..=4, seed in any::<u64>()) {
        let [a, b, _] = injections(n, seed);
        let (ma, mb) = (embed_multiple(&a, k).unwrap(), embed_multiple(&b, k).unwrap());
        prop_assert_eq!(ma.distance(&mb).unwrap(), a.distance(&b).unwrap());
        prop_assert_eq!(ma.trace(), a.trace());
        prop_assert_eq!(ma.inverse(), embed_multiple(&a.inverse(), k).unwrap());
        prop_assert_eq!(embed_multiple(&a.compose(&b).unwrap(), k).unwrap(), ma.compose(&mb).unwrap());
        for x in 0..n * k {
            prop_assert_eq!(ma.get(x), a.get(x % n).map(|y| (x / n) * n + y));
        }
    }

    #[test]
    fn step_perturbs_by_at_most_one_point(n in 1usize..=6, seed in any::<u64>()) {
        let [a, b, _] = injections(n, seed);
        let (sa, sb) = (embed_step(&a), embed_step(&b));
        let limit = rat(1, n as i64 + 1);
        prop_assert!((sa.trace() - a.trace()).abs() <= limit);
        prop_assert!((sa.distance(&sb).unwrap() - a.distance(&b).unwrap()).abs() <= limit);
        prop_assert_eq!(sa.get(n), None);
    }

    #[test]
    fn identity_is_an_almost_morphism_for_every_epsilon(seed in any::<u64>(), num in 1i64..100, den in 1i64..100) {
        let g = groupoid(seed);
        let mut r = rng(seed ^ 7);
        let k: Vec<Bisection> = (0..5).map(|_| random_bisection(&g, &mut r, false)).collect();
        let report = check_almost_morphism(&SemigroupMap::identity(&g), &k, rat(num, den)).unwrap();
        prop_assert!(report.pass);
        prop_assert_eq!(report.max_distance_deviation, Rational::from_integer(0));
    }

    #[test]
    fn bisection_json_round_trips(seed in any::<u64>()) {
        let g = groupoid(seed);
        let a = random_bisection(&g, &mut rng(seed), false);
        let text = serde_json::to_string(&a).unwrap();
        let back: Bisection = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn injection_json_round_trips(n in 1usize..=8, seed in any::<u64>()) {
        let [a, _, _] = injections(n, seed);
        let text = serde_json::to_string(&PartialInjectionFile::from_injection(&a)).unwrap();
        let back: PartialInjectionFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_injection().unwrap(), a);
    }

    #[test]
    fn rationals_round_trip(num in -1000i64..1000, den in 1i64..1000) {
        let r = rat(num, den);
        let text = format_rational(&r);
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
        let (p, q) = text.split_once('/').unwrap();
        let (p, q): (i64, i64) = (p.parse().unwrap(), q.parse().unwrap());
        prop_assert_eq!(num_integer::gcd(p, q), 1);
    }
}

#[test]
fn counts_match_closed_form() {
    // Σ C(n,k)² k!
    for (n, expected) in [(1usize, 2usize), (2, 7), (3, 34), (4, 209), (5, 1546)] {
        assert_eq!(PartialInjection::enumerate(n).len(), expected);
        assert_eq!(PartialInjection::count(n), expected as u128);
    }
}
