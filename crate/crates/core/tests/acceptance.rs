//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Time limits are wall-clock and pinned below.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use soficlab::groupoid::FiniteGroupoid;
use soficlab::rational::{rat, Rational};
use soficlab::semigroup::EnumKind;
use soficlab::symmetric::{ladder_bound, ladder_profile, LadderBudget};
use soficlab::verify::{run_suite, CheckOutcome, SuiteBudget, SuiteInput, SuiteReport};

const LIMIT_1: Duration = Duration::from_secs(5);
const LIMIT_2: Duration = Duration::from_secs(5);
const LIMIT_3: Duration = Duration::from_secs(5);
const LIMIT_4: Duration = Duration::from_secs(30);
const LIMIT_5: Duration = Duration::from_secs(120);
const LIMIT_6: Duration = Duration::from_secs(30);
const LIMIT_7: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(10);
const LIMIT_9: Duration = Duration::from_secs(60);
const LIMIT_10: Duration = Duration::from_secs(30);
const LIMIT_11: Duration = Duration::from_secs(10);
const LIMIT_12: Duration = Duration::from_secs(10);

/// Exhaustive up to 10⁴ pairs for the connected-embedding criterion.
const CONNECTED_PAIR_CAP: u64 = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn suite(name: &str, budget: &SuiteBudget) -> Result<SuiteReport, String> {
    run_suite(name, &SuiteInput::default(), budget).map_err(|e| e.to_string())
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn describe(c: &CheckOutcome) -> String {
    format!(
        "{} @ {}: {} of {} failed{}",
        c.name,
        c.instance,
        c.failures,
        c.tested,
        c.detail
            .as_ref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default()
    )
}

/// All selected checks pass and ran exhaustively.
fn all_pass<'a>(checks: impl IntoIterator<Item = &'a CheckOutcome>) -> Result<usize, String> {
    let mut n = 0;
    for c in checks {
        require(c.pass, || describe(c))?;
        require(c.exhaustive, || {
            format!("{} @ {} was sampled", c.name, c.instance)
        })?;
        n += 1;
    }
    require(n > 0, || "no checks selected".to_string())?;
    Ok(n)
}

fn tested(r: &SuiteReport, name: &str, instance: &str) -> Option<u64> {
    r.checks
        .iter()
        .find(|c| c.name == name && c.instance == instance)
        .map(|c| c.tested)
}

fn criterion_1() -> Outcome {
    let b = SuiteBudget::default();
    let metric = suite("metric-prop", &b)?;
    let monoid = suite("inverse-monoid", &b)?;
    let n = all_pass(
        metric
            .checks
            .iter()
            .filter(|c| c.name != "distance-inverse")
            .chain(&monoid.checks),
    )?;
    require(
        tested(&metric, "distance-product", "[[3]]") == Some(34u64.pow(4)),
        || "[[3]] quadruples not exhaustive".into(),
    )?;
    Ok(format!(
        "{n} checks exact over [[2]] and [[3]] (metric items 2-3, inverse-monoid laws)"
    ))
}

fn criterion_1_item_1() -> Outcome {
    let metric = suite("metric-prop", &SuiteBudget::default())?;
    let n = all_pass(
        metric
            .checks
            .iter()
            .filter(|c| c.name == "distance-inverse"),
    )?;
    Ok(format!("d(α⁻¹,β⁻¹) = d(α,β) on {n} instances"))
}

fn criterion_2() -> Outcome {
    let r = suite("trace-distance", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    require(
        tested(&r, "distance-identity", "[[3]]") == Some(1156),
        || "expected 1156 pairs of [[3]]".into(),
    )?;
    require(
        tested(&r, "distance-identity", "Z2x|Y|=2") == Some(17 * 17),
        || "expected 289 pairs of Z2 x Y²".into(),
    )?;
    Ok(format!("{n} identity checks, 1156 + 289 pairs"))
}

fn criterion_3() -> Outcome {
    let r = suite("enumeration", &SuiteBudget::default())?;
    all_pass(&r.checks)?;
    for (n, expected) in [(2, 7), (3, 34), (4, 209)] {
        let got = FiniteGroupoid::full_relation(n)
            .enumerate(EnumKind::Semigroup, 1_000)
            .map_err(|e| e.to_string())?
            .len();
        require(got == expected, || {
            format!("|[[{n}]]| = {got}, expected {expected}")
        })?;
    }
    Ok("|[[2]]|=7, |[[3]]|=34, |[[4]]|=209 by brute force and closed form".into())
}

/// Exhaustive sup of |d_p − d_n| for the ladder composite, n ∈ {2, 3}.
const LADDER_SUP: &[(usize, usize, (i64, i64))] = &[
    (2, 3, (1, 3)),
    (2, 4, (0, 1)),
    (2, 5, (1, 5)),
    (2, 6, (0, 1)),
    (2, 7, (1, 7)),
    (2, 8, (0, 1)),
    (2, 9, (1, 9)),
    (2, 10, (0, 1)),
    (2, 11, (1, 11)),
    (2, 12, (0, 1)),
    (3, 4, (1, 4)),
    (3, 5, (2, 5)),
    (3, 6, (0, 1)),
    (3, 7, (1, 7)),
    (3, 8, (1, 4)),
    (3, 9, (0, 1)),
    (3, 10, (1, 10)),
    (3, 11, (2, 11)),
    (3, 12, (0, 1)),
];

fn criterion_4() -> Outcome {
    let mut cases = 0;
    for n in 2..=3usize {
        let ps: Vec<usize> = (n + 1..=12).collect();
        let reports =
            ladder_profile(n, &ps, &LadderBudget::default()).map_err(|e| e.to_string())?;
        for r in reports {
            require(r.exhaustive, || format!("n={n} p={} sampled", r.p))?;
            require(r.bound == ladder_bound(n, r.p), || "bound mismatch".into())?;
            require(r.bound == rat(n as i64, (r.p - n) as i64), || {
                format!("bound {} ≠ n/(p−n)", r.bound)
            })?;
            require(r.observed_sup <= r.bound, || {
                format!("n={n} p={}: {} > {}", r.p, r.observed_sup, r.bound)
            })?;
            if r.p % n == 0 {
                require(r.observed_sup == Rational::from_integer(0), || {
                    format!("n={n} p={} not isometric", r.p)
                })?;
            }
            let &(_, _, (a, b)) = LADDER_SUP
                .iter()
                .find(|&&(nn, pp, _)| nn == n && pp == r.p)
                .ok_or("missing oracle row")?;
            require(r.observed_sup == rat(a, b), || {
                format!("n={n} p={}: sup {} ≠ oracle {a}/{b}", r.p, r.observed_sup)
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, p) cases, sup ≤ n/(p−n), 0 when n | p"))
}

fn criterion_5() -> Outcome {
    let b = SuiteBudget {
        exhaustive_cap: CONNECTED_PAIR_CAP,
        ..SuiteBudget::default()
    };
    let r = suite("embed-connected", &b)?;
    let n = all_pass(&r.checks)?;
    let instances: std::collections::BTreeSet<&str> =
        r.checks.iter().map(|c| c.instance.as_str()).collect();
    require(instances.len() == 6, || {
        format!("expected 6 groupoids, got {}", instances.len())
    })?;
    Ok(format!("{n} checks over Z2, Z3, S3 with |Y| ∈ {{1, 2}}"))
}

fn criterion_6() -> Outcome {
    let r = suite("embed-convex", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    let iso = r.checks.iter().filter(|c| c.name == "isometric").count();
    Ok(format!("{n} checks, {iso} isometry certificates"))
}

fn criterion_7() -> Outcome {
    let r = suite("finite-index", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    for name in [
        "block-identity",
        "block-trace",
        "well-defined",
        "multiplicative",
        "trace-preserving",
    ] {
        let k = r.checks.iter().filter(|c| c.name == name).count();
        require(k == 3, || format!("{name} ran on {k} of 3 pairs (G, H)"))?;
    }
    Ok(format!("{n} checks over (Z4,Z2), (S3,Z3), ([[2]],units)"))
}

fn criterion_8() -> Outcome {
    let r = suite("extension", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    require(
        tested(&r, "extension-is-full", "[[4]]") == Some(209),
        || "expected 209 elements of [[4]]".into(),
    )?;
    require(
        tested(&r, "extension-is-full", "Z2x|Y|=2") == Some(17),
        || "expected 17 bisections".into(),
    )?;
    Ok(format!("{n} checks, γ ⊆ γ̃ ∈ [G] for 209 + 17 bisections"))
}

fn criterion_9() -> Outcome {
    let r = suite("supports", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    require(tested(&r, "supp-equals-fix", "[4]") == Some(576), || {
        "expected 576 pairs of [4]".into()
    })?;
    require(
        tested(&r, "corner-product", "[4]") == Some(576 * 256),
        || "expected exhaustive A, B".into(),
    )?;
    Ok(format!(
        "{n} checks, both equivalences, covariance, corner product"
    ))
}

fn criterion_10() -> Outcome {
    let r = suite("products", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    require(
        tested(&r, "rectangle-decomposition", "[[2]]x[[2]]") == Some(209),
        || "expected 209 bisections".into(),
    )?;
    require(
        r.checks
            .iter()
            .filter(|c| c.name == "rectangle-trace")
            .all(|c| c.tested == 49),
        || "expected 49 rectangles".into(),
    )?;
    Ok(format!("{n} checks over [[2]]x[[2]]"))
}

fn criterion_11() -> Outcome {
    let r = suite("corner", &SuiteBudget::default())?;
    let n = all_pass(&r.checks)?;
    Ok(format!("{n} checks, normalized traces exact"))
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_soficlab");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        // a small budget forces the seeded sampling path
        let status = Command::new(bin)
            .args([
                "suite",
                "--name",
                "supports",
                "--seed",
                "7",
                "--budget",
                "100",
                "--samples",
                "50",
                "--out",
            ])
            .arg(&path)
            .env_remove("SOFICLAB_SEED")
            .status()
            .map_err(|e| e.to_string())?;
        require(status.code() == Some(0), || format!("exit status {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    require(outputs[0] == outputs[1], || "reports differ".into())?;
    let text = String::from_utf8_lossy(&outputs[0]);
    require(text.contains("\"seed\": 7"), || {
        "seed missing from report".into()
    })?;
    require(text.contains("\"exhaustive\": false"), || {
        "sampling path not exercised".into()
    })?;
    Ok(format!(
        "two runs byte-identical ({} bytes)",
        outputs[0].len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("1", "inverse-monoid and metric laws", LIMIT_1, criterion_1),
        (
            "1/item-1",
            "metric item 1: inverse invariance of d",
            LIMIT_1,
            criterion_1_item_1,
        ),
        ("2", "trace/distance identities", LIMIT_2, criterion_2),
        ("3", "enumeration counts", LIMIT_3, criterion_3),
        ("4", "ladder distortion", LIMIT_4, criterion_4),
        ("5", "connected embedding", LIMIT_5, criterion_5),
        ("6", "convex embedding", LIMIT_6, criterion_6),
        ("7", "finite-index lift", LIMIT_7, criterion_7),
        ("8", "extension to the full group", LIMIT_8, criterion_8),
        ("9", "supports and covariance", LIMIT_9, criterion_9),
        ("10", "product machinery", LIMIT_10, criterion_10),
        ("11", "corner restriction", LIMIT_11, criterion_11),
        ("12", "CLI determinism", LIMIT_12, criterion_12),
    ];
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {id} ({title}): {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {id} ({title}): {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion line(s) failed");
        ExitCode::FAILURE
    }
}
