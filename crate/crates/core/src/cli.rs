//! The `soficlab` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! malformed input. Reports are pretty JSON with rationals as `"p/q"`
//! strings and carry the tool version, seed and budget.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{
    embed_connected, embed_convex_default, embed_convex_pair, find_transversals, FiniteIndexLift,
    ProductEmbedding, SemigroupMap, Subgroupoid,
};
use crate::groupoid::{decompose, validate_raw, FiniteGroupoid};
use crate::io::{
    read_json, to_json, write_atomic, GroupoidFile, KSetFile, MapFile, RawFile, WeightsFile,
};
use crate::rational::{parse_rational, Rational};
use crate::semigroup::{Bisection, EnumKind};
use crate::symmetric::{ladder_map, ladder_profile, multiple_map, step_map, LadderBudget};
use crate::verify::{
    check_almost_morphism, check_embedding, run_suite, AlmostMorphismReport, Evaluate, PairMap,
    SuiteBudget, SuiteInput,
};

/// Overrides `--seed` when set.
pub const SEED_ENV: &str = "SOFICLAB_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "soficlab",
    version,
    about = "Exact sofic-embedding toolkit for finite pmp groupoids"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the groupoid axioms of a raw composition table.
    Validate {
        raw: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Reduce a raw table to its weighted normal form (a groupoid file).
    Decompose {
        raw: PathBuf,
        /// Unit masses `{"unit":"p/q"}` overriding those in the table.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Where to write the raw-id to normal-form arrow map.
        #[arg(long)]
        iso_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Build an embedding and certify it.
    Embed(EmbedArgs),
    /// Complete a bisection to a full-group element.
    Extend {
        groupoid: PathBuf,
        bisection: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// (K, ε) almost-morphism certificate for a map file or construction.
    Verify(VerifyArgs),
    /// Run a named property suite.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Largest number of tuples checked exhaustively.
    #[arg(long)]
    budget: Option<u64>,
    /// Tuples drawn above the exhaustive budget.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmbedKind {
    Connected,
    Convex,
    Pair,
    Index,
    Product,
    Ladder,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long, value_enum)]
    kind: EmbedKind,
    #[arg(long)]
    groupoid: Option<PathBuf>,
    /// Second groupoid (`pair`: the ρ side; `product`: the right factor).
    #[arg(long)]
    groupoid2: Option<PathBuf>,
    /// Subgroupoid arrows for `index`, as `{"arrows":[...]}`; units only if omitted.
    #[arg(long)]
    subgroupoid: Option<PathBuf>,
    /// Mixing parameter for `pair`.
    #[arg(long, value_parser = parse_rational_arg)]
    t: Option<Rational>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// A bisection of the domain whose image is reported.
    #[arg(long)]
    bisection: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// A map file `{"pairs":[...]}`, or one of `identity`, `connected`,
    /// `convex`, `ladder:N:P`, `step:N`, `blocks:N:K`.
    #[arg(long)]
    map: String,
    /// A set file of bisections, or `all` for the whole domain.
    #[arg(long = "K", default_value = "all")]
    k: String,
    #[arg(long, value_parser = parse_rational_arg)]
    epsilon: Rational,
    /// Domain groupoid (map files, `identity`, `connected`, `convex`).
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Codomain groupoid (map files).
    #[arg(long)]
    codomain: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    #[arg(long)]
    name: String,
    /// Replaces the suite's built-in instances.
    #[arg(long)]
    groupoid: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    out: Output,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Every report: version and run parameters, then the payload's fields.
#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool_version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<SuiteBudget>,
    pass: bool,
    #[serde(flatten)]
    body: T,
}

/// An input problem; reported on one line with exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CliResult = Result<bool, InputError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Validate { raw, out } => validate(&raw, &out),
        Command::Decompose {
            raw,
            weights,
            iso_out,
            out,
        } => decompose_cmd(&raw, weights.as_deref(), iso_out.as_deref(), &out),
        Command::Embed(args) => embed(&args),
        Command::Extend {
            groupoid,
            bisection,
            out,
        } => extend(&groupoid, &bisection, &out),
        Command::Verify(args) => verify(&args),
        Command::Suite(args) => suite(&args),
    }
}

fn emit<T: Serialize>(
    out: &Output,
    command: &'static str,
    run: Option<SuiteBudget>,
    pass: bool,
    body: T,
) -> CliResult {
    let text = to_json(&Envelope {
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        seed: run.map(|b| b.seed),
        budget: run,
        pass,
        body,
    });
    match &out.out {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    Ok(pass)
}

fn budget(args: &BudgetArgs) -> Result<SuiteBudget, InputError> {
    let mut b = SuiteBudget::default();
    if let Some(seed) = args.seed {
        b.seed = seed;
    }
    if let Ok(s) = std::env::var(SEED_ENV) {
        b.seed = s
            .trim()
            .parse()
            .map_err(|_| InputError(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?;
    }
    if let Some(cap) = args.budget {
        b.exhaustive_cap = cap;
    }
    if let Some(n) = args.samples {
        b.sample_count = n;
    }
    if b.exhaustive_cap == 0 || b.sample_count == 0 {
        return Err(InputError("--budget and --samples must be positive".into()));
    }
    Ok(b)
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, InputError> {
    let file: GroupoidFile = read_json(path)?;
    file.to_groupoid()
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn require<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, InputError> {
    value
        .as_ref()
        .ok_or_else(|| InputError(format!("{flag} is required here")))
}

fn load_bisection(g: &FiniteGroupoid, path: &Path) -> Result<Bisection, InputError> {
    let b: Bisection = read_json(path)?;
    g.check(&b)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(b)
}

#[derive(Serialize)]
struct ValidateBody {
    units: usize,
    arrows: usize,
    violations: Vec<String>,
}

fn validate(path: &Path, out: &Output) -> CliResult {
    let file: RawFile = read_json(path)?;
    let raw = file
        .to_raw()
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let outcome = validate_raw(&raw).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if let Some(first) = outcome.violations.first() {
        for v in &outcome.violations {
            eprintln!("{}: {v}", path.display());
        }
        return Err(InputError(format!(
            "{}: {} axiom violation(s), first: {first}",
            path.display(),
            outcome.violations.len()
        )));
    }
    let body = ValidateBody {
        units: raw.units.len(),
        arrows: raw.arrows.len(),
        violations: Vec::new(),
    };
    emit(out, "validate", None, true, body)
}

fn decompose_cmd(
    path: &Path,
    weights: Option<&Path>,
    iso_out: Option<&Path>,
    out: &Output,
) -> CliResult {
    let file: RawFile = read_json(path)?;
    let raw = file
        .to_raw()
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let weights = weights.map(read_json::<WeightsFile>).transpose()?;
    let dec = decompose(&raw, weights.as_ref().map(|w| &w.0))
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if let Some(iso) = iso_out {
        let map: BTreeMap<String, [usize; 4]> = dec
            .isomorphism
            .iter()
            .map(|(id, a)| (id.to_string(), [a.component, a.g, a.y_to, a.y_from]))
            .collect();
        write_atomic(iso, &to_json(&map))?;
    }
    // the groupoid file itself, so the output is a valid `--groupoid` input
    let text = to_json(&GroupoidFile::from_groupoid(&dec.groupoid));
    match &out.out {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

#[derive(Serialize)]
struct EmbedBody<R: Serialize> {
    kind: &'static str,
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<Bisection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<Bisection>,
    certificate: R,
}

#[derive(Serialize)]
struct VerifyBody {
    map: String,
    certificate: AlmostMorphismReport,
}

fn embed(args: &EmbedArgs) -> CliResult {
    let b = budget(&args.budget)?;
    let (kind, map) = match args.kind {
        EmbedKind::Ladder => {
            let (n, p) = (*require(&args.n, "--n")?, *require(&args.p, "--p")?);
            let lb = LadderBudget {
                exhaustive_cap: u128::from(b.exhaustive_cap),
                sample_count: b.sample_count as usize,
                seed: b.seed,
            };
            let report = ladder_profile(n, &[p], &lb)?.remove(0);
            let body = EmbedBody {
                kind: "ladder",
                label: format!("ladder(n={n}, p={p})"),
                input: None,
                image: None,
                certificate: report,
            };
            return emit(
                &args.out,
                "embed",
                Some(b),
                body.certificate.within_bound,
                body,
            );
        }
        EmbedKind::Connected => {
            let g = load_groupoid(require(&args.groupoid, "--groupoid")?)?;
            ("connected", embed_connected(&g)?)
        }
        EmbedKind::Convex => {
            let g = load_groupoid(require(&args.groupoid, "--groupoid")?)?;
            ("convex", embed_convex_default(&g)?)
        }
        EmbedKind::Pair => {
            let nu = load_groupoid(require(&args.groupoid, "--groupoid")?)?;
            let rho = load_groupoid(require(&args.groupoid2, "--groupoid2")?)?;
            let t = *require(&args.t, "--t")?;
            let map = embed_convex_pair(
                &SemigroupMap::identity(&nu),
                &SemigroupMap::identity(&rho),
                t,
            )?;
            ("pair", map)
        }
        EmbedKind::Index => {
            let g = load_groupoid(require(&args.groupoid, "--groupoid")?)?;
            let h = match &args.subgroupoid {
                Some(path) => {
                    let arrows: Bisection = read_json(path)?;
                    Subgroupoid::new(&g, arrows.arrows().iter().copied())
                        .map_err(|e| InputError(format!("{}: {e}", path.display())))?
                }
                None => Subgroupoid::units_only(&g),
            };
            let lift = FiniteIndexLift::new(find_transversals(&h)?, None)?;
            ("index", lift.as_map())
        }
        EmbedKind::Product => {
            let g = load_groupoid(require(&args.groupoid, "--groupoid")?)?;
            let h = match &args.groupoid2 {
                Some(p) => load_groupoid(p)?,
                None => g.clone(),
            };
            let pe =
                ProductEmbedding::new(&SemigroupMap::identity(&g), &SemigroupMap::identity(&h));
            ("product", pe.as_map())
        }
    };
    let input = args
        .bisection
        .as_deref()
        .map(|p| load_bisection(map.domain(), p))
        .transpose()?;
    let image = input.as_ref().map(|a| map.apply(a));
    let report = check_embedding(&map, &b)?;
    let body = EmbedBody {
        kind,
        label: map.label().to_string(),
        input,
        image,
        certificate: &report,
    };
    emit(&args.out, "embed", Some(b), report.pass, body)
}

#[derive(Serialize)]
struct ExtendBody {
    input: Bisection,
    extension: Bisection,
    added: Bisection,
}

fn extend(groupoid: &Path, bisection: &Path, out: &Output) -> CliResult {
    let g = load_groupoid(groupoid)?;
    let gamma = load_bisection(&g, bisection)?;
    let ext = g.extend_to_full_group(&gamma).into_bisection();
    let added: Bisection = ext
        .arrows()
        .iter()
        .filter(|a| !gamma.contains(a))
        .copied()
        .collect();
    let pass = gamma.is_subset(&ext) && g.is_full(&ext);
    emit(
        out,
        "extend",
        None,
        pass,
        ExtendBody {
            input: gamma,
            extension: ext,
            added,
        },
    )
}

fn construction(source: &str, domain: Option<&FiniteGroupoid>) -> Result<SemigroupMap, InputError> {
    let parts: Vec<&str> = source.split(':').collect();
    let num = |s: &str| -> Result<usize, InputError> {
        s.parse()
            .map_err(|_| InputError(format!("--map {source}: {s:?} is not a count")))
    };
    let need = || domain.ok_or_else(|| InputError(format!("--map {source} needs --domain")));
    Ok(match parts.as_slice() {
        ["identity"] => SemigroupMap::identity(need()?),
        ["connected"] => embed_connected(need()?)?,
        ["convex"] => embed_convex_default(need()?)?,
        ["ladder", n, p] => ladder_map(num(n)?, num(p)?)?,
        ["step", n] => step_map(num(n)?)?,
        ["blocks", n, k] => multiple_map(num(n)?, num(k)?)?,
        _ => {
            return Err(InputError(format!(
                "--map {source}: no such file or construction"
            )))
        }
    })
}

fn verify(args: &VerifyArgs) -> CliResult {
    let b = budget(&args.budget)?;
    let domain = args.domain.as_deref().map(load_groupoid).transpose()?;
    let map_path = Path::new(&args.map);
    let pi: Box<dyn Evaluate> = if map_path.is_file() {
        let file: MapFile = read_json(map_path)?;
        let g = domain
            .clone()
            .ok_or_else(|| InputError("--domain is required with a map file".into()))?;
        let f = load_groupoid(require(&args.codomain, "--codomain")?)?;
        Box::new(PairMap::new(g, f, file.pairs)?)
    } else {
        Box::new(construction(&args.map, domain.as_ref())?)
    };
    let k = if args.k == "all" {
        pi.domain()
            .enumerate(EnumKind::Semigroup, u128::from(b.exhaustive_cap))
            .map_err(|e| InputError(format!("--K all: {e}")))?
    } else {
        let set: KSetFile = read_json(Path::new(&args.k))?;
        set.into_elements()
    };
    let report = check_almost_morphism(pi.as_ref(), &k, args.epsilon)?;
    let body = VerifyBody {
        map: pi.label(),
        certificate: report,
    };
    emit(&args.out, "verify", Some(b), body.certificate.pass, body)
}

fn suite(args: &SuiteArgs) -> CliResult {
    let b = budget(&args.budget)?;
    let input = SuiteInput {
        groupoid: args.groupoid.as_deref().map(load_groupoid).transpose()?,
    };
    let report = run_suite(&args.name, &input, &b)?;
    let text = to_json(&report);
    match &args.out.out {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}
