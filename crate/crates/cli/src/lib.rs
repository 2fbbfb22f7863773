//! Command dispatch for the `hurwitz` binary. [`run`] is in-process so tests
//! can drive every subcommand without spawning a process.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hurwitz::abelian::{admits_unmixed_abelian, brute_force_existence, n_count, theta_gjt, AbelianProfile};
use hurwitz::group::{Group, GroupSpec};
use hurwitz::orbits::EquivalenceConfig;
use hurwitz::ramification::{SignatureType, SystemTable, DEFAULT_SYSTEM_BUDGET};
use hurwitz::verify::{formula_record, run_all, MoveSuiteConfig, VerifyConfig};
use hurwitz::{count_components, count_components_one_stage, scan_invariants, surface_invariants, Rational};

pub mod cache;
pub mod catalog;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Count Hurwitz components of unmixed ramification data")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cache directory (overrides HURWITZ_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Put elapsed_ms into the output document instead of standard error.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Surface invariants of a pair of types.
    Invariants {
        #[arg(long)]
        group: String,
        #[arg(long)]
        type1: String,
        #[arg(long)]
        type2: String,
    },
    /// Systems of generators of one type.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long = "type")]
        tau: String,
        /// Keep the period order instead of taking every ordering.
        #[arg(long)]
        ordered: bool,
        /// Systems listed in the output.
        #[arg(long, default_value_t = 20)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_SYSTEM_BUDGET)]
        budget: u64,
    },
    /// Number of components h(G; type1, type2).
    Count(CountArgs),
    /// The Θ(n) closed form for (Z/n)².
    Theta {
        #[arg(long)]
        n: u64,
        /// Also enumerate h for (Z/n)² with types (0|n,n,n).
        #[arg(long)]
        cross_check: bool,
    },
    /// Existence of an unmixed structure of size (r1, r2) on an abelian group.
    AbelianExists {
        #[arg(long)]
        group: String,
        #[arg(long)]
        r1: usize,
        #[arg(long)]
        r2: usize,
        /// Also decide by exhaustive search.
        #[arg(long)]
        cross_check: bool,
    },
    /// Components with fixed χ and q over a catalog of groups.
    Scan {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        chi: i64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SYSTEM_BUDGET)]
        budget: u64,
    },
    /// Property suites: moves, the Inn lemma, closed forms against enumeration.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random systems per backend and shape.
        #[arg(long, default_value_t = 60)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![5u64, 7, 11])]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 48)]
        existence_max_order: u64,
    },
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub type1: String,
    #[arg(long)]
    pub type2: String,
    /// Count with the one-stage oracle instead.
    #[arg(long)]
    pub one_stage: bool,
    /// Run both algorithms and compare.
    #[arg(long, conflicts_with = "one_stage")]
    pub cross_check: bool,
    /// Drop conjugation per side (only honoured when g' = 0).
    #[arg(long)]
    pub no_inn: bool,
    /// Force the exchange of factors on or off.
    #[arg(long)]
    pub swap: Option<bool>,
    #[arg(long, default_value_t = DEFAULT_SYSTEM_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = hurwitz::orbits::AUT_LIST_LIMIT)]
    pub aut_list_limit: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_aut_order: usize,
    /// One representative pair per component.
    #[arg(long)]
    pub representatives: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// What a run produced: the primary document, diagnostics and exit status.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<hurwitz::Error> for Failure {
    fn from(e: hurwitz::Error) -> Self {
        use hurwitz::Error as E;
        let (code, kind) = match &e {
            E::Budget { .. } => (EXIT_BUDGET, "budget"),
            E::TooLarge { .. } | E::AutBound { .. } => (EXIT_BUDGET, "bound"),
            E::Invariant(_) | E::ConventionSelfCheck(_) => (EXIT_VERIFY, "internal"),
            _ => (EXIT_USER, "input"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USER, kind: "io", message: e.to_string() }
    }
}

fn user(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USER, kind: "input", message: message.into() }
}

struct Ctx {
    cache: Option<cache::Cache>,
    stderr: String,
}

impl Ctx {
    fn warn(&mut self, msg: impl AsRef<str>) {
        self.stderr.push_str("warning: ");
        self.stderr.push_str(msg.as_ref());
        self.stderr.push('\n');
    }
}

/// A loaded group plus the text its cache identity is derived from.
pub struct LoadedGroup {
    pub group: Arc<Group>,
    pub identity: String,
}

pub fn load_group(text: &str) -> hurwitz::Result<LoadedGroup> {
    let spec = GroupSpec::parse(text)?;
    let identity = match &spec {
        GroupSpec::Cayley(path) => {
            let bytes = std::fs::read(path).map_err(|source| hurwitz::Error::Io { path: path.clone(), source })?;
            format!("{spec} sha256:{}", cache::digest(&bytes))
        }
        other => other.to_string(),
    };
    Ok(LoadedGroup { group: Arc::new(Group::from_spec(spec)?), identity })
}

fn parse_type(text: &str) -> hurwitz::Result<SignatureType> {
    text.parse()
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USER, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let cache = if cli.no_cache { None } else { cache::Cache::locate(cli.cache_dir.clone()) };
    let mut ctx = Ctx { cache, stderr: String::new() };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return Outcome { code: EXIT_USER, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let start = Instant::now();
    let result = pool.install(|| dispatch(&cli.command, &mut ctx));
    let elapsed = start.elapsed().as_millis() as u64;
    match result {
        Ok((mut doc, code, raw)) => {
            if let Some(text) = raw {
                if !cli.timing {
                    ctx.stderr.push_str(&format!("elapsed: {elapsed} ms\n"));
                }
                return Outcome { code, stdout: text, stderr: ctx.stderr };
            }
            if cli.timing {
                doc["elapsed_ms"] = json!(elapsed);
            } else {
                ctx.stderr.push_str(&format!("elapsed: {elapsed} ms\n"));
            }
            doc["schema_version"] = json!(SCHEMA_VERSION);
            Outcome { code, stdout: render(&doc), stderr: ctx.stderr }
        }
        Err(f) => {
            ctx.stderr.push_str(&format!("error: {}\n", f.message));
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "error": { "kind": f.kind, "message": f.message },
            });
            Outcome { code: f.code, stdout: render(&doc), stderr: ctx.stderr }
        }
    }
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json values serialise");
    s.push('\n');
    s
}

/// A document, its exit code, and optionally raw text replacing the document
/// (CSV).
type Dispatch = Result<(Value, i32, Option<String>), Failure>;

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Dispatch {
    match cmd {
        Command::Invariants { group, type1, type2 } => {
            let g = load_group(group)?;
            let (t1, t2) = (parse_type(type1)?, parse_type(type2)?);
            let inv = surface_invariants(g.group.order() as u64, &t1, &t2)?;
            let mut doc = to_value(&inv);
            doc["command"] = json!("invariants");
            doc["group"] = json!(g.group.spec().to_string());
            doc["order"] = json!(g.group.order());
            doc["type1"] = json!(t1.to_string());
            doc["type2"] = json!(t2.to_string());
            Ok((doc, EXIT_OK, None))
        }
        Command::Enumerate { group, tau, ordered, limit, budget } => {
            let g = load_group(group)?;
            let t = parse_type(tau)?;
            let table = if *ordered {
                SystemTable::ordered(&g.group, &t, *budget)?
            } else {
                SystemTable::unordered(&g.group, &t, *budget)?
            };
            let shown: Vec<Vec<String>> = (0..table.len().min(*limit)).map(|i| table.system(&g.group, i).labels()).collect();
            let doc = json!({
                "command": "enumerate",
                "group": g.group.spec().to_string(),
                "type": if *ordered { t.to_string() } else { t.unordered().to_string() },
                "ordered": ordered,
                "count": table.len(),
                "systems": shown,
                "truncated": table.len() > *limit,
            });
            Ok((doc, EXIT_OK, None))
        }
        Command::Count(args) => count(args, ctx),
        Command::Theta { n, cross_check } => {
            let t = theta_gjt(*n)?;
            let nn = n_count(*n)?;
            let mut doc = to_value(&t);
            doc["command"] = json!("theta");
            doc["n_count"] = json!(nn);
            doc["bounds"] = json!({ "lower": rational(Rational::new(nn as i128, 72)), "upper": rational(Rational::new(nn as i128, 6)) });
            if !t.integral {
                let msg = format!(
                    "theta({n}) = {} is not an integer, so the closed form as written cannot be a class count; \
                     enumeration is ground truth",
                    t.theta
                );
                ctx.warn(&msg);
                doc["flag"] = json!(msg);
            }
            if *cross_check {
                let rec = formula_record(*n, false)?;
                doc["cross_check"] = to_value(&rec);
            }
            Ok((doc, EXIT_OK, None))
        }
        Command::AbelianExists { group, r1, r2, cross_check } => {
            let moduli = match GroupSpec::parse(group)? {
                GroupSpec::Abelian(m) => m,
                other => return Err(user(format!("{other} is not given as an abelian group Zn:..."))),
            };
            let profile = AbelianProfile::new(&moduli)?;
            let verdict = admits_unmixed_abelian(&profile, *r1, *r2)?;
            let mut doc = to_value(&verdict);
            doc["command"] = json!("abelian-exists");
            doc["group"] = json!(GroupSpec::Abelian(moduli.clone()).to_string());
            if *cross_check {
                let brute = brute_force_existence(&profile.moduli, &[*r1, *r2])?;
                let found = brute.iter().find(|x| x.0 == *r1 && x.1 == *r2).map(|x| x.2).unwrap_or(false);
                doc["cross_check"] = json!({ "brute_force": found, "agree": found == verdict.admits });
            }
            Ok((doc, EXIT_OK, None))
        }
        Command::Scan { catalog, chi, q, format, budget } => {
            let cat = catalog::ingest_catalog(catalog)?;
            for w in &cat.warnings {
                ctx.warn(w);
            }
            let config = EquivalenceConfig { system_budget: *budget, ..EquivalenceConfig::default() };
            let groups: Vec<Arc<Group>> = cat.entries.iter().map(|e| e.group.clone()).collect();
            let table = scan_invariants(&groups, *chi, *q, &config)?;
            if *format == Format::Csv {
                return Ok((Value::Null, EXIT_OK, Some(scan_csv(&table)?)));
            }
            let mut doc = to_value(&table);
            doc["command"] = json!("scan");
            doc["groups"] = json!(cat.entries.iter().map(|e| e.group.spec().to_string()).collect::<Vec<_>>());
            doc["warnings"] = json!(cat.warnings.len());
            Ok((doc, EXIT_OK, None))
        }
        Command::Verify { seed, samples, primes, existence_max_order } => {
            let config = VerifyConfig {
                moves: MoveSuiteConfig { seed: *seed, samples_per_shape: *samples, ..MoveSuiteConfig::default() },
                primes: primes.clone(),
                existence_max_order: *existence_max_order,
            };
            let report = run_all(&config)?;
            let mut doc = to_value(&report);
            doc["command"] = json!("verify");
            Ok((doc, if report.pass { EXIT_OK } else { EXIT_VERIFY }, None))
        }
    }
}

fn count(args: &CountArgs, ctx: &mut Ctx) -> Dispatch {
    let g = load_group(&args.group)?;
    let (t1, t2) = (parse_type(&args.type1)?, parse_type(&args.type2)?);
    let config = EquivalenceConfig {
        include_inn_per_side: !args.no_inn,
        include_swap: args.swap,
        system_budget: args.budget,
        aut_list_limit: args.aut_list_limit,
        max_group_order_for_aut: args.max_aut_order,
        representatives: args.representatives,
    };
    let method = if args.one_stage { "one-stage" } else if args.cross_check { "cross-check" } else { "two-stage" };
    let key = cache::key(&json!({
        "command": "count",
        "engine": hurwitz::ENGINE_VERSION,
        "group": g.identity,
        "type1": t1.unordered().to_string(),
        "type2": t2.unordered().to_string(),
        "config": config,
        "method": method,
    }));
    if let Some(doc) = ctx.cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok((doc, EXIT_OK, None));
    }
    let mut report =
        if args.one_stage { count_components_one_stage(&g.group, &t1, &t2, &config)? } else { count_components(&g.group, &t1, &t2, &config)? };
    report.elapsed_ms = None;
    let mut doc = to_value(&report);
    doc["command"] = json!("count");
    if args.cross_check {
        let oracle = count_components_one_stage(&g.group, &t1, &t2, &config)?;
        doc["cross_check"] = json!({ "h_one_stage": oracle.h, "agree": oracle.h == report.h });
        if oracle.h != report.h {
            ctx.warn(format!("two-stage h = {} but one-stage h = {}", report.h, oracle.h));
        }
    }
    if let Some(c) = &ctx.cache {
        if let Err(e) = c.put(&key, &doc) {
            ctx.warn(format!("cache write failed: {e}"));
        }
    }
    Ok((doc, EXIT_OK, None))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn rational(r: Rational) -> Value {
    if r.is_integer() {
        json!(*r.numer())
    } else {
        json!(r.to_string())
    }
}

fn scan_csv(table: &hurwitz::orbits::CensusTable) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| user(e.to_string());
    w.write_record(["group", "order", "type1", "type2", "h", "systems1", "systems2", "status"]).map_err(io)?;
    for r in &table.rows {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            r.group.clone(),
            r.order.to_string(),
            r.type1.to_string(),
            r.type2.to_string(),
            opt(r.h),
            opt(r.systems.map(|s| s[0])),
            opt(r.systems.map(|s| s[1])),
            r.status.clone(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| user(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}
