use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mobile_atlas::mobile::{check_well_labeled, from_mobile_with_mode, sample_mobile, to_mobile, MobileJson};
use mobile_atlas::models::forest::{even_valent, forest, forest_vertex_weights, quad_one_way, spanning_tree_f};
use mobile_atlas::models::hp::{hp_rooted, triangulation_hp};
use mobile_atlas::models::ising::{ising, ising_rooted};
use mobile_atlas::models::maxblocked::max_blocked;
use mobile_atlas::models::singularity::{forest_singularity, real, spanning_tree_singularity};
use mobile_atlas::models::{solve, ModelError, ModelSpec, ModelSpecJson, Particles};
use mobile_atlas::oracle::checks::{
    duality_reports, exhaustive_cancellation, identity_reports, oracle_series_reports, roundtrip_suite, CheckError, TaskReport,
};
use mobile_atlas::par::{set_thread_limit, Exec};
use mobile_atlas::planar_map::{validate_blocking, BlockMode, MapJson};
use mobile_atlas::series::{AuxPoly, GSeries, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

mod output;

use output::{print_table, Format};

#[derive(Parser)]
#[command(name = "mobile-atlas", version, about = "Blocked Eulerian maps, mobiles and their generating series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Generic,
    QuadOneWay,
    Forest,
    SpanningTree,
    HpTriangulation,
    Ising,
    EvenValent,
    MaxBlocked,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Roundtrip,
    OracleSeries,
    Cancellation,
    Identities,
    Duality,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Map,
    Mobile,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Directed,
    Pairs,
}

#[derive(Subcommand)]
enum Command {
    /// Print the series of a model up to a given order
    Solve {
        model: Model,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// substitute a rational value for y
        #[arg(long, allow_negative_numbers = true)]
        y: Option<String>,
        /// substitute a rational value for z1
        #[arg(long, allow_negative_numbers = true)]
        z1: Option<String>,
        /// hard particles per face (generic model)
        #[arg(long)]
        p: Option<u8>,
        /// divide out the pointing (hp-triangulation)
        #[arg(long)]
        rooted: bool,
        /// model file for the generic model
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Run a verification suite; exits 1 with the first counterexample on failure
    Check {
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// particles per face for the cancellation suite
        #[arg(long, default_value_t = 1)]
        p: u8,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Locate the dominant singularity of the forest series
    Singularity {
        /// y = 0 gives the spanning-tree limit
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        y: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Draw a random pointed map through its mobile
    Sample {
        model: Model,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        y: String,
        #[arg(long, default_value = "1", allow_negative_numbers = true)]
        z1: String,
        #[arg(long)]
        spec: Option<String>,
    },
    /// Translate between map JSON and mobile JSON
    Convert {
        #[arg(long, value_enum)]
        to: Target,
        /// read from a file instead of stdin
        #[arg(long)]
        input: Option<String>,
        /// blocking mode of the decoded map
        #[arg(long, value_enum, default_value = "directed")]
        mode: Mode,
    },
}

/// Exit 2 for bad input, exit 1 when a verification fails.
enum CliError {
    Invalid(String),
    Failed(String),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        match e {
            ModelError::InvalidSpec(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> CliError {
        match e {
            CheckError::Model(m) => m.into(),
            CheckError::Oracle(o) => CliError::Invalid(o.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("MOBILE_ATLAS_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => set_thread_limit(n),
            _ => {
                eprintln!("error: MOBILE_ATLAS_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let result = match cli.command {
        Command::Solve { model, order, y, z1, p, rooted, spec, format } => run_solve(model, order, y, z1, p, rooted, spec, format),
        Command::Check { suite, max_edges, order, p, format } => run_check(suite, max_edges, order, p, format),
        Command::Singularity { y, tol, format } => run_singularity(y, tol, format),
        Command::Sample { model, size, seed, y, z1, spec } => run_sample(model, size, seed, &y, &z1, spec),
        Command::Convert { to, input, mode } => run_convert(to, input, mode),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Accepts integers, fractions `p/q` and decimals.
fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<BigRational>() {
        return Ok(r);
    }
    let bad = || invalid(format!("not a rational number: {s:?}"));
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int_part, frac_part) = body.split_once('.').ok_or_else(bad)?;
    if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let r = BigRational::new(digits, BigInt::from(10).pow(frac_part.len() as u32));
    Ok(if neg { -r } else { r })
}

fn read_input(path: Option<&str>) -> Result<String> {
    let mut s = String::new();
    match path {
        Some(p) => s = std::fs::read_to_string(p).map_err(|e| invalid(format!("{p}: {e}")))?,
        None => {
            std::io::stdin().read_to_string(&mut s).map_err(invalid)?;
        }
    }
    Ok(s)
}

fn load_spec(path: Option<&str>) -> Result<ModelSpec> {
    let path = path.ok_or_else(|| invalid("the generic model needs --spec FILE"))?;
    ModelSpecJson::parse(&read_input(Some(path))?).map_err(invalid)
}

#[allow(clippy::too_many_arguments)]
fn run_solve(
    model: Model,
    order: usize,
    y: Option<String>,
    z1: Option<String>,
    p: Option<u8>,
    rooted: bool,
    spec: Option<String>,
    format: Format,
) -> Result<()> {
    if rooted && model != Model::HpTriangulation && model != Model::Ising {
        return Err(invalid("--rooted applies to hp-triangulation and ising"));
    }
    if p.is_some() && model != Model::Generic {
        return Err(invalid("--p applies to the generic model"));
    }
    let mut table: Vec<(String, GSeries)> = match model {
        Model::Generic => {
            let mut spec = load_spec(spec.as_deref())?;
            if let Some(p) = p {
                spec = if p == 0 {
                    ModelSpec { particles: None, ..spec }
                } else {
                    let z = (0..=p).map(|i| if i == 0 { AuxPoly::one() } else { AuxPoly::var(&format!("z{i}")) }).collect();
                    spec.with_particles(Particles { p, z, constraints: Default::default() })
                };
                spec.validate()?;
            }
            let b = solve(&spec, order)?;
            vec![("R".into(), b.in_var(&b.r(), "g")), ("G".into(), b.in_var(&b.g_series(), "g"))]
        }
        Model::QuadOneWay | Model::Forest => {
            let q = if model == Model::Forest { forest(order)? } else { quad_one_way(order)? };
            vec![("R".into(), q.r), ("G".into(), q.bundle.g_series())]
        }
        Model::SpanningTree => vec![("F".into(), spanning_tree_f(order))],
        Model::HpTriangulation => {
            let b = triangulation_hp(order)?;
            let g = if rooted { hp_rooted(b.g())? } else { b.g().clone() };
            vec![("R".into(), b.r().clone()), ("G".into(), g)]
        }
        Model::Ising => {
            let b = ising(order)?;
            let mut t = vec![("R".into(), b.r().clone()), ("G".into(), b.g().clone())];
            t.push(("H".into(), ising_rooted(b.g())?));
            t
        }
        Model::EvenValent => vec![("R".into(), even_valent(&forest_vertex_weights(order), order)?)],
        Model::MaxBlocked => {
            let a: Vec<(usize, AuxPoly)> = (1..=3).map(|k| (k, AuxPoly::var(&format!("a{k}")))).collect();
            let b: Vec<(usize, AuxPoly)> = (1..=3).map(|k| (k, AuxPoly::var(&format!("b{k}")))).collect();
            vec![("Z".into(), max_blocked(&a, &b, order)?.z)]
        }
    };
    for (name, value) in [("y", y), ("z1", z1)] {
        if let Some(v) = value {
            let v = parse_rational(&v)?;
            for (_, s) in table.iter_mut() {
                *s = s.map(|_, c| c.substitute_value(Var::new(name), &v));
            }
        }
    }
    let name = model.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    print_table(&name, order, &table, format);
    Ok(())
}

/// Test hook: `MOBILE_ATLAS_PERTURB=1` adds one to the first series coefficient of
/// the oracle-series suite before comparing, so the suite must fail.
fn perturb(reports: &mut [TaskReport]) {
    if std::env::var("MOBILE_ATLAS_PERTURB").as_deref() != Ok("1") {
        return;
    }
    if let Some(r) = reports.first_mut() {
        let actual = AuxPoly::parse(&r.actual).expect("printed polynomial");
        let bumped = &actual + &AuxPoly::one();
        *r = TaskReport::new(r.name.clone(), &AuxPoly::parse(&r.expected).expect("printed polynomial"), &bumped);
    }
}

struct SuiteOutcome {
    name: &'static str,
    items: Vec<(String, bool)>,
    counterexample: Option<Value>,
}

fn suite_outcome(suite: Suite, max_edges: usize, order: usize, p: u8, exec: Exec) -> Result<SuiteOutcome> {
    Ok(match suite {
        Suite::Roundtrip => {
            let s = roundtrip_suite(max_edges, exec)?;
            SuiteOutcome {
                name: "roundtrip",
                items: vec![(format!("{} directed and {} pair blockings up to {max_edges} edges", s.directed, s.pairs), s.failures.is_empty())],
                counterexample: s.failures.first().map(|f| json!(f)),
            }
        }
        Suite::OracleSeries => {
            let mut reports = oracle_series_reports(exec)?;
            perturb(&mut reports);
            SuiteOutcome {
                name: "oracle-series",
                items: reports.iter().map(|r| (r.name.clone(), r.matched)).collect(),
                counterexample: reports.iter().find(|r| !r.matched).map(|r| json!(r)),
            }
        }
        Suite::Cancellation => {
            let s = exhaustive_cancellation(max_edges.min(3), p, exec)?;
            SuiteOutcome {
                name: "cancellation",
                items: vec![(format!("{} violating and {} satisfying configurations", s.violating_checked, s.satisfying_checked), s.failures.is_empty())],
                counterexample: s.failures.first().map(|f| json!(f)),
            }
        }
        Suite::Identities | Suite::Duality => {
            let reports = if suite == Suite::Identities { identity_reports(order) } else { duality_reports(order) };
            SuiteOutcome {
                name: if suite == Suite::Identities { "identities" } else { "duality" },
                items: reports.iter().map(|r| (r.name.clone(), r.holds)).collect(),
                counterexample: reports.iter().find(|r| !r.holds).map(|r| json!(r)),
            }
        }
        Suite::All => unreachable!("expanded by the caller"),
    })
}

fn run_check(suite: Suite, max_edges: usize, order: usize, p: u8, format: Format) -> Result<()> {
    let suites = match suite {
        Suite::All => vec![Suite::Roundtrip, Suite::OracleSeries, Suite::Cancellation, Suite::Identities, Suite::Duality],
        s => vec![s],
    };
    let exec = Exec::default();
    let mut outcomes = Vec::new();
    for s in suites {
        outcomes.push(suite_outcome(s, max_edges, order, p, exec)?);
    }
    let passed = outcomes.iter().all(|o| o.counterexample.is_none() && o.items.iter().all(|(_, ok)| *ok));
    match format {
        Format::Json => {
            let v: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "suite": o.name,
                        "items": o.items.iter().map(|(n, ok)| json!({"name": n, "pass": ok})).collect::<Vec<_>>(),
                        "counterexample": o.counterexample,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!({"pass": passed, "suites": v})).expect("json"));
        }
        Format::Pretty | Format::Csv => {
            for o in &outcomes {
                for (n, ok) in &o.items {
                    if format == Format::Csv {
                        println!("{},{},{}", o.name, output::csv_field(n), if *ok { "pass" } else { "fail" });
                    } else {
                        println!("{} {}: {}", if *ok { "PASS" } else { "FAIL" }, o.name, n);
                    }
                }
            }
        }
    }
    if passed {
        return Ok(());
    }
    let first = outcomes.iter().find_map(|o| o.counterexample.as_ref()).cloned().unwrap_or(Value::Null);
    Err(CliError::Failed(serde_json::to_string(&first).expect("json")))
}

fn run_singularity(y: f64, tol: f64, format: Format) -> Result<()> {
    if !y.is_finite() || y < 0.0 || !tol.is_finite() || tol <= 0.0 {
        return Err(invalid("need y >= 0 and a positive tolerance"));
    }
    let s = if y == 0.0 { spanning_tree_singularity() } else { forest_singularity(&real(y), tol)? };
    match format {
        Format::Pretty => println!("{s}"),
        _ => println!("{}", serde_json::to_string_pretty(&s.to_json()).expect("json")),
    }
    Ok(())
}

fn run_sample(model: Model, size: usize, seed: u64, y: &str, z1: &str, spec: Option<String>) -> Result<()> {
    let spec = match model {
        Model::Forest => ModelSpec::quadrangulation(AuxPoly::var("y")).with_mode(BlockMode::Pairs),
        Model::QuadOneWay => ModelSpec::quadrangulation(AuxPoly::var("y")),
        Model::HpTriangulation => ModelSpec::hp_triangulation(),
        Model::Ising => ModelSpec::ising(),
        Model::Generic => load_spec(spec.as_deref())?,
        _ => return Err(invalid("sampling supports generic, quad-one-way, forest, hp-triangulation and ising")),
    };
    if size == 0 {
        return Err(invalid("--size must be positive"));
    }
    let values = [("y".to_string(), parse_rational(y)?), ("z1".to_string(), parse_rational(z1)?)].into();
    let bundle = solve(&bind(spec, &values), size)?;
    let (mobile, config) = sample_mobile(&bundle, size, &values, seed).map_err(invalid)?;
    if !validate_blocking(&config).valid {
        return Err(CliError::Failed("sampled blocking is not valid".into()));
    }
    let name = model.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let out = json!({
        "model": name,
        "size": size,
        "seed": seed,
        "map": MapJson::from_config(&config),
        "mobile": MobileJson::from_mobile(&mobile),
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

/// Substitutes numeric values into every weight, so the series are solved over the
/// rationals rather than over polynomials in the parameters.
fn bind(mut spec: ModelSpec, values: &BTreeMap<String, BigRational>) -> ModelSpec {
    let sub = |p: &AuxPoly| values.iter().fold(p.clone(), |acc, (k, v)| acc.substitute_value(Var::new(k), v));
    for w in spec.white.values_mut().chain(spec.black.values_mut()) {
        *w = sub(w);
    }
    spec.y = sub(&spec.y);
    if let Some(pt) = spec.particles.as_mut() {
        for z in pt.z.iter_mut() {
            *z = sub(z);
        }
    }
    spec
}

fn run_convert(to: Target, input: Option<String>, mode: Mode) -> Result<()> {
    let text = read_input(input.as_deref())?;
    let out = match to {
        Target::Mobile => {
            let config = MapJson::parse(&text).map_err(invalid)?;
            let report = validate_blocking(&config);
            if !report.valid {
                return Err(invalid("blocked edges do not form a valid blocking"));
            }
            let mobile = to_mobile(&config).map_err(invalid)?;
            if let Some(v) = check_well_labeled(&mobile).violations.first() {
                return Err(CliError::Failed(format!("mobile is not well labeled: {v}")));
            }
            serde_json::to_string_pretty(&MobileJson::from_mobile(&mobile))
        }
        Target::Map => {
            let mobile = MobileJson::parse(&text).map_err(invalid)?;
            if let Some(v) = check_well_labeled(&mobile).violations.first() {
                return Err(invalid(format!("mobile is not well labeled: {v}")));
            }
            let mode = if mode == Mode::Pairs { BlockMode::Pairs } else { BlockMode::Directed };
            let config = from_mobile_with_mode(&mobile, mode).map_err(invalid)?;
            serde_json::to_string_pretty(&MapJson::from_config(&config))
        }
    };
    println!("{}", out.expect("json"));
    Ok(())
}
