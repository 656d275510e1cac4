//! Command dispatch for the `findim` binary.

use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use findim::corpus;
use findim::decompose::decompose;
use findim::expr::{module_from_str, ExprContext};
use findim::igusa_todorov::{Engine, PdResult, DEFAULT_MAX_DEPTH};
use findim::module::{direct_sum, Module};
use findim::strat::{
    self, build_epss, filtration_search, finitistic_bound, standard_modules, support_data, verify_stratifying_system,
    Assumptions, BoundCase, Epss, FiltrationCertificate, Membership, StratSystem, Verdict, DEFAULT_ITER_CAP,
    DEFAULT_TRIES,
};
use findim::text::parse_algebra_file;
use findim::{Error, PathAlgebra};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Assume {
    #[value(name = "3-finitistic")]
    ThreeFinitistic,
    #[value(name = "3-cardinal")]
    ThreeCardinal,
}

#[derive(Debug, Parser)]
#[command(name = "findim", version, about = "Homological invariants of bound quiver algebras over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Module expression, e.g. "omega^1(D(2)) + S(1)".
    #[arg(long, global = true)]
    pub module: Option<String>,
    /// `standard` or `;`-separated module expressions.
    #[arg(long, global = true, default_value = "standard")]
    pub system: String,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEPTH)]
    pub depth: usize,
    /// Overrides FINDIM_PRIME and the file's field line.
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub assume: Vec<Assume>,
    /// Random samples drawn by `three-props`.
    #[arg(long, global = true, default_value_t = 8)]
    pub samples: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Parse and build the algebra; validate `--module` if given.
    Check { algebra: String },
    /// Indecomposable projectives and their radicals.
    Projectives { algebra: String },
    /// Standard modules and the stratifying-system report.
    Standard { algebra: String },
    /// Projective dimension of `--module`.
    Pd { algebra: String },
    /// Φ of `--module` with the rank trace.
    Phi { algebra: String },
    /// Ψ of `--module`.
    Psi { algebra: String },
    /// Krull-Schmidt decomposition of `--module`.
    Decompose { algebra: String },
    /// Verify `--system` and test whether the algebra is standardly stratified.
    SsCheck { algebra: String },
    /// Ext-projective system of `--system`.
    Epss { algebra: String },
    /// Filtration of `--module` by `--system`.
    Filtration { algebra: String },
    /// Bound on the finitistic dimension of F(θ).
    Bound { algebra: String },
    /// Bound for algebras with rad³ = 0.
    RadcubeBound { algebra: String },
    /// Sample-based check of the 3-properties.
    ThreeProps { algebra: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Projectives { .. } => "projectives",
            Command::Standard { .. } => "standard",
            Command::Pd { .. } => "pd",
            Command::Phi { .. } => "phi",
            Command::Psi { .. } => "psi",
            Command::Decompose { .. } => "decompose",
            Command::SsCheck { .. } => "ss-check",
            Command::Epss { .. } => "epss",
            Command::Filtration { .. } => "filtration",
            Command::Bound { .. } => "bound",
            Command::RadcubeBound { .. } => "radcube-bound",
            Command::ThreeProps { .. } => "three-props",
        }
    }

    fn algebra(&self) -> &str {
        match self {
            Command::Check { algebra }
            | Command::Projectives { algebra }
            | Command::Standard { algebra }
            | Command::Pd { algebra }
            | Command::Phi { algebra }
            | Command::Psi { algebra }
            | Command::Decompose { algebra }
            | Command::SsCheck { algebra }
            | Command::Epss { algebra }
            | Command::Filtration { algebra }
            | Command::Bound { algebra }
            | Command::RadcubeBound { algebra }
            | Command::ThreeProps { algebra } => algebra,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure inside a command: a core error or an I/O problem with the input.
enum Failure {
    Core(Error),
    Input { code: &'static str, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = std::result::Result<(Value, bool), Failure>;

/// Runs one command line (without the program name) and returns exit code and output.
pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("findim")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_DECIDED };
            let text = e.render().to_string();
            return if code == EXIT_DECIDED {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let source = cli.command.algebra().to_string();
    let (status, code, result, error) = match execute(cli) {
        Ok((value, decided)) => {
            if decided {
                ("decided", EXIT_DECIDED, value, Value::Null)
            } else {
                ("inconclusive", EXIT_INCONCLUSIVE, value, Value::Null)
            }
        }
        Err(Failure::Core(e)) => {
            let (status, code) = if e.is_inconclusive() {
                ("inconclusive", EXIT_INCONCLUSIVE)
            } else if e.is_cap_exceeded() {
                ("cap_exceeded", EXIT_CAP)
            } else {
                ("error", EXIT_INPUT)
            };
            (status, code, Value::Null, json!({ "code": e.code(), "message": e.to_string() }))
        }
        Err(Failure::Input { code, message }) => {
            ("error", EXIT_INPUT, Value::Null, json!({ "code": code, "message": message }))
        }
    };
    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "algebra": source,
        "status": status,
        "result": result,
        "error": error,
    });
    let stdout = match cli.opts.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Text => render_text(&report),
    };
    let stderr = match &report["error"] {
        Value::Null => String::new(),
        e => format!("error[{}]: {}\n", e["code"].as_str().unwrap_or(""), e["message"].as_str().unwrap_or("")),
    };
    Outcome { code, stdout, stderr }
}

/// `--prime`, then `FINDIM_PRIME`, then the file's field line.
fn resolve_prime(opts: &Options) -> std::result::Result<Option<u32>, Failure> {
    if let Some(p) = opts.prime {
        return Ok(Some(p));
    }
    match std::env::var("FINDIM_PRIME") {
        Ok(s) => s.trim().parse::<u32>().map(Some).map_err(|_| Failure::Input {
            code: "bad_environment",
            message: format!("FINDIM_PRIME=`{s}` is not an integer"),
        }),
        Err(_) => Ok(None),
    }
}

fn load_algebra(source: &str, opts: &Options) -> std::result::Result<Arc<PathAlgebra>, Failure> {
    let prime = resolve_prime(opts)?;
    let text = if corpus::NAMES.contains(&source) {
        corpus::algebra_text(source)?.to_string()
    } else {
        std::fs::read_to_string(source).map_err(|e| Failure::Input {
            code: "io_error",
            message: format!("cannot read `{source}`: {e}"),
        })?
    };
    let spec = parse_algebra_file(&text)?;
    Ok(spec.build(prime, findim::algebra::DEFAULT_DEPTH_CAP)?)
}

fn require_module(opts: &Options, ctx: &ExprContext<'_>) -> std::result::Result<Module, Failure> {
    let text = opts.module.as_deref().ok_or_else(|| Failure::Input {
        code: "missing_module",
        message: "this command needs --module".into(),
    })?;
    Ok(module_from_str(text, ctx)?)
}

fn load_system(alg: &Arc<PathAlgebra>, opts: &Options) -> std::result::Result<StratSystem, Failure> {
    let theta = if opts.system.trim() == "standard" {
        standard_modules(alg)
    } else {
        let ctx = ExprContext::new(alg);
        opts.system
            .split(';')
            .map(|e| module_from_str(e, &ctx))
            .collect::<findim::Result<Vec<_>>>()?
    };
    Ok(verify_stratifying_system(theta)?)
}

fn dims(m: &Module) -> Value {
    json!(m.dims())
}

/// Cycle witnesses are shown by the dimension vectors of their classes.
fn pd_json(pd: &PdResult, engine: &Engine) -> Value {
    match pd {
        PdResult::Finite { value } => json!({ "status": "finite", "value": value, "cycle": null, "depth": null }),
        PdResult::Infinite { cycle } => {
            let dims: Vec<Value> = cycle.iter().map(|&c| dims(&engine.registry().get(c).witness)).collect();
            json!({ "status": "infinite", "value": null, "cycle": dims, "depth": null })
        }
        PdResult::Unknown { depth } => json!({ "status": "unknown", "value": null, "cycle": null, "depth": depth }),
    }
}

fn certificate_json(cert: &FiltrationCertificate, t: usize) -> Value {
    let sd = support_data(cert, t);
    let layers: Vec<Value> = cert
        .layers
        .iter()
        .map(|l| json!({ "index": l.index + 1, "multiplicity": l.multiplicity, "dims": dims(&l.module) }))
        .collect();
    json!({
        "multiplicities": sd.multiplicities,
        "support": sd.support,
        "min": sd.min,
        "max": sd.max,
        "layers": layers,
        "verified": true,
    })
}

fn membership_json(m: &Membership, sys: &StratSystem) -> (Value, bool) {
    match m {
        Membership::Member(c) => {
            let mut v = certificate_json(c, sys.size());
            v["verified"] = json!(c.verify(&sys.theta));
            v["verdict"] = json!("member");
            v["reason"] = Value::Null;
            (v, true)
        }
        Membership::NonMember(r) | Membership::Unknown(r) => (
            json!({
                "verdict": m.verdict(),
                "reason": r,
                "multiplicities": null,
                "support": null,
                "min": null,
                "max": null,
                "layers": null,
                "verified": null,
            }),
            matches!(m, Membership::NonMember(_)),
        ),
    }
}

fn epss_json(e: &Epss) -> Value {
    let q: Vec<Value> = e
        .q
        .iter()
        .enumerate()
        .map(|(i, q)| {
            json!({
                "index": i + 1,
                "dims": dims(q),
                "kernel_dims": dims(&e.kernels[i]),
                "kernel_support": support_data(&e.certificates[i], e.q.len()).support,
                "passes": e.passes[i],
            })
        })
        .collect();
    json!({ "q": q, "q_sum_dims": dims(&e.q_sum()) })
}

fn assumptions(opts: &Options) -> Assumptions {
    Assumptions {
        three_finitistic: opts.assume.contains(&Assume::ThreeFinitistic),
        three_cardinal: opts.assume.contains(&Assume::ThreeCardinal),
    }
}

fn execute(cli: &Cli) -> CmdResult {
    let opts = &cli.opts;
    let alg = load_algebra(cli.command.algebra(), opts)?;
    let mut engine = Engine::new(&alg, opts.depth);
    let ctx = ExprContext::new(&alg);
    match &cli.command {
        Command::Check { .. } => {
            let module = match &opts.module {
                Some(_) => {
                    let m = require_module(opts, &ctx)?;
                    json!({ "dims": dims(&m), "valid": m.validate().is_ok() })
                }
                None => Value::Null,
            };
            Ok((
                json!({
                    "prime": alg.prime(),
                    "vertices": alg.vertex_count(),
                    "arrows": alg.arrow_count(),
                    "relations": alg.relations().len(),
                    "dimension": alg.dim(),
                    "nilpotency_degree": alg.nilpotency_degree(),
                    "module": module,
                }),
                true,
            ))
        }
        Command::Projectives { .. } => {
            let list: Vec<Value> = (0..alg.vertex_count())
                .map(|v| {
                    let p = Module::projective(&alg, v)?;
                    Ok(json!({
                        "vertex": v + 1,
                        "dims": dims(&p),
                        "radical_dims": dims(&p.radical().module),
                        "pd": 0,
                    }))
                })
                .collect::<findim::Result<_>>()?;
            Ok((json!({ "projectives": list }), true))
        }
        Command::Standard { .. } => {
            let sys = verify_stratifying_system(standard_modules(&alg))?;
            let list: Vec<Value> = sys
                .theta
                .iter()
                .enumerate()
                .map(|(i, d)| json!({ "index": i + 1, "dims": dims(d), "projective": d.is_projective() }))
                .collect();
            Ok((json!({ "standard": list, "report": sys.report }), true))
        }
        Command::Pd { .. } => {
            let m = require_module(opts, &ctx)?;
            let pd = engine.pd(&m)?;
            Ok((json!({ "dims": dims(&m), "pd": pd_json(&pd, &engine) }), !pd.is_unknown()))
        }
        Command::Phi { .. } => {
            let m = require_module(opts, &ctx)?;
            let phi = engine.phi(&m)?;
            let decided = phi.value.is_some();
            Ok((json!({ "dims": dims(&m), "phi": phi.value, "rank_trace": phi.rank_trace, "orbit_closed_at": phi.orbit_closed_at, "orbit_size": phi.orbit.len() }), decided))
        }
        Command::Psi { .. } => {
            let m = require_module(opts, &ctx)?;
            let psi = engine.psi(&m)?;
            Ok((json!({ "dims": dims(&m), "phi": psi.phi, "psi": psi.psi, "rank_trace": psi.rank_trace, "c_m_size": psi.c_m.len(), "pfd_c_m": psi.pfd_c_m }), true))
        }
        Command::Decompose { .. } => {
            let m = require_module(opts, &ctx)?;
            let d = decompose(&m)?;
            let summands: Vec<Value> = d
                .summands
                .iter()
                .map(|s| {
                    json!({
                        "dims": dims(&s.witness),
                        "multiplicity": s.multiplicity,
                        "projective_vertex": s.projective_vertex.map(|v| v + 1),
                    })
                })
                .collect();
            Ok((
                json!({
                    "dims": dims(&m),
                    "indecomposable_count": d.indecomposable_count(),
                    "summands": summands,
                    "verified": d.verify(),
                }),
                true,
            ))
        }
        Command::SsCheck { .. } => {
            let sys = load_system(&alg, opts)?;
            let (verdict, per) = strat::is_standardly_stratified(&alg, DEFAULT_TRIES)?;
            let per: Vec<Value> = per.iter().map(|m| json!(m.verdict())).collect();
            let theta: Vec<Value> = sys.theta.iter().map(dims).collect();
            Ok((
                json!({
                    "system": theta,
                    "report": sys.report,
                    "standardly_stratified": verdict,
                    "projectives": per,
                }),
                verdict != strat::AlgebraVerdict::Unknown,
            ))
        }
        Command::Epss { .. } => {
            let sys = load_system(&alg, opts)?;
            let epss = build_epss(&sys, DEFAULT_ITER_CAP, DEFAULT_TRIES)?;
            Ok((epss_json(&epss), true))
        }
        Command::Filtration { .. } => {
            let sys = load_system(&alg, opts)?;
            let ctx = ExprContext { algebra: &alg, system: Some(&sys), epss: None };
            let m = require_module(opts, &ctx)?;
            let r = filtration_search(&m, &sys, DEFAULT_TRIES)?;
            let (mut v, decided) = membership_json(&r, &sys);
            v["dims"] = dims(&m);
            Ok((v, decided))
        }
        Command::Bound { .. } => {
            let sys = load_system(&alg, opts)?;
            let inf = strat::infinite_part(&sys, &mut engine)?;
            let epss = if inf.infinity_set.len() >= 2 {
                Some(build_epss(&sys, DEFAULT_ITER_CAP, DEFAULT_TRIES)?)
            } else {
                None
            };
            let r = finitistic_bound(&sys, epss.as_ref(), &mut engine, assumptions(opts))?;
            let decided = r.case != BoundCase::Unsupported;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["pds"] = json!(inf.pds.iter().map(|p| pd_json(p, &engine)).collect::<Vec<_>>());
            v["epss"] = epss.as_ref().map(epss_json).unwrap_or(Value::Null);
            Ok((v, decided))
        }
        Command::RadcubeBound { .. } => {
            let r = engine.radcube_pfd_bound()?;
            Ok((serde_json::to_value(&r).expect("serializable"), true))
        }
        Command::ThreeProps { .. } => {
            let sys = load_system(&alg, opts)?;
            let epss = build_epss(&sys, DEFAULT_ITER_CAP, DEFAULT_TRIES)?;
            let samples = three_prop_samples(&sys, &epss, opts)?;
            let r = strat::check_three_properties(&sys, &epss, &samples, &mut engine, DEFAULT_TRIES)?;
            let decided = r
                .samples
                .iter()
                .all(|s| s.three_finitistic != Verdict::Unknown && s.three_cardinal != Verdict::Unknown);
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["sample_count"] = json!(samples.len());
            Ok((v, decided))
        }
    }
}

/// θ(i), Q(i), `--module` if given, and seeded random sums of those.
fn three_prop_samples(
    sys: &StratSystem,
    epss: &Epss,
    opts: &Options,
) -> std::result::Result<Vec<(Module, FiltrationCertificate)>, Failure> {
    let alg = sys.algebra().clone();
    let mut pool: Vec<Module> = sys.theta.iter().chain(epss.q.iter()).cloned().collect();
    let mut candidates = pool.clone();
    if opts.module.is_some() {
        let ctx = ExprContext { algebra: &alg, system: Some(sys), epss: Some(epss) };
        candidates.push(require_module(opts, &ctx)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    pool.sort_by_key(|m| m.dim());
    for _ in 0..opts.samples {
        let k = rng.gen_range(2..=3);
        let parts: Vec<Module> = pool.choose_multiple(&mut rng, k).cloned().collect();
        candidates.push(direct_sum(&alg, &parts));
    }
    let mut out = Vec::new();
    for m in candidates {
        if let Membership::Member(c) = filtration_search(&m, sys, DEFAULT_TRIES)? {
            out.push((m, c));
        }
    }
    Ok(out)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(map) => render_map(out, map, indent + 1),
        Value::Array(items) => {
            for (k, item) in items.iter().enumerate() {
                render_into(out, &format!("[{}]", k + 1), item, indent + 1);
            }
        }
        _ => unreachable!(),
    }
}

fn render_map(out: &mut String, map: &Map<String, Value>, indent: usize) {
    for (k, v) in map {
        render_into(out, k, v, indent);
    }
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} {}: {}\n",
        report["command"].as_str().unwrap_or(""),
        report["algebra"].as_str().unwrap_or(""),
        report["status"].as_str().unwrap_or("")
    ));
    if let Value::Object(map) = &report["result"] {
        render_map(&mut out, map, 1);
    }
    if let Value::Object(map) = &report["error"] {
        render_map(&mut out, map, 1);
    }
    out
}
