mod cache;
mod error;
mod job;

use cache::{sha256_hex, ResultCache};
use clap::{Args, Parser, Subcommand};
use error::{CliError, Result};
use job::{build_system, parse_weight, Job, Target};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use superweight::lab::suites::{run_suite, SuiteOptions};
use superweight::mult::{
    load_table, tabulate, w_s_support, EvenRootData, LinkageProvider, MultiplicityProvider, SerganovaProvider,
    TableHeader, TableKind, WOptions,
};
use superweight::rootdata::{AlgebraDescriptor, AlgebraKind, Parabolic, Weight};
use superweight::weights::{
    is_gamma_injective, is_partially_finite, is_singular, is_typical, validate_normal_form, Witnesses,
};

#[derive(Parser)]
#[command(name = "superweight", version, about = "Characters of simple bounded weight modules")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Result cache directory (default: $SUPERWEIGHT_CACHE, else no cache).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Typicality, singularity and boundedness data of a weight.
    Classify(ClassifyArgs),
    /// Weight multiplicities of the simple bounded module of a spec file.
    Char(CharArgs),
    /// Coefficients c(λ, μ) on an order ideal.
    Coeffs(CoeffsArgs),
    /// The degree of the module of a spec file.
    Degree(SpecArg),
    /// Localization laboratory.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Multiplicity tables.
    #[command(subcommand)]
    Tables(TablesCommand),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Algebra descriptor as JSON, e.g. {"kind":"GL","m":2,"n":1}.
    #[arg(long)]
    algebra: String,
    /// Weight string "a,b|c,d".
    #[arg(long)]
    weight: String,
    #[arg(long, default_value = "standard")]
    basis: String,
    /// Parabolic functional, comma-separated (enables the boundedness fields).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    parabolic: Option<Vec<i64>>,
}

#[derive(Args)]
struct SpecArg {
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args)]
struct CharArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Weight string; repeat for several weights.
    #[arg(long, required = true, allow_hyphen_values = true)]
    weight: Vec<String>,
    /// Worker threads for several weights.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Depth of the order ideal below λ.
    #[arg(long)]
    order_ideal: i64,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Run one verification suite.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the suite's number of cases.
        #[arg(long)]
        cases: Option<usize>,
        /// Worker threads (0 = available parallelism).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

#[derive(Subcommand)]
enum TablesCommand {
    /// Validate a table file and store it in the cache.
    Import {
        #[arg(long)]
        file: PathBuf,
    },
    /// Tabulate a built-in provider on the closure of some weights.
    Export {
        #[arg(long)]
        algebra: String,
        /// linkage | serganova
        #[arg(long, default_value = "linkage")]
        provider: String,
        /// Seed weight; repeat for several.
        #[arg(long = "seed", required = true, allow_hyphen_values = true)]
        seeds: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        max_rows: usize,
    },
}

enum Output {
    Json(Value),
    /// Text already rendered (cache hits, tables).
    Raw(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let err = CliError::Usage(e.kind().to_string());
            println!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(&cli).and_then(|o| emit(cli.out.as_deref(), o)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(out: Option<&Path>, o: Output) -> Result<()> {
    let mut s = match o {
        Output::Json(v) => serde_json::to_string(&v).expect("values serialize"),
        Output::Raw(s) => s,
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    match out {
        Some(p) => std::fs::write(p, s).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let cache = || ResultCache::resolve(cli.cache.as_deref()).map_err(CliError::from);
    match &cli.command {
        Command::Classify(a) => classify(a).map(Output::Json),
        Command::Char(a) => cached(&cache()?, "char", a.spec.as_path(), json!(a.weight), |job| char_cmd(job, a)),
        Command::Coeffs(a) => cached(&cache()?, "coeffs", &a.spec, json!(a.order_ideal), |job| coeffs(job, a.order_ideal)),
        Command::Degree(a) => cached(&cache()?, "degree", &a.spec, Value::Null, degree),
        Command::Lab(LabCommand::Run { suite, depth, seed, cases, workers }) => {
            let opts = SuiteOptions { depth: *depth, seed: *seed, cases: *cases, workers: *workers };
            let report = run_suite(suite, &opts)?;
            Ok(Output::Json(serde_json::to_value(report).expect("report serializes")))
        }
        Command::Tables(TablesCommand::Import { file }) => import(&cache()?, file).map(Output::Json),
        Command::Tables(TablesCommand::Export { algebra, provider, seeds, max_rows }) => {
            export(algebra, provider, seeds, *max_rows).map(Output::Raw)
        }
    }
}

/// Run a spec-file command through the result cache.
fn cached(
    cache: &Option<ResultCache>,
    cmd: &str,
    spec: &Path,
    query: Value,
    f: impl FnOnce(&Job) -> Result<(Value, String)>,
) -> Result<Output> {
    let job = Job::load(spec)?;
    let key = ResultCache::key(&json!({"command": cmd, "module": job.describe(), "query": query}));
    let fingerprint = fingerprint_of(&job)?;
    if let Some(c) = cache {
        if let Some(hit) = c.get(&key, &fingerprint) {
            return Ok(Output::Raw(hit));
        }
    }
    let (value, _) = f(&job)?;
    let text = serde_json::to_string(&value).expect("values serialize");
    if let Some(c) = cache {
        c.put(&key, &fingerprint, &text)?;
    }
    Ok(Output::Raw(text))
}

fn fingerprint_of(job: &Job) -> Result<String> {
    match job.target {
        Target::Bounded(_) => Ok(job.providers()?.fingerprint),
        Target::W { .. } => Ok(job.w_character()?.1),
    }
}

fn classify(a: &ClassifyArgs) -> Result<Value> {
    if a.basis != "standard" {
        return Err(CliError::Usage(format!("unsupported basis {:?}", a.basis)));
    }
    let desc: AlgebraDescriptor =
        serde_json::from_str(&a.algebra).map_err(|e| CliError::Spec(format!("--algebra: {e}")))?;
    let sys = build_system(&desc)?;
    let basis = sys.standard_basis();
    let mu = parse_weight(&sys, &a.weight)?;
    let t = is_typical(&mu, &basis);
    let mut out = serde_json::Map::new();
    out.insert("typical".into(), json!(t.typical));
    let witnesses = match &t.witnesses {
        Witnesses::Roots(r) => json!(r.iter().map(Weight::to_string).collect::<Vec<_>>()),
        Witnesses::Pairs(p) => json!(p),
        Witnesses::Indices(ix) => {
            json!(ix.iter().map(|(i, x)| json!({"i": i, "a": superweight::rational::fmt_q(x)})).collect::<Vec<_>>())
        }
    };
    out.insert("atypical_witnesses".into(), witnesses);
    if let Witnesses::Indices(ix) = &t.witnesses {
        // ε_i + … + ε_n readings resolve to the largest index
        out.insert("witness_i".into(), json!(ix.iter().map(|(i, _)| *i).max()));
    }
    out.insert("singular".into(), json!(is_singular(&mu, &basis)));
    let (pf, gi, nf) = match &a.parabolic {
        Some(l) => {
            let par = Parabolic::build(sys.clone(), l).map_err(|e| CliError::Spec(e.to_string()))?;
            let gi = match is_gamma_injective(&mu, &par) {
                Ok(b) => json!(b),
                Err(_) => Value::Null,
            };
            let nf = par.project(&mu).iter().all(validate_normal_form);
            (json!(is_partially_finite(&mu, &par)), gi, json!(nf))
        }
        None => (Value::Null, Value::Null, Value::Null),
    };
    out.insert("partially_finite".into(), pf);
    out.insert("gamma_injective".into(), gi);
    out.insert("normal_form_valid".into(), nf);
    Ok(Value::Object(out))
}

fn char_cmd(job: &Job, a: &CharArgs) -> Result<(Value, String)> {
    let weights: Vec<Weight> = a.weight.iter().map(|w| parse_weight(&job.sys, w)).collect::<Result<_>>()?;
    enum Engine {
        Bounded(superweight::charformula::SimpleCharacter),
        W(superweight::charformula::WSimpleCharacter),
    }
    let (engine, fp) = match job.target {
        Target::Bounded(_) => {
            let (c, fp) = job.simple_character()?;
            (Engine::Bounded(c), fp)
        }
        Target::W { .. } => {
            let (c, fp) = job.w_character()?;
            (Engine::W(c), fp)
        }
    };
    let engine = Arc::new(engine);
    let eval = |w: &Weight| -> Result<Value> {
        match &*engine {
            Engine::Bounded(c) => Ok(serde_json::to_value(c.simple_multiplicity(w)?).expect("serializes")),
            Engine::W(c) => {
                let terms: Vec<Value> =
                    c.terms().iter().map(|(mu, s)| json!({"mu": mu.to_string(), "c": s})).collect();
                Ok(json!({"multiplicity": c.multiplicity(w)?, "terms": terms}))
            }
        }
    };
    let results = parallel_map(&weights, a.workers.max(1), eval)?;
    if results.len() == 1 {
        return Ok((results.into_iter().next().unwrap(), fp));
    }
    let list: Vec<Value> = weights
        .iter()
        .zip(results)
        .map(|(w, mut r)| {
            r.as_object_mut().expect("object").insert("weight".into(), json!(w.to_string()));
            r
        })
        .collect();
    Ok((json!(list), fp))
}

/// Order-preserving map over a fixed pool of scoped threads; the first
/// error in input order wins.
fn parallel_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    let chunk = items.len().div_ceil(workers).max(1);
    let parts: Vec<Vec<Result<R>>> = std::thread::scope(|s| {
        let handles: Vec<_> =
            items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    parts.into_iter().flatten().collect()
}

fn coeffs(job: &Job, depth: i64) -> Result<(Value, String)> {
    if depth < 0 {
        return Err(CliError::Usage(format!("--order-ideal {depth} is negative")));
    }
    let (rows, fp): (Vec<(Weight, i64)>, String) = match job.target {
        Target::Bounded(_) => {
            let (c, fp) = job.simple_character()?;
            (c.coefficient_table(depth)?, fp)
        }
        Target::W { ref lambda } => {
            let (_, fp) = job.w_character()?;
            (w_s_support(lambda, &job.sys.standard_basis(), depth, &WOptions::default())?, fp)
        }
    };
    let table: Vec<Value> = rows.iter().map(|(mu, c)| json!({"mu": mu.to_string(), "c": c})).collect();
    Ok((json!({"lambda": job.lambda().to_string(), "order_ideal": depth, "coefficients": table}), fp))
}

fn degree(job: &Job) -> Result<(Value, String)> {
    let Target::Bounded(spec) = &job.target else {
        return Err(CliError::Domain {
            code: "unsupported".into(),
            message: "degree is defined for parabolic specs only".into(),
            needed: Vec::new(),
        });
    };
    let (d, blocks) = superweight::charformula::degree_of_spec(spec)?;
    let values: Vec<u64> = blocks.iter().map(|b| b.value).collect();
    let fp = job.providers().map(|p| p.fingerprint).unwrap_or_default();
    Ok((json!({"d_blocks": values, "branches": blocks, "degree": d}), fp))
}

fn import(cache: &Option<ResultCache>, file: &Path) -> Result<Value> {
    let bytes = std::fs::read(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    let table = load_table(file)?;
    let fp = sha256_hex(&bytes);
    let stored = match cache {
        Some(c) => Some(c.put_file("tables", &format!("{fp}.jsonl"), &bytes)?.display().to_string()),
        None => None,
    };
    Ok(json!({
        "algebra": table.header().algebra,
        "kind": table.header().kind,
        "entries": table.len(),
        "fingerprint": format!("table:{fp}"),
        "stored": stored,
    }))
}

fn export(algebra: &str, provider: &str, seeds: &[String], max_rows: usize) -> Result<String> {
    let desc: AlgebraDescriptor =
        serde_json::from_str(algebra).map_err(|e| CliError::Spec(format!("--algebra: {e}")))?;
    let sys = build_system(&desc)?;
    let basis = sys.standard_basis();
    let p: Box<dyn MultiplicityProvider> = match provider {
        "linkage" => Box::new(LinkageProvider::new(EvenRootData::even_part(&basis))),
        "serganova" => Box::new(SerganovaProvider::new(basis)?),
        other => return Err(CliError::Usage(format!("unknown provider {other:?}"))),
    };
    if desc.kind == AlgebraKind::W {
        return Err(CliError::Usage("W(n) multiplicities are not tabulated".into()));
    }
    let seeds: Vec<Weight> = seeds.iter().map(|s| parse_weight(&sys, s)).collect::<Result<_>>()?;
    let header = TableHeader { algebra: desc, basis: "standard".into(), kind: TableKind::A };
    let table = tabulate(p.as_ref(), header, &seeds, max_rows)?;
    let mut buf = Vec::new();
    table.to_writer(&mut buf)?;
    Ok(String::from_utf8(buf).expect("tables are UTF-8"))
}
