use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ekrforge_core::bounds::{
    hilton_corollary_oracle, hilton_lemma_exhaustive, hilton_lemma_random, sum_bound_oracle,
    trace_bounds_certificate, verify_identity_suite, Certificate, SuiteId, SweepRange,
};
use ekrforge_core::constructions::{build_g, build_k34, build_r, build_s, lex_family};
use ekrforge_core::covers::{covers, saturate, tau};
use ekrforge_core::family::{trace, Alpha, AlphaUndefined, Set, UniformFamily};
use ekrforge_core::gen::saturated_sample;
use ekrforge_core::io::{read_family, to_text};
use ekrforge_core::par::with_threads;
use ekrforge_core::search::{
    canonical_form, enumerate_optima, max_intersecting, max_intersecting_degcap, oracle_certificate, Budget,
    SearchOptions, Strategy,
};
use ekrforge_core::structure::{classify_t3, Classification};
use ekrforge_core::{Error, Exec};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ekrforge", version, about = "Intersecting k-uniform families with covering-number constraints")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "EKRFORGE_THREADS", global = true)]
    threads: Option<usize>,
    /// Seed for randomized suites; recorded in every certificate.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Zero wall-clock fields and drop node counts so output is byte-stable.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Run single-threaded regardless of --threads.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
    JsonArray,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    /// The three-cover family G(n,k).
    G,
    /// The 3-graph S on [6].
    S,
    /// The 3-graph R on [5].
    R,
    /// All triples of [4].
    K34,
    /// The full star at 1.
    Star,
    /// All k-subsets.
    Complete,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Seeded,
    Kset,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named family and write it in the family text format.
    Construct {
        #[arg(value_enum)]
        kind: Construction,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Covering number of a family file.
    Tau { file: PathBuf },
    /// Covers of a given size (all sizes up to k by default).
    Covers {
        file: PathBuf,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Extend a family to a saturated intersecting family (colex greedy).
    Saturate { file: PathBuf },
    /// Trace table of a family on a window.
    Trace {
        file: PathBuf,
        /// Comma-separated window elements, e.g. 1,2,3,4,5.
        #[arg(long, value_delimiter = ',', required = true)]
        window: Vec<usize>,
    },
    /// Structure of the 3-covers.
    Classify { file: PathBuf },
    /// Run certificate suites.
    Verify(VerifyArgs),
    /// Exact maximum intersecting family search.
    Oracle(OracleArgs),
    /// The first m k-subsets of [n] in lexicographic order.
    Lex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite ids (repeatable); `all` runs every identity suite. Besides the
    /// identity suites: ORACLE-SUM, ORACLE-HILTON-COR, ORACLE-HILTON-LEX,
    /// TRACE-BOUNDS.
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Ground set size for oracle and trace suites.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Uniformity for TRACE-BOUNDS.
    #[arg(long)]
    k: Option<usize>,
    /// Families sampled by TRACE-BOUNDS.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Random trials for ORACLE-HILTON-LEX; exhaustive when absent.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Minimum covering number.
    #[arg(long, default_value_t = 1, conflicts_with = "l")]
    r: usize,
    /// Run the degree-capped variant with this parameter instead.
    #[arg(long)]
    l: Option<usize>,
    /// Time budget, e.g. 600s or 10m.
    #[arg(long, default_value = "600s", value_parser = parse_budget)]
    budget: Duration,
    #[arg(long, value_enum, default_value_t = StrategyArg::Seeded)]
    strategy: StrategyArg,
    /// Also list all optima up to isomorphism.
    #[arg(long)]
    enumerate: bool,
    /// Expected value; the certificate fails if the search disagrees.
    #[arg(long)]
    expect: Option<usize>,
}

fn parse_budget(s: &str) -> Result<Duration, String> {
    let d = match s.parse::<u64>() {
        Ok(secs) => Duration::from_secs(secs),
        Err(_) => humantime::parse_duration(s).map_err(|e| e.to_string())?,
    };
    if d.is_zero() {
        return Err("budget must be positive".into());
    }
    Ok(d)
}

/// What a command produced: human text, machine records, and whether any
/// certificate failed.
struct Output {
    text: String,
    records: Vec<Value>,
    failed: bool,
}

impl Output {
    fn plain(text: String, record: Value) -> Output {
        Output { text, records: vec![record], failed: false }
    }

    fn certificates(certs: Vec<Certificate>) -> Output {
        let failed = certs.iter().any(|c| !c.passed());
        let text = certs
            .iter()
            .map(|c| {
                let mut line = format!("{} {}: {}", c.id, if c.passed() { "PASS" } else { "FAIL" }, c.statement);
                for w in &c.witnesses {
                    line.push_str(&format!("\n  witness {w}"));
                }
                line + "\n"
            })
            .collect();
        let records = certs.iter().map(|c| serde_json::to_value(c).expect("certificates serialize")).collect();
        Output { text, records, failed }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::JsonLines => self.records.iter().map(|r| r.to_string() + "\n").collect(),
            Format::JsonArray => serde_json::to_string_pretty(&self.records).expect("json values serialize") + "\n",
        }
    }
}

fn family_record(f: &UniformFamily) -> Value {
    let members: Vec<Vec<usize>> = f.sets().map(|s| s.elems().collect()).collect();
    json!({"n": f.n(), "k": f.k(), "size": f.len(), "members": members})
}

fn elems(s: Set) -> Vec<usize> {
    s.elems().collect()
}

fn family_output(f: &UniformFamily) -> Output {
    Output::plain(to_text(f), family_record(f))
}

fn construct(kind: Construction, n: usize, k: Option<usize>) -> Result<UniformFamily, Error> {
    let need_k = || k.ok_or_else(|| Error::Precondition("--k is required for this construction".into()));
    let three = || match k {
        Some(k) if k != 3 => Err(Error::Precondition(format!("this construction is 3-uniform, got --k {k}"))),
        _ => Ok(()),
    };
    match kind {
        Construction::G => build_g(n, need_k()?),
        Construction::S => three().and_then(|_| build_s(n)),
        Construction::R => three().and_then(|_| build_r(n)),
        Construction::K34 => three().and_then(|_| build_k34(n)),
        Construction::Star => UniformFamily::full_star(n, need_k()?, 1),
        Construction::Complete => UniformFamily::complete(n, need_k()?),
    }
}

fn classification_record(c: &Classification) -> Value {
    match c {
        Classification::Empty => json!({"tag": "empty"}),
        Classification::Star { apex } => json!({"tag": "star", "apex": apex}),
        Classification::K34 { vertices } => json!({"tag": "k34", "vertices": elems(*vertices)}),
        Classification::ContainsS { witness } => {
            json!({"tag": "contains-s", "witness": witness.iter().map(|s| elems(*s)).collect::<Vec<_>>()})
        }
        Classification::ContainsR { witness } => {
            json!({"tag": "contains-r", "witness": witness.iter().map(|s| elems(*s)).collect::<Vec<_>>()})
        }
        Classification::Unclassified => json!({"tag": "unclassified"}),
    }
}

fn verify(args: &VerifyArgs, g: &Global, exec: Exec) -> Result<Output, Error> {
    let range = SweepRange { k_min: args.k_min, k_max: args.k_max, n_max: args.n_max };
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::Precondition(format!("--{name} is required for this suite")))
    };
    let mut ids: Vec<String> = Vec::new();
    for s in &args.suites {
        if s.eq_ignore_ascii_case("all") {
            ids.extend(SuiteId::ALL.iter().map(|id| id.as_str().to_string()));
        } else {
            ids.push(s.to_ascii_uppercase());
        }
    }
    let mut certs = Vec::new();
    for id in ids {
        let cert = match id.as_str() {
            "ORACLE-SUM" => sum_bound_oracle(need(args.n, "n")?, need(args.a, "a")?, need(args.b, "b")?, exec)?.1,
            "ORACLE-HILTON-COR" => {
                hilton_corollary_oracle(need(args.n, "n")?, need(args.a, "a")?, need(args.b, "b")?, exec)?.1
            }
            "ORACLE-HILTON-LEX" => {
                let (n, a, b) = (need(args.n, "n")?, need(args.a, "a")?, need(args.b, "b")?);
                match args.trials {
                    Some(t) => hilton_lemma_random(n, a, b, t, g.seed)?,
                    None => hilton_lemma_exhaustive(n, a, b, exec)?,
                }
            }
            "TRACE-BOUNDS" => {
                let (n, k) = (need(args.n, "n")?, need(args.k, "k")?);
                let fams = saturated_sample(n, k, 3..=k, args.samples, g.seed)?;
                trace_bounds_certificate(&fams, exec)?
            }
            other => verify_identity_suite(other.parse()?, &range, exec)?,
        };
        certs.push(finish(cert.with_param("seed", json!(g.seed)), g));
    }
    Ok(Output::certificates(certs))
}

fn finish(c: Certificate, g: &Global) -> Certificate {
    if !g.reproducible {
        return c;
    }
    let mut c = c.without_timing();
    if let Value::Object(m) = &mut c.params {
        m.remove("nodes");
    }
    c
}

fn oracle(args: &OracleArgs, g: &Global, exec: Exec) -> Result<Output, Error> {
    let opts = SearchOptions {
        budget: Budget::time(args.budget),
        strategy: match args.strategy {
            StrategyArg::Seeded => Strategy::Seeded,
            StrategyArg::Kset => Strategy::KSet,
        },
        exec,
    };
    let (res, r) = match args.l {
        Some(l) => (max_intersecting_degcap(args.n, args.k, l, &opts)?, 1),
        None => (max_intersecting(args.n, args.k, args.r, &opts)?, args.r),
    };
    let mut cert = oracle_certificate(args.n, args.k, r, &res, args.expect).with_param("seed", json!(g.seed));
    if let Some(l) = args.l {
        cert = cert.with_param("l", json!(l));
    }
    let mut text = format!("value {}\nstatus {}\n", res.value, res.status.as_str());
    if args.enumerate {
        if args.l.is_some() {
            return Err(Error::Precondition("--enumerate is only available without --l".into()));
        }
        let optima = enumerate_optima(args.n, args.k, args.r, &opts)?;
        text.push_str(&format!(
            "optima {} (complete: {})\n",
            optima.forms.len(),
            optima.complete
        ));
        for f in &optima.forms {
            text.push_str(&format!("  {f}\n"));
        }
        let forms: Vec<Value> = optima.forms.iter().map(|f| json!(f.to_string())).collect();
        cert = cert
            .with_param("optima", json!(forms))
            .with_param("optima_complete", json!(optima.complete));
    } else {
        text.push_str(&format!("witness {}\n", canonical_form(&res.witness)));
    }
    let mut out = Output::certificates(vec![finish(cert, g)]);
    out.text = text + &out.text;
    Ok(out)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let g = &cli.global;
    let exec = if g.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Construct { kind, n, k } => Ok(family_output(&construct(*kind, *n, *k)?)),
        Command::Tau { file } => {
            let f = read_family(file)?;
            let t = tau(&f)?;
            Ok(Output::plain(format!("{t}\n"), json!({"tau": t})))
        }
        Command::Covers { file, size } => {
            let f = read_family(file)?;
            let sizes = match size {
                Some(s) => *s..=*s,
                None => 1..=f.k(),
            };
            let mut text = String::new();
            let mut records = Vec::new();
            for l in sizes {
                for c in covers(&f, l)?.sets() {
                    text.push_str(&format!("{c}\n"));
                    records.push(json!({"size": l, "cover": elems(c)}));
                }
            }
            Ok(Output { text, records, failed: false })
        }
        Command::Saturate { file } => Ok(family_output(&saturate(&read_family(file)?)?)),
        Command::Trace { file, window } => {
            let f = read_family(file)?;
            let u = Set::from_elems(window.iter().copied())?;
            let t = trace(&f, u)?;
            let mut text = format!("window {u}\n");
            let mut records = Vec::new();
            for (s, e) in t.table() {
                let alpha = match t.alpha(*s) {
                    Alpha::Defined(a) => a.to_string(),
                    Alpha::Undefined(AlphaUndefined::EmptyKey) => "undefined (empty key)".into(),
                    Alpha::Undefined(AlphaUndefined::ZeroDenominator) => "undefined (zero denominator)".into(),
                };
                text.push_str(&format!("{s} f={} alpha={alpha}\n", e.count));
                records.push(json!({"window": elems(u), "key": elems(*s), "f": e.count, "alpha": alpha}));
            }
            Ok(Output { text, records, failed: false })
        }
        Command::Classify { file } => {
            let c = classify_t3(&read_family(file)?)?;
            let rec = classification_record(&c);
            let text = format!("{}\n", rec);
            Ok(Output::plain(text, rec))
        }
        Command::Verify(args) => verify(args, g, exec),
        Command::Oracle(args) => oracle(args, g, exec),
        Command::Lex { n, k, m } => Ok(family_output(&lex_family(*n, *k, *m)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = with_threads(g.threads, || run(&cli));
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("ekrforge: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = out.render(g.format);
    match &g.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &rendered) {
                eprintln!("ekrforge: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if out.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
