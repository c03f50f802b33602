mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use llt_core::abacus::AbacusDisplay;
use llt_core::multipartition::{add_multirunner, enumerate_multipartitions};
use llt_core::runnerthm::{self, Report, RunnerSpec};
use llt_core::{
    CanonicalBasis, ColumnSet, DecompositionMatrix, Error, LaurentPoly, Multicharge, Multipartition, Partition,
    TieBreak,
};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use cache::ColumnCache;

#[derive(Parser)]
#[command(name = "llt", version, about = "Canonical bases of Fock spaces and empty runner insertion")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// JSONL column cache, read before and appended to after the command.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240601)]
    seed: u64,

    /// Which dominance-maximal candidate the stripping step takes first.
    #[arg(long, global = true, value_enum, default_value_t = Tie::First)]
    tie_break: Tie,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    First,
    Last,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition matrix of all r-multipartitions of n.
    Decomp {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        n: usize,
        /// Also emit the matrix evaluated at v = 1.
        #[arg(long)]
        at_one: bool,
        /// Columns indexed by regular multipartitions instead of multiregular ones.
        #[arg(long)]
        regular: bool,
    },
    /// A single canonical basis vector.
    Canonical {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        mu: String,
    },
    /// Inserts an empty runner into every component.
    Addrunner(RunnerArgs),
    /// Like addrunner, with abacus displays before and after.
    Show(RunnerArgs),
    /// Compares the column of mu with the column of mu^{+k}.
    VerifyErt {
        #[command(flatten)]
        space: Space,
        #[arg(long, required_unless_present = "all")]
        mu: Option<String>,
        /// Defaults to the minimal admissible k.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Option<Vec<i64>>,
        /// Sweep every e-multiregular mu of size n.
        #[arg(long, requires = "n")]
        all: bool,
        #[arg(long)]
        n: Option<usize>,
        /// Only enforce the congruence on k, not the length chain.
        #[arg(long)]
        unsafe_k: bool,
    },
    /// The level-one comparison for a partition mu.
    VerifyLevel1 {
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long)]
        mu: String,
        /// Defaults to -l(mu).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Quick randomized consistency checks.
    Selftest,
}

#[derive(Args)]
struct Space {
    #[arg(long)]
    e: usize,
    /// Residues, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<usize>,
}

#[derive(Args)]
struct RunnerArgs {
    #[arg(long)]
    e: usize,
    #[arg(long)]
    mu: String,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    k: Vec<i64>,
    /// Residues; charges are then the smallest admissible ones.
    #[arg(long, value_delimiter = ',', conflicts_with = "a", required_unless_present = "a")]
    s: Option<Vec<usize>>,
    /// Explicit charges.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<i64>>,
}

enum Failure {
    Usage(String),
    Verification,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InternalInconsistency(_) => Failure::Internal(err.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<cache::CacheError> for Failure {
    fn from(err: cache::CacheError) -> Self {
        Failure::Usage(err.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let tie = match cli.tie_break {
        Tie::First => TieBreak::First,
        Tie::Last => TieBreak::Last,
    };
    let cb = CanonicalBasis::with_tie_break(tie);
    let mut cache = match cli.cache.as_deref().map(|p| ColumnCache::load(p, &cb)).transpose() {
        Ok(c) => c,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    };

    let result = run(&cli, &cb);
    if let Some(cache) = cache.as_mut() {
        if let Err(err) = cache.save(&cb) {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli, cb: &CanonicalBasis) -> Outcome {
    match &cli.command {
        Command::Decomp { space, n, at_one, regular } => {
            let set = if *regular { ColumnSet::Regular } else { ColumnSet::Multiregular };
            let m = cb.decomposition_matrix(space.e, &space.s, *n, set)?;
            Ok(render_matrix(&m, *at_one, cli.format))
        }
        Command::Canonical { space, mu } => {
            let mu = parse_mu(mu)?;
            let col = cb.column(space.e, &space.s, &mu)?;
            let key = llt_core::ColumnKey::new(space.e, &space.s, mu)?;
            let terms = col.sorted_terms();
            Ok(match cli.format {
                Format::Text => {
                    let mut out = format!("G{key}\n");
                    for (lam, c) in terms {
                        let _ = writeln!(out, "{lam}\t{c}");
                    }
                    out
                }
                Format::Json => {
                    let column: Vec<_> = terms.iter().map(|(l, c)| json!({"lambda": l, "coeff": c})).collect();
                    json_line(&json!({"key": key.to_string(), "column": column}))
                }
                Format::Csv => {
                    csv_text(std::iter::once(vec!["lambda".to_string(), "coeff".to_string()]).chain(
                        terms.iter().map(|(l, c)| vec![l.to_string(), c.to_string()]),
                    ))
                }
            })
        }
        Command::Addrunner(args) => add_runner(args, false, cli.format),
        Command::Show(args) => add_runner(args, true, cli.format),
        Command::VerifyErt { space, mu, k, all, n, unsafe_k } => {
            if *all {
                let n = n.expect("clap enforces --n with --all");
                let mut reports = Vec::new();
                for mu in enumerate_multipartitions(n, space.s.len()).into_iter().filter(|m| m.is_e_multiregular(space.e)) {
                    let k = runnerthm::minimal_k(&mu, space.e, &space.s)?;
                    reports.push(runnerthm::verify_main_theorem(cb, &mu, space.e, &space.s, &k, *unsafe_k)?);
                }
                let all_pass = reports.iter().all(Report::passed);
                let out = match cli.format {
                    Format::Json => format!("{}\n", serde_json::to_string(&reports).expect("reports serialize")),
                    _ => reports.iter().map(|r| format!("{} {} k={}\n", r.verdict, r.mu, list(&r.k))).collect(),
                };
                verdict(out, all_pass)
            } else {
                let mu = parse_mu(mu.as_deref().expect("clap enforces --mu without --all"))?;
                let k = match k {
                    Some(k) => k.clone(),
                    None => runnerthm::minimal_k(&mu, space.e, &space.s)?,
                };
                let report = runnerthm::verify_main_theorem(cb, &mu, space.e, &space.s, &k, *unsafe_k)?;
                let pass = report.passed();
                verdict(render_report(&report, cli.format), pass)
            }
        }
        Command::VerifyLevel1 { e, s, mu, k } => {
            let p: Partition = mu.parse()?;
            let k = k.unwrap_or(-(p.len() as i64));
            let mu = Multipartition::new(vec![p])?;
            let report = runnerthm::verify_main_theorem(cb, &mu, *e, &[*s], &[k], false)?;
            let pass = report.passed();
            verdict(render_report(&report, cli.format), pass)
        }
        Command::Selftest => {
            let (out, pass) = selftest(cb, cli.seed)?;
            verdict(out, pass)
        }
    }
}

/// Prints the output either way; a FAIL still shows the report.
fn verdict(out: String, pass: bool) -> Outcome {
    if pass {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

/// `((2),(1))` is a multipartition; `(2,1)`, `2,1` and `∅` are partitions of level one.
fn parse_mu(text: &str) -> Result<Multipartition, Error> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t.strip_prefix('(').and_then(|x| x.strip_suffix(')'));
    match inner {
        Some(inner) if inner.contains('(') || inner.contains('∅') => t.parse(),
        _ => Multipartition::new(vec![t.parse()?]),
    }
}

fn show_mu(mu: &Multipartition) -> String {
    if mu.level() == 1 {
        mu.component(1).to_string()
    } else {
        mu.to_string()
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("json"))
}

fn csv_text(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
}

fn int_json(x: &num_bigint::BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn render_matrix(m: &DecompositionMatrix, at_one: bool, format: Format) -> String {
    let ones = at_one.then(|| m.at_one());
    match format {
        Format::Json => {
            let rows: Vec<_> =
                m.rows.iter().zip(&m.entries).map(|(lam, es)| json!({"lambda": lam, "entries": es})).collect();
            let mut v = json!({"e": m.e, "s": m.s, "n": m.n, "cols": m.cols, "rows": rows});
            if let Some(ones) = ones {
                v["at_one"] = ones.iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect();
            }
            json_line(&v)
        }
        Format::Csv => {
            let header = || std::iter::once("lambda".to_string()).chain(m.cols.iter().map(show_mu)).collect();
            let mut out = csv_text(std::iter::once(header()).chain(m.rows.iter().zip(&m.entries).map(|(lam, es)| {
                std::iter::once(show_mu(lam)).chain(es.iter().map(ToString::to_string)).collect()
            })));
            if let Some(ones) = ones {
                out.push('\n');
                out.push_str(&csv_text(std::iter::once(header()).chain(m.rows.iter().zip(&ones).map(|(lam, es)| {
                    std::iter::once(show_mu(lam)).chain(es.iter().map(ToString::to_string)).collect()
                }))));
            }
            out
        }
        Format::Text => {
            let mut out = text_table(m, |r, c| m.entries[r][c].to_string());
            if let Some(ones) = ones {
                out.push('\n');
                out.push_str(&text_table(m, |r, c| ones[r][c].to_string()));
            }
            out
        }
    }
}

fn text_table(m: &DecompositionMatrix, cell: impl Fn(usize, usize) -> String) -> String {
    let labels: Vec<String> = m.rows.iter().map(show_mu).collect();
    let heads: Vec<String> = m.cols.iter().map(show_mu).collect();
    let cells: Vec<Vec<String>> =
        (0..m.rows.len()).map(|r| (0..m.cols.len()).map(|c| cell(r, c)).collect()).collect();
    let lw = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..m.cols.len())
        .map(|c| cells.iter().map(|row| row[c].chars().count()).chain([heads[c].chars().count()]).max().unwrap_or(1))
        .collect();
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
    let mut out = String::new();
    let head: Vec<String> = heads.iter().zip(&widths).map(|(h, &w)| pad(h, w)).collect();
    let _ = writeln!(out, "{}  {}", " ".repeat(lw), head.join("  ").trim_end());
    for (label, row) in labels.iter().zip(&cells) {
        let row: Vec<String> = row.iter().zip(&widths).map(|(x, &w)| pad(x, w)).collect();
        let _ = writeln!(out, "{}  {}", pad(label, lw), row.join("  ").trim_end());
    }
    out
}

fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(r).expect("report serializes")),
        Format::Csv => csv_text(
            std::iter::once(["lambda", "lambda_plus_k", "lhs", "rhs", "equal"].map(String::from).to_vec()).chain(
                r.rows.iter().map(|row| {
                    vec![
                        row.lambda.as_ref().map(show_mu).unwrap_or_default(),
                        show_mu(&row.lambda_plus_k),
                        row.lhs_poly.to_string(),
                        row.rhs_poly.to_string(),
                        row.equal.to_string(),
                    ]
                }),
            ),
        ),
        Format::Text => {
            let mut out = format!(
                "{} e={} s=({}) s+=({}) k=({})\nmu = {}  mu^+k = {}\n",
                r.verdict,
                r.e,
                list(&r.s),
                list(&r.s_plus),
                list(&r.k),
                show_mu(&r.mu),
                show_mu(&r.mu_plus_k)
            );
            for row in &r.rows {
                let lam = row.lambda.as_ref().map(show_mu).unwrap_or_else(|| "-".into());
                let mark = if row.equal { "" } else { "  <- differs" };
                let _ = writeln!(
                    out,
                    "  {lam} -> {}: {} | {}{mark}",
                    show_mu(&row.lambda_plus_k),
                    row.lhs_poly,
                    row.rhs_poly
                );
            }
            out
        }
    }
}

fn add_runner(args: &RunnerArgs, show: bool, format: Format) -> Outcome {
    let mu = parse_mu(&args.mu)?;
    let e = args.e;
    if args.k.len() != mu.level() {
        return Err(Failure::Usage(format!("k has {} entries but mu has {} components", args.k.len(), mu.level())));
    }
    let (plus, s_plus, charges, chain) = match (&args.a, &args.s) {
        (Some(a), _) => {
            let mc = Multicharge::new(e, a.clone())?;
            let (plus, s_plus) = add_multirunner(&mu, &mc, &args.k).map_err(|err| match err {
                Error::IncompatibleK(msg) => Error::Violates51(msg),
                other => other,
            })?;
            let chain = runnerthm::validate_k(&mu, e, &mc.residues(), &args.k).err();
            (plus, s_plus, a.clone(), chain)
        }
        (None, Some(s)) => {
            let lengths: Vec<usize> = mu.components().iter().map(Partition::len).collect();
            let spec = RunnerSpec::from_congruence(e, s, &args.k, &lengths)?;
            let chain = runnerthm::validate_k(&mu, e, s, &args.k).err();
            (spec.plus_k(&mu)?, spec.s_plus.clone(), spec.charges.clone(), chain)
        }
        (None, None) => unreachable!("clap requires --s or --a"),
    };

    if format == Format::Json {
        let mut v = json!({"mu": mu, "k": args.k, "charges": charges, "s_plus": s_plus, "mu_plus_k": plus});
        if show {
            v["length_chain"] = json!(chain.as_ref().map_or("holds".to_string(), ToString::to_string));
        }
        return Ok(json_line(&v));
    }
    if !show {
        return Ok(format!("{}\n", show_mu(&plus)));
    }

    let mut out = format!("{}\ns+ = ({})\n", show_mu(&plus), list(&s_plus));
    match &chain {
        None => out.push_str("length chain: holds\n"),
        Some(err) => {
            let _ = writeln!(out, "length chain: {err}");
        }
    }
    for (j, (p, (&a, &k))) in mu.components().iter().zip(charges.iter().zip(&args.k)).enumerate() {
        let display = AbacusDisplay::encode(p, e, a)?;
        let ins = display.insert_runner(k)?;
        let _ = writeln!(out, "\ncomponent {}: {} with charge {a}, k = {k}", j + 1, p);
        out.push_str(&display.render(None));
        let _ = writeln!(out, "-> {} (inserted runner {})", ins.display.decode(), ins.label);
        out.push_str(&ins.display.render(Some(ins.label)));
    }
    Ok(out)
}

fn selftest(cb: &CanonicalBasis, seed: u64) -> Result<(String, bool), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut all = true;
    let mut record = |name: &str, fails: usize, total: usize| {
        let ok = fails == 0;
        all &= ok;
        lines.push(format!("{} {name}: {} of {total} failed", if ok { "PASS" } else { "FAIL" }, fails));
    };

    let empty = AbacusDisplay::encode(&Partition::empty(), 3, 7)?.insert_runner(-7)?.display.decode();
    record("empty runner example", usize::from(empty.to_string() != "(3,2^3,1^3)"), 1);

    let mut fails = 0;
    let mut total = 0;
    for n in 0..=3 {
        for mu in enumerate_multipartitions(n, 2).into_iter().filter(|m| m.is_e_multiregular(2)) {
            let k = runnerthm::minimal_k_from(&mu, 2, &[0, 1], -(mu.component(1).size() as i64))?;
            total += 1;
            fails += usize::from(!runnerthm::verify_main_theorem(cb, &mu, 2, &[0, 1], &k, false)?.passed());
        }
    }
    record("column comparison with k1 = -|mu1|", fails, total);

    let mut fails = 0;
    let trials = 300;
    for _ in 0..trials {
        let e = rng.gen_range(2..=4usize);
        let r = rng.gen_range(1..=3usize);
        let s: Vec<usize> = (0..r).map(|_| rng.gen_range(0..e)).collect();
        let all_mu = enumerate_multipartitions(rng.gen_range(0..=4), r);
        let lam = all_mu[rng.gen_range(0..all_mu.len())].clone();
        let k = runnerthm::minimal_k(&lam, e, &s)?;
        let spec = runnerthm::validate_k(&lam, e, &s, &k)?;
        let i = rng.gen_range(0..e);
        let m = rng.gen_range(1..=2usize);
        fails += usize::from(!runnerthm::verify_operator_commutation(&lam, &spec, i, m)?);
    }
    record("operator commutation", fails, trials);

    let mut fails = 0;
    let mut total = 0;
    for e in 2..=4usize {
        for mk in 0..=(3 * e as i64 + 2) {
            let a = llt_core::abacus::minimal_charge(rng.gen_range(0..e), e, mk);
            let ins = AbacusDisplay::encode(&Partition::empty(), e, a)?.insert_runner(-mk)?;
            let b = ins.display.charge() as i64;
            let mc = Multicharge::new(e + 1, vec![b])?;
            let got = llt_core::FockVector::basis(mc.clone(), Multipartition::empty(1))
                .apply_word(&runnerthm::empty_runner_word(e, b, -mk)?);
            let expect = llt_core::FockVector::basis(mc, Multipartition::new(vec![ins.display.decode()])?);
            total += 1;
            fails += usize::from(got != expect);
        }
    }
    record("induction word", fails, total);

    let one = LaurentPoly::one();
    let m = cb.decomposition_matrix(2, &[0], 2, ColumnSet::Multiregular)?;
    record("unitriangular lead", usize::from(m.entries[0][0] != one), 1);

    Ok((lines.iter().map(|l| format!("{l}\n")).collect(), all))
}
