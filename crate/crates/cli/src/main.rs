//! `qcluster`: seed mutation, cluster-variable enumeration, quantum cluster
//! characters and verification runs over `F_p`.
//!
//! Vertices and catalog indices are 1-based on the command line. Every
//! failure prints one line `error: <kind>: <message>` to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use qcluster::hallverify::{self, Report};
use qcluster::repmod::{RepJson, DEFAULT_SUBSPACE_BUDGET};
use qcluster::seeds::{enumerate_cluster_variables, explore, DEFAULT_SEED_BUDGET};
use qcluster::{cc_character, CCObject, Catalog, FramedData, QuantumSeed, Quiver, Rep};

#[derive(Parser, Debug)]
#[command(name = "qcluster", version, about = "Quantum cluster characters over finite fields")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutate the initial seed (or a seed file) along a sequence of directions.
    Mutate(MutateArgs),
    /// Enumerate all cluster variables reachable from the initial seed.
    Enumerate(EnumerateArgs),
    /// List the indecomposables known to the catalog of the framed quiver.
    Catalog(CatalogArgs),
    /// Quantum cluster character of a module, optionally with shifted injectives.
    CcChar(CcCharArgs),
    /// Run a verification harness and emit a report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct QuiverSource {
    /// Quiver JSON file: {"vertices": n, "arrows": [[s, t], ...]}, 1-based.
    #[arg(long, conflicts_with = "kind")]
    quiver: Option<PathBuf>,

    /// Linearly oriented type, e.g. A2.
    #[arg(long = "type", value_name = "TYPE")]
    kind: Option<String>,
}

impl QuiverSource {
    fn framed(&self) -> anyhow::Result<FramedData> {
        match (&self.quiver, &self.kind) {
            (Some(path), _) => {
                let q = Quiver::from_json_str(&read(path)?)?;
                Ok(FramedData::from_quiver(&q)?)
            }
            (None, Some(kind)) => Ok(FramedData::type_a(parse_type(kind)?)?),
            (None, None) => bail!(usage("one of --quiver or --type is required")),
        }
    }
}

#[derive(Args, Debug)]
struct Prime {
    /// Size of the ground field.
    #[arg(long, value_parser = parse_prime)]
    p: u32,
}

#[derive(Args, Debug)]
struct MutateArgs {
    #[command(flatten)]
    source: QuiverSource,

    /// Start from this seed JSON instead of the initial seed of the quiver.
    #[arg(long, conflicts_with_all = ["quiver", "kind"])]
    seed: Option<PathBuf>,

    /// Mutation directions, applied left to right.
    #[arg(long, num_args = 0.., value_name = "K")]
    seq: Vec<usize>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    source: QuiverSource,

    /// Maximum number of seeds visited.
    #[arg(long, default_value_t = DEFAULT_SEED_BUDGET, value_parser = positive_usize)]
    budget_seeds: usize,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(flatten)]
    source: QuiverSource,

    #[command(flatten)]
    prime: Prime,
}

#[derive(Args, Debug)]
struct CcCharArgs {
    #[command(flatten)]
    source: QuiverSource,

    #[command(flatten)]
    prime: Prime,

    /// Module: catalog index (see `catalog`), a dimension vector such as
    /// `1,1`, a Rep JSON file prefixed with `@`, or a `+`-separated sum.
    #[arg(long, default_value = "0")]
    module: String,

    /// Vertices whose indecomposable injectives are added shifted.
    #[arg(long, num_args = 1.., value_name = "I")]
    shift_injective: Vec<usize>,

    /// Maximum number of subspaces enumerated.
    #[arg(long, default_value_t = DEFAULT_SUBSPACE_BUDGET, value_parser = positive_u64)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    /// Product of two module characters against extension counts.
    #[value(alias = "thm31")]
    HallProduct,
    /// Product of a module character with a shifted injective.
    #[value(alias = "prop32")]
    InjectiveProduct,
    /// Ext of non-split middle terms drops below that of the split one.
    #[value(alias = "lemma")]
    ExtDrop,
    /// Every character in the inventory is a polynomial in cluster variables.
    #[value(alias = "main")]
    ClusterBasis,
    /// Extension, Hall, Grassmannian and Hom-strata counting identities.
    Counting,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Which harness to run.
    #[arg(value_enum)]
    check: Check,

    #[command(flatten)]
    source: QuiverSource,

    #[command(flatten)]
    prime: Prime,

    /// Maximum number of subspaces or morphisms enumerated per instance.
    #[arg(long, default_value_t = DEFAULT_SUBSPACE_BUDGET, value_parser = positive_u64)]
    budget: u64,

    /// Maximum number of seeds visited by `cluster-basis`.
    #[arg(long, default_value_t = DEFAULT_SEED_BUDGET, value_parser = positive_usize)]
    budget_seeds: usize,

    /// Write the full report here; stdout then gets a one-line summary.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error with an explicit kind for the `error:` line.
#[derive(Debug)]
struct Tagged {
    kind: &'static str,
    message: String,
}

impl std::fmt::Display for Tagged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Tagged {}

fn usage(message: &str) -> Tagged {
    Tagged { kind: "usage", message: message.into() }
}

fn parse_type(s: &str) -> anyhow::Result<usize> {
    let n = s
        .strip_prefix(['A', 'a'])
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| usage(&format!("unknown type {s:?}, expected A1, A2, ...")))?;
    Ok(n)
}

fn parse_prime(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(p @ (2 | 3 | 5)) => Ok(p),
        _ => Err(format!("{s} is not one of the supported primes 2, 3, 5")),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    s.parse::<u64>().ok().filter(|&b| b > 0).ok_or_else(|| format!("{s} is not a positive integer"))
}

fn positive_usize(s: &str) -> Result<usize, String> {
    s.parse::<usize>().ok().filter(|&b| b > 0).ok_or_else(|| format!("{s} is not a positive integer"))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn to_json(v: &impl serde::Serialize) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn cmd_mutate(args: &MutateArgs, format: Format) -> anyhow::Result<(String, bool)> {
    let seed = match &args.seed {
        Some(path) => serde_json::from_str::<QuantumSeed>(&read(path)?)
            .map_err(|e| Tagged { kind: "parse", message: format!("seed: {e}") })?,
        None => args.source.framed()?.seed()?,
    };
    let mut dirs = Vec::with_capacity(args.seq.len());
    for &k in &args.seq {
        if k == 0 || k > seed.n() {
            bail!(Tagged {
                kind: "domain",
                message: format!("direction {k} is not a mutable vertex 1..={}", seed.n()),
            });
        }
        dirs.push(k - 1);
    }
    let out = seed.mutate_sequence(&dirs)?;
    let text = match format {
        Format::Json => to_json(&out)?,
        Format::Text => {
            let mut s = String::new();
            for (i, x) in out.vars().iter().enumerate() {
                s.push_str(&format!("x{} = {x}\n", i + 1));
            }
            s.trim_end().to_string()
        }
    };
    Ok((text, true))
}

fn cmd_enumerate(args: &EnumerateArgs, format: Format) -> anyhow::Result<(String, bool)> {
    let seed = args.source.framed()?.seed()?;
    let seeds = explore(&seed, args.budget_seeds)?.len();
    let vars = enumerate_cluster_variables(&seed, args.budget_seeds)?;
    info!("{seeds} seeds, {} variables", vars.len());
    let text = match format {
        Format::Json => to_json(&json!({ "count": vars.len(), "seeds": seeds, "variables": vars }))?,
        Format::Text => {
            let mut s = format!("{} cluster variables in {seeds} seeds\n", vars.len());
            for x in &vars {
                s.push_str(&format!("{x}\n"));
            }
            s.trim_end().to_string()
        }
    };
    Ok((text, true))
}

fn cmd_catalog(args: &CatalogArgs, format: Format) -> anyhow::Result<(String, bool)> {
    let f = args.source.framed()?;
    let cat = f.catalog(args.prime.p)?;
    let entries: Vec<Value> = cat
        .entries()
        .iter()
        .enumerate()
        .map(|(k, rep)| {
            json!({
                "index": k + 1,
                "dims": rep.dims(),
                "principal": rep.is_principal(),
                "injective": rep.is_injective().unwrap_or(false),
            })
        })
        .collect();
    let text = match format {
        Format::Json => to_json(&json!({ "complete": cat.is_complete(), "entries": entries }))?,
        Format::Text => {
            let mut s = String::new();
            for e in &entries {
                s.push_str(&format!(
                    "{:>3}  {}{}{}\n",
                    e["index"].as_u64().unwrap_or(0),
                    e["dims"],
                    if e["principal"] == true { "  principal" } else { "" },
                    if e["injective"] == true { "  injective" } else { "" },
                ));
            }
            s.trim_end().to_string()
        }
    };
    Ok((text, true))
}

/// Parses one summand of a `--module` spec.
fn parse_summand(f: &FramedData, cat: &Catalog, part: &str) -> anyhow::Result<Rep> {
    let part = part.trim();
    if let Some(path) = part.strip_prefix('@') {
        let raw: RepJson = serde_json::from_str(&read(Path::new(path))?)
            .map_err(|e| Tagged { kind: "parse", message: format!("module: {e}") })?;
        if raw.p != cat.p() {
            bail!(Tagged {
                kind: "domain",
                message: format!("module is over F_{}, run is over F_{}", raw.p, cat.p())
            });
        }
        return Ok(Rep::from_json(Arc::clone(f.qtilde()), &raw)?);
    }
    if part.contains(',') {
        let mut dims = Vec::new();
        for d in part.split(',') {
            dims.push(
                d.trim().parse::<usize>().map_err(|_| usage(&format!("bad dimension vector {part:?}")))?,
            );
        }
        if dims.len() == f.n() {
            dims.resize(f.m(), 0);
        }
        let found: Vec<&Rep> = cat.entries().iter().filter(|r| r.dims() == dims.as_slice()).collect();
        return match found.as_slice() {
            [one] => Ok((*one).clone()),
            [] => bail!(Tagged {
                kind: "unsupported",
                message: format!("no catalog indecomposable has dimension vector {part}"),
            }),
            _ => bail!(Tagged {
                kind: "domain",
                message: format!("dimension vector {part} is ambiguous, use a catalog index"),
            }),
        };
    }
    let k: usize = part.parse().map_err(|_| usage(&format!("bad module spec {part:?}")))?;
    if k == 0 {
        return Ok(Rep::zero(Arc::clone(f.qtilde()), cat.p()));
    }
    if k > cat.len() {
        bail!(Tagged {
            kind: "domain",
            message: format!("catalog index {k} out of range 1..={}", cat.len())
        });
    }
    Ok(cat.entry(k - 1).clone())
}

fn cmd_cc_char(args: &CcCharArgs, format: Format) -> anyhow::Result<(String, bool)> {
    let f = args.source.framed()?;
    let cat = f.catalog(args.prime.p)?;
    let parts =
        args.module.split('+').map(|s| parse_summand(&f, &cat, s)).collect::<anyhow::Result<Vec<_>>>()?;
    let module = Rep::direct_sum_all(Arc::clone(f.qtilde()), cat.p(), &parts)?;
    let mut injectives = Vec::with_capacity(args.shift_injective.len());
    for &i in &args.shift_injective {
        if i == 0 || i > f.m() {
            bail!(Tagged {
                kind: "domain",
                message: format!("injective vertex {i} out of range 1..={}", f.m())
            });
        }
        injectives.push(i - 1);
    }
    let obj = CCObject::new(module, injectives)?;
    let x = cc_character(&f, &obj, args.budget)?;
    let text = match format {
        Format::Json => to_json(&x)?,
        Format::Text => x.to_string(),
    };
    Ok((text, true))
}

fn run_check(args: &VerifyArgs, f: &FramedData) -> anyhow::Result<Report> {
    let (p, b) = (args.prime.p, args.budget);
    Ok(match args.check {
        Check::HallProduct => hallverify::run_hall_product(f, p, b)?,
        Check::InjectiveProduct => hallverify::run_injective_product(f, p, b)?,
        Check::ExtDrop => hallverify::run_ext_drop(f, p, b)?,
        Check::Counting => hallverify::run_counting(f, p, b)?,
        Check::ClusterBasis => hallverify::verify_main_theorem(f, p, b, args.budget_seeds)?,
    })
}

fn report_line(r: &Report) -> String {
    let verdict = if r.ok() { "pass" } else { "FAIL" };
    let mut s = format!(
        "{verdict} {} {} p={}: {} passed, {} failed, {} skipped",
        r.check, r.quiver, r.p, r.passed, r.failed, r.skipped
    );
    if let Some(bad) = r.first_failure() {
        s.push_str(&format!("; first failure {:?}: {}", bad.key, bad.message.as_deref().unwrap_or("")));
    }
    s
}

fn cmd_verify(args: &VerifyArgs, format: Format) -> anyhow::Result<(String, bool)> {
    let f = args.source.framed()?;
    let report = run_check(args, &f)?;
    info!("{}", report_line(&report));
    let full = match format {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = report_line(&report);
            for inst in &report.instances {
                s.push_str(&format!("\n{:?}\t{}", inst.status, inst.key).to_lowercase());
                if let Some(m) = &inst.message {
                    s.push_str(&format!("\t{m}"));
                }
            }
            s
        }
    };
    let text = match &args.out {
        Some(path) => {
            fs::write(path, format!("{full}\n")).with_context(|| format!("writing {}", path.display()))?;
            match format {
                Format::Json => serde_json::to_string(&json!({
                    "check": report.check,
                    "quiver": report.quiver,
                    "p": report.p,
                    "passed": report.passed,
                    "failed": report.failed,
                    "skipped": report.skipped,
                    "out": path.display().to_string(),
                }))?,
                Format::Text => report_line(&report),
            }
        }
        None => full,
    };
    Ok((text, report.ok()))
}

/// Kind slug for the `error:` line.
fn kind_of(e: &anyhow::Error) -> &'static str {
    if let Some(t) = e.downcast_ref::<Tagged>() {
        return t.kind;
    }
    if let Some(core) = e.downcast_ref::<qcluster::Error>() {
        return core.kind();
    }
    if e.chain().any(|c| c.is::<std::io::Error>()) {
        return "io";
    }
    if e.downcast_ref::<serde_json::Error>().is_some() {
        return "parse";
    }
    "internal"
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {}", one_line(first));
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Mutate(a) => cmd_mutate(a, cli.format),
        Command::Enumerate(a) => cmd_enumerate(a, cli.format),
        Command::Catalog(a) => cmd_catalog(a, cli.format),
        Command::CcChar(a) => cmd_cc_char(a, cli.format),
        Command::Verify(a) => cmd_verify(a, cli.format),
    };
    match result {
        Ok((text, ok)) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let kind = kind_of(&e);
            let msg = match e.downcast_ref::<qcluster::Error>() {
                // The core Display repeats the kind; print only the payload.
                Some(core) => core.to_string().split_once(": ").map(|x| x.1.to_string()).unwrap_or_default(),
                None => format!("{e:#}"),
            };
            eprintln!("error: {kind}: {}", one_line(&msg));
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types_and_primes() {
        assert_eq!(parse_type("A3").unwrap(), 3);
        assert!(parse_type("D4").is_err());
        assert!(parse_type("A0").is_err());
        assert_eq!(parse_prime("5"), Ok(5));
        assert!(parse_prime("7").is_err());
        assert!(parse_prime("4").is_err());
        assert!(positive_u64("0").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
