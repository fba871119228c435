use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use masonabc::bounds::{reduce_to_univariate, CheckConfig, TheoremId};
use masonabc::cycfield::CycloField;
use masonabc::driver::{analyze, run, SystemInput};
use masonabc::parse::{parse_system, render, render_system, SystemFile};
use masonabc::search::{
    brute_force_bounds, davenport_square_free_samples, family_factor_tight, family_residual, fermat_search,
    CatalogFilter, FermatSpace, ResidualVariant, SearchSpace,
};
use masonabc::sumsystem::VanishingSum;
use masonabc::wronskian::classical_wronskian;
use masonabc::Exec;

const DAVENPORT: &str = include_str!("../fixtures/davenport.sys");

#[derive(Parser)]
#[command(
    name = "masonabc",
    version,
    about = "Exact degree bounds for vanishing sums of polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check theorems on a system file and print a JSON report.
    Verify(VerifyArgs),
    /// Print structural facts (span, radicals, subsums, hypotheses) as JSON.
    Analyze(InputArgs),
    /// Print the Wronskian of the terms.
    Wronskian(WronskianArgs),
    /// Substitute a generic line into a multivariate system.
    Reduce(ReduceArgs),
    /// Write a ready-to-verify example system.
    Examples(ExamplesArgs),
    /// Exhaustive searches.
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Args)]
struct InputArgs {
    /// System file, `-` for standard input.
    input: String,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Comma separated theorem ids, or `all`. Defaults to the file's
    /// `theorems` line, then to all.
    #[arg(long)]
    theorems: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Attempts allowed when searching for a substitution line.
    #[arg(long, default_value_t = 32)]
    budget: u32,
    /// Restrict every d' sweep, as `LO..HI`.
    #[arg(long, value_parser = parse_bounds::<usize>)]
    dprime_range: Option<(usize, usize)>,
    /// Skip the lift and Wronskian construction.
    #[arg(long)]
    sweep_only: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct WronskianArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Variable to differentiate in; defaults to the only variable.
    #[arg(long)]
    var: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    io: InputArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    budget: u32,
}

#[derive(Args)]
struct ExamplesArgs {
    #[command(subcommand)]
    which: Example,
    #[arg(long, default_value = "-", global = true)]
    out: String,
}

#[derive(Subcommand)]
enum Example {
    /// (x^2+2)^3 - (x^3+3x)^2 = 3x^2 + 8 with exponent annotations.
    Davenport,
    /// Binomial family showing the factor d'-1 is sharp.
    FactorTight { n: usize, big_n: u32 },
    /// Root-of-unity family for the d'/2 term; variant `none-constant` or `first-constant`.
    Residual { n: usize, variant: ResidualVariant },
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Enumerate vanishing sums and compare the verifiers with the brute-force oracle.
    Bounds {
        #[arg(long, default_value_t = 3)]
        terms: usize,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Integer coefficient range `LO..HI`.
        #[arg(long, default_value = "-2..2", value_parser = parse_bounds::<i64>, allow_hyphen_values = true)]
        coeffs: (i64, i64),
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Keep systems that fail every hypothesis in the catalog too.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Look for g1^e1 + g2^e2 + g3^e3 = 0 with coprime nonconstant g1, g2.
    Fermat {
        /// Three exponents, comma separated.
        #[arg(long, default_value = "3,3,3")]
        exponents: String,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value = "-2..2", value_parser = parse_bounds::<i64>, allow_hyphen_values = true)]
        coeffs: (i64, i64),
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Radical degrees of random combinations lambda f^3 + mu g^2 of the Davenport pair.
    SquareFree {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

fn parse_bounds<T>(s: &str) -> Result<(T, T), String>
where
    T: std::str::FromStr + PartialOrd + std::fmt::Display,
{
    let (a, b) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: T = a.trim().parse().map_err(|_| format!("bad bound `{a}`"))?;
    let hi: T = b.trim().parse().map_err(|_| format!("bad bound `{b}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading standard input")?;
        Ok(buf)
    } else {
        fs::read(PathBuf::from(path)).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn load(path: &str) -> Result<(SystemFile, Vec<u8>)> {
    let raw = read_input(path)?;
    let text = std::str::from_utf8(&raw).context("input is not UTF-8")?;
    let sys = parse_system(text).map_err(|e| anyhow!("{path}:{e}"))?;
    Ok((sys, raw))
}

fn vanishing(sys: &SystemFile) -> Result<VanishingSum> {
    VanishingSum::new(sys.polynomials()).map_err(|e| anyhow!("not a vanishing sum: {e}"))
}

fn theorem_list(flag: Option<&str>, file: Option<&[String]>) -> Result<Vec<TheoremId>> {
    let names: Vec<String> = match (flag, file) {
        (Some(f), _) => f.split(',').map(|s| s.trim().to_string()).collect(),
        (None, Some(list)) => list.to_vec(),
        (None, None) => return Ok(TheoremId::ALL.to_vec()),
    };
    if names.iter().any(|n| n == "all") {
        return Ok(TheoremId::ALL.to_vec());
    }
    names
        .iter()
        .filter(|n| !n.is_empty())
        .map(|n| n.parse::<TheoremId>().map_err(|e| anyhow!(e)))
        .collect()
}

fn verify(args: &VerifyArgs) -> Result<u8> {
    let (sys, raw) = load(&args.io.input)?;
    let sum = vanishing(&sys)?;
    let exponents = (!sys.exponents.is_empty()).then(|| sys.exponents.clone());
    let theorems = theorem_list(args.theorems.as_deref(), sys.theorems.as_deref())?;
    let cfg = CheckConfig {
        exec: if args.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
        seed: args.seed,
        retry_budget: args.budget,
        dprime_range: args.dprime_range,
        constructive: !args.sweep_only,
    };
    let report = run(&SystemInput { sum, exponents }, &theorems, &cfg, &raw);
    write_output(&args.io.out, &(report.to_json() + "\n"))?;
    for v in &report.summary.violations {
        eprintln!("violation: {v}");
    }
    for rep in report.reports.iter().filter(|r| !r.hypotheses_hold()) {
        for d in rep.hypotheses.iter().filter(|d| !d.passed) {
            let witness = d
                .witness
                .as_ref()
                .map(|w| {
                    format!(
                        " witness {{{}}}",
                        w.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
                    )
                })
                .unwrap_or_default();
            eprintln!("{}: hypothesis {} failed: {}{witness}", rep.theorem, d.name, d.detail);
        }
    }
    Ok(report.verdict.exit_code() as u8)
}

fn cmd_analyze(args: &InputArgs) -> Result<u8> {
    let (sys, _) = load(&args.input)?;
    let a = analyze(&vanishing(&sys)?, &sys.vars, Exec::Parallel)?;
    write_output(&args.out, &(serde_json::to_string_pretty(&a)? + "\n"))?;
    Ok(0)
}

fn cmd_wronskian(args: &WronskianArgs) -> Result<u8> {
    let (sys, _) = load(&args.io.input)?;
    let fs = sys.polynomials();
    let used: std::collections::BTreeSet<usize> = fs.iter().flat_map(|f| f.variables()).collect();
    let var = match &args.var {
        Some(name) => sys
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| anyhow!("unknown variable `{name}`"))?,
        None => match used.len() {
            0 | 1 => used.first().copied().unwrap_or(0),
            _ => bail!("terms use several variables; pick one with --var"),
        },
    };
    let w = classical_wronskian(&fs, var);
    write_output(&args.io.out, &(render(&w, &sys.vars) + "\n"))?;
    Ok(0)
}

fn cmd_reduce(args: &ReduceArgs) -> Result<u8> {
    let (sys, _) = load(&args.io.input)?;
    let sum = vanishing(&sys)?;
    let cfg = CheckConfig {
        seed: args.seed,
        retry_budget: args.budget,
        ..CheckConfig::default()
    };
    let red = reduce_to_univariate(&sum, &cfg)?;
    let mut text = String::new();
    text.push_str(&format!("# seed {} attempts {}\n", args.seed, red.attempts));
    for ((v, p), q) in red.vars.iter().zip(&red.p).zip(&red.q) {
        let name = sys.vars.get(*v).cloned().unwrap_or(format!("v{v}"));
        text.push_str(&format!("# substitution {name} = ({p})*y + ({q})\n"));
    }
    text.push_str(&format!(
        "# degrees preserved: {}, subsum degrees preserved: {}, gcd one: {}\n",
        red.degrees_preserved, red.subsum_degrees_preserved, red.gcd_one
    ));
    let out = SystemFile {
        field: sys.field.clone(),
        vars: vec!["y".into()],
        polys: red
            .reduced
            .fs()
            .iter()
            .enumerate()
            .map(|(i, f)| (format!("f{}", i + 1), f.clone()))
            .collect(),
        exponents: Vec::new(),
        theorems: None,
    };
    text.push_str(&render_system(&out));
    write_output(&args.io.out, &text)?;
    Ok(if red.verified() { 0 } else { 3 })
}

/// Theorems whose hypotheses (gcd 1 on vanishing subsums) the families are built for.
const FAMILY_THEOREMS: [TheoremId; 8] = [
    TheoremId::RadicalSum,
    TheoremId::RadicalProduct,
    TheoremId::RhoBound,
    TheoremId::SigmaBound,
    TheoremId::Davenport,
    TheoremId::BrownawellMasser,
    TheoremId::DivisorChain,
    TheoremId::SpecialPosition,
];

fn system_from(sum: &VanishingSum, field: &CycloField, comment: &str) -> String {
    let sys = SystemFile {
        field: field.clone(),
        vars: vec!["x".into()],
        polys: sum
            .fs()
            .iter()
            .enumerate()
            .map(|(i, f)| (format!("f{}", i + 1), f.clone()))
            .collect(),
        exponents: Vec::new(),
        theorems: Some(FAMILY_THEOREMS.iter().map(|t| t.to_string()).collect()),
    };
    format!("# {comment}\n{}", render_system(&sys))
}

fn cmd_examples(args: &ExamplesArgs) -> Result<u8> {
    let text = match &args.which {
        Example::Davenport => DAVENPORT.to_string(),
        Example::FactorTight { n, big_n } => {
            let sum = family_factor_tight(*n, *big_n)?;
            system_from(&sum, sum.field(), &format!("factor-tight family n={n} N={big_n}"))
        }
        Example::Residual { n, variant } => {
            let sum = family_residual(*n, *variant)?;
            let name = serde_json::to_value(variant)?;
            system_from(
                &sum,
                sum.field(),
                &format!("residual family n={n} variant {}", name.as_str().unwrap_or("")),
            )
        }
    };
    write_output(&args.out, &text)?;
    Ok(0)
}

fn cmd_search(cmd: &SearchCommand) -> Result<u8> {
    match cmd {
        SearchCommand::Bounds {
            terms,
            degree,
            coeffs,
            budget,
            all,
            out,
        } => {
            let mut space = SearchSpace::integers(*terms, *degree, coeffs.0..=coeffs.1);
            space.budget = *budget;
            if *all {
                space.filter = CatalogFilter::All;
            }
            let bf = brute_force_bounds(&space, Exec::Parallel)?;
            write_output(out, &bf.catalog_jsonl())?;
            let summary = serde_json::json!({
                "candidates": bf.candidates,
                "distinct": bf.distinct,
                "hypothesis_passing": bf.hypothesis_passing,
                "violations": bf.violations,
                "mismatches": bf.mismatches,
            });
            eprintln!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(if bf.violations.is_empty() && bf.mismatches.is_empty() {
                0
            } else {
                3
            })
        }
        SearchCommand::Fermat {
            exponents,
            degree,
            coeffs,
            budget,
            out,
        } => {
            let es: Vec<u32> = exponents
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .context("exponents must be positive integers")?;
            let es: [u32; 3] = es.try_into().map_err(|_| anyhow!("expected exactly three exponents"))?;
            let mut space = FermatSpace::integers(es, *degree, coeffs.0..=coeffs.1);
            space.budget = *budget;
            let res = fermat_search(&space, Exec::Parallel)?;
            let views: Vec<_> = res.solutions.iter().map(|s| s.view()).collect();
            let json = serde_json::json!({
                "exponents": es,
                "pairs": res.pairs,
                "extractions": res.extractions,
                "solutions": views,
            });
            write_output(out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
            Ok(0)
        }
        SearchCommand::SquareFree { samples, seed, out } => {
            let rows = davenport_square_free_samples(*samples, 20, *seed);
            let all = rows.iter().all(|r| r.square_free);
            let json = serde_json::json!({ "seed": seed, "all_square_free": all, "samples": rows });
            write_output(out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
            Ok(if all { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Wronskian(a) => cmd_wronskian(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Examples(a) => cmd_examples(a),
        Command::Search(c) => cmd_search(c),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
