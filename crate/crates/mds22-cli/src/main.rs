//! Command-line front end: construction, verification, cost computation,
//! formula evaluation, sweeps, and the finite searches.
//!
//! Machine output (JSON or CSV) goes to stdout; human diagnostics to
//! stderr. Exit codes: 0 success, 1 failed verification, 2 argument or
//! validation error, 3 unconstructible parameters, 4 repair-oracle
//! disagreement.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mds22::code::ArrayCode;
use mds22::constructions::{self, construct_optimal, ConstructError, Metric};
use mds22::formulas;
use mds22::gf::prime_power;
use mds22::repair::{self, RepairError};
use mds22::search::{self, SearchVerdict, WitnessFamily};

#[derive(Parser)]
#[command(name = "mds22", version, about = "(n, n-2, 2) MDS array codes: optimal-repair constructions, exact costs, formulas, and searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Bw,
    Io,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Matrix,
    Subspace,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form optimum at (q, n)
    Formula {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "both")]
        metric: MetricArg,
    },
    /// Construct a code attaining the optimum and emit its JSON
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        metric: MetricArg,
        /// Write the JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the MDS property of a code file
    Verify { file: PathBuf },
    /// Exact repair costs of a code file
    Cost {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// The master construct/cost/formula closure sweep (CSV on stdout)
    Sweep(SweepArgs),
    /// Witness-parameter and exhaustive non-existence searches
    Search {
        #[arg(value_enum)]
        case: SearchCase,
        /// Witness family for `search witness`
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Field size for `search witness`
        #[arg(long)]
        q: Option<u32>,
        /// Resume from (and checkpoint to) this file
        #[arg(long)]
        resume: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    qmax: u32,
    /// Also verify the exceptional n = 9, 10 witnesses over every
    /// supported field up to GF(81)
    #[arg(long)]
    slow: bool,
    /// Worker pool size (1 keeps logs reproducible)
    #[arg(long, default_value = "1")]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchCase {
    Witness,
    N5q5,
    N10q8,
    N10q9,
    N9q8,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Even,
    Char3,
    Odd,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Formula { q, n, metric } => formula(q, n, metric),
        Command::Construct { q, n, metric, out } => construct(q, n, metric, out),
        Command::Verify { file } => verify(&file),
        Command::Cost { file, metric, method } => cost(&file, metric, method),
        Command::Sweep(args) => sweep(args),
        Command::Search { case, family, q, resume } => run_search(case, family, q, resume),
    }
}

fn formula(q: u32, n: u32, metric: MetricArg) -> anyhow::Result<ExitCode> {
    let verdict = formulas::optimum_verdict(q, n)?;
    let mut json = serde_json::to_value(&verdict)?;
    if let Some(obj) = json.as_object_mut() {
        match metric {
            MetricArg::Bw => {
                obj.remove("gamma_opt");
                obj.remove("gamma_constructible");
            }
            MetricArg::Io => {
                obj.remove("beta_opt");
                obj.remove("beta_regime");
                obj.remove("beta_constructible");
            }
            MetricArg::Both => {}
        }
    }
    println!("{}", serde_json::to_string_pretty(&json)?);
    Ok(ExitCode::SUCCESS)
}

fn construct(q: u32, n: u32, metric: MetricArg, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let metric = match metric {
        MetricArg::Bw => Metric::Bandwidth,
        MetricArg::Io => Metric::Io,
        MetricArg::Both => anyhow::bail!("construct needs --metric bw or io"),
    };
    match construct_optimal(q, n, metric) {
        Ok(built) => {
            let json = built.code.to_json_with_tags(built.tags.as_ref());
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(ConstructError::Unconstructible { q, n, metric, formula }) => {
            println!(
                "{}",
                serde_json::json!({
                    "error": "unconstructible",
                    "q": q, "n": n, "metric": metric.to_string(),
                    "formula": formula,
                })
            );
            eprintln!(
                "({q}, {n}) for {metric} needs constructions outside this tool; the optimum is {formula}"
            );
            Ok(ExitCode::from(3))
        }
        Err(other) => Err(other.into()),
    }
}

fn verify(file: &PathBuf) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(file)?;
    let (code, _) = ArrayCode::from_json(&text)?;
    match code.mds_violation() {
        None => {
            println!("{}", serde_json::json!({"mds": true, "n": code.n(), "q": code.ctx().q()}));
            Ok(ExitCode::SUCCESS)
        }
        Some((i, j)) => {
            // 1-based in output, matching the usual block numbering
            println!(
                "{}",
                serde_json::json!({"mds": false, "violation": [i + 1, j + 1]})
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn cost(file: &PathBuf, metric: MetricArg, method: MethodArg) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(file)?;
    let (code, _) = ArrayCode::from_json(&text)?;
    if method == MethodArg::Both {
        // the full report cross-checks the two oracles internally
        match repair::cost_report(&code) {
            Ok(report) => {
                let mut json = report.to_json();
                filter_metric(&mut json, metric);
                println!("{}", serde_json::to_string_pretty(&json)?);
                Ok(ExitCode::SUCCESS)
            }
            Err(err @ RepairError::OracleDisagreement { .. }) => {
                eprintln!("error: {err}");
                Ok(ExitCode::from(4))
            }
            Err(other) => Err(other.into()),
        }
    } else {
        let n = code.n();
        let mut beta_nodes = Vec::new();
        let mut gamma_nodes = Vec::new();
        for i in 0..n {
            if metric != MetricArg::Io {
                let b = match method {
                    MethodArg::Matrix => repair::beta_node_matrix(&code, i)?.0,
                    MethodArg::Subspace => repair::beta_node_subspace(&code, i)?.0,
                    MethodArg::Both => unreachable!(),
                };
                beta_nodes.push(b);
            }
            if metric != MetricArg::Bw {
                let m = match method {
                    MethodArg::Matrix => repair::Method::Matrix,
                    MethodArg::Subspace => repair::Method::Subspace,
                    MethodArg::Both => unreachable!(),
                };
                gamma_nodes.push(repair::gamma_node(&code, i, m)?.0);
            }
        }
        let mut json = serde_json::json!({});
        if !beta_nodes.is_empty() {
            json["beta"] = (*beta_nodes.iter().max().unwrap()).into();
            json["beta_nodes"] = beta_nodes.into();
        }
        if !gamma_nodes.is_empty() {
            json["gamma"] = (*gamma_nodes.iter().max().unwrap()).into();
            json["gamma_nodes"] = gamma_nodes.into();
        }
        println!("{}", serde_json::to_string_pretty(&json)?);
        Ok(ExitCode::SUCCESS)
    }
}

fn filter_metric(json: &mut serde_json::Value, metric: MetricArg) {
    let Some(obj) = json.as_object_mut() else { return };
    match metric {
        MetricArg::Bw => {
            for k in ["gamma", "gamma_nodes", "lambda_nodes", "gamma_witnesses", "formula_gamma_opt"] {
                obj.remove(k);
            }
        }
        MetricArg::Io => {
            for k in ["beta", "beta_nodes", "alpha_nodes", "beta_witnesses", "formula_beta_opt"] {
                obj.remove(k);
            }
        }
        MetricArg::Both => {}
    }
}

struct SweepRow {
    q: u32,
    n: u32,
    metric: Metric,
    formula: u32,
    measured: u32,
    matches: bool,
}

fn sweep_cell(q: u32, n: u32, metric: Metric) -> anyhow::Result<SweepRow> {
    let built = construct_optimal(q, n, metric)?;
    let report = repair::cost_report(&built.code)?;
    let (formula, measured) = match metric {
        Metric::Bandwidth => (formulas::beta_opt(q, n)?, report.beta),
        Metric::Io => (formulas::gamma_opt(q, n)?, report.gamma),
    };
    Ok(SweepRow { q, n, metric, formula, measured, matches: formula == measured })
}

fn sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let mut cells = Vec::new();
    for q in 2..=args.qmax {
        if prime_power(q).is_none() {
            continue;
        }
        // n never exceeds 2q+2 here, so the q^2+1 cap only matters for
        // tiny q and stays comfortably inside u32
        for n in 3..=(q.saturating_mul(q).saturating_add(1)).min(2 * q + 2) {
            if constructions::is_constructible(q, n, Metric::Bandwidth) {
                cells.push((q, n, Metric::Bandwidth));
            }
        }
        for n in 3..=(q.saturating_mul(q).saturating_add(1)).min(2 * q + 1) {
            if constructions::is_constructible(q, n, Metric::Io) {
                cells.push((q, n, Metric::Io));
            }
        }
    }
    let rows: Vec<anyhow::Result<SweepRow>> = pool.install(|| {
        use rayon::prelude::*;
        cells.par_iter().map(|&(q, n, m)| sweep_cell(q, n, m)).collect()
    });

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "q,n,metric,formula,measured,match")?;
    let mut all_match = true;
    for row in rows {
        let row = row?;
        all_match &= row.matches;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.q, row.n, row.metric, row.formula, row.measured, row.matches
        )?;
    }

    if args.slow {
        for (q, n) in slow_template_cells() {
            let built = construct_optimal(q, n, Metric::Bandwidth)?;
            let beta = exact_beta(&built.code)?;
            let formula = formulas::beta_opt(q, n)?;
            all_match &= beta == formula;
            writeln!(out, "{q},{n},bw,{formula},{beta},{}", beta == formula)?;
        }
    }
    Ok(if all_match { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// The exceptional-length witness cells beyond the q <= 9 sweep.
fn slow_template_cells() -> Vec<(u32, u32)> {
    let mut qs: Vec<u32> = vec![16, 27, 32, 64, 81, 7, 11, 25];
    for q in 13..=81u32 {
        if let Some((p, _)) = prime_power(q) {
            if p != 2 && p != 3 && q != 25 && q >= 13 {
                qs.push(q);
            }
        }
    }
    qs.sort_unstable();
    let mut cells = Vec::new();
    for q in qs {
        for n in [9u32, 10] {
            if constructions::is_constructible(q, n, Metric::Bandwidth)
                && (formulas::beta_opt(q, n) == Ok(n))
            {
                cells.push((q, n));
            }
        }
    }
    cells
}

/// Exact worst-case bandwidth by the cheapest exact oracle for the field
/// size: full double-oracle enumeration up to GF(16), the point-pair
/// kernel enumeration above (exact for MDS codes, and cross-checked
/// against the full oracles in the test suite).
fn exact_beta(code: &ArrayCode) -> anyhow::Result<u32> {
    if code.ctx().q() <= 16 {
        Ok(repair::cost_report(code)?.beta)
    } else {
        let mut beta = 0;
        for i in 0..code.n() {
            beta = beta.max(repair::beta_node_pairs(code, i)?);
        }
        Ok(beta)
    }
}

fn run_search(
    case: SearchCase,
    family: Option<FamilyArg>,
    q: Option<u32>,
    resume: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    if case == SearchCase::Witness {
        let family = match family {
            Some(FamilyArg::Even) => WitnessFamily::Even,
            Some(FamilyArg::Char3) => WitnessFamily::Char3,
            Some(FamilyArg::Odd) => WitnessFamily::Odd,
            None => anyhow::bail!("search witness needs --family even|char3|odd"),
        };
        let q = q.ok_or_else(|| anyhow::anyhow!("search witness needs --q"))?;
        match search::search_witness(family, q) {
            Ok(s) => {
                println!("{}", serde_json::json!({"case": "witness", "q": q, "parameter": s}));
                Ok(ExitCode::SUCCESS)
            }
            Err(search::SearchError::NotFound(_)) => {
                println!("{}", serde_json::json!({"case": "witness", "q": q, "parameter": null}));
                Ok(ExitCode::from(1))
            }
            Err(other) => Err(other.into()),
        }
    } else {
        let case_name = match case {
            SearchCase::N5q5 => "n5q5",
            SearchCase::N10q8 => "n10q8",
            SearchCase::N10q9 => "n10q9",
            SearchCase::N9q8 => "n9q8",
            SearchCase::Witness => unreachable!(),
        };
        let checkpoint_path = resume.or_else(|| {
            std::env::var_os("MDS22_CACHE_DIR").map(|dir| {
                let mut p = PathBuf::from(dir);
                p.push(format!("{case_name}.checkpoint.json"));
                p
            })
        });
        let opts = search::SearchOptions { checkpoint_path, resume: true };
        eprintln!("running {case_name} (checkpoint: {:?})", opts.checkpoint_path);
        let verdict: SearchVerdict = match case {
            SearchCase::N5q5 => search::exhaust_n5_q5(&opts)?,
            SearchCase::N10q8 => search::exhaust_n10(8, &opts)?,
            SearchCase::N10q9 => search::exhaust_n10(9, &opts)?,
            SearchCase::N9q8 => search::exhaust_n9_q8(&opts)?,
            SearchCase::Witness => unreachable!(),
        };
        println!("{}", serde_json::to_string_pretty(&verdict)?);
        Ok(ExitCode::SUCCESS)
    }
}
