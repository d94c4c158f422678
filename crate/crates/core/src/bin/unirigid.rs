use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use unirigid::bracket::Schedule;
use unirigid::harness::{
    codim_csv, generate_instances, merge_reports, read_jsonl, run_suite, solve_g2, solve_hp, ExperimentConfig,
    G2Deck, HeisDeck, HpDeck, SuiteName,
};

#[derive(Parser, Debug)]
#[command(name = "unirigid", version, about = "Bracket-space audits and rigidity solvers over F_q((t))")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    #[arg(long, global = true, default_value_t = 1)]
    d: u32,
    #[arg(long, global = true, default_value_t = 3)]
    e: u64,
    /// Heisenberg rank, or the maximal degree for qsep-count.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Window schedule "D:N,D:N,..."; each suite has its own default.
    #[arg(long, global = true)]
    schedule: Option<String>,
    /// Write JSON (JSONL for verify) here instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a suite ("all" runs every suite) and exit nonzero on any failure.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Comma-separated Q values.
        #[arg(long, value_delimiter = ',', default_value = "3,9")]
        q: Vec<u64>,
        /// Comma-separated codimensions k.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        k: Vec<usize>,
        /// Constraint depth D (default 2k+1).
        #[arg(long)]
        depth: Option<usize>,
        /// Comma-separated Frobenius exponents n.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<u32>,
        /// Also write the codimension table as CSV.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Solve an input deck.
    Solve {
        kind: SolveKind,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print generated instances of a suite.
    Gen {
        kind: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_value = "3,9")]
        q: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        k: Vec<usize>,
    },
    /// Summarize JSONL reports.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        merge: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolveKind {
    G2,
    Heis,
    Hp,
}

fn config(g: &Global, trials: usize, qs: Vec<u64>, ks: Vec<usize>) -> Result<ExperimentConfig> {
    let schedule = g.schedule.as_deref().map(Schedule::parse).transpose()?;
    Ok(ExperimentConfig {
        p: g.p,
        d: g.d,
        e: g.e,
        m: g.m,
        qs,
        schedule,
        ks,
        trials,
        seed: g.seed,
        ..ExperimentConfig::default()
    })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_deck<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(f).with_context(|| format!("parsing deck {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match cli.cmd {
        Cmd::Verify { suite, trials, q, k, depth, n, csv_out } => {
            let mut cfg = config(g, trials, q, k)?;
            cfg.depth = depth;
            cfg.ns = n;
            let names: Vec<SuiteName> =
                if suite == "all" { SuiteName::ALL.to_vec() } else { vec![suite.parse()?] };
            cfg.suites = names.clone();
            let mut out = output(&g.json_out)?;
            let mut csv = csv_out.map(File::create).transpose()?;
            let mut ok = true;
            for name in names {
                let report = run_suite(name.as_str(), &cfg)?;
                report.write_jsonl(&mut out)?;
                if let Some(w) = csv.as_mut() {
                    codim_csv(&report, w)?;
                }
                eprintln!(
                    "{:<15} {:>4}/{:<4} {} ({} ms)",
                    name.as_str(),
                    report.passed,
                    report.total,
                    if report.all_passed() { "PASS" } else { "FAIL" },
                    report.elapsed_ms
                );
                for (key, v) in &report.fitted {
                    eprintln!("  {key} = {v}");
                }
                ok &= report.all_passed();
            }
            out.flush()?;
            Ok(ok)
        }
        Cmd::Solve { kind, input } => {
            let mut out = output(&g.json_out)?;
            let value = match kind {
                SolveKind::G2 => serde_json::to_value(solve_g2(&read_deck::<G2Deck>(&input)?)?)?,
                SolveKind::Heis => serde_json::to_value(read_deck::<HeisDeck>(&input)?.solve()?)?,
                SolveKind::Hp => {
                    let sol = solve_hp(&read_deck::<HpDeck>(&input)?)?;
                    if sol.reproduced != sol.total {
                        bail!("recomposition reproduced {}/{} samples", sol.reproduced, sol.total);
                    }
                    serde_json::to_value(sol)?
                }
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
            Ok(true)
        }
        Cmd::Gen { kind, trials, q, k } => {
            let suite: SuiteName = kind.parse()?;
            let cfg = config(g, trials, q, k)?;
            cfg.check_for(suite)?;
            let instances = generate_instances(suite, &cfg, cfg.seed)?;
            let mut out = output(&g.json_out)?;
            for inst in instances {
                writeln!(out, "{}", serde_json::to_string(&inst)?)?;
            }
            Ok(true)
        }
        Cmd::Report { merge } => {
            let reports = merge.iter().map(|p| read_jsonl(p)).collect::<Result<Vec<_>, _>>()?;
            let summary = merge_reports(&reports)?;
            let mut out = output(&g.json_out)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            Ok(summary.all_passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
