use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use greedy_scs::disturb::{
    choose_m_for_gap_with, disturb, disturb_report, step_roles, DisturbParams, DisturbVariant,
    DEFAULT_M_CAP,
};
use greedy_scs::gen::{random_dataset, tie_rich_dataset, worst_case_family, Generated};
use greedy_scs::greedy::{run_greedy, run_greedy_sharp, TieBreakPolicy};
use greedy_scs::oracle::{approx_ratio, exact_scs_sharp_with_cap, exact_scs_with_cap, DEFAULT_CAP};
use greedy_scs::verify::{run_suite, SuiteConfig};
use greedy_scs::Dataset;

const DEFAULT_MAX_TOTAL_LEN: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "scs",
    version,
    about = "Greedy shortest common superstring experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    WorstCase,
    Random,
    TieRich,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated dataset in the text format.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        len_min: usize,
        #[arg(long, default_value_t = 8)]
        len_max: usize,
        #[arg(long, default_value_t = 3)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        overlap_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run greedy and print the result document.
    Greedy {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "first")]
        policy: TieBreakPolicy,
    },
    /// Run frequency greedy and print the result document.
    GreedySharp {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        important: char,
        #[arg(long, default_value = "first")]
        policy: TieBreakPolicy,
    },
    /// Disturb a dataset along a greedy trace.
    Disturb {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "first")]
        policy: TieBreakPolicy,
        /// Defaults to the smallest valid value, or to the gap search with --lambda.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = '$')]
        sentinel: char,
        #[arg(long, default_value = "base")]
        variant: DisturbVariant,
        /// Search for the smallest m on the doubling schedule preserving
        /// |greedy| > lambda |OPT|.
        #[arg(long, value_parser = parse_ratio)]
        lambda: Option<Ratio<u64>>,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_TOTAL_LEN)]
        max_total_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sidecar report; defaults to `<out>.report.json` when --out is set.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Solve exactly.
    Oracle {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        important: Option<char>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Compare every built-in policy against the exact optimum.
    Ratio {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Run the property suite over seeded random datasets.
    Verify {
        /// Inclusive range `a..b` or a single seed.
        #[arg(long, default_value = "1..100", value_parser = parse_seeds)]
        seeds: std::ops::RangeInclusive<u64>,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        len_max: usize,
    },
    /// Time greedy and the exact solver on growing random datasets.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 15)]
        n_max: usize,
    },
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in `{s}`"))?;
    let q: u64 = q
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in `{s}`"))?;
    if q == 0 {
        return Err("zero denominator".into());
    }
    Ok(Ratio::new(p, q))
}

fn parse_seeds(s: &str) -> Result<std::ops::RangeInclusive<u64>, String> {
    let bad = || format!("expected `a..b` or a single seed, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.parse().map_err(|_| bad())?;
            let b: u64 = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a: u64 = s.parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

fn load(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Dataset::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// `Ok(true)` on success, `Ok(false)` on a verification failure.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            family,
            n,
            seed,
            len_min,
            len_max,
            alphabet,
            overlap_len,
            out,
        } => {
            let Generated { dataset, dropped } = match family {
                Family::WorstCase => worst_case_family(n)?,
                Family::Random => random_dataset(seed, n, len_min, len_max, alphabet)?,
                Family::TieRich => tie_rich_dataset(seed, n, overlap_len)?,
            };
            if !dropped.is_empty() {
                eprintln!("normalization dropped {} string(s)", dropped.len());
            }
            emit(&dataset.to_text(), out.as_deref())?;
        }
        Command::Greedy { dataset, policy } => {
            let d = load(&dataset)?;
            println!("{}", run_greedy(&d, policy).to_json());
        }
        Command::GreedySharp {
            dataset,
            important,
            policy,
        } => {
            let d = load(&dataset)?;
            println!("{}", run_greedy_sharp(&d, important, policy).to_json());
        }
        Command::Disturb {
            dataset,
            policy,
            m,
            sentinel,
            variant,
            lambda,
            m_cap,
            max_total_len,
            out,
            report,
        } => {
            let d = load(&dataset)?;
            if d.total_len() > max_total_len {
                bail!(
                    "dataset total length {} exceeds --max-total-len {max_total_len}",
                    d.total_len()
                );
            }
            let trace = run_greedy(&d, policy).trace;
            let roles = step_roles(&trace, d.len());
            let m = match (m, lambda) {
                (Some(m), _) => m,
                (None, Some(lambda)) => {
                    if variant != DisturbVariant::Base {
                        bail!("--lambda searches the base variant only");
                    }
                    let w = choose_m_for_gap_with(&d, &trace, lambda, sentinel, m_cap)?;
                    eprintln!(
                        "gap preserved at m = {}: greedy {}, opt {}",
                        w.m, w.greedy_len, w.opt_len
                    );
                    w.m
                }
                (None, None) => variant.min_m(d.len()),
            };
            if m > m_cap {
                bail!("m = {m} exceeds --m-cap {m_cap}");
            }
            let params = DisturbParams {
                m,
                sentinel,
                variant,
            };
            let disturbed = disturb(&d, &roles, &params)?;
            emit(&disturbed.to_text(), out.as_deref())?;
            let report_path = report.or_else(|| {
                out.as_ref()
                    .map(|o| PathBuf::from(format!("{}.report.json", o.display())))
            });
            if let Some(path) = report_path {
                let rep = disturb_report(&d, &disturbed, &roles, &params);
                let body = serde_json::to_string_pretty(&rep)?;
                fs::write(&path, body + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                if !rep.mismatches.is_empty() {
                    eprintln!("predicted/actual overlap mismatches: {:?}", rep.mismatches);
                    return Ok(false);
                }
            }
        }
        Command::Oracle {
            dataset,
            important,
            cap,
        } => {
            let d = load(&dataset)?;
            match important {
                None => {
                    let r = exact_scs_with_cap(&d, cap)?;
                    println!("length {}", r.length);
                    println!("permutation {}", join(&r.permutation));
                    println!("superstring {}", r.superstring);
                }
                Some(c) => {
                    let r = exact_scs_sharp_with_cap(&d, c, cap)?;
                    println!("sharp_length {}", r.sharp_length);
                    println!("length {}", r.length);
                    println!("permutation {}", join(&r.permutation));
                    println!("superstring {}", r.superstring);
                }
            }
        }
        Command::Ratio { dataset, seed, cap } => {
            let d = load(&dataset)?;
            let opt = exact_scs_with_cap(&d, cap)?.length;
            for p in TieBreakPolicy::builtin(seed) {
                let g = run_greedy(&d, p).superstring.len();
                println!(
                    "{p}: greedy {g}, opt {opt}, ratio {}",
                    approx_ratio(g, opt)?
                );
            }
        }
        Command::Verify {
            seeds,
            n_max,
            len_max,
        } => {
            if n_max < 2 {
                bail!("--n-max must be at least 2");
            }
            let report = run_suite(&SuiteConfig {
                seeds,
                n_max,
                len_max,
            })?;
            print!("{}", report.render());
            return Ok(report.passed());
        }
        Command::Bench { seed, n_max } => {
            println!("{:>3} {:>7} {:>7} {:>7}", "n", "total", "greedy", "opt");
            for n in 2..=n_max {
                let d = random_dataset(seed.wrapping_add(n as u64), n, 10, 12, 4)?.dataset;
                let t0 = Instant::now();
                let g = run_greedy(&d, TieBreakPolicy::FirstPair).superstring.len();
                let t1 = Instant::now();
                let o = exact_scs_with_cap(&d, n_max.max(DEFAULT_CAP))?.length;
                let t2 = Instant::now();
                println!("{:>3} {:>7} {:>7} {:>7}", d.len(), d.total_len(), g, o);
                eprintln!("n={} greedy {:?} oracle {:?}", d.len(), t1 - t0, t2 - t1);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
