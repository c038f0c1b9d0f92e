use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lrauzy_core::export::{to_dot, to_json};
use lrauzy_core::fib::default_search_bound;
use lrauzy_core::verify::{self, Check, VerifyConfig};
use lrauzy_core::word::{factors, fibonacci_prefix, occurrences};
use lrauzy_core::{
    build_debruijn, build_hrr, build_l_rauzy, build_rauzy, location_form, DirectedGraph, HrrVariant,
    LocationForm, Source, Word, WitnessSearch,
};

/// Build and check Rauzy-type graphs of infinite binary words.
#[derive(Parser)]
#[command(name = "lrauzy", version, about)]
struct Args {
    /// Largest word prefix any command may generate, in letters.
    #[arg(long, env = "LRAUZY_MAX_PREFIX", default_value_t = 50_000_000, global = true)]
    max_prefix: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one graph and write it as DOT or JSON.
    Build {
        #[arg(long, default_value = "fibonacci")]
        word: Source,
        #[arg(long)]
        k: usize,
        /// Overlap length; required for l-rauzy graphs.
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphArg::LRauzy)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep 2 <= k <= k-max, 1 <= ell < k and report each instance as a JSON line.
    Verify {
        #[arg(long, default_value = "fibonacci")]
        word: Source,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 30)]
        k_max: usize,
        /// Comma-separated checks, or "all".
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long)]
        search_bound: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form positions of a factor of the Fibonacci word.
    Locate {
        factor: Word,
        #[arg(long, default_value_t = 10)]
        t_max: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Reachability witnesses for every vertex of an l-Rauzy graph of the Fibonacci word.
    Witness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        search_bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// List the length-k factors of a word in first-occurrence order.
    Factors {
        #[arg(long, default_value = "fibonacci")]
        word: Source,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    LRauzy,
    Rauzy,
    Debruijn,
    HrrEven,
    HrrOddI,
    HrrOddIi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

fn check_cap(need: usize, cap: usize) -> Result<()> {
    ensure!(
        need <= cap,
        "a prefix of {need} letters is needed but LRAUZY_MAX_PREFIX is {cap}"
    );
    Ok(())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn build_graph(word: &Source, k: usize, ell: Option<usize>, graph: GraphArg, cap: usize) -> Result<DirectedGraph> {
    let prefix = |len: usize| -> Result<_> {
        check_cap(word.sufficient_len(len), cap)?;
        Ok(word.prefix_for_factors(len)?)
    };
    let g = match graph {
        GraphArg::LRauzy => {
            let ell = ell.context("--ell is required for l-rauzy graphs")?;
            ensure!(ell >= 1 && ell < k, "ell must satisfy 1 <= ell <= k-1 (k={k}, ell={ell})");
            build_l_rauzy(&prefix(2 * k - ell)?, k, ell)?
        }
        GraphArg::Rauzy => build_rauzy(&prefix(k + 1)?, k)?,
        GraphArg::Debruijn => build_debruijn(k)?,
        GraphArg::HrrEven | GraphArg::HrrOddI | GraphArg::HrrOddIi => {
            let variant = match graph {
                GraphArg::HrrEven => HrrVariant::Even,
                GraphArg::HrrOddI => HrrVariant::OddI,
                _ => HrrVariant::OddII,
            };
            ensure!(k >= 2, "half-range graphs need k >= 2");
            let overlap = variant.overlap(k);
            build_hrr(&prefix(2 * k - overlap.min(k))?, k, variant)?
        }
    };
    Ok(g)
}

fn cmd_verify(config: VerifyConfig, out: Option<&PathBuf>, cap: usize) -> Result<ExitCode> {
    ensure!(config.k_max >= 2, "--k-max must be at least 2");
    check_cap(config.word.sufficient_len(2 * config.k_max - 1), cap)?;
    let report = verify::run(&config)?;
    emit(&report.to_json_lines(), out)?;
    let summary = report.summary();
    if summary.passed {
        eprintln!(
            "verify: {} instances passed ({} expected deviations)",
            summary.instances, summary.expected_deviations
        );
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verify: {} of {} instances failed", summary.failed, summary.instances);
        for (inst, outcome) in report.failures().take(5) {
            eprintln!("  k={} ell={} {}: {}", inst.k, inst.ell, outcome.check, outcome.detail);
            if let Some(cmd) = &inst.reproduce {
                eprintln!("    reproduce: {cmd}");
            }
        }
        Ok(ExitCode::FAILURE)
    }
}

#[derive(Serialize)]
struct LocateReport {
    factor: Word,
    j: usize,
    k: usize,
    form: LocationForm,
    positions: Vec<usize>,
    scan_verified: bool,
}

fn cmd_locate(factor: Word, t_max: usize, format: ReportFormat, cap: usize) -> Result<ExitCode> {
    let k = factor.len();
    ensure!(k >= 2, "locate needs a factor of length at least 2");
    let src = Source::Fibonacci;
    check_cap(src.sufficient_len(k), cap)?;
    let fs = factors(&src.prefix_for_factors(k)?, k)?;
    let Some(index) = fs.index_of(&factor) else {
        bail!("{factor} is not a factor of the Fibonacci word");
    };
    let j = index + 1;
    let form = location_form(j, k)?;
    let positions = form.positions(t_max)?;
    let last = *positions.last().expect("t = 0 always yields a position");
    check_cap(last + k, cap)?;
    let scanned: Vec<usize> = occurrences(&fibonacci_prefix(last + k - 1), &factor)
        .positions
        .into_iter()
        .take_while(|&p| p <= last)
        .collect();
    let scan_verified = scanned == positions;
    let report = LocateReport {
        factor,
        j,
        k,
        form,
        positions,
        scan_verified,
    };
    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string(&report)?),
        ReportFormat::Text => {
            let list: Vec<String> = report.positions.iter().map(usize::to_string).collect();
            println!("factor    {}", report.factor);
            println!("j         {}", report.j);
            println!("k         {}", report.k);
            println!("form      (b, c, d) = ({}, {}, {})", form.b, form.c, form.d);
            println!("positions {}", list.join(", "));
            println!("scan      {}", if scan_verified { "verified" } else { "MISMATCH" });
        }
    }
    Ok(if scan_verified { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_witness(k: usize, ell: usize, bound: Option<usize>, format: ReportFormat, cap: usize) -> Result<ExitCode> {
    ensure!(k >= 2 && ell >= 1 && ell < k, "need k >= 2 and 1 <= ell <= k-1 (k={k}, ell={ell})");
    check_cap(Source::Fibonacci.sufficient_len(k), cap)?;
    let bound = bound.unwrap_or_else(|| default_search_bound(k, ell));
    let search = WitnessSearch::new(k, ell)?;
    let mut ok = true;
    for (j, found) in (1..).zip(search.all(bound)) {
        match found {
            Ok(w) => {
                ok &= w.verified;
                match format {
                    ReportFormat::Json => println!("{}", serde_json::to_string(&w)?),
                    ReportFormat::Text => println!(
                        "v{:<3} {}  t={:<4} m={:<5} position={:<6} {}",
                        w.j,
                        w.factor,
                        w.t,
                        w.m,
                        w.position,
                        if w.verified { "verified" } else { "NOT VERIFIED" }
                    ),
                }
            }
            Err(e) => {
                ok = false;
                eprintln!("v{j}: {e}");
            }
        }
    }
    if ok {
        eprintln!("all {} vertices lie on the walk from v1 (step {})", k + 1, k - ell);
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("witness search failed for (k={k}, ell={ell}) within t <= {bound}");
        Ok(ExitCode::FAILURE)
    }
}

fn main() -> Result<ExitCode> {
    let args = Args::parse();
    let cap = args.max_prefix;
    match args.command {
        Command::Build {
            word,
            k,
            ell,
            graph,
            format,
            out,
        } => {
            let g = build_graph(&word, k, ell, graph, cap)?;
            let source = (!matches!(graph, GraphArg::Debruijn)).then_some(&word);
            let text = match format {
                Format::Dot => to_dot(&g),
                Format::Json => to_json(&g, source),
            };
            emit(&text, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            word,
            k_min,
            k_max,
            checks,
            search_bound,
            out,
        } => {
            let mut config = VerifyConfig::new(word, k_max);
            config.k_min = k_min;
            config.checks = Check::parse_list(&checks).map_err(anyhow::Error::msg)?;
            config.search_bound = search_bound;
            cmd_verify(config, out.as_ref(), cap)
        }
        Command::Locate { factor, t_max, format } => cmd_locate(factor, t_max, format, cap),
        Command::Witness {
            k,
            ell,
            search_bound,
            format,
        } => cmd_witness(k, ell, search_bound, format, cap),
        Command::Factors { word, k } => {
            ensure!(k >= 1, "k must be at least 1");
            check_cap(word.sufficient_len(k), cap)?;
            let fs = factors(&word.prefix_for_factors(k)?, k)?;
            let mut out = String::new();
            for (j, (u, first)) in fs.iter().enumerate() {
                out.push_str(&format!("{}\t{u}\t{first}\n", j + 1));
            }
            emit(&out, None)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
