// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rarenet::archlib::{export_netlist, import_netlist};
use rarenet::cli_report::{
    curve_csv, locate, operand_stats, reports_csv, run, to_json, ArchSpec, ExperimentConfig,
    SimOptions,
};
use rarenet::estimator::{compare_thresholds, estimate_for, sweep_bp1, unsimulated_report};
use rarenet::stimgen::{generate, StimulusStream};
use rarenet::toggle_sim::{export_activity, rare_nets, simulate};
use rarenet::Error;

#[derive(Parser)]
#[command(name = "rarenet", version, about = "Rare-switching net estimation for arithmetic datapaths")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Stimulus length.
    #[arg(long, global = true)]
    vectors: Option<usize>,
    /// Toggle-probability threshold; repeatable.
    #[arg(long = "threshold", global = true)]
    thresholds: Vec<f64>,
    /// Design as kind:width, e.g. rca:16; repeatable.
    #[arg(long = "arch", global = true)]
    archs: Vec<ArchSpec>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Estimation only.
    #[arg(long, global = true)]
    no_sim: bool,
}

/// Operand statistics; both operands share them and get independent streams.
#[derive(Args, Clone)]
struct StatsArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mean: f64,
    #[arg(long, conflicts_with = "bp1")]
    sigma: Option<f64>,
    /// Solve sigma so that the MSB region starts at this bit.
    #[arg(long)]
    bp1: Option<u32>,
    #[arg(long, default_value_t = 0.99, allow_negative_numbers = true)]
    rho: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Write one correlated stimulus stream.
    GenVectors {
        #[arg(long)]
        width: u32,
        #[command(flatten)]
        stats: StatsArgs,
    },
    /// Write netlist text for each --arch.
    BuildNetlist,
    /// Simulate a netlist file over two stimulus files; writes activity CSV.
    Simulate {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Analytical rare-net estimate for each --arch.
    Estimate {
        #[command(flatten)]
        stats: StatsArgs,
    },
    /// Estimate, simulate and report the error per threshold.
    Compare {
        #[command(flatten)]
        stats: StatsArgs,
    },
    /// Error against bp1 for each --arch.
    Sweep {
        #[arg(long, default_value_t = 0.99, allow_negative_numbers = true)]
        rho: f64,
        /// bp1 targets, comma separated; defaults to 6..13 at 16 bits and
        /// above, 3..6 below.
        #[arg(long, value_delimiter = ',')]
        targets: Vec<u32>,
    },
    /// List the estimated vulnerable region and the simulated rare nets.
    Locate {
        #[command(flatten)]
        stats: StatsArgs,
    },
    /// Run a configuration batch (the built-in 20-design batch by default).
    Replicate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::InvalidStats(_)
            | Error::CorrelationDomain(_)
            | Error::UnsupportedWidth { .. }
            | Error::UnknownArchitecture(_)
            | Error::InvalidThreshold(_)
            | Error::UnsolvableSigma { .. }
            | Error::Empty(_)
    )
}

fn emit(out: Option<&Path>, text: &str) -> rarenet::Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| io(parent, e))?;
            }
            std::fs::write(path, text).map_err(|e| io(path, e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn io(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn need_archs(cli: &Cli) -> rarenet::Result<&[ArchSpec]> {
    if cli.archs.is_empty() {
        Err(Error::Config("at least one --arch kind:width is required".into()))
    } else {
        Ok(&cli.archs)
    }
}

fn thresholds(cli: &Cli, default: f64) -> Vec<f64> {
    if cli.thresholds.is_empty() {
        vec![default]
    } else {
        cli.thresholds.clone()
    }
}

fn dispatch(cli: &Cli) -> rarenet::Result<ExitCode> {
    let seed = cli.seed.unwrap_or(1);
    let vectors = cli.vectors.unwrap_or(10_000);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::GenVectors { width, stats } => {
            let s = operand_stats(*width, stats.mean, stats.sigma, stats.bp1, stats.rho)?;
            emit(out, &generate(&s, vectors, seed)?.to_text())?;
        }
        Command::BuildNetlist => {
            let archs = need_archs(cli)?;
            for spec in archs {
                let text = export_netlist(&spec.build()?)?;
                match out {
                    Some(dir) => {
                        let path = dir.join(format!("{}.net", spec.name()));
                        emit(Some(&path), &text)?;
                        println!("{}", path.display());
                    }
                    None => print!("{text}"),
                }
            }
        }
        Command::Simulate { netlist, a, b } => {
            let text = std::fs::read_to_string(netlist).map_err(|e| io(netlist, e))?;
            let n = import_netlist(&text)?;
            let profile = simulate(&n, &StimulusStream::read(a)?, &StimulusStream::read(b)?)?;
            emit(out, &export_activity(&profile, &n)?)?;
            for t in &cli.thresholds {
                eprintln!("threshold {t}: {} rare nets", rare_nets(&profile, *t)?.len());
            }
        }
        Command::Estimate { stats } => {
            let mut reports = Vec::new();
            for spec in need_archs(cli)? {
                let n = spec.build()?;
                let s = operand_stats(spec.width, stats.mean, stats.sigma, stats.bp1, stats.rho)?;
                reports.push(unsimulated_report(&estimate_for(&n, &s, &s)?, &s, &s));
            }
            emit(out, &reports_csv(&reports)?)?;
        }
        Command::Compare { stats } => {
            let mut reports = Vec::new();
            for spec in need_archs(cli)? {
                let n = spec.build()?;
                let s = operand_stats(spec.width, stats.mean, stats.sigma, stats.bp1, stats.rho)?;
                if cli.no_sim {
                    reports.push(unsimulated_report(&estimate_for(&n, &s, &s)?, &s, &s));
                } else {
                    let ts = thresholds(cli, 1e-4);
                    reports.extend(compare_thresholds(&n, &s, &s, &ts, vectors, seed)?.0);
                }
            }
            emit(out, &reports_csv(&reports)?)?;
        }
        Command::Sweep { rho, targets } => {
            let threshold = thresholds(cli, 1e-4)[0];
            let mut text = String::new();
            for (i, spec) in need_archs(cli)?.iter().enumerate() {
                let targets: Vec<u32> = if !targets.is_empty() {
                    targets.clone()
                } else if spec.width >= 16 {
                    (6..=13).collect()
                } else {
                    (3..=6).collect()
                };
                let sweep = sweep_bp1(&spec.build()?, *rho, threshold, &targets, vectors, seed)?;
                eprintln!("{}: mean error {:.4}", spec.name(), sweep.mean_error);
                let csv = curve_csv(&sweep)?;
                // one header for the combined table
                let body = if i == 0 { &csv[..] } else { csv.split_once('\n').map_or("", |x| x.1) };
                text.push_str(body);
            }
            emit(out, &text)?;
        }
        Command::Locate { stats } => {
            let sim = (!cli.no_sim).then(|| SimOptions {
                threshold: thresholds(cli, 1e-5)[0],
                vectors,
                seed,
            });
            for spec in need_archs(cli)? {
                let n = spec.build()?;
                let s = operand_stats(spec.width, stats.mean, stats.sigma, stats.bp1, stats.rho)?;
                let listing = locate(&n, &s, &s, sim)?;
                if let Some(dir) = out {
                    emit(Some(&dir.join(format!("{}.json", spec.name()))), &to_json(&listing))?;
                }
                print!("{listing}");
            }
        }
        Command::Replicate => {
            let mut cfg = match &cli.config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::replication(),
            };
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(v) = cli.vectors {
                cfg.vectors = v;
            }
            if !cli.thresholds.is_empty() {
                cfg.thresholds = cli.thresholds.clone();
            }
            if !cli.archs.is_empty() {
                cfg.architectures = cli.archs.clone();
                let widths: Vec<u32> = cfg.architectures.iter().map(|a| a.width).collect();
                cfg.sweeps.retain(|s| widths.contains(&s.width));
            }
            if let Some(o) = out {
                cfg.output_dir = o.to_path_buf();
            }
            if cli.no_sim {
                cfg.simulate = false;
            }
            cfg.validate()?;
            let outcome = run(&cfg)?;
            let summary = std::fs::read_to_string(outcome.output_dir.join("summary.md"))
                .map_err(|e| io(&outcome.output_dir, e))?;
            print!("{summary}");
            if !outcome.manifest.complete() {
                for d in outcome.manifest.designs.iter().filter(|d| d.error.is_some()) {
                    eprintln!(
                        "{}: failed in {}: {}",
                        d.design,
                        d.failed_phase.as_deref().unwrap_or("?"),
                        d.error.as_deref().unwrap_or("")
                    );
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
