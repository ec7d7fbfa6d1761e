// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration, the batch runner and report files.
//!
//! A run writes, under `output_dir`:
//!
//! ```text
//! config.toml                 effective configuration
//! netlists/<arch><N>.net      netlist text
//! stimulus/w<N>_{a,b}.txt     operand streams shared by every N-bit design
//! activity/<arch><N>.csv      per-net toggles of the comparison run
//! reports/<arch><N>.json      estimate, per-threshold reports, sweep
//! reports/compare.csv         one row per design and threshold
//! curves/<arch><N>.csv        error against bp1 for designs with a sweep
//! summary.csv, summary.md     mean error per design
//! manifest.json               every file written plus per-design status
//! ```
//!
//! Designs run in parallel; files are assembled in configuration order and
//! written in one pass, so equal configurations give byte-identical trees.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::archlib::{export_netlist, Arch, Netlist};
use crate::error::{Error, Result};
use crate::estimator::{
    estimate_for, mean_error, operand_seeds, report_from_profile, sigma_for_bp1, sweep_bp1,
    unsimulated_report, Estimate, RareNetReport, Sweep,
};
use crate::stats::{breakpoints, WordStats};
use crate::stimgen::{generate, StimulusStream};
use crate::toggle_sim::{export_activity, simulate, ToggleProfile};

/// The built-in ten-architecture, two-width batch.
pub const REPLICATION_CONFIG: &str = include_str!("../configs/replicate.toml");

/// `kind:width`, e.g. `rca:16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ArchSpec {
    pub arch: Arch,
    pub width: u32,
}

impl ArchSpec {
    pub fn build(&self) -> Result<Netlist> {
        self.arch.build(self.width)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.arch, self.width)
    }
}

impl FromStr for ArchSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, width) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("expected kind:width, got `{s}`")))?;
        let arch: Arch = kind.parse()?;
        let width: u32 = width
            .parse()
            .map_err(|_| Error::Config(format!("bad width in `{s}`")))?;
        if !arch.supported_widths().contains(&width) {
            return Err(Error::UnsupportedWidth {
                kind: arch.to_string(),
                width,
            });
        }
        Ok(ArchSpec { arch, width })
    }
}

impl TryFrom<String> for ArchSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ArchSpec> for String {
    fn from(a: ArchSpec) -> String {
        a.to_string()
    }
}

impl fmt::Display for ArchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.arch, self.width)
    }
}

/// Width-free operand statistics, instantiated per design width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperandStats {
    #[serde(default)]
    pub mean: f64,
    pub std_dev: f64,
    pub rho: f64,
}

impl OperandStats {
    pub fn at(&self, width: u32) -> Result<WordStats> {
        WordStats::new(self.mean, self.std_dev, self.rho, width)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub width: u32,
    pub rho: f64,
    pub threshold: f64,
    pub bp1_targets: Vec<u32>,
}

fn default_thresholds() -> Vec<f64> {
    vec![1e-6, 1e-5, 1e-4, 1e-3, 1e-2]
}

fn default_vectors() -> usize {
    10_000
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub architectures: Vec<ArchSpec>,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    #[serde(default = "default_vectors")]
    pub vectors: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// When false only the analytical estimates are produced.
    #[serde(default = "yes")]
    pub simulate: bool,
    pub stats_a: OperandStats,
    pub stats_b: OperandStats,
    #[serde(default)]
    pub sweeps: Vec<SweepSpec>,
}

impl ExperimentConfig {
    /// Parses and validates.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn replication() -> Self {
        Self::from_toml(REPLICATION_CONFIG).expect("built-in config is valid")
    }

    /// Rejects anything the runner would otherwise fail on midway.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.architectures.is_empty() {
            return bad("no architectures".into());
        }
        if self.vectors < 2 {
            return bad(format!("vectors = {} (need at least 2)", self.vectors));
        }
        if self.thresholds.is_empty() {
            return bad("no thresholds".into());
        }
        if let Some(t) = self.thresholds.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return bad(format!("threshold {t} outside [0, 1]"));
        }
        let mut widths: Vec<u32> = self.architectures.iter().map(|a| a.width).collect();
        widths.sort_unstable();
        widths.dedup();
        for &w in &widths {
            for (label, s) in [("stats_a", &self.stats_a), ("stats_b", &self.stats_b)] {
                s.at(w)
                    .map_err(|e| Error::Config(format!("{label} at {w} bits: {e}")))?;
            }
        }
        for (i, sw) in self.sweeps.iter().enumerate() {
            if !widths.contains(&sw.width) {
                return bad(format!("sweep {i}: no architecture has width {}", sw.width));
            }
            if sw.bp1_targets.is_empty() {
                return bad(format!("sweep {i}: no bp1 targets"));
            }
            if !(0.0..=1.0).contains(&sw.threshold) {
                return bad(format!("sweep {i}: threshold {} outside [0, 1]", sw.threshold));
            }
            for &t in &sw.bp1_targets {
                sigma_for_bp1(t, sw.rho, sw.width)
                    .map_err(|e| Error::Config(format!("sweep {i}: {e}")))?;
            }
        }
        if self.sweeps.iter().enumerate().any(|(i, s)| {
            self.sweeps[..i].iter().any(|p| p.width == s.width)
        }) {
            return bad("two sweeps share a width".into());
        }
        Ok(())
    }

    fn sweep_for(&self, width: u32) -> Option<&SweepSpec> {
        self.sweeps.iter().find(|s| s.width == width)
    }
}

/// Operand statistics from either `sigma` or a target `bp1`.
pub fn operand_stats(
    width: u32,
    mean: f64,
    sigma: Option<f64>,
    bp1: Option<u32>,
    rho: f64,
) -> Result<WordStats> {
    let sigma = match (sigma, bp1) {
        (Some(s), None) => s,
        (None, Some(t)) => sigma_for_bp1(t, rho, width)?,
        _ => return Err(Error::Config("give exactly one of sigma and bp1".into())),
    };
    WordStats::new(mean, sigma, rho, width)
}

/// Row of `reports/compare.csv` and the curve files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub arch: Arch,
    pub width: u32,
    pub rho: f64,
    pub sigma: f64,
    pub bp0: u32,
    pub bp1: u32,
    pub threshold: Option<f64>,
    pub p_est: usize,
    pub p_sim: Option<usize>,
    pub error: Option<f64>,
}

impl From<&RareNetReport> for ReportRow {
    fn from(r: &RareNetReport) -> Self {
        ReportRow {
            arch: r.arch,
            width: r.width,
            rho: r.stats_a.rho,
            sigma: r.stats_a.std_dev,
            bp0: r.bp.bp0,
            bp1: r.bp.bp1,
            threshold: r.threshold,
            p_est: r.estimated_count,
            p_sim: r.simulated_count,
            error: r.abs_error,
        }
    }
}

/// `arch,width,rho,sigma,bp0,bp1,threshold,p_est,p_sim,error`; unsimulated
/// rows leave the last three fields empty.
pub fn reports_csv<'a>(reports: impl IntoIterator<Item = &'a RareNetReport>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(ReportRow::from(r))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("report csv", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn import_reports_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Error-against-bp1 curve: the report CSV format over the sweep points.
pub fn curve_csv(sweep: &Sweep) -> Result<String> {
    reports_csv(sweep.points.iter().map(|p| &p.report))
}

/// Everything known about one design after a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub design: String,
    pub gates: usize,
    pub estimate: Estimate,
    pub reports: Vec<RareNetReport>,
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub arch: Arch,
    pub width: u32,
    /// `sweep` or `thresholds`: which points the mean runs over.
    pub source: String,
    pub points: usize,
    pub mean_error: Option<f64>,
    /// `p_sim <= p_est` at every point.
    pub upper_bound_holds: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Complete,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub design: String,
    pub status: Status,
    pub failed_phase: Option<String>,
    pub error: Option<String>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<String>,
    pub designs: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn complete(&self) -> bool {
        self.designs.iter().all(|d| d.status == Status::Complete)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

struct DesignOutcome {
    design: String,
    files: Vec<(String, String)>,
    summary: Option<SummaryRow>,
    reports: Vec<RareNetReport>,
    failure: Option<(&'static str, String)>,
}

type Streams = (StimulusStream, StimulusStream);

fn run_design(cfg: &ExperimentConfig, spec: ArchSpec, streams: Option<&Streams>) -> DesignOutcome {
    let mut out = DesignOutcome {
        design: spec.name(),
        files: Vec::new(),
        summary: None,
        reports: Vec::new(),
        failure: None,
    };
    if let Err((phase, e)) = design_phases(cfg, spec, streams, &mut out) {
        out.failure = Some((phase, e.to_string()));
    }
    out
}

fn design_phases(
    cfg: &ExperimentConfig,
    spec: ArchSpec,
    streams: Option<&Streams>,
    out: &mut DesignOutcome,
) -> std::result::Result<(), (&'static str, Error)> {
    let name = spec.name();
    let netlist = spec.build().map_err(|e| ("build", e))?;
    let text = export_netlist(&netlist).map_err(|e| ("build", e))?;
    out.files.push((format!("netlists/{name}.net"), text));

    let a = cfg.stats_a.at(spec.width).map_err(|e| ("estimate", e))?;
    let b = cfg.stats_b.at(spec.width).map_err(|e| ("estimate", e))?;
    let estimate = estimate_for(&netlist, &a, &b).map_err(|e| ("estimate", e))?;

    let reports = match streams {
        Some((sa, sb)) => {
            let profile: ToggleProfile = simulate(&netlist, sa, sb).map_err(|e| ("simulate", e))?;
            let csv = export_activity(&profile, &netlist).map_err(|e| ("simulate", e))?;
            out.files.push((format!("activity/{name}.csv"), csv));
            cfg.thresholds
                .iter()
                .map(|&t| report_from_profile(&netlist, &estimate, &profile, &a, &b, t))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| ("compare", e))?
        }
        None => vec![unsimulated_report(&estimate, &a, &b)],
    };

    let sweep = match cfg.sweep_for(spec.width) {
        Some(sw) if cfg.simulate => Some(
            sweep_bp1(&netlist, sw.rho, sw.threshold, &sw.bp1_targets, cfg.vectors, cfg.seed)
                .map_err(|e| ("sweep", e))?,
        ),
        _ => None,
    };
    if let Some(s) = &sweep {
        let csv = curve_csv(s).map_err(|e| ("sweep", e))?;
        out.files.push((format!("curves/{name}.csv"), csv));
    }

    let points: Vec<&RareNetReport> = match &sweep {
        Some(s) => s.points.iter().map(|p| &p.report).collect(),
        None => reports.iter().collect(),
    };
    let errors: Vec<f64> = points.iter().filter_map(|r| r.abs_error).collect();
    out.summary = Some(SummaryRow {
        arch: spec.arch,
        width: spec.width,
        source: if sweep.is_some() { "sweep" } else { "thresholds" }.into(),
        points: errors.len(),
        mean_error: mean_error(&errors).ok(),
        upper_bound_holds: (!errors.is_empty()).then(|| {
            points
                .iter()
                .all(|r| r.simulated_count.is_none_or(|s| s <= r.estimated_count))
        }),
    });

    let design = DesignReport {
        design: name.clone(),
        gates: netlist.gates.len(),
        estimate,
        reports: reports.clone(),
        sweep,
    };
    out.files.push((format!("reports/{name}.json"), to_json(&design)));
    out.reports = reports;
    Ok(())
}

const SUMMARY_NOTE: &str = "Cell: mean of |P_sim - P_est| / max(P_sim, 1) over the bp1 sweep \
points of that width, or over the configured thresholds when the width has no sweep.\n\
Simulation is zero-delay (no glitch activity) on generated textbook netlists, so \
magnitudes are not comparable with errors measured against other RTL netlists. \
The readings that carry over are the trend against bp1 and whether P_sim <= P_est \
holds at every point (marked * when it does not).\n";

fn summary_markdown(rows: &[SummaryRow]) -> String {
    let mut widths: Vec<u32> = rows.iter().map(|r| r.width).collect();
    widths.sort_unstable();
    widths.dedup();
    let mut archs: Vec<Arch> = Vec::new();
    for r in rows {
        if !archs.contains(&r.arch) {
            archs.push(r.arch);
        }
    }
    let mut s = String::from("# Mean estimation error\n\n");
    s.push_str(SUMMARY_NOTE);
    s.push_str("\n| arch |");
    for w in &widths {
        s.push_str(&format!(" {w}-bit |"));
    }
    s.push_str("\n|---|");
    s.push_str(&"---|".repeat(widths.len()));
    s.push('\n');
    for arch in archs {
        s.push_str(&format!("| {arch} |"));
        for &w in &widths {
            let cell = rows
                .iter()
                .find(|r| r.arch == arch && r.width == w)
                .and_then(|r| {
                    r.mean_error.map(|e| {
                        let mark = if r.upper_bound_holds == Some(false) { "*" } else { "" };
                        format!("{e:.4}{mark}")
                    })
                })
                .unwrap_or_else(|| "-".into());
            s.push_str(&format!(" {cell} |"));
        }
        s.push('\n');
    }
    s
}

fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("summary csv", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Result of [`run`]: the manifest as written plus the summary rows.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub manifest: Manifest,
    pub summary: Vec<SummaryRow>,
}

/// Runs every design of the configuration and writes the output tree.
///
/// A design that fails in some phase keeps the files it produced before the
/// failure and is marked incomplete in the manifest; the other designs still
/// run. Only I/O errors on the output tree abort the run.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut widths: Vec<u32> = cfg.architectures.iter().map(|a| a.width).collect();
    widths.sort_unstable();
    widths.dedup();

    // the echoed config points at its own directory so trees stay comparable
    let echoed = ExperimentConfig {
        output_dir: PathBuf::from("."),
        ..cfg.clone()
    };
    let mut files: Vec<(String, String)> = vec![("config.toml".into(), echoed.to_toml())];
    let mut streams: Vec<(u32, Streams)> = Vec::new();
    if cfg.simulate {
        let (seed_a, seed_b) = operand_seeds(cfg.seed);
        for &w in &widths {
            let sa = generate(&cfg.stats_a.at(w)?, cfg.vectors, seed_a)?;
            let sb = generate(&cfg.stats_b.at(w)?, cfg.vectors, seed_b)?;
            files.push((format!("stimulus/w{w}_a.txt"), sa.to_text()));
            files.push((format!("stimulus/w{w}_b.txt"), sb.to_text()));
            streams.push((w, (sa, sb)));
        }
    }
    let outcomes: Vec<DesignOutcome> = cfg
        .architectures
        .par_iter()
        .map(|&spec| {
            let s = streams.iter().find(|(w, _)| *w == spec.width).map(|(_, s)| s);
            run_design(cfg, spec, s)
        })
        .collect();

    let mut designs = Vec::new();
    let mut summary = Vec::new();
    let mut all_reports = Vec::new();
    for o in outcomes {
        designs.push(ManifestEntry {
            design: o.design,
            status: if o.failure.is_some() {
                Status::Incomplete
            } else {
                Status::Complete
            },
            failed_phase: o.failure.as_ref().map(|f| f.0.to_string()),
            error: o.failure.map(|f| f.1),
            files: o.files.iter().map(|f| f.0.clone()).collect(),
        });
        files.extend(o.files);
        summary.extend(o.summary);
        all_reports.extend(o.reports);
    }
    files.push(("reports/compare.csv".into(), reports_csv(&all_reports)?));
    files.push(("summary.csv".into(), summary_csv(&summary)?));
    files.push(("summary.md".into(), summary_markdown(&summary)));

    let mut listed: Vec<String> = files.iter().map(|f| f.0.clone()).collect();
    listed.push("manifest.json".into());
    let manifest = Manifest {
        files: listed,
        designs,
    };
    files.push(("manifest.json".into(), to_json(&manifest)));

    let root = &cfg.output_dir;
    for (rel, contents) in &files {
        let path = root.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    }
    Ok(RunOutcome {
        output_dir: root.clone(),
        manifest,
        summary,
    })
}

/// A net in a localization listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetEntry {
    pub name: String,
    pub block: String,
    pub slice: u32,
    pub toggles: u64,
    /// Inside the estimated slice.
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedRare {
    pub threshold: f64,
    pub vectors: usize,
    /// Nets at or below the threshold.
    pub rare: Vec<NetEntry>,
    /// Nets sharing the smallest toggle count.
    pub rarest: Vec<NetEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    pub design: String,
    pub output_width: u32,
    pub estimate: Estimate,
    pub simulation: Option<SimulatedRare>,
}

/// Simulation settings for [`locate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub threshold: f64,
    pub vectors: usize,
    pub seed: u64,
}

/// Estimated vulnerable region and, optionally, the simulated rare nets.
pub fn locate(
    netlist: &Netlist,
    a: &WordStats,
    b: &WordStats,
    sim: Option<SimOptions>,
) -> Result<Localization> {
    let estimate = estimate_for(netlist, a, b)?;
    let simulation = match sim {
        None => None,
        Some(opt) => {
            if !(0.0..=1.0).contains(&opt.threshold) {
                return Err(Error::InvalidThreshold(opt.threshold));
            }
            let (seed_a, seed_b) = operand_seeds(opt.seed);
            let sa = generate(a, opt.vectors, seed_a)?;
            let sb = generate(b, opt.vectors, seed_b)?;
            let profile = simulate(netlist, &sa, &sb)?;
            let entry = |g: &crate::archlib::Gate| NetEntry {
                name: netlist.net(g.output).name.clone(),
                block: g.block.clone(),
                slice: g.bit_slice,
                toggles: profile.toggles(g.output),
                inside: g.bit_slice >= estimate.slice_start,
            };
            let rare_set = crate::toggle_sim::rare_nets(&profile, opt.threshold)?;
            let rare = netlist
                .gates
                .iter()
                .filter(|g| rare_set.contains(&g.output))
                .map(entry)
                .collect();
            let min = netlist.gates.iter().map(|g| profile.toggles(g.output)).min();
            let rarest = netlist
                .gates
                .iter()
                .filter(|g| Some(profile.toggles(g.output)) == min)
                .map(entry)
                .collect();
            Some(SimulatedRare {
                threshold: opt.threshold,
                vectors: opt.vectors,
                rare,
                rarest,
            })
        }
    };
    Ok(Localization {
        design: netlist.name(),
        output_width: netlist.output_width(),
        estimate,
        simulation,
    })
}

impl fmt::Display for Localization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.estimate;
        writeln!(
            f,
            "{}  bp0={} bp1={}  slice columns {}..{}",
            self.design,
            e.bp.bp0,
            e.bp.bp1,
            e.slice_start,
            self.output_width - 1
        )?;
        for flag in &e.flags {
            writeln!(f, "note: {}", serde_json::to_string(flag).unwrap().trim_matches('"'))?;
        }
        let first = e.contributing_blocks.first().map_or("-", |b| b.block.as_str());
        let last = e.contributing_blocks.last().map_or("-", |b| b.block.as_str());
        writeln!(
            f,
            "vulnerable region: {first} .. {last} ({} blocks, {} nets)",
            e.contributing_blocks.len(),
            e.estimated_count
        )?;
        for b in &e.contributing_blocks {
            writeln!(f, "  {:<20} {}", b.block, b.nets)?;
        }
        if let Some(sim) = &self.simulation {
            let inside = sim.rare.iter().filter(|n| n.inside).count();
            writeln!(
                f,
                "simulated rare nets at threshold {} over {} vectors: {} ({} inside the region)",
                sim.threshold,
                sim.vectors,
                sim.rare.len(),
                inside
            )?;
            for n in &sim.rare {
                write_net(f, n)?;
            }
            let min = sim.rarest.first().map_or(0, |n| n.toggles);
            writeln!(f, "least active nets ({} toggles): {}", min, sim.rarest.len())?;
            for n in &sim.rarest {
                write_net(f, n)?;
            }
        }
        Ok(())
    }
}

fn write_net(f: &mut fmt::Formatter<'_>, n: &NetEntry) -> fmt::Result {
    writeln!(
        f,
        "  {:<24} {:<20} slice {:<3} toggles {:<6} {}",
        n.name,
        n.block,
        n.slice,
        n.toggles,
        if n.inside { "inside" } else { "OUTSIDE" }
    )
}

/// `bp1` recomputed from the statistics, for listings.
pub fn achieved_bp1(stats: &WordStats) -> Result<u32> {
    Ok(breakpoints(stats)?.bp1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arch_spec_parsing() {
        let s: ArchSpec = "KSA:16".parse().unwrap();
        assert_eq!((s.arch, s.width), (Arch::Ksa, 16));
        assert_eq!(s.to_string(), "ksa:16");
        assert!("ksa".parse::<ArchSpec>().is_err());
        assert!("ksa:12".parse::<ArchSpec>().is_err());
        assert!("booth:32".parse::<ArchSpec>().is_err());
        assert!("wallace:8".parse::<ArchSpec>().is_err());
    }

    #[test]
    fn built_in_config_round_trips() {
        let cfg = ExperimentConfig::replication();
        assert_eq!(cfg.architectures.len(), 20);
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_toml(
            "architectures = [\"rca:8\"]\n[stats_a]\nstd_dev = 10.0\nrho = 0.9\n\
             [stats_b]\nstd_dev = 10.0\nrho = 0.9\n",
        )
        .unwrap();
        assert_eq!(cfg.vectors, 10_000);
        assert_eq!(cfg.thresholds.len(), 5);
        assert!(cfg.simulate);
        assert_eq!(cfg.stats_a.mean, 0.0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = ExperimentConfig::replication();
        let mut c = base.clone();
        c.architectures.clear();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = base.clone();
        c.stats_a.std_dev = 100.0; // 3σ leaves the 8-bit range
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.sweeps[0].bp1_targets.push(7);
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.thresholds.push(1.5);
        assert!(c.validate().is_err());
        let mut c = base;
        c.vectors = 1;
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::from_toml("architectures = [\"rca:8\"]\nbogus = 1\n").is_err());
    }

    #[test]
    fn operand_stats_from_bp1() {
        let s = operand_stats(16, 0.0, None, Some(8), 0.99).unwrap();
        assert_eq!(achieved_bp1(&s).unwrap(), 8);
        assert!(operand_stats(16, 0.0, Some(1.0), Some(8), 0.99).is_err());
        assert!(operand_stats(16, 0.0, None, None, 0.99).is_err());
    }
}
