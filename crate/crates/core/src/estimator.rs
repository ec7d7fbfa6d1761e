// SPDX-License-Identifier: Apache-2.0

//! Breakpoint-driven rare-net estimation and its check against simulation.
//!
//! The estimate is the number of gate-output nets in the bit slices from the
//! start of the MSB region up to the top output column. For multipliers the
//! region start is the sum of the operands' `bp1` values, clamped to the
//! product width.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::archlib::{slice_nets, Arch, Netlist};
use crate::error::{Error, Result};
use crate::stats::{breakpoints, combined_breakpoints, rho_msb, word_range, Breakpoints, WordStats};
use crate::stimgen::generate;
use crate::toggle_sim::{rare_nets, simulate, ToggleProfile};

/// Conditions a report reader should know about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// No net was rare in simulation; the error used a denominator of 1.
    NoSimulatedRareNets,
    /// Multiplier slice start taken as the sum of the operand `bp1` values.
    ProductRegionMapping,
    /// Negative correlation; the model is only exercised for `rho >= 0`.
    OutsideValidatedRegime,
    /// An operand has zero spread or `rho = 1`; breakpoints were forced to 0.
    DegenerateSignal,
}

/// Gate-output nets of one block inside the estimated slice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCount {
    pub block: String,
    pub nets: usize,
}

/// Analytical half of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub arch: Arch,
    pub width: u32,
    /// Operand-level breakpoints.
    pub bp: Breakpoints,
    /// First output column of the rare slice.
    pub slice_start: u32,
    pub estimated_count: usize,
    /// Blocks in the slice, ordered by lowest column then label.
    pub contributing_blocks: Vec<BlockCount>,
    pub flags: Vec<Flag>,
}

/// Estimate plus the simulated count and error at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RareNetReport {
    pub arch: Arch,
    pub width: u32,
    pub stats_a: WordStats,
    pub stats_b: WordStats,
    pub bp: Breakpoints,
    pub slice_start: u32,
    pub estimated_count: usize,
    pub simulated_count: Option<usize>,
    pub threshold: Option<f64>,
    pub abs_error: Option<f64>,
    /// Simulated rare nets whose slice is below `slice_start`.
    pub outside_slice: Option<usize>,
    pub vectors: Option<usize>,
    pub contributing_blocks: Vec<BlockCount>,
    pub flags: Vec<Flag>,
}

/// Slice start for a netlist given operand-level breakpoints.
pub fn slice_start(arch: Arch, width: u32, bp: &Breakpoints) -> u32 {
    if arch.is_adder() {
        bp.bp1
    } else {
        (2 * bp.bp1).min(arch.output_width(width) - 1)
    }
}

/// Counts the nets from `bp.bp1` (mapped onto the product for multipliers)
/// up to the top column, per block.
pub fn estimate_rare_nets(netlist: &Netlist, bp: &Breakpoints) -> Result<Estimate> {
    if bp.bp0 > bp.bp1 || bp.bp1 >= netlist.width {
        return Err(Error::ColumnOutOfRange {
            column: bp.bp1,
            width: netlist.width,
        });
    }
    let start = slice_start(netlist.arch, netlist.width, bp);
    let nets = slice_nets(netlist, start)?;

    let mut blocks: BTreeMap<&str, (u32, usize)> = BTreeMap::new();
    for g in netlist.gates.iter().filter(|g| nets.contains(&g.output)) {
        let e = blocks.entry(g.block.as_str()).or_insert((g.bit_slice, 0));
        e.0 = e.0.min(g.bit_slice);
        e.1 += 1;
    }
    let mut ordered: Vec<(u32, &str, usize)> =
        blocks.into_iter().map(|(b, (col, n))| (col, b, n)).collect();
    ordered.sort();
    let contributing_blocks: Vec<BlockCount> = ordered
        .into_iter()
        .map(|(_, block, nets)| BlockCount {
            block: block.to_string(),
            nets,
        })
        .collect();

    let mut flags = Vec::new();
    if !netlist.arch.is_adder() {
        flags.push(Flag::ProductRegionMapping);
    }
    if bp.degenerate {
        flags.push(Flag::DegenerateSignal);
    }
    Ok(Estimate {
        arch: netlist.arch,
        width: netlist.width,
        bp: *bp,
        slice_start: start,
        estimated_count: contributing_blocks.iter().map(|b| b.nets).sum(),
        contributing_blocks,
        flags,
    })
}

/// Estimate from operand statistics (combined breakpoints).
pub fn estimate_for(netlist: &Netlist, a: &WordStats, b: &WordStats) -> Result<Estimate> {
    check_operands(netlist, a, b)?;
    let bp = combined_breakpoints(a, b)?;
    let mut est = estimate_rare_nets(netlist, &bp)?;
    if !a.in_validated_regime() || !b.in_validated_regime() {
        est.flags.push(Flag::OutsideValidatedRegime);
        est.flags.sort();
    }
    Ok(est)
}

fn check_operands(netlist: &Netlist, a: &WordStats, b: &WordStats) -> Result<()> {
    for s in [a, b] {
        if s.bit_width != netlist.width {
            return Err(Error::StimulusMismatch(format!(
                "{}-bit statistics for the {}-bit {}",
                s.bit_width,
                netlist.width,
                netlist.name()
            )));
        }
    }
    Ok(())
}

/// Architecture with the fewest estimated rare nets; ties go to the
/// lexicographically smallest id.
pub fn least_rare_module(estimates: &[Estimate]) -> Result<Arch> {
    estimates
        .iter()
        .min_by(|x, y| {
            x.estimated_count
                .cmp(&y.estimated_count)
                .then_with(|| x.arch.id().cmp(y.arch.id()))
        })
        .map(|e| e.arch)
        .ok_or(Error::Empty("estimate list"))
}

/// `|p_sim - p_est| / max(p_sim, 1)`.
pub fn abs_error(p_sim: usize, p_est: usize) -> f64 {
    (p_sim as f64 - p_est as f64).abs() / p_sim.max(1) as f64
}

/// Arithmetic mean of the per-point errors.
pub fn mean_error(errors: &[f64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::Empty("error list"));
    }
    Ok(errors.iter().sum::<f64>() / errors.len() as f64)
}

/// Seeds of the two operand streams drawn for one comparison.
pub fn operand_seeds(seed: u64) -> (u64, u64) {
    (seed, seed ^ 0xd1b5_4a32_d192_ed03)
}

/// Report without simulation.
pub fn unsimulated_report(est: &Estimate, a: &WordStats, b: &WordStats) -> RareNetReport {
    RareNetReport {
        arch: est.arch,
        width: est.width,
        stats_a: *a,
        stats_b: *b,
        bp: est.bp,
        slice_start: est.slice_start,
        estimated_count: est.estimated_count,
        simulated_count: None,
        threshold: None,
        abs_error: None,
        outside_slice: None,
        vectors: None,
        contributing_blocks: est.contributing_blocks.clone(),
        flags: est.flags.clone(),
    }
}

/// Combines an estimate with a simulated profile at one threshold.
pub fn report_from_profile(
    netlist: &Netlist,
    est: &Estimate,
    profile: &ToggleProfile,
    a: &WordStats,
    b: &WordStats,
    threshold: f64,
) -> Result<RareNetReport> {
    let rare = rare_nets(profile, threshold)?;
    let p_sim = rare.len();
    let outside = rare
        .iter()
        .filter(|n| netlist.net(**n).bit_slice < est.slice_start)
        .count();
    let mut report = unsimulated_report(est, a, b);
    report.simulated_count = Some(p_sim);
    report.threshold = Some(threshold);
    report.abs_error = Some(abs_error(p_sim, est.estimated_count));
    report.outside_slice = Some(outside);
    report.vectors = Some(profile.vector_count);
    if p_sim == 0 {
        report.flags.push(Flag::NoSimulatedRareNets);
        report.flags.sort();
    }
    Ok(report)
}

/// Draws both operand streams, simulates once and reports at every
/// threshold, in the given order.
pub fn compare_thresholds(
    netlist: &Netlist,
    a: &WordStats,
    b: &WordStats,
    thresholds: &[f64],
    stream_len: usize,
    seed: u64,
) -> Result<(Vec<RareNetReport>, ToggleProfile)> {
    if thresholds.is_empty() {
        return Err(Error::Empty("threshold list"));
    }
    if let Some(&t) = thresholds.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidThreshold(t));
    }
    let est = estimate_for(netlist, a, b)?;
    let (seed_a, seed_b) = operand_seeds(seed);
    let sa = generate(a, stream_len, seed_a)?;
    let sb = generate(b, stream_len, seed_b)?;
    let profile = simulate(netlist, &sa, &sb)?;
    let reports = thresholds
        .iter()
        .map(|&t| report_from_profile(netlist, &est, &profile, a, b, t))
        .collect::<Result<_>>()?;
    Ok((reports, profile))
}

/// Estimation, stimulus generation, simulation and error at one threshold.
pub fn compare(
    netlist: &Netlist,
    a: &WordStats,
    b: &WordStats,
    threshold: f64,
    stream_len: usize,
    seed: u64,
) -> Result<RareNetReport> {
    let (mut reports, _) = compare_thresholds(netlist, a, b, &[threshold], stream_len, seed)?;
    Ok(reports.remove(0))
}

/// Standard deviation whose `bp1` is `target` at correlation `rho`:
/// `2^target / (6·sqrt(1 - ρ_msb))`. Fails when the 3σ spread leaves the
/// word or `target` is not a valid bit index.
pub fn sigma_for_bp1(target: u32, rho: f64, width: u32) -> Result<f64> {
    let unsolvable = Error::UnsolvableSigma {
        bp1: target,
        rho,
        width,
    };
    let rm = rho_msb(rho)?;
    if target >= width || rm >= 1.0 || !(2..=crate::stats::MAX_BIT_WIDTH).contains(&width) {
        return Err(unsolvable);
    }
    let sigma = 2f64.powi(target as i32) / (6.0 * (1.0 - rm).sqrt());
    let (_, hi) = word_range(width);
    if 3.0 * sigma > hi as f64 {
        return Err(unsolvable);
    }
    Ok(sigma)
}

/// One point of a `bp1` sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub target_bp1: u32,
    pub sigma: f64,
    /// `bp1` recomputed from `sigma` with rounding re-applied.
    pub achieved_bp1: u32,
    pub report: RareNetReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub mean_error: f64,
}

/// Compares at each target `bp1`, both operands drawn with zero mean and
/// the solved `sigma`. Every point reuses `seed`. Points are evaluated in
/// parallel and returned sorted by target.
pub fn sweep_bp1(
    netlist: &Netlist,
    rho: f64,
    threshold: f64,
    targets: &[u32],
    stream_len: usize,
    seed: u64,
) -> Result<Sweep> {
    if targets.is_empty() {
        return Err(Error::Empty("bp1 target list"));
    }
    let mut targets = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();
    let points = targets
        .par_iter()
        .map(|&t| {
            let sigma = sigma_for_bp1(t, rho, netlist.width)?;
            let stats = WordStats::zero_mean(sigma, rho, netlist.width)?;
            let achieved_bp1 = breakpoints(&stats)?.bp1;
            let report = compare(netlist, &stats, &stats, threshold, stream_len, seed)?;
            Ok(SweepPoint {
                target_bp1: t,
                sigma,
                achieved_bp1,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = points.iter().filter_map(|p| p.report.abs_error).collect();
    Ok(Sweep {
        mean_error: mean_error(&errors)?,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archlib::build_adder;

    #[test]
    fn rca16_slice_counts() {
        let n = build_adder(Arch::Rca, 16).unwrap();
        let est = estimate_rare_nets(&n, &Breakpoints::new(4, 8)).unwrap();
        assert_eq!(est.estimated_count, 40);
        let names: Vec<&str> = est.contributing_blocks.iter().map(|b| b.block.as_str()).collect();
        assert_eq!(names, ["FA8", "FA9", "FA10", "FA11", "FA12", "FA13", "FA14", "FA15"]);
        assert!(est.contributing_blocks.iter().all(|b| b.nets == 5));
        assert_eq!(estimate_rare_nets(&n, &Breakpoints::new(0, 0)).unwrap().estimated_count, 80);
        assert!(estimate_rare_nets(&n, &Breakpoints::new(0, 16)).is_err());
    }

    #[test]
    fn multiplier_slice_is_the_operand_sum() {
        let n = Arch::Array.build(8).unwrap();
        let est = estimate_rare_nets(&n, &Breakpoints::new(2, 5)).unwrap();
        assert_eq!(est.slice_start, 10);
        assert_eq!(est.flags, [Flag::ProductRegionMapping]);
        let top = estimate_rare_nets(&n, &Breakpoints::new(7, 7)).unwrap();
        assert_eq!(top.slice_start, 14);
    }

    #[test]
    fn least_rare_tie_break() {
        let mk = |arch, count| Estimate {
            arch,
            width: 8,
            bp: Breakpoints::new(0, 0),
            slice_start: 0,
            estimated_count: count,
            contributing_blocks: vec![],
            flags: vec![],
        };
        assert!(least_rare_module(&[]).is_err());
        assert_eq!(least_rare_module(&[mk(Arch::Ksa, 9)]).unwrap(), Arch::Ksa);
        let tied = [mk(Arch::Rca, 4), mk(Arch::Cka, 4), mk(Arch::Ksa, 7)];
        assert_eq!(least_rare_module(&tied).unwrap(), Arch::Cka);
    }

    #[test]
    fn guarded_error() {
        assert_eq!(abs_error(0, 0), 0.0);
        assert_eq!(abs_error(0, 3), 3.0);
        assert_eq!(abs_error(10, 12), 0.2);
        assert_eq!(mean_error(&[0.5]).unwrap(), 0.5);
        assert!(mean_error(&[]).is_err());
    }

    #[test]
    fn sigma_inverts_bp1() {
        for t in 6..=14 {
            let s = sigma_for_bp1(t, 0.99, 16).unwrap();
            let bp = breakpoints(&WordStats::zero_mean(s, 0.99, 16).unwrap()).unwrap();
            assert_eq!(bp.bp1, t);
        }
        assert!((sigma_for_bp1(8, 0.99, 16).unwrap() - 142.14).abs() < 0.01);
        assert!(matches!(
            sigma_for_bp1(15, 0.99, 16),
            Err(Error::UnsolvableSigma { bp1: 15, .. })
        ));
        assert!(sigma_for_bp1(6, 1.0, 16).is_err());
        assert!(sigma_for_bp1(7, 0.99, 8).is_err());
    }

    #[test]
    fn threshold_one_selects_every_gate() {
        let n = build_adder(Arch::Cka, 8).unwrap();
        let s = WordStats::zero_mean(10.0, 0.9, 8).unwrap();
        let r = compare(&n, &s, &s, 1.0, 200, 1).unwrap();
        assert_eq!(r.simulated_count, Some(n.gates.len()));
        assert_eq!(r, compare(&n, &s, &s, 1.0, 200, 1).unwrap());
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let n = build_adder(Arch::Rca, 8).unwrap();
        let s = WordStats::zero_mean(10.0, 0.9, 16).unwrap();
        assert!(compare(&n, &s, &s, 0.1, 100, 0).is_err());
    }
}
