// SPDX-License-Identifier: Apache-2.0

//! Analytical estimates for all adders under one operand distribution, and
//! the adder with the fewest estimated rare nets.

use rarenet::archlib::Arch;
use rarenet::estimator::{estimate_for, least_rare_module};
use rarenet::stats::WordStats;

fn main() -> rarenet::Result<()> {
    let stats = WordStats::zero_mean(1024.0, 0.99, 16)?;
    let mut estimates = Vec::new();
    for arch in Arch::ADDERS {
        let est = estimate_for(&arch.build(16)?, &stats, &stats)?;
        let blocks: Vec<String> = est
            .contributing_blocks
            .iter()
            .map(|b| format!("{}:{}", b.block, b.nets))
            .collect();
        println!("{:<7} slice>={} nets={:<4} {}", arch.id(), est.slice_start, est.estimated_count, blocks.join(" "));
        estimates.push(est);
    }
    println!("least rare: {}", least_rare_module(&estimates)?.id());
    Ok(())
}
