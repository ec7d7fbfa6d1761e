// SPDX-License-Identifier: Apache-2.0

//! The 16-bit ripple-carry walkthrough: estimate the vulnerable region for
//! operands whose MSB region starts at bit 8, then simulate and list the
//! least active nets with their blocks.

use rarenet::archlib::{build_adder, Arch};
use rarenet::estimator::{estimate_for, operand_seeds, sigma_for_bp1};
use rarenet::stats::WordStats;
use rarenet::stimgen::generate;
use rarenet::toggle_sim::{rare_nets, simulate};

fn main() -> rarenet::Result<()> {
    let netlist = build_adder(Arch::Rca, 16)?;
    let sigma = sigma_for_bp1(8, 0.99, 16)?;
    let stats = WordStats::zero_mean(sigma, 0.99, 16)?;
    let est = estimate_for(&netlist, &stats, &stats)?;
    println!("sigma={sigma:.2} bp0={} bp1={}", est.bp.bp0, est.bp.bp1);
    let region: Vec<&str> = est.contributing_blocks.iter().map(|b| b.block.as_str()).collect();
    println!("estimated region: {} ({} nets)", region.join(" "), est.estimated_count);

    let (sa, sb) = operand_seeds(1);
    let a = generate(&stats, 10_000, sa)?;
    let b = generate(&stats, 10_000, sb)?;
    let profile = simulate(&netlist, &a, &b)?;
    println!("rare at 1e-5: {}", rare_nets(&profile, 1e-5)?.len());

    let mut gates: Vec<_> = netlist.gates.iter().collect();
    gates.sort_by_key(|g| (profile.toggles(g.output), g.output));
    println!("least active nets:");
    for g in gates.iter().take(12) {
        println!(
            "  {:<10} {:<6} toggles={}",
            netlist.net(g.output).name,
            g.block,
            profile.toggles(g.output)
        );
    }
    Ok(())
}
