// SPDX-License-Identifier: Apache-2.0

//! Simulates a carry-lookahead adder on correlated operands and prints the
//! quietest nets next to the activity CSV header.

use rarenet::archlib::Arch;
use rarenet::estimator::operand_seeds;
use rarenet::stats::WordStats;
use rarenet::stimgen::generate;
use rarenet::toggle_sim::{export_activity, rare_nets, simulate};

fn main() -> rarenet::Result<()> {
    let n = Arch::Cla.build(16)?;
    let stats = WordStats::zero_mean(300.0, 0.99, 16)?;
    let (sa, sb) = operand_seeds(5);
    let profile = simulate(&n, &generate(&stats, 10_000, sa)?, &generate(&stats, 10_000, sb)?)?;
    for t in [1e-5, 1e-4, 1e-3, 1e-2] {
        println!("threshold {t:e}: {} rare nets", rare_nets(&profile, t)?.len());
    }
    let csv = export_activity(&profile, &n)?;
    let mut rows: Vec<&str> = csv.lines().skip(1).collect();
    rows.sort_by_key(|r| r.split(',').nth(4).and_then(|x| x.parse::<u64>().ok()));
    println!("{}", csv.lines().next().unwrap_or_default());
    for r in rows.iter().take(10) {
        println!("{r}");
    }
    Ok(())
}
