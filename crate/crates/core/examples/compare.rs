// SPDX-License-Identifier: Apache-2.0

//! Estimate against simulation for one multiplier over several thresholds.

use rarenet::archlib::Arch;
use rarenet::cli_report::reports_csv;
use rarenet::estimator::{compare_thresholds, sigma_for_bp1};
use rarenet::stats::WordStats;

fn main() -> rarenet::Result<()> {
    let n = Arch::Booth.build(16)?;
    let stats = WordStats::zero_mean(sigma_for_bp1(10, 0.99, 16)?, 0.99, 16)?;
    let (reports, _) = compare_thresholds(&n, &stats, &stats, &[1e-5, 1e-4, 1e-3, 1e-2], 10_000, 1)?;
    print!("{}", reports_csv(&reports)?);
    for r in &reports {
        println!("threshold {:e}: {} simulated rare nets outside the slice", r.threshold.unwrap_or(0.0), r.outside_slice.unwrap_or(0));
    }
    Ok(())
}
