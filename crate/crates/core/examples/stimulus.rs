// SPDX-License-Identifier: Apache-2.0

//! Generates correlated operand streams and measures what came out.

use rarenet::stats::{empirical_bit_profile, empirical_word_stats, WordStats};
use rarenet::stimgen::{generate, saturation_rate};

fn main() -> rarenet::Result<()> {
    for (mean, sigma, rho) in [(0.0, 1024.0, 0.99), (500.0, 200.0, 0.5), (0.0, 9000.0, 0.0)] {
        let target = WordStats::new(mean, sigma, rho, 16)?;
        let stream = generate(&target, 10_000, 1)?;
        let got = empirical_word_stats(&stream)?.stats;
        println!(
            "target mean={mean} sigma={sigma} rho={rho}  got mean={:.1} sigma={:.1} rho={:.4}  saturated={:.4}",
            got.mean,
            got.std_dev,
            got.rho,
            saturation_rate(&stream)
        );
        let act: Vec<String> = empirical_bit_profile(&stream)?
            .activities
            .iter()
            .map(|a| format!("{a:.2}"))
            .collect();
        println!("  bit activity: {}", act.join(" "));
    }
    Ok(())
}
