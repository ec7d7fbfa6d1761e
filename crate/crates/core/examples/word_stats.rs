// SPDX-License-Identifier: Apache-2.0

//! Sign-bit closed forms, breakpoints and the per-bit activity model for a
//! few operand distributions.

use rarenet::stats::{alpha_msb, breakpoints, rho_msb, theoretical_bit_profile, WordStats};

fn main() -> rarenet::Result<()> {
    for rho in [0.0, 0.5, 0.9, 0.99, 0.999] {
        println!("rho={rho:<6} rho_msb={:.4} alpha_msb={:.4}", rho_msb(rho)?, alpha_msb(rho)?);
    }
    println!();
    for (sigma, rho) in [(1024.0, 0.99), (1024.0, 0.5), (64.0, 0.99), (5000.0, 0.9)] {
        let s = WordStats::zero_mean(sigma, rho, 16)?;
        let bp = breakpoints(&s)?;
        let act: Vec<String> = theoretical_bit_profile(&s)?
            .activities
            .iter()
            .map(|a| format!("{a:.2}"))
            .collect();
        println!("sigma={sigma} rho={rho}: bp0={} bp1={}", bp.bp0, bp.bp1);
        println!("  activity by bit: {}", act.join(" "));
    }
    Ok(())
}
