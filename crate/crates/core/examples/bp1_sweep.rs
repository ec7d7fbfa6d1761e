// SPDX-License-Identifier: Apache-2.0

//! Sweeps the MSB-region start over every architecture and prints the
//! estimated and simulated rare-net counts per point.
//!
//! cargo run --release --example bp1_sweep -- [width] [threshold] [vectors]

use rarenet::archlib::Arch;
use rarenet::estimator::sweep_bp1;

fn main() -> rarenet::Result<()> {
    let mut args = std::env::args().skip(1);
    let width: u32 = args.next().map_or(16, |s| s.parse().expect("width"));
    let threshold: f64 = args.next().map_or(1e-4, |s| s.parse().expect("threshold"));
    let vectors: usize = args.next().map_or(10_000, |s| s.parse().expect("vectors"));
    let targets: Vec<u32> = if width >= 16 { (6..=13).collect() } else { (3..=6).collect() };

    for arch in Arch::ALL {
        let netlist = arch.build(width)?;
        let sweep = sweep_bp1(&netlist, 0.99, threshold, &targets, vectors, 1)?;
        print!("{:<8} gates={:<5} mean_e={:.3} |", netlist.name(), netlist.gates.len(), sweep.mean_error);
        for p in &sweep.points {
            let r = &p.report;
            print!(
                " {}:{}/{}{}",
                p.target_bp1,
                r.simulated_count.unwrap_or(0),
                r.estimated_count,
                if r.outside_slice.unwrap_or(0) > 0 { "!" } else { "" }
            );
        }
        println!();
    }
    Ok(())
}
