// SPDX-License-Identifier: Apache-2.0

//! Runs a small configured batch into a directory and prints its summary.
//!
//! cargo run --example batch -- [output dir]

use rarenet::cli_report::{run, ExperimentConfig};

const CONFIG: &str = r#"
architectures = ["rca:8", "ksa:8", "dadda:8"]
thresholds = [1e-3, 1e-2]
vectors = 2000
seed = 11

[stats_a]
std_dev = 20.0
rho = 0.95

[stats_b]
std_dev = 20.0
rho = 0.95

[[sweeps]]
width = 8
rho = 0.95
threshold = 1e-3
bp1_targets = [3, 4, 5]
"#;

fn main() -> rarenet::Result<()> {
    let mut cfg = ExperimentConfig::from_toml(CONFIG)?;
    cfg.output_dir = std::env::args().nth(1).unwrap_or_else(|| "batch_out".into()).into();
    let outcome = run(&cfg)?;
    print!("{}", std::fs::read_to_string(outcome.output_dir.join("summary.md")).unwrap_or_default());
    println!("{} files written to {}", outcome.manifest.files.len(), outcome.output_dir.display());
    Ok(())
}
