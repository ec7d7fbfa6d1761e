// SPDX-License-Identifier: Apache-2.0

//! Builds every architecture, prints its size and gates per column, and
//! writes the 4-bit ripple-carry netlist text.

use std::collections::BTreeMap;

use rarenet::archlib::{export_netlist, Arch};

fn main() -> rarenet::Result<()> {
    for arch in Arch::ALL {
        let n = arch.build(16)?;
        let mut per_column: BTreeMap<u32, usize> = BTreeMap::new();
        for g in &n.gates {
            *per_column.entry(g.bit_slice).or_default() += 1;
        }
        let cols: Vec<String> = per_column.values().map(usize::to_string).collect();
        println!("{:<8} nets={:<5} gates={:<5} | {}", n.name(), n.nets.len(), n.gates.len(), cols.join(" "));
    }
    print!("\n{}", export_netlist(&Arch::Rca.build(4)?)?);
    Ok(())
}
