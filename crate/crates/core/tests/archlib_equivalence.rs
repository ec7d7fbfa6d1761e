// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{exhaustive, mismatches, random_vectors as random};
use rarenet::archlib::{build_adder, build_multiplier, slice_nets, Arch, GateKind, Netlist};
use rarenet::toggle_sim::{Simulator, Vector};

fn check(netlist: &Netlist, vectors: &[Vector]) {
    assert_eq!(mismatches(netlist, vectors), 0, "{}", netlist.name());
}

#[test]
fn adders_exhaustive_at_4_and_8_bits() {
    for arch in Arch::ADDERS {
        for width in [4, 8] {
            check(&build_adder(arch, width).unwrap(), &exhaustive(width, true));
        }
    }
}

#[test]
fn adders_random_at_16_and_32_bits() {
    for arch in Arch::ADDERS {
        check(&build_adder(arch, 16).unwrap(), &random(16, 100_000, 16));
        check(&build_adder(arch, 32).unwrap(), &random(32, 20_000, 32));
    }
}

#[test]
fn multipliers_exhaustive_at_4_and_8_bits() {
    for arch in Arch::MULTIPLIERS {
        for width in [4, 8] {
            check(&build_multiplier(arch, width).unwrap(), &exhaustive(width, false));
        }
    }
}

#[test]
fn multipliers_agree_at_16_bits() {
    let vectors = random(16, 100_000, 99);
    let products: Vec<Vec<u64>> = Arch::MULTIPLIERS
        .iter()
        .map(|&arch| {
            let n = build_multiplier(arch, 16).unwrap();
            Simulator::new(&n).unwrap().outputs(&vectors)
        })
        .collect();
    for p in &products[1..] {
        assert_eq!(p, &products[0]);
    }
    let n = build_multiplier(Arch::Array, 16).unwrap();
    assert_eq!(mismatches(&n, &vectors), 0);
}

#[test]
fn every_generator_is_a_valid_dag_at_every_width() {
    for arch in Arch::ALL {
        for &width in arch.supported_widths() {
            let n = arch.build(width).unwrap();
            n.validate().unwrap();
            assert_eq!(n.outputs.len() as u32, arch.output_width(width));
            assert_eq!(n.a_inputs.len() as u32, width);
            assert_eq!(n.carry_in.is_some(), arch.is_adder());
            for g in &n.gates {
                assert_eq!(g.inputs.len(), g.kind.arity());
                assert!(g.kind != GateKind::Buf);
            }
        }
    }
}

#[test]
fn every_output_column_owns_a_gate() {
    for arch in Arch::ALL {
        for &width in arch.supported_widths() {
            let n = arch.build(width).unwrap();
            for col in 0..n.output_width() {
                assert!(
                    n.gates.iter().any(|g| g.bit_slice == col),
                    "{} column {col} has no gate",
                    n.name()
                );
            }
        }
    }
}

#[test]
fn slices_shrink_as_the_column_rises() {
    for arch in Arch::ALL {
        let n = arch.build(8).unwrap();
        let mut prev = slice_nets(&n, 0).unwrap();
        assert_eq!(prev.len(), n.gates.len());
        for col in 1..n.output_width() {
            let cur = slice_nets(&n, col).unwrap();
            assert!(cur.is_subset(&prev));
            prev = cur;
        }
    }
}

#[test]
fn no_structurally_constant_nets() {
    // Exhaustive stimulus visits every reachable state, so a gate output
    // that never toggles is a constant. Random stimulus is not enough here:
    // wide lookahead product terms are legitimately rarer than 2^-12.
    for arch in Arch::ALL {
        for width in [4, 8] {
            let n = arch.build(width).unwrap();
            let profile = Simulator::new(&n)
                .unwrap()
                .run(&exhaustive(width, arch.is_adder()))
                .unwrap();
            for g in &n.gates {
                assert!(
                    profile.toggles(g.output) > 0,
                    "{} net {} ({}) is stuck",
                    n.name(),
                    n.net(g.output).name,
                    g.block
                );
            }
        }
    }
}

#[test]
fn gate_counts_are_deterministic() {
    for arch in Arch::ALL {
        let a = arch.build(8).unwrap();
        let b = arch.build(8).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn every_gate_reaches_an_output() {
    for arch in Arch::ALL {
        for &width in arch.supported_widths() {
            let n = arch.build(width).unwrap();
            let mut live = vec![false; n.nets.len()];
            for o in &n.outputs {
                live[o.index()] = true;
            }
            let order = n.validate().unwrap();
            for gid in order.iter().rev() {
                let g = &n.gates[gid.0 as usize];
                assert!(live[g.output.index()], "{} dead net {}", n.name(), n.net(g.output).name);
                for i in &g.inputs {
                    live[i.index()] = true;
                }
            }
        }
    }
}
