// SPDX-License-Identifier: Apache-2.0

//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rarenet::archlib::Netlist;
use rarenet::stats::word_range;
use rarenet::toggle_sim::Vector;

/// Every operand pair, with both carry-in values when `carry` is set.
pub fn exhaustive(width: u32, carry: bool) -> Vec<Vector> {
    let (lo, hi) = word_range(width);
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in lo..=hi {
            out.push(Vector { a, b, cin: false });
            if carry {
                out.push(Vector { a, b, cin: true });
            }
        }
    }
    out
}

pub fn random_vectors(width: u32, count: usize, seed: u64) -> Vec<Vector> {
    let (lo, hi) = word_range(width);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Vector {
            a: rng.random_range(lo..=hi),
            b: rng.random_range(lo..=hi),
            cin: rng.random(),
        })
        .collect()
}

/// Brute-force evaluator: each net is the boolean expression of its driver,
/// expanded recursively and memoized per vector. Input roles come from net
/// names and gate semantics from the kind mnemonic, so nothing is shared
/// with the simulator beyond the netlist data itself.
pub struct Oracle<'a> {
    netlist: &'a Netlist,
    driver: Vec<Option<usize>>,
}

impl<'a> Oracle<'a> {
    pub fn new(netlist: &'a Netlist) -> Self {
        let mut driver = vec![None; netlist.nets.len()];
        for (i, g) in netlist.gates.iter().enumerate() {
            driver[g.output.index()] = Some(i);
        }
        Oracle { netlist, driver }
    }

    /// Value of every net under `v`, indexed by net id.
    pub fn values(&self, v: &Vector) -> Vec<bool> {
        let mut memo = vec![None; self.netlist.nets.len()];
        (0..self.netlist.nets.len())
            .map(|i| self.eval(i, v, &mut memo))
            .collect()
    }

    fn eval(&self, net: usize, v: &Vector, memo: &mut [Option<bool>]) -> bool {
        if let Some(x) = memo[net] {
            return x;
        }
        let value = match self.driver[net] {
            None => {
                let name = &self.netlist.nets[net].name;
                if name == "cin" {
                    v.cin
                } else if let Some(i) = name.strip_prefix('a') {
                    (v.a >> i.parse::<u32>().unwrap()) & 1 == 1
                } else if let Some(i) = name.strip_prefix('b') {
                    (v.b >> i.parse::<u32>().unwrap()) & 1 == 1
                } else {
                    panic!("undriven net {name}")
                }
            }
            Some(g) => {
                let gate = &self.netlist.gates[g];
                let x = self.eval(gate.inputs[0].index(), v, memo);
                let y = gate
                    .inputs
                    .get(1)
                    .map(|n| self.eval(n.index(), v, memo));
                match (gate.kind.as_str(), y) {
                    ("AND", Some(y)) => x && y,
                    ("OR", Some(y)) => x || y,
                    ("NAND", Some(y)) => !(x && y),
                    ("NOR", Some(y)) => !(x || y),
                    ("XOR", Some(y)) => x != y,
                    ("XNOR", Some(y)) => x == y,
                    ("NOT", None) => !x,
                    ("BUF", None) => x,
                    (k, _) => panic!("bad gate {k}"),
                }
            }
        };
        memo[net] = Some(value);
        value
    }
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Reference output word: unsigned `A + B + cin` with carry-out for adders,
/// the two's complement product for multipliers.
pub fn golden(netlist: &Netlist, v: &Vector) -> u64 {
    let w = netlist.width;
    if netlist.arch.is_adder() {
        let cin = netlist.carry_in.is_some() && v.cin;
        ((v.a as u64 & mask(w)) + (v.b as u64 & mask(w)) + u64::from(cin)) & mask(w + 1)
    } else {
        (v.a.wrapping_mul(v.b) as u64) & mask(2 * w)
    }
}

/// Vectors whose simulated output word differs from [`golden`].
pub fn mismatches(netlist: &Netlist, vectors: &[Vector]) -> usize {
    let sim = rarenet::toggle_sim::Simulator::new(netlist).unwrap();
    sim.outputs(vectors)
        .iter()
        .zip(vectors)
        .filter(|(out, v)| **out != golden(netlist, v))
        .count()
}
