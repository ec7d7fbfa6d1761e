// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{exhaustive, random_vectors, Oracle};
use rarenet::archlib::{Arch, Netlist};
use rarenet::toggle_sim::{Simulator, Vector};

/// Per-net, per-vector agreement between the packed simulator and the
/// recursive oracle, then toggle counts recomputed from the oracle values.
fn agree(netlist: &Netlist, vectors: &[Vector]) {
    let sim = Simulator::new(netlist).unwrap();
    let oracle = Oracle::new(netlist);
    let mut prev: Option<Vec<bool>> = None;
    let mut toggles = vec![0u64; netlist.nets.len()];
    for chunk in vectors.chunks(64) {
        let packed = sim.evaluate_packed(chunk);
        for (lane, v) in chunk.iter().enumerate() {
            let expect = oracle.values(v);
            for (net, &e) in expect.iter().enumerate() {
                assert_eq!(
                    (packed[net] >> lane) & 1 == 1,
                    e,
                    "{} net {} under {:?}",
                    netlist.name(),
                    netlist.nets[net].name,
                    v
                );
            }
            if let Some(p) = &prev {
                for (t, (x, y)) in toggles.iter_mut().zip(p.iter().zip(&expect)) {
                    *t += u64::from(x != y);
                }
            }
            prev = Some(expect);
        }
    }
    assert_eq!(sim.run(vectors).unwrap().toggles, toggles, "{}", netlist.name());
}

#[test]
fn exhaustive_at_4_bits() {
    for arch in Arch::ALL {
        let n = arch.build(4).unwrap();
        agree(&n, &exhaustive(4, arch.is_adder()));
    }
}

#[test]
fn random_at_8_bits() {
    for arch in Arch::ALL {
        let n = arch.build(8).unwrap();
        agree(&n, &random_vectors(8, 10_000, 8));
    }
}
