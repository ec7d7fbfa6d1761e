// SPDX-License-Identifier: Apache-2.0

//! Zero-delay, two-valued gate-level simulation with per-net toggle counts.
//!
//! Vectors are evaluated 64 at a time: each net holds a `u64` whose bit `t`
//! is the settled value under vector `t` of the chunk, and every gate is
//! evaluated once per chunk in topological order. A toggle is a change of
//! settled value between consecutive vectors; counting starts at the second
//! vector. No glitches are modeled.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::archlib::{Arch, GateKind, NetId, Netlist};
use crate::error::{Error, Result};
use crate::stimgen::{fair_bits, StimulusStream};

/// One input vector: operand words plus the carry-in (ignored by netlists
/// without one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vector {
    pub a: i64,
    pub b: i64,
    pub cin: bool,
}

#[derive(Debug, Clone, Copy)]
struct Op {
    kind: GateKind,
    x: u32,
    y: u32,
    out: u32,
}

/// A netlist compiled to a flat, topologically ordered gate list.
#[derive(Debug)]
pub struct Simulator<'a> {
    netlist: &'a Netlist,
    ops: Vec<Op>,
}

impl<'a> Simulator<'a> {
    pub fn new(netlist: &'a Netlist) -> Result<Self> {
        let order = netlist.validate()?;
        let ops = order
            .into_iter()
            .map(|gid| {
                let g = &netlist.gates[gid.0 as usize];
                Op {
                    kind: g.kind,
                    x: g.inputs[0].0,
                    y: g.inputs.get(1).unwrap_or(&g.inputs[0]).0,
                    out: g.output.0,
                }
            })
            .collect();
        Ok(Simulator { netlist, ops })
    }

    pub fn netlist(&self) -> &Netlist {
        self.netlist
    }

    /// Evaluates up to 64 vectors; returns one lane word per net. Lanes past
    /// `chunk.len()` are unspecified.
    pub fn evaluate_packed(&self, chunk: &[Vector]) -> Vec<u64> {
        let mut values = vec![0u64; self.netlist.nets.len()];
        self.evaluate_into(chunk, &mut values);
        values
    }

    fn evaluate_into(&self, chunk: &[Vector], values: &mut [u64]) {
        debug_assert!(chunk.len() <= 64);
        let n = self.netlist;
        for (i, net) in n.a_inputs.iter().enumerate() {
            values[net.index()] = pack(chunk, |v| (v.a as u64 >> i) & 1 == 1);
        }
        for (i, net) in n.b_inputs.iter().enumerate() {
            values[net.index()] = pack(chunk, |v| (v.b as u64 >> i) & 1 == 1);
        }
        if let Some(cin) = n.carry_in {
            values[cin.index()] = pack(chunk, |v| v.cin);
        }
        for op in &self.ops {
            let x = values[op.x as usize];
            let y = values[op.y as usize];
            values[op.out as usize] = op.kind.eval(x, y);
        }
    }

    /// Output word for each vector, column 0 in bit 0.
    pub fn outputs(&self, vectors: &[Vector]) -> Vec<u64> {
        let mut result = Vec::with_capacity(vectors.len());
        let mut values = vec![0u64; self.netlist.nets.len()];
        for chunk in vectors.chunks(64) {
            self.evaluate_into(chunk, &mut values);
            for lane in 0..chunk.len() {
                let word = self
                    .netlist
                    .outputs
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (k, o)| acc | (((values[o.index()] >> lane) & 1) << k));
                result.push(word);
            }
        }
        result
    }

    /// Runs all vectors in order and counts per-net toggles.
    pub fn run(&self, vectors: &[Vector]) -> Result<ToggleProfile> {
        if vectors.len() < 2 {
            return Err(Error::StreamTooShort(vectors.len()));
        }
        let n_nets = self.netlist.nets.len();
        let mut values = vec![0u64; n_nets];
        let mut last = vec![0u64; n_nets];
        let mut toggles = vec![0u64; n_nets];
        for (c, chunk) in vectors.chunks(64).enumerate() {
            self.evaluate_into(chunk, &mut values);
            let lanes = chunk.len();
            let mut mask = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
            if c == 0 {
                // the first vector has no predecessor
                mask &= !1;
            }
            for net in 0..n_nets {
                let v = values[net];
                let shifted = (v << 1) | last[net];
                toggles[net] += u64::from(((v ^ shifted) & mask).count_ones());
                last[net] = (v >> (lanes - 1)) & 1;
            }
        }
        Ok(ToggleProfile {
            arch: self.netlist.arch,
            width: self.netlist.width,
            vector_count: vectors.len(),
            toggles,
            primary_input: self.netlist.nets.iter().map(|n| n.is_primary_input).collect(),
        })
    }
}

fn pack(chunk: &[Vector], bit: impl Fn(&Vector) -> bool) -> u64 {
    chunk
        .iter()
        .enumerate()
        .fold(0u64, |acc, (t, v)| acc | (u64::from(bit(v)) << t))
}

/// Seed of the fair-coin carry-in sequence paired with two operand streams.
pub fn carry_in_seed(a_seed: u64, b_seed: u64) -> u64 {
    a_seed.rotate_left(17) ^ b_seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Zips two operand streams into vectors. Netlists with a carry-in receive
/// an independent fair-coin bit per vector derived from both seeds.
pub fn vectors_from_streams(
    netlist: &Netlist,
    a: &StimulusStream,
    b: &StimulusStream,
) -> Result<Vec<Vector>> {
    if a.len() != b.len() {
        return Err(Error::StimulusMismatch(format!(
            "operand streams have {} and {} words",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::StreamTooShort(a.len()));
    }
    for s in [a, b] {
        if s.bit_width != netlist.width {
            return Err(Error::StimulusMismatch(format!(
                "{}-bit stream for a {}-bit netlist",
                s.bit_width, netlist.width
            )));
        }
    }
    let cin = if netlist.carry_in.is_some() {
        fair_bits(a.len(), carry_in_seed(a.seed, b.seed))
    } else {
        vec![false; a.len()]
    };
    Ok(a.words
        .iter()
        .zip(&b.words)
        .zip(cin)
        .map(|((&a, &b), cin)| Vector { a, b, cin })
        .collect())
}

/// Simulates `netlist` over paired operand streams.
pub fn simulate(netlist: &Netlist, a: &StimulusStream, b: &StimulusStream) -> Result<ToggleProfile> {
    let vectors = vectors_from_streams(netlist, a, b)?;
    Simulator::new(netlist)?.run(&vectors)
}

/// Per-net transition counts over one simulation run, indexed by net id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToggleProfile {
    pub arch: Arch,
    pub width: u32,
    pub vector_count: usize,
    pub toggles: Vec<u64>,
    pub primary_input: Vec<bool>,
}

impl ToggleProfile {
    pub fn toggles(&self, net: NetId) -> u64 {
        self.toggles[net.index()]
    }

    pub fn probability(&self, net: NetId) -> f64 {
        self.toggles[net.index()] as f64 / (self.vector_count - 1) as f64
    }
}

/// Gate-output nets whose toggle probability is at or below `threshold`.
/// Primary inputs are not counted.
pub fn rare_nets(profile: &ToggleProfile, threshold: f64) -> Result<BTreeSet<NetId>> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    if profile.vector_count < 2 {
        return Err(Error::StreamTooShort(profile.vector_count));
    }
    let pairs = (profile.vector_count - 1) as f64;
    Ok(profile
        .toggles
        .iter()
        .enumerate()
        .filter(|&(i, &t)| !profile.primary_input[i] && t as f64 / pairs <= threshold)
        .map(|(i, _)| NetId(i as u32))
        .collect())
}

/// One row of the activity CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityRow {
    pub net_id: u32,
    pub net_name: String,
    pub block: String,
    pub slice: u32,
    pub toggles: u64,
    pub vectors: usize,
    pub probability: f64,
}

/// Block label used for primary-input rows of the activity CSV.
pub const INPUT_BLOCK: &str = "input";

/// Activity CSV: `net_id,net_name,block,slice,toggles,vectors,probability`,
/// one row per net sorted by id, probability printed with 12 decimals.
pub fn export_activity(profile: &ToggleProfile, netlist: &Netlist) -> Result<String> {
    if profile.vector_count < 2 {
        return Err(Error::StreamTooShort(profile.vector_count));
    }
    if profile.toggles.len() != netlist.nets.len() || profile.arch != netlist.arch {
        return Err(Error::StimulusMismatch(
            "profile does not belong to this netlist".into(),
        ));
    }
    let mut block = vec![INPUT_BLOCK; netlist.nets.len()];
    for g in &netlist.gates {
        block[g.output.index()] = &g.block;
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "net_id",
        "net_name",
        "block",
        "slice",
        "toggles",
        "vectors",
        "probability",
    ])?;
    for net in &netlist.nets {
        w.write_record([
            net.id.to_string(),
            net.name.clone(),
            block[net.id.index()].to_string(),
            net.bit_slice.to_string(),
            profile.toggles(net.id).to_string(),
            profile.vector_count.to_string(),
            format!("{:.12}", profile.probability(net.id)),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("activity csv", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn import_activity(text: &str) -> Result<Vec<ActivityRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archlib::build_adder;

    fn constant(width: u32, word: i64, len: usize) -> StimulusStream {
        StimulusStream::from_words(vec![word; len], width).unwrap()
    }

    #[test]
    fn constant_stimulus_never_toggles_outside_carry_in() {
        let n = build_adder(Arch::Rca, 8).unwrap();
        let sim = Simulator::new(&n).unwrap();
        let vectors = vec![
            Vector {
                a: 17,
                b: -3,
                cin: true
            };
            100
        ];
        let p = sim.run(&vectors).unwrap();
        assert!(p.toggles.iter().all(|&t| t == 0));
        assert_eq!(rare_nets(&p, 0.0).unwrap().len(), n.gates.len());
    }

    #[test]
    fn toggles_cross_chunk_boundaries() {
        let n = build_adder(Arch::Rca, 4).unwrap();
        let sim = Simulator::new(&n).unwrap();
        // a0 alternates every vector across 150 vectors: 149 toggles
        let vectors: Vec<Vector> = (0..150)
            .map(|t| Vector {
                a: (t % 2) as i64,
                b: 0,
                cin: false,
            })
            .collect();
        let p = sim.run(&vectors).unwrap();
        assert_eq!(p.toggles(n.a_inputs[0]), 149);
        assert_eq!(p.toggles(n.a_inputs[1]), 0);
        assert_eq!(p.toggles(n.outputs[0]), 149);
    }

    #[test]
    fn adder_outputs_are_sums() {
        let n = build_adder(Arch::Ksa, 8).unwrap();
        let sim = Simulator::new(&n).unwrap();
        let vectors = [
            Vector { a: 100, b: 27, cin: false },
            Vector { a: -1, b: 1, cin: false },
            Vector { a: -128, b: -128, cin: true },
        ];
        assert_eq!(sim.outputs(&vectors), vec![127, 256, 257]);
    }

    #[test]
    fn stream_mismatches_are_rejected() {
        let n = build_adder(Arch::Rca, 8).unwrap();
        let a = constant(8, 1, 10);
        assert!(matches!(
            simulate(&n, &a, &constant(8, 1, 9)),
            Err(Error::StimulusMismatch(_))
        ));
        assert!(simulate(&n, &a, &constant(16, 1, 10)).is_err());
        assert!(matches!(
            simulate(&n, &constant(8, 1, 1), &constant(8, 1, 1)),
            Err(Error::StreamTooShort(1))
        ));
    }

    #[test]
    fn rare_net_thresholds() {
        let n = build_adder(Arch::Rca, 4).unwrap();
        let sim = Simulator::new(&n).unwrap();
        let vectors: Vec<Vector> = (0..64)
            .map(|t| Vector {
                a: t % 8,
                b: (t / 8) % 8,
                cin: t % 3 == 0,
            })
            .collect();
        let p = sim.run(&vectors).unwrap();
        let all = rare_nets(&p, 1.0).unwrap();
        assert_eq!(all.len(), n.gates.len());
        let never: BTreeSet<NetId> = n
            .gate_output_nets()
            .filter(|&id| p.toggles(id) == 0)
            .collect();
        assert_eq!(rare_nets(&p, 0.0).unwrap(), never);
        assert!(matches!(rare_nets(&p, 1.5), Err(Error::InvalidThreshold(_))));
    }

    #[test]
    fn activity_csv_shape() {
        let n = build_adder(Arch::Rca, 4).unwrap();
        let a = StimulusStream::from_words((0..20).map(|t| t % 7 - 3).collect(), 4).unwrap();
        let b = StimulusStream::from_words((0..20).map(|t| 5 - t % 9).collect(), 4).unwrap();
        let p = simulate(&n, &a, &b).unwrap();
        let csv = export_activity(&p, &n).unwrap();
        assert!(csv.starts_with("net_id,net_name,block,slice,toggles,vectors,probability\n0,a0,input,0,"));
        let rows = import_activity(&csv).unwrap();
        assert_eq!(rows.len(), n.nets.len());
        for row in &rows {
            let expect = row.toggles as f64 / (row.vectors - 1) as f64;
            assert!((row.probability - expect).abs() < 5e-13);
        }
        let short = ToggleProfile {
            vector_count: 1,
            ..p
        };
        assert!(export_activity(&short, &n).is_err());
    }
}
