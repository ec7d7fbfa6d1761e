// SPDX-License-Identifier: Apache-2.0

//! Gate-level netlists for adder and multiplier architectures.
//!
//! Every gate carries a `bit_slice` (the output column it contributes to) and
//! a `block` label, so that a set of nets can be mapped back onto bit-slice
//! sub-modules of the datapath.

mod adders;
mod builder;
mod multipliers;
mod text;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use text::{export_netlist, import_netlist};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NetId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GateId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    And,
    Or,
    Not,
    Nand,
    Nor,
    Xor,
    Xnor,
    Buf,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Not | GateKind::Buf => 1,
            _ => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Buf => "BUF",
        }
    }

    /// Evaluates the gate on 64 packed lanes at once.
    #[inline]
    pub fn eval(self, x: u64, y: u64) -> u64 {
        match self {
            GateKind::And => x & y,
            GateKind::Or => x | y,
            GateKind::Not => !x,
            GateKind::Nand => !(x & y),
            GateKind::Nor => !(x | y),
            GateKind::Xor => x ^ y,
            GateKind::Xnor => !(x ^ y),
            GateKind::Buf => x,
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NOT" => GateKind::Not,
            "NAND" => GateKind::Nand,
            "NOR" => GateKind::Nor,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "BUF" => GateKind::Buf,
            _ => return Err(Error::MalformedNetlist(format!("unknown gate kind `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub bit_slice: u32,
    pub block: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Net {
    pub id: NetId,
    pub name: String,
    pub is_primary_input: bool,
    pub bit_slice: u32,
}

/// The ten datapath architectures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    /// Ripple-carry adder.
    Rca,
    /// Carry-lookahead adder with fully unrolled carry equations.
    Cla,
    /// Carry-skip adder, 4-bit blocks.
    Cka,
    /// Carry-select adder, 4-bit blocks.
    Csa,
    /// Kogge-Stone parallel-prefix adder.
    Ksa,
    /// 4-bit lookahead blocks chained by ripple carries.
    Hybrid,
    /// Baugh-Wooley carry-save array multiplier.
    Array,
    /// Recursive Urdhva-Tiryagbhyam multiplier with lookahead merging.
    Vedic,
    /// Dadda-tree multiplier over sign-extended partial products.
    Dadda,
    /// Radix-4 modified Booth multiplier.
    Booth,
}

impl Arch {
    pub const ALL: [Arch; 10] = [
        Arch::Rca,
        Arch::Cla,
        Arch::Cka,
        Arch::Csa,
        Arch::Ksa,
        Arch::Hybrid,
        Arch::Array,
        Arch::Vedic,
        Arch::Dadda,
        Arch::Booth,
    ];
    pub const ADDERS: [Arch; 6] = [
        Arch::Rca,
        Arch::Cla,
        Arch::Cka,
        Arch::Csa,
        Arch::Ksa,
        Arch::Hybrid,
    ];
    pub const MULTIPLIERS: [Arch; 4] = [Arch::Array, Arch::Vedic, Arch::Dadda, Arch::Booth];

    pub fn id(self) -> &'static str {
        match self {
            Arch::Rca => "rca",
            Arch::Cla => "cla",
            Arch::Cka => "cka",
            Arch::Csa => "csa",
            Arch::Ksa => "ksa",
            Arch::Hybrid => "hybrid",
            Arch::Array => "array",
            Arch::Vedic => "vedic",
            Arch::Dadda => "dadda",
            Arch::Booth => "booth",
        }
    }

    pub fn is_adder(self) -> bool {
        Self::ADDERS.contains(&self)
    }

    pub fn supported_widths(self) -> &'static [u32] {
        if self.is_adder() {
            &[4, 8, 16, 32]
        } else {
            &[4, 8, 16]
        }
    }

    /// Number of output columns: `N + 1` for adders, `2N` for multipliers.
    pub fn output_width(self, width: u32) -> u32 {
        if self.is_adder() {
            width + 1
        } else {
            2 * width
        }
    }

    pub fn build(self, width: u32) -> Result<Netlist> {
        if self.is_adder() {
            build_adder(self, width)
        } else {
            build_multiplier(self, width)
        }
    }
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Arch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Arch::ALL
            .into_iter()
            .find(|a| a.id() == lower || (lower == "ha" && *a == Arch::Hybrid))
            .ok_or_else(|| Error::UnknownArchitecture(s.to_string()))
    }
}

/// An immutable combinational netlist. Net and gate ids are dense indices
/// into `nets` and `gates`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    pub arch: Arch,
    pub width: u32,
    pub nets: Vec<Net>,
    pub gates: Vec<Gate>,
    /// Operand A, bit 0 first.
    pub a_inputs: Vec<NetId>,
    /// Operand B, bit 0 first.
    pub b_inputs: Vec<NetId>,
    pub carry_in: Option<NetId>,
    /// Result bits, column 0 first.
    pub outputs: Vec<NetId>,
}

impl Netlist {
    /// A netlist with no nets or gates.
    pub fn empty(arch: Arch, width: u32) -> Self {
        Netlist {
            arch,
            width,
            nets: Vec::new(),
            gates: Vec::new(),
            a_inputs: Vec::new(),
            b_inputs: Vec::new(),
            carry_in: None,
            outputs: Vec::new(),
        }
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.arch, self.width)
    }

    pub fn output_width(&self) -> u32 {
        self.arch.output_width(self.width)
    }

    pub fn primary_inputs(&self) -> Vec<NetId> {
        self.a_inputs
            .iter()
            .chain(&self.b_inputs)
            .chain(self.carry_in.as_ref())
            .copied()
            .collect()
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.index()]
    }

    /// Gate-output nets: the objects rare-net accounting counts.
    pub fn gate_output_nets(&self) -> impl Iterator<Item = NetId> + '_ {
        self.gates.iter().map(|g| g.output)
    }

    /// Maps each net to the gate driving it, `None` for primary inputs.
    pub fn drivers(&self) -> Vec<Option<GateId>> {
        let mut drivers = vec![None; self.nets.len()];
        for g in &self.gates {
            drivers[g.output.index()] = Some(g.id);
        }
        drivers
    }

    /// Checks structure and returns the gates in topological order.
    ///
    /// Verifies dense ids, gate arity, a single driver per net, that every
    /// gate input is driven, slice ranges, and acyclicity.
    pub fn validate(&self) -> Result<Vec<GateId>> {
        let bad = |msg: String| Err(Error::MalformedNetlist(msg));
        let n_nets = self.nets.len();
        for (i, net) in self.nets.iter().enumerate() {
            if net.id.index() != i {
                return bad(format!("net at position {i} has id {}", net.id));
            }
        }
        let out_width = self.output_width();
        let mut driven = vec![false; n_nets];
        for &pi in self.primary_inputs().iter() {
            if pi.index() >= n_nets {
                return bad(format!("primary input {pi} does not exist"));
            }
            if !self.nets[pi.index()].is_primary_input {
                return bad(format!("net {pi} is used as an input port but not flagged pi"));
            }
            if driven[pi.index()] {
                return bad(format!("net {pi} appears twice among the input ports"));
            }
            driven[pi.index()] = true;
        }
        if let Some(net) = self
            .nets
            .iter()
            .find(|n| n.is_primary_input && !driven[n.id.index()])
        {
            return bad(format!("net {} is flagged pi but is not an input port", net.id));
        }
        for (i, g) in self.gates.iter().enumerate() {
            if g.id.0 as usize != i {
                return bad(format!("gate at position {i} has id {}", g.id.0));
            }
            if g.inputs.len() != g.kind.arity() {
                return bad(format!(
                    "gate {} ({}) has {} inputs",
                    i,
                    g.kind.as_str(),
                    g.inputs.len()
                ));
            }
            if g.bit_slice >= out_width {
                return bad(format!("gate {i} slice {} >= {out_width}", g.bit_slice));
            }
            let out = g.output.index();
            if out >= n_nets {
                return bad(format!("gate {i} drives missing net {}", g.output));
            }
            if driven[out] {
                return bad(format!("net {} has more than one driver", g.output));
            }
            driven[out] = true;
            if let Some(inp) = g.inputs.iter().find(|n| n.index() >= n_nets) {
                return bad(format!("gate {i} reads missing net {inp}"));
            }
        }
        if let Some(i) = driven.iter().position(|d| !d) {
            return bad(format!("net {i} has no driver"));
        }
        if let Some(o) = self.outputs.iter().find(|o| o.index() >= n_nets) {
            return bad(format!("output {o} does not exist"));
        }

        // Kahn's algorithm; lowest gate id first among ready gates.
        let drivers = self.drivers();
        let mut pending: Vec<usize> = vec![0; self.gates.len()];
        let mut fanout: Vec<Vec<u32>> = vec![Vec::new(); n_nets];
        for g in &self.gates {
            for inp in &g.inputs {
                if drivers[inp.index()].is_some() {
                    pending[g.id.0 as usize] += 1;
                    fanout[inp.index()].push(g.id.0);
                }
            }
        }
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = pending
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == 0)
            .map(|(i, _)| std::cmp::Reverse(i as u32))
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(std::cmp::Reverse(gid)) = ready.pop() {
            order.push(GateId(gid));
            let out = self.gates[gid as usize].output;
            for &next in &fanout[out.index()] {
                pending[next as usize] -= 1;
                if pending[next as usize] == 0 {
                    ready.push(std::cmp::Reverse(next));
                }
            }
        }
        if order.len() != self.gates.len() {
            return bad("combinational cycle detected".into());
        }
        Ok(order)
    }
}

/// Builds one of the six adders computing `A + B + cin` over `N + 1` output
/// bits (unsigned carry-out in the top column).
pub fn build_adder(kind: Arch, width: u32) -> Result<Netlist> {
    if !kind.is_adder() {
        return Err(Error::UnknownArchitecture(format!("{kind} is not an adder")));
    }
    if !kind.supported_widths().contains(&width) {
        return Err(Error::UnsupportedWidth {
            kind: kind.to_string(),
            width,
        });
    }
    Ok(adders::build(kind, width))
}

/// Builds one of the four multipliers computing the signed `2N`-bit product.
pub fn build_multiplier(kind: Arch, width: u32) -> Result<Netlist> {
    if kind.is_adder() {
        return Err(Error::UnknownArchitecture(format!(
            "{kind} is not a multiplier"
        )));
    }
    if !kind.supported_widths().contains(&width) {
        return Err(Error::UnsupportedWidth {
            kind: kind.to_string(),
            width,
        });
    }
    Ok(multipliers::build(kind, width))
}

/// Gate-output nets whose slice is at or above `from_column`.
pub fn slice_nets(netlist: &Netlist, from_column: u32) -> Result<BTreeSet<NetId>> {
    let width = netlist.output_width();
    if from_column >= width {
        return Err(Error::ColumnOutOfRange {
            column: from_column,
            width,
        });
    }
    Ok(netlist
        .gates
        .iter()
        .filter(|g| g.bit_slice >= from_column)
        .map(|g| g.output)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arch_ids_round_trip() {
        for a in Arch::ALL {
            assert_eq!(a.id().parse::<Arch>().unwrap(), a);
        }
        assert_eq!("HA".parse::<Arch>().unwrap(), Arch::Hybrid);
        assert!("wallace".parse::<Arch>().is_err());
    }

    #[test]
    fn unsupported_requests() {
        assert!(matches!(
            build_adder(Arch::Rca, 12),
            Err(Error::UnsupportedWidth { .. })
        ));
        assert!(build_multiplier(Arch::Booth, 32).is_err());
        assert!(build_adder(Arch::Booth, 8).is_err());
        assert!(build_multiplier(Arch::Rca, 8).is_err());
    }

    #[test]
    fn rca16_structure() {
        let n = build_adder(Arch::Rca, 16).unwrap();
        assert_eq!(n.gates.len(), 80);
        assert_eq!(n.primary_inputs().len(), 33);
        assert_eq!(n.nets.len(), 113);
        let xor = n.gates.iter().filter(|g| g.kind == GateKind::Xor).count();
        let and = n.gates.iter().filter(|g| g.kind == GateKind::And).count();
        let or = n.gates.iter().filter(|g| g.kind == GateKind::Or).count();
        assert_eq!((xor, and, or), (32, 32, 16));
        for k in 0..16 {
            let label = format!("FA{k}");
            assert_eq!(n.gates.iter().filter(|g| g.block == label).count(), 5);
        }
    }

    #[test]
    fn rca16_slices() {
        let n = build_adder(Arch::Rca, 16).unwrap();
        assert_eq!(slice_nets(&n, 8).unwrap().len(), 40);
        assert_eq!(slice_nets(&n, 13).unwrap().len(), 15);
        assert_eq!(slice_nets(&n, 0).unwrap().len(), 80);
        assert!(matches!(
            slice_nets(&n, 17),
            Err(Error::ColumnOutOfRange { column: 17, width: 17 })
        ));
        let blocks: BTreeSet<&str> = slice_nets(&n, 13)
            .unwrap()
            .iter()
            .map(|id| n.gates.iter().find(|g| g.output == *id).unwrap().block.as_str())
            .collect();
        assert_eq!(blocks, BTreeSet::from(["FA13", "FA14", "FA15"]));
    }

    #[test]
    fn cka16_has_skip_logic_per_block() {
        let n = build_adder(Arch::Cka, 16).unwrap();
        for j in 0..4 {
            let label = format!("skip{j}");
            let gates: Vec<_> = n.gates.iter().filter(|g| g.block == label).collect();
            assert!(!gates.is_empty(), "no skip logic in block {j}");
        }
    }

    #[test]
    fn validator_catches_defects() {
        let good = build_adder(Arch::Rca, 4).unwrap();
        assert!(good.validate().is_ok());

        let mut double = good.clone();
        let out = double.gates[0].output;
        double.gates[1].output = out;
        assert!(double.validate().is_err());

        let mut cyclic = good.clone();
        let last = cyclic.gates.last().unwrap().output;
        cyclic.gates[0].inputs[0] = last;
        let err = cyclic.validate().unwrap_err().to_string();
        assert!(err.contains("cycle") || err.contains("driver"), "{err}");

        let mut arity = good.clone();
        arity.gates[0].inputs.pop();
        assert!(arity.validate().is_err());

        let mut slice = good;
        slice.gates[0].bit_slice = 5;
        assert!(slice.validate().is_err());
    }

    #[test]
    fn gate_kinds_on_packed_lanes() {
        let (x, y) = (0b1100u64, 0b1010u64);
        let mask = 0b1111;
        assert_eq!(GateKind::And.eval(x, y) & mask, 0b1000);
        assert_eq!(GateKind::Or.eval(x, y) & mask, 0b1110);
        assert_eq!(GateKind::Nand.eval(x, y) & mask, 0b0111);
        assert_eq!(GateKind::Nor.eval(x, y) & mask, 0b0001);
        assert_eq!(GateKind::Xor.eval(x, y) & mask, 0b0110);
        assert_eq!(GateKind::Xnor.eval(x, y) & mask, 0b1001);
        assert_eq!(GateKind::Not.eval(x, 0) & mask, 0b0011);
        assert_eq!(GateKind::Buf.eval(x, 0) & mask, 0b1100);
    }
}
