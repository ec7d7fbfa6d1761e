// SPDX-License-Identifier: Apache-2.0

//! Netlist construction with constant folding.
//!
//! Generators work on [`Sig`] values, which may be the constants 0 and 1.
//! Gate helpers fold constants and trivial identities away, so a carry-in
//! tied to 0 or a zero-extended operand never materializes as a constant net.
//!
//! Nets that depend on few primary inputs also carry an exact truth table.
//! A gate whose table comes out constant is folded even when its inputs are
//! not constants, which removes logic that no input pattern can exercise.

use std::collections::HashMap;

use super::{Arch, Gate, GateId, GateKind, Net, NetId, Netlist};

/// Largest support tracked by truth tables.
const SUPPORT_LIMIT: usize = 12;

/// Truth table of a net over a sorted set of primary inputs. Bit `m` holds
/// the value under the assignment `support[t] = (m >> t) & 1`.
#[derive(Debug, Clone)]
struct Func {
    support: Vec<NetId>,
    table: Vec<u64>,
}

impl Func {
    fn input(id: NetId) -> Self {
        Func {
            support: vec![id],
            table: vec![0b10],
        }
    }

    fn bit(&self, m: usize) -> u64 {
        (self.table[m / 64] >> (m % 64)) & 1
    }

    /// Re-indexes the table onto a superset of its support.
    fn widen(&self, support: &[NetId]) -> Vec<u64> {
        let pos: Vec<usize> = self
            .support
            .iter()
            .map(|s| support.binary_search(s).unwrap())
            .collect();
        let rows = 1usize << support.len();
        let mut out = vec![0u64; rows.div_ceil(64)];
        for m in 0..rows {
            let local = pos
                .iter()
                .enumerate()
                .fold(0, |acc, (t, &p)| acc | (((m >> p) & 1) << t));
            out[m / 64] |= self.bit(local) << (m % 64);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Sig {
    Zero,
    One,
    Net(NetId),
}

impl Sig {
    pub(crate) fn net(self) -> Option<NetId> {
        match self {
            Sig::Net(n) => Some(n),
            _ => None,
        }
    }
}

pub(crate) struct Builder {
    arch: Arch,
    width: u32,
    nets: Vec<Net>,
    gates: Vec<Gate>,
    names: HashMap<String, u32>,
    funcs: Vec<Option<Func>>,
    a: Vec<NetId>,
    b: Vec<NetId>,
    cin: Option<NetId>,
    // placement context for new gates
    slice: u32,
    block: String,
}

impl Builder {
    pub(crate) fn new(arch: Arch, width: u32) -> Self {
        Builder {
            arch,
            width,
            nets: Vec::new(),
            gates: Vec::new(),
            names: HashMap::new(),
            funcs: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            cin: None,
            slice: 0,
            block: String::new(),
        }
    }

    fn new_net(&mut self, name: String, is_primary_input: bool, bit_slice: u32) -> NetId {
        let count = self.names.entry(name.clone()).or_insert(0);
        let name = if *count == 0 {
            name
        } else {
            format!("{name}#{count}")
        };
        *count += 1;
        let id = NetId(self.nets.len() as u32);
        self.nets.push(Net {
            id,
            name,
            is_primary_input,
            bit_slice,
        });
        self.funcs
            .push(is_primary_input.then(|| Func::input(id)));
        id
    }

    /// Creates operand ports `a[0..N]`, `b[0..N]` and optionally `cin`.
    pub(crate) fn ports(&mut self, carry_in: bool) -> (Vec<Sig>, Vec<Sig>, Sig) {
        for i in 0..self.width {
            let id = self.new_net(format!("a{i}"), true, i);
            self.a.push(id);
        }
        for i in 0..self.width {
            let id = self.new_net(format!("b{i}"), true, i);
            self.b.push(id);
        }
        let cin = if carry_in {
            let id = self.new_net("cin".into(), true, 0);
            self.cin = Some(id);
            Sig::Net(id)
        } else {
            Sig::Zero
        };
        (
            self.a.iter().map(|&n| Sig::Net(n)).collect(),
            self.b.iter().map(|&n| Sig::Net(n)).collect(),
            cin,
        )
    }

    /// Sets the column and block label assigned to subsequently created gates.
    pub(crate) fn at(&mut self, slice: u32, block: impl Into<String>) {
        self.slice = slice;
        self.block = block.into();
    }

    /// Truth table of `kind` over `inputs`, or `None` when the support is
    /// too wide to track.
    fn combine(&self, kind: GateKind, inputs: &[NetId]) -> Option<Func> {
        let mut support = Vec::new();
        for i in inputs {
            support.extend_from_slice(&self.funcs[i.index()].as_ref()?.support);
        }
        support.sort_unstable();
        support.dedup();
        if support.len() > SUPPORT_LIMIT {
            return None;
        }
        let x = self.funcs[inputs[0].index()].as_ref()?.widen(&support);
        let y = match inputs.get(1) {
            Some(i) => self.funcs[i.index()].as_ref()?.widen(&support),
            None => vec![0; x.len()],
        };
        let rows = 1usize << support.len();
        let mut table: Vec<u64> = x.iter().zip(&y).map(|(&p, &q)| kind.eval(p, q)).collect();
        if rows < 64 {
            table[0] &= (1u64 << rows) - 1;
        }
        Some(Func { support, table })
    }

    fn emit(&mut self, kind: GateKind, inputs: &[NetId], tag: &str) -> Sig {
        let func = self.combine(kind, inputs);
        if let Some(f) = &func {
            let rows = 1usize << f.support.len();
            let ones: u32 = f.table.iter().map(|w| w.count_ones()).sum();
            if ones == 0 {
                return Sig::Zero;
            }
            if ones as usize == rows {
                return Sig::One;
            }
        }
        let name = format!("{}.{}", self.block, tag);
        let out = self.new_net(name, false, self.slice);
        let id = GateId(self.gates.len() as u32);
        self.gates.push(Gate {
            id,
            kind,
            inputs: inputs.to_vec(),
            output: out,
            bit_slice: self.slice,
            block: self.block.clone(),
        });
        self.funcs[out.index()] = func;
        Sig::Net(out)
    }

    pub(crate) fn not(&mut self, x: Sig, tag: &str) -> Sig {
        match x {
            Sig::Zero => Sig::One,
            Sig::One => Sig::Zero,
            Sig::Net(n) => self.emit(GateKind::Not, &[n], tag),
        }
    }

    pub(crate) fn and(&mut self, x: Sig, y: Sig, tag: &str) -> Sig {
        match (x, y) {
            (Sig::Zero, _) | (_, Sig::Zero) => Sig::Zero,
            (Sig::One, o) | (o, Sig::One) => o,
            (Sig::Net(p), Sig::Net(q)) if p == q => x,
            (Sig::Net(p), Sig::Net(q)) => self.emit(GateKind::And, &[p, q], tag),
        }
    }

    pub(crate) fn or(&mut self, x: Sig, y: Sig, tag: &str) -> Sig {
        match (x, y) {
            (Sig::One, _) | (_, Sig::One) => Sig::One,
            (Sig::Zero, o) | (o, Sig::Zero) => o,
            (Sig::Net(p), Sig::Net(q)) if p == q => x,
            (Sig::Net(p), Sig::Net(q)) => self.emit(GateKind::Or, &[p, q], tag),
        }
    }

    pub(crate) fn nand(&mut self, x: Sig, y: Sig, tag: &str) -> Sig {
        match (x, y) {
            (Sig::Net(p), Sig::Net(q)) if p != q => self.emit(GateKind::Nand, &[p, q], tag),
            _ => {
                let v = self.and(x, y, tag);
                self.not(v, tag)
            }
        }
    }

    pub(crate) fn xor(&mut self, x: Sig, y: Sig, tag: &str) -> Sig {
        match (x, y) {
            (Sig::Zero, o) | (o, Sig::Zero) => o,
            (Sig::One, o) | (o, Sig::One) => self.not(o, tag),
            (Sig::Net(p), Sig::Net(q)) if p == q => Sig::Zero,
            (Sig::Net(p), Sig::Net(q)) => self.emit(GateKind::Xor, &[p, q], tag),
        }
    }

    pub(crate) fn xnor(&mut self, x: Sig, y: Sig, tag: &str) -> Sig {
        match (x, y) {
            (Sig::Net(p), Sig::Net(q)) if p != q => self.emit(GateKind::Xnor, &[p, q], tag),
            _ => {
                let v = self.xor(x, y, tag);
                self.not(v, tag)
            }
        }
    }

    /// `(sum, carry)` of two bits.
    pub(crate) fn half_adder(&mut self, x: Sig, y: Sig) -> (Sig, Sig) {
        match (x, y) {
            // x + 1: sum = !x, carry = x
            (Sig::One, o) | (o, Sig::One) => (self.not(o, "s"), o),
            _ => {
                let s = self.xor(x, y, "s");
                let c = self.and(x, y, "c");
                (s, c)
            }
        }
    }

    /// `(sum, carry)` of three bits: `p = x^y, s = p^z, c = xy | pz`.
    pub(crate) fn full_adder(&mut self, x: Sig, y: Sig, z: Sig) -> (Sig, Sig) {
        let ones = [x, y, z].iter().filter(|&&s| s == Sig::One).count();
        let mut rest = [x, y, z].into_iter().filter(|&s| s != Sig::One);
        match ones {
            0 => {
                let p = self.xor(x, y, "p");
                let s = self.xor(p, z, "s");
                let g = self.and(x, y, "g");
                let t = self.and(p, z, "t");
                let c = self.or(g, t, "c");
                (s, c)
            }
            1 => {
                // x + y + 1: sum = xnor(x, y), carry = x | y
                let (p, q) = (rest.next().unwrap(), rest.next().unwrap());
                let s = self.xnor(p, q, "s");
                let c = self.or(p, q, "c");
                (s, c)
            }
            2 => (rest.next().unwrap(), Sig::One),
            _ => (Sig::One, Sig::One),
        }
    }

    /// Like `full_adder` but drops the carry (top column of a truncated sum).
    pub(crate) fn sum3(&mut self, x: Sig, y: Sig, z: Sig) -> Sig {
        let p = self.xor(x, y, "p");
        self.xor(p, z, "s")
    }

    /// Drops gates that reach no output, renumbers nets and gates densely
    /// in creation order, and returns the netlist.
    pub(crate) fn finish(self, outputs: Vec<Sig>) -> Netlist {
        let outputs: Vec<NetId> = outputs
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.net()
                    .unwrap_or_else(|| panic!("{} output {i} folded to a constant", self.arch))
            })
            .collect();

        let mut live = vec![false; self.nets.len()];
        for o in &outputs {
            live[o.index()] = true;
        }
        // gates are created after their inputs, so reverse creation order is
        // a reverse topological order
        for g in self.gates.iter().rev() {
            if live[g.output.index()] {
                for i in &g.inputs {
                    live[i.index()] = true;
                }
            }
        }
        let mut remap = vec![NetId(u32::MAX); self.nets.len()];
        let mut nets = Vec::new();
        for net in self.nets {
            if net.is_primary_input || live[net.id.index()] {
                remap[net.id.index()] = NetId(nets.len() as u32);
                nets.push(Net {
                    id: NetId(nets.len() as u32),
                    ..net
                });
            }
        }
        let gates: Vec<Gate> = self
            .gates
            .into_iter()
            .filter(|g| live[g.output.index()])
            .enumerate()
            .map(|(i, g)| Gate {
                id: GateId(i as u32),
                inputs: g.inputs.iter().map(|n| remap[n.index()]).collect(),
                output: remap[g.output.index()],
                ..g
            })
            .collect();
        let map = |v: Vec<NetId>| -> Vec<NetId> { v.iter().map(|n| remap[n.index()]).collect() };
        let netlist = Netlist {
            arch: self.arch,
            width: self.width,
            nets,
            gates,
            a_inputs: map(self.a),
            b_inputs: map(self.b),
            carry_in: self.cin.map(|n| remap[n.index()]),
            outputs: map(outputs),
        };
        debug_assert!(netlist.validate().is_ok());
        netlist
    }
}
