// SPDX-License-Identifier: Apache-2.0

//! Line-oriented netlist text format.
//!
//! ```text
//! arch=rca width=4
//! net 0 a0 pi
//! net 9 FA0.p
//! outputs 10,15,20,25,29
//! gate 0 XOR out=9 in=0,4 slice=0 block=FA0
//! ```
//!
//! Nets are listed by id, gates in topological order with ties broken by id.
//! The `outputs` line lists result nets from column 0 up and is omitted for
//! a netlist without outputs.

use std::fmt::Write as _;

use super::{Arch, Gate, GateId, GateKind, Net, NetId, Netlist};
use crate::error::{Error, Result};

pub fn export_netlist(netlist: &Netlist) -> Result<String> {
    let order = netlist.validate()?;
    let mut out = String::new();
    let _ = writeln!(out, "arch={} width={}", netlist.arch, netlist.width);
    for net in &netlist.nets {
        if net.is_primary_input {
            let _ = writeln!(out, "net {} {} pi", net.id, net.name);
        } else {
            let _ = writeln!(out, "net {} {}", net.id, net.name);
        }
    }
    if !netlist.outputs.is_empty() {
        let ids: Vec<String> = netlist.outputs.iter().map(|o| o.to_string()).collect();
        let _ = writeln!(out, "outputs {}", ids.join(","));
    }
    for gid in order {
        let g = &netlist.gates[gid.0 as usize];
        let ins: Vec<String> = g.inputs.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(
            out,
            "gate {} {} out={} in={} slice={} block={}",
            g.id.0,
            g.kind.as_str(),
            g.output,
            ins.join(","),
            g.bit_slice,
            g.block
        );
    }
    Ok(out)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_ids(line: usize, s: &str) -> Result<Vec<NetId>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.parse::<u32>()
                .map(NetId)
                .map_err(|e| parse_err(line, format!("bad net id `{t}`: {e}")))
        })
        .collect()
}

fn keyed<'a>(line: usize, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=`")))
}

/// Parses the text format back into a validated netlist.
pub fn import_netlist(text: &str) -> Result<Netlist> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(Error::Empty("netlist file"))?;
    let mut tokens = header.split_whitespace();
    let arch: Arch = keyed(1, tokens.next(), "arch")?.parse()?;
    let width: u32 = keyed(1, tokens.next(), "width")?
        .parse()
        .map_err(|e| parse_err(1, format!("bad width: {e}")))?;

    let mut nets: Vec<Net> = Vec::new();
    let mut gates: Vec<Gate> = Vec::new();
    let mut outputs = Vec::new();
    for (ln, line) in lines {
        let mut t = line.split_whitespace();
        match t.next() {
            None => continue,
            Some("net") => {
                let id: u32 = t
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(ln, "bad net id"))?;
                let name = t.next().ok_or_else(|| parse_err(ln, "missing net name"))?;
                let is_primary_input = match t.next() {
                    None => false,
                    Some("pi") => true,
                    Some(other) => return Err(parse_err(ln, format!("unexpected `{other}`"))),
                };
                nets.push(Net {
                    id: NetId(id),
                    name: name.to_string(),
                    is_primary_input,
                    bit_slice: 0,
                });
            }
            Some("outputs") => {
                outputs = parse_ids(ln, t.next().unwrap_or(""))?;
            }
            Some("gate") => {
                let id: u32 = t
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(ln, "bad gate id"))?;
                let kind: GateKind = t
                    .next()
                    .ok_or_else(|| parse_err(ln, "missing gate kind"))?
                    .parse()?;
                let out = parse_ids(ln, keyed(ln, t.next(), "out")?)?;
                let [output] = out[..] else {
                    return Err(parse_err(ln, "gate needs exactly one output"));
                };
                let inputs = parse_ids(ln, keyed(ln, t.next(), "in")?)?;
                let bit_slice = keyed(ln, t.next(), "slice")?
                    .parse()
                    .map_err(|e| parse_err(ln, format!("bad slice: {e}")))?;
                let block = keyed(ln, t.next(), "block")?.to_string();
                gates.push(Gate {
                    id: GateId(id),
                    kind,
                    inputs,
                    output,
                    bit_slice,
                    block,
                });
            }
            Some(other) => return Err(parse_err(ln, format!("unknown record `{other}`"))),
        }
    }
    nets.sort_by_key(|n| n.id);
    gates.sort_by_key(|g| g.id);

    let mut a_inputs = vec![None; width as usize];
    let mut b_inputs = vec![None; width as usize];
    let mut carry_in = None;
    for net in nets.iter_mut().filter(|n| n.is_primary_input) {
        let port = |prefix: &str| -> Option<usize> {
            net.name.strip_prefix(prefix)?.parse().ok()
        };
        if net.name == "cin" {
            carry_in = Some(net.id);
        } else if let Some(i) = port("a").filter(|&i| i < width as usize) {
            a_inputs[i] = Some(net.id);
            net.bit_slice = i as u32;
        } else if let Some(i) = port("b").filter(|&i| i < width as usize) {
            b_inputs[i] = Some(net.id);
            net.bit_slice = i as u32;
        } else {
            return Err(Error::MalformedNetlist(format!(
                "primary input `{}` is not a{{i}}, b{{i}} or cin",
                net.name
            )));
        }
    }
    let collect = |v: Vec<Option<NetId>>| -> Vec<NetId> { v.into_iter().flatten().collect() };
    let (a_inputs, b_inputs) = (collect(a_inputs), collect(b_inputs));
    if !nets.is_empty() && (a_inputs.len() != width as usize || b_inputs.len() != width as usize) {
        return Err(Error::MalformedNetlist(format!(
            "expected {width} a/b input ports"
        )));
    }
    for g in &gates {
        if let Some(net) = nets.get_mut(g.output.index()) {
            net.bit_slice = g.bit_slice;
        }
    }
    let netlist = Netlist {
        arch,
        width,
        nets,
        gates,
        a_inputs,
        b_inputs,
        carry_in,
        outputs,
    };
    netlist.validate()?;
    Ok(netlist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archlib::build_adder;

    #[test]
    fn empty_netlist_is_header_only() {
        let text = export_netlist(&Netlist::empty(Arch::Rca, 4)).unwrap();
        assert_eq!(text, "arch=rca width=4\n");
        let back = import_netlist(&text).unwrap();
        assert!(back.nets.is_empty() && back.gates.is_empty());
    }

    #[test]
    fn round_trip_is_byte_stable() {
        for arch in Arch::ALL {
            let n = arch.build(4).unwrap();
            let text = export_netlist(&n).unwrap();
            let back = import_netlist(&text).unwrap();
            assert_eq!(back, n, "{arch}");
            assert_eq!(export_netlist(&back).unwrap(), text);
        }
    }

    #[test]
    fn import_rejects_garbage() {
        let n = build_adder(Arch::Rca, 4).unwrap();
        let text = export_netlist(&n).unwrap();
        assert!(import_netlist("").is_err());
        assert!(import_netlist("arch=foo width=4\n").is_err());
        assert!(import_netlist(&text.replace("XOR", "MUX")).is_err());
        assert!(import_netlist(&format!("{text}wire 3\n")).is_err());
        // dropping a net line leaves a gate reading a missing net
        let cut: String = text
            .lines()
            .filter(|l| !l.starts_with("net 9 "))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(import_netlist(&cut).is_err());
    }
}
