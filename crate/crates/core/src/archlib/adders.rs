// SPDX-License-Identifier: Apache-2.0

//! Adder generators. All six compute `A + B + cin` with `N + 1` result bits.
//!
//! Slice assignment: full-adder cells belong to the column of the sum bit
//! they produce; lookahead and prefix gates take the column of the carry they
//! produce (`c[k]` feeds column `k`); skip/select logic sits in the highest
//! column of its 4-bit block; the gate driving the word's carry-out sits in
//! column `N`.

use super::builder::{Builder, Sig};
use super::{Arch, Netlist};

const BLOCK: u32 = 4;

pub(super) fn build(kind: Arch, width: u32) -> Netlist {
    let mut b = Builder::new(kind, width);
    let (a, bb, cin) = b.ports(true);
    let (sums, cout) = match kind {
        Arch::Rca => ripple(&mut b, &a, &bb, cin),
        Arch::Cla => lookahead(&mut b, &a, &bb, cin, width),
        Arch::Hybrid => lookahead(&mut b, &a, &bb, cin, BLOCK),
        Arch::Cka => carry_skip(&mut b, &a, &bb, cin),
        Arch::Csa => carry_select(&mut b, &a, &bb, cin),
        Arch::Ksa => kogge_stone(&mut b, &a, &bb, cin),
        _ => unreachable!("not an adder"),
    };
    let mut outputs = sums;
    outputs.push(cout);
    let mut netlist = b.finish(outputs);
    move_carry_out(&mut netlist);
    netlist
}

fn move_carry_out(n: &mut Netlist) {
    let top = n.width;
    let cout = *n.outputs.last().expect("adder has outputs");
    if let Some(g) = n.gates.iter_mut().find(|g| g.output == cout) {
        g.bit_slice = top;
        n.nets[cout.index()].bit_slice = top;
    }
}

/// Full-adder cell in block `FA<k>`; also returns the propagate signal.
fn fa_cell(b: &mut Builder, x: Sig, y: Sig, c: Sig) -> (Sig, Sig, Sig) {
    let p = b.xor(x, y, "p");
    let s = b.xor(p, c, "s");
    let g = b.and(x, y, "g");
    let t = b.and(p, c, "t");
    let co = b.or(g, t, "c");
    (s, co, p)
}

fn ripple(b: &mut Builder, a: &[Sig], bb: &[Sig], cin: Sig) -> (Vec<Sig>, Sig) {
    let mut c = cin;
    let mut sums = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        b.at(k as u32, format!("FA{k}"));
        let (s, co, _) = fa_cell(b, a[k], bb[k], c);
        sums.push(s);
        c = co;
    }
    (sums, c)
}

/// Carry into column `k` from bits `[lo, k)` and the carry `c_lo`, with the
/// carry equation fully unrolled: `g[k-1] | p[k-1]g[k-2] | ... | p[k-1..lo]c_lo`.
fn unrolled_carry(b: &mut Builder, p: &[Sig], g: &[Sig], lo: usize, k: usize, c_lo: Sig) -> Sig {
    let mut acc = g[k - 1];
    let mut prod = p[k - 1];
    for j in (lo..k - 1).rev() {
        let t = b.and(prod, g[j], "t");
        acc = b.or(acc, t, "o");
        prod = b.and(prod, p[j], "pp");
    }
    let t = b.and(prod, c_lo, "t");
    b.or(acc, t, "c")
}

/// Lookahead adder built from groups of `group` bits, each with unrolled
/// carry equations; groups are chained by their carry-out. `group == N`
/// gives the single-level CLA.
fn lookahead(b: &mut Builder, a: &[Sig], bb: &[Sig], cin: Sig, group: u32) -> (Vec<Sig>, Sig) {
    let n = a.len();
    let mut p = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for k in 0..n {
        b.at(k as u32, format!("PG{k}"));
        p.push(b.xor(a[k], bb[k], "p"));
        g.push(b.and(a[k], bb[k], "g"));
    }
    let mut carries = vec![cin];
    let group = group as usize;
    for lo in (0..n).step_by(group) {
        let c_lo = carries[lo];
        for k in lo + 1..=(lo + group).min(n) {
            b.at(k as u32, format!("CL{k}"));
            let c = unrolled_carry(b, &p, &g, lo, k, c_lo);
            carries.push(c);
        }
    }
    let mut sums = Vec::with_capacity(n);
    for k in 0..n {
        b.at(k as u32, format!("S{k}"));
        sums.push(b.xor(p[k], carries[k], "s"));
    }
    (sums, carries[n])
}

fn carry_skip(b: &mut Builder, a: &[Sig], bb: &[Sig], cin: Sig) -> (Vec<Sig>, Sig) {
    let n = a.len();
    let mut c = cin;
    let mut sums = Vec::with_capacity(n);
    for (j, lo) in (0..n).step_by(BLOCK as usize).enumerate() {
        let hi = lo + BLOCK as usize;
        let block_in = c;
        let mut props = Vec::with_capacity(BLOCK as usize);
        for k in lo..hi {
            b.at(k as u32, format!("FA{k}"));
            let (s, co, p) = fa_cell(b, a[k], bb[k], c);
            sums.push(s);
            props.push(p);
            c = co;
        }
        b.at(hi as u32 - 1, format!("skip{j}"));
        let mut all = props[0];
        for &p in &props[1..] {
            all = b.and(all, p, "bp");
        }
        let skip = b.and(all, block_in, "sk");
        c = b.or(c, skip, "c");
    }
    (sums, c)
}

fn carry_select(b: &mut Builder, a: &[Sig], bb: &[Sig], cin: Sig) -> (Vec<Sig>, Sig) {
    let n = a.len();
    let step = BLOCK as usize;
    let mut sums = Vec::with_capacity(n);
    let mut c = cin;
    for k in 0..step {
        b.at(k as u32, format!("FA{k}"));
        let (s, co, _) = fa_cell(b, a[k], bb[k], c);
        sums.push(s);
        c = co;
    }
    for (j, lo) in (step..n).step_by(step).enumerate() {
        let j = j + 1;
        let hi = lo + step;
        let mut chains = [(Vec::new(), Sig::Zero), (Vec::new(), Sig::One)];
        for (variant, (chain_sums, carry)) in chains.iter_mut().enumerate() {
            for k in lo..hi {
                b.at(k as u32, format!("FA{k}.{variant}"));
                let (s, co, _) = fa_cell(b, a[k], bb[k], *carry);
                chain_sums.push(s);
                *carry = co;
            }
        }
        b.at(hi as u32 - 1, format!("sel{j}"));
        let select = c;
        let not_select = b.not(select, "ns");
        for i in 0..step {
            let lo_pick = b.and(chains[0].0[i], not_select, "m0");
            let hi_pick = b.and(chains[1].0[i], select, "m1");
            sums.push(b.or(lo_pick, hi_pick, "s"));
        }
        // c1 >= c0, so cout = c0 | (c1 & select)
        let t = b.and(chains[1].1, select, "t");
        c = b.or(chains[0].1, t, "c");
    }
    (sums, c)
}

fn kogge_stone(b: &mut Builder, a: &[Sig], bb: &[Sig], cin: Sig) -> (Vec<Sig>, Sig) {
    let n = a.len();
    let mut p = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for k in 0..n {
        b.at(k as u32, format!("PG{k}"));
        p.push(b.xor(a[k], bb[k], "p"));
        g.push(b.and(a[k], bb[k], "g"));
    }
    // G[i]: carry out of bit i over the span combined so far.
    let mut gg = g.clone();
    let mut pp = p.clone();
    b.at(1, "PFX0");
    let t = b.and(p[0], cin, "t");
    gg[0] = b.or(g[0], t, "g");

    let mut d = 1;
    let mut level = 1;
    while d < n {
        let mut next_g = gg.clone();
        let mut next_p = pp.clone();
        for i in d..n {
            b.at(i as u32 + 1, format!("PFX{level}"));
            let t = b.and(pp[i], gg[i - d], "t");
            next_g[i] = b.or(gg[i], t, "g");
            if 2 * d < n && i >= 2 * d {
                next_p[i] = b.and(pp[i], pp[i - d], "p");
            }
        }
        gg = next_g;
        pp = next_p;
        d *= 2;
        level += 1;
    }
    let mut sums = Vec::with_capacity(n);
    for k in 0..n {
        b.at(k as u32, format!("S{k}"));
        let c = if k == 0 { cin } else { gg[k - 1] };
        sums.push(b.xor(p[k], c, "s"));
    }
    (sums, gg[n - 1])
}
