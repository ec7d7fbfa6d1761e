// SPDX-License-Identifier: Apache-2.0

//! Signed `N x N -> 2N` multiplier generators.
//!
//! Partial-product gates sit in the column of the product weight they feed;
//! compressor and adder cells sit in the column they sum. Booth encoder gates
//! sit in the lowest column of the row they drive.

use super::builder::{Builder, Sig};
use super::{Arch, Netlist};

type Columns = Vec<Vec<Sig>>;

pub(super) fn build(kind: Arch, width: u32) -> Netlist {
    let mut b = Builder::new(kind, width);
    let (a, bb, _) = b.ports(false);
    let product = match kind {
        Arch::Array => baugh_wooley_array(&mut b, &a, &bb),
        Arch::Dadda => dadda(&mut b, &a, &bb),
        Arch::Booth => booth_radix4(&mut b, &a, &bb),
        Arch::Vedic => vedic_signed(&mut b, &a, &bb),
        _ => unreachable!("not a multiplier"),
    };
    b.finish(product)
}

fn push(cols: &mut Columns, col: usize, s: Sig) {
    if col < cols.len() && s != Sig::Zero {
        cols[col].push(s);
    }
}

/// Carry-propagate adder over columns holding at most two bits each.
fn ripple_columns(b: &mut Builder, cols: Columns, label: &str) -> Vec<Sig> {
    let w = cols.len();
    let mut carry = Sig::Zero;
    let mut out = Vec::with_capacity(w);
    for (i, mut bits) in cols.into_iter().enumerate() {
        if carry != Sig::Zero {
            bits.push(carry);
        }
        b.at(i as u32, format!("{label}.col{i}"));
        let top = i + 1 == w;
        let (s, c) = match bits.len() {
            0 => (Sig::Zero, Sig::Zero),
            1 => (bits[0], Sig::Zero),
            2 if top => (b.xor(bits[0], bits[1], "s"), Sig::Zero),
            2 => b.half_adder(bits[0], bits[1]),
            3 if top => (b.sum3(bits[0], bits[1], bits[2]), Sig::Zero),
            3 => b.full_adder(bits[0], bits[1], bits[2]),
            n => panic!("column {i} holds {n} bits before the final adder"),
        };
        out.push(s);
        carry = c;
    }
    out
}

fn normalize_ones(cols: &mut Columns) {
    for i in 0..cols.len() {
        let ones = cols[i].iter().filter(|&&s| s == Sig::One).count();
        cols[i].retain(|&s| s != Sig::One);
        if ones % 2 == 1 {
            cols[i].push(Sig::One);
        }
        for _ in 0..ones / 2 {
            push(cols, i + 1, Sig::One);
        }
    }
}

/// Dadda column compression down to two bits per column.
fn dadda_reduce(b: &mut Builder, mut cols: Columns) -> Columns {
    let w = cols.len();
    normalize_ones(&mut cols);
    let max_h = cols.iter().map(Vec::len).max().unwrap_or(0);
    let mut heights = vec![2usize];
    while *heights.last().unwrap() < max_h {
        let d = *heights.last().unwrap();
        heights.push(d * 3 / 2);
    }
    let targets: Vec<usize> = heights.into_iter().rev().filter(|&d| d < max_h).collect();
    for (stage, &d) in targets.iter().enumerate() {
        let mut next: Columns = vec![Vec::new(); w];
        for i in 0..w {
            let col = std::mem::take(&mut cols[i]);
            let mut h = col.len() + next[i].len();
            let mut idx = 0;
            let top = i + 1 == w;
            while h > d && col.len() - idx >= 2 {
                b.at(i as u32, format!("dadda{stage}.col{i}"));
                if h == d + 1 || col.len() - idx == 2 {
                    let (x, y) = (col[idx], col[idx + 1]);
                    idx += 2;
                    h -= 1;
                    if top {
                        let s = b.xor(x, y, "s");
                        push(&mut next, i, s);
                    } else {
                        let (s, c) = b.half_adder(x, y);
                        push(&mut next, i, s);
                        push(&mut next, i + 1, c);
                    }
                } else {
                    let (x, y, z) = (col[idx], col[idx + 1], col[idx + 2]);
                    idx += 3;
                    h -= 2;
                    if top {
                        let s = b.sum3(x, y, z);
                        push(&mut next, i, s);
                    } else {
                        let (s, c) = b.full_adder(x, y, z);
                        push(&mut next, i, s);
                        push(&mut next, i + 1, c);
                    }
                }
            }
            next[i].extend_from_slice(&col[idx..]);
        }
        cols = next;
        normalize_ones(&mut cols);
    }
    debug_assert!(cols.iter().all(|c| c.len() <= 2), "dadda left a tall column");
    cols
}

/// Carry-save array over Baugh-Wooley partial products. Terms of negative
/// weight enter as NANDs; the resulting offset is two constant ones at
/// columns `N` and `2N-1`.
fn baugh_wooley_array(b: &mut Builder, a: &[Sig], bb: &[Sig]) -> Vec<Sig> {
    let n = a.len();
    let w = 2 * n;
    let mut rows: Vec<Vec<(usize, Sig)>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let col = i + j;
            b.at(col as u32, format!("pp_row{j}"));
            let sign_term = (i == n - 1) != (j == n - 1);
            let bit = if sign_term {
                b.nand(a[i], bb[j], &format!("pp{i}"))
            } else {
                b.and(a[i], bb[j], &format!("pp{i}"))
            };
            row.push((col, bit));
        }
        rows.push(row);
    }
    rows[0].push((n, Sig::One));

    let mut acc: Columns = vec![Vec::new(); w];
    for &(col, bit) in &rows[0] {
        push(&mut acc, col, bit);
    }
    for (j, row) in rows.iter().enumerate().skip(1) {
        let mut next: Columns = vec![Vec::new(); w];
        let mut incoming: Vec<Option<Sig>> = vec![None; w];
        for &(col, bit) in row {
            incoming[col] = Some(bit);
        }
        for i in 0..w {
            let mut bits = std::mem::take(&mut acc[i]);
            match incoming[i] {
                Some(bit) => {
                    bits.push(bit);
                    b.at(i as u32, format!("csa{j}.col{i}"));
                    let (s, c) = match bits.len() {
                        1 => (bits[0], Sig::Zero),
                        2 => b.half_adder(bits[0], bits[1]),
                        3 => b.full_adder(bits[0], bits[1], bits[2]),
                        h => panic!("array column {i} reached height {h}"),
                    };
                    push(&mut next, i, s);
                    push(&mut next, i + 1, c);
                }
                None => next[i].extend(bits),
            }
        }
        acc = next;
    }
    push(&mut acc, w - 1, Sig::One);
    normalize_ones(&mut acc);
    ripple_columns(b, acc, "cpa")
}

/// Adds a constant to the columns as a pattern of ones, modulo `2^w`.
fn push_constant(cols: &mut Columns, value: u64) {
    for (i, col) in cols.iter_mut().enumerate() {
        if (value >> i) & 1 == 1 {
            col.push(Sig::One);
        }
    }
}

fn wrap(w: usize) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

/// Dadda tree over the signed partial-product matrix. A row whose top bit
/// `s` has weight `-2^k` contributes `!s` at column `k` plus the constant
/// `-2^k`, so no sign bit is ever replicated across columns.
fn dadda(b: &mut Builder, a: &[Sig], bb: &[Sig]) -> Vec<Sig> {
    let n = a.len();
    let w = 2 * n;
    let mut cols: Columns = vec![Vec::new(); w];
    let mut constant = 0u64;
    for j in 0..n {
        for i in 0..n {
            let col = i + j;
            b.at(col as u32, format!("pp_row{j}"));
            // a_i b_j carries negative weight when exactly one index is the
            // sign position; that term enters inverted with a -2^col offset
            let negative = (i == n - 1) != (j == n - 1);
            let bit = if negative {
                constant = constant.wrapping_sub(1 << col);
                b.nand(a[i], bb[j], &format!("pp{i}"))
            } else {
                b.and(a[i], bb[j], &format!("pp{i}"))
            };
            push(&mut cols, col, bit);
        }
    }
    push_constant(&mut cols, constant & wrap(w));
    let cols = dadda_reduce(b, cols);
    ripple_columns(b, cols, "cpa")
}

/// Radix-4 modified Booth recoding of B; each row selects 0, ±A or ±2A.
fn booth_radix4(b: &mut Builder, a: &[Sig], bb: &[Sig]) -> Vec<Sig> {
    let n = a.len();
    let w = 2 * n;
    let mut cols: Columns = vec![Vec::new(); w];
    let mut constant = 0u64;
    for j in 0..n / 2 {
        let base = 2 * j;
        let hi = bb[base + 1];
        let mid = bb[base];
        let lo = if j == 0 { Sig::Zero } else { bb[base - 1] };
        b.at(base as u32, format!("booth_enc{j}"));
        let neg = hi;
        let one = b.xor(mid, lo, "one");
        let differ = b.xor(hi, mid, "x");
        let not_one = b.not(one, "n1");
        let two = b.and(differ, not_one, "two");

        // row bits 0..n, the top one being the sign; it enters inverted
        // with a -2^(base+n) offset instead of being sign-extended
        for i in 0..=n {
            let col = base + i;
            b.at(col as u32, format!("pp_row{j}"));
            let ai = a[i.min(n - 1)];
            let prev = if i == 0 { Sig::Zero } else { a[i - 1] };
            let t1 = b.and(one, ai, &format!("o{i}"));
            let t2 = b.and(two, prev, &format!("t{i}"));
            let sel = b.or(t1, t2, &format!("m{i}"));
            let bit = if i == n {
                constant = constant.wrapping_sub(1 << col);
                b.xnor(sel, neg, &format!("pp{i}"))
            } else {
                b.xor(sel, neg, &format!("pp{i}"))
            };
            push(&mut cols, col, bit);
        }
        push(&mut cols, base, neg);
    }
    push_constant(&mut cols, constant & wrap(w));
    let cols = dadda_reduce(b, cols);
    ripple_columns(b, cols, "cpa")
}

/// Adds `x + y + cin` with fully unrolled lookahead carries and keeps
/// `out_len` result bits. Bit `k` of the result is placed in column
/// `base + k`.
fn lookahead_add(
    b: &mut Builder,
    x: &[Sig],
    y: &[Sig],
    cin: Sig,
    out_len: usize,
    base: usize,
    label: &str,
) -> Vec<Sig> {
    let len = x.len().max(y.len()).min(out_len);
    let bit = |v: &[Sig], k: usize| v.get(k).copied().unwrap_or(Sig::Zero);
    let carry_count = if out_len > len { len } else { len - 1 };
    let mut p = Vec::with_capacity(len);
    let mut g = Vec::with_capacity(carry_count);
    for k in 0..len {
        b.at((base + k) as u32, label);
        p.push(b.xor(bit(x, k), bit(y, k), "p"));
        if k < carry_count {
            g.push(b.and(bit(x, k), bit(y, k), "g"));
        }
    }
    let mut carries = vec![cin];
    for k in 1..=carry_count {
        b.at((base + k) as u32, label);
        let mut acc = g[k - 1];
        let mut prod = p[k - 1];
        for j in (0..k - 1).rev() {
            let t = b.and(prod, g[j], "t");
            acc = b.or(acc, t, "o");
            prod = b.and(prod, p[j], "pp");
        }
        let t = b.and(prod, cin, "t");
        carries.push(b.or(acc, t, "c"));
    }
    let mut out = Vec::with_capacity(out_len);
    for k in 0..len {
        b.at((base + k) as u32, label);
        out.push(b.xor(p[k], carries[k], "s"));
    }
    if out_len > len {
        out.push(carries[len]);
    }
    out
}

/// Unsigned Urdhva-Tiryagbhyam product of two `n`-bit vectors (n a power
/// of two), placed at column offset `base`.
fn vedic_unsigned(b: &mut Builder, x: &[Sig], y: &[Sig], base: usize, path: &str) -> Vec<Sig> {
    let n = x.len();
    if n == 2 {
        b.at(base as u32, path);
        let p0 = b.and(x[0], y[0], "p0");
        b.at(base as u32 + 1, path);
        let t1 = b.and(x[1], y[0], "t1");
        let t2 = b.and(x[0], y[1], "t2");
        let (p1, c1) = b.half_adder(t1, t2);
        b.at(base as u32 + 2, path);
        let t3 = b.and(x[1], y[1], "t3");
        let (p2, p3) = b.half_adder(t3, c1);
        return vec![p0, p1, p2, p3];
    }
    let h = n / 2;
    let (xl, xh) = x.split_at(h);
    let (yl, yh) = y.split_at(h);
    let q0 = vedic_unsigned(b, xl, yl, base, &format!("{path}.ll"));
    let q1 = vedic_unsigned(b, xh, yl, base + h, &format!("{path}.hl"));
    let q2 = vedic_unsigned(b, xl, yh, base + h, &format!("{path}.lh"));
    let q3 = vedic_unsigned(b, xh, yh, base + n, &format!("{path}.hh"));
    let cross = lookahead_add(b, &q1, &q2, Sig::Zero, n + 1, base + h, &format!("{path}.add0"));
    let mid = lookahead_add(
        b,
        &cross,
        &q0[h..],
        Sig::Zero,
        n + 1,
        base + h,
        &format!("{path}.add1"),
    );
    let top = lookahead_add(b, &mid[h..], &q3, Sig::Zero, n, base + n, &format!("{path}.add2"));
    let mut out = Vec::with_capacity(2 * n);
    out.extend_from_slice(&q0[..h]);
    out.extend_from_slice(&mid[..h]);
    out.extend(top);
    out
}

/// Signed product from the unsigned one:
/// `P = U - 2^N (a_sign * B + b_sign * A) mod 2^2N`.
fn vedic_signed(b: &mut Builder, a: &[Sig], bb: &[Sig]) -> Vec<Sig> {
    let n = a.len();
    let unsigned = vedic_unsigned(b, a, bb, 0, &format!("v{n}"));
    let (a_sign, b_sign) = (a[n - 1], bb[n - 1]);
    let mut minus_b = Vec::with_capacity(n);
    let mut minus_a = Vec::with_capacity(n);
    for k in 0..n {
        b.at((n + k) as u32, "sgn.corr");
        minus_b.push(b.nand(a_sign, bb[k], &format!("nb{k}")));
        minus_a.push(b.nand(b_sign, a[k], &format!("na{k}")));
    }
    let hi = lookahead_add(b, &unsigned[n..], &minus_b, Sig::One, n, n, "sgn.sub0");
    let hi = lookahead_add(b, &hi, &minus_a, Sig::One, n, n, "sgn.sub1");
    let mut out = unsigned[..n].to_vec();
    out.extend(hi);
    out
}
