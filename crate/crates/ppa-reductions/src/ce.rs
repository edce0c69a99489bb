//! Geometry of the coordinate-encoding region `[0, n]`: sensor and comb blocks, blanket
//! activity, and the point each encoder perceives.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::measure::{Label, LabelledCutSet};
use crate::params::ReductionParams;
use crate::rational::{self, Rational};

/// Shift of encoder `i` (1-based): `(i-1) δtiny / p^C`.
pub fn shift(i: u64, p: &ReductionParams) -> Rational {
    &p.delta_tiny * rational::q(i as i64 - 1, p.p_c as i64)
}

/// Width of one sensor or comb block.
pub fn block_width(p: &ReductionParams) -> Rational {
    &p.delta_tiny / rational::int(p.p_c as i64)
}

/// c-e block of sensor `s_{i,j}` (both 1-based).
pub fn sensor_block(i: u64, j: u64, p: &ReductionParams) -> (Rational, Rational) {
    let a = &p.delta_tiny * rational::int(j as i64 - 1) + shift(i, p);
    let b = &a + block_width(p);
    (a, b)
}

/// Comb blocks of blanket sensor `b_{i,j}` over `[j-2, j]`.
pub fn comb_blocks(i: u64, j: usize, p: &ReductionParams) -> Vec<(Rational, Rational)> {
    let count = 2 * p.per_unit();
    let base = rational::int(j as i64 - 2) + shift(i, p);
    let w = block_width(p);
    (0..count)
        .map(|k| {
            let a = &base + &p.delta_tiny * rational::int(k as i64);
            let b = &a + &w;
            (a, b)
        })
        .collect()
}

/// Mass of one comb block, `(1/10)(δtiny/2)`.
pub fn comb_block_mass(p: &ReductionParams) -> Rational {
    &p.delta_tiny / rational::int(20)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlanketState {
    Inactive,
    Active(Label),
}

fn has_cut_inside(cuts: &LabelledCutSet, a: &Rational, b: &Rational) -> bool {
    let k = cuts.cuts.partition_point(|c| c <= a);
    k < cuts.cuts.len() && &cuts.cuts[k] < b
}

/// Comb blocks wholly labelled A+ minus those wholly labelled A-.
pub fn comb_imbalance(cuts: &LabelledCutSet, j: usize, i: u64, p: &ReductionParams) -> i64 {
    comb_blocks(i, j, p)
        .iter()
        .filter(|(a, b)| !has_cut_inside(cuts, a, b))
        .map(|(a, b)| match cuts.label_at(&((a + b) / rational::int(2))) {
            Label::Plus => 1,
            Label::Minus => -1,
        })
        .sum()
}

/// Active toward the label that outnumbers the other by at least `p^large` blocks.
pub fn blanket_active(cuts: &LabelledCutSet, j: usize, i: u64, p: &ReductionParams) -> BlanketState {
    let d = comb_imbalance(cuts, j, i, p);
    if d >= p.p_large as i64 {
        BlanketState::Active(Label::Plus)
    } else if -d >= p.p_large as i64 {
        BlanketState::Active(Label::Minus)
    } else {
        BlanketState::Inactive
    }
}

/// `c_k = n (x_1 + ... + x_k)` for `k = 1..n`.
pub fn cuts_from_simplex(x: &[Rational]) -> LabelledCutSet {
    let n = x.len() - 1;
    let scale = rational::int(n as i64);
    let mut acc = Rational::zero();
    let mut cuts = Vec::with_capacity(n);
    for xi in &x[..n] {
        acc += xi;
        cuts.push(&acc * &scale);
    }
    LabelledCutSet::new(cuts)
}

/// What encoder `i` reads from the c-e region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perception {
    /// A- indicator per sensor, `P = p^huge` entries.
    pub bits: Vec<bool>,
    /// Some c-e cut lies strictly inside one of this encoder's sensor blocks.
    pub unreliable: bool,
}

pub fn perceive(cuts: &LabelledCutSet, i: u64, p: &ReductionParams) -> Perception {
    let mut bits = Vec::with_capacity(p.p_huge() as usize);
    let mut unreliable = false;
    for j in 1..=p.p_huge() {
        let (a, b) = sensor_block(i, j, p);
        unreliable |= has_cut_inside(cuts, &a, &b);
        bits.push(cuts.label_at(&((&a + &b) / rational::int(2))) == Label::Minus);
    }
    Perception { bits, unreliable }
}

/// Integer cut positions (in sensor units) from label-change indices; the first `n`
/// changes count, missing cuts sit at `P`.
pub fn perceived_cut_positions(bits: &[bool], n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut prev = false;
    for (j, &b) in bits.iter().enumerate() {
        if b != prev && out.len() < n {
            out.push(j as u64);
        }
        prev = b;
    }
    while out.len() < n {
        out.push(bits.len() as u64);
    }
    out
}

/// Simplex point with `x_k = g_k / P` from the perceived gaps.
pub fn perceived_point(bits: &[bool], n: usize) -> Vec<Rational> {
    let big_p = bits.len() as i64;
    let c = perceived_cut_positions(bits, n);
    let mut x = Vec::with_capacity(n + 1);
    let mut prev = 0i64;
    for &ck in &c {
        x.push(rational::q(ck as i64 - prev, big_p));
        prev = ck as i64;
    }
    x.push(rational::q(big_p - prev, big_p));
    x
}
