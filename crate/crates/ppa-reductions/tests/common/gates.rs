//! Gate balancing helpers shared by the gadget and acceptance tests.

use num::{Signed, Zero};
use ppa_reductions::gadgets::{build_gate_gadget, cut_is_right, GateKind};
use ppa_reductions::measure::{Block, CHInstance, LabelledCutSet, StepMeasure};
use ppa_reductions::oracles::eval_ch;
use ppa_reductions::rational::{int, q, Rational};

pub fn unit(k: i64) -> (Rational, Rational) {
    (int(k), int(k + 1))
}

/// Mass-1 block that pins its agent's cut to the left or right of slot `k`.
pub fn pinned(k: i64, right: bool) -> Vec<Block> {
    let (a, b) = if right { (q(8 * k + 5, 8), q(8 * k + 7, 8)) } else { (q(8 * k + 1, 8), q(8 * k + 3, 8)) };
    vec![Block::with_mass(a, b, &int(1))]
}

/// Cut position inside `[a, b]` that zeroes `m`'s discrepancy given `others`, found by
/// scanning the piecewise linear discrepancy block by block.
pub fn solve_balance(m: &StepMeasure, others: &[Rational], a: &Rational, b: &Rational) -> Rational {
    let disc = |t: &Rational| {
        let mut c = others.to_vec();
        c.push(t.clone());
        LabelledCutSet::new(c).discrepancy(m)
    };
    let mut pts = vec![a.clone()];
    for blk in m.blocks() {
        for x in [&blk.start, &blk.end] {
            if x > a && x < b {
                pts.push(x.clone());
            }
        }
    }
    pts.push(b.clone());
    pts.sort();
    for w in pts.windows(2) {
        let (fa, fb) = (disc(&w[0]), disc(&w[1]));
        if fa.is_zero() {
            return w[0].clone();
        }
        if (fa.is_negative() && !fb.is_negative()) || (fa.is_positive() && !fb.is_positive()) {
            return &w[0] + (&w[1] - &w[0]) * (-&fa) / (fb - &fa);
        }
    }
    panic!("no balancing position in [{a}, {b}]");
}

/// Runs one gate: pinned sources, optional pads, then the gate; returns whether the
/// output cut sits right and checks that every agent balances.
pub fn run_gate(kind: GateKind, inputs: &[bool]) -> bool {
    // NOT: in(0) pad(1) out(2); OR/AND: in1(0) pad(1) in2(2) out(3)
    let (src, out_slot): (Vec<i64>, i64) = match kind {
        GateKind::Not => (vec![0], 2),
        _ => (vec![0, 2], 3),
    };
    let len = int(out_slot + 1);
    let mut agents = Vec::new();
    let mut cuts = Vec::new();
    for (k, &v) in src.iter().zip(inputs) {
        agents.push(StepMeasure::from_blocks(len.clone(), pinned(*k, v)).unwrap());
        cuts.push(if v { q(4 * k + 3, 4) } else { q(4 * k + 1, 4) });
    }
    agents.push(StepMeasure::from_blocks(len.clone(), pinned(1, false)).unwrap());
    cuts.push(q(5, 4));
    let ins: Vec<_> = src.iter().map(|&k| unit(k)).collect();
    let gadget = build_gate_gadget(kind, &ins, &unit(out_slot)).unwrap();
    let m = StepMeasure::from_blocks(len.clone(), gadget.iter().map(|g| g.block()).collect()).unwrap();
    let t = solve_balance(&m, &cuts, &int(out_slot), &int(out_slot + 1));
    agents.push(m);
    cuts.push(t.clone());
    let inst = CHInstance::new(len, agents, Rational::zero(), 0).unwrap();
    let rep = eval_ch(&inst, &LabelledCutSet::new(cuts)).unwrap();
    assert!(rep.max_abs.is_zero(), "{kind:?} {inputs:?}: {:?}", rep.per_agent);
    cut_is_right(&t, &int(out_slot))
}
