//! Consensus-halving gadgets and the reduction from the cubelet Tucker variant.
//!
//! Every non-c-e agent owns one unit slot. Relative to the slot start its blocks sit at:
//! two output blocks on `[1/8, 3/8]` and `[5/8, 7/8]`, a probe window `[3/8, 5/8]` where
//! other agents read it, and input blocks inside the probe windows of the slots it reads.
//! A probe reads TRUE when its label is A-.

pub mod arith;
pub mod encoder;
pub mod layout;
pub mod reduction;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Block, Label, StepMeasure};
use crate::rational::{self, q, Rational};

pub use encoder::{build_encoder_circuit, EncoderCircuit};
pub use layout::{compile, EncoderLayout, GateShape, Probe, Slot};
pub use reduction::{
    build_blanket_sensor, build_reduction, build_sensor_agent, extract_solution, read_encoders, simulate,
    EncoderReading, Extraction, FeedbackSpec, Reduction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BlockKind {
    ThinDense,
    Central,
    Feedback,
    Sensor,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetBlock {
    #[serde(with = "rational::rat")]
    pub start: Rational,
    #[serde(with = "rational::rat")]
    pub end: Rational,
    #[serde(with = "rational::rat")]
    pub mass: Rational,
    pub kind: BlockKind,
}

impl GadgetBlock {
    pub fn new(start: Rational, end: Rational, mass: Rational, kind: BlockKind) -> Self {
        GadgetBlock { start, end, mass, kind }
    }

    pub fn block(&self) -> Block {
        Block::with_mass(self.start.clone(), self.end.clone(), &self.mass)
    }
}

/// Measure on `[0, domain_length]` from gadget blocks.
pub fn to_measure(domain_length: Rational, blocks: &[GadgetBlock]) -> Result<StepMeasure> {
    StepMeasure::from_blocks(domain_length, blocks.iter().map(GadgetBlock::block).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Not,
    Or,
    And,
}

/// Probe window of the slot starting at `o`.
pub fn probe_window(o: &Rational) -> (Rational, Rational) {
    (o + q(3, 8), o + q(5, 8))
}

/// Output blocks of the slot starting at `o`.
pub fn output_blocks(o: &Rational, left: Rational, right: Rational, kind: BlockKind) -> Vec<GadgetBlock> {
    vec![
        GadgetBlock::new(o + q(1, 8), o + q(3, 8), left, kind),
        GadgetBlock::new(o + q(5, 8), o + q(7, 8), right, kind),
    ]
}

/// Blocks of a gate of the given shape with inputs read at `probes` and output slot `o`.
pub fn gate_blocks(shape: GateShape, probes: &[(Rational, Rational)], o: &Rational) -> Result<Vec<GadgetBlock>> {
    let (arity, input, left, right) = match shape {
        GateShape::Even => (1, q(1, 4), q(3, 8), q(3, 8)),
        GateShape::SmallLeft => (2, q(1, 8), q(5, 16), q(7, 16)),
        GateShape::LargeLeft => (2, q(1, 8), q(7, 16), q(5, 16)),
    };
    if probes.len() != arity {
        return Err(Error::Malformed(format!("{shape:?} gate takes {arity} inputs, got {}", probes.len())));
    }
    let mut out: Vec<GadgetBlock> =
        probes.iter().map(|(a, b)| GadgetBlock::new(a.clone(), b.clone(), input.clone(), BlockKind::Central)).collect();
    out.extend(output_blocks(o, left, right, BlockKind::ThinDense));
    Ok(out)
}

fn check_unit_disjoint(intervals: &[(Rational, Rational)]) -> Result<()> {
    let one = rational::one();
    for (a, b) in intervals {
        if b - a != one {
            return Err(Error::Invalid(format!("interval [{a}, {b}] is not unit length")));
        }
    }
    for (k, (a, b)) in intervals.iter().enumerate() {
        for (c, d) in &intervals[k + 1..] {
            if a < d && c < b {
                return Err(Error::Invalid(format!("intervals [{a}, {b}] and [{c}, {d}] overlap")));
            }
        }
    }
    Ok(())
}

/// Gate gadget in the orientation where NOT inputs and outputs and OR/AND inputs carry A+
/// left of their cut, OR/AND outputs A-. A slot holds TRUE when its cut sits right of centre.
pub fn build_gate_gadget(
    kind: GateKind,
    in_intervals: &[(Rational, Rational)],
    out_interval: &(Rational, Rational),
) -> Result<Vec<GadgetBlock>> {
    let mut all = in_intervals.to_vec();
    all.push(out_interval.clone());
    check_unit_disjoint(&all)?;
    let shape = match kind {
        GateKind::Not => GateShape::Even,
        GateKind::Or => GateShape::SmallLeft,
        GateKind::And => GateShape::LargeLeft,
    };
    let probes: Vec<_> = in_intervals.iter().map(|(a, _)| probe_window(a)).collect();
    gate_blocks(shape, &probes, &out_interval.0)
}

/// `true` when the slot starting at `o` has its cut right of centre.
pub fn cut_is_right(cut: &Rational, o: &Rational) -> bool {
    cut > &(o + q(1, 2))
}

/// The reference XOR on a colour pair: no colour gives `(T, F)`, otherwise both outputs
/// equal the active side XOR `x_ref` negated appropriately.
pub fn output_gate_transform(g_pos: bool, g_neg: bool, x_ref: bool) -> Result<(bool, bool)> {
    match (g_pos, g_neg) {
        (true, true) => Err(Error::Invalid("both g_j and g_-j are TRUE".into())),
        (false, false) => Ok((true, false)),
        (true, false) => Ok((!x_ref, !x_ref)),
        (false, true) => Ok((x_ref, x_ref)),
    }
}

/// Physical feedback entry of a `g'` pair: `(#FALSE - #TRUE) / 2`.
pub fn feedback_entry(pair: (bool, bool)) -> i8 {
    let t = pair.0 as i8 + pair.1 as i8;
    (2 - t - t) / 2
}

pub(crate) fn sum_mass(blocks: &[GadgetBlock]) -> Rational {
    blocks.iter().fold(Rational::zero(), |acc, b| acc + &b.mass)
}

pub(crate) fn label_sign(l: Label) -> Rational {
    match l {
        Label::Plus => rational::one(),
        Label::Minus => -rational::one(),
    }
}
