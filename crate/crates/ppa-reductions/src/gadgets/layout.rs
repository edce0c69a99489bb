//! Compiling an encoder circuit into unit slots.
//!
//! Each logical wire is realised as a probe plus an inversion flag; NOT costs nothing.
//! A slot whose cut carries A+ on its left computes NOR with the small-left shape and
//! NAND with the large-left one; A- on the left swaps the two.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{BooleanCircuit, GateOp};
use crate::error::{Error, Result};
use crate::gadgets::EncoderCircuit;
use crate::measure::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateShape {
    /// One input of 1/4, outputs 3/8 and 3/8.
    Even,
    /// Two inputs of 1/8, outputs 5/16 and 7/16.
    SmallLeft,
    /// Two inputs of 1/8, outputs 7/16 and 5/16.
    LargeLeft,
}

/// Where a slot is read. `second` picks the right probe of a blanket detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Probe {
    pub slot: usize,
    #[serde(default)]
    pub second: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Slot {
    Sensor { j: u64 },
    Blanket { j: usize },
    Gate { shape: GateShape, inputs: Vec<Probe> },
    Constant { right: bool },
    Parity,
}

/// Slot plan shared by every encoder region `R_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderLayout {
    pub n: usize,
    pub p_c: u64,
    pub slots: Vec<Slot>,
    /// Driver slot of each output, in the order `+1..+n, -1..-n`.
    pub drivers: Vec<usize>,
}

impl EncoderLayout {
    pub fn slots_per_encoder(&self) -> usize {
        self.slots.len()
    }

    /// Label left of slot `k`'s cut when every earlier cut is where it belongs.
    pub fn slot_label(&self, k: usize) -> Label {
        Label::of_piece(self.n + k)
    }

    /// Start of slot `k` in region `R_i` (`i` 1-based).
    pub fn slot_start(&self, i: u64, k: usize) -> u64 {
        self.n as u64 + (i - 1) * self.slots.len() as u64 + k as u64
    }

    pub fn region(&self, i: u64) -> (u64, u64) {
        let a = self.slot_start(i, 0);
        (a, a + self.slots.len() as u64)
    }

    pub fn domain_length(&self) -> u64 {
        self.n as u64 + self.p_c * self.slots.len() as u64
    }

    pub fn num_agents(&self) -> u64 {
        self.n as u64 + self.p_c * self.slots.len() as u64
    }

    /// Probe bits of every slot of one encoder, given the sensor A- indicators and the
    /// blanket probe pairs. Each gate reads its inputs as its gadget would balance.
    pub fn probe_bits(&self, sensor_minus: &[bool], blankets: &[(bool, bool)]) -> Result<Vec<(bool, bool)>> {
        let mut bits: Vec<(bool, bool)> = Vec::with_capacity(self.slots.len());
        let read = |bits: &Vec<(bool, bool)>, p: &Probe| -> Result<bool> {
            let b = bits.get(p.slot).ok_or_else(|| Error::Malformed(format!("slot reads later slot {}", p.slot)))?;
            Ok(if p.second { b.1 } else { b.0 })
        };
        for (k, s) in self.slots.iter().enumerate() {
            let lam_minus = self.slot_label(k) == Label::Minus;
            let v = match s {
                Slot::Sensor { j } => {
                    let b = !*sensor_minus
                        .get(*j as usize - 1)
                        .ok_or_else(|| Error::Malformed(format!("no sensor bit {j}")))?;
                    (b, b)
                }
                Slot::Blanket { j } => {
                    *blankets.get(j - 2).ok_or_else(|| Error::Malformed(format!("no blanket reading {j}")))?
                }
                Slot::Gate { shape, inputs } => {
                    let ins: Vec<bool> = inputs.iter().map(|p| read(&bits, p)).collect::<Result<_>>()?;
                    let b = match shape {
                        GateShape::Even => !ins[0],
                        GateShape::SmallLeft | GateShape::LargeLeft => {
                            let nand = (*shape == GateShape::SmallLeft) == lam_minus;
                            if nand {
                                !(ins[0] && ins[1])
                            } else {
                                !(ins[0] || ins[1])
                            }
                        }
                    };
                    (b, b)
                }
                Slot::Constant { right } => {
                    let b = if *right { lam_minus } else { !lam_minus };
                    (b, b)
                }
                Slot::Parity => (false, false),
            };
            bits.push(v);
        }
        Ok(bits)
    }

    /// Output values read off the driver probes.
    pub fn outputs(&self, bits: &[(bool, bool)]) -> Vec<bool> {
        self.drivers.iter().map(|&d| bits[d].0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Phys {
    Const(bool),
    /// Logical value is the probe bit XOR `inv`.
    Wire(Probe, bool),
}

struct Compiler {
    n: usize,
    slots: Vec<Slot>,
    nots: HashMap<Probe, Probe>,
    /// `(is_nand, a, b)` to the slot computing it.
    gates: HashMap<(bool, Probe, Probe), Probe>,
}

impl Compiler {
    fn lam_minus(&self) -> bool {
        Label::of_piece(self.n + self.slots.len()) == Label::Minus
    }

    fn push(&mut self, s: Slot) -> Probe {
        self.slots.push(s);
        Probe { slot: self.slots.len() - 1, second: false }
    }

    fn not_gadget(&mut self, p: Probe) -> Probe {
        if let Some(&q) = self.nots.get(&p) {
            return q;
        }
        let q = self.push(Slot::Gate { shape: GateShape::Even, inputs: vec![p] });
        self.nots.insert(p, q);
        q
    }

    fn nand_nor(&mut self, nand: bool, a: Probe, b: Probe) -> Probe {
        let shape = if nand == self.lam_minus() { GateShape::SmallLeft } else { GateShape::LargeLeft };
        let (a, b) = if (a.slot, a.second) <= (b.slot, b.second) { (a, b) } else { (b, a) };
        if let Some(&q) = self.gates.get(&(nand, a, b)) {
            return q;
        }
        let q = self.push(Slot::Gate { shape, inputs: vec![a, b] });
        self.gates.insert((nand, a, b), q);
        q
    }

    fn binary(&mut self, and: bool, x: Phys, y: Phys) -> Phys {
        let (x, y) = match (x, y) {
            (Phys::Const(c), o) | (o, Phys::Const(c)) => {
                return match (and, c) {
                    (true, false) => Phys::Const(false),
                    (false, true) => Phys::Const(true),
                    _ => o,
                }
            }
            (Phys::Wire(p, i), Phys::Wire(q, j)) => ((p, i), (q, j)),
        };
        if x.0 == y.0 {
            return if x.1 == y.1 { Phys::Wire(x.0, x.1) } else { Phys::Const(!and) };
        }
        let (p, f) = x;
        let (mut q, g) = y;
        if f != g {
            q = self.not_gadget(q);
        }
        // AND with f = 0 is NOT NAND; with f = 1 it is NOR. OR swaps the two.
        let nand = and != f;
        let out = self.nand_nor(nand, p, q);
        Phys::Wire(out, !f)
    }

    /// Driver slot whose probe carries `w` directly.
    fn driver(&mut self, w: Phys) -> usize {
        match w {
            Phys::Const(v) => {
                let right = v == self.lam_minus();
                self.push(Slot::Constant { right }).slot
            }
            Phys::Wire(p, inv) => {
                let first = self.push(Slot::Gate { shape: GateShape::Even, inputs: vec![p] });
                if inv {
                    first.slot
                } else {
                    self.push(Slot::Gate { shape: GateShape::Even, inputs: vec![first] }).slot
                }
            }
        }
    }
}

/// Places sensors, blanket detectors, the gates of `enc` that reach an output, one driver
/// per output, and a parity slot when needed to make the slot count even.
pub fn compile(enc: &EncoderCircuit, p_c: u64) -> Result<EncoderLayout> {
    let c: &BooleanCircuit = &enc.circuit;
    c.validate()?;
    let n = enc.n;
    if c.num_inputs() != enc.num_inputs() {
        return Err(Error::Malformed("encoder circuit input count mismatch".into()));
    }
    let mut comp = Compiler { n, slots: Vec::new(), nots: HashMap::new(), gates: HashMap::new() };
    let mut input_wires: Vec<Phys> = Vec::with_capacity(enc.num_inputs());
    for j in 1..=enc.num_sensors as u64 {
        let p = comp.push(Slot::Sensor { j });
        input_wires.push(Phys::Wire(p, true));
    }
    for j in 2..=n {
        let p = comp.push(Slot::Blanket { j });
        input_wires.push(Phys::Wire(p, false));
        input_wires.push(Phys::Wire(Probe { second: true, ..p }, false));
    }

    let mut live = vec![false; c.gates.len()];
    for &o in &c.outputs {
        live[o] = true;
    }
    for k in (0..c.gates.len()).rev() {
        if live[k] {
            for &w in &c.gates[k].inputs {
                live[w] = true;
            }
        }
    }

    let mut phys: Vec<Phys> = Vec::with_capacity(c.gates.len());
    let mut next_input = 0;
    for (k, g) in c.gates.iter().enumerate() {
        let v = match g.op {
            GateOp::Input => {
                next_input += 1;
                input_wires[next_input - 1]
            }
            _ if !live[k] => Phys::Const(false),
            GateOp::Const => Phys::Const(g.value.unwrap_or(false)),
            GateOp::Not => match phys[g.inputs[0]] {
                Phys::Const(b) => Phys::Const(!b),
                Phys::Wire(p, i) => Phys::Wire(p, !i),
            },
            GateOp::And => comp.binary(true, phys[g.inputs[0]], phys[g.inputs[1]]),
            GateOp::Or => comp.binary(false, phys[g.inputs[0]], phys[g.inputs[1]]),
        };
        phys.push(v);
    }
    let drivers: Vec<usize> = c.outputs.iter().map(|&o| comp.driver(phys[o])).collect();
    if comp.slots.len() % 2 == 1 {
        comp.push(Slot::Parity);
    }
    Ok(EncoderLayout { n, p_c, slots: comp.slots, drivers })
}
