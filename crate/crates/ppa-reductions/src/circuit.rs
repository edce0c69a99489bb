//! Boolean circuits over {INPUT, NOT, AND, OR, CONST}.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateOp {
    Input,
    Not,
    And,
    Or,
    Const,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub op: GateOp,
    #[serde(default)]
    pub inputs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<bool>,
}

/// Gates in topological order; `INPUT` gates are numbered by appearance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BooleanCircuit {
    pub gates: Vec<Gate>,
    pub outputs: Vec<usize>,
}

impl BooleanCircuit {
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            let arity = match g.op {
                GateOp::Input | GateOp::Const => 0,
                GateOp::Not => 1,
                GateOp::And | GateOp::Or => 2,
            };
            if g.inputs.len() != arity {
                return Err(Error::Malformed(format!("gate {i}: {:?} takes {arity} inputs", g.op)));
            }
            if g.op == GateOp::Const && g.value.is_none() {
                return Err(Error::Malformed(format!("gate {i}: CONST without value")));
            }
            if let Some(&w) = g.inputs.iter().find(|&&w| w >= i) {
                return Err(Error::Malformed(format!("gate {i} references later gate {w}")));
            }
        }
        if let Some(&o) = self.outputs.iter().find(|&&o| o >= self.gates.len()) {
            return Err(Error::Malformed(format!("output {o} out of range")));
        }
        Ok(())
    }

    pub fn num_inputs(&self) -> usize {
        self.gates.iter().filter(|g| g.op == GateOp::Input).count()
    }

    /// Value of every gate.
    pub fn eval_all(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        let mut vals: Vec<bool> = Vec::with_capacity(self.gates.len());
        let mut next_input = 0;
        for g in &self.gates {
            let v = match g.op {
                GateOp::Input => {
                    let v = *inputs
                        .get(next_input)
                        .ok_or_else(|| Error::Malformed(format!("missing input {next_input}")))?;
                    next_input += 1;
                    v
                }
                GateOp::Const => g.value.unwrap_or(false),
                GateOp::Not => !vals[g.inputs[0]],
                GateOp::And => vals[g.inputs[0]] && vals[g.inputs[1]],
                GateOp::Or => vals[g.inputs[0]] || vals[g.inputs[1]],
            };
            vals.push(v);
        }
        if next_input != inputs.len() {
            return Err(Error::Malformed(format!("expected {next_input} inputs, got {}", inputs.len())));
        }
        Ok(vals)
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<Vec<bool>> {
        let vals = self.eval_all(inputs)?;
        Ok(self.outputs.iter().map(|&o| vals[o]).collect())
    }
}

/// Wire handle into a [`CircuitBuilder`].
pub type Wire = usize;

/// Builds circuits with constant folding, double-negation removal and structural hashing.
#[derive(Debug, Default, Clone)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    memo: HashMap<(GateOp, Vec<usize>, Option<bool>), Wire>,
    consts: [Option<Wire>; 2],
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn raw(&mut self, op: GateOp, inputs: Vec<usize>, value: Option<bool>) -> Wire {
        if op != GateOp::Input {
            if let Some(&w) = self.memo.get(&(op, inputs.clone(), value)) {
                return w;
            }
            self.memo.insert((op, inputs.clone(), value), self.gates.len());
        }
        self.gates.push(Gate { op, inputs, value });
        self.gates.len() - 1
    }

    pub fn input(&mut self) -> Wire {
        self.raw(GateOp::Input, vec![], None)
    }

    pub fn constant(&mut self, b: bool) -> Wire {
        if let Some(w) = self.consts[b as usize] {
            return w;
        }
        let w = self.raw(GateOp::Const, vec![], Some(b));
        self.consts[b as usize] = Some(w);
        w
    }

    pub fn const_value(&self, w: Wire) -> Option<bool> {
        let g = &self.gates[w];
        (g.op == GateOp::Const).then(|| g.value.unwrap_or(false))
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        if let Some(v) = self.const_value(a) {
            return self.constant(!v);
        }
        if self.gates[a].op == GateOp::Not {
            return self.gates[a].inputs[0];
        }
        self.raw(GateOp::Not, vec![a], None)
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        match (self.const_value(a), self.const_value(b)) {
            (Some(false), _) | (_, Some(false)) => return self.constant(false),
            (Some(true), _) => return b,
            (_, Some(true)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        self.raw(GateOp::And, vec![a.min(b), a.max(b)], None)
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        match (self.const_value(a), self.const_value(b)) {
            (Some(true), _) | (_, Some(true)) => return self.constant(true),
            (Some(false), _) => return b,
            (_, Some(false)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        self.raw(GateOp::Or, vec![a.min(b), a.max(b)], None)
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        let na = self.not(a);
        let nb = self.not(b);
        let l = self.and(a, nb);
        let r = self.and(na, b);
        self.or(l, r)
    }

    /// `s ? a : b`
    pub fn mux(&mut self, s: Wire, a: Wire, b: Wire) -> Wire {
        let ns = self.not(s);
        let l = self.and(s, a);
        let r = self.and(ns, b);
        self.or(l, r)
    }

    pub fn and_all(&mut self, ws: &[Wire]) -> Wire {
        let mut acc = self.constant(true);
        for &w in ws {
            acc = self.and(acc, w);
        }
        acc
    }

    pub fn or_all(&mut self, ws: &[Wire]) -> Wire {
        let mut acc = self.constant(false);
        for &w in ws {
            acc = self.or(acc, w);
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Copies `c` into this builder with its inputs bound to `inputs`; returns its output wires.
    pub fn inline(&mut self, c: &BooleanCircuit, inputs: &[Wire]) -> Result<Vec<Wire>> {
        let mut map = Vec::with_capacity(c.gates.len());
        let mut next_input = 0;
        for g in &c.gates {
            let w = match g.op {
                GateOp::Input => {
                    let w = *inputs
                        .get(next_input)
                        .ok_or_else(|| Error::Malformed("too few wires for inlined circuit".into()))?;
                    next_input += 1;
                    w
                }
                GateOp::Const => self.constant(g.value.unwrap_or(false)),
                GateOp::Not => self.not(map[g.inputs[0]]),
                GateOp::And => self.and(map[g.inputs[0]], map[g.inputs[1]]),
                GateOp::Or => self.or(map[g.inputs[0]], map[g.inputs[1]]),
            };
            map.push(w);
        }
        Ok(c.outputs.iter().map(|&o| map[o]).collect())
    }

    pub fn finish(self, outputs: Vec<Wire>) -> BooleanCircuit {
        BooleanCircuit { gates: self.gates, outputs }
    }
}
