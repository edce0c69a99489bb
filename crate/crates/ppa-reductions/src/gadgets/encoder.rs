//! The logical circuit of one circuit-encoder: sensor bits and blanket readings in,
//! the `2n` feedback values `g'` out.
//!
//! Inputs, in order: `P` sensor bits (`true` = sensor block labelled A-), then for each
//! blanket sensor `j = 2..n` its two probe bits. Outputs follow the label order
//! `+1..+n, -1..-n`; a `true` output labels the driven feedback block A-.
//!
//! Preprocessing is exact integer arithmetic on the perceived cut positions. Points with
//! `τ < 1/2` are handled by reversing the coordinates, which turns the backward recursion
//! into the forward one with `τ ↦ 1-τ` and `α_k ↦ α_{n+2-k}`.

use num::ToPrimitive;

use crate::circuit::{BooleanCircuit, CircuitBuilder, Wire};
use crate::error::{Error, Result};
use crate::gadgets::arith::{self, Word};
use crate::instances::{ColourOracle, NVHDTInstance};
use crate::params::ReductionParams;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct EncoderCircuit {
    pub circuit: BooleanCircuit,
    pub num_sensors: usize,
    pub n: usize,
}

fn small(r: &Rational) -> Result<(i128, i128)> {
    match (r.numer().to_i128(), r.denom().to_i128()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::BoundExceeded("parameter too large for the encoder arithmetic".into())),
    }
}

/// `z^k_j`: at least `k` label changes among bits `0..=j`, for strings with at most `n`
/// changes starting from A+.
fn change_thermometers(b: &mut CircuitBuilder, bits: &[Wire], n: usize) -> Vec<Vec<Wire>> {
    let nbits: Vec<Wire> = bits.iter().map(|&w| b.not(w)).collect();
    let mut levels: Vec<Vec<Wire>> = Vec::with_capacity(n);
    for k in 1..=n {
        let lit = |j: usize| if k % 2 == 1 { bits[j] } else { nbits[j] };
        let mut z = Vec::with_capacity(bits.len());
        let mut prev = b.constant(false);
        for j in 0..bits.len() {
            let step = if k == 1 {
                lit(j)
            } else if j == 0 {
                b.constant(false)
            } else {
                let below = levels[k - 2][j - 1];
                b.and(below, lit(j))
            };
            prev = b.or(prev, step);
            z.push(prev);
        }
        levels.push(z);
    }
    levels
}

/// Six monotone predicates `t_1 >= ... >= t_6` to the 3-bit index `#{m : t_m}`.
fn index_bits(b: &mut CircuitBuilder, t: &[Wire]) -> [Wire; 3] {
    let nt: Vec<Wire> = t.iter().map(|&w| b.not(w)).collect();
    let p01 = b.and(t[0], nt[1]);
    let p23 = b.and(t[2], nt[3]);
    let p45 = b.and(t[4], nt[5]);
    let x = b.or(p01, p23);
    let bit0 = b.or(x, p45);
    let p13 = b.and(t[1], nt[3]);
    let bit1 = b.or(p13, t[5]);
    [bit0, bit1, t[3]]
}

/// `x - m·y` for `m = 0..=last`.
fn ladder(b: &mut CircuitBuilder, x: &Word, y: &Word, last: usize) -> Vec<Word> {
    let mut out = vec![x.clone()];
    for _ in 0..last {
        let next = arith::sub(b, out.last().unwrap(), y);
        out.push(next);
    }
    out
}

struct AlphaPreds {
    /// `α > δT(2m-7)/7` for `m = 1..6`.
    above: Vec<Wire>,
    below_neg: Wire,
    above_pos: Wire,
}

pub fn build_encoder_circuit(inst: &NVHDTInstance, params: &ReductionParams) -> Result<EncoderCircuit> {
    params.validate()?;
    let n = params.n;
    if inst.n != n {
        return Err(Error::Malformed(format!("instance has n = {}, parameters n = {n}", inst.n)));
    }
    let cvt = match &inst.oracle {
        ColourOracle::Circuit { circuit } => circuit.clone(),
        ColourOracle::Table { .. } => match inst.to_circuit_backed()?.oracle {
            ColourOracle::Circuit { circuit } => circuit,
            ColourOracle::Table { .. } => unreachable!("to_circuit_backed returns a circuit"),
        },
    };
    cvt.validate()?;
    let pp = params.p_huge() as usize;
    let p = pp as i128;
    let nn = n as i128;
    let (ta, tb) = small(&params.delta_t)?;

    let mut b = CircuitBuilder::new();
    let sensors: Vec<Wire> = (0..pp).map(|_| b.input()).collect();
    let blanket: Vec<(Wire, Wire)> = (2..=n).map(|_| (b.input(), b.input())).collect();

    // perceived cut positions
    let levels = change_thermometers(&mut b, &sensors, n);
    let cuts: Vec<Word> = levels.iter().map(|z| arith::thermometer_index(&mut b, z)).collect();
    let pw = arith::constant(&mut b, p);
    let u = cuts[0].clone();
    let w = arith::sub(&mut b, &pw, &cuts[n - 1]);
    let w = Word { min: 0, max: p, ..w };
    let s = arith::add(&mut b, &u, &w);
    let s = Word { min: 0, max: p, ..s };
    let defined = arith::is_nonzero(&mut b, &s);
    let uw = arith::sub(&mut b, &u, &w);
    let case1 = b.not(arith::is_negative(&uw));

    // canonical (τ >= 1/2) coordinates
    let big_u = arith::mux(&mut b, case1, &u, &w);
    let big_w = arith::mux(&mut b, case1, &w, &u);
    let mut sums: Vec<Option<Word>> = vec![None; n + 1];
    for k in 2..n {
        let rev = arith::sub(&mut b, &pw, &cuts[n - k]);
        let rev = Word { min: 0, max: p, ..rev };
        sums[k] = Some(arith::mux(&mut b, case1, &cuts[k - 1], &rev));
    }

    // τ thresholds: Z_m = 14b·U - (7b - 14a)·s - 4a·m·s
    let x1 = arith::mul_const(&mut b, &big_u, 14 * tb);
    let x2 = arith::mul_const(&mut b, &s, 7 * tb - 14 * ta);
    let xt = arith::sub(&mut b, &x1, &x2);
    let yt = arith::mul_const(&mut b, &s, 4 * ta);
    let zs = ladder(&mut b, &xt, &yt, 6);
    let tau_gt: Vec<Wire> = (1..=6).map(|m| arith::is_positive(&mut b, &zs[m])).collect();
    let tau_ge: Vec<Wire> = (1..=6).map(|m| b.not(arith::is_negative(&zs[m]))).collect();
    let tau_pred: Vec<Wire> = (1..=6)
        .map(|m| {
            let rev = b.not(tau_ge[6 - m]);
            b.mux(case1, tau_gt[m - 1], rev)
        })
        .collect();

    // α_k = E_k / D_k with D_k = nP·U^(k-2)
    let mut preds: Vec<Option<AlphaPreds>> = (0..=n).map(|_| None).collect();
    let n_s = arith::mul_const(&mut b, &s, nn);
    let mut e = arith::sub(&mut b, &pw, &n_s);
    let mut upow = arith::constant(&mut b, 1);
    for k in 2..=n {
        if k > 2 {
            // E_k = [(k-2)sP + UP - n S_{k-1} s]·U^(k-3) + W·E_{k-1}
            let sk = sums[k - 1].clone().expect("set for 2..n-1");
            let t1 = arith::mul_const(&mut b, &s, (k as i128 - 2) * p);
            let t2 = arith::mul_const(&mut b, &big_u, p);
            let sks = arith::mul(&mut b, &sk, &s);
            let t3 = arith::mul_const(&mut b, &sks, nn);
            let t12 = arith::add(&mut b, &t1, &t2);
            let lead = arith::sub(&mut b, &t12, &t3);
            let lead = if k > 3 { arith::mul(&mut b, &upow, &lead) } else { lead };
            let we = arith::mul(&mut b, &big_w, &e);
            e = arith::add(&mut b, &lead, &we);
            upow = if k > 3 { arith::mul(&mut b, &upow, &big_u) } else { big_u.clone() };
        }
        let d = arith::mul_const(&mut b, &upow, nn * p);
        // Q_m = 7b·E - a(2m-7)·D = (7b·E + 7a·D) - m·(2a·D)
        let e7 = arith::mul_const(&mut b, &e, 7 * tb);
        let d7 = arith::mul_const(&mut b, &d, 7 * ta);
        let xq = arith::add(&mut b, &e7, &d7);
        let yq = arith::mul_const(&mut b, &d, 2 * ta);
        let qs = ladder(&mut b, &xq, &yq, 7);
        let above = (1..=6).map(|m| arith::is_positive(&mut b, &qs[m])).collect();
        let below_neg = arith::is_negative(&qs[0]);
        let above_pos = arith::is_positive(&mut b, &qs[7]);
        preds[k] = Some(AlphaPreds { above, below_neg, above_pos });
    }

    // actual axis k reads canonical index k (case 1) or n+2-k (case 2)
    let mut cube_bits: Vec<Wire> = index_bits(&mut b, &tau_pred).to_vec();
    let mut pos = vec![b.constant(false); n + 1];
    let mut neg = vec![b.constant(false); n + 1];
    for k in 2..=n {
        let (c1, c2) = (preds[k].as_ref().unwrap(), preds[n + 2 - k].as_ref().unwrap());
        let above: Vec<Wire> = (0..6).map(|m| b.mux(case1, c1.above[m], c2.above[m])).collect();
        cube_bits.extend(index_bits(&mut b, &above));
        pos[k] = b.mux(case1, c1.below_neg, c2.below_neg);
        neg[k] = b.mux(case1, c1.above_pos, c2.above_pos);
    }
    let outer_any = {
        let all: Vec<Wire> = (2..=n).flat_map(|k| [pos[k], neg[k]]).collect();
        b.or_all(&all)
    };
    let g = b.inline(&cvt, &cube_bits)?;
    if g.len() != 2 * n {
        return Err(Error::Malformed(format!("colour circuit has {} outputs, expected {}", g.len(), 2 * n)));
    }

    // colour pair (g_j, g_-j), then the reference XOR
    let x_ref = b.not(sensors[0]);
    let nx = b.not(x_ref);
    let mut out_pos = Vec::with_capacity(n);
    let mut out_neg = Vec::with_capacity(n);
    let act: Vec<Wire> = blanket
        .iter()
        .map(|&(l, r)| {
            let x = b.xor(l, r);
            b.not(x)
        })
        .collect();
    let any_act = b.or_all(&act);
    let t = b.constant(true);
    let f = b.constant(false);
    for j in 1..=n {
        let (cp, cn) = if j == 1 {
            // axis 1 has no outer colours
            let no = b.not(outer_any);
            (b.and(no, g[0]), b.and(no, g[n]))
        } else {
            let gp = b.mux(outer_any, pos[j], g[j - 1]);
            let gn = b.mux(outer_any, neg[j], g[n + j - 1]);
            (gp, gn)
        };
        let cp = b.and(defined, cp);
        let cn = b.and(defined, cn);
        let (gp, gn) = output_gate_circuit(&mut b, cp, cn, x_ref, nx);
        // blanket override
        let (gp, gn) = if j >= 2 {
            let (_, r) = blanket[j - 2];
            let v = if j % 2 == 1 { b.not(r) } else { r };
            let idle_p = b.mux(any_act, t, gp);
            let idle_n = b.mux(any_act, f, gn);
            (b.mux(act[j - 2], v, idle_p), b.mux(act[j - 2], v, idle_n))
        } else {
            (b.mux(any_act, t, gp), b.mux(any_act, f, gn))
        };
        out_pos.push(gp);
        out_neg.push(gn);
    }
    out_pos.extend(out_neg);
    Ok(EncoderCircuit { circuit: b.finish(out_pos), num_sensors: pp, n })
}

/// Gate-level form of [`crate::gadgets::output_gate_transform`].
fn output_gate_circuit(b: &mut CircuitBuilder, gp: Wire, gn: Wire, x: Wire, nx: Wire) -> (Wire, Wire) {
    let np = b.not(gp);
    let nn = b.not(gn);
    let none = b.and(np, nn);
    let a = b.and(gp, nx);
    let c = b.and(gn, x);
    let forced = b.or(a, c);
    (b.or(none, forced), forced)
}

impl EncoderCircuit {
    pub fn num_inputs(&self) -> usize {
        self.num_sensors + 2 * (self.n - 1)
    }

    /// Input vector from sensor bits and blanket probe bits.
    pub fn inputs(&self, sensor_bits: &[bool], blanket_probes: &[(bool, bool)]) -> Result<Vec<bool>> {
        if sensor_bits.len() != self.num_sensors || blanket_probes.len() != self.n - 1 {
            return Err(Error::Malformed("wrong number of encoder inputs".into()));
        }
        let mut v = sensor_bits.to_vec();
        for &(l, r) in blanket_probes {
            v.push(l);
            v.push(r);
        }
        Ok(v)
    }
}
