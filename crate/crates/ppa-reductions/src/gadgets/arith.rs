//! Two's-complement integer words built from boolean gates.
//!
//! Every word carries an interval bound on its value; widths are the smallest that hold
//! the bound, and arithmetic is done modulo `2^width`, which is exact inside the bound.

use crate::circuit::{CircuitBuilder, Wire};

#[derive(Debug, Clone)]
pub struct Word {
    /// Least significant first; the last wire is the sign.
    pub bits: Vec<Wire>,
    pub min: i128,
    pub max: i128,
}

fn width_for(min: i128, max: i128) -> usize {
    let mut w = 1;
    while !(min >= -(1i128 << (w - 1)) && max < (1i128 << (w - 1))) {
        w += 1;
    }
    w
}

impl Word {
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn sign(&self) -> Wire {
        *self.bits.last().expect("words are nonempty")
    }

    /// Value of the word under a gate assignment.
    pub fn value(&self, vals: &[bool]) -> i128 {
        let w = self.width();
        let mut v: i128 = 0;
        for (k, &b) in self.bits.iter().enumerate() {
            if vals[b] {
                v |= 1 << k;
            }
        }
        if vals[self.sign()] {
            v -= 1 << w;
        }
        v
    }
}

pub fn constant(b: &mut CircuitBuilder, v: i128) -> Word {
    let w = width_for(v, v);
    let bits = (0..w).map(|k| b.constant((v >> k) & 1 == 1)).collect();
    Word { bits, min: v, max: v }
}

/// Nonnegative word from raw bits (no sign wire supplied) with a known upper bound.
pub fn unsigned(b: &mut CircuitBuilder, raw: &[Wire], max: i128) -> Word {
    let w = width_for(0, max);
    let mut bits: Vec<Wire> = raw.iter().copied().take(w).collect();
    while bits.len() < w {
        bits.push(b.constant(false));
    }
    Word { bits, min: 0, max }
}

fn extend(x: &Word, w: usize) -> Vec<Wire> {
    let mut bits = x.bits.clone();
    let s = x.sign();
    while bits.len() < w {
        bits.push(s);
    }
    bits.truncate(w);
    bits
}

fn full_add(b: &mut CircuitBuilder, x: Wire, y: Wire, c: Wire) -> (Wire, Wire) {
    let xy = b.xor(x, y);
    let s = b.xor(xy, c);
    let g = b.and(x, y);
    let p = b.and(xy, c);
    (s, b.or(g, p))
}

fn ripple(b: &mut CircuitBuilder, xs: &[Wire], ys: &[Wire], carry_in: bool) -> Vec<Wire> {
    let mut c = b.constant(carry_in);
    let mut out = Vec::with_capacity(xs.len());
    for (&x, &y) in xs.iter().zip(ys) {
        let (s, c2) = full_add(b, x, y, c);
        out.push(s);
        c = c2;
    }
    out
}

pub fn add(b: &mut CircuitBuilder, x: &Word, y: &Word) -> Word {
    let (min, max) = (x.min + y.min, x.max + y.max);
    let w = width_for(min, max);
    let bits = ripple(b, &extend(x, w), &extend(y, w), false);
    Word { bits, min, max }
}

pub fn sub(b: &mut CircuitBuilder, x: &Word, y: &Word) -> Word {
    let (min, max) = (x.min - y.max, x.max - y.min);
    let w = width_for(min, max).max(x.width()).max(y.width());
    let ny: Vec<Wire> = extend(y, w).into_iter().map(|v| b.not(v)).collect();
    let mut bits = ripple(b, &extend(x, w), &ny, true);
    bits.truncate(width_for(min, max).max(1));
    Word { bits, min, max }
}

fn shift(b: &mut CircuitBuilder, x: &Word, k: usize) -> Word {
    let mut bits: Vec<Wire> = (0..k).map(|_| b.constant(false)).collect();
    bits.extend(&x.bits);
    Word { bits, min: x.min << k, max: x.max << k }
}

/// `x · k` by signed-digit shift-and-add.
pub fn mul_const(b: &mut CircuitBuilder, x: &Word, k: i128) -> Word {
    if k == 0 {
        return constant(b, 0);
    }
    let neg = k < 0;
    let mut m = k.unsigned_abs();
    let mut digits = Vec::new();
    let mut pos = 0;
    while m != 0 {
        if m & 1 == 1 {
            let d: i8 = if m & 3 == 3 { -1 } else { 1 };
            digits.push((pos, d));
            if d == 1 {
                m -= 1;
            } else {
                m += 1;
            }
        }
        m >>= 1;
        pos += 1;
    }
    let mut acc: Option<Word> = None;
    for (p, d) in digits {
        let term = shift(b, x, p);
        acc = Some(match (acc, d) {
            (None, 1) => term,
            (None, _) => {
                let z = constant(b, 0);
                sub(b, &z, &term)
            }
            (Some(a), 1) => add(b, &a, &term),
            (Some(a), _) => sub(b, &a, &term),
        });
    }
    let r = acc.expect("k is nonzero");
    if neg {
        let z = constant(b, 0);
        sub(b, &z, &r)
    } else {
        r
    }
}

/// `x · y` for a nonnegative `x`.
pub fn mul(b: &mut CircuitBuilder, x: &Word, y: &Word) -> Word {
    assert!(x.min >= 0, "left factor must be nonnegative");
    let corners = [x.min * y.min, x.min * y.max, x.max * y.min, x.max * y.max];
    let (min, max) = (*corners.iter().min().unwrap(), *corners.iter().max().unwrap());
    let mut acc = constant(b, 0);
    for k in 0..x.width() - 1 {
        let bit = x.bits[k];
        let bits: Vec<Wire> = y.bits.iter().map(|&v| b.and(bit, v)).collect();
        let part = Word { bits, min: y.min.min(0), max: y.max.max(0) };
        let part = shift(b, &part, k);
        acc = add(b, &acc, &part);
    }
    let w = width_for(min, max);
    let bits = extend(&acc, w);
    Word { bits, min, max }
}

pub fn is_negative(x: &Word) -> Wire {
    x.sign()
}

pub fn is_nonzero(b: &mut CircuitBuilder, x: &Word) -> Wire {
    b.or_all(&x.bits)
}

pub fn is_positive(b: &mut CircuitBuilder, x: &Word) -> Wire {
    let nz = is_nonzero(b, x);
    let ns = b.not(x.sign());
    b.and(nz, ns)
}

pub fn mux(b: &mut CircuitBuilder, s: Wire, x: &Word, y: &Word) -> Word {
    let (min, max) = (x.min.min(y.min), x.max.max(y.max));
    let w = width_for(min, max);
    let (xs, ys) = (extend(x, w), extend(y, w));
    let bits = xs.iter().zip(&ys).map(|(&p, &q)| b.mux(s, p, q)).collect();
    Word { bits, min, max }
}

/// Index of the first set wire of a monotone thermometer `z` (`z[j] = 1` implies
/// `z[j+1] = 1`), or `z.len()` when none is set.
pub fn thermometer_index(b: &mut CircuitBuilder, z: &[Wire]) -> Word {
    let p = z.len();
    let w = width_for(0, p as i128);
    // c >= a  <=>  !z[a-1];   c < e  <=>  z[e-1]
    let mut bits = Vec::with_capacity(w);
    for d in 0..w - 1 {
        let step = 1usize << d;
        let mut terms = Vec::new();
        let mut a = step;
        while a <= p {
            let e = a + step;
            let ge = b.not(z[a - 1]);
            let t = if e - 1 < p { b.and(ge, z[e - 1]) } else { ge };
            terms.push(t);
            a += 2 * step;
        }
        bits.push(b.or_all(&terms));
    }
    bits.push(b.constant(false));
    Word { bits, min: 0, max: p as i128 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(b: CircuitBuilder, words: &[Word], inputs: &[bool]) -> Vec<i128> {
        let c = b.finish(vec![]);
        let vals = c.eval_all(inputs).unwrap();
        words.iter().map(|w| w.value(&vals)).collect()
    }

    #[test]
    fn small_arithmetic_exhaustive() {
        for x in 0..8i128 {
            for y in -4..4i128 {
                let mut b = CircuitBuilder::new();
                let xi: Vec<_> = (0..3).map(|_| b.input()).collect();
                let yi: Vec<_> = (0..3).map(|_| b.input()).collect();
                let xw = unsigned(&mut b, &xi, 7);
                let yw = Word { bits: yi, min: -4, max: 3 };
                let s = add(&mut b, &xw, &yw);
                let d = sub(&mut b, &yw, &xw);
                let p = mul(&mut b, &xw, &yw);
                let k = mul_const(&mut b, &yw, -13);
                let inputs: Vec<bool> =
                    (0..3).map(|k| (x >> k) & 1 == 1).chain((0..3).map(|k| (y >> k) & 1 == 1)).collect();
                let got = eval(b, &[s, d, p, k], &inputs);
                assert_eq!(got, vec![x + y, y - x, x * y, -13 * y], "x = {x}, y = {y}");
            }
        }
    }

    #[test]
    fn thermometer_positions() {
        for p in [1usize, 5, 8, 13] {
            for c in 0..=p {
                let mut b = CircuitBuilder::new();
                let z: Vec<_> = (0..p).map(|_| b.input()).collect();
                let w = thermometer_index(&mut b, &z);
                let inputs: Vec<bool> = (0..p).map(|j| j >= c).collect();
                assert_eq!(eval(b, &[w], &inputs), vec![c as i128]);
            }
        }
    }
}
