//! Möbius-simplex coordinates: direction vectors, the transformed coordinate system and
//! its inverse, both metrics, region classification and the colourings built on them.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ce::{self, BlanketState};
use crate::error::{Error, Result};
use crate::instances::NVHDTInstance;
use crate::measure::{Label, LabelledCutSet};
use crate::params::ReductionParams;
use crate::rational::{self, q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexPoint {
    #[serde(with = "rational::rat_vec")]
    pub coords: Vec<Rational>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Invalid("simplex point needs at least 2 coordinates".into()));
        }
        if coords.iter().any(Signed::is_negative) {
            return Err(Error::Invalid("negative simplex coordinate".into()));
        }
        if coords.iter().sum::<Rational>() != rational::one() {
            return Err(Error::Invalid("simplex coordinates must sum to 1".into()));
        }
        Ok(SimplexPoint { coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }
}

/// `(τ; α_2, ..., α_n)`; `alphas[0]` is `α_2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformedPoint {
    #[serde(with = "rational::rat")]
    pub tau: Rational,
    #[serde(with = "rational::rat_vec")]
    pub alphas: Vec<Rational>,
}

impl TransformedPoint {
    pub fn n(&self) -> usize {
        self.alphas.len() + 1
    }

    /// `α_k`, zero outside `2..=n`.
    pub fn alpha(&self, k: usize) -> Rational {
        if k >= 2 && k <= self.n() {
            self.alphas[k - 2].clone()
        } else {
            Rational::zero()
        }
    }
}

/// `d^τ_i`, with `d^τ_{-i} = -d^τ_i`.
pub fn direction_vector(n: usize, tau: &Rational, i: i32) -> Result<Vec<Rational>> {
    let a = i.unsigned_abs() as usize;
    if a < 2 || a > n {
        return Err(Error::OutOfDomain(format!("direction index {i} outside ±2..±{n}")));
    }
    let one = rational::one();
    let mut d = vec![Rational::zero(); n + 1];
    // 1-based positions a-1, a, a+1
    d[a - 2] = -tau.clone();
    d[a - 1] = one.clone();
    d[a] = -(&one - tau);
    if i < 0 {
        for c in d.iter_mut() {
            *c = -c.clone();
        }
    }
    Ok(d)
}

/// `0_τ = (τ/n, 1/n, ..., 1/n, (1-τ)/n)`.
pub fn origin(n: usize, tau: &Rational) -> Vec<Rational> {
    let inv = q(1, n as i64);
    let mut o = vec![inv.clone(); n + 1];
    o[0] = tau * &inv;
    o[n] = (rational::one() - tau) * &inv;
    o
}

/// Prefix sum `S_k = x_1 + ... + x_k` prescribed by the triangular equations.
fn prefix(p: &TransformedPoint, k: usize) -> Rational {
    let n = p.n();
    let tau = &p.tau;
    (rational::int(k as i64 - 1) + tau) / rational::int(n as i64) + (rational::one() - tau) * p.alpha(k)
        - tau * p.alpha(k + 1)
}

/// Forward map. For `τ ≥ 1/2` the prefix equations `S_1..S_{n-1}` are used and
/// `x_{n+1}` follows from `x_1/x_{n+1} = τ/(1-τ)`; for `τ < 1/2` the equations
/// `S_2..S_n` are used and `x_1` follows from the same ratio. This is the exact
/// inverse of [`to_transformed`] and agrees with `0_τ + Σ α_i d^τ_i` whenever `α_2 = α_n`.
pub fn from_transformed(p: &TransformedPoint) -> Result<SimplexPoint> {
    let n = p.n();
    let one = rational::one();
    let tau = &p.tau;
    if tau.is_negative() || tau > &one {
        return Err(Error::OutOfDomain(format!("τ = {tau} outside [0, 1]")));
    }
    let inv_n = q(1, n as i64);
    let mut s = vec![Rational::zero(); n + 2];
    s[n + 1] = one.clone();
    if tau >= &q(1, 2) {
        for (k, sk) in s.iter_mut().enumerate().take(n).skip(1) {
            *sk = prefix(p, k);
        }
        let x_last = (&one - tau) * (&inv_n - p.alpha(2));
        s[n] = &one - x_last;
    } else {
        for (k, sk) in s.iter_mut().enumerate().take(n + 1).skip(2) {
            *sk = prefix(p, k);
        }
        s[1] = tau * (&inv_n - p.alpha(n));
    }
    let coords: Vec<Rational> = (1..=n + 1).map(|k| &s[k] - &s[k - 1]).collect();
    if let Some((k, c)) = coords.iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Err(Error::OutOfDomain(format!("coordinate x_{} = {c} is negative", k + 1)));
    }
    SimplexPoint::new(coords)
}

/// Plain `0_τ + Σ α_i d^τ_i`.
pub fn linear_combination(p: &TransformedPoint) -> Result<Vec<Rational>> {
    let n = p.n();
    let mut x = origin(n, &p.tau);
    for i in 2..=n {
        let d = direction_vector(n, &p.tau, i as i32)?;
        let a = p.alpha(i);
        for (xk, dk) in x.iter_mut().zip(d) {
            *xk += &a * dk;
        }
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformed {
    pub point: TransformedPoint,
    /// Euclidean distance to the axis is at most `1/(10n²)`.
    pub reliable: bool,
}

/// Inverse map: `τ = x_1 / (x_1 + x_{n+1})`, then the forward recursion for `τ ≥ 1/2`
/// and the backward recursion otherwise.
pub fn to_transformed(x: &SimplexPoint) -> Result<Transformed> {
    let n = x.n();
    let c = &x.coords;
    let denom = &c[0] + &c[n];
    if denom.is_zero() {
        return Err(Error::OutOfDomain("x_1 = x_{n+1} = 0 leaves τ undefined".into()));
    }
    let tau = &c[0] / denom;
    let one = rational::one();
    let nn = rational::int(n as i64);
    let mut s = vec![Rational::zero(); n + 1];
    for k in 1..=n {
        s[k] = &s[k - 1] + &c[k - 1];
    }
    // alpha[k] = α_k for k in 0..=n+1
    let mut alpha = vec![Rational::zero(); n + 2];
    if tau >= q(1, 2) {
        for k in 1..n {
            let v = (rational::int(k as i64 - 1) + &tau) / &nn + (&one - &tau) * &alpha[k] - &s[k];
            alpha[k + 1] = v / &tau;
        }
    } else {
        for k in (2..=n).rev() {
            let v = &s[k] - (rational::int(k as i64 - 1) + &tau) / &nn + &tau * &alpha[k + 1];
            alpha[k] = v / (&one - &tau);
        }
    }
    let point = TransformedPoint { tau, alphas: alpha[2..=n].to_vec() };
    let bound = q(1, 100 * (n as i64).pow(4));
    Ok(Transformed { reliable: axis_distance_sq(x) <= bound, point })
}

/// Squared Euclidean distance from `x` to the axis `{0_τ : τ ∈ [0, 1]}`.
pub fn axis_distance_sq(x: &SimplexPoint) -> Rational {
    let n = x.n();
    let nn = rational::int(n as i64);
    let c = &x.coords;
    let mut tau = (&nn * (&c[0] - &c[n]) + rational::one()) / rational::int(2);
    tau = rational::max(&Rational::zero(), &rational::min(&rational::one(), &tau));
    origin(n, &tau).iter().zip(c).map(|(o, xi)| (xi - o) * (xi - o)).sum()
}

fn l1(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Cheapest path from `x` to `x'` crossing the seam `k` times forward. Mass at position
/// `i` that is never moved lands on `i + k` for free; every other unit costs 2 per move,
/// and a unit needs two moves when its target lies below `i + k - n`.
fn shifted_cost(x: &[Rational], xp: &[Rational], k: usize) -> Rational {
    let n = x.len() - 1;
    let mut a = x.to_vec();
    let mut b = xp.to_vec();
    for i in 0..=n.saturating_sub(k) {
        if i + k > n {
            break;
        }
        let m = rational::min(&a[i], &b[i + k]);
        a[i] -= &m;
        b[i + k] -= &m;
    }
    let moved: Rational = a.iter().sum();
    // Hall deficit of the one-move edges j >= i + k - n (nested suffixes)
    let mut deficit = Rational::zero();
    for t in 1..=n {
        let supply: Rational = a.iter().enumerate().filter(|(i, _)| i + k >= n + t).map(|(_, v)| v).sum();
        let demand: Rational = b[t..].iter().sum();
        deficit = rational::max(&deficit, &(supply - demand));
    }
    (moved + deficit) * rational::int(2)
}

/// Quotient L1 distance under `(x_1..x_n, 0) ≡ (0, x_1..x_n)`, allowing any number of
/// crossings. One crossing gives the closed form
/// `x_1 + x'_{n+1} + Σ|x_{k+1} - x'_k| + 2 max(0, 1 - Σ max(x_{k+1}, x'_k))`.
pub fn metric_d(x: &SimplexPoint, xp: &SimplexPoint) -> Rational {
    let n = x.n();
    let mut best = l1(&x.coords, &xp.coords);
    for k in 1..=n {
        best = rational::min(&best, &shifted_cost(&x.coords, &xp.coords, k));
        best = rational::min(&best, &shifted_cost(&xp.coords, &x.coords, k));
    }
    best
}

/// Distance allowing exactly one crossing of the seam, or none.
pub fn metric_d_single_crossing(x: &SimplexPoint, xp: &SimplexPoint) -> Rational {
    let direct = l1(&x.coords, &xp.coords);
    let a = shifted_cost(&x.coords, &xp.coords, 1);
    let b = shifted_cost(&xp.coords, &x.coords, 1);
    rational::min(&direct, &rational::min(&a, &b))
}

/// L1 distance on `(τ; α)` with `(0; α) ≡ (1; -α)`.
pub fn metric_dtilde(p: &TransformedPoint, pp: &TransformedPoint) -> Rational {
    let one = rational::one();
    let direct = (&p.tau - &pp.tau).abs() + l1(&p.alphas, &pp.alphas);
    let twist: Rational = p.alphas.iter().zip(&pp.alphas).map(|(a, b)| (a + b).abs()).sum();
    let via0 = &p.tau + (&one - &pp.tau) + &twist;
    let via1 = (&one - &p.tau) + &pp.tau + &twist;
    rational::min(&direct, &rational::min(&via0, &via1))
}

// ---------------------------------------------------------------------------
// regions and colours

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    TwistedTunnel,
    /// Colours `-j` for `α_j > δT` and `j` for `α_j < -δT`, ascending by `|j|`.
    Outer(Vec<i32>),
    OutsideSignificant,
}

fn outer_set(p: &TransformedPoint, delta_t: &Rational) -> Vec<i32> {
    let mut s = Vec::new();
    for j in 2..=p.n() {
        let a = p.alpha(j);
        if &a > delta_t {
            s.push(-(j as i32));
        } else if a < -delta_t.clone() {
            s.push(j as i32);
        }
    }
    s
}

/// `|x_i - 1/n| ≤ δw` for `2 ≤ i ≤ n`.
pub fn in_significant_region(x: &SimplexPoint, params: &ReductionParams) -> bool {
    let inv = q(1, x.n() as i64);
    x.coords[1..x.n()].iter().all(|c| (c - &inv).abs() <= params.delta_w)
}

pub fn classify_region(p: &TransformedPoint, params: &ReductionParams) -> Region {
    let s = outer_set(p, &params.delta_t);
    if s.is_empty() {
        return Region::TwistedTunnel;
    }
    match from_transformed(p) {
        Ok(x) if in_significant_region(&x, params) => Region::Outer(s),
        _ => Region::OutsideSignificant,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourVector {
    pub entries: Vec<i8>,
}

impl ColourVector {
    pub fn zero(n: usize) -> Self {
        ColourVector { entries: vec![0; n] }
    }

    /// `e_j` for `j > 0`, `-e_{|j|}` for `j < 0`.
    pub fn unit(n: usize, j: i32) -> Self {
        let mut v = Self::zero(n);
        v.entries[j.unsigned_abs() as usize - 1] = j.signum() as i8;
        v
    }

    pub fn from_set(n: usize, s: &[i32]) -> Self {
        let mut v = Self::zero(n);
        for &j in s {
            v.entries[j.unsigned_abs() as usize - 1] += j.signum() as i8;
        }
        v
    }

    pub fn neg(&self) -> Self {
        ColourVector { entries: self.entries.iter().map(|e| -e).collect() }
    }
}

/// Point of `B` whose cubelet colours the tunnel point `p` (τ clamped to `1/2 ± δT`).
pub fn tunnel_preimage(p: &TransformedPoint, params: &ReductionParams) -> Vec<Rational> {
    let half = q(1, 2);
    let lo = &half - &params.delta_t;
    let hi = &half + &params.delta_t;
    let tau = rational::max(&lo, &rational::min(&hi, &p.tau));
    let mut y = Vec::with_capacity(p.n());
    y.push((tau - half) / &params.delta_t);
    for a in &p.alphas {
        let v = a / &params.delta_t;
        y.push(rational::max(&-rational::one(), &rational::min(&rational::one(), &v)));
    }
    y
}

/// The colouring without the Significant Region check.
pub fn colour_core(p: &TransformedPoint, inst: &NVHDTInstance, params: &ReductionParams) -> Result<ColourVector> {
    let n = p.n();
    let s = outer_set(p, &params.delta_t);
    if !s.is_empty() {
        return Ok(ColourVector::from_set(n, &s));
    }
    let l = inst.label(&tunnel_preimage(p, params))?;
    Ok(ColourVector::unit(n, l))
}

pub fn colour_f(p: &TransformedPoint, inst: &NVHDTInstance, params: &ReductionParams) -> Result<ColourVector> {
    if p.n() != inst.n {
        return Err(Error::Malformed("dimension mismatch between point and instance".into()));
    }
    if classify_region(p, params) == Region::OutsideSignificant {
        return Err(Error::OutOfDomain("point outside the Significant Region".into()));
    }
    colour_core(p, inst, params)
}

/// Entry forced by an active blanket sensor `j`: A+ gives `+1` for odd `j`, `-1` for even.
pub fn blanket_entry(j: usize, label: Label) -> i8 {
    let odd = j % 2 == 1;
    match (label, odd) {
        (Label::Plus, true) | (Label::Minus, false) => 1,
        _ => -1,
    }
}

/// Vector forced by the active blanket sensors (`blankets[j - 2]` for sensor `j`), or
/// `None` when all are inactive. Inactive entries are zero.
pub fn blanket_override(n: usize, blankets: &[BlanketState]) -> Option<ColourVector> {
    if blankets.iter().all(|b| *b == BlanketState::Inactive) {
        return None;
    }
    let mut v = ColourVector::zero(n);
    for (k, b) in blankets.iter().enumerate() {
        if let BlanketState::Active(l) = b {
            v.entries[k + 1] = blanket_entry(k + 2, *l);
        }
    }
    Some(v)
}

/// `blankets[j - 2]` is the state of blanket sensor `j`. When any is active, only the
/// active entries are nonzero.
pub fn f_prime(
    p: &TransformedPoint,
    blankets: &[BlanketState],
    inst: &NVHDTInstance,
    params: &ReductionParams,
) -> Result<ColourVector> {
    let n = p.n();
    if blankets.len() != n - 1 {
        return Err(Error::Malformed(format!("{} blanket states for n = {n}", blankets.len())));
    }
    match blanket_override(n, blankets) {
        Some(v) => Ok(v),
        None => colour_core(p, inst, params),
    }
}

/// f' evaluated on the point each encoder perceives.
pub fn encoder_outputs(x: &SimplexPoint, inst: &NVHDTInstance, params: &ReductionParams) -> Result<Vec<ColourVector>> {
    let n = x.n();
    let cuts = ce::cuts_from_simplex(&x.coords);
    (1..=params.p_c)
        .map(|i| {
            let seen = ce::perceive(&cuts, i, params);
            let xi = SimplexPoint::new(ce::perceived_point(&seen.bits, n))?;
            let blankets: Vec<BlanketState> = (2..=n).map(|j| ce::blanket_active(&cuts, j, i, params)).collect();
            match to_transformed(&xi) {
                Ok(t) => f_prime(&t.point, &blankets, inst, params),
                // both end gaps empty: only reachable far outside the Significant Region
                Err(_) => Ok(blanket_override(n, &blankets).unwrap_or_else(|| ColourVector::zero(n))),
            }
        })
        .collect()
}

/// Average of f' over the `p^C` encoders' perceived points.
pub fn borsuk_f(x: &SimplexPoint, inst: &NVHDTInstance, params: &ReductionParams) -> Result<Vec<Rational>> {
    let outs = encoder_outputs(x, inst, params)?;
    let pc = rational::int(params.p_c as i64);
    Ok((0..x.n()).map(|k| outs.iter().map(|v| rational::int(v.entries[k] as i64)).sum::<Rational>() / &pc).collect())
}

/// Label that grows in `[|j|-2, |j|]` as `α_{|j|}` moves in the direction of `j`.
pub fn consistent_label(j: i32) -> Label {
    let piece_plus = j.unsigned_abs() % 2 == 1;
    match (piece_plus, j > 0) {
        (true, true) | (false, false) => Label::Plus,
        _ => Label::Minus,
    }
}

/// A colour meeting both conditions. Candidates are tried by decreasing `|α_{|j|}|`, ties
/// broken by the order `2, -2, 3, -3, ...`.
pub fn consistent_colour(p: &TransformedPoint, cuts: &LabelledCutSet, params: &ReductionParams) -> Option<i32> {
    let two_dt = &params.delta_t * rational::int(2);
    let need = rational::one() - q(params.p_large as i64, params.p_huge() as i64);
    let mut order: Vec<usize> = (2..=p.n()).collect();
    order.sort_by(|&a, &b| p.alpha(b).abs().cmp(&p.alpha(a).abs()));
    for k in order {
        let a = p.alpha(k);
        let j = if a.is_negative() { -(k as i32) } else { k as i32 };
        if a.abs() <= two_dt {
            continue;
        }
        let lo = rational::int(k as i64 - 2);
        let hi = rational::int(k as i64);
        if cuts.label_length(&lo, &hi, consistent_label(j)) >= need {
            return Some(j);
        }
    }
    None
}
