//! The full instance: `n` c-e agents followed by `p^C` copies of the encoder layout.
//!
//! Agent `j - 1` is the c-e agent `a_j`; agent `n + (i-1)K + k` owns slot `k` of region
//! `R_i`, where `K` is the slot count of the layout. Agents are produced on demand, so
//! desk-scale reductions can be scanned without holding every measure at once.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ce::{self, BlanketState};
use crate::error::{Error, Result};
use crate::gadgets::layout::{compile, EncoderLayout, Probe, Slot};
use crate::gadgets::{build_encoder_circuit, gate_blocks, label_sign, output_blocks, probe_window, sum_mass};
use crate::gadgets::{BlockKind, GadgetBlock};
use crate::instances::NVHDTInstance;
use crate::measure::{CHInstance, Label, LabelledCutSet, StepMeasure};
use crate::mobius::{self, SimplexPoint};
use crate::oracles::{nvhdt_delta, point_with_mass, verify_nvhdt};
use crate::params::ReductionParams;
use crate::rational::{self, q, Rational};

/// Per c-e agent `a_j`, the driver slots of `g'_j` and `g'_{-j}`; one block of `mass` sits
/// in each driver's probe window in every region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackSpec {
    #[serde(with = "rational::rat")]
    pub mass: Rational,
    pub drivers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub params: ReductionParams,
    pub layout: EncoderLayout,
    pub feedback: FeedbackSpec,
}

pub fn build_reduction(inst: &NVHDTInstance, params: &ReductionParams) -> Result<Reduction> {
    params.validate()?;
    inst.validate()?;
    let enc = build_encoder_circuit(inst, params)?;
    let layout = compile(&enc, params.p_c)?;
    let n = params.n;
    let drivers = (0..n).map(|j| (layout.drivers[j], layout.drivers[n + j])).collect();
    let feedback = FeedbackSpec { mass: q(1, 2 * params.p_c as i64), drivers };
    Ok(Reduction { params: params.clone(), layout, feedback })
}

fn blanket_geometry(o: &Rational, d: &Rational) -> [(Rational, Rational); 3] {
    let h = d / rational::int(2);
    [q(1, 4), q(1, 2), q(3, 4)].map(|c| (o + &c - &h, o + &c + &h))
}

impl Reduction {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn slots_per_encoder(&self) -> usize {
        self.layout.slots.len()
    }

    pub fn num_agents(&self) -> u64 {
        self.layout.num_agents()
    }

    pub fn domain_length(&self) -> Rational {
        rational::int(self.layout.domain_length() as i64)
    }

    pub fn agent_index(&self, i: u64, k: usize) -> u64 {
        self.n() as u64 + (i - 1) * self.slots_per_encoder() as u64 + k as u64
    }

    /// `(i, k)` for a slot agent, `None` for c-e agents.
    pub fn slot_of(&self, idx: u64) -> Option<(u64, usize)> {
        let n = self.n() as u64;
        if idx < n {
            return None;
        }
        let kk = self.slots_per_encoder() as u64;
        Some(((idx - n) / kk + 1, ((idx - n) % kk) as usize))
    }

    pub fn slot_start(&self, i: u64, k: usize) -> Rational {
        rational::int(self.layout.slot_start(i, k) as i64)
    }

    /// Window where `p` is read in region `R_i`.
    pub fn probe_interval(&self, i: u64, p: &Probe) -> Result<(Rational, Rational)> {
        let o = self.slot_start(i, p.slot);
        match self.layout.slots.get(p.slot) {
            Some(Slot::Blanket { .. }) => {
                let g = blanket_geometry(&o, &self.params.delta_tiny);
                Ok(if p.second { (g[1].1.clone(), g[2].0.clone()) } else { (g[0].1.clone(), g[1].0.clone()) })
            }
            Some(_) => Ok(probe_window(&o)),
            None => Err(Error::Malformed(format!("probe of missing slot {}", p.slot))),
        }
    }

    fn slot_blocks(&self, i: u64, k: usize) -> Result<Vec<GadgetBlock>> {
        let p = &self.params;
        let o = self.slot_start(i, k);
        Ok(match &self.layout.slots[k] {
            Slot::Sensor { j } => {
                let (a, b) = ce::sensor_block(i, *j, p);
                let mut v = vec![GadgetBlock::new(a, b, q(1, 10), BlockKind::Sensor)];
                v.extend(output_blocks(&o, q(9, 20), q(9, 20), BlockKind::ThinDense));
                v
            }
            Slot::Blanket { j } => {
                let m = ce::comb_block_mass(p);
                let mut v: Vec<GadgetBlock> = ce::comb_blocks(i, *j, p)
                    .into_iter()
                    .map(|(a, b)| GadgetBlock::new(a, b, m.clone(), BlockKind::Sensor))
                    .collect();
                let kappa = p.kappa();
                let side = q(9, 20) * (rational::one() - &kappa);
                let mid = q(9, 10) * kappa;
                let [l, c, r] = blanket_geometry(&o, &p.delta_tiny);
                v.push(GadgetBlock::new(l.0, l.1, side.clone(), BlockKind::ThinDense));
                v.push(GadgetBlock::new(c.0, c.1, mid, BlockKind::Central));
                v.push(GadgetBlock::new(r.0, r.1, side, BlockKind::ThinDense));
                v
            }
            Slot::Gate { shape, inputs } => {
                let probes: Vec<_> = inputs.iter().map(|pr| self.probe_interval(i, pr)).collect::<Result<_>>()?;
                gate_blocks(*shape, &probes, &o)?
            }
            Slot::Constant { right } => {
                let (a, b) = if *right { (&o + q(5, 8), &o + q(7, 8)) } else { (&o + q(1, 8), &o + q(3, 8)) };
                vec![GadgetBlock::new(a, b, rational::one(), BlockKind::ThinDense)]
            }
            Slot::Parity => vec![GadgetBlock::new(&o + q(1, 8), &o + q(3, 8), rational::one(), BlockKind::Parity)],
        })
    }

    pub fn agent_blocks(&self, idx: u64) -> Result<Vec<GadgetBlock>> {
        if idx >= self.num_agents() {
            return Err(Error::OutOfDomain(format!("agent {idx} of {}", self.num_agents())));
        }
        match self.slot_of(idx) {
            Some((i, k)) => self.slot_blocks(i, k),
            None => {
                let (dp, dn) = self.feedback.drivers[idx as usize];
                let mut v = Vec::with_capacity(2 * self.params.p_c as usize);
                for i in 1..=self.params.p_c {
                    for d in [dp, dn] {
                        let (a, b) = self.probe_interval(i, &Probe { slot: d, second: false })?;
                        v.push(GadgetBlock::new(a, b, self.feedback.mass.clone(), BlockKind::Feedback));
                    }
                }
                Ok(v)
            }
        }
    }

    pub fn agent(&self, idx: u64) -> Result<StepMeasure> {
        let blocks = self.agent_blocks(idx)?;
        super::to_measure(self.domain_length(), &blocks)
    }

    pub fn agents(&self) -> impl Iterator<Item = Result<StepMeasure>> + '_ {
        (0..self.num_agents()).map(move |k| self.agent(k))
    }

    /// Every agent materialised. Only sensible at small scale.
    pub fn instance(&self) -> Result<CHInstance> {
        let agents = self.agents().collect::<Result<Vec<_>>>()?;
        CHInstance::new(self.domain_length(), agents, self.params.epsilon(), self.n() as u32)
    }

    fn slot_index(&self, want: &Slot) -> Result<usize> {
        self.layout.slots.iter().position(|s| s == want).ok_or_else(|| Error::OutOfDomain(format!("no slot {want:?}")))
    }

    /// Physical blanket reading: the detector's cut leaves the central block once the comb
    /// discrepancy reaches the central mass `9κ/10`.
    pub fn physical_blanket(&self, cuts: &LabelledCutSet, j: usize, i: u64) -> BlanketState {
        let p = &self.params;
        let m = ce::comb_block_mass(p);
        let w = ce::block_width(p);
        let mut d = Rational::zero();
        for (a, b) in ce::comb_blocks(i, j, p) {
            let dens = &m / &w;
            cuts.for_pieces(&a, &b, |lo, hi, l| d += label_sign(l) * &dens * (hi - lo));
        }
        let mid = q(9, 10) * p.kappa();
        if d >= mid {
            BlanketState::Active(Label::Plus)
        } else if d <= -mid {
            BlanketState::Active(Label::Minus)
        } else {
            BlanketState::Inactive
        }
    }
}

pub fn build_sensor_agent(i: u64, j: u64, params: &ReductionParams, red: &Reduction) -> Result<StepMeasure> {
    if i == 0 || i > params.p_c || j == 0 || j > params.p_huge() {
        return Err(Error::OutOfDomain(format!("sensor ({i}, {j})")));
    }
    let k = red.slot_index(&Slot::Sensor { j })?;
    red.agent(red.agent_index(i, k))
}

pub fn build_blanket_sensor(i: u64, j: usize, params: &ReductionParams, red: &Reduction) -> Result<StepMeasure> {
    if i == 0 || i > params.p_c || j < 2 || j > params.n {
        return Err(Error::OutOfDomain(format!("blanket sensor ({i}, {j})")));
    }
    let k = red.slot_index(&Slot::Blanket { j })?;
    red.agent(red.agent_index(i, k))
}

fn block_disc(cuts: &[Rational], b: &GadgetBlock) -> Rational {
    let dens = &b.mass / (&b.end - &b.start);
    let mut d = Rational::zero();
    let mut k = cuts.partition_point(|c| c <= &b.start);
    let mut lo = b.start.clone();
    while k < cuts.len() && cuts[k] < b.end {
        d += label_sign(Label::of_piece(k)) * &dens * (&cuts[k] - &lo);
        lo = cuts[k].clone();
        k += 1;
    }
    d + label_sign(Label::of_piece(k)) * &dens * (&b.end - &lo)
}

/// Places every slot agent's cut left to right so that it is balanced, given the c-e cuts.
pub fn simulate(red: &Reduction, ce_cuts: &[Rational]) -> Result<LabelledCutSet> {
    let n = red.n();
    let nn = rational::int(n as i64);
    if ce_cuts.len() != n || ce_cuts.iter().any(|c| c.is_negative() || c > &nn) {
        return Err(Error::Invalid(format!("need {n} cuts inside [0, {n}]")));
    }
    let mut cuts = ce_cuts.to_vec();
    cuts.sort();
    for i in 1..=red.params.p_c {
        for k in 0..red.slots_per_encoder() {
            let o = red.slot_start(i, k);
            let end = &o + rational::one();
            let blocks = red.slot_blocks(i, k)?;
            let (own, out): (Vec<_>, Vec<_>) = blocks.iter().partition(|b| b.start >= o && b.end <= end);
            let d_out: Rational = out.iter().map(|b| block_disc(&cuts, b)).sum();
            let m_own: Rational = own.iter().map(|b| b.mass.clone()).sum();
            let lam = label_sign(Label::of_piece(cuts.len()));
            let target = (m_own - lam * d_out) / rational::int(2);
            let meas = super::to_measure(red.domain_length(), &blocks)?;
            let t = point_with_mass(&meas, &o, &end, &target)
                .ok_or_else(|| Error::NotFound(format!("no balancing cut for slot {k} of R_{i}")))?;
            cuts.push(t);
        }
    }
    Ok(LabelledCutSet::new(cuts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderReading {
    pub i: u64,
    pub reliable: bool,
    pub tau_clamped: bool,
    /// Point of `B` after clamping, absent when `τ` is undefined.
    #[serde(with = "rational::rat_vec")]
    pub point: Vec<Rational>,
    pub label: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub readings: Vec<EncoderReading>,
    /// Encoders whose outputs are opposite.
    pub pair: (u64, u64),
    /// Points that pass `verify_nvhdt`.
    #[serde(with = "rational::rat_vec_vec")]
    pub points: Vec<Vec<Rational>>,
    /// The points come from the pair's shared cubelet face rather than the readings.
    pub from_face: bool,
}

fn face_points(inst: &NVHDTInstance, a: &[Rational], b: &[Rational]) -> Result<Option<Vec<Vec<Rational>>>> {
    let ca = inst.cubelet_of(a)?;
    let cb = inst.cubelet_of(b)?;
    if ca.iter().zip(&cb).any(|(x, y)| x.abs_diff(*y) > 1) {
        return Ok(None);
    }
    let side = crate::instances::SIDE as i64;
    let eps = nvhdt_delta(inst.n) / rational::int(2);
    let centre = |c: usize| q(2 * c as i64 + 1, side) - rational::one();
    let mut pa = Vec::with_capacity(inst.n);
    let mut pb = Vec::with_capacity(inst.n);
    for (&x, &y) in ca.iter().zip(&cb) {
        if x == y {
            pa.push(centre(x));
            pb.push(centre(x));
        } else {
            // the face point belongs to the lower cubelet
            let face = q(2 * x.max(y) as i64, side) - rational::one();
            let (lo, hi) = (face.clone(), face + &eps);
            if x < y {
                pa.push(lo);
                pb.push(hi);
            } else {
                pa.push(hi);
                pb.push(lo);
            }
        }
    }
    Ok(Some(vec![pa, pb]))
}

/// Per-encoder readings of a solution: the c-e cuts (at most `n`, missing ones at the right
/// end), each encoder's perceived point mapped into `B`, and its reliability. An encoder is
/// unreliable when a c-e cut splits one of its sensors or its region holds a stray cut.
pub fn read_encoders(inst: &NVHDTInstance, red: &Reduction, sol: &LabelledCutSet) -> Result<Vec<EncoderReading>> {
    let p = &red.params;
    let n = p.n;
    if inst.n != n {
        return Err(Error::Malformed("instance and reduction disagree on n".into()));
    }
    let nn = rational::int(n as i64);
    let mut ce_cuts: Vec<Rational> = sol.cuts.iter().filter(|c| *c <= &nn).cloned().collect();
    if ce_cuts.len() > n {
        return Err(Error::Invalid(format!("{} cuts in the c-e region, at most {n} allowed", ce_cuts.len())));
    }
    while ce_cuts.len() < n {
        ce_cuts.push(nn.clone());
    }
    let mut x: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut prev = Rational::zero();
    for c in &ce_cuts {
        x.push((c - &prev) / &nn);
        prev = c.clone();
    }
    x.push((&nn - &prev) / &nn);
    let xp = SimplexPoint::new(x)?;
    if !mobius::in_significant_region(&xp, p) {
        return Err(Error::Upstream("c-e cuts lie outside the Significant Region".into()));
    }
    let ce_set = LabelledCutSet::new(ce_cuts);
    let kk = red.slots_per_encoder();
    let mut readings = Vec::with_capacity(p.p_c as usize);
    for i in 1..=p.p_c {
        let (a, b) = red.layout.region(i);
        let (a, b) = (rational::int(a as i64), rational::int(b as i64));
        let in_region = sol.cuts.iter().filter(|c| *c > &a && *c <= &b).count();
        let seen = ce::perceive(&ce_set, i, p);
        let xi = SimplexPoint::new(ce::perceived_point(&seen.bits, n))?;
        let mut reliable = !seen.unreliable && in_region == kk;
        let (point, label, tau_clamped) = match mobius::to_transformed(&xi) {
            Ok(t) => {
                let y = mobius::tunnel_preimage(&t.point, p);
                let clamped = (&t.point.tau - q(1, 2)).abs() > p.delta_t;
                let l = inst.label(&y)?;
                (y, l, clamped)
            }
            Err(_) => {
                reliable = false;
                (Vec::new(), 0, false)
            }
        };
        readings.push(EncoderReading { i, reliable, tau_clamped, point, label });
    }
    Ok(readings)
}

/// Two reliable encoders with opposite outputs and points of `B` that verify. When the
/// readings spread wider than `δ(n)`, the points are taken on the shared face of the pair's
/// cubelets.
pub fn extract_solution(inst: &NVHDTInstance, red: &Reduction, sol: &LabelledCutSet) -> Result<Extraction> {
    let readings = read_encoders(inst, red, sol)?;
    let good: Vec<&EncoderReading> = readings.iter().filter(|r| r.reliable).collect();
    let mut pair = None;
    'outer: for (s, r) in good.iter().enumerate() {
        for t in &good[s + 1..] {
            if r.label == -t.label {
                pair = Some((*r, *t));
                break 'outer;
            }
        }
    }
    let (r, t) = pair.ok_or_else(|| Error::NotFound("no two reliable encoders with opposite outputs".into()))?;
    let all: Vec<Vec<Rational>> = good.iter().map(|r| r.point.clone()).collect();
    if verify_nvhdt(inst, &all, all.len())? {
        return Ok(Extraction { pair: (r.i, t.i), points: all, from_face: false, readings });
    }
    // the readings spread wider than δ(n): fall back to a face of some opposite pair
    for (s, r) in good.iter().enumerate() {
        for t in &good[s + 1..] {
            if r.label != -t.label {
                continue;
            }
            if let Some(pts) = face_points(inst, &r.point, &t.point)? {
                if verify_nvhdt(inst, &pts, 2)? {
                    let pair = (r.i, t.i);
                    return Ok(Extraction { pair, points: pts, from_face: true, readings });
                }
            }
        }
    }
    Err(Error::NotFound("opposite encoders do not share a cubelet face".into()))
}

/// Scans every agent, one at a time: its blocks must be disjoint, inside the domain, and
/// their masses (the integral of a uniform-block measure) must sum to 1. Returns the agent
/// count.
pub fn check_masses(red: &Reduction) -> Result<u64> {
    let one = rational::one();
    let len = red.domain_length();
    for idx in 0..red.num_agents() {
        let mut blocks = red.agent_blocks(idx)?;
        blocks.sort_by(|a, b| a.start.cmp(&b.start));
        let inside = blocks.first().is_none_or(|b| !b.start.is_negative())
            && blocks.last().is_none_or(|b| b.end <= len)
            && blocks.windows(2).all(|w| w[0].end <= w[1].start);
        if !inside {
            return Err(Error::Invalid(format!("agent {idx} has overlapping or stray blocks")));
        }
        let m = sum_mass(&blocks);
        if m != one {
            return Err(Error::Invalid(format!("agent {idx} has mass {m}")));
        }
    }
    Ok(red.num_agents())
}
