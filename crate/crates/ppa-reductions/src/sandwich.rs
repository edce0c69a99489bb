//! Moment-curve reduction from necklaces to ham sandwich, the candidate-hyperplane
//! labelling used for membership, and the power-of-two thieves recursion.

use std::cmp::Ordering;
use std::collections::HashMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{dot, l1_norm, HamSandwichInstance, Hyperplane, NecklaceInstance, NecklaceSplit, OnPlane};
use crate::oracles::median_gap_midpoint;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentEmbedding {
    #[serde(with = "rational::rat_vec")]
    pub bead_positions: Vec<Rational>,
    pub dimension: usize,
    /// `(set, index)` of each bead's point in the sandwich instance.
    pub bead_points: Vec<(usize, usize)>,
}

/// `γ(α) = (α, α², ..., αⁿ)`.
pub fn moment_point(alpha: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut acc = alpha.clone();
    for _ in 0..n {
        out.push(acc.clone());
        acc *= alpha;
    }
    out
}

/// Bead `j` of `B` sits at `α_j = j/(B+1)` on the moment curve, in the set of its colour.
pub fn necklace_to_sandwich(inst: &NecklaceInstance) -> Result<(HamSandwichInstance, MomentEmbedding)> {
    if inst.thieves != 2 {
        return Err(Error::Invalid("the moment-curve reduction needs two thieves".into()));
    }
    inst.validate()?;
    let n = inst.colours as usize;
    let b = inst.beads.len() as i64;
    let mut sets = vec![Vec::new(); n];
    let mut positions = Vec::new();
    let mut bead_points = Vec::new();
    for (j, &c) in inst.beads.iter().enumerate() {
        let alpha = rational::q(j as i64 + 1, b + 1);
        let set = c as usize - 1;
        bead_points.push((set, sets[set].len()));
        sets[set].push(moment_point(&alpha, n));
        positions.push(alpha);
    }
    Ok((HamSandwichInstance::new(n, sets)?, MomentEmbedding { bead_positions: positions, dimension: n, bead_points }))
}

/// Beads on the positive side go to thief 0, the rest to thief 1.
pub fn sandwich_to_necklace_solution(
    emb: &MomentEmbedding,
    h: &Hyperplane,
    on_plane: &[OnPlane],
) -> Result<NecklaceSplit> {
    let chosen: HashMap<(usize, usize), bool> = on_plane.iter().map(|a| ((a.set, a.index), a.positive)).collect();
    let mut owners = Vec::with_capacity(emb.bead_positions.len());
    for (alpha, key) in emb.bead_positions.iter().zip(&emb.bead_points) {
        let positive = match h.side(&moment_point(alpha, emb.dimension)) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => *chosen
                .get(key)
                .ok_or_else(|| Error::Upstream(format!("bead point {key:?} on the plane but unassigned")))?,
        };
        owners.push(if positive { 0 } else { 1 });
    }
    let split = NecklaceSplit::from_owners(&owners);
    if split.cut_positions.len() > emb.dimension {
        return Err(Error::Invalid(format!(
            "{} sign changes along the moment curve in dimension {}",
            split.cut_positions.len(),
            emb.dimension
        )));
    }
    Ok(split)
}

// ---------------------------------------------------------------------------
// candidate hyperplanes

/// Offset bisecting the union of all sets: the median gap midpoint of the projections.
pub fn find_bisecting_offset(inst: &HamSandwichInstance, g: &[Rational]) -> Result<Rational> {
    check_gradient(inst, g)?;
    let mut proj: Vec<Rational> = inst.point_sets.iter().flatten().map(|p| dot(g, p)).collect();
    proj.sort();
    Ok(median_gap_midpoint(&proj))
}

fn check_gradient(inst: &HamSandwichInstance, g: &[Rational]) -> Result<()> {
    if g.len() != inst.dimension {
        return Err(Error::Malformed("gradient dimension mismatch".into()));
    }
    if g.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("zero gradient".into()));
    }
    if l1_norm(g) != rational::one() {
        return Err(Error::Invalid("gradient must have L1 norm 1".into()));
    }
    Ok(())
}

/// `(1/(2N), 1, ..., 1)`.
pub fn reference_point(n: usize, grain: u64) -> Vec<Rational> {
    let mut p = vec![rational::one(); n];
    p[0] = rational::q(1, 2 * grain as i64);
    p
}

/// Signed index of the most unevenly split set (lowest index on ties).
///
/// The sign is that of `#positive - #negative` for that set, where positive means
/// `<g, x>` above the bisecting offset. An exactly even split takes the sign of the
/// reference point's side instead, which keeps `label(-g) = -label(g)`.
pub fn candidate_hyperplane_label(inst: &HamSandwichInstance, g: &[Rational], grain: u64) -> Result<i32> {
    let c = find_bisecting_offset(inst, g)?;
    let mut best: Option<(usize, i64)> = None;
    for (i, set) in inst.point_sets.iter().enumerate() {
        let u: i64 = set
            .iter()
            .map(|p| match dot(g, p).cmp(&c) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => 0,
            })
            .sum();
        if best.is_none_or(|(_, bu)| u.abs() > bu.abs()) {
            best = Some((i, u));
        }
    }
    let (i, u) = best.ok_or_else(|| Error::Invalid("no point sets".into()))?;
    let idx = i as i32 + 1;
    if u != 0 {
        return Ok(idx * u.signum() as i32);
    }
    let side = dot(g, &reference_point(inst.dimension, grain)) - c;
    if side.is_zero() {
        return Err(Error::Invalid("reference point lies on the candidate hyperplane".into()));
    }
    Ok(if side.is_positive() { idx } else { -idx })
}

// ---------------------------------------------------------------------------
// power-of-two thieves

/// Halve repeatedly: split between two groups, then recurse on each group's beads.
pub fn solve_power_of_two(
    inst: &NecklaceInstance,
    two_thief: &dyn Fn(&NecklaceInstance) -> Result<Option<NecklaceSplit>>,
) -> Result<NecklaceSplit> {
    let k = inst.thieves;
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::Invalid(format!("{k} thieves is not a power of two")));
    }
    inst.validate()?;
    let owners = owners_power_of_two(inst, two_thief)?;
    Ok(NecklaceSplit::from_owners(&owners))
}

fn owners_power_of_two(
    inst: &NecklaceInstance,
    two_thief: &dyn Fn(&NecklaceInstance) -> Result<Option<NecklaceSplit>>,
) -> Result<Vec<u32>> {
    let b = inst.beads.len();
    if b == 0 {
        return Ok(Vec::new());
    }
    let top = NecklaceInstance { thieves: 2, ..inst.clone() };
    let split = two_thief(&top)?.ok_or_else(|| Error::NotFound("two-thief solver returned nothing".into()))?;
    let halves = split.bead_owners(b)?;
    if inst.thieves == 2 {
        return Ok(halves);
    }
    let sub = inst.thieves / 2;
    let mut owners = vec![0; b];
    for t in 0..2u32 {
        let idx: Vec<usize> = (0..b).filter(|&j| halves[j] == t).collect();
        let child = NecklaceInstance {
            beads: idx.iter().map(|&j| inst.beads[j]).collect(),
            thieves: sub,
            colours: inst.colours,
        };
        child.validate().map_err(|e| Error::Upstream(format!("two-thief split was not fair: {e}")))?;
        for (j, o) in idx.iter().zip(owners_power_of_two(&child, two_thief)?) {
            owners[*j] = t * sub + o;
        }
    }
    Ok(owners)
}
