//! Verifiers for every solution concept and brute-force solvers for small instances.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{
    dot, HamSandwichInstance, Hyperplane, NVHDTInstance, NecklaceInstance, NecklaceSplit, OnPlane, TuckerGrid2D,
    TuckerGridND,
};
use crate::measure::{CHInstance, Label, LabelledCutSet, StepMeasure};
use crate::rational::{self, Rational};

// ---------------------------------------------------------------------------
// consensus halving

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    #[serde(with = "rational::rat_vec")]
    pub per_agent: Vec<Rational>,
    #[serde(with = "rational::rat")]
    pub max_abs: Rational,
    pub is_epsilon_solution: bool,
}

pub fn eval_ch(inst: &CHInstance, cuts: &LabelledCutSet) -> Result<DiscrepancyReport> {
    if cuts.cuts.len() > inst.agents.len() {
        return Err(Error::Invalid(format!("{} cuts for {} agents", cuts.cuts.len(), inst.agents.len())));
    }
    if let Some(c) = cuts.cuts.iter().find(|c| c.is_negative() || *c > &inst.domain_length) {
        return Err(Error::OutOfDomain(format!("cut {c} outside [0, {}]", inst.domain_length)));
    }
    if cuts.cuts.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Malformed("cuts not ascending".into()));
    }
    let per_agent: Vec<Rational> = inst.agents.iter().map(|a| cuts.discrepancy(a)).collect();
    let max_abs = per_agent.iter().map(|d| d.abs()).max().unwrap_or_else(Rational::zero);
    Ok(DiscrepancyReport { is_epsilon_solution: max_abs <= inst.epsilon, per_agent, max_abs })
}

/// Smallest `x` in `[a, b]` with `mu([a, x]) = target`.
pub fn point_with_mass(m: &StepMeasure, a: &Rational, b: &Rational, target: &Rational) -> Option<Rational> {
    if target.is_negative() {
        return None;
    }
    if target.is_zero() {
        return Some(a.clone());
    }
    let mut acc = Rational::zero();
    let first = m.blocks().partition_point(|blk| &blk.end <= a);
    for blk in &m.blocks()[first..] {
        if &blk.start >= b {
            break;
        }
        let lo = rational::max(a, &blk.start);
        let hi = rational::min(b, &blk.end);
        let here = &blk.density * (&hi - &lo);
        if &acc + &here >= *target {
            return Some(lo + (target - acc) / &blk.density);
        }
        acc += here;
    }
    None
}

/// Position in `[a, b]` for one extra cut that makes `m` balanced, given the other cuts.
///
/// No other cut may lie strictly inside `(a, b)`. The discrepancy is monotone in the new
/// cut's position there, so the answer is unique up to zero-density stretches; the
/// leftmost solution is returned.
pub fn balancing_cut(m: &StepMeasure, others: &[Rational], a: &Rational, b: &Rational) -> Result<Option<Rational>> {
    if others.iter().any(|c| c > a && c < b) {
        return Err(Error::Invalid("slot already contains a cut".into()));
    }
    let mut with_a: Vec<Rational> = others.to_vec();
    with_a.push(a.clone());
    let d_a = LabelledCutSet::new(with_a).discrepancy(m);
    let k = others.iter().filter(|c| *c <= a).count();
    // moving the cut right relabels [a, x] from piece k + 1 to piece k
    let sigma = match Label::of_piece(k) {
        Label::Plus => rational::one(),
        Label::Minus => -rational::one(),
    };
    let target = -d_a / (sigma * rational::int(2));
    Ok(point_with_mass(m, a, b, &target))
}

// ---------------------------------------------------------------------------
// necklaces

pub fn verify_necklace(inst: &NecklaceInstance, split: &NecklaceSplit) -> Result<bool> {
    let pieces = split.pieces(inst.beads.len())?;
    if let Some(o) = split.piece_owner.iter().find(|&&o| o >= inst.thieves) {
        return Err(Error::Malformed(format!("owner {o} but only {} thieves", inst.thieves)));
    }
    if split.cut_positions.len() > inst.max_cuts() {
        return Ok(false);
    }
    let k = inst.thieves as usize;
    let c = inst.colours as usize;
    let mut held = vec![0usize; k * c];
    for ((lo, hi), &o) in pieces.iter().zip(&split.piece_owner) {
        for &b in &inst.beads[*lo..*hi] {
            held[o as usize * c + b as usize - 1] += 1;
        }
    }
    let counts = inst.colour_counts();
    Ok((0..k).all(|t| (0..c).all(|i| held[t * c + i] * k == counts[i])))
}

pub const NECKLACE_BEAD_BOUND: usize = 24;

/// First valid two-thief split in lexicographic order of cut-gap vectors (`[]` first,
/// then `[1]`, `[1, 2]`, ...), at most `colours` cuts, owners alternating from thief 0.
pub fn brute_force_necklace(inst: &NecklaceInstance, bead_bound: usize) -> Result<Option<NecklaceSplit>> {
    if inst.thieves != 2 {
        return Err(Error::Invalid("brute force handles two thieves".into()));
    }
    let b = inst.beads.len();
    if b > bead_bound {
        return Err(Error::BoundExceeded(format!("{b} beads > {bead_bound}")));
    }
    let c = inst.colours as usize;
    // prefix[g][i] = beads of colour i among the first g beads
    let mut prefix = vec![vec![0i64; c]; b + 1];
    for (g, &bead) in inst.beads.iter().enumerate() {
        prefix[g + 1] = prefix[g].clone();
        prefix[g + 1][bead as usize - 1] += 1;
    }
    let half: Vec<i64> = inst.colour_counts().iter().map(|&x| x as i64 / 2).collect();
    let check = |cuts: &[usize]| -> bool {
        let mut held = vec![0i64; c];
        let mut lo = 0;
        for (p, &hi) in cuts.iter().chain(std::iter::once(&b)).enumerate() {
            if p % 2 == 0 {
                for i in 0..c {
                    held[i] += prefix[hi][i] - prefix[lo][i];
                }
            }
            lo = hi;
        }
        held == half
    };
    let mut cuts = Vec::new();
    if dfs_cuts(&mut cuts, 1, b, c, &check) {
        let owners = (0..=cuts.len() as u32).map(|p| p % 2).collect();
        return Ok(Some(NecklaceSplit { cut_positions: cuts, piece_owner: owners }));
    }
    Ok(None)
}

fn dfs_cuts(cuts: &mut Vec<usize>, next: usize, b: usize, max: usize, check: &impl Fn(&[usize]) -> bool) -> bool {
    if check(cuts) {
        return true;
    }
    if cuts.len() == max {
        return false;
    }
    for g in next..b {
        cuts.push(g);
        if dfs_cuts(cuts, g + 1, b, max, check) {
            return true;
        }
        cuts.pop();
    }
    false
}

// ---------------------------------------------------------------------------
// ham sandwich

/// Checks that every on-plane point is assigned exactly once and each set splits evenly.
pub fn verify_ham_sandwich(inst: &HamSandwichInstance, h: &Hyperplane, on_plane: &[OnPlane]) -> Result<bool> {
    if h.normal.len() != inst.dimension {
        return Err(Error::Malformed("hyperplane dimension mismatch".into()));
    }
    h.validate()?;
    let mut assigned: Vec<Vec<Option<bool>>> = inst.point_sets.iter().map(|s| vec![None; s.len()]).collect();
    for a in on_plane {
        let p = inst
            .point_sets
            .get(a.set)
            .and_then(|s| s.get(a.index))
            .ok_or_else(|| Error::Malformed(format!("no point {}:{}", a.set, a.index)))?;
        if h.side(p) != std::cmp::Ordering::Equal {
            return Err(Error::Invalid(format!("point {}:{} is not on the hyperplane", a.set, a.index)));
        }
        if assigned[a.set][a.index].replace(a.positive).is_some() {
            return Err(Error::Malformed(format!("point {}:{} assigned twice", a.set, a.index)));
        }
    }
    let mut ok = true;
    for (s, set) in inst.point_sets.iter().enumerate() {
        let mut pos = 0;
        for (i, p) in set.iter().enumerate() {
            match h.side(p) {
                std::cmp::Ordering::Greater => pos += 1,
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => match assigned[s][i] {
                    Some(true) => pos += 1,
                    Some(false) => {}
                    None => return Err(Error::Malformed(format!("on-plane point {s}:{i} not assigned"))),
                },
            }
        }
        let n = set.len();
        ok &= pos == n / 2 || pos == n.div_ceil(2);
    }
    Ok(ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HamBounds {
    pub max_dimension: usize,
    pub max_per_set: usize,
}

impl Default for HamBounds {
    fn default() -> Self {
        HamBounds { max_dimension: 3, max_per_set: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamSandwichSolution {
    pub hyperplane: Hyperplane,
    pub on_plane: Vec<OnPlane>,
}

/// Smallest on-plane assignment making `h` a solution, if one exists.
pub fn on_plane_assignment(inst: &HamSandwichInstance, h: &Hyperplane) -> Option<Vec<OnPlane>> {
    let mut out = Vec::new();
    for (s, set) in inst.point_sets.iter().enumerate() {
        let mut pos = 0;
        let mut zero = Vec::new();
        for (i, p) in set.iter().enumerate() {
            match h.side(p) {
                std::cmp::Ordering::Greater => pos += 1,
                std::cmp::Ordering::Equal => zero.push(i),
                std::cmp::Ordering::Less => {}
            }
        }
        let lo = set.len() / 2;
        let need = (0..=zero.len()).find(|a| pos + a == lo || pos + a == set.len().div_ceil(2))?;
        out.extend(zero.iter().enumerate().map(|(r, &i)| OnPlane { set: s, index: i, positive: r < need }));
    }
    Some(out)
}

/// Exact search over hyperplanes spanned by input points.
///
/// Candidates come from `n`-subsets of the distinct input points in order of first
/// appearance; degenerate configurations fall back to fewer points plus coordinate
/// directions lying in the hyperplane.
pub fn brute_force_ham_sandwich(inst: &HamSandwichInstance, bounds: HamBounds) -> Result<HamSandwichSolution> {
    inst.validate()?;
    let n = inst.dimension;
    if n > bounds.max_dimension {
        return Err(Error::BoundExceeded(format!("dimension {n} > {}", bounds.max_dimension)));
    }
    if let Some(s) = inst.point_sets.iter().find(|s| s.len() > bounds.max_per_set) {
        return Err(Error::BoundExceeded(format!("set of size {} > {}", s.len(), bounds.max_per_set)));
    }
    if n == 1 {
        let h = median_gap_plane(&inst.point_sets[0]);
        let on = on_plane_assignment(inst, &h).ok_or_else(|| Error::NotFound("1-D sweep".into()))?;
        return Ok(HamSandwichSolution { hyperplane: h, on_plane: on });
    }
    let mut union: Vec<&Vec<Rational>> = Vec::new();
    for p in inst.point_sets.iter().flatten() {
        if !union.contains(&p) {
            union.push(p);
        }
    }
    let axes: Vec<Vec<Rational>> =
        (0..n).map(|a| (0..n).map(|b| if a == b { rational::one() } else { Rational::zero() }).collect()).collect();
    for k in (0..=n.min(union.len())).rev() {
        for pts in combinations(union.len(), k) {
            let free_dirs = if k == 0 { n - 1 } else { n - k };
            for dirs in combinations(n, free_dirs) {
                let base: Vec<Rational> = match pts.first() {
                    Some(&i) => union[i].clone(),
                    None => vec![Rational::zero(); n],
                };
                let mut rows: Vec<Vec<Rational>> =
                    pts.iter().skip(1).map(|&i| union[i].iter().zip(&base).map(|(x, y)| x - y).collect()).collect();
                rows.extend(dirs.iter().map(|&d| axes[d].clone()));
                let Some(normal) = null_vector(&rows, n) else { continue };
                let offset = dot(&normal, &base);
                let h = canonical_plane(normal, offset)?;
                if let Some(on) = on_plane_assignment(inst, &h) {
                    return Ok(HamSandwichSolution { hyperplane: h, on_plane: on });
                }
            }
        }
    }
    Err(Error::NotFound("no candidate hyperplane bisects every set".into()))
}

/// Offset at the middle of the median gap (or at the median point for odd counts), normal `(1)`.
fn median_gap_plane(set: &[Vec<Rational>]) -> Hyperplane {
    let mut v: Vec<Rational> = set.iter().map(|p| p[0].clone()).collect();
    v.sort();
    let offset = median_gap_midpoint(&v);
    Hyperplane { normal: vec![rational::one()], offset }
}

/// Midpoint of the two middle values of a sorted list; the middle value for odd length.
pub fn median_gap_midpoint(sorted: &[Rational]) -> Rational {
    let s = sorted.len();
    if s == 0 {
        Rational::zero()
    } else if s % 2 == 1 {
        sorted[s / 2].clone()
    } else {
        (&sorted[s / 2 - 1] + &sorted[s / 2]) / rational::int(2)
    }
}

/// L1-normalised with the first nonzero coefficient positive.
fn canonical_plane(normal: Vec<Rational>, offset: Rational) -> Result<Hyperplane> {
    let flip = normal.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    if flip {
        Hyperplane::normalised(normal.iter().map(|c| -c).collect(), -offset)
    } else {
        Hyperplane::normalised(normal, offset)
    }
}

/// A nonzero vector orthogonal to every row when the rows have rank `n - 1`.
pub fn null_vector(rows: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = rational::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..n {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); n];
    v[free] = rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free].clone();
    }
    Some(v)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Tucker

pub fn verify_tucker2d(inst: &TuckerGrid2D, p1: (usize, usize), p2: (usize, usize)) -> Result<bool> {
    if !inst.in_grid(p1) || !inst.in_grid(p2) {
        return Err(Error::OutOfDomain(format!("{p1:?} or {p2:?} outside the grid")));
    }
    Ok(p1.0.abs_diff(p2.0) <= 1 && p1.1.abs_diff(p2.1) <= 1 && inst.label(p1.0, p1.1) == -inst.label(p2.0, p2.1))
}

pub fn verify_tucker_nd(inst: &TuckerGridND, p1: &[usize], p2: &[usize]) -> Result<bool> {
    if !inst.in_grid(p1) || !inst.in_grid(p2) {
        return Err(Error::OutOfDomain(format!("{p1:?} or {p2:?} outside the grid")));
    }
    Ok(p1.iter().zip(p2).all(|(a, b)| a.abs_diff(*b) <= 1) && inst.label(p1) == -inst.label(p2))
}

pub const TUCKER_CELL_BOUND: usize = 1_000_000;

/// Lexicographically first complementary pair `(p, q)` with `q` a neighbour of `p`.
pub fn brute_force_tucker_nd(inst: &TuckerGridND, cell_bound: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    complementary_pairs(inst, cell_bound, true)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NotFound("no complementary pair; the labelling is not a valid instance".into()))
}

pub fn brute_force_tucker2d(inst: &TuckerGrid2D) -> Result<((usize, usize), (usize, usize))> {
    let (p, q) = brute_force_tucker_nd(&TuckerGridND::from_2d(inst), TUCKER_CELL_BOUND)?;
    Ok(((p[0], p[1]), (q[0], q[1])))
}

/// Every complementary pair `(p, q)` with `p < q` in index order (or just the first).
pub fn complementary_pairs(
    inst: &TuckerGridND,
    cell_bound: usize,
    first_only: bool,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let cells = inst.num_cells();
    if cells > cell_bound {
        return Err(Error::BoundExceeded(format!("{cells} cells > {cell_bound}")));
    }
    let d = inst.dim();
    let deltas: Vec<Vec<i64>> = (0..3usize.pow(d as u32))
        .map(|mut t| {
            let mut v = vec![0i64; d];
            for a in (0..d).rev() {
                v[a] = (t % 3) as i64 - 1;
                t /= 3;
            }
            v
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let mut out = Vec::new();
    for idx in 0..cells {
        let p = inst.point(idx);
        let l = inst.labels[idx];
        for dv in &deltas {
            let q: Vec<i64> = p.iter().zip(dv).map(|(&x, &dx)| x as i64 + dx).collect();
            if q.iter().zip(&inst.dims).any(|(&x, &m)| x < 1 || x > m as i64) {
                continue;
            }
            let q: Vec<usize> = q.into_iter().map(|x| x as usize).collect();
            if inst.index(&q) <= idx && !first_only {
                continue;
            }
            if inst.label(&q) == -l {
                out.push((p.clone(), q));
                if first_only {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// cubelet hypercube

/// `δ(n) = 1/(100 n)`.
pub fn nvhdt_delta(n: usize) -> Rational {
    rational::q(1, 100 * n as i64)
}

pub fn verify_nvhdt(inst: &NVHDTInstance, points: &[Vec<Rational>], expected: usize) -> Result<bool> {
    if points.len() != expected {
        return Err(Error::Malformed(format!("{} points, expected {expected}", points.len())));
    }
    let delta = nvhdt_delta(inst.n);
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if p.iter().zip(q).any(|(a, b)| (a - b).abs() > delta) {
                return Ok(false);
            }
        }
    }
    let labels: Vec<i32> = points.iter().map(|p| inst.label(p)).collect::<Result<_>>()?;
    Ok(labels.iter().any(|l| labels.contains(&-l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Block;
    use crate::rational::{int, q};

    #[test]
    fn balancing_cut_in_uniform() {
        let m = StepMeasure::from_blocks(int(1), vec![Block::new(int(0), int(1), int(1))]).unwrap();
        assert_eq!(balancing_cut(&m, &[], &int(0), &int(1)).unwrap(), Some(q(1, 2)));
    }

    #[test]
    fn combinations_lex() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn null_vector_of_line() {
        let v = null_vector(&[vec![int(1), int(1)]], 2).unwrap();
        assert_eq!(&v[0] + &v[1], int(0));
        assert!(null_vector(&[vec![int(0), int(0)]], 2).is_none());
    }

    #[test]
    fn necklace_examples() {
        let inst = NecklaceInstance::parse("1 2 1 2", 2).unwrap();
        let s = brute_force_necklace(&inst, 24).unwrap().unwrap();
        assert_eq!(s.cut_positions, vec![1, 3]);
        let inst = NecklaceInstance::parse("1 1", 2).unwrap();
        assert_eq!(brute_force_necklace(&inst, 24).unwrap().unwrap().cut_positions, vec![1]);
    }
}
