//! Snake embedding of a 2D Tucker grid into a grid with every side at most 7, the dual
//! cubelet form, and pull-back of complementary pairs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{ColourOracle, NVHDTInstance, TuckerGrid2D, TuckerGridND, SIDE};
use crate::oracles::verify_tucker2d;

/// One grid transformation. Every variant maps a point of the new grid to the point of
/// the old grid whose label it copies (or to nothing, for flood-filled fold cells).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum FoldStep {
    /// `m x m` to `3m x m`; label magnitudes 1 and 2 are exchanged when `swap` is set.
    Extend { m: usize, swap: bool },
    /// Copies of the outer layers of `axis`.
    PadOuter { axis: usize, before: usize, after: usize },
    /// One extra layer at the centre of `axis`: a second copy of the middle layer for odd
    /// sides, and for even sides a layer copying its lower or upper neighbour depending on
    /// whether the remaining coordinates precede their antipode.
    PadCentral { axis: usize },
    /// Folds `axis` (a multiple of 3) into three sheets along a new last axis of length 7.
    Fold { axis: usize, first_fold: usize, second_fold: usize },
    /// New axis `a` is old axis `perm[a]`, reversed when `reflect[a]`.
    Normalise { perm: Vec<usize>, reflect: Vec<bool> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldRecord {
    pub dims_before: Vec<usize>,
    #[serde(flatten)]
    pub step: FoldStep,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldTrace {
    pub records: Vec<FoldRecord>,
}

impl FoldTrace {
    pub fn folds(&self) -> usize {
        self.records.iter().filter(|r| matches!(r.step, FoldStep::Fold { .. })).count()
    }

    /// Original point whose label `p` carries; `None` inside flood-filled fold padding.
    pub fn pull_back_point(&self, p: &[usize]) -> Option<Vec<usize>> {
        let mut cur = p.to_vec();
        for r in self.records.iter().rev() {
            cur = preimage(r, &cur)?;
        }
        Some(cur)
    }
}

fn antipode_precedes(p: &[usize], dims: &[usize], skip: usize) -> bool {
    for (a, (&x, &m)) in p.iter().zip(dims).enumerate() {
        if a == skip {
            continue;
        }
        let y = m + 1 - x;
        if x != y {
            return x < y;
        }
    }
    true
}

fn preimage(r: &FoldRecord, p: &[usize]) -> Option<Vec<usize>> {
    let dims = &r.dims_before;
    match &r.step {
        FoldStep::Extend { m, .. } => {
            let m = *m;
            let (x, y) = (p[0], p[1]);
            Some(if x <= m {
                vec![1, y.max(m + 1 - x)]
            } else if x <= 2 * m {
                vec![x - m, y]
            } else {
                vec![m, m + 1 - (m + 1 - y).max(x - 2 * m)]
            })
        }
        FoldStep::PadOuter { axis, before, .. } => {
            let mut q = p.to_vec();
            q[*axis] = p[*axis].saturating_sub(*before).clamp(1, dims[*axis]);
            Some(q)
        }
        FoldStep::PadCentral { axis } => {
            let (a, s) = (*axis, dims[*axis]);
            let mut q = p.to_vec();
            let x = p[a];
            if s % 2 == 1 {
                let c = s.div_ceil(2);
                q[a] = if x <= c { x } else { x - 1 };
            } else {
                let h = s / 2;
                q[a] = match x.cmp(&(h + 1)) {
                    std::cmp::Ordering::Less => x,
                    std::cmp::Ordering::Greater => x - 1,
                    std::cmp::Ordering::Equal => {
                        if antipode_precedes(p, dims, a) {
                            h
                        } else {
                            h + 1
                        }
                    }
                };
            }
            Some(q)
        }
        FoldStep::Fold { axis, first_fold, second_fold } => {
            let (a, mm) = (*axis, first_fold - 1);
            let z = *p.last()?;
            let xp = p[a];
            let x1 = match z {
                2 if xp <= mm + 1 => xp,
                3 | 4 if xp == mm + 1 => *first_fold,
                4 if xp == 2 => *second_fold,
                4 if (3..=mm).contains(&xp) => 2 * mm + 2 - xp,
                5 if xp == 2 => *second_fold,
                6 if xp == 2 => *second_fold,
                6 if xp >= 3 => xp - 2 + 2 * mm,
                _ => return None,
            };
            let mut q = p[..p.len() - 1].to_vec();
            q[a] = x1;
            Some(q)
        }
        FoldStep::Normalise { perm, reflect } => {
            let mut q = vec![0; p.len()];
            for (a, &old) in perm.iter().enumerate() {
                q[old] = if reflect[a] { dims[old] + 1 - p[a] } else { p[a] };
            }
            Some(q)
        }
    }
}

fn dims_after(r: &FoldRecord) -> Vec<usize> {
    let mut d = r.dims_before.clone();
    match &r.step {
        FoldStep::Extend { m, .. } => d = vec![3 * m, *m],
        FoldStep::PadOuter { axis, before, after } => d[*axis] += before + after,
        FoldStep::PadCentral { axis } => d[*axis] += 1,
        FoldStep::Fold { axis, first_fold, .. } => {
            d[*axis] = first_fold + 1;
            d.push(SIDE);
        }
        FoldStep::Normalise { perm, .. } => d = perm.iter().map(|&a| r.dims_before[a]).collect(),
    }
    d
}

fn swap_magnitude(l: i32) -> i32 {
    l.signum() * (3 - l.abs())
}

/// Builds the grid produced by `r` from `g`.
fn apply(r: &FoldRecord, g: &TuckerGridND) -> Result<TuckerGridND> {
    let dims = dims_after(r);
    let mut out =
        TuckerGridND { dims: dims.clone(), labels: vec![0; dims.iter().product()], facet_colours: Vec::new() };
    let relabel = |l: i32| match r.step {
        FoldStep::Extend { swap: true, .. } => swap_magnitude(l),
        _ => l,
    };
    for idx in 0..out.num_cells() {
        if let Some(q) = preimage(r, &out.point(idx)) {
            out.labels[idx] = relabel(g.label(&q));
        }
    }
    if let FoldStep::Fold { .. } = r.step {
        let k = g.dim() as i32;
        let low = vec![1; dims.len()];
        flood(&mut out, &low, -(k + 1))?;
        flood(&mut out, &dims, k + 1)?;
        if out.labels.contains(&0) {
            return Err(Error::Invalid("fold left cells unreachable from either seed".into()));
        }
    }
    out.facet_colours = facet_colours_after(r, &g.facet_colours, &out);
    Ok(out)
}

/// Labels every unlabelled cell reachable from `seed` through unlabelled cells.
fn flood(g: &mut TuckerGridND, seed: &[usize], label: i32) -> Result<()> {
    let start = g.index(seed);
    if g.labels[start] != 0 {
        return Err(Error::Invalid(format!("flood seed {seed:?} already labelled")));
    }
    let mut queue = VecDeque::from([start]);
    g.labels[start] = label;
    while let Some(idx) = queue.pop_front() {
        let p = g.point(idx);
        for a in 0..p.len() {
            for nb in [p[a].wrapping_sub(1), p[a] + 1] {
                if nb == 0 || nb > g.dims[a] {
                    continue;
                }
                let mut q = p.clone();
                q[a] = nb;
                let j = g.index(&q);
                if g.labels[j] == 0 {
                    g.labels[j] = label;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(())
}

fn facet_colours_after(r: &FoldRecord, before: &[[i32; 2]], out: &TuckerGridND) -> Vec<[i32; 2]> {
    match &r.step {
        FoldStep::Extend { .. } => {
            // the short side x = 1 carries a single label c, so it is coloured -c
            let c = out.labels[0];
            vec![[-c, c], [1, -1]]
        }
        _ if before.is_empty() => Vec::new(),
        FoldStep::Fold { .. } => {
            let k = r.dims_before.len() as i32;
            let mut c = before.to_vec();
            c.push([k + 1, -(k + 1)]);
            c
        }
        FoldStep::Normalise { perm, reflect } => perm
            .iter()
            .zip(reflect)
            .map(|(&a, &rf)| if rf { [before[a][1], before[a][0]] } else { before[a] })
            .collect(),
        _ => before.to_vec(),
    }
}

/// Grid plus the trace that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnakeEmbedding {
    pub grid: TuckerGridND,
    pub trace: FoldTrace,
}

impl SnakeEmbedding {
    pub fn identity(g: TuckerGridND) -> Self {
        SnakeEmbedding { grid: g, trace: FoldTrace::default() }
    }

    /// Applies one step and records it.
    pub fn push(&mut self, step: FoldStep) -> Result<()> {
        let r = FoldRecord { dims_before: self.grid.dims.clone(), step };
        self.grid = apply(&r, &self.grid)?;
        self.trace.records.push(r);
        Ok(())
    }

    /// Pads `axis` to a multiple of 3: one central layer when the remainder is 2, one
    /// outer copy per side when it is 1.
    pub fn pad_to_multiple_of_3(&mut self, axis: usize) -> Result<()> {
        match self.grid.dims[axis] % 3 {
            0 => Ok(()),
            2 => self.push(FoldStep::PadCentral { axis }),
            _ => self.push(FoldStep::PadOuter { axis, before: 1, after: 1 }),
        }
    }

    pub fn fold_once(&mut self, axis: usize) -> Result<()> {
        let m = self.grid.dims[axis];
        if !m.is_multiple_of(3) || m < 6 {
            return Err(Error::Invalid(format!("cannot fold a side of length {m}; need a multiple of 3, at least 6")));
        }
        self.push(FoldStep::Fold { axis, first_fold: m / 3 + 1, second_fold: 2 * m / 3 })
    }

    /// Pads and folds the longest side (lowest index on ties) until every side is at most 7.
    pub fn fold_until_bounded(&mut self) -> Result<()> {
        loop {
            let (axis, &m) = self.grid.dims.iter().enumerate().rev().max_by_key(|(_, &m)| m).unwrap();
            if m <= SIDE {
                return Ok(());
            }
            self.pad_to_multiple_of_3(axis)?;
            self.fold_once(axis)?;
        }
    }

    /// Permutes and reflects axes so that axis `i` (0-based) has facet colours `[-(i+1), i+1]`.
    pub fn normalise(&mut self) -> Result<()> {
        let n = self.grid.dim();
        let c = &self.grid.facet_colours;
        if c.len() != n {
            return Err(Error::Invalid("facet colours missing".into()));
        }
        let mut perm = Vec::with_capacity(n);
        let mut reflect = Vec::with_capacity(n);
        for i in 1..=n as i32 {
            let a = c
                .iter()
                .position(|f| f[0].abs() == i)
                .ok_or_else(|| Error::Invalid(format!("no facet coloured ±{i}")))?;
            perm.push(a);
            reflect.push(c[a][1] != i);
        }
        if perm.iter().enumerate().all(|(a, &p)| a == p) && reflect.iter().all(|r| !r) {
            return Ok(());
        }
        self.push(FoldStep::Normalise { perm, reflect })
    }

    /// Pads every side to exactly 7, keeping antipodality.
    pub fn pad_to_seven(&mut self) -> Result<()> {
        for axis in 0..self.grid.dim() {
            if self.grid.dims[axis].is_multiple_of(2) {
                self.push(FoldStep::PadCentral { axis })?;
            }
            let s = self.grid.dims[axis];
            if s > SIDE {
                return Err(Error::Invalid(format!("side {s} exceeds 7")));
            }
            if s < SIDE {
                let t = (SIDE - s) / 2;
                self.push(FoldStep::PadOuter { axis, before: t, after: t })?;
            }
        }
        Ok(())
    }
}

/// The 3m x m extension of a 2D instance: the original sits in the middle third, each side
/// square copies the facing edge along L-shaped paths, and the short sides end up with a
/// single label, made ±2 by exchanging 1 and 2 if necessary.
pub fn extend_3m(g: &TuckerGrid2D) -> Result<SnakeEmbedding> {
    g.validate()?;
    let swap = g.label(1, g.m).abs() == 1;
    let mut e = SnakeEmbedding::identity(TuckerGridND::from_2d(g));
    e.push(FoldStep::Extend { m: g.m, swap })?;
    Ok(e)
}

/// Extension, folds, and axis normalisation. The result satisfies the bounded-side and
/// facet-colour constraints.
pub fn compose_folds(g: &TuckerGrid2D) -> Result<SnakeEmbedding> {
    let mut e = extend_3m(g)?;
    e.fold_until_bounded()?;
    e.normalise()?;
    e.grid.check_bounded_facets()?;
    Ok(e)
}

/// Cubelet form of a grid with all sides 7: cubelet `c` (0-based) carries the label of
/// grid point `c + 1`.
pub fn grid_to_cubelets(g: &TuckerGridND) -> Result<NVHDTInstance> {
    if let Some(s) = g.dims.iter().find(|&&s| s != SIDE) {
        return Err(Error::Invalid(format!("side {s} is not 7")));
    }
    let inst = NVHDTInstance {
        n: g.dim(),
        facet_colours: g.facet_colours.clone(),
        oracle: ColourOracle::Table { labels: g.labels.clone() },
    };
    inst.validate()?;
    Ok(inst)
}

/// Full pipeline from a 2D instance to the cubelet form, with the trace for pull-back.
pub fn embed_to_cubelets(g: &TuckerGrid2D) -> Result<(NVHDTInstance, SnakeEmbedding)> {
    let mut e = compose_folds(g)?;
    e.pad_to_seven()?;
    Ok((grid_to_cubelets(&e.grid)?, e))
}

/// Maps a complementary pair of the final grid back to one of the original instance.
pub fn pull_back_solution(
    trace: &FoldTrace,
    original: &TuckerGrid2D,
    p: &[usize],
    q: &[usize],
) -> Result<((usize, usize), (usize, usize))> {
    let back = |x: &[usize]| {
        trace.pull_back_point(x).ok_or_else(|| Error::Invalid(format!("{x:?} lies in flood-filled fold padding")))
    };
    let (a, b) = (back(p)?, back(q)?);
    if a.len() != 2 || b.len() != 2 {
        return Err(Error::Malformed("trace does not end in two dimensions".into()));
    }
    let (a, b) = ((a[0], a[1]), (b[0], b[1]));
    if !verify_tucker2d(original, a, b)? {
        return Err(Error::Upstream(format!("pulled-back pair {a:?}, {b:?} is not a solution")));
    }
    Ok((a, b))
}

/// Pull-back for a pair of cubelets (0-based coordinates).
pub fn pull_back_cubelets(
    trace: &FoldTrace,
    original: &TuckerGrid2D,
    c1: &[usize],
    c2: &[usize],
) -> Result<((usize, usize), (usize, usize))> {
    let p: Vec<usize> = c1.iter().map(|c| c + 1).collect();
    let q: Vec<usize> = c2.iter().map(|c| c + 1).collect();
    pull_back_solution(trace, original, &p, &q)
}
