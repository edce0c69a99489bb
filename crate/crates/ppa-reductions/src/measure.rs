//! Step-function measures, consensus-halving instances and labelled cut sets.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A maximal interval of constant positive density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub start: Rational,
    pub end: Rational,
    pub density: Rational,
}

impl Block {
    pub fn new(start: Rational, end: Rational, density: Rational) -> Self {
        Block { start, end, density }
    }

    /// Uniform block of total `mass` on `[start, end]`.
    pub fn with_mass(start: Rational, end: Rational, mass: &Rational) -> Self {
        let density = mass / (&end - &start);
        Block { start, end, density }
    }

    pub fn mass(&self) -> Rational {
        &self.density * (&self.end - &self.start)
    }

    pub fn overlap(&self, a: &Rational, b: &Rational) -> Rational {
        let lo = rational::max(a, &self.start);
        let hi = rational::min(b, &self.end);
        if hi > lo {
            &self.density * (hi - lo)
        } else {
            Rational::zero()
        }
    }
}

/// Piecewise-constant density on `[0, L]` with total mass exactly 1.
///
/// Stored sparsely as disjoint ascending blocks; zero-density stretches are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct StepMeasure {
    domain_length: Rational,
    blocks: Vec<Block>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    #[serde(with = "rational::rat")]
    domain_length: Rational,
    #[serde(with = "rational::rat_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "rational::rat_vec")]
    values: Vec<Rational>,
}

impl From<StepMeasure> for RawMeasure {
    fn from(m: StepMeasure) -> Self {
        let (breakpoints, values) = m.breakpoints_values();
        RawMeasure { domain_length: m.domain_length, breakpoints, values }
    }
}

impl TryFrom<RawMeasure> for StepMeasure {
    type Error = Error;
    fn try_from(r: RawMeasure) -> Result<Self> {
        StepMeasure::from_breakpoints(r.domain_length, r.breakpoints, r.values)
    }
}

impl StepMeasure {
    /// Builds from blocks; they are sorted, merged when adjacent with equal density,
    /// and must be disjoint, inside the domain and of total mass 1.
    pub fn from_blocks(domain_length: Rational, mut blocks: Vec<Block>) -> Result<Self> {
        blocks.retain(|b| !b.density.is_zero() && b.end > b.start);
        blocks.sort_by(|a, b| a.start.cmp(&b.start));
        let mut merged: Vec<Block> = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.density.is_negative() {
                return Err(Error::Invalid("negative density".into()));
            }
            if b.start.is_negative() || b.end > domain_length {
                return Err(Error::OutOfDomain(format!(
                    "block [{}, {}] outside [0, {}]",
                    b.start, b.end, domain_length
                )));
            }
            if let Some(last) = merged.last_mut() {
                if b.start < last.end {
                    return Err(Error::Invalid("overlapping blocks".into()));
                }
                if b.start == last.end && b.density == last.density {
                    last.end = b.end;
                    continue;
                }
            }
            merged.push(b);
        }
        let m = StepMeasure { domain_length, blocks: merged };
        let total = m.total();
        if total != rational::one() {
            return Err(Error::Invalid(format!("measure integrates to {total}, not 1")));
        }
        Ok(m)
    }

    /// `values[i]` is the density on `[bp[i-1], bp[i]]` with implicit endpoints 0 and L.
    pub fn from_breakpoints(
        domain_length: Rational,
        breakpoints: Vec<Rational>,
        values: Vec<Rational>,
    ) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::Malformed(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if domain_length <= Rational::zero() {
            return Err(Error::Invalid("domain length must be positive".into()));
        }
        let mut edges = Vec::with_capacity(breakpoints.len() + 2);
        edges.push(Rational::zero());
        edges.extend(breakpoints);
        edges.push(domain_length.clone());
        for w in edges.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Invalid("breakpoints must be strictly ascending inside (0, L)".into()));
            }
        }
        let blocks = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| Block::new(edges[i].clone(), edges[i + 1].clone(), v))
            .collect();
        Self::from_blocks(domain_length, blocks)
    }

    pub fn domain_length(&self) -> &Rational {
        &self.domain_length
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Dense breakpoint/value view including zero-density gaps.
    pub fn breakpoints_values(&self) -> (Vec<Rational>, Vec<Rational>) {
        let mut segs: Vec<(Rational, Rational)> = Vec::new();
        let mut cursor = Rational::zero();
        for b in &self.blocks {
            if b.start > cursor {
                segs.push((b.start.clone(), Rational::zero()));
            }
            segs.push((b.end.clone(), b.density.clone()));
            cursor = b.end.clone();
        }
        if cursor < self.domain_length {
            segs.push((self.domain_length.clone(), Rational::zero()));
        }
        let Some((_, last)) = segs.pop() else {
            return (Vec::new(), Vec::new());
        };
        let (bps, mut vals): (Vec<_>, Vec<_>) = segs.into_iter().unzip();
        vals.push(last);
        (bps, vals)
    }

    pub fn total(&self) -> Rational {
        self.blocks.iter().map(Block::mass).sum()
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a.is_negative() || b > &self.domain_length || a > b {
            return Err(Error::OutOfDomain(format!("[{a}, {b}] not inside [0, {}]", self.domain_length)));
        }
        let first = self.blocks.partition_point(|blk| &blk.end <= a);
        let mut acc = Rational::zero();
        for blk in &self.blocks[first..] {
            if &blk.start >= b {
                break;
            }
            acc += blk.overlap(a, b);
        }
        Ok(acc)
    }
}

/// Collects blocks for one agent before the total is known to be 1.
#[derive(Debug, Clone, Default)]
pub struct MeasureBuilder {
    pub blocks: Vec<Block>,
}

impl MeasureBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, start: Rational, end: Rational, mass: &Rational) -> &mut Self {
        self.blocks.push(Block::with_mass(start, end, mass));
        self
    }

    pub fn mass(&self) -> Rational {
        self.blocks.iter().map(Block::mass).sum()
    }

    pub fn build(self, domain_length: Rational) -> Result<StepMeasure> {
        StepMeasure::from_blocks(domain_length, self.blocks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "A+")]
    Plus,
    #[serde(rename = "A-")]
    Minus,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::Plus => Label::Minus,
            Label::Minus => Label::Plus,
        }
    }

    /// Label of the piece with 0-based index `k` when the first piece is A+.
    pub fn of_piece(k: usize) -> Label {
        if k.is_multiple_of(2) {
            Label::Plus
        } else {
            Label::Minus
        }
    }
}

/// Ascending cuts; pieces alternate A+, A-, ... from the left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledCutSet {
    #[serde(with = "rational::rat_vec")]
    pub cuts: Vec<Rational>,
}

impl LabelledCutSet {
    pub fn new(mut cuts: Vec<Rational>) -> Self {
        cuts.sort();
        LabelledCutSet { cuts }
    }

    /// Label of a point that is not itself a cut.
    pub fn label_at(&self, x: &Rational) -> Label {
        Label::of_piece(self.cuts.partition_point(|c| c < x))
    }

    /// Length of `[a, b]` carrying `label`.
    pub fn label_length(&self, a: &Rational, b: &Rational, label: Label) -> Rational {
        let mut acc = Rational::zero();
        self.for_pieces(a, b, |lo, hi, l| {
            if l == label {
                acc += hi - lo;
            }
        });
        acc
    }

    /// Calls `f(lo, hi, label)` for each maximal sub-interval of `[a, b]` with one label.
    pub fn for_pieces(&self, a: &Rational, b: &Rational, mut f: impl FnMut(&Rational, &Rational, Label)) {
        if a >= b {
            return;
        }
        let mut k = self.cuts.partition_point(|c| c <= a);
        let mut lo = a.clone();
        while k < self.cuts.len() && &self.cuts[k] < b {
            f(&lo, &self.cuts[k], Label::of_piece(k));
            lo = self.cuts[k].clone();
            k += 1;
        }
        f(&lo, b, Label::of_piece(k));
    }

    /// mu(A+) - mu(A-).
    pub fn discrepancy(&self, m: &StepMeasure) -> Rational {
        let mut d = Rational::zero();
        for blk in m.blocks() {
            self.for_pieces(&blk.start, &blk.end, |lo, hi, l| {
                let v = &blk.density * (hi - lo);
                match l {
                    Label::Plus => d += v,
                    Label::Minus => d -= v,
                }
            });
        }
        d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CHInstance {
    #[serde(with = "rational::rat")]
    pub domain_length: Rational,
    pub agents: Vec<StepMeasure>,
    #[serde(with = "rational::rat")]
    pub epsilon: Rational,
    pub ce_region_length: u32,
}

impl CHInstance {
    pub fn new(
        domain_length: Rational,
        agents: Vec<StepMeasure>,
        epsilon: Rational,
        ce_region_length: u32,
    ) -> Result<Self> {
        let inst = CHInstance { domain_length, agents, epsilon, ce_region_length };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain_length <= Rational::zero() {
            return Err(Error::Invalid("domain length must be positive".into()));
        }
        if self.epsilon.is_negative() {
            return Err(Error::Invalid("epsilon must be nonnegative".into()));
        }
        if rational::int(self.ce_region_length as i64) > self.domain_length {
            return Err(Error::Invalid("c-e region longer than domain".into()));
        }
        for (i, a) in self.agents.iter().enumerate() {
            if a.domain_length() != &self.domain_length {
                return Err(Error::Invalid(format!("agent {i} has a different domain length")));
            }
        }
        Ok(())
    }
}
