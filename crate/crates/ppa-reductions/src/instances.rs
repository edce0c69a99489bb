//! Problem instances and solution objects: necklaces, ham sandwich, Tucker grids and
//! the cubelet-coloured hypercube.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::circuit::BooleanCircuit;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

// ---------------------------------------------------------------------------
// necklaces

/// Beads carry colours `1..=colours`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceInstance {
    pub beads: Vec<u32>,
    pub thieves: u32,
    pub colours: u32,
}

impl NecklaceInstance {
    pub fn new(beads: Vec<u32>, thieves: u32, colours: u32) -> Result<Self> {
        let inst = NecklaceInstance { beads, thieves, colours };
        inst.validate()?;
        Ok(inst)
    }

    /// Parses a whitespace separated bead string such as `"1 2 1 2"`; colours = max bead.
    pub fn parse(beads: &str, thieves: u32) -> Result<Self> {
        let beads: Vec<u32> = beads
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Malformed(format!("bad bead {t:?}"))))
            .collect::<Result<_>>()?;
        let colours = beads.iter().copied().max().unwrap_or(0);
        Self::new(beads, thieves, colours)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thieves < 2 {
            return Err(Error::Invalid("need at least 2 thieves".into()));
        }
        if let Some(b) = self.beads.iter().find(|&&b| b == 0 || b > self.colours) {
            return Err(Error::Invalid(format!("bead colour {b} outside 1..={}", self.colours)));
        }
        for (i, c) in self.colour_counts().iter().enumerate() {
            if c % self.thieves as usize != 0 {
                return Err(Error::Invalid(format!(
                    "colour {} has {c} beads, not divisible by {}",
                    i + 1,
                    self.thieves
                )));
            }
        }
        Ok(())
    }

    pub fn colour_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.colours as usize];
        for &b in &self.beads {
            counts[b as usize - 1] += 1;
        }
        counts
    }

    pub fn max_cuts(&self) -> usize {
        (self.thieves as usize - 1) * self.colours as usize
    }
}

/// `cut_positions` are gap indices: `g` cuts between bead `g` and bead `g + 1` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceSplit {
    pub cut_positions: Vec<usize>,
    pub piece_owner: Vec<u32>,
}

impl NecklaceSplit {
    /// 0-based half-open bead ranges of the pieces.
    pub fn pieces(&self, beads: usize) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::with_capacity(self.cut_positions.len() + 1);
        let mut lo = 0;
        for &g in &self.cut_positions {
            if g <= lo || g >= beads {
                return Err(Error::Malformed(format!("cut {g} out of order or outside 1..{beads}")));
            }
            out.push((lo, g));
            lo = g;
        }
        out.push((lo, beads));
        if out.len() != self.piece_owner.len() {
            return Err(Error::Malformed(format!("{} pieces but {} owners", out.len(), self.piece_owner.len())));
        }
        Ok(out)
    }

    /// Builds a split from a per-bead owner vector, cutting wherever the owner changes.
    pub fn from_owners(owners: &[u32]) -> Self {
        let mut cut_positions = Vec::new();
        let mut piece_owner = Vec::new();
        for (i, &o) in owners.iter().enumerate() {
            if i == 0 || owners[i - 1] != o {
                if i > 0 {
                    cut_positions.push(i);
                }
                piece_owner.push(o);
            }
        }
        NecklaceSplit { cut_positions, piece_owner }
    }

    pub fn bead_owners(&self, beads: usize) -> Result<Vec<u32>> {
        let mut owners = vec![0; beads];
        for ((lo, hi), &o) in self.pieces(beads)?.into_iter().zip(&self.piece_owner) {
            owners[lo..hi].fill(o);
        }
        Ok(owners)
    }
}

// ---------------------------------------------------------------------------
// ham sandwich

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamSandwichInstance {
    pub dimension: usize,
    #[serde(with = "rational::rat_vec_vec_vec")]
    pub point_sets: Vec<Vec<Vec<Rational>>>,
}

impl HamSandwichInstance {
    pub fn new(dimension: usize, point_sets: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let inst = HamSandwichInstance { dimension, point_sets };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if self.point_sets.len() != self.dimension {
            return Err(Error::Invalid(format!(
                "{} point sets in dimension {}",
                self.point_sets.len(),
                self.dimension
            )));
        }
        for set in &self.point_sets {
            if let Some(p) = set.iter().find(|p| p.len() != self.dimension) {
                return Err(Error::Invalid(format!("point of dimension {} in R^{}", p.len(), self.dimension)));
            }
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.point_sets.iter().map(Vec::len).sum()
    }
}

/// `<normal, x> = offset`, normal with L1 norm exactly 1. Positive side is `> offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "rational::rat_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "rational::rat")]
    pub offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        let h = Hyperplane { normal, offset };
        h.validate()?;
        Ok(h)
    }

    /// Scales `(normal, offset)` so the normal has L1 norm 1.
    pub fn normalised(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        let l1 = l1_norm(&normal);
        if l1.is_zero() {
            return Err(Error::Invalid("zero normal".into()));
        }
        Self::new(normal.iter().map(|c| c / &l1).collect(), offset / l1)
    }

    pub fn validate(&self) -> Result<()> {
        if l1_norm(&self.normal) != rational::one() {
            return Err(Error::Invalid("hyperplane normal must have L1 norm 1".into()));
        }
        Ok(())
    }

    pub fn project(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x)
    }

    /// Sign of `<normal, x> - offset`.
    pub fn side(&self, x: &[Rational]) -> std::cmp::Ordering {
        self.project(x).cmp(&self.offset)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1_norm(v: &[Rational]) -> Rational {
    v.iter().map(|c| c.abs()).sum()
}

/// Side chosen for a point lying on the hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnPlane {
    pub set: usize,
    pub index: usize,
    pub positive: bool,
}

// ---------------------------------------------------------------------------
// Tucker grids

/// `labels[x - 1][y - 1] = λ(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuckerGrid2D {
    pub m: usize,
    pub labels: Vec<Vec<i32>>,
}

impl TuckerGrid2D {
    pub fn new(labels: Vec<Vec<i32>>) -> Result<Self> {
        let g = TuckerGrid2D { m: labels.len(), labels };
        g.validate()?;
        Ok(g)
    }

    pub fn label(&self, x: usize, y: usize) -> i32 {
        self.labels[x - 1][y - 1]
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        if m < 2 || self.labels.len() != m || self.labels.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid("labels must form an m x m array with m >= 2".into()));
        }
        if self.labels.iter().flatten().any(|&l| !matches!(l, 1 | 2 | -1 | -2)) {
            return Err(Error::Invalid("labels must lie in {±1, ±2}".into()));
        }
        for i in 1..=m {
            if self.label(i, 1) != -self.label(m - i + 1, m) {
                return Err(Error::Invalid(format!("boundary violated at ({i}, 1)")));
            }
            if self.label(1, i) != -self.label(m, m - i + 1) {
                return Err(Error::Invalid(format!("boundary violated at (1, {i})")));
            }
        }
        Ok(())
    }

    pub fn in_grid(&self, p: (usize, usize)) -> bool {
        (1..=self.m).contains(&p.0) && (1..=self.m).contains(&p.1)
    }

    /// Uniform labels, with boundary cells drawn in antipodal pairs.
    pub fn random<R: rand::Rng + ?Sized>(m: usize, rng: &mut R) -> TuckerGrid2D {
        const LABELS: [i32; 4] = [1, -1, 2, -2];
        let mut labels = vec![vec![0i32; m]; m];
        for x in 0..m {
            for y in 0..m {
                if labels[x][y] != 0 {
                    continue;
                }
                let l = LABELS[rng.gen_range(0..4)];
                labels[x][y] = l;
                if x == 0 || y == 0 || x == m - 1 || y == m - 1 {
                    labels[m - 1 - x][m - 1 - y] = -l;
                }
            }
        }
        TuckerGrid2D { m, labels }
    }
}

/// Row-major labels (last axis fastest), points are 1-based.
/// `facet_colours[a] = [colour of x_a = 1, colour of x_a = dims[a]]`; empty when unassigned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuckerGridND {
    pub dims: Vec<usize>,
    pub labels: Vec<i32>,
    #[serde(default)]
    pub facet_colours: Vec<[i32; 2]>,
}

impl TuckerGridND {
    pub fn from_2d(g: &TuckerGrid2D) -> Self {
        TuckerGridND {
            dims: vec![g.m, g.m],
            labels: g.labels.iter().flatten().copied().collect(),
            facet_colours: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn num_cells(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index(&self, p: &[usize]) -> usize {
        let mut idx = 0;
        for (a, &x) in p.iter().enumerate() {
            idx = idx * self.dims[a] + (x - 1);
        }
        idx
    }

    pub fn point(&self, mut idx: usize) -> Vec<usize> {
        let mut p = vec![0; self.dims.len()];
        for a in (0..self.dims.len()).rev() {
            p[a] = idx % self.dims[a] + 1;
            idx /= self.dims[a];
        }
        p
    }

    pub fn label(&self, p: &[usize]) -> i32 {
        self.labels[self.index(p)]
    }

    pub fn in_grid(&self, p: &[usize]) -> bool {
        p.len() == self.dims.len() && p.iter().zip(&self.dims).all(|(&x, &m)| x >= 1 && x <= m)
    }

    pub fn is_boundary(&self, p: &[usize]) -> bool {
        p.iter().zip(&self.dims).any(|(&x, &m)| x == 1 || x == m)
    }

    pub fn antipode(&self, p: &[usize]) -> Vec<usize> {
        p.iter().zip(&self.dims).map(|(&x, &m)| m + 1 - x).collect()
    }

    pub fn check_antipodal(&self) -> Result<()> {
        for idx in 0..self.num_cells() {
            let p = self.point(idx);
            if self.is_boundary(&p) && self.labels[idx] != -self.label(&self.antipode(&p)) {
                return Err(Error::Invalid(format!("antipodality fails at {p:?}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Invalid("dims must be positive".into()));
        }
        if self.labels.len() != self.num_cells() {
            return Err(Error::Invalid("label count does not match dims".into()));
        }
        let n = self.dim() as i32;
        if self.labels.iter().any(|&l| l == 0 || l.abs() > n) {
            return Err(Error::Invalid(format!("labels must lie in ±[{n}]")));
        }
        self.check_antipodal()
    }

    /// Sides at most 7, antipodal, facet colours a permutation of ±[n] with opposite
    /// facets opposite, and for |i| >= 2 the facet coloured i carries no label i.
    pub fn check_bounded_facets(&self) -> Result<()> {
        self.validate()?;
        if let Some(m) = self.dims.iter().find(|&&m| m > 7) {
            return Err(Error::Invalid(format!("side {m} exceeds 7")));
        }
        check_facet_colours(&self.facet_colours, self.dim())?;
        for idx in 0..self.num_cells() {
            let p = self.point(idx);
            let l = self.labels[idx];
            for (a, &x) in p.iter().enumerate() {
                for (side, at) in [(0, 1), (1, self.dims[a])] {
                    let c = self.facet_colours[a][side];
                    if x == at && c.abs() >= 2 && c == l {
                        return Err(Error::Invalid(format!("facet coloured {c} contains {p:?} labelled {l}")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_facet_colours(colours: &[[i32; 2]], n: usize) -> Result<()> {
    if colours.len() != n {
        return Err(Error::Invalid("facet colours missing".into()));
    }
    let mut seen = vec![false; 2 * n + 1];
    for &[lo, hi] in colours {
        if lo != -hi {
            return Err(Error::Invalid(format!("opposite facets coloured {lo} and {hi}")));
        }
        for c in [lo, hi] {
            if c == 0 || c.unsigned_abs() as usize > n {
                return Err(Error::Invalid(format!("facet colour {c} outside ±[{n}]")));
            }
            let slot = (c + n as i32) as usize;
            if seen[slot] {
                return Err(Error::Invalid(format!("facet colour {c} used twice")));
            }
            seen[slot] = true;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// cubelet-coloured hypercube

/// Table is indexed by cubelet `(c_1, ..., c_n)`, `c_a in 0..7`, row-major.
/// A circuit takes 3 bits per coordinate (cubelet index, LSB first) and has 2n one-hot
/// outputs ordered `+1..+n, -1..-n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ColourOracle {
    Table { labels: Vec<i32> },
    Circuit { circuit: BooleanCircuit },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NVHDTInstance {
    pub n: usize,
    pub facet_colours: Vec<[i32; 2]>,
    pub oracle: ColourOracle,
}

pub const SIDE: usize = 7;

impl NVHDTInstance {
    pub fn num_cubelets(&self) -> usize {
        SIDE.pow(self.n as u32)
    }

    pub fn cubelet_index(&self, c: &[usize]) -> usize {
        c.iter().fold(0, |acc, &x| acc * SIDE + x)
    }

    pub fn cubelet_coords(&self, mut idx: usize) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for a in (0..self.n).rev() {
            c[a] = idx % SIDE;
            idx /= SIDE;
        }
        c
    }

    /// Cubelet containing `x`; points on shared faces go to the lower neighbour.
    pub fn cubelet_of(&self, x: &[Rational]) -> Result<Vec<usize>> {
        if x.len() != self.n {
            return Err(Error::Malformed(format!("point of dimension {} for n = {}", x.len(), self.n)));
        }
        let one = rational::one();
        x.iter()
            .map(|xi| {
                if xi.abs() > one {
                    return Err(Error::OutOfDomain(format!("coordinate {xi} outside [-1, 1]")));
                }
                Ok((1..SIDE as i64).filter(|&m| xi > &(rational::q(2 * m, SIDE as i64) - &one)).count())
            })
            .collect()
    }

    pub fn cubelet_label(&self, c: &[usize]) -> Result<i32> {
        match &self.oracle {
            ColourOracle::Table { labels } => labels
                .get(self.cubelet_index(c))
                .copied()
                .ok_or_else(|| Error::Invalid("cubelet table too short".into())),
            ColourOracle::Circuit { circuit } => {
                let bits: Vec<bool> = c.iter().flat_map(|&ci| (0..3).map(move |b| ci >> b & 1 == 1)).collect();
                let out = circuit.eval(&bits)?;
                decode_one_hot(&out, self.n)
            }
        }
    }

    pub fn label(&self, x: &[Rational]) -> Result<i32> {
        self.cubelet_label(&self.cubelet_of(x)?)
    }

    pub fn table(&self) -> Result<Vec<i32>> {
        (0..self.num_cubelets()).map(|i| self.cubelet_label(&self.cubelet_coords(i))).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        check_facet_colours(&self.facet_colours, self.n)?;
        if let ColourOracle::Circuit { circuit } = &self.oracle {
            circuit.validate()?;
            if circuit.outputs.len() != 2 * self.n || circuit.num_inputs() != 3 * self.n {
                return Err(Error::Invalid("circuit must have 3n inputs and 2n outputs".into()));
            }
        }
        let table = self.table()?;
        if table.len() != self.num_cubelets() {
            return Err(Error::Invalid("cubelet table has the wrong size".into()));
        }
        let n = self.n as i32;
        for (idx, &l) in table.iter().enumerate() {
            if l == 0 || l.abs() > n {
                return Err(Error::Invalid(format!("label {l} outside ±[{n}]")));
            }
            let c = self.cubelet_coords(idx);
            let boundary = c.iter().any(|&x| x == 0 || x == SIDE - 1);
            if boundary {
                let anti: Vec<usize> = c.iter().map(|&x| SIDE - 1 - x).collect();
                if table[self.cubelet_index(&anti)] != -l {
                    return Err(Error::Invalid(format!("antipodal cubelets {c:?} not opposite")));
                }
            }
            for (a, &x) in c.iter().enumerate() {
                for (side, at) in [(0, 0), (1, SIDE - 1)] {
                    let col = self.facet_colours[a][side];
                    if x == at && col.abs() >= 2 && col == l {
                        return Err(Error::Invalid(format!("facet coloured {col} meets cubelet {c:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Random table-backed instance. Facet `a` is coloured `±(a+1)` with a random sign;
    /// boundary labels are drawn in antipodal pairs avoiding forbidden facet colours.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> NVHDTInstance {
        let facet_colours: Vec<[i32; 2]> = (0..n)
            .map(|a| {
                let c = (a + 1) as i32 * if rng.gen::<bool>() { 1 } else { -1 };
                [c, -c]
            })
            .collect();
        let mut inst = NVHDTInstance { n, facet_colours, oracle: ColourOracle::Table { labels: Vec::new() } };
        let total = inst.num_cubelets();
        let mut labels = vec![0i32; total];
        for idx in 0..total {
            if labels[idx] != 0 {
                continue;
            }
            let c = inst.cubelet_coords(idx);
            let allowed: Vec<i32> = (1..=n as i32)
                .flat_map(|l| [l, -l])
                .filter(|&l| {
                    c.iter().enumerate().all(|(a, &x)| {
                        [(0, 0), (1, SIDE - 1)].iter().all(|&(side, at)| {
                            let col = inst.facet_colours[a][side];
                            x != at || col.abs() < 2 || col != l
                        })
                    })
                })
                .collect();
            let l = allowed[rng.gen_range(0..allowed.len())];
            labels[idx] = l;
            if c.iter().any(|&x| x == 0 || x == SIDE - 1) {
                let anti: Vec<usize> = c.iter().map(|&x| SIDE - 1 - x).collect();
                labels[inst.cubelet_index(&anti)] = -l;
            }
        }
        inst.oracle = ColourOracle::Table { labels };
        inst
    }

    /// Same colouring as an explicit circuit (sum of minterms per label).
    pub fn to_circuit_backed(&self) -> Result<NVHDTInstance> {
        use crate::circuit::CircuitBuilder;
        let table = self.table()?;
        let mut b = CircuitBuilder::new();
        let bits: Vec<_> = (0..3 * self.n).map(|_| b.input()).collect();
        let nbits: Vec<_> = bits.iter().map(|&w| b.not(w)).collect();
        let mut per_label = vec![Vec::new(); 2 * self.n];
        for (idx, &l) in table.iter().enumerate() {
            let c = self.cubelet_coords(idx);
            let lits: Vec<_> = c
                .iter()
                .enumerate()
                .flat_map(|(a, &ci)| (0..3).map(move |k| (3 * a + k, ci >> k & 1 == 1)))
                .map(|(w, on)| if on { bits[w] } else { nbits[w] })
                .collect();
            let term = b.and_all(&lits);
            per_label[label_slot(l, self.n)].push(term);
        }
        let outs = per_label.iter().map(|ts| b.or_all(ts)).collect();
        Ok(NVHDTInstance {
            n: self.n,
            facet_colours: self.facet_colours.clone(),
            oracle: ColourOracle::Circuit { circuit: b.finish(outs) },
        })
    }
}

/// Output slot of label `l` in the one-hot order `+1..+n, -1..-n`.
pub fn label_slot(l: i32, n: usize) -> usize {
    if l > 0 {
        l as usize - 1
    } else {
        n + l.unsigned_abs() as usize - 1
    }
}

pub fn decode_one_hot(out: &[bool], n: usize) -> Result<i32> {
    let on: Vec<usize> = out.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i).collect();
    match on[..] {
        [i] if i < n => Ok(i as i32 + 1),
        [i] => Ok(-((i - n) as i32 + 1)),
        _ => Err(Error::Invalid(format!("{} output gates true, expected exactly one", on.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn necklace_counts() {
        let inst = NecklaceInstance::parse("1 2 2 1", 2).unwrap();
        assert_eq!(inst.colour_counts(), vec![2, 2]);
        assert!(NecklaceInstance::parse("1 2 2", 2).is_err());
    }

    #[test]
    fn split_from_owners() {
        let s = NecklaceSplit::from_owners(&[0, 1, 1, 0]);
        assert_eq!(s.cut_positions, vec![1, 3]);
        assert_eq!(s.piece_owner, vec![0, 1, 0]);
        assert_eq!(s.bead_owners(4).unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn hyperplane_normalises() {
        let h = Hyperplane::normalised(vec![q(2, 1), q(-2, 1)], q(1, 1)).unwrap();
        assert_eq!(h.normal, vec![q(1, 2), q(-1, 2)]);
        assert_eq!(h.offset, q(1, 4));
        assert!(Hyperplane::new(vec![q(1, 2)], q(0, 1)).is_err());
    }

    #[test]
    fn tucker2d_boundary_check() {
        let g = TuckerGrid2D::new(vec![vec![1, 2], vec![-2, -1]]).unwrap();
        assert_eq!(g.label(1, 2), 2);
        assert!(TuckerGrid2D::new(vec![vec![1, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn cubelet_slabs() {
        let inst = NVHDTInstance {
            n: 1,
            facet_colours: vec![[1, -1]],
            oracle: ColourOracle::Table { labels: vec![-1, -1, -1, 1, 1, 1, 1] },
        };
        assert_eq!(inst.cubelet_of(&[q(-1, 1)]).unwrap(), vec![0]);
        assert_eq!(inst.cubelet_of(&[q(0, 1)]).unwrap(), vec![3]);
        // face between cubelets 2 and 3 sits at -1/7
        assert_eq!(inst.cubelet_of(&[q(-1, 7)]).unwrap(), vec![2]);
        assert_eq!(inst.cubelet_of(&[q(1, 1)]).unwrap(), vec![6]);
    }

    #[test]
    fn random_tucker_is_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for m in 2..=9 {
            TuckerGrid2D::random(m, &mut rng).validate().unwrap();
        }
    }

    #[test]
    fn random_nvhdt_is_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            for _ in 0..5 {
                NVHDTInstance::random(n, &mut rng).validate().unwrap();
            }
        }
    }
}
