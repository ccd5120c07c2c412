//! Persistence modules: explicit F2 modules on finite posets, symbolic interval
//! and rectangle modules, barcodes, and pullback along monotone maps.

use std::collections::{HashMap, VecDeque};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{nullspace, BitVec, Matrix};
use crate::poset::{FinitePoset, MonotoneMap, PosetError};

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("structure maps are not functorial at {0}")]
    NotFunctorial(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map is not a translation at point {0}")]
    NotATranslation(usize),
    #[error("interval endpoints out of order: {0}")]
    BadInterval(String),
    #[error("unsupported map for this module kind")]
    Unsupported,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A functor from a finite poset to F2-vector spaces, with a matrix for every
/// comparable pair.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteModule {
    poset: FinitePoset,
    dims: Vec<usize>,
    maps: HashMap<(usize, usize), Matrix>,
}

impl FiniteModule {
    /// Builds the module from matrices on covering pairs; composites along any
    /// cover path fill in the rest and functoriality is then checked in full.
    pub fn from_covers(
        poset: FinitePoset,
        dims: Vec<usize>,
        cover_maps: &HashMap<(usize, usize), Matrix>,
    ) -> Result<Self, ModuleError> {
        let n = poset.len();
        if dims.len() != n {
            return Err(ModuleError::ShapeMismatch(format!("{} dims for {} points", dims.len(), n)));
        }
        let covers = poset.covers();
        let cover_map = |p: usize, q: usize| -> Result<Matrix, ModuleError> {
            match cover_maps.get(&(p, q)) {
                Some(m) if m.rows() == dims[q] && m.cols() == dims[p] => Ok(m.clone()),
                Some(_) => Err(ModuleError::ShapeMismatch(format!("map {p}<={q}"))),
                None if dims[p] == 0 || dims[q] == 0 => Ok(Matrix::zeros(dims[q], dims[p])),
                None => Err(ModuleError::ShapeMismatch(format!("missing map {p}<={q}"))),
            }
        };
        let mut maps = HashMap::new();
        for p in 0..n {
            // Breadth-first along covers from p.
            let mut reached: Vec<Option<Matrix>> = vec![None; n];
            reached[p] = Some(Matrix::identity(dims[p]));
            let mut queue = VecDeque::from([p]);
            while let Some(x) = queue.pop_front() {
                for &(a, b) in &covers {
                    if a == x && reached[b].is_none() {
                        let m = cover_map(a, b)?.mul(reached[x].as_ref().unwrap());
                        reached[b] = Some(m);
                        queue.push_back(b);
                    }
                }
            }
            for (q, m) in reached.into_iter().enumerate() {
                if let Some(m) = m {
                    maps.insert((p, q), m);
                }
            }
        }
        // Cover matrices must agree with what was stored.
        for &(p, q) in &covers {
            if maps[&(p, q)] != cover_map(p, q)? {
                return Err(ModuleError::NotFunctorial(format!("{p}<={q}")));
            }
        }
        let module = FiniteModule { poset, dims, maps };
        module.check_functorial()?;
        Ok(module)
    }

    /// The indicator module of `support`: F2 on the support, identities inside
    /// it and zero maps elsewhere. Fails unless the support is convex.
    pub fn indicator(poset: FinitePoset, support: &[bool]) -> Result<Self, ModuleError> {
        let dims: Vec<usize> = support.iter().map(|s| usize::from(*s)).collect();
        let mut maps = HashMap::new();
        for (p, q) in poset.comparable_pairs() {
            let m = if support[p] && support[q] {
                Matrix::identity(1)
            } else {
                Matrix::zeros(dims[q], dims[p])
            };
            maps.insert((p, q), m);
        }
        let module = FiniteModule { poset, dims, maps };
        module.check_functorial()?;
        Ok(module)
    }

    pub fn zero(poset: FinitePoset) -> Self {
        let n = poset.len();
        FiniteModule::indicator(poset, &vec![false; n]).expect("zero module is functorial")
    }

    fn check_functorial(&self) -> Result<(), ModuleError> {
        let n = self.poset.len();
        for p in 0..n {
            if self.maps[&(p, p)] != Matrix::identity(self.dims[p]) {
                return Err(ModuleError::NotFunctorial(format!("{p}<={p}")));
            }
        }
        for (p, q) in self.poset.comparable_pairs() {
            for r in 0..n {
                if self.poset.leq(q, r) && self.maps[&(q, r)].mul(&self.maps[&(p, q)]) != self.maps[&(p, r)] {
                    return Err(ModuleError::NotFunctorial(format!("{p}<={q}<={r}")));
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn dim(&self, p: usize) -> usize {
        self.dims[p]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The structure map `M(p <= q)`. Panics if `p` is not below `q`.
    pub fn map(&self, p: usize, q: usize) -> &Matrix {
        &self.maps[&(p, q)]
    }

    /// `gM(p) = M(g(p))`, `gM(p <= q) = M(g(p) <= g(q))`.
    pub fn pullback(&self, g: &[usize]) -> Result<FiniteModule, ModuleError> {
        if !self.poset.is_monotone(g) {
            return Err(PosetError::DomainMismatch("map is not a monotone self-map".into()).into());
        }
        let dims = g.iter().map(|&x| self.dims[x]).collect();
        let maps = self
            .poset
            .comparable_pairs()
            .into_iter()
            .map(|(p, q)| ((p, q), self.maps[&(g[p], g[q])].clone()))
            .collect();
        Ok(FiniteModule {
            poset: self.poset.clone(),
            dims,
            maps,
        })
    }

    /// Parses the module text format:
    ///
    /// ```text
    /// POSET 3
    /// 0 <= 1
    /// 1 <= 2
    /// DIMS 1 1 0
    /// MAP 0 1
    /// 1
    /// ```
    ///
    /// `MAP p q` is followed by `dim(q)` rows of `dim(p)` bits. Maps touching a
    /// zero space may be omitted.
    pub fn parse(text: &str) -> Result<Self, ModuleError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let dims_at = lines
            .iter()
            .position(|(_, l)| l.starts_with("DIMS"))
            .ok_or(ModuleError::Parse {
                line: 0,
                msg: "missing DIMS line".into(),
            })?;
        let poset_text: Vec<&str> = lines[..dims_at].iter().map(|(_, l)| *l).collect();
        let poset = FinitePoset::parse(&poset_text.join("\n"))?;
        let (dline, dtext) = lines[dims_at];
        let perr = |line: usize, msg: String| ModuleError::Parse { line, msg };
        let dims: Vec<usize> = dtext["DIMS".len()..]
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| perr(dline, e.to_string())))
            .collect::<Result<_, _>>()?;
        let mut cover_maps = HashMap::new();
        let mut i = dims_at + 1;
        while i < lines.len() {
            let (line, l) = lines[i];
            let rest = l
                .strip_prefix("MAP")
                .ok_or_else(|| perr(line, format!("expected `MAP p q`, got `{l}`")))?;
            let ids: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| perr(line, e.to_string())))
                .collect::<Result<_, _>>()?;
            let [p, q] = ids[..] else {
                return Err(perr(line, "expected two point ids".into()));
            };
            if p >= dims.len() || q >= dims.len() {
                return Err(perr(line, format!("point out of range in `{l}`")));
            }
            let mut rows = Vec::new();
            for _ in 0..dims[q] {
                i += 1;
                let (rl, row) = *lines.get(i).ok_or_else(|| perr(line, "truncated matrix".into()))?;
                let bits: Vec<u8> = row
                    .split_whitespace()
                    .map(|t| t.parse::<u8>().map_err(|e| perr(rl, e.to_string())))
                    .collect::<Result<_, _>>()?;
                if bits.len() != dims[p] {
                    return Err(perr(rl, format!("expected {} entries", dims[p])));
                }
                rows.push(bits);
            }
            cover_maps.insert((p, q), Matrix::from_rows(&rows, dims[p]));
            i += 1;
        }
        FiniteModule::from_covers(poset, dims, &cover_maps)
    }
}

/// A natural transformation between finite modules on the same poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleMorphism {
    pub components: Vec<Matrix>,
}

impl ModuleMorphism {
    pub fn identity(m: &FiniteModule) -> Self {
        ModuleMorphism {
            components: m.dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    pub fn zero(source: &FiniteModule, target: &FiniteModule) -> Self {
        ModuleMorphism {
            components: source
                .dims
                .iter()
                .zip(&target.dims)
                .map(|(&s, &t)| Matrix::zeros(t, s))
                .collect(),
        }
    }

    /// `self . other`, componentwise.
    pub fn after(&self, other: &ModuleMorphism) -> ModuleMorphism {
        ModuleMorphism {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }
}

/// Whether every naturality square `phi_q M(p<=q) = N(p<=q) phi_p` commutes.
pub fn is_morphism(source: &FiniteModule, target: &FiniteModule, phi: &ModuleMorphism) -> Result<bool, ModuleError> {
    if source.poset != target.poset {
        return Err(ModuleError::ShapeMismatch("modules live on different posets".into()));
    }
    if phi.components.len() != source.dims.len() {
        return Err(ModuleError::ShapeMismatch("wrong number of components".into()));
    }
    for (p, c) in phi.components.iter().enumerate() {
        if c.rows() != target.dims[p] || c.cols() != source.dims[p] {
            return Err(ModuleError::ShapeMismatch(format!("component at {p}")));
        }
    }
    Ok(source.poset.comparable_pairs().into_iter().all(|(p, q)| {
        phi.components[q].mul(source.map(p, q)) == target.map(p, q).mul(&phi.components[p])
    }))
}

/// The morphism `M => gM` with components `M(p <= g(p))`.
pub fn shift_morphism(m: &FiniteModule, g: &[usize]) -> Result<ModuleMorphism, ModuleError> {
    if let Some(p) = (0..m.poset.len()).find(|&p| !m.poset.leq(p, g[p])) {
        return Err(ModuleError::NotATranslation(p));
    }
    Ok(ModuleMorphism {
        components: (0..m.poset.len()).map(|p| m.map(p, g[p]).clone()).collect(),
    })
}

/// Coordinates of the unknowns of a morphism `source => target`:
/// entry `(i, j)` of component `p` sits at `offset[p] + i * dim_source(p) + j`.
#[derive(Clone, Debug)]
pub struct MorphismCoords {
    offsets: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl MorphismCoords {
    pub fn new(source: &FiniteModule, target: &FiniteModule) -> Self {
        let mut offsets = Vec::new();
        let mut total = 0;
        for p in 0..source.dims.len() {
            offsets.push(total);
            total += source.dims[p] * target.dims[p];
        }
        MorphismCoords {
            offsets,
            rows: target.dims.clone(),
            cols: source.dims.clone(),
            total,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn index(&self, p: usize, i: usize, j: usize) -> usize {
        self.offsets[p] + i * self.cols[p] + j
    }

    pub fn to_morphism(&self, v: &BitVec) -> ModuleMorphism {
        let components = (0..self.offsets.len())
            .map(|p| {
                let mut m = Matrix::zeros(self.rows[p], self.cols[p]);
                for i in 0..self.rows[p] {
                    for j in 0..self.cols[p] {
                        m.set(i, j, v.get(self.index(p, i, j)));
                    }
                }
                m
            })
            .collect();
        ModuleMorphism { components }
    }

    pub fn to_vec(&self, phi: &ModuleMorphism) -> BitVec {
        let mut v = BitVec::zeros(self.total);
        for (p, c) in phi.components.iter().enumerate() {
            for i in 0..c.rows() {
                for j in 0..c.cols() {
                    v.set(self.index(p, i, j), c.get(i, j));
                }
            }
        }
        v
    }
}

/// Basis of the F2-space of natural transformations `source => target`,
/// by elimination on the stacked naturality constraints over covering pairs.
pub fn morphism_space_basis(source: &FiniteModule, target: &FiniteModule) -> Vec<ModuleMorphism> {
    let coords = MorphismCoords::new(source, target);
    morphism_space_vectors(source, target, &coords)
        .iter()
        .map(|v| coords.to_morphism(v))
        .collect()
}

pub(crate) fn morphism_space_vectors(
    source: &FiniteModule,
    target: &FiniteModule,
    coords: &MorphismCoords,
) -> Vec<BitVec> {
    let mut rows = Vec::new();
    for (p, q) in source.poset.covers() {
        let (ms, mt) = (source.map(p, q), target.map(p, q));
        // (phi_q M(p<=q))_{ij} + (N(p<=q) phi_p)_{ij} = 0
        for i in 0..target.dims[q] {
            for j in 0..source.dims[p] {
                let mut row = BitVec::zeros(coords.total);
                for k in 0..source.dims[q] {
                    if ms.get(k, j) {
                        row.flip(coords.index(q, i, k));
                    }
                }
                for k in 0..target.dims[p] {
                    if mt.get(i, k) {
                        row.flip(coords.index(p, k, j));
                    }
                }
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
    }
    nullspace(&rows, coords.total)
}

/// The interval module of `[a, b)` over the real line; empty when `a == b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalModule {
    pub a: f64,
    pub b: f64,
}

impl IntervalModule {
    pub fn new(a: f64, b: f64) -> Result<Self, ModuleError> {
        if a.is_nan() || b.is_nan() || a > b {
            return Err(ModuleError::BadInterval(format!("[{a},{b})")));
        }
        Ok(IntervalModule { a, b })
    }

    pub fn empty() -> Self {
        IntervalModule { a: 0.0, b: 0.0 }
    }

    pub fn is_empty(&self) -> bool {
        self.a >= self.b
    }

    pub fn contains(&self, p: f64) -> bool {
        self.a <= p && p < self.b
    }

    /// Support preimage under a monotone map of the line.
    pub fn pullback(&self, g: &MonotoneMap) -> Result<IntervalModule, ModuleError> {
        if self.is_empty() {
            return Ok(IntervalModule::empty());
        }
        let r = match g {
            MonotoneMap::Shift(t) => IntervalModule::new(self.a - t, self.b - t)?,
            MonotoneMap::Scale(c) if *c > 0.0 => IntervalModule::new(self.a / c, self.b / c)?,
            MonotoneMap::PiecewiseLinear(knots) => {
                let inv: Vec<(f64, f64)> = knots.iter().map(|(x, y)| (*y, *x)).collect();
                if inv.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 <= w[0].1) {
                    return Err(ModuleError::Unsupported);
                }
                let back = MonotoneMap::PiecewiseLinear(inv);
                let at = |y: f64| match back.apply(&crate::poset::Point::Real(vec![y])) {
                    Ok(crate::poset::Point::Real(v)) => v[0],
                    _ => unreachable!("piecewise-linear maps act on reals"),
                };
                IntervalModule::new(at(self.a), at(self.b))?
            }
            _ => return Err(ModuleError::Unsupported),
        };
        Ok(if r.is_empty() { IntervalModule::empty() } else { r })
    }

    pub fn to_rectangle(&self) -> RectangleModule {
        RectangleModule {
            a: vec![self.a],
            b: vec![self.b],
        }
    }
}

/// The rectangle module of the box `[a, b)` in R^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleModule {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl RectangleModule {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, ModuleError> {
        if a.len() != b.len() {
            return Err(ModuleError::ShapeMismatch("corner dimensions differ".into()));
        }
        if a.iter().zip(&b).any(|(x, y)| x.is_nan() || y.is_nan() || x > y) {
            return Err(ModuleError::BadInterval(format!("[{a:?},{b:?})")));
        }
        Ok(RectangleModule { a, b })
    }

    pub fn empty(dim: usize) -> Self {
        RectangleModule {
            a: vec![0.0; dim],
            b: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.iter().zip(&self.b).any(|(x, y)| x >= y)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        !self.is_empty() && p.iter().zip(&self.a).zip(&self.b).all(|((x, a), b)| a <= x && x < b)
    }

    pub fn pullback(&self, g: &MonotoneMap) -> Result<RectangleModule, ModuleError> {
        match g {
            MonotoneMap::VectorShift(s) if s.len() == self.dim() => Ok(RectangleModule {
                a: self.a.iter().zip(s).map(|(x, t)| x - t).collect(),
                b: self.b.iter().zip(s).map(|(x, t)| x - t).collect(),
            }),
            _ if self.dim() == 1 => Ok(IntervalModule {
                a: self.a[0],
                b: self.b[0],
            }
            .pullback(g)?
            .to_rectangle()),
            _ => Err(ModuleError::Unsupported),
        }
    }

    /// Whether a nonzero morphism `self => other` exists: both nonempty and
    /// `c <= a < d <= b` componentwise, for `self = [a,b)`, `other = [c,d)`.
    pub fn hom_exists(&self, other: &RectangleModule) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        (0..self.dim()).all(|i| other.a[i] <= self.a[i] && self.a[i] < other.b[i] && other.b[i] <= self.b[i])
    }

    /// Box intersection, canonicalised to [`RectangleModule::empty`] when empty.
    pub fn intersect(&self, other: &RectangleModule) -> RectangleModule {
        let r = RectangleModule {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x.max(*y)).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| x.min(*y)).collect(),
        };
        if r.is_empty() {
            RectangleModule::empty(self.dim())
        } else {
            r
        }
    }

    /// Set inclusion of supports.
    pub fn subset_of(&self, other: &RectangleModule) -> bool {
        self.is_empty()
            || (!other.is_empty()
                && (0..self.dim()).all(|i| other.a[i] <= self.a[i] && self.b[i] <= other.b[i]))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Vec<RectangleModule>, ModuleError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(reader);
        let mut out = Vec::new();
        for rec in rdr.deserialize::<Vec<f64>>() {
            let v = rec?;
            if v.len() % 2 != 0 {
                return Err(ModuleError::ShapeMismatch("odd number of coordinates".into()));
            }
            let n = v.len() / 2;
            out.push(RectangleModule::new(v[..n].to_vec(), v[n..].to_vec())?);
        }
        Ok(out)
    }

    pub fn write_csv<W: Write>(rects: &[RectangleModule], writer: W) -> Result<(), ModuleError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for r in rects {
            let row: Vec<f64> = r.a.iter().chain(&r.b).copied().collect();
            w.serialize(row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
}

/// A multiset of bars `[birth, death)`, with `death` possibly `+inf`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    pub bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(pairs: &[(f64, f64)]) -> Result<Self, ModuleError> {
        let mut bars = Vec::with_capacity(pairs.len());
        for &(birth, death) in pairs {
            if birth.is_nan() || death.is_nan() || death < birth || birth.is_infinite() {
                return Err(ModuleError::BadInterval(format!("[{birth},{death})")));
            }
            bars.push(Bar { birth, death });
        }
        Ok(Barcode { bars })
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Bars sorted by `(birth, death)`, for multiset comparison.
    pub fn sorted(&self) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self.bars.iter().map(|b| (b.birth, b.death)).collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        v
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, ModuleError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let bars: Vec<Bar> = rdr.deserialize().collect::<Result<_, _>>()?;
        let pairs: Vec<(f64, f64)> = bars.iter().map(|b| (b.birth, b.death)).collect();
        Barcode::new(&pairs)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ModuleError> {
        let mut w = csv::Writer::from_writer(writer);
        for b in &self.bars {
            w.serialize(b)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_interval(n: usize, lo: usize, hi: usize) -> FiniteModule {
        let support: Vec<bool> = (0..n).map(|p| lo <= p && p < hi).collect();
        FiniteModule::indicator(FinitePoset::chain(n), &support).unwrap()
    }

    /// Every tuple of component matrices, for brute-force comparison.
    fn all_component_tuples(source: &FiniteModule, target: &FiniteModule) -> Vec<ModuleMorphism> {
        let coords = MorphismCoords::new(source, target);
        let total = coords.total();
        assert!(total <= 16);
        (0..(1u32 << total))
            .map(|mask| {
                let mut v = BitVec::zeros(total);
                for i in 0..total {
                    v.set(i, mask >> i & 1 == 1);
                }
                coords.to_morphism(&v)
            })
            .collect()
    }

    fn brute_force_dimension(source: &FiniteModule, target: &FiniteModule) -> usize {
        let count = all_component_tuples(source, target)
            .iter()
            .filter(|phi| is_morphism(source, target, phi).unwrap())
            .count();
        count.trailing_zeros() as usize
    }

    #[test]
    fn pullback_of_intervals() {
        let m = IntervalModule::new(1.0, 3.0).unwrap();
        assert_eq!(m.pullback(&MonotoneMap::Shift(1.0)).unwrap(), IntervalModule::new(0.0, 2.0).unwrap());
        assert_eq!(m.pullback(&MonotoneMap::Shift(0.0)).unwrap(), m);
        let m = IntervalModule::new(1.0, 4.0).unwrap();
        assert_eq!(m.pullback(&MonotoneMap::Scale(2.0)).unwrap(), IntervalModule::new(0.5, 2.0).unwrap());
    }

    #[test]
    fn pullback_matches_pointwise_evaluation() {
        // gM(p) != 0 iff g(p) in [1,4) for g(p) = 2p, sampled on a fine grid.
        let m = IntervalModule::new(1.0, 4.0).unwrap();
        let pulled = m.pullback(&MonotoneMap::Scale(2.0)).unwrap();
        for k in 0..400 {
            let p = k as f64 / 64.0;
            assert_eq!(pulled.contains(p), m.contains(2.0 * p), "p = {p}");
        }
        let pulled = m.pullback(&MonotoneMap::Shift(1.0)).unwrap();
        for k in -64..400 {
            let p = k as f64 / 64.0;
            assert_eq!(pulled.contains(p), m.contains(p + 1.0), "p = {p}");
        }
    }

    #[test]
    fn piecewise_linear_pullback_is_preimage() {
        let g = MonotoneMap::PiecewiseLinear(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 3.0)]);
        let m = IntervalModule::new(1.0, 2.5).unwrap();
        let pulled = m.pullback(&g).unwrap();
        assert_eq!(pulled, IntervalModule::new(0.5, 2.0).unwrap());
    }

    #[test]
    fn finite_pullback_is_pointwise() {
        let m = chain_interval(5, 1, 3);
        let g = vec![1, 2, 3, 4, 4];
        let gm = m.pullback(&g).unwrap();
        for p in 0..5 {
            assert_eq!(gm.dim(p), m.dim(g[p]));
        }
        assert_eq!(gm.dims(), &[1, 1, 0, 0, 0]);
        assert!(m.pullback(&[1, 0, 2, 3, 4]).is_err());
    }

    #[test]
    fn pullback_composes_contravariantly() {
        let m = chain_interval(5, 1, 4);
        let g = vec![1, 2, 3, 4, 4];
        let h = vec![0, 2, 2, 4, 4];
        // gM = M . g, so pulling gM back along h gives M . g . h.
        let gh: Vec<usize> = (0..5).map(|p| g[h[p]]).collect();
        let hg: Vec<usize> = (0..5).map(|p| h[g[p]]).collect();
        assert_eq!(m.pullback(&g).unwrap().pullback(&h).unwrap(), m.pullback(&gh).unwrap());
        assert_ne!(m.pullback(&g).unwrap().pullback(&h).unwrap(), m.pullback(&hg).unwrap());
    }

    #[test]
    fn shift_morphism_on_chain() {
        let m = chain_interval(4, 0, 2);
        let g = vec![1, 2, 3, 3];
        let eta = shift_morphism(&m, &g).unwrap();
        let gm = m.pullback(&g).unwrap();
        assert!(is_morphism(&m, &gm, &eta).unwrap());
        // Identity on the part of the support whose shift stays inside.
        assert!(eta.components[0].get(0, 0));
        assert_eq!(eta.components[1].rows(), 0);
        let id: Vec<usize> = (0..4).collect();
        assert_eq!(shift_morphism(&m, &id).unwrap(), ModuleMorphism::identity(&m));
        assert!(matches!(shift_morphism(&m, &[0, 0, 3, 3]), Err(ModuleError::NotATranslation(1))));
    }

    #[test]
    fn identity_and_zero_are_morphisms() {
        let m = chain_interval(3, 0, 3);
        let n = chain_interval(3, 1, 2);
        assert!(is_morphism(&m, &m, &ModuleMorphism::identity(&m)).unwrap());
        assert!(is_morphism(&m, &n, &ModuleMorphism::zero(&m, &n)).unwrap());
    }

    #[test]
    fn naturality_check_matches_square_by_square() {
        let m = chain_interval(3, 0, 3);
        let n = chain_interval(3, 0, 2);
        for phi in all_component_tuples(&m, &n) {
            let squares = (0..2).all(|p| {
                let q = p + 1;
                phi.components[q].mul(m.map(p, q)) == n.map(p, q).mul(&phi.components[p])
            });
            assert_eq!(is_morphism(&m, &n, &phi).unwrap(), squares);
        }
    }

    #[test]
    fn basis_sizes_match_brute_force() {
        let one = FiniteModule::indicator(FinitePoset::chain(1), &[true]).unwrap();
        assert_eq!(morphism_space_basis(&one, &one).len(), 1);
        let a = chain_interval(3, 0, 1);
        let c = chain_interval(3, 2, 3);
        assert_eq!(morphism_space_basis(&a, &c).len(), 0);
        assert_eq!(brute_force_dimension(&a, &c), 0);
        let full = chain_interval(3, 0, 3);
        assert_eq!(morphism_space_basis(&full, &full).len(), 1);
        assert_eq!(brute_force_dimension(&full, &full), 1);
    }

    #[test]
    fn rectangle_morphism_criterion_matches_grid_brute_force() {
        // Boxes with integer corners on a 5x5 grid; [a,b) with a < b componentwise.
        let grid = FinitePoset::grid(5, 5);
        let mut boxes = Vec::new();
        for a0 in 0..4 {
            for b0 in (a0 + 1)..5 {
                for a1 in [0, 2] {
                    for b1 in [3, 4] {
                        boxes.push(([a0, a1], [b0, b1]));
                    }
                }
            }
        }
        let module_of = |(a, b): &([usize; 2], [usize; 2])| {
            let support: Vec<bool> = (0..25).map(|p| {
                let (x, y) = (p / 5, p % 5);
                a[0] <= x && x < b[0] && a[1] <= y && y < b[1]
            }).collect();
            FiniteModule::indicator(grid.clone(), &support).unwrap()
        };
        let rect_of = |(a, b): &([usize; 2], [usize; 2])| {
            RectangleModule::new(a.iter().map(|&v| v as f64).collect(), b.iter().map(|&v| v as f64).collect()).unwrap()
        };
        for x in &boxes {
            for y in &boxes {
                let dim = morphism_space_basis(&module_of(x), &module_of(y)).len();
                assert!(dim <= 1);
                assert_eq!(rect_of(x).hom_exists(&rect_of(y)), dim == 1, "{x:?} -> {y:?}");
            }
        }
    }

    #[test]
    fn module_text_round_trip() {
        let text = "POSET 3\n0 <= 1\n1 <= 2\nDIMS 1 2 1\nMAP 0 1\n1\n1\nMAP 1 2\n1 1\n";
        let m = FiniteModule::parse(text).unwrap();
        assert_eq!(m.dims(), &[1, 2, 1]);
        // (1 1) * (1;1) = 0 over F2
        assert!(m.map(0, 2).is_zero());
        let bad = "POSET 2\n0 <= 1\nDIMS 1 1\nMAP 0 1\n1 0\n";
        assert!(matches!(FiniteModule::parse(bad), Err(ModuleError::Parse { .. })));
    }

    #[test]
    fn non_functorial_diamond_is_rejected() {
        // 0 <= 1, 0 <= 2, 1 <= 3, 2 <= 3 with paths disagreeing.
        let poset = FinitePoset::from_relations(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let one = Matrix::identity(1);
        let zero = Matrix::zeros(1, 1);
        let maps = HashMap::from([((0, 1), one.clone()), ((0, 2), one.clone()), ((1, 3), one.clone()), ((2, 3), zero)]);
        assert!(matches!(
            FiniteModule::from_covers(poset, vec![1, 1, 1, 1], &maps),
            Err(ModuleError::NotFunctorial(_))
        ));
    }

    #[test]
    fn barcode_csv_round_trip() {
        let b = Barcode::new(&[(0.0, 1.5), (0.25, f64::INFINITY)]).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("birth,death\n"));
        assert_eq!(Barcode::read_csv(&buf[..]).unwrap(), b);
        assert!(Barcode::new(&[(2.0, 1.0)]).is_err());
    }

    #[test]
    fn rectangle_csv_round_trip() {
        let rs = vec![
            RectangleModule::new(vec![0.0, 0.0], vec![2.0, 2.0]).unwrap(),
            RectangleModule::new(vec![1.0, 1.0], vec![3.0, 3.0]).unwrap(),
        ];
        let mut buf = Vec::new();
        RectangleModule::write_csv(&rs, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0.0,0.0,2.0,2.0\n1.0,1.0,3.0,3.0\n");
        assert_eq!(RectangleModule::read_csv(&buf[..]).unwrap(), rs);
    }
}
