//! Finite prosets, the parametric posets R, R>=0 and R^n, monotone maps and
//! monoid actions on them.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::weight::{AuditReport, Weight, DEFAULT_TOL};

#[derive(Debug, Error, PartialEq)]
pub enum PosetError {
    #[error("point {0} is outside the poset")]
    DomainMismatch(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no closed form for this map family on an infinite poset")]
    Undecidable,
}

/// A finite preordered set on points `0..n`, stored as its full relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Reflexive-transitive closure of the given relation pairs `(i, j)` meaning `i <= j`.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(PosetError::DomainMismatch(format!("{i}<={j}")));
            }
            leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(FinitePoset { leq })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinitePoset { leq }
    }

    /// The product order on `{0..w-1} x {0..h-1}`; point `(x, y)` has id `x * h + y`.
    pub fn grid(w: usize, h: usize) -> Self {
        let n = w * h;
        let leq = (0..n)
            .map(|p| (0..n).map(|q| p / h <= q / h && p % h <= q % h).collect())
            .collect();
        FinitePoset { leq }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p][q]
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.len()
    }

    /// All pairs `(p, q)` with `p <= q`, including `p == q`.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if self.leq[p][q] {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Strict relations `p < q` with nothing strictly in between.
    /// For genuine preorders, mutually comparable points are always listed.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let strict = |a: usize, b: usize| self.leq[a][b] && !self.leq[b][a];
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p == q || !self.leq[p][q] {
                    continue;
                }
                if self.leq[q][p] {
                    out.push((p, q));
                    continue;
                }
                if !(0..n).any(|r| strict(p, r) && strict(r, q)) {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Fewest cover steps from `p` up to `q`, or `None` if `p` is not below `q`.
    pub fn hop_distance(&self, p: usize, q: usize) -> Option<usize> {
        if !self.leq[p][q] {
            return None;
        }
        let covers = self.covers();
        let mut dist = vec![usize::MAX; self.len()];
        dist[p] = 0;
        let mut queue = VecDeque::from([p]);
        while let Some(x) = queue.pop_front() {
            if x == q {
                return Some(dist[x]);
            }
            for &(a, b) in &covers {
                if a == x && dist[b] == usize::MAX {
                    dist[b] = dist[x] + 1;
                    queue.push_back(b);
                }
            }
        }
        None
    }

    pub fn is_monotone(&self, map: &[usize]) -> bool {
        map.len() == self.len()
            && self
                .comparable_pairs()
                .iter()
                .all(|&(p, q)| self.leq[map[p]][map[q]])
    }

    pub fn is_translation(&self, map: &[usize]) -> bool {
        self.is_monotone(map) && (0..self.len()).all(|p| self.leq[p][map[p]])
    }

    /// Parses `POSET n` followed by one `i <= j` (or `i ≤ j`) relation per line.
    pub fn parse(text: &str) -> Result<Self, PosetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(PosetError::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let n = header
            .strip_prefix("POSET")
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or(PosetError::Parse {
                line,
                msg: "expected `POSET n`".into(),
            })?;
        let mut pairs = Vec::new();
        for (line, l) in lines {
            let norm = l.replace('≤', "<=");
            let (a, b) = norm.split_once("<=").ok_or(PosetError::Parse {
                line,
                msg: format!("expected `i <= j`, got `{l}`"),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|e| PosetError::Parse {
                    line,
                    msg: e.to_string(),
                })
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        Self::from_relations(n, &pairs)
    }
}

/// The tagged infinite posets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamPoset {
    RealLine,
    RealLineNonneg,
    ProductRn(usize),
}

impl ParamPoset {
    pub fn dim(self) -> usize {
        match self {
            ParamPoset::RealLine | ParamPoset::RealLineNonneg => 1,
            ParamPoset::ProductRn(n) => n,
        }
    }

    pub fn contains(self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && match self {
                ParamPoset::RealLineNonneg => p[0] >= 0.0,
                _ => true,
            }
    }

    /// Componentwise order.
    pub fn leq(self, p: &[f64], q: &[f64]) -> bool {
        p.iter().zip(q).all(|(a, b)| a <= b)
    }
}

/// A point of either kind of poset.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Finite(usize),
    Real(Vec<f64>),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(p) => write!(f, "{p}"),
            Point::Real(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Finite(FinitePoset),
    Param(ParamPoset),
}

impl Domain {
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Domain::Finite(poset), Point::Finite(i)) => poset.contains(*i),
            (Domain::Param(kind), Point::Real(v)) => kind.contains(v),
            _ => false,
        }
    }

    /// `p <= q` up to `tol` on real coordinates.
    pub fn leq(&self, p: &Point, q: &Point, tol: f64) -> bool {
        match (self, p, q) {
            (Domain::Finite(poset), Point::Finite(a), Point::Finite(b)) => poset.leq(*a, *b),
            (Domain::Param(_), Point::Real(a), Point::Real(b)) => {
                a.iter().zip(b).all(|(x, y)| *x <= *y + tol)
            }
            _ => false,
        }
    }

    fn check(&self, p: &Point) -> Result<(), PosetError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(PosetError::DomainMismatch(p.to_string()))
        }
    }
}

/// Monotone self-maps, as finite tables or tagged closed forms.
#[derive(Clone, Debug, PartialEq)]
pub enum MonotoneMap {
    Table(Vec<usize>),
    /// `p -> p + t` on the real line.
    Shift(f64),
    /// `p -> c p` on the nonnegative reals, `c > 0`.
    Scale(f64),
    /// `r -> r + v` on R^n.
    VectorShift(Vec<f64>),
    /// Linear interpolation through sorted knots, extended by the end slopes.
    PiecewiseLinear(Vec<(f64, f64)>),
}

impl MonotoneMap {
    pub fn identity_table(n: usize) -> Self {
        MonotoneMap::Table((0..n).collect())
    }

    pub fn apply(&self, p: &Point) -> Result<Point, PosetError> {
        let bad = || PosetError::DomainMismatch(p.to_string());
        Ok(match (self, p) {
            (MonotoneMap::Table(t), Point::Finite(i)) => Point::Finite(*t.get(*i).ok_or_else(bad)?),
            (MonotoneMap::Shift(t), Point::Real(v)) if v.len() == 1 => Point::Real(vec![v[0] + t]),
            (MonotoneMap::Scale(c), Point::Real(v)) if v.len() == 1 => Point::Real(vec![v[0] * c]),
            (MonotoneMap::VectorShift(s), Point::Real(v)) if v.len() == s.len() => {
                Point::Real(v.iter().zip(s).map(|(a, b)| a + b).collect())
            }
            (MonotoneMap::PiecewiseLinear(knots), Point::Real(v)) if v.len() == 1 => {
                Point::Real(vec![pl_eval(knots, v[0])])
            }
            _ => return Err(bad()),
        })
    }
}

fn pl_eval(knots: &[(f64, f64)], x: f64) -> f64 {
    match knots.len() {
        0 => x,
        1 => x - knots[0].0 + knots[0].1,
        _ => {
            let k = knots
                .windows(2)
                .position(|w| x < w[1].0)
                .unwrap_or(knots.len() - 2);
            let (x0, y0) = knots[k];
            let (x1, y1) = knots[k + 1];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }
}

/// Lists the sampled pairs `p <= q` whose images are not ordered.
pub fn verify_monotone(
    map: &MonotoneMap,
    domain: &Domain,
    pairs: &[(Point, Point)],
) -> Result<AuditReport, PosetError> {
    let mut report = AuditReport::new();
    for (p, q) in pairs {
        domain.check(p)?;
        domain.check(q)?;
        if !domain.leq(p, q, 0.0) {
            continue;
        }
        let (gp, gq) = (map.apply(p)?, map.apply(q)?);
        if !domain.leq(&gp, &gq, DEFAULT_TOL) {
            report.push("MONOTONE", format!("{p}<={q}"), &gp, &gq);
        }
    }
    Ok(report)
}

/// A monoid acting on a poset by monotone maps, with a monoidal weight.
/// `mul(h, g)` acts as `act(h) . act(g)`.
pub trait MonoidAction {
    type Elem: Clone + fmt::Debug;

    fn domain(&self) -> Domain;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, h: &Self::Elem, g: &Self::Elem) -> Self::Elem;
    fn act(&self, g: &Self::Elem) -> MonotoneMap;
    fn weight(&self, g: &Self::Elem) -> Weight;

    /// Whether `g(p) <= h(p)` for all `p`; closed form where available.
    fn two_morphism_exists(
        &self,
        g: &Self::Elem,
        h: &Self::Elem,
        sample: &[Point],
    ) -> Result<bool, PosetError> {
        if sample.is_empty() {
            return Err(PosetError::Undecidable);
        }
        let domain = self.domain();
        let (mg, mh) = (self.act(g), self.act(h));
        for p in sample {
            if !domain.leq(&mg.apply(p)?, &mh.apply(p)?, DEFAULT_TOL) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Checks `e(p) = p` and `h(g(p)) = (hg)(p)` on the sample grid.
pub fn verify_action<A: MonoidAction>(
    action: &A,
    elements: &[A::Elem],
    points: &[Point],
) -> Result<AuditReport, PosetError> {
    let domain = action.domain();
    let same = |a: &Point, b: &Point| domain.leq(a, b, DEFAULT_TOL) && domain.leq(b, a, DEFAULT_TOL);
    let mut report = AuditReport::new();
    let e = action.act(&action.identity());
    for p in points {
        domain.check(p)?;
        let ep = e.apply(p)?;
        if !same(&ep, p) {
            report.push("IDENTITY", p.to_string(), &ep, p);
        }
    }
    for g in elements {
        for h in elements {
            let (mg, mh, mhg) = (action.act(g), action.act(h), action.act(&action.mul(h, g)));
            for p in points {
                let lhs = mh.apply(&mg.apply(p)?)?;
                let rhs = mhg.apply(p)?;
                if !same(&lhs, &rhs) {
                    report.push("COMPATIBLE", format!("{h:?}.{g:?}@{p}"), &lhs, &rhs);
                }
            }
        }
    }
    Ok(report)
}

/// `(R>=0, +)` acting on R by translation, weighted by `t`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlowAction;

impl MonoidAction for FlowAction {
    type Elem = f64;

    fn domain(&self) -> Domain {
        Domain::Param(ParamPoset::RealLine)
    }
    fn identity(&self) -> f64 {
        0.0
    }
    fn mul(&self, h: &f64, g: &f64) -> f64 {
        h + g
    }
    fn act(&self, g: &f64) -> MonotoneMap {
        MonotoneMap::Shift(*g)
    }
    fn weight(&self, g: &f64) -> Weight {
        Weight::of(g.abs())
    }
    fn two_morphism_exists(&self, g: &f64, h: &f64, _: &[Point]) -> Result<bool, PosetError> {
        Ok(g <= h)
    }
}

/// `(R>0, *)` acting on R>=0 by scaling, weighted by `|log c|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MultiplicativeAction;

impl MonoidAction for MultiplicativeAction {
    type Elem = f64;

    fn domain(&self) -> Domain {
        Domain::Param(ParamPoset::RealLineNonneg)
    }
    fn identity(&self) -> f64 {
        1.0
    }
    fn mul(&self, h: &f64, g: &f64) -> f64 {
        h * g
    }
    fn act(&self, g: &f64) -> MonotoneMap {
        MonotoneMap::Scale(*g)
    }
    fn weight(&self, g: &f64) -> Weight {
        Weight::of(g.ln().abs())
    }
    fn two_morphism_exists(&self, g: &f64, h: &f64, _: &[Point]) -> Result<bool, PosetError> {
        Ok(g <= h)
    }
}

/// `(R^n>=0, +)` acting on R^n by translation, weighted by the `p`-norm.
#[derive(Clone, Copy, Debug)]
pub struct VectorShiftAction {
    pub dim: usize,
    pub p_norm: f64,
}

pub fn p_norm(v: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else {
        v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

impl MonoidAction for VectorShiftAction {
    type Elem = Vec<f64>;

    fn domain(&self) -> Domain {
        Domain::Param(ParamPoset::ProductRn(self.dim))
    }
    fn identity(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }
    fn mul(&self, h: &Vec<f64>, g: &Vec<f64>) -> Vec<f64> {
        h.iter().zip(g).map(|(a, b)| a + b).collect()
    }
    fn act(&self, g: &Vec<f64>) -> MonotoneMap {
        MonotoneMap::VectorShift(g.clone())
    }
    fn weight(&self, g: &Vec<f64>) -> Weight {
        Weight::of(p_norm(g, self.p_norm))
    }
    fn two_morphism_exists(&self, g: &Vec<f64>, h: &Vec<f64>, _: &[Point]) -> Result<bool, PosetError> {
        Ok(g.iter().zip(h).all(|(a, b)| a <= b))
    }
}

/// A finite monoid of monotone maps on a finite poset, closed under composition.
/// Elements are indices into `maps`.
#[derive(Clone, Debug)]
pub struct FiniteAction {
    pub poset: FinitePoset,
    pub maps: Vec<Vec<usize>>,
    pub weights: Vec<Weight>,
    identity: usize,
}

impl FiniteAction {
    /// Closes `generators` (with their weights) under composition. Composite
    /// weights are the least sum of generator weights reaching them.
    pub fn generated(poset: FinitePoset, generators: &[(Vec<usize>, Weight)]) -> Self {
        let n = poset.len();
        let id: Vec<usize> = (0..n).collect();
        let mut maps = vec![id];
        let mut weights = vec![Weight::ZERO];
        // Dijkstra over the Cayley graph of the generated monoid.
        let mut settled = vec![false];
        loop {
            let next = (0..maps.len())
                .filter(|&i| !settled[i])
                .min_by(|&a, &b| weights[a].cmp(&weights[b]));
            let Some(cur) = next else { break };
            settled[cur] = true;
            for (gen, w) in generators {
                let composed: Vec<usize> = maps[cur].iter().map(|&p| gen[p]).collect();
                let cand = weights[cur] + *w;
                match maps.iter().position(|m| *m == composed) {
                    Some(k) => {
                        if cand < weights[k] {
                            weights[k] = cand;
                        }
                    }
                    None => {
                        maps.push(composed);
                        weights.push(cand);
                        settled.push(false);
                    }
                }
            }
        }
        FiniteAction {
            poset,
            maps,
            weights,
            identity: 0,
        }
    }

    /// An explicit element list; `maps` must contain the identity and be closed
    /// under composition.
    pub fn from_tables(poset: FinitePoset, maps: Vec<Vec<usize>>, weights: Vec<Weight>) -> Option<Self> {
        let id: Vec<usize> = (0..poset.len()).collect();
        let identity = maps.iter().position(|m| *m == id)?;
        let closed = maps.iter().all(|h| {
            maps.iter()
                .all(|g| maps.contains(&g.iter().map(|&p| h[p]).collect::<Vec<_>>()))
        });
        closed.then_some(FiniteAction {
            poset,
            maps,
            weights,
            identity,
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| m == map)
    }
}

impl MonoidAction for FiniteAction {
    type Elem = usize;

    fn domain(&self) -> Domain {
        Domain::Finite(self.poset.clone())
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, h: &usize, g: &usize) -> usize {
        let composed: Vec<usize> = self.maps[*g].iter().map(|&p| self.maps[*h][p]).collect();
        self.index_of(&composed).expect("finite action is closed under composition")
    }
    fn act(&self, g: &usize) -> MonotoneMap {
        MonotoneMap::Table(self.maps[*g].clone())
    }
    fn weight(&self, g: &usize) -> Weight {
        self.weights[*g]
    }
    fn two_morphism_exists(&self, g: &usize, h: &usize, _: &[Point]) -> Result<bool, PosetError> {
        let (mg, mh) = (&self.maps[*g], &self.maps[*h]);
        Ok((0..self.poset.len()).all(|p| self.poset.leq(mg[p], mh[p])))
    }
}

/// Every translation (monotone, inflationary map) of a small finite poset.
pub fn all_translations(poset: &FinitePoset) -> Vec<Vec<usize>> {
    let n = poset.len();
    let mut out = Vec::new();
    let mut current = vec![0; n];
    fn rec(p: usize, poset: &FinitePoset, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = poset.len();
        if p == n {
            if poset.is_monotone(current) {
                out.push(current.clone());
            }
            return;
        }
        for q in 0..n {
            if !poset.leq(p, q) {
                continue;
            }
            // Prune against already-assigned points.
            let ok = (0..p).all(|r| {
                (!poset.leq(r, p) || poset.leq(current[r], q)) && (!poset.leq(p, r) || poset.leq(q, current[r]))
            });
            if ok {
                current[p] = q;
                rec(p + 1, poset, current, out);
            }
        }
    }
    rec(0, poset, &mut current, &mut out);
    out
}

/// The sublinear projection `max_p hops(p, g(p))` of a translation.
pub fn hop_projection(poset: &FinitePoset, g: &[usize]) -> Weight {
    (0..poset.len())
        .map(|p| match poset.hop_distance(p, g[p]) {
            Some(h) => Weight::of(h as f64),
            None => Weight::INFINITY,
        })
        .max()
        .unwrap_or(Weight::ZERO)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reals(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|x| Point::Real(vec![*x])).collect()
    }

    fn pairs(pts: &[Point]) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for p in pts {
            for q in pts {
                out.push((p.clone(), q.clone()));
            }
        }
        out
    }

    #[test]
    fn closure_and_parse() {
        let p = FinitePoset::parse("POSET 4\n0 <= 1\n1 ≤ 2\n# comment\n0 <= 3\n").unwrap();
        assert!(p.leq(0, 2));
        assert!(p.leq(3, 3));
        assert!(!p.leq(2, 3));
        assert_eq!(p.covers(), vec![(0, 1), (0, 3), (1, 2)]);
        assert!(matches!(FinitePoset::parse("POSET x"), Err(PosetError::Parse { .. })));
        assert!(matches!(
            FinitePoset::parse("POSET 2\n0 <= 5"),
            Err(PosetError::DomainMismatch(_))
        ));
    }

    #[test]
    fn preorder_cycle_is_allowed() {
        let p = FinitePoset::from_relations(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert!(p.leq(1, 0) && p.leq(0, 2));
        assert!(p.covers().contains(&(0, 1)) && p.covers().contains(&(1, 0)));
    }

    #[test]
    fn grid_order_is_product() {
        let g = FinitePoset::grid(3, 2);
        // (1,0) = 2, (2,1) = 5, (0,1) = 1
        assert!(g.leq(2, 5));
        assert!(!g.leq(2, 1));
        assert_eq!(g.hop_distance(0, 5), Some(3));
    }

    #[test]
    fn shift_and_scale_are_monotone() {
        let pts = reals(&[-2.0, 0.0, 0.5, 3.0]);
        let r = verify_monotone(&MonotoneMap::Shift(2.0), &Domain::Param(ParamPoset::RealLine), &pairs(&pts)).unwrap();
        assert!(r.is_empty());
        let pts = reals(&[0.0, 0.5, 3.0]);
        let r = verify_monotone(&MonotoneMap::Scale(2.0), &Domain::Param(ParamPoset::RealLineNonneg), &pairs(&pts)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn swap_is_not_monotone() {
        let dom = Domain::Finite(FinitePoset::chain(2));
        let r = verify_monotone(
            &MonotoneMap::Table(vec![1, 0]),
            &dom,
            &[(Point::Finite(0), Point::Finite(1))],
        )
        .unwrap();
        assert_eq!(r.count("MONOTONE"), 1);
        let err = verify_monotone(&MonotoneMap::Table(vec![1, 0]), &dom, &[(Point::Finite(0), Point::Finite(7))]);
        assert!(matches!(err, Err(PosetError::DomainMismatch(_))));
    }

    #[test]
    fn piecewise_linear_evaluation() {
        let m = MonotoneMap::PiecewiseLinear(vec![(0.0, 0.0), (1.0, 2.0), (3.0, 3.0)]);
        let at = |x: f64| match m.apply(&Point::Real(vec![x])).unwrap() {
            Point::Real(v) => v[0],
            _ => unreachable!(),
        };
        assert_eq!(at(0.5), 1.0);
        assert_eq!(at(2.0), 2.5);
        assert_eq!(at(5.0), 4.0);
        assert_eq!(at(-1.0), -2.0);
    }

    #[test]
    fn parametric_actions_are_actions() {
        let pts = reals(&[-1.0, 0.0, 2.5]);
        assert!(verify_action(&FlowAction, &[0.0, 1.0, 2.5], &pts).unwrap().is_empty());
        let pts = reals(&[0.0, 1.0, 2.5]);
        assert!(verify_action(&MultiplicativeAction, &[0.5, 1.0, 2.0], &pts).unwrap().is_empty());
        let a = VectorShiftAction { dim: 2, p_norm: 2.0 };
        let pts = vec![Point::Real(vec![0.0, 1.0]), Point::Real(vec![-1.0, 3.0])];
        assert!(verify_action(&a, &[vec![0.0, 0.0], vec![1.0, 0.5]], &pts).unwrap().is_empty());
    }

    #[test]
    fn broken_action_is_reported() {
        // A "monoid" whose product ignores composition.
        struct Broken;
        impl MonoidAction for Broken {
            type Elem = f64;
            fn domain(&self) -> Domain {
                Domain::Param(ParamPoset::RealLine)
            }
            fn identity(&self) -> f64 {
                0.0
            }
            fn mul(&self, h: &f64, g: &f64) -> f64 {
                h.max(*g)
            }
            fn act(&self, g: &f64) -> MonotoneMap {
                MonotoneMap::Shift(*g)
            }
            fn weight(&self, g: &f64) -> Weight {
                Weight::of(*g)
            }
        }
        let r = verify_action(&Broken, &[1.0], &reals(&[0.0])).unwrap();
        assert_eq!(r.count("COMPATIBLE"), 1);
    }

    #[test]
    fn two_morphisms_closed_form() {
        assert!(FlowAction.two_morphism_exists(&1.0, &2.0, &[]).unwrap());
        assert!(!MultiplicativeAction.two_morphism_exists(&2.0, &0.5, &[]).unwrap());
        assert!(FlowAction.two_morphism_exists(&0.0, &0.3, &[]).unwrap());
    }

    #[test]
    fn two_morphism_by_sampling_needs_sample() {
        struct Plain;
        impl MonoidAction for Plain {
            type Elem = f64;
            fn domain(&self) -> Domain {
                Domain::Param(ParamPoset::RealLine)
            }
            fn identity(&self) -> f64 {
                0.0
            }
            fn mul(&self, h: &f64, g: &f64) -> f64 {
                h + g
            }
            fn act(&self, g: &f64) -> MonotoneMap {
                MonotoneMap::Shift(*g)
            }
            fn weight(&self, g: &f64) -> Weight {
                Weight::of(g.abs())
            }
        }
        assert_eq!(Plain.two_morphism_exists(&0.0, &1.0, &[]), Err(PosetError::Undecidable));
        assert!(Plain.two_morphism_exists(&0.0, &1.0, &reals(&[0.0, 5.0])).unwrap());
    }

    #[test]
    fn translations_of_a_chain() {
        let chain = FinitePoset::chain(3);
        let ts = all_translations(&chain);
        // Monotone inflationary maps on a 3-chain: 5 of them.
        assert_eq!(ts.len(), 5);
        for t in &ts {
            assert!(chain.is_translation(t));
        }
        let action = FiniteAction::from_tables(
            chain.clone(),
            ts.clone(),
            ts.iter().map(|t| hop_projection(&chain, t)).collect(),
        )
        .unwrap();
        let elems: Vec<usize> = (0..action.len()).collect();
        let pts: Vec<Point> = (0..3).map(Point::Finite).collect();
        assert!(verify_action(&action, &elems, &pts).unwrap().is_empty());
        assert_eq!(hop_projection(&chain, &[2, 2, 2]), Weight::of(2.0));
    }

    #[test]
    fn generated_monoid_weights_are_shortest_words() {
        let chain = FinitePoset::chain(4);
        let step = vec![1, 2, 3, 3];
        let a = FiniteAction::generated(chain, &[(step, Weight::of(1.0))]);
        assert_eq!(a.len(), 4);
        let top = a.index_of(&[3, 3, 3, 3]).unwrap();
        assert_eq!(a.weight(&top), Weight::of(3.0));
    }
}
