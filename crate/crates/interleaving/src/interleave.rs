//! Interleavings of persistence modules under monoid actions: exact search on
//! finite F2 modules, closed forms and bisection for interval and rectangle
//! modules.

use serde::Serialize;
use thiserror::Error;

use crate::f2::{solve, BitVec, Matrix};
use crate::pmod::{
    is_morphism, morphism_space_vectors, FiniteModule, IntervalModule, ModuleError, ModuleMorphism,
    MorphismCoords, RectangleModule,
};
use crate::poset::p_norm;
use crate::weight::Weight;

/// Largest morphism-space dimension enumerated exhaustively.
pub const ENUMERATION_LIMIT: usize = 20;
/// Bisection gives up once the probe exceeds `seed * CAP_FACTOR`.
pub const CAP_FACTOR: f64 = (1u64 << 20) as f64;

#[derive(Debug, Error)]
pub enum InterleaveError {
    #[error("no 2-morphism for {}", missing.join(" and "))]
    PreconditionFailed { missing: Vec<&'static str> },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("action not supported for these modules: {0}")]
    UnsupportedAction(String),
}

/// Witness data attached to a distance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Symbolic modules: the two maps by their per-coordinate affine form and
    /// whether each morphism is zero or the canonical one.
    Affine {
        g: AffineMap,
        h: AffineMap,
        phi: SymbolicMorphism,
        psi: SymbolicMorphism,
    },
    /// Finite modules: the two translations as tables.
    Finite { g: Vec<usize>, h: Vec<usize> },
    /// Weighted 2-categories: ids of the 1- and 2-morphisms.
    TwoCat { g: usize, h: usize, alpha: usize, beta: usize },
}

/// A distance with its bracket `lower <= value <= upper`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: Weight,
    pub lower: Weight,
    pub upper: Weight,
    pub family: String,
    /// Set when the search stopped at its cap without finding an interleaving.
    pub cap_hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl DistanceResult {
    pub fn exact(value: Weight, family: &str, certificate: Option<Certificate>) -> Self {
        DistanceResult {
            value,
            lower: value,
            upper: value,
            family: family.to_string(),
            cap_hit: false,
            certificate,
        }
    }
}

/// An interleaving of finite modules: `phi: M => gN`, `psi: N => hM`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterleavingCertificate {
    pub g: Vec<usize>,
    pub h: Vec<usize>,
    pub phi: ModuleMorphism,
    pub psi: ModuleMorphism,
    pub alpha_exists: bool,
    pub beta_exists: bool,
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq)]
pub enum Search {
    Found(Box<InterleavingCertificate>),
    NotFound,
    Inconclusive,
}

fn compose(h: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&p| h[p]).collect()
}

fn require_two_morphisms(
    m: &FiniteModule,
    g: &[usize],
    h: &[usize],
) -> Result<(Vec<usize>, Vec<usize>), InterleaveError> {
    let poset = m.poset();
    let hg = compose(h, g);
    let gh = compose(g, h);
    let mut missing = Vec::new();
    if !(0..poset.len()).all(|p| poset.leq(p, hg[p])) {
        missing.push("alpha: 1 => hg");
    }
    if !(0..poset.len()).all(|p| poset.leq(p, gh[p])) {
        missing.push("beta: 1 => gh");
    }
    if missing.is_empty() {
        Ok((hg, gh))
    } else {
        Err(InterleaveError::PreconditionFailed { missing })
    }
}

/// Whether `(phi, psi)` is a `(g, h)`-interleaving of `M` and `N`:
/// `psi_{g(p)} phi_p = M(p <= hg(p))` and `phi_{h(q)} psi_q = N(q <= gh(q))`.
pub fn check_interleaving(
    m: &FiniteModule,
    n: &FiniteModule,
    g: &[usize],
    h: &[usize],
    phi: &ModuleMorphism,
    psi: &ModuleMorphism,
) -> Result<bool, InterleaveError> {
    let (hg, gh) = require_two_morphisms(m, g, h)?;
    let gn = n.pullback(g)?;
    let hm = m.pullback(h)?;
    if !is_morphism(m, &gn, phi)? || !is_morphism(n, &hm, psi)? {
        return Ok(false);
    }
    let size = m.poset().len();
    let left = (0..size).all(|p| psi.components[g[p]].mul(&phi.components[p]) == *m.map(p, hg[p]));
    let right = (0..size).all(|q| phi.components[h[q]].mul(&psi.components[q]) == *n.map(q, gh[q]));
    Ok(left && right)
}

/// Searches for a `(g, h)`-interleaving of finite modules by enumerating the
/// smaller morphism space and solving a linear system for the other map.
pub fn exists_interleaving(
    m: &FiniteModule,
    n: &FiniteModule,
    g: &[usize],
    h: &[usize],
) -> Result<Search, InterleaveError> {
    let (hg, gh) = require_two_morphisms(m, g, h)?;
    let gn = n.pullback(g)?;
    let hm = m.pullback(h)?;
    let phi_coords = MorphismCoords::new(m, &gn);
    let psi_coords = MorphismCoords::new(n, &hm);
    let phi_basis = morphism_space_vectors(m, &gn, &phi_coords);
    let psi_basis = morphism_space_vectors(n, &hm, &psi_coords);
    let phi_basis: Vec<ModuleMorphism> = phi_basis.iter().map(|v| phi_coords.to_morphism(v)).collect();
    let psi_basis: Vec<ModuleMorphism> = psi_basis.iter().map(|v| psi_coords.to_morphism(v)).collect();

    // Enumerating phi: psi_{g(p)} phi_p = M(p<=hg p), phi_{h(q)} psi_q = N(q<=gh q).
    let enumerate_phi = phi_basis.len() <= psi_basis.len();
    let (small, large) = if enumerate_phi {
        (&phi_basis, &psi_basis)
    } else {
        (&psi_basis, &phi_basis)
    };
    if small.len() > ENUMERATION_LIMIT {
        return Ok(Search::Inconclusive);
    }
    let size = m.poset().len();
    for mask in 0u64..(1u64 << small.len()) {
        let fixed = span_element(small, mask, if enumerate_phi { (m, &gn) } else { (n, &hm) });
        // Unknown y over the large basis: the fixed map `f` and the unknown `u`
        // appear as u_{f-shift(p)} f_p = target_p and f_{u-shift(q)} u_q = target'_q.
        let (f_shift, u_shift, f_src, u_src) = if enumerate_phi {
            (g, h, m, n)
        } else {
            (h, g, n, m)
        };
        let (f_target, u_target) = if enumerate_phi { (&hg, &gh) } else { (&gh, &hg) };
        let mut equations: Vec<(BitVec, bool)> = Vec::new();
        let k = large.len();
        for p in 0..size {
            // sum_k y_k large_k[f_shift p] * fixed[p] = f_src(p <= f_target p)
            let target = f_src.map(p, f_target[p]);
            let products: Vec<Matrix> = large.iter().map(|b| b.components[f_shift[p]].mul(&fixed.components[p])).collect();
            push_entry_equations(&mut equations, &products, target, k);
        }
        for q in 0..size {
            // sum_k y_k fixed[u_shift q] * large_k[q] = u_src(q <= u_target q)
            let target = u_src.map(q, u_target[q]);
            let products: Vec<Matrix> = large.iter().map(|b| fixed.components[u_shift[q]].mul(&b.components[q])).collect();
            push_entry_equations(&mut equations, &products, target, k);
        }
        if let Some(y) = solve(&equations, k) {
            let other = combine(large, &y, if enumerate_phi { (n, &hm) } else { (m, &gn) });
            let (phi, psi) = if enumerate_phi { (fixed, other) } else { (other, fixed) };
            return Ok(Search::Found(Box::new(InterleavingCertificate {
                g: g.to_vec(),
                h: h.to_vec(),
                phi,
                psi,
                alpha_exists: true,
                beta_exists: true,
            })));
        }
    }
    Ok(Search::NotFound)
}

fn push_entry_equations(equations: &mut Vec<(BitVec, bool)>, products: &[Matrix], target: &Matrix, k: usize) {
    for i in 0..target.rows() {
        for j in 0..target.cols() {
            let mut row = BitVec::zeros(k);
            for (idx, prod) in products.iter().enumerate() {
                if prod.get(i, j) {
                    row.set(idx, true);
                }
            }
            equations.push((row, target.get(i, j)));
        }
    }
}

fn span_element(basis: &[ModuleMorphism], mask: u64, shape: (&FiniteModule, &FiniteModule)) -> ModuleMorphism {
    let mut acc = ModuleMorphism::zero(shape.0, shape.1);
    for (i, b) in basis.iter().enumerate() {
        if mask >> i & 1 == 1 {
            for (a, c) in acc.components.iter_mut().zip(&b.components) {
                *a = a.add(c);
            }
        }
    }
    acc
}

fn combine(basis: &[ModuleMorphism], y: &BitVec, shape: (&FiniteModule, &FiniteModule)) -> ModuleMorphism {
    let mask = y.ones().fold(0u64, |m, i| m | (1 << i));
    span_element(basis, mask, shape)
}

/// Minimises `max(omega(g), omega(h))` over pairs of translations admitting an
/// interleaving. `weights[i]` is the weight of `translations[i]`.
pub fn omega_interleaving_distance(
    m: &FiniteModule,
    n: &FiniteModule,
    translations: &[Vec<usize>],
    weights: &[Weight],
) -> Result<DistanceResult, InterleaveError> {
    let mut pairs: Vec<(Weight, usize, usize)> = Vec::new();
    for i in 0..translations.len() {
        for j in 0..translations.len() {
            pairs.push((weights[i].max(weights[j]), i, j));
        }
    }
    pairs.sort_by_key(|x| x.0);
    let mut lower: Option<Weight> = None;
    for (w, i, j) in pairs {
        let (g, h) = (&translations[i], &translations[j]);
        if !m.poset().is_translation(g) || !m.poset().is_translation(h) {
            return Err(ModuleError::NotATranslation(i.min(j)).into());
        }
        match exists_interleaving(m, n, g, h)? {
            Search::Found(_) => {
                return Ok(DistanceResult {
                    value: w,
                    lower: lower.unwrap_or(w),
                    upper: w,
                    family: "omega".into(),
                    cap_hit: false,
                    certificate: Some(Certificate::Finite {
                        g: g.clone(),
                        h: h.clone(),
                    }),
                });
            }
            Search::Inconclusive => {
                lower.get_or_insert(w);
            }
            Search::NotFound => {}
        }
    }
    Ok(DistanceResult {
        value: Weight::INFINITY,
        lower: lower.unwrap_or(Weight::INFINITY),
        upper: Weight::INFINITY,
        family: "omega".into(),
        cap_hit: false,
        certificate: None,
    })
}

/// Per-coordinate increasing affine map `p_i -> scale_i * p_i + offset_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineMap {
    pub scale: Vec<f64>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn shift(v: Vec<f64>) -> Self {
        AffineMap {
            scale: vec![1.0; v.len()],
            offset: v,
        }
    }

    pub fn uniform_shift(dim: usize, t: f64) -> Self {
        Self::shift(vec![t; dim])
    }

    pub fn uniform_scale(dim: usize, c: f64) -> Self {
        AffineMap {
            scale: vec![c; dim],
            offset: vec![0.0; dim],
        }
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        p.iter().zip(&self.scale).zip(&self.offset).map(|((x, l), m)| l * x + m).collect()
    }

    /// `self . other`.
    pub fn after(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            scale: self.scale.iter().zip(&other.scale).map(|(a, b)| a * b).collect(),
            offset: self
                .scale
                .iter()
                .zip(&other.offset)
                .zip(&self.offset)
                .map(|((l, m), k)| l * m + k)
                .collect(),
        }
    }

    /// Support preimage of a box.
    pub fn pullback(&self, r: &RectangleModule) -> RectangleModule {
        if r.is_empty() {
            return RectangleModule::empty(r.dim());
        }
        let back = |x: &[f64]| -> Vec<f64> {
            x.iter().zip(&self.scale).zip(&self.offset).map(|((v, l), m)| (v - m) / l).collect()
        };
        RectangleModule {
            a: back(&r.a),
            b: back(&r.b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolicMorphism {
    Zero,
    Canonical,
}

/// Decides whether rectangle modules `M`, `N` are `(g, h)`-interleaved, assuming
/// `p <= h(g(p))` and `q <= g(h(q))`. Hom spaces between boxes have dimension
/// at most one, so only the zero and canonical choices need checking.
pub fn rect_interleaved(
    m: &RectangleModule,
    n: &RectangleModule,
    g: &AffineMap,
    h: &AffineMap,
) -> Option<(SymbolicMorphism, SymbolicMorphism)> {
    let hg = h.after(g);
    let gh = g.after(h);
    let m_live = m.intersect(&hg.pullback(m));
    let n_live = n.intersect(&gh.pullback(n));
    if m_live.is_empty() && n_live.is_empty() {
        return Some((SymbolicMorphism::Zero, SymbolicMorphism::Zero));
    }
    let gn = g.pullback(n);
    let hm = h.pullback(m);
    let nonzero = m.hom_exists(&gn) && n.hom_exists(&hm) && m_live.subset_of(&gn) && n_live.subset_of(&hm);
    nonzero.then_some((SymbolicMorphism::Canonical, SymbolicMorphism::Canonical))
}

/// As [`rect_interleaved`] but ignoring the zero option.
pub fn rect_interleaved_nonzero(m: &RectangleModule, n: &RectangleModule, g: &AffineMap, h: &AffineMap) -> bool {
    let hg = h.after(g);
    let gh = g.after(h);
    let m_live = m.intersect(&hg.pullback(m));
    let n_live = n.intersect(&gh.pullback(n));
    let gn = g.pullback(n);
    let hm = h.pullback(m);
    m.hom_exists(&gn) && n.hom_exists(&hm) && m_live.subset_of(&gn) && n_live.subset_of(&hm)
}

/// Stalk-by-stalk check of a symbolic interleaving on the grid of critical
/// coordinates (every box corner and its preimages, with midpoints and outer
/// points); memberships are constant between consecutive critical values.
pub fn check_interleaving_stalkwise(
    m: &RectangleModule,
    n: &RectangleModule,
    g: &AffineMap,
    h: &AffineMap,
    phi: SymbolicMorphism,
    psi: SymbolicMorphism,
) -> bool {
    let dim = m.dim();
    let hg = h.after(g);
    let gh = g.after(h);
    let boxes = [
        m.clone(),
        n.clone(),
        g.pullback(n),
        h.pullback(m),
        hg.pullback(m),
        gh.pullback(n),
    ];
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut c: Vec<f64> = boxes
                .iter()
                .filter(|b| !b.is_empty())
                .flat_map(|b| [b.a[i], b.b[i]])
                .collect();
            c.sort_by(f64::total_cmp);
            c.dedup();
            let mut pts = Vec::new();
            match (c.first(), c.last()) {
                (Some(lo), Some(hi)) => {
                    pts.push(lo - 1.0);
                    for w in c.windows(2) {
                        pts.push(w[0]);
                        pts.push(0.5 * (w[0] + w[1]));
                    }
                    pts.push(*hi);
                    pts.push(hi + 1.0);
                }
                _ => pts.push(0.0),
            }
            pts
        })
        .collect();
    let mut points: Vec<Vec<f64>> = vec![vec![]];
    for axis in &axes {
        points = points
            .iter()
            .flat_map(|p| {
                axis.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(*x);
                    q
                })
            })
            .collect();
    }
    let phi_at = |p: &[f64]| phi == SymbolicMorphism::Canonical && m.contains(p) && n.contains(&g.apply(p));
    let psi_at = |q: &[f64]| psi == SymbolicMorphism::Canonical && n.contains(q) && m.contains(&h.apply(q));
    let leq = |p: &[f64], q: &[f64]| p.iter().zip(q).all(|(a, b)| a <= b);
    for p in &points {
        for q in &points {
            if !leq(p, q) {
                continue;
            }
            // phi_q M(p<=q) = N(gp<=gq) phi_p
            let lhs = m.contains(p) && m.contains(q) && phi_at(q);
            let rhs = phi_at(p) && n.contains(&g.apply(q));
            if lhs != rhs {
                return false;
            }
            let lhs = n.contains(p) && n.contains(q) && psi_at(q);
            let rhs = psi_at(p) && m.contains(&h.apply(q));
            if lhs != rhs {
                return false;
            }
        }
    }
    points.iter().all(|p| {
        let gp = g.apply(p);
        let left = phi_at(p) && psi_at(&gp);
        let left_expected = m.contains(p) && m.contains(&hg.apply(p));
        let hp = h.apply(p);
        let right = psi_at(p) && phi_at(&hp);
        let right_expected = n.contains(p) && n.contains(&gh.apply(p));
        left == left_expected && right == right_expected
    })
}

/// One-parameter families searched by [`distance_bisect`]. The parameter is
/// the common weight of the symmetric pair `(g, g)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Translation by `t` in every coordinate, weight `t`.
    Flow,
    /// Scaling by `c = e^w >= 1`, weight `|log c| = w`.
    Multiplicative,
    /// Translation by `t * v / |v|_p`, weight `t`.
    Direction { v: Vec<f64>, p: f64 },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Flow => "flow".into(),
            Family::Multiplicative => "mult".into(),
            Family::Direction { v, p } => format!("direction{v:?}/p={p}"),
        }
    }

    pub fn element(&self, dim: usize, w: f64) -> AffineMap {
        match self {
            Family::Flow => AffineMap::uniform_shift(dim, w),
            Family::Multiplicative => AffineMap::uniform_scale(dim, w.exp()),
            Family::Direction { v, p } => {
                let norm = p_norm(v, *p);
                AffineMap::shift(v.iter().map(|x| w * x / norm).collect())
            }
        }
    }

    fn spread(&self, m: &RectangleModule, n: &RectangleModule) -> f64 {
        let coords: Vec<f64> = [m, n]
            .iter()
            .filter(|r| !r.is_empty())
            .flat_map(|r| r.a.iter().chain(&r.b).copied())
            .collect();
        let coords: Vec<f64> = match self {
            Family::Multiplicative => coords.iter().filter(|x| **x > 0.0).map(|x| x.ln()).collect(),
            _ => coords,
        };
        let lo = coords.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = coords.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            hi - lo
        } else {
            1.0
        }
    }
}

/// Bisection on a monotone feasibility predicate over `[0, inf)`.
/// Returns `(lower, upper, cap_hit)`: infeasible at `lower` (or `lower = 0`),
/// feasible at `upper`.
pub fn bisect_feasibility(feasible: impl Fn(f64) -> bool, seed: f64, tol: f64) -> (f64, f64, bool) {
    if feasible(0.0) {
        return (0.0, 0.0, false);
    }
    let cap = seed * CAP_FACTOR;
    let mut lo = 0.0;
    let mut hi = seed;
    while !feasible(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > cap {
            return (cap, f64::INFINITY, true);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi, false)
}

/// Distance under a one-parameter family, by bisection on the symmetric pair.
pub fn distance_bisect(
    m: &RectangleModule,
    n: &RectangleModule,
    family: &Family,
    tol: f64,
) -> Result<DistanceResult, InterleaveError> {
    if m.dim() != n.dim() {
        return Err(InterleaveError::DimensionMismatch(m.dim(), n.dim()));
    }
    if let Family::Multiplicative = family {
        if [m, n].iter().any(|r| !r.is_empty() && r.a.iter().any(|x| *x < 0.0)) {
            return Err(InterleaveError::UnsupportedAction("scaling needs nonnegative supports".into()));
        }
    }
    let dim = m.dim();
    let feasible = |w: f64| {
        let g = family.element(dim, w);
        // Overflowing scale factors would collapse every box to a point.
        let finite = g.after(&g).scale.iter().all(|c| c.is_finite());
        finite && rect_interleaved(m, n, &g, &g).is_some()
    };
    let (lo, hi, cap_hit) = bisect_feasibility(feasible, 2.0 * family.spread(m, n), tol);
    let certificate = (!cap_hit).then(|| {
        let g = family.element(dim, hi);
        let (phi, psi) = rect_interleaved(m, n, &g, &g).expect("upper end is feasible");
        Certificate::Affine {
            g: g.clone(),
            h: g,
            phi,
            psi,
        }
    });
    let upper = if cap_hit { Weight::INFINITY } else { Weight::of(hi) };
    Ok(DistanceResult {
        value: upper,
        lower: Weight::of(lo),
        upper,
        family: family.name(),
        cap_hit,
        certificate,
    })
}

pub fn interval_distance_bisect(
    i: &IntervalModule,
    j: &IntervalModule,
    family: &Family,
    tol: f64,
) -> Result<DistanceResult, InterleaveError> {
    distance_bisect(&i.to_rectangle(), &j.to_rectangle(), family, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    Flow,
    Multiplicative,
}

/// `min(max(|a-c|, |b-d|), max((b-a)/2, (d-c)/2))`, on log-endpoints for the
/// multiplicative action.
pub fn interval_distance_closed_form(
    i: &IntervalModule,
    j: &IntervalModule,
    kind: ActionKind,
) -> Result<Weight, InterleaveError> {
    let ends = |m: &IntervalModule| -> Result<Option<(f64, f64)>, InterleaveError> {
        if m.is_empty() {
            return Ok(None);
        }
        match kind {
            ActionKind::Flow => Ok(Some((m.a, m.b))),
            ActionKind::Multiplicative if m.a >= 0.0 => Ok(Some((m.a.ln(), m.b.ln()))),
            ActionKind::Multiplicative => Err(InterleaveError::UnsupportedAction(format!(
                "[{}, {}) leaves the nonnegative reals",
                m.a, m.b
            ))),
        }
    };
    let gap = |x: f64, y: f64| if x == y { 0.0 } else { (x - y).abs() };
    let half = |(a, b): (f64, f64)| 0.5 * gap(b, a);
    let d = match (ends(i)?, ends(j)?) {
        (None, None) => 0.0,
        (Some(x), None) | (None, Some(x)) => half(x),
        (Some((a, b)), Some((c, e))) => gap(a, c).max(gap(b, e)).min(half((a, b)).max(half((c, e)))),
    };
    Ok(Weight::of(d))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RectMode {
    Flow,
    Shift { p: f64 },
}

/// Per-axis lattice size for the shift search.
pub const GRID_POINTS: usize = 17;

/// Rectangle-module distance. Flow mode bisects over `(t1, t1)`; shift mode
/// searches asymmetric pairs `(s, t)` of nonnegative vectors.
pub fn rectangle_distance(
    r1: &RectangleModule,
    r2: &RectangleModule,
    mode: RectMode,
    tol: f64,
) -> Result<DistanceResult, InterleaveError> {
    match mode {
        RectMode::Flow => distance_bisect(r1, r2, &Family::Flow, tol),
        RectMode::Shift { p } => shift_search(r1, r2, p, tol, true),
    }
}

/// Shift-mode search restricted to interleavings with nonzero maps.
pub fn rectangle_distance_nonzero_only(
    r1: &RectangleModule,
    r2: &RectangleModule,
    p: f64,
    tol: f64,
) -> Result<DistanceResult, InterleaveError> {
    shift_search(r1, r2, p, tol, false)
}

fn shift_search(
    r1: &RectangleModule,
    r2: &RectangleModule,
    p: f64,
    tol: f64,
    allow_zero: bool,
) -> Result<DistanceResult, InterleaveError> {
    if r1.dim() != r2.dim() {
        return Err(InterleaveError::DimensionMismatch(r1.dim(), r2.dim()));
    }
    let dim = r1.dim();
    let feasible = |x: &[f64]| {
        let g = AffineMap::shift(x[..dim].to_vec());
        let h = AffineMap::shift(x[dim..].to_vec());
        if allow_zero {
            rect_interleaved(r1, r2, &g, &h).is_some()
        } else {
            rect_interleaved_nonzero(r1, r2, &g, &h)
        }
    };
    let cost = |x: &[f64]| p_norm(&x[..dim], p).max(p_norm(&x[dim..], p));
    if feasible(&vec![0.0; 2 * dim]) {
        return Ok(DistanceResult::exact(Weight::ZERO, &format!("shift/p={p}"), None));
    }
    // A feasible symmetric point bounds every coordinate of the optimum.
    let spread = Family::Flow.spread(r1, r2);
    let reach = 4.0 * spread * (dim as f64).powf(1.0 / p.max(1.0));
    let per_axis = GRID_POINTS.min((1e6f64.powf(1.0 / (2 * dim) as f64)).floor().max(3.0) as usize);
    let axes_full: Vec<(f64, f64)> = vec![(0.0, reach); 2 * dim];
    let mut best: Vec<(f64, Vec<f64>)> = lattice_scan(&axes_full, per_axis, &feasible, &cost);
    if best.is_empty() {
        return Ok(DistanceResult {
            value: Weight::INFINITY,
            lower: Weight::of(reach),
            upper: Weight::INFINITY,
            family: format!("shift/p={p}"),
            cap_hit: true,
            certificate: None,
        });
    }
    let mut step = reach / (per_axis - 1) as f64;
    while step > tol / 4.0 {
        let mut next = Vec::new();
        for (_, x) in best.iter().take(4) {
            let axes: Vec<(f64, f64)> = x.iter().map(|c| ((c - step).max(0.0), c + step)).collect();
            next.extend(lattice_scan(&axes, per_axis.min(9), &feasible, &cost));
        }
        next.extend(best);
        next.sort_by(|a, b| a.0.total_cmp(&b.0));
        next.dedup_by(|a, b| a.1 == b.1);
        best = next;
        step /= 4.0;
    }
    let (value, x) = best[0].clone();
    let g = AffineMap::shift(x[..dim].to_vec());
    let h = AffineMap::shift(x[dim..].to_vec());
    let (phi, psi) = if allow_zero {
        rect_interleaved(r1, r2, &g, &h).expect("best point is feasible")
    } else {
        (SymbolicMorphism::Canonical, SymbolicMorphism::Canonical)
    };
    Ok(DistanceResult {
        value: Weight::of(value),
        lower: Weight::of((value - 4.0 * step * (2 * dim) as f64).max(0.0)),
        upper: Weight::of(value),
        family: format!("shift/p={p}"),
        cap_hit: false,
        certificate: Some(Certificate::Affine { g, h, phi, psi }),
    })
}

/// Feasible lattice points sorted by cost, keeping the cheapest few.
fn lattice_scan(
    axes: &[(f64, f64)],
    per_axis: usize,
    feasible: &dyn Fn(&[f64]) -> bool,
    cost: &dyn Fn(&[f64]) -> f64,
) -> Vec<(f64, Vec<f64>)> {
    let total = per_axis.pow(axes.len() as u32);
    let mut found: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut x = vec![0.0; axes.len()];
    for idx in 0..total {
        let mut r = idx;
        for (k, (lo, hi)) in axes.iter().enumerate() {
            x[k] = lo + (hi - lo) * (r % per_axis) as f64 / (per_axis - 1) as f64;
            r /= per_axis;
        }
        if feasible(&x) {
            found.push((cost(&x), x.clone()));
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    found.truncate(8);
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;

    fn chain_interval(n: usize, lo: usize, hi: usize) -> FiniteModule {
        let support: Vec<bool> = (0..n).map(|p| lo <= p && p < hi).collect();
        FiniteModule::indicator(FinitePoset::chain(n), &support).unwrap()
    }

    /// Clipped shift by `k` on an `n`-chain.
    fn chain_shift(n: usize, k: usize) -> Vec<usize> {
        (0..n).map(|p| (p + k).min(n - 1)).collect()
    }

    fn interval(a: f64, b: f64) -> IntervalModule {
        IntervalModule::new(a, b).unwrap()
    }

    /// Every pair of morphisms `M => gN`, `N => hM`, tested directly.
    fn brute_force_interleaved(m: &FiniteModule, n: &FiniteModule, g: &[usize], h: &[usize]) -> bool {
        let gn = n.pullback(g).unwrap();
        let hm = m.pullback(h).unwrap();
        let all = |s: &FiniteModule, t: &FiniteModule| -> Vec<ModuleMorphism> {
            let coords = MorphismCoords::new(s, t);
            (0..(1u32 << coords.total()))
                .map(|mask| {
                    let mut v = BitVec::zeros(coords.total());
                    for i in 0..coords.total() {
                        v.set(i, mask >> i & 1 == 1);
                    }
                    coords.to_morphism(&v)
                })
                .filter(|f| is_morphism(s, t, f).unwrap())
                .collect()
        };
        let phis = all(m, &gn);
        let psis = all(n, &hm);
        phis.iter()
            .any(|phi| psis.iter().any(|psi| check_interleaving(m, n, g, h, phi, psi).unwrap()))
    }

    #[test]
    fn identity_interleaves_a_module_with_itself() {
        let m = chain_interval(4, 1, 3);
        let id: Vec<usize> = (0..4).collect();
        let phi = ModuleMorphism::identity(&m);
        assert!(check_interleaving(&m, &m, &id, &id, &phi, &phi).unwrap());
        match exists_interleaving(&m, &m, &id, &id).unwrap() {
            Search::Found(c) => assert!(check_interleaving(&m, &m, &id, &id, &c.phi, &c.psi).unwrap()),
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn far_intervals_do_not_interleave_at_identity() {
        let m = chain_interval(5, 0, 1);
        let n = chain_interval(5, 4, 5);
        let id: Vec<usize> = (0..5).collect();
        assert_eq!(exists_interleaving(&m, &n, &id, &id).unwrap(), Search::NotFound);
        assert!(!brute_force_interleaved(&m, &n, &id, &id));
    }

    #[test]
    fn only_zero_maps_interleave_at_shift_two() {
        // [0,2) on a 4-chain against the zero module: shift 1 each way kills it.
        let m = chain_interval(4, 0, 2);
        let z = FiniteModule::zero(FinitePoset::chain(4));
        let g = chain_shift(4, 1);
        match exists_interleaving(&m, &z, &g, &g).unwrap() {
            Search::Found(c) => {
                assert!(c.phi.is_zero() && c.psi.is_zero());
            }
            other => panic!("expected zero certificate, got {other:?}"),
        }
        assert!(brute_force_interleaved(&m, &z, &g, &g));
    }

    #[test]
    fn precondition_failure_names_missing_two_morphism() {
        let m = chain_interval(3, 0, 1);
        let g = vec![0, 0, 2];
        let id: Vec<usize> = (0..3).collect();
        let err = exists_interleaving(&m, &m, &g, &id).unwrap_err();
        assert!(matches!(err, InterleaveError::PreconditionFailed { ref missing } if missing.len() == 2));
    }

    #[test]
    fn search_agrees_with_brute_force_on_chain_pairs() {
        let n = 5;
        let mut modules = Vec::new();
        for lo in 0..n {
            for hi in lo..=n {
                modules.push(chain_interval(n, lo, hi));
            }
        }
        let shifts: Vec<Vec<usize>> = (0..3).map(|k| chain_shift(n, k)).collect();
        for m in modules.iter().step_by(2) {
            for x in modules.iter().step_by(3) {
                for g in &shifts {
                    for h in &shifts {
                        let fast = matches!(exists_interleaving(m, x, g, h).unwrap(), Search::Found(_));
                        assert_eq!(fast, brute_force_interleaved(m, x, g, h));
                    }
                }
            }
        }
    }

    #[test]
    fn omega_distance_on_offset_chain_intervals() {
        let n = 6;
        let m = chain_interval(n, 1, 4);
        let x = chain_interval(n, 2, 5);
        let translations: Vec<Vec<usize>> = (0..n).map(|k| chain_shift(n, k)).collect();
        let weights: Vec<Weight> = translations
            .iter()
            .map(|t| crate::poset::hop_projection(&FinitePoset::chain(n), t))
            .collect();
        let d = omega_interleaving_distance(&m, &x, &translations, &weights).unwrap();
        assert_eq!(d.value, Weight::of(1.0));
        let same = omega_interleaving_distance(&m, &m, &translations, &weights).unwrap();
        assert_eq!(same.value, Weight::ZERO);
        let none = omega_interleaving_distance(&m, &x, &translations[..1], &weights[..1]).unwrap();
        assert!(none.value.is_infinite());
    }

    #[test]
    fn zero_maps_kill_short_interval_under_flow() {
        let m = interval(0.0, 2.0).to_rectangle();
        let e = RectangleModule::empty(1);
        let g = AffineMap::uniform_shift(1, 1.0);
        assert!(check_interleaving_stalkwise(&m, &e, &g, &g, SymbolicMorphism::Zero, SymbolicMorphism::Zero));
        let long = interval(0.0, 10.0).to_rectangle();
        assert!(!check_interleaving_stalkwise(&long, &e, &g, &g, SymbolicMorphism::Zero, SymbolicMorphism::Zero));
        assert!(rect_interleaved(&m, &e, &g, &g).is_some());
        assert!(rect_interleaved(&long, &e, &g, &g).is_none());
    }

    #[test]
    fn empty_interval_distances() {
        let d = interval_distance_bisect(&interval(0.0, 2.0), &IntervalModule::empty(), &Family::Flow, 1e-6).unwrap();
        assert!((d.value.value() - 1.0).abs() <= 1e-6);
        let e2 = 2f64.exp();
        let d = interval_distance_bisect(&interval(1.0, e2), &IntervalModule::empty(), &Family::Multiplicative, 1e-6).unwrap();
        assert!((d.value.value() - 1.0).abs() <= 1e-6);
        let m = interval(0.3, 1.7);
        for fam in [Family::Flow, Family::Multiplicative] {
            assert_eq!(interval_distance_bisect(&m, &m, &fam, 1e-6).unwrap().value, Weight::ZERO);
        }
    }

    #[test]
    fn multiplicative_from_zero_is_infinite() {
        let m = interval(0.0, 1.0);
        let d = interval_distance_bisect(&m, &IntervalModule::empty(), &Family::Multiplicative, 1e-6).unwrap();
        assert!(d.value.is_infinite() && d.cap_hit);
        let c = interval_distance_closed_form(&m, &IntervalModule::empty(), ActionKind::Multiplicative).unwrap();
        assert!(c.is_infinite());
        let c = interval_distance_closed_form(&m, &interval(0.0, 2.0), ActionKind::Multiplicative).unwrap();
        assert!((c.value() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let e = IntervalModule::empty();
        assert_eq!(interval_distance_closed_form(&interval(0.0, 2.0), &e, ActionKind::Flow).unwrap(), Weight::of(1.0));
        let m = interval(2.0, 5.0);
        assert_eq!(interval_distance_closed_form(&m, &m, ActionKind::Flow).unwrap(), Weight::ZERO);
        let vals: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|a| interval_distance_closed_form(&interval(*a, a + 1.0), &e, ActionKind::Multiplicative).unwrap().value())
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2]);
        assert!(interval_distance_closed_form(&interval(-1.0, 1.0), &e, ActionKind::Multiplicative).is_err());
    }

    #[test]
    fn rectangle_example_distances() {
        let m1 = RectangleModule::new(vec![0.0, 0.0], vec![2.0, 2.0]).unwrap();
        let m2 = RectangleModule::new(vec![1.0, 0.0], vec![3.0, 2.0]).unwrap();
        let m3 = RectangleModule::new(vec![1.0, 1.0], vec![3.0, 3.0]).unwrap();
        let flow = |a, b| rectangle_distance(a, b, RectMode::Flow, 1e-6).unwrap().value.value();
        assert!((flow(&m1, &m2) - 1.0).abs() < 1e-4);
        assert!((flow(&m1, &m3) - 1.0).abs() < 1e-4);
        let shift = |a, b| rectangle_distance(a, b, RectMode::Shift { p: 2.0 }, 1e-6).unwrap().value.value();
        assert!((shift(&m1, &m2) - 1.0).abs() < 1e-3);
        // Zero maps with s = t = (1, 0) interleave M1 and M3: each box has width 2.
        assert!((shift(&m1, &m3) - 1.0).abs() < 1e-3);
        let g = AffineMap::shift(vec![1.0, 0.0]);
        assert_eq!(rect_interleaved(&m1, &m3, &g, &g), Some((SymbolicMorphism::Zero, SymbolicMorphism::Zero)));
        let nz = rectangle_distance_nonzero_only(&m1, &m3, 2.0, 1e-6).unwrap().value.value();
        assert!((nz - 2f64.sqrt()).abs() < 1e-3);
        assert_eq!(shift(&m1, &m1), 0.0);
    }

    #[test]
    fn criterion_agrees_with_stalkwise_check() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rect = |rng: &mut rand_chacha::ChaCha8Rng| {
            let a: Vec<f64> = (0..2).map(|_| rng.gen_range(0..4) as f64).collect();
            let b: Vec<f64> = a.iter().map(|x| x + rng.gen_range(1..4) as f64).collect();
            RectangleModule::new(a, b).unwrap()
        };
        for _ in 0..300 {
            let m = rect(&mut rng);
            let n = rect(&mut rng);
            let g = AffineMap::shift((0..2).map(|_| rng.gen_range(0..5) as f64 * 0.5).collect());
            let h = AffineMap::shift((0..2).map(|_| rng.gen_range(0..5) as f64 * 0.5).collect());
            let fast = rect_interleaved(&m, &n, &g, &h).is_some();
            let slow = [SymbolicMorphism::Zero, SymbolicMorphism::Canonical].iter().any(|&phi| {
                [SymbolicMorphism::Zero, SymbolicMorphism::Canonical]
                    .iter()
                    .any(|&psi| check_interleaving_stalkwise(&m, &n, &g, &h, phi, psi))
            });
            assert_eq!(fast, slow, "{m:?} {n:?} {g:?} {h:?}");
        }
    }
}
