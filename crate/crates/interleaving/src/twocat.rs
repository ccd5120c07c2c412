//! Finite 2-categories with Lawvere 2-weights and their interleaving
//! distances, together with the constructions that produce them: deloopings,
//! indiscrete 2-categories, action groupoids, locally persistent categories
//! and the Gromov-Hausdorff fragment.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::interleave::{Certificate, DistanceResult};
use crate::metricgh::{all_maps, distortion, FiniteMetricSpace, PointMap};
use crate::weight::{AuditReport, Weight};

/// Default cap on the number of 1-morphisms a construction may produce.
pub const DEFAULT_MOR1_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum TwoCatError {
    #[error("malformed category: {0}")]
    MalformedCategory(String),
    #[error("malformed LPC: {0}")]
    MalformedLPC(String),
    #[error("invalid group action: {0}")]
    InvalidGroup(String),
    #[error("{count} 1-morphisms exceeds the cap of {cap}")]
    SizeCap { count: usize, cap: usize },
    #[error("not a 2-functor: {0}")]
    NotAFunctor(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("composite not defined: {0}")]
    Undefined(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A 1-morphism `src -> tgt` between objects, or a 2-morphism `src => tgt`
/// between 1-morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

impl Arrow {
    pub fn new(name: impl Into<String>, src: usize, tgt: usize) -> Self {
        Arrow {
            name: name.into(),
            src,
            tgt,
        }
    }
}

/// A finite 1-category. `compose[(g, f)]` is `g ∘ f`.
#[derive(Clone, Debug, Default)]
pub struct Finite1Category {
    pub objects: Vec<String>,
    pub mor: Vec<Arrow>,
    pub identity: Vec<usize>,
    pub compose: HashMap<(usize, usize), usize>,
}

impl Finite1Category {
    /// The one-object category of a finite monoid given by its table.
    pub fn delooping(names: &[String], mul: &[Vec<usize>], identity: usize) -> Self {
        Finite1Category {
            objects: vec!["*".into()],
            mor: names.iter().map(|n| Arrow::new(n.clone(), 0, 0)).collect(),
            identity: vec![identity],
            compose: (0..names.len())
                .flat_map(|g| (0..names.len()).map(move |f| ((g, f), mul[g][f])))
                .collect(),
        }
    }

    /// One arrow `i -> j` for every ordered pair of objects.
    pub fn codiscrete(n: usize) -> Self {
        let id = |i: usize, j: usize| i * n + j;
        let mut compose = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    compose.insert((id(j, k), id(i, j)), id(i, k));
                }
            }
        }
        Finite1Category {
            objects: (0..n).map(|i| format!("o{i}")).collect(),
            mor: (0..n)
                .flat_map(|i| (0..n).map(move |j| Arrow::new(format!("{i}>{j}"), i, j)))
                .collect(),
            identity: (0..n).map(|i| id(i, i)).collect(),
            compose,
        }
    }
}

/// A finite 2-category given by its composition tables.
///
/// `compose1[(g, f)] = g ∘ f`, `vcomp[(b, a)] = b • a` (a first) and
/// `hcomp[(b, a)]` is the horizontal composite with `a` on the first leg.
/// Instances built from partially defined constructions set `partial`;
/// validation then skips totality of the tables.
#[derive(Clone, Debug)]
pub struct Finite2Category {
    pub objects: Vec<String>,
    pub mor1: Vec<Arrow>,
    pub id1: Vec<usize>,
    pub compose1: HashMap<(usize, usize), usize>,
    pub mor2: Vec<Arrow>,
    pub id2: Vec<usize>,
    pub vcomp: HashMap<(usize, usize), usize>,
    pub hcomp: HashMap<(usize, usize), usize>,
    pub partial: bool,
    hom1: HashMap<(usize, usize), Vec<usize>>,
    hom2: HashMap<(usize, usize), Vec<usize>>,
    out1: Vec<Vec<usize>>,
}

/// A Lawvere 2-weight: one value per 1-morphism and per 2-morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct Lawvere2Weight {
    pub w1: Vec<Weight>,
    pub w2: Vec<Weight>,
}

impl Lawvere2Weight {
    pub fn zero(c: &Finite2Category) -> Self {
        Lawvere2Weight {
            w1: vec![Weight::ZERO; c.mor1.len()],
            w2: vec![Weight::ZERO; c.mor2.len()],
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Lawvere2Weight {
            w1: self.w1.iter().map(|w| w.scale(factor)).collect(),
            w2: self.w2.iter().map(|w| w.scale(factor)).collect(),
        }
    }
}

impl Finite2Category {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        objects: Vec<String>,
        mor1: Vec<Arrow>,
        id1: Vec<usize>,
        compose1: HashMap<(usize, usize), usize>,
        mor2: Vec<Arrow>,
        id2: Vec<usize>,
        vcomp: HashMap<(usize, usize), usize>,
        hcomp: HashMap<(usize, usize), usize>,
        partial: bool,
    ) -> Result<Self, TwoCatError> {
        let bad = |msg: String| Err(TwoCatError::MalformedCategory(msg));
        if id1.len() != objects.len() {
            return bad(format!("{} identities for {} objects", id1.len(), objects.len()));
        }
        if id2.len() != mor1.len() {
            return bad(format!("{} identity 2-morphisms for {} 1-morphisms", id2.len(), mor1.len()));
        }
        for (i, f) in mor1.iter().enumerate() {
            if f.src >= objects.len() || f.tgt >= objects.len() {
                return bad(format!("1-morphism {i} has an endpoint out of range"));
            }
        }
        for (i, a) in mor2.iter().enumerate() {
            if a.src >= mor1.len() || a.tgt >= mor1.len() {
                return bad(format!("2-morphism {i} has an endpoint out of range"));
            }
            let (f, g) = (&mor1[a.src], &mor1[a.tgt]);
            if (f.src, f.tgt) != (g.src, g.tgt) {
                return bad(format!("2-morphism {i} joins non-parallel 1-morphisms"));
            }
        }
        for (a, &i) in id1.iter().enumerate() {
            if i >= mor1.len() || mor1[i].src != a || mor1[i].tgt != a {
                return bad(format!("identity of object {a} is not an endomorphism of it"));
            }
        }
        for (f, &i) in id2.iter().enumerate() {
            if i >= mor2.len() || mor2[i].src != f || mor2[i].tgt != f {
                return bad(format!("identity 2-morphism of {f} has the wrong shape"));
            }
        }
        let in_range = |t: &HashMap<(usize, usize), usize>, n: usize| {
            t.iter().all(|(&(a, b), &c)| a < n && b < n && c < n)
        };
        if !in_range(&compose1, mor1.len()) {
            return bad("1-composition table refers to unknown 1-morphisms".into());
        }
        if !in_range(&vcomp, mor2.len()) || !in_range(&hcomp, mor2.len()) {
            return bad("2-composition table refers to unknown 2-morphisms".into());
        }
        let mut hom1: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut out1 = vec![Vec::new(); objects.len()];
        for (i, f) in mor1.iter().enumerate() {
            hom1.entry((f.src, f.tgt)).or_default().push(i);
            out1[f.src].push(i);
        }
        let mut hom2: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, a) in mor2.iter().enumerate() {
            hom2.entry((a.src, a.tgt)).or_default().push(i);
        }
        Ok(Finite2Category {
            objects,
            mor1,
            id1,
            compose1,
            mor2,
            id2,
            vcomp,
            hcomp,
            partial,
            hom1,
            hom2,
            out1,
        })
    }

    /// A 2-category with at most one 2-morphism between any two 1-morphisms.
    /// `cell(f, g)` decides whether `f => g` exists and gives its name and
    /// weight; composites are forced by uniqueness and left undefined (making
    /// the result partial) when the forced target does not exist.
    pub fn thin(
        base: &Finite1Category,
        w1: Vec<Weight>,
        cell: impl Fn(usize, usize) -> Option<(String, Weight)>,
    ) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
        let n1 = base.mor.len();
        let mut by_hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, f) in base.mor.iter().enumerate() {
            by_hom.entry((f.src, f.tgt)).or_default().push(i);
        }
        let mut keys: Vec<_> = by_hom.keys().copied().collect();
        keys.sort_unstable();
        let mut mor2 = Vec::new();
        let mut w2 = Vec::new();
        let mut cell_id: HashMap<(usize, usize), usize> = HashMap::new();
        for key in &keys {
            for &f in &by_hom[key] {
                for &g in &by_hom[key] {
                    if let Some((name, w)) = cell(f, g) {
                        cell_id.insert((f, g), mor2.len());
                        mor2.push(Arrow::new(name, f, g));
                        w2.push(w);
                    }
                }
            }
        }
        let mut id2 = Vec::with_capacity(n1);
        for f in 0..n1 {
            match cell_id.get(&(f, f)) {
                Some(&i) => id2.push(i),
                None => {
                    return Err(TwoCatError::MalformedCategory(format!(
                        "no identity 2-morphism on {}",
                        base.mor[f].name
                    )))
                }
            }
        }
        let mut partial = false;
        for f in 0..n1 {
            for &g in &base_out(base, base.mor[f].tgt) {
                if !base.compose.contains_key(&(g, f)) {
                    partial = true;
                }
            }
        }
        let mut vcomp = HashMap::new();
        for (ai, a) in mor2.iter().enumerate() {
            let key = (base.mor[a.src].src, base.mor[a.src].tgt);
            for &h in &by_hom[&key] {
                if let Some(&bi) = cell_id.get(&(a.tgt, h)) {
                    match cell_id.get(&(a.src, h)) {
                        Some(&ci) => {
                            vcomp.insert((bi, ai), ci);
                        }
                        None => partial = true,
                    }
                }
            }
        }
        let mut out2: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, a) in mor2.iter().enumerate() {
            out2.entry(base.mor[a.src].src).or_default().push(i);
        }
        let mut hcomp = HashMap::new();
        for (ai, a) in mor2.iter().enumerate() {
            let mid = base.mor[a.src].tgt;
            for &bi in out2.get(&mid).map(Vec::as_slice).unwrap_or(&[]) {
                let b = &mor2[bi];
                let src = base.compose.get(&(b.src, a.src));
                let tgt = base.compose.get(&(b.tgt, a.tgt));
                match (src, tgt) {
                    (Some(&s), Some(&t)) => match cell_id.get(&(s, t)) {
                        Some(&ci) => {
                            hcomp.insert((bi, ai), ci);
                        }
                        None => partial = true,
                    },
                    _ => partial = true,
                }
            }
        }
        let c = Finite2Category::new(
            base.objects.clone(),
            base.mor.clone(),
            base.identity.clone(),
            base.compose.clone(),
            mor2,
            id2,
            vcomp,
            hcomp,
            partial,
        )?;
        Ok((c, Lawvere2Weight { w1, w2 }))
    }

    pub fn hom1(&self, a: usize, b: usize) -> &[usize] {
        self.hom1.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// 2-morphisms `f => g`.
    pub fn hom2(&self, f: usize, g: usize) -> &[usize] {
        self.hom2.get(&(f, g)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn out1(&self, a: usize) -> &[usize] {
        &self.out1[a]
    }

    pub fn compose1(&self, g: usize, f: usize) -> Option<usize> {
        self.compose1.get(&(g, f)).copied()
    }

    pub fn vcompose(&self, b: usize, a: usize) -> Option<usize> {
        self.vcomp.get(&(b, a)).copied()
    }

    pub fn hcompose(&self, b: usize, a: usize) -> Option<usize> {
        self.hcomp.get(&(b, a)).copied()
    }

    fn mor1_name(&self, f: usize) -> &str {
        &self.mor1[f].name
    }

    fn mor2_name(&self, a: usize) -> &str {
        &self.mor2[a].name
    }

    /// Vertically composable pairs `(b, a)` with `a: f => g`, `b: g => h`.
    fn vertical_pairs(&self) -> Vec<(usize, usize)> {
        let mut by_src: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, a) in self.mor2.iter().enumerate() {
            by_src.entry(a.src).or_default().push(i);
        }
        let mut pairs = Vec::new();
        for (ai, a) in self.mor2.iter().enumerate() {
            for &bi in by_src.get(&a.tgt).map(Vec::as_slice).unwrap_or(&[]) {
                pairs.push((bi, ai));
            }
        }
        pairs
    }

    /// Horizontally composable pairs `(b, a)`: `a` on `A -> B`, `b` on `B -> C`.
    fn horizontal_pairs(&self) -> Vec<(usize, usize)> {
        let mut by_obj: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, a) in self.mor2.iter().enumerate() {
            by_obj.entry(self.mor1[a.src].src).or_default().push(i);
        }
        let mut pairs = Vec::new();
        for (ai, a) in self.mor2.iter().enumerate() {
            let mid = self.mor1[a.src].tgt;
            for &bi in by_obj.get(&mid).map(Vec::as_slice).unwrap_or(&[]) {
                pairs.push((bi, ai));
            }
        }
        pairs
    }
}

fn base_out(base: &Finite1Category, a: usize) -> Vec<usize> {
    (0..base.mor.len()).filter(|&g| base.mor[g].src == a).collect()
}

/// Exhaustive check of the 2-category axioms over the composition tables.
pub fn validate_2category(c: &Finite2Category) -> AuditReport {
    let mut report = AuditReport::new();
    let n1 = c.mor1.len();
    // 1-composition: shape, totality, units, associativity.
    for f in 0..n1 {
        let (a, b) = (c.mor1[f].src, c.mor1[f].tgt);
        for &g in c.out1(b) {
            let gf = match c.compose1(g, f) {
                Some(gf) => gf,
                None => {
                    if !c.partial {
                        report.push("COMPOSE1_TOTAL", format!("{}∘{}", c.mor1_name(g), c.mor1_name(f)), "undefined", "defined");
                    }
                    continue;
                }
            };
            let want = (a, c.mor1[g].tgt);
            if (c.mor1[gf].src, c.mor1[gf].tgt) != want {
                report.push("COMPOSE1_SHAPE", format!("{}∘{}", c.mor1_name(g), c.mor1_name(f)), c.mor1_name(gf), format!("{want:?}"));
                continue;
            }
            for &h in c.out1(c.mor1[g].tgt) {
                if let (Some(hg), Some(h_gf)) = (c.compose1(h, g), c.compose1(h, gf)) {
                    if let Some(hg_f) = c.compose1(hg, f) {
                        if hg_f != h_gf {
                            report.push(
                                "ASSOC1",
                                format!("{},{},{}", c.mor1_name(h), c.mor1_name(g), c.mor1_name(f)),
                                c.mor1_name(hg_f),
                                c.mor1_name(h_gf),
                            );
                        }
                    }
                }
            }
        }
        for (side, composite) in [("left", c.compose1(c.id1[b], f)), ("right", c.compose1(f, c.id1[a]))] {
            if let Some(x) = composite {
                if x != f {
                    report.push("UNIT1", format!("{side} {}", c.mor1_name(f)), c.mor1_name(x), c.mor1_name(f));
                }
            } else if !c.partial {
                report.push("UNIT1", format!("{side} {}", c.mor1_name(f)), "undefined", c.mor1_name(f));
            }
        }
    }

    // Vertical composition.
    let vpairs = c.vertical_pairs();
    let mut vnext: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(b, a) in &vpairs {
        vnext.entry(a).or_default().push(b);
        let w = format!("{}•{}", c.mor2_name(b), c.mor2_name(a));
        match c.vcompose(b, a) {
            Some(x) => {
                if (c.mor2[x].src, c.mor2[x].tgt) != (c.mor2[a].src, c.mor2[b].tgt) {
                    report.push("VCOMP_SHAPE", w, c.mor2_name(x), "src(a) => tgt(b)");
                }
            }
            None if !c.partial => report.push("VCOMP_TOTAL", w, "undefined", "defined"),
            None => {}
        }
    }
    for (ai, a) in c.mor2.iter().enumerate() {
        for (side, composite) in [("left", c.vcompose(c.id2[a.tgt], ai)), ("right", c.vcompose(ai, c.id2[a.src]))] {
            match composite {
                Some(x) if x != ai => report.push("UNIT2_V", format!("{side} {}", c.mor2_name(ai)), c.mor2_name(x), c.mor2_name(ai)),
                None if !c.partial => report.push("UNIT2_V", format!("{side} {}", c.mor2_name(ai)), "undefined", c.mor2_name(ai)),
                _ => {}
            }
        }
    }
    for &(b, a) in &vpairs {
        let Some(ba) = c.vcompose(b, a) else { continue };
        for &cc in vnext.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
            if let (Some(cb), Some(c_ba)) = (c.vcompose(cc, b), c.vcompose(cc, ba)) {
                if let Some(cb_a) = c.vcompose(cb, a) {
                    if cb_a != c_ba {
                        report.push(
                            "ASSOC_V",
                            format!("{},{},{}", c.mor2_name(cc), c.mor2_name(b), c.mor2_name(a)),
                            c.mor2_name(cb_a),
                            c.mor2_name(c_ba),
                        );
                    }
                }
            }
        }
    }

    // Horizontal composition.
    let hpairs = c.horizontal_pairs();
    let mut hnext: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(b, a) in &hpairs {
        hnext.entry(a).or_default().push(b);
        let w = format!("{}*{}", c.mor2_name(b), c.mor2_name(a));
        match c.hcompose(b, a) {
            Some(x) => {
                let src = c.compose1(c.mor2[b].src, c.mor2[a].src);
                let tgt = c.compose1(c.mor2[b].tgt, c.mor2[a].tgt);
                if (Some(c.mor2[x].src), Some(c.mor2[x].tgt)) != (src, tgt) {
                    report.push("HCOMP_SHAPE", w, c.mor2_name(x), "composite of the legs");
                }
            }
            None if !c.partial => report.push("HCOMP_TOTAL", w, "undefined", "defined"),
            None => {}
        }
    }
    for f in 0..n1 {
        for &g in c.out1(c.mor1[f].tgt) {
            if let (Some(gf), Some(x)) = (c.compose1(g, f), c.hcompose(c.id2[g], c.id2[f])) {
                if x != c.id2[gf] {
                    report.push("UNIT2_H", format!("1_{}*1_{}", c.mor1_name(g), c.mor1_name(f)), c.mor2_name(x), c.mor2_name(c.id2[gf]));
                }
            }
        }
    }
    for (ai, a) in c.mor2.iter().enumerate() {
        let (s, t) = (c.mor1[a.src].src, c.mor1[a.src].tgt);
        let left = c.hcompose(c.id2[c.id1[t]], ai);
        let right = c.hcompose(ai, c.id2[c.id1[s]]);
        for (side, composite) in [("left", left), ("right", right)] {
            if let Some(x) = composite {
                if x != ai {
                    report.push("UNIT2_H", format!("{side} {}", c.mor2_name(ai)), c.mor2_name(x), c.mor2_name(ai));
                }
            }
        }
    }
    for &(b, a) in &hpairs {
        let Some(ba) = c.hcompose(b, a) else { continue };
        for &cc in hnext.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
            if let (Some(cb), Some(c_ba)) = (c.hcompose(cc, b), c.hcompose(cc, ba)) {
                if let Some(cb_a) = c.hcompose(cb, a) {
                    if cb_a != c_ba {
                        report.push(
                            "ASSOC_H",
                            format!("{},{},{}", c.mor2_name(cc), c.mor2_name(b), c.mor2_name(a)),
                            c.mor2_name(cb_a),
                            c.mor2_name(c_ba),
                        );
                    }
                }
            }
        }
    }

    // Interchange: (b'•b)*(a'•a) = (b'*a')•(b*a).
    let mut vby_hom: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for &(b, a) in &vpairs {
        let f = c.mor2[a].src;
        vby_hom.entry((c.mor1[f].src, c.mor1[f].tgt)).or_default().push((b, a));
    }
    for (&(x, y), first) in &vby_hom {
        for z in 0..c.objects.len() {
            let Some(second) = vby_hom.get(&(y, z)) else { continue };
            for &(a2, a1) in first {
                for &(b2, b1) in second {
                    let lhs = c
                        .vcompose(b2, b1)
                        .zip(c.vcompose(a2, a1))
                        .and_then(|(bb, aa)| c.hcompose(bb, aa));
                    let rhs = c
                        .hcompose(b2, a2)
                        .zip(c.hcompose(b1, a1))
                        .and_then(|(top, bottom)| c.vcompose(top, bottom));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            report.push(
                                "INTERCHANGE",
                                format!(
                                    "{}@{x}->{y}->{z}",
                                    [b2, b1, a2, a1].map(|i| c.mor2_name(i).to_string()).join(",")
                                ),
                                c.mor2_name(l),
                                c.mor2_name(r),
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

/// Zero on identities and the three triangle inequalities, exhaustively.
pub fn audit_lawvere_2_weight(w: &Lawvere2Weight, c: &Finite2Category, tol: f64) -> Result<AuditReport, TwoCatError> {
    if w.w1.len() != c.mor1.len() || w.w2.len() != c.mor2.len() {
        return Err(TwoCatError::MalformedCategory("weight tables do not match the category".into()));
    }
    let mut report = AuditReport::new();
    for (a, &f) in c.id1.iter().enumerate() {
        if !w.w1[f].le_tol(Weight::ZERO, tol) {
            report.push("ZERO_ON_IDENTITY_1", format!("1_{}", c.objects[a]), w.w1[f], 0);
        }
    }
    for (f, &i) in c.id2.iter().enumerate() {
        if !w.w2[i].le_tol(Weight::ZERO, tol) {
            report.push("ZERO_ON_IDENTITY_2", format!("1_{}", c.mor1_name(f)), w.w2[i], 0);
        }
    }
    for f in 0..c.mor1.len() {
        for &g in c.out1(c.mor1[f].tgt) {
            match c.compose1(g, f) {
                Some(gf) => {
                    let rhs = w.w1[g] + w.w1[f];
                    if !w.w1[gf].le_tol(rhs, tol) {
                        report.push("TRIANGLE_1", format!("{}∘{}", c.mor1_name(g), c.mor1_name(f)), w.w1[gf], rhs);
                    }
                }
                None if !c.partial => {
                    return Err(TwoCatError::MalformedCategory(format!(
                        "{}∘{} undefined",
                        c.mor1_name(g),
                        c.mor1_name(f)
                    )))
                }
                None => {}
            }
        }
    }
    for (label, pairs, table) in [
        ("TRIANGLE_V", c.vertical_pairs(), &c.vcomp),
        ("TRIANGLE_H", c.horizontal_pairs(), &c.hcomp),
    ] {
        for (b, a) in pairs {
            match table.get(&(b, a)) {
                Some(&ba) => {
                    let rhs = w.w2[b] + w.w2[a];
                    if !w.w2[ba].le_tol(rhs, tol) {
                        report.push(label, format!("{},{}", c.mor2_name(b), c.mor2_name(a)), w.w2[ba], rhs);
                    }
                }
                None if !c.partial => {
                    return Err(TwoCatError::MalformedCategory(format!(
                        "{label}: composite of {} and {} undefined",
                        c.mor2_name(b),
                        c.mor2_name(a)
                    )))
                }
                None => {}
            }
        }
    }
    Ok(report)
}

/// An interleaving `(g, h, alpha, beta)`: `g: A -> B`, `h: B -> A`,
/// `alpha: 1_A => h∘g`, `beta: 1_B => g∘h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoCertificate {
    pub g: usize,
    pub h: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl TwoCertificate {
    pub fn weight(&self, w: &Lawvere2Weight) -> Weight {
        w.w1[self.g].max(w.w1[self.h]).max(w.w2[self.alpha]).max(w.w2[self.beta])
    }

    /// Whether the data has the shape of an interleaving of `a` and `b`.
    pub fn verify(&self, c: &Finite2Category, a: usize, b: usize) -> bool {
        let (g, h) = (&c.mor1[self.g], &c.mor1[self.h]);
        if (g.src, g.tgt, h.src, h.tgt) != (a, b, b, a) {
            return false;
        }
        let (Some(hg), Some(gh)) = (c.compose1(self.h, self.g), c.compose1(self.g, self.h)) else {
            return false;
        };
        let (al, be) = (&c.mor2[self.alpha], &c.mor2[self.beta]);
        (al.src, al.tgt) == (c.id1[a], hg) && (be.src, be.tgt) == (c.id1[b], gh)
    }
}

fn lightest(c: &Finite2Category, w: &Lawvere2Weight, f: usize, g: usize) -> Option<usize> {
    c.hom2(f, g).iter().copied().min_by_key(|&i| (w.w2[i], i))
}

/// Every interleaving of `a` and `b`.
pub fn all_certificates(c: &Finite2Category, a: usize, b: usize) -> Vec<TwoCertificate> {
    let mut out = Vec::new();
    for &g in c.hom1(a, b) {
        for &h in c.hom1(b, a) {
            let (Some(hg), Some(gh)) = (c.compose1(h, g), c.compose1(g, h)) else { continue };
            for &alpha in c.hom2(c.id1[a], hg) {
                for &beta in c.hom2(c.id1[b], gh) {
                    out.push(TwoCertificate { g, h, alpha, beta });
                }
            }
        }
    }
    out
}

/// Least-weight interleaving of `a` and `b` by exhaustive enumeration.
pub fn best_certificate(c: &Finite2Category, w: &Lawvere2Weight, a: usize, b: usize) -> Option<(Weight, TwoCertificate)> {
    let mut best: Option<(Weight, TwoCertificate)> = None;
    let bound = |best: &Option<(Weight, TwoCertificate)>| best.map_or(Weight::INFINITY, |(v, _)| v);
    for &g in c.hom1(a, b) {
        if best.is_some() && w.w1[g] >= bound(&best) {
            continue;
        }
        for &h in c.hom1(b, a) {
            let partial = w.w1[g].max(w.w1[h]);
            if best.is_some() && partial >= bound(&best) {
                continue;
            }
            let (Some(hg), Some(gh)) = (c.compose1(h, g), c.compose1(g, h)) else { continue };
            let (Some(alpha), Some(beta)) = (lightest(c, w, c.id1[a], hg), lightest(c, w, c.id1[b], gh)) else {
                continue;
            };
            let cert = TwoCertificate { g, h, alpha, beta };
            let value = cert.weight(w);
            if best.is_none() || value < bound(&best) {
                best = Some((value, cert));
            }
        }
    }
    best
}

/// Interleaving distance of two objects: the least weight of an interleaving,
/// `+inf` when there is none.
pub fn two_cat_interleaving(c: &Finite2Category, w: &Lawvere2Weight, a: usize, b: usize) -> DistanceResult {
    match best_certificate(c, w, a, b) {
        Some((value, cert)) => DistanceResult::exact(
            value,
            "two_cat",
            Some(Certificate::TwoCat {
                g: cert.g,
                h: cert.h,
                alpha: cert.alpha,
                beta: cert.beta,
            }),
        ),
        None => DistanceResult::exact(Weight::INFINITY, "two_cat", None),
    }
}

/// `max(min W1 over a -> b, min W1 over b -> a)`.
pub fn lawvere_symmetrized(c: &Finite2Category, w: &Lawvere2Weight, a: usize, b: usize) -> Weight {
    let one_way = |x: usize, y: usize| c.hom1(x, y).iter().map(|&f| w.w1[f]).min().unwrap_or(Weight::INFINITY);
    one_way(a, b).max(one_way(b, a))
}

/// `(1_h * gamma * 1_g) • alpha`: from `alpha: 1_A => h∘g` and
/// `gamma: 1_B => e` with `e: B -> B`, the 2-morphism `1_A => h∘e∘g`.
pub fn whisker_compose(c: &Finite2Category, g: usize, gamma: usize, h: usize, alpha: usize) -> Result<usize, TwoCatError> {
    let (gm, hm) = (&c.mor1[g], &c.mor1[h]);
    let (a, b) = (gm.src, gm.tgt);
    if (hm.src, hm.tgt) != (b, a) {
        return Err(TwoCatError::ShapeMismatch(format!("{} and {} are not opposite", gm.name, hm.name)));
    }
    if c.mor2[gamma].src != c.id1[b] {
        return Err(TwoCatError::ShapeMismatch(format!("{} does not start at 1_{}", c.mor2_name(gamma), c.objects[b])));
    }
    if Some(c.mor2[alpha].tgt) != c.compose1(h, g) || c.mor2[alpha].src != c.id1[a] {
        return Err(TwoCatError::ShapeMismatch(format!("{} is not 1 => {}∘{}", c.mor2_name(alpha), hm.name, gm.name)));
    }
    let right = c
        .hcompose(gamma, c.id2[g])
        .ok_or_else(|| TwoCatError::Undefined(format!("{} * 1_{}", c.mor2_name(gamma), gm.name)))?;
    let both = c
        .hcompose(c.id2[h], right)
        .ok_or_else(|| TwoCatError::Undefined(format!("1_{} * {}", hm.name, c.mor2_name(right))))?;
    c.vcompose(both, alpha)
        .ok_or_else(|| TwoCatError::Undefined(format!("{} • {}", c.mor2_name(both), c.mor2_name(alpha))))
}

/// From an interleaving of `(A, B)` and one of `(B, C)`, the interleaving of
/// `(A, C)` built by whiskering.
pub fn compose_certificates(c: &Finite2Category, first: &TwoCertificate, second: &TwoCertificate) -> Result<TwoCertificate, TwoCatError> {
    let (g, h) = (first.g, first.h);
    let (k, l) = (second.g, second.h);
    if c.mor1[g].tgt != c.mor1[k].src {
        return Err(TwoCatError::ShapeMismatch("certificates do not share an object".into()));
    }
    let kg = c.compose1(k, g).ok_or_else(|| TwoCatError::Undefined("k∘g".into()))?;
    let hl = c.compose1(h, l).ok_or_else(|| TwoCatError::Undefined("h∘l".into()))?;
    let eps = whisker_compose(c, g, second.alpha, h, first.alpha)?;
    let eps_back = whisker_compose(c, l, first.beta, k, second.beta)?;
    let cert = TwoCertificate {
        g: kg,
        h: hl,
        alpha: eps,
        beta: eps_back,
    };
    if !cert.verify(c, c.mor1[g].src, c.mor1[k].tgt) {
        return Err(TwoCatError::ShapeMismatch("whiskered composite has the wrong boundary".into()));
    }
    Ok(cert)
}

/// A finite group acting on a finite set, with a monoidal weight on the group.
#[derive(Clone, Debug)]
pub struct WeightedGroupAction {
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
    pub weight: Vec<Weight>,
    /// `act[g][x] = g·x`.
    pub act: Vec<Vec<usize>>,
}

impl WeightedGroupAction {
    pub fn new(mul: Vec<Vec<usize>>, weight: Vec<Weight>, act: Vec<Vec<usize>>) -> Result<Self, TwoCatError> {
        let n = mul.len();
        let bad = |m: String| Err(TwoCatError::InvalidGroup(m));
        if mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("multiplication table is not n by n".into());
        }
        if weight.len() != n || act.len() != n {
            return bad("weight or action table has the wrong length".into());
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g)) else {
            return bad("no identity element".into());
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return bad(format!("not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for g in 0..n {
            match (0..n).find(|&h| mul[g][h] == identity) {
                Some(h) => inverse[g] = h,
                None => return bad(format!("{g} has no inverse")),
            }
        }
        for g in 0..n {
            if weight[g] != weight[inverse[g]] {
                return bad(format!("weight of {g} differs from that of its inverse"));
            }
        }
        let m = act.first().map_or(0, Vec::len);
        if act.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return bad("action table is ragged".into());
        }
        for x in 0..m {
            if act[identity][x] != x {
                return bad(format!("identity moves {x}"));
            }
            for g in 0..n {
                for h in 0..n {
                    if act[mul[g][h]][x] != act[g][act[h][x]] {
                        return bad(format!("action not compatible at ({g},{h},{x})"));
                    }
                }
            }
        }
        Ok(WeightedGroupAction {
            mul,
            identity,
            inverse,
            weight,
            act,
        })
    }

    /// `Z/n` acting on itself by translation, with the word metric of the
    /// given `(generator, weight)` pairs (each generator's inverse gets the
    /// same weight).
    pub fn cyclic(n: usize, generators: &[(usize, f64)]) -> Result<Self, TwoCatError> {
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens: Vec<(usize, f64)> = generators
            .iter()
            .flat_map(|&(g, w)| [(g % n, w), ((n - g % n) % n, w)])
            .collect();
        let weight = word_metric(&mul, 0, &gens);
        Self::new(mul.clone(), weight, mul)
    }

    pub fn group_len(&self) -> usize {
        self.mul.len()
    }

    pub fn set_len(&self) -> usize {
        self.act.first().map_or(0, Vec::len)
    }
}

/// Word-metric weights `W(g)` = least total generator weight of a word for
/// `g`, by Dijkstra on the Cayley graph. Unreachable elements get `+inf`.
pub fn word_metric(mul: &[Vec<usize>], identity: usize, generators: &[(usize, f64)]) -> Vec<Weight> {
    let n = mul.len();
    let mut dist = vec![Weight::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[identity] = Weight::ZERO;
    heap.push(Reverse((Weight::ZERO, identity)));
    while let Some(Reverse((d, g))) = heap.pop() {
        if d > dist[g] {
            continue;
        }
        for &(s, w) in generators {
            let next = mul[s][g];
            let nd = d + Weight::of(w);
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(Reverse((nd, next)));
            }
        }
    }
    dist
}

/// `min { W(g) : g·x = y }`, `+inf` when `y` is outside the orbit of `x`.
pub fn action_groupoid_interleaving(action: &WeightedGroupAction, x: usize, y: usize) -> Weight {
    (0..action.group_len())
        .filter(|&g| action.act[g][x] == y)
        .map(|g| action.weight[g])
        .min()
        .unwrap_or(Weight::INFINITY)
}

/// What the group acts on in [`build_action_groupoid_2cat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionTarget {
    /// The set as a discrete category, the delooping carrying identity
    /// 2-morphisms only.
    Discrete,
    /// The action groupoid, the delooping carrying one 2-morphism between any
    /// two group elements.
    Groupoid,
}

/// The 2-weighted 2-category of the action 2-functor. 1-morphisms `x -> y`
/// are pairs `(g, phi)` with `phi: x -> g·y`; they weigh `W(g)`, and every
/// 2-morphism weighs zero.
pub fn build_action_groupoid_2cat(
    action: &WeightedGroupAction,
    target: ActionTarget,
    cap: usize,
) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
    let (n, m) = (action.group_len(), action.set_len());
    let e = action.identity;
    // A morphism of the target category x -> z is labelled by k with k·x = z.
    let labels = |x: usize, z: usize| -> Vec<usize> {
        match target {
            ActionTarget::Discrete => {
                if x == z {
                    vec![e]
                } else {
                    Vec::new()
                }
            }
            ActionTarget::Groupoid => (0..n).filter(|&k| action.act[k][x] == z).collect(),
        }
    };
    // Each 1-morphism is (g, k, x, y).
    let mut mor = Vec::new();
    let mut key = Vec::new();
    let mut index = HashMap::new();
    for x in 0..m {
        for y in 0..m {
            for g in 0..n {
                for k in labels(x, action.act[g][y]) {
                    index.insert((g, k, x, y), mor.len());
                    mor.push(Arrow::new(format!("({g},{k}):{x}>{y}"), x, y));
                    key.push((g, k, x, y));
                    if mor.len() > cap {
                        return Err(TwoCatError::SizeCap { count: mor.len(), cap });
                    }
                }
            }
        }
    }
    let mut compose = HashMap::new();
    for (fi, &(g, k, x, y)) in key.iter().enumerate() {
        for (hi, &(h, k2, y2, z)) in key.iter().enumerate() {
            if y2 != y {
                continue;
            }
            // (h, psi) ∘ (g, phi) = (gh, T_g(psi) ∘ phi); T_g relabels k2 as g k2 g^-1.
            let relabel = action.mul[action.mul[g][k2]][action.inverse[g]];
            let label = action.mul[relabel][k];
            let gh = action.mul[g][h];
            compose.insert((hi, fi), index[&(gh, label, x, z)]);
        }
    }
    let identity: Vec<usize> = (0..m).map(|x| index[&(e, e, x, x)]).collect();
    let base = Finite1Category {
        objects: (0..m).map(|x| x.to_string()).collect(),
        mor,
        identity: identity.clone(),
        compose,
    };
    let w1 = key.iter().map(|&(g, ..)| action.weight[g]).collect();
    Finite2Category::thin(&base, w1, |f, g| {
        if f == g {
            return Some((format!("1_{f}"), Weight::ZERO));
        }
        let (h, k, x, y) = key[g];
        // The hat 2-morphism (e, 1_x) => (h, T(alpha_{e,h})_x) needs a 2-cell e => h.
        let from_identity = identity.contains(&f) && key[f].2 == x;
        (target == ActionTarget::Groupoid && from_identity && x == y && k == h).then(|| (format!("^{g}"), Weight::ZERO))
    })
}

/// Delooping of a finite monoid with only identity 2-morphisms.
pub fn delooping(names: &[String], mul: &[Vec<usize>], identity: usize, weight: Vec<Weight>) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
    let base = Finite1Category::delooping(names, mul, identity);
    Finite2Category::thin(&base, weight, |f, g| (f == g).then(|| (format!("1_{f}"), Weight::ZERO)))
}

/// A unique 2-morphism between every pair of parallel 1-morphisms.
pub fn indiscrete(base: &Finite1Category, w1: Vec<Weight>, w2: impl Fn(usize, usize) -> Weight) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
    Finite2Category::thin(base, w1, |f, g| Some((format!("{f}=>{g}"), if f == g { Weight::ZERO } else { w2(f, g) })))
}

/// The fragment of the category of metric spaces and set maps on two spaces:
/// 1-morphisms are all maps, 2-morphisms are identities plus one `1_X => g`
/// for each self-map `g`. `W1(f) = dis(f)` and `W2(1_X => g) = sup d(x, g x)`,
/// both multiplied by `scale`.
pub fn gh_fragment(x: &FiniteMetricSpace, y: &FiniteMetricSpace, scale: f64) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
    let spaces = [x, y];
    let mut mor = Vec::new();
    let mut maps: Vec<PointMap> = Vec::new();
    let mut index: HashMap<(usize, usize, PointMap), usize> = HashMap::new();
    for s in 0..2 {
        for t in 0..2 {
            for f in all_maps(spaces[s].len(), spaces[t].len()) {
                index.insert((s, t, f.clone()), mor.len());
                mor.push(Arrow::new(format!("{}{:?}", ["X", "Y"][s], f), s, t));
                maps.push(f);
            }
        }
    }
    let mut compose = HashMap::new();
    for (fi, f) in mor.iter().enumerate() {
        for (gi, g) in mor.iter().enumerate() {
            if g.src == f.tgt {
                let gf: PointMap = maps[fi].iter().map(|&p| maps[gi][p]).collect();
                compose.insert((gi, fi), index[&(f.src, g.tgt, gf)]);
            }
        }
    }
    let identity: Vec<usize> = (0..2).map(|s| index[&(s, s, (0..spaces[s].len()).collect())]).collect();
    let w1 = mor
        .iter()
        .zip(&maps)
        .map(|(a, f)| Weight::of(scale * distortion(f, spaces[a.src], spaces[a.tgt])))
        .collect();
    let base = Finite1Category {
        objects: vec!["X".into(), "Y".into()],
        mor,
        identity: identity.clone(),
        compose,
    };
    Finite2Category::thin(&base, w1, |f, g| {
        if f == g {
            return Some((format!("1_{f}"), Weight::ZERO));
        }
        let s = base.mor[f].src;
        (f == identity[s] && base.mor[g].src == s && base.mor[g].tgt == s).then(|| {
            let space = spaces[s];
            let moved = (0..space.len()).map(|p| space.d(p, maps[g][p])).fold(0.0, f64::max);
            (format!("^{g}"), Weight::of(scale * moved))
        })
    })
}

/// A finite locally persistent category: hom sets graded by a finite grid of
/// nonnegative reals, composition adding grades (defined when the sum is on
/// the grid) and shift maps raising grades.
#[derive(Clone, Debug)]
pub struct FiniteLPC {
    pub objects: Vec<String>,
    pub grades: Vec<f64>,
    pub elems: Vec<LpcElem>,
    pub identity: Vec<usize>,
    /// `compose[(g, f)] = g ∘ f`.
    pub compose: HashMap<(usize, usize), usize>,
    /// `shift[(f, t)] = S_{s,t}(f)` for grade index `t >= s`.
    pub shift: HashMap<(usize, usize), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpcElem {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub grade: usize,
}

impl FiniteLPC {
    pub fn new(
        objects: Vec<String>,
        grades: Vec<f64>,
        elems: Vec<LpcElem>,
        identity: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
        shift: HashMap<(usize, usize), usize>,
    ) -> Result<Self, TwoCatError> {
        let lpc = FiniteLPC {
            objects,
            grades,
            elems,
            identity,
            compose,
            shift,
        };
        lpc.validate()?;
        Ok(lpc)
    }

    pub fn grade_index(&self, value: f64) -> Option<usize> {
        self.grades.iter().position(|&g| (g - value).abs() <= 1e-12)
    }

    fn sum_grade(&self, s: usize, t: usize) -> Option<usize> {
        self.grade_index(self.grades[s] + self.grades[t])
    }

    pub fn grade(&self, f: usize) -> f64 {
        self.grades[self.elems[f].grade]
    }

    pub fn hom(&self, a: usize, b: usize, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.elems
            .iter()
            .enumerate()
            .filter(move |(_, e)| (e.src, e.tgt, e.grade) == (a, b, s))
            .map(|(i, _)| i)
    }

    fn validate(&self) -> Result<(), TwoCatError> {
        let bad = |m: String| Err(TwoCatError::MalformedLPC(m));
        if self.grades.first() != Some(&0.0) || self.grades.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("grades must start at 0 and increase".into());
        }
        if self.identity.len() != self.objects.len() {
            return bad("one identity per object required".into());
        }
        let ne = self.elems.len();
        for e in &self.elems {
            if e.src >= self.objects.len() || e.tgt >= self.objects.len() || e.grade >= self.grades.len() {
                return bad(format!("{} is out of range", e.name));
            }
        }
        for (a, &i) in self.identity.iter().enumerate() {
            let e = &self.elems[i];
            if (e.src, e.tgt, e.grade) != (a, a, 0) {
                return bad(format!("identity of {} is not in grade 0 of its endomorphisms", self.objects[a]));
            }
        }
        let name = |f: usize| &self.elems[f].name;
        for f in 0..ne {
            let ef = &self.elems[f];
            for g in (0..ne).filter(|&g| self.elems[g].src == ef.tgt) {
                let eg = &self.elems[g];
                let sum = self.sum_grade(ef.grade, eg.grade);
                match (self.compose.get(&(g, f)), sum) {
                    (Some(&gf), Some(u)) => {
                        let e = &self.elems[gf];
                        if (e.src, e.tgt, e.grade) != (ef.src, eg.tgt, u) {
                            return bad(format!("{}∘{} lands in the wrong graded hom", name(g), name(f)));
                        }
                    }
                    (None, Some(_)) => return bad(format!("{}∘{} missing", name(g), name(f))),
                    (Some(_), None) => return bad(format!("{}∘{} defined off the grid", name(g), name(f))),
                    (None, None) => {}
                }
            }
            if self.compose.get(&(self.identity[ef.tgt], f)) != Some(&f) || self.compose.get(&(f, self.identity[ef.src])) != Some(&f) {
                return bad(format!("identities are not units for {}", name(f)));
            }
            for t in ef.grade..self.grades.len() {
                let Some(&sf) = self.shift.get(&(f, t)) else {
                    return bad(format!("shift of {} to grade {} missing", name(f), self.grades[t]));
                };
                let e = &self.elems[sf];
                if (e.src, e.tgt, e.grade) != (ef.src, ef.tgt, t) {
                    return bad(format!("shift of {} lands in the wrong graded hom", name(f)));
                }
                if t == ef.grade && sf != f {
                    return bad(format!("S_(s,s) moves {}", name(f)));
                }
                for u in t..self.grades.len() {
                    if self.shift.get(&(sf, u)) != self.shift.get(&(f, u)) {
                        return bad(format!("shifts of {} do not compose", name(f)));
                    }
                }
            }
        }
        // Associativity and compatibility of composition with shifts.
        for (&(g, f), &gf) in &self.compose {
            for h in (0..ne).filter(|&h| self.elems[h].src == self.elems[g].tgt) {
                if let (Some(&hg), Some(&h_gf)) = (self.compose.get(&(h, g)), self.compose.get(&(h, gf))) {
                    if self.compose.get(&(hg, f)) != Some(&h_gf) {
                        return bad(format!("composition not associative at {},{},{}", name(h), name(g), name(f)));
                    }
                }
            }
            let (s, t) = (self.elems[f].grade, self.elems[g].grade);
            for s2 in s..self.grades.len() {
                let Some(u) = self.sum_grade(s2, t) else { continue };
                let lhs = self.compose.get(&(g, self.shift[&(f, s2)]));
                if lhs != self.shift.get(&(gf, u)) {
                    return bad(format!("shift of {} does not commute with composing {}", name(f), name(g)));
                }
            }
            for t2 in t..self.grades.len() {
                let Some(u) = self.sum_grade(s, t2) else { continue };
                let lhs = self.compose.get(&(self.shift[&(g, t2)], f));
                if lhs != self.shift.get(&(gf, u)) {
                    return bad(format!("shift of {} does not commute with composing {}", name(g), name(f)));
                }
            }
        }
        Ok(())
    }

    /// The category of interval modules `[a, b)` over the integers, graded by
    /// shift: `hom(A, B)_s` holds the zero morphism and, when one exists, the
    /// nonzero morphism `A -> B[s]`, where `B[s](p) = B(p + s)`.
    pub fn of_intervals(intervals: &[(i64, i64)], grades: &[i64]) -> Result<Self, TwoCatError> {
        let nonempty = |(a, b): (i64, i64)| a < b;
        let shifted = |(c, d): (i64, i64), s: i64| (c - s, d - s);
        let meet = |xs: &[(i64, i64)]| -> bool {
            let lo = xs.iter().map(|x| x.0).max().unwrap();
            let hi = xs.iter().map(|x| x.1).min().unwrap();
            lo < hi
        };
        let hom_exists = |a: (i64, i64), b: (i64, i64)| nonempty(a) && nonempty(b) && b.0 <= a.0 && a.0 < b.1 && b.1 <= a.1;
        let n = intervals.len();
        let mut elems = Vec::new();
        // (a, b, s, nonzero) -> element
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for (si, &s) in grades.iter().enumerate() {
                    index.insert((a, b, si, false), elems.len());
                    elems.push(LpcElem {
                        name: format!("0[{a}>{b}@{s}]"),
                        src: a,
                        tgt: b,
                        grade: si,
                    });
                    if hom_exists(intervals[a], shifted(intervals[b], s)) {
                        index.insert((a, b, si, true), elems.len());
                        elems.push(LpcElem {
                            name: format!("c[{a}>{b}@{s}]"),
                            src: a,
                            tgt: b,
                            grade: si,
                        });
                    }
                }
            }
        }
        let kind = |i: usize| index.get(&(elems[i].src, elems[i].tgt, elems[i].grade, true)) == Some(&i);
        let grade_of = |v: i64| grades.iter().position(|&g| g == v);
        let mut compose = HashMap::new();
        for f in 0..elems.len() {
            for g in 0..elems.len() {
                let (ef, eg) = (&elems[f], &elems[g]);
                if eg.src != ef.tgt {
                    continue;
                }
                let (s, t) = (grades[ef.grade], grades[eg.grade]);
                let Some(u) = grade_of(s + t) else { continue };
                let nonzero = kind(f)
                    && kind(g)
                    && meet(&[intervals[ef.src], shifted(intervals[ef.tgt], s), shifted(intervals[eg.tgt], s + t)]);
                compose.insert((g, f), index[&(ef.src, eg.tgt, u, nonzero)]);
            }
        }
        let mut shift = HashMap::new();
        for (f, ef) in elems.iter().enumerate() {
            let s = grades[ef.grade];
            for (ti, &t) in grades.iter().enumerate().skip(ef.grade) {
                let target = intervals[ef.tgt];
                let nonzero = kind(f) && meet(&[intervals[ef.src], shifted(target, s), shifted(target, t)]);
                shift.insert((f, ti), index[&(ef.src, ef.tgt, ti, nonzero)]);
            }
        }
        let identity = (0..n)
            .map(|a| {
                let nonzero = nonempty(intervals[a]);
                index[&(a, a, 0, nonzero)]
            })
            .collect();
        Self::new(
            intervals.iter().map(|(a, b)| format!("[{a},{b})")).collect(),
            grades.iter().map(|&g| g as f64).collect(),
            elems,
            identity,
            compose,
            shift,
        )
    }

    /// Up to `max_objects` random intervals with endpoints in `0..=8`.
    pub fn random_intervals(max_objects: usize, grades: &[i64], rng: &mut impl rand::Rng) -> Result<Self, TwoCatError> {
        let n = rng.gen_range(1..=max_objects);
        let intervals: Vec<(i64, i64)> = (0..n)
            .map(|_| {
                let a = rng.gen_range(0..=5);
                (a, a + rng.gen_range(0..=3))
            })
            .collect();
        Self::of_intervals(&intervals, grades)
    }
}

/// `min max{s, t}` over `f ∈ hom(A,B)_s`, `g ∈ hom(B,A)_t` with
/// `g∘f = S_{0,s+t}(1_A)` and `f∘g = S_{0,s+t}(1_B)`.
pub fn lpc_interleaving(d: &FiniteLPC, a: usize, b: usize) -> Weight {
    let mut best = Weight::INFINITY;
    for s in 0..d.grades.len() {
        for t in 0..d.grades.len() {
            let Some(u) = d.sum_grade(s, t) else { continue };
            let value = Weight::of(d.grades[s].max(d.grades[t]));
            if value >= best {
                continue;
            }
            let unit_a = d.shift[&(d.identity[a], u)];
            let unit_b = d.shift[&(d.identity[b], u)];
            let found = d.hom(a, b, s).any(|f| {
                d.hom(b, a, t)
                    .any(|g| d.compose.get(&(g, f)) == Some(&unit_a) && d.compose.get(&(f, g)) == Some(&unit_b))
            });
            if found {
                best = value;
            }
        }
    }
    best
}

/// 1-morphisms are the graded elements `(g, s)` with weight `s`; a unique
/// weightless 2-morphism `(g, s) => (h, t)` exists iff `s <= t` and
/// `S_{s,t}(g) = h`.
pub fn lpc_to_2cat(d: &FiniteLPC) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
    let base = Finite1Category {
        objects: d.objects.clone(),
        mor: d.elems.iter().map(|e| Arrow::new(e.name.clone(), e.src, e.tgt)).collect(),
        identity: d.identity.clone(),
        compose: d.compose.clone(),
    };
    let w1 = (0..d.elems.len()).map(|f| Weight::of(d.grade(f))).collect();
    Finite2Category::thin(&base, w1, |f, g| {
        let (ef, eg) = (&d.elems[f], &d.elems[g]);
        (ef.grade <= eg.grade && d.shift.get(&(f, eg.grade)) == Some(&g)).then(|| (format!("{}=>{}", ef.name, eg.name), Weight::ZERO))
    })
}

/// A strict 2-functor between finite 2-categories, given on objects,
/// 1-morphisms and 2-morphisms.
#[derive(Clone, Debug)]
pub struct Functor2 {
    pub obj: Vec<usize>,
    pub mor1: Vec<usize>,
    pub mor2: Vec<usize>,
}

impl Functor2 {
    pub fn new(source: &Finite2Category, target: &Finite2Category, obj: Vec<usize>, mor1: Vec<usize>, mor2: Vec<usize>) -> Result<Self, TwoCatError> {
        let fail = |m: String| Err(TwoCatError::NotAFunctor(m));
        if obj.len() != source.objects.len() || mor1.len() != source.mor1.len() || mor2.len() != source.mor2.len() {
            return fail("tables do not cover the source".into());
        }
        if obj.iter().any(|&o| o >= target.objects.len())
            || mor1.iter().any(|&f| f >= target.mor1.len())
            || mor2.iter().any(|&a| a >= target.mor2.len())
        {
            return fail("image out of range".into());
        }
        for (f, m) in source.mor1.iter().enumerate() {
            let t = &target.mor1[mor1[f]];
            if (t.src, t.tgt) != (obj[m.src], obj[m.tgt]) {
                return fail(format!("{} changes endpoints", m.name));
            }
        }
        for (a, m) in source.mor2.iter().enumerate() {
            let t = &target.mor2[mor2[a]];
            if (t.src, t.tgt) != (mor1[m.src], mor1[m.tgt]) {
                return fail(format!("{} changes endpoints", m.name));
            }
        }
        for (o, &f) in source.id1.iter().enumerate() {
            if mor1[f] != target.id1[obj[o]] {
                return fail(format!("identity of {} not preserved", source.objects[o]));
            }
        }
        for (f, &a) in source.id2.iter().enumerate() {
            if mor2[a] != target.id2[mor1[f]] {
                return fail(format!("identity 2-morphism of {} not preserved", source.mor1[f].name));
            }
        }
        for (&(g, f), &gf) in &source.compose1 {
            if target.compose1(mor1[g], mor1[f]) != Some(mor1[gf]) {
                return fail(format!("{}∘{} not preserved", source.mor1[g].name, source.mor1[f].name));
            }
        }
        for (label, src_table, tgt_table) in [("•", &source.vcomp, &target.vcomp), ("*", &source.hcomp, &target.hcomp)] {
            for (&(b, a), &ba) in src_table {
                if tgt_table.get(&(mor2[b], mor2[a])) != Some(&mor2[ba]) {
                    return fail(format!("{}{label}{} not preserved", source.mor2[b].name, source.mor2[a].name));
                }
            }
        }
        Ok(Functor2 { obj, mor1, mor2 })
    }

    pub fn identity(c: &Finite2Category) -> Self {
        Functor2 {
            obj: (0..c.objects.len()).collect(),
            mor1: (0..c.mor1.len()).collect(),
            mor2: (0..c.mor2.len()).collect(),
        }
    }
}

/// `W'1(F f) <= W1(f)` and `W'2(F a) <= W2(a)` on every morphism.
pub fn check_lipschitz(functor: &Functor2, w: &Lawvere2Weight, w_target: &Lawvere2Weight, tol: f64) -> AuditReport {
    let mut report = AuditReport::new();
    for (f, &img) in functor.mor1.iter().enumerate() {
        if !w_target.w1[img].le_tol(w.w1[f], tol) {
            report.push("LIPSCHITZ_1", format!("mor1 {f}"), w_target.w1[img], w.w1[f]);
        }
    }
    for (a, &img) in functor.mor2.iter().enumerate() {
        if !w_target.w2[img].le_tol(w.w2[a], tol) {
            report.push("LIPSCHITZ_2", format!("mor2 {a}"), w_target.w2[img], w.w2[a]);
        }
    }
    report
}

/// `d'(F A, F B) <= d(A, B)` on every pair of objects.
pub fn stability_test(
    functor: &Functor2,
    source: (&Finite2Category, &Lawvere2Weight),
    target: (&Finite2Category, &Lawvere2Weight),
    tol: f64,
) -> AuditReport {
    let mut report = AuditReport::new();
    let n = source.0.objects.len();
    for a in 0..n {
        for b in 0..n {
            let d = two_cat_interleaving(source.0, source.1, a, b).value;
            let d_img = two_cat_interleaving(target.0, target.1, functor.obj[a], functor.obj[b]).value;
            if !d_img.le_tol(d, tol) {
                report.push("STABILITY", format!("{}|{}", source.0.objects[a], source.0.objects[b]), d_img, d);
            }
        }
    }
    report
}

/// Writes the sectioned text form read by [`parse_2category`].
pub fn emit_2category(c: &Finite2Category, w: &Lawvere2Weight) -> String {
    let mut out = String::new();
    let token = |s: &str| s.replace(char::is_whitespace, "_");
    writeln!(out, "OBJECTS").unwrap();
    for o in &c.objects {
        writeln!(out, "{}", token(o)).unwrap();
    }
    writeln!(out, "MOR1").unwrap();
    for (i, f) in c.mor1.iter().enumerate() {
        let id = if c.id1[f.src] == i { " id" } else { "" };
        writeln!(out, "{} {} {} {}{id}", token(&f.name), f.src, f.tgt, w.w1[i]).unwrap();
    }
    writeln!(out, "COMPOSE1").unwrap();
    let mut rows: Vec<_> = c.compose1.iter().collect();
    rows.sort();
    for ((g, f), gf) in rows {
        writeln!(out, "{g} {f} {gf}").unwrap();
    }
    writeln!(out, "MOR2").unwrap();
    for (i, a) in c.mor2.iter().enumerate() {
        let id = if c.id2[a.src] == i { " id" } else { "" };
        writeln!(out, "{} {} {} {}{id}", token(&a.name), a.src, a.tgt, w.w2[i]).unwrap();
    }
    for (label, table) in [("VCOMP", &c.vcomp), ("HCOMP", &c.hcomp)] {
        writeln!(out, "{label}").unwrap();
        let mut rows: Vec<_> = table.iter().collect();
        rows.sort();
        for ((b, a), ba) in rows {
            writeln!(out, "{b} {a} {ba}").unwrap();
        }
    }
    if c.partial {
        writeln!(out, "PARTIAL").unwrap();
    }
    out
}

/// Reads the sectioned text form. Blank lines and `#` comments are ignored.
pub fn parse_2category(text: &str) -> Result<(Finite2Category, Lawvere2Weight), TwoCatError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Objects,
        Mor1,
        Compose1,
        Mor2,
        Vcomp,
        Hcomp,
    }
    let mut section = Section::None;
    let mut objects = Vec::new();
    let (mut mor1, mut w1, mut id1) = (Vec::new(), Vec::new(), HashMap::new());
    let (mut mor2, mut w2, mut id2) = (Vec::new(), Vec::new(), HashMap::new());
    let (mut compose1, mut vcomp, mut hcomp) = (HashMap::new(), HashMap::new(), HashMap::new());
    let mut partial = false;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| TwoCatError::Parse {
            line: no + 1,
            msg: msg.to_string(),
        };
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(&format!("bad index {s:?}")));
        let weight = |s: &str| -> Result<Weight, TwoCatError> {
            let v = if s == "inf" { f64::INFINITY } else { s.parse::<f64>().map_err(|_| err(&format!("bad weight {s:?}")))? };
            Weight::new(v).map_err(|e| err(&e.to_string()))
        };
        match line {
            "OBJECTS" => section = Section::Objects,
            "MOR1" => section = Section::Mor1,
            "COMPOSE1" => section = Section::Compose1,
            "MOR2" => section = Section::Mor2,
            "VCOMP" => section = Section::Vcomp,
            "HCOMP" => section = Section::Hcomp,
            "PARTIAL" => partial = true,
            _ => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                match section {
                    Section::None => return Err(err("data before the first section")),
                    Section::Objects => objects.push(toks[0].to_string()),
                    Section::Mor1 | Section::Mor2 => {
                        if toks.len() < 4 || toks.len() > 5 || (toks.len() == 5 && toks[4] != "id") {
                            return Err(err("expected: name src tgt weight [id]"));
                        }
                        let arrow = Arrow::new(toks[0], num(toks[1])?, num(toks[2])?);
                        let (mors, ws, ids) = if section == Section::Mor1 {
                            (&mut mor1, &mut w1, &mut id1)
                        } else {
                            (&mut mor2, &mut w2, &mut id2)
                        };
                        if toks.len() == 5 {
                            ids.insert(arrow.src, mors.len());
                        }
                        mors.push(arrow);
                        ws.push(weight(toks[3])?);
                    }
                    Section::Compose1 | Section::Vcomp | Section::Hcomp => {
                        if toks.len() != 3 {
                            return Err(err("expected: second first composite"));
                        }
                        let table = match section {
                            Section::Compose1 => &mut compose1,
                            Section::Vcomp => &mut vcomp,
                            _ => &mut hcomp,
                        };
                        table.insert((num(toks[0])?, num(toks[1])?), num(toks[2])?);
                    }
                }
            }
        }
    }
    let missing = |what: &str, i: usize| TwoCatError::MalformedCategory(format!("no identity marked for {what} {i}"));
    let id1 = (0..objects.len()).map(|o| id1.get(&o).copied().ok_or_else(|| missing("object", o))).collect::<Result<Vec<_>, _>>()?;
    let id2 = (0..mor1.len()).map(|f| id2.get(&f).copied().ok_or_else(|| missing("1-morphism", f))).collect::<Result<Vec<_>, _>>()?;
    let c = Finite2Category::new(objects, mor1, id1, compose1, mor2, id2, vcomp, hcomp, partial)?;
    Ok((c, Lawvere2Weight { w1, w2 }))
}

/// The finite weighted 2-categories used by the audits.
pub fn default_instances() -> Vec<(String, Finite2Category, Lawvere2Weight)> {
    use rand::SeedableRng;
    let mut out = Vec::new();
    let z4 = WeightedGroupAction::cyclic(4, &[(1, 1.0)]).expect("cyclic group");
    let names: Vec<String> = (0..4).map(|g| g.to_string()).collect();
    let (c, w) = delooping(&names, &z4.mul, 0, z4.weight.clone()).expect("delooping");
    out.push(("delooping Z/4".to_string(), c, w));

    let base = Finite1Category::codiscrete(4);
    let points: [f64; 4] = [0.0, 1.0, 2.5, 4.0];
    let w1 = base.mor.iter().map(|f| Weight::of((points[f.src] - points[f.tgt]).abs())).collect();
    let (c, w) = indiscrete(&base, w1, |_, _| Weight::ZERO).expect("indiscrete");
    out.push(("indiscrete line".to_string(), c, w));

    let z6 = WeightedGroupAction::cyclic(6, &[(1, 1.0), (2, 1.5)]).expect("cyclic group");
    let (c, w) = build_action_groupoid_2cat(&z6, ActionTarget::Discrete, DEFAULT_MOR1_CAP).expect("action 2-category");
    out.push(("action Z/6 discrete".to_string(), c, w));
    let (c, w) = build_action_groupoid_2cat(&z4, ActionTarget::Groupoid, DEFAULT_MOR1_CAP).expect("action 2-category");
    out.push(("action Z/4 groupoid".to_string(), c, w));

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for i in 0..3 {
        let lpc = FiniteLPC::random_intervals(4, &[0, 1, 2, 3], &mut rng).expect("interval LPC");
        let (c, w) = lpc_to_2cat(&lpc).expect("LPC 2-category");
        out.push((format!("interval LPC {i}"), c, w));
    }
    let x = FiniteMetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
    let y = FiniteMetricSpace::pair(2.0).unwrap();
    let (c, w) = gh_fragment(&x, &y, 1.0).expect("GH fragment");
    out.push(("GH fragment".to_string(), c, w));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::DEFAULT_TOL;

    fn cyclic_delooping(n: usize) -> (Finite2Category, Lawvere2Weight) {
        let g = WeightedGroupAction::cyclic(n, &[(1, 1.0)]).unwrap();
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        delooping(&names, &g.mul, 0, g.weight.clone()).unwrap()
    }

    #[test]
    fn delooping_validates() {
        let (c, w) = cyclic_delooping(5);
        assert!(!c.partial);
        assert!(validate_2category(&c).is_empty());
        assert!(audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap().is_empty());
        assert_eq!(two_cat_interleaving(&c, &w, 0, 0).value, Weight::ZERO);
    }

    #[test]
    fn indiscrete_validates_and_matches_lawvere() {
        let base = Finite1Category::codiscrete(3);
        let pts: [f64; 3] = [0.0, 1.0, 3.0];
        let w1 = base.mor.iter().map(|f| Weight::of((pts[f.src] - pts[f.tgt]).abs())).collect();
        let (c, w) = indiscrete(&base, w1, |_, _| Weight::ZERO).unwrap();
        assert!(validate_2category(&c).is_empty());
        for a in 0..3 {
            for b in 0..3 {
                let d = two_cat_interleaving(&c, &w, a, b).value;
                assert_eq!(d, lawvere_symmetrized(&c, &w, a, b));
                assert_eq!(d, Weight::of((pts[a] - pts[b]).abs()));
            }
        }
    }

    #[test]
    fn lawvere_two_arrows() {
        // A -> B weighs 3, B -> A weighs 5.
        let mut base = Finite1Category {
            objects: vec!["A".into(), "B".into()],
            mor: vec![Arrow::new("1A", 0, 0), Arrow::new("1B", 1, 1), Arrow::new("f", 0, 1), Arrow::new("g", 1, 0)],
            identity: vec![0, 1],
            compose: HashMap::new(),
        };
        // Loops g∘f and f∘g collapse to identities.
        for (k, v) in [((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2), ((3, 1), 3), ((0, 3), 3), ((3, 2), 0), ((2, 3), 1)] {
            base.compose.insert(k, v);
        }
        let w1 = vec![Weight::ZERO, Weight::ZERO, Weight::of(3.0), Weight::of(5.0)];
        let (c, w) = indiscrete(&base, w1, |_, _| Weight::ZERO).unwrap();
        assert!(validate_2category(&c).is_empty());
        assert_eq!(lawvere_symmetrized(&c, &w, 0, 1), Weight::of(5.0));
        assert_eq!(two_cat_interleaving(&c, &w, 0, 1).value, Weight::of(5.0));
        // Positive 2-weights can only increase the interleaving distance.
        let (c, w) = indiscrete(&base, w.w1.clone(), |_, _| Weight::of(7.0)).unwrap();
        assert!(lawvere_symmetrized(&c, &w, 0, 1) <= two_cat_interleaving(&c, &w, 0, 1).value);
    }

    #[test]
    fn broken_interchange_is_reported() {
        let base = Finite1Category::codiscrete(2);
        let (c, _) = indiscrete(&base, vec![Weight::ZERO; 4], |_, _| Weight::ZERO).unwrap();
        // Add a second 2-morphism parallel to an identity and route one
        // horizontal composite through it.
        let mut mor2 = c.mor2.clone();
        let f = c.id1[0];
        mor2.push(Arrow::new("rogue", f, f));
        let rogue = mor2.len() - 1;
        let mut hcomp = c.hcomp.clone();
        hcomp.insert((c.id2[f], c.id2[f]), rogue);
        let broken = Finite2Category::new(
            c.objects.clone(),
            c.mor1.clone(),
            c.id1.clone(),
            c.compose1.clone(),
            mor2,
            c.id2.clone(),
            c.vcomp.clone(),
            hcomp,
            true,
        )
        .unwrap();
        let report = validate_2category(&broken);
        assert!(report.count("UNIT2_H") > 0 || report.count("INTERCHANGE") > 0, "{report}");
    }

    #[test]
    fn disconnected_objects_are_infinitely_far() {
        let z2 = WeightedGroupAction::new(
            vec![vec![0, 1], vec![1, 0]],
            vec![Weight::ZERO, Weight::of(2.0)],
            vec![vec![0, 1, 2], vec![1, 0, 2]],
        )
        .unwrap();
        let (c, w) = build_action_groupoid_2cat(&z2, ActionTarget::Discrete, DEFAULT_MOR1_CAP).unwrap();
        assert!(two_cat_interleaving(&c, &w, 0, 2).value.is_infinite());
        assert!(action_groupoid_interleaving(&z2, 0, 2).is_infinite());
        assert_eq!(two_cat_interleaving(&c, &w, 0, 1).value, Weight::of(2.0));
    }

    #[test]
    fn word_metric_on_z4() {
        let z4 = WeightedGroupAction::cyclic(4, &[(1, 1.0)]).unwrap();
        assert_eq!(z4.weight, [0.0, 1.0, 2.0, 1.0].map(Weight::of));
        assert_eq!(action_groupoid_interleaving(&z4, 0, 2), Weight::of(2.0));
        assert_eq!(action_groupoid_interleaving(&z4, 3, 3), Weight::ZERO);
        let report = crate::weight::audit_monoidal_weight(|g: &usize| z4.weight[*g], &0, &[0, 1, 2, 3], |a, b| z4.mul[*a][*b], DEFAULT_TOL);
        assert!(report.is_empty());
    }

    #[test]
    fn trivial_action_has_one_morphism() {
        let g = WeightedGroupAction::new(vec![vec![0]], vec![Weight::ZERO], vec![vec![0]]).unwrap();
        let (c, _) = build_action_groupoid_2cat(&g, ActionTarget::Groupoid, DEFAULT_MOR1_CAP).unwrap();
        assert_eq!((c.objects.len(), c.mor1.len()), (1, 1));
    }

    #[test]
    fn action_2cat_matches_orbit_formula() {
        for n in 1..=6 {
            let g = WeightedGroupAction::cyclic(n, &[(1, 1.0), (2, 1.75)]).unwrap();
            let (c, w) = build_action_groupoid_2cat(&g, ActionTarget::Discrete, DEFAULT_MOR1_CAP).unwrap();
            assert!(validate_2category(&c).is_empty());
            assert!(audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap().is_empty());
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(two_cat_interleaving(&c, &w, x, y).value, action_groupoid_interleaving(&g, x, y));
                }
            }
        }
    }

    #[test]
    fn groupoid_target_collapses_orbits() {
        let g = WeightedGroupAction::cyclic(4, &[(1, 1.0)]).unwrap();
        let (c, w) = build_action_groupoid_2cat(&g, ActionTarget::Groupoid, DEFAULT_MOR1_CAP).unwrap();
        assert!(validate_2category(&c).is_empty(), "{}", validate_2category(&c));
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(two_cat_interleaving(&c, &w, x, y).value, Weight::ZERO);
            }
        }
    }

    #[test]
    fn size_cap_is_enforced() {
        let g = WeightedGroupAction::cyclic(12, &[(1, 1.0)]).unwrap();
        assert!(matches!(
            build_action_groupoid_2cat(&g, ActionTarget::Groupoid, 100),
            Err(TwoCatError::SizeCap { .. })
        ));
    }

    #[test]
    fn free_shift_lpc() {
        // One object; x_s in grade s, x_s ∘ x_t = x_{s+t}, S_{s,t}(x_s) = x_t.
        let elems: Vec<LpcElem> = (0..3)
            .map(|s| LpcElem {
                name: format!("x{s}"),
                src: 0,
                tgt: 0,
                grade: s,
            })
            .collect();
        let mut compose = HashMap::new();
        let mut shift = HashMap::new();
        for s in 0..3 {
            for t in 0..3 {
                if s + t < 3 {
                    compose.insert((t, s), s + t);
                }
                if t >= s {
                    shift.insert((s, t), t);
                }
            }
        }
        let d = FiniteLPC::new(vec!["A".into()], vec![0.0, 1.0, 2.0], elems, vec![0], compose, shift).unwrap();
        let (c, w) = lpc_to_2cat(&d).unwrap();
        assert!(validate_2category(&c).is_empty());
        assert!(audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap().is_empty());
        assert_eq!(lpc_interleaving(&d, 0, 0), Weight::ZERO);
    }

    #[test]
    fn non_functorial_shift_is_rejected() {
        // Grid {0,1}; two elements in grade 1 and the shift of the identity
        // disagrees with composing with it.
        let elems = vec![
            LpcElem { name: "1".into(), src: 0, tgt: 0, grade: 0 },
            LpcElem { name: "u".into(), src: 0, tgt: 0, grade: 1 },
            LpcElem { name: "v".into(), src: 0, tgt: 0, grade: 1 },
        ];
        let compose: HashMap<_, _> = [((0, 0), 0), ((1, 0), 1), ((0, 1), 1), ((2, 0), 2), ((0, 2), 2)].into_iter().collect();
        let mut shift: HashMap<_, _> = [((0, 0), 0), ((0, 1), 1), ((1, 1), 1), ((2, 1), 2)].into_iter().collect();
        assert!(FiniteLPC::new(vec!["A".into()], vec![0.0, 1.0], elems.clone(), vec![0], compose.clone(), shift.clone()).is_ok());
        // S_{1,1} must be the identity.
        shift.insert((2, 1), 1);
        assert!(matches!(
            FiniteLPC::new(vec!["A".into()], vec![0.0, 1.0], elems, vec![0], compose, shift),
            Err(TwoCatError::MalformedLPC(_))
        ));
    }

    #[test]
    fn interval_lpc_examples() {
        // [0,2) and [1,3): interleaved at (1,1) and not below.
        let d = FiniteLPC::of_intervals(&[(0, 2), (1, 3)], &[0, 1, 2, 3]).unwrap();
        assert_eq!(lpc_interleaving(&d, 0, 1), Weight::of(1.0));
        // [0,6) against the empty interval: no interleaving within the grid.
        let d = FiniteLPC::of_intervals(&[(0, 6), (0, 0)], &[0, 1, 2, 3]).unwrap();
        assert!(lpc_interleaving(&d, 0, 1).is_infinite());
    }

    #[test]
    fn interval_lpc_agrees_with_its_2category() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let d = FiniteLPC::random_intervals(4, &[0, 1, 2, 3], &mut rng).unwrap();
            let (c, w) = lpc_to_2cat(&d).unwrap();
            assert!(validate_2category(&c).is_empty());
            assert!(audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap().is_empty());
            for a in 0..d.objects.len() {
                for b in 0..d.objects.len() {
                    assert_eq!(lpc_interleaving(&d, a, b), two_cat_interleaving(&c, &w, a, b).value);
                }
            }
        }
    }

    #[test]
    fn interval_lpc_bounds_real_distance() {
        use crate::interleave::{interval_distance_closed_form, ActionKind};
        use crate::pmod::IntervalModule;
        let ivs = [(0, 2), (1, 3), (0, 4), (2, 3), (1, 1), (0, 1)];
        let d = FiniteLPC::of_intervals(&ivs, &[0, 1, 2, 3]).unwrap();
        for a in 0..ivs.len() {
            for b in 0..ivs.len() {
                let module = |(x, y): (i64, i64)| {
                    if x < y {
                        IntervalModule::new(x as f64, y as f64).unwrap()
                    } else {
                        IntervalModule::empty()
                    }
                };
                let real = interval_distance_closed_form(&module(ivs[a]), &module(ivs[b]), ActionKind::Flow).unwrap();
                assert!(real <= lpc_interleaving(&d, a, b), "{:?} {:?}", ivs[a], ivs[b]);
            }
        }
    }

    #[test]
    fn gh_fragment_is_twice_altered_gh_at_unit_scale() {
        use crate::metricgh::{altered_gh, modified_gh};
        let x = FiniteMetricSpace::new(vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
        let y = FiniteMetricSpace::pair(3.0).unwrap();
        let (c, w) = gh_fragment(&x, &y, 1.0).unwrap();
        assert!(validate_2category(&c).is_empty());
        assert!(audit_lawvere_2_weight(&w, &c, DEFAULT_TOL).unwrap().is_empty());
        let d = two_cat_interleaving(&c, &w, 0, 1).value.value();
        assert_eq!(d, 2.0 * altered_gh(&x, &y).unwrap());
        let (c2, w2) = gh_fragment(&x, &y, 0.5).unwrap();
        assert_eq!(two_cat_interleaving(&c2, &w2, 0, 1).value.value(), altered_gh(&x, &y).unwrap());
        assert_eq!(lawvere_symmetrized(&c, &w, 0, 1).value(), modified_gh(&x, &y).unwrap());
    }

    #[test]
    fn whiskering_identities_gives_identity() {
        let (c, _) = cyclic_delooping(3);
        let e = c.id1[0];
        assert_eq!(whisker_compose(&c, e, c.id2[e], e, c.id2[e]).unwrap(), c.id2[e]);
    }

    #[test]
    fn whiskering_in_indiscrete_hits_the_unique_cell() {
        let base = Finite1Category::codiscrete(3);
        let (c, _) = indiscrete(&base, vec![Weight::ZERO; 9], |_, _| Weight::ZERO).unwrap();
        let g = c.hom1(0, 1)[0];
        let h = c.hom1(1, 0)[0];
        let alpha = c.hom2(c.id1[0], c.compose1(h, g).unwrap())[0];
        let gamma = c.hom2(c.id1[1], c.id1[1])[0];
        let out = whisker_compose(&c, g, gamma, h, alpha).unwrap();
        assert_eq!(c.mor2[out].src, c.id1[0]);
        assert!(whisker_compose(&c, g, gamma, g, alpha).is_err());
    }

    #[test]
    fn lpc_whiskers_add_grades() {
        let d = FiniteLPC::of_intervals(&[(0, 3), (1, 4), (2, 5)], &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        let (c, w) = lpc_to_2cat(&d).unwrap();
        let first = best_certificate(&c, &w, 0, 1).unwrap().1;
        let second = best_certificate(&c, &w, 1, 2).unwrap().1;
        let cert = compose_certificates(&c, &first, &second).unwrap();
        assert!(cert.verify(&c, 0, 2));
        assert_eq!(w.w1[cert.g], w.w1[first.g] + w.w1[second.g]);
        assert!(cert.weight(&w) <= first.weight(&w) + second.weight(&w));
    }

    #[test]
    fn emit_parse_round_trip() {
        for (_, c, w) in default_instances().into_iter().take(3) {
            let text = emit_2category(&c, &w);
            let (c2, w2) = parse_2category(&text).unwrap();
            assert_eq!(w, w2);
            assert_eq!(c.compose1, c2.compose1);
            assert_eq!(c.hcomp, c2.hcomp);
            assert_eq!(c.partial, c2.partial);
        }
        assert!(matches!(parse_2category("1 2 3\n"), Err(TwoCatError::Parse { line: 1, .. })));
    }

    #[test]
    fn identity_functor_is_lipschitz_and_stable() {
        let (c, w) = cyclic_delooping(4);
        let f = Functor2::new(&c, &c, (0..1).collect(), (0..4).collect(), (0..c.mor2.len()).collect()).unwrap();
        assert!(check_lipschitz(&f, &w, &w, DEFAULT_TOL).is_empty());
        assert!(stability_test(&f, (&c, &w), (&c, &w), DEFAULT_TOL).is_empty());
        let doubled = w.scaled(2.0);
        assert!(!check_lipschitz(&f, &w, &doubled, DEFAULT_TOL).is_empty());
    }

    #[test]
    fn non_functor_is_rejected() {
        let (c, _) = cyclic_delooping(4);
        // Sending the generator to itself but its square to 0 breaks composition.
        let mor1 = vec![0, 1, 0, 3];
        let mor2 = mor1.iter().map(|&f| c.id2[f]).collect();
        assert!(matches!(Functor2::new(&c, &c, vec![0], mor1, mor2), Err(TwoCatError::NotAFunctor(_))));
    }
}
