//! The partial action of the free group on eventually periodic points of
//! `X`, and the two groupoid models built from it: the partial
//! transformation groupoid (germs `(y, g, x)`) and the Deaconu-Renault
//! groupoid of the shift (germs `(y, m−n, x)`).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::check::{Check, Tally};
use crate::error::{Error, Result};
use crate::freegroup::{FreeGroupWord, Gen};
use crate::hull::HullElement;
use crate::periodic::EvPeriodicWord;
use crate::shift::ShiftAutomaton;
use crate::word::Letter;

/// A finite set of points of `X`: the shift orbits of some periodic seeds,
/// together with every admissible `w·x` for `|w| ≤ budget`.
#[derive(Debug, Clone)]
pub struct PointSample {
    points: Vec<EvPeriodicWord>,
    index: HashMap<EvPeriodicWord, usize>,
    budget: usize,
}

/// Letters prepended when closing a sample.
pub const DEFAULT_BUDGET: usize = 4;
/// Longest seed period; period 3 is the shortest available on some shifts.
pub const DEFAULT_MAX_PERIOD: usize = 3;
pub const DEFAULT_MAX_SEEDS: usize = 3;

impl PointSample {
    /// The sample with the default seeds and the given prepend budget.
    pub fn with_budget(aut: &ShiftAutomaton, budget: usize) -> Self {
        Self::new(aut, budget, DEFAULT_MAX_PERIOD, DEFAULT_MAX_SEEDS)
    }

    /// Seeds are the periodic points of `X` with primitive period of length
    /// at most `max_period`, in length-lex order of the period, capped at
    /// `max_seeds`.
    pub fn new(aut: &ShiftAutomaton, budget: usize, max_period: usize, max_seeds: usize) -> Self {
        let mut seeds = Vec::new();
        'outer: for p in 1..=max_period {
            for w in words_of_len(aut.num_letters(), p) {
                let Ok(x) = EvPeriodicWord::periodic(w.clone()) else {
                    continue;
                };
                if x.period().len() != p || !x.preperiod().is_empty() {
                    continue;
                }
                // One representative per orbit: the least rotation.
                if (1..p).any(|r| x.shift(r).period() < x.period()) {
                    continue;
                }
                if aut.accepts_point_from(aut.initial(), &x) {
                    seeds.push(x);
                    if seeds.len() == max_seeds {
                        break 'outer;
                    }
                }
            }
        }
        Self::from_seeds(aut, &seeds, budget)
    }

    /// Closes the given points (assumed in `X`) under the shift and under
    /// admissible prepends of up to `budget` letters.
    pub fn from_seeds(aut: &ShiftAutomaton, seeds: &[EvPeriodicWord], budget: usize) -> Self {
        let mut base: BTreeSet<EvPeriodicWord> = BTreeSet::new();
        for s in seeds {
            if !aut.accepts_point_from(aut.initial(), s) {
                continue;
            }
            for n in 0..s.lasso_len() {
                base.insert(s.shift(n));
            }
        }
        let mut all: BTreeSet<EvPeriodicWord> = base.clone();
        let mut level: Vec<EvPeriodicWord> = base.into_iter().collect();
        for _ in 0..budget {
            let mut next = Vec::new();
            for x in &level {
                for a in 0..aut.num_letters() as Letter {
                    let y = x.prepend(&[a]);
                    if aut.accepts_point_from(aut.initial(), &y) && all.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            level = next;
        }
        let points: Vec<EvPeriodicWord> = all.into_iter().collect();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PointSample { points, index, budget }
    }

    pub fn points(&self) -> &[EvPeriodicWord] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn index_of(&self, x: &EvPeriodicWord) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &EvPeriodicWord) -> bool {
        self.index.contains_key(x)
    }

    /// Points grouped by their prefix of each length up to `depth`.
    fn prefix_index(&self, depth: usize) -> HashMap<Vec<Letter>, Vec<usize>> {
        let mut idx: HashMap<Vec<Letter>, Vec<usize>> = HashMap::new();
        for (i, x) in self.points.iter().enumerate() {
            for n in 0..=depth {
                idx.entry(x.prefix(n)).or_default().push(i);
            }
        }
        idx
    }
}

fn words_of_len(k: usize, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k as Letter).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// `α_g(x)` without checking `x ∈ X`.
fn alpha(aut: &ShiftAutomaton, g: &FreeGroupWord, x: &EvPeriodicWord) -> Option<EvPeriodicWord> {
    let (u, v) = g.as_uv()?;
    alpha_uv(aut, &u, &v, x)
}

fn alpha_uv(aut: &ShiftAutomaton, u: &[Letter], v: &[Letter], x: &EvPeriodicWord) -> Option<EvPeriodicWord> {
    if !x.starts_with(v) {
        return None;
    }
    let eta = x.shift(v.len());
    if u.is_empty() {
        return Some(eta);
    }
    let y = eta.prepend(u);
    aut.accepts_point_from(aut.initial(), &y).then_some(y)
}

/// `α_g(x)`: for `g = uv⁻¹` reduced with `u, v` positive, defined iff
/// `x = vη` and `uη ∈ X`, with value `uη`. Other shapes act by the empty map.
pub fn alpha_apply(aut: &ShiftAutomaton, g: &FreeGroupWord, x: &EvPeriodicWord) -> Result<Option<EvPeriodicWord>> {
    if !aut.contains_point(x)? {
        return Err(Error::NotInShift);
    }
    Ok(alpha(aut, g, x))
}

/// The composite of the single-generator maps `α_a`, `α_a⁻¹` read right to
/// left.
fn generator_composite(aut: &ShiftAutomaton, g: &FreeGroupWord, x: &EvPeriodicWord) -> Option<EvPeriodicWord> {
    let mut cur = x.clone();
    for gen in g.gens().iter().rev() {
        cur = if gen.inv {
            alpha_uv(aut, &[], &[gen.letter], &cur)?
        } else {
            alpha_uv(aut, &[gen.letter], &[], &cur)?
        };
    }
    Some(cur)
}

/// The point map of a hull element: `vη ↦ uη` when `tη ∈ X` for all
/// `t ∈ Λ`.
pub fn psi_apply(aut: &ShiftAutomaton, e: &HullElement, x: &EvPeriodicWord) -> Option<EvPeriodicWord> {
    let HullElement::Elem { u, lambda, v } = e else {
        return None;
    };
    if !x.starts_with(v.letters()) {
        return None;
    }
    let eta = x.shift(v.len());
    let ok = lambda
        .iter()
        .all(|t| aut.accepts_point_from(aut.initial(), &eta.prepend(t.letters())));
    ok.then(|| eta.prepend(u.letters()))
}

/// An arrow of one of the two groupoid models.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Germ {
    /// `(y, g, x)` with `α_g(x) = y`.
    Pt {
        y: EvPeriodicWord,
        g: FreeGroupWord,
        x: EvPeriodicWord,
    },
    /// `(y, k, x)` with `σ^m(y) = σ^n(x)`, `m − n = k`, `(m, n)` least.
    Dr {
        y: EvPeriodicWord,
        k: i64,
        x: EvPeriodicWord,
        minrep: (usize, usize),
    },
}

impl Germ {
    pub fn unit_pt(x: EvPeriodicWord) -> Germ {
        Germ::Pt {
            y: x.clone(),
            g: FreeGroupWord::identity(),
            x,
        }
    }

    pub fn range(&self) -> &EvPeriodicWord {
        match self {
            Germ::Pt { y, .. } | Germ::Dr { y, .. } => y,
        }
    }

    pub fn source(&self) -> &EvPeriodicWord {
        match self {
            Germ::Pt { x, .. } | Germ::Dr { x, .. } => x,
        }
    }

    pub fn inverse(&self) -> Germ {
        match self {
            Germ::Pt { y, g, x } => Germ::Pt {
                y: x.clone(),
                g: g.inverse(),
                x: y.clone(),
            },
            Germ::Dr { y, k, x, minrep } => Germ::Dr {
                y: x.clone(),
                k: -k,
                x: y.clone(),
                minrep: (minrep.1, minrep.0),
            },
        }
    }

    pub fn render(&self, aut: &ShiftAutomaton) -> String {
        let a = aut.alphabet();
        match self {
            Germ::Pt { y, g, x } => format!("({}, {}, {})", y.render(a), g.render(a), x.render(a)),
            Germ::Dr { y, k, x, minrep } => format!(
                "({}, {}, {}) [m={}, n={}]",
                y.render(a),
                k,
                x.render(a),
                minrep.0,
                minrep.1
            ),
        }
    }
}

/// Least `(m, n)` with `m − n = k` and `σ^m(y) = σ^n(x)`. Valid `m` form an
/// up-set, and once both sides are past their preperiods equality no longer
/// changes, so the scan is finite.
pub fn minrep(y: &EvPeriodicWord, k: i64, x: &EvPeriodicWord) -> Option<(usize, usize)> {
    let lo = k.max(0);
    let hi = (y.preperiod().len() as i64).max(x.preperiod().len() as i64 + k).max(lo);
    (lo..=hi)
        .map(|m| (m as usize, (m - k) as usize))
        .find(|&(m, n)| y.shift(m) == x.shift(n))
}

/// `Φ(y, uv⁻¹, x) = (y, |u| − |v|, x)`.
pub fn dr_convert(aut: &ShiftAutomaton, germ: &Germ) -> Result<Germ> {
    let Germ::Pt { y, g, x } = germ else {
        return Err(Error::Invalid("dr_convert expects a transformation germ".into()));
    };
    if alpha(aut, g, x).as_ref() != Some(y) {
        return Err(Error::NotAGerm(germ.render(aut)));
    }
    let (u, v) = g.as_uv().expect("α_g(x) defined");
    let k = u.len() as i64 - v.len() as i64;
    let rep = minrep(y, k, x).ok_or_else(|| Error::NotAGerm(germ.render(aut)))?;
    Ok(Germ::Dr {
        y: y.clone(),
        k,
        x: x.clone(),
        minrep: rep,
    })
}

/// Inverse of `Φ`: from the least `(m, n)` read `u = y[..m]`, `v = x[..n]`.
pub fn dr_invert(aut: &ShiftAutomaton, germ: &Germ, sample: &PointSample) -> Result<Germ> {
    let Germ::Dr { y, k, x, minrep: given } = germ else {
        return Err(Error::Invalid("dr_invert expects a Deaconu-Renault germ".into()));
    };
    if !sample.contains(y) || !sample.contains(x) {
        return Err(Error::NotAGerm(format!("{} leaves the sample", germ.render(aut))));
    }
    let rep = minrep(y, *k, x).ok_or_else(|| Error::NotAGerm(germ.render(aut)))?;
    if rep != *given {
        return Err(Error::NotAGerm(format!(
            "{}: least representative is ({}, {})",
            germ.render(aut),
            rep.0,
            rep.1
        )));
    }
    let (u, v) = (y.prefix(rep.0), x.prefix(rep.1));
    let g = FreeGroupWord::from_uv(&u, &v);
    if g.len() != u.len() + v.len() {
        return Err(Error::Invalid(format!(
            "internal: {} not reduced",
            g.render(aut.alphabet())
        )));
    }
    Ok(Germ::Pt {
        y: y.clone(),
        g,
        x: x.clone(),
    })
}

/// `g1∘g2`; `None` when the source of `g1` is not the range of `g2`.
pub fn germ_compose(g1: &Germ, g2: &Germ) -> Result<Option<Germ>> {
    match (g1, g2) {
        (Germ::Pt { y, g, x }, Germ::Pt { y: y2, g: h, x: x2 }) => Ok((x == y2).then(|| Germ::Pt {
            y: y.clone(),
            g: g.mul(h),
            x: x2.clone(),
        })),
        (
            Germ::Dr { y, k, x, .. },
            Germ::Dr {
                y: y2, k: k2, x: x2, ..
            },
        ) => {
            if x != y2 {
                return Ok(None);
            }
            let k = k + k2;
            let rep =
                minrep(y, k, x2).ok_or_else(|| Error::Invalid("internal: composite has no representative".into()))?;
            Ok(Some(Germ::Dr {
                y: y.clone(),
                k,
                x: x2.clone(),
                minrep: rep,
            }))
        }
        _ => Err(Error::Invalid("cannot compose germs of different groupoids".into())),
    }
}

#[derive(Debug, Clone)]
pub struct GroupoidReport {
    pub sample_size: usize,
    pub budget: usize,
    pub radius: usize,
    pub germs: usize,
    pub checks: Vec<Check>,
}

impl GroupoidReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Every `uv⁻¹` in the ball of radius `radius` with `u ∈ L_X ∪ {1}`; other
/// `u` give maps with empty domain.
fn uv_elements(aut: &ShiftAutomaton, radius: usize) -> Vec<(Vec<Letter>, Vec<Letter>)> {
    let mut lang: Vec<Vec<Letter>> = vec![Vec::new()];
    lang.extend(aut.enumerate_language(radius).into_iter().map(|w| w.into_letters()));
    let all: Vec<Vec<Letter>> = (0..=radius).flat_map(|n| words_of_len(aut.num_letters(), n)).collect();
    let mut out = Vec::new();
    for u in &lang {
        for v in &all {
            if u.len() + v.len() > radius {
                continue;
            }
            if let (Some(a), Some(b)) = (u.last(), v.last()) {
                if a == b {
                    continue;
                }
            }
            out.push((u.clone(), v.clone()));
        }
    }
    out
}

/// Verifies the action and groupoid properties on a sample over the
/// free-group ball of the given radius.
pub fn groupoid_check(aut: &ShiftAutomaton, sample: &PointSample, radius: usize) -> GroupoidReport {
    let a = aut.alphabet();
    let pts = sample.points();
    let by_prefix = sample.prefix_index(radius);
    let empty: Vec<usize> = Vec::new();
    let dom = |v: &[Letter]| by_prefix.get(v).unwrap_or(&empty);
    let mut checks = Vec::new();

    // Images of every uv⁻¹ on the sample.
    let elems = uv_elements(aut, radius);
    let mut images: BTreeMap<(Vec<Letter>, Vec<Letter>), Vec<(usize, EvPeriodicWord)>> = BTreeMap::new();
    for (u, v) in &elems {
        let img: Vec<(usize, EvPeriodicWord)> = dom(v)
            .iter()
            .filter_map(|&i| alpha_uv(aut, u, v, &pts[i]).map(|y| (i, y)))
            .collect();
        images.insert((u.clone(), v.clone()), img);
    }
    let image_of = |u: &[Letter], v: &[Letter]| images.get(&(u.to_vec(), v.to_vec()));

    // Shapes: the generator-by-generator composite equals α_g on the sample
    // for every ball element, and is empty unless g = uv⁻¹.
    let mut shape = Tally::new(
        "shape",
        format!(
            "all {} reduced words of length ≤ {radius} on {} points",
            FreeGroupWord::ball(aut.num_letters(), radius).len(),
            pts.len()
        ),
    );
    shape_walk(aut, sample, radius, &image_of, &mut shape);
    checks.push(shape.finish());

    // Semi-saturation: α_g∘α_h = α_{gh} whenever gh is reduced.
    let mut semi = Tally::new("semi-saturation", format!("reduced products of length ≤ {radius}"));
    for (u, v) in &elems {
        let w: Vec<Gen> = FreeGroupWord::from_uv(u, v).gens().to_vec();
        let target: BTreeMap<usize, &EvPeriodicWord> =
            image_of(u, v).into_iter().flatten().map(|(i, y)| (*i, y)).collect();
        for split in 0..=w.len() {
            let g = FreeGroupWord::from_gens(&w[..split]);
            let h = FreeGroupWord::from_gens(&w[split..]);
            let (hu, hv) = h.as_uv().expect("suffix of uv⁻¹");
            let (gu, gv) = g.as_uv().expect("prefix of uv⁻¹");
            let mut composite = BTreeMap::new();
            if let Some(img) = image_of(&hu, &hv) {
                for (i, z) in img {
                    if let Some(y) = alpha_uv(aut, &gu, &gv, z) {
                        composite.insert(*i, y);
                    }
                }
            }
            let ok = composite.len() == target.len() && composite.iter().all(|(i, y)| target.get(i) == Some(&y));
            semi.record(ok, || format!("g = {}, h = {}", g.render(a), h.render(a)));
        }
    }
    checks.push(semi.finish());

    // Orthogonality: X_a ∩ X_b = ∅ for a ≠ b, with X_a the range of α_a
    // read off as the domain of α_a⁻¹.
    let mut orth = Tally::new("orthogonality", "all pairs of distinct letters on the sample");
    let k = aut.num_letters() as Letter;
    let range_of =
        |c: Letter| -> BTreeSet<usize> { image_of(&[], &[c]).into_iter().flatten().map(|(i, _)| *i).collect() };
    for x in 0..k {
        for y in x + 1..k {
            let (rx, ry) = (range_of(x), range_of(y));
            orth.record(rx.is_disjoint(&ry), || {
                format!("X_{} ∩ X_{} ≠ ∅", a.symbol(x), a.symbol(y))
            });
        }
    }
    checks.push(orth.finish());

    // (a) X_u ∩ X_v ≠ ∅ with |u| ≤ |v| forces u ≤ v as a prefix and X_v ⊆ X_u.
    let mut nest = Tally::new("prefix-nesting", format!("positive words of length ≤ {radius}"));
    let positives: Vec<&Vec<Letter>> = elems
        .iter()
        .filter(|(u, v)| v.is_empty() && !u.is_empty())
        .map(|(u, _)| u)
        .collect();
    let ranges: Vec<BTreeSet<usize>> = positives
        .iter()
        .map(|u| image_of(&[], u).into_iter().flatten().map(|(i, _)| *i).collect())
        .collect();
    for (i, u) in positives.iter().enumerate() {
        for (j, v) in positives.iter().enumerate() {
            if u.len() > v.len() || ranges[i].is_disjoint(&ranges[j]) {
                continue;
            }
            let ok = v.starts_with(u) && ranges[j].is_subset(&ranges[i]);
            nest.record(ok, || format!("u = {}, v = {}", a.render(u), a.render(v)));
        }
    }
    checks.push(nest.finish());

    // (b) σⁿ is the disjoint union of the α_w⁻¹ over |w| = n.
    let mut tn = Tally::new("shift-decomposition", format!("n ≤ {radius}, every sample point"));
    for n in 1..=radius {
        let words = words_of_len(aut.num_letters(), n);
        for x in pts {
            let hits: Vec<EvPeriodicWord> = words.iter().filter_map(|w| alpha_uv(aut, &[], w, x)).collect();
            let ok = hits.len() == 1 && hits[0] == x.shift(n);
            tn.record(ok, || format!("n = {n}, x = {}", x.render(a)));
        }
    }
    checks.push(tn.finish());

    // Germs whose range stays in the sample.
    let mut germs = Vec::new();
    for ((u, v), img) in &images {
        for (i, y) in img {
            if sample.contains(y) {
                germs.push(Germ::Pt {
                    y: y.clone(),
                    g: FreeGroupWord::from_uv(u, v),
                    x: pts[*i].clone(),
                });
            }
        }
    }
    let scope = format!("{} sample-interior germs, |g| ≤ {radius}", germs.len());

    let mut round = Tally::new("round-trip", scope.clone());
    let mut converted = Vec::with_capacity(germs.len());
    for g in &germs {
        let back = dr_convert(aut, g).and_then(|d| {
            let p = dr_invert(aut, &d, sample)?;
            Ok((d, p))
        });
        match back {
            Ok((d, p)) => {
                round.record(p == *g, || g.render(aut));
                converted.push(Some(d));
            }
            Err(e) => {
                round.record(false, || format!("{}: {e}", g.render(aut)));
                converted.push(None);
            }
        }
    }
    checks.push(round.finish());

    let mut inj = Tally::new("injectivity", scope.clone());
    let mut seen: HashMap<&Germ, &Germ> = HashMap::new();
    for (g, d) in germs.iter().zip(&converted) {
        if let Some(d) = d {
            let ok = seen.insert(d, g).is_none_or(|other| other == g);
            inj.record(ok, || d.render(aut));
        }
    }
    checks.push(inj.finish());

    // Functoriality over every composable pair, grouped by the middle point.
    let mut functor = Tally::new("functoriality", scope.clone());
    let mut axioms = Tally::new("groupoid-axioms", scope);
    let mut by_source: HashMap<&EvPeriodicWord, Vec<usize>> = HashMap::new();
    let mut by_range: HashMap<&EvPeriodicWord, Vec<usize>> = HashMap::new();
    for (i, g) in germs.iter().enumerate() {
        by_source.entry(g.source()).or_default().push(i);
        by_range.entry(g.range()).or_default().push(i);
    }
    for (mid, outs) in &by_source {
        let Some(ins) = by_range.get(mid) else { continue };
        for &i in outs {
            for &j in ins {
                let (g1, g2) = (&germs[i], &germs[j]);
                let (Some(d1), Some(d2)) = (&converted[i], &converted[j]) else {
                    continue;
                };
                let pt = germ_compose(g1, g2).ok().flatten();
                let dr = germ_compose(d1, d2).ok().flatten();
                let ok = match (&pt, &dr) {
                    (Some(p), Some(d)) => dr_convert(aut, p).ok().as_ref() == Some(d),
                    _ => false,
                };
                functor.record(ok, || format!("{} ∘ {}", g1.render(aut), g2.render(aut)));
            }
        }
    }
    for g in &germs {
        let inv = g.inverse();
        let ok = inv.inverse() == *g
            && germ_compose(g, &inv).ok().flatten() == Some(Germ::unit_pt(g.range().clone()))
            && germ_compose(&Germ::unit_pt(g.range().clone()), g)
                .ok()
                .flatten()
                .as_ref()
                == Some(g)
            && germ_compose(g, &Germ::unit_pt(g.source().clone()))
                .ok()
                .flatten()
                .as_ref()
                == Some(g);
        axioms.record(ok, || g.render(aut));
    }
    checks.push(functor.finish());
    checks.push(axioms.finish());

    // Consistency with the hull: α_{d(θ_μ)} = ψ_{θ_μ} on the sample.
    let mut hull = Tally::new("hull-consistency", format!("θ_μ for μ ∈ L_X, |μ| ≤ {radius}"));
    for mu in aut.enumerate_language(radius) {
        let Ok(t) = HullElement::theta(aut, &mu) else { continue };
        let g = t.d_map().expect("θ_μ is nonzero");
        for x in pts {
            let ok = alpha(aut, &g, x) == psi_apply(aut, &t, x);
            hull.record(ok, || format!("μ = {}, x = {}", aut.render(mu.letters()), x.render(a)));
        }
    }
    checks.push(hull.finish());

    GroupoidReport {
        sample_size: pts.len(),
        budget: sample.budget(),
        radius,
        germs: germs.len(),
        checks,
    }
}

/// Walks the ball by prepending generators on the left, carrying the
/// generator composite on the sample; a branch whose composite is empty
/// stays empty, so its whole subtree is counted without visiting it.
fn shape_walk<'a>(
    aut: &ShiftAutomaton,
    sample: &PointSample,
    radius: usize,
    image_of: &dyn Fn(&[Letter], &[Letter]) -> Option<&'a Vec<(usize, EvPeriodicWord)>>,
    tally: &mut Tally,
) {
    let k = aut.num_letters();
    let a = aut.alphabet();
    let start: Vec<(usize, EvPeriodicWord)> = sample.points().iter().cloned().enumerate().collect();
    let mut stack: Vec<(Vec<Gen>, Vec<(usize, EvPeriodicWord)>)> = vec![(Vec::new(), start)];
    while let Some((w, cur)) = stack.pop() {
        let g = FreeGroupWord::from_gens(&w);
        let ok = match g.as_uv() {
            Some((u, v)) => {
                let direct: Vec<(usize, EvPeriodicWord)> = image_of(&u, &v).cloned().unwrap_or_default();
                direct == cur
            }
            None => cur.is_empty(),
        };
        tally.record(ok, || g.render(a));
        if w.len() == radius {
            continue;
        }
        for c in 0..k as Letter {
            for gen in [Gen::pos(c), Gen::neg(c)] {
                if w.first() == Some(&gen.inverse()) {
                    continue;
                }
                let mut w2 = vec![gen];
                w2.extend_from_slice(&w);
                let next: Vec<(usize, EvPeriodicWord)> = cur
                    .iter()
                    .filter_map(|(i, z)| {
                        generator_composite(aut, &FreeGroupWord::from_gens(&[gen]), z).map(|y| (*i, y))
                    })
                    .collect();
                if next.is_empty() {
                    // Every left extension is empty too; count the subtree
                    // and check the uv-shaped members have empty domain.
                    let mut sub = vec![w2];
                    while let Some(s) = sub.pop() {
                        let gs = FreeGroupWord::from_gens(&s);
                        let ok = match gs.as_uv() {
                            Some((u, v)) => image_of(&u, &v).is_none_or(|img| img.is_empty()),
                            None => true,
                        };
                        tally.record(ok, || gs.render(a));
                        if s.len() < radius {
                            for c2 in 0..k as Letter {
                                for g2 in [Gen::pos(c2), Gen::neg(c2)] {
                                    if s.first() != Some(&g2.inverse()) {
                                        let mut s2 = vec![g2];
                                        s2.extend_from_slice(&s);
                                        sub.push(s2);
                                    }
                                }
                            }
                        }
                    }
                } else {
                    stack.push((w2, next));
                }
            }
        }
    }
}
