//! Covers, defect sets, the boundary hypotheses for essential tightness, and
//! the decision procedure for condition (*).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::constructible::{
    follower_of_states, interior_boundary, lambda_times, lattice, make_constructible, states_of, ConstructibleSet,
    WordSetLambda,
};
use crate::error::{Error, Result};
use crate::periodic::EvPeriodicWord;
use crate::regset::{Cardinality, RegularSet};
use crate::shift::{ShiftAutomaton, State};
use crate::word::{ExtWord, Letter, Word};

/// Renders a set as `{w1, w2, …}` listing members up to `max_len`, with its
/// size class.
pub fn render_set(aut: &ShiftAutomaton, set: &RegularSet, max_len: usize) -> String {
    let (words, cut) = set.words_up_to_limit(max_len, 32);
    let mut parts: Vec<String> = words.iter().map(|w| aut.render(w.letters())).collect();
    let card = set.cardinality();
    if cut || matches!(card, Cardinality::Infinite) || parts.len() < finite_len(card) {
        parts.push("…".into());
    }
    format!("{{{}}} ({})", parts.join(", "), card.label())
}

fn finite_len(c: &Cardinality) -> usize {
    match c {
        Cardinality::Finite(ws) => ws.len(),
        _ => 0,
    }
}

/// `X ∖ ∪ covers`, after checking that each cover member lies inside `X`.
pub fn defect_set(aut: &ShiftAutomaton, x: &ConstructibleSet, covers: &[ConstructibleSet]) -> Result<RegularSet> {
    for c in covers {
        if !c.set().is_subset(x.set())? {
            return Err(Error::NotASubset(c.render(aut)));
        }
    }
    let union = RegularSet::union_all(aut.num_letters(), covers.iter().map(|c| c.set()))?;
    x.set().difference(&union)
}

/// Outcome of the cover decision.
#[derive(Debug, Clone)]
pub enum CoverVerdict {
    /// Every nonempty constructible subset of `X` meets a candidate; the
    /// counts describe the exhausted search.
    Covered { pairs: usize, classes: usize },
    /// A nonempty constructible subset of `X` missing every candidate.
    NotCovered { witness: ConstructibleSet },
    /// The class search was unavailable and no witness exists with the
    /// extension length up to the bound.
    UnknownUpTo(usize),
}

impl CoverVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CoverVerdict::Covered { .. } => "Covered",
            CoverVerdict::NotCovered { .. } => "NotCovered",
            CoverVerdict::UnknownUpTo(_) => "UnknownUpTo",
        }
    }
}

/// `w·F_Λ` with `w ∈ Λ` added; the whole language when everything is the
/// unit.
fn constructible_at(aut: &ShiftAutomaton, w: &ExtWord, mut lambda: WordSetLambda) -> ConstructibleSet {
    lambda.insert(w.clone());
    if lambda.iter().all(|t| t.is_unit()) {
        return ConstructibleSet::whole(aut);
    }
    make_constructible(aut, w, &lambda).expect("w ∈ Λ and Λ has a word")
}

/// Decides whether `candidates` cover `X = uF_Λ`.
///
/// Every nonempty constructible subset of `X` contains one of the form
/// `(ux)F_{Λx ∪ Δ}`. Such a set depends only on the states reached by `Λx`,
/// the state of the complement of the candidates after `ux`, and the
/// lattice element `F_Δ ∩ F_{Λx}`; all three range over finite sets.
pub fn cover_verdict(
    aut: &ShiftAutomaton,
    x: &ConstructibleSet,
    candidates: &[ConstructibleSet],
    bound: usize,
) -> Result<CoverVerdict> {
    for c in candidates {
        if !c.set().is_subset(x.set())? {
            return Err(Error::NotASubset(c.render(aut)));
        }
    }
    let k = aut.num_letters();
    let union = RegularSet::union_all(k, candidates.iter().map(|c| c.set()))?;
    let outside = RegularSet::universe(k).difference(&union)?;
    let Some(base) = states_of(aut, x.lambda())? else {
        return Ok(CoverVerdict::Covered { pairs: 0, classes: 0 });
    };
    if x.is_empty() {
        return Ok(CoverVerdict::Covered { pairs: 0, classes: 0 });
    }
    let lat = match lattice(aut) {
        Ok(l) => l,
        Err(_) => return brute_force_cover(aut, x, candidates, bound),
    };

    let u = x.u().letters().to_vec();
    let Some(d0) = outside.state_after(&u) else {
        return Ok(CoverVerdict::Covered {
            pairs: 0,
            classes: lat.len(),
        });
    };
    type Key = (u32, Vec<State>);
    let start: Key = (d0, base.iter().copied().collect());
    let mut path: BTreeMap<Key, Vec<Letter>> = BTreeMap::from([(start.clone(), Vec::new())]);
    let mut queue = VecDeque::from([start]);
    let mut memo: BTreeMap<(u32, usize), bool> = BTreeMap::new();
    while let Some(key) = queue.pop_front() {
        let (d, states) = &key;
        let classes: BTreeSet<usize> = states.iter().map(|&q| aut.class_of(q)).collect();
        for (i, el) in lat.elements.iter().enumerate() {
            if !classes.is_subset(&el.closure) {
                continue;
            }
            let inside = *memo
                .entry((*d, i))
                .or_insert_with(|| el.set.is_subset(&outside.with_start(*d)).unwrap_or(false));
            if inside {
                let xw = path[&key].clone();
                let w = ExtWord::word([u.clone(), xw.clone()].concat());
                let mut lambda = lambda_times(x.lambda(), &ExtWord::word(xw));
                lambda.extend(el.lambda(aut));
                let witness = constructible_at(aut, &w, lambda);
                check_witness(aut, x, candidates, &witness)?;
                return Ok(CoverVerdict::NotCovered { witness });
            }
        }
        for a in 0..k as Letter {
            let Some(d2) = outside.next(*d, a) else { continue };
            let Some(mut s2) = states.iter().map(|&q| aut.step(q, a)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            s2.sort_unstable();
            s2.dedup();
            let next = (d2, s2);
            if !path.contains_key(&next) {
                let mut p = path[&key].clone();
                p.push(a);
                path.insert(next.clone(), p);
                queue.push_back(next);
            }
        }
    }
    Ok(CoverVerdict::Covered {
        pairs: path.len(),
        classes: lat.len(),
    })
}

fn check_witness(
    aut: &ShiftAutomaton,
    x: &ConstructibleSet,
    candidates: &[ConstructibleSet],
    w: &ConstructibleSet,
) -> Result<()> {
    let ok = !w.is_empty()
        && w.set().is_subset(x.set())?
        && candidates
            .iter()
            .map(|c| w.set().is_disjoint(c.set()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|b| b);
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "internal: cover witness {} failed verification",
            w.render(aut)
        )))
    }
}

/// Witness search over extensions `x` with `|x| ≤ bound` and `Δ` made of at
/// most two class representatives. Needs no lattice.
pub fn brute_force_cover(
    aut: &ShiftAutomaton,
    x: &ConstructibleSet,
    candidates: &[ConstructibleSet],
    bound: usize,
) -> Result<CoverVerdict> {
    let k = aut.num_letters();
    let union = RegularSet::union_all(k, candidates.iter().map(|c| c.set()))?;
    let reps: Vec<ExtWord> = (0..aut.num_classes()).map(|c| aut.class_rep(c).clone()).collect();
    let mut deltas: Vec<WordSetLambda> = vec![WordSetLambda::new()];
    for i in 0..reps.len() {
        deltas.push(BTreeSet::from([reps[i].clone()]));
        for j in i + 1..reps.len() {
            deltas.push(BTreeSet::from([reps[i].clone(), reps[j].clone()]));
        }
    }
    let mut exts: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..k as Letter {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        exts.extend(next.iter().cloned());
        level = next;
    }
    for xw in exts {
        let w = ExtWord::word([x.u().letters().to_vec(), xw.clone()].concat());
        if !w.is_unit() && aut.state_of(&w).is_none() {
            continue;
        }
        let lx = lambda_times(x.lambda(), &ExtWord::word(xw));
        if states_of(aut, &lx)?.is_none() {
            continue;
        }
        for delta in &deltas {
            let mut lambda = lx.clone();
            lambda.extend(delta.iter().cloned());
            let z = constructible_at(aut, &w, lambda);
            if !z.is_empty() && z.set().is_disjoint(&union)? && z.set().is_subset(x.set())? {
                return Ok(CoverVerdict::NotCovered { witness: z });
            }
        }
    }
    Ok(CoverVerdict::UnknownUpTo(bound))
}

/// `interior(X) ∖ ∪ candidates`; finite whenever the candidates cover `X`.
pub fn uncovered_interior(x: &ConstructibleSet, candidates: &[ConstructibleSet]) -> Result<RegularSet> {
    let (interior, _) = interior_boundary(x);
    let k = interior.num_letters();
    let union = RegularSet::union_all(k, candidates.iter().map(|c| c.set()))?;
    interior.difference(&union)
}

/// Checks of the three hypotheses under which the constructible sets form
/// an essentially tight semilattice.
#[derive(Debug, Clone)]
pub struct HypothesesReport {
    /// Word length is homogeneous and locally finite.
    pub length_function: bool,
    /// `L_X ∖ ∪_a E_a`, the words not properly extending a letter.
    pub leftover: Cardinality,
    pub leftover_finite: bool,
    /// Every constructible set has finite boundary.
    pub boundaries_finite: bool,
    /// A follower intersection with infinite boundary, and boundary words
    /// up to the requested length.
    pub boundary_witness: Option<(WordSetLambda, Vec<Word>)>,
    pub classes_checked: usize,
    pub certified: bool,
}

pub fn hypotheses_check(aut: &ShiftAutomaton, max_len: usize) -> Result<HypothesesReport> {
    let k = aut.num_letters();
    let mut es = Vec::new();
    for a in aut.alphabet().letters() {
        if aut.run(&[a]).is_some() {
            es.push(crate::constructible::e_set(aut, &Word::letter(a))?);
        }
    }
    let whole = crate::constructible::follower(aut, &ExtWord::Unit)?;
    let leftover = whole.difference(&RegularSet::union_all(k, es.iter())?)?;
    let leftover_card = leftover.cardinality().clone();
    let leftover_finite = leftover_card.is_finite();

    // ∂(uF_Λ) = u·∂F_{Λ∪{u}}, so the lattice elements suffice.
    let lat = lattice(aut)?;
    let mut witness = None;
    for el in &lat.elements {
        let interior = el.set.interior();
        let boundary = el.set.difference(&interior)?;
        if boundary.is_infinite() {
            witness = Some((el.lambda(aut), boundary.words_up_to(max_len)));
            break;
        }
    }
    let boundaries_finite = witness.is_none();
    Ok(HypothesesReport {
        length_function: true,
        leftover: leftover_card,
        leftover_finite,
        boundaries_finite,
        boundary_witness: witness,
        classes_checked: lat.len(),
        certified: leftover_finite && boundaries_finite,
    })
}

/// Verdict of condition (*) on one pair of class sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarVerdict {
    /// `F_{Λ,Γ}` is finite, so nothing is required.
    VacuouslyTrue,
    /// An infinite word `ω ∈ X` with `tω ∈ X` for `t ∈ Λ` and `rω ∉ X` for
    /// `r ∈ Γ`.
    Witness(EvPeriodicWord),
    /// `F_{Λ,Γ}` is infinite but no such word exists.
    Refuted,
}

#[derive(Debug, Clone)]
pub struct StarEntry {
    pub lambda: WordSetLambda,
    pub gamma: WordSetLambda,
    pub premise: &'static str,
    pub verdict: StarVerdict,
}

/// Overall answer, three-valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Holds,
    Fails,
    Unknown,
}

impl Tri {
    pub fn label(self) -> &'static str {
        match self {
            Tri::Holds => "Holds",
            Tri::Fails => "Fails",
            Tri::Unknown => "Unknown",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StarReport {
    pub entries: Vec<StarEntry>,
    pub verdict: Tri,
    /// True when the pair budget stopped the enumeration early.
    pub truncated: bool,
}

/// Default cap on the number of (Λ, Γ) class pairs examined.
pub const STAR_BUDGET: usize = 1 << 16;

/// Decides condition (*) in its amended form: for every pair with
/// `F_{Λ,Γ}` infinite there is an infinite word separating `Λ` from `Γ`.
///
/// `Λ` ranges over the follower lattice and `Γ` over sets of classes
/// outside the closure of `Λ` (classes inside it give an empty `F_{Λ,Γ}`).
pub fn condition_star(aut: &ShiftAutomaton, budget: usize) -> Result<StarReport> {
    let lat = lattice(aut)?;
    let mut entries = Vec::new();
    let mut truncated = false;
    'outer: for el in &lat.elements {
        let keep = el.states(aut);
        let others: Vec<usize> = (0..aut.num_classes()).filter(|c| !el.closure.contains(c)).collect();
        let m = others.len();
        if m >= usize::BITS as usize - 1 {
            truncated = true;
            break;
        }
        for mask in 0usize..(1 << m) {
            if entries.len() >= budget {
                truncated = true;
                break 'outer;
            }
            let gamma_classes: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| others[i]).collect();
            let kill: BTreeSet<State> = gamma_classes.iter().map(|&c| aut.class_state(c)).collect();
            let f = follower_of_states(aut, &keep, &kill);
            let card = f.cardinality();
            let (premise, verdict) = if card.is_finite() {
                (card.label(), StarVerdict::VacuouslyTrue)
            } else {
                match star_witness(aut, &keep, &kill) {
                    Some(w) => ("Infinite", StarVerdict::Witness(w)),
                    None => ("Infinite", StarVerdict::Refuted),
                }
            };
            if let StarVerdict::Witness(w) = &verdict {
                verify_star_witness(aut, &keep, &kill, w)?;
            }
            entries.push(StarEntry {
                lambda: el.lambda(aut),
                gamma: gamma_classes.iter().map(|&c| aut.class_rep(c).clone()).collect(),
                premise,
                verdict,
            });
        }
    }
    let refuted = entries.iter().any(|e| e.verdict == StarVerdict::Refuted);
    let verdict = if refuted {
        Tri::Fails
    } else if truncated {
        Tri::Unknown
    } else {
        Tri::Holds
    };
    Ok(StarReport {
        entries,
        verdict,
        truncated,
    })
}

fn verify_star_witness(
    aut: &ShiftAutomaton,
    keep: &BTreeSet<State>,
    kill: &BTreeSet<State>,
    w: &EvPeriodicWord,
) -> Result<()> {
    let ok = aut.contains_point(w)?
        && keep.iter().all(|&q| aut.accepts_point_from(q, w))
        && kill.iter().all(|&q| !aut.accepts_point_from(q, w));
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(
            "internal: condition (*) witness failed verification".into(),
        ))
    }
}

fn step_all(aut: &ShiftAutomaton, states: &[State], a: Letter) -> Option<Vec<State>> {
    let mut v = states.iter().map(|&q| aut.step(q, a)).collect::<Option<Vec<_>>>()?;
    v.sort_unstable();
    v.dedup();
    Some(v)
}

/// Searches the product of the `Λ`-runs (which must survive) and the
/// `Γ`-runs (which must all die) for a lasso that kills every `Γ`-run and
/// then cycles.
fn star_witness(aut: &ShiftAutomaton, keep: &BTreeSet<State>, kill: &BTreeSet<State>) -> Option<EvPeriodicWord> {
    let k = aut.num_letters() as Letter;
    type Key = (Vec<State>, Vec<State>);
    let start: Key = (keep.iter().copied().collect(), kill.iter().copied().collect());
    let mut path: BTreeMap<Key, Vec<Letter>> = BTreeMap::from([(start.clone(), Vec::new())]);
    let mut queue = VecDeque::from([start]);
    let mut tried: BTreeSet<Vec<State>> = BTreeSet::new();
    while let Some(key) = queue.pop_front() {
        let (t, r) = &key;
        if r.is_empty() && tried.insert(t.clone()) {
            if let Some((lead, cycle)) = cycling_run(aut, t) {
                let mut pre = path[&key].clone();
                pre.extend(lead);
                return EvPeriodicWord::new(pre, cycle).ok();
            }
        }
        for a in 0..k {
            let Some(t2) = step_all(aut, t, a) else { continue };
            let mut r2: Vec<State> = r.iter().filter_map(|&q| aut.step(q, a)).collect();
            r2.sort_unstable();
            r2.dedup();
            let next = (t2, r2);
            if !path.contains_key(&next) {
                let mut p = path[&key].clone();
                p.push(a);
                path.insert(next.clone(), p);
                queue.push_back(next);
            }
        }
    }
    None
}

/// A lasso `lead · cycle^∞` along which every run from `t` survives.
fn cycling_run(aut: &ShiftAutomaton, t: &[State]) -> Option<(Vec<Letter>, Vec<Letter>)> {
    let k = aut.num_letters() as Letter;
    let mut nodes: BTreeMap<Vec<State>, Vec<Option<Vec<State>>>> = BTreeMap::new();
    let mut stack = vec![t.to_vec()];
    while let Some(n) = stack.pop() {
        if nodes.contains_key(&n) {
            continue;
        }
        let succ: Vec<Option<Vec<State>>> = (0..k).map(|a| step_all(aut, &n, a)).collect();
        for s in succ.iter().flatten() {
            if !nodes.contains_key(s) {
                stack.push(s.clone());
            }
        }
        nodes.insert(n, succ);
    }
    // Keep only nodes with an infinite path.
    let mut alive: BTreeSet<Vec<State>> = nodes.keys().cloned().collect();
    loop {
        let dead: Vec<Vec<State>> = alive
            .iter()
            .filter(|n| !nodes[*n].iter().flatten().any(|s| alive.contains(s)))
            .cloned()
            .collect();
        if dead.is_empty() {
            break;
        }
        for d in dead {
            alive.remove(&d);
        }
    }
    if !alive.contains(t) {
        return None;
    }
    let mut seen: BTreeMap<Vec<State>, usize> = BTreeMap::new();
    let mut word = Vec::new();
    let mut cur = t.to_vec();
    loop {
        if let Some(&i) = seen.get(&cur) {
            let cycle = word[i..].to_vec();
            word.truncate(i);
            return Some((word, cycle));
        }
        seen.insert(cur.clone(), word.len());
        let (a, next) = nodes[&cur]
            .iter()
            .enumerate()
            .find_map(|(a, s)| s.as_ref().filter(|s| alive.contains(*s)).map(|s| (a, s.clone())))
            .expect("alive nodes have an alive successor");
        word.push(a as Letter);
        cur = next;
    }
}

/// An explicit finite family of subsets of a finite universe, used for
/// abstract semilattice examples.
///
/// An infinite universe is modelled by truncation: a subset is classified
/// `Infinite` exactly when it contains the truncation marker, the largest
/// retained element standing in for the whole tail.
#[derive(Debug, Clone)]
pub struct FiniteUniverseFamily {
    pub universe: BTreeSet<u64>,
    pub members: Vec<BTreeSet<u64>>,
    pub truncation_marker: Option<u64>,
}

/// A defect set in finite-universe mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDefect {
    pub set: BTreeSet<u64>,
    pub infinite: bool,
}

impl FiniteUniverseFamily {
    pub fn new(universe: BTreeSet<u64>, members: Vec<BTreeSet<u64>>, truncation_marker: Option<u64>) -> Result<Self> {
        for m in &members {
            if !m.is_subset(&universe) {
                return Err(Error::NotASubset(format!("{m:?}")));
            }
        }
        if let Some(t) = truncation_marker {
            if !universe.contains(&t) {
                return Err(Error::Invalid(format!("marker {t} is outside the universe")));
            }
        }
        Ok(FiniteUniverseFamily {
            universe,
            members,
            truncation_marker,
        })
    }

    /// `{0, …, n−1}` with `n − 1` as the truncation marker, standing for `N`.
    pub fn truncated_naturals(n: u64, members: Vec<BTreeSet<u64>>) -> Result<Self> {
        Self::new((0..n).collect(), members, Some(n - 1))
    }

    pub fn is_infinite(&self, s: &BTreeSet<u64>) -> bool {
        self.truncation_marker.is_some_and(|t| s.contains(&t))
    }

    /// Every nonempty member inside `x` meets one of `covers`.
    pub fn is_cover(&self, x: &BTreeSet<u64>, covers: &[BTreeSet<u64>]) -> bool {
        self.members
            .iter()
            .filter(|z| !z.is_empty() && z.is_subset(x))
            .all(|z| covers.iter().any(|c| !c.is_disjoint(z)))
    }

    pub fn defect(&self, x: &BTreeSet<u64>, covers: &[BTreeSet<u64>]) -> Result<FamilyDefect> {
        for c in covers {
            if !c.is_subset(x) {
                return Err(Error::NotASubset(format!("{c:?}")));
            }
        }
        let set: BTreeSet<u64> = x
            .iter()
            .filter(|e| !covers.iter().any(|c| c.contains(e)))
            .copied()
            .collect();
        let infinite = self.is_infinite(&set);
        Ok(FamilyDefect { set, infinite })
    }

    /// Checks every member against every cover drawn from the family:
    /// `(tight, essentially tight)`.
    pub fn tightness(&self) -> (bool, bool) {
        let mut tight = true;
        let mut ess = true;
        for x in &self.members {
            let below: Vec<&BTreeSet<u64>> = self.members.iter().filter(|m| m.is_subset(x)).collect();
            for mask in 0u64..(1 << below.len().min(20)) {
                let covers: Vec<BTreeSet<u64>> = (0..below.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| below[i].clone())
                    .collect();
                if !self.is_cover(x, &covers) {
                    continue;
                }
                let d = self.defect(x, &covers).expect("covers lie below x");
                tight &= d.set.is_empty();
                ess &= !d.infinite;
            }
        }
        (tight, ess)
    }
}
