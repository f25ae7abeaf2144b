//! Follower sets `F_t`, `F_Λ`, `F_{Λ,Γ}`, the sets `E_μ`, constructible sets
//! `uF_Λ`, and the finite lattice of follower-set intersections.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::regset::RegularSet;
use crate::shift::{ShiftAutomaton, State};
use crate::word::{ExtWord, Letter, Word};

/// A finite set of words and possibly the unit; never contains zero.
pub type WordSetLambda = BTreeSet<ExtWord>;

/// Builds a `WordSetLambda`, rejecting zero.
pub fn lambda_of(words: impl IntoIterator<Item = ExtWord>) -> Result<WordSetLambda> {
    let set: WordSetLambda = words.into_iter().collect();
    if set.contains(&ExtWord::Zero) {
        return Err(Error::ZeroNotAllowed);
    }
    Ok(set)
}

/// States reached by the members of `ws`. `Ok(None)` when some member is
/// outside `L_X`, so that every follower intersection with it is empty.
pub fn states_of(aut: &ShiftAutomaton, ws: &WordSetLambda) -> Result<Option<BTreeSet<State>>> {
    let mut out = BTreeSet::new();
    for w in ws {
        if w.is_zero() {
            return Err(Error::ZeroNotAllowed);
        }
        match aut.state_of(w) {
            Some(q) => {
                out.insert(q);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// `{s : every run from `keep` survives s, every run from `kill` dies}`.
/// An empty `keep` is read as the initial state alone.
pub fn follower_of_states(aut: &ShiftAutomaton, keep: &BTreeSet<State>, kill: &BTreeSet<State>) -> RegularSet {
    let mut keep: Vec<State> = keep.iter().copied().collect();
    if keep.is_empty() {
        keep.push(aut.initial());
    }
    let kill: Vec<State> = kill.iter().copied().collect();
    RegularSet::from_fn(
        aut.num_letters(),
        (keep, kill),
        |(t, r), a| {
            let mut t2: Vec<State> = t.iter().map(|&q| aut.step(q, a)).collect::<Option<Vec<_>>>()?;
            t2.sort_unstable();
            t2.dedup();
            let mut r2: Vec<State> = r.iter().filter_map(|&q| aut.step(q, a)).collect();
            r2.sort_unstable();
            r2.dedup();
            Some((t2, r2))
        },
        |(_, r)| r.is_empty(),
    )
}

/// `F_t = {s ∈ L_X : ts ∈ L_X}`.
pub fn follower(aut: &ShiftAutomaton, t: &ExtWord) -> Result<RegularSet> {
    f_lambda(aut, &lambda_of([t.clone()])?)
}

/// `F_Λ = ∩_{t∈Λ} F_t`.
pub fn f_lambda(aut: &ShiftAutomaton, lambda: &WordSetLambda) -> Result<RegularSet> {
    f_lambda_gamma(aut, lambda, &WordSetLambda::new())
}

/// `F_{Λ,Γ} = {s ∈ L_X : ts ≠ 0 ∀t ∈ Λ, rs = 0 ∀r ∈ Γ}`.
pub fn f_lambda_gamma(aut: &ShiftAutomaton, lambda: &WordSetLambda, gamma: &WordSetLambda) -> Result<RegularSet> {
    if lambda.is_empty() {
        return Err(Error::InvalidPresentation("Λ must be nonempty".into()));
    }
    let Some(keep) = states_of(aut, lambda)? else {
        return Ok(RegularSet::empty(aut.num_letters()));
    };
    if gamma.contains(&ExtWord::Zero) {
        return Err(Error::ZeroNotAllowed);
    }
    // Members of Γ outside L_X kill every s and impose nothing.
    let kill: BTreeSet<State> = gamma.iter().filter_map(|r| aut.state_of(r)).collect();
    Ok(follower_of_states(aut, &keep, &kill))
}

/// `E_μ = μF_μ`, the words of `L_X` that properly extend `μ`.
pub fn e_set(aut: &ShiftAutomaton, mu: &Word) -> Result<RegularSet> {
    if aut.run(mu.letters()).is_none() {
        return Err(Error::NotInLanguage(aut.render(mu.letters())));
    }
    Ok(follower(aut, &ExtWord::W(mu.clone()))?.prefixed(mu.letters()))
}

/// `Λx = {t·x : t ∈ Λ}` as plain concatenations (which may leave `L_X`).
pub fn lambda_times(lambda: &WordSetLambda, x: &ExtWord) -> WordSetLambda {
    lambda.iter().map(|t| t.concat(x)).collect()
}

/// A constructible set `uF_Λ` together with its presentation.
#[derive(Debug, Clone)]
pub struct ConstructibleSet {
    u: ExtWord,
    lambda: WordSetLambda,
    f: RegularSet,
    set: RegularSet,
}

/// Builds `uF_Λ = {u·s : s ∈ F_Λ}` for `u ∈ Λ`.
pub fn make_constructible(aut: &ShiftAutomaton, u: &ExtWord, lambda: &WordSetLambda) -> Result<ConstructibleSet> {
    if u.is_zero() || lambda.contains(&ExtWord::Zero) {
        return Err(Error::ZeroNotAllowed);
    }
    if !lambda.contains(u) {
        return Err(Error::InvalidPresentation(format!(
            "u = {} is not a member of Λ",
            aut.render_ext(u)
        )));
    }
    if lambda.iter().all(|t| t.is_unit()) {
        return Err(Error::InvalidPresentation(
            "Λ must contain a word besides the unit".into(),
        ));
    }
    Ok(ConstructibleSet::build(aut, u.clone(), lambda.clone()))
}

impl ConstructibleSet {
    fn build(aut: &ShiftAutomaton, u: ExtWord, lambda: WordSetLambda) -> Self {
        let f = f_lambda(aut, &lambda).expect("Λ is nonempty and zero-free");
        let set = f.prefixed(u.letters());
        ConstructibleSet { u, lambda, f, set }
    }

    /// The whole language `L_X`, the domain of the identity, presented as
    /// `1F_{1}`.
    pub fn whole(aut: &ShiftAutomaton) -> Self {
        Self::build(aut, ExtWord::Unit, BTreeSet::from([ExtWord::Unit]))
    }

    pub fn u(&self) -> &ExtWord {
        &self.u
    }

    pub fn lambda(&self) -> &WordSetLambda {
        &self.lambda
    }

    /// `F_Λ`.
    pub fn follower_part(&self) -> &RegularSet {
        &self.f
    }

    /// `uF_Λ` itself.
    pub fn set(&self) -> &RegularSet {
        &self.set
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// `uF_Λ ∩ u'F_Λ'`. When `u' = ux` this is `u'F_{Λx ∪ Λ'}`; when neither
    /// of `u`, `u'` is a prefix of the other it is empty (`None`).
    pub fn intersect(&self, aut: &ShiftAutomaton, other: &ConstructibleSet) -> Option<ConstructibleSet> {
        let (short, long) = if self.u.len() <= other.u.len() {
            (self, other)
        } else {
            (other, self)
        };
        let x = short.u.strip_prefix_of(&long.u)?;
        let mut lambda = lambda_times(&short.lambda, &x);
        lambda.extend(long.lambda.iter().cloned());
        if lambda.iter().any(|t| aut.state_of(t).is_none()) {
            return Some(ConstructibleSet {
                u: long.u.clone(),
                lambda,
                f: RegularSet::empty(aut.num_letters()),
                set: RegularSet::empty(aut.num_letters()),
            });
        }
        Some(Self::build(aut, long.u.clone(), lambda))
    }

    pub fn render(&self, aut: &ShiftAutomaton) -> String {
        let lambda: Vec<String> = self.lambda.iter().map(|t| aut.render_ext(t)).collect();
        format!("{}·F{{{}}}", aut.render_ext(&self.u), lambda.join(","))
    }
}

/// `(interior, boundary)` with interior `{s ∈ X : ∃a, sa ∈ X}`.
pub fn interior_boundary(x: &ConstructibleSet) -> (RegularSet, RegularSet) {
    let interior = x.set.interior();
    let boundary = x.set.difference(&interior).expect("same alphabet");
    (interior, boundary)
}

/// `F_S ⊆ F_q`, decided on the pair automaton.
pub fn follower_included(aut: &ShiftAutomaton, s: &BTreeSet<State>, q: State) -> bool {
    if s.contains(&q) {
        return true;
    }
    let start: (Vec<State>, State) = (s.iter().copied().collect(), q);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((t, p)) = queue.pop_front() {
        for a in 0..aut.num_letters() as Letter {
            let Some(mut t2) = t.iter().map(|&x| aut.step(x, a)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let Some(p2) = aut.step(p, a) else {
                return false;
            };
            t2.sort_unstable();
            t2.dedup();
            if t2.contains(&p2) {
                continue;
            }
            let key = (t2, p2);
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    true
}

/// The classes `c` with `F_S ⊆ F_c`. Two state sets have the same follower
/// intersection iff their closures agree.
pub fn class_closure(aut: &ShiftAutomaton, s: &BTreeSet<State>) -> BTreeSet<usize> {
    let mut s = s.clone();
    if s.is_empty() {
        s.insert(aut.initial());
    }
    (0..aut.num_classes())
        .filter(|&c| follower_included(aut, &s, aut.class_state(c)))
        .collect()
}

/// One nonempty member `F_S` of the follower lattice.
#[derive(Debug, Clone)]
pub struct LatticeElement {
    /// All classes `c` with `F_S ⊆ F_c`.
    pub closure: BTreeSet<usize>,
    /// Classes whose intersection first produced this element.
    pub generators: Vec<usize>,
    pub set: RegularSet,
}

impl LatticeElement {
    /// A state set denoting this element.
    pub fn states(&self, aut: &ShiftAutomaton) -> BTreeSet<State> {
        self.closure.iter().map(|&c| aut.class_state(c)).collect()
    }

    /// `Λ` made of class representatives, always including the unit.
    pub fn lambda(&self, aut: &ShiftAutomaton) -> WordSetLambda {
        let mut l: WordSetLambda = self.generators.iter().map(|&c| aut.class_rep(c).clone()).collect();
        l.insert(ExtWord::Unit);
        l
    }

    pub fn render(&self, aut: &ShiftAutomaton) -> String {
        let l = self.lambda(aut);
        let parts: Vec<String> = l.iter().map(|t| aut.render_ext(t)).collect();
        format!("F{{{}}}", parts.join(","))
    }
}

/// All distinct nonempty follower intersections `F_Λ`, Λ finite.
#[derive(Debug, Clone)]
pub struct FollowerLattice {
    pub elements: Vec<LatticeElement>,
    /// Whether some intersection is empty.
    pub has_empty: bool,
    index: BTreeMap<BTreeSet<usize>, usize>,
}

/// Default cap on the number of lattice elements.
pub const LATTICE_BUDGET: usize = 4096;

impl FollowerLattice {
    pub fn build(aut: &ShiftAutomaton, budget: usize) -> Result<FollowerLattice> {
        let c0 = aut.class_of(aut.initial());
        let root = BTreeSet::from([aut.initial()]);
        let root_closure = class_closure(aut, &root);
        let mut lat = FollowerLattice {
            elements: Vec::new(),
            has_empty: false,
            index: BTreeMap::new(),
        };
        lat.push(aut, root_closure, vec![c0]);
        let mut i = 0;
        while i < lat.elements.len() {
            let base = lat.elements[i].clone();
            for c in 0..aut.num_classes() {
                if base.closure.contains(&c) {
                    continue;
                }
                let mut states = base.states(aut);
                states.insert(aut.class_state(c));
                let closure = class_closure(aut, &states);
                if lat.index.contains_key(&closure) {
                    continue;
                }
                let mut gens = base.generators.clone();
                gens.push(c);
                if follower_of_states(aut, &states, &BTreeSet::new()).is_empty() {
                    lat.has_empty = true;
                    // Record the key so it is not revisited.
                    lat.index.insert(closure, usize::MAX);
                    continue;
                }
                if lat.elements.len() >= budget {
                    return Err(Error::Invalid(format!("follower lattice exceeds {budget} elements")));
                }
                lat.push(aut, closure, gens);
            }
            i += 1;
        }
        lat.index.retain(|_, v| *v != usize::MAX);
        Ok(lat)
    }

    fn push(&mut self, aut: &ShiftAutomaton, closure: BTreeSet<usize>, generators: Vec<usize>) {
        let states: BTreeSet<State> = closure.iter().map(|&c| aut.class_state(c)).collect();
        let set = follower_of_states(aut, &states, &BTreeSet::new());
        self.index.insert(closure.clone(), self.elements.len());
        self.elements.push(LatticeElement {
            closure,
            generators,
            set,
        });
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The element equal to `F_S`, if `F_S` is nonempty.
    pub fn find(&self, aut: &ShiftAutomaton, s: &BTreeSet<State>) -> Option<&LatticeElement> {
        self.index.get(&class_closure(aut, s)).map(|&i| &self.elements[i])
    }
}

/// The follower lattice of `aut`, computed once.
pub fn lattice(aut: &ShiftAutomaton) -> Result<&FollowerLattice> {
    aut.lattice_cell()
        .get_or_init(|| FollowerLattice::build(aut, LATTICE_BUDGET))
        .as_ref()
        .map_err(Clone::clone)
}
