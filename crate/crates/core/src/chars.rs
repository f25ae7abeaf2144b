//! Strings `σ_ω` (prefix sets of admissible words) and the characters they
//! and finite minimal constructible sets induce on constructible sets.

use std::collections::BTreeSet;

use crate::constructible::{lattice, states_of, ConstructibleSet, WordSetLambda};
use crate::error::{Error, Result};
use crate::periodic::EvPeriodicWord;
use crate::regset::{Cardinality, RegularSet};
use crate::shift::ShiftAutomaton;
use crate::word::{Letter, Word};

/// The string of all nonempty prefixes of a finite or eventually periodic
/// admissible word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StringPoint {
    Fin(Word),
    Inf(EvPeriodicWord),
}

pub fn string_of_word(aut: &ShiftAutomaton, w: &Word) -> Result<StringPoint> {
    if !aut.contains(w)? {
        return Err(Error::NotInLanguage(aut.render(w.letters())));
    }
    Ok(StringPoint::Fin(w.clone()))
}

pub fn string_of_point(aut: &ShiftAutomaton, w: &EvPeriodicWord) -> Result<StringPoint> {
    if !aut.contains_point(w)? {
        return Err(Error::NotInShift);
    }
    Ok(StringPoint::Inf(w.clone()))
}

impl StringPoint {
    /// True iff `p` is a member of the string, i.e. a nonempty prefix.
    pub fn contains(&self, p: &[Letter]) -> bool {
        if p.is_empty() {
            return false;
        }
        match self {
            StringPoint::Fin(w) => w.starts_with(p),
            StringPoint::Inf(w) => w.starts_with(p),
        }
    }

    pub fn render(&self, aut: &ShiftAutomaton) -> String {
        match self {
            StringPoint::Fin(w) => aut.render(w.letters()),
            StringPoint::Inf(w) => w.render(aut.alphabet()),
        }
    }
}

/// Order-theoretic type of a string, with word length as length function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringClass {
    pub open: bool,
    pub maximal: bool,
    pub bounded: bool,
}

pub fn classify_string(s: &StringPoint) -> StringClass {
    let inf = matches!(s, StringPoint::Inf(_));
    StringClass {
        open: inf,
        maximal: inf,
        bounded: !inf,
    }
}

/// A character of the semilattice of constructible sets.
#[derive(Debug, Clone)]
pub enum Character {
    StringChar(StringPoint),
    /// The principal ultrafilter of a minimal nonempty constructible set.
    PrincipalUltra(ConstructibleSet),
}

/// Wraps `y` as a principal ultra-character after checking that it is
/// nonempty, finite and minimal among nonempty constructible sets.
pub fn principal_ultra(aut: &ShiftAutomaton, y: &ConstructibleSet) -> Result<Character> {
    let Cardinality::Finite(elems) = y.set().cardinality() else {
        return Err(Error::InvalidPresentation(
            "a principal ultra-character needs a finite nonempty set".into(),
        ));
    };
    if let Some(z) = smaller_constructible(aut, y, elems)? {
        return Err(Error::InvalidPresentation(format!(
            "not minimal: contains the smaller constructible set {}",
            crate::tightness::render_set(aut, &z, 8)
        )));
    }
    Ok(Character::PrincipalUltra(y.clone()))
}

/// Some nonempty constructible set strictly inside the finite set `y`.
fn smaller_constructible(aut: &ShiftAutomaton, y: &ConstructibleSet, elems: &[Word]) -> Result<Option<RegularSet>> {
    if elems.len() <= 1 {
        return Ok(None);
    }
    let lat = lattice(aut)?;
    // A constructible subset w·F_Λ' has w a proper prefix of some member.
    let mut heads: BTreeSet<Vec<Letter>> = BTreeSet::from([Vec::new()]);
    for e in elems {
        for n in 1..e.len() {
            heads.insert(e.letters()[..n].to_vec());
        }
    }
    for w in heads {
        let Some(q) = aut.run(&w) else { continue };
        let cq = aut.class_of(q);
        for el in &lat.elements {
            if !el.closure.contains(&cq) {
                continue;
            }
            let z = el.set.prefixed(&w);
            if !z.is_empty() && z.is_subset(y.set())? && !y.set().is_subset(&z)? {
                return Ok(Some(z));
            }
        }
    }
    Ok(None)
}

/// The run of a regular set's automaton along an eventually periodic word,
/// cut at the first repetition of (state, phase).
struct Lasso {
    /// `accepted[i]`: the prefix of length `i + 1` is a member.
    accepted: Vec<bool>,
    /// Index in `accepted` where the repeating part starts; `None` when the
    /// run dies (every longer prefix is then a non-member).
    cycle_from: Option<usize>,
}

fn lasso(set: &RegularSet, w: &EvPeriodicWord) -> Lasso {
    let pre = w.preperiod().len();
    let per = w.period().len();
    let mut q = set.start();
    let mut accepted = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    let mut i = 0usize;
    loop {
        if i >= pre {
            let key = (q, (i - pre) % per);
            if let Some(&j) = seen.get(&key) {
                return Lasso {
                    accepted,
                    cycle_from: Some(j),
                };
            }
            seen.insert(key, i);
        }
        match set.next(q, w.letter(i)) {
            Some(t) => {
                q = t;
                accepted.push(set.is_accepting(t));
            }
            None => {
                return Lasso {
                    accepted,
                    cycle_from: None,
                }
            }
        }
        i += 1;
    }
}

/// Prefix criterion for infinite words: `u` is a prefix of `ω = uη` and
/// `tη ∈ X` for every `t ∈ Λ`.
pub fn prefix_criterion(aut: &ShiftAutomaton, w: &EvPeriodicWord, x: &ConstructibleSet) -> bool {
    if !w.starts_with(x.u().letters()) {
        return false;
    }
    let eta = w.shift(x.u().len());
    match states_of(aut, x.lambda()) {
        Ok(Some(states)) => states.iter().all(|&q| aut.accepts_point_from(q, &eta)),
        _ => false,
    }
}

/// `∅ ≠ σ ∩ E_u ⊆ uF_Λ`, where `E_1` is all of `L_X`.
pub fn epsilon_criterion(x: &ConstructibleSet, s: &StringPoint) -> bool {
    let u = x.u().letters();
    match s {
        StringPoint::Fin(w) => {
            if !w.starts_with(u) || w.len() == u.len() {
                return false;
            }
            (u.len() + 1..=w.len()).all(|n| x.set().contains(&w.letters()[..n]))
        }
        StringPoint::Inf(w) => {
            if !w.starts_with(u) {
                return false;
            }
            let run = lasso(x.set(), w);
            run.cycle_from.is_some() && run.accepted.get(u.len()..).unwrap_or(&[]).iter().all(|&b| b)
        }
    }
}

/// `σ ∖ X` is finite.
pub fn finiteness_criterion(x: &ConstructibleSet, w: &EvPeriodicWord) -> bool {
    let run = lasso(x.set(), w);
    match run.cycle_from {
        Some(j) => run.accepted[j..].iter().all(|&b| b),
        None => false,
    }
}

/// `σ ∩ X` is finite.
pub fn meets_finitely(x: &ConstructibleSet, w: &EvPeriodicWord) -> bool {
    let run = lasso(x.set(), w);
    match run.cycle_from {
        Some(j) => !run.accepted[j..].iter().any(|&b| b),
        None => true,
    }
}

/// Value of a character on a constructible set.
pub fn char_eval(aut: &ShiftAutomaton, c: &Character, x: &ConstructibleSet) -> Result<bool> {
    Ok(match c {
        Character::StringChar(StringPoint::Inf(w)) => prefix_criterion(aut, w, x),
        Character::StringChar(s @ StringPoint::Fin(_)) => epsilon_criterion(x, s),
        Character::PrincipalUltra(y) => y.set().is_subset(x.set())?,
    })
}

/// Outcome of testing one join equation `φ(X) = ⋁ φ(Yᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssReport {
    pub phi_x: bool,
    pub phi_union: bool,
    pub agree: bool,
    /// For infinite strings, `φ(X)` recomputed as "`σ ∖ X` is finite".
    pub phi_x_by_finiteness: Option<bool>,
}

/// Evaluates `φ(X)` and `⋁φ(Yᵢ)` for a family whose union differs from `X`
/// by a finite set.
pub fn ess_membership_witness(
    aut: &ShiftAutomaton,
    c: &Character,
    x: &ConstructibleSet,
    ys: &[ConstructibleSet],
) -> Result<EssReport> {
    let union = RegularSet::union_all(aut.num_letters(), ys.iter().map(|y| y.set()))?;
    let finite_gap = x.set().difference(&union)?.is_finite() && union.difference(x.set())?.is_finite();
    if !finite_gap {
        return Err(Error::PremiseViolated(
            "X and the union of the family differ by an infinite set".into(),
        ));
    }
    let phi_x = char_eval(aut, c, x)?;
    let mut phi_union = false;
    for y in ys {
        phi_union |= char_eval(aut, c, y)?;
    }
    let phi_x_by_finiteness = match c {
        Character::StringChar(StringPoint::Inf(w)) => Some(finiteness_criterion(x, w)),
        _ => None,
    };
    Ok(EssReport {
        phi_x,
        phi_union,
        agree: phi_x == phi_union,
        phi_x_by_finiteness,
    })
}

/// Whether every follower intersection is empty or infinite, with a finite
/// nonempty one as witness otherwise.
#[derive(Debug, Clone)]
pub struct GroundReport {
    pub holds: bool,
    pub witness: Option<(WordSetLambda, Vec<Word>)>,
    pub classes_checked: usize,
}

pub fn ground_report(aut: &ShiftAutomaton) -> Result<GroundReport> {
    let lat = lattice(aut)?;
    for el in &lat.elements {
        if let Cardinality::Finite(ws) = el.set.cardinality() {
            return Ok(GroundReport {
                holds: false,
                witness: Some((el.lambda(aut), ws.clone())),
                classes_checked: lat.len(),
            });
        }
    }
    Ok(GroundReport {
        holds: true,
        witness: None,
        classes_checked: lat.len(),
    })
}
