//! Regular sets of nonempty words given by explicit partial DFAs, with exact
//! emptiness, finiteness, enumeration and comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::shift::PatternAtom;
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;

/// Size class of a regular set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cardinality {
    Empty,
    /// The complete list, length-lex.
    Finite(Vec<Word>),
    Infinite,
}

impl Cardinality {
    pub fn is_empty(&self) -> bool {
        matches!(self, Cardinality::Empty)
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Cardinality::Infinite)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Cardinality::Empty => "Empty",
            Cardinality::Finite(_) => "Finite",
            Cardinality::Infinite => "Infinite",
        }
    }
}

#[derive(Debug)]
struct Table {
    k: usize,
    trans: Vec<u32>,
    accept: Vec<bool>,
    productive: OnceLock<Vec<bool>>,
}

impl Table {
    fn next(&self, q: u32, a: Letter) -> Option<u32> {
        let t = self.trans[q as usize * self.k + usize::from(a)];
        (t != NONE).then_some(t)
    }

    fn len(&self) -> usize {
        self.accept.len()
    }

    /// States from which some nonempty word reaches an accepting state.
    fn productive(&self) -> &[bool] {
        self.productive.get_or_init(|| {
            let n = self.len();
            let mut prod = vec![false; n];
            loop {
                let mut changed = false;
                for q in 0..n {
                    if prod[q] {
                        continue;
                    }
                    let hit = (0..self.k).any(|a| {
                        let t = self.trans[q * self.k + a];
                        t != NONE && (self.accept[t as usize] || prod[t as usize])
                    });
                    if hit {
                        prod[q] = true;
                        changed = true;
                    }
                }
                if !changed {
                    return prod;
                }
            }
        })
    }
}

/// A set of nonempty words over an alphabet of `k` letters recognised by a
/// partial DFA. Whether the start state accepts is irrelevant: the empty
/// word is never a member.
#[derive(Clone)]
pub struct RegularSet {
    table: Arc<Table>,
    start: u32,
    card: OnceLock<Cardinality>,
}

impl fmt::Debug for RegularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegularSet")
            .field("letters", &self.table.k)
            .field("states", &self.table.len())
            .field("start", &self.start)
            .finish()
    }
}

impl RegularSet {
    /// Explores the automaton reachable from `start` under `step`.
    pub fn from_fn<K, S, A>(k: usize, start: K, mut step: S, mut accept: A) -> RegularSet
    where
        K: Ord + Clone,
        S: FnMut(&K, Letter) -> Option<K>,
        A: FnMut(&K) -> bool,
    {
        let mut ids: BTreeMap<K, u32> = BTreeMap::new();
        let mut keys = vec![start.clone()];
        ids.insert(start, 0);
        let mut trans = Vec::new();
        let mut acc = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let key = keys[i].clone();
            acc.push(accept(&key));
            for a in 0..k {
                let t = match step(&key, a as Letter) {
                    None => NONE,
                    Some(next) => match ids.get(&next) {
                        Some(&id) => id,
                        None => {
                            let id = keys.len() as u32;
                            ids.insert(next.clone(), id);
                            keys.push(next);
                            id
                        }
                    },
                };
                trans.push(t);
            }
            i += 1;
        }
        RegularSet {
            table: Arc::new(Table {
                k,
                trans,
                accept: acc,
                productive: OnceLock::new(),
            }),
            start: 0,
            card: OnceLock::new(),
        }
    }

    pub fn empty(k: usize) -> RegularSet {
        Self::from_fn(k, (), |_, _| None, |_| false)
    }

    /// All nonempty words.
    pub fn universe(k: usize) -> RegularSet {
        Self::from_fn(k, (), |_, _| Some(()), |_| true)
    }

    /// A finite set given by its elements.
    pub fn from_words(k: usize, words: &[Word]) -> RegularSet {
        let words: Vec<&[Letter]> = words.iter().map(|w| w.letters()).collect();
        let start: BTreeSet<(usize, usize)> = (0..words.len()).map(|i| (i, 0)).collect();
        Self::from_fn(
            k,
            start,
            |s, a| {
                let next: BTreeSet<_> = s
                    .iter()
                    .filter(|&&(i, p)| p < words[i].len() && words[i][p] == a)
                    .map(|&(i, p)| (i, p + 1))
                    .collect();
                (!next.is_empty()).then_some(next)
            },
            |s| s.iter().any(|&(i, p)| p == words[i].len()),
        )
    }

    /// The words matching a pattern as a whole (a trailing `⋆` matches any
    /// suffix, including the empty one).
    pub fn from_pattern(k: usize, pattern: &[PatternAtom]) -> RegularSet {
        let all: Vec<Letter> = (0..k as Letter).collect();
        let mut items: Vec<(Vec<Letter>, bool)> = Vec::new();
        for atom in pattern {
            match atom {
                PatternAtom::Lit(a) => items.push((vec![*a], false)),
                PatternAtom::Plus(a) => {
                    items.push((vec![*a], false));
                    items.push((vec![*a], true));
                }
                PatternAtom::Star(a) => items.push((vec![*a], true)),
                PatternAtom::OneOf(s) => items.push((s.clone(), false)),
                PatternAtom::AnySuffix => items.push((all.clone(), true)),
            }
        }
        let n = items.len();
        let close = |set: &mut BTreeSet<usize>| {
            let snapshot: Vec<usize> = set.iter().copied().collect();
            for mut p in snapshot {
                while p < n && items[p].1 {
                    p += 1;
                    set.insert(p);
                }
            }
        };
        let mut start = BTreeSet::from([0usize]);
        close(&mut start);
        Self::from_fn(
            k,
            start,
            |s, a| {
                let mut next = BTreeSet::new();
                for &p in s {
                    if p < n && items[p].0.contains(&a) {
                        next.insert(if items[p].1 { p } else { p + 1 });
                    }
                }
                close(&mut next);
                (!next.is_empty()).then_some(next)
            },
            |s| s.contains(&n),
        )
    }

    pub fn num_letters(&self) -> usize {
        self.table.k
    }

    pub fn num_states(&self) -> usize {
        self.table.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn next(&self, q: u32, a: Letter) -> Option<u32> {
        self.table.next(q, a)
    }

    pub fn is_accepting(&self, q: u32) -> bool {
        self.table.accept[q as usize]
    }

    /// The same automaton started elsewhere.
    pub fn with_start(&self, q: u32) -> RegularSet {
        RegularSet {
            table: Arc::clone(&self.table),
            start: q,
            card: OnceLock::new(),
        }
    }

    pub fn state_after(&self, letters: &[Letter]) -> Option<u32> {
        letters.iter().try_fold(self.start, |q, &a| self.table.next(q, a))
    }

    pub fn contains(&self, letters: &[Letter]) -> bool {
        !letters.is_empty() && self.state_after(letters).is_some_and(|q| self.is_accepting(q))
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        self.contains(w.letters())
    }

    fn check(&self, other: &RegularSet) -> Result<()> {
        if self.table.k != other.table.k {
            return Err(Error::AlphabetMismatch(self.table.k, other.table.k));
        }
        Ok(())
    }

    fn combine(&self, other: &RegularSet, f: impl Fn(bool, bool) -> bool) -> Result<RegularSet> {
        self.check(other)?;
        let keep_left_only = f(true, false);
        let keep_right_only = f(false, true);
        let acc = |q: Option<u32>, s: &RegularSet| q.is_some_and(|q| s.is_accepting(q));
        Ok(Self::from_fn(
            self.table.k,
            (Some(self.start), Some(other.start)),
            |&(p, q), a| {
                let p2 = p.and_then(|p| self.next(p, a));
                let q2 = q.and_then(|q| other.next(q, a));
                let alive = match (p2, q2) {
                    (None, None) => false,
                    (Some(_), None) => keep_left_only,
                    (None, Some(_)) => keep_right_only,
                    (Some(_), Some(_)) => true,
                };
                alive.then_some((p2, q2))
            },
            |&(p, q)| f(acc(p, self), acc(q, other)),
        ))
    }

    pub fn intersect(&self, other: &RegularSet) -> Result<RegularSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &RegularSet) -> Result<RegularSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &RegularSet) -> Result<RegularSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn union_all<'a>(k: usize, sets: impl IntoIterator<Item = &'a RegularSet>) -> Result<RegularSet> {
        let mut acc = RegularSet::empty(k);
        for s in sets {
            acc = acc.union(s)?;
        }
        Ok(acc)
    }

    /// `{p·s : s ∈ self}`.
    pub fn prefixed(&self, prefix: &[Letter]) -> RegularSet {
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
        enum K {
            Lead(usize),
            Body(u32),
        }
        let n = prefix.len();
        if n == 0 {
            return self.clone();
        }
        // Lead(n) is the bare prefix; it must stay distinct from the body's
        // start state, which might accept.
        Self::from_fn(
            self.table.k,
            K::Lead(0),
            |key, a| match *key {
                K::Lead(i) if i < n => (prefix[i] == a).then_some(K::Lead(i + 1)),
                K::Lead(_) => self.next(self.start, a).map(K::Body),
                K::Body(q) => self.next(q, a).map(K::Body),
            },
            |key| matches!(*key, K::Body(q) if self.is_accepting(q)),
        )
    }

    /// `{s ∈ self : ∃a, sa ∈ self}`.
    pub fn interior(&self) -> RegularSet {
        let me = self.clone();
        Self::from_fn(
            self.table.k,
            self.start,
            |&q, a| me.next(q, a),
            |&q| {
                me.is_accepting(q)
                    && (0..me.table.k as Letter).any(|a| me.next(q, a).is_some_and(|t| me.is_accepting(t)))
            },
        )
    }

    pub fn cardinality(&self) -> &Cardinality {
        self.card.get_or_init(|| self.compute_cardinality())
    }

    pub fn is_empty(&self) -> bool {
        !self.table.productive()[self.start as usize]
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_finite()
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.table.len()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(q) = stack.pop() {
            for a in 0..self.table.k as Letter {
                if let Some(t) = self.next(q, a) {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen
    }

    fn compute_cardinality(&self) -> Cardinality {
        if self.is_empty() {
            return Cardinality::Empty;
        }
        let prod = self.table.productive();
        let reach = self.reachable();
        let useful: Vec<bool> = (0..self.table.len()).map(|q| reach[q] && prod[q]).collect();
        // A cycle through useful states pumps infinitely many members.
        let n = self.table.len();
        let mut color = vec![0u8; n];
        for root in 0..n {
            if !useful[root] || color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(u32, Letter)> = vec![(root as u32, 0)];
            color[root] = 1;
            while let Some(&mut (q, ref mut a)) = stack.last_mut() {
                if usize::from(*a) == self.table.k {
                    color[q as usize] = 2;
                    stack.pop();
                    continue;
                }
                let letter = *a;
                *a += 1;
                if let Some(t) = self.next(q, letter) {
                    let t = t as usize;
                    if !useful[t] {
                        continue;
                    }
                    match color[t] {
                        1 => return Cardinality::Infinite,
                        0 => {
                            color[t] = 1;
                            stack.push((t as u32, 0));
                        }
                        _ => {}
                    }
                }
            }
        }
        let words = self.words_up_to(n + 1);
        Cardinality::Finite(words)
    }

    /// Members of length at most `max_len`, length-lex.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        self.words_up_to_limit(max_len, usize::MAX).0
    }

    /// Like `words_up_to` but stops after `limit` words; the flag reports
    /// whether the listing was cut short.
    pub fn words_up_to_limit(&self, max_len: usize, limit: usize) -> (Vec<Word>, bool) {
        let prod = self.table.productive();
        let mut out = Vec::new();
        let mut level: Vec<(Vec<Letter>, u32)> = vec![(Vec::new(), self.start)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, q) in &level {
                for a in 0..self.table.k as Letter {
                    if let Some(t) = self.next(*q, a) {
                        let keep = self.is_accepting(t) || prod[t as usize];
                        if !keep {
                            continue;
                        }
                        let mut v = w.clone();
                        v.push(a);
                        if self.is_accepting(t) {
                            if out.len() == limit {
                                return (out, true);
                            }
                            out.push(Word::new(v.clone()).expect("nonempty"));
                        }
                        if prod[t as usize] {
                            next.push((v, t));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        (out, false)
    }

    pub fn is_subset(&self, other: &RegularSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn equals(&self, other: &RegularSet) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    pub fn is_disjoint(&self, other: &RegularSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// Some shortest member, if any.
    pub fn shortest_word(&self) -> Option<Word> {
        if self.is_empty() {
            return None;
        }
        let prod = self.table.productive();
        let mut frontier = vec![self.start];
        let mut seen = BTreeSet::from([self.start]);
        let mut depth_words: BTreeMap<u32, Vec<Letter>> = BTreeMap::from([(self.start, vec![])]);
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &q in &frontier {
                for a in 0..self.table.k as Letter {
                    if let Some(t) = self.next(q, a) {
                        let mut w = depth_words[&q].clone();
                        w.push(a);
                        if self.is_accepting(t) {
                            return Word::new(w);
                        }
                        if prod[t as usize] && seen.insert(t) {
                            depth_words.insert(t, w);
                            next.push(t);
                        }
                    }
                }
            }
            frontier = next;
        }
        None
    }
}
