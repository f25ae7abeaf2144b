//! Forbidden-pattern presentations and the compiled factor-avoidance
//! automaton that decides the language `L_X` and the points of `X`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::constructible::FollowerLattice;
use crate::error::{Error, Result};
use crate::periodic::EvPeriodicWord;
use crate::word::{Alphabet, ExtWord, Letter, Word};

/// Index of a state of the compiled automaton.
pub type State = u32;

const NONE: State = State::MAX;

/// One position of a forbidden pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternAtom {
    Lit(Letter),
    /// `a+`
    Plus(Letter),
    /// `a*`
    Star(Letter),
    /// `[abc]`; kept sorted and deduplicated.
    OneOf(Vec<Letter>),
    /// `⋆`: any (possibly empty) suffix. Only allowed last.
    AnySuffix,
}

impl PatternAtom {
    /// Parses `a`, `a+`, `a*`, `[abc]` or `⋆` (also spelled `*`).
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "*" || t == "⋆" {
            return Ok(PatternAtom::AnySuffix);
        }
        if let Some(body) = t.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::MalformedPattern(format!("unclosed set '{t}'")))?;
            let mut set = body.chars().map(|c| alphabet.index_of(c)).collect::<Result<Vec<_>>>()?;
            set.sort_unstable();
            set.dedup();
            if set.is_empty() {
                return Err(Error::MalformedPattern("empty symbol set '[]'".into()));
            }
            return Ok(PatternAtom::OneOf(set));
        }
        let mut chars = t.chars();
        let (Some(c), rest) = (chars.next(), chars.as_str()) else {
            return Err(Error::MalformedPattern("empty atom".into()));
        };
        let a = alphabet.index_of(c)?;
        match rest {
            "" => Ok(PatternAtom::Lit(a)),
            "+" => Ok(PatternAtom::Plus(a)),
            "*" => Ok(PatternAtom::Star(a)),
            _ => Err(Error::MalformedPattern(format!("cannot read atom '{t}'"))),
        }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            PatternAtom::Lit(a) => alphabet.symbol(*a).to_string(),
            PatternAtom::Plus(a) => format!("{}+", alphabet.symbol(*a)),
            PatternAtom::Star(a) => format!("{}*", alphabet.symbol(*a)),
            PatternAtom::OneOf(s) => format!("[{}]", alphabet.render(s)),
            PatternAtom::AnySuffix => "⋆".into(),
        }
    }
}

/// An alphabet together with a list of forbidden patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubshiftSpec {
    pub alphabet: Alphabet,
    pub forbidden: Vec<Vec<PatternAtom>>,
}

impl SubshiftSpec {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Vec<PatternAtom>>) -> Result<Self> {
        let spec = SubshiftSpec { alphabet, forbidden };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec from symbol and atom strings.
    pub fn from_strs(symbols: &str, forbidden: &[&[&str]]) -> Result<Self> {
        let alphabet = Alphabet::new(symbols.chars())?;
        let forbidden = forbidden
            .iter()
            .map(|p| {
                p.iter()
                    .map(|a| PatternAtom::parse(&alphabet, a))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, forbidden)
    }

    fn validate(&self) -> Result<()> {
        let k = self.alphabet.len();
        for (i, pat) in self.forbidden.iter().enumerate() {
            if pat.is_empty() {
                return Err(Error::MalformedPattern(format!("pattern {} is empty", i + 1)));
            }
            for (j, atom) in pat.iter().enumerate() {
                let letters: &[Letter] = match atom {
                    PatternAtom::Lit(a) | PatternAtom::Plus(a) | PatternAtom::Star(a) => std::slice::from_ref(a),
                    PatternAtom::OneOf(s) => {
                        if s.is_empty() {
                            return Err(Error::MalformedPattern("empty symbol set".into()));
                        }
                        s
                    }
                    PatternAtom::AnySuffix => {
                        if j + 1 != pat.len() {
                            return Err(Error::MalformedPattern(format!(
                                "pattern {}: ⋆ may only appear last",
                                i + 1
                            )));
                        }
                        &[]
                    }
                };
                if letters.iter().any(|&a| usize::from(a) >= k) {
                    return Err(Error::MalformedPattern(format!(
                        "pattern {}: letter outside the alphabet",
                        i + 1
                    )));
                }
            }
            if Matcher::new(pat, k).matches_empty() {
                return Err(Error::MalformedPattern(format!(
                    "pattern {} matches the empty word",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn render_pattern(&self, pat: &[PatternAtom]) -> Vec<String> {
        pat.iter().map(|a| a.render(&self.alphabet)).collect()
    }
}

/// Position automaton of a single pattern. A position is the number of
/// expanded items consumed; starred items may be skipped.
struct Matcher {
    items: Vec<(Vec<bool>, bool)>,
}

impl Matcher {
    fn new(pat: &[PatternAtom], k: usize) -> Self {
        let set = |ls: &[Letter]| {
            let mut m = vec![false; k];
            for &a in ls {
                m[usize::from(a)] = true;
            }
            m
        };
        let mut items = Vec::new();
        for atom in pat {
            match atom {
                PatternAtom::Lit(a) => items.push((set(&[*a]), false)),
                PatternAtom::Plus(a) => {
                    items.push((set(&[*a]), false));
                    items.push((set(&[*a]), true));
                }
                PatternAtom::Star(a) => items.push((set(&[*a]), true)),
                PatternAtom::OneOf(s) => items.push((set(s), false)),
                // A trailing ⋆ does not change which words contain a match.
                PatternAtom::AnySuffix => {}
            }
        }
        Matcher { items }
    }

    fn close(&self, pos: usize, out: &mut BTreeSet<usize>) {
        let mut p = pos;
        loop {
            out.insert(p);
            if p < self.items.len() && self.items[p].1 {
                p += 1;
            } else {
                break;
            }
        }
    }

    fn matches_empty(&self) -> bool {
        let mut s = BTreeSet::new();
        self.close(0, &mut s);
        s.contains(&self.items.len())
    }
}

/// The compiled presentation: a deterministic automaton whose surviving runs
/// are the words avoiding every forbidden pattern, with live states marked.
///
/// A word lies in `L_X` iff its run from the initial state stays inside live
/// states; an eventually periodic word lies in `X` iff its run never dies
/// there.
#[derive(Debug, Clone)]
pub struct ShiftAutomaton {
    spec: SubshiftSpec,
    k: usize,
    trans: Vec<State>,
    live: Vec<bool>,
    class_of: Vec<State>,
    num_classes: usize,
    class_reps: Vec<ExtWord>,
    shortest: Vec<Vec<Letter>>,
    lattice: OnceLock<Result<FollowerLattice>>,
}

/// Compiles a presentation into its factor-avoidance automaton.
pub fn compile(spec: &SubshiftSpec) -> Result<ShiftAutomaton> {
    spec.validate()?;
    let k = spec.alphabet.len();
    let matchers: Vec<Matcher> = spec.forbidden.iter().map(|p| Matcher::new(p, k)).collect();

    type Key = BTreeSet<(usize, usize)>;
    let mut start: Key = BTreeSet::new();
    for (i, m) in matchers.iter().enumerate() {
        let mut s = BTreeSet::new();
        m.close(0, &mut s);
        start.extend(s.into_iter().map(|p| (i, p)));
    }
    let step = |key: &Key, a: usize| -> Option<Key> {
        let mut next = start.clone();
        for &(i, p) in key {
            let m = &matchers[i];
            if p == m.items.len() {
                continue;
            }
            let (set, star) = &m.items[p];
            if set[a] {
                let mut s = BTreeSet::new();
                m.close(if *star { p } else { p + 1 }, &mut s);
                if s.contains(&m.items.len()) {
                    return None;
                }
                next.extend(s.into_iter().map(|q| (i, q)));
            }
        }
        Some(next)
    };

    let mut ids: BTreeMap<Key, State> = BTreeMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut trans: Vec<State> = Vec::new();
    ids.insert(start.clone(), 0);
    keys.push(start.clone());
    let mut i = 0;
    while i < keys.len() {
        for a in 0..k {
            let t = match step(&keys[i], a) {
                None => NONE,
                Some(next) => match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = keys.len() as State;
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
    let n = keys.len();

    // A state is live iff an infinite run starts there: repeatedly discard
    // states all of whose successors are gone.
    let mut live = vec![true; n];
    loop {
        let mut changed = false;
        for q in 0..n {
            if live[q]
                && !(0..k).any(|a| {
                    let t = trans[q * k + a];
                    t != NONE && live[t as usize]
                })
            {
                live[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !live[0] {
        return Err(Error::Invalid("the presentation defines the empty shift".into()));
    }

    let mut aut = ShiftAutomaton {
        spec: spec.clone(),
        k,
        trans,
        live,
        class_of: vec![NONE; n],
        num_classes: 0,
        class_reps: Vec::new(),
        shortest: vec![Vec::new(); n],
        lattice: OnceLock::new(),
    };
    aut.compute_classes();
    Ok(aut)
}

impl ShiftAutomaton {
    fn compute_classes(&mut self) {
        let n = self.live.len();
        let k = self.k;
        let live: Vec<usize> = (0..n).filter(|&q| self.live[q]).collect();
        // Moore refinement on the live part: all live states accept, so two
        // states are equivalent iff they define the same set of words.
        let mut class = vec![0usize; n];
        let mut count = 1;
        loop {
            let mut sigs: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = vec![0usize; n];
            for &q in &live {
                let sig: Vec<usize> = (0..k)
                    .map(|a| match self.step(q as State, a as Letter) {
                        Some(t) => class[t as usize],
                        None => usize::MAX,
                    })
                    .collect();
                let len = sigs.len();
                next[q] = *sigs.entry((class[q], sig)).or_insert(len);
            }
            let new_count = sigs.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Shortest, then lexicographically least, word reaching each state.
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0usize);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                if let Some(t) = self.step(q as State, a as Letter) {
                    let t = t as usize;
                    if !seen[t] {
                        seen[t] = true;
                        let mut w = self.shortest[q].clone();
                        w.push(a as Letter);
                        self.shortest[t] = w;
                        queue.push_back(t);
                    }
                }
            }
        }

        // Renumber classes by their representative words so ids are stable.
        let mut best: BTreeMap<usize, (usize, Vec<Letter>)> = BTreeMap::new();
        for &q in &live {
            let w = &self.shortest[q];
            let cand = if q == 0 { (0, Vec::new()) } else { (w.len(), w.clone()) };
            let e = best.entry(class[q]).or_insert_with(|| cand.clone());
            if cand < *e {
                *e = cand;
            }
        }
        let mut order: Vec<(Vec<Letter>, usize)> = best.iter().map(|(c, (_, w))| (w.clone(), *c)).collect();
        order.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
        let mut renum = BTreeMap::new();
        self.class_reps = Vec::with_capacity(order.len());
        for (i, (w, c)) in order.into_iter().enumerate() {
            renum.insert(c, i as State);
            self.class_reps.push(ExtWord::word(w));
        }
        for &q in &live {
            self.class_of[q] = renum[&class[q]];
        }
        self.num_classes = self.class_reps.len();
    }

    pub fn spec(&self) -> &SubshiftSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.spec.alphabet
    }

    pub fn num_letters(&self) -> usize {
        self.k
    }

    pub fn initial(&self) -> State {
        0
    }

    /// Number of states of the factor-clean automaton (live or not).
    pub fn num_states(&self) -> usize {
        self.live.len()
    }

    pub fn is_live(&self, q: State) -> bool {
        self.live[q as usize]
    }

    pub fn live_states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.live.len() as State).filter(|&q| self.live[q as usize])
    }

    /// Transition of the factor-clean automaton, live or not.
    pub fn clean_step(&self, q: State, a: Letter) -> Option<State> {
        let t = self.trans[q as usize * self.k + usize::from(a)];
        (t != NONE).then_some(t)
    }

    /// Transition restricted to live states.
    pub fn step(&self, q: State, a: Letter) -> Option<State> {
        self.clean_step(q, a).filter(|&t| self.live[t as usize])
    }

    pub fn run_from(&self, q: State, letters: &[Letter]) -> Option<State> {
        letters.iter().try_fold(q, |s, &a| self.step(s, a))
    }

    pub fn run(&self, letters: &[Letter]) -> Option<State> {
        self.run_from(0, letters)
    }

    /// State reached by an extended word; `None` for zero or words outside
    /// `L_X`. The unit reaches the initial state.
    pub fn state_of(&self, w: &ExtWord) -> Option<State> {
        match w {
            ExtWord::Zero => None,
            ExtWord::Unit => Some(0),
            ExtWord::W(w) => self.run(w.letters()),
        }
    }

    /// True iff the word contains no forbidden factor (it may still fail to
    /// extend to an infinite word).
    pub fn is_factor_clean(&self, letters: &[Letter]) -> bool {
        letters.iter().try_fold(0, |s, &a| self.clean_step(s, a)).is_some()
    }

    fn check_letters(&self, letters: &[Letter]) -> Result<()> {
        match letters.iter().find(|&&a| usize::from(a) >= self.k) {
            Some(&a) => Err(Error::Invalid(format!("letter index {a} outside the alphabet"))),
            None => Ok(()),
        }
    }

    /// `w ∈ L_X`.
    pub fn contains(&self, w: &Word) -> Result<bool> {
        self.check_letters(w.letters())?;
        Ok(self.run(w.letters()).is_some())
    }

    pub fn contains_letters(&self, letters: &[Letter]) -> bool {
        !letters.is_empty() && self.run(letters).is_some()
    }

    /// `ω ∈ X`.
    pub fn contains_point(&self, w: &EvPeriodicWord) -> Result<bool> {
        self.check_letters(w.preperiod())?;
        self.check_letters(w.period())?;
        Ok(self.accepts_point_from(0, w))
    }

    /// True iff the run of `ω` from `q` never dies. The state at period
    /// boundaries must repeat within `|Q| + 1` periods.
    pub fn accepts_point_from(&self, q: State, w: &EvPeriodicWord) -> bool {
        let Some(mut s) = self.run_from(q, w.preperiod()) else {
            return false;
        };
        let mut seen = BTreeSet::new();
        while seen.insert(s) {
            match self.run_from(s, w.period()) {
                Some(t) => s = t,
                None => return false,
            }
        }
        true
    }

    /// The product of `S̃_X ∪ {0}`: concatenation when it lies in `L_X`.
    pub fn sx_mul(&self, x: &ExtWord, y: &ExtWord) -> ExtWord {
        let c = x.concat(y);
        match &c {
            ExtWord::W(w) if self.run(w.letters()).is_none() => ExtWord::Zero,
            _ => c,
        }
    }

    /// All words of `L_X` up to `max_len`, length-lex.
    pub fn enumerate_language(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut level: Vec<(Vec<Letter>, State)> = vec![(Vec::new(), 0)];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, q) in &level {
                for a in 0..self.k as Letter {
                    if let Some(t) = self.step(*q, a) {
                        let mut v = w.clone();
                        v.push(a);
                        next.push((v, t));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| Word::new(w.clone()).expect("nonempty")));
            level = next;
        }
        out
    }

    /// Number of follower classes: live states up to equality of the sets of
    /// words they admit.
    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, q: State) -> usize {
        debug_assert!(self.live[q as usize]);
        self.class_of[q as usize] as usize
    }

    /// A shortest word leading into the class; the unit for the class of
    /// the initial state.
    pub fn class_rep(&self, c: usize) -> &ExtWord {
        &self.class_reps[c]
    }

    /// Some live state in class `c`.
    pub fn class_state(&self, c: usize) -> State {
        self.state_of(&self.class_reps[c])
            .expect("representative is admissible")
    }

    /// Shortest word reaching a live state.
    pub fn access_word(&self, q: State) -> &[Letter] {
        &self.shortest[q as usize]
    }

    pub(crate) fn lattice_cell(&self) -> &OnceLock<Result<FollowerLattice>> {
        &self.lattice
    }

    pub fn render(&self, letters: &[Letter]) -> String {
        self.alphabet().render(letters)
    }

    pub fn render_ext(&self, w: &ExtWord) -> String {
        self.alphabet().render_ext(w)
    }
}

impl fmt::Display for ShiftAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} states ({} live, {} classes) over {}",
            self.num_states(),
            self.live.iter().filter(|&&l| l).count(),
            self.num_classes,
            self.alphabet().render(&self.alphabet().letters().collect::<Vec<_>>())
        )
    }
}
