#![allow(dead_code)]

pub mod hull_oracle;
pub mod pools;

use std::collections::BTreeSet;

use shiftsem_core::constructible::{follower, WordSetLambda};
use shiftsem_core::hull::HullElement;
use shiftsem_core::specfile::corpus;
use shiftsem_core::{compile, EvPeriodicWord, ExtWord, Letter, PatternAtom, RegularSet, ShiftAutomaton, Word};

pub fn load(name: &str) -> ShiftAutomaton {
    compile(&corpus(name).unwrap().spec).unwrap()
}

pub fn w(aut: &ShiftAutomaton, text: &str) -> Word {
    aut.alphabet().word(text).unwrap()
}

pub fn ew(aut: &ShiftAutomaton, text: &str) -> ExtWord {
    aut.alphabet().ext_word(text).unwrap()
}

pub fn lam(aut: &ShiftAutomaton, texts: &[&str]) -> WordSetLambda {
    texts.iter().map(|t| ew(aut, t)).collect()
}

pub fn point(aut: &ShiftAutomaton, text: &str) -> EvPeriodicWord {
    EvPeriodicWord::parse(aut.alphabet(), text).unwrap()
}

/// Does `pattern` match `w` starting at position `i`?
fn matches_at(pattern: &[PatternAtom], w: &[Letter], i: usize) -> bool {
    let Some((head, rest)) = pattern.split_first() else {
        return true;
    };
    match head {
        PatternAtom::AnySuffix => true,
        PatternAtom::Lit(a) => w.get(i) == Some(a) && matches_at(rest, w, i + 1),
        PatternAtom::OneOf(s) => w.get(i).is_some_and(|b| s.contains(b)) && matches_at(rest, w, i + 1),
        PatternAtom::Star(a) | PatternAtom::Plus(a) => {
            let min = usize::from(matches!(head, PatternAtom::Plus(_)));
            let mut n = 0;
            loop {
                if n >= min && matches_at(rest, w, i + n) {
                    return true;
                }
                if w.get(i + n) != Some(a) {
                    return false;
                }
                n += 1;
            }
        }
    }
}

/// No forbidden pattern occurs as a factor of `w`.
pub fn avoids(aut: &ShiftAutomaton, w: &[Letter]) -> bool {
    let pats = &aut.spec().forbidden;
    (0..w.len()).all(|i| pats.iter().all(|p| !matches_at(p, w, i)))
}

/// Brute-force language membership: `w` avoids every pattern and has an
/// avoiding right extension of `depth` letters. On the bundled shifts every
/// avoiding word extends forever, so a small depth is exact.
pub fn brute_in_language(aut: &ShiftAutomaton, w: &[Letter], depth: usize) -> bool {
    if w.is_empty() || !avoids(aut, w) {
        return false;
    }
    fn extend(aut: &ShiftAutomaton, w: &mut Vec<Letter>, depth: usize) -> bool {
        if depth == 0 {
            return true;
        }
        for a in aut.alphabet().letters() {
            w.push(a);
            let ok = avoids(aut, w) && extend(aut, w, depth - 1);
            w.pop();
            if ok {
                return true;
            }
        }
        false
    }
    extend(aut, &mut w.to_vec(), depth)
}

pub fn in_l(aut: &ShiftAutomaton, w: &[Letter]) -> bool {
    brute_in_language(aut, w, 6)
}

/// All words over the alphabet of length `1..=max_len`, length-lex.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..k as Letter {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// A generator of the inverse hull as a concrete partial map on words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    /// `s ↦ as` when `as ∈ L_X`.
    Theta(Letter),
    /// `as ↦ s` for nonempty `s`.
    ThetaInv(Letter),
}

impl Gen {
    pub fn apply(self, aut: &ShiftAutomaton, s: &[Letter]) -> Option<Vec<Letter>> {
        match self {
            Gen::Theta(a) => {
                let mut t = vec![a];
                t.extend_from_slice(s);
                in_l(aut, &t).then_some(t)
            }
            Gen::ThetaInv(a) => (s.len() > 1 && s[0] == a).then(|| s[1..].to_vec()),
        }
    }

    pub fn inverse(self) -> Gen {
        match self {
            Gen::Theta(a) => Gen::ThetaInv(a),
            Gen::ThetaInv(a) => Gen::Theta(a),
        }
    }

    pub fn element(self, aut: &ShiftAutomaton) -> HullElement {
        match self {
            Gen::Theta(a) => HullElement::theta(aut, &Word::letter(a)).unwrap(),
            Gen::ThetaInv(a) => HullElement::theta(aut, &Word::letter(a)).unwrap().invert(),
        }
    }
}

/// The composite `g₁ ∘ g₂ ∘ … ∘ gₙ` applied to `s` (rightmost first).
pub fn brute_apply(aut: &ShiftAutomaton, gens: &[Gen], s: &[Letter]) -> Option<Vec<Letter>> {
    if !in_l(aut, s) {
        return None;
    }
    let mut cur = s.to_vec();
    for g in gens.iter().rev() {
        cur = g.apply(aut, &cur)?;
    }
    Some(cur)
}

/// Reads a hull image as an optional word.
pub fn image(e: ExtWord) -> Option<Vec<Letter>> {
    match e {
        ExtWord::W(w) => Some(w.into_letters()),
        _ => None,
    }
}

/// Eventually periodic points of `X` with preperiod and period up to the
/// given lengths, in a fixed order.
pub fn points(aut: &ShiftAutomaton, max_pre: usize, max_per: usize) -> Vec<EvPeriodicWord> {
    let k = aut.num_letters();
    let mut out = BTreeSet::new();
    let mut pres = vec![Vec::new()];
    pres.extend(all_words(k, max_pre));
    for per in all_words(k, max_per) {
        for pre in &pres {
            let p = EvPeriodicWord::new(pre.clone(), per.clone()).unwrap();
            if aut.contains_point(&p).unwrap() {
                out.insert(p);
            }
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort_by_key(|p| (p.lasso_len(), p.clone()));
    v
}

pub fn pattern(aut: &ShiftAutomaton, atoms: &[&str]) -> RegularSet {
    let atoms: Vec<PatternAtom> = atoms
        .iter()
        .map(|a| PatternAtom::parse(aut.alphabet(), a).unwrap())
        .collect();
    RegularSet::from_pattern(aut.num_letters(), &atoms)
}

pub fn whole(aut: &ShiftAutomaton) -> RegularSet {
    follower(aut, &ExtWord::Unit).unwrap()
}

/// One row per case of the F_μ description on the five-letter shift:
/// samples, then whether F_μ equals `L ∩ P` or `L ∖ P` for the pattern P.
pub const FMU_CASES: &[(&str, &[&str], &str, &[&str])] = &[
    ("a", &["104", "1004", "3104"], "meet", &["1", "*"]),
    ("b", &["204", "20004", "0204"], "meet", &["2", "*"]),
    ("c", &["4", "44", "14", "0004"], "all", &[]),
    ("d", &["10", "1000", "410"], "minus", &["0*", "4", "[0234]", "*"]),
    ("e", &["20", "200", "3420"], "minus", &["0*", "4", "[0134]", "*"]),
    ("f", &["30", "3000", "130"], "minus", &["0*", "4", "*"]),
    ("g", &["0", "00", "40", "400"], "all", &[]),
    ("h", &["1", "01", "41"], "minus", &["0+", "4", "[0234]", "*"]),
    ("i", &["2", "02", "32"], "minus", &["0+", "4", "[0134]", "*"]),
    ("j", &["3", "13", "443"], "minus", &["0+", "4", "*"]),
];

/// The language a row of [`FMU_CASES`] predicts for `F_μ`.
pub fn fmu_expected(aut: &ShiftAutomaton, how: &str, atoms: &[&str]) -> RegularSet {
    let l = whole(aut);
    match how {
        "meet" => l.intersect(&pattern(aut, atoms)).unwrap(),
        "minus" => l.difference(&pattern(aut, atoms)).unwrap(),
        _ => l,
    }
}
