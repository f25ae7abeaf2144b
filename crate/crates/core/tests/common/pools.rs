//! Constructible sets and points sampled for the character tests.

use shiftsem_core::constructible::{lambda_times, lattice, make_constructible, ConstructibleSet, WordSetLambda};
use shiftsem_core::{EvPeriodicWord, ExtWord, ShiftAutomaton};

use super::points;

/// `F_Λ` as the constructible set `1·F_{Λ∪{1}}`.
pub fn unit_set(aut: &ShiftAutomaton, lambda: &WordSetLambda) -> ConstructibleSet {
    if lambda.iter().all(|t| t.is_unit()) {
        return ConstructibleSet::whole(aut);
    }
    let mut l = lambda.clone();
    l.insert(ExtWord::Unit);
    make_constructible(aut, &ExtWord::Unit, &l).unwrap()
}

/// Lattice sets `F_Λ` and their one-letter translates `a·F_{Λ∪{a}}`.
pub fn constructible_pool(aut: &ShiftAutomaton) -> Vec<ConstructibleSet> {
    let lat = lattice(aut).unwrap();
    let mut out = Vec::new();
    for el in &lat.elements {
        let lambda = el.lambda(aut);
        out.push(unit_set(aut, &lambda));
        for a in aut.alphabet().letters() {
            let u = ExtWord::word(vec![a]);
            if aut.state_of(&u).is_none() {
                continue;
            }
            let mut l = lambda.clone();
            l.insert(u.clone());
            out.push(make_constructible(aut, &u, &l).unwrap());
        }
    }
    out
}

/// `X ∩ E_{ub} = ub·F_{Λb}` for every letter `b`; their union misses only
/// finitely many words of `X`.
pub fn one_letter_pieces(aut: &ShiftAutomaton, x: &ConstructibleSet) -> Vec<ConstructibleSet> {
    let mut out = Vec::new();
    for b in aut.alphabet().letters() {
        let bw = ExtWord::word(vec![b]);
        let ub = x.u().concat(&bw);
        if aut.state_of(&ub).is_none() {
            continue;
        }
        if let Ok(piece) = make_constructible(aut, &ub, &lambda_times(x.lambda(), &bw)) {
            if !piece.is_empty() {
                out.push(piece);
            }
        }
    }
    out
}

/// The 50 shortest eventually periodic points, or all of them when the shift
/// has fewer: lassos grow until 50 are found or length 6 is exhausted.
pub fn sample_points(aut: &ShiftAutomaton) -> Vec<EvPeriodicWord> {
    let mut pts = Vec::new();
    for n in 3..=6 {
        pts = points(aut, n, n);
        if pts.len() >= 50 {
            break;
        }
    }
    pts.truncate(50);
    pts
}
