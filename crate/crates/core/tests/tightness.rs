mod common;

use std::collections::BTreeSet;

use common::*;
use shiftsem_core::constructible::{
    f_lambda_gamma, interior_boundary, make_constructible, states_of, ConstructibleSet,
};
use shiftsem_core::specfile::CORPUS;
use shiftsem_core::tightness::{
    brute_force_cover, condition_star, cover_verdict, defect_set, hypotheses_check, uncovered_interior, CoverVerdict,
    FiniteUniverseFamily, StarVerdict, Tri, STAR_BUDGET,
};
use shiftsem_core::{Cardinality, ExtWord, ShiftAutomaton, Word};

fn cset(aut: &ShiftAutomaton, u: &str, lambda: &[&str]) -> ConstructibleSet {
    let mut l = lam(aut, lambda);
    l.insert(ew(aut, u));
    make_constructible(aut, &ew(aut, u), &l).unwrap()
}

/// `X = F_{1,2}` and the cover `E_1, …, E_4, 0·F_{10,20,30}`.
fn pair_cover(aut: &ShiftAutomaton) -> (ConstructibleSet, Vec<ConstructibleSet>) {
    let x = cset(aut, "ε", &["1", "2"]);
    let mut covers: Vec<ConstructibleSet> = ["1", "2", "3", "4"].iter().map(|a| cset(aut, a, &[])).collect();
    covers.push(cset(aut, "0", &["10", "20", "30"]));
    (x, covers)
}

fn expected_defect(n: usize) -> BTreeSet<Vec<u8>> {
    let mut d: BTreeSet<Vec<u8>> = (0..5).map(|a| vec![a]).collect();
    for k in 1..n {
        let mut v = vec![0u8; k];
        v.push(4);
        d.insert(v);
    }
    d
}

#[test]
fn defect_of_the_pair_cover() {
    let aut = load("ex4");
    let (x, covers) = pair_cover(&aut);
    let d = defect_set(&aut, &x, &covers).unwrap();
    assert!(d.is_infinite());
    let got: BTreeSet<Vec<u8>> = d.words_up_to(20).into_iter().map(Word::into_letters).collect();
    assert_eq!(got, expected_defect(20));
    // Brute force on short words: members of X missed by every cover.
    for s in x.set().words_up_to(6) {
        let missed = covers.iter().all(|c| !c.set().contains(s.letters()));
        assert_eq!(d.contains(s.letters()), missed);
    }
    assert!(matches!(
        cover_verdict(&aut, &x, &covers, 6).unwrap(),
        CoverVerdict::Covered { .. }
    ));
    assert!(defect_set(&aut, &x, &[x.clone()]).unwrap().is_empty());
    // The uncovered part of the interior is finite, as a cover requires.
    assert!(uncovered_interior(&x, &covers).unwrap().is_finite());
}

#[test]
fn cover_verdicts_agree_with_the_witness_search() {
    let aut = load("ex4");
    let x = cset(&aut, "ε", &["1", "2"]);
    let e1 = cset(&aut, "1", &[]);
    let e2 = cset(&aut, "2", &[]);
    let partial = [e1.clone(), e2.clone()];
    match cover_verdict(&aut, &x, &partial, 6).unwrap() {
        CoverVerdict::NotCovered { witness } => {
            assert!(!witness.is_empty());
            assert!(witness.set().is_subset(x.set()).unwrap());
            assert!(witness.set().is_disjoint(e1.set()).unwrap());
            assert!(witness.set().is_disjoint(e2.set()).unwrap());
        }
        other => panic!("expected NotCovered, got {}", other.label()),
    }
    assert_eq!(brute_force_cover(&aut, &x, &partial, 6).unwrap().label(), "NotCovered");
    assert!(matches!(
        cover_verdict(&aut, &x, &[x.clone()], 4).unwrap(),
        CoverVerdict::Covered { .. }
    ));

    // Every one-letter family: Covered exactly when the bounded search finds
    // no uncovered constructible subset.
    for name in ["golden", "ex4", "abc"] {
        let aut = load(name);
        let letters: Vec<ConstructibleSet> = aut
            .alphabet()
            .letters()
            .filter(|&a| aut.run(&[a]).is_some())
            .map(|a| {
                let u = ExtWord::word(vec![a]);
                make_constructible(&aut, &u, &[ExtWord::Unit, u.clone()].into()).unwrap()
            })
            .collect();
        let whole = ConstructibleSet::whole(&aut);
        for mask in 0u32..(1 << letters.len()) {
            let fam: Vec<ConstructibleSet> = (0..letters.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| letters[i].clone())
                .collect();
            let fast = cover_verdict(&aut, &whole, &fam, 5).unwrap();
            let slow = brute_force_cover(&aut, &whole, &fam, 5).unwrap();
            match fast {
                CoverVerdict::Covered { .. } => assert_eq!(slow.label(), "UnknownUpTo", "{name} {mask}"),
                CoverVerdict::NotCovered { .. } => assert_eq!(slow.label(), "NotCovered", "{name} {mask}"),
                CoverVerdict::UnknownUpTo(_) => panic!("the lattice is available"),
            }
        }
    }
}

#[test]
fn candidates_outside_x_are_rejected() {
    let aut = load("ex4");
    let x = cset(&aut, "1", &[]);
    let y = cset(&aut, "2", &[]);
    assert!(defect_set(&aut, &x, &[y.clone()]).is_err());
    assert!(cover_verdict(&aut, &x, &[y], 3).is_err());
}

#[test]
fn hypotheses_on_the_corpus() {
    let ex4 = load("ex4");
    let r = hypotheses_check(&ex4, 20).unwrap();
    assert!(r.length_function && r.leftover_finite);
    assert!(!r.boundaries_finite && !r.certified);
    let (_, boundary) = r.boundary_witness.unwrap();
    assert!(!boundary.is_empty());
    let x = cset(&ex4, "ε", &["1", "2"]);
    let (_, b) = interior_boundary(&x);
    assert!(b.is_infinite());
    for n in 1..=19 {
        let mut v = vec![0u8; n];
        v.push(4);
        assert!(b.contains(&v));
    }
    for name in ["golden", "full1", "full2", "abc"] {
        let r = hypotheses_check(&load(name), 10).unwrap();
        assert!(r.certified && r.leftover_finite, "{name}");
        assert!(matches!(r.leftover, Cardinality::Finite(_) | Cardinality::Empty));
    }
}

#[test]
fn finite_universe_examples() {
    let s = |v: &[u64]| v.iter().copied().collect::<BTreeSet<u64>>();
    let fam = FiniteUniverseFamily::new(s(&[0, 1, 2]), vec![s(&[]), s(&[0]), s(&[1]), s(&[0, 1, 2])], None).unwrap();
    assert!(fam.is_cover(&s(&[0, 1, 2]), &[s(&[0]), s(&[1])]));
    let d = fam.defect(&s(&[0, 1, 2]), &[s(&[0]), s(&[1])]).unwrap();
    assert_eq!(d.set, s(&[2]));
    assert!(!d.infinite);
    assert_eq!(fam.tightness(), (false, true));

    let n = 50;
    let all: BTreeSet<u64> = (0..n).collect();
    let fam = FiniteUniverseFamily::truncated_naturals(n, vec![s(&[]), s(&[0]), s(&[1]), all.clone()]).unwrap();
    let d = fam.defect(&all, &[s(&[0]), s(&[1])]).unwrap();
    assert_eq!(d.set, (2..n).collect());
    assert!(d.infinite);
    assert_eq!(fam.tightness(), (false, false));
    assert!(fam.defect(&s(&[0]), &[s(&[1])]).is_err());
}

#[test]
fn condition_star_on_the_corpus() {
    for name in CORPUS {
        let aut = load(name);
        let r = condition_star(&aut, STAR_BUDGET).unwrap();
        assert!(!r.truncated);
        assert!(!r.entries.is_empty());
        for e in &r.entries {
            let f = f_lambda_gamma(&aut, &e.lambda, &e.gamma).unwrap();
            match &e.verdict {
                StarVerdict::VacuouslyTrue => assert!(f.is_finite(), "{name}"),
                StarVerdict::Witness(omega) => {
                    assert!(f.is_infinite());
                    assert!(in_l(&aut, &omega.prefix(30)));
                    for t in &e.lambda {
                        let tw = omega.prepend(t.letters());
                        assert!(in_l(&aut, &tw.prefix(30)), "{name}");
                    }
                    for r in &e.gamma {
                        let rw = omega.prepend(r.letters());
                        assert!(!aut.contains_point(&rw).unwrap(), "{name}");
                        assert!(!in_l(&aut, &rw.prefix(30)), "{name}");
                    }
                }
                StarVerdict::Refuted => assert!(f.is_infinite()),
            }
        }
        let refuted = r.entries.iter().any(|e| e.verdict == StarVerdict::Refuted);
        assert_eq!(r.verdict == Tri::Fails, refuted, "{name}");
    }
}

#[test]
fn condition_star_examples() {
    let g = load("golden");
    let r = condition_star(&g, STAR_BUDGET).unwrap();
    assert_eq!(r.verdict, Tri::Holds);
    let zero = lam(&g, &["0"]);
    let zero_states = states_of(&g, &zero).unwrap().unwrap();
    let entry = r
        .entries
        .iter()
        .find(|e| e.gamma.is_empty() && states_of(&g, &e.lambda).unwrap().unwrap() == zero_states)
        .or_else(|| r.entries.iter().find(|e| e.gamma.is_empty()))
        .unwrap();
    let StarVerdict::Witness(omega) = &entry.verdict else {
        panic!("expected a witness");
    };
    assert!(g.contains_point(omega).unwrap());
    for e in &r.entries {
        assert!(matches!(
            e.verdict,
            StarVerdict::Witness(_) | StarVerdict::VacuouslyTrue
        ));
    }

    // The five-letter shift fails at Λ = {1, 2}, Γ = {3}: F_{Λ,Γ} is
    // {0ⁿ4 : n ≥ 1}, infinite, yet no infinite word lies in it.
    let ex4 = load("ex4");
    let r = condition_star(&ex4, STAR_BUDGET).unwrap();
    assert_eq!(r.verdict, Tri::Fails);
    assert!(r.entries.iter().any(|e| e.verdict == StarVerdict::Refuted));
    for name in ["abc", "full1", "full2"] {
        assert_eq!(
            condition_star(&load(name), STAR_BUDGET).unwrap().verdict,
            Tri::Holds,
            "{name}"
        );
    }
}
