//! Brute-force partial-map oracle for the inverse hull, shared by the hull
//! tests and the acceptance target.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use shiftsem_core::hull::{apply, equals, leq, mul, HullElement};
use shiftsem_core::{Letter, ShiftAutomaton, Word};

use super::{all_words, image, in_l, load, Gen};

/// Brute-force partial maps with a memoized language oracle.
pub struct Oracle<'a> {
    aut: &'a ShiftAutomaton,
    memo: RefCell<HashMap<Vec<Letter>, bool>>,
}

impl<'a> Oracle<'a> {
    pub fn new(aut: &'a ShiftAutomaton) -> Self {
        Oracle {
            aut,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn in_l(&self, w: &[Letter]) -> bool {
        if let Some(&b) = self.memo.borrow().get(w) {
            return b;
        }
        let b = in_l(self.aut, w);
        self.memo.borrow_mut().insert(w.to_vec(), b);
        b
    }

    /// `g₁ ∘ … ∘ gₙ` applied to `s`.
    pub fn apply(&self, gens: &[Gen], s: &[Letter]) -> Option<Vec<Letter>> {
        if !self.in_l(s) {
            return None;
        }
        let mut cur = s.to_vec();
        for g in gens.iter().rev() {
            cur = match *g {
                Gen::Theta(a) => {
                    let mut t = vec![a];
                    t.extend_from_slice(&cur);
                    self.in_l(&t).then_some(t)?
                }
                Gen::ThetaInv(a) => (cur.len() > 1 && cur[0] == a).then(|| cur[1..].to_vec())?,
            };
        }
        Some(cur)
    }
}

pub fn element(aut: &ShiftAutomaton, gens: &[Gen]) -> HullElement {
    gens.iter()
        .fold(HullElement::identity(), |acc, g| mul(aut, &acc, &g.element(aut)))
}

fn inverse_gens(gens: &[Gen]) -> Vec<Gen> {
    gens.iter().rev().map(|g| g.inverse()).collect()
}

/// Every word in the domain of the composite starts with this prefix.
fn required_prefix(gens: &[Gen]) -> Vec<Letter> {
    let mut pushed = Vec::new();
    let mut required = Vec::new();
    for g in gens.iter().rev() {
        match *g {
            Gen::Theta(a) => pushed.push(a),
            Gen::ThetaInv(a) => match pushed.pop() {
                Some(b) if b != a => return required,
                Some(_) => {}
                None => required.push(a),
            },
        }
    }
    required
}

pub fn random_gens(rng: &mut StdRng, k: usize, max: usize) -> Vec<Gen> {
    let n = rng.gen_range(1..=max);
    (0..n)
        .map(|_| {
            let a = rng.gen_range(0..k) as Letter;
            if rng.gen_bool(0.5) {
                Gen::Theta(a)
            } else {
                Gen::ThetaInv(a)
            }
        })
        .collect()
}

/// Words compared for one computation: a fixed base plus short extensions
/// of the prefixes every domain word must carry.
fn probe_words(base: &[Vec<Letter>], short: &[Vec<Letter>], prefixes: &[&[Letter]]) -> Vec<Vec<Letter>> {
    let mut out = base.to_vec();
    for p in prefixes {
        for s in short {
            if p.len() + s.len() <= 8 {
                let mut v = p.to_vec();
                v.extend_from_slice(s);
                out.push(v);
            }
        }
    }
    out
}

fn agrees(o: &Oracle, e: &HullElement, gens: &[Gen], words: &[Vec<Letter>]) -> Result<(), String> {
    for s in words {
        let fast = image(apply(o.aut, e, &Word::new(s.clone()).unwrap()));
        let slow = o.apply(gens, s);
        if fast != slow {
            return Err(format!(
                "{}: {} ↦ {:?} but the composite gives {:?}",
                e.render(o.aut),
                o.aut.render(s),
                fast.map(|x| o.aut.render(&x)),
                slow.map(|x| o.aut.render(&x))
            ));
        }
    }
    Ok(())
}

fn graphs_agree(o: &Oracle, a: &[Gen], b: &[Gen], words: &[Vec<Letter>]) -> bool {
    words.iter().all(|s| o.apply(a, s) == o.apply(b, s))
}

/// Randomized mul / invert / equals against composition of the generator
/// maps; returns the number of computations checked.
pub fn oracle_run(name: &str, seed: u64, runs: usize) -> Result<usize, String> {
    let aut = load(name);
    let o = Oracle::new(&aut);
    let k = aut.num_letters();
    let mut rng = StdRng::seed_from_u64(seed);
    let full: Vec<Vec<Letter>> = all_words(k, 8);
    let short: Vec<Vec<Letter>> = all_words(k, 4);
    let base: Vec<Vec<Letter>> = if full.len() <= 600 {
        full.clone()
    } else {
        let mut b = short.clone();
        b.extend((0..1500).map(|_| full[rng.gen_range(0..full.len())].clone()));
        let lang = aut.enumerate_language(8);
        b.extend((0..1500).map(|_| lang[rng.gen_range(0..lang.len())].letters().to_vec()));
        b
    };
    let mut nonzero = 0;
    for _ in 0..runs {
        let a = random_gens(&mut rng, k, 3);
        let b = random_gens(&mut rng, k, 3);
        let (ea, eb) = (element(&aut, &a), element(&aut, &b));
        nonzero += usize::from(!ea.is_zero());
        match rng.gen_range(0..3) {
            0 => {
                let ab: Vec<Gen> = [a.clone(), b.clone()].concat();
                let e = mul(&aut, &ea, &eb);
                let v = match &e {
                    HullElement::Elem { v, .. } => v.letters().to_vec(),
                    HullElement::Zero => Vec::new(),
                };
                let probes = probe_words(&base, &short, &[&required_prefix(&ab), &v]);
                agrees(&o, &e, &ab, &probes)?;
            }
            1 => {
                let inv = inverse_gens(&a);
                let e = ea.invert();
                let probes = probe_words(&base, &short, &[&required_prefix(&inv)]);
                agrees(&o, &e, &inv, &probes)?;
                if e.invert() != ea {
                    return Err(format!("double inverse of {} differs", ea.render(&aut)));
                }
            }
            _ => {
                let probes = probe_words(&base, &short, &[&required_prefix(&a), &required_prefix(&b)]);
                let fast = equals(&aut, &ea, &eb);
                let mut slow = graphs_agree(&o, &a, &b, &probes);
                if fast != slow {
                    slow = graphs_agree(&o, &a, &b, &full);
                }
                if fast != slow {
                    return Err(format!("equals({}, {}) = {fast}", ea.render(&aut), eb.render(&aut)));
                }
            }
        }
    }
    // Roughly half of the random products are nonzero; far fewer means
    // the sampler degenerated.
    if nonzero * 10 < runs * 3 {
        return Err(format!("only {nonzero} nonzero samples"));
    }
    Ok(runs)
}

pub fn sample_elements(aut: &ShiftAutomaton, rng: &mut StdRng, n: usize) -> Vec<HullElement> {
    let k = aut.num_letters();
    (0..n).map(|_| element(aut, &random_gens(rng, k, 4))).collect()
}

#[test]
fn inverse_semigroup_axioms_on_random_triples() {
    for (name, seed) in [("golden", 1u64), ("ex4", 2), ("abc", 3), ("full2", 4)] {
        let aut = load(name);
        let mut rng = StdRng::seed_from_u64(seed);
        let xs = sample_elements(&aut, &mut rng, 60);
        for i in 0..xs.len() {
            let a = &xs[i];
            let b = &xs[(i * 7 + 3) % xs.len()];
            let c = &xs[(i * 13 + 5) % xs.len()];
            let eq = |x: &HullElement, y: &HullElement| equals(&aut, x, y);
            assert!(eq(&mul(&aut, &mul(&aut, a, b), c), &mul(&aut, a, &mul(&aut, b, c))));
            assert!(eq(&mul(&aut, &mul(&aut, a, &a.invert()), a), a));
            assert!(eq(&mul(&aut, &mul(&aut, &a.invert(), a), &a.invert()), &a.invert()));
            assert!(eq(&mul(&aut, a, b).invert(), &mul(&aut, &b.invert(), &a.invert())));
            let e = mul(&aut, &a.invert(), a);
            let f = mul(&aut, b, &b.invert());
            assert!(e.is_idempotent() && f.is_idempotent());
            assert!(eq(&mul(&aut, &e, &f), &mul(&aut, &f, &e)));
            // d is a partial homomorphism into the free group.
            let ab = mul(&aut, a, b);
            if !ab.is_zero() {
                let d = a.d_map().unwrap().mul(&b.d_map().unwrap());
                assert_eq!(ab.d_map().unwrap(), d);
            }
            // Strongly 0-E-unitary: a·e a nonzero idempotent forces a idempotent.
            let ae = mul(&aut, a, &f);
            if !ae.is_zero() && ae.is_idempotent() {
                assert!(a.is_idempotent(), "{}", a.render(&aut));
            }
            if let Some(d) = a.d_map() {
                assert_eq!(d.is_identity(), a.is_idempotent());
            }
            assert!(leq(&aut, &mul(&aut, a, &f), a));
            assert!(leq(&aut, &HullElement::Zero, a));
            assert!(leq(&aut, a, a));
        }
    }
}

/// Inverse-semigroup axioms, the grading and strong 0-E-unitarity on `n`
/// triples drawn from random generator products; returns the triple count.
pub fn axioms_run(name: &str, seed: u64, n: usize) -> Result<usize, String> {
    let aut = load(name);
    let mut rng = StdRng::seed_from_u64(seed);
    let xs = sample_elements(&aut, &mut rng, n);
    let check = |ok: bool, what: &str, a: &HullElement| {
        if ok {
            Ok(())
        } else {
            Err(format!("{name}: {what} fails at {}", a.render(&aut)))
        }
    };
    for i in 0..xs.len() {
        let a = &xs[i];
        let b = &xs[(i * 7 + 3) % xs.len()];
        let c = &xs[(i * 13 + 5) % xs.len()];
        let eq = |x: &HullElement, y: &HullElement| equals(&aut, x, y);
        check(
            eq(&mul(&aut, &mul(&aut, a, b), c), &mul(&aut, a, &mul(&aut, b, c))),
            "associativity",
            a,
        )?;
        check(eq(&mul(&aut, &mul(&aut, a, &a.invert()), a), a), "a a* a = a", a)?;
        check(
            eq(&mul(&aut, &mul(&aut, &a.invert(), a), &a.invert()), &a.invert()),
            "a* a a* = a*",
            a,
        )?;
        check(
            eq(&mul(&aut, a, b).invert(), &mul(&aut, &b.invert(), &a.invert())),
            "(ab)* = b* a*",
            a,
        )?;
        let e = mul(&aut, &a.invert(), a);
        let f = mul(&aut, b, &b.invert());
        check(e.is_idempotent() && f.is_idempotent(), "a* a idempotent", a)?;
        check(eq(&mul(&aut, &e, &f), &mul(&aut, &f, &e)), "idempotents commute", a)?;
        // d is a partial homomorphism into the free group.
        let ab = mul(&aut, a, b);
        if !ab.is_zero() {
            let d = a.d_map().unwrap().mul(&b.d_map().unwrap());
            check(ab.d_map().unwrap() == d, "d(ab) = d(a)d(b)", a)?;
        }
        // Strongly 0-E-unitary: a·e a nonzero idempotent forces a idempotent.
        let ae = mul(&aut, a, &f);
        if !ae.is_zero() && ae.is_idempotent() {
            check(a.is_idempotent(), "strong 0-E-unitarity", a)?;
        }
        if let Some(d) = a.d_map() {
            check(d.is_identity() == a.is_idempotent(), "d(a) = 1 iff a idempotent", a)?;
        }
        check(
            leq(&aut, &ae, a) && leq(&aut, &HullElement::Zero, a) && leq(&aut, a, a),
            "order",
            a,
        )?;
    }
    Ok(xs.len())
}
