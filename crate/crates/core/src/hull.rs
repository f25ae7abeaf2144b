//! The inverse hull: partial bijections `v·s ↦ u·s` (`s ∈ F_Λ`) in normal
//! form, their products, inverses, order and grading.

use std::collections::BTreeSet;

use crate::constructible::{
    class_closure, follower_of_states, lambda_of, lambda_times, states_of, ConstructibleSet, WordSetLambda,
};
use crate::error::{Error, Result};
use crate::freegroup::FreeGroupWord;
use crate::regset::RegularSet;
use crate::shift::ShiftAutomaton;
use crate::word::{ExtWord, Word};

/// An element of the inverse hull. `Elem { u, lambda, v }` maps `v·s` to
/// `u·s` for every `s ∈ F_lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HullElement {
    Zero,
    Elem {
        u: ExtWord,
        lambda: WordSetLambda,
        v: ExtWord,
    },
}

impl HullElement {
    /// The identity map of `L_X`.
    pub fn identity() -> HullElement {
        HullElement::Elem {
            u: ExtWord::Unit,
            lambda: BTreeSet::from([ExtWord::Unit]),
            v: ExtWord::Unit,
        }
    }

    /// Builds `θ_u f_Λ θ_v⁻¹`, collapsing to zero when `F_Λ` is empty.
    pub fn new(aut: &ShiftAutomaton, u: ExtWord, lambda: WordSetLambda, v: ExtWord) -> Result<Self> {
        if u.is_zero() || v.is_zero() || lambda.contains(&ExtWord::Zero) {
            return Err(Error::ZeroNotAllowed);
        }
        if !lambda.contains(&u) || !lambda.contains(&v) {
            return Err(Error::InvalidPresentation("u and v must belong to Λ".into()));
        }
        Ok(normalize(aut, u, lambda, v))
    }

    /// `θ_μ : s ↦ μs` on `F_μ`.
    pub fn theta(aut: &ShiftAutomaton, mu: &Word) -> Result<Self> {
        if aut.run(mu.letters()).is_none() {
            return Err(Error::NotInLanguage(aut.render(mu.letters())));
        }
        let m = ExtWord::W(mu.clone());
        Ok(HullElement::Elem {
            u: m.clone(),
            lambda: lambda_of([ExtWord::Unit, m])?,
            v: ExtWord::Unit,
        })
    }

    /// The idempotent whose domain is the constructible set `uF_Λ`.
    pub fn projection(aut: &ShiftAutomaton, x: &ConstructibleSet) -> Self {
        normalize(aut, x.u().clone(), x.lambda().clone(), x.u().clone())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, HullElement::Zero)
    }

    pub fn is_idempotent(&self) -> bool {
        match self {
            HullElement::Zero => true,
            HullElement::Elem { u, v, .. } => u == v,
        }
    }

    pub fn invert(&self) -> HullElement {
        match self {
            HullElement::Zero => HullElement::Zero,
            HullElement::Elem { u, lambda, v } => HullElement::Elem {
                u: v.clone(),
                lambda: lambda.clone(),
                v: u.clone(),
            },
        }
    }

    /// `d(θ_u f_Λ θ_v⁻¹) = uv⁻¹`; `None` stands for zero.
    pub fn d_map(&self) -> Option<FreeGroupWord> {
        match self {
            HullElement::Zero => None,
            HullElement::Elem { u, v, .. } => Some(FreeGroupWord::from_uv(u.letters(), v.letters())),
        }
    }

    /// `F_Λ`; empty for zero.
    pub fn follower_part(&self, aut: &ShiftAutomaton) -> RegularSet {
        match self {
            HullElement::Zero => RegularSet::empty(aut.num_letters()),
            HullElement::Elem { lambda, .. } => {
                crate::constructible::f_lambda(aut, lambda).expect("Λ nonempty, zero-free")
            }
        }
    }

    /// `v·F_Λ`.
    pub fn domain(&self, aut: &ShiftAutomaton) -> RegularSet {
        match self {
            HullElement::Zero => RegularSet::empty(aut.num_letters()),
            HullElement::Elem { v, .. } => self.follower_part(aut).prefixed(v.letters()),
        }
    }

    /// `u·F_Λ`.
    pub fn range(&self, aut: &ShiftAutomaton) -> RegularSet {
        self.invert().domain(aut)
    }

    pub fn render(&self, aut: &ShiftAutomaton) -> String {
        match self {
            HullElement::Zero => "0".into(),
            HullElement::Elem { u, lambda, v } => {
                let l: Vec<String> = lambda.iter().map(|t| aut.render_ext(t)).collect();
                format!(
                    "θ[{}] f{{{}}} θ[{}]⁻¹",
                    aut.render_ext(u),
                    l.join(","),
                    aut.render_ext(v)
                )
            }
        }
    }
}

fn normalize(aut: &ShiftAutomaton, u: ExtWord, lambda: WordSetLambda, v: ExtWord) -> HullElement {
    if u.is_zero() || v.is_zero() || lambda.contains(&ExtWord::Zero) {
        return HullElement::Zero;
    }
    match states_of(aut, &lambda) {
        Ok(Some(states)) if !follower_of_states(aut, &states, &BTreeSet::new()).is_empty() => {
            HullElement::Elem { u, lambda, v }
        }
        _ => HullElement::Zero,
    }
}

/// Image of `w` under `e`, or `Zero` when `w` is outside the domain.
pub fn apply(aut: &ShiftAutomaton, e: &HullElement, w: &Word) -> ExtWord {
    let HullElement::Elem { u, lambda, v } = e else {
        return ExtWord::Zero;
    };
    let Some(s) = v.strip_prefix_of(&ExtWord::W(w.clone())) else {
        return ExtWord::Zero;
    };
    if s.is_unit() {
        return ExtWord::Zero;
    }
    if lambda.iter().any(|t| aut.sx_mul(t, &s).is_zero()) {
        return ExtWord::Zero;
    }
    aut.sx_mul(u, &s)
}

/// The composite `a∘b` in normal form.
pub fn mul(aut: &ShiftAutomaton, a: &HullElement, b: &HullElement) -> HullElement {
    let (
        HullElement::Elem {
            u: u1,
            lambda: l1,
            v: v1,
        },
        HullElement::Elem {
            u: u2,
            lambda: l2,
            v: v2,
        },
    ) = (a, b)
    else {
        return HullElement::Zero;
    };
    if let Some(y) = v1.strip_prefix_of(u2) {
        // u₂ = v₁y: the output u₂s = v₁(ys) goes through a.
        let mut lambda = lambda_times(l1, &y);
        lambda.extend(l2.iter().cloned());
        normalize(aut, u1.concat(&y), lambda, v2.clone())
    } else if let Some(x) = u2.strip_prefix_of(v1) {
        // v₁ = u₂x with x ≠ 1: only outputs of b beginning with v₁ survive.
        let mut lambda = l1.clone();
        lambda.extend(lambda_times(l2, &x));
        normalize(aut, u1.clone(), lambda, v2.concat(&x))
    } else {
        HullElement::Zero
    }
}

/// Equality of partial maps: same `u`, `v` and the same `F_Λ`.
pub fn equals(aut: &ShiftAutomaton, a: &HullElement, b: &HullElement) -> bool {
    match (a, b) {
        (HullElement::Zero, HullElement::Zero) => true,
        (
            HullElement::Elem {
                u: u1,
                lambda: l1,
                v: v1,
            },
            HullElement::Elem {
                u: u2,
                lambda: l2,
                v: v2,
            },
        ) => {
            if u1 != u2 || v1 != v2 {
                return false;
            }
            match (states_of(aut, l1), states_of(aut, l2)) {
                (Ok(Some(s1)), Ok(Some(s2))) => class_closure(aut, &s1) == class_closure(aut, &s2),
                _ => false,
            }
        }
        _ => false,
    }
}

/// Natural partial order: `a ≤ b` iff `a = b·a⁻¹a`.
pub fn leq(aut: &ShiftAutomaton, a: &HullElement, b: &HullElement) -> bool {
    if a.is_zero() {
        return true;
    }
    let e = mul(aut, &a.invert(), a);
    equals(aut, a, &mul(aut, b, &e))
}
