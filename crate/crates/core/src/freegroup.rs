//! Reduced words in the free group on the alphabet.

use std::fmt;

use crate::word::{Alphabet, Letter};

/// A generator `a` or its inverse `a⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub letter: Letter,
    pub inv: bool,
}

impl Gen {
    pub fn pos(letter: Letter) -> Gen {
        Gen { letter, inv: false }
    }

    pub fn neg(letter: Letter) -> Gen {
        Gen { letter, inv: true }
    }

    pub fn inverse(self) -> Gen {
        Gen {
            letter: self.letter,
            inv: !self.inv,
        }
    }
}

/// A freely reduced word; the empty word is the identity, rendered `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeGroupWord(Vec<Gen>);

/// Free reduction by cancelling adjacent inverse pairs.
pub fn reduce_word(gens: impl IntoIterator<Item = Gen>) -> FreeGroupWord {
    let mut out: Vec<Gen> = Vec::new();
    for g in gens {
        if out.last() == Some(&g.inverse()) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    FreeGroupWord(out)
}

impl FreeGroupWord {
    pub fn identity() -> Self {
        FreeGroupWord(Vec::new())
    }

    /// The positive word `a₁a₂…aₙ`.
    pub fn positive(letters: &[Letter]) -> Self {
        FreeGroupWord(letters.iter().map(|&a| Gen::pos(a)).collect())
    }

    /// `u·v⁻¹`, reduced.
    pub fn from_uv(u: &[Letter], v: &[Letter]) -> Self {
        reduce_word(
            u.iter()
                .map(|&a| Gen::pos(a))
                .chain(v.iter().rev().map(|&a| Gen::neg(a))),
        )
    }

    /// The reduced form of a generator sequence.
    pub fn from_gens(gens: &[Gen]) -> Self {
        reduce_word(gens.iter().copied())
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeGroupWord(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn mul(&self, other: &FreeGroupWord) -> FreeGroupWord {
        reduce_word(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Splits a word of the shape `u·v⁻¹` with `u`, `v` positive; `None`
    /// for any other shape.
    pub fn as_uv(&self) -> Option<(Vec<Letter>, Vec<Letter>)> {
        let split = self.0.iter().position(|g| g.inv).unwrap_or(self.0.len());
        if self.0[split..].iter().any(|g| !g.inv) {
            return None;
        }
        let u = self.0[..split].iter().map(|g| g.letter).collect();
        let v = self.0[split..].iter().rev().map(|g| g.letter).collect();
        Some((u, v))
    }

    /// All reduced words of length at most `radius` over `k` letters, by
    /// length and then generator order.
    pub fn ball(k: usize, radius: usize) -> Vec<FreeGroupWord> {
        let gens: Vec<Gen> = (0..k as Letter).flat_map(|a| [Gen::pos(a), Gen::neg(a)]).collect();
        let mut out = vec![FreeGroupWord::identity()];
        let mut level = vec![FreeGroupWord::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &level {
                for &g in &gens {
                    if w.0.last() == Some(&g.inverse()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(g);
                    next.push(FreeGroupWord(v));
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "ε".into();
        }
        self.0
            .iter()
            .map(|g| {
                let c = alphabet.symbol(g.letter);
                if g.inv {
                    format!("{c}⁻¹")
                } else {
                    c.to_string()
                }
            })
            .collect()
    }
}

impl fmt::Display for FreeGroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for g in &self.0 {
            if g.inv {
                write!(f, "{}⁻¹", g.letter)?;
            } else {
                write!(f, "{}", g.letter)?;
            }
        }
        Ok(())
    }
}
