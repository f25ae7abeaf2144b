//! Eventually periodic infinite words `pre · period^∞` in canonical form.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter};

/// An infinite word `preperiod · period · period · …`.
///
/// Stored canonically: the period is primitive and the preperiod is as short
/// as possible, so two values denote the same infinite word exactly when
/// their fields are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvPeriodicWord {
    pre: Vec<Letter>,
    period: Vec<Letter>,
}

fn primitive_root(period: &[Letter]) -> &[Letter] {
    let n = period.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| period[i] == period[i - p]) {
            return &period[..p];
        }
    }
    period
}

impl EvPeriodicWord {
    pub fn new(pre: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("period must be nonempty".into()));
        }
        let mut period = primitive_root(&period).to_vec();
        let mut pre = pre;
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(EvPeriodicWord { pre, period })
    }

    /// The purely periodic word `period^∞`.
    pub fn periodic(period: Vec<Letter>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.pre
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Vec<Letter> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    pub fn starts_with(&self, p: &[Letter]) -> bool {
        p.iter().enumerate().all(|(i, &a)| self.letter(i) == a)
    }

    /// The word with its first `n` letters removed.
    pub fn shift(&self, n: usize) -> Self {
        if n <= self.pre.len() {
            return EvPeriodicWord {
                pre: self.pre[n..].to_vec(),
                period: self.period.clone(),
            };
        }
        let mut period = self.period.clone();
        period.rotate_left((n - self.pre.len()) % self.period.len());
        EvPeriodicWord {
            pre: Vec::new(),
            period,
        }
    }

    /// `w · self`.
    pub fn prepend(&self, w: &[Letter]) -> Self {
        let mut pre = w.to_vec();
        pre.extend_from_slice(&self.pre);
        Self::new(pre, self.period.clone()).expect("period is nonempty")
    }

    /// Letters needed to see the whole lasso once: preperiod plus one period.
    pub fn lasso_len(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    /// Parses `pre(period)`, e.g. `104(1)` for 1 0 4 1 1 1 …
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let t = text.trim();
        let open = t
            .find('(')
            .ok_or_else(|| Error::Invalid(format!("expected pre(period) in '{t}'")))?;
        let body = t[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Invalid(format!("missing ')' in '{t}'")))?;
        let pre = t[..open]
            .chars()
            .map(|c| alphabet.index_of(c))
            .collect::<Result<Vec<_>>>()?;
        let period = body.chars().map(|c| alphabet.index_of(c)).collect::<Result<Vec<_>>>()?;
        Self::new(pre, period)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!("{}({})", alphabet.render(&self.pre), alphabet.render(&self.period))
    }
}

impl fmt::Display for EvPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})", self.pre, self.period)
    }
}
