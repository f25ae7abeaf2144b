//! Alphabets, finite words and the extended words `0`, `1` used by the
//! unitized subshift semigroup.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Characters with a meaning in the pattern and set-expression syntax.
pub const RESERVED: &[char] = &[
    '+', '*', '[', ']', ',', '|', '/', ':', ';', '(', ')', '^', '⋆', ' ', '"', '\'', '#',
];

/// Index of a symbol in its alphabet.
pub type Letter = u8;

/// An ordered list of distinct single-character symbols. The order fixes the
/// length-lex order used by every enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if symbols.len() > usize::from(Letter::MAX) {
            return Err(Error::Invalid("alphabet has too many symbols".into()));
        }
        let mut seen = BTreeSet::new();
        for &c in &symbols {
            if RESERVED.contains(&c) || c.is_whitespace() {
                return Err(Error::ReservedSymbol(c));
            }
            if !seen.insert(c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, a: Letter) -> char {
        self.symbols[usize::from(a)]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.symbols.len()).map(|i| i as Letter)
    }

    pub fn index_of(&self, c: char) -> Result<Letter> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as Letter)
            .ok_or(Error::UnknownSymbol(c))
    }

    /// Parses a nonempty word written as a plain run of symbols.
    pub fn word(&self, text: &str) -> Result<Word> {
        let letters = text.chars().map(|c| self.index_of(c)).collect::<Result<Vec<_>>>()?;
        Word::new(letters).ok_or_else(|| Error::Invalid("empty word".into()))
    }

    /// Parses an extended word: `1` (when `1` is not a symbol), `ε` or the
    /// empty string stand for the unit, `0` (when not a symbol) for zero.
    pub fn ext_word(&self, text: &str) -> Result<ExtWord> {
        let t = text.trim();
        let is_symbol = |c: char| self.symbols.contains(&c);
        if t.is_empty() || t == "ε" || (t == "1" && !is_symbol('1')) {
            return Ok(ExtWord::Unit);
        }
        if t == "0" && !is_symbol('0') {
            return Ok(ExtWord::Zero);
        }
        self.word(t).map(ExtWord::W)
    }

    pub fn render(&self, letters: &[Letter]) -> String {
        letters.iter().map(|&a| self.symbol(a)).collect()
    }

    pub fn render_ext(&self, w: &ExtWord) -> String {
        match w {
            ExtWord::Zero => "0̸".into(),
            ExtWord::Unit => "ε".into(),
            ExtWord::W(w) => self.render(w.letters()),
        }
    }
}

/// A nonempty finite word over an alphabet, ordered length-lex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Returns `None` for an empty letter sequence.
    pub fn new(letters: Vec<Letter>) -> Option<Self> {
        if letters.is_empty() {
            None
        } else {
            Some(Word(letters))
        }
    }

    pub fn letter(a: Letter) -> Self {
        Word(vec![a])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn starts_with(&self, prefix: &[Letter]) -> bool {
        self.0.starts_with(prefix)
    }

    /// All nonempty prefixes, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (1..=self.0.len()).map(move |n| Word(self.0[..n].to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// An element of the unitized semigroup with its zero: `Zero`, the adjoined
/// unit (the empty word) or a word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtWord {
    Zero,
    Unit,
    W(Word),
}

impl ExtWord {
    pub fn word(letters: Vec<Letter>) -> ExtWord {
        match Word::new(letters) {
            Some(w) => ExtWord::W(w),
            None => ExtWord::Unit,
        }
    }

    /// Letters of the underlying word; empty for the unit.
    pub fn letters(&self) -> &[Letter] {
        match self {
            ExtWord::W(w) => w.letters(),
            _ => &[],
        }
    }

    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtWord::Zero)
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, ExtWord::Unit)
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            ExtWord::W(w) => Some(w),
            _ => None,
        }
    }

    /// Plain concatenation, ignoring the language. `Zero` absorbs.
    pub fn concat(&self, other: &ExtWord) -> ExtWord {
        match (self, other) {
            (ExtWord::Zero, _) | (_, ExtWord::Zero) => ExtWord::Zero,
            (ExtWord::Unit, x) | (x, ExtWord::Unit) => x.clone(),
            (ExtWord::W(a), ExtWord::W(b)) => ExtWord::W(a.concat(b)),
        }
    }

    /// If `self` is a prefix of `other` (the unit is a prefix of everything),
    /// returns the remainder.
    pub fn strip_prefix_of(&self, other: &ExtWord) -> Option<ExtWord> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let p = self.letters();
        let w = other.letters();
        if w.starts_with(p) {
            Some(ExtWord::word(w[p.len()..].to_vec()))
        } else {
            None
        }
    }
}

impl From<Word> for ExtWord {
    fn from(w: Word) -> Self {
        ExtWord::W(w)
    }
}

/// Sorts words length-lex and removes duplicates.
pub fn length_lex_sorted(mut words: Vec<Word>) -> Vec<Word> {
    words.sort();
    words.dedup();
    words
}
