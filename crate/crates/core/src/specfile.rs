//! TOML presentation files and the bundled corpus.
//!
//! ```toml
//! name = "golden"
//! alphabet = ["0", "1"]
//! forbidden = [
//!   ["1", "1"],
//! ]
//! notes = "optional"
//! ```

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::shift::{PatternAtom, SubshiftSpec};
use crate::word::Alphabet;

/// A named presentation as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub name: String,
    pub spec: SubshiftSpec,
    pub notes: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    name: Spanned<String>,
    alphabet: Spanned<Vec<Spanned<String>>>,
    forbidden: Vec<Spanned<Vec<Spanned<String>>>>,
    notes: Option<String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn at(text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = line_col(text, offset);
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a presentation file. Errors carry the line and column of the
/// offending item.
pub fn parse_spec_str(text: &str) -> Result<SpecFile> {
    let raw: Raw = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        at(text, offset, e.message().to_string())
    })?;
    if raw.name.get_ref().trim().is_empty() {
        return Err(at(text, raw.name.span().start, "name must be nonempty"));
    }
    let mut symbols = Vec::new();
    for s in raw.alphabet.get_ref() {
        let mut cs = s.get_ref().chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => symbols.push(c),
            _ => {
                return Err(at(
                    text,
                    s.span().start,
                    format!("symbol \"{}\" must be a single character", s.get_ref()),
                ))
            }
        }
    }
    let alphabet = Alphabet::new(symbols).map_err(|e| at(text, raw.alphabet.span().start, e.to_string()))?;
    let mut forbidden = Vec::new();
    for pat in &raw.forbidden {
        let mut atoms = Vec::new();
        for (i, a) in pat.get_ref().iter().enumerate() {
            let atom =
                PatternAtom::parse(&alphabet, a.get_ref()).map_err(|e| at(text, a.span().start, e.to_string()))?;
            if atom == PatternAtom::AnySuffix && i + 1 != pat.get_ref().len() {
                return Err(at(text, a.span().start, "⋆ may only appear last"));
            }
            atoms.push(atom);
        }
        forbidden.push((atoms, pat.span().start));
    }
    let spec =
        SubshiftSpec::new(alphabet.clone(), forbidden.iter().map(|(p, _)| p.clone()).collect()).map_err(|e| {
            // Point at the first pattern that fails on its own.
            let offset = forbidden
                .iter()
                .find(|(p, _)| SubshiftSpec::new(alphabet.clone(), vec![p.clone()]).is_err())
                .map_or(0, |(_, o)| *o);
            at(text, offset, e.to_string())
        })?;
    Ok(SpecFile {
        name: raw.name.into_inner(),
        spec,
        notes: raw.notes,
    })
}

pub fn parse_spec(path: &std::path::Path) -> Result<SpecFile> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_spec_str(&text)
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

impl SpecFile {
    /// Canonical rendering: fixed key order, one pattern per line, atoms in
    /// normalized spelling.
    pub fn to_canonical(&self) -> String {
        let alpha = &self.spec.alphabet;
        let symbols: Vec<String> = alpha.symbols().iter().map(|c| quote(&c.to_string())).collect();
        let mut out = format!("name = {}\nalphabet = [{}]\n", quote(&self.name), symbols.join(", "));
        if self.spec.forbidden.is_empty() {
            out.push_str("forbidden = []\n");
        } else {
            out.push_str("forbidden = [\n");
            for pat in &self.spec.forbidden {
                let atoms: Vec<String> = pat.iter().map(|a| quote(&a.render(alpha))).collect();
                out.push_str(&format!("  [{}],\n", atoms.join(", ")));
            }
            out.push_str("]\n");
        }
        if let Some(notes) = &self.notes {
            out.push_str(&format!("notes = {}\n", quote(notes)));
        }
        out
    }
}

/// Names of the bundled presentations.
pub const CORPUS: &[&str] = &["golden", "ex4", "abc", "full2", "full1"];

/// Source text of a bundled presentation.
pub fn corpus_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "golden" => include_str!("../corpus/golden.toml"),
        "ex4" => include_str!("../corpus/ex4.toml"),
        "abc" => include_str!("../corpus/abc.toml"),
        "full2" => include_str!("../corpus/full2.toml"),
        "full1" => include_str!("../corpus/full1.toml"),
        _ => return None,
    })
}

/// A bundled presentation by name.
pub fn corpus(name: &str) -> Result<SpecFile> {
    let text = corpus_text(name).ok_or_else(|| Error::Invalid(format!("no bundled presentation named '{name}'")))?;
    parse_spec_str(text)
}
