//! Text syntax for sets, hull elements, word lists and finite-universe sets.
//!
//! Sets: `F:t1,t2` is `F_Λ`, `F:t1/r1,r2` is `F_{Λ,Γ}`, `E:a` is `E_a = aF_a`
//! and `C:u|t1,t2` is `uF_Λ` with `u` added to `Λ`. Hull elements: `0`, `1`,
//! a normal form `u|t1,t2|v`, or a product of generators such as `+10 -2`
//! (`θ_10 θ_2⁻¹`).

use std::collections::BTreeSet;

use shiftsem_core::constructible::{f_lambda_gamma, make_constructible, ConstructibleSet, WordSetLambda};
use shiftsem_core::hull::{mul, HullElement};
use shiftsem_core::regset::RegularSet;
use shiftsem_core::{EvPeriodicWord, ExtWord, ShiftAutomaton, Word};

use crate::CliError;

/// A parsed set expression. Only `F_{Λ,Γ}` with nonempty `Γ` is not
/// constructible.
#[derive(Debug, Clone)]
pub enum SetValue {
    Constructible(ConstructibleSet),
    Relative(RegularSet),
}

impl SetValue {
    pub fn set(&self) -> &RegularSet {
        match self {
            SetValue::Constructible(c) => c.set(),
            SetValue::Relative(r) => r,
        }
    }

    pub fn constructible(&self, text: &str) -> Result<&ConstructibleSet, CliError> {
        match self {
            SetValue::Constructible(c) => Ok(c),
            SetValue::Relative(_) => Err(CliError::Input(format!(
                "'{text}' is not a constructible set (drop the '/' part)"
            ))),
        }
    }
}

fn ext(aut: &ShiftAutomaton, t: &str) -> Result<ExtWord, CliError> {
    let w = aut.alphabet().ext_word(t)?;
    if w.is_zero() {
        return Err(shiftsem_core::Error::ZeroNotAllowed.into());
    }
    Ok(w)
}

/// Comma-separated extended words; an empty list is `{1}`.
pub fn word_list(aut: &ShiftAutomaton, text: &str) -> Result<WordSetLambda, CliError> {
    let mut out = WordSetLambda::new();
    for t in text.split(',') {
        out.insert(ext(aut, t)?);
    }
    Ok(out)
}

pub fn word(aut: &ShiftAutomaton, text: &str) -> Result<Word, CliError> {
    Ok(aut.alphabet().word(text.trim())?)
}

pub fn point(aut: &ShiftAutomaton, text: &str) -> Result<EvPeriodicWord, CliError> {
    Ok(EvPeriodicWord::parse(aut.alphabet(), text)?)
}

fn at_unit(aut: &ShiftAutomaton, u: ExtWord, mut lambda: WordSetLambda) -> Result<ConstructibleSet, CliError> {
    lambda.insert(u.clone());
    if lambda.iter().all(|t| t.is_unit()) {
        return Ok(ConstructibleSet::whole(aut));
    }
    Ok(make_constructible(aut, &u, &lambda)?)
}

pub fn set_expr(aut: &ShiftAutomaton, text: &str) -> Result<SetValue, CliError> {
    let t = text.trim();
    let (kind, body) = t
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("set '{t}' must start with F:, E: or C:")))?;
    match kind.trim() {
        "F" => match body.split_once('/') {
            None => Ok(SetValue::Constructible(at_unit(
                aut,
                ExtWord::Unit,
                word_list(aut, body)?,
            )?)),
            Some((l, g)) => {
                let (lambda, gamma) = (word_list(aut, l)?, word_list(aut, g)?);
                Ok(SetValue::Relative(f_lambda_gamma(aut, &lambda, &gamma)?))
            }
        },
        "E" => {
            let a = ExtWord::W(word(aut, body)?);
            Ok(SetValue::Constructible(at_unit(aut, a, WordSetLambda::new())?))
        }
        "C" => {
            let (u, l) = body
                .split_once('|')
                .ok_or_else(|| CliError::Input(format!("set '{t}' needs the form C:u|t1,t2")))?;
            Ok(SetValue::Constructible(at_unit(aut, ext(aut, u)?, word_list(aut, l)?)?))
        }
        other => Err(CliError::Input(format!("unknown set kind '{other}' in '{t}'"))),
    }
}

/// `;`-separated set expressions; the empty string is the empty family.
pub fn set_family(aut: &ShiftAutomaton, text: &str) -> Result<Vec<ConstructibleSet>, CliError> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| set_expr(aut, s).and_then(|v| v.constructible(s).cloned()))
        .collect()
}

pub fn hull_expr(aut: &ShiftAutomaton, text: &str) -> Result<HullElement, CliError> {
    let t = text.trim();
    if t == "0" {
        return Ok(HullElement::Zero);
    }
    if t == "1" || t == "ε" {
        return Ok(HullElement::identity());
    }
    if let Some((u, rest)) = t.split_once('|') {
        let (l, v) = rest
            .split_once('|')
            .ok_or_else(|| CliError::Input(format!("hull element '{t}' needs the form u|t1,t2|v")))?;
        let (u, v) = (ext(aut, u)?, ext(aut, v)?);
        let mut lambda = word_list(aut, l)?;
        lambda.insert(u.clone());
        lambda.insert(v.clone());
        return Ok(HullElement::new(aut, u, lambda, v)?);
    }
    let mut acc = HullElement::identity();
    for tok in t.split_whitespace() {
        let (inv, w) = match tok.split_at(tok.chars().next().map_or(0, char::len_utf8)) {
            ("+", w) => (false, w),
            ("-", w) => (true, w),
            _ => return Err(CliError::Input(format!("generator '{tok}' must start with + or -"))),
        };
        let g = HullElement::theta(aut, &word(aut, w)?)?;
        acc = mul(aut, &acc, &if inv { g.invert() } else { g });
    }
    Ok(acc)
}

fn num(s: &str) -> Result<u64, CliError> {
    s.trim()
        .parse::<u64>()
        .map_err(|e| CliError::Input(format!("'{s}': {e}")))
}

/// `{0,1,2}` or `0,1,2`, with inclusive ranges `2..49`; `{}` is empty.
pub fn num_set(text: &str) -> Result<BTreeSet<u64>, CliError> {
    let t = text.trim();
    let body = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(t);
    let mut out = BTreeSet::new();
    for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => out.extend(num(lo)?..=num(hi)?),
            None => {
                out.insert(num(part)?);
            }
        }
    }
    Ok(out)
}

pub fn num_family(text: &str) -> Result<Vec<BTreeSet<u64>>, CliError> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(num_set).collect()
}
