//! Finite truncations of the operator representations: 0/1 partial
//! permutation matrices on words of length at most `N` (optionally with the
//! vacuum vector `δ_ε`), on sampled points, and tensored with the free-group
//! grading.
//!
//! Truncation sends images longer than `N` to zero. Adjoints only shorten
//! words and never truncate, so identities built from `T T*` (vacuum,
//! diagonal projections, matrix units) hold exactly at every `N`; products of
//! forward operators are compared only on columns short enough to avoid loss.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Display;

use num_traits::Num;

use crate::check::{Check, Tally};
use crate::constructible::{lattice, make_constructible, states_of, ConstructibleSet};
use crate::error::{Error, Result};
use crate::freegroup::FreeGroupWord;
use crate::groupoid::PointSample;
use crate::hull::{self, HullElement};
use crate::shift::ShiftAutomaton;
use crate::word::{ExtWord, Letter, Word};

/// A sparse matrix over any numeric scalar, entries kept sorted by
/// `(row, col)` with no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseOp<T> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, T)>,
    by_col: Vec<usize>,
}

impl<T: Num + Copy> SparseOp<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_entries(rows, cols, Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries(n, n, (0..n).map(|i| (i, i, T::one())).collect())
    }

    /// Builds a matrix, summing repeated positions and dropping zeros.
    pub fn from_entries(rows: usize, cols: usize, mut entries: Vec<(usize, usize, T)>) -> Self {
        entries.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, T)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}×{cols}");
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = last.2 + v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| !e.2.is_zero());
        let mut by_col: Vec<usize> = (0..merged.len()).collect();
        by_col.sort_by_key(|&i| (merged[i].1, merged[i].0));
        SparseOp {
            rows,
            cols,
            entries: merged,
            by_col,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn row_range(&self, r: usize) -> &[(usize, usize, T)] {
        let lo = self.entries.partition_point(|e| e.0 < r);
        let hi = self.entries.partition_point(|e| e.0 <= r);
        &self.entries[lo..hi]
    }

    fn col_range(&self, c: usize) -> impl Iterator<Item = &(usize, usize, T)> {
        let lo = self.by_col.partition_point(|&i| self.entries[i].1 < c);
        let hi = self.by_col.partition_point(|&i| self.entries[i].1 <= c);
        self.by_col[lo..hi].iter().map(move |&i| &self.entries[i])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.row_range(r).iter().find(|e| e.1 == c).map_or(T::zero(), |e| e.2)
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(
            self.cols,
            self.rows,
            self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect(),
        )
    }

    /// Matrix product; walks whichever factor has fewer entries.
    ///
    /// Panics on a dimension mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Vec::new();
        if self.nnz() <= other.nnz() {
            for &(i, k, a) in &self.entries {
                for &(_, j, b) in other.row_range(k) {
                    out.push((i, j, a * b));
                }
            }
        } else {
            for &(k, j, b) in &other.entries {
                for &(i, _, a) in self.col_range(k) {
                    out.push((i, j, a * b));
                }
            }
        }
        Self::from_entries(self.rows, other.cols, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut e = self.entries.clone();
        e.extend_from_slice(&other.entries);
        Self::from_entries(self.rows, self.cols, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut e = self.entries.clone();
        e.extend(other.entries.iter().map(|&(r, c, v)| (r, c, T::zero() - v)));
        Self::from_entries(self.rows, self.cols, e)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|e| e.0 == e.1)
    }

    /// Diagonal with every entry equal to one: an orthogonal projection onto
    /// a set of basis vectors.
    pub fn is_diagonal_projection(&self) -> bool {
        self.entries.iter().all(|e| e.0 == e.1 && e.2.is_one())
    }

    /// Every entry is one, with at most one entry per row and per column.
    pub fn is_partial_permutation(&self) -> bool {
        let rows: BTreeSet<usize> = self.entries.iter().map(|e| e.0).collect();
        let cols: BTreeSet<usize> = self.entries.iter().map(|e| e.1).collect();
        self.entries.iter().all(|e| e.2.is_one()) && rows.len() == self.nnz() && cols.len() == self.nnz()
    }

    /// `M*M` and `MM*` are both diagonal 0/1 projections (real scalars, so
    /// the adjoint is the transpose).
    pub fn is_partial_isometry(&self) -> bool {
        self.gram_is_projection(true) && self.gram_is_projection(false)
    }

    /// `M*M` (grouping entries by row) or `MM*` (by column): diagonal sums
    /// go to a dense vector, the rare off-diagonal ones to a map.
    fn gram_is_projection(&self, by_row: bool) -> bool {
        let (groups, keys) = if by_row {
            (self.rows, self.cols)
        } else {
            (self.cols, self.rows)
        };
        let split = |e: &(usize, usize, T)| if by_row { (e.0, e.1) } else { (e.1, e.0) };
        let mut start = vec![0usize; groups + 1];
        for e in &self.entries {
            start[split(e).0 + 1] += 1;
        }
        for g in 0..groups {
            start[g + 1] += start[g];
        }
        let mut fill = start.clone();
        let mut flat = vec![(0usize, T::zero()); self.entries.len()];
        for e in &self.entries {
            let (g, k) = split(e);
            flat[fill[g]] = (k, e.2);
            fill[g] += 1;
        }
        let mut diag = vec![T::zero(); keys];
        let mut off: HashMap<(usize, usize), T> = HashMap::new();
        for g in 0..groups {
            let group = &flat[start[g]..start[g + 1]];
            for &(i, a) in group {
                for &(j, b) in group {
                    if i == j {
                        diag[i] = diag[i] + a * b;
                    } else {
                        let s = off.entry((i, j)).or_insert_with(T::zero);
                        *s = *s + a * b;
                    }
                }
            }
        }
        diag.iter().all(|v| v.is_zero() || v.is_one()) && off.values().all(|v| v.is_zero())
    }

    pub fn trace(&self) -> T {
        self.entries
            .iter()
            .filter(|e| e.0 == e.1)
            .fold(T::zero(), |acc, e| acc + e.2)
    }

    /// Columns in which the two matrices differ.
    pub fn differing_columns(&self, other: &Self) -> BTreeSet<usize> {
        let mut a: BTreeMap<usize, Vec<(usize, T)>> = BTreeMap::new();
        let mut b: BTreeMap<usize, Vec<(usize, T)>> = BTreeMap::new();
        for &(r, c, v) in &self.entries {
            a.entry(c).or_default().push((r, v));
        }
        for &(r, c, v) in &other.entries {
            b.entry(c).or_default().push((r, v));
        }
        let keys: BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
        keys.into_iter()
            .filter(|c| {
                let mut x = a.get(c).cloned().unwrap_or_default();
                let mut y = b.get(c).cloned().unwrap_or_default();
                x.sort_by_key(|e| e.0);
                y.sort_by_key(|e| e.0);
                x != y
            })
            .collect()
    }

    /// Keeps only the listed columns.
    pub fn restrict_columns(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self::from_entries(
            self.rows,
            self.cols,
            self.entries.iter().copied().filter(|e| keep(e.1)).collect(),
        )
    }
}

impl<T: Num + Copy + Display> SparseOp<T> {
    /// Coordinate text: a `rows cols nnz` header, then one `row col value`
    /// line per entry in row-major order.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in &self.entries {
            out.push_str(&format!("{r} {c} {v}\n"));
        }
        out
    }
}

/// Integer matrices, the scalar used for every operator built here.
pub type IntOp = SparseOp<i64>;

/// Words of `L_X` up to length `N` in length-lex order, optionally preceded
/// by the empty word.
#[derive(Debug, Clone)]
pub struct TruncatedBasis {
    words: Vec<Vec<Letter>>,
    index: HashMap<Vec<Letter>, usize>,
    /// `child[i·k + a]` is the index of `words[i]·a`; `roots[a]` that of `a`.
    child: Vec<Option<u32>>,
    roots: Vec<Option<u32>>,
    k: usize,
    unitized: bool,
    max_len: usize,
}

impl TruncatedBasis {
    pub fn new(aut: &ShiftAutomaton, max_len: usize, unitized: bool) -> Self {
        let mut words: Vec<Vec<Letter>> = Vec::new();
        if unitized {
            words.push(Vec::new());
        }
        words.extend(aut.enumerate_language(max_len).into_iter().map(Word::into_letters));
        let index: HashMap<Vec<Letter>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let k = aut.num_letters();
        let look = |w: Vec<Letter>| index.get(&w).map(|&i| i as u32);
        let roots = (0..k as Letter).map(|a| look(vec![a])).collect();
        let mut child = Vec::with_capacity(words.len() * k);
        for w in &words {
            for a in 0..k as Letter {
                child.push(if w.len() < max_len {
                    let mut c = w.clone();
                    c.push(a);
                    look(c)
                } else {
                    None
                });
            }
        }
        TruncatedBasis {
            words,
            index,
            child,
            roots,
            k,
            unitized,
            max_len,
        }
    }

    /// Index of `words[from]·s`, or of `s` itself when `from` is `None`.
    fn extend(&self, from: Option<usize>, s: &[Letter]) -> Option<usize> {
        let mut cur = from;
        for &a in s {
            let next = match cur {
                Some(i) => self.child[i * self.k + usize::from(a)],
                None => self.roots[usize::from(a)],
            };
            cur = Some(next? as usize);
        }
        cur
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<Letter>] {
        &self.words
    }

    pub fn index_of(&self, w: &[Letter]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn is_unitized(&self) -> bool {
        self.unitized
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }
}

/// `T_μ`: `δ_w ↦ δ_{μw}` when `μw ∈ L_X` and `|μw| ≤ N`.
pub fn t_matrix(aut: &ShiftAutomaton, mu: &Word, basis: &TruncatedBasis) -> Result<IntOp> {
    let q = aut
        .run(mu.letters())
        .ok_or_else(|| Error::NotInLanguage(aut.render(mu.letters())))?;
    if mu.len() > basis.max_len() {
        return Err(Error::Invalid(format!(
            "|μ| = {} exceeds the truncation length {}",
            mu.len(),
            basis.max_len()
        )));
    }
    let head = basis.extend(None, mu.letters());
    let mut e = Vec::new();
    for (j, w) in basis.words().iter().enumerate() {
        if w.len() + mu.len() > basis.max_len() || aut.run_from(q, w).is_none() {
            continue;
        }
        let i = basis.extend(head, w).expect("μw ∈ L_X within the bound");
        e.push((i, j, 1));
    }
    Ok(IntOp::from_entries(basis.len(), basis.len(), e))
}

/// `π(α)`: `δ_w ↦ δ_{α(w)}` when defined and short enough. On a unitized
/// basis the vacuum is sent to `u` when `α = θ_u f_Λ`.
pub fn pi_matrix(aut: &ShiftAutomaton, alpha: &HullElement, basis: &TruncatedBasis) -> IntOp {
    let n = basis.len();
    let HullElement::Elem { u, lambda, v } = alpha else {
        return IntOp::zeros(n, n);
    };
    let Ok(Some(states)) = states_of(aut, lambda) else {
        return IntOp::zeros(n, n);
    };
    let (u, v) = (u.letters(), v.letters());
    let head = if u.is_empty() { None } else { basis.extend(None, u) };
    if !u.is_empty() && head.is_none() {
        return IntOp::zeros(n, n);
    }
    let mut e = Vec::new();
    for (j, w) in basis.words().iter().enumerate() {
        if !w.starts_with(v) {
            continue;
        }
        let s = &w[v.len()..];
        if s.is_empty() && !basis.is_unitized() {
            continue;
        }
        if u.len() + s.len() > basis.max_len() || states.iter().any(|&q| aut.run_from(q, s).is_none()) {
            continue;
        }
        let target = if u.is_empty() && s.is_empty() {
            basis.index_of(&[])
        } else {
            basis.extend(head, s)
        };
        if let Some(i) = target {
            e.push((i, j, 1));
        }
    }
    IntOp::from_entries(n, n, e)
}

/// `P = I − Σ_a T̃_a T̃_a*`, the projection onto the vacuum `δ_ε`.
pub fn vacuum_projection(aut: &ShiftAutomaton, basis: &TruncatedBasis) -> Result<IntOp> {
    if !basis.is_unitized() {
        return Err(Error::Invalid("the vacuum projection needs a unitized basis".into()));
    }
    let mut p = IntOp::identity(basis.len());
    for a in 0..aut.num_letters() as Letter {
        let w = Word::letter(a);
        if let Ok(t) = t_matrix(aut, &w, basis) {
            p = p.sub(&t.mul(&t.transpose()));
        }
    }
    Ok(p)
}

/// Keeps the diagonal.
pub fn diag_expectation<T: Num + Copy>(op: &SparseOp<T>) -> SparseOp<T> {
    SparseOp::from_entries(
        op.rows(),
        op.cols(),
        op.entries().iter().copied().filter(|e| e.0 == e.1).collect(),
    )
}

/// A matrix tensored with the left regular representation of the free
/// group at a single group element, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedOp {
    pub op: IntOp,
    pub grade: FreeGroupWord,
}

impl GradedOp {
    pub fn mul(&self, other: &GradedOp) -> GradedOp {
        GradedOp {
            op: self.op.mul(&other.op),
            grade: self.grade.mul(&other.grade),
        }
    }

    /// Entries `((i, gh), (j, h))` for every matrix entry `(i, j)` and every
    /// `h` with `h` and `gh` in the ball; block index `i·|ball| + idx(h)`.
    pub fn materialize(&self, k: usize, radius: usize) -> (IntOp, Vec<FreeGroupWord>) {
        let ball = FreeGroupWord::ball(k, radius);
        let m = ball.len();
        let e: Vec<(usize, usize, i64)> = self.materialized_entries(&ball).collect();
        let n = self.op.rows() * m;
        (IntOp::from_entries(n, self.op.cols() * m, e), ball)
    }

    /// Nonzero entries of the materialization lying in a diagonal block,
    /// i.e. with the same group coordinate on both sides.
    ///
    /// Every matrix entry is repeated once per ball move `h ↦ gh`, so the
    /// count is `nnz` times the number of moves that fix their block.
    pub fn diagonal_block_nnz(&self, k: usize, radius: usize) -> usize {
        let ball = FreeGroupWord::ball(k, radius);
        self.op.nnz() * self.moves(&ball).iter().filter(|(g, h)| g == h).count()
    }

    fn moves(&self, ball: &[FreeGroupWord]) -> Vec<(usize, usize)> {
        let idx: HashMap<&FreeGroupWord, usize> = ball.iter().enumerate().map(|(i, g)| (g, i)).collect();
        ball.iter()
            .enumerate()
            .filter_map(|(hi, h)| idx.get(&self.grade.mul(h)).map(|&gi| (gi, hi)))
            .collect()
    }

    fn materialized_entries<'a>(&'a self, ball: &'a [FreeGroupWord]) -> impl Iterator<Item = (usize, usize, i64)> + 'a {
        let moves = self.moves(ball);
        let m = ball.len();
        self.op.entries().iter().flat_map(move |&(i, j, v)| {
            moves
                .clone()
                .into_iter()
                .map(move |(gi, hi)| (i * m + gi, j * m + hi, v))
        })
    }
}

/// `ρ(α) = π(α) ⊗ λ_{d(α)}`; zero has the identity grade.
pub fn tensor_rep(aut: &ShiftAutomaton, alpha: &HullElement, basis: &TruncatedBasis) -> GradedOp {
    GradedOp {
        op: pi_matrix(aut, alpha, basis),
        grade: alpha.d_map().unwrap_or_default(),
    }
}

/// `T_μ` on sampled points, with the columns whose image is in `X` but
/// outside the sample listed apart from those where `μω ∉ X`.
#[derive(Debug, Clone)]
pub struct PointRep {
    pub op: IntOp,
    pub outside_sample: Vec<usize>,
    pub undefined: Vec<usize>,
}

pub fn point_rep(aut: &ShiftAutomaton, mu: &Word, sample: &PointSample) -> Result<PointRep> {
    if aut.run(mu.letters()).is_none() {
        return Err(Error::NotInLanguage(aut.render(mu.letters())));
    }
    let n = sample.len();
    let (mut e, mut outside_sample, mut undefined) = (Vec::new(), Vec::new(), Vec::new());
    for (j, x) in sample.points().iter().enumerate() {
        let y = x.prepend(mu.letters());
        if !aut.accepts_point_from(aut.initial(), &y) {
            undefined.push(j);
        } else if let Some(i) = sample.index_of(&y) {
            e.push((i, j, 1));
        } else {
            outside_sample.push(j);
        }
    }
    Ok(PointRep {
        op: IntOp::from_entries(n, n, e),
        outside_sample,
        undefined,
    })
}

/// Columns in which `T̃_μ` on the unitized basis and `T_μ` on the plain one
/// differ, after identifying the common basis vectors.
pub fn unitization_difference(aut: &ShiftAutomaton, mu: &Word, n: usize) -> Result<usize> {
    let plain = TruncatedBasis::new(aut, n, false);
    let unit = TruncatedBasis::new(aut, n, true);
    unitization_difference_in(&t_matrix(aut, mu, &plain)?, &t_matrix(aut, mu, &unit)?, &unit)
}

fn unitization_difference_in(t: &IntOp, tt: &IntOp, unit: &TruncatedBasis) -> Result<usize> {
    let lifted = IntOp::from_entries(
        unit.len(),
        unit.len(),
        t.entries().iter().map(|&(r, c, v)| (r + 1, c + 1, v)).collect(),
    );
    Ok(tt.differing_columns(&lifted).len())
}

/// Sizes of the sampled families in [`matrix_verify`].
#[derive(Debug, Clone, Copy)]
pub struct MatrixParams {
    /// Longest `μ` used for `T_μ` and for matrix units.
    pub word_len: usize,
    /// Longest product of generators `θ_a`, `θ_a⁻¹` sampled from the hull.
    pub hull_len: usize,
    /// Ball radius for tensor materialization.
    pub tensor_radius: usize,
    /// Cap on sampled hull elements used in pairwise products.
    pub pair_cap: usize,
}

impl Default for MatrixParams {
    fn default() -> Self {
        MatrixParams {
            word_len: 2,
            hull_len: 2,
            tensor_radius: 2,
            pair_cap: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatrixReport {
    pub n: usize,
    pub basis_len: usize,
    pub operators: usize,
    pub checks: Vec<Check>,
}

impl MatrixReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Products of at most `len` generators `θ_a`, `θ_a⁻¹`, without zero and
/// without repeats, in generation order.
pub fn sample_hull(aut: &ShiftAutomaton, len: usize) -> Vec<HullElement> {
    let mut gens = Vec::new();
    for a in 0..aut.num_letters() as Letter {
        if let Ok(t) = HullElement::theta(aut, &Word::letter(a)) {
            gens.push(t.invert());
            gens.push(t);
        }
    }
    let mut out: Vec<HullElement> = vec![HullElement::identity()];
    let mut level = vec![HullElement::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for x in &level {
            for g in &gens {
                let y = hull::mul(aut, x, g);
                if !y.is_zero() && !out.iter().any(|z| hull::equals(aut, z, &y)) {
                    out.push(y.clone());
                    next.push(y);
                }
            }
        }
        level = next;
    }
    out
}

/// Projections onto `uF_S` for `u ∈ {ε} ∪ Σ` and every follower-lattice
/// element `F_S`.
fn sample_projections(aut: &ShiftAutomaton) -> Vec<ConstructibleSet> {
    let mut out = vec![ConstructibleSet::whole(aut)];
    let Ok(lat) = lattice(aut) else { return out };
    let mut heads = vec![ExtWord::Unit];
    heads.extend((0..aut.num_letters() as Letter).map(|a| ExtWord::word(vec![a])));
    for el in &lat.elements {
        for u in &heads {
            let mut l = el.lambda(aut);
            l.insert(u.clone());
            if let Ok(x) = make_constructible(aut, u, &l) {
                if !x.is_empty() {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Exact identities of the truncated representations at length `n`.
pub fn matrix_verify(aut: &ShiftAutomaton, n: usize, params: MatrixParams) -> MatrixReport {
    let a = aut.alphabet();
    let plain = TruncatedBasis::new(aut, n, false);
    let unit = TruncatedBasis::new(aut, n, true);
    let mut checks = Vec::new();
    let mus: Vec<Word> = aut.enumerate_language(params.word_len.min(n)).into_iter().collect();
    let hull_sample = sample_hull(aut, params.hull_len);
    let projections = sample_projections(aut);
    let mut operators = 0;

    let mut iso = Tally::new(
        "partial-isometry",
        format!("exact; T_μ, T̃_μ for |μ| ≤ {}, sampled π(α)", params.word_len),
    );
    let mut t_plain: Vec<IntOp> = Vec::new();
    let mut t_unit: Vec<IntOp> = Vec::new();
    for mu in &mus {
        let tp = t_matrix(aut, mu, &plain).expect("μ ∈ L_X");
        let tu = t_matrix(aut, mu, &unit).expect("μ ∈ L_X");
        iso.record(tp.is_partial_isometry() && tu.is_partial_isometry(), || {
            format!("T_{}", aut.render(mu.letters()))
        });
        t_plain.push(tp);
        t_unit.push(tu);
    }
    let pis: Vec<IntOp> = hull_sample.iter().map(|h| pi_matrix(aut, h, &plain)).collect();
    for (h, p) in hull_sample.iter().zip(&pis) {
        iso.record(p.is_partial_isometry(), || format!("π({})", h.render(aut)));
    }
    operators += 2 * mus.len() + pis.len();

    // π(θ_μ) = T_μ.
    let mut theta = Tally::new("theta-agreement", "exact; π(θ_μ) = T_μ");
    for (mu, t) in mus.iter().zip(&t_plain) {
        let th = HullElement::theta(aut, mu).expect("μ ∈ L_X");
        theta.record(pi_matrix(aut, &th, &plain) == *t, || aut.render(mu.letters()));
    }
    checks.push(iso.finish());
    checks.push(theta.finish());

    // Letter factorization, guarded by construction: intermediate words are
    // shorter than the final one.
    let mut fact = Tally::new("letter-factorization", "guarded; T_μ = T_μ₁⋯T_μₖ");
    for (mu, t) in mus.iter().zip(&t_plain) {
        let mut prod = IntOp::identity(plain.len());
        for &c in mu.letters() {
            prod = prod.mul(&t_matrix(aut, &Word::letter(c), &plain).expect("letter of L_X"));
        }
        fact.record(prod == *t, || aut.render(mu.letters()));
    }
    checks.push(fact.finish());

    // Vacuum projection and matrix units.
    let p = vacuum_projection(aut, &unit).expect("unitized");
    let mut vac = Tally::new("vacuum-rank-one", "exact; P = I − Σ T̃_a T̃_a*");
    vac.record(p.is_diagonal_projection() && p.trace() == 1 && p.get(0, 0) == 1, || {
        format!("P has {} entries", p.nnz())
    });
    checks.push(vac.finish());
    operators += 1;

    let mut units = Tally::new(
        "matrix-units",
        format!("exact; μ, ν ∈ L̃_X with |μ|, |ν| ≤ {}", params.word_len),
    );
    let mut heads: Vec<(String, Option<&IntOp>, usize)> = vec![("ε".into(), None, 0)];
    for (mu, t) in mus.iter().zip(&t_unit) {
        heads.push((
            aut.render(mu.letters()),
            Some(t),
            unit.index_of(mu.letters()).expect("μ in basis"),
        ));
    }
    for (mn, mt, mi) in &heads {
        let left = match mt {
            Some(t) => t.mul(&p),
            None => p.clone(),
        };
        for (nn, nt, ni) in &heads {
            let m = match nt {
                Some(t) => left.mul(&t.transpose()),
                None => left.clone(),
            };
            let expect = IntOp::from_entries(unit.len(), unit.len(), vec![(*mi, *ni, 1)]);
            units.record(m == expect, || format!("μ = {mn}, ν = {nn}"));
        }
    }
    checks.push(units.finish());

    // Diagonal expectation and grading.
    let mut diag0 = Tally::new("expectation-kills-nonidempotents", "exact; sampled α with u ≠ v");
    let mut diag1 = Tally::new(
        "expectation-fixes-idempotents",
        "exact; sampled idempotents and constructible projections",
    );
    let mut grading = Tally::new("tensor-grading", format!("exact; ball radius {}", params.tensor_radius));
    for (h, pm) in hull_sample.iter().zip(&pis) {
        if h.is_idempotent() {
            diag1.record(diag_expectation(pm) == *pm, || h.render(aut));
        } else {
            diag0.record(diag_expectation(pm).is_zero(), || h.render(aut));
        }
        let g = tensor_rep(aut, h, &plain);
        let ok = if g.grade.is_identity() {
            h.is_idempotent()
        } else {
            g.diagonal_block_nnz(aut.num_letters(), params.tensor_radius) == 0
        };
        grading.record(ok, || h.render(aut));
    }
    for x in &projections {
        let e = HullElement::projection(aut, x);
        let pm = pi_matrix(aut, &e, &plain);
        let support: BTreeSet<usize> = plain
            .words()
            .iter()
            .enumerate()
            .filter(|(_, w)| x.set().contains(w))
            .map(|(i, _)| i)
            .collect();
        let got: BTreeSet<usize> = pm.entries().iter().map(|e| e.0).collect();
        let ok = diag_expectation(&pm) == pm && pm.is_diagonal_projection() && got == support;
        diag1.record(ok, || x.render(aut));
        operators += 1;
    }
    checks.push(diag0.finish());
    checks.push(diag1.finish());
    checks.push(grading.finish());

    // Multiplicativity on columns no product can push past N, re-checked
    // against the untruncated hull action.
    let mut mult = Tally::new(
        "multiplicativity",
        format!("guarded; first {} sampled elements, pairwise", params.pair_cap),
    );
    let capped = &hull_sample[..hull_sample.len().min(params.pair_cap)];
    for (i, x) in capped.iter().enumerate() {
        for (j, y) in capped.iter().enumerate() {
            let xy = hull::mul(aut, x, y);
            let grow = |h: &HullElement| match h {
                HullElement::Elem { u, .. } => u.len(),
                HullElement::Zero => 0,
            };
            let limit = n.saturating_sub(grow(x) + grow(y));
            let keep = |c: usize| plain.words()[c].len() <= limit;
            let lhs = pi_matrix(aut, &xy, &plain).restrict_columns(keep);
            let rhs = pis[i].mul(&pis[j]).restrict_columns(keep);
            let mut ok = lhs == rhs;
            for w in plain.words().iter().filter(|w| w.len() <= limit) {
                let w = Word::new(w.clone()).expect("plain basis has no ε");
                let direct = hull::apply(aut, &xy, &w);
                let stepwise = match hull::apply(aut, y, &w) {
                    ExtWord::W(z) => hull::apply(aut, x, &z),
                    other => other,
                };
                ok &= direct == stepwise;
            }
            mult.record(ok, || format!("{} · {}", x.render(aut), y.render(aut)));
        }
    }
    checks.push(mult.finish());

    let mut diff = Tally::new(
        "unitization-difference",
        "exact; T̃_μ and T_μ differ in at most one column",
    );
    for ((mu, t), tt) in mus.iter().zip(&t_plain).zip(&t_unit) {
        let d = unitization_difference_in(t, tt, &unit).unwrap_or(usize::MAX);
        diff.record(d <= 1, || format!("{}: {d} columns", a.render(mu.letters())));
    }
    checks.push(diff.finish());

    MatrixReport {
        n,
        basis_len: plain.len(),
        operators,
        checks,
    }
}
