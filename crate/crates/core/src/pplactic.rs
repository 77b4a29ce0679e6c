//! Pseudo-plactic relations on the diagonal letters, their ideals, the
//! Hecke-side pre-plactic ideal, the brute-force diagonalisation of
//! `e^± W^⊗3 e^∓` and the comparison of ideal and diagonal kernel.
//!
//! Bracket conventions: `[a, b] = ab - ba` and `[a, b]_{q^2} = ab - q^2 ba`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{omega, q_int, ExactError, QScalar};
use crate::hecke::{diag_kernel_of_p, e21, HeckeElt, HeckeError, Sign, MAX_DIAG_RANK};
use crate::linalgq::{Echelon, LinalgError, SparseVec, SubspaceBasis};
use crate::qma::{
    deg2_table, diag_block_kernel, BlockKey, BlockQuotient, Deg2Table, FreeElt, FreeWord,
    QmaError,
};
use crate::rmat::{pi, word_index, RmatError};
use crate::symgroup::{arrangements, enumerate_multiindices, enumerate_perms, sorted_word, weight_blocks, Perm, SymError};

/// Largest `d^r` for which ideal components are enumerated.
pub const MAX_IDEAL_WORDS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PpError {
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("rule {rule} is not an FRT congruence; residual {residual}")]
    MembershipFailure { rule: String, residual: String },
    #[error("rewriting left non-diagonal words: {0}")]
    IncompleteRewrite(String),
    #[error("rewriting does not terminate at {0}")]
    NonTerminating(String),
    #[error(transparent)]
    Qma(#[from] QmaError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Rmat(#[from] RmatError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// An element of the free algebra on the diagonal letters `x_a = x^a_a`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiagPoly {
    terms: BTreeMap<Vec<u8>, QScalar>,
}

impl DiagPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn letter(a: u8) -> Self {
        Self::word(&[a])
    }

    pub fn word(letters: &[u8]) -> Self {
        Self::from_terms([(letters.to_vec(), QScalar::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u8>, QScalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    fn add_term(&mut self, w: Vec<u8>, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, QScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u8]) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn axpy(&self, c: &QScalar, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, x) in &other.terms {
            out.add_term(w.clone(), c * x);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&QScalar::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&QScalar::from_int(-1), other)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        Self::zero().axpy(c, self)
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term([a.as_slice(), b.as_slice()].concat(), x * y);
            }
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).sub(&b.mul(a))
    }

    /// `[a, b]_{q^2} = ab - q^2 ba`.
    pub fn q2_bracket(a: &Self, b: &Self) -> Self {
        a.mul(b).axpy(&-QScalar::q_pow(2), &b.mul(a))
    }

    /// The same combination of diagonal monomials `x^A_A` in the FRT free algebra.
    pub fn to_free(&self, n: usize) -> Option<FreeElt> {
        let first = self.terms.keys().next()?;
        let mut e = FreeElt::zero(FreeWord::diagonal(first).key(n));
        for (w, c) in &self.terms {
            let fw = FreeWord::diagonal(w);
            if fw.key(n) != *e.key() {
                return None;
            }
            e.add_term(fw, c.clone());
        }
        Some(e)
    }

    /// Coordinates over the arrangements of a weight, lexicographic.
    pub fn to_block_vec(&self, weight: &[usize]) -> Option<SparseVec> {
        let words = arrangements(&sorted_word(weight));
        let pos: HashMap<&[u8], usize> = words.iter().enumerate().map(|(k, w)| (w.letters(), k)).collect();
        let pairs: Option<Vec<_>> = self
            .terms
            .iter()
            .map(|(w, c)| pos.get(w.as_slice()).map(|&k| (k, c.clone())))
            .collect();
        pairs.map(SparseVec::from_pairs)
    }

    /// Image in the commutative polynomial ring at `q = 1`, keyed by sorted word.
    pub fn commutative_at_one(&self) -> Result<BTreeMap<Vec<u8>, BigRational>, ExactError> {
        let one = BigRational::from_integer(1.into());
        let mut out: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut k = w.clone();
            k.sort_unstable();
            *out.entry(k).or_insert_with(BigRational::zero) += c.eval_at(&one)?;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

impl fmt::Display for DiagPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: String = w.iter().map(|a| format!("x{a}")).collect::<Vec<_>>().join(" ");
                if c.is_one() {
                    word
                } else {
                    format!("({c})*{word}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// `[[x_a, x_c], x_b]` for `a < b < c`.
    Distinct,
    /// `[[x_a, x_b], x_a]_{q^2}` for `a < b`.
    LowerRepeat,
    /// `[x_b, [x_a, x_b]]_{q^2}` for `a < b`.
    UpperRepeat,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Distinct => "distinct",
            RelationKind::LowerRepeat => "lower-repeat",
            RelationKind::UpperRepeat => "upper-repeat",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub letters: Vec<u8>,
    pub poly: DiagPoly,
}

impl RelationInstance {
    pub fn distinct(a: u8, b: u8, c: u8) -> Self {
        let x = DiagPoly::letter;
        Self {
            kind: RelationKind::Distinct,
            letters: vec![a, b, c],
            poly: DiagPoly::commutator(&DiagPoly::commutator(&x(a), &x(c)), &x(b)),
        }
    }

    pub fn lower_repeat(a: u8, b: u8) -> Self {
        let x = DiagPoly::letter;
        Self {
            kind: RelationKind::LowerRepeat,
            letters: vec![a, b],
            poly: DiagPoly::q2_bracket(&DiagPoly::commutator(&x(a), &x(b)), &x(a)),
        }
    }

    pub fn upper_repeat(a: u8, b: u8) -> Self {
        let x = DiagPoly::letter;
        Self {
            kind: RelationKind::UpperRepeat,
            letters: vec![a, b],
            poly: DiagPoly::q2_bracket(&x(b), &DiagPoly::commutator(&x(a), &x(b))),
        }
    }

    /// Letter multiplicities over `{1..d}`.
    pub fn weight(&self, d: usize) -> Vec<usize> {
        let w = self.poly.terms.keys().next().expect("nonzero instance");
        let mut out = vec![0; d];
        for &a in w {
            out[a as usize - 1] += 1;
        }
        out
    }
}

/// `C(d, 3) + 2 C(d, 2)`.
pub fn ppk_count(d: usize) -> usize {
    let c2 = d * d.saturating_sub(1) / 2;
    let c3 = d * d.saturating_sub(1) * d.saturating_sub(2) / 6;
    c3 + 2 * c2
}

/// All cubic generators over the alphabet `{1..d}`.
pub fn ppk_generators(d: usize) -> Vec<RelationInstance> {
    let d = d as u8;
    let mut out = Vec::new();
    for a in 1..=d {
        for b in a + 1..=d {
            for c in b + 1..=d {
                out.push(RelationInstance::distinct(a, b, c));
            }
        }
    }
    for a in 1..=d {
        for b in a + 1..=d {
            out.push(RelationInstance::lower_repeat(a, b));
            out.push(RelationInstance::upper_repeat(a, b));
        }
    }
    out
}

fn check_words(d: usize, r: usize) -> Result<(), PpError> {
    let total = (d as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if total > MAX_IDEAL_WORDS as u128 {
        return Err(PpError::BoundExceeded {
            what: "d^r",
            value: total.min(usize::MAX as u128) as usize,
            bound: MAX_IDEAL_WORDS,
        });
    }
    Ok(())
}

/// Degree-`r` ideal component in one weight block: span of every `u G v`.
pub fn ideal_block(d: usize, r: usize, weight: &[usize]) -> Result<SubspaceBasis, PpError> {
    check_words(d, r)?;
    let ambient = arrangements(&sorted_word(weight)).len();
    if r < 3 {
        return Ok(SubspaceBasis::zero(ambient));
    }
    let gens = ppk_generators(d);
    let mut rows = Vec::new();
    for g in &gens {
        let gw = g.weight(d);
        if gw.iter().zip(weight).any(|(a, b)| a > b) {
            continue;
        }
        for k in 0..=r - 3 {
            for u in enumerate_multiindices(d, k)? {
                for v in enumerate_multiindices(d, r - 3 - k)? {
                    let mut w = gw.clone();
                    for &a in u.letters().iter().chain(v.letters()) {
                        w[a as usize - 1] += 1;
                    }
                    if w != weight {
                        continue;
                    }
                    let p = DiagPoly::word(u.letters())
                        .mul(&g.poly)
                        .mul(&DiagPoly::word(v.letters()));
                    rows.push(p.to_block_vec(weight).expect("weight checked"));
                }
            }
        }
    }
    Ok(SubspaceBasis::from_rows(ambient, rows))
}

/// Degree-`r` component of the two-sided ideal generated by the cubic relations,
/// per weight block.
pub fn ideal_component(d: usize, r: usize) -> Result<BTreeMap<Vec<usize>, SubspaceBasis>, PpError> {
    check_words(d, r)?;
    weight_blocks(d, r)?
        .into_keys()
        .map(|w| ideal_block(d, r, &w).map(|b| (w, b)))
        .collect()
}

// ---------------------------------------------------------------------------
// Hecke side

/// Which subspace of the diagonal space is called the pre-plactic ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealVariant {
    /// Span of the concatenations `u L v` of the multilinear generators.
    Concat,
    /// The same span closed in `H ⊗ H` under `a ⊗ b ↦ T_{s_i} a ⊗ b T_{s_i}`,
    /// intersected with the diagonal.
    ActionClosed,
}

impl fmt::Display for IdealVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealVariant::Concat => "concat",
            IdealVariant::ActionClosed => "action-closed",
        })
    }
}

impl std::str::FromStr for IdealVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "concat" => Ok(IdealVariant::Concat),
            "action-closed" => Ok(IdealVariant::ActionClosed),
            _ => Err(format!("unknown variant {s:?} (expected concat or action-closed)")),
        }
    }
}

/// The multilinear generators `u L v` as vectors over `T̃^α_α`, `α ∈ enumerate_perms(r)`.
fn concat_generators(r: usize) -> Result<Vec<SparseVec>, PpError> {
    let perms = enumerate_perms(r)?;
    let pos: HashMap<&[u8], usize> = perms.iter().enumerate().map(|(k, p)| (p.word(), k)).collect();
    let mut out = Vec::new();
    if r < 3 {
        return Ok(out);
    }
    // every permutation word w and split w = u (abc) v gives u·[[a,c],b]·v once the
    // middle letters are sorted
    let mut seen = BTreeSet::new();
    for p in &perms {
        let w = p.word();
        for k in 0..=r - 3 {
            let mut mid = w[k..k + 3].to_vec();
            mid.sort_unstable();
            let key = (w[..k].to_vec(), mid.clone(), w[k + 3..].to_vec());
            if !seen.insert(key) {
                continue;
            }
            let g = RelationInstance::distinct(mid[0], mid[1], mid[2]);
            let poly = DiagPoly::word(&w[..k]).mul(&g.poly).mul(&DiagPoly::word(&w[k + 3..]));
            out.push(SparseVec::from_pairs(
                poly.terms.iter().map(|(x, c)| (pos[x.as_slice()], c.clone())),
            ));
        }
    }
    Ok(out)
}

/// `T_{s_i} a ⊗ b T_{s_i}` on `H ⊗ H`, coordinates `(a, b) ↦ a_idx * N + b_idx`.
fn tensor_action(v: &SparseVec, i: usize, perms: &[Perm], pos: &HashMap<Perm, usize>) -> SparseVec {
    let n = perms.len();
    let r = perms[0].rank();
    let t = HeckeElt::generator(i, r).expect("valid generator");
    let mut pairs = Vec::new();
    for (k, c) in v.iter() {
        let (a, b) = (&perms[k / n], &perms[k % n]);
        let left = t.mul(&HeckeElt::basis(a.clone())).expect("same rank");
        let right = HeckeElt::basis(b.clone()).mul_generator(i);
        for (pa, x) in left.terms() {
            for (pb, y) in right.terms() {
                pairs.push((pos[pa] * n + pos[pb], c * &(x * y)));
            }
        }
    }
    SparseVec::from_pairs(pairs)
}

fn action_closed(r: usize, gens: Vec<SparseVec>) -> Result<SubspaceBasis, PpError> {
    let perms = enumerate_perms(r)?;
    let n = perms.len();
    let pos: HashMap<Perm, usize> = perms.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
    // column order: off-diagonal pairs first, then the diagonal pairs (α^-1, α)
    let diag_of: Vec<usize> = perms.iter().map(|a| pos[&a.inverse()] * n + pos[a]).collect();
    let diag_set: BTreeSet<usize> = diag_of.iter().copied().collect();
    let mut col_of = vec![0usize; n * n];
    let mut next = 0;
    for (c, slot) in col_of.iter_mut().enumerate() {
        if !diag_set.contains(&c) {
            *slot = next;
            next += 1;
        }
    }
    for (k, &c) in diag_of.iter().enumerate() {
        col_of[c] = next + k;
    }
    let off = next;
    let to_cols = |v: &SparseVec| v.map_cols(|c| col_of[c]);

    let mut ech = Echelon::new(n * n);
    let mut queue: Vec<SparseVec> = Vec::new();
    for g in gens {
        let raw = g.map_cols(|k| diag_of[k]);
        if ech.insert(&to_cols(&raw)) {
            queue.push(raw);
        }
    }
    while let Some(v) = queue.pop() {
        for i in 1..r {
            let w = tensor_action(&v, i, &perms, &pos);
            // queue the raw image: its coefficients stay Laurent polynomials
            if ech.insert(&to_cols(&w)) {
                queue.push(w);
            }
        }
    }
    let basis = ech.into_basis();
    Ok(SubspaceBasis::from_rows(
        n,
        basis
            .rows()
            .iter()
            .filter(|row| row.pivot().is_some_and(|p| p >= off))
            .map(|row| row.map_cols(|c| c - off)),
    ))
}

/// Largest rank for which the action closure in `H ⊗ H` is built explicitly.
pub const MAX_EXPLICIT_CLOSURE_RANK: usize = 3;

/// How an ideal component was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMethod {
    /// Spanned directly.
    Direct,
    /// Closure built explicitly in `H ⊗ H`.
    Explicit,
    /// The generators `T_{s_i} · - · T_{s_i}` preserve `ker p`, so the closed
    /// component sits between the concatenation span and `ker p`; when those two
    /// coincide it equals both.
    Sandwich,
}

fn check_rank(r: usize) -> Result<(), PpError> {
    if r > MAX_DIAG_RANK {
        return Err(PpError::BoundExceeded {
            what: "r",
            value: r,
            bound: MAX_DIAG_RANK,
        });
    }
    Ok(())
}

fn ideal_with_method(
    r: usize,
    variant: IdealVariant,
    kernel: &SubspaceBasis,
) -> Result<(SubspaceBasis, ClosureMethod), PpError> {
    let ambient = kernel.ambient();
    let gens = concat_generators(r)?;
    match variant {
        IdealVariant::Concat => Ok((SubspaceBasis::from_rows(ambient, gens), ClosureMethod::Direct)),
        IdealVariant::ActionClosed if r <= MAX_EXPLICIT_CLOSURE_RANK => {
            Ok((action_closed(r, gens)?, ClosureMethod::Explicit))
        }
        IdealVariant::ActionClosed => {
            let concat = SubspaceBasis::from_rows(ambient, gens);
            if concat == *kernel {
                Ok((concat, ClosureMethod::Sandwich))
            } else {
                Err(PpError::BoundExceeded {
                    what: "r for an explicit action closure",
                    value: r,
                    bound: MAX_EXPLICIT_CLOSURE_RANK,
                })
            }
        }
    }
}

/// Multilinear pre-plactic ideal in `T̃^α_α` coordinates.
pub fn preplactic_ideal_component(r: usize, variant: IdealVariant) -> Result<SubspaceBasis, PpError> {
    check_rank(r)?;
    let kernel = diag_kernel_of_p(r)?;
    Ok(ideal_with_method(r, variant, &kernel)?.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantResult {
    pub variant: IdealVariant,
    pub method: ClosureMethod,
    pub dim: usize,
    pub contained: bool,
    pub equal: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PreplacticReport {
    pub r: usize,
    pub dim_diagonal: usize,
    pub dim_kernel: usize,
    pub variants: Vec<VariantResult>,
}

impl PreplacticReport {
    pub fn all_contained(&self) -> bool {
        self.variants.iter().all(|v| v.contained)
    }

    pub fn some_equal(&self) -> bool {
        self.variants.iter().any(|v| v.equal)
    }
}

fn render_diag_vec(r: usize, v: &SparseVec) -> String {
    let perms = enumerate_perms(r).expect("bounded rank");
    let parts: Vec<String> = v
        .iter()
        .map(|(k, c)| format!("({c})*T~[{}]", perms[k]))
        .collect();
    parts.join(" + ")
}

/// Compares `ker p` on the diagonal space with the requested ideal variants.
pub fn preplactic_check(r: usize, variants: &[IdealVariant]) -> Result<PreplacticReport, PpError> {
    check_rank(r)?;
    let kernel = diag_kernel_of_p(r)?;
    let mut out = Vec::new();
    for &variant in variants {
        let (ideal, method) = ideal_with_method(r, variant, &kernel)?;
        let outside = ideal.witness_outside(&kernel)?;
        let missing = kernel.witness_outside(&ideal)?;
        out.push(VariantResult {
            variant,
            method,
            dim: ideal.dim(),
            contained: outside.is_none(),
            equal: outside.is_none() && missing.is_none(),
            witness: outside.or(missing).map(|v| render_diag_vec(r, &v)),
        });
    }
    Ok(PreplacticReport {
        r,
        dim_diagonal: kernel.ambient(),
        dim_kernel: kernel.dim(),
        variants: out,
    })
}

// ---------------------------------------------------------------------------
// Brute-force diagonalisation

type RuleSet = BTreeMap<FreeWord, FreeElt>;

fn fw(u: &str, l: &str) -> FreeWord {
    let digits = |s: &str| s.bytes().map(|b| b - b'0').collect::<Vec<u8>>();
    FreeWord::new(&digits(u), &digits(l))
}

fn combo(n: usize, terms: &[(&str, &str, QScalar)]) -> FreeElt {
    let mut e = FreeElt::zero(fw(terms[0].0, terms[0].1).key(n));
    for (u, l, c) in terms {
        e.add_term(fw(u, l), c.clone());
    }
    e
}

fn diag_free(p: &DiagPoly, n: usize) -> FreeElt {
    p.to_free(n).expect("homogeneous diagonal polynomial")
}

/// `x^a_b x^b_a` next to a diagonal letter becomes `[x_M, x_m] / ω` next to it.
fn pair_rule(w: &FreeWord, n: usize) -> Option<FreeElt> {
    let (u, l) = (&w.upper, &w.lower);
    if u.len() != 3 {
        return None;
    }
    let x = DiagPoly::letter;
    let bracket = |a: u8, b: u8| {
        let (hi, lo) = (a.max(b), a.min(b));
        DiagPoly::commutator(&x(hi), &x(lo))
    };
    let inv_w = omega().inv().expect("ω != 0");
    if u[2] == l[2] && u[0] == l[1] && u[1] == l[0] && u[0] != u[1] {
        let p = bracket(u[0], u[1]).mul(&x(u[2])).scale(&inv_w);
        return Some(diag_free(&p, n));
    }
    if u[0] == l[0] && u[1] == l[2] && u[2] == l[1] && u[1] != u[2] {
        let p = x(u[0]).mul(&bracket(u[1], u[2])).scale(&inv_w);
        return Some(diag_free(&p, n));
    }
    None
}

/// `(upper, lower, [(upper, lower, coefficient)])` for one rewrite rule.
type RuleRow = (&'static str, &'static str, Vec<(&'static str, &'static str, QScalar)>);

fn table_111(n: usize) -> RuleSet {
    let w = omega;
    let one = QScalar::one;
    let rows: Vec<RuleRow> = vec![
        ("213", "321", vec![("123", "231", one()), ("213", "231", w())]),
        ("132", "321", vec![("123", "312", one()), ("132", "312", w())]),
        ("231", "312", vec![("123", "231", one()), ("213", "231", w())]),
        ("213", "312", vec![("123", "132", one()), ("123", "312", w())]),
        ("312", "231", vec![("123", "312", one()), ("123", "321", w())]),
        ("321", "213", vec![("123", "312", one()), ("231", "213", w())]),
        ("312", "213", vec![("132", "123", one()), ("132", "213", w())]),
        ("231", "132", vec![("213", "123", one()), ("123", "312", w())]),
        ("132", "231", vec![("123", "213", one()), ("123", "231", w())]),
        ("132", "213", vec![("123", "231", one())]),
        ("321", "132", vec![("123", "231", one()), ("123", "321", w())]),
        ("213", "132", vec![("123", "312", one())]),
        ("321", "123", vec![("231", "213", one())]),
        ("312", "123", vec![("123", "231", one())]),
        ("231", "123", vec![("123", "312", one())]),
    ];
    rows.into_iter()
        .map(|(u, l, rhs)| (fw(u, l), combo(n, &rhs)))
        .collect()
}

/// Final eliminations of `x^{123}_{312}` and `x^{123}_{321}` in the multilinear block.
fn closing_111(n: usize) -> RuleSet {
    let x = |s: &str| DiagPoly::word(&s.bytes().map(|b| b - b'0').collect::<Vec<_>>());
    let l = DiagPoly::letter;
    let w = omega();
    let inv_w = w.inv().expect("ω != 0");
    let inv_w2 = (&w * &w).inv().expect("ω != 0");
    // ω^2 x^{123}_{312} ≡ x_{321} - x_{123} - [x2,x1]x3 - x1[x3,x2] - (ω^3+ω) x^{123}_{321} - ω^2 x^{123}_{231}
    let diag_part = x("321")
        .sub(&x("123"))
        .sub(&DiagPoly::commutator(&l(2), &l(1)).mul(&l(3)))
        .sub(&l(1).mul(&DiagPoly::commutator(&l(3), &l(2))))
        .scale(&inv_w2);
    let c321 = -((&w * &w * &w + &w) * &inv_w2);
    let rhs312 = diag_free(&diag_part, n)
        .add(&combo(n, &[("123", "321", c321), ("123", "231", QScalar::from_int(-1))]))
        .expect("same block");
    // ω x^{123}_{321} ≡ [x3, x1] x2
    let rhs321 = diag_free(&DiagPoly::commutator(&l(3), &l(1)).mul(&l(2)).scale(&inv_w), n);
    BTreeMap::from([(fw("123", "312"), rhs312), (fw("123", "321"), rhs321)])
}

fn table_122(n: usize) -> RuleSet {
    let q = QScalar::q();
    BTreeMap::from([
        (fw("122", "221"), combo(n, &[("122", "212", q.clone())])),
        (fw("221", "122"), combo(n, &[("212", "122", q)])),
        (fw("221", "212"), combo(n, &[("212", "221", QScalar::one())])),
        (fw("212", "122"), combo(n, &[("122", "212", QScalar::one())])),
    ])
}

fn table_112(n: usize) -> RuleSet {
    let q = QScalar::q();
    BTreeMap::from([
        (fw("112", "211"), combo(n, &[("112", "121", q.clone())])),
        (fw("211", "112"), combo(n, &[("121", "112", q)])),
        (fw("211", "121"), combo(n, &[("121", "211", QScalar::one())])),
    ])
}

/// Adds the generic pair rules for every block word lacking an explicit rule.
fn with_pair_rules(mut rules: RuleSet, key: &BlockKey, n: usize) -> RuleSet {
    for w in key.words() {
        if let std::collections::btree_map::Entry::Vacant(slot) = rules.entry(w) {
            if let Some(rhs) = pair_rule(slot.key(), n) {
                slot.insert(rhs);
            }
        }
    }
    rules
}

fn validate_rules(rules: &RuleSet, quot: &BlockQuotient, n: usize) -> Result<usize, PpError> {
    for (lhs, rhs) in rules {
        let diff = rhs.sub(&FreeElt::word(lhs.clone(), n))?;
        if !quot.membership(&diff)? {
            return Err(PpError::MembershipFailure {
                rule: format!("{lhs} -> {rhs}"),
                residual: quot.reduce(&diff)?.to_string(),
            });
        }
    }
    Ok(rules.len())
}

/// Applies the rules until no left-hand side occurs.
fn rewrite(v: &FreeElt, rules: &RuleSet) -> Result<FreeElt, PpError> {
    fn nf(
        w: &FreeWord,
        rules: &RuleSet,
        memo: &mut HashMap<FreeWord, FreeElt>,
        depth: usize,
    ) -> Result<Option<FreeElt>, PpError> {
        if depth > 64 {
            return Err(PpError::NonTerminating(w.to_string()));
        }
        if let Some(m) = memo.get(w) {
            return Ok(Some(m.clone()));
        }
        let Some(rhs) = rules.get(w) else {
            return Ok(None);
        };
        let mut out = FreeElt::zero(rhs.key().clone());
        for (x, c) in rhs.terms() {
            match nf(x, rules, memo, depth + 1)? {
                Some(e) => out = out.axpy(c, &e)?,
                None => out.add_term(x.clone(), c.clone()),
            }
        }
        memo.insert(w.clone(), out.clone());
        Ok(Some(out))
    }
    let mut memo = HashMap::new();
    let mut out = FreeElt::zero(v.key().clone());
    for (w, c) in v.terms() {
        match nf(w, rules, &mut memo, 0)? {
            Some(e) => out = out.axpy(c, &e)?,
            None => out.add_term(w.clone(), c.clone()),
        }
    }
    Ok(out)
}

/// `L^±(W)^I_I = Σ [e^±]^I_K x^K_L [e^∓]^L_I` over the arrangements of `I`.
pub fn lemma_element(sign: Sign, index: &[u8]) -> Result<FreeElt, PpError> {
    let n = 3;
    let r = index.len();
    let a = pi(&e21(sign), n, r)?;
    let b = pi(&e21(sign.opposite()), n, r)?;
    let words = arrangements(index);
    let i = word_index(index, n);
    let mut out = FreeElt::zero(FreeWord::diagonal(index).key(n));
    for k in &words {
        let x = a.get(i, word_index(k.letters(), n));
        if x.is_zero() {
            continue;
        }
        for l in &words {
            let y = b.get(word_index(l.letters(), n), i);
            if !y.is_zero() {
                out.add_term(FreeWord::new(k.letters(), l.letters()), &x * &y);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteWeightResult {
    pub weight: Vec<usize>,
    pub index: String,
    pub instance: String,
    pub kind: RelationKind,
    pub rules_checked: usize,
    pub element_in_frt_span: bool,
    pub instance_in_frt_span: bool,
    pub scalar: Option<QScalar>,
    pub residual_zero: bool,
    pub reference_scalar: Option<QScalar>,
    pub reference_scalar_swapped: Option<QScalar>,
    pub matches_reference: Option<bool>,
    pub matches_swapped: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaBruteReport {
    pub sign: Sign,
    /// `π(e^±) π(e^∓) = 0`.
    pub orthogonality: bool,
    pub weights: Vec<BruteWeightResult>,
}

impl LemmaBruteReport {
    pub fn residuals_zero(&self) -> bool {
        self.weights.iter().all(|w| w.residual_zero)
    }

    pub fn matches_reference(&self) -> bool {
        self.weights.iter().all(|w| w.matches_reference.unwrap_or(true))
    }
}

fn s(x: &str) -> QScalar {
    x.parse().expect("valid scalar literal")
}

/// The printed values being compared against, for `e^+` and `e^-` in that order.
fn printed_scalars(weight: &[usize], sign: Sign) -> (Option<QScalar>, Option<QScalar>) {
    let upper = s("-(w^3 - w^2 - 2)/(2*w*[3]^2)");
    let lower = s("-(w^3 + w^2 + 2)/(2*w*[3]^2)");
    match weight {
        [1, 2, 0] => {
            let c = q_int(2) / (QScalar::from_int(4) * omega() * q_int(3));
            (Some(c.clone()), Some(c))
        }
        [1, 1, 1] => match sign {
            Sign::Plus => (Some(upper), Some(lower)),
            Sign::Minus => (Some(lower), Some(upper)),
        },
        _ => (None, None),
    }
}

fn brute_weight(sign: Sign, index: &[u8]) -> Result<BruteWeightResult, PpError> {
    let n = 3;
    let key = FreeWord::diagonal(index).key(n);
    let quot = BlockQuotient::new(n, key.clone())?;
    let (explicit, instance) = match index {
        [1, 2, 3] => {
            let mut t = table_111(n);
            t.extend(closing_111(n));
            (t, RelationInstance::distinct(1, 2, 3))
        }
        [1, 2, 2] => (table_122(n), RelationInstance::upper_repeat(1, 2)),
        [1, 1, 2] => (table_112(n), RelationInstance::lower_repeat(1, 2)),
        _ => unreachable!("only three diagonal indices are examined"),
    };
    let rules = with_pair_rules(explicit, &key, n);
    let rules_checked = validate_rules(&rules, &quot, n)?;
    let element = lemma_element(sign, index)?;
    let element_in_frt_span = quot.membership(&element)?;
    let target = diag_free(&instance.poly, n);
    let instance_in_frt_span = quot.membership(&target)?;
    let rewritten = rewrite(&element, &rules)?;
    let leftover: Vec<String> = rewritten
        .terms()
        .keys()
        .filter(|w| !w.is_diagonal())
        .map(ToString::to_string)
        .collect();
    if !leftover.is_empty() {
        return Err(PpError::IncompleteRewrite(leftover.join(", ")));
    }
    let (pivot, pc) = target.terms().iter().next().expect("nonzero instance");
    let c = rewritten.coeff(pivot) / pc;
    let residual_zero = rewritten.axpy(&-&c, &target)?.is_zero();
    let weight = key.upper.clone();
    let (reference_scalar, reference_scalar_swapped) = printed_scalars(&weight, sign);
    Ok(BruteWeightResult {
        index: index.iter().map(u8::to_string).collect(),
        instance: instance.poly.to_string(),
        kind: instance.kind,
        rules_checked,
        element_in_frt_span,
        instance_in_frt_span,
        matches_reference: reference_scalar.as_ref().map(|p| *p == c),
        matches_swapped: reference_scalar_swapped.as_ref().map(|p| *p == c),
        scalar: residual_zero.then_some(c),
        residual_zero,
        reference_scalar,
        reference_scalar_swapped,
        weight,
    })
}

/// Diagonalises `L^±(W)^I_I` for `I = 123, 112, 122` with membership-checked
/// substitutions and measures its proportionality to the matching cubic relation.
pub fn lemma_brute_check(sign: Sign) -> Result<LemmaBruteReport, PpError> {
    let a = pi(&e21(sign), 3, 3)?;
    let b = pi(&e21(sign.opposite()), 3, 3)?;
    let orthogonality = a.mul(&b)?.is_zero();
    let weights = [&[1u8, 2, 3][..], &[1, 1, 2], &[1, 2, 2]]
        .iter()
        .map(|i| brute_weight(sign, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LemmaBruteReport {
        sign,
        orthogonality,
        weights,
    })
}

// ---------------------------------------------------------------------------
// Ideal versus diagonal kernel

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockVerdict {
    pub weight: Vec<usize>,
    pub dim_kernel: usize,
    pub dim_ideal: usize,
    pub contained: bool,
    pub equal: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub d: usize,
    pub r: usize,
    pub blocks: Vec<BlockVerdict>,
    pub total_kernel: usize,
    pub total_ideal: usize,
    pub pass: bool,
}

fn render_block_vec(weight: &[usize], v: &SparseVec) -> String {
    let words = arrangements(&sorted_word(weight));
    let parts: Vec<String> = v
        .iter()
        .map(|(k, c)| {
            let w: String = words[k].letters().iter().map(u8::to_string).collect();
            format!("({c})*x[{w}]")
        })
        .collect();
    parts.join(" + ")
}

/// Compares the ideal with the kernel of the diagonal expansion in one block.
pub fn conjecture_block(
    d: usize,
    r: usize,
    weight: &[usize],
    table: &Deg2Table,
    max_block: usize,
) -> Result<BlockVerdict, PpError> {
    let kernel = diag_block_kernel(d, weight, table, max_block)?.kernel;
    let ideal = ideal_block(d, r, weight)?;
    let outside = ideal.witness_outside(&kernel)?;
    let missing = kernel.witness_outside(&ideal)?;
    Ok(BlockVerdict {
        weight: weight.to_vec(),
        dim_kernel: kernel.dim(),
        dim_ideal: ideal.dim(),
        contained: outside.is_none(),
        equal: outside.is_none() && missing.is_none(),
        witness: outside.or(missing).map(|v| render_block_vec(weight, &v)),
    })
}

pub fn assemble_conjecture(d: usize, r: usize, blocks: Vec<BlockVerdict>) -> ConjectureReport {
    ConjectureReport {
        d,
        r,
        total_kernel: blocks.iter().map(|b| b.dim_kernel).sum(),
        total_ideal: blocks.iter().map(|b| b.dim_ideal).sum(),
        pass: blocks.iter().all(|b| b.equal),
        blocks,
    }
}

/// Weight vectors of the degree-`r` diagonal blocks over `{1..d}`.
pub fn conjecture_weights(d: usize, r: usize) -> Result<Vec<Vec<usize>>, PpError> {
    check_words(d, r)?;
    Ok(weight_blocks(d, r)?.into_keys().collect())
}

/// Block-by-block comparison of the cubic ideal with the FRT diagonal kernel.
pub fn verify_conjecture(d: usize, r: usize, max_block: usize) -> Result<ConjectureReport, PpError> {
    let weights = conjecture_weights(d, r)?;
    let table = deg2_table(d)?;
    let blocks = weights
        .par_iter()
        .map(|w| conjecture_block(d, r, w, &table, max_block))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble_conjecture(d, r, blocks))
}
