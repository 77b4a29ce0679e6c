//! Degree-`r` components of the FRT quantum matrix algebra, one weight block
//! at a time.
//!
//! A block is fixed by the letter multiplicities of the upper and the lower
//! word. Its relation space is spanned by the degree-2 relations placed at
//! every adjacent position of every word; quotients are pure linear algebra.
//!
//! Normal forms: words whose upper part is not weakly increasing are
//! eliminated first, then the upper-sorted words from the lexicographically
//! largest down. The surviving words are therefore upper-sorted and as small
//! as possible, e.g. `x^{123}_σ` in the multilinear block.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{ExactError, QScalar};
use crate::linalgq::{LinalgError, QMatrix, SparseVec, SubspaceBasis};
use crate::rmat::{build_rhat, deg2_relation, RmatError};
use crate::symgroup::{arrangements, sorted_word, weight_blocks, MultiIndex, SymError};

/// Largest number of words allowed in one block.
pub const DEFAULT_MAX_BLOCK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QmaError {
    #[error("block of {value} words exceeds the bound {bound}")]
    BoundExceeded { value: usize, bound: usize },
    #[error("element of block {got} used in block {expected}")]
    BlockMismatch { expected: String, got: String },
    #[error("block {0} has no diagonal words (upper and lower weights differ)")]
    NotDiagonal(String),
    #[error("golden data: {0}")]
    Golden(String),
    #[error(transparent)]
    Rmat(#[from] RmatError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The monomial `x^{u_1}_{l_1} ... x^{u_r}_{l_r}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FreeWord {
    pub upper: Vec<u8>,
    pub lower: Vec<u8>,
}

impl FreeWord {
    pub fn new(upper: &[u8], lower: &[u8]) -> Self {
        assert_eq!(upper.len(), lower.len(), "upper and lower words differ in length");
        Self {
            upper: upper.to_vec(),
            lower: lower.to_vec(),
        }
    }

    pub fn diagonal(letters: &[u8]) -> Self {
        Self::new(letters, letters)
    }

    pub fn degree(&self) -> usize {
        self.upper.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.upper == self.lower
    }

    pub fn is_upper_sorted(&self) -> bool {
        self.upper.windows(2).all(|p| p[0] <= p[1])
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self {
            upper: [self.upper.as_slice(), other.upper.as_slice()].concat(),
            lower: [self.lower.as_slice(), other.lower.as_slice()].concat(),
        }
    }

    pub fn key(&self, n: usize) -> BlockKey {
        BlockKey {
            upper: MultiIndex(self.upper.clone()).weight(n),
            lower: MultiIndex(self.lower.clone()).weight(n),
        }
    }
}

fn digits(w: &[u8]) -> String {
    if w.iter().all(|&x| x < 10) {
        w.iter().map(u8::to_string).collect()
    } else {
        MultiIndex(w.to_vec()).to_string()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{{{}}}_{{{}}}", digits(&self.upper), digits(&self.lower))
    }
}

/// Upper and lower weight vectors of a block.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct BlockKey {
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
}

impl BlockKey {
    pub fn diagonal(weight: &[usize]) -> Self {
        Self {
            upper: weight.to_vec(),
            lower: weight.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.upper.len()
    }

    pub fn degree(&self) -> usize {
        self.upper.iter().sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.upper == self.lower
    }

    /// Number of words in the block.
    pub fn size(&self) -> usize {
        multinomial(&self.upper) * multinomial(&self.lower)
    }

    /// Words in lexicographic `(upper, lower)` order.
    pub fn words(&self) -> Vec<FreeWord> {
        let ups = arrangements(&sorted_word(&self.upper));
        let lows = arrangements(&sorted_word(&self.lower));
        ups.iter()
            .flat_map(|u| lows.iter().map(move |l| FreeWord::new(&u.0, &l.0)))
            .collect()
    }
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({})/({})", j(&self.upper), j(&self.lower))
    }
}

fn multinomial(w: &[usize]) -> usize {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &m in w {
        for k in 1..=m as u128 {
            total += 1;
            acc = acc * total / k;
        }
    }
    acc as usize
}

/// A linear combination of words from a single block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeElt {
    key: BlockKey,
    terms: BTreeMap<FreeWord, QScalar>,
}

impl FreeElt {
    pub fn zero(key: BlockKey) -> Self {
        Self {
            key,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(w: FreeWord, n: usize) -> Self {
        Self::monomial(w, QScalar::one(), n)
    }

    pub fn monomial(w: FreeWord, c: QScalar, n: usize) -> Self {
        let mut e = Self::zero(w.key(n));
        e.add_term(w, c);
        e
    }

    /// `x^{a_1}_{a_1} ... x^{a_r}_{a_r}`.
    pub fn diagonal(letters: &[u8], n: usize) -> Self {
        Self::word(FreeWord::diagonal(letters), n)
    }

    pub fn key(&self) -> &BlockKey {
        &self.key
    }

    pub fn terms(&self) -> &BTreeMap<FreeWord, QScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &FreeWord) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Adds `c * w`; `w` must belong to the block.
    pub fn add_term(&mut self, w: FreeWord, c: QScalar) {
        debug_assert_eq!(w.key(self.key.n()), self.key);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn same_block(&self, other: &Self) -> Result<(), QmaError> {
        if self.key != other.key {
            return Err(QmaError::BlockMismatch {
                expected: self.key.to_string(),
                got: other.key.to_string(),
            });
        }
        Ok(())
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &QScalar, other: &Self) -> Result<Self, QmaError> {
        self.same_block(other)?;
        let mut out = self.clone();
        for (w, x) in &other.terms {
            out.add_term(w.clone(), c * x);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, QmaError> {
        self.axpy(&QScalar::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QmaError> {
        self.axpy(&QScalar::from_int(-1), other)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(self.key.clone());
        for (w, x) in &self.terms {
            out.add_term(w.clone(), c * x);
        }
        out
    }

    /// Concatenation product; the result lives in the block of summed weights.
    pub fn mul(&self, other: &Self) -> Self {
        let add = |a: &[usize], b: &[usize]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        let key = BlockKey {
            upper: add(&self.key.upper, &other.key.upper),
            lower: add(&self.key.lower, &other.key.lower),
        };
        let mut out = Self::zero(key);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for FreeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if c.is_one() {
                    w.to_string()
                } else {
                    format!("({c})*{w}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Degree-2 FRT relations keyed by `((a, b), (e, f))`.
pub type Deg2Table = HashMap<((u8, u8), (u8, u8)), BTreeMap<([u8; 2], [u8; 2]), QScalar>>;

pub fn deg2_table(n: usize) -> Result<Deg2Table, QmaError> {
    let rhat = build_rhat(n)?;
    let mut t = HashMap::new();
    let letters = 1..=n as u8;
    for a in letters.clone() {
        for b in letters.clone() {
            for e in letters.clone() {
                for f in letters.clone() {
                    t.insert(((a, b), (e, f)), deg2_relation(&rhat, n, (a, b), (e, f)));
                }
            }
        }
    }
    Ok(t)
}

/// The FRT relations of a block, before any reduction, as word combinations.
pub fn block_relation_vectors(
    table: &Deg2Table,
    key: &BlockKey,
) -> Vec<BTreeMap<FreeWord, QScalar>> {
    let r = key.degree();
    let mut out = Vec::new();
    for w in key.words() {
        for p in 0..r.saturating_sub(1) {
            let rel = &table[&((w.upper[p], w.upper[p + 1]), (w.lower[p], w.lower[p + 1]))];
            if rel.is_empty() {
                continue;
            }
            let mut v: BTreeMap<FreeWord, QScalar> = BTreeMap::new();
            for ((u2, l2), c) in rel {
                let mut u = w.upper.clone();
                let mut l = w.lower.clone();
                u[p..p + 2].copy_from_slice(u2);
                l[p..p + 2].copy_from_slice(l2);
                *v.entry(FreeWord { upper: u, lower: l }).or_default() += c;
            }
            v.retain(|_, c| !c.is_zero());
            if !v.is_empty() {
                out.push(v);
            }
        }
    }
    out
}

/// The quotient of one block by its FRT relations.
#[derive(Clone, Debug)]
pub struct BlockQuotient {
    n: usize,
    key: BlockKey,
    /// Words in column (pivot priority) order.
    columns: Vec<FreeWord>,
    index: HashMap<FreeWord, usize>,
    relations: SubspaceBasis,
    /// Normal-form words in lexicographic order, with their column numbers.
    basis: Vec<FreeWord>,
    basis_cols: Vec<usize>,
}

impl BlockQuotient {
    pub fn new(n: usize, key: BlockKey) -> Result<Self, QmaError> {
        Self::with_bound(n, key, DEFAULT_MAX_BLOCK)
    }

    pub fn with_bound(n: usize, key: BlockKey, max_block: usize) -> Result<Self, QmaError> {
        let table = deg2_table(n)?;
        Self::with_table(n, key, &table, max_block)
    }

    pub fn with_table(
        n: usize,
        key: BlockKey,
        table: &Deg2Table,
        max_block: usize,
    ) -> Result<Self, QmaError> {
        let size = key.size();
        if size > max_block {
            return Err(QmaError::BoundExceeded {
                value: size,
                bound: max_block,
            });
        }
        let words = key.words();
        let (mut unsorted, mut sorted): (Vec<FreeWord>, Vec<FreeWord>) =
            words.into_iter().partition(|w| !w.is_upper_sorted());
        sorted.reverse();
        unsorted.append(&mut sorted);
        let columns = unsorted;
        let index: HashMap<FreeWord, usize> = columns
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), k))
            .collect();
        let relations = if size <= 1 {
            SubspaceBasis::zero(size)
        } else {
            let vecs = block_relation_vectors(table, &key).into_iter().map(|v| {
                SparseVec::from_pairs(v.into_iter().map(|(w, c)| (index[&w], c)))
            });
            SubspaceBasis::from_rows(size, vecs)
        };
        let pivots: std::collections::BTreeSet<usize> = relations.pivots().into_iter().collect();
        let mut basis: Vec<FreeWord> = columns
            .iter()
            .enumerate()
            .filter(|(k, _)| !pivots.contains(k))
            .map(|(_, w)| w.clone())
            .collect();
        basis.sort();
        let basis_cols = basis.iter().map(|w| index[w]).collect();
        Ok(Self {
            n,
            key,
            columns,
            index,
            relations,
            basis,
            basis_cols,
        })
    }

    pub fn key(&self) -> &BlockKey {
        &self.key
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_words(&self) -> usize {
        self.columns.len()
    }

    pub fn relations(&self) -> &SubspaceBasis {
        &self.relations
    }

    pub fn normal_basis(&self) -> &[FreeWord] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn column_words(&self) -> &[FreeWord] {
        &self.columns
    }

    /// Coordinates of `v` in the column order.
    pub fn vector(&self, v: &FreeElt) -> Result<SparseVec, QmaError> {
        if v.key != self.key {
            return Err(QmaError::BlockMismatch {
                expected: self.key.to_string(),
                got: v.key.to_string(),
            });
        }
        Ok(SparseVec::from_pairs(
            v.terms.iter().map(|(w, c)| (self.index[w], c.clone())),
        ))
    }

    pub fn element(&self, v: &SparseVec) -> FreeElt {
        let mut e = FreeElt::zero(self.key.clone());
        for (k, c) in v.iter() {
            e.add_term(self.columns[k].clone(), c.clone());
        }
        e
    }

    /// Normal form of `v`, a combination of normal-form words.
    pub fn reduce(&self, v: &FreeElt) -> Result<FreeElt, QmaError> {
        let r = self.relations.reduce(&self.vector(v)?)?;
        Ok(self.element(&r))
    }

    /// Normal form as coordinates over [`Self::normal_basis`].
    pub fn coordinates(&self, v: &FreeElt) -> Result<SparseVec, QmaError> {
        let r = self.relations.reduce(&self.vector(v)?)?;
        let pos: HashMap<usize, usize> = self
            .basis_cols
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, k))
            .collect();
        Ok(SparseVec::from_pairs(r.iter().map(|(c, x)| (pos[&c], x.clone()))))
    }

    /// True when `v` lies in the relation span.
    pub fn membership(&self, v: &FreeElt) -> Result<bool, QmaError> {
        Ok(self.relations.contains(&self.vector(v)?)?)
    }

    /// `c` with `v ≡ c w` modulo the relations, if any.
    pub fn proportionality(&self, v: &FreeElt, w: &FreeElt) -> Result<Option<QScalar>, QmaError> {
        Ok(self
            .relations
            .proportionality(&self.vector(v)?, &self.vector(w)?)?)
    }
}

/// Relation span of a block; coordinates follow [`BlockQuotient::column_words`].
pub fn frt_relation_span(n: usize, key: &BlockKey) -> Result<SubspaceBasis, QmaError> {
    Ok(BlockQuotient::new(n, key.clone())?.relations.clone())
}

/// Expansion matrix of a diagonal block.
#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub key: BlockKey,
    /// Diagonal words `A` (rows), lexicographic.
    pub rows: Vec<String>,
    /// Normal-form words (columns).
    pub cols: Vec<String>,
    pub matrix: QMatrix,
}

pub fn expand_diagonal_in(quot: &BlockQuotient) -> Result<Expansion, QmaError> {
    let key = quot.key();
    if !key.is_diagonal() {
        return Err(QmaError::NotDiagonal(key.to_string()));
    }
    let diag = arrangements(&sorted_word(&key.upper));
    let rows = diag
        .iter()
        .map(|a| quot.coordinates(&FreeElt::diagonal(&a.0, quot.n)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Expansion {
        key: key.clone(),
        rows: diag.iter().map(|a| digits(&a.0)).collect(),
        cols: quot.normal_basis().iter().map(ToString::to_string).collect(),
        matrix: QMatrix::from_rows(quot.dim(), rows)?,
    })
}

/// `M` for the diagonal block of the given weight: row `A` is the normal form of `x^A_A`.
pub fn expand_diagonal(n: usize, weight: &[usize]) -> Result<Expansion, QmaError> {
    expand_diagonal_in(&BlockQuotient::new(n, BlockKey::diagonal(weight))?)
}

/// A transcribed expansion matrix and the expected left kernel vector.
#[derive(Clone, Debug)]
pub struct GoldenExpansion {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub matrix: QMatrix,
    pub kernel: SparseVec,
}

#[derive(Deserialize)]
struct GoldenJson {
    #[serde(default)]
    words: Option<Vec<String>>,
    basis: Vec<String>,
    rows: Vec<Vec<String>>,
    kernel: Vec<String>,
}

fn parse_scalars(xs: &[String]) -> Result<Vec<QScalar>, QmaError> {
    xs.iter()
        .map(|x| x.parse().map_err(|e: ExactError| QmaError::Golden(e.to_string())))
        .collect()
}

fn golden_expansion(text: &str) -> Result<GoldenExpansion, QmaError> {
    let g: GoldenJson = serde_json::from_str(text).map_err(|e| QmaError::Golden(e.to_string()))?;
    let dense = g.rows.iter().map(|r| parse_scalars(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(GoldenExpansion {
        rows: g.words.unwrap_or_else(|| g.basis.clone()),
        cols: g.basis,
        matrix: QMatrix::from_dense(&dense)?,
        kernel: SparseVec::from_dense(&parse_scalars(&g.kernel)?),
    })
}

/// The multilinear `n = 3` expansion matrix.
pub fn golden_systd() -> Result<GoldenExpansion, QmaError> {
    golden_expansion(include_str!("../data/systd.json"))
}

/// The weight-(2,1) expansion matrix for `n = 2`.
pub fn golden_weight21() -> Result<GoldenExpansion, QmaError> {
    golden_expansion(include_str!("../data/weight21.json"))
}

/// Per-block data of the diagonal relation computation.
#[derive(Clone, Debug)]
pub struct DiagBlockKernel {
    pub weight: Vec<usize>,
    pub num_words: usize,
    pub quotient_dim: usize,
    pub rank: usize,
    /// Left kernel of `M`, over the diagonal words of the block in lexicographic order.
    pub kernel: SubspaceBasis,
}

pub fn diag_block_kernel(
    n: usize,
    weight: &[usize],
    table: &Deg2Table,
    max_block: usize,
) -> Result<DiagBlockKernel, QmaError> {
    let quot = BlockQuotient::with_table(n, BlockKey::diagonal(weight), table, max_block)?;
    let m = expand_diagonal_in(&quot)?.matrix;
    let kernel = m.left_kernel();
    Ok(DiagBlockKernel {
        weight: weight.to_vec(),
        num_words: quot.num_words(),
        quotient_dim: quot.dim(),
        rank: m.nrows() - kernel.dim(),
        kernel,
    })
}

/// Kernel of `M` for every diagonal block of degree `r`, computed in parallel.
pub fn diag_relation_kernel(
    n: usize,
    r: usize,
    max_block: usize,
) -> Result<BTreeMap<Vec<usize>, DiagBlockKernel>, QmaError> {
    let table = deg2_table(n)?;
    let weights: Vec<Vec<usize>> = weight_blocks(n, r)?.into_keys().collect();
    let results: Vec<_> = weights
        .par_iter()
        .map(|w| diag_block_kernel(n, w, &table, max_block))
        .collect::<Result<_, _>>()?;
    Ok(results.into_iter().map(|k| (k.weight.clone(), k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::omega;

    fn s(x: &str) -> QScalar {
        x.parse().unwrap()
    }

    #[test]
    fn small_blocks() {
        let q = BlockQuotient::new(2, BlockKey::diagonal(&[1, 1])).unwrap();
        assert_eq!(q.num_words(), 4);
        assert_eq!(q.relations().dim(), 2);
        assert_eq!(q.dim(), 2);
        let single = BlockQuotient::new(2, BlockKey::diagonal(&[2, 0])).unwrap();
        assert_eq!(single.num_words(), 1);
        assert!(single.relations().is_zero());
        let e = expand_diagonal(1, &[2]).unwrap();
        assert_eq!(e.matrix.to_dense(), vec![vec![QScalar::one()]]);
    }

    #[test]
    fn frt2_rows_are_members() {
        // x^2_1 x^1_2 = x^1_2 x^2_1 and x^2_2 x^1_1 = x^1_1 x^2_2 + ω x^1_2 x^2_1
        let q = BlockQuotient::new(2, BlockKey::diagonal(&[1, 1])).unwrap();
        let w = |u: &[u8], l: &[u8]| FreeElt::word(FreeWord::new(u, l), 2);
        let r1 = w(&[2, 1], &[1, 2]).sub(&w(&[1, 2], &[2, 1])).unwrap();
        assert!(q.membership(&r1).unwrap());
        let r2 = w(&[2, 1], &[2, 1])
            .sub(&w(&[1, 2], &[1, 2]))
            .and_then(|x| x.axpy(&-omega(), &w(&[1, 2], &[2, 1])))
            .unwrap();
        assert!(q.membership(&r2).unwrap());
        assert!(!q.membership(&w(&[1, 2], &[1, 2])).unwrap());
        let other = FreeElt::diagonal(&[1, 1], 2);
        assert!(matches!(
            q.membership(&other),
            Err(QmaError::BlockMismatch { .. })
        ));
        assert_eq!(
            q.proportionality(&FreeElt::zero(q.key().clone()), &w(&[1, 2], &[1, 2]))
                .unwrap(),
            Some(QScalar::zero())
        );
    }

    #[test]
    fn relations_at_q_one_are_commutators() {
        let key = BlockKey::diagonal(&[1, 1]);
        let table = deg2_table(2).unwrap();
        let words = key.words();
        let pos = |w: &FreeWord| words.iter().position(|x| x == w).unwrap();
        let one = num_rational::BigRational::from_integer(1.into());
        let at_one: Vec<SparseVec> = block_relation_vectors(&table, &key)
            .into_iter()
            .map(|v| {
                SparseVec::from_pairs(v.iter().map(|(w, c)| {
                    (pos(w), QScalar::from_rational(c.eval_at(&one).unwrap()))
                }))
            })
            .collect();
        let commutators = words.iter().map(|w| {
            let swapped = FreeWord {
                upper: vec![w.upper[1], w.upper[0]],
                lower: vec![w.lower[1], w.lower[0]],
            };
            SparseVec::from_pairs([(pos(w), QScalar::one()), (pos(&swapped), s("-1"))])
        });
        assert_eq!(
            SubspaceBasis::from_rows(4, at_one),
            SubspaceBasis::from_rows(4, commutators)
        );
    }

    #[test]
    fn multilinear_expansion() {
        let e = expand_diagonal(3, &[1, 1, 1]).unwrap();
        assert_eq!(
            e.cols,
            ["123", "132", "213", "231", "312", "321"]
                .map(|l| format!("x^{{123}}_{{{l}}}"))
                .to_vec()
        );
        let expected = [
            ["1", "0", "0", "0", "0", "0"],
            ["1", "w", "0", "0", "0", "0"],
            ["1", "0", "w", "0", "0", "0"],
            ["1", "0", "w", "0", "0", "w"],
            ["1", "w", "0", "0", "0", "w"],
            ["1", "w", "w", "w^2", "w^2", "w^3 + w"],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(e.matrix.get(i, j), s(x), "({i}, {j})");
            }
        }
        // r! survivors whenever n >= r
        let q4 = BlockQuotient::new(4, BlockKey::diagonal(&[1, 1, 1, 0])).unwrap();
        assert_eq!(q4.dim(), 6);
    }

    #[test]
    fn golden_files_match() {
        for (g, e) in [
            (golden_systd().unwrap(), expand_diagonal(3, &[1, 1, 1]).unwrap()),
            (golden_weight21().unwrap(), expand_diagonal(2, &[2, 1]).unwrap()),
        ] {
            assert_eq!(g.matrix, e.matrix);
            let k = e.matrix.left_kernel();
            assert_eq!(k.dim(), 1);
            assert!(k.contains(&g.kernel).unwrap());
        }
    }

    #[test]
    fn weight_21_expansion() {
        let e = expand_diagonal(2, &[2, 1]).unwrap();
        assert_eq!(e.matrix.to_dense(), vec![
            vec![s("1"), s("0")],
            vec![s("1"), s("w")],
            vec![s("1"), s("(q^2 + 1)*w")],
        ]);
        let k = e.matrix.left_kernel();
        assert_eq!(k.dim(), 1);
        let expected = SparseVec::from_dense(&[s("q^2"), s("-(1 + q^2)"), s("1")]);
        assert!(k.contains(&expected).unwrap());
    }

    #[test]
    fn homotopic_expressions_agree() {
        let q = BlockQuotient::new(3, BlockKey::diagonal(&[1, 1, 1])).unwrap();
        let lhs = FreeElt::word(FreeWord::new(&[1, 3, 2], &[3, 1, 2]), 3).scale(&omega());
        let d = |l: &[u8]| FreeElt::diagonal(l, 3);
        let rhs = d(&[3, 1, 2]).sub(&d(&[1, 3, 2])).unwrap();
        assert_eq!(q.reduce(&lhs).unwrap(), q.reduce(&rhs).unwrap());
    }

    #[test]
    fn reduce_is_idempotent() {
        let q = BlockQuotient::new(2, BlockKey::diagonal(&[2, 1])).unwrap();
        for w in q.key().words() {
            let v = FreeElt::word(w, 2);
            let r = q.reduce(&v).unwrap();
            assert_eq!(q.reduce(&r).unwrap(), r);
            assert!(q.membership(&v.sub(&r).unwrap()).unwrap());
        }
    }

    #[test]
    fn degree_three_dimensions() {
        for (d, expect) in [(2, 2), (3, 7)] {
            let k = diag_relation_kernel(d, 3, DEFAULT_MAX_BLOCK).unwrap();
            let total: usize = k.values().map(|b| b.kernel.dim()).sum();
            assert_eq!(total, expect);
        }
    }
}
