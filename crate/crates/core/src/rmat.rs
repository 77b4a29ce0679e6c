//! The Drinfeld-Jimbo `R̂` on `V ⊗ V`, the representation
//! `π: H_r(q) → End(V^⊗r)` and the explicit blocks of `π(e^±_{21})`.
//!
//! Basis words of `V^⊗r` are indexed lexicographically: the word
//! `(a_1, .., a_r)` over `{1..n}` sits at `Σ (a_k - 1) n^(r-k)`. Matrix rows
//! carry the upper index, columns the lower one.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{omega, QScalar};
use crate::hecke::{e21, HeckeElt, HeckeError, Sign};
use crate::linalgq::{LinalgError, QMatrix, SparseVec, SubspaceBasis};
use crate::symgroup::{arrangements, MultiIndex};

/// Largest `n^r` for which `π` is built.
pub const MAX_PI_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RmatError {
    #[error("n^r = {value} exceeds the bound {bound}")]
    BoundExceeded { value: usize, bound: usize },
    #[error("{block}: entry ({row}, {col}) expected {expected}, got {got}")]
    BlockMismatch {
        block: String,
        row: String,
        col: String,
        expected: String,
        got: String,
    },
    #[error("R-matrix relation fails: {0}")]
    RelationFailure(String),
    #[error("golden data: {0}")]
    Golden(String),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Where the `ω` term of `R̂` is placed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhatReading {
    /// `ω` on the diagonal entry of the word `(j, i)`, `i < j`.
    DescendingDiagonal,
    /// `ω` on the diagonal entry of the word `(i, j)`, `i < j`.
    AscendingDiagonal,
    /// `ω` mapping `v_j ⊗ v_j` to `v_i ⊗ v_i` (the matrix units read literally).
    Literal,
}

impl RhatReading {
    pub const ALL: [RhatReading; 3] = [
        RhatReading::DescendingDiagonal,
        RhatReading::AscendingDiagonal,
        RhatReading::Literal,
    ];
}

impl fmt::Display for RhatReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhatReading::DescendingDiagonal => "descending-diagonal",
            RhatReading::AscendingDiagonal => "ascending-diagonal",
            RhatReading::Literal => "literal",
        })
    }
}

pub fn word_index(word: &[u8], n: usize) -> usize {
    word.iter().fold(0, |acc, &a| acc * n + (a as usize - 1))
}

pub fn index_word(mut idx: usize, n: usize, r: usize) -> Vec<u8> {
    let mut w = vec![0u8; r];
    for k in (0..r).rev() {
        w[k] = (idx % n) as u8 + 1;
        idx /= n;
    }
    w
}

/// `R̂` under a given reading of the matrix units.
pub fn build_rhat_with(n: usize, reading: RhatReading) -> QMatrix {
    let mut m = QMatrix::zeros(n * n, n * n);
    let w = omega();
    let at = |i: usize, j: usize| (i - 1) * n + (j - 1);
    for i in 1..=n {
        for j in 1..=n {
            let v = if i == j { QScalar::q() } else { QScalar::one() };
            m.set(at(i, j), at(j, i), v);
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let (row, col) = match reading {
                RhatReading::DescendingDiagonal => (at(j, i), at(j, i)),
                RhatReading::AscendingDiagonal => (at(i, j), at(i, j)),
                RhatReading::Literal => (at(i, i), at(j, j)),
            };
            let v = m.get(row, col) + &w;
            m.set(row, col, v);
        }
    }
    m
}

/// `(R̂ - q)(R̂ + q^-1) = 0`.
pub fn satisfies_quadratic(rhat: &QMatrix) -> bool {
    let n2 = rhat.nrows();
    let a = rhat.sub(&QMatrix::scalar(n2, &QScalar::q())).expect("square");
    let b = rhat
        .add(&QMatrix::scalar(n2, &QScalar::q_pow(-1)))
        .expect("square");
    a.mul(&b).expect("square").is_zero()
}

/// `R̂_12 R̂_23 R̂_12 = R̂_23 R̂_12 R̂_23` on `V^⊗3`.
pub fn satisfies_braid(rhat: &QMatrix, n: usize) -> bool {
    let id = QMatrix::identity(n);
    let r12 = rhat.kron(&id);
    let r23 = id.kron(rhat);
    let lhs = r12.mul(&r23).and_then(|x| x.mul(&r12)).expect("square");
    let rhs = r23.mul(&r12).and_then(|x| x.mul(&r23)).expect("square");
    lhs == rhs
}

/// Coefficients of the degree-2 relation `Σ R^{ab}_{cd} x^c_e x^d_f - Σ x^a_c x^b_d R^{cd}_{ef}`,
/// keyed by `(upper word, lower word)`.
pub fn deg2_relation(
    rhat: &QMatrix,
    n: usize,
    (a, b): (u8, u8),
    (e, f): (u8, u8),
) -> BTreeMap<([u8; 2], [u8; 2]), QScalar> {
    let mut out: BTreeMap<([u8; 2], [u8; 2]), QScalar> = BTreeMap::new();
    let row = word_index(&[a, b], n);
    for (col, v) in rhat.row(row).iter() {
        let cd = index_word(col, n, 2);
        *out.entry(([cd[0], cd[1]], [e, f])).or_default() += v;
    }
    let col = word_index(&[e, f], n);
    for r in 0..rhat.nrows() {
        let v = rhat.get(r, col);
        if !v.is_zero() {
            let cd = index_word(r, n, 2);
            *out.entry(([a, b], [cd[0], cd[1]])).or_default() -= &v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Checks `x^j_k x^i_k ≡ q x^i_k x^j_k` (`i < j`) modulo the degree-2 relations.
pub fn reproduces_frt2(rhat: &QMatrix, n: usize) -> bool {
    for i in 1..=n as u8 {
        for j in i + 1..=n as u8 {
            for k in 1..=n as u8 {
                let words = [([i, j], [k, k]), ([j, i], [k, k])];
                let pos = |w: &([u8; 2], [u8; 2])| words.iter().position(|x| x == w);
                let mut rels = Vec::new();
                for ab in [(i, j), (j, i)] {
                    let rel = deg2_relation(rhat, n, ab, (k, k));
                    let mut pairs = Vec::new();
                    for (w, v) in rel {
                        match pos(&w) {
                            Some(p) => pairs.push((p, v)),
                            None => return false,
                        }
                    }
                    rels.push(SparseVec::from_pairs(pairs));
                }
                let span = SubspaceBasis::from_rows(2, rels);
                let target = SparseVec::from_pairs([(1, QScalar::one()), (0, -QScalar::q())]);
                if !span.contains(&target).expect("ambient 2") {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct ReadingReport {
    pub reading: RhatReading,
    pub quadratic: bool,
    pub braid: bool,
    pub frt2: bool,
}

impl ReadingReport {
    pub fn accepted(&self) -> bool {
        self.quadratic && self.braid && self.frt2
    }
}

/// Tests every reading of `R̂` at dimension `n`.
pub fn reading_reports(n: usize) -> Vec<ReadingReport> {
    RhatReading::ALL
        .iter()
        .map(|&reading| {
            let m = build_rhat_with(n, reading);
            ReadingReport {
                reading,
                quadratic: satisfies_quadratic(&m),
                braid: satisfies_braid(&m, n),
                frt2: reproduces_frt2(&m, n),
            }
        })
        .collect()
}

/// The first reading passing the quadratic, braid and degree-2 FRT tests.
pub fn select_reading(n: usize) -> Result<RhatReading, RmatError> {
    reading_reports(n.max(2))
        .into_iter()
        .find(ReadingReport::accepted)
        .map(|r| r.reading)
        .ok_or_else(|| RmatError::RelationFailure("no reading of R-hat passes".into()))
}

/// `R̂` on `V ⊗ V`, `dim V = n`, with the quadratic and braid relations asserted.
pub fn build_rhat(n: usize) -> Result<QMatrix, RmatError> {
    let m = build_rhat_with(n, RhatReading::DescendingDiagonal);
    if !satisfies_quadratic(&m) {
        return Err(RmatError::RelationFailure(format!("quadratic, n = {n}")));
    }
    if !satisfies_braid(&m, n) {
        return Err(RmatError::RelationFailure(format!("braid, n = {n}")));
    }
    Ok(m)
}

fn check_pi_bound(n: usize, r: usize) -> Result<usize, RmatError> {
    let dim = (n as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if dim > MAX_PI_DIM as u128 {
        return Err(RmatError::BoundExceeded {
            value: dim.min(usize::MAX as u128) as usize,
            bound: MAX_PI_DIM,
        });
    }
    Ok(dim as usize)
}

/// `(R̂)_{i,i+1}` acting on `V^⊗r`.
pub fn rhat_at(rhat: &QMatrix, n: usize, r: usize, i: usize) -> Result<QMatrix, RmatError> {
    check_pi_bound(n, r)?;
    let left = QMatrix::identity(n.pow(i as u32 - 1));
    let right = QMatrix::identity(n.pow((r - i - 1) as u32));
    Ok(left.kron(rhat).kron(&right))
}

/// `π(x)` on `V^⊗r`, `T_{s_i} ↦ (R̂)_{i,i+1}`.
pub fn pi(x: &HeckeElt, n: usize, r: usize) -> Result<QMatrix, RmatError> {
    if x.rank() != r {
        return Err(HeckeError::SizeMismatch(r, x.rank()).into());
    }
    let dim = check_pi_bound(n, r)?;
    let rhat = build_rhat(n)?;
    let gens: Vec<QMatrix> = (1..r)
        .map(|i| rhat_at(&rhat, n, r, i))
        .collect::<Result<_, _>>()?;
    let mut out = QMatrix::zeros(dim, dim);
    for (sigma, c) in x.terms() {
        let mut m = QMatrix::identity(dim);
        for i in sigma.reduced_word() {
            m = m.mul(&gens[i - 1])?;
        }
        out = out.axpy(c, &m)?;
    }
    Ok(out)
}

/// True when every nonzero entry connects words with equal letter multisets.
pub fn weight_preserving(m: &QMatrix, n: usize, r: usize) -> bool {
    (0..m.nrows()).all(|i| {
        let mut a = index_word(i, n, r);
        a.sort_unstable();
        m.row(i).iter().all(|(j, _)| {
            let mut b = index_word(j, n, r);
            b.sort_unstable();
            a == b
        })
    })
}

pub fn block_of(m: &QMatrix, n: usize, words: &[Vec<u8>]) -> QMatrix {
    let idx: Vec<usize> = words.iter().map(|w| word_index(w, n)).collect();
    m.submatrix(&idx, &idx)
}

/// The 6×6 block on the arrangements of `123` and the 3×3 block on those of `112`.
pub fn appendix_blocks(sign: Sign) -> Result<(QMatrix, QMatrix), RmatError> {
    let p = pi(&e21(sign), 3, 3)?;
    let six: Vec<Vec<u8>> = arrangements(&[1, 2, 3]).into_iter().map(|m| m.0).collect();
    let three: Vec<Vec<u8>> = arrangements(&[1, 1, 2]).into_iter().map(|m| m.0).collect();
    Ok((block_of(&p, 3, &six), block_of(&p, 3, &three)))
}

/// Every 3×3 block of `π(e^±_{21})` on two distinct letters, keyed by its sorted word.
pub fn two_letter_blocks(sign: Sign) -> Result<Vec<(Vec<u8>, QMatrix)>, RmatError> {
    let p = pi(&e21(sign), 3, 3)?;
    let mut out = Vec::new();
    for a in 1..=3u8 {
        for b in 1..=3u8 {
            if a == b {
                continue;
            }
            let mut letters = vec![a, a, b];
            letters.sort_unstable();
            if out.iter().any(|(k, _): &(Vec<u8>, QMatrix)| *k == letters) {
                continue;
            }
            let words: Vec<Vec<u8>> = arrangements(&letters).into_iter().map(|m| m.0).collect();
            out.push((letters, block_of(&p, 3, &words)));
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

#[derive(Deserialize)]
struct GoldenBlocks {
    block6: Vec<Vec<String>>,
    block3: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct GoldenAppendix {
    plus: GoldenBlocks,
    minus: GoldenBlocks,
}

const APPENDIX_JSON: &str = include_str!("../data/appendix_blocks.json");

fn parse_matrix(rows: &[Vec<String>]) -> Result<QMatrix, RmatError> {
    let dense = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| s.parse::<QScalar>().map_err(|e| RmatError::Golden(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMatrix::from_dense(&dense)?)
}

/// The transcribed 6×6 and 3×3 blocks.
pub fn golden_appendix(sign: Sign) -> Result<(QMatrix, QMatrix), RmatError> {
    let g: GoldenAppendix =
        serde_json::from_str(APPENDIX_JSON).map_err(|e| RmatError::Golden(e.to_string()))?;
    let b = match sign {
        Sign::Plus => g.plus,
        Sign::Minus => g.minus,
    };
    Ok((parse_matrix(&b.block6)?, parse_matrix(&b.block3)?))
}

/// Entrywise comparison; returns the number of entries compared.
pub fn compare_block(
    name: &str,
    labels: &[String],
    computed: &QMatrix,
    expected: &QMatrix,
) -> Result<usize, RmatError> {
    for i in 0..expected.nrows() {
        for j in 0..expected.ncols() {
            let (e, c) = (expected.get(i, j), computed.get(i, j));
            if e != c {
                return Err(RmatError::BlockMismatch {
                    block: name.to_string(),
                    row: labels[i].clone(),
                    col: labels[j].clone(),
                    expected: e.to_string(),
                    got: c.to_string(),
                });
            }
        }
    }
    Ok(expected.nrows() * expected.ncols())
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixComparison {
    pub sign: Sign,
    pub entries_6x6: usize,
    pub entries_3x3: usize,
    pub blocks_3x3: usize,
}

impl AppendixComparison {
    pub fn total(&self) -> usize {
        self.entries_6x6 + self.entries_3x3
    }
}

/// Compares `π(e^±_{21})` against the transcribed blocks: the 6×6 block and all
/// six two-letter 3×3 blocks.
pub fn compare_appendix(sign: Sign) -> Result<AppendixComparison, RmatError> {
    let (six, _) = appendix_blocks(sign)?;
    let (g6, g3) = golden_appendix(sign)?;
    let labels6: Vec<String> = arrangements(&[1, 2, 3])
        .iter()
        .map(|m| m.letters().iter().map(u8::to_string).collect())
        .collect();
    let entries_6x6 = compare_block("6x6", &labels6, &six, &g6)?;
    let mut entries_3x3 = 0;
    let blocks = two_letter_blocks(sign)?;
    for (letters, m) in &blocks {
        let labels: Vec<String> = arrangements(letters)
            .iter()
            .map(|w: &MultiIndex| w.letters().iter().map(u8::to_string).collect())
            .collect();
        let name = format!("3x3[{}]", labels[0]);
        entries_3x3 += compare_block(&name, &labels, m, &g3)?;
    }
    Ok(AppendixComparison {
        sign,
        entries_6x6,
        entries_3x3,
        blocks_3x3: blocks.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::HeckeElt;

    fn s(x: &str) -> QScalar {
        x.parse().unwrap()
    }

    #[test]
    fn rhat_small() {
        let r1 = build_rhat(1).unwrap();
        assert_eq!(r1.to_dense(), vec![vec![QScalar::q()]]);
        let r2 = build_rhat(2).unwrap();
        let golden: serde_json::Value =
            serde_json::from_str(include_str!("../data/rhat_n2.json")).unwrap();
        let rows: Vec<Vec<String>> = serde_json::from_value(golden["rows"].clone()).unwrap();
        assert_eq!(r2, parse_matrix(&rows).unwrap());
    }

    #[test]
    fn reading_selection() {
        for n in 2..=3 {
            let reps = reading_reports(n);
            let desc = &reps[0];
            assert!(desc.quadratic && desc.braid && desc.frt2);
            let asc = &reps[1];
            assert!(asc.quadratic && asc.braid && !asc.frt2);
            assert!(!reps[2].quadratic);
            assert_eq!(select_reading(n).unwrap(), RhatReading::DescendingDiagonal);
        }
    }

    #[test]
    fn hecke_relations_hold() {
        for n in 2..=4 {
            let m = build_rhat(n).unwrap();
            assert!(satisfies_quadratic(&m));
            assert!(satisfies_braid(&m, n));
        }
    }

    #[test]
    fn deg2_relation_example() {
        // x^2_1 x^1_1 = q x^1_1 x^2_1 comes from (a, b) = (2, 1), (e, f) = (1, 1)
        let m = build_rhat(2).unwrap();
        let rel = deg2_relation(&m, 2, (1, 2), (1, 1));
        assert_eq!(rel.len(), 2);
        assert_eq!(rel[&([2, 1], [1, 1])], QScalar::one());
        assert_eq!(rel[&([1, 2], [1, 1])], -QScalar::q());
    }

    #[test]
    fn pi_basics() {
        let id = pi(&HeckeElt::one(3), 2, 3).unwrap();
        assert_eq!(id, QMatrix::identity(8));
        for n in 2..=3 {
            let a = pi(&HeckeElt::from_word(&[1, 2, 1], 3).unwrap(), n, 3).unwrap();
            let b = pi(&HeckeElt::from_word(&[2, 1, 2], 3).unwrap(), n, 3).unwrap();
            assert_eq!(a, b);
        }
        assert!(matches!(
            pi(&HeckeElt::one(7), 4, 7),
            Err(RmatError::BoundExceeded { .. })
        ));
        let rhat = build_rhat(2).unwrap();
        let r12 = rhat_at(&rhat, 2, 4, 1).unwrap();
        let r34 = rhat_at(&rhat, 2, 4, 3).unwrap();
        assert_eq!(r12.mul(&r34).unwrap(), r34.mul(&r12).unwrap());
    }

    #[test]
    fn idempotent_images() {
        let p = pi(&e21(Sign::Plus), 3, 3).unwrap();
        let m = pi(&e21(Sign::Minus), 3, 3).unwrap();
        assert_eq!(p.mul(&p).unwrap(), p);
        assert!(p.mul(&m).unwrap().is_zero());
        assert!(weight_preserving(&p, 3, 3) && weight_preserving(&m, 3, 3));
    }

    #[test]
    fn appendix_entries() {
        for sign in [Sign::Plus, Sign::Minus] {
            let (six, three) = appendix_blocks(sign).unwrap();
            assert_eq!(six.get(0, 0), s("1/[3]"));
            let pm = if sign == Sign::Plus { "1" } else { "-1" };
            assert_eq!(six.get(0, 5), s(&format!("{pm}/[3]")));
            assert_eq!(three.get(0, 0), s(&format!("q/2/(q + q^-1 + {pm})")));
            let cmp = compare_appendix(sign).unwrap();
            assert_eq!(cmp.total(), 90);
            assert_eq!(cmp.blocks_3x3, 6);
        }
    }

    #[test]
    fn mismatch_reports_first_entry() {
        let (six, _) = appendix_blocks(Sign::Plus).unwrap();
        let (g6, _) = golden_appendix(Sign::Minus).unwrap();
        let labels: Vec<String> = ["123", "132", "213", "231", "312", "321"].map(String::from).to_vec();
        match compare_block("6x6", &labels, &six, &g6) {
            Err(RmatError::BlockMismatch { row, col, .. }) => {
                assert_eq!((row.as_str(), col.as_str()), ("123", "132"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
