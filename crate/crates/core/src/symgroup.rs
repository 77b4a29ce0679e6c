//! Permutations in one-line notation, reduced words, multi-indices and
//! weight-block enumeration.
//!
//! Composition uses the right-action convention `compose(a, b)[i] = b[a[i]]`,
//! under which the word `312` is `s1 s2` and its inverse `231` is `s2 s1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest rank enumerated unless a caller raises the bound explicitly.
pub const DEFAULT_MAX_RANK: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("not a permutation word: {0:?}")]
    NotAPermutation(String),
    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: usize, rank: usize },
}

/// A permutation of `{1..r}` stored as its one-line word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(word: Vec<u8>) -> Result<Self, SymError> {
        let r = word.len();
        let mut seen = vec![false; r];
        for &x in &word {
            let k = x as usize;
            if k == 0 || k > r || seen[k - 1] {
                return Err(SymError::NotAPermutation(format!("{word:?}")));
            }
            seen[k - 1] = true;
        }
        Ok(Perm(word))
    }

    pub fn identity(r: usize) -> Self {
        Perm((1..=r as u8).collect())
    }

    /// The adjacent transposition `s_i` (1-based) in `S_r`.
    pub fn s(i: usize, r: usize) -> Result<Self, SymError> {
        if i == 0 || i >= r {
            return Err(SymError::BadGenerator { index: i, rank: r });
        }
        let mut p = Self::identity(r);
        p.0.swap(i - 1, i);
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    pub fn compose(&self, other: &Self) -> Result<Self, SymError> {
        if self.rank() != other.rank() {
            return Err(SymError::SizeMismatch(self.rank(), other.rank()));
        }
        Ok(Perm(self.0.iter().map(|&x| other.0[x as usize - 1]).collect()))
    }

    pub fn inverse(&self) -> Self {
        let mut w = vec![0u8; self.rank()];
        for (i, &x) in self.0.iter().enumerate() {
            w[x as usize - 1] = i as u8 + 1;
        }
        Perm(w)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.0;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&y| y < w[i]).count())
            .sum()
    }

    pub fn sign(&self) -> i64 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `self * s_i`: swaps the values `i` and `i + 1`.
    pub fn mul_s_right(&self, i: usize) -> Self {
        let (a, b) = (i as u8, i as u8 + 1);
        Perm(
            self.0
                .iter()
                .map(|&x| match x {
                    x if x == a => b,
                    x if x == b => a,
                    x => x,
                })
                .collect(),
        )
    }

    /// `s_i * self`: swaps the positions `i` and `i + 1`.
    pub fn mul_s_left(&self, i: usize) -> Self {
        let mut w = self.0.clone();
        w.swap(i - 1, i);
        Perm(w)
    }

    /// Lexicographically least reduced word `(i_1, .., i_l)` with
    /// `self = s_{i_1} ... s_{i_l}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.0.clone();
        let mut out = Vec::with_capacity(self.length());
        while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            out.push(i + 1);
        }
        out
    }

    pub fn from_reduced_word(word: &[usize], r: usize) -> Result<Self, SymError> {
        let mut p = Self::identity(r);
        for &i in word {
            p = p.compose(&Self::s(i, r)?)?;
        }
        Ok(p)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().any(|&x| x > 9) {
            let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
            return f.write_str(&parts.join(","));
        }
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SymError::NotAPermutation(s.to_string());
        let word: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        Perm::new(word).map_err(|_| bad())
    }
}

impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A word of length `r` over the alphabet `{1..d}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Letter multiplicities over `{1..d}`.
    pub fn weight(&self, d: usize) -> Vec<usize> {
        let mut w = vec![0; d];
        for &x in &self.0 {
            w[x as usize - 1] += 1;
        }
        w
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.0.windows(2).all(|p| p[0] <= p[1])
    }

    /// Relabels by `1..r` keeping relative order, ties broken left to right.
    pub fn standardize(&self) -> Perm {
        let mut idx: Vec<usize> = (0..self.0.len()).collect();
        idx.sort_by_key(|&i| (self.0[i], i));
        let mut w = vec![0u8; self.0.len()];
        for (rank, &i) in idx.iter().enumerate() {
            w[i] = rank as u8 + 1;
        }
        Perm(w)
    }
}

impl From<&Perm> for MultiIndex {
    fn from(p: &Perm) -> Self {
        MultiIndex(p.0.clone())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| SymError::NotAPermutation(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MultiIndex)
    }
}

fn check_bound(what: &'static str, value: usize, bound: usize) -> Result<(), SymError> {
    if value > bound {
        return Err(SymError::BoundExceeded { what, value, bound });
    }
    Ok(())
}

/// All of `S_r` in lexicographic order of one-line words.
pub fn enumerate_perms(r: usize) -> Result<Vec<Perm>, SymError> {
    check_bound("r", r, DEFAULT_MAX_RANK)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    let mut used = vec![false; r];
    fn go(r: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == r {
            out.push(Perm(cur.clone()));
            return;
        }
        for k in 0..r {
            if !used[k] {
                used[k] = true;
                cur.push(k as u8 + 1);
                go(r, cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    go(r, &mut cur, &mut used, &mut out);
    Ok(out)
}

/// All `d^r` words of length `r` over `{1..d}`, lexicographically.
pub fn enumerate_multiindices(d: usize, r: usize) -> Result<Vec<MultiIndex>, SymError> {
    check_bound("r", r, DEFAULT_MAX_RANK)?;
    let mut out = vec![MultiIndex(Vec::with_capacity(r))];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|m| {
                (1..=d as u8).map(move |x| {
                    let mut v = m.0.clone();
                    v.push(x);
                    MultiIndex(v)
                })
            })
            .collect();
    }
    Ok(out)
}

/// Multi-indices grouped by weight vector; each block is lexicographically sorted.
pub fn weight_blocks(d: usize, r: usize) -> Result<BTreeMap<Vec<usize>, Vec<MultiIndex>>, SymError> {
    let mut blocks: BTreeMap<Vec<usize>, Vec<MultiIndex>> = BTreeMap::new();
    for m in enumerate_multiindices(d, r)? {
        blocks.entry(m.weight(d)).or_default().push(m);
    }
    Ok(blocks)
}

/// Distinct rearrangements of a multiset, lexicographically sorted.
pub fn arrangements(letters: &[u8]) -> Vec<MultiIndex> {
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    let mut out = vec![MultiIndex(sorted.clone())];
    // next-permutation walk
    loop {
        let w = &mut sorted;
        let Some(i) = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else {
            break;
        };
        let j = (i + 1..w.len()).rev().find(|&j| w[j] > w[i]).unwrap();
        w.swap(i, j);
        w[i + 1..].reverse();
        out.push(MultiIndex(w.clone()));
    }
    out
}

/// The sorted word with the given weight vector.
pub fn sorted_word(weight: &[usize]) -> Vec<u8> {
    weight
        .iter()
        .enumerate()
        .flat_map(|(k, &m)| std::iter::repeat_n(k as u8 + 1, m))
        .collect()
}
