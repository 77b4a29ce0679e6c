//! Exact sparse linear algebra over Q(q).
//!
//! Vectors are sorted `(column, value)` lists. A [`SubspaceBasis`] always holds
//! the reduced row echelon form of its span (pivots equal to 1, pivot columns
//! cleared in every other row, rows ordered by pivot), so two subspaces are
//! equal exactly when their bases are equal.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactq::QScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

fn check_dim(expected: usize, got: usize) -> Result<(), LinalgError> {
    if expected != got {
        return Err(LinalgError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Sparse vector: strictly increasing columns, no zero values.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SparseVec {
    entries: Vec<(usize, QScalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from arbitrary `(column, value)` pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, QScalar)>>(pairs: I) -> Self {
        let mut m: BTreeMap<usize, QScalar> = BTreeMap::new();
        for (c, v) in pairs {
            *m.entry(c).or_default() += &v;
        }
        Self {
            entries: m.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_dense(values: &[QScalar]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect(),
        }
    }

    pub fn unit(col: usize) -> Self {
        Self {
            entries: vec![(col, QScalar::one())],
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<QScalar> {
        let mut out = vec![QScalar::zero(); dim];
        for (c, v) in &self.entries {
            out[*c] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, QScalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &QScalar)> {
        self.entries.iter().map(|(c, v)| (*c, v))
    }

    pub fn get(&self, col: usize) -> QScalar {
        match self.entries.binary_search_by_key(&col, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => QScalar::zero(),
        }
    }

    /// Leading (smallest) column.
    pub fn pivot(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    pub fn max_col(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &QScalar, other: &Self) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&QScalar::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&QScalar::from_int(-1), other)
    }

    pub fn dot(&self, other: &Self) -> QScalar {
        let (mut i, mut j) = (0, 0);
        let mut acc = QScalar::zero();
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (&self.entries[i], &other.entries[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &(&a.1 * &b.1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Renames columns; `f` must be injective on the support.
    pub fn map_cols(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_pairs(self.entries.iter().map(|(c, v)| (f(*c), v.clone())))
    }

    /// Scales so the pivot entry is 1.
    pub fn normalized(&self) -> Self {
        match self.entries.first() {
            Some((_, p)) if !p.is_one() => self.scale(&p.inv().expect("nonzero pivot")),
            _ => self.clone(),
        }
    }
}

/// Row-sparse matrix over Q(q).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &QScalar::one())
    }

    pub fn scalar(n: usize, c: &QScalar) -> Self {
        let mut m = Self::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.data[i] = SparseVec {
                    entries: vec![(i, c.clone())],
                };
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self, LinalgError> {
        for r in &rows {
            if let Some(c) = r.max_col() {
                if c >= cols {
                    return Err(LinalgError::DimensionMismatch {
                        expected: cols,
                        got: c + 1,
                    });
                }
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_dense(rows: &[Vec<QScalar>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        for r in rows {
            check_dim(cols, r.len())?;
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<QScalar>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> QScalar {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: QScalar) {
        let row = &mut self.data[i].entries;
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut buckets: Vec<Vec<(usize, QScalar)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r.iter() {
                buckets[j].push((i, v.clone()));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data: buckets
                .into_iter()
                .map(|entries| SparseVec { entries })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.cols, other.rows)?;
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, QScalar> = BTreeMap::new();
                for (k, a) in r.iter() {
                    for (j, b) in other.data[k].iter() {
                        *acc.entry(j).or_default() += &(a * b);
                    }
                }
                SparseVec {
                    entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
                }
            })
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        if let Some(c) = v.max_col() {
            if c >= self.cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.cols,
                    got: c + 1,
                });
            }
        }
        Ok(SparseVec::from_pairs(
            self.data
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.dot(v)))
                .filter(|(_, x)| !x.is_zero()),
        ))
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        let mut acc = SparseVec::new();
        for (i, c) in v.iter() {
            if i >= self.rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.rows,
                    got: i + 1,
                });
            }
            acc = acc.axpy(c, &self.data[i]);
        }
        Ok(acc)
    }

    pub fn axpy(&self, c: &QScalar, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.axpy(c, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.axpy(&QScalar::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.axpy(&QScalar::from_int(-1), other)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// Kronecker product, `(A ⊗ B)[(i, k), (j, l)] = A[i, j] B[k, l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for ra in &self.data {
            for rb in &other.data {
                let mut entries = Vec::with_capacity(ra.nnz() * rb.nnz());
                for (j, a) in ra.iter() {
                    for (l, b) in rb.iter() {
                        entries.push((j * other.cols + l, a * b));
                    }
                }
                data.push(SparseVec { entries });
            }
        }
        Self {
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            data,
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let data = rows
            .iter()
            .map(|&i| {
                SparseVec::from_pairs(
                    self.data[i]
                        .iter()
                        .filter_map(|(j, v)| pos.get(&j).map(|&k| (k, v.clone()))),
                )
            })
            .collect();
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn rank(&self) -> usize {
        SubspaceBasis::from_rows(self.cols, self.data.iter().cloned()).dim()
    }

    /// Right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> SubspaceBasis {
        SubspaceBasis::from_rows(self.cols, self.data.iter().cloned()).orthogonal_complement()
    }

    /// Left kernel `{v : v M = 0}` (dependencies among the rows).
    pub fn left_kernel(&self) -> SubspaceBasis {
        self.transpose().kernel()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_dense()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

/// Canonical RREF basis of a subspace of an `ambient`-dimensional coordinate space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubspaceBasis {
    ambient: usize,
    rows: Vec<SparseVec>,
}

/// Semi-echelon accumulator: rows keyed by pivot, pivot entries 1, but other
/// rows are not yet cleared above pivots.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ambient: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Self {
            ambient,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Residual of `v` after eliminating every pivot column of the basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut from = 0;
        loop {
            let hit = v
                .entries
                .iter()
                .find(|(c, _)| *c >= from && self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = hit else {
                return v;
            };
            v = v.axpy(&-x, &self.rows[&c]);
            from = c + 1;
        }
    }

    /// Inserts `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.pivot() {
            None => false,
            Some(p) => {
                self.rows.insert(p, r.normalized());
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn into_basis(self) -> SubspaceBasis {
        // back substitution, from the last pivot upward
        let mut rows: Vec<(usize, SparseVec)> = self.rows.into_iter().collect();
        for k in (0..rows.len()).rev() {
            let (pk, rk) = rows[k].clone();
            for (_, r) in rows.iter_mut().take(k) {
                let x = r.get(pk);
                if !x.is_zero() {
                    *r = r.axpy(&-x, &rk);
                }
            }
        }
        SubspaceBasis {
            ambient: self.ambient,
            rows: rows.into_iter().map(|(_, r)| r).collect(),
        }
    }
}

impl SubspaceBasis {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            rows: (0..ambient).map(SparseVec::unit).collect(),
        }
    }

    /// RREF of the span of `rows`.
    pub fn from_rows<I: IntoIterator<Item = SparseVec>>(ambient: usize, rows: I) -> Self {
        let mut e = Echelon::new(ambient);
        for r in rows {
            debug_assert!(r.max_col().is_none_or(|c| c < ambient));
            e.insert(&r);
        }
        e.into_basis()
    }

    pub fn try_from_rows<I: IntoIterator<Item = SparseVec>>(
        ambient: usize,
        rows: I,
    ) -> Result<Self, LinalgError> {
        let rows: Vec<SparseVec> = rows.into_iter().collect();
        for r in &rows {
            if let Some(c) = r.max_col() {
                if c >= ambient {
                    return Err(LinalgError::DimensionMismatch {
                        expected: ambient,
                        got: c + 1,
                    });
                }
            }
        }
        Ok(Self::from_rows(ambient, rows))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().filter_map(SparseVec::pivot).collect()
    }

    fn echelon(&self) -> Echelon {
        Echelon {
            ambient: self.ambient,
            rows: self
                .rows
                .iter()
                .map(|r| (r.pivot().unwrap(), r.clone()))
                .collect(),
        }
    }

    /// Canonical representative of `v` modulo the subspace (pivot columns cleared).
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        if let Some(c) = v.max_col() {
            if c >= self.ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.ambient,
                    got: c + 1,
                });
            }
        }
        Ok(self.echelon().reduce(v))
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.is_zero())
    }

    pub fn contains_subspace(&self, other: &Self) -> Result<bool, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let e = self.echelon();
        Ok(other.rows.iter().all(|r| e.contains(r)))
    }

    pub fn subspace_eq(&self, other: &Self) -> Result<bool, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        Ok(self == other)
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let mut e = self.echelon();
        for r in &other.rows {
            e.insert(r);
        }
        Ok(e.into_basis())
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let n = self.ambient;
        let mut e = Echelon::new(2 * n);
        for r in &self.rows {
            e.insert(&SparseVec::from_pairs(
                r.iter()
                    .map(|(c, v)| (c, v.clone()))
                    .chain(r.iter().map(|(c, v)| (c + n, v.clone()))),
            ));
        }
        for r in &other.rows {
            e.insert(r);
        }
        let b = e.into_basis();
        Ok(Self::from_rows(
            n,
            b.rows
                .iter()
                .filter(|r| r.pivot().unwrap() >= n)
                .map(|r| r.map_cols(|c| c - n)),
        ))
    }

    /// `{v : <v, r> = 0 for every basis row r}`, i.e. the right kernel of the basis matrix.
    pub fn orthogonal_complement(&self) -> Self {
        let pivots = self.pivots();
        let is_pivot: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for f in (0..self.ambient).filter(|c| !is_pivot.contains(c)) {
            let mut pairs = vec![(f, QScalar::one())];
            for (p, r) in pivots.iter().zip(&self.rows) {
                let x = r.get(f);
                if !x.is_zero() {
                    pairs.push((*p, -x));
                }
            }
            out.push(SparseVec::from_pairs(pairs));
        }
        Self::from_rows(self.ambient, out)
    }

    /// Scalar `c` with `v - c w` in the subspace, if it exists. A `v` inside the
    /// subspace gives `Some(0)`.
    pub fn proportionality(
        &self,
        v: &SparseVec,
        w: &SparseVec,
    ) -> Result<Option<QScalar>, LinalgError> {
        let rv = self.reduce(v)?;
        let rw = self.reduce(w)?;
        if rv.is_zero() {
            return Ok(Some(QScalar::zero()));
        }
        let Some(p) = rw.pivot() else {
            return Ok(None);
        };
        let c = rv.get(p) / rw.get(p);
        Ok(rv.axpy(&-&c, &rw).is_zero().then_some(c))
    }

    /// Basis rows as the rows of a matrix.
    pub fn to_matrix(&self) -> QMatrix {
        QMatrix {
            rows: self.rows.len(),
            cols: self.ambient,
            data: self.rows.clone(),
        }
    }

    /// Some vector of `self` outside `other`, if any.
    pub fn witness_outside(&self, other: &Self) -> Result<Option<SparseVec>, LinalgError> {
        check_dim(self.ambient, other.ambient)?;
        let e = other.echelon();
        Ok(self.rows.iter().find(|r| !e.contains(r)).cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::omega;
    use proptest::prelude::*;

    fn s(x: &str) -> QScalar {
        x.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> QMatrix {
        QMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|x| s(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn kernels_and_rank() {
        assert!(QMatrix::identity(4).kernel().is_zero());
        let m = mat(&[&["1", "0"], &["1", "w"], &["1", "(q^2 + 1)*w"]]);
        assert_eq!(m.rank(), 2);
        let lk = m.left_kernel();
        assert_eq!(lk.dim(), 1);
        assert_eq!(
            lk.rows()[0].to_dense(3),
            vec![s("1"), s("-1 - q^-2"), s("q^-2")]
        );
        for v in lk.rows() {
            assert!(m.vec_mul(v).unwrap().is_zero());
        }
    }

    #[test]
    fn rref_is_canonical() {
        let a = SubspaceBasis::from_rows(
            3,
            [
                SparseVec::from_dense(&[s("1"), s("q"), s("0")]),
                SparseVec::from_dense(&[s("0"), s("1"), s("w")]),
            ],
        );
        let b = SubspaceBasis::from_rows(
            3,
            [
                SparseVec::from_dense(&[s("1"), s("q + 1"), s("w")]),
                SparseVec::from_dense(&[s("2"), s("2*q"), s("0")]),
                SparseVec::from_dense(&[s("3"), s("3*q + 1"), s("w")]),
            ],
        );
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.pivots(), vec![0, 1]);
        assert!(a.contains(&SparseVec::from_dense(&[s("1"), s("q + 1"), s("w")])).unwrap());
        assert!(!a.contains(&SparseVec::unit(2)).unwrap());
        assert!(matches!(
            a.contains(&SparseVec::unit(5)),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersection_and_proportionality() {
        let a = SubspaceBasis::from_rows(3, [SparseVec::unit(0), SparseVec::unit(1)]);
        let b = SubspaceBasis::from_rows(
            3,
            [
                SparseVec::from_dense(&[s("1"), s("1"), s("0")]),
                SparseVec::unit(2),
            ],
        );
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert_eq!(i.rows()[0], SparseVec::from_dense(&[s("1"), s("1"), s("0")]));
        let z = SubspaceBasis::zero(2);
        let w = SparseVec::from_dense(&[s("1"), s("q")]);
        let v = w.scale(&omega());
        assert_eq!(z.proportionality(&v, &w).unwrap(), Some(omega()));
        assert_eq!(
            z.proportionality(&SparseVec::new(), &w).unwrap(),
            Some(QScalar::zero())
        );
        assert_eq!(z.proportionality(&SparseVec::unit(0), &w).unwrap(), None);
    }

    #[test]
    fn kron_and_transpose() {
        let a = mat(&[&["1", "q"], &["0", "w"]]);
        let i2 = QMatrix::identity(2);
        let k = a.kron(&i2);
        assert_eq!(k.get(0, 2), s("q"));
        assert_eq!(k.get(3, 3), omega());
        assert_eq!(k.transpose().transpose(), k);
        let left = a.kron(&i2).mul(&i2.kron(&a)).unwrap();
        let right = i2.kron(&a).mul(&a.kron(&i2)).unwrap();
        assert_eq!(left, right);
    }

    fn arb_small() -> impl Strategy<Value = QScalar> {
        (-2i64..3, -1i32..2, -2i64..3).prop_map(|(a, e, b)| {
            QScalar::from_int(a) * QScalar::q_pow(e) + QScalar::from_int(b)
        })
    }

    fn arb_rows(n: usize) -> impl Strategy<Value = Vec<Vec<QScalar>>> {
        proptest::collection::vec(proptest::collection::vec(arb_small(), n), 0..5)
    }

    fn basis(n: usize, rows: &[Vec<QScalar>]) -> SubspaceBasis {
        SubspaceBasis::from_rows(n, rows.iter().map(|r| SparseVec::from_dense(r)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_nullity(rows in arb_rows(4)) {
            prop_assume!(!rows.is_empty());
            let m = QMatrix::from_dense(&rows).unwrap();
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.dim(), 4);
            for v in k.rows() {
                prop_assert!(m.mul_vec(v).unwrap().is_zero());
            }
        }

        #[test]
        fn rref_idempotent(rows in arb_rows(4)) {
            let b = basis(4, &rows);
            prop_assert_eq!(SubspaceBasis::from_rows(4, b.rows().to_vec()), b);
        }

        #[test]
        fn grassmann_formula(r1 in arb_rows(4), r2 in arb_rows(4)) {
            let a = basis(4, &r1);
            let b = basis(4, &r2);
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            prop_assert!(a.contains_subspace(&i).unwrap());
            prop_assert!(b.contains_subspace(&i).unwrap());
        }

        #[test]
        fn equality_iff_mutual_containment(r1 in arb_rows(3), r2 in arb_rows(3)) {
            let a = basis(3, &r1);
            let b = basis(3, &r2);
            let mutual = a.contains_subspace(&b).unwrap() && b.contains_subspace(&a).unwrap();
            prop_assert_eq!(a.subspace_eq(&b).unwrap(), mutual);
        }
    }
}
