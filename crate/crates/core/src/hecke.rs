//! The Hecke algebra `H_r(q)` in the `T_σ` basis, its idempotents for
//! `r = 2, 3`, the diagonal space and the projection `p`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{omega, q_int, QScalar};
use crate::linalgq::{QMatrix, SparseVec, SubspaceBasis};
use crate::symgroup::{enumerate_perms, Perm, SymError};

/// Largest `r` for which the diagonal kernel is computed.
pub const MAX_DIAG_RANK: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("size mismatch: H_{0} vs H_{1}")]
    SizeMismatch(usize, usize),
    #[error("r = {value} exceeds the bound {bound}")]
    BoundExceeded { value: usize, bound: usize },
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Finite Q(q)-combination of `T_σ`, `σ ∈ S_r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeckeElt {
    r: usize,
    terms: BTreeMap<Perm, QScalar>,
}

impl HeckeElt {
    pub fn zero(r: usize) -> Self {
        Self {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: usize) -> Self {
        Self::basis(Perm::identity(r))
    }

    pub fn basis(p: Perm) -> Self {
        Self::monomial(p, QScalar::one())
    }

    pub fn monomial(p: Perm, c: QScalar) -> Self {
        let mut e = Self::zero(p.rank());
        e.add_term(p, c);
        e
    }

    pub fn scalar(r: usize, c: QScalar) -> Self {
        Self::monomial(Perm::identity(r), c)
    }

    /// `T_{s_i}`.
    pub fn generator(i: usize, r: usize) -> Result<Self, HeckeError> {
        Ok(Self::basis(Perm::s(i, r)?))
    }

    pub fn from_terms<I: IntoIterator<Item = (Perm, QScalar)>>(r: usize, terms: I) -> Result<Self, HeckeError> {
        let mut e = Self::zero(r);
        for (p, c) in terms {
            if p.rank() != r {
                return Err(HeckeError::SizeMismatch(r, p.rank()));
            }
            e.add_term(p, c);
        }
        Ok(e)
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Perm, QScalar> {
        &self.terms
    }

    pub fn coeff(&self, p: &Perm) -> QScalar {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, p: Perm, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.axpy(&QScalar::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HeckeError> {
        self.axpy(&QScalar::from_int(-1), other)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &QScalar, other: &Self) -> Result<Self, HeckeError> {
        if self.r != other.r {
            return Err(HeckeError::SizeMismatch(self.r, other.r));
        }
        let mut out = self.clone();
        for (p, x) in &other.terms {
            out.add_term(p.clone(), c * x);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(self.r);
        for (p, x) in &self.terms {
            out.add_term(p.clone(), c * x);
        }
        out
    }

    /// Right multiplication by `T_{s_i}`.
    pub fn mul_generator(&self, i: usize) -> Self {
        let w = omega();
        let mut out = Self::zero(self.r);
        for (p, c) in &self.terms {
            let ps = p.mul_s_right(i);
            if ps.length() > p.length() {
                out.add_term(ps, c.clone());
            } else {
                out.add_term(ps, c.clone());
                out.add_term(p.clone(), c * &w);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HeckeError> {
        if self.r != other.r {
            return Err(HeckeError::SizeMismatch(self.r, other.r));
        }
        let mut out = Self::zero(self.r);
        for (rho, c) in &other.terms {
            let mut t = self.scale(c);
            for i in rho.reduced_word() {
                t = t.mul_generator(i);
            }
            for (p, x) in t.terms {
                out.add_term(p, x);
            }
        }
        Ok(out)
    }

    /// Product `T_{s_{i_1}} ... T_{s_{i_k}}`.
    pub fn from_word(word: &[usize], r: usize) -> Result<Self, HeckeError> {
        let mut e = Self::one(r);
        for &i in word {
            if i == 0 || i >= r {
                return Err(SymError::BadGenerator { index: i, rank: r }.into());
            }
            e = e.mul_generator(i);
        }
        Ok(e)
    }

    /// The bar-type involution `T_σ ↦ (-1)^σ T_σ`, `q ↦ q^-1` on coefficients.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.r);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c.invert_q() * QScalar::from_int(p.sign()));
        }
        out
    }

    pub fn to_vec(&self, order: &[Perm]) -> SparseVec {
        let pos: BTreeMap<&Perm, usize> = order.iter().enumerate().map(|(k, p)| (p, k)).collect();
        SparseVec::from_pairs(self.terms.iter().map(|(p, c)| (pos[p], c.clone())))
    }
}

/// `T^α = T_{α^-1}`.
pub fn t_upper(alpha: &Perm) -> HeckeElt {
    HeckeElt::basis(alpha.inverse())
}

impl fmt::Display for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                if c.is_one() {
                    format!("T[{p}]")
                } else {
                    format!("({c})*T[{p}]")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for HeckeElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(p, c)| (p.to_string(), c.to_string()))
            .collect();
        m.serialize(s)
    }
}

/// `Σ c_α T̃^α_α` in the diagonal space, with `T̃^α_α = T^α ⊗ T_α`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagElt {
    r: usize,
    coeffs: BTreeMap<Perm, QScalar>,
}

impl DiagElt {
    pub fn from_terms<I: IntoIterator<Item = (Perm, QScalar)>>(r: usize, terms: I) -> Result<Self, HeckeError> {
        let h = HeckeElt::from_terms(r, terms)?;
        Ok(Self { r, coeffs: h.terms })
    }

    pub fn basis(alpha: Perm) -> Self {
        Self {
            r: alpha.rank(),
            coeffs: BTreeMap::from([(alpha, QScalar::one())]),
        }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn coeffs(&self) -> &BTreeMap<Perm, QScalar> {
        &self.coeffs
    }

    /// Coordinates in the order of `enumerate_perms(r)`.
    pub fn from_vec(r: usize, v: &SparseVec) -> Result<Self, HeckeError> {
        let perms = enumerate_perms(r)?;
        Self::from_terms(r, v.iter().map(|(k, c)| (perms[k].clone(), c.clone())))
    }

    pub fn to_vec(&self) -> Result<SparseVec, HeckeError> {
        let perms = enumerate_perms(self.r)?;
        Ok(HeckeElt {
            r: self.r,
            terms: self.coeffs.clone(),
        }
        .to_vec(&perms))
    }
}

impl fmt::Display for DiagElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| {
                if c.is_one() {
                    format!("T~[{p}]")
                } else {
                    format!("({c})*T~[{p}]")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `T_{α^-1} T_α`.
pub fn p_of_basis(alpha: &Perm) -> HeckeElt {
    t_upper(alpha)
        .mul(&HeckeElt::basis(alpha.clone()))
        .expect("same rank")
}

pub fn project_p(x: &DiagElt) -> HeckeElt {
    let mut out = HeckeElt::zero(x.r);
    for (a, c) in &x.coeffs {
        out = out.axpy(c, &p_of_basis(a)).expect("same rank");
    }
    out
}

/// Combination of generator words `T_{s_{i_1}} ... T_{s_{i_k}}` in which only the
/// quadratic relation has been applied, so braid-equivalent words stay distinct.
pub type FormalWords = BTreeMap<Vec<usize>, QScalar>;

fn formal_add(out: &mut FormalWords, w: Vec<usize>, c: QScalar) {
    let e = out.entry(w.clone()).or_default();
    *e += &c;
    if e.is_zero() {
        out.remove(&w);
    }
}

/// Rewrites every `T_{s_i} T_{s_i}` as `1 + ω T_{s_i}` until no square remains.
pub fn hecke_moves(x: &FormalWords) -> FormalWords {
    let mut todo: Vec<(Vec<usize>, QScalar)> = x.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    let mut out = FormalWords::new();
    while let Some((w, c)) = todo.pop() {
        match w.windows(2).position(|p| p[0] == p[1]) {
            None => formal_add(&mut out, w, c),
            Some(k) => {
                let short = [&w[..k], &w[k + 2..]].concat();
                let kept = [&w[..k + 1], &w[k + 2..]].concat();
                todo.push((short, c.clone()));
                todo.push((kept, &c * &omega()));
            }
        }
    }
    out
}

/// `T_{α^-1} T_α` as a word product, reduced by Hecke moves only.
pub fn formal_p_of_basis(alpha: &Perm) -> FormalWords {
    let w = alpha.reduced_word();
    let word: Vec<usize> = w.iter().rev().chain(w.iter()).copied().collect();
    hecke_moves(&FormalWords::from([(word, QScalar::one())]))
}

pub fn formal_project_p(x: &DiagElt) -> FormalWords {
    let mut out = FormalWords::new();
    for (a, c) in &x.coeffs {
        for (w, y) in formal_p_of_basis(a) {
            formal_add(&mut out, w, c * &y);
        }
    }
    out
}

/// Evaluates formal words in `H_r`, which applies the braid relations.
pub fn evaluate_formal(x: &FormalWords, r: usize) -> Result<HeckeElt, HeckeError> {
    let mut out = HeckeElt::zero(r);
    for (w, c) in x {
        out = out.axpy(c, &HeckeElt::from_word(w, r)?)?;
    }
    Ok(out)
}

/// Row `α` holds `T_{α^-1} T_α` in the `T_σ` basis; both indexed by `enumerate_perms(r)`.
pub fn p_matrix(r: usize) -> Result<QMatrix, HeckeError> {
    let perms = enumerate_perms(r)?;
    let rows = perms.iter().map(|a| p_of_basis(a).to_vec(&perms)).collect();
    Ok(QMatrix::from_rows(perms.len(), rows).expect("square"))
}

/// Kernel of `p` on the diagonal space, in `T̃^α_α` coordinates.
pub fn diag_kernel_of_p(r: usize) -> Result<SubspaceBasis, HeckeError> {
    if r > MAX_DIAG_RANK {
        return Err(HeckeError::BoundExceeded {
            value: r,
            bound: MAX_DIAG_RANK,
        });
    }
    Ok(p_matrix(r)?.left_kernel())
}

fn half() -> QScalar {
    QScalar::from_int(1) / QScalar::from_int(2)
}

fn p3(s: &str) -> Perm {
    s.parse().expect("valid permutation literal")
}

/// `(e_2, e_{1^2})` in `H_2`.
pub fn idempotents_r2() -> (HeckeElt, HeckeElt) {
    let inv2 = q_int(2).inv().expect("[2] != 0");
    let t = HeckeElt::generator(1, 2).expect("r = 2");
    let one = HeckeElt::one(2);
    let e2 = one
        .scale(&QScalar::q_pow(-1))
        .add(&t)
        .expect("same rank")
        .scale(&inv2);
    let e11 = one
        .scale(&QScalar::q())
        .sub(&t)
        .expect("same rank")
        .scale(&inv2);
    (e2, e11)
}

/// The four primitive idempotents of `H_3` and the normalizing constants of the
/// q-symmetrizer and q-antisymmetrizer.
#[derive(Clone, Debug)]
pub struct Idempotents3 {
    pub e3: HeckeElt,
    pub e21_plus: HeckeElt,
    pub e21_minus: HeckeElt,
    pub e111: HeckeElt,
    /// `e3 = Σ q^{ℓ(σ)} T_σ / n3`.
    pub n3: QScalar,
    /// `e111 = Σ (-q)^{-ℓ(σ)} T_σ / n111`.
    pub n111: QScalar,
}

/// Selects `e^+_{21}` or `e^-_{21}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(format!("unknown sign {s:?} (expected plus or minus)")),
        }
    }
}

/// `e^±_{21}`.
pub fn e21(sign: Sign) -> HeckeElt {
    let sg = QScalar::from_int(sign.value());
    let inv3 = q_int(3).inv().expect("[3] != 0");
    let w = omega();
    let mut terms = vec![(p3("123"), inv3.clone()), (p3("321"), &sg * &inv3)];
    let a = -(half() * &inv3);
    for (p, c) in [("231", QScalar::one()), ("213", sg.clone()), ("132", sg.clone()), ("312", QScalar::one())] {
        terms.push((p3(p), &a * &c));
    }
    let b = &w * &half() * &inv3;
    for (p, c) in [("213", QScalar::one()), ("312", -&sg), ("231", -&sg), ("132", QScalar::one())] {
        terms.push((p3(p), &b * &c));
    }
    HeckeElt::from_terms(3, terms).expect("rank 3")
}

fn symmetrizer(r: usize, anti: bool) -> (HeckeElt, QScalar) {
    let perms = enumerate_perms(r).expect("small rank");
    let mut num = HeckeElt::zero(r);
    let mut norm = QScalar::zero();
    for p in perms {
        let l = p.length() as i32;
        let (c, n) = if anti {
            (
                QScalar::q_pow(-l) * QScalar::from_int(if l % 2 == 0 { 1 } else { -1 }),
                QScalar::q_pow(-2 * l),
            )
        } else {
            (QScalar::q_pow(l), QScalar::q_pow(2 * l))
        };
        num.add_term(p, c);
        norm += &n;
    }
    let e = num.scale(&norm.inv().expect("nonzero"));
    (e, norm)
}

pub fn idempotents_r3() -> Idempotents3 {
    let (e3, n3) = symmetrizer(3, false);
    let (e111, n111) = symmetrizer(3, true);
    Idempotents3 {
        e3,
        e21_plus: e21(Sign::Plus),
        e21_minus: e21(Sign::Minus),
        e111,
        n3,
        n111,
    }
}

/// `θ = T_{s1} T_{s2} T_{s1}`.
pub fn theta() -> HeckeElt {
    HeckeElt::from_word(&[1, 2, 1], 3).expect("rank 3")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(x: &str) -> QScalar {
        x.parse().unwrap()
    }

    #[test]
    fn formal_braid_difference() {
        let l = DiagElt::from_terms(
            3,
            [("132", 1), ("312", -1), ("213", -1), ("231", 1)].map(|(a, c)| (p3(a), QScalar::from_int(c))),
        )
        .unwrap();
        let formal = formal_project_p(&l);
        let expect = FormalWords::from([(vec![1, 2, 1], omega()), (vec![2, 1, 2], -omega())]);
        assert_eq!(formal, expect);
        assert!(evaluate_formal(&formal, 3).unwrap().is_zero());
        for a in enumerate_perms(4).unwrap() {
            let f = formal_p_of_basis(&a);
            assert_eq!(evaluate_formal(&f, 4).unwrap(), p_of_basis(&a));
        }
    }

    #[test]
    fn quadratic_relation() {
        for r in 2..=4 {
            for i in 1..r {
                let t = HeckeElt::generator(i, r).unwrap();
                let lhs = t.mul(&t).unwrap();
                let rhs = HeckeElt::one(r).axpy(&omega(), &t).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        for r in 3..=5 {
            for i in 1..r - 1 {
                let a = HeckeElt::from_word(&[i, i + 1, i], r).unwrap();
                let b = HeckeElt::from_word(&[i + 1, i, i + 1], r).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn size_mismatch() {
        let a = HeckeElt::one(2);
        let b = HeckeElt::one(3);
        assert_eq!(a.mul(&b), Err(HeckeError::SizeMismatch(2, 3)));
    }

    #[test]
    fn t_upper_examples() {
        assert_eq!(t_upper(&p3("132")), HeckeElt::generator(2, 3).unwrap());
        assert_eq!(t_upper(&Perm::identity(3)), HeckeElt::one(3));
        assert_eq!(t_upper(&p3("312")), HeckeElt::from_word(&[2, 1], 3).unwrap());
        assert_eq!(t_upper(&p3("231")), HeckeElt::from_word(&[1, 2], 3).unwrap());
    }

    #[test]
    fn p_matrix_last_row() {
        let m = p_matrix(3).unwrap();
        let row: Vec<_> = m.row(5).to_dense(6);
        assert_eq!(row, ["1", "w", "w", "w^2", "w^2", "w^3 + w"].map(s).to_vec());
        let x = DiagElt::basis(p3("213"));
        assert_eq!(
            project_p(&x),
            HeckeElt::one(3).axpy(&omega(), &HeckeElt::generator(1, 3).unwrap()).unwrap()
        );
    }

    #[test]
    fn small_diag_kernels() {
        assert!(diag_kernel_of_p(2).unwrap().is_zero());
        let k = diag_kernel_of_p(3).unwrap();
        assert_eq!(k.dim(), 1);
        // pivot normalization puts +1 on T~[132]
        assert_eq!(
            k.rows()[0].to_dense(6),
            ["0", "1", "-1", "1", "-1", "0"].map(s).to_vec()
        );
        assert!(matches!(
            diag_kernel_of_p(6),
            Err(HeckeError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn idempotent_r2() {
        let (e2, e11) = idempotents_r2();
        assert_eq!(e2.mul(&e2).unwrap(), e2);
        assert_eq!(e11.mul(&e11).unwrap(), e11);
        assert!(e2.mul(&e11).unwrap().is_zero());
        assert_eq!(e2.add(&e11).unwrap(), HeckeElt::one(2));
        // (q^-1 + T)(q - T) = 0
        let t = HeckeElt::generator(1, 2).unwrap();
        let a = HeckeElt::scalar(2, QScalar::q_pow(-1)).add(&t).unwrap();
        let b = HeckeElt::scalar(2, QScalar::q()).sub(&t).unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        assert!(b.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn idempotent_r3() {
        let id = idempotents_r3();
        let all = [&id.e3, &id.e21_plus, &id.e21_minus, &id.e111];
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.mul(a).unwrap(), **a);
            for (j, b) in all.iter().enumerate() {
                if i != j {
                    assert!(a.mul(b).unwrap().is_zero(), "{i} {j}");
                }
            }
        }
        let total = all
            .iter()
            .fold(HeckeElt::zero(3), |acc, e| acc.add(e).unwrap());
        assert_eq!(total, HeckeElt::one(3));
        let th = theta();
        assert_eq!(th.mul(&id.e21_plus).unwrap(), id.e21_plus);
        assert_eq!(th.mul(&id.e21_minus).unwrap(), id.e21_minus.scale(&s("-1")));
        let big_e = id.e21_plus.add(&id.e21_minus).unwrap();
        for i in 1..3 {
            let t = HeckeElt::generator(i, 3).unwrap();
            assert_eq!(big_e.mul(&t).unwrap(), t.mul(&big_e).unwrap());
            assert_eq!(t.mul(&id.e3).unwrap(), id.e3.scale(&QScalar::q()));
            assert_eq!(t.mul(&id.e111).unwrap(), id.e111.scale(&-QScalar::q_pow(-1)));
        }
        assert_eq!(id.e21_plus.involution(), id.e21_minus);
    }

    fn arb_elt(r: usize) -> impl Strategy<Value = HeckeElt> {
        let perms = enumerate_perms(r).unwrap();
        let n = perms.len();
        proptest::collection::vec((0..n, -2i64..3, -1i32..2), 1..4).prop_map(move |ts| {
            HeckeElt::from_terms(
                r,
                ts.into_iter()
                    .map(|(k, a, e)| (perms[k].clone(), QScalar::from_int(a) * QScalar::q_pow(e))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn associativity_h3(a in arb_elt(3), b in arb_elt(3), c in arb_elt(3)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }

        #[test]
        fn unit_is_neutral(a in arb_elt(4)) {
            prop_assert_eq!(HeckeElt::one(4).mul(&a).unwrap(), a.clone());
            prop_assert_eq!(a.mul(&HeckeElt::one(4)).unwrap(), a);
        }
    }
}
