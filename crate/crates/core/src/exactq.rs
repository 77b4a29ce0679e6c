//! Exact scalars in the field Q(q).
//!
//! A [`LaurentPoly`] is a finitely supported map from exponents of `q` to
//! arbitrary-precision rationals. A [`QScalar`] is a reduced fraction of two
//! Laurent polynomials kept in a canonical form, so equality of scalars is
//! plain structural equality.
//!
//! Canonical form of `num / den`:
//! * `den` is an ordinary polynomial with nonzero constant term (all powers of
//!   `q` live in `num`);
//! * `den` is monic;
//! * `gcd(num, den) = 1`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at q = {0}")]
    PoleAtPoint(String),
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Laurent polynomial in `q` with rational coefficients.
///
/// `coeffs[k]` is the coefficient of `q^(low + k)`; the vector never starts or
/// ends with a zero, and the zero polynomial is `low = 0, coeffs = []`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, exp: i32) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    /// Builds `sum_k coeffs[k] q^(low + k)`, trimming zeros at both ends.
    pub fn from_coeffs(low: i32, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        Self {
            low: low + lead as i32,
            coeffs,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, BigRational)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn low_exp(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_exp(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, exp: i32) -> BigRational {
        let k = exp - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            BigRational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// The substitution `q -> q^-1`.
    pub fn invert_q(&self) -> Self {
        match self.high_exp() {
            None => Self::zero(),
            Some(hi) => Self {
                low: -hi,
                coeffs: self.coeffs.iter().rev().cloned().collect(),
            },
        }
    }

    /// Value at a rational point; `None` when `x = 0` meets a negative power.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if x.is_zero() {
            return if self.low > 0 {
                Some(BigRational::zero())
            } else if self.low == 0 {
                Some(self.coeffs[0].clone())
            } else {
                None
            };
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        Some(acc * pow_rat(x, self.low))
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high_exp().unwrap().max(other.high_exp().unwrap());
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - lo) as usize + k] += c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + other.low,
            coeffs: poly_mul(&self.coeffs, &other.coeffs),
        }
    }
}

fn pow_rat(x: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

// Ordinary polynomials, ascending coefficient vectors without trailing zeros.

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b_lead = b.last().expect("division by the zero polynomial");
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let f = rem.last().unwrap() / b_lead;
        for (k, c) in b.iter().enumerate() {
            rem[shift + k] -= &f * c;
        }
        quot[shift] = f;
        rem.pop();
        rem = poly_trim(rem);
    }
    (poly_trim(quot), rem)
}

fn poly_monic(p: Vec<BigRational>) -> Vec<BigRational> {
    match p.last() {
        Some(l) if !l.is_one() => {
            let l = l.clone();
            p.into_iter().map(|c| c / &l).collect()
        }
        _ => p,
    }
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut x, mut y) = if a.len() >= b.len() {
        (a.to_vec(), b.to_vec())
    } else {
        (b.to_vec(), a.to_vec())
    };
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigRational::one()];
        }
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = poly_monic(r);
    }
    poly_monic(x)
}

fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (q, r) = poly_divrem(a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// An element of Q(q) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QScalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl QScalar {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let shift = num.low - den.low;
        if den.is_monomial() {
            let c = den.coeffs[0].clone();
            let coeffs = if c.is_one() {
                num.coeffs
            } else {
                num.coeffs.into_iter().map(|x| x / &c).collect()
            };
            return Self {
                num: LaurentPoly { low: shift, coeffs },
                den: LaurentPoly::one(),
            };
        }
        let (mut n, mut d) = (num.coeffs, den.coeffs);
        if n.len() > 1 {
            let g = poly_gcd(&n, &d);
            if g.len() > 1 {
                n = poly_div_exact(&n, &g);
                d = poly_div_exact(&d, &g);
            }
        }
        let lead = d.last().unwrap().clone();
        if !lead.is_one() {
            n = n.into_iter().map(|x| x / &lead).collect();
            d = d.into_iter().map(|x| x / &lead).collect();
        }
        let den = if d.len() == 1 {
            LaurentPoly::one()
        } else {
            LaurentPoly { low: 0, coeffs: d }
        };
        Self {
            num: LaurentPoly {
                low: shift,
                coeffs: n,
            },
            den,
        }
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(r))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(k: i32) -> Self {
        Self::from_poly(LaurentPoly::q_pow(k))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the scalar is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitutes `q -> q^-1`.
    pub fn invert_q(&self) -> Self {
        Self::canonical(self.num.invert_q(), self.den.invert_q())
    }

    /// Specialises `q` to a rational number.
    pub fn eval_at(&self, x: &BigRational) -> Result<BigRational, ExactError> {
        let pole = || ExactError::PoleAtPoint(x.to_string());
        let d = self.den.eval(x).ok_or_else(pole)?;
        if d.is_zero() {
            return Err(pole());
        }
        let n = self.num.eval(x).ok_or_else(pole)?;
        Ok(n / d)
    }

    fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add_ref(&other.num);
            if self.den.is_one() {
                return Self::from_poly(num);
            }
            return Self::canonical(num, self.den.clone());
        }
        let num = self
            .num
            .mul_ref(&other.den)
            .add_ref(&other.num.mul_ref(&self.den));
        Self::canonical(num, self.den.mul_ref(&other.den))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul_ref(&other.num));
        }
        Self::canonical(self.num.mul_ref(&other.num), self.den.mul_ref(&other.den))
    }

    fn neg_ref(&self) -> Self {
        Self {
            num: self.num.scale(&rat(-1)),
            den: self.den.clone(),
        }
    }
}

/// The quantum integer `[n] = (q^n - q^-n) / (q - q^-1)`; `[0] = 0`.
pub fn q_int(n: u32) -> QScalar {
    let terms = (0..n).map(|k| (n as i32 - 1 - 2 * k as i32, BigRational::one()));
    QScalar::from_poly(LaurentPoly::from_terms(terms))
}

/// `omega = q - q^-1`.
pub fn omega() -> QScalar {
    QScalar::from_poly(LaurentPoly::from_terms([
        (1, BigRational::one()),
        (-1, rat(-1)),
    ]))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &'a QScalar) -> QScalar {
                let f: fn(&QScalar, &QScalar) -> QScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &'a QScalar) -> QScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("QScalar division by zero"));

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        self.neg_ref()
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        self.neg_ref()
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = self.mul_ref(rhs);
    }
}

impl Sum for QScalar {
    fn sum<I: Iterator<Item = QScalar>>(iter: I) -> Self {
        iter.fold(QScalar::zero(), |a, b| a + b)
    }
}

impl Product for QScalar {
    fn product<I: Iterator<Item = QScalar>>(iter: I) -> Self {
        iter.fold(QScalar::one(), |a, b| a * b)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

impl From<LaurentPoly> for QScalar {
    fn from(p: LaurentPoly) -> Self {
        QScalar::from_poly(p)
    }
}

// ---------------------------------------------------------------------------
// Text form: `(q^2 - q^-2)/(q + q^-1)`, terms in decreasing exponent order.

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let mono = match e {
                0 => None,
                1 => Some("q".to_string()),
                _ => Some(format!("q^{e}")),
            };
            match mono {
                None => write!(f, "{a}")?,
                Some(m) if a.is_one() => f.write_str(&m)?,
                Some(m) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})/({})", self.num, self.den)
        } else {
            write!(f, "{}/({})", self.num, self.den)
        }
    }
}

impl PartialOrd for QScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order (by rendered text), used only for deterministic output.
impl Ord for QScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Q,
    W,
    QInt(u32),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(digits.parse().map_err(|_| "bad integer")?));
            }
            'q' => out.push(Tok::Q),
            'w' => out.push(Tok::W),
            '[' => {
                let start = i + 1;
                while i + 1 < chars.len() && chars[i + 1] != ']' {
                    i += 1;
                }
                if i + 1 >= chars.len() {
                    return Err("unterminated quantum integer".into());
                }
                let inner: String = chars[start..=i].iter().collect();
                let n = inner
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| format!("bad quantum integer [{inner}]"))?;
                out.push(Tok::QInt(n));
                i += 1;
            }
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            other => return Err(format!("unexpected character {other:?}")),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<QScalar, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QScalar, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|e| e.to_string())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QScalar, String> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QScalar, String> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        let e = match self.next() {
            Some(Tok::Num(n)) => i32::try_from(n).map_err(|_| "exponent too large")?,
            _ => return Err("expected integer exponent".into()),
        };
        base.pow(if neg { -e } else { e }).map_err(|e| e.to_string())
    }

    fn atom(&mut self) -> Result<QScalar, String> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(QScalar::from_rational(BigRational::from_integer(n))),
            Some(Tok::Q) => Ok(QScalar::q()),
            Some(Tok::W) => Ok(omega()),
            Some(Tok::QInt(n)) => Ok(q_int(n)),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err("expected ')'".into()),
                }
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

/// Parses the rendering grammar, plus `w` for `q - q^-1` and `[n]` for quantum integers.
impl FromStr for QScalar {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| ExactError::Parse {
            input: s.to_string(),
            reason,
        };
        let toks = tokenize(s).map_err(err)?;
        if toks.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr().map_err(err)?;
        if p.pos != p.toks.len() {
            return Err(err(format!("trailing input at token {}", p.pos)));
        }
        Ok(v)
    }
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
