//! Exact Laurent-polynomial arithmetic in the formal symbol `q`.
//!
//! `QLaurent` carries arbitrary-precision rational coefficients and is the
//! general symbolic value type (ghost coordinates, Möbius-inverted power
//! sums). `IntLaurent` is the integer-coefficient variant; it is the body of
//! a Witt divisor and the workhorse of the Euler-product engine.
//!
//! Invariants for both types:
//! - no stored coefficient is zero,
//! - the exponent set is finite (sparse `BTreeMap` keyed by exponent),
//! - all operations are exact; there is no floating point anywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Raise an exact rational to an integer power (negative exponents allowed
/// for nonzero base).
pub fn rational_pow(base: &BigRational, exp: i64) -> Result<BigRational> {
    if base.is_zero() {
        if exp < 0 {
            return Err(Error::Domain("zero base with negative exponent".into()));
        }
        return Ok(if exp == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    let e = u32::try_from(exp.unsigned_abs())
        .map_err(|_| Error::Domain(format!("exponent {exp} out of range")))?;
    let n = base.numer().pow(e);
    let d = base.denom().pow(e);
    Ok(if exp >= 0 {
        BigRational::new(n, d)
    } else {
        BigRational::new(d, n)
    })
}

/// Laurent polynomial in `q` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigRational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// The single term `c * q^e` (normalized away if `c = 0`).
    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        QLaurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut r = Self::zero();
        for (e, c) in iter {
            r.add_term(e, c);
        }
        r
    }

    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        Self::from_terms(
            iter.into_iter()
                .map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&i64, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &rhs.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Standard Laurent product: exponents add, coefficients convolve.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QLaurent {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Exponent shift `q^k * self` (a Tate twist at the symbol level).
    pub fn shift(&self, k: i64) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Exponent scaling `q^e -> q^(m*e)` (Adams operation on divisors).
    pub fn scale_exponents(&self, m: i64) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect(),
        }
    }

    /// Exact substitution `q := q0`.
    pub fn eval(&self, q0: &BigRational) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * rational_pow(q0, *e)?;
        }
        Ok(acc)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// Verify integrality and downcast to the integer variant.
    pub fn to_int(&self) -> Result<IntLaurent> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if !c.denom().is_one() {
                return Err(Error::Internal(format!(
                    "non-integer coefficient {c} at q^{e}"
                )));
            }
            terms.insert(*e, c.numer().clone());
        }
        Ok(IntLaurent { terms })
    }
}

impl From<&IntLaurent> for QLaurent {
    fn from(p: &IntLaurent) -> Self {
        QLaurent {
            terms: p
                .terms
                .iter()
                .map(|(e, c)| (*e, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one();
            match (*e, unit_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

/// Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl IntLaurent {
    pub fn zero() -> Self {
        IntLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        IntLaurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        let mut r = Self::zero();
        for (e, c) in iter {
            r.add_term(e, BigInt::from(c));
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(rhs);
        r
    }

    pub fn neg(&self) -> Self {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    /// Accumulate `scalar * rhs` into `self`.
    pub fn add_scaled(&mut self, rhs: &Self, scalar: &BigInt) {
        if scalar.is_zero() {
            return;
        }
        for (e, c) in &rhs.terms {
            self.add_term(*e, c * scalar);
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntLaurent {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale_exponents(&self, m: i64) -> Self {
        IntLaurent {
            terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect(),
        }
    }

    /// Drop every term with exponent strictly below `lo`.
    pub fn truncate_below(&self, lo: i64) -> Self {
        IntLaurent {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e >= lo)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Divide every coefficient by `n`, failing if any division is inexact.
    pub fn div_exact(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let nn = BigInt::from(n);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (quot, rem) = c.div_rem(&nn);
            if !rem.is_zero() {
                return Err(Error::Internal(format!(
                    "expected {c} at q^{e} to be divisible by {n}"
                )));
            }
            terms.insert(*e, quot);
        }
        Ok(IntLaurent { terms })
    }

    pub fn eval(&self, q0: &BigRational) -> Result<BigRational> {
        QLaurent::from(self).eval(q0)
    }

    pub fn to_qlaurent(&self) -> QLaurent {
        QLaurent::from(self)
    }
}

impl fmt::Debug for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntLaurent({self})")
    }
}

impl fmt::Display for IntLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_qlaurent())
    }
}
