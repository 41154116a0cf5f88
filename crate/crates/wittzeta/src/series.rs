//! Truncated multivariate power series over an exact coefficient ring.
//!
//! Truncation is by total degree (the sum of the exponent vector), which is
//! the grading all tail bounds in this crate are stated against. Stored
//! coefficients are never zero and never exceed the bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qlaurent::QLaurent;

/// Exact coefficient ring for truncated series.
///
/// `div_int` must be exact division; it is only called with nonzero `n` and
/// is total on the rings implemented here (both are Q-algebras).
pub trait CoeffRing: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_int(&self, n: i64) -> Self;
}

impl CoeffRing for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_int(&self, n: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }
}

impl CoeffRing for QLaurent {
    fn zero() -> Self {
        QLaurent::zero()
    }
    fn one() -> Self {
        QLaurent::one()
    }
    fn is_zero(&self) -> bool {
        QLaurent::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        QLaurent::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        QLaurent::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        QLaurent::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        QLaurent::neg(self)
    }
    fn div_int(&self, n: i64) -> Self {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }
}

pub fn total_degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

/// Multivariate power series truncated at a total degree (inclusive).
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C: CoeffRing> {
    nvars: usize,
    bound: u32,
    coeffs: BTreeMap<Vec<u32>, C>,
}

impl<C: CoeffRing> TruncSeries<C> {
    pub fn zero(nvars: usize, bound: u32) -> Self {
        TruncSeries {
            nvars,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, bound: u32) -> Self {
        Self::constant(nvars, bound, C::one())
    }

    pub fn constant(nvars: usize, bound: u32, c: C) -> Self {
        let mut s = Self::zero(nvars, bound);
        s.set_coeff(vec![0; nvars], c);
        s
    }

    pub fn monomial(nvars: usize, bound: u32, exps: Vec<u32>, c: C) -> Self {
        let mut s = Self::zero(nvars, bound);
        s.set_coeff(exps, c);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.coeffs.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn set_coeff(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.nvars, "exponent vector arity mismatch");
        if total_degree(&exps) > self.bound || c.is_zero() {
            self.coeffs.remove(&exps);
        } else {
            self.coeffs.insert(exps, c);
        }
    }

    pub fn constant_coeff(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    fn assert_compatible(&self, rhs: &Self) {
        assert_eq!(self.nvars, rhs.nvars, "series arity mismatch");
    }

    /// Result bound is the weaker (smaller) of the two operand bounds.
    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let bound = self.bound.min(rhs.bound);
        let mut out = Self::zero(self.nvars, bound);
        for (v, c) in self.coeffs.iter().chain(rhs.coeffs.iter()) {
            if total_degree(v) > bound {
                continue;
            }
            let cur = out.coeff(v);
            out.set_coeff(v.clone(), cur.add(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            nvars: self.nvars,
            bound: self.bound,
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Naive sparse convolution, truncated at the weaker operand bound.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let bound = self.bound.min(rhs.bound);
        let mut out = Self::zero(self.nvars, bound);
        for (v, c) in &self.coeffs {
            let dv = total_degree(v);
            if dv > bound {
                continue;
            }
            for (w, d) in &rhs.coeffs {
                if dv + total_degree(w) > bound {
                    continue;
                }
                let key: Vec<u32> = v.iter().zip(w).map(|(a, b)| a + b).collect();
                let cur = out.coeff(&key);
                out.set_coeff(key, cur.add(&c.mul(d)));
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars, self.bound);
        for (v, x) in &self.coeffs {
            out.set_coeff(v.clone(), x.mul(c));
        }
        out
    }

    pub fn truncated(&self, bound: u32) -> Self {
        let mut out = Self::zero(self.nvars, bound.min(self.bound));
        for (v, c) in &self.coeffs {
            if total_degree(v) <= out.bound {
                out.set_coeff(v.clone(), c.clone());
            }
        }
        out
    }

    /// Substitute `t_i := t_i^m` for every variable, keeping the bound.
    pub fn raise_vars(&self, m: u32) -> Self {
        assert!(m >= 1);
        let mut out = Self::zero(self.nvars, self.bound);
        for (v, c) in &self.coeffs {
            if total_degree(v) * m <= self.bound {
                out.set_coeff(v.iter().map(|e| e * m).collect(), c.clone());
            }
        }
        out
    }

    /// Substitute each variable by a single coefficient-1 monomial in
    /// `out_nvars` variables. Every image must have total degree at least 1,
    /// so substitution cannot decrease the degree of any monomial below 1.
    ///
    /// The output bound is the largest degree guaranteed exact: an omitted
    /// input monomial has degree > bound and maps to degree at least
    /// `(bound+1) * min image degree`.
    pub fn mono_subst(&self, images: &[Vec<u32>], out_nvars: usize) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Precondition(format!(
                "expected {} images, got {}",
                self.nvars,
                images.len()
            )));
        }
        let mut min_deg = u32::MAX;
        for img in images {
            if img.len() != out_nvars {
                return Err(Error::Precondition("image arity mismatch".into()));
            }
            let d = total_degree(img);
            if d == 0 {
                return Err(Error::Precondition(
                    "monomial image must have total degree >= 1".into(),
                ));
            }
            min_deg = min_deg.min(d);
        }
        if self.nvars == 0 {
            min_deg = 1;
        }
        let out_bound = (self.bound + 1) * min_deg - 1;
        let mut out = Self::zero(out_nvars, out_bound);
        for (v, c) in &self.coeffs {
            let mut key = vec![0u32; out_nvars];
            for (e, img) in v.iter().zip(images) {
                for (k, ie) in key.iter_mut().zip(img) {
                    *k += e * ie;
                }
            }
            if total_degree(&key) <= out_bound {
                let cur = out.coeff(&key);
                out.set_coeff(key, cur.add(c));
            }
        }
        Ok(out)
    }

    /// Formal logarithm via `log(1+s) = s - s^2/2 + s^3/3 - ...`.
    ///
    /// The constant coefficient must be the ring unit.
    pub fn log(&self) -> Result<Self> {
        if self.constant_coeff() != C::one() {
            return Err(Error::Precondition(
                "log requires constant coefficient 1".into(),
            ));
        }
        let mut h = self.clone();
        let zeros = vec![0; self.nvars];
        h.set_coeff(zeros, C::zero());
        // term_k = (-1)^(k+1) h^k / k, built incrementally so no factorials
        // or large binomials appear.
        let mut acc = Self::zero(self.nvars, self.bound);
        let mut power = Self::one(self.nvars, self.bound);
        for k in 1..=i64::from(self.bound) {
            power = power.mul(&h);
            if power.coeffs.is_empty() {
                break;
            }
            let term = power
                .coeffs
                .iter()
                .fold(Self::zero(self.nvars, self.bound), |mut s, (v, c)| {
                    let signed = if k % 2 == 0 { c.neg() } else { c.clone() };
                    s.set_coeff(v.clone(), signed.div_int(k));
                    s
                });
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Formal exponential; the inverse of [`Self::log`] up to the bound.
    ///
    /// The constant coefficient must be zero.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_coeff().is_zero() {
            return Err(Error::Precondition(
                "exp requires constant coefficient 0".into(),
            ));
        }
        let mut acc = Self::one(self.nvars, self.bound);
        let mut term = Self::one(self.nvars, self.bound);
        for k in 1..=i64::from(self.bound) {
            // term = self^k / k!
            term = term.mul(self);
            term = term
                .coeffs
                .iter()
                .fold(Self::zero(self.nvars, self.bound), |mut s, (v, c)| {
                    s.set_coeff(v.clone(), c.div_int(k));
                    s
                });
            if term.coeffs.is_empty() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the constant coefficient must be the unit.
    /// Division elsewhere in the crate is multiplication by this inverse.
    pub fn inverse(&self) -> Result<Self> {
        if self.constant_coeff() != C::one() {
            return Err(Error::Precondition(
                "inverse requires constant coefficient 1".into(),
            ));
        }
        let mut h = self.clone();
        let zeros = vec![0; self.nvars];
        h.set_coeff(zeros, C::zero());
        // g = 1 - h*g stabilizes degree by degree since h has no constant term.
        let mut g = Self::one(self.nvars, self.bound);
        for _ in 0..self.bound {
            g = Self::one(self.nvars, self.bound).sub(&h.mul(&g));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// 1/(1-t) truncated.
    fn geometric(bound: u32) -> TruncSeries<BigRational> {
        let mut s = TruncSeries::zero(1, bound);
        for k in 0..=bound {
            s.set_coeff(vec![k], rat(1, 1));
        }
        s
    }

    #[test]
    fn log_of_geometric_series() {
        let l = geometric(3).log().unwrap();
        assert_eq!(l.coeff(&[0]), rat(0, 1));
        assert_eq!(l.coeff(&[1]), rat(1, 1));
        assert_eq!(l.coeff(&[2]), rat(1, 2));
        assert_eq!(l.coeff(&[3]), rat(1, 3));
    }

    #[test]
    fn log_of_one_is_zero() {
        let one: TruncSeries<BigRational> = TruncSeries::one(2, 4);
        assert_eq!(one.log().unwrap(), TruncSeries::zero(2, 4));
    }

    #[test]
    fn log_bivariate_cross_term() {
        // log(1 + t1 + t2): coefficient of t1*t2 comes from -(t1+t2)^2/2.
        let mut f = TruncSeries::one(2, 3);
        f.set_coeff(vec![1, 0], rat(1, 1));
        f.set_coeff(vec![0, 1], rat(1, 1));
        assert_eq!(f.log().unwrap().coeff(&[1, 1]), rat(-1, 1));
    }

    #[test]
    fn log_requires_unit_constant() {
        let f: TruncSeries<BigRational> = TruncSeries::zero(1, 2);
        assert!(f.log().is_err());
    }

    #[test]
    fn exp_of_zero_and_of_t() {
        let z: TruncSeries<BigRational> = TruncSeries::zero(1, 3);
        assert_eq!(z.exp().unwrap(), TruncSeries::one(1, 3));

        let t = TruncSeries::monomial(1, 3, vec![1], rat(1, 1));
        let e = t.exp().unwrap();
        assert_eq!(e.coeff(&[0]), rat(1, 1));
        assert_eq!(e.coeff(&[1]), rat(1, 1));
        assert_eq!(e.coeff(&[2]), rat(1, 2));
        assert_eq!(e.coeff(&[3]), rat(1, 6));
    }

    #[test]
    fn exp_requires_zero_constant() {
        let one: TruncSeries<BigRational> = TruncSeries::one(1, 2);
        assert!(one.exp().is_err());
    }

    #[test]
    fn exp_log_round_trip() {
        // 1 - 3u^2 + 2u^3 to degree 5
        let mut f = TruncSeries::one(1, 5);
        f.set_coeff(vec![2], rat(-3, 1));
        f.set_coeff(vec![3], rat(2, 1));
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }

    #[test]
    fn mono_subst_diagonal() {
        let mut f = TruncSeries::one(2, 3);
        f.set_coeff(vec![1, 0], rat(1, 1));
        f.set_coeff(vec![0, 1], rat(1, 1));
        let g = f.mono_subst(&[vec![1], vec![1]], 1).unwrap();
        assert_eq!(g.coeff(&[0]), rat(1, 1));
        assert_eq!(g.coeff(&[1]), rat(2, 1));
    }

    #[test]
    fn mono_subst_identity() {
        let mut f = TruncSeries::one(2, 4);
        f.set_coeff(vec![2, 1], rat(5, 1));
        f.set_coeff(vec![0, 3], rat(-2, 7));
        let g = f
            .mono_subst(&[vec![1, 0], vec![0, 1]], 2)
            .unwrap()
            .truncated(4);
        assert_eq!(g, f);
    }

    #[test]
    fn mono_subst_conf_polynomial_diagonal() {
        // (1-t1)(1-t2)(1+t1+t2) = 1 - t1^2 - t1 t2 - t2^2 + t1^2 t2 + t1 t2^2;
        // the diagonal is (1-u)^2 (1+2u) = 1 - 3u^2 + 2u^3, expanded by hand.
        let mut f = TruncSeries::one(2, 3);
        for (v, c) in [
            (vec![2u32, 0u32], -1i64),
            (vec![1, 1], -1),
            (vec![0, 2], -1),
            (vec![2, 1], 1),
            (vec![1, 2], 1),
        ] {
            f.set_coeff(v, rat(c, 1));
        }
        let g = f.mono_subst(&[vec![1], vec![1]], 1).unwrap();
        let mut expect = TruncSeries::one(1, 3);
        expect.set_coeff(vec![2], rat(-3, 1));
        expect.set_coeff(vec![3], rat(2, 1));
        assert_eq!(g, expect);
    }

    #[test]
    fn mono_subst_rejects_constant_image() {
        let f: TruncSeries<BigRational> = TruncSeries::one(1, 2);
        assert!(f.mono_subst(&[vec![0]], 1).is_err());
    }

    #[test]
    fn inverse_of_geometric_is_one_minus_t() {
        let inv = geometric(5).inverse().unwrap();
        let mut expect = TruncSeries::one(1, 5);
        expect.set_coeff(vec![1], rat(-1, 1));
        assert_eq!(inv, expect);
    }

    #[test]
    fn randomized_log_exp_properties() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let nvars = rng.gen_range(1..3usize);
            let bound = rng.gen_range(2..5u32);
            let mut rand_unit = |nv: usize, b: u32| {
                let mut f: TruncSeries<BigRational> = TruncSeries::one(nv, b);
                for _ in 0..rng.gen_range(1..4) {
                    let v: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..3)).collect();
                    if total_degree(&v) >= 1 {
                        f.set_coeff(v, rat(rng.gen_range(-3..4), 1));
                    }
                }
                f
            };
            let f = rand_unit(nvars, bound);
            let g = rand_unit(nvars, bound);
            // round trips
            assert_eq!(f.log().unwrap().exp().unwrap(), f);
            // log turns products into sums
            assert_eq!(
                f.mul(&g).log().unwrap(),
                f.log().unwrap().add(&g.log().unwrap())
            );
            // substitution commutes with multiplication and log
            let images: Vec<Vec<u32>> = (0..nvars).map(|_| vec![1]).collect();
            let lhs = f.mul(&g).mono_subst(&images, 1).unwrap().truncated(bound);
            let rhs = f
                .mono_subst(&images, 1)
                .unwrap()
                .mul(&g.mono_subst(&images, 1).unwrap())
                .truncated(bound);
            assert_eq!(lhs, rhs);
            let l1 = f.log().unwrap().mono_subst(&images, 1).unwrap().truncated(bound);
            let l2 = f.mono_subst(&images, 1).unwrap().truncated(bound).log().unwrap();
            assert_eq!(l1, l2);
        }
    }
}
