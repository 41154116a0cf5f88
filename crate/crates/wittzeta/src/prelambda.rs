//! Adams operations, Möbius-inverted power sums, and pre-lambda powers
//! `f(t)^D` of integer power series by q-supported divisors.
//!
//! The defining identity is
//!
//! ```text
//! log(f^D) = sum_{m >= 1} p'_m(D) * log f(t_1^m, ..., t_k^m)
//! ```
//!
//! with `p'_m = (1/m) sum_{d|m} mu(m/d) p_d` the Möbius-inverted Adams
//! operations. Two implementations are provided:
//!
//! - [`prelambda_power`] clears all denominators up front: applying the
//!   Euler operator `E = sum t_i d/dt_i` to the identity turns it into
//!   `E(g)/g = sum_m (m p'_m(D)) (E(f)/f)(t^m)` whose right side has integer
//!   divisor coefficients, and the coefficient recurrence divides by the
//!   total degree at each step. Every division is asserted exact, so a
//!   denominator that fails to cancel aborts instead of poisoning tables.
//! - [`prelambda_power_logexp`] is the direct log/exp pipeline over
//!   rational-coefficient series; it is the reference the fast path is
//!   checked against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qlaurent::{IntLaurent, QLaurent};
use crate::series::{total_degree, TruncSeries};
use crate::witt::WittDivisor;
use crate::zoo::VarietyClass;

/// Integer Möbius function.
pub fn mobius(n: u32) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            out.push(d);
        }
    }
    out
}

/// Adams operation `p_m`: exponent scaling `[q^e] -> [q^(m e)]`.
pub fn adams(d: &WittDivisor, m: i64) -> Result<WittDivisor> {
    if m <= 0 {
        return Err(Error::Domain(format!("Adams index must be positive, got {m}")));
    }
    // D exact on e >= -h scales to exactness on e >= -m*h.
    let horizon = d.horizon().map(|h| h.saturating_mul(m));
    let body = d.body().scale_exponents(m);
    Ok(match horizon {
        Some(h) => WittDivisor::from_body(body).with_horizon(h),
        None => WittDivisor::from_body(body),
    })
}

/// `m * p'_m(D) = sum_{d|m} mu(m/d) p_d(D)`, integer-coefficient form.
fn adams_mobius_scaled(d: &WittDivisor, m: u32) -> IntLaurent {
    let mut acc = IntLaurent::zero();
    for div in divisors(m) {
        let mu = mobius(m / div);
        if mu != 0 {
            acc.add_scaled(&d.body().scale_exponents(div as i64), &BigInt::from(mu));
        }
    }
    acc
}

/// Möbius-inverted Adams operation `p'_m(D)`, a rational-coefficient
/// Laurent value; additive in `D`.
pub fn adams_mobius(d: &WittDivisor, m: i64) -> Result<QLaurent> {
    if m <= 0 {
        return Err(Error::Domain(format!(
            "Möbius-inverted Adams index must be positive, got {m}"
        )));
    }
    let scaled = adams_mobius_scaled(d, m as u32);
    Ok(scaled
        .to_qlaurent()
        .scale(&BigRational::new(BigInt::one(), BigInt::from(m))))
}

/// Per-divisor cache of the `p'_m` values; they are reused across every
/// coefficient of a power and dominate the runtime otherwise.
pub struct AdamsCache {
    base: WittDivisor,
    table: BTreeMap<u32, QLaurent>,
}

impl AdamsCache {
    pub fn new(base: WittDivisor) -> Result<Self> {
        if !base.is_exact() {
            return Err(Error::Precondition(
                "Adams cache needs a finite divisor".into(),
            ));
        }
        Ok(AdamsCache {
            base,
            table: BTreeMap::new(),
        })
    }

    pub fn base(&self) -> &WittDivisor {
        &self.base
    }

    pub fn mobius_inverted(&mut self, m: u32) -> Result<QLaurent> {
        if let Some(v) = self.table.get(&m) {
            return Ok(v.clone());
        }
        let v = adams_mobius(&self.base, m as i64)?;
        self.table.insert(m, v.clone());
        Ok(v)
    }

    pub fn cached(&self) -> impl Iterator<Item = (&u32, &QLaurent)> {
        self.table.iter()
    }
}

/// All lattice points `v <= box_` with `|v| <= bound`, sorted by total
/// degree then lexicographically.
fn lattice_points(box_: &[u32], bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; box_.len()];
    loop {
        if total_degree(&cur) <= bound {
            out.push(cur.clone());
        }
        // odometer
        let mut i = box_.len();
        loop {
            if i == 0 {
                out.sort_by_key(|a| (total_degree(a), a.clone()));
                return out;
            }
            i -= 1;
            if cur[i] < box_[i] {
                cur[i] += 1;
                for x in cur[i + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn within(v: &[u32], box_: &[u32], bound: u32) -> bool {
    total_degree(v) <= bound && v.iter().zip(box_).all(|(a, b)| a <= b)
}

/// Integer pre-lambda power engine, optionally restricted to a componentwise
/// box. When `dim_assert` is set (the base has no linear term and the
/// divisor is a zeta divisor of that dimension), every output coefficient at
/// total degree `n` is checked to have top exponent `<= floor(n*dim/2)`.
pub(crate) fn euler_power_int(
    f: &TruncSeries<BigRational>,
    d: &WittDivisor,
    bound: u32,
    box_: Option<&[u32]>,
    dim_assert: Option<u32>,
) -> Result<BTreeMap<Vec<u32>, IntLaurent>> {
    let nvars = f.nvars();
    if !d.is_exact() {
        return Err(Error::Precondition("power base divisor must be finite".into()));
    }
    if !f.constant_coeff().is_one() {
        return Err(Error::Precondition(
            "power requires constant coefficient 1".into(),
        ));
    }
    let default_box = vec![bound; nvars];
    let box_ = box_.unwrap_or(&default_box).to_vec();
    if box_.len() != nvars {
        return Err(Error::Precondition("box arity mismatch".into()));
    }

    // integer monomials of f within reach
    let mut base: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (v, c) in f.iter() {
        if !c.denom().is_one() {
            return Err(Error::Precondition(format!(
                "power base must have integer coefficients, found {c}"
            )));
        }
        if !num_traits::Zero::is_zero(c) && total_degree(v) <= bound {
            base.insert(v.clone(), c.numer().clone());
        }
    }

    let points = lattice_points(&box_, bound);

    // 1/f on the lattice: g_v = -sum_{0<w<=v, w in supp f} f_w g_(v-w)
    let mut inv: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    inv.insert(vec![0; nvars], BigInt::one());
    for v in &points {
        if total_degree(v) == 0 {
            continue;
        }
        let mut acc = BigInt::zero();
        for (w, fw) in &base {
            if total_degree(w) == 0 || !w.iter().zip(v).all(|(a, b)| a <= b) {
                continue;
            }
            let rest: Vec<u32> = v.iter().zip(w).map(|(a, b)| a - b).collect();
            if let Some(g) = inv.get(&rest) {
                acc += fw * g;
            }
        }
        if !acc.is_zero() {
            inv.insert(v.clone(), -acc);
        }
    }

    // dlog = E(f) * (1/f); integer scalars on the lattice
    let mut dlog: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (w, fw) in &base {
        let dw = total_degree(w);
        if dw == 0 {
            continue;
        }
        let ew = fw * BigInt::from(dw);
        for (u, g) in &inv {
            let key: Vec<u32> = w.iter().zip(u).map(|(a, b)| a + b).collect();
            if within(&key, &box_, bound) {
                let entry = dlog.entry(key).or_insert_with(BigInt::zero);
                *entry += &ew * g;
            }
        }
    }
    dlog.retain(|_, c| !c.is_zero());

    // F_w = sum over m with w = m*w': (m p'_m(D)) * dlog_(w')
    let mut f_map: BTreeMap<Vec<u32>, IntLaurent> = BTreeMap::new();
    for m in 1..=bound {
        let scaled = adams_mobius_scaled(d, m);
        if scaled.is_zero() {
            continue;
        }
        for (wp, c) in &dlog {
            if total_degree(wp) * m > bound {
                continue;
            }
            let w: Vec<u32> = wp.iter().map(|e| e * m).collect();
            if within(&w, &box_, bound) {
                f_map
                    .entry(w)
                    .or_insert_with(IntLaurent::zero)
                    .add_scaled(&scaled, c);
            }
        }
    }
    f_map.retain(|_, c| !c.is_zero());

    // |v| g_v = sum_{0<w<=v} F_w g_(v-w), divisions asserted exact
    let mut out: BTreeMap<Vec<u32>, IntLaurent> = BTreeMap::new();
    out.insert(vec![0; nvars], IntLaurent::one());
    for v in &points {
        let n = total_degree(v);
        if n == 0 {
            continue;
        }
        let mut acc = IntLaurent::zero();
        for (w, fw) in &f_map {
            if !w.iter().zip(v).all(|(a, b)| a <= b) {
                continue;
            }
            let rest: Vec<u32> = v.iter().zip(w).map(|(a, b)| a - b).collect();
            if let Some(g) = out.get(&rest) {
                if !g.is_zero() {
                    for (e1, c1) in fw.iter() {
                        for (e2, c2) in g.iter() {
                            acc.add_term(e1 + e2, c1 * c2);
                        }
                    }
                }
            }
        }
        let gv = acc.div_exact(n as i64)?;
        if let Some(dim) = dim_assert {
            if let Some(top) = gv.max_exp() {
                let limit = (n as i64 * dim as i64).div_euclid(2);
                if top > limit {
                    return Err(Error::Internal(format!(
                        "dimension bound violated at degree {n}: top exponent {top} > {limit}"
                    )));
                }
            }
        }
        if !gv.is_zero() {
            out.insert(v.clone(), gv);
        }
    }
    Ok(out)
}

/// The pre-lambda power `f(t)^D` of an integer power series with constant
/// coefficient 1 by a finite divisor, truncated at the bound of `f`. Every
/// output coefficient is an integer divisor value; residual denominators
/// abort with an internal-consistency error.
pub fn prelambda_power(
    f: &TruncSeries<BigRational>,
    d: &WittDivisor,
) -> Result<TruncSeries<QLaurent>> {
    let table = euler_power_int(f, d, f.bound(), None, None)?;
    let mut out = TruncSeries::zero(f.nvars(), f.bound());
    for (v, c) in table {
        out.set_coeff(v, c.to_qlaurent());
    }
    Ok(out)
}

/// Reference implementation of the same power via the formal log/exp
/// pipeline over rational-coefficient series.
pub fn prelambda_power_logexp(
    f: &TruncSeries<BigRational>,
    d: &WittDivisor,
) -> Result<TruncSeries<QLaurent>> {
    if !d.is_exact() {
        return Err(Error::Precondition("power base divisor must be finite".into()));
    }
    if !f.constant_coeff().is_one() {
        return Err(Error::Precondition(
            "power requires constant coefficient 1".into(),
        ));
    }
    let bound = f.bound();
    let mut f_q: TruncSeries<QLaurent> = TruncSeries::zero(f.nvars(), bound);
    for (v, c) in f.iter() {
        f_q.set_coeff(v.clone(), QLaurent::monomial(c.clone(), 0));
    }
    let mut cache = AdamsCache::new(d.clone())?;
    let mut acc: TruncSeries<QLaurent> = TruncSeries::zero(f.nvars(), bound);
    for m in 1..=bound {
        let weight = cache.mobius_inverted(m)?;
        if weight.is_zero() {
            continue;
        }
        let log_m = f_q.raise_vars(m).log()?;
        acc = acc.add(&log_m.scalar_mul(&weight));
    }
    let res = acc.exp()?;
    for (v, c) in res.iter() {
        if !c.is_integral() {
            return Err(Error::Internal(format!(
                "denominators failed to cancel at {v:?}: {c}"
            )));
        }
    }
    Ok(res)
}

/// Shapes with a closed formula for the coefficients of `log(f^D)`; used as
/// an independent oracle for the power pipeline.
pub enum PowerShape {
    /// `f = 1 + a_1 u_1 + ... + a_k u_k`
    Generic { coeffs: Vec<i64> },
    /// `f = (1-t_1)...(1-t_k)(1 + t_1 + ... + t_k)`
    ConfNormalized { k: usize },
}

fn multinomial(parts: &[u32]) -> BigInt {
    // (sum parts)! / prod parts! built as a product of binomials
    let mut acc = BigInt::one();
    let mut seen = 0u32;
    for &p in parts {
        for i in 1..=p {
            acc = acc * BigInt::from(seen + i) / BigInt::from(i);
        }
        seen += p;
    }
    acc
}

fn gcd_all(v: &[u32]) -> u32 {
    v.iter()
        .copied()
        .filter(|x| *x > 0)
        .fold(0, |a, b| num_integer::Integer::gcd(&a, &b))
}

/// Exact coefficient of `t^dvec` in `log(f^D)` for the supported shapes.
///
/// Generic shape: `-sum_{m d' = d} multinom(|d'|; d') (-1)^|d'| / |d'| *
/// a^(d') p'_m(D)`. Conf-normalized shape: the same sum for mixed monomials,
/// and `-sum_{m d' = d} (1 + (-1)^(d')) / d' * p'_m(D)` for pure powers
/// (where the `m = d` term vanishes).
pub fn log_power_coeff(shape: &PowerShape, d: &WittDivisor, dvec: &[u32]) -> Result<QLaurent> {
    if dvec.iter().all(|x| *x == 0) {
        return Err(Error::Precondition("coefficient index must be nonzero".into()));
    }
    let g = gcd_all(dvec);
    let mut acc = QLaurent::zero();
    match shape {
        PowerShape::Generic { coeffs } => {
            if coeffs.len() != dvec.len() {
                return Err(Error::Precondition("shape arity mismatch".into()));
            }
            for m in divisors(g) {
                let dp: Vec<u32> = dvec.iter().map(|x| x / m).collect();
                let total = total_degree(&dp);
                let mut scalar = BigRational::new(multinomial(&dp), BigInt::from(total));
                if total % 2 == 1 {
                    scalar = -scalar;
                }
                for (a, e) in coeffs.iter().zip(&dp) {
                    scalar *= BigRational::from_integer(BigInt::from(*a).pow(*e));
                }
                acc = acc.add(&adams_mobius(d, m as i64)?.scale(&scalar));
            }
        }
        PowerShape::ConfNormalized { k } => {
            if *k != dvec.len() {
                return Err(Error::Precondition("shape arity mismatch".into()));
            }
            let nonzero = dvec.iter().filter(|x| **x > 0).count();
            if nonzero == 1 {
                let deg = total_degree(dvec);
                for m in divisors(deg) {
                    let dp = deg / m;
                    // (1 + (-1)^(d')) / d': zero for odd d', including m = d
                    if dp % 2 == 1 {
                        continue;
                    }
                    let scalar = BigRational::new(BigInt::from(2), BigInt::from(dp));
                    acc = acc.add(&adams_mobius(d, m as i64)?.scale(&scalar));
                }
            } else {
                for m in divisors(g) {
                    let dp: Vec<u32> = dvec.iter().map(|x| x / m).collect();
                    let total = total_degree(&dp);
                    let mut scalar = BigRational::new(multinomial(&dp), BigInt::from(total));
                    if total % 2 == 1 {
                        scalar = -scalar;
                    }
                    acc = acc.add(&adams_mobius(d, m as i64)?.scale(&scalar));
                }
            }
        }
    }
    Ok(acc.neg())
}

/// The zeta special value `zeta^Kap_X(m)`: the Witt sum of the twisted
/// symmetric-power divisors `sum_{j>=0} twist(Sym^j X, -mj)`, including the
/// Witt unit at `j = 0`. Converges (term exponents drop like `-j(m - dim)`)
/// precisely for `m > dim X`; the result carries exactness horizon `cutoff`.
pub fn zeta_special_value(x: &VarietyClass, m: i64, cutoff: i64) -> Result<WittDivisor> {
    let dim = x.dim() as i64;
    if m <= dim {
        return Err(Error::Divergence(format!(
            "zeta special value needs m > dim X = {dim}, got {m}"
        )));
    }
    if cutoff < 0 {
        return Err(Error::Domain("cutoff must be nonnegative".into()));
    }
    let gap = m - dim;
    let j_max = (cutoff / gap + 1) as usize;
    let syms = x.zeta_divisor().sigma_series(j_max)?;
    let mut acc = WittDivisor::zero();
    for (j, sym) in syms.iter().enumerate() {
        acc = acc.witt_add(&sym.tate_twist(-m * j as i64));
    }
    Ok(acc.with_horizon(cutoff))
}
