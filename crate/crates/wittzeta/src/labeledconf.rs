//! Labeled-configuration divisors at finite degree and their closed-form
//! limit with label class `1/(1 + L^(dim X))`.
//!
//! The colored space with color multiplicities `lambda` and `d` unmarked
//! points is the coefficient of `t^lambda s^d` in the Euler power of
//! `1 + t_1 + ... + t_k + s`; the limit divisor is assembled from the
//! `t^lambda` coefficient of the power of `1 + (t_1 + ... + t_k) f(s)` for
//! the alternating series `f(s) = 1 - s + s^2 - ...`, evaluated at
//! `s = [q^(-dim X)]` and renormalized.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prelambda::euler_power_int;
use crate::qlaurent::IntLaurent;
use crate::series::TruncSeries;
use crate::witt::{weight_agreement_depth, WittDivisor};
use crate::zoo::VarietyClass;

/// Multiplicity vector of a generalized partition, canonicalized descending.
/// Colors of equal multiplicity stay distinct (ordered colors).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionLambda {
    parts: Vec<u32>,
}

impl PartitionLambda {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Precondition("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionLambda { parts })
    }

    pub fn empty() -> Self {
        PartitionLambda { parts: Vec::new() }
    }

    /// Parse comma-separated parts, e.g. `"2,1,1"`; empty input is the
    /// empty partition.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::empty());
        }
        let parts: Vec<u32> = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {x:?}")))
            })
            .collect::<Result<_>>()?;
        Self::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total size `|lambda|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// The divisor of the colored configuration space with `lambda(i)` points of
/// color `i` and `d` unmarked points: the coefficient of `t^lambda s^d` in
/// the Euler power of `1 + t_1 + ... + t_k + s`.
pub fn conf_lambda_star_divisor(
    x: &VarietyClass,
    lambda: &PartitionLambda,
    d: u32,
) -> Result<WittDivisor> {
    let k = lambda.len();
    let nvars = k + 1;
    let bound = lambda.size() + d;
    let mut f: TruncSeries<BigRational> = TruncSeries::one(nvars, bound.max(1));
    for i in 0..nvars {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        f.set_coeff(e, BigRational::one());
    }
    let mut bounding_box: Vec<u32> = lambda.parts().to_vec();
    bounding_box.push(d);
    let power = euler_power_int(&f, x.zeta_divisor(), bound, Some(&bounding_box), None)?;
    Ok(power
        .get(&bounding_box)
        .map(|c| WittDivisor::from_body(c.clone()))
        .unwrap_or_else(WittDivisor::zero))
}

/// The limit divisor: the configuration space with constant label class
/// `1/(1 + L^(dim X))`, exact on exponents `>= -cutoff`.
pub fn conf_label_value(
    x: &VarietyClass,
    lambda: &PartitionLambda,
    cutoff: i64,
) -> Result<WittDivisor> {
    let dim = x.dim() as i64;
    if dim < 1 {
        return Err(Error::Precondition("label value needs dim X >= 1".into()));
    }
    if cutoff < 0 {
        return Err(Error::Domain("cutoff must be nonnegative".into()));
    }
    let k = lambda.len();
    let nvars = k + 1; // t_1..t_k, then s
    let j_max = (cutoff / dim + 1) as u32;
    let bound = lambda.size() + j_max;
    // 1 + (t_1 + ... + t_k) * sum_{j<=J} (-1)^j s^j
    let mut f: TruncSeries<BigRational> = TruncSeries::one(nvars, bound.max(1));
    for i in 0..k {
        for j in 0..=j_max {
            let mut e = vec![0u32; nvars];
            e[i] = 1;
            e[k] = j;
            let sign = if j % 2 == 0 { 1 } else { -1 };
            f.set_coeff(e, BigRational::from_integer(BigInt::from(sign)));
        }
    }
    let mut bounding_box: Vec<u32> = lambda.parts().to_vec();
    bounding_box.push(j_max);
    let power = euler_power_int(&f, x.zeta_divisor(), bound, Some(&bounding_box), None)?;

    // substitute s = [q^(-dim)] by twist-and-sum over the s-degree
    let mut acc = IntLaurent::zero();
    for (v, c) in &power {
        if v[..k] != *lambda.parts() {
            continue;
        }
        let j = v[k] as i64;
        acc.add_assign(&c.shift(-j * dim));
    }
    // the usual renormalization by q^(-dim |lambda|)
    let value = WittDivisor::from_body(acc).tate_twist(-dim * lambda.size() as i64);
    Ok(value.with_horizon(cutoff))
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremBRow {
    pub d: u32,
    /// Weight-agreement depth of the finite quotient against the limit.
    pub weight_depth: i64,
    pub depth_cap: i64,
    /// Hadamard distance at the given q.
    pub hadamard_distance: String,
}

/// For `d = 0..=d_max`, form the quotient divisor
/// `Q_d = twist(conf divisor) *W inverse(twist(Conf^(|lambda|+d) divisor))`
/// (both twisted by `q^(-dim X (|lambda|+d))`) and report its agreement with
/// the closed-form limit.
pub fn theoremb_check(
    x: &VarietyClass,
    lambda: &PartitionLambda,
    d_max: u32,
    cutoff: i64,
    q: &BigRational,
) -> Result<(WittDivisor, Vec<TheoremBRow>)> {
    let limit = conf_label_value(x, lambda, cutoff)?;
    let dim = x.dim() as i64;
    let mut rows = Vec::new();
    for d in 0..=d_max {
        let total = lambda.size() + d;
        let twist = -dim * total as i64;
        let numerator = conf_lambda_star_divisor(x, lambda, d)?.tate_twist(twist);
        let denominator =
            conf_lambda_star_divisor(x, &PartitionLambda::empty(), total)?.tate_twist(twist);
        let quotient = numerator.witt_mul(&denominator.witt_inverse(cutoff)?);
        let (depth, cap) = weight_agreement_depth(&quotient, &limit);
        let diff = quotient.witt_sub(&limit);
        rows.push(TheoremBRow {
            d,
            weight_depth: depth,
            depth_cap: cap,
            hadamard_distance: crate::witt::format_sig15(&diff.hadamard_norm(q)?),
        });
    }
    Ok((limit, rows))
}
