//! Pattern sets, the local Möbius function, its generating polynomial, and
//! the convergence criteria.
//!
//! A pattern set is a finite antichain `V` of vectors in `Z_{>=0}^k`; the
//! allowed labels `A(V)` are the nonzero vectors dominating no element of
//! `V`. `A(V)` is infinite and never materialized globally — every formula
//! in scope needs it only inside a finite box.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlaurent::rational_pow;
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    k: usize,
    vectors: Vec<Vec<u32>>,
    removed_dominated: Vec<Vec<u32>>,
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

impl PatternSet {
    /// Build a pattern set, reducing to minimal elements. Every vector must
    /// have coordinate sum at least 2 so that `A(V)` contains all basis
    /// vectors. Dominated vectors do not change `A(V)` and are dropped;
    /// they are kept around for the caller to warn about.
    pub fn new(k: usize, vectors: Vec<Vec<u32>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("pattern set needs k >= 1".into()));
        }
        let mut minimal: Vec<Vec<u32>> = Vec::new();
        let mut removed = Vec::new();
        for v in &vectors {
            if v.len() != k {
                return Err(Error::Precondition(format!(
                    "pattern {v:?} has {} coordinates, expected {k}",
                    v.len()
                )));
            }
            if v.iter().map(|x| *x as u64).sum::<u64>() < 2 {
                return Err(Error::Precondition(format!(
                    "invalid pattern set: {v:?} has norm < 2"
                )));
            }
        }
        let mut sorted = vectors;
        sorted.sort();
        sorted.dedup();
        for v in sorted {
            if minimal.iter().any(|m| dominates(&v, m)) {
                removed.push(v);
            } else {
                minimal.retain(|m| {
                    if dominates(m, &v) {
                        removed.push(m.clone());
                        false
                    } else {
                        true
                    }
                });
                minimal.push(v);
            }
        }
        minimal.sort();
        Ok(PatternSet {
            k,
            vectors: minimal,
            removed_dominated: removed,
        })
    }

    /// Parse the semicolon/comma grammar, e.g. `"2,1;1,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut vectors = Vec::new();
        let mut k = 0usize;
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let v: Vec<u32> = part
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad pattern entry {x:?}")))
                })
                .collect::<Result<_>>()?;
            if k == 0 {
                k = v.len();
            } else if v.len() != k {
                return Err(Error::Parse("pattern vectors must share one length".into()));
            }
            vectors.push(v);
        }
        if vectors.is_empty() {
            return Err(Error::Parse("empty pattern set".into()));
        }
        PatternSet::new(k, vectors).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vectors(&self) -> &[Vec<u32>] {
        &self.vectors
    }

    pub fn removed_dominated(&self) -> &[Vec<u32>] {
        &self.removed_dominated
    }

    /// Membership in the allowed labels `A(V)`: nonzero and not above any
    /// pattern.
    pub fn allows(&self, n: &[u32]) -> bool {
        n.iter().any(|x| *x > 0) && !self.vectors.iter().any(|v| dominates(n, v))
    }

    /// Componentwise maximum over the patterns.
    pub fn v_max(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.k];
        for v in &self.vectors {
            for (o, x) in out.iter_mut().zip(v) {
                *o = (*o).max(*x);
            }
        }
        out
    }

    /// Each coordinate is nonzero in at most one pattern.
    pub fn is_orthogonal(&self) -> bool {
        for i in 0..self.k {
            if self.vectors.iter().filter(|v| v[i] > 0).count() > 1 {
                return false;
            }
        }
        true
    }

    /// Minimum coordinate sum over the patterns.
    pub fn min_norm(&self) -> u32 {
        self.vectors
            .iter()
            .map(|v| v.iter().sum())
            .min()
            .unwrap_or(0)
    }
}

/// The local Möbius function on its bounding box, plus derived statistics.
#[derive(Clone, Debug)]
pub struct MobiusTable {
    bounding_box: Vec<u32>,
    values: BTreeMap<Vec<u32>, i64>,
    /// `sum_{n != 0} |mu_V(n)|`
    pub mu_abs_sum: u64,
    /// minimum pattern norm
    pub min_norm: u32,
    /// number of points of the support poset `P_V`
    pub poset_size: u64,
}

impl MobiusTable {
    pub fn bounding_box(&self) -> &[u32] {
        &self.bounding_box
    }

    pub fn value(&self, n: &[u32]) -> i64 {
        self.values.get(n).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.values.iter().filter(|(_, v)| **v != 0)
    }
}

fn box_points(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for v in &out {
            for x in 0..=b {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Compute `mu_V` by the recursion
/// `1_{A(V) union {0}}(n) = sum_{0 <= n' <= n} mu_V(n')`
/// over the bounding box, in a linear extension of the componentwise order.
/// Vanishing on a one-cell margin ring outside the box is checked.
pub fn mobius_table(v: &PatternSet) -> Result<MobiusTable> {
    let vmax = v.v_max();
    let margin: Vec<u32> = vmax.iter().map(|x| x + 1).collect();
    let mut values: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    // lexicographic order refines the componentwise order
    for n in box_points(&margin) {
        let indicator = if n.iter().all(|x| *x == 0) {
            1
        } else {
            i64::from(v.allows(&n))
        };
        let mut partial = 0i64;
        for (m, val) in &values {
            if dominates(&n, m) && *m != n {
                partial += val;
            }
        }
        values.insert(n, indicator - partial);
    }
    // margin ring: mu vanishes as soon as any coordinate leaves the box
    for (n, val) in &values {
        if n.iter().zip(&vmax).any(|(a, b)| a > b) && *val != 0 {
            return Err(Error::Internal(format!(
                "Möbius function does not vanish on the margin at {n:?}"
            )));
        }
    }
    values.retain(|n, _| n.iter().zip(&vmax).all(|(a, b)| a <= b));

    let mu_abs_sum = values
        .iter()
        .filter(|(n, _)| n.iter().any(|x| *x > 0))
        .map(|(_, v)| v.unsigned_abs())
        .sum();
    let poset_size = 1 + box_points(&vmax)
        .iter()
        .filter(|n| v.vectors.iter().any(|p| dominates(n, p)))
        .count() as u64;
    Ok(MobiusTable {
        bounding_box: vmax,
        values,
        mu_abs_sum,
        min_norm: v.min_norm(),
        poset_size,
    })
}

/// The generating polynomial `sum_n mu_V(n) t^n`. Asserted equal, within a
/// one-cell margin around the box, to
/// `(1-t_1)...(1-t_k) (1 + sum_{a in A(V), a <= box+1} t^a)`.
pub fn pattern_generating_poly(v: &PatternSet) -> Result<TruncSeries<BigRational>> {
    let table = mobius_table(v)?;
    let bound: u32 = table.bounding_box.iter().sum();
    let mut poly = TruncSeries::zero(v.k(), bound.max(1));
    for (n, val) in table.nonzero() {
        poly.set_coeff(n.clone(), BigRational::from_integer(BigInt::from(*val)));
    }

    // verification box: recompute via the product form and compare
    let margin: Vec<u32> = table.bounding_box.iter().map(|x| x + 1).collect();
    let vbound: u32 = margin.iter().sum();
    let mut labels = TruncSeries::one(v.k(), vbound);
    for a in allowed_labels_in_box(v, &margin) {
        labels.set_coeff(a, BigRational::one());
    }
    let mut product = labels;
    for i in 0..v.k() {
        let mut exps = vec![0u32; v.k()];
        exps[i] = 1;
        let mut factor = TruncSeries::one(v.k(), vbound);
        factor.set_coeff(exps, -BigRational::one());
        product = product.mul(&factor);
    }
    for n in box_points(&margin) {
        if product.coeff(&n) != poly.coeff(&n) {
            return Err(Error::Internal(format!(
                "generating polynomial mismatch at {n:?}"
            )));
        }
    }
    Ok(poly)
}

/// All nonzero allowed labels within the box.
pub fn allowed_labels_in_box(v: &PatternSet, bounds: &[u32]) -> Vec<Vec<u32>> {
    box_points(bounds)
        .into_iter()
        .filter(|n| v.allows(n))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternStats {
    pub orthogonal: bool,
    pub nondegenerate: bool,
    /// minimum pattern norm e
    pub min_norm: u32,
    /// `M = sum_{n != 0} |mu_V(n)|`
    pub mu_abs_sum: u64,
    pub poset_size: u64,
    /// `M < q^(e * dim X)`
    pub hadamard_criterion: bool,
}

/// The worked convergence criteria for a pattern set over a variety of the
/// given dimension at a given q.
pub fn pattern_stats(v: &PatternSet, q: &BigRational, dim_x: u32) -> Result<PatternStats> {
    let table = mobius_table(v)?;
    let e = table.min_norm;
    let threshold = rational_pow(q, e as i64 * dim_x as i64)?;
    let m_rat = BigRational::from_integer(BigInt::from(table.mu_abs_sum));
    Ok(PatternStats {
        orthogonal: v.is_orthogonal(),
        // construction already rejects norms < 2
        nondegenerate: true,
        min_norm: e,
        mu_abs_sum: table.mu_abs_sum,
        poset_size: table.poset_size,
        hadamard_criterion: m_rat < threshold,
    })
}

/// The finite-label criterion `k < q^(dim X)` for densities of k-colored
/// configuration spaces.
pub fn finite_label_criterion(k: usize, q: &BigRational, dim_x: u32) -> Result<bool> {
    let threshold = rational_pow(q, dim_x as i64)?;
    Ok(BigRational::from_integer(BigInt::from(k)) < threshold)
}
