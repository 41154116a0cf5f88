//! Finite-degree classes and densities of zero-cycle spaces, limiting
//! divisors, closed forms for orthogonal pattern sets, an independent
//! point-count oracle, and convergence diagnostics.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::patterns::{pattern_generating_poly, PatternSet};
use crate::prelambda::{euler_power_int, mobius, zeta_special_value};
use crate::qlaurent::IntLaurent;
use crate::series::{total_degree, TruncSeries};
use crate::witt::{weight_agreement_depth, WittDivisor};
use crate::zoo::VarietyClass;

/// A set of allowable labels for effective zero-cycles. Every scheme
/// contains all standard basis vectors, so the degree-`d` space has full
/// dimension.
#[derive(Clone, Debug)]
pub enum LabelScheme {
    /// All nonzero labels: the classes are products of symmetric powers.
    Full { k: usize },
    /// Standard basis vectors only: k-colored configuration spaces.
    FiniteConf { k: usize },
    /// Labels avoiding every pattern in `V`.
    PatternComplement(PatternSet),
    /// An explicit finite label set (must contain the basis vectors).
    ExplicitFinite { k: usize, labels: Vec<Vec<u32>> },
}

impl LabelScheme {
    pub fn k(&self) -> usize {
        match self {
            LabelScheme::Full { k } | LabelScheme::FiniteConf { k } => *k,
            LabelScheme::PatternComplement(v) => v.k(),
            LabelScheme::ExplicitFinite { k, .. } => *k,
        }
    }

    /// Parse `full:<k>`, `conf:<k>`, `patterns:<vec;vec>`, or
    /// `explicit:<vec;vec>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad label scheme {s:?}")))?;
        match kind {
            "full" => Ok(LabelScheme::Full {
                k: rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad label arity {rest:?}")))?,
            }),
            "conf" => Ok(LabelScheme::FiniteConf {
                k: rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad label arity {rest:?}")))?,
            }),
            "patterns" => Ok(LabelScheme::PatternComplement(PatternSet::parse(rest)?)),
            "explicit" => {
                let mut labels = Vec::new();
                let mut k = 0usize;
                for part in rest.split(';').filter(|p| !p.trim().is_empty()) {
                    let v: Vec<u32> = part
                        .split(',')
                        .map(|x| {
                            x.trim()
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad label entry {x:?}")))
                        })
                        .collect::<Result<_>>()?;
                    if k == 0 {
                        k = v.len();
                    } else if v.len() != k {
                        return Err(Error::Parse("labels must share one length".into()));
                    }
                    labels.push(v);
                }
                LabelScheme::explicit(k, labels)
            }
            _ => Err(Error::Parse(format!("unknown label scheme {kind:?}"))),
        }
    }

    pub fn explicit(k: usize, labels: Vec<Vec<u32>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Precondition("label scheme needs k >= 1".into()));
        }
        for i in 0..k {
            let mut e = vec![0u32; k];
            e[i] = 1;
            if !labels.contains(&e) {
                return Err(Error::Precondition(format!(
                    "explicit label set must contain the basis vector {e:?}"
                )));
            }
        }
        if labels.iter().any(|a| a.iter().all(|x| *x == 0)) {
            return Err(Error::Precondition("labels must be nonzero".into()));
        }
        Ok(LabelScheme::ExplicitFinite { k, labels })
    }

    /// Membership of a nonzero vector in the allowed labels.
    pub fn contains(&self, a: &[u32]) -> bool {
        if a.iter().all(|x| *x == 0) {
            return false;
        }
        match self {
            LabelScheme::Full { .. } => true,
            LabelScheme::FiniteConf { .. } => {
                a.iter().sum::<u32>() == 1
            }
            LabelScheme::PatternComplement(v) => v.allows(a),
            LabelScheme::ExplicitFinite { labels, .. } => labels.contains(&a.to_vec()),
        }
    }

    /// The normalized generating polynomial
    /// `Q = (1-t_1)...(1-t_k)(1 + sum_{a in A} t^a)`,
    /// which is `1` for the full scheme. It has constant term 1 and no
    /// linear terms.
    pub fn normalized_poly(&self) -> Result<TruncSeries<BigRational>> {
        let k = self.k();
        let q = match self {
            LabelScheme::Full { .. } => TruncSeries::one(k, 0),
            LabelScheme::FiniteConf { .. } => {
                let mut labels = TruncSeries::one(k, k as u32 + 1);
                for i in 0..k {
                    let mut e = vec![0u32; k];
                    e[i] = 1;
                    labels.set_coeff(e, BigRational::one());
                }
                multiply_by_units(labels, k)
            }
            LabelScheme::PatternComplement(v) => pattern_generating_poly(v)?,
            LabelScheme::ExplicitFinite { labels, .. } => {
                let top: u32 = labels.iter().map(|a| total_degree(a)).max().unwrap_or(0);
                let mut sum = TruncSeries::one(k, top + k as u32);
                for a in labels {
                    sum.set_coeff(a.clone(), BigRational::one());
                }
                multiply_by_units(sum, k)
            }
        };
        // no-linear-term invariant of a normalized scheme
        for i in 0..k {
            let mut e = vec![0u32; k];
            e[i] = 1;
            if !q.coeff(&e).is_zero() {
                return Err(Error::Internal(format!(
                    "normalized polynomial has a linear term in t_{i}"
                )));
            }
        }
        Ok(q)
    }
}

fn multiply_by_units(mut s: TruncSeries<BigRational>, k: usize) -> TruncSeries<BigRational> {
    let bound = s.bound();
    for i in 0..k {
        let mut e = vec![0u32; k];
        e[i] = 1;
        let mut factor = TruncSeries::one(k, bound);
        factor.set_coeff(e, -BigRational::one());
        s = s.mul(&factor);
    }
    s
}

/// The table of zeta-measure classes of the spaces `Z^d_A(X)` for `d` inside
/// a box, computed as (product of Kapranov factors) x (normalized-polynomial
/// power).
pub struct ZeroCycleSeries {
    bounding_box: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, WittDivisor>,
}

impl ZeroCycleSeries {
    pub fn bounding_box(&self) -> &[u32] {
        &self.bounding_box
    }

    pub fn coeff(&self, d: &[u32]) -> Result<&WittDivisor> {
        self.coeffs
            .get(d)
            .ok_or_else(|| Error::Precondition(format!("{d:?} outside the computed box")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &WittDivisor)> {
        self.coeffs.iter()
    }
}

pub fn zerocycle_series(
    x: &VarietyClass,
    a: &LabelScheme,
    bounding_box: &[u32],
) -> Result<ZeroCycleSeries> {
    let k = a.k();
    if bounding_box.len() != k {
        return Err(Error::Precondition("box arity mismatch".into()));
    }
    let q_poly = a.normalized_poly()?;
    let bound: u32 = bounding_box.iter().sum();
    let power = euler_power_int(
        &q_poly,
        x.zeta_divisor(),
        bound,
        Some(bounding_box),
        Some(x.dim()),
    )?;
    let max_side = bounding_box.iter().copied().max().unwrap_or(0) as usize;
    let syms = x.zeta_divisor().sigma_series(max_side)?;

    let mut coeffs = BTreeMap::new();
    for d in box_lattice(bounding_box) {
        let mut acc = IntLaurent::zero();
        for (w, g) in &power {
            if !w.iter().zip(&d).all(|(a, b)| a <= b) {
                continue;
            }
            // Kapranov factor: the Witt product of the symmetric-power
            // divisors at the residual degrees
            let mut kap = IntLaurent::one();
            for (di, wi) in d.iter().zip(w) {
                kap = kap.mul(syms[(di - wi) as usize].body());
            }
            acc.add_assign(&g.mul(&kap));
        }
        coeffs.insert(d, WittDivisor::from_body(acc));
    }
    Ok(ZeroCycleSeries {
        bounding_box: bounding_box.to_vec(),
        coeffs,
    })
}

fn box_lattice(bounds: &[u32]) -> Vec<Vec<u32>> {
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

/// The finite-degree density divisor
/// `D_d = twist(Z^d_A class) *W inverse(twist(Sym^d class))`,
/// both twisted by `q^(-dim X * |d|)`; exact down to `-cutoff`.
pub fn density_finite(
    x: &VarietyClass,
    a: &LabelScheme,
    d: &[u32],
    cutoff: i64,
) -> Result<WittDivisor> {
    let table = zerocycle_series(x, a, d)?;
    let numerator = table.coeff(d)?;
    let twist = -(x.dim() as i64) * total_degree(d) as i64;

    let mut sym = IntLaurent::one();
    let syms = x
        .zeta_divisor()
        .sigma_series(d.iter().copied().max().unwrap_or(0) as usize)?;
    for di in d {
        sym = sym.mul(syms[*di as usize].body());
    }
    let denominator = WittDivisor::from_body(sym).tate_twist(twist);
    let inv = denominator.witt_inverse(cutoff)?;
    Ok(numerator.tate_twist(twist).witt_mul(&inv).with_horizon(cutoff))
}

/// The limiting density divisor: the value of the Euler product of the
/// normalized polynomial at `t_i = [q^(-dim X)]`, exact on exponents
/// `>= -weight_cutoff`.
///
/// The k-variate product is reduced to a univariate one by the diagonal
/// monomial substitution, then expanded to degree `ceil(2N/dim) + 2`: the
/// degree-`n` coefficient has top exponent at most `n*dim/2` (asserted), so
/// deeper terms cannot reach the horizon. A re-run two degrees higher is
/// compared on the horizon as a stabilization check.
pub fn density_limit(
    x: &VarietyClass,
    a: &LabelScheme,
    weight_cutoff: i64,
) -> Result<WittDivisor> {
    density_limit_with_degree(x, a, weight_cutoff, None)
}

/// [`density_limit`] with a floor on the expansion degree (the derived
/// degree is never lowered, so the tail bound stays valid).
pub fn density_limit_with_degree(
    x: &VarietyClass,
    a: &LabelScheme,
    weight_cutoff: i64,
    min_degree: Option<i64>,
) -> Result<WittDivisor> {
    if !x.irreducible() {
        return Err(Error::Precondition(
            "limiting density needs an irreducible variety".into(),
        ));
    }
    if x.dim() == 0 {
        return Err(Error::Precondition("limiting density needs dim X >= 1".into()));
    }
    if weight_cutoff < 0 {
        return Err(Error::Domain("weight cutoff must be nonnegative".into()));
    }
    let q_poly = a.normalized_poly()?;
    let k = a.k();
    let images: Vec<Vec<u32>> = vec![vec![1]; k];
    let diag = q_poly.mono_subst(&images, 1)?;
    if !diag.coeff(&[1]).is_zero() {
        return Err(Error::Precondition(
            "degenerate label scheme: diagonal polynomial has a linear term".into(),
        ));
    }
    let dim = x.dim() as i64;
    let mut degree = num_integer::Integer::div_ceil(&(2 * weight_cutoff), &dim) + 2;
    if let Some(min) = min_degree {
        degree = degree.max(min);
    }
    let full_degree = (degree + 2) as u32;

    let diag = pad_bound(&diag, full_degree);
    let power = euler_power_int(&diag, x.zeta_divisor(), full_degree, None, Some(x.dim()))?;

    let partial = |top: i64| -> WittDivisor {
        let mut acc = IntLaurent::zero();
        for (v, g) in &power {
            let n = total_degree(v) as i64;
            if n <= top {
                acc.add_assign(&g.shift(-n * dim).truncate_below(-weight_cutoff));
            }
        }
        WittDivisor::from_body(acc).with_horizon(weight_cutoff)
    };
    let at_degree = partial(degree);
    let rerun = partial(degree + 2);
    if at_degree != rerun {
        return Err(Error::Internal(
            "limit did not stabilize on the horizon between degrees D and D+2".into(),
        ));
    }
    Ok(at_degree)
}

fn pad_bound(s: &TruncSeries<BigRational>, bound: u32) -> TruncSeries<BigRational> {
    let mut out = TruncSeries::zero(s.nvars(), bound.max(s.bound()));
    for (v, c) in s.iter() {
        out.set_coeff(v.clone(), c.clone());
    }
    out
}

/// Closed form of the limiting density for an orthogonal nondegenerate
/// pattern set: the Witt inverse of the product of the zeta special values
/// at `|v| * dim X` over the patterns.
pub fn orthogonal_limit_closed_form(
    x: &VarietyClass,
    v: &PatternSet,
    cutoff: i64,
) -> Result<WittDivisor> {
    if !v.is_orthogonal() {
        return Err(Error::Precondition(
            "closed form requires an orthogonal pattern set".into(),
        ));
    }
    if x.dim() == 0 {
        return Err(Error::Precondition("closed form needs dim X >= 1".into()));
    }
    let mut prod = WittDivisor::unit();
    for pat in v.vectors() {
        let norm = total_degree(pat) as i64;
        let zeta = zeta_special_value(x, norm * x.dim() as i64, cutoff)?;
        prod = prod.witt_mul(&zeta);
    }
    prod.witt_inverse(cutoff)
}

/// Count the points of `Z^d_A(X)` over `F_q` without power structures:
/// closed points of degree `r` contribute a factor
/// `(1 + sum_{a in A, r*a <= d} x^(r a))^(N_r)` and the answer is the
/// coefficient of `x^d`.
pub fn point_count_oracle(
    x: &VarietyClass,
    a: &LabelScheme,
    d: &[u32],
    q: u64,
) -> Result<BigInt> {
    if q < 2 {
        return Err(Error::Domain("point counts need q >= 2".into()));
    }
    let total = total_degree(d);
    if total > 24 {
        return Err(Error::Precondition(format!(
            "oracle degree {total} too large (cap 24)"
        )));
    }
    if total == 0 {
        return Ok(BigInt::one());
    }
    let qr = BigRational::from_integer(BigInt::from(q));
    // counts over extensions, then closed points by Möbius inversion
    let mut ext_counts = vec![BigInt::zero()]; // index 0 unused
    for r in 1..=total {
        let c = x.zeta_divisor().ghost(r as i64)?.eval(&qr)?;
        if !c.denom().is_one() || c.is_negative() {
            return Err(Error::Internal(format!(
                "preset point count over degree-{r} extension is not a nonnegative integer: {c}"
            )));
        }
        ext_counts.push(c.numer().clone());
    }
    let mut poly: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    poly.insert(vec![0; d.len()], BigInt::one());
    for r in 1..=total {
        let mut closed = BigInt::zero();
        for div in 1..=r {
            if r % div == 0 {
                closed += BigInt::from(mobius(r / div)) * &ext_counts[div as usize];
            }
        }
        let (n_r, rem) = closed.div_rem(&BigInt::from(r));
        if !rem.is_zero() || n_r.is_negative() {
            return Err(Error::Internal(format!(
                "closed-point count of degree {r} is not a nonnegative integer"
            )));
        }
        // factor = 1 + sum over scaled labels fitting under d
        let mut factor: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        factor.insert(vec![0; d.len()], BigInt::one());
        for label in box_lattice(&d.iter().map(|x| x / r).collect::<Vec<_>>()) {
            if a.contains(&label) {
                let scaled: Vec<u32> = label.iter().map(|x| x * r).collect();
                factor.insert(scaled, BigInt::one());
            }
        }
        poly = capped_mul(&poly, &capped_pow(&factor, &n_r, d), d);
    }
    Ok(poly.get(d).cloned().unwrap_or_else(BigInt::zero))
}

fn capped_mul(
    a: &BTreeMap<Vec<u32>, BigInt>,
    b: &BTreeMap<Vec<u32>, BigInt>,
    cap: &[u32],
) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out = BTreeMap::new();
    for (va, ca) in a {
        for (vb, cb) in b {
            let key: Vec<u32> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
            if key.iter().zip(cap).all(|(x, y)| x <= y) {
                let entry = out.entry(key).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
    }
    out
}

fn capped_pow(
    base: &BTreeMap<Vec<u32>, BigInt>,
    exp: &BigInt,
    cap: &[u32],
) -> BTreeMap<Vec<u32>, BigInt> {
    let mut result = BTreeMap::new();
    result.insert(vec![0; cap.len()], BigInt::one());
    let mut sq = base.clone();
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result = capped_mul(&result, &sq, cap);
        }
        if i + 1 < bits {
            sq = capped_mul(&sq, &sq, cap);
        }
    }
    result
}

/// One row of the convergence diagnostics for a finite degree against the
/// limit.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub d: Vec<u32>,
    /// Hadamard distance of the known parts at the given q.
    pub hadamard_distance: String,
    /// Largest weight-truncation level where finite and limit agree.
    pub weight_depth: i64,
    /// Largest level the horizons allow to compare.
    pub depth_cap: i64,
    /// Point-counting seminorm gaps for j = 1, 2, 3.
    pub pc_gaps: Vec<String>,
}

pub fn convergence_report(
    x: &VarietyClass,
    a: &LabelScheme,
    degrees: &[Vec<u32>],
    q: &BigRational,
    cutoff: i64,
) -> Result<Vec<ConvergenceRow>> {
    let limit = density_limit(x, a, cutoff)?;
    let mut rows = Vec::new();
    for d in degrees {
        let fin = density_finite(x, a, d, cutoff)?;
        let diff = fin.witt_sub(&limit);
        let (depth, cap) = weight_agreement_depth(&fin, &limit);
        let mut pc_gaps = Vec::new();
        for j in 1..=3 {
            pc_gaps.push(crate::witt::format_sig15(&diff.pc_seminorm(q, j)?));
        }
        rows.push(ConvergenceRow {
            d: d.clone(),
            hadamard_distance: crate::witt::format_sig15(&diff.hadamard_norm(q)?),
            weight_depth: depth,
            depth_cap: cap,
            pc_gaps,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::variety;

    fn wd(terms: &[(i64, i64)]) -> WittDivisor {
        WittDivisor::from_terms(terms.iter().copied())
    }

    fn a1() -> VarietyClass {
        variety("A1").unwrap()
    }

    #[test]
    fn full_scheme_gives_symmetric_powers() {
        let t = zerocycle_series(&a1(), &LabelScheme::Full { k: 1 }, &[4]).unwrap();
        for d in 0..=4i64 {
            assert_eq!(t.coeff(&[d as u32]).unwrap(), &wd(&[(d, 1)]));
        }
    }

    #[test]
    fn colored_conf_coefficient() {
        let t = zerocycle_series(&a1(), &LabelScheme::FiniteConf { k: 2 }, &[1, 1]).unwrap();
        assert_eq!(t.coeff(&[1, 1]).unwrap(), &wd(&[(2, 1), (1, -1)]));
        assert_eq!(t.coeff(&[0, 0]).unwrap(), &WittDivisor::unit());
    }

    #[test]
    fn pattern_complement_matches_kapranov_quotient() {
        // A = complement of (m,...,m) + Z^k: the class series equals
        // prod_i Z^Kap(t_i) / Z^Kap((t_1...t_k)^m) as a series identity.
        let m = 2u32;
        let v = PatternSet::new(2, vec![vec![m, m]]).unwrap();
        let scheme = LabelScheme::PatternComplement(v);
        let bbox = [3u32, 3u32];
        let table = zerocycle_series(&a1(), &scheme, &bbox).unwrap();

        // independent route: geometric Kapranov coefficients and a series
        // division by Z^Kap((t1 t2)^m)
        let bound: u32 = bbox.iter().sum();
        let mut kap2: TruncSeries<crate::qlaurent::QLaurent> = TruncSeries::zero(2, bound);
        for i in 0..=bbox[0] {
            for j in 0..=bbox[1] {
                kap2.set_coeff(
                    vec![i, j],
                    crate::qlaurent::QLaurent::from_int_terms([(i as i64 + j as i64, 1)]),
                );
            }
        }
        let mut denom: TruncSeries<crate::qlaurent::QLaurent> = TruncSeries::zero(2, bound);
        for j in 0..=(bound / (2 * m)) {
            denom.set_coeff(
                vec![m * j, m * j],
                crate::qlaurent::QLaurent::from_int_terms([(j as i64, 1)]),
            );
        }
        let quotient = kap2.mul(&denom.inverse().unwrap());
        for (d, c) in table.iter() {
            assert_eq!(
                &c.body().to_qlaurent(),
                &quotient.coeff(d),
                "coefficient at {d:?}"
            );
        }
    }

    #[test]
    fn conf_density_is_exact_from_degree_two() {
        // squarefree count: [Conf^d A1] = q^d - q^(d-1) for d >= 2,
        // so the density is exactly [1] - [q^-1]
        let v = PatternSet::new(1, vec![vec![2]]).unwrap();
        let scheme = LabelScheme::PatternComplement(v);
        for d in 2..=5u32 {
            let dens = density_finite(&a1(), &scheme, &[d], 6).unwrap();
            assert_eq!(dens.body(), wd(&[(0, 1), (-1, -1)]).body(), "d = {d}");
        }
        // degree 0: the empty cycle
        let dens = density_finite(&a1(), &scheme, &[0], 4).unwrap();
        assert_eq!(dens.body(), WittDivisor::unit().body());
    }

    #[test]
    fn conf_limit_closed_form_and_stabilization() {
        let v = PatternSet::new(1, vec![vec![2]]).unwrap();
        let scheme = LabelScheme::PatternComplement(v.clone());
        let lim = density_limit(&a1(), &scheme, 10).unwrap();
        assert_eq!(lim.body(), wd(&[(0, 1), (-1, -1)]).body());
        assert_eq!(lim.horizon(), Some(10));
        let closed = orthogonal_limit_closed_form(&a1(), &v, 10).unwrap();
        assert_eq!(closed.body(), lim.body());
    }

    /// The squarefree density on the projective line coincides with the
    /// twisted general-linear divisor: smooth degree-d divisors on P^1 are
    /// squarefree binary forms, and their density class is [GL_2] L^-4.
    #[test]
    fn projective_line_squarefree_density_is_twisted_gl2() {
        let p1 = variety("P1").unwrap();
        let gl2 = variety("GL2").unwrap();
        let v = PatternSet::new(1, vec![vec![2]]).unwrap();
        let scheme = LabelScheme::PatternComplement(v);
        let lim = density_limit(&p1, &scheme, 12).unwrap();
        let twisted = gl2.zeta_divisor().tate_twist(-4);
        assert_eq!(lim.body(), twisted.with_horizon(12).body());
    }

    #[test]
    fn closed_form_cubed_pattern() {
        let v = PatternSet::new(1, vec![vec![3]]).unwrap();
        let closed = orthogonal_limit_closed_form(&a1(), &v, 9).unwrap();
        assert_eq!(closed.body(), wd(&[(0, 1), (-2, -1)]).body());
    }

    #[test]
    fn closed_form_rejects_non_orthogonal() {
        let v = PatternSet::parse("2,1;1,2").unwrap();
        assert!(orthogonal_limit_closed_form(&a1(), &v, 5).is_err());
    }

    #[test]
    fn pair_pattern_limit_via_diagonal() {
        // V = {(1,1)}: Q = 1 - t1 t2, diagonal 1 - u^2, value [1] - [q^-1].
        let v = PatternSet::new(2, vec![vec![1, 1]]).unwrap();
        let scheme = LabelScheme::PatternComplement(v);
        let lim = density_limit(&a1(), &scheme, 8).unwrap();
        assert_eq!(lim.body(), wd(&[(0, 1), (-1, -1)]).body());
    }

    #[test]
    fn oracle_examples() {
        let conf2 = LabelScheme::FiniteConf { k: 2 };
        assert_eq!(
            point_count_oracle(&a1(), &conf2, &[1, 1], 2).unwrap(),
            BigInt::from(2)
        );
        // monic squarefree quadratics over F_2, enumerated by hand: x^2+x
        // and x^2+x+1 are the only squarefree ones of the four
        let v = PatternSet::new(1, vec![vec![2]]).unwrap();
        let sqfree = LabelScheme::PatternComplement(v);
        assert_eq!(
            point_count_oracle(&a1(), &sqfree, &[2], 2).unwrap(),
            BigInt::from(2)
        );
        let full = LabelScheme::Full { k: 1 };
        assert_eq!(
            point_count_oracle(&a1(), &full, &[3], 2).unwrap(),
            BigInt::from(8)
        );
    }

    #[test]
    fn oracle_matches_ghost_of_classes() {
        let schemes: Vec<LabelScheme> = vec![
            LabelScheme::Full { k: 1 },
            LabelScheme::FiniteConf { k: 2 },
            LabelScheme::PatternComplement(PatternSet::parse("2").unwrap()),
            LabelScheme::PatternComplement(PatternSet::parse("2,1;1,2").unwrap()),
        ];
        let x = a1();
        for scheme in &schemes {
            let k = scheme.k();
            let bbox = vec![3u32; k];
            let table = zerocycle_series(&x, scheme, &bbox).unwrap();
            for q in [2u64, 3] {
                let qr = BigRational::from_integer(BigInt::from(q as i64));
                for (d, class) in table.iter() {
                    if total_degree(d) > 3 {
                        continue;
                    }
                    let from_class = class.ghost(1).unwrap().eval(&qr).unwrap();
                    let from_oracle = point_count_oracle(&x, scheme, d, q).unwrap();
                    assert_eq!(
                        from_class,
                        BigRational::from_integer(from_oracle),
                        "scheme {scheme:?} at {d:?}, q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn report_conf_distance_zero() {
        let v = PatternSet::new(1, vec![vec![2]]).unwrap();
        let scheme = LabelScheme::PatternComplement(v);
        let q = BigRational::from_integer(BigInt::from(2));
        let rows =
            convergence_report(&a1(), &scheme, &[vec![2], vec![3], vec![4]], &q, 8).unwrap();
        for row in rows {
            assert_eq!(row.hadamard_distance, "0");
            assert_eq!(row.weight_depth, row.depth_cap);
        }
        // degree 0 gives the unit divisor, which still agrees with any
        // limit with leading [1] at truncation level 0
        let rows = convergence_report(&a1(), &scheme, &[vec![0]], &q, 8).unwrap();
        assert!(rows[0].weight_depth >= 0);
    }

    /// Cross-module check: the Taylor coefficients of a preset's zeta
    /// function count its effective zero-cycles, independently recounted by
    /// the closed-point oracle.
    #[test]
    fn taylor_coefficients_count_zero_cycles() {
        for spec in ["A1", "A2", "P1", "GL2"] {
            let x = variety(spec).unwrap();
            let full = LabelScheme::Full { k: 1 };
            for q in [2i64, 3] {
                let qr = BigRational::from_integer(BigInt::from(q));
                let taylor = x.zeta_divisor().divisor_to_taylor(&qr, 5).unwrap();
                for (j, c) in taylor.iter().enumerate() {
                    let count = point_count_oracle(&x, &full, &[j as u32], q as u64).unwrap();
                    assert_eq!(
                        c,
                        &BigRational::from_integer(count),
                        "{spec} degree {j} at q = {q}"
                    );
                }
            }
        }
    }
}
