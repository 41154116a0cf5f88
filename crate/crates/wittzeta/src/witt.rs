//! The Witt ring on q-supported divisors and its three topologies.
//!
//! A `WittDivisor` is an integer Laurent polynomial read as the formal
//! divisor `sum_e k_e [q^e]` of a rational function with constant term 1:
//! Witt addition is the coefficientwise sum (the ordinary product of the
//! underlying functions) and Witt multiplication is the exponent convolution
//! determined by `[q^a] *W [q^b] = [q^(a+b)]`.
//!
//! Divisors obtained from limits are truncated: the optional exactness
//! horizon `H` records that coefficients at exponents below `-H` are not
//! asserted. Operations propagate the weakest horizon of their operands so
//! staleness stays checkable instead of silently corrupting low weights.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qlaurent::{rational_pow, IntLaurent, QLaurent};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct WittDivisor {
    body: IntLaurent,
    /// Coefficients at exponents `< -horizon` are not asserted.
    horizon: Option<i64>,
}

impl WittDivisor {
    pub fn zero() -> Self {
        WittDivisor {
            body: IntLaurent::zero(),
            horizon: None,
        }
    }

    /// The Witt unit `[1] = [q^0]`.
    pub fn unit() -> Self {
        Self::term(1, 0)
    }

    /// The single term `k * [q^e]`.
    pub fn term(k: i64, e: i64) -> Self {
        WittDivisor {
            body: IntLaurent::from_terms([(e, k)]),
            horizon: None,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        WittDivisor {
            body: IntLaurent::from_terms(iter),
            horizon: None,
        }
    }

    pub fn from_body(body: IntLaurent) -> Self {
        WittDivisor {
            body,
            horizon: None,
        }
    }

    /// Attach an exactness horizon, dropping the unasserted terms.
    pub fn with_horizon(mut self, horizon: i64) -> Self {
        self.body = self.body.truncate_below(-horizon);
        self.horizon = Some(horizon);
        self
    }

    pub fn body(&self) -> &IntLaurent {
        &self.body
    }

    pub fn horizon(&self) -> Option<i64> {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        self.horizon.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.body.coeff(e)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.body.min_exp()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.body.max_exp()
    }

    pub fn num_terms(&self) -> usize {
        self.body.num_terms()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&i64, &BigInt)> {
        self.body.iter()
    }

    fn combined_horizon(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (None, None) => None,
            (Some(h), None) | (None, Some(h)) => Some(h),
            (Some(h1), Some(h2)) => Some(h1.min(h2)),
        }
    }

    fn normalized(mut self) -> Self {
        if let Some(h) = self.horizon {
            self.body = self.body.truncate_below(-h);
        }
        self
    }

    /// Witt addition: coefficientwise integer sum.
    pub fn witt_add(&self, rhs: &Self) -> Self {
        WittDivisor {
            body: self.body.add(&rhs.body),
            horizon: Self::combined_horizon(self.horizon, rhs.horizon),
        }
        .normalized()
    }

    pub fn witt_neg(&self) -> Self {
        WittDivisor {
            body: self.body.neg(),
            horizon: self.horizon,
        }
    }

    pub fn witt_sub(&self, rhs: &Self) -> Self {
        self.witt_add(&rhs.witt_neg())
    }

    /// Witt multiplication: bilinear extension of `[q^a] *W [q^b] = [q^(a+b)]`.
    ///
    /// For truncated operands the result is exact wherever the convolution
    /// involves no unasserted coefficient: unknown terms of one operand sit
    /// below `-h` and pair with known terms up to the other's top exponent,
    /// so the result horizon is `min(h_i - max_exp(other))`.
    pub fn witt_mul(&self, rhs: &Self) -> Self {
        // An exact zero annihilates even unknown tails.
        if (self.is_zero() && self.is_exact()) || (rhs.is_zero() && rhs.is_exact()) {
            return Self::zero();
        }
        let mut horizon = None;
        for (trunc, other) in [(self, rhs), (rhs, self)] {
            if let Some(h) = trunc.horizon {
                let bound = match other.max_exp() {
                    Some(m) => h - m,
                    // The other known part is empty but truncated; unknown
                    // pairs with unknown below -(h + h_other).
                    None => h + other.horizon.expect("exact zero handled above"),
                };
                horizon = Self::combined_horizon(horizon, Some(bound));
            }
        }
        WittDivisor {
            body: self.body.mul(&rhs.body),
            horizon,
        }
        .normalized()
    }

    /// Witt inverse, exact on exponents `>= -cutoff`.
    ///
    /// Requires `D = s*[q^m] + (lower order)` with `s = +-1`: the leading
    /// term is factored out and the remaining unit `1 + N` (with `N`
    /// supported in negative exponents) is inverted by graded recursion on
    /// descending exponents.
    pub fn witt_inverse(&self, cutoff: i64) -> Result<Self> {
        let m = self.max_exp().ok_or_else(|| {
            Error::NonInvertible("the zero divisor has no Witt inverse".into())
        })?;
        let lead = self.coeff(m);
        let sign = if lead == BigInt::one() {
            1
        } else if lead == -BigInt::one() {
            -1
        } else {
            return Err(Error::NonInvertible(format!(
                "leading coefficient {lead} at [q^{m}] is not +-1"
            )));
        };
        // E is made exact on exponents >= -(cutoff + max(m, 0)); then the
        // round-trip product D *W E is exact on >= -cutoff by the horizon
        // rule, not just true there.
        let horizon_e = cutoff + m.max(0);
        let window = horizon_e - m; // invert 1+N on exponents >= -window
        if let Some(h) = self.horizon {
            if h + m < window {
                return Err(Error::Truncation(format!(
                    "inverse to cutoff {cutoff} needs exponents >= {}, horizon gives {}",
                    m - window,
                    -h
                )));
            }
        }
        // N = s*D*[q^-m] - [1], supported in exponents < 0.
        let mut n = self.body.shift(-m);
        if sign < 0 {
            n = n.neg();
        }
        n.add_term(0, BigInt::from(-1));

        let mut inv = IntLaurent::one();
        for e in (-window..0).rev() {
            // coefficient of q^e in (1+N)*inv must vanish
            let mut acc = BigInt::zero();
            for (a, ca) in n.iter() {
                if *a >= e {
                    let b = e - a;
                    let cb = inv.coeff(b);
                    if !cb.is_zero() {
                        acc += ca * cb;
                    }
                }
            }
            if !acc.is_zero() {
                inv.add_term(e, -acc);
            }
        }
        let mut body = inv.shift(-m);
        if sign < 0 {
            body = body.neg();
        }
        Ok(WittDivisor {
            body,
            horizon: Some(horizon_e),
        }
        .normalized())
    }

    /// The j-th ghost coordinate as a symbolic Laurent polynomial:
    /// `sum_e k_e q^(j*e)`. For a variety's zeta divisor this evaluates at a
    /// prime power to the point count over the degree-j extension.
    ///
    /// For truncated divisors only the known part contributes.
    pub fn ghost(&self, j: i64) -> Result<QLaurent> {
        if j <= 0 {
            return Err(Error::Domain(format!("ghost index must be positive, got {j}")));
        }
        Ok(self.body.to_qlaurent().scale_exponents(j))
    }

    /// `sum_e |k_e| q0^e`, exact.
    pub fn hadamard_norm(&self, q0: &BigRational) -> Result<BigRational> {
        if !q0.is_positive() {
            return Err(Error::Domain("Hadamard norm needs q0 > 0".into()));
        }
        let mut acc = BigRational::zero();
        for (e, c) in self.body.iter() {
            acc += BigRational::from_integer(c.abs()) * rational_pow(q0, *e)?;
        }
        Ok(acc)
    }

    /// `max_e q0^e` over the support; 0 for the zero divisor.
    pub fn weight_norm(&self, q0: &BigRational) -> Result<BigRational> {
        if !q0.is_positive() {
            return Err(Error::Domain("weight norm needs q0 > 0".into()));
        }
        let mut best = BigRational::zero();
        for (e, _) in self.body.iter() {
            let v = rational_pow(q0, *e)?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }

    /// The j-th point-counting seminorm `|sum_e k_e (q0^e)^j|`, exact.
    pub fn pc_seminorm(&self, q0: &BigRational, j: i64) -> Result<BigRational> {
        Ok(self.ghost(j)?.eval(q0)?.abs())
    }

    /// Tate twist: Witt multiplication by `[q^k]`, i.e. the exponent shift
    /// `e -> e + k`; the horizon shifts along.
    pub fn tate_twist(&self, k: i64) -> Self {
        WittDivisor {
            body: self.body.shift(k),
            horizon: self.horizon.map(|h| h - k),
        }
    }

    /// Weight truncation: keeps the part supported where `|z| >= q^(-m/2)`,
    /// i.e. exponents with `2e >= -m` (resolved in integers, no floats).
    ///
    /// If the kept window lies inside the known region the result is exact.
    pub fn tau_truncate(&self, m: i64) -> Self {
        let mut out = IntLaurent::zero();
        for (e, c) in self.body.iter() {
            if 2 * e >= -m {
                out.add_term(*e, c.clone());
            }
        }
        let horizon = match self.horizon {
            Some(h) if 2 * h < m => Some(h),
            _ => None,
        };
        WittDivisor { body: out, horizon }
    }

    /// Taylor coefficients at 0 of `prod_e (1 - q0^e t)^(-k_e)` up to `t^N`,
    /// via the Newton recursion `n c_n = sum_j g_j c_(n-j)` on the ghost
    /// values `g_j = sum_e k_e q0^(je)`.
    pub fn divisor_to_taylor(&self, q0: &BigRational, n: usize) -> Result<Vec<BigRational>> {
        if !self.is_exact() {
            return Err(Error::Precondition(
                "Taylor expansion needs a finite divisor".into(),
            ));
        }
        if q0.is_zero() {
            return Err(Error::Domain("Taylor expansion needs q0 != 0".into()));
        }
        let mut ghosts = Vec::with_capacity(n + 1);
        ghosts.push(BigRational::zero()); // unused g_0 slot
        for j in 1..=n {
            ghosts.push(self.ghost(j as i64)?.eval(q0)?);
        }
        let mut coeffs = vec![BigRational::one()];
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &ghosts[j] * &coeffs[k - j];
            }
            coeffs.push(acc / BigRational::from_integer(BigInt::from(k)));
        }
        Ok(coeffs)
    }

    /// Coefficients of `sigma_s(D) = prod_e (1 - s[q^e])^(-k_e)` up to `s^J`,
    /// expanded by series multiplication over the Witt coefficient ring.
    /// Coefficient `j` is the divisor of the j-th symmetric power when `D`
    /// is a variety's zeta divisor.
    pub fn sigma_series(&self, j_max: usize) -> Result<Vec<WittDivisor>> {
        if !self.is_exact() {
            return Err(Error::Precondition(
                "sigma series needs a finite divisor".into(),
            ));
        }
        // series in s with IntLaurent coefficients; index = power of s
        let mut acc: Vec<IntLaurent> = vec![IntLaurent::one()];
        acc.resize(j_max + 1, IntLaurent::zero());
        let mul_factor = |acc: &[IntLaurent], factor: &[IntLaurent]| -> Vec<IntLaurent> {
            let mut out = vec![IntLaurent::zero(); j_max + 1];
            for (i, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, f) in factor.iter().enumerate() {
                    if i + j > j_max || f.is_zero() {
                        continue;
                    }
                    let prod = a.mul(f);
                    out[i + j].add_assign(&prod);
                }
            }
            out
        };
        for (e, k) in self.body.iter() {
            let count = num_traits::ToPrimitive::to_u64(&k.abs()).ok_or_else(|| {
                Error::Precondition(format!("coefficient {k} too large for sigma series"))
            })?;
            if k.is_positive() {
                // 1/(1 - s[q^e]) = sum_j [q^(je)] s^j
                let geom: Vec<IntLaurent> = (0..=j_max)
                    .map(|j| IntLaurent::monomial(BigInt::one(), e * j as i64))
                    .collect();
                for _ in 0..count {
                    acc = mul_factor(&acc, &geom);
                }
            } else {
                // 1 - s[q^e]
                let lin = vec![
                    IntLaurent::one(),
                    IntLaurent::monomial(BigInt::from(-1), *e),
                ];
                for _ in 0..count {
                    acc = mul_factor(&acc, &lin);
                }
            }
        }
        Ok(acc.into_iter().map(WittDivisor::from_body).collect())
    }

    /// Zero/pole data of `sigma_s(D)` read off the sign decomposition:
    /// positive coefficients give poles, negative ones give zeros.
    pub fn sigma_rational(&self) -> SigmaRationalForm {
        let mut zeros = Vec::new();
        let mut poles = Vec::new();
        for (e, k) in self.body.iter() {
            let mult = num_traits::ToPrimitive::to_usize(&k.abs()).unwrap_or(usize::MAX);
            if k.is_positive() {
                poles.extend(std::iter::repeat_n(*e, mult));
            } else {
                zeros.extend(std::iter::repeat_n(*e, mult));
            }
        }
        zeros.sort_unstable_by(|a, b| b.cmp(a));
        poles.sort_unstable_by(|a, b| b.cmp(a));
        SigmaRationalForm { zeros, poles }
    }

    /// True when the two divisors have the same coefficients at every
    /// exponent `>= -h`.
    pub fn agrees_to(&self, other: &Self, h: i64) -> bool {
        self.tau_truncate(2 * h).body == other.tau_truncate(2 * h).body
    }
}

/// Largest `m` (capped by what the horizons allow) such that the weight
/// truncations `tau_m` of the two divisors agree; -1 if they differ already
/// at `tau_0`. Returns `(depth, cap)`.
pub fn weight_agreement_depth(a: &WittDivisor, b: &WittDivisor) -> (i64, i64) {
    let mut cap = i64::MAX;
    for d in [a, b] {
        if let Some(h) = d.horizon() {
            cap = cap.min(2 * h);
        }
    }
    if cap == i64::MAX {
        // both exact: beyond twice the deepest support nothing changes
        let deepest = a
            .min_exp()
            .into_iter()
            .chain(b.min_exp())
            .map(|e| 2 * e.abs())
            .max()
            .unwrap_or(0);
        cap = deepest;
    }
    let mut depth = -1;
    for m in 0..=cap {
        if a.tau_truncate(m).body() == b.tau_truncate(m).body() {
            depth = m;
        } else {
            break;
        }
    }
    (depth, cap)
}

/// Zeros and poles (exponent multisets, descending) of the sigma series of a
/// q-supported divisor. Common entries cancel on construction by virtue of
/// coming from a single signed coefficient per exponent.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SigmaRationalForm {
    pub zeros: Vec<i64>,
    pub poles: Vec<i64>,
}

impl fmt::Display for WittDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_zero() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (e, c) in self.body.iter().rev() {
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
                let unit = mag.is_one();
                match (*e, unit) {
                    (0, true) => write!(f, "[1]")?,
                    (0, false) => write!(f, "{mag}[1]")?,
                    (1, true) => write!(f, "[q]")?,
                    (1, false) => write!(f, "{mag}[q]")?,
                    (_, true) => write!(f, "[q^{e}]")?,
                    (_, false) => write!(f, "{mag}[q^{e}]")?,
                }
            }
        }
        if let Some(h) = self.horizon {
            write!(f, " + O([q^{}])", -h - 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for WittDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WittDivisor({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: i64,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct DivisorJson {
    horizon: Option<i64>,
    terms: Vec<TermJson>,
}

impl Serialize for WittDivisor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .body
            .iter()
            .rev() // descending exponent
            .map(|(e, c)| TermJson {
                exp: *e,
                coeff: c.to_string(),
            })
            .collect();
        DivisorJson {
            horizon: self.horizon,
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WittDivisor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = DivisorJson::deserialize(deserializer)?;
        let mut body = IntLaurent::zero();
        for t in raw.terms {
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|e| D::Error::custom(format!("bad coefficient {:?}: {e}", t.coeff)))?;
            body.add_term(t.exp, c);
        }
        let d = WittDivisor {
            body,
            horizon: raw.horizon,
        };
        Ok(d.normalized())
    }
}

/// Round a nonnegative exact rational to 15 significant digits, half-even,
/// and print it as a plain decimal (trailing zeros trimmed). Matches the
/// printed precision of the norm tables.
pub fn format_sig15(r: &BigRational) -> String {
    format_significant(r, 15)
}

pub fn format_significant(r: &BigRational, digits: u32) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.numer().abs();
    let b = r.denom().abs();

    // e10 = floor(log10(a/b)): the exponent of the leading digit.
    let mut e10 = (digit_count(&a) as i64) - (digit_count(&b) as i64);
    // digit_count gives log10 within 1; correct by comparison.
    loop {
        // a/b >= 10^e10 ?
        let holds = if e10 >= 0 {
            a >= &b * BigInt::from(10u32).pow(e10 as u32)
        } else {
            &a * BigInt::from(10u32).pow((-e10) as u32) >= b
        };
        if holds {
            if e10 >= 0 {
                if a < &b * BigInt::from(10u32).pow(e10 as u32 + 1) {
                    break;
                }
            } else if &a * BigInt::from(10u32).pow((-e10) as u32) < &b * BigInt::from(10u32) {
                break;
            }
            e10 += 1;
        } else {
            e10 -= 1;
        }
    }

    // significand = round_half_even(a * 10^(digits-1-e10) / b)
    let shift = digits as i64 - 1 - e10;
    let (num, den) = if shift >= 0 {
        (&a * BigInt::from(10u32).pow(shift as u32), b.clone())
    } else {
        (a.clone(), &b * BigInt::from(10u32).pow((-shift) as u32))
    };
    let (mut quot, rem) = num_integer::Integer::div_rem(&num, &den);
    let twice = &rem * BigInt::from(2);
    if twice > den || (twice == den && num_integer::Integer::is_odd(&quot)) {
        quot += 1;
    }
    let mut sig = quot.to_string();
    if sig.len() as u32 > digits {
        // carry 999... -> 1000...: drop the extra trailing zero
        sig.truncate(digits as usize);
        e10 += 1;
    }

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e10 >= 0 {
        let int_len = (e10 + 1) as usize;
        if int_len >= sig.len() {
            out.push_str(&sig);
            out.push_str(&"0".repeat(int_len - sig.len()));
        } else {
            out.push_str(&sig[..int_len]);
            let frac = sig[int_len..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e10 - 1) as usize));
        out.push_str(sig.trim_end_matches('0'));
    }
    out
}

fn digit_count(n: &BigInt) -> usize {
    n.to_string().trim_start_matches('-').len()
}
