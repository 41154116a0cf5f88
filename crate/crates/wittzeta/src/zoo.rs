//! Mixed-Tate variety presets and the zeta measure on classes in `Z[L^±1]`.
//!
//! Presets are the only source of variety data: their zeta divisors are
//! supported on integer powers of q by construction, which is exactly the
//! guarantee the rest of the crate depends on. Disjoint unions and products
//! are exposed as divisor-level constructors (the zeta measure is a ring
//! map, so divisor algebra is faithful).

use crate::error::{Error, Result};
use crate::qlaurent::IntLaurent;
use crate::witt::WittDivisor;

/// A named mixed-Tate preset: a dimension together with the divisor of its
/// zeta function. For irreducible presets the top exponent equals the
/// dimension with coefficient +1.
#[derive(Clone, Debug, PartialEq)]
pub struct VarietyClass {
    name: String,
    dim: u32,
    zeta_divisor: WittDivisor,
    irreducible: bool,
}

impl VarietyClass {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn zeta_divisor(&self) -> &WittDivisor {
        &self.zeta_divisor
    }

    pub fn irreducible(&self) -> bool {
        self.irreducible
    }

    /// Affine space `A^n`, divisor `[q^n]`.
    pub fn affine(n: u32) -> Self {
        VarietyClass {
            name: format!("A{n}"),
            dim: n,
            zeta_divisor: WittDivisor::term(1, n as i64),
            irreducible: true,
        }
    }

    /// Projective space `P^n`, divisor `[1] + [q] + ... + [q^n]`.
    pub fn projective(n: u32) -> Self {
        VarietyClass {
            name: format!("P{n}"),
            dim: n,
            zeta_divisor: WittDivisor::from_terms((0..=n as i64).map(|i| (i, 1))),
            irreducible: true,
        }
    }

    /// Split torus `G_m^r`, divisor the expansion of `(q-1)^r`.
    pub fn torus(r: u32) -> Self {
        let mut body = IntLaurent::one();
        let factor = IntLaurent::from_terms([(1, 1), (0, -1)]);
        for _ in 0..r {
            body = body.mul(&factor);
        }
        VarietyClass {
            name: format!("Gm^{r}"),
            dim: r,
            zeta_divisor: WittDivisor::from_body(body),
            irreducible: true,
        }
    }

    /// General linear group `GL_n`, divisor the expansion of
    /// `prod_{i=0}^{n-1} (q^n - q^i)`, dimension `n^2`.
    pub fn general_linear(n: u32) -> Self {
        let mut body = IntLaurent::one();
        for i in 0..n as i64 {
            body = body.mul(&IntLaurent::from_terms([(n as i64, 1), (i, -1)]));
        }
        VarietyClass {
            name: format!("GL{n}"),
            dim: n * n,
            zeta_divisor: WittDivisor::from_body(body),
            irreducible: true,
        }
    }

    /// Product: divisors Witt-multiply, dimensions add.
    pub fn product(&self, rhs: &Self) -> Self {
        VarietyClass {
            name: format!("{}x{}", self.name, rhs.name),
            dim: self.dim + rhs.dim,
            zeta_divisor: self.zeta_divisor.witt_mul(&rhs.zeta_divisor),
            irreducible: self.irreducible && rhs.irreducible,
        }
    }

    /// Disjoint union: divisors Witt-add, dimension is the max; the result
    /// is reducible.
    pub fn disjoint_union(&self, rhs: &Self) -> Self {
        VarietyClass {
            name: format!("({}+{})", self.name, rhs.name),
            dim: self.dim.max(rhs.dim),
            zeta_divisor: self.zeta_divisor.witt_add(&rhs.zeta_divisor),
            irreducible: false,
        }
    }
}

/// Parse the CLI variety grammar: `A<n>`, `P<n>` / `Pn:<n>`, `GL<n>` /
/// `GLn:<n>`, `Gm<r>` / `Gm^r:<r>`, and product expressions joined by `x`.
pub fn variety(spec: &str) -> Result<VarietyClass> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::Parse("empty variety spec".into()));
    }
    let mut parts = spec.split('x');
    let mut acc = variety_atom(parts.next().unwrap())?;
    for p in parts {
        acc = acc.product(&variety_atom(p)?);
    }
    Ok(acc)
}

fn variety_atom(tok: &str) -> Result<VarietyClass> {
    let tok = tok.trim();
    let parse_n = |s: &str, what: &str| -> Result<u32> {
        s.parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad {what} parameter in {tok:?}")))
    };
    if let Some(rest) = tok.strip_prefix("GLn:").or_else(|| tok.strip_prefix("GL")) {
        let n = parse_n(rest, "GL")?;
        if n == 0 {
            return Err(Error::Parse("GL needs n >= 1".into()));
        }
        return Ok(VarietyClass::general_linear(n));
    }
    if let Some(rest) = tok
        .strip_prefix("Gm^r:")
        .or_else(|| tok.strip_prefix("Gm^"))
        .or_else(|| tok.strip_prefix("Gm"))
    {
        if rest.is_empty() {
            return Ok(VarietyClass::torus(1));
        }
        return Ok(VarietyClass::torus(parse_n(rest, "torus")?));
    }
    if let Some(rest) = tok.strip_prefix("Pn:").or_else(|| tok.strip_prefix('P')) {
        return Ok(VarietyClass::projective(parse_n(rest, "projective")?));
    }
    if let Some(rest) = tok.strip_prefix("An:").or_else(|| tok.strip_prefix('A')) {
        return Ok(VarietyClass::affine(parse_n(rest, "affine")?));
    }
    Err(Error::Parse(format!("unknown variety {tok:?}")))
}

/// The zeta measure on `Z[L^±1]`: `L^k -> [q^k]` extended additively. On
/// this subring the ordinary product matches Witt multiplication, so the map
/// is a ring homomorphism onto its image.
pub fn class_to_divisor(class_in_l: &IntLaurent) -> WittDivisor {
    WittDivisor::from_body(class_in_l.clone())
}

/// The divisor of the j-th symmetric power of a preset.
pub fn sym_power_divisor(x: &VarietyClass, j: usize) -> Result<WittDivisor> {
    let series = x.zeta_divisor().sigma_series(j)?;
    Ok(series.into_iter().last().expect("sigma series is nonempty"))
}
