//! The unified family and its relatives.
//!
//! Every member is produced two ways: by coefficient extraction from the
//! generating function and by the finite closed-form sum. The two routes
//! share only the prefactor numbers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{MultiPoly, Var, VarSet};
use crate::rational::Rational;
use crate::series::{LaurentSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `(k, A, B, alpha, m, r)` with `A = a^b` and `B = beta^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: u32,
    #[serde(rename = "A")]
    pub a: Rational,
    #[serde(rename = "B")]
    pub b: Rational,
    pub alpha: i64,
    pub m: u32,
    pub r: u32,
}

impl FamilyParams {
    pub fn new(k: u32, a: Rational, b: Rational, alpha: i64, m: u32, r: u32) -> Result<Self, FamilyError> {
        let p = FamilyParams { k, a, b, alpha, m, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.a.is_zero() {
            return Err(FamilyError::InvalidParams("A must be non-zero".into()));
        }
        if self.m == 0 || self.r == 0 {
            return Err(FamilyError::InvalidParams("m and r must be at least 1".into()));
        }
        Ok(())
    }

    /// `B / A`.
    pub fn lambda(&self) -> Rational {
        &self.b / &self.a
    }

    /// Valuation of `B e^t - A`: 1 when `B = A`, otherwise 0.
    pub fn denominator_valuation(&self) -> i64 {
        if self.a == self.b {
            1
        } else {
            0
        }
    }

    /// Valuation of the full prefactor, `alpha (k - v)`.
    pub fn prefactor_valuation(&self) -> i64 {
        self.alpha * (self.k as i64 - self.denominator_valuation())
    }

    pub fn with_alpha(&self, alpha: i64) -> Self {
        FamilyParams { alpha, ..self.clone() }
    }

    /// Same family with `A -> A^s`, `B -> B^s`.
    pub fn rescaled(&self, s: u32) -> Self {
        FamilyParams { a: self.a.pow(s as i64).unwrap(), b: self.b.pow(s as i64).unwrap(), ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    UnifiedApostolP,
    Uateghp,
    Teghabp,
    Teghaep,
    Teghagp,
    Tehp3v,
    GouldHopper,
    TruncExp,
    Tegh3v,
    Hermite2v,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::UnifiedApostolP,
        FamilyId::Uateghp,
        FamilyId::Teghabp,
        FamilyId::Teghaep,
        FamilyId::Teghagp,
        FamilyId::Tehp3v,
        FamilyId::GouldHopper,
        FamilyId::TruncExp,
        FamilyId::Tegh3v,
        FamilyId::Hermite2v,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::UnifiedApostolP => "unified-apostol",
            FamilyId::Uateghp => "uateghp",
            FamilyId::Teghabp => "teghabp",
            FamilyId::Teghaep => "teghaep",
            FamilyId::Teghagp => "teghagp",
            FamilyId::Tehp3v => "tehp3v",
            FamilyId::GouldHopper => "gould-hopper",
            FamilyId::TruncExp => "trunc-exp",
            FamilyId::Tegh3v => "tegh3v",
            FamilyId::Hermite2v => "hermite2v",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        FamilyId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == norm)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

fn x_var() -> VarSet {
    VarSet::x()
}

/// `(2^{1-k} t^k / (B e^t - A))^alpha` known through `order`.
pub fn apostol_prefactor(p: &FamilyParams, order: i64) -> Result<LaurentSeries, FamilyError> {
    p.validate()?;
    let vs = x_var();
    if p.alpha == 0 {
        return Ok(LaurentSeries::one(&vs, order.max(0)));
    }
    let v = p.denominator_valuation();
    let vp = p.prefactor_valuation();
    let m = (order - vp + v).max(v);
    let denom =
        LaurentSeries::exp_scalar(&vs, &Rational::one(), m).scale(&p.b).sub(&LaurentSeries::one(&vs, m).scale(&p.a))?;
    let two_pow = Rational::from_int(2).pow(1 - p.k as i64).unwrap();
    let base = denom.inverse()?.shift(p.k as i64).scale(&two_pow);
    Ok(base.pow(p.alpha)?.truncate(order))
}

/// Unified Apostol numbers `P_j = j! [t^j]` of the prefactor, for `j >= 0`.
pub fn apostol_numbers(p: &FamilyParams, n_max: u32) -> Result<Vec<Rational>, FamilyError> {
    let pre = apostol_prefactor(p, n_max as i64)?;
    (0..=n_max as i64)
        .map(|j| {
            let c = pre.coefficient(j)?.constant_term();
            Ok(c * Rational::factorial(j as u64))
        })
        .collect()
}

/// Generating function of the unified family with variables `x, y, z`,
/// known through `order`.
pub fn uateghp_gf(p: &FamilyParams, order: i64) -> Result<LaurentSeries, FamilyError> {
    let vs = VarSet::xyz();
    let pre = apostol_prefactor(p, order)?.with_vars(&vs)?;
    let rel = (order - p.prefactor_valuation()).max(0);
    let base = tegh_gf(&vs, p.m, p.r, rel)?;
    Ok(pre.mul(&base)?.truncate(order))
}

/// `e^{xt + yt^m} / (1 - z t^r)` through `order`, over `vars` (which must
/// contain x, y, z).
pub fn tegh_gf(vars: &VarSet, m: u32, r: u32, order: i64) -> Result<LaurentSeries, FamilyError> {
    let x = MultiPoly::var(vars, Var::X).map_err(SeriesError::from)?;
    let y = MultiPoly::var(vars, Var::Y).map_err(SeriesError::from)?;
    let z = MultiPoly::var(vars, Var::Z).map_err(SeriesError::from)?;
    let e = LaurentSeries::exp_poly_arg(vars, &[(x, 1), (y, m as i64)], order)?;
    let g = LaurentSeries::geometric(vars, &z, r, order);
    Ok(e.mul(&g)?)
}

/// `n! [t^n] f`, zero for negative `n`.
pub fn egf_coefficient(f: &LaurentSeries, n: i64) -> Result<MultiPoly, SeriesError> {
    if n < 0 {
        return Ok(MultiPoly::zero(f.vars()));
    }
    Ok(f.coefficient(n)?.scale(&Rational::factorial(n as u64)))
}

/// `P_0 ..= P_{n_max}` by generating-function extraction.
pub fn uateghp_table(p: &FamilyParams, n_max: u32) -> Result<Vec<MultiPoly>, FamilyError> {
    let gf = uateghp_gf(p, n_max as i64)?;
    (0..=n_max as i64).map(|n| egf_coefficient(&gf, n).map_err(FamilyError::from)).collect()
}

/// `P_n` by generating-function extraction. Negative subscripts give zero.
pub fn uateghp_poly(n: i64, p: &FamilyParams) -> Result<MultiPoly, FamilyError> {
    if n < 0 {
        return Ok(MultiPoly::zero(&VarSet::xyz()));
    }
    let gf = uateghp_gf(p, n)?;
    Ok(egf_coefficient(&gf, n)?)
}

/// `P_n` by the finite triple sum over the prefactor numbers. When the
/// prefactor has negative valuation the sum also runs over its negative
/// powers.
pub fn uateghp_closed(n: i64, p: &FamilyParams) -> Result<MultiPoly, FamilyError> {
    closed_form(n, p, false)
}

/// The closed form with the upper `l` bound lowered by one. Used only as a
/// negative control.
pub fn uateghp_closed_off_by_one(n: i64, p: &FamilyParams) -> Result<MultiPoly, FamilyError> {
    closed_form(n, p, true)
}

fn closed_form(n: i64, p: &FamilyParams, drop_top_l: bool) -> Result<MultiPoly, FamilyError> {
    let vs = VarSet::xyz();
    if n < 0 {
        return Ok(MultiPoly::zero(&vs));
    }
    let pre = apostol_prefactor(p, n)?;
    let (m, r) = (p.m as i64, p.r as i64);
    let mut acc = MultiPoly::zero(&vs);
    for j in pre.offset()..=n {
        let c = pre.coefficient(j)?.constant_term();
        if c.is_zero() {
            continue;
        }
        let q = n - j;
        for kz in 0..=q / r {
            let rest = q - r * kz;
            let l_top = rest / m - if drop_top_l { 1 } else { 0 };
            for l in 0..=l_top {
                let px = rest - m * l;
                let coef = &c / (Rational::factorial(l as u64) * Rational::factorial(px as u64));
                let mono =
                    MultiPoly::monomial(&vs, &[(Var::X, px as u32), (Var::Y, l as u32), (Var::Z, kz as u32)], coef)
                        .unwrap();
                acc = &acc + &mono;
            }
        }
    }
    Ok(acc.scale(&Rational::factorial(n as u64)))
}

/// Gould-Hopper `H_n^{(m)}(x, y)` by its finite sum.
pub fn gould_hopper(n: u32, m: u32) -> MultiPoly {
    assert!(m >= 1);
    let vs = VarSet::xy();
    let mut acc = MultiPoly::zero(&vs);
    for j in 0..=n / m {
        let coef =
            Rational::factorial(n as u64) / (Rational::factorial(j as u64) * Rational::factorial((n - m * j) as u64));
        acc = &acc + &MultiPoly::monomial(&vs, &[(Var::X, n - m * j), (Var::Y, j)], coef).unwrap();
    }
    acc
}

/// Truncated exponential `e_n^{(r)}(x, z)` by its finite sum.
pub fn trunc_exp(n: u32, r: u32) -> MultiPoly {
    assert!(r >= 1);
    let vs = VarSet::xz();
    let mut acc = MultiPoly::zero(&vs);
    for j in 0..=n / r {
        let coef = Rational::factorial(n as u64) / Rational::factorial((n - r * j) as u64);
        acc = &acc + &MultiPoly::monomial(&vs, &[(Var::X, n - r * j), (Var::Z, j)], coef).unwrap();
    }
    acc
}

/// Three-variable truncated exponential Gould-Hopper `eH_n^{(m,r)}(x, y, z)`
/// by its double sum.
pub fn tegh_3v(n: u32, m: u32, r: u32) -> MultiPoly {
    assert!(m >= 1 && r >= 1);
    let vs = VarSet::xyz();
    let mut acc = MultiPoly::zero(&vs);
    for kz in 0..=n / r {
        for l in 0..=(n - r * kz) / m {
            let px = n - r * kz - m * l;
            let coef = Rational::factorial(n as u64) / (Rational::factorial(l as u64) * Rational::factorial(px as u64));
            acc = &acc + &MultiPoly::monomial(&vs, &[(Var::X, px), (Var::Y, l), (Var::Z, kz)], coef).unwrap();
        }
    }
    acc
}

/// Parameters for the named special cases, with `lambda` as the Apostol
/// parameter. `alpha`, `m`, `r` come from `base`; for the generic families
/// `base` is returned unchanged.
pub fn special_params(id: FamilyId, lambda: &Rational, base: &FamilyParams) -> FamilyParams {
    let (k, a, b) = match id {
        FamilyId::Teghabp => (1, Rational::one(), lambda.clone()),
        FamilyId::Teghaep => (0, -Rational::one(), lambda.clone()),
        FamilyId::Teghagp => (1, Rational::new(-1, 2), lambda / &Rational::from_int(2)),
        _ => return base.clone(),
    };
    FamilyParams { k, a, b, ..base.clone() }
}

/// The `n`-th member of a named family.
///
/// Gould-Hopper, truncated exponential and the three-variable polynomial use
/// only `m` and `r` from `base`. The three-variable and Hermite forms fix
/// `m = r = 2`; the Hermite form then evaluates at `x -> 2x, y = -1, z = 1`.
pub fn reduce_special(id: FamilyId, n: u32, lambda: &Rational, base: &FamilyParams) -> Result<MultiPoly, FamilyError> {
    base.validate()?;
    let vs = VarSet::xyz();
    match id {
        FamilyId::GouldHopper => Ok(gould_hopper(n, base.m)),
        FamilyId::TruncExp => Ok(trunc_exp(n, base.r)),
        FamilyId::Tegh3v => Ok(tegh_3v(n, base.m, base.r)),
        FamilyId::UnifiedApostolP => {
            let p = uateghp_closed(n as i64, base)?;
            let p = p.eval_var(Var::Y, &Rational::zero()).eval_var(Var::Z, &Rational::zero());
            Ok(p.restrict_to(&x_var()).map_err(SeriesError::from)?)
        }
        FamilyId::Uateghp => uateghp_closed(n as i64, base),
        FamilyId::Teghabp | FamilyId::Teghaep | FamilyId::Teghagp => {
            uateghp_closed(n as i64, &special_params(id, lambda, base))
        }
        FamilyId::Tehp3v => {
            let p = FamilyParams { m: 2, r: 2, ..base.clone() };
            uateghp_closed(n as i64, &p)
        }
        FamilyId::Hermite2v => {
            let p = FamilyParams { m: 2, r: 2, ..base.clone() };
            let poly = uateghp_closed(n as i64, &p)?;
            let two_x = MultiPoly::var(&vs, Var::X).unwrap().scale(&Rational::from_int(2));
            let poly = poly
                .eval_var(Var::Y, &-Rational::one())
                .eval_var(Var::Z, &Rational::one())
                .substitute(Var::X, &two_x)
                .map_err(SeriesError::from)?;
            Ok(poly)
        }
    }
}
