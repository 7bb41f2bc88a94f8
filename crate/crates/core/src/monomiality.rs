//! Raising and lowering operators of the unified family, realized as power
//! series in `d/dx` acting on polynomials.
//!
//! A series in `d/dx` is stored as a [`LaurentSeries`] whose formal variable
//! stands for the derivative; coefficients may involve `y` and `z`. On a
//! polynomial of x-degree at most `D` only the powers up to `D` contribute,
//! so truncating at `D` is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{FamilyError, FamilyParams};
use crate::poly::{MultiPoly, Var, VarSet};
use crate::rational::Rational;
use crate::series::{LaurentSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialityError {
    #[error("operator not available for these parameters: {0}")]
    UnsupportedOperatorDomain(String),
    #[error("polynomial has x-degree {degree}, above the operator bound {bound}")]
    DegreeExceeded { degree: u32, bound: u32 },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Sign in front of the `r z D^{r-1} / (1 - z D^r)` term.
///
/// `Derived` is the sign obtained by differentiating `1 / (1 - z t^r)`;
/// `Printed` is the opposite sign, kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationSign {
    #[default]
    Derived,
    Printed,
}

/// `x * D^x_shift + sum_j c_j D^j`, valid on polynomials of x-degree at most
/// `degree_bound`. Negative powers of `D` act as repeated antiderivatives
/// with zero integration constant.
#[derive(Debug, Clone)]
pub struct DiffOperator {
    x_shift: Option<u32>,
    series: LaurentSeries,
    degree_bound: u32,
    convention_dependent: bool,
}

impl DiffOperator {
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    /// True when the operator has a `D^{-1}` part, whose action depends on
    /// the choice of integration constant.
    pub fn is_convention_dependent(&self) -> bool {
        self.convention_dependent
    }

    pub fn series(&self) -> &LaurentSeries {
        &self.series
    }

    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly, MonomialityError> {
        let vs = VarSet::xyz();
        let p = p.extend_to(&vs).map_err(SeriesError::from)?;
        let deg = p.degree_in(Var::X).unwrap_or(0);
        if deg > self.degree_bound {
            return Err(MonomialityError::DegreeExceeded { degree: deg, bound: self.degree_bound });
        }
        let mut acc = MultiPoly::zero(&vs);
        if let Some(s) = self.x_shift {
            let x = MultiPoly::var(&vs, Var::X).unwrap();
            acc = &acc + &(&x * &p.derivative_n(Var::X, s));
        }
        let top = (deg as i64).min(self.series.order());
        for j in self.series.offset()..=top {
            let c = self.series.coefficient(j)?;
            if c.is_zero() {
                continue;
            }
            let mut d = p.clone();
            if j >= 0 {
                d = d.derivative_n(Var::X, j as u32);
            } else {
                for _ in 0..(-j) {
                    d = d.antiderivative(Var::X).map_err(SeriesError::from)?;
                }
            }
            acc = &acc + &(&c * &d);
        }
        Ok(acc)
    }
}

/// `d/dx`.
pub fn lowering(p: &MultiPoly) -> MultiPoly {
    p.derivative(Var::X)
}

/// `alpha B e^D / (B e^D - A)` through `order`.
fn apostol_log_derivative(fp: &FamilyParams, order: i64) -> Result<LaurentSeries, SeriesError> {
    let vs = VarSet::xyz();
    let work = order + 4;
    let e = LaurentSeries::exp_scalar(&vs, &Rational::one(), work);
    let num = e.scale(&fp.b);
    let den = num.sub(&LaurentSeries::one(&vs, work).scale(&fp.a))?;
    Ok(num.mul(&den.inverse()?)?.scale(&Rational::from_int(fp.alpha)).truncate(order))
}

/// `m y D^{m-1} + sign * sum_{j>=1} r z^j D^{rj-1} + alpha k / D - alpha B e^D / (B e^D - A)`.
fn raising_series(fp: &FamilyParams, order: i64, sign: TruncationSign) -> Result<LaurentSeries, SeriesError> {
    let vs = VarSet::xyz();
    let y = MultiPoly::var(&vs, Var::Y).unwrap();
    let z = MultiPoly::var(&vs, Var::Z).unwrap();
    let mut terms: Vec<(i64, MultiPoly)> = vec![(fp.m as i64 - 1, y.scale(&Rational::from_int(fp.m)))];
    let sgn = match sign {
        TruncationSign::Derived => Rational::one(),
        TruncationSign::Printed => -Rational::one(),
    };
    let r = fp.r as i64;
    let mut zj = z.clone();
    let mut j = 1;
    while r * j - 1 <= order {
        terms.push((r * j - 1, zj.scale(&(&sgn * &Rational::from_int(r)))));
        zj = &zj * &z;
        j += 1;
    }
    terms.push((-1, MultiPoly::constant(&vs, Rational::from_int(fp.alpha * fp.k as i64))));
    let poly_part = LaurentSeries::from_terms(&vs, &terms, order);
    poly_part.sub(&apostol_log_derivative(fp, order)?)
}

/// The raising operator on polynomials of x-degree at most `degree_bound`.
///
/// When `B = A` the last term has a simple pole with residue `alpha`, so
/// the total `D^{-1}` coefficient is `alpha (k - 1)`; only `k = 1` (or
/// `alpha = 0`) leaves a genuine series. For `B != A` a non-zero `alpha k`
/// makes the result depend on the antiderivative convention.
pub fn raising_operator(
    fp: &FamilyParams,
    degree_bound: u32,
    sign: TruncationSign,
) -> Result<DiffOperator, MonomialityError> {
    fp.validate()?;
    let series = raising_series(fp, degree_bound as i64, sign)?;
    let residue = series.coefficient(-1)?.constant_term();
    if fp.a == fp.b && !residue.is_zero() {
        return Err(MonomialityError::UnsupportedOperatorDomain(format!(
            "B = A with k = {} leaves a pole of residue {residue} in the raising operator",
            fp.k
        )));
    }
    Ok(DiffOperator { x_shift: Some(0), series, degree_bound, convention_dependent: !residue.is_zero() })
}

pub fn raising(p: &MultiPoly, fp: &FamilyParams, degree_bound: u32) -> Result<MultiPoly, MonomialityError> {
    raising_operator(fp, degree_bound, TruncationSign::Derived)?.apply(p)
}

/// The operator `x D + m y D^m + alpha k + sign * r z D^r / (1 - z D^r)
/// - alpha B e^D D / (B e^D - A) - n`, i.e. the raising operator composed
/// with `D` minus `n`. It is a power series in `D` for every parameter set.
pub fn diffeq_operator(
    n: u32,
    fp: &FamilyParams,
    degree_bound: u32,
    sign: TruncationSign,
) -> Result<DiffOperator, MonomialityError> {
    fp.validate()?;
    let vs = VarSet::xyz();
    let shifted = raising_series(fp, degree_bound as i64 + 1, sign)?.shift(1);
    let minus_n =
        LaurentSeries::constant(&vs, MultiPoly::constant(&vs, Rational::from_int(-(n as i64))), degree_bound as i64);
    let series = shifted.add(&minus_n)?.truncate(degree_bound as i64);
    Ok(DiffOperator { x_shift: Some(1), series, degree_bound, convention_dependent: false })
}

/// Residual of the differential equation applied to `P_n`; zero when the
/// equation holds.
pub fn diffeq_residual(n: u32, fp: &FamilyParams) -> Result<MultiPoly, MonomialityError> {
    diffeq_residual_with(n, fp, TruncationSign::Derived)
}

pub fn diffeq_residual_with(n: u32, fp: &FamilyParams, sign: TruncationSign) -> Result<MultiPoly, MonomialityError> {
    let p = crate::families::uateghp_poly(n as i64, fp)?;
    diffeq_operator(n, fp, n, sign)?.apply(&p)
}
