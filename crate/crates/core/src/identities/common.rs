use crate::poly::{MultiPoly, Var, VarSet};
use crate::rational::{binomial, Rational};
use crate::series::{LaurentSeries, SeriesError};

use super::approx::ApproxPoly;
use super::{Counterexample, IdentityError, Outcome};

const CAPITALS: [(Var, Var); 3] = [(Var::X, Var::BigX), (Var::Y, Var::BigY), (Var::Z, Var::BigZ)];
const LOWERS: [(Var, Var); 3] = [(Var::BigX, Var::X), (Var::BigY, Var::Y), (Var::BigZ, Var::Z)];

pub(crate) fn all() -> VarSet {
    VarSet::all()
}

/// A polynomial in `x, y, z` over all six variables, optionally renamed to
/// `X, Y, Z`.
pub(crate) fn lift(p: &MultiPoly, capital: bool) -> MultiPoly {
    if capital {
        p.rename_into(&CAPITALS, &all()).expect("xyz renames into the full set")
    } else {
        p.extend_to(&all()).expect("xyz extends to the full set")
    }
}

/// `P(c x + shift, c^m y, c^r z)` lifted to all six variables.
pub(crate) fn rescaled(p: &MultiPoly, c: &Rational, shift: &Rational, m: u32, r: u32, capital: bool) -> MultiPoly {
    let q = p
        .shift_var(Var::X, shift)
        .scale_var(Var::X, c)
        .scale_var(Var::Y, &rpow(c, m as i64))
        .scale_var(Var::Z, &rpow(c, r as i64));
    lift(&q, capital)
}

/// Identifies `X, Y, Z` with `x, y, z` when `merge` is set.
pub(crate) fn merged(p: &MultiPoly, merge: bool) -> MultiPoly {
    if merge {
        p.rename_into(&LOWERS, p.vars()).expect("capitals rename within the set")
    } else {
        p.clone()
    }
}

pub(crate) fn rpow(c: &Rational, e: i64) -> Rational {
    c.pow(e).expect("power of a non-zero rational")
}

pub(crate) fn binom(n: i64, k: i64) -> Rational {
    if k < 0 || k > n {
        return Rational::zero();
    }
    Rational::from(binomial(n as u64, k as u64))
}

pub(crate) fn fact(n: i64) -> Rational {
    Rational::factorial(n as u64)
}

pub(crate) fn int(v: i64) -> Rational {
    Rational::from_int(v)
}

/// `P_j` with zero for negative `j`.
pub(crate) struct Table(pub Vec<MultiPoly>);

impl Table {
    pub fn get(&self, j: i64) -> MultiPoly {
        if j < 0 {
            return MultiPoly::zero(self.0[0].vars());
        }
        self.0[j as usize].clone()
    }
}

/// `n! [t^n] f`.
pub(crate) fn egf(f: &LaurentSeries, n: i64) -> Result<MultiPoly, SeriesError> {
    crate::families::egf_coefficient(f, n)
}

/// Builds a series with `build(working_order)` and raises the working order
/// until the result is known through `order`.
pub(crate) fn with_precision<F>(order: i64, build: F) -> Result<LaurentSeries, IdentityError>
where
    F: Fn(i64) -> Result<LaurentSeries, IdentityError>,
{
    let mut work = order.max(0);
    for _ in 0..64 {
        let s = build(work)?;
        if s.order() >= order {
            return Ok(s.truncate(order));
        }
        work += (order - s.order()).max(1);
    }
    Err(IdentityError::invalid("could not reach the requested order"))
}

fn counterexample(n: i64, lhs: &MultiPoly, rhs: &MultiPoly) -> Counterexample {
    Counterexample { n, lhs: lhs.to_string(), rhs: rhs.to_string(), difference: (lhs - rhs).to_string(), variant: None }
}

/// Exact comparison; the first mismatch is the counterexample.
pub(crate) fn compare<I>(rows: I) -> Outcome
where
    I: IntoIterator<Item = (i64, MultiPoly, MultiPoly)>,
{
    for (n, lhs, rhs) in rows {
        let (l, r) = align(&lhs, &rhs);
        if l != r {
            return Outcome::Fail(counterexample(n, &l, &r));
        }
    }
    Outcome::Exact
}

/// Comparison of an exact side against one carrying certified error
/// bounds. Reports `Exact` only when every bound is zero.
pub(crate) fn compare_approx<I>(rows: I) -> Outcome
where
    I: IntoIterator<Item = (i64, MultiPoly, ApproxPoly)>,
{
    let mut exact = true;
    for (n, lhs, rhs) in rows {
        let (l, value) = align(&lhs, &rhs.value);
        let (_, bound) = align(&lhs, &rhs.bound);
        let rhs = ApproxPoly { value, bound };
        if !rhs.contains(&l) {
            return Outcome::Fail(Counterexample {
                difference: format!("{} (bound {})", &l - &rhs.value, rhs.bound),
                ..counterexample(n, &l, &rhs.value)
            });
        }
        exact &= rhs.is_exact() && l == rhs.value;
    }
    if exact {
        Outcome::Exact
    } else {
        Outcome::WithinEps
    }
}

fn align(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let vs = a.vars().merge(b.vars()).expect("variable sets merge");
    (a.extend_to(&vs).unwrap(), b.extend_to(&vs).unwrap())
}

/// `B e^{c t} - A` over `vars`.
pub(crate) fn apostol_den(
    vars: &VarSet,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    order: i64,
) -> Result<LaurentSeries, SeriesError> {
    LaurentSeries::exp_scalar(vars, c, order).scale(b).sub(&LaurentSeries::one(vars, order).scale(a))
}

/// `e^{cx * u t + cy * v t^m}` where `u, v` are the given variables.
pub(crate) fn gh_exp(
    vars: &VarSet,
    u: Var,
    cx: &Rational,
    v: Var,
    cy: &Rational,
    m: u32,
    order: i64,
) -> Result<LaurentSeries, SeriesError> {
    let pu = MultiPoly::var(vars, u)?.scale(cx);
    let pv = MultiPoly::var(vars, v)?.scale(cy);
    LaurentSeries::exp_poly_arg(vars, &[(pu, 1), (pv, m as i64)], order)
}

/// `1 / (1 - cz * w t^r)`.
pub(crate) fn trunc_geom(
    vars: &VarSet,
    w: Var,
    cz: &Rational,
    r: u32,
    order: i64,
) -> Result<LaurentSeries, SeriesError> {
    let pw = MultiPoly::var(vars, w)?.scale(cz);
    Ok(LaurentSeries::geometric(vars, &pw, r, order))
}

/// `(2^{1-k} t^k)^e`.
pub(crate) fn two_tk(vars: &VarSet, k: u32, e: i64, order: i64) -> LaurentSeries {
    let c = rpow(&int(2), (1 - k as i64) * e);
    let power = k as i64 * e;
    LaurentSeries::monomial(vars, MultiPoly::constant(vars, c), power, order + power.abs())
}

/// `1` added to the constant term of `p`.
pub(crate) fn bump(p: &MultiPoly) -> MultiPoly {
    p + &MultiPoly::one(p.vars())
}
