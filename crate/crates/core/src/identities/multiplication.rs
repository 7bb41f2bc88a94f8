//! Multiplication formulas `P_n(sx, s^m y, s^r z)` in terms of the family
//! with parameters `(A^s, B^s)`.

use crate::auxiliary::{multinomial_compositions, nondecreasing_compositions, Composition};
use crate::families::{uateghp_table, FamilyParams};
use crate::poly::{MultiPoly, Var, VarSet};
use crate::rational::Rational;
use crate::series::LaurentSeries;

use super::common::*;
use super::{IdentityError, Perturbation, Reading, Sample, Verdict, VerifyOptions};

/// `(2^{1-k} t^k / (B e^t - A))^alpha e^{s x t + s^m y t^m} / (1 - s^r z t^r)`.
fn master(p: &FamilyParams, s: u32, order: i64) -> Result<LaurentSeries, IdentityError> {
    let vs = VarSet::xyz();
    let sr = int(s as i64);
    with_precision(order, |w| {
        let den = apostol_den(&vs, &p.a, &p.b, &Rational::one(), w)?;
        let e = gh_exp(&vs, Var::X, &sr, Var::Y, &rpow(&sr, p.m as i64), p.m, w)?;
        let g = trunc_geom(&vs, Var::Z, &rpow(&sr, p.r as i64), p.r, w)?;
        Ok(two_tk(&vs, p.k, p.alpha, w).mul(&den.pow(-p.alpha)?)?.mul(&e)?.mul(&g)?)
    })
}

/// `P(sx, s^m y, s^r z)` for `n = 0..=n_max`.
fn lhs_table(p: &FamilyParams, s: u32, n_max: u32) -> Result<Vec<MultiPoly>, IdentityError> {
    let sr = int(s as i64);
    Ok(uateghp_table(p, n_max)?
        .into_iter()
        .map(|q| {
            q.scale_var(Var::X, &sr).scale_var(Var::Y, &rpow(&sr, p.m as i64)).scale_var(Var::Z, &rpow(&sr, p.r as i64))
        })
        .collect())
}

/// `sum_comp coef lambda^l Q_j(x + l/s, y, z)`, where `Q` is a table over
/// `x, y, z`. With `bump_plain` the weight-zero term gets `+1`.
fn composition_sum(comps: &[Composition], lambda: &Rational, s: u32, q: &MultiPoly, bump_plain: bool) -> MultiPoly {
    let mut acc = MultiPoly::zero(q.vars());
    for c in comps {
        let l = c.weight as i64;
        let shifted = q.shift_var(Var::X, &Rational::new(l, s as i64));
        let shifted = if bump_plain && l == 0 { bump(&shifted) } else { shifted };
        acc.add_assign_scaled(&shifted, &(Rational::from(c.coefficient.clone()) * rpow(lambda, l)));
    }
    acc
}

fn s_param(sample: &Sample, even: bool) -> Result<u32, IdentityError> {
    let s = sample.s.ok_or_else(|| IdentityError::invalid("s is required"))?;
    if s == 0 {
        return Err(IdentityError::invalid("s must be positive"));
    }
    if even && s % 2 == 1 {
        return Err(IdentityError::invalid("the even formula needs an even s"));
    }
    if !even && s % 2 == 0 {
        return Err(IdentityError::invalid("the odd formula needs an odd s"));
    }
    Ok(s)
}

fn oracle_rows(
    p: &FamilyParams,
    s: u32,
    n_max: i64,
    rhs: &[MultiPoly],
) -> Result<Vec<(i64, MultiPoly, MultiPoly)>, IdentityError> {
    let m = master(p, s, n_max)?;
    (0..=n_max).map(|n| Ok((n, egf(&m, n)?, rhs[n as usize].clone()))).collect()
}

pub(super) fn odd(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let p = &sample.family;
    let s = s_param(sample, false)?;
    if p.alpha < 0 {
        return Err(IdentityError::invalid("alpha must be non-negative"));
    }
    let n_max = opts.order as i64;
    let lambda = p.lambda();
    let lhs = lhs_table(p, s, opts.order)?;
    let scaled = Table(uateghp_table(&p.rescaled(s), opts.order)?);
    let comps = multinomial_compositions(s, p.alpha as u32);
    let sr = int(s as i64);
    let rhs: Vec<MultiPoly> = (0..=n_max)
        .map(|n| {
            let bumped = opts.perturbation == Perturbation::BuildingBlock && n == n_max;
            let sum = composition_sum(&comps, &lambda, s, &scaled.get(n), bumped);
            let pre = rpow(&sr, n - p.k as i64 * p.alpha) * rpow(&p.a, (s as i64 - 1) * p.alpha);
            let r = sum.scale(&pre);
            if opts.perturbation == Perturbation::RhsOffset && n == n_max {
                bump(&r)
            } else {
                r
            }
        })
        .collect();
    let reading = compare((0..=n_max).map(|n| (n, lhs[n as usize].clone(), rhs[n as usize].clone())));
    let oracle = compare(oracle_rows(p, s, n_max, &rhs)?);
    Ok(Verdict {
        readings: vec![Reading::new("multinomial", reading)],
        oracle: vec![Reading::new("rescaled-gf", oracle)],
        ..Verdict::default()
    })
}

pub(super) fn even(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let p = &sample.family;
    let s = s_param(sample, true)?;
    let pp = p.alpha;
    if pp < 1 {
        return Err(IdentityError::invalid("the even formula needs alpha = p >= 1"));
    }
    let n_max = opts.order as i64;
    let k = p.k as i64;
    let lambda = p.lambda();
    let lhs = lhs_table(p, s, opts.order)?;
    // Bernoulli-type family: k = 1 with (A^s, B^s).
    let bern_params = FamilyParams { k: 1, ..p.rescaled(s) };
    let top = n_max + (1 - k) * pp;
    let bern = if top >= 0 {
        Table(uateghp_table(&bern_params, top as u32)?)
    } else {
        Table(vec![MultiPoly::zero(&VarSet::xyz())])
    };
    let sr = int(s as i64);
    let multi = multinomial_compositions(s, pp as u32);
    let nondec = nondecreasing_compositions(s, pp as u32);
    let sign = rpow(&int(-1), pp);

    let build = |comps: &[Composition], signed: bool| -> Vec<MultiPoly> {
        (0..=n_max)
            .map(|n| {
                let j = n + (1 - k) * pp;
                if j < 0 {
                    return MultiPoly::zero(&VarSet::xyz());
                }
                let bumped = opts.perturbation == Perturbation::BuildingBlock && n == n_max;
                let sum = composition_sum(comps, &lambda, s, &bern.get(j), bumped);
                let mut pre =
                    rpow(&int(2), (1 - k) * pp) * rpow(&sr, n - k * pp) * rpow(&p.a, (s as i64 - 1) * pp) * fact(n)
                        / fact(j);
                if signed {
                    pre *= &sign;
                }
                let r = sum.scale(&pre);
                if opts.perturbation == Perturbation::RhsOffset && n == n_max {
                    bump(&r)
                } else {
                    r
                }
            })
            .collect()
    };
    let rows = |rhs: &[MultiPoly]| -> Vec<(i64, MultiPoly, MultiPoly)> {
        (0..=n_max).map(|n| (n, lhs[n as usize].clone(), rhs[n as usize].clone())).collect()
    };
    let literal = build(&nondec, true);
    let signed_multi = build(&multi, true);
    let corrected = build(&multi, false);
    let oracle = compare(oracle_rows(p, s, n_max, &corrected)?);
    Ok(Verdict {
        readings: vec![
            Reading::new("literal-nondecreasing-signed", compare(rows(&literal))),
            Reading::new("multinomial-signed", compare(rows(&signed_multi))),
        ],
        corrected: vec![Reading::new("multinomial-unsigned", compare(rows(&corrected)))],
        oracle: vec![Reading::new("rescaled-gf", oracle)],
        notes: vec!["Bernoulli-type family taken with k = 1 and parameters (A^s, B^s)".into()],
        ..Verdict::default()
    })
}
