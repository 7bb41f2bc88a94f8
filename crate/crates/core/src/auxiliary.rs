//! Combinatorial and transcendental building blocks: array-type
//! polynomials, lambda-Stirling numbers, the generalized Hurwitz-Lerch zeta
//! function with a certified tail, power sums and multinomial compositions.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{MultiPoly, Var, VarSet};
use crate::rational::{big_factorial, Rational};
use crate::series::{LaurentSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuxError {
    #[error("series diverges: |w| = {0} is not below 1")]
    DivergentQuery(Rational),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn consts() -> VarSet {
    VarSet::x()
}

/// `(lambda e^t - 1)^nu / nu!` through `order`.
fn array_kernel(nu: u32, lambda: &Rational, order: i64) -> Result<LaurentSeries, SeriesError> {
    let vs = consts();
    let base = LaurentSeries::exp_scalar(&vs, &Rational::one(), order + 1)
        .scale(lambda)
        .sub(&LaurentSeries::one(&vs, order + 1))?;
    Ok(base.pow(nu as i64)?.scale(&Rational::factorial(nu as u64).recip().unwrap()).truncate(order))
}

/// Array-type polynomials `S(x; n, nu; lambda)` for `n = 0..=n_max`.
pub fn array_type_table(n_max: u32, nu: u32, lambda: &Rational) -> Result<Vec<MultiPoly>, AuxError> {
    let vs = consts();
    let order = n_max as i64;
    let x = MultiPoly::var(&vs, Var::X).unwrap();
    let ex = LaurentSeries::exp_poly_arg(&vs, &[(x, 1)], order)?;
    let gf = array_kernel(nu, lambda, order)?.mul(&ex)?;
    (0..=order).map(|n| Ok(gf.coefficient(n)?.scale(&Rational::factorial(n as u64)))).collect()
}

/// `S(x; n, nu; lambda) = n! [t^n] ((lambda e^t - 1)^nu / nu!) e^{xt}`, in `x`.
pub fn array_type_poly(n: u32, nu: u32, lambda: &Rational) -> Result<MultiPoly, AuxError> {
    Ok(array_type_table(n, nu, lambda)?.pop().unwrap())
}

/// Lambda-Stirling numbers `S(n, nu; lambda)` for `n = 0..=n_max`.
pub fn lambda_stirling_table(n_max: u32, nu: u32, lambda: &Rational) -> Result<Vec<Rational>, AuxError> {
    let kernel = array_kernel(nu, lambda, n_max as i64)?;
    (0..=n_max as i64).map(|n| Ok(kernel.coefficient(n)?.constant_term() * Rational::factorial(n as u64))).collect()
}

pub fn lambda_stirling(n: u32, nu: u32, lambda: &Rational) -> Result<Rational, AuxError> {
    Ok(lambda_stirling_table(n, nu, lambda)?.pop().unwrap())
}

/// Arguments of `Phi_mu(w, s, x) = sum_n (mu)_n / n! * w^n / (n + x)^s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaQuery {
    pub mu: u32,
    pub w: Rational,
    pub s: i64,
    pub x: Rational,
    pub eps: Rational,
}

/// A partial sum together with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub value: Rational,
    pub tail_bound: Rational,
    pub terms: u64,
}

const MAX_ZETA_TERMS: u64 = 200_000;

/// Generalized Hurwitz-Lerch zeta by exact partial summation.
///
/// After term `N` every later ratio `|T_{j+1} / T_j|` is at most
/// `rho_N = (mu + N)/(N + 1) * |w| * ((N + 1 + x)/(N + x))^{max(-s, 0)}`,
/// since each factor is non-increasing in `j` for `mu >= 1` and `x > 0`.
/// Summation stops once `rho_N < 1` and `|T_N| rho_N / (1 - rho_N) <= eps`.
pub fn hurwitz_lerch(q: &ZetaQuery) -> Result<ZetaValue, AuxError> {
    if q.mu == 0 {
        return Err(AuxError::InvalidQuery("mu must be at least 1".into()));
    }
    if q.x.is_negative() || q.x.is_zero() {
        return Err(AuxError::InvalidQuery("x must be positive".into()));
    }
    if q.eps.is_negative() || q.eps.is_zero() {
        return Err(AuxError::InvalidQuery("eps must be positive".into()));
    }
    let aw = q.w.abs();
    if aw >= Rational::one() {
        return Err(AuxError::DivergentQuery(aw));
    }
    let mu = Rational::from_int(q.mu);
    let grow = (-q.s).max(0);
    let one = Rational::one();

    // T_n = coef_n * (n + x)^{-s}, coef_n = (mu)_n / n! * w^n
    let mut coef = Rational::one();
    let mut n: u64 = 0;
    let mut term = q.x.pow(-q.s).unwrap();
    let mut value = term.clone();
    loop {
        let nr = Rational::from_int(n);
        let shift = (&nr + &q.x + &one) / (&nr + &q.x);
        let rho = (&mu + &nr) / (&nr + &one) * &aw * shift.pow(grow).unwrap();
        if rho < one {
            let tail = term.abs() * &rho / (&one - &rho);
            if tail <= q.eps {
                return Ok(ZetaValue { value, tail_bound: tail, terms: n + 1 });
            }
        }
        if n >= MAX_ZETA_TERMS {
            return Err(AuxError::InvalidQuery(format!("no certified bound after {n} terms")));
        }
        coef = coef * (&mu + &nr) / (&nr + &one) * &q.w;
        n += 1;
        term = &coef * (Rational::from_int(n) + &q.x).pow(-q.s).unwrap();
        value += &term;
    }
}

/// Which generating function defines the power sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerSumForm {
    /// `(lambda e^{(n+1)t} - 1) / (lambda e^t - 1)`
    Printed,
    /// `(lambda^{n+1} e^{(n+1)t} - 1) / (lambda e^t - 1) = sum_{i<=n} (lambda e^t)^i`
    Geometric,
}

impl PowerSumForm {
    pub fn name(self) -> &'static str {
        match self {
            PowerSumForm::Printed => "printed",
            PowerSumForm::Geometric => "geometric",
        }
    }
}

/// Power sums `S_k(n; lambda)` for `k = 0..=k_max`.
pub fn power_sum_table(k_max: u32, n: u32, lambda: &Rational, form: PowerSumForm) -> Result<Vec<Rational>, AuxError> {
    let vs = consts();
    let order = k_max as i64 + 2;
    let lead = match form {
        PowerSumForm::Printed => lambda.clone(),
        PowerSumForm::Geometric => lambda.pow(n as i64 + 1).unwrap(),
    };
    let one = LaurentSeries::one(&vs, order);
    let num = LaurentSeries::exp_scalar(&vs, &Rational::from_int(n as i64 + 1), order).scale(&lead).sub(&one)?;
    let den = LaurentSeries::exp_scalar(&vs, &Rational::one(), order).scale(lambda).sub(&one)?;
    let ratio = num.mul(&den.inverse()?)?;
    (0..=k_max as i64).map(|k| Ok(ratio.coefficient(k)?.constant_term() * Rational::factorial(k as u64))).collect()
}

pub fn power_sum_s(k: u32, n: u32, lambda: &Rational, form: PowerSumForm) -> Result<Rational, AuxError> {
    Ok(power_sum_table(k, n, lambda, form)?.pop().unwrap())
}

/// `W_j = j! lambda^l [t^j] ((1 - lambda^m e^{mt}) / (1 - lambda e^t))^l`
/// for `j = 0..=n_max`.
pub fn multi_power_sum_table(n_max: u32, m: u32, lambda: &Rational, l: u32) -> Result<Vec<Rational>, AuxError> {
    if m == 0 || l == 0 {
        return Err(AuxError::InvalidQuery("m and l must be at least 1".into()));
    }
    let vs = consts();
    let order = n_max as i64 + 2 * l as i64 + 2;
    let one = LaurentSeries::one(&vs, order);
    let num =
        one.sub(&LaurentSeries::exp_scalar(&vs, &Rational::from_int(m), order).scale(&lambda.pow(m as i64).unwrap()))?;
    let den = one.sub(&LaurentSeries::exp_scalar(&vs, &Rational::one(), order).scale(lambda))?;
    let ratio = num.mul(&den.inverse()?)?.pow(l as i64)?;
    let lam_l = lambda.pow(l as i64).unwrap();
    (0..=n_max as i64)
        .map(|j| Ok(ratio.coefficient(j)?.constant_term() * Rational::factorial(j as u64) * &lam_l))
        .collect()
}

pub fn multi_power_sum_combo(n: u32, m: u32, lambda: &Rational, l: u32) -> Result<Rational, AuxError> {
    Ok(multi_power_sum_table(n, m, lambda, l)?.pop().unwrap())
}

/// One term of a multinomial expansion of `(1 + w + w^2 + ... + w^{s-1})^alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    /// `nu_1 ..= nu_{s-1}`
    pub parts: Vec<u32>,
    pub coefficient: BigInt,
    /// `sum_i i * nu_i`
    pub weight: u32,
}

fn multinomial(total: u32, parts: &[u32]) -> BigInt {
    let mut c = big_factorial(total as u64);
    for &p in parts {
        c /= big_factorial(p as u64);
    }
    c
}

fn weight(parts: &[u32]) -> u32 {
    parts.iter().enumerate().map(|(i, &v)| (i as u32 + 1) * v).sum()
}

/// All `(nu_1, ..., nu_{s-1})` with `sum nu_i <= alpha`, with coefficient
/// `alpha! / (nu_0! nu_1! ... nu_{s-1}!)` where `nu_0 = alpha - sum nu_i`.
pub fn multinomial_compositions(s: u32, alpha: u32) -> Vec<Composition> {
    assert!(s >= 1, "s must be positive");
    let slots = (s - 1) as usize;
    let mut out = Vec::new();
    let mut parts = vec![0u32; slots];
    fn rec(i: usize, left: u32, alpha: u32, parts: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if i == parts.len() {
            let mut all = parts.clone();
            all.push(left);
            out.push(Composition {
                parts: parts.clone(),
                coefficient: multinomial(alpha, &all),
                weight: weight(parts),
            });
            return;
        }
        for v in 0..=left {
            parts[i] = v;
            rec(i + 1, left - v, alpha, parts, out);
        }
        parts[i] = 0;
    }
    rec(0, alpha, alpha, &mut parts, &mut out);
    out
}

/// Non-decreasing `0 <= nu_1 <= ... <= nu_{s-1} <= p` with `sum nu_i = p`,
/// coefficient `p! / (nu_1! ... nu_{s-1}!)`.
pub fn nondecreasing_compositions(s: u32, p: u32) -> Vec<Composition> {
    assert!(s >= 1, "s must be positive");
    let slots = (s - 1) as usize;
    let mut out = Vec::new();
    if slots == 0 {
        if p == 0 {
            out.push(Composition { parts: vec![], coefficient: BigInt::from(1), weight: 0 });
        }
        return out;
    }
    let mut parts = vec![0u32; slots];
    fn rec(i: usize, min: u32, left: u32, p: u32, parts: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if i + 1 == parts.len() {
            if left >= min {
                parts[i] = left;
                out.push(Composition {
                    parts: parts.clone(),
                    coefficient: multinomial(p, parts),
                    weight: weight(parts),
                });
            }
            return;
        }
        let mut v = min;
        while v * (parts.len() - i) as u32 <= left {
            parts[i] = v;
            rec(i + 1, v, left - v, p, parts, out);
            v += 1;
        }
    }
    rec(0, 0, p, p, &mut parts, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Set partitions of `{1..n}` into exactly `k` non-empty blocks, by
    /// enumerating restricted growth strings.
    fn brute_stirling2(n: usize, k: usize) -> i64 {
        fn rec(i: usize, n: usize, used: usize, k: usize) -> i64 {
            if i == n {
                return (used == k) as i64;
            }
            let mut c = 0;
            for b in 0..=used.min(k.saturating_sub(1)) {
                c += rec(i + 1, n, if b == used { used + 1 } else { used }, k);
            }
            c
        }
        if n == 0 {
            return (k == 0) as i64;
        }
        rec(0, n, 0, k)
    }

    #[test]
    fn array_type_values() {
        let x = MultiPoly::var(&VarSet::x(), Var::X).unwrap();
        for n in 0..5 {
            assert_eq!(array_type_poly(n, 0, &q(3, 7)).unwrap(), x.pow(n));
        }
        assert_eq!(lambda_stirling(0, 1, &q(1, 1)).unwrap(), q(0, 1));
        for n in 1..6 {
            assert_eq!(lambda_stirling(n, 1, &q(1, 1)).unwrap(), q(1, 1));
        }
        assert_eq!(lambda_stirling(3, 2, &q(1, 1)).unwrap(), q(brute_stirling2(3, 2), 1));
        assert_eq!(lambda_stirling(0, 0, &q(5, 2)).unwrap(), q(1, 1));
        assert_eq!(lambda_stirling(1, 1, &q(5, 2)).unwrap(), q(5, 2));
    }

    #[test]
    fn classical_stirling_grid() {
        for n in 0..9 {
            for k in 0..=n {
                let s = lambda_stirling(n as u32, k as u32, &Rational::one()).unwrap();
                assert_eq!(s, q(brute_stirling2(n, k), 1), "S({n},{k})");
            }
        }
    }

    #[test]
    fn array_type_binomial_expansion() {
        // (lambda e^t - 1)^nu = sum_j C(nu, j) (-1)^{nu-j} lambda^j e^{jt}
        let lam = q(-2, 3);
        let vs = VarSet::x();
        let x = MultiPoly::var(&vs, Var::X).unwrap();
        for nu in 0..4u32 {
            let table = array_type_table(6, nu, &lam).unwrap();
            for n in 0..=6u32 {
                let mut expect = MultiPoly::zero(&vs);
                for j in 0..=nu {
                    let c = Rational::from_int(crate::rational::binomial(nu as u64, j as u64))
                        * lam.pow(j as i64).unwrap()
                        * q(-1, 1).pow((nu - j) as i64).unwrap()
                        / Rational::factorial(nu as u64);
                    let shifted = x.shift_var(Var::X, &Rational::from_int(j)).pow(n);
                    expect.add_assign_scaled(&shifted, &c);
                }
                assert_eq!(table[n as usize], expect, "nu={nu} n={n}");
            }
        }
    }

    #[test]
    fn zeta_trivial_cases() {
        let v = hurwitz_lerch(&ZetaQuery { mu: 1, w: q(0, 1), s: 2, x: q(3, 2), eps: q(1, 1000) }).unwrap();
        assert_eq!(v.value, q(4, 9));
        assert!(v.tail_bound.is_zero());
        let eps = q(1, 1_000_000_000_000);
        let g = hurwitz_lerch(&ZetaQuery { mu: 1, w: q(1, 2), s: 0, x: q(5, 3), eps: eps.clone() }).unwrap();
        assert!((g.value.clone() - q(2, 1)).abs() <= g.tail_bound);
        assert!(g.tail_bound <= eps);
    }

    #[test]
    fn zeta_squared_series() {
        // sum (n+1)^2 w^n = (1 + w)/(1 - w)^3
        let w = q(1, 3);
        let exact = (q(1, 1) + w.clone()) / (q(1, 1) - w.clone()).pow(3).unwrap();
        assert_eq!(exact, q(9, 2));
        // mu = 2 gives (n + 1) w^n, s = -1 at x = 1 multiplies by (n + 1)
        let eps: Rational = "1/1000000000000000000000000000000".parse().unwrap();
        let v = hurwitz_lerch(&ZetaQuery { mu: 2, w, s: -1, x: q(1, 1), eps: eps.clone() }).unwrap();
        assert!((v.value - exact).abs() <= v.tail_bound);
        assert!(v.tail_bound <= eps);
    }

    #[test]
    fn zeta_rejects_bad_queries() {
        let base = ZetaQuery { mu: 1, w: q(1, 1), s: 0, x: q(1, 1), eps: q(1, 10) };
        assert!(matches!(hurwitz_lerch(&base), Err(AuxError::DivergentQuery(_))));
        let neg = ZetaQuery { w: q(-3, 2), ..base.clone() };
        assert!(matches!(hurwitz_lerch(&neg), Err(AuxError::DivergentQuery(_))));
        let bad_x = ZetaQuery { w: q(1, 2), x: q(0, 1), ..base.clone() };
        assert!(matches!(hurwitz_lerch(&bad_x), Err(AuxError::InvalidQuery(_))));
        let bad_eps = ZetaQuery { w: q(1, 2), eps: q(0, 1), ..base };
        assert!(matches!(hurwitz_lerch(&bad_eps), Err(AuxError::InvalidQuery(_))));
    }

    #[test]
    fn power_sums() {
        assert_eq!(power_sum_s(2, 3, &q(1, 1), PowerSumForm::Printed).unwrap(), q(14, 1));
        assert_eq!(power_sum_s(0, 6, &q(1, 1), PowerSumForm::Geometric).unwrap(), q(7, 1));
        for k in 0..5 {
            let v = power_sum_s(k, 0, &q(2, 5), PowerSumForm::Printed).unwrap();
            assert_eq!(v, if k == 0 { q(1, 1) } else { q(0, 1) });
        }
    }

    #[test]
    fn geometric_power_sums_match_direct_sums() {
        for lam in [q(1, 1), q(-1, 2), q(3, 1)] {
            for n in 0..6u32 {
                let table = power_sum_table(6, n, &lam, PowerSumForm::Geometric).unwrap();
                for k in 0..=6u32 {
                    let direct: Rational = (0..=n)
                        .map(|i| lam.pow(i as i64).unwrap() * Rational::from_int(i).pow(k as i64).unwrap())
                        .sum();
                    assert_eq!(table[k as usize], direct, "lam={lam} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn multiple_power_sums() {
        let lam = q(2, 3);
        let t = multi_power_sum_table(4, 1, &lam, 3).unwrap();
        assert_eq!(t, vec![lam.pow(3).unwrap(), q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
        for m in 1..5u32 {
            let t = multi_power_sum_table(5, m, &q(1, 1), 1).unwrap();
            for (n, w) in t.iter().enumerate() {
                let direct: Rational = (0..m).map(|i| Rational::from_int(i).pow(n as i64).unwrap()).sum();
                assert_eq!(*w, direct);
            }
        }
        let (m, l) = (3u32, 2u32);
        let w0 = multi_power_sum_combo(0, m, &lam, l).unwrap();
        let ratio = (q(1, 1) - lam.pow(m as i64).unwrap()) / (q(1, 1) - lam.clone());
        assert_eq!(w0, lam.pow(l as i64).unwrap() * ratio.pow(l as i64).unwrap());
    }

    #[test]
    fn compositions() {
        let c = multinomial_compositions(1, 4);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].coefficient, BigInt::from(1));
        assert_eq!(c[0].weight, 0);
        let c = multinomial_compositions(2, 2);
        let got: Vec<(u32, i64, u32)> =
            c.iter().map(|c| (c.parts[0], i64::try_from(c.coefficient.clone()).unwrap(), c.weight)).collect();
        assert_eq!(got, vec![(0, 1, 0), (1, 2, 1), (2, 1, 2)]);
        for s in 1..5u32 {
            for a in 0..5u32 {
                let total: BigInt = multinomial_compositions(s, a).iter().map(|c| c.coefficient.clone()).sum();
                assert_eq!(total, BigInt::from(s).pow(a));
            }
        }
        let nd = nondecreasing_compositions(3, 2);
        let parts: Vec<Vec<u32>> = nd.iter().map(|c| c.parts.clone()).collect();
        assert_eq!(parts, vec![vec![0, 2], vec![1, 1]]);
        assert_eq!(nd[1].coefficient, BigInt::from(2));
        assert_eq!(nd[1].weight, 3);
    }
}
