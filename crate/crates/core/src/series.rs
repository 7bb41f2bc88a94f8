//! Truncated Laurent series in one formal variable `t` with polynomial
//! coefficients.
//!
//! A series stores the dense window `t^offset ..= t^order`; everything below
//! `offset` is zero and everything above `order` is unknown. Every operation
//! propagates the truncation order pessimistically so that no coefficient
//! is ever reported that the inputs do not determine.

use std::fmt;

use thiserror::Error;

use crate::poly::{MultiPoly, PolyError, VarSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Vars(#[from] PolyError),
    #[error("series is identically zero through order {0}")]
    ZeroSeries(i64),
    #[error("leading coefficient {0} is not a non-zero constant")]
    NonUnitLeading(String),
    #[error("exponential argument has a term of non-positive degree {0}")]
    NonPositiveValuation(i64),
    #[error("coefficient of t^{n} requested but the series is only known through t^{order}")]
    OutOfOrder { n: i64, order: i64 },
    #[error("cannot rescale t by zero when the series has negative powers (offset {0})")]
    ZeroRescale(i64),
}

#[derive(Clone)]
pub struct LaurentSeries {
    vars: VarSet,
    offset: i64,
    coeffs: Vec<MultiPoly>,
}

impl LaurentSeries {
    /// Builds a series from its window. The order is `offset + coeffs.len() - 1`.
    pub fn new(vars: &VarSet, offset: i64, coeffs: Vec<MultiPoly>) -> Result<Self, SeriesError> {
        let coeffs = coeffs.into_iter().map(|c| c.extend_to(vars)).collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentSeries { vars: vars.clone(), offset, coeffs })
    }

    pub fn from_rationals(vars: &VarSet, offset: i64, coeffs: &[Rational]) -> Self {
        LaurentSeries {
            vars: vars.clone(),
            offset,
            coeffs: coeffs.iter().map(|c| MultiPoly::constant(vars, c.clone())).collect(),
        }
    }

    /// The zero series known through `order`.
    pub fn zero(vars: &VarSet, order: i64) -> Self {
        let len = (order + 1).max(0) as usize;
        LaurentSeries { vars: vars.clone(), offset: 0, coeffs: vec![MultiPoly::zero(vars); len] }
    }

    /// The constant `1` known through `order`.
    pub fn one(vars: &VarSet, order: i64) -> Self {
        LaurentSeries::constant(vars, MultiPoly::one(vars), order)
    }

    pub fn constant(vars: &VarSet, c: MultiPoly, order: i64) -> Self {
        LaurentSeries::monomial(vars, c, 0, order)
    }

    /// `c * t^power`, known through `order`.
    pub fn monomial(vars: &VarSet, c: MultiPoly, power: i64, order: i64) -> Self {
        let mut s = LaurentSeries::zero_window(vars, power, order);
        if power <= order {
            s.coeffs[0] = c.extend_to(vars).expect("coefficient variables");
        }
        s
    }

    /// A finite sum of `c_j t^{p_j}` known through `order`.
    pub fn from_terms(vars: &VarSet, terms: &[(i64, MultiPoly)], order: i64) -> Self {
        let low = terms.iter().map(|(p, _)| *p).min().unwrap_or(0).min(0);
        let mut s = LaurentSeries::zero_window(vars, low, order);
        for (p, c) in terms {
            if *p <= order {
                let i = (p - low) as usize;
                s.coeffs[i] = &s.coeffs[i] + &c.extend_to(vars).expect("coefficient variables");
            }
        }
        s
    }

    /// `e^{c t}` through `order`.
    pub fn exp_scalar(vars: &VarSet, c: &Rational, order: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut term = Rational::one();
        for n in 0..=order.max(-1) {
            if n > 0 {
                term = term * c / Rational::from_int(n);
            }
            coeffs.push(MultiPoly::constant(vars, term.clone()));
        }
        LaurentSeries { vars: vars.clone(), offset: 0, coeffs }
    }

    /// `(1 - c t^r)^{-1} = sum_j c^j t^{rj}` through `order`, built directly.
    pub fn geometric(vars: &VarSet, c: &MultiPoly, r: u32, order: i64) -> Self {
        assert!(r >= 1, "geometric step must be positive");
        let mut s = LaurentSeries::zero_window(vars, 0, order);
        let c = c.extend_to(vars).expect("coefficient variables");
        let mut power = MultiPoly::one(vars);
        let mut n = 0i64;
        while n <= order {
            s.coeffs[n as usize] = power.clone();
            power = &power * &c;
            n += r as i64;
        }
        s
    }

    fn zero_window(vars: &VarSet, offset: i64, order: i64) -> Self {
        let len = (order - offset + 1).max(0) as usize;
        LaurentSeries { vars: vars.clone(), offset, coeffs: vec![MultiPoly::zero(vars); len] }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Highest power of `t` whose coefficient is known.
    pub fn order(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    pub fn window(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// Index of the first non-zero coefficient, `None` if the series is zero
    /// through its order.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.offset + i as i64)
    }

    /// Valuation, or `order + 1` for a series that vanishes on its window.
    fn known_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.order() + 1)
    }

    /// Exact coefficient of `t^n`. Powers below the offset are zero; powers
    /// above the order are unknown and rejected.
    pub fn coefficient(&self, n: i64) -> Result<MultiPoly, SeriesError> {
        if n > self.order() {
            return Err(SeriesError::OutOfOrder { n, order: self.order() });
        }
        if n < self.offset {
            return Ok(MultiPoly::zero(&self.vars));
        }
        Ok(self.coeffs[(n - self.offset) as usize].clone())
    }

    fn coeff_ref(&self, n: i64) -> Option<&MultiPoly> {
        if n < self.offset || n > self.order() {
            None
        } else {
            Some(&self.coeffs[(n - self.offset) as usize])
        }
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: i64) -> Self {
        let mut s = self.clone();
        let keep = (order - self.offset + 1).clamp(0, self.coeffs.len() as i64) as usize;
        s.coeffs.truncate(keep);
        s
    }

    fn aligned_vars(&self, other: &LaurentSeries) -> Result<(LaurentSeries, LaurentSeries), SeriesError> {
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let vs = self.vars.merge(&other.vars)?;
        Ok((self.with_vars(&vs)?, other.with_vars(&vs)?))
    }

    /// Re-expresses every coefficient over a superset of the variables.
    pub fn with_vars(&self, vars: &VarSet) -> Result<Self, SeriesError> {
        LaurentSeries::new(vars, self.offset, self.coeffs.clone())
    }

    fn combine(&self, other: &LaurentSeries, negate: bool) -> Result<LaurentSeries, SeriesError> {
        let (a, b) = self.aligned_vars(other)?;
        let offset = a.offset.min(b.offset);
        let order = a.order().min(b.order());
        let mut out = LaurentSeries::zero_window(&a.vars, offset, order);
        for n in offset..=order {
            let i = (n - offset) as usize;
            if let Some(c) = a.coeff_ref(n) {
                out.coeffs[i] = c.clone();
            }
            if let Some(c) = b.coeff_ref(n) {
                let sign = if negate { -Rational::one() } else { Rational::one() };
                out.coeffs[i].add_assign_scaled(c, &sign);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
        self.combine(other, true)
    }

    /// Cauchy product. The result is known through
    /// `min(order_f + val_g, order_g + val_f)`.
    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries, SeriesError> {
        let (f, g) = self.aligned_vars(other)?;
        let vf = f.known_valuation();
        let vg = g.known_valuation();
        let order = (f.order() + vg).min(g.order() + vf);
        let offset = f.offset + g.offset;
        let mut out = LaurentSeries::zero_window(&f.vars, offset, order);
        for (i, fc) in f.coeffs.iter().enumerate() {
            if fc.is_zero() {
                continue;
            }
            let fi = f.offset + i as i64;
            for (j, gc) in g.coeffs.iter().enumerate() {
                let n = fi + g.offset + j as i64;
                if n > order {
                    break;
                }
                if gc.is_zero() {
                    continue;
                }
                let k = (n - offset) as usize;
                let prod = fc * gc;
                out.coeffs[k].add_assign_scaled(&prod, &Rational::one());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> LaurentSeries {
        let mut s = self.clone();
        for p in &mut s.coeffs {
            *p = p.scale(c);
        }
        s
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn mul_poly(&self, p: &MultiPoly) -> Result<LaurentSeries, SeriesError> {
        let vs = self.vars.merge(p.vars())?;
        let p = p.extend_to(&vs)?;
        let coeffs = self.coeffs.iter().map(|c| c.extend_to(&vs).map(|c| &c * &p)).collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentSeries { vars: vs, offset: self.offset, coeffs })
    }

    /// Multiplies by `t^j`.
    pub fn shift(&self, j: i64) -> LaurentSeries {
        let mut s = self.clone();
        s.offset += j;
        s
    }

    /// Multiplicative inverse. For `f = t^v (c + ...)` with `c` a non-zero
    /// constant, the inverse has offset `-v` and is known through
    /// `order_f - 2v`.
    pub fn inverse(&self) -> Result<LaurentSeries, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::ZeroSeries(self.order()))?;
        let lead = self.coeff_ref(v).unwrap();
        let c =
            lead.as_constant().filter(|c| !c.is_zero()).ok_or_else(|| SeriesError::NonUnitLeading(lead.to_string()))?;
        let inv_c = c.recip().unwrap();
        let len = (self.order() - v + 1) as usize;
        let u: Vec<&MultiPoly> = (0..len).map(|i| self.coeff_ref(v + i as i64).unwrap()).collect();
        let mut g: Vec<MultiPoly> = Vec::with_capacity(len);
        g.push(MultiPoly::constant(&self.vars, inv_c.clone()));
        let neg_inv = -inv_c;
        for n in 1..len {
            let mut acc = MultiPoly::zero(&self.vars);
            for i in 1..=n {
                if u[i].is_zero() || g[n - i].is_zero() {
                    continue;
                }
                acc.add_assign_scaled(&(u[i] * &g[n - i]), &Rational::one());
            }
            g.push(acc.scale(&neg_inv));
        }
        Ok(LaurentSeries { vars: self.vars.clone(), offset: -v, coeffs: g })
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// [`inverse`](Self::inverse).
    pub fn pow(&self, e: i64) -> Result<LaurentSeries, SeriesError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if e == 0 {
            let rel = self.order() - self.known_valuation();
            return Ok(LaurentSeries::one(&self.vars, rel.max(0)));
        }
        let mut acc: Option<LaurentSeries> = None;
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.unwrap())
    }

    /// `exp(self)` for a series with positive valuation.
    pub fn exp(&self) -> Result<LaurentSeries, SeriesError> {
        if let Some(v) = self.valuation() {
            if v <= 0 {
                return Err(SeriesError::NonPositiveValuation(v));
            }
        }
        let order = self.order();
        let mut e: Vec<MultiPoly> = vec![MultiPoly::one(&self.vars)];
        for n in 1..=order {
            let mut acc = MultiPoly::zero(&self.vars);
            for i in 1..=n {
                match self.coeff_ref(i) {
                    Some(a) if !a.is_zero() => {
                        let prev = &e[(n - i) as usize];
                        if !prev.is_zero() {
                            acc.add_assign_scaled(&(a * prev), &Rational::from_int(i));
                        }
                    }
                    _ => {}
                }
            }
            e.push(acc.scale(&Rational::new(1, n)));
        }
        if order < 0 {
            e.clear();
        }
        Ok(LaurentSeries { vars: self.vars.clone(), offset: 0, coeffs: e })
    }

    /// `exp(sum_i c_i t^{m_i})` through `order`; every `m_i` must be positive.
    pub fn exp_poly_arg(vars: &VarSet, args: &[(MultiPoly, i64)], order: i64) -> Result<LaurentSeries, SeriesError> {
        if let Some((_, m)) = args.iter().find(|(_, m)| *m <= 0) {
            return Err(SeriesError::NonPositiveValuation(*m));
        }
        let terms: Vec<(i64, MultiPoly)> = args.iter().map(|(c, m)| (*m, c.clone())).collect();
        let arg = LaurentSeries::from_terms(vars, &terms, order);
        arg.exp()
    }

    /// Substitutes `t -> c t`.
    pub fn rescale_t(&self, c: &Rational) -> Result<LaurentSeries, SeriesError> {
        if c.is_zero() && self.coeffs.iter().enumerate().any(|(i, p)| self.offset + (i as i64) < 0 && !p.is_zero()) {
            return Err(SeriesError::ZeroRescale(self.offset));
        }
        if c.is_zero() && self.offset < 0 {
            return Err(SeriesError::ZeroRescale(self.offset));
        }
        let mut s = self.clone();
        for (i, p) in s.coeffs.iter_mut().enumerate() {
            let n = self.offset + i as i64;
            let f = if c.is_zero() {
                if n == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            } else {
                c.pow(n).unwrap()
            };
            *p = p.scale(&f);
        }
        Ok(s)
    }

    /// Applies `f` to every coefficient; results are expressed over `vars`.
    pub fn map_coeffs<F>(&self, vars: &VarSet, f: F) -> Result<LaurentSeries, SeriesError>
    where
        F: Fn(&MultiPoly) -> MultiPoly,
    {
        let coeffs = self.coeffs.iter().map(|c| f(c).extend_to(vars)).collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentSeries { vars: vars.clone(), offset: self.offset, coeffs })
    }

    /// True when both series agree on every power known to both.
    pub fn agrees(&self, other: &LaurentSeries) -> bool {
        self.first_disagreement(other).is_none()
    }

    /// The lowest power on the jointly known range where the series differ.
    pub fn first_disagreement(&self, other: &LaurentSeries) -> Option<i64> {
        let lo = self.offset.min(other.offset);
        let hi = self.order().min(other.order());
        (lo..=hi).find(|&n| self.coefficient(n).unwrap() != other.coefficient(n).unwrap())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries[t^{}..=t^{}](", self.offset, self.order())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
