use crate::poly::{MultiPoly, VarSet};
use crate::rational::Rational;

/// A polynomial known up to a coefficientwise error: the true value `v`
/// satisfies `|v_e - value_e| <= bound_e` for every monomial `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxPoly {
    pub value: MultiPoly,
    pub bound: MultiPoly,
}

impl ApproxPoly {
    pub fn zero(vars: &VarSet) -> Self {
        ApproxPoly { value: MultiPoly::zero(vars), bound: MultiPoly::zero(vars) }
    }

    pub fn exact(p: MultiPoly) -> Self {
        let bound = MultiPoly::zero(p.vars());
        ApproxPoly { value: p, bound }
    }

    pub fn constant(vars: &VarSet, value: Rational, bound: Rational) -> Self {
        ApproxPoly { value: MultiPoly::constant(vars, value), bound: MultiPoly::constant(vars, bound.abs()) }
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_zero()
    }

    pub fn add(&self, other: &ApproxPoly) -> ApproxPoly {
        ApproxPoly { value: &self.value + &other.value, bound: &self.bound + &other.bound }
    }

    pub fn scale(&self, c: &Rational) -> ApproxPoly {
        ApproxPoly { value: self.value.scale(c), bound: self.bound.scale(&c.abs()) }
    }

    pub fn mul_exact(&self, p: &MultiPoly) -> ApproxPoly {
        ApproxPoly { value: &self.value * p, bound: &self.bound * &p.abs_coeffs() }
    }

    pub fn mul(&self, other: &ApproxPoly) -> ApproxPoly {
        let value = &self.value * &other.value;
        let bound = &(&(&self.value.abs_coeffs() * &other.bound) + &(&self.bound * &other.value.abs_coeffs()))
            + &(&self.bound * &other.bound);
        ApproxPoly { value, bound }
    }

    /// True when `exact` lies inside the error box.
    pub fn contains(&self, exact: &MultiPoly) -> bool {
        let diff = exact - &self.value;
        let vars = diff.vars().vars();
        let ok = diff.terms().all(|(e, c)| {
            let powers: Vec<_> = vars.iter().copied().zip(e.iter().copied()).collect();
            c.abs() <= self.bound.coeff_of(&powers)
        });
        ok
    }
}
