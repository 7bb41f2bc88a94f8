//! Sparse multivariate polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{binomial, Rational};

/// The six formal variables the engine knows about.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    X,
    Y,
    Z,
    BigX,
    BigY,
    BigZ,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::Y, Var::Z, Var::BigX, Var::BigY, Var::BigZ];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::BigX => "X",
            Var::BigY => "Y",
            Var::BigZ => "Z",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    /// The capitalised partner used by the symmetry identities.
    pub fn capital(self) -> Var {
        match self {
            Var::X | Var::BigX => Var::BigX,
            Var::Y | Var::BigY => Var::BigY,
            Var::Z | Var::BigZ => Var::BigZ,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable set must be non-empty")]
    EmptyVarSet,
    #[error("variable {0} listed twice")]
    DuplicateVar(&'static str),
    #[error("variable {0} is not in the polynomial's variable set")]
    UnknownVar(&'static str),
    #[error("variable sets [{0}] and [{1}] order their shared variables differently")]
    IncompatibleVars(String, String),
}

/// Ordered, duplicate-free list of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarSet(Vec<Var>);

impl VarSet {
    pub fn new(vars: &[Var]) -> Result<Self, PolyError> {
        if vars.is_empty() {
            return Err(PolyError::EmptyVarSet);
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVar(v.name()));
            }
        }
        Ok(VarSet(vars.to_vec()))
    }

    pub fn x() -> Self {
        VarSet(vec![Var::X])
    }

    pub fn xy() -> Self {
        VarSet(vec![Var::X, Var::Y])
    }

    pub fn xz() -> Self {
        VarSet(vec![Var::X, Var::Z])
    }

    pub fn xyz() -> Self {
        VarSet(vec![Var::X, Var::Y, Var::Z])
    }

    /// `x, y, z, X, Y, Z`.
    pub fn all() -> Self {
        VarSet(Var::ALL.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.0.iter().position(|&w| w == v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index_of(v).is_some()
    }

    /// Order-preserving union. Shared variables must appear in the same
    /// relative order in both sets.
    pub fn merge(&self, other: &VarSet) -> Result<VarSet, PolyError> {
        if self == other {
            return Ok(self.clone());
        }
        let shared_self: Vec<Var> = self.0.iter().copied().filter(|v| other.contains(*v)).collect();
        let shared_other: Vec<Var> = other.0.iter().copied().filter(|v| self.contains(*v)).collect();
        if shared_self != shared_other {
            return Err(PolyError::IncompatibleVars(self.to_string(), other.to_string()));
        }
        let mut out = self.0.clone();
        out.extend(other.0.iter().copied().filter(|v| !self.contains(*v)));
        Ok(VarSet(out))
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|v| v.name()).collect();
        write!(f, "{}", names.join(", "))
    }
}

type Exponents = Vec<u32>;

/// A polynomial in the variables of its `VarSet`, stored as a map from
/// exponent vectors to non-zero coefficients.
#[derive(Clone)]
pub struct MultiPoly {
    vars: VarSet,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Self {
        MultiPoly::constant(vars, Rational::one())
    }

    /// `coef * prod(v^e)`.
    pub fn monomial(vars: &VarSet, powers: &[(Var, u32)], coef: Rational) -> Result<Self, PolyError> {
        let mut exps = vec![0u32; vars.len()];
        for &(v, e) in powers {
            let i = vars.index_of(v).ok_or(PolyError::UnknownVar(v.name()))?;
            exps[i] += e;
        }
        let mut p = MultiPoly::zero(vars);
        if !coef.is_zero() {
            p.terms.insert(exps, coef);
        }
        Ok(p)
    }

    pub fn var(vars: &VarSet, v: Var) -> Result<Self, PolyError> {
        MultiPoly::monomial(vars, &[(v, 1)], Rational::one())
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// The constant value if the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&vec![0; self.vars.len()]).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial `prod(v^e)` (unlisted variables have exponent 0).
    pub fn coeff_of(&self, powers: &[(Var, u32)]) -> Rational {
        let mut exps = vec![0u32; self.vars.len()];
        for &(v, e) in powers {
            match self.vars.index_of(v) {
                Some(i) => exps[i] += e,
                None if e == 0 => {}
                None => return Rational::zero(),
            }
        }
        self.terms.get(&exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        let i = self.vars.index_of(v)?;
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Re-expresses the polynomial over a superset of its variables.
    pub fn extend_to(&self, target: &VarSet) -> Result<Self, PolyError> {
        if *target == self.vars {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .vars
            .vars()
            .iter()
            .map(|&v| target.index_of(v).ok_or(PolyError::UnknownVar(v.name())))
            .collect::<Result<_, _>>()?;
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] = x;
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over a subset of its variables. Fails if
    /// a dropped variable actually occurs.
    pub fn restrict_to(&self, target: &VarSet) -> Result<Self, PolyError> {
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.len()];
            for (i, &x) in e.iter().enumerate() {
                let v = self.vars.vars()[i];
                match target.index_of(v) {
                    Some(j) => ne[j] = x,
                    None if x == 0 => {}
                    None => return Err(PolyError::UnknownVar(v.name())),
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Renames variables according to `mapping` (pairs `from -> to`) and
    /// expresses the result over `target`. Variables not in `mapping` keep
    /// their name.
    pub fn rename_into(&self, mapping: &[(Var, Var)], target: &VarSet) -> Result<Self, PolyError> {
        let map: Vec<usize> = self
            .vars
            .vars()
            .iter()
            .map(|&v| {
                let to = mapping.iter().find(|(f, _)| *f == v).map(|(_, t)| *t).unwrap_or(v);
                target.index_of(to).ok_or(PolyError::UnknownVar(to.name()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] += x;
            }
            accumulate(&mut out.terms, ne, c.clone());
        }
        Ok(out)
    }

    fn aligned(&self, other: &MultiPoly) -> Result<(MultiPoly, MultiPoly), PolyError> {
        let vs = self.vars.merge(&other.vars)?;
        Ok((self.extend_to(&vs)?, other.extend_to(&vs)?))
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.vars == other.vars {
            return Ok(self.add_same(other, false));
        }
        let (a, b) = self.aligned(other)?;
        Ok(a.add_same(&b, false))
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.vars == other.vars {
            return Ok(self.add_same(other, true));
        }
        let (a, b) = self.aligned(other)?;
        Ok(a.add_same(&b, true))
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.vars == other.vars {
            return Ok(self.mul_same(other));
        }
        let (a, b) = self.aligned(other)?;
        Ok(a.mul_same(&b))
    }

    fn add_same(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let c = if negate { -c } else { c.clone() };
            accumulate(&mut terms, e.clone(), c);
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    fn mul_same(&self, other: &MultiPoly) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                accumulate(&mut terms, e, ca * cb);
            }
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn add_assign_scaled(&mut self, other: &MultiPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let other = if other.vars == self.vars {
            std::borrow::Cow::Borrowed(other)
        } else {
            let vs = self.vars.merge(&other.vars).expect("incompatible variable sets");
            *self = self.extend_to(&vs).expect("merged set");
            std::borrow::Cow::Owned(other.extend_to(&vs).expect("merged set"))
        };
        for (e, v) in &other.terms {
            accumulate(&mut self.terms, e.clone(), v * c);
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to `v` (zero if `v` is absent).
    pub fn derivative(&self, v: Var) -> MultiPoly {
        let Some(i) = self.vars.index_of(v) else {
            return MultiPoly::zero(&self.vars);
        };
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.terms.insert(ne, c * &Rational::from_int(e[i]));
        }
        out
    }

    /// `k`-th derivative with respect to `v`.
    pub fn derivative_n(&self, v: Var, k: u32) -> MultiPoly {
        let Some(i) = self.vars.index_of(v) else {
            return if k == 0 { self.clone() } else { MultiPoly::zero(&self.vars) };
        };
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] < k {
                continue;
            }
            let mut falling = Rational::one();
            for j in 0..k {
                falling *= &Rational::from_int(e[i] - j);
            }
            let mut ne = e.clone();
            ne[i] -= k;
            out.terms.insert(ne, c * &falling);
        }
        out
    }

    /// Antiderivative in `v` with zero integration constant.
    pub fn antiderivative(&self, v: Var) -> Result<MultiPoly, PolyError> {
        let i = self.vars.index_of(v).ok_or(PolyError::UnknownVar(v.name()))?;
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i] += 1;
            out.terms.insert(ne, c / &Rational::from_int(e[i] + 1));
        }
        Ok(out)
    }

    /// Substitutes `v -> c * v`.
    pub fn scale_var(&self, v: Var, c: &Rational) -> MultiPoly {
        let Some(i) = self.vars.index_of(v) else {
            return self.clone();
        };
        let mut out = MultiPoly::zero(&self.vars);
        for (e, k) in &self.terms {
            let f = c.pow(e[i] as i64).expect("non-negative exponent");
            accumulate(&mut out.terms, e.clone(), k * &f);
        }
        out
    }

    /// Substitutes `v -> v + c`.
    pub fn shift_var(&self, v: Var, c: &Rational) -> MultiPoly {
        let Some(i) = self.vars.index_of(v) else {
            return self.clone();
        };
        if c.is_zero() {
            return self.clone();
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (e, k) in &self.terms {
            let d = e[i];
            for j in 0..=d {
                // C(d, j) v^j c^(d-j)
                let coef = k * &Rational::from_int(binomial(d as u64, j as u64)) * c.pow((d - j) as i64).unwrap();
                let mut ne = e.clone();
                ne[i] = j;
                accumulate(&mut out.terms, ne, coef);
            }
        }
        out
    }

    /// Substitutes a rational value for `v`; the variable stays in the set
    /// with exponent zero everywhere.
    pub fn eval_var(&self, v: Var, value: &Rational) -> MultiPoly {
        let Some(i) = self.vars.index_of(v) else {
            return self.clone();
        };
        let mut out = MultiPoly::zero(&self.vars);
        for (e, k) in &self.terms {
            let f = value.pow(e[i] as i64).unwrap();
            let mut ne = e.clone();
            ne[i] = 0;
            accumulate(&mut out.terms, ne, k * &f);
        }
        out
    }

    /// Full evaluation; unspecified variables are taken as zero.
    pub fn eval(&self, point: &[(Var, Rational)]) -> Rational {
        let mut acc = Rational::zero();
        for (e, k) in &self.terms {
            let mut term = k.clone();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let v = self.vars.vars()[i];
                match point.iter().find(|(w, _)| *w == v) {
                    Some((_, val)) => term *= &val.pow(x as i64).unwrap(),
                    None => {
                        term = Rational::zero();
                        break;
                    }
                }
            }
            acc += &term;
        }
        acc
    }

    /// Substitutes the polynomial `q` for `v`.
    pub fn substitute(&self, v: Var, q: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let Some(i) = self.vars.index_of(v) else {
            return Ok(self.clone());
        };
        let vs = self.vars.merge(&q.vars)?;
        let q = q.extend_to(&vs)?;
        let base = self.extend_to(&vs)?;
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one(&vs)];
        let mut out = MultiPoly::zero(&vs);
        for (e, k) in &base.terms {
            let d = e[i] as usize;
            while powers.len() <= d {
                let next = powers.last().unwrap().mul_same(&q);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let mono = MultiPoly { vars: vs.clone(), terms: BTreeMap::from([(rest, k.clone())]) };
            out = out.add_same(&mono.mul_same(&powers[d]), false);
        }
        Ok(out)
    }

    /// The polynomial with every coefficient replaced by its absolute value.
    pub fn abs_coeffs(&self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.abs())).collect() }
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Terms keyed by variable name with zero exponents dropped; used for
    /// comparisons across different variable sets.
    fn named_terms(&self) -> BTreeMap<Vec<(Var, u32)>, Rational> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut key: Vec<(Var, u32)> =
                    e.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (self.vars.vars()[i], x)).collect();
                key.sort();
                (key, c.clone())
            })
            .collect()
    }

    /// Terms in display order: descending total degree, then descending
    /// exponent vector in variable-set order.
    fn display_order(&self) -> Vec<(&Exponents, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

fn accumulate(terms: &mut BTreeMap<Exponents, Rational>, e: Exponents, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(e) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            let sum = slot.get() + &c;
            if sum.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            self.terms == other.terms
        } else {
            self.named_terms() == other.named_terms()
        }
    }
}

impl Eq for MultiPoly {}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = self.vars.vars()[i].name();
                    if x == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars, self)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// Operator forms merge variable sets and panic when they are incompatible;
// use the `checked_*` methods where that can happen.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("incompatible variable sets")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("incompatible variable sets")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("incompatible variable sets")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}
