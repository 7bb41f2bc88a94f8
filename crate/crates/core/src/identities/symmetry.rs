//! Symmetry identities. Each one equates two expansions of an auxiliary
//! generating function whose parameters appear in a pair `(c, d)` (written
//! `(l, q)` for the first one); the printed identity says the expansion is
//! unchanged when the pair is swapped.

use crate::auxiliary::{multi_power_sum_table, power_sum_table, PowerSumForm};
use crate::families::{gould_hopper, uateghp_table, FamilyParams};
use crate::poly::{MultiPoly, Var};
use crate::rational::Rational;
use crate::series::LaurentSeries;

use super::approx::ApproxPoly;
use super::common::*;
use super::explicit::{zeta_domain, zeta_values};
use super::{IdentityError, Outcome, Perturbation, Reading, Sample, Verdict, VerifyOptions};

type Rows = Vec<MultiPoly>;

struct Ctx<'a> {
    p: &'a FamilyParams,
    alpha: i64,
    n_max: i64,
    lambda: Rational,
}

impl<'a> Ctx<'a> {
    fn new(sample: &'a Sample, opts: &VerifyOptions) -> Result<Self, IdentityError> {
        let p = &sample.family;
        if p.alpha < 1 {
            return Err(IdentityError::invalid("alpha must be at least 1"));
        }
        if p.a == p.b && p.k == 0 {
            return Err(IdentityError::invalid("B = A needs k >= 1 for pole-free factors"));
        }
        Ok(Ctx { p, alpha: p.alpha, n_max: opts.order as i64, lambda: p.lambda() })
    }

    fn table(&self, alpha: i64, n_max: i64) -> Result<Table, IdentityError> {
        Ok(Table(uateghp_table(&self.p.with_alpha(alpha), n_max.max(0) as u32)?))
    }

    /// `P_j(c x + shift(i), c^m y, c^r z)` for every `j`, lifted.
    fn rescaled_table(&self, t: &Table, c: u32, shift: &Rational, capital: bool) -> Vec<MultiPoly> {
        let cr = int(c as i64);
        (0..=self.n_max).map(|j| rescaled(&t.get(j), &cr, shift, self.p.m, self.p.r, capital)).collect()
    }

    fn nonzero_lambda(&self) -> Result<(), IdentityError> {
        if self.lambda.is_zero() {
            return Err(IdentityError::invalid("this identity divides by B/A, so B must be non-zero"));
        }
        Ok(())
    }

    fn den(&self, c: u32, w: i64) -> Result<LaurentSeries, IdentityError> {
        Ok(apostol_den(&all(), &self.p.a, &self.p.b, &int(c as i64), w)?)
    }

    /// `B^s e^{L t} - A^s`.
    fn den_pow(&self, s: u32, l: &Rational, w: i64) -> Result<LaurentSeries, IdentityError> {
        let s = s as i64;
        Ok(apostol_den(&all(), &rpow(&self.p.a, s), &rpow(&self.p.b, s), l, w)?)
    }

    /// `e^{L u t + L^m v t^m}` on the lower (`x, y`) or upper (`X, Y`) pair.
    fn gh(&self, l: &Rational, capital: bool, w: i64) -> Result<LaurentSeries, IdentityError> {
        let (u, v) = if capital { (Var::BigX, Var::BigY) } else { (Var::X, Var::Y) };
        Ok(gh_exp(&all(), u, l, v, &rpow(l, self.p.m as i64), self.p.m, w)?)
    }

    fn geom(&self, l: &Rational, capital: bool, w: i64) -> Result<LaurentSeries, IdentityError> {
        let v = if capital { Var::BigZ } else { Var::Z };
        Ok(trunc_geom(&all(), v, &rpow(l, self.p.r as i64), self.p.r, w)?)
    }

    fn two_tk(&self, e: i64, w: i64) -> LaurentSeries {
        two_tk(&all(), self.p.k, e, w)
    }
}

fn product(factors: Vec<LaurentSeries>) -> Result<LaurentSeries, IdentityError> {
    let mut it = factors.into_iter();
    let mut acc = it.next().expect("at least one factor");
    for f in it {
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

fn pair(first: (&str, Option<u32>), second: (&str, Option<u32>)) -> Result<(u32, u32), IdentityError> {
    let get = |(name, v): (&str, Option<u32>)| {
        v.filter(|&x| x >= 1).ok_or_else(|| IdentityError::invalid(format!("{name} must be a positive integer")))
    };
    Ok((get(first)?, get(second)?))
}

fn cd(sample: &Sample) -> Result<(u32, u32), IdentityError> {
    pair(("c", sample.c), ("d", sample.d))
}

/// `0^0 = 1`.
fn ipow(base: i64, e: i64) -> Rational {
    if e == 0 {
        Rational::one()
    } else {
        rpow(&int(base), e)
    }
}

/// Everything a symmetry identity needs: the literal master function, the
/// re-derived coefficient expansion and the printed side, each as a
/// function of the ordered pair.
type Side<'a> = Box<dyn Fn(u32, u32, bool) -> Result<Rows, IdentityError> + 'a>;

struct Symmetry<'a> {
    master: Box<dyn Fn(u32, u32, i64) -> Result<LaurentSeries, IdentityError> + 'a>,
    derived: Side<'a>,
    printed: Vec<(String, Side<'a>)>,
}

fn run(sym: Symmetry<'_>, c: u32, d: u32, sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let n_max = opts.order as i64;
    let merge = sample.merge_capitals;
    let bumped = opts.perturbation == Perturbation::BuildingBlock;
    let offset = |mut rows: Rows| {
        if opts.perturbation == Perturbation::RhsOffset {
            let last = rows.len() - 1;
            rows[last] = bump(&rows[last]);
        }
        rows
    };
    let side_by_side = |a: &Rows, b: &Rows| -> Outcome {
        compare((0..=n_max).map(|n| (n, merged(&a[n as usize], merge), merged(&b[n as usize], merge))))
    };

    let mut readings = Vec::new();
    for (name, f) in &sym.printed {
        let lhs = f(c, d, bumped)?;
        let rhs = offset(f(d, c, false)?);
        readings.push(Reading::new(name.clone(), side_by_side(&lhs, &rhs)));
    }
    let dl = (sym.derived)(c, d, bumped)?;
    let dr = offset((sym.derived)(d, c, false)?);
    let corrected = vec![Reading::new("weighted-expansion", side_by_side(&dl, &dr))];

    let m_cd = (sym.master)(c, d, n_max)?;
    let m_dc = (sym.master)(d, c, n_max)?;
    let swap = (0..=n_max)
        .all(|n| merged(&m_cd.coefficient(n).unwrap(), merge) == merged(&m_dc.coefficient(n).unwrap(), merge));
    let first = (0..=n_max)
        .map(|n| Ok((n, egf(&m_cd, n)?, dl[n as usize].clone())))
        .collect::<Result<Vec<_>, IdentityError>>()?;
    let second = (0..=n_max)
        .map(|n| Ok((n, egf(&m_dc, n)?, dr[n as usize].clone())))
        .collect::<Result<Vec<_>, IdentityError>>()?;
    let oracle = match compare(first) {
        Outcome::Exact => compare(second),
        fail => fail,
    };
    let mut notes = Vec::new();
    if c == d {
        notes.push("equal pair: both sides are the same expression".into());
    }
    Ok(Verdict {
        readings,
        corrected,
        oracle: vec![Reading::new("master-gf-both-orders", oracle)],
        swap: Some(swap),
        notes,
    })
}

pub(super) fn t5_1(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let ctx = Ctx::new(sample, opts)?;
    let (l, q) = pair(("l", sample.l), ("q", sample.q))?;
    let (k, alpha, n) = (ctx.p.k as i64, ctx.alpha, ctx.n_max);
    let pa = ctx.table(alpha, n)?;
    let pb = ctx.table(alpha - 1, n)?;
    let ctx = &ctx;
    let (pa, pb) = (&pa, &pb);

    // Shared pieces: U_a = P^(alpha)_a(qx, ..), V_b = P^(alpha-1)_b(lX, ..), S_i(l - 1).
    let pieces =
        move |l: u32, q: u32, form: PowerSumForm, bumped: bool| -> Result<(Rows, Rows, Vec<Rational>), IdentityError> {
            let u = ctx.rescaled_table(pa, q, &Rational::zero(), false);
            let v = ctx.rescaled_table(pb, l, &Rational::zero(), true);
            let mut s = power_sum_table(n as u32, l - 1, &ctx.lambda, form)?;
            if bumped {
                s[0] = &s[0] + &Rational::one();
            }
            Ok((u, v, s))
        };
    let derived = move |l: u32, q: u32, bumped: bool| -> Result<Rows, IdentityError> {
        let (u, v, s) = pieces(l, q, PowerSumForm::Printed, bumped)?;
        let pre = (rpow(&int(l as i64), k * alpha) * rpow(&int(q as i64), k * (alpha - 1))).recip().unwrap();
        let inner: Rows = (0..=n)
            .map(|j| {
                let mut acc = MultiPoly::zero(&all());
                for i in 0..=j {
                    acc.add_assign_scaled(&v[(j - i) as usize], &(binom(j, i) * &s[i as usize]));
                }
                acc
            })
            .collect();
        Ok((0..=n)
            .map(|nn| {
                let mut acc = MultiPoly::zero(&all());
                for j in 0..=nn {
                    let w = binom(nn, j) * ipow(l as i64, nn - j) * ipow(q as i64, j);
                    acc.add_assign_scaled(&(&u[(nn - j) as usize] * &inner[j as usize]), &w);
                }
                acc.scale(&pre)
            })
            .collect())
    };
    let printed_with = move |form: PowerSumForm| {
        move |l: u32, q: u32, bumped: bool| -> Result<Rows, IdentityError> {
            let (u, v, s) = pieces(l, q, form, bumped)?;
            let inner: Rows = (0..=n)
                .map(|j| {
                    let mut acc = MultiPoly::zero(&all());
                    for i in 0..=j {
                        acc.add_assign_scaled(&v[(j - i) as usize], &s[i as usize]);
                    }
                    acc
                })
                .collect();
            Ok((0..=n)
                .map(|nn| {
                    let mut acc = MultiPoly::zero(&all());
                    for j in 0..=nn {
                        let w = ipow(l as i64, nn - j) * ipow(q as i64, j + 1);
                        acc.add_assign_scaled(&(&u[(nn - j) as usize] * &inner[j as usize]), &w);
                    }
                    acc
                })
                .collect())
        }
    };
    let master = move |l: u32, q: u32, order: i64| {
        let lq = int(l as i64 * q as i64);
        with_precision(order, |w| {
            product(vec![
                ctx.two_tk(2 * alpha - 1, w),
                ctx.gh(&lq, false, w)?,
                ctx.den_pow(1, &lq, w)?,
                ctx.gh(&lq, true, w)?,
                ctx.den(l, w)?.pow(-alpha)?,
                ctx.den(q, w)?.pow(-alpha)?,
                ctx.geom(&lq, false, w)?,
                ctx.geom(&lq, true, w)?,
            ])
        })
    };
    let sym = Symmetry {
        master: Box::new(master),
        derived: Box::new(derived),
        printed: vec![
            ("printed-power-sum".into(), Box::new(printed_with(PowerSumForm::Printed))),
            ("geometric-power-sum".into(), Box::new(printed_with(PowerSumForm::Geometric))),
        ],
    };
    run(sym, l, q, sample, opts)
}

pub(super) fn t5_2(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let ctx = Ctx::new(sample, opts)?;
    let (c, d) = cd(sample)?;
    let (k, alpha, n) = (ctx.p.k as i64, ctx.alpha, ctx.n_max);
    let pa = ctx.table(alpha, n)?;
    let ctx = &ctx;
    let pa = &pa;

    // U_a = sum_i lambda^i P_a(dx + d i / c, ..), V_b = sum_j lambda^j P_b(cX + c j / d, ..).
    let pieces = move |c: u32, d: u32, bumped: bool| -> (Rows, Rows) {
        let mut u = vec![MultiPoly::zero(&all()); (n + 1) as usize];
        for i in 0..c as i64 {
            let t = ctx.rescaled_table(pa, d, &Rational::new(d as i64 * i, c as i64), false);
            for (a, p) in t.iter().enumerate() {
                u[a].add_assign_scaled(p, &rpow(&ctx.lambda, i));
            }
        }
        let mut v = vec![MultiPoly::zero(&all()); (n + 1) as usize];
        for j in 0..d as i64 {
            let t = ctx.rescaled_table(pa, c, &Rational::new(c as i64 * j, d as i64), true);
            for (b, p) in t.iter().enumerate() {
                v[b].add_assign_scaled(p, &rpow(&ctx.lambda, j));
            }
        }
        if bumped {
            u[0] = bump(&u[0]);
        }
        (u, v)
    };
    let expansion = move |c: u32, d: u32, bumped: bool, weighted: bool| -> Rows {
        let (u, v) = pieces(c, d, bumped);
        let pre = if weighted {
            rpow(&ctx.p.a, c as i64 + d as i64 - 2) / rpow(&int(c as i64 * d as i64), k * alpha)
        } else {
            Rational::one()
        };
        (0..=n)
            .map(|nn| {
                let mut acc = MultiPoly::zero(&all());
                for l in 0..=nn {
                    let mut w = ipow(c as i64, nn - l) * ipow(d as i64, l);
                    if weighted {
                        w = w * binom(nn, l);
                    }
                    acc.add_assign_scaled(&(&u[(nn - l) as usize] * &v[l as usize]), &w);
                }
                acc.scale(&pre)
            })
            .collect()
    };
    let master = move |c: u32, d: u32, order: i64| {
        let cd = int(c as i64 * d as i64);
        with_precision(order, |w| {
            product(vec![
                ctx.two_tk(2 * alpha, w),
                ctx.gh(&cd, false, w)?,
                ctx.den_pow(c, &cd, w)?,
                ctx.den_pow(d, &cd, w)?,
                ctx.gh(&cd, true, w)?,
                ctx.den(c, w)?.pow(-(alpha + 1))?,
                ctx.den(d, w)?.pow(-(alpha + 1))?,
                ctx.geom(&cd, false, w)?,
                ctx.geom(&cd, true, w)?,
            ])
        })
    };
    let sym = Symmetry {
        master: Box::new(master),
        derived: Box::new(move |c, d, b| Ok(expansion(c, d, b, true))),
        printed: vec![("literal".into(), Box::new(move |c, d, b| Ok(expansion(c, d, b, false))))],
    };
    run(sym, c, d, sample, opts)
}

pub(super) fn t5_3(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let ctx = Ctx::new(sample, opts)?;
    let (c, d) = cd(sample)?;
    let (k, alpha, n) = (ctx.p.k as i64, ctx.alpha, ctx.n_max);
    let pa = ctx.table(alpha, n)?;
    let ctx = &ctx;
    let pa = &pa;

    let expansion = move |c: u32, d: u32, bumped: bool, weighted: bool| -> Rows {
        let mut u = ctx.rescaled_table(pa, c, &Rational::zero(), false);
        if bumped {
            u[0] = bump(&u[0]);
        }
        let pre = if weighted {
            rpow(&ctx.p.a, d as i64 - 1) / rpow(&int(d as i64), k * alpha)
        } else {
            rpow(&ctx.p.a, d as i64)
        };
        (0..=n)
            .map(|nn| {
                let mut acc = MultiPoly::zero(&all());
                for i in 0..d as i64 {
                    for l in 0..=nn {
                        let mut w = rpow(&ctx.lambda, i) * ipow(i * c as i64, l) * ipow(d as i64, nn - l);
                        if weighted {
                            w = w * binom(nn, l);
                        }
                        if !w.is_zero() {
                            acc.add_assign_scaled(&u[(nn - l) as usize], &w);
                        }
                    }
                }
                acc.scale(&pre)
            })
            .collect()
    };
    let master = move |c: u32, d: u32, order: i64| {
        let cd = int(c as i64 * d as i64);
        with_precision(order, |w| {
            product(vec![
                ctx.two_tk(alpha, w),
                ctx.gh(&cd, false, w)?,
                ctx.den_pow(d, &cd, w)?,
                ctx.den(d, w)?.pow(-alpha)?,
                ctx.den(c, w)?.pow(-1)?,
                ctx.geom(&cd, false, w)?,
            ])
        })
    };
    let sym = Symmetry {
        master: Box::new(master),
        derived: Box::new(move |c, d, b| Ok(expansion(c, d, b, true))),
        printed: vec![("literal".into(), Box::new(move |c, d, b| Ok(expansion(c, d, b, false))))],
    };
    let mut v = run(sym, c, d, sample, opts)?;
    if alpha != 1 {
        v.notes.push("master function taken with (B e^{dt} - A)^alpha, the printed one is the alpha = 1 case".into());
    }
    Ok(v)
}

pub(super) fn t5_4(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let ctx = Ctx::new(sample, opts)?;
    ctx.nonzero_lambda()?;
    let (c, d) = cd(sample)?;
    let (k, alpha, n) = (ctx.p.k as i64, ctx.alpha, ctx.n_max);
    let p1 = ctx.table(1, n)?;
    let p2 = ctx.table(alpha + 1, n)?;
    let ctx = &ctx;
    let (p1, p2) = (&p1, &p2);

    let expansion = move |c: u32, d: u32, bumped: bool, weighted: bool| -> Result<Rows, IdentityError> {
        let u = ctx.rescaled_table(p1, d, &Rational::zero(), false);
        let v = ctx.rescaled_table(p2, c, &Rational::zero(), true);
        let mut wt = multi_power_sum_table(n as u32, d, &ctx.lambda, alpha as u32)?;
        if bumped {
            wt[0] = &wt[0] + &Rational::one();
        }
        let (ci, di) = (c as i64, d as i64);
        let pre = rpow(&ctx.p.a, (di - 1) * alpha) * rpow(&ctx.lambda, -alpha);
        Ok((0..=n)
            .map(|nn| {
                let mut acc = MultiPoly::zero(&all());
                for l in 0..=nn {
                    for p in 0..=l {
                        let (a, b) = (nn - l, l - p);
                        let w = if weighted {
                            fact(nn) / (fact(a) * fact(p) * fact(b)) * ipow(ci, a + p) * ipow(di, b)
                                / (rpow(&int(ci), k) * rpow(&int(di), k * (alpha + 1)))
                        } else {
                            rpow(&int(di), l - p - k * (alpha + 1)) * rpow(&int(ci), nn + p - k - l)
                        };
                        let w = w * &wt[p as usize];
                        if !w.is_zero() {
                            acc.add_assign_scaled(&(&u[a as usize] * &v[b as usize]), &w);
                        }
                    }
                }
                acc.scale(&pre)
            })
            .collect())
    };
    let master = move |c: u32, d: u32, order: i64| {
        let cd = int(c as i64 * d as i64);
        with_precision(order, |w| {
            product(vec![
                ctx.two_tk(alpha + 2, w),
                ctx.gh(&cd, false, w)?,
                ctx.den_pow(d, &cd, w)?.pow(alpha)?,
                ctx.gh(&cd, true, w)?,
                ctx.den(d, w)?.pow(-(alpha + 1))?,
                ctx.den(c, w)?.pow(-(alpha + 1))?,
                ctx.geom(&cd, false, w)?,
                ctx.geom(&cd, true, w)?,
            ])
        })
    };
    let sym = Symmetry {
        master: Box::new(master),
        derived: Box::new(move |c, d, b| expansion(c, d, b, true)),
        printed: vec![("literal".into(), Box::new(move |c, d, b| expansion(c, d, b, false)))],
    };
    let mut v = run(sym, c, d, sample, opts)?;
    v.notes.push("first factor read as order 1, subscript l - m read as l - p".into());
    Ok(v)
}

pub(super) fn t5_5(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let ctx = Ctx::new(sample, opts)?;
    ctx.nonzero_lambda()?;
    let (c, d) = cd(sample)?;
    let (k, alpha, n) = (ctx.p.k as i64, ctx.alpha, ctx.n_max);
    let pa = ctx.table(alpha, n)?;
    let ctx = &ctx;
    let pa = &pa;

    let expansion = move |c: u32, d: u32, bumped: bool, weighted: bool| -> Result<Rows, IdentityError> {
        let u = ctx.rescaled_table(pa, d, &Rational::zero(), false);
        let mut wt = multi_power_sum_table(n as u32, c, &ctx.lambda, alpha as u32)?;
        if bumped {
            wt[0] = &wt[0] + &Rational::one();
        }
        let (ci, di) = (c as i64, d as i64);
        let pre = if weighted {
            rpow(&ctx.p.a, (ci - 1) * alpha) * rpow(&ctx.lambda, -alpha) / rpow(&int(ci), k * alpha)
        } else {
            rpow(&ctx.p.a, ci * alpha) * rpow(&ctx.lambda, -alpha)
        };
        Ok((0..=n)
            .map(|nn| {
                let mut acc = MultiPoly::zero(&all());
                for p in 0..=nn {
                    let mut w = ipow(di, p) * &wt[p as usize];
                    if weighted {
                        w = w * binom(nn, p) * ipow(ci, nn - p);
                    } else {
                        w = w * rpow(&int(ci), nn - p - k * alpha);
                    }
                    if !w.is_zero() {
                        acc.add_assign_scaled(&u[(nn - p) as usize], &w);
                    }
                }
                acc.scale(&pre)
            })
            .collect())
    };
    let master = move |c: u32, d: u32, order: i64| {
        let cd = int(c as i64 * d as i64);
        with_precision(order, |w| {
            product(vec![
                ctx.two_tk(alpha, w),
                ctx.gh(&cd, false, w)?,
                ctx.den_pow(c, &cd, w)?.pow(alpha)?,
                ctx.den(d, w)?.pow(-alpha)?,
                ctx.den(c, w)?.pow(-alpha)?,
                ctx.geom(&cd, false, w)?,
            ])
        })
    };
    let sym = Symmetry {
        master: Box::new(master),
        derived: Box::new(move |c, d, b| expansion(c, d, b, true)),
        printed: vec![("literal".into(), Box::new(move |c, d, b| expansion(c, d, b, false)))],
    };
    run(sym, c, d, sample, opts)
}

/// `Psi_j = sum_s C(j, s) Phi(lambda, s - j, c x0) H_s(0, c^m y)`, certified.
fn psi(zeta: &[(Rational, Rational)], c: u32, m: u32, n: i64) -> Vec<ApproxPoly> {
    let vs = all();
    let cm = rpow(&int(c as i64), m as i64);
    let h: Vec<MultiPoly> = (0..=n)
        .map(|s| lift(&gould_hopper(s as u32, m).eval_var(Var::X, &Rational::zero()).scale_var(Var::Y, &cm), false))
        .collect();
    (0..=n)
        .map(|j| {
            let mut acc = ApproxPoly::zero(&vs);
            for s in 0..=j {
                let (v, b) = &zeta[(j - s) as usize];
                let phi = ApproxPoly::constant(&vs, v.clone(), b.clone());
                acc = acc.add(&phi.mul_exact(&h[s as usize]).scale(&binom(j, s)));
            }
            acc
        })
        .collect()
}

pub(super) fn t5_6(sample: &Sample, opts: &VerifyOptions) -> Result<Verdict, IdentityError> {
    let ctx = Ctx::new(sample, opts)?;
    ctx.nonzero_lambda()?;
    let (lambda, x0) = zeta_domain(sample)?;
    let (c, d) = cd(sample)?;
    let (k, alpha, n) = (ctx.p.k as i64, ctx.alpha, ctx.n_max);
    let merge = sample.merge_capitals;
    let pa = ctx.table(alpha, n)?;
    let bumped = opts.perturbation == Perturbation::BuildingBlock;

    // expansion(c, d): coefficient of t^h / h! after removing (2^{1-k} t^k)^alpha (-A)^{-alpha}.
    let expansion = |c: u32, d: u32, bumped: bool, weighted: bool| -> Result<Vec<ApproxPoly>, IdentityError> {
        let (mut zeta, _) = zeta_values(alpha, &lambda, &(&int(c as i64) * &x0), n, &opts.eps)?;
        if bumped {
            zeta[0].0 = &zeta[0].0 + &Rational::one();
        }
        let ps = psi(&zeta, c, ctx.p.m, n);
        let v = ctx.rescaled_table(&pa, d, &Rational::zero(), true);
        let wt = multi_power_sum_table(n as u32, c, &lambda, 1)?;
        let (ci, di) = (c as i64, d as i64);
        let pre = rpow(&lambda, -1) * rpow(&ctx.p.a, ci - 1);
        let inner: Vec<Vec<MultiPoly>> = (0..=n)
            .map(|h| {
                (0..=h)
                    .map(|nn| {
                        let mut acc = MultiPoly::zero(&all());
                        for l in 0..=nn {
                            let mut w = wt[(nn - l) as usize].clone() * rpow(&int(ci), l - k * alpha) * ipow(di, h - l);
                            if weighted {
                                w = w * binom(nn, l);
                            }
                            acc.add_assign_scaled(&v[l as usize], &w);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok((0..=n)
            .map(|h| {
                let mut acc = ApproxPoly::zero(&all());
                for nn in 0..=h {
                    let mut term = ps[(h - nn) as usize].mul_exact(&inner[h as usize][nn as usize]);
                    if weighted {
                        term = term.scale(&binom(h, nn));
                    }
                    acc = acc.add(&term);
                }
                acc.scale(&pre)
            })
            .collect())
    };
    let both = |a: &[ApproxPoly], b: &[ApproxPoly]| -> Outcome {
        compare_approx((0..=n).map(|h| {
            let (l, r) = (&a[h as usize], &b[h as usize]);
            let rhs = ApproxPoly { value: merged(&r.value, merge), bound: merged(&(&r.bound + &l.bound), merge) };
            (h, merged(&l.value, merge), rhs)
        }))
    };
    let offset = |mut rows: Vec<ApproxPoly>| {
        if opts.perturbation == Perturbation::RhsOffset {
            let last = rows.len() - 1;
            rows[last].value = bump(&rows[last].value);
        }
        rows
    };
    let printed_l = expansion(c, d, bumped, false)?;
    let printed_r = offset(expansion(d, c, false, false)?);
    let derived_l = expansion(c, d, bumped, true)?;
    let derived_r = offset(expansion(d, c, false, true)?);

    let shift = k * alpha;
    let master = |c: u32, d: u32, order: i64| {
        let cd = int(c as i64 * d as i64);
        let ctx = &ctx;
        with_precision(order, |w| {
            product(vec![
                ctx.two_tk(2 * alpha, w),
                ctx.gh(&cd, false, w)?,
                ctx.den_pow(c, &cd, w)?,
                ctx.gh(&cd, true, w)?,
                ctx.den(d, w)?.pow(-(alpha + 1))?,
                ctx.den(c, w)?.pow(-alpha)?,
                ctx.geom(&cd, true, w)?,
            ])
        })
    };
    let m_cd = master(c, d, n + shift)?;
    let m_dc = master(d, c, n + shift)?;
    let swap = (0..=n + shift)
        .all(|j| merged(&m_cd.coefficient(j).unwrap(), merge) == merged(&m_dc.coefficient(j).unwrap(), merge));

    let mut oracle = Vec::new();
    let two = rpow(&int(2), (1 - k) * alpha);
    for (name, sign) in [("neg-A-factor", -Rational::one()), ("pos-A-factor", Rational::one())] {
        let pre = &two * rpow(&(&sign * &ctx.p.a), -alpha);
        let check = |m: &LaurentSeries, e: &[ApproxPoly]| -> Result<Outcome, IdentityError> {
            let rows = (0..=n)
                .map(|h| {
                    let lhs = egf(m, h + shift)?.eval_var(Var::X, &x0);
                    let rhs = e[h as usize].scale(&(&pre * fact(h + shift) / fact(h)));
                    Ok((h, lhs, rhs))
                })
                .collect::<Result<Vec<_>, IdentityError>>()?;
            Ok(compare_approx(rows))
        };
        let out = match check(&m_cd, &derived_l)? {
            Outcome::Fail(f) => Outcome::Fail(f),
            first => match check(&m_dc, &derived_r)? {
                Outcome::Fail(f) => Outcome::Fail(f),
                second => {
                    if first == Outcome::Exact && second == Outcome::Exact {
                        Outcome::Exact
                    } else {
                        Outcome::WithinEps
                    }
                }
            },
        };
        oracle.push(Reading::new(name, out));
    }
    let mut notes = vec![format!("x evaluated at {x0}")];
    if c == d {
        notes.push("equal pair: both sides are the same expression".into());
    }
    Ok(Verdict {
        readings: vec![Reading::new("literal", both(&printed_l, &printed_r))],
        corrected: vec![Reading::new("weighted-expansion", both(&derived_l, &derived_r))],
        oracle,
        swap: Some(swap),
        notes,
    })
}
