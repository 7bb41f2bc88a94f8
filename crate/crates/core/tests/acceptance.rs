//! Release gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::process::Command;
use std::time::Instant;

use apofamily::families::{apostol_numbers, reduce_special, uateghp_gf, uateghp_table, FamilyId, FamilyParams};
use apofamily::identities::{
    sampling, verify, verify_trials, OracleStatus, Status, SwapStatus, TheoremId, VerificationReport, VerifyOptions,
};
use apofamily::monomiality::{diffeq_residual, lowering, raising};
use apofamily::{LaurentSeries, MultiPoly, Rational, Var, VarSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(r: &mut ChaCha8Rng) -> Rational {
    q(r.gen_range(-5..=5), r.gen_range(1..=5))
}

fn opts(order: u32) -> VerifyOptions {
    VerifyOptions { order, ..VerifyOptions::default() }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 -------------------------------------------------------------------------

fn random_series(r: &mut ChaCha8Rng, order: i64, unit: bool) -> LaurentSeries {
    let vs = VarSet::xy();
    let off = r.gen_range(-3..=3);
    let terms: Vec<(i64, MultiPoly)> = (off..=order)
        .map(|j| {
            let c = if unit && j == off {
                let mut c = small(r);
                while c.is_zero() {
                    c = small(r);
                }
                MultiPoly::constant(&vs, c)
            } else {
                let mut p = MultiPoly::zero(&vs);
                for _ in 0..r.gen_range(0..=3) {
                    let m = MultiPoly::monomial(
                        &vs,
                        &[(Var::X, r.gen_range(0..=2)), (Var::Y, r.gen_range(0..=1))],
                        small(r),
                    )
                    .unwrap();
                    p = &p + &m;
                }
                p
            };
            (j, c)
        })
        .collect();
    LaurentSeries::from_terms(&vs, &terms, order)
}

fn series_laws() -> Check {
    let mut r = rng(1);
    let order = 12;
    let mut passed = 0;
    for i in 0..200 {
        let f = random_series(&mut r, order, i % 4 == 3);
        let g = random_series(&mut r, order, false);
        let h = random_series(&mut r, order, false);
        let ok = match i % 4 {
            0 => f.mul(&g).unwrap().agrees(&g.mul(&f).unwrap()),
            1 => f.mul(&g).unwrap().mul(&h).unwrap().agrees(&f.mul(&g.mul(&h).unwrap()).unwrap()),
            2 => f.mul(&g.add(&h).unwrap()).unwrap().agrees(&f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()),
            _ => {
                let one = f.mul(&f.inverse().unwrap()).unwrap();
                one.order() >= 0 && one.agrees(&LaurentSeries::one(f.vars(), one.order()))
            }
        };
        if ok {
            passed += 1;
        }
    }
    ensure(passed == 200, || format!("{passed}/200 exact"))?;
    Ok("200/200 exact (commutativity, associativity, distributivity, inverse; order 12)".into())
}

// 2 -------------------------------------------------------------------------

fn central_equivalence() -> Check {
    let results = verify_trials(TheoremId::Expansion, 25, 2, &opts(12));
    let exact = results.iter().filter(|r| matches!(r, Ok(rep) if rep.status == Status::ExactPass)).count();
    ensure(exact == 25, || format!("{exact}/25 exact"))?;
    Ok("25/25 exact-pass, n <= 12".into())
}

// 3 -------------------------------------------------------------------------

fn classical_anchors() -> Check {
    let bern = FamilyParams::new(1, q(1, 1), q(1, 1), 1, 1, 1).unwrap();
    let got = apostol_numbers(&bern, 4).map_err(|e| e.to_string())?;
    let want = [q(1, 1), q(-1, 2), q(1, 6), q(0, 1), q(-1, 30)];
    ensure(got == want, || format!("Bernoulli numbers {got:?}"))?;

    let mut r = rng(3);
    for _ in 0..10 {
        let lambda = loop {
            let l = small(&mut r);
            if l != q(-1, 1) {
                break l;
            }
        };
        let alpha = r.gen_range(-2..=4);
        let euler = FamilyParams::new(0, q(-1, 1), lambda.clone(), alpha, 2, 2).unwrap();
        let v = apostol_numbers(&euler, 0).map_err(|e| e.to_string())?[0].clone();
        let want = (q(2, 1) / (&lambda + &q(1, 1))).pow(alpha).unwrap();
        ensure(v == want, || format!("Euler-type P_0 at lambda = {lambda}, alpha = {alpha}: {v} != {want}"))?;
    }
    Ok("B_0..B_4 = 1, -1/2, 1/6, 0, -1/30; 10/10 Euler-type constants".into())
}

// 4 -------------------------------------------------------------------------

/// `(num t^power / (lambda e^t + sign))^alpha e^{xt + y t^m} / (1 - z t^r)`,
/// built from series primitives only.
struct Special {
    num: Rational,
    power: i64,
    sign: i64,
}

fn special_gf(sp: &Special, lambda: &Rational, alpha: i64, m: u32, r: u32, order: i64) -> LaurentSeries {
    let Special { num, power: j, sign } = sp;
    let (j, sign) = (*j, *sign);
    let vs = VarSet::xyz();
    let w = order + 2 * alpha.abs() + 2;
    let den = LaurentSeries::exp_scalar(&vs, &q(1, 1), w)
        .scale(lambda)
        .add(&LaurentSeries::constant(&vs, MultiPoly::constant(&vs, Rational::from_int(sign)), w))
        .unwrap();
    let top = LaurentSeries::monomial(&vs, MultiPoly::constant(&vs, num.clone()), j, w + j);
    let base = top.mul(&den.inverse().unwrap()).unwrap().pow(alpha).unwrap();
    let x = MultiPoly::var(&vs, Var::X).unwrap();
    let y = MultiPoly::var(&vs, Var::Y).unwrap();
    let z = MultiPoly::var(&vs, Var::Z).unwrap();
    let e = LaurentSeries::exp_poly_arg(&vs, &[(x, 1), (y, m as i64)], w).unwrap();
    let g = LaurentSeries::geometric(&vs, &z, r, w);
    base.mul(&e).unwrap().mul(&g).unwrap().truncate(order)
}

fn nth(f: &LaurentSeries, n: i64) -> MultiPoly {
    f.coefficient(n).unwrap().scale(&Rational::factorial(n as u64))
}

fn reductions() -> Check {
    let mut rr = rng(4);
    let n_max = 10;
    let mut cases = 0;
    for _ in 0..3 {
        let lambda = loop {
            let l = small(&mut rr);
            if l != q(-1, 1) && !l.is_zero() {
                break l;
            }
        };
        let alpha = rr.gen_range(1..=3);
        let (m, r) = (rr.gen_range(1..=3), rr.gen_range(1..=3));
        let base = FamilyParams::new(1, q(1, 1), q(1, 2), alpha, m, r).unwrap();
        let gfs = [
            (FamilyId::Teghabp, special_gf(&Special { num: q(1, 1), power: 1, sign: -1 }, &lambda, alpha, m, r, n_max)),
            (FamilyId::Teghaep, special_gf(&Special { num: q(2, 1), power: 0, sign: 1 }, &lambda, alpha, m, r, n_max)),
            (FamilyId::Teghagp, special_gf(&Special { num: q(2, 1), power: 1, sign: 1 }, &lambda, alpha, m, r, n_max)),
        ];
        for (id, gf) in gfs {
            for n in 0..=n_max {
                let got = reduce_special(id, n as u32, &lambda, &base).map_err(|e| e.to_string())?;
                ensure(got == nth(&gf, n), || format!("{id} n = {n} lambda = {lambda}: {got} vs {}", nth(&gf, n)))?;
                cases += 1;
            }
        }

        // y = 0 and z = 0 slices drop the Gould-Hopper and geometric factors.
        let p = FamilyParams::new(rr.gen_range(0..=2), small(&mut rr) + q(6, 1), small(&mut rr), alpha, m, r).unwrap();
        let vs = VarSet::xyz();
        let w = n_max + 2;
        let x = MultiPoly::var(&vs, Var::X).unwrap();
        let y = MultiPoly::var(&vs, Var::Y).unwrap();
        let z = MultiPoly::var(&vs, Var::Z).unwrap();
        let pre = pre_factor(&p, w);
        let without_y = pre
            .mul(&LaurentSeries::exp_poly_arg(&vs, &[(x.clone(), 1)], w).unwrap())
            .unwrap()
            .mul(&LaurentSeries::geometric(&vs, &z, r, w))
            .unwrap();
        let without_z = pre.mul(&LaurentSeries::exp_poly_arg(&vs, &[(x, 1), (y, m as i64)], w).unwrap()).unwrap();
        let full = uateghp_gf(&p, n_max).unwrap();
        for n in 0..=n_max {
            let pn = nth(&full, n);
            ensure(pn.eval_var(Var::Y, &Rational::zero()) == nth(&without_y, n), || format!("y = 0 slice n = {n}"))?;
            ensure(pn.eval_var(Var::Z, &Rational::zero()) == nth(&without_z, n), || format!("z = 0 slice n = {n}"))?;
            cases += 2;
        }
    }
    Ok(format!("{cases} exact comparisons (Bernoulli, Euler, Genocchi cases and y = 0 / z = 0 slices), n <= {n_max}"))
}

/// `(2^{1-k} t^k / (B e^t - A))^alpha` from series primitives.
fn pre_factor(p: &FamilyParams, w: i64) -> LaurentSeries {
    let vs = VarSet::xyz();
    let wide = w + 2 * p.alpha.abs() + 2;
    let den = LaurentSeries::exp_scalar(&vs, &q(1, 1), wide)
        .scale(&p.b)
        .sub(&LaurentSeries::constant(&vs, MultiPoly::constant(&vs, p.a.clone()), wide))
        .unwrap();
    let two = q(2, 1).pow(1 - p.k as i64).unwrap();
    let top = LaurentSeries::monomial(&vs, MultiPoly::constant(&vs, two), p.k as i64, wide + p.k as i64);
    top.mul(&den.inverse().unwrap()).unwrap().pow(p.alpha).unwrap()
}

// 5 -------------------------------------------------------------------------

fn monomiality() -> Check {
    let mut r = rng(5);
    let base = FamilyParams::new(1, q(1, 1), q(1, 3), 2, 2, 3).unwrap();
    let lambda = q(2, 5);
    let mut lowered = 0;
    for id in FamilyId::ALL {
        let table: Vec<MultiPoly> = (0..=10)
            .map(|n| reduce_special(id, n, &lambda, &base))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        // x -> 2x in the Hermite form doubles the derivative.
        let factor = if id == FamilyId::Hermite2v { 2 } else { 1 };
        for n in 1..=10usize {
            let want = table[n - 1].scale(&Rational::from_int((factor * n) as i64));
            ensure(lowering(&table[n]) == want, || format!("{id}: d/dx P_{n} != {factor}*{n} P_{}", n - 1))?;
            lowered += 1;
        }
    }
    let mut raised = 0;
    for _ in 0..5 {
        let a = loop {
            let a = small(&mut r);
            if !a.is_zero() {
                break a;
            }
        };
        let b = loop {
            let b = small(&mut r);
            if b != a {
                break b;
            }
        };
        let p = FamilyParams::new(0, a, b, r.gen_range(1..=3), r.gen_range(1..=3), r.gen_range(1..=3)).unwrap();
        let table = uateghp_table(&p, 9).map_err(|e| e.to_string())?;
        for n in 0..=8usize {
            let up = raising(&table[n], &p, n as u32).map_err(|e| e.to_string())?;
            ensure(up == table[n + 1], || format!("raising P_{n} for {p:?}"))?;
            let res = diffeq_residual(n as u32, &p).map_err(|e| e.to_string())?;
            ensure(res.is_zero(), || format!("differential equation residual n = {n} for {p:?}: {res}"))?;
            raised += 1;
        }
    }
    Ok(format!("{lowered} lowering checks over {} families; {raised} raising and residual checks", FamilyId::ALL.len()))
}

// 6 -------------------------------------------------------------------------

fn dual_path(theorem: TheoremId, trials: u32, order: u32) -> Result<(usize, usize), String> {
    let mut exact = 0;
    let mut deviations = 0;
    for (i, res) in verify_trials(theorem, trials, 6, &opts(order)).into_iter().enumerate() {
        let rep = res.map_err(|e| format!("{theorem} trial {i}: {e}"))?;
        match rep.status {
            Status::ExactPass => exact += 1,
            Status::PaperDeviation => {
                ensure(rep.counterexample.is_some(), || {
                    format!("{theorem} trial {i}: deviation without counterexample")
                })?;
                ensure(rep.oracle_status == OracleStatus::OraclePass, || {
                    format!("{theorem} trial {i}: printed form and oracle both fail")
                })?;
                deviations += 1;
            }
            Status::PassWithinEps => return Err(format!("{theorem} trial {i}: unexpected approximate status")),
        }
    }
    Ok((exact, deviations))
}

fn explicit_formulas() -> Check {
    let mut parts = Vec::new();
    for t in [TheoremId::T3_1, TheoremId::T3_2, TheoremId::T3_4] {
        let (exact, dev) = dual_path(t, 10, 8)?;
        parts.push(format!("{t} {exact}/10 exact, {dev} deviations"));
    }
    Ok(parts.join("; "))
}

// 7 -------------------------------------------------------------------------

fn sign_variants() -> Check {
    let o = opts(8);
    let mut t33 = Vec::new();
    for trial in 0..10 {
        let s = sampling::sample(TheoremId::T3_3, 7, trial);
        ensure(s.family.lambda().abs() <= q(1, 2), || "sample outside |B/A| <= 1/2".into())?;
        let rep = verify(TheoremId::T3_3, &s, &o).map_err(|e| e.to_string())?;
        let v = rep.closing_variant.clone().filter(|_| rep.status != Status::PaperDeviation);
        ensure(v.is_some(), || format!("T3_3 trial {trial}: no sign variant closes"))?;
        t33.push(v.unwrap());
    }
    let mut t56 = 0;
    for trial in 0..10 {
        let s = sampling::sample(TheoremId::T5_6, 7, trial);
        ensure(s.family.lambda().abs() <= q(1, 2), || "sample outside |B/A| <= 1/2".into())?;
        let rep = verify(TheoremId::T5_6, &s, &o).map_err(|e| e.to_string())?;
        let closing = rep
            .variant_notes
            .iter()
            .any(|n| n.starts_with("oracle neg-A-factor: closes") || n.starts_with("oracle pos-A-factor: closes"));
        ensure(rep.oracle_status == OracleStatus::OraclePass && closing, || {
            format!("T5_6 trial {trial}: no sign variant closes")
        })?;
        t56 += 1;
    }
    let corrected = t33.iter().filter(|v| *v == "sign-corrected").count();
    Ok(format!(
        "T3_3 10/10 close within 1e-30 ({corrected} sign-corrected, {} printed sign); T5_6 {t56}/10 close",
        10 - corrected
    ))
}

// 8 -------------------------------------------------------------------------

fn multiplication() -> Check {
    let o = opts(8);
    let mut r = rng(8);
    let mut s3 = (0, 0);
    for s in [1u32, 3] {
        for i in 0..5 {
            let mut smp = sampling::sample(TheoremId::T4_1Odd, 8, i);
            smp.family.alpha = r.gen_range(1..=2);
            smp.s = Some(s);
            let rep = verify(TheoremId::T4_1Odd, &smp, &o).map_err(|e| e.to_string())?;
            if s == 1 {
                ensure(rep.status == Status::ExactPass, || format!("s = 1 sample {i}: {:?}", rep.status))?;
            } else if rep.status == Status::ExactPass {
                s3.0 += 1;
            } else {
                ensure(rep.counterexample.is_some(), || format!("s = 3 sample {i}: deviation without counterexample"))?;
                s3.1 += 1;
            }
        }
    }
    let even: Vec<VerificationReport> = verify_trials(TheoremId::T4_1Even, 5, 8, &o)
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| format!("even branch: {e}"))?;
    let even_dev = even.iter().filter(|r| r.status == Status::PaperDeviation).count();
    Ok(format!(
        "s = 1 5/5 exact; s = 3 {}/5 exact, {} deviations; even s ran 5/5 ({even_dev} printed deviations)",
        s3.0, s3.1
    ))
}

// 9 -------------------------------------------------------------------------

fn symmetry() -> Check {
    let o = opts(6);
    let theorems =
        [TheoremId::T5_1, TheoremId::T5_2, TheoremId::T5_3, TheoremId::T5_4, TheoremId::T5_5, TheoremId::T5_6];
    let mut invariant = 0;
    let mut errors = Vec::new();
    let mut broken = Vec::new();
    for t in theorems {
        for (i, res) in verify_trials(t, 5, 9, &o).into_iter().enumerate() {
            match res {
                Err(e) => errors.push(format!("{t}#{i}: {e}")),
                Ok(rep) => {
                    let complete = rep.status != Status::PaperDeviation || rep.counterexample.is_some();
                    if !complete {
                        errors.push(format!("{t}#{i}: incomplete report"));
                    }
                    match rep.swap_invariance {
                        Some(SwapStatus::Invariant) => invariant += 1,
                        _ => broken.push(format!("{t}#{i}")),
                    }
                }
            }
        }
    }
    ensure(errors.is_empty(), || format!("internal errors: {}", errors.join(", ")))?;
    ensure(invariant == 30, || format!("master swap invariance {invariant}/30; not invariant: {}", broken.join(" ")))?;
    Ok("30/30 swap-invariant, reports complete".into())
}

// 10 ------------------------------------------------------------------------

fn determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_apofamily"))
            .args(["suite", "--all", "--seed", "7"])
            .env_remove("APOFAMILY_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.code() == Some(0), || format!("suite exited with {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || "outputs differ".into())?;
    Ok(format!("two runs byte-identical ({} bytes)", a.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("series-kernel laws", series_laws),
        ("central equivalence", central_equivalence),
        ("classical anchors", classical_anchors),
        ("reductions", reductions),
        ("monomiality", monomiality),
        ("explicit formulas", explicit_formulas),
        ("sign variants", sign_variants),
        ("multiplication formulas", multiplication),
        ("symmetry suite", symmetry),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
