use super::*;
use crate::families::FamilyParams;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn fam(k: u32, a: Rational, b: Rational, alpha: i64, m: u32, r: u32) -> FamilyParams {
    FamilyParams::new(k, a, b, alpha, m, r).unwrap()
}

fn opts(order: u32) -> VerifyOptions {
    VerifyOptions { order, ..VerifyOptions::default() }
}

fn perturbed(order: u32, p: Perturbation) -> VerifyOptions {
    VerifyOptions { order, perturbation: p, ..VerifyOptions::default() }
}

fn run(t: TheoremId, s: &Sample, o: &VerifyOptions) -> VerificationReport {
    let rep = verify(t, s, o).unwrap();
    eprintln!("{}", rep.to_json());
    rep
}

fn with_cd(f: FamilyParams, c: u32, d: u32) -> Sample {
    Sample { c: Some(c), d: Some(d), ..Sample::new(f) }
}

#[test]
fn theorem_names_parse() {
    for t in TheoremId::ALL {
        assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
    }
    assert_eq!("t5.3".parse::<TheoremId>().unwrap(), TheoremId::T5_3);
    assert!("T9_9".parse::<TheoremId>().is_err());
}

#[test]
fn expansion_passes_and_detects_bound_slip() {
    let s = Sample::new(fam(1, r(1, 1), r(1, 2), 2, 2, 3));
    let rep = run(TheoremId::Expansion, &s, &opts(6));
    assert_eq!(rep.status, Status::ExactPass);
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
    let bad = run(TheoremId::Expansion, &s, &perturbed(6, Perturbation::ClosedFormBound));
    assert_eq!(bad.status, Status::PaperDeviation);
    assert!(bad.counterexample.is_some());
    assert_eq!(bad.oracle_status, OracleStatus::OraclePass);
}

#[test]
fn expansion_handles_bernoulli_type_poles() {
    let s = Sample::new(fam(0, r(2, 1), r(2, 1), 2, 1, 2));
    let rep = run(TheoremId::Expansion, &s, &opts(5));
    assert_eq!(rep.status, Status::ExactPass);
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
}

#[test]
fn array_type_formulas_close() {
    for f in [fam(1, r(1, 1), r(1, 3), 2, 2, 2), fam(0, r(-1, 2), r(3, 4), 1, 1, 3), fam(2, r(1, 1), r(1, 1), 1, 3, 1)]
    {
        let s = Sample::new(f);
        for t in [TheoremId::T3_1, TheoremId::T3_2] {
            let rep = run(t, &s, &opts(6));
            assert_eq!(rep.status, Status::ExactPass, "{t}");
            assert_eq!(rep.oracle_status, OracleStatus::OraclePass, "{t}");
            let bad = run(t, &s, &perturbed(6, Perturbation::BuildingBlock));
            assert_eq!(bad.status, Status::PaperDeviation, "{t}");
        }
    }
}

#[test]
fn zeta_formula_needs_the_sign() {
    let s = Sample { x0: Some(r(1, 2)), ..Sample::new(fam(1, r(2, 1), r(1, 2), 1, 2, 2)) };
    let rep = run(TheoremId::T3_3, &s, &opts(5));
    assert_eq!(rep.status, Status::PassWithinEps);
    assert_eq!(rep.closing_variant.as_deref(), Some("sign-corrected"));
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
    assert!(rep.variant_notes.iter().any(|n| n.starts_with("reading printed-sign: fails")));

    // Even alpha: both signs agree.
    let s2 = Sample { x0: Some(r(1, 1)), ..Sample::new(fam(0, r(1, 1), r(-1, 3), 2, 1, 1)) };
    let rep = run(TheoremId::T3_3, &s2, &opts(4));
    assert_eq!(rep.closing_variant.as_deref(), Some("printed-sign"));

    let bad = run(TheoremId::T3_3, &s, &perturbed(5, Perturbation::BuildingBlock));
    assert_eq!(bad.status, Status::PaperDeviation);
}

#[test]
fn zeta_formula_is_exact_when_b_vanishes() {
    let s = Sample { x0: Some(r(3, 2)), ..Sample::new(fam(1, r(1, 1), r(0, 1), 1, 2, 1)) };
    let rep = run(TheoremId::T3_3, &s, &opts(4));
    assert_eq!(rep.status, Status::ExactPass);
}

#[test]
fn zeta_formula_rejects_divergent_lambda() {
    let s = Sample { x0: Some(r(1, 2)), ..Sample::new(fam(1, r(1, 1), r(2, 1), 1, 2, 1)) };
    assert!(matches!(verify(TheoremId::T3_3, &s, &opts(3)), Err(IdentityError::InvalidArgument(_))));
}

#[test]
fn implicit_formula_closes() {
    for (f, g) in [
        (fam(1, r(1, 1), r(1, 2), 3, 2, 2), 2),
        (fam(2, r(1, 1), r(1, 1), 2, 1, 1), 2),
        (fam(0, r(3, 2), r(-1, 1), 1, 1, 2), 0),
    ] {
        let s = Sample { gamma: Some(g), ..Sample::new(f) };
        let rep = run(TheoremId::T3_4, &s, &opts(6));
        assert_eq!(rep.status, Status::ExactPass);
        assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
        let bad = run(TheoremId::T3_4, &s, &perturbed(6, Perturbation::BuildingBlock));
        assert_eq!(bad.status, Status::PaperDeviation);
    }
}

#[test]
fn multiplication_odd_closes() {
    for (f, s) in [
        (fam(1, r(1, 1), r(1, 2), 1, 2, 2), 3),
        (fam(0, r(2, 1), r(-1, 3), 2, 1, 3), 3),
        (fam(2, r(1, 1), r(1, 1), 2, 2, 1), 1),
    ] {
        let smp = Sample { s: Some(s), ..Sample::new(f) };
        let rep = run(TheoremId::T4_1Odd, &smp, &opts(5));
        assert_eq!(rep.status, Status::ExactPass);
        assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
        let bad = run(TheoremId::T4_1Odd, &smp, &perturbed(5, Perturbation::BuildingBlock));
        assert_eq!(bad.status, Status::PaperDeviation);
    }
}

#[test]
fn multiplication_even_runs_and_corrected_form_closes() {
    let smp = Sample { s: Some(2), ..Sample::new(fam(1, r(1, 1), r(1, 3), 1, 2, 2)) };
    let rep = run(TheoremId::T4_1Even, &smp, &opts(5));
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
    assert_eq!(rep.status, Status::PaperDeviation);
    assert!(rep.variant_notes.iter().any(|n| n == "corrected multinomial-unsigned: closes exactly"));

    let smp = Sample { s: Some(4), ..Sample::new(fam(0, r(2, 1), r(1, 2), 2, 1, 1)) };
    let rep = run(TheoremId::T4_1Even, &smp, &opts(4));
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
}

#[test]
fn symmetric_masters_are_swap_invariant() {
    let f = fam(1, r(1, 1), r(1, 2), 1, 2, 2);
    let s1 = Sample { l: Some(2), q: Some(3), ..Sample::new(f.clone()) };
    let rep = run(TheoremId::T5_1, &s1, &opts(4));
    assert_eq!(rep.swap_invariance, Some(SwapStatus::Invariant));
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
    assert!(rep.variant_notes.iter().any(|n| n == "corrected weighted-expansion: closes exactly"));

    let rep = run(TheoremId::T5_2, &with_cd(f, 2, 3), &opts(4));
    assert_eq!(rep.swap_invariance, Some(SwapStatus::Invariant));
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
    assert!(rep.variant_notes.iter().any(|n| n == "corrected weighted-expansion: closes exactly"));
}

#[test]
fn asymmetric_masters_match_their_expansions() {
    let f = fam(1, r(1, 1), r(1, 3), 1, 2, 2);
    for t in [TheoremId::T5_3, TheoremId::T5_4, TheoremId::T5_5] {
        let rep = run(t, &with_cd(f.clone(), 1, 2), &opts(4));
        assert_eq!(rep.oracle_status, OracleStatus::OraclePass, "{t}");
        assert_eq!(rep.swap_invariance, Some(SwapStatus::NotInvariant), "{t}");
        assert_eq!(rep.status, Status::PaperDeviation, "{t}");
        assert!(rep.counterexample.is_some());
    }
    let s6 = Sample { x0: Some(r(1, 2)), ..with_cd(f, 1, 2) };
    let rep = run(TheoremId::T5_6, &s6, &opts(3));
    assert_eq!(rep.oracle_status, OracleStatus::OraclePass);
    assert!(rep.variant_notes.iter().any(|n| n.starts_with("oracle neg-A-factor: closes")));
}

#[test]
fn equal_pair_closes_trivially() {
    let f = fam(1, r(1, 1), r(1, 2), 1, 2, 2);
    for t in [TheoremId::T5_2, TheoremId::T5_3, TheoremId::T5_4, TheoremId::T5_5] {
        let rep = run(t, &with_cd(f.clone(), 2, 2), &opts(3));
        assert_eq!(rep.status, Status::ExactPass, "{t}");
        assert_eq!(rep.swap_invariance, Some(SwapStatus::Invariant), "{t}");
    }
    let s1 = Sample { l: Some(2), q: Some(2), merge_capitals: true, ..Sample::new(f) };
    assert_eq!(run(TheoremId::T5_1, &s1, &opts(3)).status, Status::ExactPass);
}

#[test]
fn report_json_round_trips() {
    let s = Sample { gamma: Some(1), ..Sample::new(fam(1, r(1, 1), r(1, 2), 2, 2, 2)) };
    let rep = run(TheoremId::T3_4, &s, &opts(3));
    let back: VerificationReport = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(back, rep);
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["theorem"], "T3_4");
    assert_eq!(v["status"], "exact-pass");
    assert_eq!(v["params"]["A"], "1");
    assert_eq!(v["params"]["gamma"], 1);
}

#[test]
fn trials_are_reproducible() {
    let o = opts(3);
    let a: Vec<_> = verify_trials(TheoremId::T4_1Odd, 4, 11, &o).into_iter().map(|r| r.unwrap()).collect();
    let b: Vec<_> = verify_trials(TheoremId::T4_1Odd, 4, 11, &o).into_iter().map(|r| r.unwrap()).collect();
    assert_eq!(a, b);
}
