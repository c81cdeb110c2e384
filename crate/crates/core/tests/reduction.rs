use cas::parse::parse;
use cas::NumericOptions;
use rinv::reduction::{ansatz, ansatze, apply_ansatz, check_ansatz_invariance, match_reduced, verify_reduction};
use rinv::report::Status;
use rinv::symmetry::PDESystem;

fn opts() -> NumericOptions {
    NumericOptions::default()
}

#[test]
fn catalog_covers_tabulated_subalgebras() {
    let labels: Vec<&str> = ansatze().iter().map(|a| a.label.as_str()).collect();
    assert_eq!(labels.len(), 38);
    for l in ["SL15", "SL16", "SL17"] {
        assert!(!labels.contains(&l));
    }
}

#[test]
fn l3_reduces_with_cube_factor() {
    let r = verify_reduction(ansatz("L3").unwrap(), &opts()).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.factors(), vec![Some("t^(-3)".into()), Some("t^(-3)".into())]);
}

#[test]
fn l1_gives_time_derivatives() {
    let got = apply_ansatz(&PDESystem::classical(), ansatz("L1").unwrap()).unwrap();
    assert_eq!(got, vec![parse("F_s").unwrap(), parse("G_s").unwrap()]);
}

#[test]
fn sl14_first_equation() {
    let a = ansatz("SL14").unwrap();
    let got = apply_ansatz(&PDESystem::susy(), a).unwrap();
    assert_eq!(got[0], parse("G*F_s + eps + Om_s*Lam_s").unwrap());
}

#[test]
fn every_entry_verifies() {
    for a in ansatze() {
        let r = verify_reduction(a, &opts()).unwrap();
        let want = if a.label == "SL6" { Status::Erratum } else { Status::Pass };
        assert_eq!(r.status, want, "{}: {:?}", a.label, r.witness());
        assert!(r.matches.iter().all(|m| m.matched), "{}", a.label);
    }
}

#[test]
fn sl6_printed_argument_is_flagged() {
    let problems = check_ansatz_invariance(ansatz("SL6").unwrap(), &opts()).unwrap();
    assert_eq!(problems.len(), 1);
    assert!(problems[0].contains("argument t of Om"));
}

#[test]
fn wrong_expectation_is_detected() {
    let a = ansatz("L3").unwrap();
    let got = apply_ansatz(&PDESystem::classical(), a).unwrap();
    let wrong = vec![parse("-2*F + s*F_s - G*F_s").unwrap(), parse("-2*G + s*G_s + F*G_s").unwrap()];
    let m = match_reduced(&got, &wrong, &opts()).unwrap();
    assert!(!m[0].matched);
    assert!(m[1].matched);
}

#[test]
fn tangent_ansatz_with_wrong_factor_fails() {
    let mut a = ansatz("L5").unwrap().clone();
    a.factor = Some(vec!["1".into(), "1".into()]);
    let r = verify_reduction(&a, &opts()).unwrap();
    assert_eq!(r.status, Status::Fail);
}

#[test]
fn stale_erratum_flag_fails() {
    let mut a = ansatz("SL6").unwrap().clone();
    a.arguments.clear();
    assert_eq!(verify_reduction(&a, &opts()).unwrap().status, Status::Fail);
}

#[test]
fn sigma_is_invariant_for_all_ansatze() {
    for a in ansatze() {
        let p = check_ansatz_invariance(a, &opts()).unwrap();
        assert!(p.iter().all(|s| !s.contains("v(s)")), "{}: {p:?}", a.label);
    }
}

#[test]
fn euler_double_wave_reduces() {
    use rinv::reduction::euler::{euler_check, verify_euler_double_wave};
    assert!(verify_euler_double_wave().unwrap().zero);
    // flipping the ±1 terms leaves 2k(r1_x + r2_x) and 2k^(1/2)(r1_x − r2_x), by hand
    let bad = euler_check("flip", -1, None).unwrap();
    assert!(!bad.zero);
    assert_eq!(parse(&bad.residuals[0]).unwrap(), parse("2*k*(r1_x + r2_x)").unwrap());
    assert_eq!(parse(&bad.residuals[1]).unwrap(), parse("2*k^(1/2)*(r1_x - r2_x)").unwrap());
    assert!(euler_check("k0", 1, Some("0")).unwrap().zero);
    assert!(euler_check("k0-flip", -1, Some("0")).unwrap().zero);
}
