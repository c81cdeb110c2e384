use cas::{Expr, NumericOptions};
use proptest::prelude::*;
use rinv::reduction::solutions::{select, solution, solutions, verify_solution, verify_solution_shifted, Tier};
use rinv::report::Status;

const ERRATA: [&str; 12] = [
    "as3",
    "as5",
    "as6",
    "solution7A",
    "solution7E",
    "solution8A",
    "solution8E",
    "solution9",
    "solution11",
    "solution12",
    "solution13",
    "solution18",
];

fn opts() -> NumericOptions {
    NumericOptions::default()
}

#[test]
fn every_record_has_expected_status() {
    for r in solutions() {
        let rep = verify_solution(r, &opts()).unwrap();
        let want = if ERRATA.contains(&r.id.as_str()) { Status::Erratum } else { Status::Pass };
        assert_eq!(rep.status, want, "{}: {:?}", r.id, rep.witness());
        assert_eq!(r.erratum, want == Status::Erratum, "{}", r.id);
    }
}

#[test]
fn as4_passes_symbolically() {
    let rep = verify_solution(solution("as4").unwrap(), &opts()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.checks.iter().all(|c| c.tier == "symbolic" && c.residual.is_none()));
}

#[test]
fn solution26_passes_all_four_equations() {
    let rep = verify_solution(solution("solution26").unwrap(), &opts()).unwrap();
    assert_eq!(rep.checks.len(), 8);
    assert!(rep.checks.iter().all(|c| c.zero && c.tier == "symbolic"));
}

#[test]
fn radical_solution_passes_numerically() {
    let rep = verify_solution(solution("as3-fixed").unwrap(), &opts()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.checks.iter().all(|c| c.tier == "numeric" && c.residual.unwrap() <= 1e-9));
}

#[test]
fn modulo_ode_records_use_the_rewrite() {
    for id in ["as9", "as10", "as12", "as13", "solution4"] {
        let r = solution(id).unwrap();
        assert_eq!(r.tier, Tier::ModuloOde);
        let mut stripped = r.clone();
        stripped.ode = None;
        assert_ne!(verify_solution(&stripped, &opts()).unwrap().status, Status::Pass, "{id}");
    }
}

#[test]
fn corrupted_record_fails_with_witness() {
    let mut r = solution("as4").unwrap().clone();
    r.fields.insert("R".into(), "x/t + C1*t + C2/t + t".into());
    let rep = verify_solution(&r, &opts()).unwrap();
    assert_eq!(rep.status, Status::Fail);
    assert!(rep.witness().unwrap().starts_with("equation 1"));
}

#[test]
fn stale_erratum_flag_fails() {
    let mut r = solution("as3-fixed").unwrap().clone();
    r.erratum = true;
    assert_eq!(verify_solution(&r, &opts()).unwrap().status, Status::Fail);
}

#[test]
fn selection_by_tier() {
    let sym = select(None, Some(Tier::Symbolic)).unwrap();
    assert!(sym.iter().any(|r| r.id == "solution20"));
    assert!(sym.iter().all(|r| r.tier == Tier::Symbolic));
    assert!(select(Some("nope"), None).is_err());
}

/// Central finite differences of the classical residuals, independent of the
/// expression engine.
fn fd_residual(r: impl Fn(f64, f64) -> f64, s: impl Fn(f64, f64) -> f64, x: f64, t: f64) -> f64 {
    let h = 1e-5;
    let dx = |f: &dyn Fn(f64, f64) -> f64| (f(x + h, t) - f(x - h, t)) / (2.0 * h);
    let dt = |f: &dyn Fn(f64, f64) -> f64| (f(x, t + h) - f(x, t - h)) / (2.0 * h);
    let e1 = dt(&r) + s(x, t) * dx(&r);
    let e2 = dt(&s) + r(x, t) * dx(&s);
    e1.abs().max(e2.abs())
}

#[test]
fn finite_difference_oracle_agrees() {
    let (c1, c2) = (0.6, 1.3);
    let rad = |x: f64, t: f64| (c1 * c1 * x * x * t * t - 2.0 * c1 * c2 * x * t + c2 * c2 + 16.0 * x * t).sqrt();
    let r3 = |x: f64, t: f64| x / t + (c2 / (2.0 * t * t) - c1 * x / (2.0 * t)) * (-c1 * x * t + c2 + rad(x, t)) / 4.0;
    let s3 = |x: f64, t: f64| {
        let q = rad(x, t);
        let num = ((4.0 - c1 * c2) * x * t + c2 * c2) * q
            + ((c1 * c1 * c2 - 4.0 * c1) * x * x * t * t + (12.0 * c2 - 2.0 * c1 * c2 * c2) * x * t + c2.powi(3));
        let den = (-c1 * c1 * x * t + c1 * c2 - 4.0) * q
            + (c1.powi(3) * x * x * t * t + (12.0 * c1 - 2.0 * c1 * c1 * c2) * x * t + (c1 * c2 * c2 - 4.0 * c2));
        -num / (t * t * den)
    };
    let r7 = |x: f64, t: f64| {
        let e = (c1 * (t + c2)).exp();
        c1 * x * e / (e - 1.0)
    };
    let s7 = |x: f64, t: f64| c1 * x / ((c1 * (t + c2)).exp() - 1.0);
    for (x, t) in [(0.7, 1.1), (1.5, 0.8), (1.9, 1.7)] {
        assert!(fd_residual(r3, s3, x, t) < 1e-6);
        assert!(fd_residual(r7, s7, x, t) < 1e-6);
        // the printed radical factor, without the 1/4, is not a solution
        let r3p = |x: f64, t: f64| x / t + (c2 / (2.0 * t * t) - c1 * x / (2.0 * t)) * (-c1 * x * t / 4.0 + c2 / 4.0 + rad(x, t));
        assert!(fd_residual(r3p, s3, x, t) > 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn translation_in_x_preserves_status(n in -9i64..9, d in 1i64..5, idx in 0usize..6) {
        let ids = ["as4", "as11", "solution18", "solution20", "solution9", "as7-L8"];
        let r = solution(ids[idx]).unwrap();
        let base = verify_solution(r, &opts()).unwrap().status;
        let shifted = verify_solution_shifted(r, &opts(), Some(&Expr::frac(n, d))).unwrap().status;
        prop_assert_eq!(base, shifted);
    }
}
