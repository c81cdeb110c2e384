use std::collections::BTreeMap;

use cas::parse::parse;
use cas::subst::Substitution;
use cas::Expr;
use proptest::prelude::*;
use rinv::conserve::{
    check_divergence, conservation_items, conservation_suite, density_flux, path_independence, weierstrass_chi,
    Convention, SolutionBinding, WeierstrassPath,
};
use rinv::reduction::solutions::solution;
use rinv::report::Status;

#[test]
fn corrected_pairs_are_conserved_up_to_ten() {
    for k in 1..=10 {
        let c = check_divergence(&density_flux(k, Convention::Corrected).unwrap()).unwrap();
        assert!(c.zero, "k={k}: {}", c.residual);
    }
}

#[test]
fn low_order_corrected_pairs() {
    let p1 = density_flux(1, Convention::Corrected).unwrap();
    assert_eq!(p1.rho, parse("R + S").unwrap());
    assert_eq!(p1.flux, parse("R*S").unwrap());
    let p2 = density_flux(2, Convention::Corrected).unwrap();
    assert_eq!(p2.rho, parse("R^2 + R*S + S^2").unwrap());
    assert_eq!(p2.flux, parse("R^2*S + R*S^2").unwrap());
}

#[test]
fn printed_pairs_fail_with_hand_residuals() {
    let c1 = check_divergence(&density_flux(1, Convention::PaperPrinted).unwrap()).unwrap();
    assert!(!c1.zero);
    assert_eq!(parse(&c1.residual).unwrap(), parse("-S*R_x").unwrap());
    let p2 = density_flux(2, Convention::PaperPrinted).unwrap();
    assert_eq!(p2.rho, parse("R*S + R^2").unwrap());
    assert_eq!(p2.flux, parse("-R^2*S").unwrap());
    let c2 = check_divergence(&p2).unwrap();
    assert_eq!(parse(&c2.residual).unwrap(), parse("-S^2*R_x - 2*R^2*S_x - 4*R*S*R_x").unwrap());
}

#[test]
fn items_for_cli_and_suite() {
    let printed = conservation_items(2, Convention::PaperPrinted, false).unwrap();
    assert!(printed.iter().all(|i| i.status == Status::Fail && i.witness.is_some()));
    let suite = conservation_suite(true).unwrap();
    assert_eq!(suite.len(), 12);
    assert_eq!(suite.iter().filter(|i| i.status == Status::Erratum).count(), 2);
    assert_eq!(suite.iter().filter(|i| i.status == Status::Pass).count(), 10);
}

/// Independent f64 sums of the corrected convention.
fn rho_j(k: i32, r: f64, s: f64) -> (f64, f64) {
    let rho: f64 = (0..=k).map(|l| r.powi(l) * s.powi(k - l)).sum();
    let j: f64 = r * s * (0..k).map(|l| r.powi(l) * s.powi(k - 1 - l)).sum::<f64>();
    (rho, j)
}

#[test]
fn finite_difference_divergence_on_explicit_solution() {
    // R = x/t + C1 t + C2/t, S = x/t − C1 t + C2/t
    let (c1, c2) = (0.3, -0.2);
    let f = |x: f64, t: f64| (x / t + c1 * t + c2 / t, x / t - c1 * t + c2 / t);
    let h = 1e-5;
    for k in 1..=5 {
        for (x, t) in [(0.7, 1.2), (1.4, 1.9)] {
            let rho = |x, t| {
                let (r, s) = f(x, t);
                rho_j(k, r, s).0
            };
            let jf = |x, t| {
                let (r, s) = f(x, t);
                rho_j(k, r, s).1
            };
            let div = (rho(x, t + h) - rho(x, t - h)) / (2.0 * h) + (jf(x + h, t) - jf(x - h, t)) / (2.0 * h);
            assert!(div.abs() < 1e-6, "k={k}: {div}");
        }
    }
}

#[test]
fn constant_solution_closed_form() {
    let (r0, s0) = (0.8, -1.3);
    let sol = SolutionBinding::constant(r0, s0);
    let (x, t) = (1.7, 0.9);
    let p1 = WeierstrassPath::x_then_t((0.0, 0.0), (x, t));
    let p2 = WeierstrassPath::t_then_x((0.0, 0.0), (x, t));
    let want = (r0 + s0) * x - r0 * s0 * t;
    let c1 = weierstrass_chi(1, &p1, &sol, 10, false).unwrap();
    let c2 = weierstrass_chi(1, &p2, &sol, 10, true).unwrap();
    assert!((c1 - want).abs() < 1e-13);
    assert!((c2 - want).abs() < 1e-13);
}

#[test]
fn centered_wave_matches_potential() {
    // on R = S = x/t the potential is χ = x^{k+1}/t^k
    let sol = SolutionBinding::from_record(solution("as4").unwrap(), &BTreeMap::new()).unwrap();
    let (a, b) = ((0.5, 1.0), (1.5, 2.0));
    let chi = |k: i32, p: (f64, f64)| p.0.powi(k + 1) / p.1.powi(k);
    for k in 1..=3usize {
        let want = chi(k as i32, b) - chi(k as i32, a);
        let p1 = WeierstrassPath::x_then_t(a, b);
        let p2 = WeierstrassPath::t_then_x(a, b);
        let rep = path_independence(k, &sol, [&p1, &p2], 10_000, true).unwrap();
        assert!(rep.ok, "{rep:?}");
        // midpoint error h²/24 · f'' per segment
        assert!((rep.chi[0] - want).abs() < 1e-7, "{} vs {want}", rep.chi[0]);
        assert!((rep.chi[1] - want).abs() < 1e-7);
    }
}

#[test]
fn shifted_constants_are_path_independent() {
    let vals = BTreeMap::from([("C1".to_string(), 0.4), ("C2".to_string(), 0.3)]);
    let sol = SolutionBinding::from_record(solution("as4").unwrap(), &vals).unwrap();
    let p1 = WeierstrassPath::new(vec![(0.2, 1.1), (0.9, 1.1), (0.9, 1.5), (1.6, 1.5), (1.6, 1.9)]);
    let p2 = WeierstrassPath::t_then_x((0.2, 1.1), (1.6, 1.9));
    assert!(path_independence(2, &sol, [&p1, &p2], 10_000, false).unwrap().ok);
}

#[test]
fn implicit_records_cannot_be_bound() {
    assert!(SolutionBinding::from_record(solution("as9").unwrap(), &BTreeMap::new()).is_err());
}

#[test]
fn mismatched_endpoints_rejected() {
    let sol = SolutionBinding::constant(1.0, 2.0);
    let p1 = WeierstrassPath::x_then_t((0.0, 0.0), (1.0, 1.0));
    let p2 = WeierstrassPath::x_then_t((0.0, 0.0), (1.0, 2.0));
    assert!(path_independence(1, &sol, [&p1, &p2], 10, false).is_err());
}

fn swap(e: &Expr) -> Expr {
    Substitution::new().field("R", Expr::jet("S", &[])).field("S", Expr::jet("R", &[])).apply(e).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn corrected_pairs_are_symmetric(k in 1usize..9) {
        let p = density_flux(k, Convention::Corrected).unwrap();
        prop_assert_eq!(swap(&p.rho), p.rho.clone());
        prop_assert_eq!(swap(&p.flux), p.flux.clone());
    }

    #[test]
    fn constant_chi_is_path_independent(
        r0 in -2.0f64..2.0, s0 in -2.0f64..2.0, x in -3.0f64..3.0, t in -3.0f64..3.0, k in 1usize..5
    ) {
        let sol = SolutionBinding::constant(r0, s0);
        let c1 = weierstrass_chi(k, &WeierstrassPath::x_then_t((0.0, 0.0), (x, t)), &sol, 4, false).unwrap();
        let c2 = weierstrass_chi(k, &WeierstrassPath::t_then_x((0.0, 0.0), (x, t)), &sol, 4, false).unwrap();
        prop_assert!((c1 - c2).abs() <= 1e-12 * (1.0 + c1.abs()));
        let (rho, j) = rho_j(k as i32, r0, s0);
        prop_assert!((c1 - (rho * x - j * t)).abs() <= 1e-12 * (1.0 + c1.abs()));
    }
}
