use cas::parse::parse;
use cas::subst::Substitution;
use cas::Expr;
use proptest::prelude::*;
use rinv::superfield::{component_system, covariant_d, decompose_system, susy_q, SuperExpr};

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

#[test]
fn symbolic_coupling_constants() {
    let (a, b) = (Expr::sym("a"), Expr::sym("b"));
    assert_eq!(decompose_system(&a, &b).unwrap(), component_system(&a, &b).unwrap());
}

#[test]
fn unit_coupling_gives_susy_system() {
    let one = Expr::one();
    let got = decompose_system(&one, &one).unwrap();
    let want = [
        p("R_t + S*R_x + psi_x*xi_x"),
        p("S_t + R*S_x + xi_x*psi_x"),
        p("xi_t + S*xi_x"),
        p("psi_t + R*psi_x"),
    ];
    assert_eq!(got, want);
}

#[test]
fn general_xi_component() {
    let a = Expr::sym("a");
    let got = decompose_system(&a, &Expr::sym("b")).unwrap();
    assert_eq!(got[2], p("xi_t + a*S*xi_x + (1 - a)*psi*R_x"));
}

#[test]
fn classical_limit() {
    let one = Expr::one();
    let s = Substitution::new().field("xi", Expr::zero()).field("psi", Expr::zero());
    let got: Vec<Expr> = decompose_system(&one, &one).unwrap().iter().map(|e| s.apply(e).unwrap()).collect();
    assert_eq!(got, vec![p("R_t + S*R_x"), p("S_t + R*S_x"), Expr::zero(), Expr::zero()]);
}

fn odd_part() -> impl Strategy<Value = Expr> {
    let leaf = prop::sample::select(vec!["xi", "psi_x", "eta1*R", "x*psi", "xi_x*psi*eta2", "K*S_x"])
        .prop_map(|s| parse(s).unwrap());
    prop::collection::vec((leaf, -3i64..4), 1..4)
        .prop_map(|ts| Expr::sum(ts.into_iter().map(|(e, c)| e.mul(&Expr::int(c)))))
}

fn even_part() -> impl Strategy<Value = Expr> {
    let leaf = prop::sample::select(vec!["R", "S_x", "x*t", "xi*psi", "R^2*S", "eta1*eta2", "exp(x)"])
        .prop_map(|s| parse(s).unwrap());
    prop::collection::vec((leaf, -3i64..4), 1..4)
        .prop_map(|ts| Expr::sum(ts.into_iter().map(|(e, c)| e.mul(&Expr::int(c)))))
}

fn superexpr() -> impl Strategy<Value = SuperExpr> {
    prop_oneof![
        (odd_part(), even_part()).prop_map(|(a, b)| SuperExpr::new(a, b)),
        (even_part(), odd_part()).prop_map(|(a, b)| SuperExpr::new(a, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_is_dx(f in superexpr()) {
        let dd = covariant_d(&covariant_d(&f).unwrap()).unwrap();
        prop_assert_eq!(dd, f.total('x').unwrap());
    }

    #[test]
    fn q_squared_is_minus_dx(f in superexpr()) {
        let qq = susy_q(&susy_q(&f).unwrap()).unwrap();
        prop_assert_eq!(qq, f.total('x').unwrap().scale(&Expr::int(-1)));
    }

    #[test]
    fn q_and_d_anticommute(f in superexpr()) {
        let qd = susy_q(&covariant_d(&f).unwrap()).unwrap();
        let dq = covariant_d(&susy_q(&f).unwrap()).unwrap();
        prop_assert_eq!(qd.add(&dq), SuperExpr::zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn rational_coupling_constants(an in -9i64..10, ad in 1i64..8, bn in -9i64..10, bd in 1i64..8) {
        let (a, b) = (Expr::frac(an, ad), Expr::frac(bn, bd));
        prop_assert_eq!(decompose_system(&a, &b).unwrap(), component_system(&a, &b).unwrap());
    }
}
