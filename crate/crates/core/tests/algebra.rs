use cas::parse::parse;
use cas::Expr;
use rinv::liealg::{
    adjoint_orbit, bracket, classical_generators, decompose, diff_tables, lookup, structure_table, subalgebras,
    susy_generators, Algebra, VectorField,
};
use rinv::Error;

fn gen(name: &str) -> VectorField {
    classical_generators().into_iter().chain(susy_generators()).find(|g| g.name == name).unwrap()
}

#[test]
fn classical_table_matches_reference() {
    let t = structure_table(&classical_generators(), true).unwrap();
    let diffs = diff_tables(&t, &Algebra::Classical.reference());
    assert_eq!(diffs.len(), 36);
    let bad: Vec<_> = diffs.iter().filter(|d| !d.ok).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn susy_table_matches_reference() {
    let t = structure_table(&susy_generators(), true).unwrap();
    let diffs = diff_tables(&t, &Algebra::Susy.reference());
    assert_eq!(diffs.len(), 64);
    let bad: Vec<_> = diffs.iter().filter(|d| !d.ok).collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn single_generator_table() {
    let t = structure_table(&[gen("T1")], false).unwrap();
    assert_eq!(t.entry_text(0, 0), "0");
}

#[test]
fn named_brackets() {
    let t = Algebra::Susy.reference();
    let c = structure_table(&susy_generators(), false).unwrap();
    assert_eq!(c.entry_text(0, 4), "-3P0");
    assert_eq!(c.entry_text(6, 7), "0");
    assert_eq!(c, t);
}

#[test]
fn graded_identities() {
    for alg in [Algebra::Classical, Algebra::Susy] {
        let t = structure_table(&alg.generators(), false).unwrap();
        assert!(t.antisymmetry_violations().is_empty());
        assert!(t.jacobi_violations().is_empty());
    }
}

#[test]
fn ideals_and_solvability() {
    let c = Algebra::Classical.reference();
    assert!(c.is_ideal(&["T1", "T0"]).unwrap());
    assert!(!c.is_ideal(&["W"]).unwrap());
    assert!(!c.is_solvable());
    let s = Algebra::Susy.reference();
    assert!(s.is_ideal(&["Y1", "Y2"]).unwrap());
    assert!(s.is_solvable());
    assert_eq!(s.derived_series(), vec![8, 5, 1, 0]);
}

#[test]
fn adjoint_series() {
    let eps = Expr::sym("eps");
    let got = adjoint_orbit(&gen("T1"), &gen("M1"), &eps, 12, false).unwrap();
    let want = gen("M1").add(&gen("T1").scale(&eps));
    assert_eq!(got.coeffs, want.coeffs);

    let got = adjoint_orbit(&gen("B"), &gen("D1"), &eps, 12, false).unwrap();
    let want = gen("D1").add(&gen("B").scale(&eps.neg()));
    assert_eq!(got.coeffs, want.coeffs);

    let got = adjoint_orbit(&gen("M2"), &gen("J"), &Expr::zero(), 12, true).unwrap();
    assert_eq!(got.coeffs, gen("J").coeffs);
}

#[test]
fn adjoint_series_non_terminating() {
    // ad_M2 scales W, so the series never terminates
    let r = adjoint_orbit(&gen("M2"), &gen("W"), &Expr::sym("eps"), 12, false);
    assert!(matches!(r, Err(Error::NonTerminating(12))));
    assert!(adjoint_orbit(&gen("M2"), &gen("W"), &Expr::sym("eps"), 12, true).is_ok());
}

#[test]
fn catalog_lookup() {
    assert_eq!(subalgebras().len(), 41);
    assert_eq!(subalgebras().iter().filter(|s| s.algebra == Algebra::Classical).count(), 13);
    let l5 = lookup("L5").unwrap();
    assert_eq!(l5.display, "W - J");
    let v = l5.vector_field().unwrap();
    assert_eq!(v.coeffs, gen("W").add(&gen("J").scale(&Expr::int(-1))).coeffs);
    let sl28 = lookup("SL28").unwrap().vector_field().unwrap();
    assert!(!sl28.odd);
    assert!(sl28.parity_consistent());
    assert!(matches!(lookup("L0"), Err(Error::UnknownLabel(_))));
}

#[test]
fn every_catalog_entry_builds() {
    for s in subalgebras() {
        let v = s.vector_field().unwrap();
        assert!(!v.is_zero(), "{}", s.label);
        assert!(v.parity_consistent(), "{}", s.label);
    }
}

#[test]
fn bracket_of_scaled_fields() {
    let a = gen("D1").scale(&parse("3/2").unwrap());
    let br = bracket(&a, &gen("P0")).unwrap();
    let c = decompose(&br, &susy_generators()).unwrap();
    assert_eq!(c[4], cas::rational::q(-9, 2));
}
