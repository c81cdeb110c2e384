//! Invariant ansätze, reduced equations and the explicit solution catalog.

pub mod euler;
pub mod solutions;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use cas::diff::{partial, Coord, JetContext};
use cas::expr::{Atom, Key, Odd};
use cas::parse::parse_with;
use cas::subst::Substitution;
use cas::zero::is_zero;
use cas::{Expr, NumericOptions, Q};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{self, Algebra};
use crate::report::Status;
use crate::symmetry::PDESystem;

/// Dependent variables of the reduced systems.
pub const REDUCED: [&str; 4] = ["F", "G", "Lam", "Om"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionAnsatz {
    pub label: String,
    pub system: Algebra,
    /// Fixed admissible values for the representative's parameters.
    pub params: BTreeMap<String, String>,
    pub sigma: String,
    pub fields: BTreeMap<String, String>,
    /// Printed arguments of reduced functions that differ from `s`.
    #[serde(default)]
    pub arguments: BTreeMap<String, String>,
    /// Substitutions that rewrite the computed residuals in terms of `s`.
    pub eliminate: BTreeMap<String, String>,
    pub expected: Vec<String>,
    /// Declared non-monomial factors, used with a numeric check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub domain: BTreeMap<String, (f64, f64)>,
    pub erratum: bool,
    pub erratum_notes: Vec<String>,
}

const REDUCTIONS_JSON: &str = include_str!("../../catalog/reductions.json");

pub fn ansatze() -> &'static [ReductionAnsatz] {
    static CAT: OnceLock<Vec<ReductionAnsatz>> = OnceLock::new();
    CAT.get_or_init(|| serde_json::from_str(REDUCTIONS_JSON).expect("embedded reduction catalog"))
}

pub fn ansatz(label: &str) -> Result<&'static ReductionAnsatz> {
    ansatze().iter().find(|a| a.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

pub fn system_for(a: Algebra) -> PDESystem {
    match a {
        Algebra::Classical => PDESystem::classical(),
        Algebra::Susy => PDESystem::susy(),
    }
}

impl ReductionAnsatz {
    pub fn env(&self) -> Result<BTreeMap<String, Expr>> {
        let empty = BTreeMap::new();
        self.params.iter().map(|(k, v)| Ok((k.clone(), parse_with(v, &empty)?))).collect()
    }

    pub fn expr(&self, s: &str) -> Result<Expr> {
        Ok(parse_with(s, &self.env()?)?)
    }

    pub fn sigma_expr(&self) -> Result<Expr> {
        self.expr(&self.sigma)
    }

    pub fn expected_exprs(&self) -> Result<Vec<Expr>> {
        self.expected.iter().map(|s| self.expr(s)).collect()
    }

    pub fn numeric_options(&self, base: &NumericOptions) -> NumericOptions {
        let mut o = base.clone();
        for (k, (lo, hi)) in &self.domain {
            o = o.domain(k, *lo, *hi);
        }
        o
    }
}

/// Substitutes the ansatz into `sys` and rewrites the result in `s`.
pub fn apply_ansatz(sys: &PDESystem, a: &ReductionAnsatz) -> Result<Vec<Expr>> {
    let ctx = JetContext::with_sigma(a.sigma_expr()?, &REDUCED);
    let mut sub = Substitution::new().context(ctx);
    for (f, img) in &a.fields {
        sub = sub.field(f, a.expr(img)?);
    }
    let mut elim = Substitution::new();
    for (v, e) in &a.eliminate {
        elim = elim.sym(v, a.expr(e)?);
    }
    sys.residuals
        .iter()
        .map(|r| {
            let c = sub.apply(r)?;
            Ok(if a.eliminate.is_empty() { c } else { elim.apply(&c)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Match {
    pub matched: bool,
    pub factor: Option<String>,
    pub computed: String,
    pub expected: String,
}

fn is_field_atom(a: &Atom) -> bool {
    matches!(a, Atom::Jet(_))
}

/// Field-jet and odd part of a monomial, and the remaining coefficient.
fn split_key(k: &Key, c: &Q) -> ((Vec<Odd>, Vec<(Atom, Q)>), Expr) {
    let field: Vec<(Atom, Q)> = k.mono.iter().filter(|(a, _)| is_field_atom(a)).cloned().collect();
    let rest = Expr::product(
        k.mono.iter().filter(|(a, _)| !is_field_atom(a)).map(|(a, e)| Expr::atom_pow(a.clone(), e.clone())),
    )
    .scale(c);
    ((k.odd.clone(), field), rest)
}

fn zero_at(e: &Expr, opts: &NumericOptions) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    Ok(is_zero(e, opts)?.zero)
}

/// Finds a factor `f`, a monomial free of field jets, with
/// `computed = f · expected`.
pub fn match_one(computed: &Expr, expected: &Expr, opts: &NumericOptions) -> Result<Match> {
    let mut out = Match { matched: false, factor: None, computed: computed.to_string(), expected: expected.to_string() };
    if computed.is_zero() || expected.is_zero() {
        out.matched = computed.is_zero() && expected.is_zero();
        out.factor = out.matched.then(|| "1".to_string());
        return Ok(out);
    }
    let comp: Vec<_> = computed.terms().map(|(k, c)| split_key(k, c)).collect();
    let mut tried: Vec<Expr> = Vec::new();
    for (ek, ec) in expected.terms() {
        let (epart, erest) = split_key(ek, ec);
        for (cpart, crest) in &comp {
            if *cpart != epart {
                continue;
            }
            let f = crest.div(&erest)?;
            if f.len() != 1 || tried.contains(&f) {
                continue;
            }
            if zero_at(&computed.sub(&f.mul(expected)), opts)? {
                out.matched = true;
                out.factor = Some(f.to_string());
                return Ok(out);
            }
            tried.push(f);
        }
    }
    Ok(out)
}

/// Pairwise [`match_one`]; lengths must agree.
pub fn match_reduced(computed: &[Expr], expected: &[Expr], opts: &NumericOptions) -> Result<Vec<Match>> {
    if computed.len() != expected.len() {
        return Err(Error::Catalog(format!("{} computed vs {} expected residuals", computed.len(), expected.len())));
    }
    computed.iter().zip(expected).map(|(c, e)| match_one(c, e, opts)).collect()
}

fn match_declared(a: &ReductionAnsatz, computed: &[Expr], factors: &[String], opts: &NumericOptions) -> Result<Vec<Match>> {
    let sigma = a.sigma_expr()?;
    let to_xt = Substitution::new().sym("s", sigma);
    let expected = a.expected_exprs()?;
    let mut out = Vec::new();
    for ((c, e), f) in computed.iter().zip(&expected).zip(factors) {
        let fe = a.expr(f)?;
        let diff = c.sub(&fe.mul(&to_xt.apply(e)?));
        let ok = zero_at(&diff, opts)?;
        out.push(Match { matched: ok, factor: ok.then(|| f.clone()), computed: c.to_string(), expected: e.to_string() });
    }
    Ok(out)
}

/// Instances of the representative: `eps` is set to ±1 when present.
fn representative_instances(a: &ReductionAnsatz) -> Result<Vec<(String, Substitution, liealg::VectorField)>> {
    let rep = liealg::lookup(&a.label)?;
    let v = rep.vector_field()?;
    let uses_eps = rep.combination.iter().any(|(c, _)| c.contains("eps"));
    let variants: Vec<Option<i64>> = if uses_eps { vec![Some(1), Some(-1)] } else { vec![None] };
    let env = a.env()?;
    let mut out = Vec::new();
    for eps in variants {
        let mut s = Substitution::new();
        for (k, val) in &env {
            s = s.sym(k, val.clone());
        }
        let tag = match eps {
            Some(e) => {
                s = s.sym("eps", Expr::int(e));
                format!("eps={e}")
            }
            None => String::new(),
        };
        let mut w = v.clone();
        for c in w.coeffs.values_mut() {
            *c = s.apply(c)?;
        }
        out.push((tag, s, w));
    }
    Ok(out)
}

/// Checks that `s`, the field images and the printed function arguments
/// are compatible with the subalgebra generator. Returns the violations.
pub fn check_ansatz_invariance(a: &ReductionAnsatz, opts: &NumericOptions) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    for (tag, s, v) in representative_instances(a)? {
        let pre = if tag.is_empty() { String::new() } else { format!("[{tag}] ") };
        let sigma = s.apply(&a.sigma_expr()?)?;
        if !zero_at(&v.action(&sigma)?, opts)? {
            problems.push(format!("{pre}v(s) != 0"));
        }
        let mut images = Substitution::new();
        let mut imgs = BTreeMap::new();
        for (f, img) in &a.fields {
            let u = s.apply(&a.expr(img)?)?;
            images = images.field(f, u.clone());
            imgs.insert(f.clone(), u);
        }
        let xi: Vec<Expr> = ["x", "t"].iter().map(|c| v.coeff(&Coord::sym(c))).collect();
        for (f, u) in &imgs {
            let phi = images.apply(&v.coeff(&Coord::field(f)))?;
            let mut r = phi;
            for (c, coef) in ["x", "t"].iter().zip(&xi) {
                let coef = images.apply(coef)?;
                r = r.sub(&coef.mul(&partial(u, &Atom::sym(c))?));
            }
            if !zero_at(&r, opts)? {
                problems.push(format!("{pre}image of {f} is not invariant: {r}"));
            }
        }
        for (f, arg) in &a.arguments {
            let e = s.apply(&a.expr(arg)?)?;
            let va = v.action(&e)?;
            if !zero_at(&va, opts)? {
                problems.push(format!("{pre}argument {arg} of {f} is not invariant: v({arg}) = {va}"));
            }
        }
    }
    Ok(problems)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub label: String,
    pub status: Status,
    pub matches: Vec<Match>,
    pub problems: Vec<String>,
}

impl ReductionReport {
    pub fn factors(&self) -> Vec<Option<String>> {
        self.matches.iter().map(|m| m.factor.clone()).collect()
    }

    pub fn witness(&self) -> Option<String> {
        if let Some(p) = self.problems.first() {
            return Some(p.clone());
        }
        self.matches
            .iter()
            .enumerate()
            .find(|(_, m)| !m.matched)
            .map(|(i, m)| format!("equation {}: computed {} vs expected {}", i + 1, m.computed, m.expected))
    }
}

pub fn verify_reduction(a: &ReductionAnsatz, opts: &NumericOptions) -> Result<ReductionReport> {
    let opts = a.numeric_options(opts);
    let sys = system_for(a.system);
    let computed = apply_ansatz(&sys, a)?;
    let matches = match &a.factor {
        Some(f) => match_declared(a, &computed, f, &opts)?,
        None => match_reduced(&computed, &a.expected_exprs()?, &opts)?,
    };
    let problems = check_ansatz_invariance(a, &opts)?;
    let ok = problems.is_empty() && matches.iter().all(|m| m.matched);
    Ok(ReductionReport { label: a.label.clone(), status: Status::flagged(ok, a.erratum), matches, problems })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cas::parse::parse;

    #[test]
    fn factor_search() {
        let opts = NumericOptions::default();
        let c = parse("(-2*F + s*F_s + G*F_s)/t^3").unwrap();
        let e = parse("-2*F + s*F_s + G*F_s").unwrap();
        let m = match_one(&c, &e, &opts).unwrap();
        assert!(m.matched);
        assert_eq!(m.factor.as_deref(), Some("t^(-3)"));
        let m = match_one(&c, &parse("-2*F + s*F_s").unwrap(), &opts).unwrap();
        assert!(!m.matched);
    }

    #[test]
    fn identical_lists_match() {
        let e = vec![parse("F_s + G").unwrap(), Expr::zero()];
        let m = match_reduced(&e, &e, &NumericOptions::default()).unwrap();
        assert!(m.iter().all(|m| m.matched && m.factor.as_deref() == Some("1")));
    }
}
