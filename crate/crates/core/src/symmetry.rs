//! First prolongation of point vector fields and on-shell invariance checks.

use std::collections::BTreeMap;

use cas::diff::{Coord, JetContext};
use cas::parse::parse;
use cas::subst::Rewriter;
use cas::zero::symbolic_zero;
use cas::{Expr, Jet};
use serde::Serialize;

use crate::error::Result;
use crate::liealg::{bracket, VectorField};
use crate::par;

const VARS: [char; 2] = ['x', 't'];

#[derive(Clone, Debug)]
pub struct PDESystem {
    pub name: String,
    pub residuals: Vec<Expr>,
    /// Leading `t`-derivatives and their right-hand sides.
    pub solved: Vec<(Jet, Expr)>,
    pub fields: Vec<String>,
}

impl PDESystem {
    fn from_text(name: &str, fields: &[&str], residuals: &[&str], solved: &[(&str, &str)]) -> Self {
        let p = |s: &str| parse(s).expect("system text");
        PDESystem {
            name: name.to_string(),
            residuals: residuals.iter().map(|s| p(s)).collect(),
            solved: solved.iter().map(|(f, rhs)| (Jet::new(f, &['t']), p(rhs))).collect(),
            fields: fields.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn classical() -> Self {
        PDESystem::from_text(
            "classical",
            &["R", "S"],
            &["R_t + S*R_x", "S_t + R*S_x"],
            &[("R", "-S*R_x"), ("S", "-R*S_x")],
        )
    }

    pub fn susy() -> Self {
        PDESystem::from_text(
            "susy",
            &["R", "S", "xi", "psi"],
            &["R_t + S*R_x + psi_x*xi_x", "S_t + R*S_x + xi_x*psi_x", "xi_t + S*xi_x", "psi_t + R*psi_x"],
            &[
                ("R", "-S*R_x - psi_x*xi_x"),
                ("S", "-R*S_x - xi_x*psi_x"),
                ("xi", "-S*xi_x"),
                ("psi", "-R*psi_x"),
            ],
        )
    }

    pub fn rewriter(&self) -> Rewriter {
        Rewriter::new(self.solved.clone(), JetContext::standard())
    }

    /// Replaces leading derivatives and their prolongations.
    pub fn on_shell(&self, e: &Expr) -> Result<Expr> {
        Ok(self.rewriter().apply(e)?)
    }
}

/// Coefficients of the first prolongation, keyed by jet.
pub fn prolong(v: &VectorField, fields: &[String]) -> Result<BTreeMap<Jet, Expr>> {
    let ctx = JetContext::standard();
    let xi: Vec<Expr> = VARS.iter().map(|c| v.coeff(&Coord::sym(&c.to_string()))).collect();
    let mut out = BTreeMap::new();
    for f in fields {
        let u = Jet::new(f, &[]);
        let phi = v.coeff(&Coord::jet(u.clone()));
        // characteristic Q = φ − Σ ξ^j u_j
        let mut q = phi;
        for (j, c) in VARS.iter().enumerate() {
            q = q.sub(&xi[j].mul(&Expr::from_jet(u.with(*c))));
        }
        for i in VARS {
            let mut coef = ctx.total(&q, i)?;
            for (j, c) in VARS.iter().enumerate() {
                coef = coef.add(&xi[j].mul(&Expr::from_jet(u.with(*c).with(i))));
            }
            out.insert(u.with(i), coef);
        }
    }
    Ok(out)
}

/// `pr v(e)` for a first-order expression `e`.
pub fn apply_prolonged(v: &VectorField, prolonged: &BTreeMap<Jet, Expr>, e: &Expr) -> Result<Expr> {
    let mut out = v.action(e)?;
    for (j, coef) in prolonged {
        if coef.is_zero() {
            continue;
        }
        let d = Coord::jet(j.clone()).derivative(e)?;
        if !d.is_zero() {
            out = out.add(&coef.mul(&d));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub system: String,
    pub generator: String,
    pub residuals: Vec<String>,
    pub pass: bool,
    pub witness: Option<String>,
}

/// Applies the prolonged field to each residual, reduces on-shell and tests
/// for exact zero.
pub fn check_invariance(v: &VectorField, sys: &PDESystem) -> Result<InvarianceReport> {
    let pr = prolong(v, &sys.fields)?;
    let rw = sys.rewriter();
    let mut residuals = Vec::new();
    let mut witness = None;
    for (k, r) in sys.residuals.iter().enumerate() {
        let applied = apply_prolonged(v, &pr, r)?;
        let reduced = rw.apply(&applied)?;
        let zero = symbolic_zero(&reduced)?;
        if !zero && witness.is_none() {
            witness = Some(format!("equation {}: {}", k + 1, reduced));
        }
        residuals.push(reduced.to_string());
    }
    Ok(InvarianceReport {
        system: sys.name.clone(),
        generator: v.name.clone(),
        pass: witness.is_none(),
        residuals,
        witness,
    })
}

pub fn verify_generator_suite(sys: &PDESystem, gens: &[VectorField], parallel: bool) -> Result<Vec<InvarianceReport>> {
    par::map(parallel, gens.iter().collect(), |g| check_invariance(g, sys)).into_iter().collect()
}

/// Invariance of every pairwise bracket of `gens`.
pub fn check_bracket_closure(sys: &PDESystem, gens: &[VectorField], parallel: bool) -> Result<Vec<InvarianceReport>> {
    let pairs: Vec<(usize, usize)> =
        (0..gens.len()).flat_map(|i| (i..gens.len()).map(move |j| (i, j))).collect();
    par::map(parallel, pairs, |(i, j)| {
        let b = bracket(&gens[i], &gens[j])?;
        check_invariance(&b, sys)
    })
    .into_iter()
    .collect()
}

/// `∂_R` alone, which is not a symmetry of either system.
pub fn negative_control() -> VectorField {
    VectorField::from_text("dR", &[("R", "1")]).expect("control field")
}

/// The classical `J` extended by zero on the odd fields.
pub fn extended_j() -> VectorField {
    VectorField::from_text("J (extended)", &[("t", "x"), ("R", "-R^2"), ("S", "-S^2")]).expect("control field")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::classical_generators;

    #[test]
    fn prolonged_w() {
        let w = classical_generators().into_iter().find(|g| g.name == "W").unwrap();
        let pr = prolong(&w, &["R".into(), "S".into()]).unwrap();
        assert_eq!(pr[&Jet::new("R", &['t'])], parse("-R_x").unwrap());
        assert!(pr[&Jet::new("R", &['x'])].is_zero());
    }

    #[test]
    fn translation_prolongs_to_zero() {
        let t1 = classical_generators().into_iter().find(|g| g.name == "T1").unwrap();
        let pr = prolong(&t1, &["R".into(), "S".into()]).unwrap();
        assert!(pr.values().all(Expr::is_zero));
    }

    #[test]
    fn on_shell_is_zero_on_residuals() {
        for sys in [PDESystem::classical(), PDESystem::susy()] {
            for r in &sys.residuals {
                assert!(sys.on_shell(r).unwrap().is_zero());
            }
        }
    }
}
