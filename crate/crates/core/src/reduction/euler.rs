//! Double-wave reduction of the one-dimensional Euler equations.
//!
//! With `u = k^{1/2}(r1 − r2) + u0`, `ρ = A e^{r1+r2}`, `p = kA e^{r1+r2} + p0`
//! the Euler system reduces on solutions of the invariant system
//! `r1_t + (k^{1/2}(r1 − r2 + 1) + u0) r1_x = 0`,
//! `r2_t + (k^{1/2}(r1 − r2 − 1) + u0) r2_x = 0`.

use std::collections::BTreeMap;

use cas::diff::JetContext;
use cas::parse::{parse, parse_with};
use cas::subst::{Rewriter, Substitution};
use cas::zero::symbolic_zero;
use cas::{Expr, Jet};
use serde::Serialize;

use crate::error::Result;
use crate::report::{Item, Status};

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub id: String,
    /// `sign` of the `±1` terms in the invariant system.
    pub sign: i64,
    pub k: String,
    pub residuals: Vec<String>,
    pub zero: bool,
}

/// Momentum residual and mass residual divided by `ρ`.
fn euler_residuals() -> Result<[Expr; 2]> {
    Ok([parse("u_t + u*u_x + p_x/rho")?, parse("(rho_t + u*rho_x + rho*u_x)/rho")?])
}

/// Substitutes the double wave into the Euler equations and reduces with the
/// invariant system, whose `±1` terms are multiplied by `sign`.
pub fn euler_check(id: &str, sign: i64, k: Option<&str>) -> Result<EulerReport> {
    let mut env = BTreeMap::new();
    if let Some(k) = k {
        env.insert("k".to_string(), parse(k)?);
    }
    let p = |s: &str| parse_with(s, &env);
    let sub = Substitution::new()
        .field("u", p("k^(1/2)*(r1 - r2) + u0")?)
        .field("rho", p("A*exp(r1 + r2)")?)
        .field("p", p("k*A*exp(r1 + r2) + p0")?);
    let sg = Expr::int(sign);
    let rules = vec![
        (Jet::new("r1", &['t']), p("-(k^(1/2)*(r1 - r2 + sg) + u0)*r1_x")?),
        (Jet::new("r2", &['t']), p("-(k^(1/2)*(r1 - r2 - sg) + u0)*r2_x")?),
    ];
    let sgs = Substitution::new().sym("sg", sg);
    let rules = rules.into_iter().map(|(j, e)| Ok((j, sgs.apply(&e)?))).collect::<Result<Vec<_>>>()?;
    let rw = Rewriter::new(rules, JetContext::standard());
    let mut residuals = Vec::new();
    let mut zero = true;
    for r in euler_residuals()? {
        let e = rw.apply(&sub.apply(&r)?)?;
        zero &= symbolic_zero(&e)?;
        residuals.push(e.to_string());
    }
    Ok(EulerReport {
        id: id.to_string(),
        sign,
        k: k.unwrap_or("k").to_string(),
        residuals,
        zero,
    })
}

pub fn verify_euler_double_wave() -> Result<EulerReport> {
    euler_check("double-wave", 1, None)
}

/// The reduction, the sign-flipped control and the degenerate `k = 0` case.
pub fn euler_items() -> Result<Vec<Item>> {
    let cases = [
        (euler_check("double-wave", 1, None)?, true),
        (euler_check("control-flipped-sign", -1, None)?, false),
        (euler_check("degenerate-k0", 1, Some("0"))?, true),
    ];
    Ok(cases
        .into_iter()
        .map(|(rep, want_zero)| {
            let ok = rep.zero == want_zero;
            let witness = (!rep.zero).then(|| rep.residuals.iter().find(|r| *r != "0").cloned()).flatten();
            Item::new("euler", &rep.id, if ok { Status::Pass } else { Status::Fail }).witness(witness).detail(&rep)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_equation_is_divided_by_density() {
        let rep = verify_euler_double_wave().unwrap();
        assert!(rep.zero, "{:?}", rep.residuals);
        assert!(rep.residuals.iter().all(|r| !r.contains("exp")));
    }
}
