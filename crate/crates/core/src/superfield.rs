//! Superspace calculus with one odd coordinate θ.
//!
//! A [`SuperExpr`] is `body + θ·soul`. `∂_θ` acts from the left.

use cas::parse::parse;
use cas::{Expr, JetContext};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct SuperExpr {
    pub body: Expr,
    pub soul: Expr,
}

impl SuperExpr {
    pub fn new(body: Expr, soul: Expr) -> Self {
        SuperExpr { body, soul }
    }

    pub fn zero() -> Self {
        SuperExpr::new(Expr::zero(), Expr::zero())
    }

    pub fn scalar(e: Expr) -> Self {
        SuperExpr::new(e, Expr::zero())
    }

    /// The odd coordinate itself.
    pub fn theta() -> Self {
        SuperExpr::new(Expr::zero(), Expr::one())
    }

    /// `Φ = ξ + θR`.
    pub fn phi() -> Self {
        SuperExpr::new(Expr::jet("xi", &[]), Expr::jet("R", &[]))
    }

    /// `Ψ = ψ + θS`.
    pub fn psi() -> Self {
        SuperExpr::new(Expr::jet("psi", &[]), Expr::jet("S", &[]))
    }

    pub fn add(&self, o: &SuperExpr) -> SuperExpr {
        SuperExpr::new(self.body.add(&o.body), self.soul.add(&o.soul))
    }

    pub fn scale(&self, c: &Expr) -> SuperExpr {
        SuperExpr::new(c.mul(&self.body), c.mul(&self.soul))
    }

    /// Componentwise total derivative in `x` or `t`.
    pub fn total(&self, v: char) -> Result<SuperExpr> {
        let ctx = JetContext::standard();
        Ok(SuperExpr::new(ctx.total(&self.body, v)?, ctx.total(&self.soul, v)?))
    }
}

/// `D = θ∂_x + ∂_θ`: `D(a + θb) = b + θa_x`.
pub fn covariant_d(e: &SuperExpr) -> Result<SuperExpr> {
    let ax = JetContext::standard().total(&e.body, 'x')?;
    Ok(SuperExpr::new(e.soul.clone(), ax))
}

/// `Q = θ∂_x − ∂_θ`: `Q(a + θb) = −b + θa_x`.
pub fn susy_q(e: &SuperExpr) -> Result<SuperExpr> {
    let ax = JetContext::standard().total(&e.body, 'x')?;
    Ok(SuperExpr::new(e.soul.neg(), ax))
}

/// `(a + θb)(c + θd) = ac + θ(bc + (−1)^{|a|} a d)`.
pub fn smul(l: &SuperExpr, r: &SuperExpr) -> SuperExpr {
    let (a_even, a_odd) = l.body.split_parity();
    let body = l.body.mul(&r.body);
    let soul = l
        .soul
        .mul(&r.body)
        .add(&a_even.mul(&r.soul))
        .sub(&a_odd.mul(&r.soul));
    SuperExpr::new(body, soul)
}

fn d_n(e: &SuperExpr, n: usize) -> Result<SuperExpr> {
    let mut out = e.clone();
    for _ in 0..n {
        out = covariant_d(&out)?;
    }
    Ok(out)
}

/// One superequation `U_t + c·DV·D²U + (1 − c)·V·D³U`.
fn superequation(u: &SuperExpr, v: &SuperExpr, c: &Expr) -> Result<SuperExpr> {
    let first = smul(&covariant_d(v)?, &d_n(u, 2)?).scale(c);
    let second = smul(v, &d_n(u, 3)?).scale(&Expr::one().sub(c));
    Ok(u.total('t')?.add(&first).add(&second))
}

/// θ-components of the superfield system with coupling constants `a`, `b`,
/// ordered as the equations for `R`, `S`, `ξ`, `ψ`.
pub fn decompose_system(a: &Expr, b: &Expr) -> Result<[Expr; 4]> {
    let phi = SuperExpr::phi();
    let psi = SuperExpr::psi();
    let e1 = superequation(&phi, &psi, a)?;
    let e2 = superequation(&psi, &phi, b)?;
    Ok([e1.soul, e2.soul, e1.body, e2.body])
}

/// The component system written out by hand, with `a`, `b` substituted.
pub fn component_system(a: &Expr, b: &Expr) -> Result<[Expr; 4]> {
    let p = |s: &str| parse(s).map_err(crate::error::Error::from);
    let one = Expr::one();
    let r = p("R_t + S*R_x")?
        .add(&a.mul(&p("psi_x*xi_x")?))
        .add(&a.sub(&one).mul(&p("psi*xi_xx")?));
    let s = p("S_t + R*S_x")?
        .add(&b.mul(&p("xi_x*psi_x")?))
        .add(&b.sub(&one).mul(&p("xi*psi_xx")?));
    let xi = p("xi_t")?
        .add(&a.mul(&p("S*xi_x")?))
        .add(&one.sub(a).mul(&p("psi*R_x")?));
    let psi = p("psi_t")?
        .add(&b.mul(&p("R*psi_x")?))
        .add(&one.sub(b).mul(&p("xi*S_x")?));
    Ok([r, s, xi, psi])
}
