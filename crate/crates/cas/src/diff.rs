//! Total and partial derivatives.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::expr::{Atom, Expr, Func, Jet, Key, Odd};
use crate::rational::Q;
use crate::registry;
use crate::Result;

/// How leaf atoms respond to a derivation.
trait Leaf {
    fn even(&self, a: &Atom) -> Result<Expr>;
    fn odd(&self, o: &Odd) -> Result<Expr>;
}

fn key_expr(odd: &[Odd], mono: &[(Atom, Q)], c: &Q) -> Expr {
    let mut e = Expr::zero();
    e.push(Key { odd: odd.to_vec(), mono: mono.to_vec() }, c.clone());
    e
}

/// Derivative of one even atom by the chain rule, leaves delegated.
fn atom_derivative(a: &Atom, leaf: &dyn Leaf) -> Result<Expr> {
    match a {
        Atom::Sym(_) | Atom::Jet(_) => leaf.even(a),
        Atom::Num(_) => Ok(Expr::zero()),
        Atom::Base(b) => derive(b, leaf),
        Atom::Func(f, arg) => {
            let du = derive(arg, leaf)?;
            if du.is_zero() {
                return Ok(du);
            }
            let u = (**arg).clone();
            let outer = match f {
                Func::Exp => Expr::func(Func::Exp, &u)?,
                Func::Ln => u.recip()?,
                Func::Sin => Expr::func(Func::Cos, &u)?,
                Func::Cos => Expr::func(Func::Sin, &u)?.neg(),
                Func::Tan => {
                    let t = Expr::func(Func::Tan, &u)?;
                    Expr::one().add(&t.mul(&t))
                }
                Func::Atan => Expr::one().add(&u.mul(&u)).recip()?,
            };
            Ok(outer.mul(&du))
        }
    }
}

/// Applies an even derivation determined by its action on leaves.
fn derive(e: &Expr, leaf: &dyn Leaf) -> Result<Expr> {
    let mut out = Expr::zero();
    for (k, c) in e.terms() {
        for i in 0..k.odd.len() {
            let d = leaf.odd(&k.odd[i])?;
            if d.is_zero() {
                continue;
            }
            let pre = key_expr(&k.odd[..i], &[], &Q::one());
            let post = key_expr(&k.odd[i + 1..], &k.mono, c);
            out = out.add(&pre.mul(&d).mul(&post));
        }
        for j in 0..k.mono.len() {
            let (a, ex) = &k.mono[j];
            let da = atom_derivative(a, leaf)?;
            if da.is_zero() {
                continue;
            }
            let mut rest = k.mono.clone();
            rest.remove(j);
            let mut head = key_expr(&k.odd, &rest, &(c * ex));
            let lowered = ex - Q::one();
            if !lowered.is_zero() {
                if matches!(a, Atom::Func(Func::Exp, _)) {
                    // exp atoms always carry exponent 1
                    head = head.mul(&Expr::atom(a.clone()).pow(&lowered)?);
                } else {
                    head = head.mul(&Expr::atom_pow(a.clone(), lowered));
                }
            }
            out = out.add(&head.mul(&da));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Sigma {
    def: Expr,
    fields: BTreeSet<Arc<str>>,
}

/// Total-derivative rules.
///
/// The standard context maps `u_J ↦ u_{J+v}`. A context with a symmetry
/// variable `σ(x, t)` treats the listed fields as functions of `s = σ` only,
/// so `D_v F_J = F_{J+s} · D_v σ`.
#[derive(Clone, Debug, Default)]
pub struct JetContext {
    sigma: Option<Sigma>,
}

struct Total<'a> {
    ctx: &'a JetContext,
    v: char,
    dsigma: Option<Expr>,
}

impl Leaf for Total<'_> {
    fn even(&self, a: &Atom) -> Result<Expr> {
        match a {
            Atom::Sym(s) => {
                if &**s == registry::var_name(self.v) {
                    Ok(Expr::one())
                } else if &**s == "s" {
                    Ok(self.dsigma.clone().unwrap_or_else(Expr::zero))
                } else {
                    Ok(Expr::zero())
                }
            }
            Atom::Jet(j) => Ok(self.jet(j)),
            _ => Ok(Expr::zero()),
        }
    }

    fn odd(&self, o: &Odd) -> Result<Expr> {
        match o {
            Odd::Gen(_) => Ok(Expr::zero()),
            Odd::Jet(j) => Ok(self.jet(j)),
        }
    }
}

impl Total<'_> {
    fn jet(&self, j: &Jet) -> Expr {
        match (&self.ctx.sigma, &self.dsigma) {
            (Some(s), Some(ds)) if s.fields.contains(&j.field) => Expr::from_jet(j.with('s')).mul(ds),
            _ => Expr::from_jet(j.with(self.v)),
        }
    }
}

impl JetContext {
    pub fn standard() -> JetContext {
        JetContext::default()
    }

    pub fn with_sigma(def: Expr, fields: &[&str]) -> JetContext {
        JetContext {
            sigma: Some(Sigma {
                def,
                fields: fields.iter().map(|f| Arc::from(*f)).collect(),
            }),
        }
    }

    pub fn sigma(&self) -> Option<&Expr> {
        self.sigma.as_ref().map(|s| &s.def)
    }

    /// `D_v e`.
    pub fn total(&self, e: &Expr, v: char) -> Result<Expr> {
        let dsigma = match &self.sigma {
            Some(s) if v != 's' => Some(JetContext::standard().total(&s.def, v)?),
            _ => None,
        };
        derive(e, &Total { ctx: self, v, dsigma })
    }

    /// `D_{v1} D_{v2} … e`.
    pub fn total_multi(&self, e: &Expr, idx: &[char]) -> Result<Expr> {
        let mut out = e.clone();
        for &v in idx {
            out = self.total(&out, v)?;
        }
        Ok(out)
    }
}

struct Partial<'a>(&'a Atom);

impl Leaf for Partial<'_> {
    fn even(&self, a: &Atom) -> Result<Expr> {
        Ok(if a == self.0 { Expr::one() } else { Expr::zero() })
    }
    fn odd(&self, _: &Odd) -> Result<Expr> {
        Ok(Expr::zero())
    }
}

/// Partial derivative with respect to an even symbol or jet.
pub fn partial(e: &Expr, a: &Atom) -> Result<Expr> {
    derive(e, &Partial(a))
}

/// Left derivative with respect to an odd coordinate.
pub fn partial_odd(e: &Expr, o: &Odd) -> Expr {
    let mut out = Expr::zero();
    for (k, c) in e.terms() {
        if let Some(i) = k.odd.iter().position(|x| x == o) {
            let mut odd = k.odd.clone();
            odd.remove(i);
            let c = if i % 2 == 1 { -c.clone() } else { c.clone() };
            out.push(Key { odd, mono: k.mono.clone() }, c);
        }
    }
    out
}

/// Coordinates for vector fields: even symbols or jets, or odd coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coord {
    Even(Atom),
    Odd(Odd),
}

impl Coord {
    pub fn sym(name: &str) -> Coord {
        Coord::Even(Atom::sym(name))
    }

    pub fn field(name: &str) -> Coord {
        let j = Jet::new(name, &[]);
        if j.odd {
            Coord::Odd(Odd::Jet(j))
        } else {
            Coord::Even(Atom::Jet(j))
        }
    }

    pub fn jet(j: Jet) -> Coord {
        if j.odd {
            Coord::Odd(Odd::Jet(j))
        } else {
            Coord::Even(Atom::Jet(j))
        }
    }

    pub fn gen(name: &str) -> Coord {
        Coord::Odd(Odd::gen(name))
    }

    pub fn is_odd(&self) -> bool {
        matches!(self, Coord::Odd(_))
    }

    pub fn expr(&self) -> Expr {
        match self {
            Coord::Even(a) => Expr::atom(a.clone()),
            Coord::Odd(o) => Expr::odd(o.clone()),
        }
    }

    /// `∂_c e`, a left derivative for odd coordinates.
    pub fn derivative(&self, e: &Expr) -> Result<Expr> {
        match self {
            Coord::Even(a) => partial(e, a),
            Coord::Odd(o) => Ok(partial_odd(e, o)),
        }
    }
}

/// `n`-fold application of `D_v`, convenience for integer multiplicities.
pub fn total_pow(ctx: &JetContext, e: &Expr, v: char, n: usize) -> Result<Expr> {
    let mut out = e.clone();
    for _ in 0..n {
        out = ctx.total(&out, v)?;
    }
    Ok(out)
}
