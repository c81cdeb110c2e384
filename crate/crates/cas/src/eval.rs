//! Floating-point evaluation per Grassmann component.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::CasError;
use crate::expr::{Atom, Expr, Func, Jet, Odd};
use crate::rational::{self, to_f64};
use crate::Result;

/// Values for symbols and even jets.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub syms: HashMap<Arc<str>, f64>,
    pub jets: HashMap<Jet, f64>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sym(mut self, name: &str, v: f64) -> Self {
        self.syms.insert(Arc::from(name), v);
        self
    }

    pub fn jet(mut self, j: Jet, v: f64) -> Self {
        self.jets.insert(j, v);
        self
    }
}

/// Sum and largest term magnitude of one component.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Component {
    pub sum: f64,
    pub max_term: f64,
}

fn powf(b: f64, e: &crate::Q) -> f64 {
    match rational::as_i64(e) {
        Some(k) if k.abs() < i32::MAX as i64 => b.powi(k as i32),
        _ => {
            let x = to_f64(e);
            if b < 0.0 && e.denom() % 2u32 == 1u32.into() {
                // real odd root
                let mag = (-b).powf(x);
                if e.numer() % 2u32 == 0u32.into() {
                    mag
                } else {
                    -mag
                }
            } else {
                b.powf(x)
            }
        }
    }
}

fn atom_value(a: &Atom, env: &Bindings) -> Result<f64> {
    Ok(match a {
        Atom::Sym(s) => *env.syms.get(s).ok_or_else(|| CasError::Unbound(s.to_string()))?,
        Atom::Jet(j) => *env.jets.get(j).ok_or_else(|| CasError::Unbound(j.to_string()))?,
        Atom::Num(n) => to_f64(&crate::Q::from_integer(n.clone())),
        Atom::Base(b) => eval(b, env)?,
        Atom::Func(f, arg) => {
            let u = eval(arg, env)?;
            match f {
                Func::Exp => u.exp(),
                Func::Ln => u.ln(),
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => u.tan(),
                Func::Atan => u.atan(),
            }
        }
    })
}

/// Evaluates an odd-free expression.
pub fn eval(e: &Expr, env: &Bindings) -> Result<f64> {
    let comps = eval_components(e, env)?;
    if comps.keys().any(|k| !k.is_empty()) {
        return Err(CasError::Parity("odd factors in a scalar evaluation".into()));
    }
    Ok(comps.get(&Vec::new()).map(|c| c.sum).unwrap_or(0.0))
}

/// Evaluates every Grassmann component separately.
pub fn eval_components(e: &Expr, env: &Bindings) -> Result<BTreeMap<Vec<Odd>, Component>> {
    let mut out: BTreeMap<Vec<Odd>, Component> = BTreeMap::new();
    for (k, c) in e.terms() {
        let mut v = to_f64(c);
        for (a, ex) in &k.mono {
            v *= powf(atom_value(a, env)?, ex);
        }
        let slot = out.entry(k.odd.clone()).or_default();
        slot.sum += v;
        slot.max_term = slot.max_term.max(v.abs());
    }
    Ok(out)
}
