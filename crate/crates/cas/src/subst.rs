//! Substitution of symbols, jets, fields and odd coordinates.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::diff::JetContext;
use crate::expr::{Atom, Expr, Jet, Key, Odd};
use crate::Result;

/// Rebuilds `e` after replacing leaves; `None` keeps a leaf unchanged.
pub fn map_leaves(
    e: &Expr,
    even: &mut dyn FnMut(&Atom) -> Result<Option<Expr>>,
    odd: &mut dyn FnMut(&Odd) -> Result<Option<Expr>>,
) -> Result<Expr> {
    let mut out = Expr::zero();
    for (k, c) in e.terms() {
        let mut changed = false;
        let mut acc = Expr::num(c.clone());
        for o in &k.odd {
            match odd(o)? {
                Some(r) => {
                    changed = true;
                    acc = acc.mul(&r);
                }
                None => acc = acc.mul(&Expr::odd(o.clone())),
            }
            if acc.is_zero() {
                break;
            }
        }
        if acc.is_zero() {
            continue;
        }
        let mut even_part = Expr::one();
        let mut kept: Vec<(Atom, crate::Q)> = Vec::new();
        for (a, ex) in &k.mono {
            let replaced = match a {
                Atom::Sym(_) | Atom::Jet(_) => even(a)?,
                Atom::Func(f, arg) => {
                    let na = map_leaves(arg, even, odd)?;
                    if na == **arg {
                        None
                    } else {
                        Some(Expr::func(*f, &na)?)
                    }
                }
                Atom::Base(b) => {
                    let nb = map_leaves(b, even, odd)?;
                    if nb == **b {
                        None
                    } else {
                        Some(nb)
                    }
                }
                Atom::Num(_) => None,
            };
            match replaced {
                Some(r) => {
                    changed = true;
                    even_part = even_part.mul(&r.pow(ex)?);
                }
                None => kept.push((a.clone(), ex.clone())),
            }
        }
        if !changed {
            out.push(k.clone(), c.clone());
            continue;
        }
        let mut rest = Expr::zero();
        rest.push(Key { odd: Vec::new(), mono: kept }, num_traits::One::one());
        out = out.add(&acc.mul(&rest).mul(&even_part));
    }
    Ok(out)
}

/// Simultaneous substitution.
///
/// Field rules replace every jet `F_J` by `D_J` of the image, computed in the
/// attached [`JetContext`].
#[derive(Default)]
pub struct Substitution {
    atoms: BTreeMap<Atom, Expr>,
    odds: BTreeMap<Odd, Expr>,
    fields: BTreeMap<Arc<str>, Expr>,
    ctx: JetContext,
    cache: RefCell<BTreeMap<Jet, Expr>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sym(mut self, name: &str, e: Expr) -> Self {
        self.atoms.insert(Atom::sym(name), e);
        self
    }

    pub fn atom(mut self, a: Atom, e: Expr) -> Self {
        self.atoms.insert(a, e);
        self
    }

    pub fn odd(mut self, o: Odd, e: Expr) -> Self {
        self.odds.insert(o, e);
        self
    }

    pub fn gen(self, name: &str, e: Expr) -> Self {
        self.odd(Odd::gen(name), e)
    }

    pub fn field(mut self, name: &str, e: Expr) -> Self {
        self.fields.insert(Arc::from(name), e);
        self
    }

    pub fn context(mut self, ctx: JetContext) -> Self {
        self.ctx = ctx;
        self
    }

    fn jet_image(&self, j: &Jet) -> Result<Option<Expr>> {
        let Some(base) = self.fields.get(&j.field) else {
            return Ok(None);
        };
        if let Some(v) = self.cache.borrow().get(j) {
            return Ok(Some(v.clone()));
        }
        let v = self.ctx.total_multi(base, &j.idx)?;
        self.cache.borrow_mut().insert(j.clone(), v.clone());
        Ok(Some(v))
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        map_leaves(
            e,
            &mut |a| {
                if let Some(v) = self.atoms.get(a) {
                    return Ok(Some(v.clone()));
                }
                match a {
                    Atom::Jet(j) => self.jet_image(j),
                    _ => Ok(None),
                }
            },
            &mut |o| {
                if let Some(v) = self.odds.get(o) {
                    return Ok(Some(v.clone()));
                }
                match o {
                    Odd::Jet(j) => self.jet_image(j),
                    Odd::Gen(_) => Ok(None),
                }
            },
        )
    }
}

/// Multiset difference `big − small` of sorted multi-indices.
pub fn index_minus(big: &[char], small: &[char]) -> Option<Vec<char>> {
    let mut rest = big.to_vec();
    for c in small {
        let pos = rest.iter().position(|x| x == c)?;
        rest.remove(pos);
    }
    Some(rest)
}

/// Solved-form rewriting: `u_L = rhs` replaces every `u_J` with `J ⊇ L` by
/// `D_{J−L} rhs`, recursively.
pub struct Rewriter {
    rules: Vec<(Jet, Expr)>,
    ctx: JetContext,
    cache: RefCell<BTreeMap<Jet, Expr>>,
}

impl Rewriter {
    pub fn new(rules: Vec<(Jet, Expr)>, ctx: JetContext) -> Self {
        Rewriter { rules, ctx, cache: RefCell::new(BTreeMap::new()) }
    }

    fn resolve(&self, j: &Jet, depth: usize) -> Result<Option<Expr>> {
        if let Some(v) = self.cache.borrow().get(j) {
            return Ok(Some(v.clone()));
        }
        for (lead, rhs) in &self.rules {
            if lead.field != j.field {
                continue;
            }
            if let Some(rest) = index_minus(&j.idx, &lead.idx) {
                if depth > 64 {
                    return Err(crate::CasError::Unsupported("rewrite depth exceeded".into()));
                }
                let d = self.ctx.total_multi(rhs, &rest)?;
                let r = self.apply_depth(&d, depth + 1)?;
                self.cache.borrow_mut().insert(j.clone(), r.clone());
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    fn apply_depth(&self, e: &Expr, depth: usize) -> Result<Expr> {
        map_leaves(
            e,
            &mut |a| match a {
                Atom::Jet(j) => self.resolve(j, depth),
                _ => Ok(None),
            },
            &mut |o| match o {
                Odd::Jet(j) => self.resolve(j, depth),
                Odd::Gen(_) => Ok(None),
            },
        )
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        self.apply_depth(e, 0)
    }
}
