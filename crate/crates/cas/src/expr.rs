//! Canonical expressions.
//!
//! An [`Expr`] is a sum of terms `c · o₁…oₘ · a₁^e₁…aₙ^eₙ` with a rational
//! coefficient `c`, odd factors `oᵢ` sorted into canonical order (registry
//! generators first, then odd jets) and even atoms with nonzero rational
//! exponents. Canonical rules applied on construction:
//! * a repeated odd factor kills the term,
//! * all `exp` atoms of a term merge into one `exp(sum)`, `exp(0) = 1`, `exp(q·ln u) = u^q`,
//! * a non-monomial base raised to a positive integer power is expanded,
//! * non-monomial bases are stored primitive (leading coefficient ±1, no common monomial),
//! * irrational powers of numbers are kept as `Num` atoms with exponent in `(0, 1)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CasError;
use crate::grassmann::{merge_sorted, GrassmannElement, Parity};
use crate::rational::{self, q, qi, Q};
use crate::registry;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub field: Arc<str>,
    pub idx: Vec<char>,
    pub odd: bool,
}

impl Jet {
    /// Jet of a registered field; unknown names are treated as even.
    pub fn new(field: &str, idx: &[char]) -> Jet {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        Jet {
            field: Arc::from(field),
            odd: registry::field_parity(field).unwrap_or(false),
            idx,
        }
    }

    pub fn with(&self, v: char) -> Jet {
        let mut j = self.clone();
        let pos = j.idx.partition_point(|c| *c <= v);
        j.idx.insert(pos, v);
        j
    }

    pub fn order(&self) -> usize {
        self.idx.len()
    }

    pub fn count(&self, v: char) -> usize {
        self.idx.iter().filter(|c| **c == v).count()
    }

    /// Removes one occurrence of `v` from the multi-index.
    pub fn without(&self, v: char) -> Option<Jet> {
        let pos = self.idx.iter().position(|c| *c == v)?;
        let mut j = self.clone();
        j.idx.remove(pos);
        Some(j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Atan,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "arctan",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "arctan" | "atan" => Func::Atan,
            _ => return None,
        })
    }
}

/// Even atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Sym(Arc<str>),
    Jet(Jet),
    Func(Func, Box<Expr>),
    /// Primitive non-monomial base.
    Base(Box<Expr>),
    /// Positive integer > 1, only with exponent in (0, 1).
    Num(BigInt),
}

impl Atom {
    pub fn sym(name: &str) -> Atom {
        Atom::Sym(Arc::from(name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Odd {
    Gen(u16),
    Jet(Jet),
}

impl Odd {
    pub fn gen(name: &str) -> Odd {
        Odd::Gen(registry::generator(name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Key {
    pub odd: Vec<Odd>,
    pub mono: Vec<(Atom, Q)>,
}

impl Key {
    pub fn is_unit(&self) -> bool {
        self.odd.is_empty() && self.mono.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Expr {
    terms: BTreeMap<Key, Q>,
}

fn mono_map(mono: &[(Atom, Q)]) -> BTreeMap<Atom, Q> {
    mono.iter().cloned().collect()
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::num(Q::one())
    }

    pub fn num(c: Q) -> Expr {
        let mut e = Expr::zero();
        e.push(Key::default(), c);
        e
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::num(q(n, d))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::atom(Atom::sym(name))
    }

    pub fn atom(a: Atom) -> Expr {
        Expr::atom_pow(a, Q::one())
    }

    pub fn atom_pow(a: Atom, e: Q) -> Expr {
        let mut m = BTreeMap::new();
        m.insert(a, e);
        normalize(Q::one(), Vec::new(), m)
    }

    /// Jet of a registered field; odd fields become odd factors.
    pub fn jet(field: &str, idx: &[char]) -> Expr {
        Expr::from_jet(Jet::new(field, idx))
    }

    pub fn from_jet(j: Jet) -> Expr {
        if j.odd {
            Expr::odd(Odd::Jet(j))
        } else {
            Expr::atom(Atom::Jet(j))
        }
    }

    pub fn gen(name: &str) -> Expr {
        Expr::odd(Odd::gen(name))
    }

    pub fn odd(o: Odd) -> Expr {
        let mut e = Expr::zero();
        e.push(Key { odd: vec![o], mono: Vec::new() }, Q::one());
        e
    }

    pub fn from_grassmann(g: &GrassmannElement<Q>) -> Expr {
        let mut e = Expr::zero();
        for (k, v) in g.terms() {
            let odd = k.iter().map(|id| Odd::Gen(*id)).collect();
            e.push(Key { odd, mono: Vec::new() }, v.clone());
        }
        e
    }

    /// Pure-constant part as a Grassmann element, if the expression has no atoms or odd jets.
    pub fn to_grassmann(&self) -> Option<GrassmannElement<Q>> {
        let mut g = GrassmannElement::zero();
        for (k, v) in &self.terms {
            if !k.mono.is_empty() {
                return None;
            }
            let mut ids = Vec::new();
            for o in &k.odd {
                match o {
                    Odd::Gen(id) => ids.push(*id),
                    Odd::Jet(_) => return None,
                }
            }
            g = g.gadd(&GrassmannElement::monomial(&ids, v.clone()));
        }
        Some(g)
    }

    /// Inserts a term assumed canonical.
    pub(crate) fn push(&mut self, key: Key, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub(crate) fn from_terms(terms: BTreeMap<Key, Q>) -> Expr {
        Expr { terms }
    }

    /// Re-applies the canonical rules to every term.
    pub(crate) fn renormalize(&self) -> Expr {
        let mut out = Expr::zero();
        for (k, v) in &self.terms {
            let e = normalize(v.clone(), k.odd.clone(), mono_map(&k.mono));
            for (k2, v2) in e.terms {
                out.push(k2, v2);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Key, Q> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_number(&self) -> Option<Q> {
        if self.terms.is_empty() {
            return Some(Q::zero());
        }
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            if k.is_unit() {
                return Some(v.clone());
            }
        }
        None
    }

    pub fn as_single(&self) -> Option<(&Key, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn has_odd(&self) -> bool {
        self.terms.keys().any(|k| !k.odd.is_empty())
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for k in self.terms.keys() {
            if k.odd.len() % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Terms with an even (resp. odd) number of odd factors.
    pub fn split_parity(&self) -> (Expr, Expr) {
        let mut even = Expr::zero();
        let mut odd = Expr::zero();
        for (k, v) in &self.terms {
            if k.odd.len() % 2 == 0 {
                even.push(k.clone(), v.clone());
            } else {
                odd.push(k.clone(), v.clone());
            }
        }
        (even, odd)
    }

    /// Groups terms by their odd factor list; each group's value is even and odd-free.
    pub fn components(&self) -> BTreeMap<Vec<Odd>, Expr> {
        let mut out: BTreeMap<Vec<Odd>, Expr> = BTreeMap::new();
        for (k, v) in &self.terms {
            let key = Key { odd: Vec::new(), mono: k.mono.clone() };
            out.entry(k.odd.clone()).or_default().push(key, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.push(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.push(k.clone(), -v.clone());
        }
        out
    }

    pub fn neg(&self) -> Expr {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        let mut out = Expr::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                mul_terms(&mut out, ka, va, kb, vb);
            }
        }
        out
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(it: I) -> Expr {
        let mut out = Expr::zero();
        for e in it {
            for (k, v) in e.terms {
                out.push(k, v);
            }
        }
        out
    }

    pub fn product<I: IntoIterator<Item = Expr>>(it: I) -> Expr {
        let mut out = Expr::one();
        for e in it {
            out = out.mul(&e);
        }
        out
    }

    pub fn powi(&self, n: i64) -> Result<Expr> {
        self.pow(&qi(n))
    }

    pub fn recip(&self) -> Result<Expr> {
        self.pow(&qi(-1))
    }

    pub fn div(&self, other: &Expr) -> Result<Expr> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn sqrt(&self) -> Result<Expr> {
        self.pow(&q(1, 2))
    }

    pub fn pow(&self, e: &Q) -> Result<Expr> {
        if e.is_zero() {
            return Ok(Expr::one());
        }
        if let Some(n) = rational::as_i64(e) {
            if n > 0 {
                return Ok(self.pow_nat(n as u64));
            }
        }
        if self.is_zero() {
            return if e.is_positive() { Ok(Expr::zero()) } else { Err(CasError::DivisionByZero) };
        }
        if let Some((k, c)) = self.as_single() {
            return pow_term(c, k, e);
        }
        let (body, soul) = split_soul(self);
        if !soul.is_zero() {
            return pow_nilpotent(&body, &soul, e);
        }
        let (content, inner) = primitive_part(self);
        let head = pow_term(&content.0, &content.1, e)?;
        if let Some((k, c)) = inner.as_single() {
            return Ok(head.mul(&pow_term(c, k, e)?));
        }
        Ok(head.mul(&Expr::atom_pow(Atom::Base(Box::new(inner)), e.clone())))
    }

    fn pow_nat(&self, mut n: u64) -> Expr {
        let mut base = self.clone();
        let mut acc = Expr::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn func(f: Func, arg: &Expr) -> Result<Expr> {
        if arg.has_odd() {
            return Err(CasError::OddInFunction(f.name()));
        }
        Ok(match f {
            Func::Exp => exp_expr(arg),
            Func::Ln => ln_expr(arg)?,
            Func::Sin | Func::Tan | Func::Atan if arg.is_zero() => Expr::zero(),
            Func::Cos if arg.is_zero() => Expr::one(),
            _ => Expr::atom(Atom::Func(f, Box::new(arg.clone()))),
        })
    }

    pub fn exp(&self) -> Result<Expr> {
        Expr::func(Func::Exp, self)
    }

    pub fn ln(&self) -> Result<Expr> {
        Expr::func(Func::Ln, self)
    }

    /// Drops every term whose odd factors contain one of the given monomials.
    pub fn annihilate(&self, relations: &[Vec<Odd>]) -> Expr {
        if relations.is_empty() {
            return self.clone();
        }
        let mut out = Expr::zero();
        for (k, v) in &self.terms {
            if relations.iter().any(|r| r.iter().all(|o| k.odd.contains(o))) {
                continue;
            }
            out.push(k.clone(), v.clone());
        }
        out
    }

    /// Visits every atom, descending into function arguments and bases.
    pub fn visit_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        for k in self.terms.keys() {
            for (a, _) in &k.mono {
                f(a);
                match a {
                    Atom::Func(_, arg) => arg.visit_atoms(f),
                    Atom::Base(b) => b.visit_atoms(f),
                    _ => {}
                }
            }
        }
    }

    pub fn free_symbols(&self) -> Vec<Arc<str>> {
        let mut out = std::collections::BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Sym(s) = a {
                out.insert(s.clone());
            }
        });
        out.into_iter().collect()
    }

    /// Even jets (including those inside functions) and odd jets.
    pub fn jets(&self) -> Vec<Jet> {
        let mut out = std::collections::BTreeSet::new();
        self.visit_atoms(&mut |a| {
            if let Atom::Jet(j) = a {
                out.insert(j.clone());
            }
        });
        for k in self.terms.keys() {
            for o in &k.odd {
                if let Odd::Jet(j) = o {
                    out.insert(j.clone());
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn generators(&self) -> Vec<u16> {
        let mut out = std::collections::BTreeSet::new();
        for k in self.terms.keys() {
            for o in &k.odd {
                if let Odd::Gen(g) = o {
                    out.insert(*g);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn contains_func(&self) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| {
            if matches!(a, Atom::Func(..)) {
                found = true;
            }
        });
        found
    }
}

/// Multiplies two canonical terms and accumulates into `out`.
fn mul_terms(out: &mut Expr, ka: &Key, va: &Q, kb: &Key, vb: &Q) {
    let (odd, flip) = if kb.odd.is_empty() {
        (ka.odd.clone(), false)
    } else if ka.odd.is_empty() {
        (kb.odd.clone(), false)
    } else {
        match merge_sorted(&ka.odd, &kb.odd) {
            Some(r) => r,
            None => return,
        }
    };
    let mut c = va * vb;
    if flip {
        c = -c;
    }
    let (mono, dirty) = merge_mono(&ka.mono, &kb.mono);
    if dirty {
        let e = normalize(c, odd, mono_map(&mono));
        for (k, v) in e.terms {
            out.push(k, v);
        }
    } else {
        out.push(Key { odd, mono }, c);
    }
}

/// Merges exponent lists; `dirty` when the result may need normalization.
fn merge_mono(a: &[(Atom, Q)], b: &[(Atom, Q)]) -> (Vec<(Atom, Q)>, bool) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut dirty = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = if i == a.len() {
            std::cmp::Ordering::Greater
        } else if j == b.len() {
            std::cmp::Ordering::Less
        } else {
            a[i].0.cmp(&b[j].0)
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = &a[i].1 + &b[j].1;
                if !e.is_zero() {
                    out.push((a[i].0.clone(), e));
                }
                dirty = true;
                i += 1;
                j += 1;
            }
        }
    }
    if !dirty {
        // two distinct exp atoms must merge
        let n_exp = out.iter().filter(|(a, _)| matches!(a, Atom::Func(Func::Exp, _))).count();
        dirty = n_exp > 1;
    }
    (out, dirty)
}

/// Builds a canonical expression from a raw term.
pub(crate) fn normalize(mut c: Q, odd: Vec<Odd>, mono: BTreeMap<Atom, Q>) -> Expr {
    if c.is_zero() {
        return Expr::zero();
    }
    let mut keep: Vec<(Atom, Q)> = Vec::new();
    let mut exp_arg = Expr::zero();
    let mut n_exp = 0;
    let mut nums: BTreeMap<BigInt, Q> = BTreeMap::new();
    let mut expand: Vec<(Expr, u64)> = Vec::new();
    for (a, e) in mono {
        if e.is_zero() {
            continue;
        }
        match a {
            Atom::Func(Func::Exp, arg) => {
                n_exp += 1;
                exp_arg = exp_arg.add(&arg.scale(&e));
            }
            Atom::Num(n) => {
                let slot = nums.entry(n).or_insert_with(Q::zero);
                *slot += e;
            }
            Atom::Base(b) if e.is_positive() && rational::is_integer(&e) => {
                let n = rational::as_i64(&e).unwrap_or(1) as u64;
                expand.push((*b, n));
            }
            other => keep.push((other, e)),
        }
    }
    for (n, e) in nums {
        let (f, frac) = rational::split_floor(&e);
        let base = Q::from_integer(n.clone());
        if let Some(k) = rational::as_i64(&f) {
            c *= rational::powi(&base, k).unwrap_or_else(Q::one);
        }
        if !frac.is_zero() {
            match rational::pow_exact(&base, &frac) {
                Some(r) => c *= r,
                None => keep.push((Atom::Num(n), frac)),
            }
        }
    }
    keep.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Expr::zero();
    out.push(Key { odd, mono: keep }, c);
    if n_exp > 0 {
        let single_unit = n_exp == 1 && exp_arg_is_canonical(&exp_arg);
        if single_unit {
            out = out.mul(&Expr::from_terms(
                [(
                    Key { odd: Vec::new(), mono: vec![(Atom::Func(Func::Exp, Box::new(exp_arg)), Q::one())] },
                    Q::one(),
                )]
                .into(),
            ));
        } else {
            out = out.mul(&exp_expr(&exp_arg));
        }
    }
    for (b, n) in expand {
        out = out.mul(&b.pow_nat(n));
    }
    out
}

fn is_ln_term(k: &Key) -> Option<&Expr> {
    if k.odd.is_empty() && k.mono.len() == 1 && k.mono[0].1.is_one() {
        if let Atom::Func(Func::Ln, u) = &k.mono[0].0 {
            return Some(u);
        }
    }
    None
}

fn exp_arg_is_canonical(arg: &Expr) -> bool {
    !arg.is_zero() && arg.terms.keys().all(|k| is_ln_term(k).is_none())
}

fn exp_expr(arg: &Expr) -> Expr {
    let mut factor = Expr::one();
    let mut rest = Expr::zero();
    for (k, v) in &arg.terms {
        if let Some(u) = is_ln_term(k) {
            if let Ok(p) = u.pow(v) {
                factor = factor.mul(&p);
                continue;
            }
        }
        rest.push(k.clone(), v.clone());
    }
    if rest.is_zero() {
        return factor;
    }
    let atom = Expr::from_terms(
        [(
            Key { odd: Vec::new(), mono: vec![(Atom::Func(Func::Exp, Box::new(rest)), Q::one())] },
            Q::one(),
        )]
        .into(),
    );
    factor.mul(&atom)
}

fn ln_atom(a: &Atom) -> Expr {
    match a {
        Atom::Func(Func::Exp, arg) => (**arg).clone(),
        Atom::Base(b) => Expr::atom(Atom::Func(Func::Ln, b.clone())),
        Atom::Num(n) => Expr::atom(Atom::Func(Func::Ln, Box::new(Expr::num(Q::from_integer(n.clone()))))),
        other => Expr::atom(Atom::Func(Func::Ln, Box::new(Expr::atom(other.clone())))),
    }
}

fn ln_expr(arg: &Expr) -> Result<Expr> {
    if arg.is_zero() {
        return Err(CasError::DivisionByZero);
    }
    let (content, inner) = if arg.len() == 1 {
        let (k, c) = arg.as_single().unwrap();
        ((c.clone(), k.clone()), Expr::one())
    } else {
        primitive_part(arg)
    };
    let (c, key) = content;
    let mut out = Expr::zero();
    if !c.is_one() {
        if c.is_negative() {
            return Ok(Expr::atom(Atom::Func(Func::Ln, Box::new(arg.clone()))));
        }
        for (n, e) in [(c.numer().clone(), Q::one()), (c.denom().clone(), -Q::one())] {
            if !n.is_one() {
                let l = Expr::atom(Atom::Func(Func::Ln, Box::new(Expr::num(Q::from_integer(n)))));
                out = out.add(&l.scale(&e));
            }
        }
    }
    for (a, e) in &key.mono {
        out = out.add(&ln_atom(a).scale(e));
    }
    if !inner.as_number().map(|n| n.is_one()).unwrap_or(false) {
        out = out.add(&Expr::atom(Atom::Func(Func::Ln, Box::new(inner))));
    }
    Ok(out)
}

/// Separates the odd-free body from the nilpotent soul.
fn split_soul(e: &Expr) -> (Expr, Expr) {
    let mut body = Expr::zero();
    let mut soul = Expr::zero();
    for (k, v) in &e.terms {
        if k.odd.is_empty() {
            body.push(k.clone(), v.clone());
        } else {
            soul.push(k.clone(), v.clone());
        }
    }
    (body, soul)
}

/// `(b + n)^e = Σ binom(e, k) b^(e−k) n^k`, finite because `n` is nilpotent.
fn pow_nilpotent(body: &Expr, soul: &Expr, e: &Q) -> Result<Expr> {
    if body.is_zero() {
        return Err(CasError::OddPower);
    }
    let mut out = Expr::zero();
    let mut npow = Expr::one();
    let mut binom = Q::one();
    for k in 0..64i64 {
        if npow.is_zero() {
            return Ok(out);
        }
        let bp = body.pow(&(e - qi(k)))?;
        out = out.add(&bp.mul(&npow).scale(&binom));
        binom = binom * (e - qi(k)) / qi(k + 1);
        npow = npow.mul(soul);
    }
    Err(CasError::Unsupported("nilpotent series did not terminate".into()))
}

fn atom_extractable(a: &Atom) -> bool {
    matches!(a, Atom::Sym(_) | Atom::Jet(_) | Atom::Base(_))
}

/// Splits a multi-term, odd-free expression into `content · inner` where the
/// content is a monomial and `inner` has leading coefficient ±1 and no common
/// extractable atom power.
fn primitive_part(e: &Expr) -> ((Q, Key), Expr) {
    let mut coef = Q::one();
    let mut common: BTreeMap<Atom, Q> = BTreeMap::new();
    let mut inner = e.clone();
    for _ in 0..8 {
        let mins = common_exponents(&inner);
        if mins.is_empty() {
            break;
        }
        let inv: Vec<(Atom, Q)> = mins.iter().map(|(a, v)| (a.clone(), -v.clone())).collect();
        // raw divisor: base exponents must merge before any expansion
        let mut divisor = Expr::zero();
        divisor.push(Key { odd: Vec::new(), mono: inv }, Q::one());
        inner = inner.mul(&divisor).renormalize();
        for (a, v) in mins {
            let slot = common.entry(a).or_insert_with(Q::zero);
            *slot += v;
        }
    }
    let lead = inner.terms.values().next().cloned().unwrap_or_else(Q::one).abs();
    if !lead.is_one() {
        inner = inner.scale(&lead.recip());
        coef *= &lead;
    }
    let common: Vec<(Atom, Q)> = common.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    ((coef, Key { odd: Vec::new(), mono: common }), inner)
}

/// Smallest exponent of each extractable atom over all terms (missing counts as 0).
fn common_exponents(e: &Expr) -> BTreeMap<Atom, Q> {
    let mut mins: Option<BTreeMap<Atom, Q>> = None;
    for k in e.terms.keys() {
        let here: BTreeMap<Atom, Q> = k
            .mono
            .iter()
            .filter(|(a, _)| atom_extractable(a))
            .cloned()
            .collect();
        mins = Some(match mins {
            None => here,
            Some(prev) => {
                let mut m = BTreeMap::new();
                let atoms: std::collections::BTreeSet<&Atom> = prev.keys().chain(here.keys()).collect();
                for a in atoms {
                    let x = prev.get(a).cloned().unwrap_or_else(Q::zero);
                    let y = here.get(a).cloned().unwrap_or_else(Q::zero);
                    let v = if x < y { x } else { y };
                    if !v.is_zero() {
                        m.insert(a.clone(), v);
                    }
                }
                m
            }
        });
    }
    mins.unwrap_or_default()
}

/// `(c · key)^e` for a single canonical term.
fn pow_term(c: &Q, key: &Key, e: &Q) -> Result<Expr> {
    if !key.odd.is_empty() {
        return match rational::as_i64(e) {
            Some(1) => Ok(Expr::from_terms([(key.clone(), c.clone())].into())),
            Some(n) if n >= 2 => Ok(Expr::zero()),
            _ => Err(CasError::OddPower),
        };
    }
    let (coef, nums) = num_pow(c, e)?;
    let mut mono: BTreeMap<Atom, Q> = BTreeMap::new();
    for (a, x) in &key.mono {
        mono.insert(a.clone(), x * e);
    }
    for (n, x) in nums {
        let slot = mono.entry(Atom::Num(n)).or_insert_with(Q::zero);
        *slot += x;
    }
    Ok(normalize(coef, Vec::new(), mono))
}

/// `c^e` as rational coefficient times irrational number atoms.
fn num_pow(c: &Q, e: &Q) -> Result<(Q, Vec<(BigInt, Q)>)> {
    if c.is_zero() {
        return if e.is_positive() { Ok((Q::zero(), Vec::new())) } else { Err(CasError::DivisionByZero) };
    }
    if let Some(k) = rational::as_i64(e) {
        return Ok((rational::powi(c, k).ok_or(CasError::DivisionByZero)?, Vec::new()));
    }
    let mut sign = Q::one();
    let mut a = c.clone();
    if a.is_negative() {
        if e.denom() % 2u32 == BigInt::zero() {
            return Err(CasError::NegativeBase);
        }
        if e.numer() % 2u32 != BigInt::zero() {
            sign = -sign;
        }
        a = -a;
    }
    if let Some(r) = rational::pow_exact(&a, e) {
        return Ok((sign * r, Vec::new()));
    }
    let mut coef = sign;
    let mut nums = Vec::new();
    for (n, x) in [(a.numer().clone(), e.clone()), (a.denom().clone(), -e.clone())] {
        if n.is_one() {
            continue;
        }
        let base = Q::from_integer(n.clone());
        match rational::pow_exact(&base, &x) {
            Some(r) => coef *= r,
            None => nums.push((n, x)),
        }
    }
    Ok((coef, nums))
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl<'a> Neg for &'a Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Q> for Expr {
    fn from(c: Q) -> Expr {
        Expr::num(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::sym("x")
    }
    fn t() -> Expr {
        Expr::sym("t")
    }

    #[test]
    fn odd_ordering_sign() {
        let a = Expr::gen("eta2").mul(&Expr::gen("eta1"));
        let b = Expr::gen("eta1").mul(&Expr::gen("eta2"));
        assert_eq!(a, b.neg());
        assert!(Expr::gen("eta1").mul(&Expr::gen("eta1")).is_zero());
        let xi = Expr::jet("xi", &['x']);
        let psi = Expr::jet("psi", &['x']);
        assert_eq!(xi.mul(&psi), psi.mul(&xi).neg());
    }

    #[test]
    fn cancellation() {
        let e = x().mul(&t()).sub(&t().mul(&x()));
        assert!(e.is_zero());
        let r = x().div(&t()).unwrap().mul(&t());
        assert_eq!(r, x());
    }

    #[test]
    fn exp_merge() {
        let a = x().exp().unwrap();
        let b = x().neg().exp().unwrap();
        assert_eq!(a.mul(&b), Expr::one());
        let l = t().ln().unwrap().scale(&qi(2)).exp().unwrap();
        assert_eq!(l, t().mul(&t()));
    }

    #[test]
    fn base_primitive() {
        let a = t().add(&Expr::sym("epsilon")).recip().unwrap();
        let b = Expr::sym("epsilon").add(&t()).scale(&qi(2)).recip().unwrap().scale(&qi(2));
        assert_eq!(a, b);
        let prod = a.mul(&t().add(&Expr::sym("epsilon"))).sub(&Expr::one());
        assert!(crate::zero::symbolic_zero(&prod).unwrap());
        let s = x().add(&Expr::one()).sqrt().unwrap();
        assert_eq!(s.mul(&s), x().add(&Expr::one()));
    }

    #[test]
    fn numeric_powers() {
        let s2 = Expr::int(2).sqrt().unwrap();
        assert_eq!(s2.mul(&s2), Expr::int(2));
        assert_eq!(Expr::frac(4, 9).sqrt().unwrap(), Expr::frac(2, 3));
        assert_eq!(Expr::int(-8).pow(&q(1, 3)).unwrap(), Expr::int(-2));
        assert!(matches!(Expr::int(-2).sqrt(), Err(CasError::NegativeBase)));
    }

    #[test]
    fn monomial_powers() {
        let e = x().powi(3).unwrap().mul(&t().powi(-2).unwrap());
        let r = e.pow(&q(1, 3)).unwrap();
        assert_eq!(r.pow(&qi(3)).unwrap(), e);
    }

    #[test]
    fn nilpotent_inverse() {
        let n = Expr::gen("eta1").mul(&Expr::gen("eta2"));
        let e = Expr::one().add(&n);
        let inv = e.recip().unwrap();
        assert_eq!(inv, Expr::one().sub(&n));
    }

    #[test]
    fn odd_in_function_rejected() {
        assert!(matches!(Expr::gen("eta1").exp(), Err(CasError::OddInFunction(_))));
    }

    #[test]
    fn ln_splits_monomials() {
        let e = x().div(&t()).unwrap().ln().unwrap();
        let f = x().ln().unwrap().sub(&t().ln().unwrap());
        assert_eq!(e, f);
    }
}
