//! Exterior algebra over the registered odd generators.
//!
//! Keys are strictly increasing generator-id sequences; the empty key is the
//! body. Products sort factors into registry order and fold the permutation
//! sign into the coefficient.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

use crate::error::CasError;
use crate::rational::Q;
use crate::registry;

pub trait Scalar:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    const KIND: &'static str;
}

impl Scalar for Q {
    const KIND: &'static str = "exact";
}

impl Scalar for f64 {
    const KIND: &'static str = "float";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannElement<S: Scalar> {
    terms: BTreeMap<Vec<u16>, S>,
}

/// Merges two sorted id lists. Returns `None` on a repeated id, otherwise the
/// merged list and whether the permutation is odd.
pub(crate) fn merge_sorted<T: Ord + Clone>(a: &[T], b: &[T]) -> Option<(Vec<T>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut odd = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining a[i..]
                if (a.len() - i) % 2 == 1 {
                    odd = !odd;
                }
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, odd))
}

impl<S: Scalar> GrassmannElement<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn scalar(c: S) -> Self {
        let mut g = Self::zero();
        g.add_term(Vec::new(), c);
        g
    }

    pub fn one() -> Self {
        Self::scalar(S::one())
    }

    pub fn generator(id: u16) -> Self {
        let mut g = Self::zero();
        g.add_term(vec![id], S::one());
        g
    }

    /// Builds a monomial from factors in the given (not necessarily sorted) order.
    pub fn monomial(ids: &[u16], c: S) -> Self {
        let mut acc = Self::scalar(c);
        for &id in ids {
            acc = acc.gmul(&Self::generator(id));
        }
        acc
    }

    fn add_term(&mut self, key: Vec<u16>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn body(&self) -> S {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(S::zero)
    }

    pub fn coefficient(&self, key: &[u16]) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn gadd(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn gneg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect(),
        }
    }

    pub fn gmul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if let Some((key, odd)) = merge_sorted(ka, kb) {
                    let c = va.clone() * vb.clone();
                    out.add_term(key, if odd { -c } else { c });
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for k in self.terms.keys() {
            if k.len() % 2 == 0 {
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

    /// Simultaneous substitution of generators by homogeneous odd elements.
    pub fn gsubstitute(&self, assignment: &BTreeMap<u16, Self>) -> Result<Self, CasError> {
        for (id, v) in assignment {
            if !v.is_zero() && v.parity() != Parity::Odd {
                return Err(CasError::Parity(format!(
                    "generator {} replaced by a non-odd element",
                    registry::generator_name(*id)
                )));
            }
        }
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            let mut acc = Self::scalar(v.clone());
            for id in k {
                let f = assignment.get(id).cloned().unwrap_or_else(|| Self::generator(*id));
                acc = acc.gmul(&f);
            }
            out = out.gadd(&acc);
        }
        Ok(out)
    }

    /// Sets to zero every term divisible by one of the given monomials.
    pub fn annihilate(&self, relations: &[Vec<u16>]) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            if relations.iter().any(|r| r.iter().all(|g| k.contains(g))) {
                continue;
            }
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl GrassmannElement<Q> {
    pub fn to_float(&self) -> GrassmannElement<f64> {
        let mut out = GrassmannElement::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), crate::rational::to_f64(v));
        }
        out
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for GrassmannElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let names: Vec<String> = k.iter().map(|&g| registry::generator_name(g)).collect();
            if names.is_empty() {
                write!(f, "{v}")?;
            } else if v.is_one() {
                write!(f, "{}", names.join("*"))?;
            } else {
                write!(f, "{v}*{}", names.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Runtime-tagged element for callers that mix exact and float paths.
#[derive(Debug, Clone, PartialEq)]
pub enum GValue {
    Exact(GrassmannElement<Q>),
    Float(GrassmannElement<f64>),
}

impl GValue {
    fn kind(&self) -> &'static str {
        match self {
            GValue::Exact(_) => Q::KIND,
            GValue::Float(_) => f64::KIND,
        }
    }

    pub fn gadd(&self, other: &GValue) -> Result<GValue, CasError> {
        match (self, other) {
            (GValue::Exact(a), GValue::Exact(b)) => Ok(GValue::Exact(a.gadd(b))),
            (GValue::Float(a), GValue::Float(b)) => Ok(GValue::Float(a.gadd(b))),
            _ => Err(CasError::KindMismatch(self.kind(), other.kind())),
        }
    }

    pub fn gmul(&self, other: &GValue) -> Result<GValue, CasError> {
        match (self, other) {
            (GValue::Exact(a), GValue::Exact(b)) => Ok(GValue::Exact(a.gmul(b))),
            (GValue::Float(a), GValue::Float(b)) => Ok(GValue::Float(a.gmul(b))),
            _ => Err(CasError::KindMismatch(self.kind(), other.kind())),
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            GValue::Exact(a) => a.parity(),
            GValue::Float(a) => a.parity(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    type G = GrassmannElement<Q>;

    fn e1() -> G {
        G::generator(registry::generator("eta1"))
    }
    fn e2() -> G {
        G::generator(registry::generator("eta2"))
    }

    #[test]
    fn add_examples() {
        assert_eq!(e1().gadd(&e1()), e1().scale(&qi(2)));
        assert!(e1().gadd(&e1().gneg()).is_zero());
        let a = G::one().gadd(&e1().gmul(&e2()));
        let b = a.gadd(&G::scalar(qi(2)));
        assert_eq!(b, G::scalar(qi(3)).gadd(&e1().gmul(&e2())));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(e2().gmul(&e1()), e1().gmul(&e2()).gneg());
        let a = G::one().gadd(&e1());
        assert_eq!(a.gmul(&a), G::one().gadd(&e1().scale(&qi(2))));
        assert!(e1().gmul(&e2()).gmul(&e1()).is_zero());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(e1().parity(), Parity::Odd);
        assert_eq!(e1().gmul(&e2()).parity(), Parity::Even);
        assert_eq!(G::one().gadd(&e1()).parity(), Parity::Mixed);
        assert_eq!(G::zero().parity(), Parity::Even);
    }

    #[test]
    fn substitute_examples() {
        let id1 = registry::generator("eta1");
        let id2 = registry::generator("eta2");
        let m: BTreeMap<u16, G> = [(id2, e1())].into();
        assert!(e1().gmul(&e2()).gsubstitute(&m).unwrap().is_zero());
        let m: BTreeMap<u16, G> = [(id1, e1().gneg())].into();
        assert_eq!(e1().scale(&qi(3)).gsubstitute(&m).unwrap(), e1().scale(&qi(-3)));
        let m: BTreeMap<u16, G> = [(id1, e2())].into();
        assert_eq!(e1().gadd(&e2()).gsubstitute(&m).unwrap(), e2().scale(&qi(2)));
        let m: BTreeMap<u16, G> = [(id1, G::one())].into();
        assert!(matches!(e1().gsubstitute(&m), Err(CasError::Parity(_))));
    }

    #[test]
    fn kind_mismatch() {
        let a = GValue::Exact(G::one());
        let b = GValue::Float(GrassmannElement::<f64>::one());
        assert!(matches!(a.gadd(&b), Err(CasError::KindMismatch(_, _))));
        assert!(a.gmul(&a).is_ok());
    }
}
