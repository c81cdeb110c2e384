//! Explicit solution catalog and its verification against the full systems.
//!
//! A record gives closed-form field expressions in `x`, `t` and, for implicit
//! solutions, in a symmetry variable `s = σ(x, t)` together with functions of
//! `s` constrained by an ODE or an implicit relation. Verification substitutes
//! the fields into the governing system, rewrites the highest derivative via
//! the auxiliary relation, replaces `s` by `σ(x, t)` and zero-tests every
//! residual at the record's tier.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use cas::diff::{partial, JetContext};
use cas::expr::{Atom, Odd};
use cas::grassmann::Parity;
use cas::parse::parse_with;
use cas::registry;
use cas::subst::{Rewriter, Substitution};
use cas::zero::{is_zero, numeric_zero, symbolic_zero, ZeroVerdict};
use cas::{CasError, Expr, Jet, NumericOptions};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::Algebra;
use crate::par;
use crate::reduction::system_for;
use crate::report::{Item, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Symbolic,
    Numeric,
    ModuloOde,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Symbolic => "symbolic",
            Tier::Numeric => "numeric",
            Tier::ModuloOde => "modulo-ode",
        }
    }

    pub fn from_name(s: &str) -> Option<Tier> {
        match s {
            "symbolic" => Some(Tier::Symbolic),
            "numeric" => Some(Tier::Numeric),
            "modulo-ode" => Some(Tier::ModuloOde),
            _ => None,
        }
    }
}

/// `relation = 0` defines the σ-field implicitly; `constant` is eliminated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Implicit {
    pub relation: String,
    pub constant: String,
}

/// Replaces the odd product `pair[0]·pair[1]` by an even value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Product {
    pub pair: [String; 2],
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    #[serde(default)]
    pub set: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub domain: BTreeMap<String, (f64, f64)>,
}

impl Variant {
    pub fn tag(&self) -> String {
        self.set.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub id: String,
    pub subalgebra: String,
    pub system: Algebra,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    /// Named subexpressions, bound in order after parameters and variants.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub defs: Vec<(String, String)>,
    pub fields: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma_fields: Vec<String>,
    /// Extra even functions of `s` introduced by the record.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_fields: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implicit: Option<Implicit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annihilate: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<Product>,
    pub tier: Tier,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub domain: BTreeMap<String, (f64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<Variant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
    #[serde(default)]
    pub erratum: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erratum_notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

pub fn solutions() -> &'static [SolutionRecord] {
    static CAT: OnceLock<Vec<SolutionRecord>> = OnceLock::new();
    CAT.get_or_init(|| serde_json::from_str(include_str!("../../catalog/solutions.json")).expect("solution catalog"))
}

pub fn solution(id: &str) -> Result<&'static SolutionRecord> {
    solutions().iter().find(|r| r.id == id).ok_or_else(|| Error::UnknownLabel(id.to_string()))
}

/// Fully parsed record for one variant.
struct Instance {
    tag: String,
    fields: Vec<(String, Expr)>,
    problems: Vec<String>,
    sigma: Option<Expr>,
    rules: Vec<(Jet, Expr)>,
    ode: Option<Expr>,
    implicit: Option<(Expr, Expr)>,
    products: Vec<(Odd, Odd, Expr)>,
    opts: NumericOptions,
}

fn single_jet(e: &Expr, what: &str) -> Result<Jet> {
    match e.jets().as_slice() {
        [j] if e.len() == 1 => Ok(j.clone()),
        _ => Err(Error::Catalog(format!("{what}: expected a single jet, got {e}"))),
    }
}

fn single_odd(e: &Expr, what: &str) -> Result<Odd> {
    match e.as_single() {
        Some((k, _)) if k.odd.len() == 1 && k.mono.is_empty() => Ok(k.odd[0].clone()),
        _ => Err(Error::Catalog(format!("{what}: expected a single odd factor, got {e}"))),
    }
}

/// Solves `eq = 0` for an atom it contains linearly.
fn solve_linear(eq: &Expr, target: &Atom) -> Result<Expr> {
    let c = partial(eq, target)?;
    if c.is_zero() {
        return Err(Error::Catalog(format!("{target} does not occur in {eq}")));
    }
    if !partial(&c, target)?.is_zero() {
        return Err(Error::Catalog(format!("{eq} is not linear in {target}")));
    }
    let rest = Substitution::new().atom(target.clone(), Expr::zero()).apply(eq)?;
    Ok(rest.neg().div(&c)?)
}

/// Replaces every occurrence of the odd product `a·b` by `value`.
pub fn impose_product(e: &Expr, a: &Odd, b: &Odd, value: &Expr) -> Expr {
    let mut out = Expr::zero();
    for (k, c) in e.terms() {
        let mono = Expr::product(k.mono.iter().map(|(at, q)| Expr::atom_pow(at.clone(), q.clone())));
        let coeff = Expr::num(c.clone()).mul(&mono);
        let (Some(i), Some(_)) = (k.odd.iter().position(|o| o == a), k.odd.iter().position(|o| o == b)) else {
            out = out.add(&coeff.mul(&Expr::product(k.odd.iter().cloned().map(Expr::odd))));
            continue;
        };
        let mut rest: Vec<Odd> = k.odd.clone();
        rest.remove(i);
        let j = rest.iter().position(|o| o == b).expect("b present");
        rest.remove(j);
        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
        let odd_rest = Expr::product(rest.into_iter().map(Expr::odd));
        out = out.add(&coeff.mul(value).mul(&odd_rest).scale(&cas::rational::qi(sign)));
    }
    out
}

impl SolutionRecord {
    pub fn register(&self) {
        for f in &self.aux_fields {
            if registry::field_parity(f).is_none() {
                registry::register_field(f, false);
            }
        }
    }

    fn variants(&self) -> Vec<Variant> {
        if self.variants.is_empty() {
            vec![Variant::default()]
        } else {
            self.variants.clone()
        }
    }

    fn env(&self, v: &Variant, shift: Option<&Expr>) -> Result<BTreeMap<String, Expr>> {
        let mut env: BTreeMap<String, Expr> = BTreeMap::new();
        for (k, s) in self.params.iter().chain(v.set.iter()) {
            let e = parse_with(s, &env)?;
            env.insert(k.clone(), e);
        }
        let shifted = shift.map(|dx| Substitution::new().sym("x", Expr::sym("x").add(dx)));
        for (k, s) in &self.defs {
            let mut e = parse_with(s, &env)?;
            if let Some(sub) = &shifted {
                e = sub.apply(&e)?;
            }
            env.insert(k.clone(), e);
        }
        Ok(env)
    }

    fn instance(&self, v: &Variant, base: &NumericOptions, shift: Option<&Expr>) -> Result<Instance> {
        self.register();
        let env = self.env(v, shift)?;
        let shifted = shift.map(|dx| Substitution::new().sym("x", Expr::sym("x").add(dx)));
        let p = |s: &str| -> Result<Expr> {
            let e = parse_with(s, &env)?;
            Ok(match &shifted {
                Some(sub) => sub.apply(&e)?,
                None => e,
            })
        };
        let mut fields = Vec::new();
        let mut problems = Vec::new();
        for (f, s) in &self.fields {
            let e = p(s)?;
            let want_odd = registry::field_parity(f).ok_or_else(|| Error::Catalog(format!("unknown field {f}")))?;
            let ok = match e.parity() {
                Parity::Even => !want_odd || e.is_zero(),
                Parity::Odd => want_odd,
                Parity::Mixed => false,
            };
            if !ok {
                problems.push(format!("parity of {f} = {e} does not match the field"));
            }
            fields.push((f.clone(), e));
        }
        let sigma = self.sigma.as_deref().map(p).transpose()?;
        let mut rules = Vec::new();
        for (lead, rhs) in &self.rules {
            rules.push((single_jet(&p(lead)?, &self.id)?, p(rhs)?));
        }
        let implicit = match &self.implicit {
            Some(imp) => Some((p(&imp.relation)?, p(&imp.constant)?)),
            None => None,
        };
        let mut products = Vec::new();
        for pr in &self.products {
            let a = single_odd(&p(&pr.pair[0])?, &self.id)?;
            let b = single_odd(&p(&pr.pair[1])?, &self.id)?;
            products.push((a, b, p(&pr.value)?));
        }
        let mut opts = base.clone();
        for (k, (lo, hi)) in self.domain.iter().chain(v.domain.iter()) {
            opts = opts.domain(k, *lo, *hi);
        }
        Ok(Instance {
            tag: v.tag(),
            fields,
            problems,
            sigma,
            rules,
            ode: self.ode.as_deref().map(p).transpose()?,
            implicit,
            products,
            opts,
        })
    }

    pub fn annihilators(&self) -> Result<Vec<Vec<Odd>>> {
        let empty = BTreeMap::new();
        self.annihilate
            .iter()
            .map(|rel| rel.iter().map(|n| single_odd(&parse_with(n, &empty)?, &self.id)).collect())
            .collect()
    }
}

impl Instance {
    fn top_jet(&self, e: &Expr, fields: &[String]) -> Option<Jet> {
        e.jets().into_iter().filter(|j| fields.iter().any(|f| *j.field == **f)).max_by_key(|j| j.order())
    }

    /// Rewrite rules for the σ-fields: explicit rules, the ODE solved for its
    /// highest derivative, and the implicit relation differentiated once.
    fn rewriter(&self, sigma_fields: &[String]) -> Result<Option<Rewriter>> {
        let mut rules = self.rules.clone();
        if let Some(ode) = &self.ode {
            let top = self.top_jet(ode, sigma_fields).ok_or_else(|| Error::Catalog("ODE without σ-field".into()))?;
            let rhs = solve_linear(ode, &Atom::Jet(top.clone()))?;
            rules.push((top, rhs));
        }
        if let Some((rel, constant)) = &self.implicit {
            let c = match constant.as_single() {
                Some((k, _)) if k.odd.is_empty() && k.mono.len() == 1 => k.mono[0].0.clone(),
                _ => return Err(Error::Catalog(format!("constant {constant} is not a symbol"))),
            };
            let value = solve_linear(rel, &c)?;
            let ctx = JetContext::standard();
            let mut d = ctx.total(rel, 's')?;
            if !self.rules.is_empty() {
                d = Rewriter::new(self.rules.clone(), JetContext::standard()).apply(&d)?;
            }
            let d = Substitution::new().atom(c, value).apply(&d)?;
            let top = self.top_jet(&d, sigma_fields).ok_or_else(|| Error::Catalog("relation without σ-field".into()))?;
            let rhs = solve_linear(&d, &Atom::Jet(top.clone()))?;
            rules.push((top, rhs));
        }
        Ok(if rules.is_empty() { None } else { Some(Rewriter::new(rules, JetContext::standard())) })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationCheck {
    pub variant: String,
    pub equation: usize,
    pub zero: bool,
    pub tier: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionReport {
    pub id: String,
    pub subalgebra: String,
    pub tier: Tier,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub problems: Vec<String>,
    pub checks: Vec<EquationCheck>,
}

impl SolutionReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty() && self.checks.iter().all(|c| c.zero)
    }

    pub fn witness(&self) -> Option<String> {
        if let Some(p) = self.problems.first() {
            return Some(p.clone());
        }
        self.checks.iter().find(|c| !c.zero).map(|c| {
            let v = if c.variant.is_empty() { String::new() } else { format!("[{}] ", c.variant) };
            match (c.residual, &c.witness) {
                (Some(r), Some(w)) => format!("{v}equation {}: residual {r:.3e} at {w}", c.equation),
                (None, Some(w)) => format!("{v}equation {}: {w}", c.equation),
                _ => format!("{v}equation {}: nonzero ({} tier)", c.equation, c.tier),
            }
        })
    }
}

fn zero_test(e: &Expr, tier: Tier, opts: &NumericOptions) -> Result<ZeroVerdict> {
    Ok(match tier {
        Tier::Symbolic => match symbolic_zero(e) {
            Ok(z) => ZeroVerdict {
                zero: z,
                tier: cas::zero::Tier::Symbolic,
                residual: if z { 0.0 } else { f64::NAN },
                witness: if z { None } else { Some(e.to_string()) },
            },
            Err(CasError::Tier(m)) => ZeroVerdict {
                zero: false,
                tier: cas::zero::Tier::Symbolic,
                residual: f64::NAN,
                witness: Some(format!("outside the symbolic tier: {m}")),
            },
            Err(other) => return Err(other.into()),
        },
        Tier::Numeric => numeric_zero(e, opts)?,
        Tier::ModuloOde => is_zero(e, opts)?,
    })
}

/// Residuals of the governing system for one variant, after all rewriting.
fn residuals(rec: &SolutionRecord, inst: &Instance) -> Result<Vec<Expr>> {
    let sys = system_for(rec.system);
    let ctx = match &inst.sigma {
        Some(sig) => {
            let names: Vec<&str> = rec.sigma_fields.iter().map(String::as_str).collect();
            JetContext::with_sigma(sig.clone(), &names)
        }
        None => JetContext::standard(),
    };
    let mut sub = Substitution::new().context(ctx);
    for (f, e) in &inst.fields {
        sub = sub.field(f, e.clone());
    }
    let rw = inst.rewriter(&rec.sigma_fields)?;
    let back = inst.sigma.as_ref().map(|sig| Substitution::new().sym("s", sig.clone()));
    let ann = rec.annihilators()?;
    let mut out = Vec::new();
    for r in &sys.residuals {
        let mut e = sub.apply(r)?;
        if let Some(rw) = &rw {
            e = rw.apply(&e)?;
        }
        if let Some(b) = &back {
            e = b.apply(&e)?;
        }
        e = e.annihilate(&ann);
        for (a, b, v) in &inst.products {
            e = impose_product(&e, a, b, v);
        }
        out.push(e);
    }
    Ok(out)
}

/// Verifies a record, optionally translated by `x ↦ x + shift`.
pub fn verify_solution_shifted(rec: &SolutionRecord, opts: &NumericOptions, shift: Option<&Expr>) -> Result<SolutionReport> {
    let mut checks = Vec::new();
    let mut problems = Vec::new();
    for v in rec.variants() {
        let inst = rec.instance(&v, opts, shift)?;
        for p in &inst.problems {
            if !problems.contains(p) {
                problems.push(p.clone());
            }
        }
        for (i, e) in residuals(rec, &inst)?.iter().enumerate() {
            let verdict = zero_test(e, rec.tier, &inst.opts)?;
            checks.push(EquationCheck {
                variant: inst.tag.clone(),
                equation: i + 1,
                zero: verdict.zero,
                tier: verdict.tier.name().to_string(),
                residual: (verdict.tier == cas::zero::Tier::Numeric).then_some(verdict.residual),
                witness: if verdict.zero { None } else { verdict.witness },
            });
        }
    }
    let ok = problems.is_empty() && checks.iter().all(|c| c.zero);
    Ok(SolutionReport {
        id: rec.id.clone(),
        subalgebra: rec.subalgebra.clone(),
        tier: rec.tier,
        status: Status::flagged(ok, rec.erratum),
        problems,
        checks,
    })
}

pub fn verify_solution(rec: &SolutionRecord, opts: &NumericOptions) -> Result<SolutionReport> {
    verify_solution_shifted(rec, opts, None)
}

/// Residual expressions of one record's first variant, for inspection.
pub fn solution_residuals(rec: &SolutionRecord) -> Result<Vec<Expr>> {
    let v = rec.variants().remove(0);
    let inst = rec.instance(&v, &NumericOptions::default(), None)?;
    residuals(rec, &inst)
}

/// Selects records by id and tier.
pub fn select(id: Option<&str>, tier: Option<Tier>) -> Result<Vec<&'static SolutionRecord>> {
    let recs: Vec<&SolutionRecord> = solutions()
        .iter()
        .filter(|r| id.is_none_or(|i| r.id == i))
        .filter(|r| tier.is_none_or(|t| r.tier == t))
        .collect();
    if let Some(i) = id {
        if recs.is_empty() {
            return Err(Error::UnknownLabel(i.to_string()));
        }
    }
    Ok(recs)
}

pub fn solution_items(recs: &[&SolutionRecord], opts: &NumericOptions, parallel: bool) -> Result<Vec<Item>> {
    for r in recs {
        r.register();
    }
    let inner = if parallel { opts.clone() } else { opts.clone().sequential() };
    par::map(parallel, recs.to_vec(), |r| {
        let rep = verify_solution(r, &inner)?;
        Ok(Item::new("solutions", &r.id, rep.status).witness(rep.witness()).detail(&rep))
    })
    .into_iter()
    .collect()
}
