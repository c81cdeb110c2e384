//! Conservation laws `ρ_t + D_x J = 0` of the classical system and the
//! Weierstrass immersion integrals `χ = ∫ −J dt + ρ dx`.

use std::collections::BTreeMap;
use std::fmt;

use cas::eval::{eval, Bindings};
use cas::parse::parse_with;
use cas::zero::symbolic_zero;
use cas::{Expr, Jet, JetContext};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::reduction::solutions::SolutionRecord;
use crate::report::{Item, Status};
use crate::symmetry::PDESystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `ρ = Σ_{l=1}^{k} R^l S^{k−l}`, `J = −RS Σ_{j=1}^{k−1} R^j S^{k−1−j}`.
    #[serde(alias = "paper")]
    PaperPrinted,
    /// `ρ = Σ_{l=0}^{k} R^l S^{k−l}`, `J = RS Σ_{j=0}^{k−1} R^j S^{k−1−j}`.
    Corrected,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::PaperPrinted => "paper-printed",
            Convention::Corrected => "corrected",
        }
    }

    pub fn from_name(s: &str) -> Option<Convention> {
        match s {
            "paper" | "paper-printed" => Some(Convention::PaperPrinted),
            "corrected" => Some(Convention::Corrected),
            _ => None,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConservationPair {
    pub k: usize,
    pub rho: Expr,
    pub flux: Expr,
    pub convention: Convention,
}

fn rs(l: usize, m: usize) -> Expr {
    let r = Expr::jet("R", &[]).powi(l as i64).expect("integer power");
    let s = Expr::jet("S", &[]).powi(m as i64).expect("integer power");
    r.mul(&s)
}

/// `Σ_{l=lo}^{n} R^l S^{n−l}`.
fn sum_from(lo: usize, n: usize) -> Expr {
    Expr::sum((lo..=n).map(|l| rs(l, n - l)))
}

pub fn density_flux(k: usize, convention: Convention) -> Result<ConservationPair> {
    if k < 1 {
        return Err(Error::BadOrder(k));
    }
    let rsm = rs(1, 1);
    let (rho, flux) = match convention {
        Convention::PaperPrinted => {
            let inner = if k >= 2 { sum_from(1, k - 1) } else { Expr::zero() };
            (sum_from(1, k), rsm.mul(&inner).neg())
        }
        Convention::Corrected => (sum_from(0, k), rsm.mul(&sum_from(0, k - 1))),
    };
    Ok(ConservationPair { k, rho, flux, convention })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceCheck {
    pub k: usize,
    pub convention: Convention,
    pub rho: String,
    pub flux: String,
    pub zero: bool,
    pub residual: String,
}

/// On-shell `D_t ρ + D_x J` for an arbitrary density and flux.
pub fn divergence(rho: &Expr, flux: &Expr) -> Result<Expr> {
    let ctx = JetContext::standard();
    let d = ctx.total(rho, 't')?.add(&ctx.total(flux, 'x')?);
    PDESystem::classical().on_shell(&d)
}

pub fn check_divergence(p: &ConservationPair) -> Result<DivergenceCheck> {
    let res = divergence(&p.rho, &p.flux)?;
    Ok(DivergenceCheck {
        k: p.k,
        convention: p.convention,
        rho: p.rho.to_string(),
        flux: p.flux.to_string(),
        zero: symbolic_zero(&res)?,
        residual: res.to_string(),
    })
}

fn divergence_item(k: usize, convention: Convention, erratum: bool) -> Result<Item> {
    let c = check_divergence(&density_flux(k, convention)?)?;
    let witness = (!c.zero).then(|| format!("D_t rho + D_x J = {}", c.residual));
    let id = format!("{}-k{k}", convention.name());
    Ok(Item::new("conservation", &id, Status::flagged(c.zero, erratum)).witness(witness).detail(&c))
}

/// Divergence checks for `k = 1..=kmax` in one convention. Nothing is
/// flagged, so nonzero divergences are failures.
pub fn conservation_items(kmax: usize, convention: Convention, parallel: bool) -> Result<Vec<Item>> {
    par::map(parallel, (1..=kmax).collect(), |k| divergence_item(k, convention, false))
        .into_iter()
        .collect()
}

/// Corrected pairs for `k = 1..=10` plus the printed `k = 1, 2` pairs
/// flagged as errata.
pub fn conservation_suite(parallel: bool) -> Result<Vec<Item>> {
    let mut jobs: Vec<(usize, Convention, bool)> = (1..=10).map(|k| (k, Convention::Corrected, false)).collect();
    jobs.extend([(1, Convention::PaperPrinted, true), (2, Convention::PaperPrinted, true)]);
    par::map(parallel, jobs, |(k, c, e)| divergence_item(k, c, e)).into_iter().collect()
}

/// Piecewise-linear path through the listed `(x, t)` vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassPath {
    pub vertices: Vec<(f64, f64)>,
}

impl WeierstrassPath {
    pub fn new(vertices: Vec<(f64, f64)>) -> Self {
        WeierstrassPath { vertices }
    }

    /// `a → (b.x, a.t) → b`.
    pub fn x_then_t(a: (f64, f64), b: (f64, f64)) -> Self {
        WeierstrassPath::new(vec![a, (b.0, a.1), b])
    }

    /// `a → (a.x, b.t) → b`.
    pub fn t_then_x(a: (f64, f64), b: (f64, f64)) -> Self {
        WeierstrassPath::new(vec![a, (a.0, b.1), b])
    }

    pub fn start(&self) -> Option<(f64, f64)> {
        self.vertices.first().copied()
    }

    pub fn end(&self) -> Option<(f64, f64)> {
        self.vertices.last().copied()
    }
}

type FieldFn = dyn Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync;

/// Values of `R(x, t)` and `S(x, t)` along a path.
pub struct SolutionBinding {
    pub name: String,
    f: Box<FieldFn>,
}

impl fmt::Debug for SolutionBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionBinding").field("name", &self.name).finish()
    }
}

impl SolutionBinding {
    pub fn new(name: &str, f: impl Fn(f64, f64) -> Result<(f64, f64)> + Send + Sync + 'static) -> Self {
        SolutionBinding { name: name.to_string(), f: Box::new(f) }
    }

    pub fn constant(r0: f64, s0: f64) -> Self {
        SolutionBinding::new("constant", move |_, _| Ok((r0, s0)))
    }

    /// Binds an explicit classical catalog record. Free constants not listed
    /// in `values` are set to zero.
    pub fn from_record(rec: &SolutionRecord, values: &BTreeMap<String, f64>) -> Result<Self> {
        if rec.sigma.is_some() || rec.ode.is_some() || rec.implicit.is_some() || !rec.variants.is_empty() {
            return Err(Error::Catalog(format!("{} is not an explicit solution in x and t", rec.id)));
        }
        let mut env: BTreeMap<String, Expr> = BTreeMap::new();
        for (name, text) in rec.params.iter().chain(rec.defs.iter().map(|(n, t)| (n, t))) {
            let e = parse_with(text, &env)?;
            env.insert(name.clone(), e);
        }
        let field = |name: &str| -> Result<Expr> {
            let text = rec.fields.get(name).ok_or_else(|| Error::Catalog(format!("{} has no field {name}", rec.id)))?;
            let e = parse_with(text, &env)?;
            if e.has_odd() {
                return Err(Error::Catalog(format!("{} has odd terms in {name}", rec.id)));
            }
            Ok(e)
        };
        let (r, s) = (field("R")?, field("S")?);
        let mut base = Bindings::new();
        for c in r.free_symbols().into_iter().chain(s.free_symbols()) {
            if &*c != "x" && &*c != "t" {
                base = base.sym(&c, values.get(&*c).copied().unwrap_or(0.0));
            }
        }
        Ok(SolutionBinding::new(&rec.id, move |x, t| {
            let env = base.clone().sym("x", x).sym("t", t);
            let ev = |e: &Expr| {
                eval(e, &env).map_err(|e| Error::Evaluation { x, t, msg: e.to_string() }).and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Evaluation { x, t, msg: "non-finite value".into() })
                    }
                })
            };
            Ok((ev(&r)?, ev(&s)?))
        }))
    }

    pub fn at(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        (self.f)(x, t)
    }
}

fn eval_rs(e: &Expr, r: f64, s: f64) -> Result<f64> {
    let env = Bindings::new().jet(Jet::new("R", &[]), r).jet(Jet::new("S", &[]), s);
    Ok(eval(e, &env)?)
}

/// Composite midpoint rule for `∫ −J dt + ρ dx` with `steps` subdivisions
/// per segment. Segments run in parallel when `parallel` is set.
pub fn weierstrass_chi(
    k: usize,
    path: &WeierstrassPath,
    sol: &SolutionBinding,
    steps: usize,
    parallel: bool,
) -> Result<f64> {
    let pair = density_flux(k, Convention::Corrected)?;
    let steps = steps.max(1);
    let segs: Vec<_> = path.vertices.windows(2).map(|w| (w[0], w[1])).collect();
    let parts = par::map(parallel, segs, |(a, b)| -> Result<f64> {
        let (dx, dt) = ((b.0 - a.0) / steps as f64, (b.1 - a.1) / steps as f64);
        let mut acc = 0.0;
        for i in 0..steps {
            let u = (i as f64 + 0.5) / steps as f64;
            let (x, t) = (a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1));
            let (r, s) = sol.at(x, t)?;
            acc += eval_rs(&pair.rho, r, s)? * dx - eval_rs(&pair.flux, r, s)? * dt;
        }
        Ok(acc)
    });
    parts.into_iter().sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct PathIndependence {
    pub k: usize,
    pub solution: String,
    pub steps: usize,
    pub chi: [f64; 2],
    pub difference: f64,
    pub tolerance: f64,
    pub ok: bool,
}

/// Compares `χ` along two paths with shared endpoints, accepting
/// `|χ₁ − χ₂| ≤ 1e−8 (1 + |χ₁|)`.
pub fn path_independence(
    k: usize,
    sol: &SolutionBinding,
    paths: [&WeierstrassPath; 2],
    steps: usize,
    parallel: bool,
) -> Result<PathIndependence> {
    if paths[0].start() != paths[1].start() || paths[0].end() != paths[1].end() {
        return Err(Error::Catalog("paths must share their endpoints".into()));
    }
    let c1 = weierstrass_chi(k, paths[0], sol, steps, parallel)?;
    let c2 = weierstrass_chi(k, paths[1], sol, steps, parallel)?;
    let tolerance = 1e-8 * (1.0 + c1.abs());
    let difference = (c1 - c2).abs();
    Ok(PathIndependence {
        k,
        solution: sol.name.clone(),
        steps,
        chi: [c1, c2],
        difference,
        tolerance,
        ok: difference <= tolerance,
    })
}

/// Staircase paths on the centered wave `R = S = x/t` for `k = 1..=3`.
pub fn weierstrass_suite(parallel: bool) -> Result<Vec<Item>> {
    let rec = crate::reduction::solutions::solution("as4")?;
    let sol = SolutionBinding::from_record(rec, &BTreeMap::new())?;
    let (a, b) = ((0.5, 1.0), (1.5, 2.0));
    let p1 = WeierstrassPath::x_then_t(a, b);
    let p2 = WeierstrassPath::t_then_x(a, b);
    (1..=3)
        .map(|k| {
            let rep = path_independence(k, &sol, [&p1, &p2], 10_000, parallel)?;
            let witness = (!rep.ok).then(|| format!("|chi1 - chi2| = {:e}", rep.difference));
            Ok(Item::new("weierstrass", &format!("as4-k{k}"), if rep.ok { Status::Pass } else { Status::Fail })
                .witness(witness)
                .detail(&rep))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use cas::parse::parse;

    #[test]
    fn printed_k1_has_empty_flux() {
        let p = density_flux(1, Convention::PaperPrinted).unwrap();
        assert_eq!(p.rho, parse("R").unwrap());
        assert!(p.flux.is_zero());
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(density_flux(0, Convention::Corrected), Err(Error::BadOrder(0))));
    }

    #[test]
    fn constant_density_is_conserved() {
        assert!(symbolic_zero(&divergence(&Expr::int(3), &Expr::zero()).unwrap()).unwrap());
    }

    #[test]
    fn convention_names_round_trip() {
        for c in [Convention::PaperPrinted, Convention::Corrected] {
            assert_eq!(Convention::from_name(c.name()), Some(c));
        }
        assert_eq!(Convention::from_name("paper"), Some(Convention::PaperPrinted));
    }
}
