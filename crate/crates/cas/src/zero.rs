//! Zero testing.
//!
//! The symbolic tier clears negative powers of non-monomial bases and checks
//! the canonical form; it refuses expressions with elementary functions,
//! fractional powers of bases, or irrational numbers. The numeric tier samples
//! every symbol and even jet on a seeded grid and tests each Grassmann
//! component against `|Σ| ≤ tol · (1 + max|term|)`.

use std::collections::BTreeMap;
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CasError;
use crate::eval::{eval_components, Bindings};
use crate::expr::{Atom, Expr, Jet, Key};
use crate::rational::Q;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Symbolic,
    Numeric,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Symbolic => "symbolic",
            Tier::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroVerdict {
    pub zero: bool,
    pub tier: Tier,
    /// Largest normalized residual; `0` for symbolic verdicts.
    pub residual: f64,
    /// Sample point of the largest residual, as `name=value` pairs.
    pub witness: Option<String>,
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        self.zero
    }
}

#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub points: usize,
    pub seed: u64,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    /// Per-name sampling interval, keyed by symbol or printed jet name.
    pub domains: BTreeMap<String, (f64, f64)>,
    pub max_resample: usize,
    pub parallel: bool,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            points: 100,
            seed: 42,
            lo: 0.5,
            hi: 2.0,
            tol: 1e-9,
            domains: BTreeMap::new(),
            max_resample: 50,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl NumericOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn domain(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.domains.insert(name.to_string(), (lo, hi));
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

fn check_symbolic_atoms(e: &Expr) -> Result<()> {
    let mut bad: Option<String> = None;
    for (k, _) in e.terms() {
        for (a, ex) in &k.mono {
            match a {
                Atom::Func(..) => bad = Some(format!("function atom {a}")),
                Atom::Num(_) => bad = Some(format!("irrational number {a}")),
                Atom::Base(b) => {
                    if !ex.is_integer() {
                        bad = Some(format!("fractional power of ({b})"));
                    } else {
                        check_symbolic_atoms(b)?;
                    }
                }
                _ => {}
            }
        }
    }
    match bad {
        Some(m) => Err(CasError::Tier(m)),
        None => Ok(()),
    }
}

/// Exact zero test over rational functions with Puiseux monomials.
pub fn symbolic_zero(e: &Expr) -> Result<bool> {
    check_symbolic_atoms(e)?;
    let mut cur = e.clone();
    for _ in 0..16 {
        if cur.is_zero() {
            return Ok(true);
        }
        let mut denom: BTreeMap<Atom, Q> = BTreeMap::new();
        for (k, _) in cur.terms() {
            for (a, ex) in &k.mono {
                if matches!(a, Atom::Base(_)) && ex.is_negative() {
                    let need = -ex.clone();
                    let slot = denom.entry(a.clone()).or_insert_with(Q::zero);
                    if need > *slot {
                        *slot = need;
                    }
                }
            }
        }
        if denom.is_empty() {
            return Ok(false);
        }
        for (a, n) in denom {
            // raw factor so that the exponents merge before expansion
            let raw = Expr::from_terms([(Key { odd: Vec::new(), mono: vec![(a, n)] }, Q::one())].into());
            cur = cur.mul(&raw);
        }
        cur = cur.renormalize();
    }
    Ok(cur.is_zero())
}

/// Even leaves that need sample values.
fn sample_vars(e: &Expr) -> (Vec<Arc<str>>, Vec<Jet>) {
    let syms = e.free_symbols();
    let jets = e.jets().into_iter().filter(|j| !j.odd).collect();
    (syms, jets)
}

fn point_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

struct PointResult {
    residual: f64,
    witness: String,
}

fn eval_point(
    e: &Expr,
    syms: &[Arc<str>],
    jets: &[Jet],
    opts: &NumericOptions,
    index: usize,
) -> Result<Option<PointResult>> {
    let mut rng = point_rng(opts.seed, index);
    let range = |name: &str| opts.domains.get(name).copied().unwrap_or((opts.lo, opts.hi));
    for _ in 0..=opts.max_resample {
        let mut env = Bindings::new();
        let mut witness = Vec::new();
        for s in syms {
            let (lo, hi) = range(s);
            let v = rng.gen_range(lo..=hi);
            witness.push(format!("{s}={v:.6}"));
            env.syms.insert(s.clone(), v);
        }
        for j in jets {
            let name = j.to_string();
            let (lo, hi) = range(&name);
            let v = rng.gen_range(lo..=hi);
            witness.push(format!("{name}={v:.6}"));
            env.jets.insert(j.clone(), v);
        }
        let comps = eval_components(e, &env)?;
        if comps.values().any(|c| !c.sum.is_finite() || !c.max_term.is_finite()) {
            continue;
        }
        let residual = comps
            .values()
            .map(|c| c.sum.abs() / (1.0 + c.max_term))
            .fold(0.0, f64::max);
        return Ok(Some(PointResult { residual, witness: witness.join(", ") }));
    }
    Ok(None)
}

/// Seeded numeric zero test.
pub fn numeric_zero(e: &Expr, opts: &NumericOptions) -> Result<ZeroVerdict> {
    if e.is_zero() {
        return Ok(ZeroVerdict { zero: true, tier: Tier::Numeric, residual: 0.0, witness: None });
    }
    let (syms, jets) = sample_vars(e);
    let run = |i: usize| eval_point(e, &syms, &jets, opts, i);
    let results: Vec<Result<Option<PointResult>>> = {
        #[cfg(feature = "parallel")]
        {
            if opts.parallel {
                (0..opts.points).into_par_iter().map(run).collect()
            } else {
                (0..opts.points).map(run).collect()
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..opts.points).map(run).collect()
        }
    };
    let mut worst: Option<PointResult> = None;
    let mut valid = 0;
    for r in results {
        if let Some(p) = r? {
            valid += 1;
            if worst.as_ref().map(|w| p.residual > w.residual).unwrap_or(true) {
                worst = Some(p);
            }
        }
    }
    if valid == 0 {
        return Err(CasError::Unsupported("no finite sample point".into()));
    }
    let worst = worst.expect("at least one valid point");
    Ok(ZeroVerdict {
        zero: worst.residual <= opts.tol,
        tier: Tier::Numeric,
        residual: worst.residual,
        witness: Some(worst.witness),
    })
}

/// Symbolic tier when applicable, numeric otherwise.
pub fn is_zero(e: &Expr, opts: &NumericOptions) -> Result<ZeroVerdict> {
    match symbolic_zero(e) {
        Ok(z) => Ok(ZeroVerdict { zero: z, tier: Tier::Symbolic, residual: 0.0, witness: None }),
        Err(CasError::Tier(_)) => numeric_zero(e, opts),
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn symbolic_rational_functions() {
        let e = parse("1/(x+1) + 1/(x-1) - 2*x/(x^2-1)").unwrap();
        assert!(symbolic_zero(&e).unwrap());
        let e = parse("1/(x+1) - 1/(x+2)").unwrap();
        assert!(!symbolic_zero(&e).unwrap());
    }

    #[test]
    fn symbolic_refuses_functions() {
        let e = parse("sin(x)").unwrap();
        assert!(matches!(symbolic_zero(&e), Err(CasError::Tier(_))));
    }

    #[test]
    fn numeric_trig_identity() {
        let e = parse("sin(x)^2 + cos(x)^2 - 1").unwrap();
        let v = is_zero(&e, &NumericOptions::default()).unwrap();
        assert!(v.zero);
        assert_eq!(v.tier, Tier::Numeric);
        let e = parse("sin(x)^2 + cos(x)^2 - 1 + 1/1000000").unwrap();
        assert!(!is_zero(&e, &NumericOptions::default()).unwrap().zero);
    }

    #[test]
    fn numeric_sqrt_identity() {
        let e = parse("(x+1)^(1/2)*(x+1)^(1/2) - x - 1").unwrap();
        assert!(e.is_zero());
        let e = parse("sqrt(x^2+2*x+1) - x - 1").unwrap();
        assert!(is_zero(&e, &NumericOptions::default()).unwrap().zero);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let e = parse("tan(x)*cos(x) - sin(x) + t/1000").unwrap();
        let a = numeric_zero(&e, &NumericOptions::default()).unwrap();
        let b = numeric_zero(&e, &NumericOptions::default().sequential()).unwrap();
        assert_eq!(a, b);
    }
}
