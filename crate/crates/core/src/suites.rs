//! Verification suites run by the command-line front end.

use std::collections::BTreeMap;
use std::time::Instant;

use cas::subst::Substitution;
use cas::{Expr, NumericOptions};

use crate::conserve::{conservation_suite, weierstrass_suite};
use crate::error::{Error, Result};
use crate::hydro::hydro_suite;
use crate::liealg::{diff_tables, structure_table, Algebra};
use crate::reduction::euler::euler_items;
use crate::reduction::solutions::{solution_items, solutions};
use crate::reduction::{ansatze, verify_reduction};
use crate::report::{Item, Report, Status};
use crate::superfield::{component_system, decompose_system};
use crate::symmetry::{check_invariance, negative_control, verify_generator_suite, PDESystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Tables,
    Symmetries,
    Reduce,
    Solutions,
    Conservation,
    Weierstrass,
    Hydro,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Tables,
        Suite::Symmetries,
        Suite::Reduce,
        Suite::Solutions,
        Suite::Conservation,
        Suite::Weierstrass,
        Suite::Hydro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Symmetries => "symmetries",
            Suite::Reduce => "reduce",
            Suite::Solutions => "solutions",
            Suite::Conservation => "conservation",
            Suite::Weierstrass => "weierstrass",
            Suite::Hydro => "hydro",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub parallel: bool,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 42, parallel: crate::par::AVAILABLE, timings: false }
    }
}

impl RunOptions {
    pub fn numeric(&self) -> NumericOptions {
        let mut o = NumericOptions::default().with_seed(self.seed);
        o.parallel = self.parallel;
        o
    }
}

fn pass_fail(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Computed structure table of one algebra against the tabulated one.
pub fn table_items(alg: Algebra, parallel: bool) -> Result<Vec<Item>> {
    let computed = structure_table(&alg.generators(), parallel)?;
    let diffs = diff_tables(&computed, &alg.reference());
    let bad: Vec<_> = diffs.iter().filter(|d| !d.ok).collect();
    let witness = bad.first().map(|d| format!("[{}, {}] = {} but table has {}", d.row, d.col, d.computed, d.expected));
    let detail = serde_json::json!({
        "entries": diffs.len(),
        "matched": diffs.len() - bad.len(),
        "mismatches": bad,
    });
    let mut items = vec![Item::new("tables", alg.name(), pass_fail(bad.is_empty())).witness(witness).detail(&detail)];
    let jac = computed.jacobi_violations();
    let anti = computed.antisymmetry_violations();
    items.push(
        Item::new("tables", &format!("{}-identities", alg.name()), pass_fail(jac.is_empty() && anti.is_empty()))
            .witness(jac.first().map(|v| format!("Jacobi fails on {v:?}")))
            .detail(&serde_json::json!({ "jacobi_violations": jac.len(), "antisymmetry_violations": anti.len() })),
    );
    Ok(items)
}

fn invariance_items(sys: &PDESystem, alg: Algebra, parallel: bool) -> Result<Vec<Item>> {
    let mut items: Vec<Item> = verify_generator_suite(sys, &alg.generators(), parallel)?
        .into_iter()
        .map(|r| {
            Item::new("symmetries", &format!("{}-{}", alg.name(), r.generator), pass_fail(r.pass))
                .witness(r.witness.clone())
                .detail(&r)
        })
        .collect();
    let c = check_invariance(&negative_control(), sys)?;
    let w = if c.pass { Some("control dR leaves the system invariant".to_string()) } else { None };
    items.push(Item::new("symmetries", &format!("{}-control-dR", alg.name()), pass_fail(!c.pass)).witness(w).detail(&c));
    Ok(items)
}

/// θ-expansion of the superfield system: symbolic couplings, unit
/// couplings and the classical limit.
pub fn superfield_items() -> Result<Vec<Item>> {
    let (a, b) = (Expr::sym("a"), Expr::sym("b"));
    let general = decompose_system(&a, &b)? == component_system(&a, &b)?;
    let one = Expr::one();
    let unit = decompose_system(&one, &one)?;
    let susy = PDESystem::susy().residuals;
    let unit_ok = unit.to_vec() == susy;
    let strip = Substitution::new().field("xi", Expr::zero()).field("psi", Expr::zero());
    let limit: Vec<Expr> = unit.iter().map(|e| strip.apply(e)).collect::<std::result::Result<_, _>>()?;
    let classical = PDESystem::classical().residuals;
    let limit_ok = limit[..2] == classical[..] && limit[2..].iter().all(Expr::is_zero);
    let show = |v: &[Expr]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    Ok(vec![
        Item::new("superfield", "general-couplings", pass_fail(general))
            .detail(&show(&decompose_system(&a, &b)?)),
        Item::new("superfield", "unit-couplings", pass_fail(unit_ok)).detail(&show(&unit)),
        Item::new("superfield", "classical-limit", pass_fail(limit_ok)).detail(&show(&limit)),
    ])
}

pub fn symmetry_items(parallel: bool) -> Result<Vec<Item>> {
    let mut items = invariance_items(&PDESystem::classical(), Algebra::Classical, parallel)?;
    items.extend(invariance_items(&PDESystem::susy(), Algebra::Susy, parallel)?);
    items.extend(superfield_items()?);
    Ok(items)
}

/// Reductions of every tabulated ansatz, the untabulated fermionic
/// translations as skipped, and the Euler double wave.
pub fn reduce_items(opts: &NumericOptions, parallel: bool) -> Result<Vec<Item>> {
    let reps = crate::par::map(parallel, ansatze().iter().collect(), |a| verify_reduction(a, opts));
    let mut items = Vec::new();
    for r in reps {
        let r = r?;
        items.push(Item::new("reduce", &r.label, r.status).witness(r.witness()).detail(&r));
    }
    for l in ["SL15", "SL16", "SL17"] {
        items.push(
            Item::new("reduce", l, Status::Skipped)
                .witness(Some("pure fermionic translation: no invariant ansatz tabulated".into())),
        );
    }
    items.extend(euler_items()?);
    Ok(items)
}

pub fn run_suite(suite: Suite, opts: &RunOptions) -> Result<Vec<Item>> {
    let p = opts.parallel;
    match suite {
        Suite::Tables => {
            let mut v = table_items(Algebra::Classical, p)?;
            v.extend(table_items(Algebra::Susy, p)?);
            Ok(v)
        }
        Suite::Symmetries => symmetry_items(p),
        Suite::Reduce => reduce_items(&opts.numeric(), p),
        Suite::Solutions => solution_items(&solutions().iter().collect::<Vec<_>>(), &opts.numeric(), p),
        Suite::Conservation => conservation_suite(p),
        Suite::Weierstrass => weierstrass_suite(p),
        Suite::Hydro => hydro_suite(opts.seed, p),
    }
}

/// Runs `suites` in order. Wall-clock times per suite are collected only
/// when requested, so default reports are reproducible byte for byte.
pub fn run(suites: &[Suite], opts: &RunOptions) -> Result<Report> {
    let mut report = Report::new(opts.seed);
    let mut timings = BTreeMap::new();
    for &s in suites {
        let start = Instant::now();
        let items = run_suite(s, opts).map_err(|e| match e {
            Error::Catalog(m) => Error::Catalog(format!("{}: {m}", s.name())),
            e => e,
        })?;
        timings.insert(s.name().to_string(), start.elapsed().as_secs_f64() * 1e3);
        report.extend(items);
    }
    if opts.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}

pub fn run_all(opts: &RunOptions) -> Result<Report> {
    run(&Suite::ALL, opts)
}
