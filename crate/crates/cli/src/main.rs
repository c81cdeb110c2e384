//! `rinv`: runs the verification suites and solvers and writes JSON-lines
//! reports.

mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use rinv::catalog::Catalog;
use rinv::conserve::{conservation_items, path_independence, Convention, SolutionBinding, WeierstrassPath};
use rinv::hydro::{
    catastrophe_locus, evaluate_grid, invert_map, GridSolveConfig, NewtonConfig, Profile, ProfilePair, Rect,
};
use rinv::liealg::Algebra;
use rinv::reduction::solutions::{select, solution, solution_items, Tier};
use rinv::reduction::{ansatz, ansatze, verify_reduction};
use rinv::report::{Item, Report, Status};
use rinv::suites::{self, RunOptions, Suite};
use thiserror::Error;

use crate::args::{AlgebraArg, Cli, Command, HydroCommand, ProfileArgs};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rinv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(rinv::Error::UnknownLabel(_)) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Where output goes: `--out`, else `$RINV_OUT_DIR/<default>`, else stdout.
/// Relative `--out` paths are resolved against `RINV_OUT_DIR` when set.
fn sink(out: Option<&Path>, default_name: &str) -> Result<Box<dyn Write>> {
    let dir = std::env::var_os("RINV_OUT_DIR").map(PathBuf::from);
    let path = match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    };
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(report: &Report, cli: &Cli, name: &str) -> Result<ExitCode> {
    let mut w = sink(cli.out.as_deref(), &format!("{name}.jsonl"))?;
    report.write_jsonl(&mut w)?;
    w.flush()?;
    Ok(if report.failed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run_opts(cli: &Cli) -> RunOptions {
    RunOptions { seed: cli.seed, parallel: !cli.sequential && rinv::par::AVAILABLE, timings: cli.timings }
}

fn profile(p: &ProfileArgs) -> Result<ProfilePair> {
    match (&p.coeffs, &p.expr) {
        (Some(_), Some(_)) => Err(CliError::Usage("--coeffs and --expr are exclusive".into())),
        (Some(c), None) => ProfilePair::from_coeffs(c).map_err(|e| CliError::Usage(e.to_string())),
        (None, Some(e)) => {
            let parts: Vec<&str> = e.split(';').collect();
            let f1 = Profile::expr(parts[0])?;
            let f2 = match parts.get(1) {
                Some(t) => Profile::expr(t)?,
                None => f1.clone(),
            };
            Ok(ProfilePair::new(&format!("expr:{e}"), f1, f2))
        }
        (None, None) => ProfilePair::preset(&p.preset).map_err(|_| {
            CliError::Usage(format!("unknown preset `{}` (expected one of {:?})", p.preset, rinv::hydro::PRESETS))
        }),
    }
}

fn newton(p: &ProfileArgs) -> NewtonConfig {
    let mut cfg = NewtonConfig::default();
    if let Some(t) = p.tol {
        cfg.tol = t;
    }
    if let Some(d) = p.delta {
        cfg.delta = d;
    }
    cfg
}

fn pair(s: &str, what: &str) -> Result<(f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("{what} `{s}`: {e}")))?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::Usage(format!("{what} `{s}`: expected two numbers"))),
    }
}

/// `min:max:n` for one axis.
fn axis(s: &str) -> Result<rinv::hydro::Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("axis `{s}`: expected min:max:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
    let n = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
    if n < 2 || !(hi > lo) {
        return Err(CliError::Usage(format!("axis `{s}`: need n ≥ 2 and max > min")));
    }
    Ok(rinv::hydro::Axis::new(lo, hi, n))
}

/// `min:max` for one range.
fn range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| CliError::Usage(format!("range `{s}`: expected min:max")))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("range `{s}`: {e}")));
    Ok((p(a)?, p(b)?))
}

fn hydro(cmd: &HydroCommand, cli: &Cli) -> Result<ExitCode> {
    let opts = run_opts(cli);
    match cmd {
        HydroCommand::Invert { x, t, guess, profile: pa } => {
            let p = profile(pa)?;
            let g = pair(guess, "--guess")?;
            let item = match invert_map(*x, *t, &p, g, &newton(pa)) {
                Ok(inv) => Item::new("hydro", "invert", Status::Pass).detail(&inv),
                Err(e) => Item::new("hydro", "invert", Status::Fail).witness(Some(e.to_string())),
            };
            let mut rep = Report::new(cli.seed);
            rep.extend([item]);
            emit(&rep, cli, "invert")
        }
        HydroCommand::Grid { x, t, guess, profile: pa } => {
            let p = profile(pa)?;
            let mut cfg = GridSolveConfig::reference(50);
            if let Some(x) = x {
                cfg.x = axis(x)?;
            }
            if let Some(t) = t {
                cfg.t = axis(t)?;
            }
            if let Some(g) = guess {
                cfg.guess = pair(g, "--guess")?;
            }
            cfg.newton = newton(pa);
            let g = evaluate_grid(&cfg, &p, opts.parallel);
            let mut w = sink(cli.out.as_deref(), "grid.csv")?;
            g.write_csv(&mut w)?;
            w.flush()?;
            eprintln!("{}", serde_json::to_string(&g.summary()).expect("summary json"));
            Ok(ExitCode::SUCCESS)
        }
        HydroCommand::Locus { r, s, samples, profile: pa } => {
            let p = profile(pa)?;
            let dom = Rect { r: range(r)?, s: range(s)? };
            let l = catastrophe_locus(&p, &dom, *samples, newton(pa).delta);
            let mut w = sink(cli.out.as_deref(), "locus.json")?;
            serde_json::to_writer(&mut w, &l).expect("locus json");
            w.write_all(b"\n")?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let opts = run_opts(cli);
    match &cli.command {
        Command::Tables { algebra, reference } => {
            if reference != "paper" {
                return Err(CliError::Usage(format!("unknown reference `{reference}`")));
            }
            let algs: Vec<Algebra> = match algebra {
                AlgebraArg::Classical => vec![Algebra::Classical],
                AlgebraArg::Susy => vec![Algebra::Susy],
                AlgebraArg::Both => vec![Algebra::Classical, Algebra::Susy],
            };
            let mut rep = Report::new(cli.seed);
            for a in algs {
                rep.extend(suites::table_items(a, opts.parallel)?);
            }
            emit(&rep, cli, "tables")
        }
        Command::Symmetries => emit(&suites::run(&[Suite::Symmetries], &opts)?, cli, "symmetries"),
        Command::Reduce { label } => {
            let mut rep = Report::new(cli.seed);
            match label {
                Some(l) => {
                    let r = verify_reduction(ansatz(l)?, &opts.numeric())?;
                    rep.extend([Item::new("reduce", &r.label, r.status).witness(r.witness()).detail(&r)]);
                }
                None => {
                    let _ = ansatze();
                    rep = suites::run(&[Suite::Reduce], &opts)?;
                }
            }
            emit(&rep, cli, "reduce")
        }
        Command::Solutions { id, tier } => {
            let tier = match tier {
                Some(t) => Some(Tier::from_name(t).ok_or_else(|| CliError::Usage(format!("unknown tier `{t}`")))?),
                None => None,
            };
            if let Some(i) = id {
                solution(i)?;
            }
            let recs = select(id.as_deref(), tier)?;
            let mut rep = Report::new(cli.seed);
            rep.extend(solution_items(&recs, &opts.numeric(), opts.parallel)?);
            emit(&rep, cli, "solutions")
        }
        Command::Conservation { kmax, convention } => {
            if *kmax < 1 {
                return Err(CliError::Usage("--kmax must be at least 1".into()));
            }
            let conv = Convention::from_name(convention)
                .ok_or_else(|| CliError::Usage(format!("unknown convention `{convention}`")))?;
            let mut rep = Report::new(cli.seed);
            rep.extend(conservation_items(*kmax, conv, opts.parallel)?);
            emit(&rep, cli, "conservation")
        }
        Command::Weierstrass { k, solution: id, path, params, steps } => {
            let mut values = std::collections::BTreeMap::new();
            for p in params {
                let (n, v) = p.split_once('=').ok_or_else(|| CliError::Usage(format!("--param `{p}`: expected NAME=VALUE")))?;
                let v = v.parse::<f64>().map_err(|e| CliError::Usage(format!("--param `{p}`: {e}")))?;
                values.insert(n.to_string(), v);
            }
            let sol = SolutionBinding::from_record(solution(id)?, &values)?;
            let given = match path {
                Some(f) => {
                    let text = std::fs::read_to_string(f)?;
                    let p: WeierstrassPath = serde_json::from_str(&text).map_err(rinv::Error::from)?;
                    if p.vertices.len() < 2 {
                        return Err(CliError::Usage("path needs at least two vertices".into()));
                    }
                    p
                }
                None => WeierstrassPath::t_then_x((0.5, 1.0), (1.5, 2.0)),
            };
            let (a, b) = (given.start().expect("vertex"), given.end().expect("vertex"));
            let reference = WeierstrassPath::x_then_t(a, b);
            let rep_ = path_independence(*k, &sol, [&given, &reference], *steps, opts.parallel)?;
            let witness = (!rep_.ok).then(|| format!("|chi1 - chi2| = {:e}", rep_.difference));
            let item = Item::new("weierstrass", &format!("{id}-k{k}"), if rep_.ok { Status::Pass } else { Status::Fail })
                .witness(witness)
                .detail(&rep_);
            let mut rep = Report::new(cli.seed);
            rep.extend([item]);
            emit(&rep, cli, "weierstrass")
        }
        Command::Hydro { command } => hydro(command, cli),
        Command::All => emit(&suites::run_all(&opts)?, cli, "all"),
        Command::Catalog { format } => {
            let c = Catalog::embedded();
            let text = match format.as_str() {
                "json" => c.to_json()?,
                "markdown" | "md" => c.to_markdown(),
                f => return Err(CliError::Usage(format!("unknown catalog format `{f}`"))),
            };
            let ext = if format == "json" { "json" } else { "md" };
            let mut w = sink(cli.out.as_deref(), &format!("catalog.{ext}"))?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("rinv: {e}");
            ExitCode::from(e.code())
        }
    }
}
