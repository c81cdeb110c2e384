//! General integral `x = RF₁'(R) − F₁(R) + SF₂'(S) − F₂(S)`,
//! `t = F₁'(R) + F₂'(S)`: forward map, damped Newton inversion, gradient
//! catastrophe detection and finite-difference residuals on grids.

use std::fmt;
use std::io::Write;

use cas::diff::partial;
use cas::eval::{eval, Bindings};
use cas::parse::parse;
use cas::{Atom, Expr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::report::{Item, Status};

/// A single-variable profile with exact first and second derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// Coefficients `c₀, c₁, …` of `Σ cᵢ sⁱ`.
    Poly(Vec<f64>),
    /// Expression text in the variable `s`, differentiated symbolically.
    Expr { text: String, f: [Expr; 3] },
}

impl Profile {
    pub fn poly(c: &[f64]) -> Self {
        Profile::Poly(c.to_vec())
    }

    pub fn expr(text: &str) -> Result<Self> {
        let f0 = parse(text)?;
        let s = Atom::sym("s");
        let f1 = partial(&f0, &s)?;
        let f2 = partial(&f1, &s)?;
        Ok(Profile::Expr { text: text.to_string(), f: [f0, f1, f2] })
    }

    /// `F^{(n)}(s)` for `n ≤ 2`.
    pub fn deriv(&self, n: usize, s: f64) -> f64 {
        match self {
            Profile::Poly(c) => {
                let mut acc = 0.0;
                for (i, ci) in c.iter().enumerate().skip(n).rev() {
                    let fall: f64 = (0..n).map(|j| (i - j) as f64).product();
                    acc = acc * s + ci * fall;
                }
                acc
            }
            Profile::Expr { f, .. } => eval(&f[n], &Bindings::new().sym("s", s)).unwrap_or(f64::NAN),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Profile::Poly(c) => {
                let c: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                format!("poly[{}]", c.join(","))
            }
            Profile::Expr { text, .. } => text.clone(),
        }
    }
}

/// Homogeneous presets `F = c sⁿ / (n(n−1))` with `F'' = c sⁿ⁻²`.
pub const PRESETS: [&str; 3] = ["quadratic", "cubic", "quartic"];

#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePair {
    pub name: String,
    pub f1: Profile,
    pub f2: Profile,
}

impl ProfilePair {
    pub fn new(name: &str, f1: Profile, f2: Profile) -> Self {
        ProfilePair { name: name.to_string(), f1, f2 }
    }

    pub fn preset(name: &str) -> Result<Self> {
        let c = match name {
            "quadratic" => vec![0.0, 0.0, 0.5],
            "cubic" => vec![0.0, 0.0, 0.0, 1.0 / 6.0],
            "quartic" => vec![0.0, 0.0, 0.0, 0.0, 1.0 / 12.0],
            _ => return Err(Error::UnknownLabel(name.to_string())),
        };
        Ok(ProfilePair::new(name, Profile::Poly(c.clone()), Profile::Poly(c)))
    }

    /// Parses `"c0,c1,…"` (both profiles) or `"a0,a1,…;b0,b1,…"`.
    pub fn from_coeffs(text: &str) -> Result<Self> {
        let list = |s: &str| -> Result<Vec<f64>> {
            s.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Catalog(format!("coefficient `{v}`: {e}"))))
                .collect()
        };
        let mut parts = text.split(';');
        let a = list(parts.next().unwrap_or(""))?;
        let b = match parts.next() {
            Some(p) => list(p)?,
            None => a.clone(),
        };
        Ok(ProfilePair::new(&format!("coeffs:{text}"), Profile::Poly(a), Profile::Poly(b)))
    }
}

pub fn forward_map(r: f64, s: f64, p: &ProfilePair) -> (f64, f64) {
    let (f1, d1) = (p.f1.deriv(0, r), p.f1.deriv(1, r));
    let (f2, d2) = (p.f2.deriv(0, s), p.f2.deriv(1, s));
    (r * d1 - f1 + s * d2 - f2, d1 + d2)
}

/// `∂(x, t)/∂(R, S)` as `[[RF₁'', SF₂''], [F₁'', F₂'']]`.
pub fn jacobian(r: f64, s: f64, p: &ProfilePair) -> [[f64; 2]; 2] {
    let (a, b) = (p.f1.deriv(2, r), p.f2.deriv(2, s));
    [[r * a, s * b], [a, b]]
}

/// `F₁''(R) F₂''(S) (R − S)`.
pub fn det(r: f64, s: f64, p: &ProfilePair) -> f64 {
    p.f1.deriv(2, r) * p.f2.deriv(2, s) * (r - s)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    /// Convergence threshold on the step norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Catastrophe threshold on `|det|`.
    pub delta: f64,
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol: 1e-12, max_iter: 50, delta: 1e-10, max_halvings: 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Inversion {
    pub r: f64,
    pub s: f64,
    pub iterations: usize,
    pub det: f64,
}

/// Damped Newton on `forward_map(R, S) = (x, t)` from `guess`.
pub fn invert_map(x: f64, t: f64, p: &ProfilePair, guess: (f64, f64), cfg: &NewtonConfig) -> Result<Inversion> {
    let (mut r, mut s) = guess;
    let resid = |r: f64, s: f64| {
        let (fx, ft) = forward_map(r, s, p);
        (fx - x, ft - t)
    };
    let mut trace = Vec::new();
    let mut last_step = f64::INFINITY;
    for it in 1..=cfg.max_iter {
        let [[a, b], [c, d]] = jacobian(r, s, p);
        let dt = a * d - b * c;
        if dt.is_nan() || dt.abs() <= cfg.delta {
            return Err(Error::Catastrophe { r, s, det: dt });
        }
        let (gx, gt) = resid(r, s);
        let g0 = gx.hypot(gt);
        let (dr, ds) = (-(d * gx - b * gt) / dt, -(a * gt - c * gx) / dt);
        let mut lam = 1.0;
        for _ in 0..cfg.max_halvings {
            let (hx, ht) = resid(r + lam * dr, s + lam * ds);
            if hx.hypot(ht) <= g0 {
                break;
            }
            lam *= 0.5;
        }
        r += lam * dr;
        s += lam * ds;
        last_step = lam * dr.hypot(ds);
        trace.push((r, s));
        if last_step <= cfg.tol {
            return Ok(Inversion { r, s, iterations: it, det: det(r, s, p) });
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iter, last_step, trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub r: (f64, f64),
    pub s: (f64, f64),
}

/// Where a profile's second derivative vanishes.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroSet {
    Everywhere,
    At(Vec<f64>),
}

impl ZeroSet {
    fn contains(&self, v: f64, tol: f64) -> bool {
        match self {
            ZeroSet::Everywhere => true,
            ZeroSet::At(z) => z.iter().any(|z| (z - v).abs() <= tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Locus {
    pub profile: String,
    /// Whether the domain meets `R = S`.
    pub diagonal: bool,
    /// Zeros of `F₁''` in `R`.
    pub r_zeros: ZeroSet,
    /// Zeros of `F₂''` in `S`.
    pub s_zeros: ZeroSet,
    pub samples: usize,
    /// Sample nodes with `|det| ≤ δ`.
    pub flagged: usize,
    /// Flagged nodes off every reported curve.
    pub unexplained: usize,
    /// Nodes on a reported curve that were not flagged.
    pub missed: usize,
    pub description: String,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn zeros_of(f: &Profile, lo: f64, hi: f64, n: usize, delta: f64) -> ZeroSet {
    let xs = linspace(lo, hi, n);
    let vs: Vec<f64> = xs.iter().map(|&x| f.deriv(2, x)).collect();
    if vs.iter().all(|v| v.abs() <= delta) {
        return ZeroSet::Everywhere;
    }
    let mut out: Vec<f64> = Vec::new();
    let mut push = |z: f64| {
        if out.last().is_none_or(|l| (z - l).abs() > 1e-9) {
            out.push(z);
        }
    };
    for i in 0..n {
        if vs[i].abs() <= delta {
            push(xs[i]);
        } else if i + 1 < n && vs[i + 1].abs() > delta && vs[i].signum() != vs[i + 1].signum() {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if f.deriv(2, m).signum() == f.deriv(2, a).signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            push(0.5 * (a + b));
        }
    }
    ZeroSet::At(out)
}

/// Zero set of `det = F₁''(R) F₂''(S)(R − S)` on `domain`, sampled on an
/// `n × n` lattice.
pub fn catastrophe_locus(p: &ProfilePair, domain: &Rect, n: usize, delta: f64) -> Locus {
    let diagonal = domain.r.0.max(domain.s.0) <= domain.r.1.min(domain.s.1);
    let r_zeros = zeros_of(&p.f1, domain.r.0, domain.r.1, n, delta);
    let s_zeros = zeros_of(&p.f2, domain.s.0, domain.s.1, n, delta);
    let (rs, ss) = (linspace(domain.r.0, domain.r.1, n), linspace(domain.s.0, domain.s.1, n));
    let (mut flagged, mut unexplained, mut missed) = (0, 0, 0);
    for &r in &rs {
        for &s in &ss {
            let hit = det(r, s, p).abs() <= delta;
            let on = r == s || r_zeros.contains(r, 0.0) || s_zeros.contains(s, 0.0);
            flagged += hit as usize;
            unexplained += (hit && !on) as usize;
            missed += (on && !hit) as usize;
        }
    }
    let mut parts = Vec::new();
    if diagonal {
        parts.push("{R=S}".to_string());
    }
    for (v, z) in [("R", &r_zeros), ("S", &s_zeros)] {
        match z {
            ZeroSet::Everywhere => parts.push(format!("all {v} (F'' vanishes identically)")),
            ZeroSet::At(zs) => parts.extend(zs.iter().map(|z| format!("{{{v}={z}}}"))),
        }
    }
    let description = if parts.is_empty() { "empty".to_string() } else { parts.join(" ∪ ") };
    Locus {
        profile: p.name.clone(),
        diagonal,
        r_zeros,
        s_zeros,
        samples: n * n,
        flagged,
        unexplained,
        missed,
        description,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        Axis { min, max, n }
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n.max(2) - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSolveConfig {
    pub x: Axis,
    pub t: Axis,
    pub newton: NewtonConfig,
    /// Initial guess for the first node; later nodes continue from
    /// their neighbours.
    pub guess: (f64, f64),
}

impl GridSolveConfig {
    pub fn new(x: Axis, t: Axis, guess: (f64, f64)) -> Self {
        GridSolveConfig { x, t, newton: NewtonConfig::default(), guess }
    }

    /// Quadratic-preset grid `x ∈ [20, 21]`, `t ∈ [2.8, 3.2]` on the
    /// `R > S` branch.
    pub fn reference(n: usize) -> Self {
        GridSolveConfig::new(Axis::new(20.0, 21.0, n), Axis::new(2.8, 3.2, n), (5.0, -2.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    Converged,
    Catastrophe,
    NonConvergence,
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeStatus::Converged => "converged",
            NodeStatus::Catastrophe => "catastrophe",
            NodeStatus::NonConvergence => "non-convergence",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Node {
    pub x: f64,
    pub t: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub det: f64,
    pub residual_r: Option<f64>,
    pub residual_s: Option<f64>,
    pub status: NodeStatus,
    #[serde(skip)]
    pub iterations: usize,
}

impl Node {
    pub fn ok(&self) -> bool {
        self.status == NodeStatus::Converged
    }

    /// `"R>S"` or `"R<S"`.
    pub fn branch(&self) -> &'static str {
        if self.r > self.s {
            "R>S"
        } else {
            "R<S"
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridDataset {
    pub config: GridSolveConfig,
    /// Row-major: `nodes[j * nx + i]` at `(x_i, t_j)`.
    pub nodes: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSummary {
    pub nx: usize,
    pub nt: usize,
    pub converged: usize,
    pub catastrophe: usize,
    pub non_convergence: usize,
    pub max_residual: f64,
    pub branches: Vec<String>,
}

#[derive(Serialize)]
struct CsvRow {
    x: f64,
    t: f64,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "S")]
    s: f64,
    det: f64,
    #[serde(rename = "residual_R")]
    residual_r: Option<f64>,
    #[serde(rename = "residual_S")]
    residual_s: Option<f64>,
    status: String,
}

impl GridDataset {
    pub fn node(&self, i: usize, j: usize) -> &Node {
        &self.nodes[j * self.config.x.n + i]
    }

    pub fn max_residual(&self) -> f64 {
        self.nodes
            .iter()
            .flat_map(|n| [n.residual_r, n.residual_s])
            .flatten()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    pub fn summary(&self) -> GridSummary {
        let count = |st| self.nodes.iter().filter(|n| n.status == st).count();
        let mut branches: Vec<String> = Vec::new();
        for n in self.nodes.iter().filter(|n| n.ok()) {
            if !branches.iter().any(|b| b == n.branch()) {
                branches.push(n.branch().to_string());
            }
        }
        GridSummary {
            nx: self.config.x.n,
            nt: self.config.t.n,
            converged: count(NodeStatus::Converged),
            catastrophe: count(NodeStatus::Catastrophe),
            non_convergence: count(NodeStatus::NonConvergence),
            max_residual: self.max_residual(),
            branches,
        }
    }

    /// Columns `x, t, R, S, det, residual_R, residual_S, status`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for n in &self.nodes {
            wr.serialize(CsvRow {
                x: n.x,
                t: n.t,
                r: n.r,
                s: n.s,
                det: n.det,
                residual_r: n.residual_r,
                residual_s: n.residual_s,
                status: n.status.to_string(),
            })?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn solve_node(x: f64, t: f64, p: &ProfilePair, guess: (f64, f64), cfg: &NewtonConfig) -> Node {
    let blank = |status, r, s| Node {
        x,
        t,
        r,
        s,
        det: det(r, s, p),
        residual_r: None,
        residual_s: None,
        status,
        iterations: 0,
    };
    match invert_map(x, t, p, guess, cfg) {
        Ok(inv) => Node { iterations: inv.iterations, ..blank(NodeStatus::Converged, inv.r, inv.s) },
        Err(Error::Catastrophe { r, s, .. }) => blank(NodeStatus::Catastrophe, r, s),
        Err(_) => blank(NodeStatus::NonConvergence, f64::NAN, f64::NAN),
    }
}

/// Sweeps `x` along each row starting from `seed`, reusing the previous
/// converged node as the next guess.
fn sweep(xs: &[f64], t: f64, p: &ProfilePair, seed: (f64, f64), cfg: &NewtonConfig) -> Vec<Node> {
    let mut guess = seed;
    xs.iter()
        .map(|&x| {
            let n = solve_node(x, t, p, guess, cfg);
            if n.ok() {
                guess = (n.r, n.s);
            }
            n
        })
        .collect()
}

/// Derivative along a line of values with spacing `h`. Central in the
/// interior, one-sided second order at the ends.
fn diff_at(v: &[f64], i: usize, h: f64) -> f64 {
    let n = v.len();
    if n == 2 {
        return (v[1] - v[0]) / h;
    }
    if i == 0 {
        (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    } else if i + 1 == n {
        (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
    } else {
        (v[i + 1] - v[i - 1]) / (2.0 * h)
    }
}

fn stencil(n: usize, i: usize) -> Vec<usize> {
    if n == 2 {
        vec![0, 1]
    } else if i == 0 {
        vec![0, 1, 2]
    } else if i + 1 == n {
        vec![n - 3, n - 2, n - 1]
    } else {
        vec![i - 1, i + 1]
    }
}

/// Inverts the map on every node and attaches the finite-difference
/// residuals of `R_t + S R_x`, `S_t + R S_x`. The first column is swept in
/// `t`; rows then run independently from their first node.
pub fn evaluate_grid(cfg: &GridSolveConfig, p: &ProfilePair, parallel: bool) -> GridDataset {
    let (xs, ts) = (cfg.x.points(), cfg.t.points());
    let (nx, nt) = (xs.len(), ts.len());
    let firsts: Vec<Node> = {
        let mut guess = cfg.guess;
        ts.iter()
            .map(|&t| {
                let n = solve_node(xs[0], t, p, guess, &cfg.newton);
                if n.ok() {
                    guess = (n.r, n.s);
                }
                n
            })
            .collect()
    };
    let seeds: Vec<(usize, (f64, f64))> = {
        let mut last = cfg.guess;
        firsts
            .iter()
            .enumerate()
            .map(|(j, n)| {
                if n.ok() {
                    last = (n.r, n.s);
                }
                (j, last)
            })
            .collect()
    };
    let rows = par::map(parallel, seeds, |(j, seed)| {
        let mut row = vec![firsts[j]];
        let start = if firsts[j].ok() { (firsts[j].r, firsts[j].s) } else { seed };
        row.extend(sweep(&xs[1..], ts[j], p, start, &cfg.newton));
        row
    });
    let mut nodes: Vec<Node> = rows.into_iter().flatten().collect();
    let (hx, ht) = (cfg.x.step(), cfg.t.step());
    if nx >= 2 && nt >= 2 {
        let r: Vec<f64> = nodes.iter().map(|n| n.r).collect();
        let s: Vec<f64> = nodes.iter().map(|n| n.s).collect();
        let ok: Vec<bool> = nodes.iter().map(Node::ok).collect();
        for j in 0..nt {
            for i in 0..nx {
                let idx = j * nx + i;
                let usable = ok[idx]
                    && stencil(nx, i).iter().all(|&a| ok[j * nx + a])
                    && stencil(nt, j).iter().all(|&b| ok[b * nx + i]);
                if !usable {
                    continue;
                }
                let row = |v: &[f64]| v[j * nx..(j + 1) * nx].to_vec();
                let col = |v: &[f64]| (0..nt).map(|b| v[b * nx + i]).collect::<Vec<_>>();
                let (rx, sx) = (diff_at(&row(&r), i, hx), diff_at(&row(&s), i, hx));
                let (rt, st) = (diff_at(&col(&r), j, ht), diff_at(&col(&s), j, ht));
                nodes[idx].residual_r = Some(rt + s[idx] * rx);
                nodes[idx].residual_s = Some(st + r[idx] * sx);
            }
        }
    }
    GridDataset { config: *cfg, nodes }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundTrip {
    pub profile: String,
    pub points: usize,
    pub max_error: f64,
    pub failures: usize,
    pub seed: u64,
}

/// `invert_map ∘ forward_map` on `points` random `(R, S)` in `domain` with
/// `|R − S| ≥ min_gap`, starting Newton from a perturbation of at most
/// `0.02` per component.
pub fn round_trip(p: &ProfilePair, domain: &Rect, points: usize, min_gap: f64, seed: u64, cfg: &NewtonConfig) -> RoundTrip {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_error, mut failures, mut done) = (0.0f64, 0, 0);
    while done < points {
        let r = rng.gen_range(domain.r.0..=domain.r.1);
        let s = rng.gen_range(domain.s.0..=domain.s.1);
        if (r - s).abs() < min_gap {
            continue;
        }
        let guess = (r + rng.gen_range(-0.02..=0.02), s + rng.gen_range(-0.02..=0.02));
        done += 1;
        let (x, t) = forward_map(r, s, p);
        match invert_map(x, t, p, guess, cfg) {
            Ok(inv) => max_error = max_error.max((inv.r - r).abs().max((inv.s - s).abs())),
            Err(_) => failures += 1,
        }
    }
    RoundTrip { profile: p.name.clone(), points, max_error, failures, seed }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Round trips, grid residuals and their convergence rate, and the
/// catastrophe loci of the presets.
pub fn hydro_suite(seed: u64, parallel: bool) -> Result<Vec<Item>> {
    let newton = NewtonConfig::default();
    let quad = ProfilePair::preset("quadratic")?;
    let quart = ProfilePair::preset("quartic")?;
    let mut items = Vec::new();

    for (p, dom) in [
        (&quad, Rect { r: (-2.0, 2.0), s: (-2.0, 2.0) }),
        (&quart, Rect { r: (0.5, 2.5), s: (0.5, 2.5) }),
    ] {
        let rt = round_trip(p, &dom, 1000, 0.1, seed, &newton);
        let ok = rt.failures == 0 && rt.max_error <= 1e-10;
        let w = (!ok).then(|| format!("max error {:e}, {} failures", rt.max_error, rt.failures));
        items.push(Item::new("hydro", &format!("round-trip-{}", p.name), status(ok)).witness(w).detail(&rt));
    }

    let coarse = evaluate_grid(&GridSolveConfig::reference(50), &quad, parallel);
    let fine = evaluate_grid(&GridSolveConfig::reference(99), &quad, parallel);
    let (cs, fs) = (coarse.summary(), fine.summary());
    let ok = cs.converged == 2500 && cs.max_residual <= 1e-6;
    let w = (!ok).then(|| format!("max residual {:e}, {} converged", cs.max_residual, cs.converged));
    items.push(Item::new("hydro", "grid-residual-50", status(ok)).witness(w).detail(&cs));
    let ratio = cs.max_residual / fs.max_residual;
    let ok = fs.converged == 99 * 99 && ratio >= 3.5;
    let w = (!ok).then(|| format!("residual ratio {ratio}"));
    items.push(
        Item::new("hydro", "grid-halving", status(ok))
            .witness(w)
            .detail(&serde_json::json!({ "coarse": cs.max_residual, "fine": fs.max_residual, "ratio": ratio })),
    );
    let worst = coarse
        .nodes
        .iter()
        .filter(|n| n.ok())
        .map(|n| {
            let [[a, b], [c, d]] = jacobian(n.r, n.s, &quad);
            ((a * d - b * c) - n.det).abs() / n.det.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let ok = worst <= 1e-14;
    items.push(
        Item::new("hydro", "det-consistency", status(ok))
            .witness((!ok).then(|| format!("relative gap {worst:e}")))
            .detail(&serde_json::json!({ "max_relative_gap": worst })),
    );

    let dom = Rect { r: (-2.0, 2.0), s: (-2.0, 2.0) };
    let lq = catastrophe_locus(&quad, &dom, 201, newton.delta);
    let ok = lq.diagonal
        && lq.r_zeros == ZeroSet::At(vec![])
        && lq.s_zeros == ZeroSet::At(vec![])
        && lq.flagged == 201
        && lq.unexplained == 0
        && lq.missed == 0;
    items.push(
        Item::new("hydro", "locus-quadratic", status(ok)).witness((!ok).then(|| lq.description.clone())).detail(&lq),
    );
    let l4 = catastrophe_locus(&quart, &dom, 201, newton.delta);
    let ok = l4.diagonal && l4.r_zeros.contains(0.0, 0.0) && l4.unexplained == 0 && l4.missed == 0;
    items.push(
        Item::new("hydro", "locus-quartic", status(ok)).witness((!ok).then(|| l4.description.clone())).detail(&l4),
    );
    let lin = ProfilePair::new("linear", Profile::poly(&[0.0, 1.0]), Profile::poly(&[0.0, 0.0, 0.5]));
    let err = invert_map(1.0, 1.0, &lin, (0.3, 0.7), &newton);
    let ok = matches!(err, Err(Error::Catastrophe { .. }));
    items.push(
        Item::new("hydro", "linear-profile-singular", status(ok))
            .witness((!ok).then(|| format!("{err:?}")))
            .detail(&serde_json::json!({ "error": err.err().map(|e| e.to_string()) })),
    );
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let p = Profile::poly(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p.deriv(0, 2.0), 1.0 + 4.0 + 12.0 + 32.0);
        assert_eq!(p.deriv(1, 2.0), 2.0 + 12.0 + 48.0);
        assert_eq!(p.deriv(2, 2.0), 6.0 + 48.0);
    }

    #[test]
    fn expression_profile_matches_polynomial() {
        let e = Profile::expr("s^4/12").unwrap();
        let q = Profile::poly(&[0.0, 0.0, 0.0, 0.0, 1.0 / 12.0]);
        for n in 0..3 {
            assert!((e.deriv(n, 1.3) - q.deriv(n, 1.3)).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficient_lists() {
        let p = ProfilePair::from_coeffs("0,0,0.5;0,1").unwrap();
        assert_eq!(p.f1, Profile::poly(&[0.0, 0.0, 0.5]));
        assert_eq!(p.f2, Profile::poly(&[0.0, 1.0]));
        assert!(ProfilePair::from_coeffs("1,x").is_err());
    }

    #[test]
    fn one_sided_stencil_is_exact_on_quadratics() {
        let v: Vec<f64> = (0..5).map(|i| (i as f64 * 0.1).powi(2)).collect();
        assert!((diff_at(&v, 0, 0.1) - 0.0).abs() < 1e-12);
        assert!((diff_at(&v, 4, 0.1) - 0.8).abs() < 1e-12);
    }
}
