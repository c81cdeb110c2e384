//! Graded vector fields, brackets, structure tables, adjoint series and the
//! one-dimensional subalgebra catalogs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use cas::diff::Coord;
use cas::expr::Key;
use cas::grassmann::Parity;
use cas::parse::parse;
use cas::rational::{fmt_q, parse_q};
use cas::{Expr, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Coordinates spanned by the vector fields, in display order.
pub const COORDS: [&str; 6] = ["x", "t", "R", "S", "xi", "psi"];

pub fn coord(name: &str) -> Coord {
    match name {
        "x" | "t" => Coord::sym(name),
        _ => Coord::field(name),
    }
}

fn coord_name(c: &Coord) -> String {
    match c {
        Coord::Even(a) => a.to_string(),
        Coord::Odd(o) => o.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub name: String,
    pub odd: bool,
    pub coeffs: BTreeMap<Coord, Expr>,
}

impl VectorField {
    pub fn zero(name: &str, odd: bool) -> Self {
        VectorField { name: name.to_string(), odd, coeffs: BTreeMap::new() }
    }

    /// Builds a field from `(coordinate, coefficient text)` pairs; parity is
    /// inferred and checked.
    pub fn from_text(name: &str, parts: &[(&str, &str)]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (c, s) in parts {
            let e = parse(s)?;
            if !e.is_zero() {
                coeffs.insert(coord(c), e);
            }
        }
        let mut v = VectorField { name: name.to_string(), odd: false, coeffs };
        v.odd = v.infer_parity()?;
        Ok(v)
    }

    fn infer_parity(&self) -> Result<bool> {
        let mut out: Option<bool> = None;
        for (c, e) in &self.coeffs {
            let p = match e.parity() {
                Parity::Even => false,
                Parity::Odd => true,
                Parity::Mixed => {
                    return Err(cas::CasError::Parity(format!("mixed coefficient on {}", coord_name(c))).into())
                }
            };
            let total = p ^ c.is_odd();
            if out.is_some_and(|o| o != total) {
                return Err(cas::CasError::Parity(format!("inconsistent parity in {}", self.name)).into());
            }
            out = Some(total);
        }
        Ok(out.unwrap_or(false))
    }

    /// Checks that coefficient parities agree with the declared parity.
    pub fn parity_consistent(&self) -> bool {
        self.coeffs.is_empty() || self.infer_parity().map(|p| p == self.odd).unwrap_or(false)
    }

    pub fn coeff(&self, c: &Coord) -> Expr {
        self.coeffs.get(c).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Expr::is_zero)
    }

    /// `v(f) = Σ φ^c ∂_c f`.
    pub fn action(&self, f: &Expr) -> Result<Expr> {
        let mut out = Expr::zero();
        for (c, phi) in &self.coeffs {
            let d = c.derivative(f)?;
            if !d.is_zero() {
                out = out.add(&phi.mul(&d));
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        let mut coeffs = self.coeffs.clone();
        for (c, e) in &o.coeffs {
            let s = coeffs.get(c).map(|x| x.add(e)).unwrap_or_else(|| e.clone());
            if s.is_zero() {
                coeffs.remove(c);
            } else {
                coeffs.insert(c.clone(), s);
            }
        }
        VectorField { name: format!("{} + {}", self.name, o.name), odd: self.odd || o.odd, coeffs }
    }

    /// Left multiplication by a homogeneous scalar.
    pub fn scale(&self, c: &Expr) -> VectorField {
        let flip = c.parity() == Parity::Odd;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, e)| (k.clone(), c.mul(e)))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        VectorField { name: format!("({c}){}", self.name), odd: self.odd ^ flip, coeffs }
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Flattened coefficients keyed by coordinate and monomial.
    pub fn features(&self) -> BTreeMap<(Coord, Key), Q> {
        let mut out = BTreeMap::new();
        for (c, e) in &self.coeffs {
            for (k, q) in e.terms() {
                out.insert((c.clone(), k.clone()), q.clone());
            }
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(c, e)| format!("({e})∂_{}", coord_name(c))).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `[A,B]^c = A(B^c) − (−1)^{|A||B|} B(A^c)`.
pub fn bracket(a: &VectorField, b: &VectorField) -> Result<VectorField> {
    let sign_plus = a.odd && b.odd;
    let mut coeffs = BTreeMap::new();
    for name in COORDS {
        let c = coord(name);
        let ab = a.action(&b.coeff(&c))?;
        let ba = b.action(&a.coeff(&c))?;
        let e = if sign_plus { ab.add(&ba) } else { ab.sub(&ba) };
        if !e.is_zero() {
            coeffs.insert(c, e);
        }
    }
    Ok(VectorField { name: format!("[{}, {}]", a.name, b.name), odd: a.odd ^ b.odd, coeffs })
}

/// Generators of the classical point-symmetry algebra.
pub fn classical_generators() -> Vec<VectorField> {
    let g = |n: &str, p: &[(&str, &str)]| VectorField::from_text(n, p).expect("generator text");
    vec![
        g("M1", &[("x", "x"), ("t", "t")]),
        g("M2", &[("x", "x"), ("t", "-t"), ("R", "2*R"), ("S", "2*S")]),
        g("W", &[("x", "t"), ("R", "1"), ("S", "1")]),
        g("J", &[("t", "x"), ("R", "-R^2"), ("S", "-S^2")]),
        g("T1", &[("x", "1")]),
        g("T0", &[("t", "1")]),
    ]
}

/// Generators of the supersymmetric point-symmetry superalgebra.
pub fn susy_generators() -> Vec<VectorField> {
    let g = |n: &str, p: &[(&str, &str)]| VectorField::from_text(n, p).expect("generator text");
    vec![
        g("D1", &[("x", "2*x"), ("t", "3*t"), ("R", "-R"), ("S", "-S")]),
        g("D2", &[("x", "x"), ("t", "t"), ("xi", "xi")]),
        g("D3", &[("x", "x"), ("t", "t"), ("psi", "psi")]),
        g("B", &[("x", "t"), ("R", "1"), ("S", "1")]),
        g("P0", &[("t", "1")]),
        g("P1", &[("x", "1")]),
        VectorField { odd: true, ..g("Y1", &[("xi", "1")]) },
        VectorField { odd: true, ..g("Y2", &[("psi", "1")]) },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Classical,
    Susy,
}

impl Algebra {
    pub fn generators(self) -> Vec<VectorField> {
        match self {
            Algebra::Classical => classical_generators(),
            Algebra::Susy => susy_generators(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Classical => "classical",
            Algebra::Susy => "susy",
        }
    }

    pub fn reference(self) -> StructureTable {
        match self {
            Algebra::Classical => reference_table(&CLASSICAL_NAMES, &TABLE_CLASSICAL),
            Algebra::Susy => reference_table(&SUSY_NAMES, &TABLE_SUSY),
        }
    }
}

pub const CLASSICAL_NAMES: [&str; 6] = ["M1", "M2", "W", "J", "T1", "T0"];
pub const SUSY_NAMES: [&str; 8] = ["D1", "D2", "D3", "B", "P0", "P1", "Y1", "Y2"];

const TABLE_CLASSICAL: [[&str; 6]; 6] = [
    ["0", "0", "0", "0", "-T1", "-T0"],
    ["0", "0", "-2W", "2J", "-T1", "T0"],
    ["0", "2W", "0", "-M2", "0", "-T1"],
    ["0", "-2J", "M2", "0", "-T0", "0"],
    ["T1", "T1", "0", "T0", "0", "0"],
    ["T0", "-T0", "T1", "0", "0", "0"],
];

const TABLE_SUSY: [[&str; 8]; 8] = [
    ["0", "0", "0", "B", "-3P0", "-2P1", "0", "0"],
    ["0", "0", "0", "0", "-P0", "-P1", "-Y1", "0"],
    ["0", "0", "0", "0", "-P0", "-P1", "0", "-Y2"],
    ["-B", "0", "0", "0", "-P1", "0", "0", "0"],
    ["3P0", "P0", "P0", "P1", "0", "0", "0", "0"],
    ["2P1", "P1", "P1", "0", "0", "0", "0", "0"],
    ["0", "Y1", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "Y2", "0", "0", "0", "0", "0"],
];

/// Parses a rational combination such as `-2W + T1` over `names`.
pub fn parse_combination(s: &str, names: &[&str]) -> Result<Vec<Q>> {
    let mut out = vec![Q::zero(); names.len()];
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src == "0" {
        return Ok(out);
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-Q::one(), rest),
            None => (Q::one(), term.strip_prefix('+').unwrap_or(&term)),
        };
        let idx = names
            .iter()
            .enumerate()
            .filter(|(_, n)| body.ends_with(*n))
            .max_by_key(|(_, n)| n.len())
            .map(|(i, _)| i)
            .ok_or_else(|| Error::UnknownLabel(body.to_string()))?;
        let coef_txt = body[..body.len() - names[idx].len()].trim_end_matches('*');
        let coef = if coef_txt.is_empty() {
            Q::one()
        } else {
            parse_q(coef_txt).ok_or_else(|| Error::Catalog(format!("bad coefficient `{coef_txt}`")))?
        };
        out[idx] += sign * coef;
    }
    Ok(out)
}

/// Prints a rational combination, `0` when empty.
pub fn format_combination(c: &[Q], names: &[String]) -> String {
    let mut s = String::new();
    for (q, n) in c.iter().zip(names) {
        if q.is_zero() {
            continue;
        }
        let mag = q.abs();
        let body = if mag.is_one() { n.clone() } else { format!("{}{n}", fmt_q(&mag)) };
        if s.is_empty() {
            if q.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if q.is_negative() { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureTable {
    pub generators: Vec<String>,
    pub parities: Vec<bool>,
    /// `entries[i][j]` expands `[G_i, G_j]` in the generator basis.
    #[serde(with = "q_matrix")]
    pub entries: Vec<Vec<Vec<Q>>>,
}

mod q_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Vec<Q>>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let txt: Vec<Vec<Vec<String>>> =
            m.iter().map(|r| r.iter().map(|c| c.iter().map(fmt_q).collect()).collect()).collect();
        txt.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Vec<Q>>>, D::Error> {
        let txt: Vec<Vec<Vec<String>>> = Vec::deserialize(d)?;
        txt.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|c| {
                        c.into_iter()
                            .map(|q| parse_q(&q).ok_or_else(|| serde::de::Error::custom(format!("bad rational {q}"))))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

fn reference_table<const N: usize>(names: &[&str; N], rows: &[[&str; N]; N]) -> StructureTable {
    let parities = names.iter().map(|n| n.starts_with('Y')).collect();
    let entries = rows
        .iter()
        .map(|r| r.iter().map(|e| parse_combination(e, names).expect("reference entry")).collect())
        .collect();
    StructureTable { generators: names.iter().map(|s| s.to_string()).collect(), parities, entries }
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn entry_text(&self, i: usize, j: usize) -> String {
        format_combination(&self.entries[i][j], &self.generators)
    }

    fn sign(&self, i: usize, j: usize) -> Q {
        if self.parities[i] && self.parities[j] {
            -Q::one()
        } else {
            Q::one()
        }
    }

    /// `[A,B] = −(−1)^{|A||B|}[B,A]` for every pair.
    pub fn antisymmetry_violations(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let s = self.sign(i, j);
                let ok = self.entries[i][j].iter().zip(&self.entries[j][i]).all(|(a, b)| *a == -(s.clone() * b));
                if !ok {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Bracket of two coefficient vectors, each homogeneous.
    pub fn bracket_vec(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let c = u[i].clone() * v[j].clone();
                for (o, e) in out.iter_mut().zip(&self.entries[i][j]) {
                    if !e.is_zero() {
                        *o += c.clone() * e;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    /// Triples violating the graded Jacobi identity
    /// `(−1)^{|A||C|}[A,[B,C]] + (−1)^{|B||A|}[B,[C,A]] + (−1)^{|C||B|}[C,[A,B]] = 0`.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let p = &self.parities;
        let sg = |a: usize, b: usize| if p[a] && p[b] { -Q::one() } else { Q::one() };
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t1 = self.bracket_vec(&self.unit(a), &self.entries[b][c]);
                    let t2 = self.bracket_vec(&self.unit(b), &self.entries[c][a]);
                    let t3 = self.bracket_vec(&self.unit(c), &self.entries[a][b]);
                    let (s1, s2, s3) = (sg(a, c), sg(b, a), sg(c, b));
                    let zero = (0..n).all(|k| {
                        (s1.clone() * &t1[k] + s2.clone() * &t2[k] + s3.clone() * &t3[k]).is_zero()
                    });
                    if !zero {
                        bad.push((a, b, c));
                    }
                }
            }
        }
        bad
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.generators.iter().position(|g| g == name).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// Whether the span of `members` is an ideal.
    pub fn is_ideal(&self, members: &[&str]) -> Result<bool> {
        let idx: Vec<usize> = members.iter().map(|m| self.index(m)).collect::<Result<_>>()?;
        for i in 0..self.dim() {
            for &j in &idx {
                let e = &self.entries[i][j];
                if e.iter().enumerate().any(|(k, q)| !q.is_zero() && !idx.contains(&k)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Dimensions of the derived series `L ⊃ [L,L] ⊃ …` until it stabilizes.
    pub fn derived_series(&self) -> Vec<usize> {
        let n = self.dim();
        let mut basis: Vec<Vec<Q>> = (0..n).map(|i| self.unit(i)).collect();
        let mut dims = vec![basis.len()];
        loop {
            let homog: Vec<Vec<Q>> = basis.iter().flat_map(|v| self.split_homogeneous(v)).collect();
            let mut gens = Vec::new();
            for u in &homog {
                for v in &homog {
                    gens.push(self.bracket_vec(u, v));
                }
            }
            let next = row_basis(gens);
            let d = next.len();
            let last = *dims.last().expect("nonempty");
            if d == last {
                break;
            }
            dims.push(d);
            basis = next;
            if d == 0 {
                break;
            }
        }
        dims
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last() == Some(&0)
    }

    fn split_homogeneous(&self, v: &[Q]) -> Vec<Vec<Q>> {
        let mut even = v.to_vec();
        let mut odd = v.to_vec();
        for k in 0..v.len() {
            if self.parities[k] {
                even[k] = Q::zero();
            } else {
                odd[k] = Q::zero();
            }
        }
        [even, odd].into_iter().filter(|x| x.iter().any(|q| !q.is_zero())).collect()
    }
}

/// Reduced row basis of the span of `rows`.
fn row_basis(mut rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    rows.retain(|r| r.iter().any(|q| !q.is_zero()));
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut out: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut r in rows {
        for (b, &p) in out.iter().zip(&pivots) {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for k in 0..cols {
                    r[k] -= f.clone() * &b[k];
                }
            }
        }
        if let Some(p) = r.iter().position(|q| !q.is_zero()) {
            let inv = Q::one() / r[p].clone();
            for q in r.iter_mut() {
                *q *= inv.clone();
            }
            for (b, _) in out.iter_mut().zip(&pivots) {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    for k in 0..cols {
                        b[k] -= f.clone() * &r[k];
                    }
                }
            }
            out.push(r);
            pivots.push(p);
        }
    }
    out
}

/// Expands `v` in the span of `basis` by exact elimination over the
/// coefficient features. Returns `None` with the residual when `v` is not
/// in the span.
pub fn decompose(v: &VectorField, basis: &[VectorField]) -> std::result::Result<Vec<Q>, VectorField> {
    let n = basis.len();
    let feats: Vec<BTreeMap<(Coord, Key), Q>> = basis.iter().map(|b| b.features()).collect();
    let target = v.features();
    let mut keys: Vec<(Coord, Key)> = feats.iter().flat_map(|f| f.keys().cloned()).collect();
    keys.extend(target.keys().cloned());
    keys.sort();
    keys.dedup();
    // augmented matrix: one row per feature, columns = basis + rhs
    let mut m: Vec<Vec<Q>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Q> = feats.iter().map(|f| f.get(k).cloned().unwrap_or_else(Q::zero)).collect();
            row.push(target.get(k).cloned().unwrap_or_else(Q::zero));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for q in m[r].iter_mut() {
            *q *= inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..=n {
                    let sub = f.clone() * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut coeffs = vec![Q::zero(); n];
    for (row, &c) in pivot_cols.iter().enumerate() {
        coeffs[c] = m[row][n].clone();
    }
    let consistent = m[r..].iter().all(|row| row[n].is_zero());
    if consistent {
        Ok(coeffs)
    } else {
        let mut res = v.clone();
        for (b, q) in basis.iter().zip(&coeffs) {
            if !q.is_zero() {
                res = res.add(&b.scale(&Expr::num(-q.clone())));
            }
        }
        Err(res.renamed("residual"))
    }
}

/// Computes all brackets of `gens` and expands them in the same basis.
pub fn structure_table(gens: &[VectorField], parallel: bool) -> Result<StructureTable> {
    let n = gens.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let results = par::map(parallel, pairs, |(i, j)| -> Result<Vec<Q>> {
        let br = bracket(&gens[i], &gens[j])?;
        decompose(&br, gens).map_err(|res| Error::NonClosure {
            a: gens[i].name.clone(),
            b: gens[j].name.clone(),
            residual: res.to_string(),
        })
    });
    let mut entries = vec![vec![Vec::new(); n]; n];
    for (k, r) in results.into_iter().enumerate() {
        entries[k / n][k % n] = r?;
    }
    Ok(StructureTable {
        generators: gens.iter().map(|g| g.name.clone()).collect(),
        parities: gens.iter().map(|g| g.odd).collect(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryDiff {
    pub row: String,
    pub col: String,
    pub computed: String,
    pub expected: String,
    pub ok: bool,
}

/// Entry-by-entry comparison with a reference table on the same generators.
pub fn diff_tables(computed: &StructureTable, reference: &StructureTable) -> Vec<EntryDiff> {
    let n = computed.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(EntryDiff {
                row: computed.generators[i].clone(),
                col: computed.generators[j].clone(),
                computed: computed.entry_text(i, j),
                expected: reference.entry_text(i, j),
                ok: computed.entries[i][j] == reference.entries[i][j],
            });
        }
    }
    out
}

/// `Σ_{n≥0} εⁿ/n! ad_Yⁿ(X)`. Stops when a term vanishes; when `max_order`
/// is reached first, returns the partial sum if `truncate` is set.
pub fn adjoint_orbit(y: &VectorField, x: &VectorField, eps: &Expr, max_order: usize, truncate: bool) -> Result<VectorField> {
    let mut sum = x.clone();
    let mut term = x.clone();
    let mut coef = Expr::one();
    for n in 1..=max_order {
        term = bracket(y, &term)?;
        if term.is_zero() {
            return Ok(sum.renamed(&format!("Ad(exp({eps}·{})){}", y.name, x.name)));
        }
        coef = coef.mul(eps).mul(&Expr::frac(1, n as i64));
        sum = sum.add(&term.scale(&coef));
    }
    if truncate {
        Ok(sum)
    } else {
        Err(Error::NonTerminating(max_order))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraRep {
    pub label: String,
    pub algebra: Algebra,
    pub kind: String,
    pub display: String,
    /// `(coefficient expression, generator name)` pairs.
    pub combination: Vec<(String, String)>,
    pub constraints: String,
}

impl SubalgebraRep {
    /// The representative as a vector field, parameters left symbolic.
    pub fn vector_field(&self) -> Result<VectorField> {
        let gens = self.algebra.generators();
        let mut out = VectorField::zero(&self.display, false);
        for (c, g) in &self.combination {
            let gen = gens.iter().find(|v| &v.name == g).ok_or_else(|| Error::UnknownLabel(g.clone()))?;
            out = out.add(&gen.scale(&parse(c)?));
        }
        let odd = out.infer_parity()?;
        Ok(VectorField { name: self.label.clone(), odd, coeffs: out.coeffs })
    }
}

const SUBALGEBRAS_JSON: &str = include_str!("../catalog/subalgebras.json");

pub fn subalgebras() -> &'static [SubalgebraRep] {
    static CAT: OnceLock<Vec<SubalgebraRep>> = OnceLock::new();
    CAT.get_or_init(|| serde_json::from_str(SUBALGEBRAS_JSON).expect("embedded subalgebra catalog"))
}

pub fn lookup(label: &str) -> Result<&'static SubalgebraRep> {
    subalgebras().iter().find(|s| s.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}
