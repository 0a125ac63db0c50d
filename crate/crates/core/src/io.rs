//! Text and JSON formats: factorization files, cocycle tables, bicharacter
//! files and serialized Hopf algebras.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::builders::{self, BuildError, Bicharacter, CocyclePair};
use crate::exactnum::Cyclotomic;
use crate::hopf::{HopfData, HopfError};
use crate::linalg::{Scalar, SparseVec};
use crate::matchedpair::{MatchedPair, MatchedPairError};
use crate::permgrp::{GroupError, Perm, PermGroup};
use crate::twist::{self, CocycleForm, TwistError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    File { path: String, source: Box<IoError> },
    #[error("cannot read {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    MatchedPair(#[from] MatchedPairError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

impl IoError {
    fn in_file(self, path: &Path) -> IoError {
        match self {
            e @ (IoError::File { .. } | IoError::Read { .. }) => e,
            e => IoError::File { path: path.display().to_string(), source: Box::new(e) },
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn at(text: &str, offset: usize, message: impl Into<String>) -> IoError {
    let (line, column) = line_col(text, offset);
    IoError::Parse { line, column, message: message.into() }
}

fn from_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, IoError> {
    toml::from_str(text).map_err(|e| {
        let off = e.span().map_or(0, |s| s.start);
        at(text, off, e.message().to_string())
    })
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read { path: path.display().to_string(), reason: e.to_string() })
}

fn perms(text: &str, degree: usize, gens: &[Spanned<String>]) -> Result<Vec<Perm>, IoError> {
    gens.iter()
        .map(|s| Perm::parse(s.get_ref(), degree).map_err(|e| at(text, s.span().start, e.to_string())))
        .collect()
}

fn group(text: &str, degree: usize, gens: &[Spanned<String>], cap: usize) -> Result<(Vec<Perm>, PermGroup), IoError> {
    let p = perms(text, degree, gens)?;
    let g = PermGroup::closure_capped(degree, &p, cap)?;
    Ok((p, g))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizationFile {
    degree: usize,
    group: Vec<Spanned<String>>,
    #[serde(rename = "F")]
    f: Vec<Spanned<String>>,
    #[serde(rename = "Gamma")]
    gamma: Vec<Spanned<String>>,
    cocycles: Option<String>,
    description: Option<String>,
}

/// An exact factorization `G = F Gamma`, optionally with cocycle tables.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub mp: MatchedPair,
    pub cocycles: Option<CocyclePair>,
    pub description: String,
}

impl Factorization {
    pub fn build(&self) -> Result<builders::Bicrossed, BuildError> {
        builders::bicrossed(&self.mp, self.cocycles.clone())
    }
}

/// Parse a factorization file. A `cocycles` entry is resolved against
/// `base`.
pub fn parse_factorization(text: &str, base: Option<&Path>, cap: usize) -> Result<Factorization, IoError> {
    let raw: FactorizationFile = from_toml(text)?;
    if raw.degree == 0 {
        return Err(at(text, 0, "degree must be positive"));
    }
    let (_, g) = group(text, raw.degree, &raw.group, cap)?;
    let (_, f) = group(text, raw.degree, &raw.f, cap)?;
    let (_, gamma) = group(text, raw.degree, &raw.gamma, cap)?;
    let mp = MatchedPair::derive(g, f, gamma)?;
    let cocycles = match raw.cocycles {
        None => None,
        Some(rel) => {
            let path = base.map_or_else(|| Path::new(&rel).to_path_buf(), |b| b.join(&rel));
            let t = read(&path)?;
            Some(parse_cocycles(&t, &mp).map_err(|e| e.in_file(&path))?)
        }
    };
    Ok(Factorization { mp, cocycles, description: raw.description.unwrap_or_default() })
}

pub fn load_factorization(path: &Path, cap: usize) -> Result<Factorization, IoError> {
    let text = read(path)?;
    parse_factorization(&text, path.parent(), cap).map_err(|e| e.in_file(path))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    degree: usize,
    gens: Vec<Spanned<String>>,
}

/// A group file: `degree` plus `gens` in cycle notation.
pub fn parse_group(text: &str, cap: usize) -> Result<PermGroup, IoError> {
    let raw: GroupFile = from_toml(text)?;
    Ok(group(text, raw.degree, &raw.gens, cap)?.1)
}

pub fn load_group(path: &Path, cap: usize) -> Result<PermGroup, IoError> {
    let text = read(path)?;
    parse_group(&text, cap).map_err(|e| e.in_file(path))
}

/// Element lookup for cocycle indices: cycle notation, or a `Gamma` name
/// such as `z^2`.
fn element(mp: &MatchedPair, in_gamma: bool, tok: &str) -> Option<usize> {
    let grp = if in_gamma { &mp.gamma } else { &mp.f };
    if let Ok(p) = Perm::parse(tok, grp.degree()) {
        return grp.index_of(&p);
    }
    if in_gamma {
        return (0..grp.order()).find(|&g| mp.gamma_name(g) == tok);
    }
    None
}

/// Cocycle tables, one entry per line:
///
/// ```text
/// sigma[g][x][y] = <scalar>    # g in Gamma, x, y in F
/// tau[x][s][t] = <scalar>      # x in F, s, t in Gamma
/// ```
///
/// Entries not listed are 1; `#` starts a comment.
pub fn parse_cocycles(text: &str, mp: &MatchedPair) -> Result<CocyclePair, IoError> {
    let mut c = CocyclePair::trivial(mp);
    let mut seen = HashSet::new();
    for (ln, raw_line) in text.split('\n').enumerate() {
        let line = raw_line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let err = |col: usize, msg: String| IoError::Parse { line: ln + 1, column: col + 1, message: msg };
        let lead = line.len() - line.trim_start().len();
        let body = &line[lead..];
        let (name, in_gamma) = if body.starts_with("sigma") {
            ("sigma", [true, false, false])
        } else if body.starts_with("tau") {
            ("tau", [false, true, true])
        } else {
            return Err(err(lead, "expected `sigma[..]` or `tau[..]`".into()));
        };
        let mut pos = lead + name.len();
        let mut idx = [0usize; 3];
        for (k, &gam) in in_gamma.iter().enumerate() {
            pos += line[pos..].len() - line[pos..].trim_start().len();
            if !line[pos..].starts_with('[') {
                return Err(err(pos, "expected `[`".into()));
            }
            let close = line[pos..].find(']').map(|c| pos + c).ok_or_else(|| err(pos, "unclosed `[`".into()))?;
            let tok = line[pos + 1..close].trim();
            idx[k] = element(mp, gam, tok).ok_or_else(|| {
                err(pos + 1, format!("`{tok}` is not an element of {}", if gam { "Gamma" } else { "F" }))
            })?;
            pos = close + 1;
        }
        let rest = &line[pos..];
        let eq = rest.find('=').ok_or_else(|| err(pos, "expected `=`".into()))?;
        if !rest[..eq].trim().is_empty() {
            return Err(err(pos, "unexpected text before `=`".into()));
        }
        let vpos = pos + eq + 1;
        let vtext = line[vpos..].trim();
        let vcol = vpos + (line[vpos..].len() - line[vpos..].trim_start().len());
        let v: Cyclotomic = vtext.parse().map_err(|_| err(vcol, format!("cannot parse scalar `{vtext}`")))?;
        if !seen.insert((name, idx)) {
            return Err(err(lead, "duplicate entry".into()));
        }
        match name {
            "sigma" => c.set_sigma(idx[0], idx[1], idx[2], v),
            _ => c.set_tau(idx[0], idx[1], idx[2], v),
        }
    }
    Ok(c)
}

/// Cocycle tables in the text format, listing only entries different from 1.
pub fn format_cocycles(c: &CocyclePair, mp: &MatchedPair) -> String {
    let mut s = String::new();
    let name = |grp: &PermGroup, i: usize| {
        let p = grp.element(i);
        if p.is_identity() {
            "()".to_string()
        } else {
            p.to_string()
        }
    };
    for g in 0..mp.ngamma() {
        for x in 0..mp.nf() {
            for y in 0..mp.nf() {
                if !c.sigma(g, x, y).is_one() {
                    let (a, b, d) = (name(&mp.gamma, g), name(&mp.f, x), name(&mp.f, y));
                    s += &format!("sigma[{a}][{b}][{d}] = {}\n", c.sigma(g, x, y));
                }
            }
        }
    }
    for x in 0..mp.nf() {
        for a in 0..mp.ngamma() {
            for b in 0..mp.ngamma() {
                if !c.tau(x, a, b).is_one() {
                    let (p, q, r) = (name(&mp.f, x), name(&mp.gamma, a), name(&mp.gamma, b));
                    s += &format!("tau[{p}][{q}][{r}] = {}\n", c.tau(x, a, b));
                }
            }
        }
    }
    s
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftFile {
    group: Vec<Spanned<String>>,
    abelian: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BicharacterFile {
    degree: usize,
    gamma: Vec<Spanned<String>>,
    kind: Spanned<String>,
    n: Option<u32>,
    values: Option<Vec<Vec<Spanned<String>>>>,
    description: Option<String>,
    lift: Option<LiftFile>,
}

/// How a bicharacter is specified on generators `t_1, ..., t_r`.
#[derive(Debug, Clone, PartialEq)]
pub enum BicharacterKind {
    /// `sigma(t_i, t_j) = -1` for `i < j`, else 1.
    Triangular,
    /// Two generators `a, b`: `sigma(a^i b^j, a^t b^l) = w^(j t)`, `w` of
    /// order `n`.
    Heisenberg(u32),
    /// Explicit values `sigma(t_i, t_j)`.
    Table(Vec<Vec<Scalar>>),
}

impl BicharacterKind {
    pub fn instantiate(&self, group: &PermGroup, gens: &[Perm]) -> Result<Bicharacter, BuildError> {
        match self {
            BicharacterKind::Triangular => builders::triangular_bicharacter(group, gens),
            BicharacterKind::Heisenberg(n) => match gens {
                [a, b] => builders::heisenberg_bicharacter(group, a, b, *n),
                _ => Err(BuildError::NotBicharacter(format!("needs two generators, found {}", gens.len()))),
            },
            BicharacterKind::Table(t) => {
                if t.len() != gens.len() || t.iter().any(|r| r.len() != gens.len()) {
                    return Err(BuildError::NotBicharacter(format!("table is not {0} x {0}", gens.len())));
                }
                Bicharacter::from_generators(group, gens, t)
            }
        }
    }
}

/// A bicharacter on an abelian group `Gamma`, optionally lifted to a
/// cocycle on `k^G` through `k^G -> k^A`, `A` an abelian subgroup of `G`.
#[derive(Debug, Clone)]
pub struct BicharacterSpec {
    pub kind: BicharacterKind,
    pub gens: Vec<Perm>,
    pub sigma: Bicharacter,
    pub description: String,
    /// `(G, A)`.
    pub lift: Option<(PermGroup, PermGroup)>,
}

impl BicharacterSpec {
    /// The lifted cocycle on `k^G`; the same kind of bicharacter is placed
    /// on the character group of `A`, with generators chosen greedily.
    pub fn lifted(&self) -> Result<Option<CocycleForm>, IoError> {
        let Some((g, a)) = &self.lift else { return Ok(None) };
        let h = builders::function_algebra(g);
        let proj = twist::character_projection(g, a)?;
        let gens = proj.dual_group.greedy_generators();
        let s = self.kind.instantiate(&proj.dual_group, &gens)?;
        Ok(Some(twist::lift_cocycle(&h, &proj.map, &s)?))
    }
}

pub fn parse_bicharacter(text: &str, cap: usize) -> Result<BicharacterSpec, IoError> {
    let raw: BicharacterFile = from_toml(text)?;
    let (gens, gamma) = group(text, raw.degree, &raw.gamma, cap)?;
    let kind = match raw.kind.get_ref().as_str() {
        "triangular" => BicharacterKind::Triangular,
        "heisenberg" => {
            let n = raw.n.ok_or_else(|| at(text, raw.kind.span().start, "`heisenberg` needs `n`"))?;
            if n == 0 {
                return Err(at(text, raw.kind.span().start, "`n` must be positive"));
            }
            BicharacterKind::Heisenberg(n)
        }
        "table" => {
            let rows = raw.values.ok_or_else(|| at(text, raw.kind.span().start, "`table` needs `values`"))?;
            let t = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| {
                            v.get_ref()
                                .parse::<Cyclotomic>()
                                .map_err(|_| at(text, v.span().start, format!("cannot parse scalar `{}`", v.get_ref())))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            BicharacterKind::Table(t)
        }
        other => {
            return Err(at(
                text,
                raw.kind.span().start,
                format!("unknown kind `{other}`, expected triangular, heisenberg or table"),
            ))
        }
    };
    let sigma = kind.instantiate(&gamma, &gens)?;
    let lift = match raw.lift {
        None => None,
        Some(l) => {
            let (_, g) = group(text, raw.degree, &l.group, cap)?;
            let (_, a) = group(text, raw.degree, &l.abelian, cap)?;
            if !a.is_subgroup_of(&g) {
                return Err(at(text, l.abelian.first().map_or(0, |s| s.span().start), "`abelian` is not a subgroup of `group`"));
            }
            Some((g, a))
        }
    };
    Ok(BicharacterSpec { kind, gens, sigma, description: raw.description.unwrap_or_default(), lift })
}

pub fn load_bicharacter(path: &Path, cap: usize) -> Result<BicharacterSpec, IoError> {
    let text = read(path)?;
    parse_bicharacter(&text, cap).map_err(|e| e.in_file(path))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HopfJson {
    dim: usize,
    labels: Vec<String>,
    exponent: u32,
    #[serde(default)]
    note: String,
    unit: Vec<(usize, Cyclotomic)>,
    /// `(i, j, k, c)`: `b_i b_j` has coefficient `c` at `b_k`.
    mult: Vec<(usize, usize, usize, Cyclotomic)>,
    /// `(i, j, k, c)`: `Delta(b_i)` has coefficient `c` at `b_j (x) b_k`.
    comult: Vec<(usize, usize, usize, Cyclotomic)>,
    counit: Vec<(usize, Cyclotomic)>,
    #[serde(default)]
    antipode: Vec<(usize, usize, Cyclotomic)>,
}

pub fn hopf_to_json(h: &HopfData) -> serde_json::Value {
    let n = h.dim;
    let mut mult = Vec::new();
    for (ij, v) in h.mult.iter().enumerate() {
        for (k, c) in v.iter() {
            mult.push((ij / n, ij % n, *k, c.clone()));
        }
    }
    let comult =
        h.comult.iter().enumerate().flat_map(|(i, t)| t.iter().map(move |(j, k, c)| (i, *j, *k, c.clone()))).collect();
    let raw = HopfJson {
        dim: n,
        labels: h.labels.clone(),
        exponent: h.exponent,
        note: h.note.clone(),
        unit: h.unit.entries().to_vec(),
        mult,
        comult,
        counit: h.counit.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        antipode: h.antipode.iter().enumerate().flat_map(|(i, v)| v.iter().map(move |(k, c)| (i, *k, c.clone()))).collect(),
    };
    serde_json::to_value(raw).expect("serializable")
}

fn bounds(n: usize, what: &str, idx: &[usize]) -> Result<(), IoError> {
    match idx.iter().find(|&&i| i >= n) {
        Some(i) => Err(IoError::Json(format!("{what}: index {i} out of range for dimension {n}"))),
        None => Ok(()),
    }
}

/// Load a serialized Hopf algebra. Unless `trust` is set every axiom is
/// re-checked; a missing antipode is solved for.
pub fn hopf_from_json(v: &serde_json::Value, trust: bool) -> Result<HopfData, IoError> {
    let raw: HopfJson = serde_json::from_value(v.clone()).map_err(|e| IoError::Json(e.to_string()))?;
    let n = raw.dim;
    if raw.labels.len() != n {
        return Err(IoError::Json(format!("{} labels for dimension {n}", raw.labels.len())));
    }
    let mut mult = vec![Vec::new(); n * n];
    for (i, j, k, c) in raw.mult {
        bounds(n, "mult", &[i, j, k])?;
        mult[i * n + j].push((k, c));
    }
    let mut comult = vec![Vec::new(); n];
    for (i, j, k, c) in raw.comult {
        bounds(n, "comult", &[i, j, k])?;
        comult[i].push((j, k, c));
    }
    let mut counit = vec![Scalar::zero(); n];
    for (i, c) in raw.counit {
        bounds(n, "counit", &[i])?;
        counit[i] = c;
    }
    for (i, _) in &raw.unit {
        bounds(n, "unit", &[*i])?;
    }
    let mult = mult.into_iter().map(SparseVec::from_pairs).collect();
    let unit = SparseVec::from_pairs(raw.unit);
    let mut h = HopfData::without_antipode(raw.labels, mult, unit, comult, counit, raw.exponent.max(1), raw.note)?;
    if raw.antipode.is_empty() {
        h.antipode = crate::hopf::solve_antipode(&h)?;
    } else {
        let mut s = vec![Vec::new(); n];
        for (i, k, c) in raw.antipode {
            bounds(n, "antipode", &[i, k])?;
            s[i].push((k, c));
        }
        h.antipode = s.into_iter().map(SparseVec::from_pairs).collect();
    }
    if trust {
        Ok(h)
    } else {
        Ok(h.verified()?)
    }
}

pub fn load_hopf(path: &Path, trust: bool) -> Result<HopfData, IoError> {
    let text = read(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }.in_file(path)
    })?;
    hopf_from_json(&v, trust).map_err(|e| e.in_file(path))
}

/// Read a JSON document, reporting syntax errors by line and column.
pub fn load_json(path: &Path) -> Result<serde_json::Value, IoError> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }.in_file(path))
}
