//! Certification and refutation of the quantum permutation property, and
//! quantum permutation envelopes of split extensions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::builders::{self, Bicrossed, BuildError, DrinfeldDouble};
use crate::coideal::{self, CoidealError, NamedKind};
use crate::hopf::{self, HopfData, HopfMap};
use crate::linalg::{self, Scalar, SparseVec};
use crate::magic::{self, MagicCert, MagicError};
use crate::matchedpair::{MatchedPair, Side};
use crate::permgrp::{Perm, PermGroup, SubgroupFilter};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QpaError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("structure mismatch: {0}")]
    StructureMismatch(String),
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Coideal(#[from] CoidealError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "QPA_certified")]
    QpaCertified,
    #[serde(rename = "NOT_QPA_refuted")]
    NotQpaRefuted,
    #[serde(rename = "undecided")]
    Undecided,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::QpaCertified => "QPA_certified",
            Status::NotQpaRefuted => "NOT_QPA_refuted",
            Status::Undecided => "undecided",
        })
    }
}

/// A machine-checkable statement about a bicrossed product. Group elements
/// are written in cycle notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    /// `|Gamma|` is the given prime.
    PrimeOrder { p: usize },
    /// Orbits of `Gamma` on `F` through `|>`, in the stored order.
    LeftOrbits { expected: Vec<Vec<String>> },
    /// Orbits of `F` on `Gamma` through `<|`, with stabilizers.
    RightOrbits { expected: Vec<Vec<String>>, stabilizers: Vec<Vec<String>> },
    /// Stabilizer in `F` of a `Gamma` element under `<|`.
    Stabilizer { gamma: String, expected: Vec<String> },
    /// Largest subgroup of `F` acting trivially on `Gamma`.
    TriviallyActingKernel { expected: Vec<String> },
    /// All abelian `Gamma`-stable subgroups of `F`, as element lists.
    StableAbelianSubgroups { expected: Vec<Vec<String>> },
    /// Every abelian stable subgroup lies in `container`.
    StableAbelianContainedIn { container: Vec<String> },
    /// The subgroup generated by the abelian stable subgroups is proper.
    StableAbelianJoinProper { join: Vec<String> },
    /// Dimensions of the Hopf subalgebras `k^(Gamma/N)` of `k^Gamma`.
    FunctionHopfSubalgebraDims { expected: Vec<usize> },
    /// The `Gamma`-stable, inverse-closed subsets of `F` containing 1 that are
    /// neither inside `container` nor all of `F`.
    SupportCandidates { container: Vec<String>, expected: Vec<Vec<String>> },
    /// With `L` the subgroup of order 2 of `Gamma` and `z` its generator:
    /// for each `1 != x` in `support`, every `f` with
    /// `e_L (f # x) = (f # x) e_L` vanishes at `z`.
    CommutationForcesVanishing { support: Vec<String> },
    /// For each `1 != x` in `support`, `e_z # (z^-1 |> x)` does not commute
    /// with `e_L`.
    TranslateObstructed { support: Vec<String> },
    /// Order statistics of the group of group-likes.
    GroupLikes { order: usize, statistics: Vec<(usize, usize)> },
    /// The group-likes span `k^Gamma # kT`.
    GroupLikeSpan { t: Vec<String> },
    /// Each named coideal subalgebra lies in `kG(H)`.
    NamedInsideGroupLikes { names: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub claim: String,
    #[serde(flatten)]
    pub check: Check,
    pub holds: bool,
}

fn names(g: &PermGroup, idx: impl IntoIterator<Item = usize>) -> Vec<String> {
    idx.into_iter().map(|i| g.element(i).to_string()).collect()
}

fn elements(g: &PermGroup) -> Vec<String> {
    g.elements().iter().map(|p| p.to_string()).collect()
}

fn parse_set(group: &PermGroup, items: &[String]) -> Option<BTreeSet<usize>> {
    items.iter().map(|s| Perm::parse(s, group.degree()).ok().and_then(|p| group.index_of(&p))).collect()
}

fn unique_involution(gamma: &PermGroup) -> Option<usize> {
    let inv: Vec<usize> = (1..gamma.order()).filter(|&g| gamma.mul(g, g) == 0).collect();
    (inv.len() == 1).then(|| inv[0])
}

/// `{g : g <| x in L}`, the set `X` with `(f # x) e_L = f_X # x`.
fn right_translate_set(mp: &MatchedPair, l: &BTreeSet<usize>, x: usize) -> BTreeSet<usize> {
    (0..mp.ngamma()).filter(|&g| l.contains(&mp.act_right(g, x))).collect()
}

fn stable_abelian(mp: &MatchedPair) -> Vec<PermGroup> {
    mp.stable_subgroups(SubgroupFilter::Abelian)
}

fn function_hopf_subalgebra_dims(b: &Bicrossed) -> Option<Vec<usize>> {
    let gamma = &b.mp.gamma;
    let h = builders::function_algebra(gamma);
    let mut dims = Vec::new();
    for n in gamma.subgroups(SubgroupFilter::All) {
        let nidx: BTreeSet<usize> = n.elements().iter().map(|p| gamma.index_of(p).unwrap()).collect();
        // k^(Gamma/N) is only a Hopf subalgebra for N normal; test it directly
        let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
        for g in 0..gamma.order() {
            let c: BTreeSet<usize> = nidx.iter().map(|&m| gamma.mul(g, m)).collect();
            if !cosets.contains(&c) {
                cosets.push(c);
            }
        }
        let basis: Vec<SparseVec> = cosets
            .iter()
            .map(|c| SparseVec::from_pairs(c.iter().map(|&g| (g, Scalar::one())).collect()))
            .collect();
        if h.is_hopf_subalgebra(&basis) {
            dims.push(basis.len());
        }
    }
    dims.sort();
    dims.dedup();
    Some(dims)
}

impl Check {
    /// Re-run the computation behind the statement.
    pub fn evaluate(&self, b: &Bicrossed) -> bool {
        let mp = &b.mp;
        match self {
            Check::PrimeOrder { p } => mp.ngamma() == *p && is_prime(*p),
            Check::LeftOrbits { expected } => {
                let got: Vec<Vec<String>> = mp.orbits(Side::Left).iter().map(|o| names(&mp.f, o.members.clone())).collect();
                &got == expected
            }
            Check::RightOrbits { expected, stabilizers } => {
                let orbits = mp.orbits(Side::Right);
                let got: Vec<Vec<String>> = orbits.iter().map(|o| names(&mp.gamma, o.members.clone())).collect();
                let stabs: Vec<Vec<String>> = orbits.iter().map(|o| elements(&o.stabilizer)).collect();
                &got == expected && &stabs == stabilizers
            }
            Check::Stabilizer { gamma, expected } => {
                match parse_set(&mp.gamma, std::slice::from_ref(gamma)) {
                    Some(s) => {
                        let g = *s.iter().next().unwrap();
                        &elements(&mp.stabilizer_in_f(g)) == expected
                    }
                    None => false,
                }
            }
            Check::TriviallyActingKernel { expected } => &elements(&mp.trivially_acting_kernel()) == expected,
            Check::StableAbelianSubgroups { expected } => {
                let got: Vec<Vec<String>> = stable_abelian(mp).iter().map(elements).collect();
                &got == expected
            }
            Check::StableAbelianContainedIn { container } => match parse_set(&mp.f, container) {
                Some(c) => stable_abelian(mp).iter().all(|t| t.elements().iter().all(|p| c.contains(&mp.f.index_of(p).unwrap()))),
                None => false,
            },
            Check::StableAbelianJoinProper { join } => {
                let j = mp.f.generated_subgroup(&stable_abelian(mp));
                &elements(&j) == join && j.order() < mp.f.order()
            }
            Check::FunctionHopfSubalgebraDims { expected } => function_hopf_subalgebra_dims(b).as_ref() == Some(expected),
            Check::SupportCandidates { container, expected } => {
                let Some(c) = parse_set(&mp.f, container) else { return false };
                let got: Vec<Vec<String>> = support_candidates(mp, &c).into_iter().map(|s| names(&mp.f, s)).collect();
                &got == expected
            }
            Check::CommutationForcesVanishing { support } => {
                let (Some(z), Some(s)) = (unique_involution(&mp.gamma), parse_set(&mp.f, support)) else {
                    return false;
                };
                let l: BTreeSet<usize> = [0, z].into_iter().collect();
                s.iter().filter(|&&x| x != 0).all(|&x| {
                    // f |-> f_L - f_X as a linear map on k^Gamma; its kernel
                    let xs = right_translate_set(mp, &l, x);
                    let cols: Vec<SparseVec> = (0..mp.ngamma())
                        .map(|g| {
                            let c = i64::from(l.contains(&g)) - i64::from(xs.contains(&g));
                            if c == 0 {
                                SparseVec::new()
                            } else {
                                SparseVec::single(g, Scalar::from_int(c))
                            }
                        })
                        .collect();
                    linalg::column_kernel(&cols).iter().all(|f| f.get(z).is_zero())
                })
            }
            Check::TranslateObstructed { support } => {
                let (Some(z), Some(s)) = (unique_involution(&mp.gamma), parse_set(&mp.f, support)) else {
                    return false;
                };
                let l: BTreeSet<usize> = [0, z].into_iter().collect();
                s.iter().filter(|&&x| x != 0).all(|&x| {
                    let y = mp.act_left(mp.gamma.inv(z), x);
                    // e_L (e_z # y) = e_z # y, while (e_z # y) e_L = (e_z)_X # y
                    let lhs = b.hopf.mul(&b.element(&indicator(mp.ngamma(), &l), 0), &SparseVec::unit(b.index(z, y)));
                    let rhs = b.hopf.mul(&SparseVec::unit(b.index(z, y)), &b.element(&indicator(mp.ngamma(), &l), 0));
                    lhs != rhs && !right_translate_set(mp, &l, y).contains(&z)
                })
            }
            Check::GroupLikes { order, statistics } => match b.grouplikes_split() {
                Ok(gl) => gl.order() == *order && &gl.order_statistics() == statistics,
                Err(_) => false,
            },
            Check::GroupLikeSpan { t } => {
                let (Ok(gl), Some(ts)) = (b.grouplikes_split(), parse_set(&mp.f, t)) else { return false };
                let want: Vec<SparseVec> = ts
                    .iter()
                    .flat_map(|&x| (0..mp.ngamma()).map(move |g| (g, x)))
                    .map(|(g, x)| SparseVec::unit(b.index(g, x)))
                    .collect();
                same_span(&gl.elements, &want)
            }
            Check::NamedInsideGroupLikes { names } => {
                let Ok(gl) = b.grouplikes_split() else { return false };
                let named = named_coideals(b);
                let got: Vec<String> = named.iter().map(|c| c.name.clone()).collect();
                &got == names && named.iter().all(|c| c.is_contained_in(&gl.elements))
            }
        }
    }
}

fn indicator(n: usize, s: &BTreeSet<usize>) -> Vec<Scalar> {
    (0..n).map(|i| if s.contains(&i) { Scalar::one() } else { Scalar::zero() }).collect()
}

fn same_span(a: &[SparseVec], b: &[SparseVec]) -> bool {
    let ra = linalg::rank(a);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    ra == linalg::rank(b) && linalg::rank(&all) == ra
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Unions of `|>`-orbits containing 1, closed under inverses, not inside
/// `container` and different from `F`.
fn support_candidates(mp: &MatchedPair, container: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let orbits = mp.orbits(Side::Left);
    let rest: Vec<&Vec<usize>> = orbits.iter().map(|o| &o.members).filter(|m| !m.contains(&0)).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << rest.len()) {
        let mut s: BTreeSet<usize> = [0].into_iter().collect();
        for (i, m) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.extend(m.iter().copied());
            }
        }
        let inv_closed = s.iter().all(|&x| s.contains(&mp.f.inv(x)));
        if inv_closed && !s.is_subset(container) && s.len() < mp.nf() {
            out.push(s.into_iter().collect());
        }
    }
    out
}

/// The named coideal subalgebras available in a split extension: `1 # kT`
/// for abelian stable `T`, `X(T)` and `L^x` when `<|` is trivial, and
/// `kG(H)`.
pub fn named_coideals(b: &Bicrossed) -> Vec<coideal::CoidealSub> {
    let mp = &b.mp;
    let mut out = Vec::new();
    for t in stable_abelian(mp) {
        if let Ok(c) = coideal::construct_named(b, &NamedKind::OneKT(t)) {
            out.push(c);
        }
    }
    if mp.right_trivial() {
        for t in mp.f.subgroups(SubgroupFilter::Abelian) {
            if let Ok(c) = coideal::construct_named(b, &NamedKind::XT(t)) {
                out.push(c);
            }
        }
        for x in 0..mp.nf() {
            if let Ok(c) = coideal::construct_named(b, &NamedKind::Lx(x)) {
                out.push(c);
            }
        }
    }
    if let Ok(c) = coideal::construct_named(b, &NamedKind::KGH) {
        out.push(c);
    }
    out
}

/// The commutative members of [`named_coideals`].
pub fn named_commutative(b: &Bicrossed) -> Vec<coideal::CoidealSub> {
    named_coideals(b).into_iter().filter(|c| c.commutative).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound {
    pub value: usize,
    pub derivation: String,
    /// The coarse bound the construction is known to satisfy.
    pub coarse: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Envelope {
    pub basis: Vec<SparseVec>,
    pub dim: usize,
    pub description: String,
    pub cocommutative: bool,
    pub grouplikes: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub dim: usize,
    pub method: String,
    pub certificate: Option<MagicCert>,
    pub degree_bound: Option<DegreeBound>,
    pub refutation: Option<Vec<Assertion>>,
    pub envelope: Option<Envelope>,
}

impl Verdict {
    fn new(status: Status, dim: usize, method: &str) -> Self {
        Verdict {
            status,
            dim,
            method: method.into(),
            certificate: None,
            degree_bound: None,
            refutation: None,
            envelope: None,
        }
    }

    /// Re-evaluate every logged assertion.
    pub fn replay(&self, b: &Bicrossed) -> bool {
        self.refutation.as_ref().is_none_or(|log| log.iter().all(|a| a.check.evaluate(b) == a.holds && a.holds))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "status": self.status,
            "dim": self.dim,
            "method": self.method,
        });
        if let Some(c) = &self.certificate {
            v["certificate"] = c.to_json();
        }
        if let Some(d) = &self.degree_bound {
            v["degree_bound"] = serde_json::to_value(d).unwrap();
        }
        if let Some(r) = &self.refutation {
            v["refutation"] = serde_json::to_value(r).unwrap();
        }
        if let Some(e) = &self.envelope {
            v["envelope"] = serde_json::json!({
                "dim": e.dim,
                "description": e.description,
                "cocommutative": e.cocommutative,
                "grouplikes": e.grouplikes,
                "basis": e.basis.iter().map(|b| b.iter().map(|(i, c)| (*i, c.to_string())).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("status: {}\ndim: {}\nmethod: {}\n", self.status, self.dim, self.method);
        if let Some(c) = &self.certificate {
            s += &format!(
                "certificate: degree {}, generated dimension {}, full {}\n",
                c.size, c.generated_dim, c.is_full_certificate
            );
        }
        if let Some(d) = &self.degree_bound {
            s += &format!("degree bound: {}\n", d.derivation);
        }
        if let Some(r) = &self.refutation {
            s += "proof log:\n";
            for a in r {
                s += &format!("  [{}] {}\n", if a.holds { "ok" } else { "FAILED" }, a.claim);
            }
        }
        if let Some(e) = &self.envelope {
            s += &format!("envelope: dim {}, cocommutative {}, {}\n", e.dim, e.cocommutative, e.description);
        }
        s
    }
}

fn assertion(b: &Bicrossed, claim: String, check: Check) -> Assertion {
    let holds = check.evaluate(b);
    Assertion { claim, check, holds }
}

fn gens_line(g: &PermGroup) -> String {
    let gens: Vec<String> = g.greedy_generators().iter().map(|p| p.to_string()).collect();
    if gens.is_empty() {
        "1".into()
    } else {
        format!("<{}>", gens.join(", "))
    }
}

/// Cayley block for `k^Gamma` pushed into the bicrossed product.
fn gamma_cayley(b: &Bicrossed) -> Result<MagicCert, QpaError> {
    let kg = b.gamma_function_algebra();
    let c = magic::cayley_magic(&kg, &b.mp.gamma)?;
    Ok(c.embed(&b.iota(), &b.hopf, "k^Gamma # 1")?)
}

/// `L^x = k^Gamma # <x>` for `x` in a greedy generating set of `F`, plus a
/// Cayley block for `k^Gamma`. Requires `<|` trivial.
pub fn certify_central(b: &Bicrossed) -> Result<Verdict, QpaError> {
    let mp = &b.mp;
    if !mp.right_trivial() {
        return Err(QpaError::PreconditionViolated("<| is not trivial, k^Gamma is not central".into()));
    }
    let ng = mp.ngamma();
    if ng == 1 {
        // H = kF with the same basis order
        let cert = magic::group_algebra_certificate(&b.hopf, &mp.f)?.full()?;
        let derivation = cert.degree_line();
        let mut v = Verdict::new(Status::QpaCertified, b.hopf.dim, "trivial Gamma: Fourier blocks");
        v.degree_bound = Some(DegreeBound { value: cert.size, derivation, coarse: Some(mp.nf() * mp.nf()) });
        v.certificate = Some(cert);
        return Ok(v);
    }
    let mut blocks = vec![gamma_cayley(b)?];
    let mut terms = Vec::new();
    for x in mp.f.greedy_generators() {
        let xi = mp.f.index_of(&x).unwrap();
        let l = coideal::construct_named(b, &NamedKind::Lx(xi))?;
        blocks.push(coideal::coefficient_matrix(&b.hopf, &l)?);
        terms.push(x.order());
    }
    let cert = magic::block_compose(&b.hopf, &blocks)?.full()?;
    let nf = mp.nf();
    let coarse = ng * nf * nf;
    let derivation = format!(
        "|Gamma| + sum_x |Gamma||x| = {ng} + {ng}*({}) = {} <= |Gamma||F|^2 = {coarse}",
        if terms.is_empty() { "0".to_string() } else { terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("+") },
        cert.size
    );
    let mut v = Verdict::new(Status::QpaCertified, b.hopf.dim, "central extension");
    v.degree_bound = Some(DegreeBound { value: cert.size, derivation, coarse: Some(coarse) });
    v.certificate = Some(cert);
    Ok(v)
}

/// Abelian `Gamma`-stable subgroups, taken largest first, until they
/// generate `F`.
fn generating_stable_abelian(mp: &MatchedPair) -> Option<Vec<PermGroup>> {
    let mut cands = stable_abelian(mp);
    cands.sort_by(|a, b| b.order().cmp(&a.order()));
    let mut chosen: Vec<PermGroup> = Vec::new();
    let mut cur = PermGroup::trivial(mp.f.degree());
    for t in cands {
        if t.is_subgroup_of(&cur) {
            continue;
        }
        chosen.push(t);
        cur = mp.f.generated_subgroup(&chosen);
        if cur.order() == mp.f.order() {
            return Some(chosen);
        }
    }
    (cur.order() == mp.f.order()).then_some(chosen)
}

/// Right coideal subalgebras `1 # kT_i` for abelian stable subgroups
/// generating `F`, plus a Cayley block for `k^Gamma`.
pub fn certify_split_abelian(b: &Bicrossed) -> Result<Verdict, QpaError> {
    if !b.is_split() {
        return Err(QpaError::PreconditionViolated("cocycles are not trivial".into()));
    }
    let mp = &b.mp;
    let Some(ts) = generating_stable_abelian(mp) else {
        let mut v = Verdict::new(Status::Undecided, b.hopf.dim, "split extension, stable abelian subgroups");
        let join = mp.f.generated_subgroup(&stable_abelian(mp));
        v.method = format!(
            "criterion not met: abelian stable subgroups generate a subgroup of order {} in F of order {}",
            join.order(),
            mp.f.order()
        );
        return Ok(v);
    };
    let ng = mp.ngamma();
    let mut blocks = vec![gamma_cayley(b)?];
    for t in &ts {
        let r = coideal::construct_named(b, &NamedKind::OneKT(t.clone()))?;
        blocks.push(coideal::coefficient_matrix(&b.hopf, &r)?);
    }
    let cert = magic::block_compose(&b.hopf, &blocks)?.full()?;
    let nf = mp.nf();
    let coarse = ng * nf * nf;
    let sizes: Vec<String> = ts.iter().map(|t| t.order().to_string()).collect();
    let derivation = format!(
        "|Gamma| + sum_i |T_i| = {ng} + {} = {} <= |Gamma||F|^2 = {coarse}; T_i = {}",
        sizes.join("+"),
        cert.size,
        ts.iter().map(gens_line).collect::<Vec<_>>().join(", ")
    );
    let mut v = Verdict::new(Status::QpaCertified, b.hopf.dim, "split extension, stable abelian subgroups");
    v.degree_bound = Some(DegreeBound { value: cert.size, derivation, coarse: Some(coarse) });
    v.certificate = Some(cert);
    Ok(v)
}

/// For `|Gamma| = p` prime: if the abelian stable subgroups of `F` do not
/// generate `F` and no nontrivial subgroup of `F` acts trivially on
/// `Gamma`, `H` is not a quantum permutation algebra.
pub fn refute_prime(b: &Bicrossed) -> Result<Verdict, QpaError> {
    let mp = &b.mp;
    let p = mp.ngamma();
    if !is_prime(p) {
        return Err(QpaError::PreconditionViolated(format!("|Gamma| = {p} is not prime")));
    }
    if !b.is_split() {
        return Err(QpaError::PreconditionViolated("cocycles are not trivial".into()));
    }
    let mut log = vec![assertion(b, format!("|Gamma| = {p} is prime"), Check::PrimeOrder { p })];
    log.push(assertion(
        b,
        format!("Hopf subalgebras of k^Gamma have dimensions 1 and {p}, so R meets k^Gamma in k1 or k^Gamma"),
        Check::FunctionHopfSubalgebraDims { expected: vec![1, p] },
    ));
    let kernel = mp.trivially_acting_kernel();
    log.push(assertion(
        b,
        format!("the largest subgroup of F acting trivially on Gamma has order {}", kernel.order()),
        Check::TriviallyActingKernel { expected: elements(&kernel) },
    ));
    let stable = stable_abelian(mp);
    log.push(assertion(
        b,
        format!(
            "abelian Gamma-stable subgroups of F: {}",
            stable.iter().map(gens_line).collect::<Vec<_>>().join(", ")
        ),
        Check::StableAbelianSubgroups { expected: stable.iter().map(elements).collect() },
    ));
    let join = mp.f.generated_subgroup(&stable);
    let join_name = if join.is_cyclic() {
        let gens: Vec<String> = join
            .elements()
            .iter()
            .filter(|e| e.order() == join.order())
            .map(|e| format!("<{e}>"))
            .collect();
        gens.join(" = ")
    } else {
        gens_line(&join)
    };
    log.push(assertion(
        b,
        format!("all abelian Gamma-stable subgroups of F are contained in {join_name}"),
        Check::StableAbelianContainedIn { container: elements(&join) },
    ));
    let proper = join.order() < mp.f.order();
    log.push(assertion(
        b,
        format!(
            "they generate {join_name} of order {}, {} F of order {}",
            join.order(),
            if proper { "a proper subgroup of" } else { "all of" },
            mp.f.order()
        ),
        Check::StableAbelianJoinProper { join: elements(&join) },
    ));
    let refuted = kernel.order() == 1 && proper && log.iter().all(|a| a.holds);
    let mut v = Verdict::new(
        if refuted { Status::NotQpaRefuted } else { Status::Undecided },
        b.hopf.dim,
        "prime order Gamma, stable abelian subgroups",
    );
    v.refutation = Some(log);
    Ok(v)
}

/// The step-by-step argument for `k^(C_4) # kS_3`.
pub fn refute_c4_s3(b: &Bicrossed) -> Result<Verdict, QpaError> {
    let mp = &b.mp;
    if !(mp.ngamma() == 4 && mp.gamma.is_cyclic()) {
        return Err(QpaError::StructureMismatch("Gamma is not cyclic of order 4".into()));
    }
    if !(mp.nf() == 6 && !mp.f.is_abelian()) {
        return Err(QpaError::StructureMismatch("F is not isomorphic to S_3".into()));
    }
    if mp.g.order() != 24 || !b.is_split() {
        return Err(QpaError::StructureMismatch("not the split extension attached to S_4 = C_4 S_3".into()));
    }
    let mut log = Vec::new();
    let orbits = mp.orbits(Side::Left);
    let orbit_names: Vec<Vec<String>> = orbits.iter().map(|o| names(&mp.f, o.members.clone())).collect();
    let sizes: Vec<usize> = orbits.iter().map(|o| o.members.len()).collect();
    if sizes != [1, 1, 4] {
        return Err(QpaError::StructureMismatch(format!("orbit sizes {sizes:?}")));
    }
    log.push(assertion(
        b,
        format!(
            "the orbits of Gamma on F are {}",
            orbit_names.iter().map(|o| format!("{{{}}}", o.join(", "))).collect::<Vec<_>>().join(", ")
        ),
        Check::LeftOrbits { expected: orbit_names.clone() },
    ));
    let stable = stable_abelian(mp);
    log.push(assertion(
        b,
        format!("abelian Gamma-stable subgroups of F: {}", stable.iter().map(gens_line).collect::<Vec<_>>().join(", ")),
        Check::StableAbelianSubgroups { expected: stable.iter().map(elements).collect() },
    ));
    let t0 = stable.last().cloned().unwrap_or_else(|| PermGroup::trivial(mp.f.degree()));
    log.push(assertion(
        b,
        "Hopf subalgebras of k^Gamma have dimensions 1, 2, 4".into(),
        Check::FunctionHopfSubalgebraDims { expected: vec![1, 2, 4] },
    ));
    log.push(assertion(
        b,
        "only the trivial subgroup of F acts trivially on Gamma, so R_1 = k^Gamma forces T = 1".into(),
        Check::TriviallyActingKernel { expected: vec![Perm::identity(mp.f.degree()).to_string()] },
    ));
    let z = unique_involution(&mp.gamma).expect("cyclic of order 4");
    let fz = mp.stabilizer_in_f(z);
    log.push(assertion(
        b,
        format!("the stabilizer of {} in F is {}", mp.gamma_name(z), gens_line(&fz)),
        Check::Stabilizer { gamma: mp.gamma.element(z).to_string(), expected: elements(&fz) },
    ));
    let cands = support_candidates(mp, &t0.elements().iter().map(|p| mp.f.index_of(p).unwrap()).collect());
    let cand_names: Vec<Vec<String>> = cands.iter().map(|s| names(&mp.f, s.clone())).collect();
    log.push(assertion(
        b,
        format!(
            "a support not inside {} must be {}",
            gens_line(&t0),
            cand_names.iter().map(|s| format!("{{{}}}", s.join(", "))).collect::<Vec<_>>().join(" or ")
        ),
        Check::SupportCandidates { container: elements(&t0), expected: cand_names.clone() },
    ));
    for s in &cand_names {
        log.push(assertion(
            b,
            format!("on that support, commuting with e_L forces f({}) = 0 in every R_x, x != 1", mp.gamma_name(z)),
            Check::CommutationForcesVanishing { support: s.clone() },
        ));
        log.push(assertion(
            b,
            format!(
                "with t = {}, for x != 1 in T, e_t # (t^-1 |> x) cannot commute with e_L: contradiction",
                mp.gamma_name(z)
            ),
            Check::TranslateObstructed { support: s.clone() },
        ));
    }
    let gl = b.grouplikes_split()?;
    log.push(assertion(
        b,
        format!("G(H) has order {} with element orders {:?}", gl.order(), gl.order_statistics()),
        Check::GroupLikes { order: gl.order(), statistics: gl.order_statistics() },
    ));
    log.push(assertion(
        b,
        format!("kG(H) = k^Gamma # k{}", gens_line(&t0)),
        Check::GroupLikeSpan { t: elements(&t0) },
    ));
    let named: Vec<String> = named_coideals(b).into_iter().map(|c| c.name).collect();
    log.push(assertion(
        b,
        format!("the named coideal subalgebras {} lie in kG(H)", named.join(", ")),
        Check::NamedInsideGroupLikes { names: named },
    ));
    let ok = log.iter().all(|a| a.holds) && gl.order() < b.hopf.dim;
    let mut v = Verdict::new(
        if ok { Status::NotQpaRefuted } else { Status::Undecided },
        b.hopf.dim,
        "every commutative right coideal subalgebra lies in kG(H)",
    );
    v.refutation = Some(log);
    if ok {
        v.envelope = Some(grouplike_envelope(b)?);
    }
    Ok(v)
}

fn is_cocommutative_span(h: &HopfData, basis: &[SparseVec]) -> bool {
    let n = h.dim;
    basis.iter().all(|v| {
        let d = h.comul(v);
        let flipped = SparseVec::from_pairs(d.iter().map(|(i, c)| ((i % n) * n + i / n, c.clone())).collect());
        d == flipped
    })
}

fn bicrossed_span(b: &Bicrossed, t: &PermGroup) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for p in t.elements() {
        let x = b.mp.f.index_of(p).expect("subgroup of F");
        out.extend((0..b.mp.ngamma()).map(|g| SparseVec::unit(b.index(g, x))));
    }
    out
}

/// `kG(H)` as an envelope, when the refutation shows every commutative
/// coideal subalgebra lies in it.
pub fn grouplike_envelope(b: &Bicrossed) -> Result<Envelope, QpaError> {
    let gl = b.grouplikes_split()?;
    let basis = hopf::subalgebra_span_growth(&b.hopf, &gl.elements);
    if !b.hopf.is_hopf_subalgebra(&basis) {
        return Err(QpaError::StructureMismatch("group-likes do not span a Hopf subalgebra".into()));
    }
    Ok(Envelope {
        dim: basis.len(),
        cocommutative: is_cocommutative_span(&b.hopf, &basis),
        description: format!("kG(H), |G(H)| = {}", gl.order()),
        grouplikes: Some(gl.order()),
        basis,
    })
}

/// `|Gamma| = p` prime: the envelope is generated by `k^Gamma # kF'` and
/// `k^Gamma # kF''`, with `F'` the trivially acting kernel and `F''` the join
/// of the abelian stable subgroups.
pub fn envelope_split_prime(b: &Bicrossed) -> Result<Verdict, QpaError> {
    let mp = &b.mp;
    if !is_prime(mp.ngamma()) || !b.is_split() {
        return Err(QpaError::PreconditionViolated("needs a split extension with |Gamma| prime".into()));
    }
    let f1 = mp.trivially_acting_kernel();
    let f2 = mp.f.generated_subgroup(&stable_abelian(mp));
    let mut seed = bicrossed_span(b, &f1);
    seed.extend(bicrossed_span(b, &f2));
    let basis = hopf::subalgebra_span_growth(&b.hopf, &seed);
    if !b.hopf.is_hopf_subalgebra(&basis) {
        return Err(QpaError::StructureMismatch("envelope is not a Hopf subalgebra".into()));
    }
    let gl = b.grouplikes_split()?;
    let inside = gl.elements.iter().filter(|g| linalg::rank(&[basis.clone(), vec![(*g).clone()]].concat()) == basis.len()).count();
    let cocommutative = is_cocommutative_span(&b.hopf, &basis);
    let env = Envelope {
        dim: basis.len(),
        description: format!(
            "generated by k^Gamma # kF' and k^Gamma # kF'', |F'| = {}, F'' = {}{}",
            f1.order(),
            gens_line(&f2),
            if cocommutative && inside == basis.len() { format!(", = kG with |G| = {inside}") } else { String::new() }
        ),
        cocommutative,
        grouplikes: Some(inside),
        basis,
    };
    let status = if env.dim == b.hopf.dim { Status::QpaCertified } else { Status::NotQpaRefuted };
    let mut v = Verdict::new(status, b.hopf.dim, "quantum permutation envelope, prime case");
    v.envelope = Some(env);
    Ok(v)
}

/// Ways a Hopf algebra can be handed to the pipeline.
#[derive(Debug, Clone)]
pub enum Presentation {
    FunctionAlgebra(PermGroup),
    GroupAlgebra(PermGroup),
    Bicrossed(Bicrossed),
    Double(DrinfeldDouble),
    DualDouble(DrinfeldDouble),
}

impl Presentation {
    pub fn hopf(&self) -> HopfData {
        match self {
            Presentation::FunctionAlgebra(g) => builders::function_algebra(g),
            Presentation::GroupAlgebra(g) => builders::group_algebra(g),
            Presentation::Bicrossed(b) => b.hopf.clone(),
            Presentation::Double(d) => d.double.clone(),
            Presentation::DualDouble(d) => d.dual.clone(),
        }
    }
}

fn certified(dim: usize, method: &str, cert: MagicCert, derivation: String, coarse: Option<usize>) -> Verdict {
    let mut v = Verdict::new(Status::QpaCertified, dim, method);
    v.degree_bound = Some(DegreeBound { value: cert.size, derivation, coarse });
    v.certificate = Some(cert);
    v
}

/// Certify `D(G)` from Fourier blocks for `kG` and the Cayley matrix of
/// `k^G`.
pub fn certify_double(d: &DrinfeldDouble) -> Result<Verdict, QpaError> {
    let g = &d.group;
    let kg = builders::group_algebra(g);
    let fun = builders::function_algebra(g);
    let cg = magic::group_algebra_certificate(&kg, g)?;
    let cf = magic::cayley_magic(&fun, g)?;
    let cert = magic::double_magic(d, &cg, &cf)?;
    let n = g.order();
    let derivation = format!("{} + {} = {} <= |G|(1+|G|) = {}", cg.size, cf.size, cert.size, n * (n + 1));
    Ok(certified(d.double.dim, "Drinfeld double", cert, derivation, Some(n * (n + 1))))
}

/// Certify `D(G)^*` through its central bicrossed presentation and carry
/// the certificate back to the dual basis.
pub fn certify_dual_double(d: &DrinfeldDouble) -> Result<Verdict, QpaError> {
    let (b, perm) = d.dual_as_bicrossed()?;
    if !d.dual.permuted(&perm).same_structure(&b.hopf) {
        return Err(QpaError::StructureMismatch("bicrossed presentation differs from D(G)^*".into()));
    }
    let mut v = certify_central(&b)?;
    let cert = v.certificate.take().expect("certified");
    let map = HopfMap::new(b.hopf.dim, d.dual.dim, perm.iter().map(|&i| SparseVec::unit(i)).collect());
    let cert = cert.embed(&map, &d.dual, "D(G)^*")?.full()?;
    let n = d.group.order();
    if let Some(db) = v.degree_bound.as_mut() {
        db.derivation = format!("{}; |G|^3 = {}", db.derivation, n * n * n);
    }
    v.certificate = Some(cert);
    v.method = "central extension k^G -> D(G)^* -> kG".into();
    v.dim = d.dual.dim;
    Ok(v)
}

/// Try the available methods in a fixed order.
pub fn full_pipeline(p: &Presentation) -> Result<Verdict, QpaError> {
    match p {
        Presentation::FunctionAlgebra(g) => {
            let h = builders::function_algebra(g);
            let cert = magic::cayley_magic(&h, g)?.full()?;
            let derivation = format!("|G| = {}", g.order());
            Ok(certified(h.dim, "commutative: Cayley matrix", cert, derivation, Some(g.order())))
        }
        Presentation::GroupAlgebra(g) => {
            let h = builders::group_algebra(g);
            let cert = magic::group_algebra_certificate(&h, g)?.full()?;
            let derivation = cert.degree_line();
            Ok(certified(h.dim, "cocommutative: Fourier blocks", cert, derivation, None))
        }
        Presentation::Double(d) => certify_double(d),
        Presentation::DualDouble(d) => certify_dual_double(d),
        Presentation::Bicrossed(b) => {
            if b.mp.right_trivial() {
                if let Ok(v) = certify_central(b) {
                    return Ok(v);
                }
            }
            if b.is_split() {
                let v = certify_split_abelian(b)?;
                if v.status == Status::QpaCertified {
                    return Ok(v);
                }
                if is_prime(b.mp.ngamma()) {
                    let mut r = refute_prime(b)?;
                    if r.status == Status::NotQpaRefuted {
                        r.envelope = envelope_split_prime(b)?.envelope;
                        return Ok(r);
                    }
                }
                if let Ok(r) = refute_c4_s3(b) {
                    if r.status == Status::NotQpaRefuted {
                        return Ok(r);
                    }
                }
                return Ok(v);
            }
            Ok(Verdict::new(Status::Undecided, b.hopf.dim, "no applicable criterion"))
        }
    }
}

/// The quantum permutation envelope when one of the methods determines it:
/// all of `H` when certified, the prime-case envelope, or the envelope
/// attached to a refutation. `None` when undecided.
pub fn envelope(b: &Bicrossed) -> Result<Option<Envelope>, QpaError> {
    if b.is_split() && is_prime(b.mp.ngamma()) {
        return Ok(envelope_split_prime(b)?.envelope);
    }
    let v = full_pipeline(&Presentation::Bicrossed(b.clone()))?;
    Ok(match v.status {
        Status::QpaCertified => {
            let h = &b.hopf;
            Some(Envelope {
                basis: (0..h.dim).map(SparseVec::unit).collect(),
                dim: h.dim,
                description: "H itself (certified)".into(),
                cocommutative: h.is_cocommutative(),
                grouplikes: None,
            })
        }
        Status::NotQpaRefuted => v.envelope,
        Status::Undecided => None,
    })
}
