//! Coideal subalgebras: verification, primitive idempotents, coefficient
//! matrices, named constructions inside bicrossed products and the grading of
//! right coideal subalgebras of split extensions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::builders::Bicrossed;
use crate::exactnum::Cyclotomic;
use crate::hopf::HopfData;
use crate::linalg::{self, Echelon, Insert, Scalar, SparseVec, SubspaceCoords};
use crate::magic::{self, MagicCert, MagicError, Provenance};
use crate::permgrp::PermGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoidealError {
    #[error("basis vectors are linearly dependent")]
    Dependent,
    #[error("not closed under product: {0} * {1}")]
    NotClosed(String, String),
    #[error("unit not in the subspace")]
    MissingUnit,
    #[error("not a coideal at {0}")]
    NotCoideal(String),
    #[error("not a right coideal subalgebra")]
    NotRightCoideal,
    #[error("subalgebra is not commutative and separable")]
    NotCommutativeSeparable,
    #[error("an eigenvalue of {0} is not a root of unity of order dividing {1} (nor zero)")]
    EigenvalueOutsideCyclotomic(String, u32),
    #[error("coefficient matrix is not magic: {0}")]
    MagicRelationFailure(MagicError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoidealSide {
    Left,
    Right,
}

#[derive(Debug, Clone)]
pub struct CoidealSub {
    pub side: CoidealSide,
    /// The spanning vectors as supplied; idempotent splitting uses these.
    pub basis: Vec<SparseVec>,
    pub name: String,
    pub is_subalgebra: bool,
    pub is_coideal: bool,
    pub commutative: bool,
    pub separable: bool,
}

impl CoidealSub {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, h: &HopfData) -> SubspaceCoords {
        SubspaceCoords::new(h.dim, &self.basis).expect("independent basis")
    }

    pub fn contains(&self, h: &HopfData, v: &SparseVec) -> bool {
        self.coords(h).contains(v)
    }

    /// Every vector of `self` lies in the span of `other`.
    pub fn is_contained_in(&self, other: &[SparseVec]) -> bool {
        let mut ech = Echelon::new();
        for v in other {
            ech.insert(v);
        }
        self.basis.iter().all(|v| ech.contains(v))
    }
}

/// Verify that `basis` spans a coideal subalgebra on the given side and
/// compute its flags. Separability is decided by nondegeneracy of the trace
/// form of the regular representation.
pub fn check(h: &HopfData, basis: Vec<SparseVec>, side: CoidealSide, name: &str) -> Result<CoidealSub, CoidealError> {
    let sc = SubspaceCoords::new(h.dim, &basis).ok_or(CoidealError::Dependent)?;
    if !sc.contains(&h.unit) {
        return Err(CoidealError::MissingUnit);
    }
    let m = basis.len();
    // structure constants in the given basis
    let mut table: Vec<SparseVec> = Vec::with_capacity(m * m);
    for a in &basis {
        for b in &basis {
            let p = h.mul(a, b);
            let c = sc.coords(&p).ok_or_else(|| CoidealError::NotClosed(h.format(a), h.format(b)))?;
            table.push(c);
        }
    }
    for v in &basis {
        let delta = h.comul(v);
        let mut parts: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
        for (idx, c) in delta.iter() {
            let (p, q) = (idx / h.dim, idx % h.dim);
            match side {
                CoidealSide::Left => parts.entry(p).or_default().push((q, c.clone())),
                CoidealSide::Right => parts.entry(q).or_default().push((p, c.clone())),
            }
        }
        if parts.into_values().any(|t| !sc.contains(&SparseVec::from_pairs(t))) {
            return Err(CoidealError::NotCoideal(h.format(v)));
        }
    }
    let commutative = (0..m).all(|i| (i + 1..m).all(|j| table[i * m + j] == table[j * m + i]));
    // trace of left multiplication by b_k on the subalgebra
    let traces: Vec<Scalar> = (0..m)
        .map(|k| (0..m).fold(Scalar::zero(), |acc, i| &acc + &table[k * m + i].get(i)))
        .collect();
    let gram: Vec<SparseVec> = (0..m)
        .map(|i| {
            SparseVec::from_dense(
                &(0..m).map(|j| table[i * m + j].dot(&traces)).collect::<Vec<_>>(),
            )
        })
        .collect();
    let separable = linalg::rank(&gram) == m;
    Ok(CoidealSub {
        side,
        basis,
        name: name.to_string(),
        is_subalgebra: true,
        is_coideal: true,
        commutative,
        separable,
    })
}

/// Minimal polynomial of `x` in the unital algebra `e H e` (monic,
/// coefficients from constant term up).
fn min_poly(h: &HopfData, e: &SparseVec, x: &SparseVec) -> Vec<Scalar> {
    let mut powers = vec![e.clone()];
    let mut ech = Echelon::new();
    ech.insert(e);
    loop {
        let next = h.mul(powers.last().unwrap(), x);
        if let Insert::Independent(_) = ech.insert(&next) {
            powers.push(next);
            continue;
        }
        powers.push(next);
        let rel = linalg::column_kernel(&powers);
        let r = rel.last().expect("dependent powers give a relation");
        let d = powers.len() - 1;
        let lead = r.get(d);
        let inv = lead.inv().expect("relation involves the top power");
        return (0..=d).map(|k| &r.get(k) * &inv).collect();
    }
}

fn eval_poly(p: &[Scalar], t: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * t) + c)
}

/// Complete set of orthogonal primitive idempotents of a commutative
/// separable subalgebra, found by splitting with the spanning vectors.
/// Eigenvalues are sought among zero and the `order`-th roots of unity.
pub fn primitive_idempotents(h: &HopfData, l: &CoidealSub, order: u32) -> Result<Vec<SparseVec>, CoidealError> {
    if !(l.commutative && l.separable) {
        return Err(CoidealError::NotCommutativeSeparable);
    }
    let mut candidates = vec![Scalar::zero()];
    candidates.extend((0..order).map(|k| Cyclotomic::root_of_unity(order, k as i64)));
    let mut done: Vec<SparseVec> = Vec::new();
    let mut work = vec![h.unit.clone()];
    while let Some(e) = work.pop() {
        let mut split = None;
        for b in &l.basis {
            let x = h.mul(&e, b);
            let poly = min_poly(h, &e, &x);
            let d = poly.len() - 1;
            if d <= 1 {
                continue;
            }
            let roots: Vec<Scalar> = candidates.iter().filter(|c| eval_poly(&poly, c).is_zero()).cloned().collect();
            if roots.len() < d {
                return Err(CoidealError::EigenvalueOutsideCyclotomic(h.format(b), order));
            }
            let mut pieces = Vec::with_capacity(d);
            for (i, lam) in roots.iter().enumerate() {
                let mut p = e.clone();
                for (j, mu) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let factor = x.sub(&e.scaled(mu)).scaled(&(lam - mu).inv().expect("distinct roots"));
                    p = h.mul(&p, &factor);
                }
                pieces.push(p);
            }
            split = Some(pieces);
            break;
        }
        match split {
            Some(pieces) => work.extend(pieces.into_iter().rev()),
            None => done.push(e),
        }
    }
    if done.len() != l.dim() {
        return Err(CoidealError::EigenvalueOutsideCyclotomic("the spanning set".into(), order));
    }
    done.sort_by_cached_key(|v| v.iter().map(|(i, c)| (*i, c.to_string())).collect::<Vec<_>>());
    Ok(done)
}

/// Coefficient matrix of a commutative separable coideal subalgebra in the
/// basis of its primitive idempotents `f_j`.
///
/// Left: `Delta(f_j) = sum_i c_ij (x) f_i` and `u_jk = c_kj`.
/// Right: `Delta(f_j) = sum_i f_i (x) d_ij` and `u = d`.
pub fn coefficient_matrix(h: &HopfData, l: &CoidealSub) -> Result<MagicCert, CoidealError> {
    let f = primitive_idempotents(h, l, h.exponent)?;
    let m = f.len();
    let sc = SubspaceCoords::new(h.dim, &f).expect("idempotents are independent");
    let n = h.dim;
    // coef[i][j]
    let mut coef = vec![vec![SparseVec::new(); m]; m];
    for (j, fj) in f.iter().enumerate() {
        let delta = h.comul(fj);
        let mut parts: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
        for (idx, c) in delta.iter() {
            let (p, q) = (idx / n, idx % n);
            match l.side {
                CoidealSide::Left => parts.entry(p).or_default().push((q, c.clone())),
                CoidealSide::Right => parts.entry(q).or_default().push((p, c.clone())),
            }
        }
        let mut acc: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); m];
        for (outer, inner) in parts {
            let cs = sc
                .coords(&SparseVec::from_pairs(inner))
                .ok_or_else(|| CoidealError::NotCoideal(h.format(fj)))?;
            for (i, c) in cs.iter() {
                acc[*i].push((outer, c.clone()));
            }
        }
        for (i, t) in acc.into_iter().enumerate() {
            coef[i][j] = SparseVec::from_pairs(t);
        }
    }
    let entries: Vec<Vec<SparseVec>> = match l.side {
        CoidealSide::Left => (0..m).map(|j| (0..m).map(|k| coef[k][j].clone()).collect()).collect(),
        CoidealSide::Right => coef,
    };
    let kind = match l.side {
        CoidealSide::Left => "left coideal",
        CoidealSide::Right => "right coideal",
    };
    magic::verify_magic(h, entries, vec![Provenance { kind: kind.into(), source: l.name.clone(), size: m }])
        .map_err(CoidealError::MagicRelationFailure)
}

/// Apply the antipode to every spanning vector, swapping the side.
pub fn antipode_image(h: &HopfData, l: &CoidealSub) -> Result<CoidealSub, CoidealError> {
    let side = match l.side {
        CoidealSide::Left => CoidealSide::Right,
        CoidealSide::Right => CoidealSide::Left,
    };
    check(h, l.basis.iter().map(|v| h.antipode_of(v)).collect(), side, &format!("S({})", l.name))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedKind {
    /// `k^Gamma # <x>`, for `x` an index of `F`.
    Lx(usize),
    /// `1 # kT`.
    OneKT(PermGroup),
    /// `X(T) = Span{e_g # g^-1 |> y : g in Gamma, y in T}`.
    XT(PermGroup),
    /// Span of the group-like elements.
    KGH,
}

fn subgroup_indices(b: &Bicrossed, t: &PermGroup) -> Result<Vec<usize>, CoidealError> {
    t.elements()
        .iter()
        .map(|p| b.mp.f.index_of(p).ok_or_else(|| CoidealError::PreconditionViolated(format!("{p} is not in F"))))
        .collect()
}

fn subgroup_label(t: &PermGroup) -> String {
    let gens: Vec<String> = t.generators().iter().filter(|p| !p.is_identity()).map(|p| p.to_string()).collect();
    if gens.is_empty() {
        "1".into()
    } else {
        format!("<{}>", gens.join(", "))
    }
}

pub fn construct_named(b: &Bicrossed, kind: &NamedKind) -> Result<CoidealSub, CoidealError> {
    let h = &b.hopf;
    let mp = &b.mp;
    let ng = mp.ngamma();
    match kind {
        NamedKind::Lx(x) => {
            if !mp.right_trivial() {
                return Err(CoidealError::PreconditionViolated("<| is not trivial".into()));
            }
            let xe = mp.f.element(*x);
            let mut basis = Vec::new();
            for k in 0..xe.order() {
                let y = mp.f.index_of(&xe.pow(k as i64)).expect("power in F");
                basis.extend((0..ng).map(|g| SparseVec::unit(b.index(g, y))));
            }
            check(h, basis, CoidealSide::Left, &format!("k^Gamma # <{}>", mp.f_name(*x)))
        }
        NamedKind::OneKT(t) => {
            if !mp.is_stable(t) {
                return Err(CoidealError::PreconditionViolated("T is not Gamma-stable".into()));
            }
            let basis = subgroup_indices(b, t)?.into_iter().map(|y| b.one_hash(y)).collect();
            check(h, basis, CoidealSide::Right, &format!("1 # k{}", subgroup_label(t)))
        }
        NamedKind::XT(t) => {
            if !mp.right_trivial() {
                return Err(CoidealError::PreconditionViolated("<| is not trivial".into()));
            }
            let mut basis = Vec::new();
            for y in subgroup_indices(b, t)? {
                for g in 0..ng {
                    basis.push(SparseVec::unit(b.index(g, mp.act_left(mp.gamma.inv(g), y))));
                }
            }
            let r = check(h, basis, CoidealSide::Right, &format!("X({})", subgroup_label(t)))?;
            let contains_fun = (0..ng).all(|g| r.contains(h, &SparseVec::unit(b.index(g, 0))));
            if !contains_fun {
                return Err(CoidealError::PreconditionViolated("X(T) does not contain k^Gamma".into()));
            }
            Ok(r)
        }
        NamedKind::KGH => {
            let gl = b.grouplikes_split().map_err(|e| CoidealError::PreconditionViolated(e.to_string()))?;
            check(h, gl.elements, CoidealSide::Left, "kG(H)")
        }
    }
}

/// Result of [`graded_analysis`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradedSupport {
    /// `(x, dim R_x)` for `x` in the support.
    pub component_dims: Vec<(usize, usize)>,
    pub support: Vec<usize>,
    /// `T` with `pi(R) = kT`.
    pub t: Vec<usize>,
    pub grading_exhaustive: bool,
    pub t_is_subgroup: bool,
    pub support_stable: bool,
    pub translation_covariant: bool,
    pub support_closed_under_inverse: bool,
    pub contains_function_algebra: bool,
    pub meets_function_algebra_trivially: bool,
    /// Present when `k^Gamma` lies in `R`: `T` acts trivially via `<|`.
    pub t_acts_trivially: Option<bool>,
    /// Present when `R` meets `k^Gamma` in `k1`: `T` is `|>`-stable.
    pub t_stable: Option<bool>,
}

impl GradedSupport {
    pub fn all_hold(&self) -> bool {
        self.grading_exhaustive
            && self.t_is_subgroup
            && self.support_stable
            && self.translation_covariant
            && self.support_closed_under_inverse
            && self.t_acts_trivially.unwrap_or(true)
            && self.t_stable.unwrap_or(true)
    }
}

/// Homogeneous component `R_x = R ∩ (k^Gamma # x)` as a list of functions on
/// `Gamma` (dense, length `|Gamma|`).
pub fn component(b: &Bicrossed, r: &CoidealSub, x: usize) -> Vec<Vec<Scalar>> {
    let nf = b.mp.nf();
    let ng = b.mp.ngamma();
    let outside: Vec<SparseVec> = r
        .basis
        .iter()
        .map(|v| SparseVec::from_pairs(v.iter().filter(|(i, _)| i % nf != x).cloned().collect()))
        .collect();
    let rel = linalg::column_kernel(&outside);
    let mut ech = Echelon::new();
    for c in rel {
        let mut v = SparseVec::new();
        for (i, a) in c.iter() {
            v = v.add_scaled(a, &r.basis[*i]);
        }
        ech.insert(&v);
    }
    ech.basis()
        .into_iter()
        .map(|v| (0..ng).map(|g| v.get(b.index(g, x))).collect())
        .collect()
}

fn span_equal(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
    let av: Vec<SparseVec> = a.iter().map(|f| SparseVec::from_dense(f)).collect();
    let bv: Vec<SparseVec> = b.iter().map(|f| SparseVec::from_dense(f)).collect();
    let ra = linalg::rank(&av);
    let rb = linalg::rank(&bv);
    let mut all = av;
    all.extend(bv);
    ra == rb && linalg::rank(&all) == ra
}

/// The grading of a right coideal subalgebra of a split extension by `F`,
/// with the structural assertions that hold for all of them.
pub fn graded_analysis(b: &Bicrossed, r: &CoidealSub) -> Result<GradedSupport, CoidealError> {
    if r.side != CoidealSide::Right || !b.is_split() {
        return Err(CoidealError::NotRightCoideal);
    }
    let h = &b.hopf;
    check(h, r.basis.clone(), CoidealSide::Right, &r.name).map_err(|_| CoidealError::NotRightCoideal)?;
    let mp = &b.mp;
    let (nf, ng) = (mp.nf(), mp.ngamma());
    let comps: Vec<Vec<Vec<Scalar>>> = (0..nf).map(|x| component(b, r, x)).collect();
    let grading_exhaustive = comps.iter().map(|c| c.len()).sum::<usize>() == r.dim();
    let support: Vec<usize> = (0..nf).filter(|&x| !comps[x].is_empty()).collect();
    let sup: BTreeSet<usize> = support.iter().copied().collect();
    // pi(R) is spanned by group elements; T is the union of the supports
    let pi = b.pi();
    let t: BTreeSet<usize> = r.basis.iter().flat_map(|v| pi.apply(v).iter().map(|p| p.0).collect::<Vec<_>>()).collect();
    let t_vec: Vec<usize> = t.iter().copied().collect();
    let t_is_subgroup = t.contains(&0) && t.iter().all(|&a| t.iter().all(|&c| t.contains(&mp.f.mul(a, c))));
    let support_stable = sup.iter().all(|&x| (0..ng).all(|g| sup.contains(&mp.act_left(g, x))));
    let translate = |g: usize, f: &Vec<Scalar>| -> Vec<Scalar> { (0..ng).map(|s| f[mp.gamma.mul(s, g)].clone()).collect() };
    let translation_covariant = (0..nf).all(|x| {
        (0..ng).all(|g| {
            let moved: Vec<Vec<Scalar>> = comps[x].iter().map(|f| translate(g, f)).collect();
            span_equal(&moved, &comps[mp.act_left(g, x)])
        })
    });
    let support_closed_under_inverse = sup.iter().all(|&x| sup.contains(&mp.f.inv(x)));
    let contains_function_algebra = comps[0].len() == ng;
    let meets_function_algebra_trivially = comps[0].len() == 1;
    let t_acts_trivially =
        contains_function_algebra.then(|| t.iter().all(|&x| (0..ng).all(|g| mp.act_right(g, x) == g)));
    let t_stable =
        meets_function_algebra_trivially.then(|| t.iter().all(|&x| (0..ng).all(|g| t.contains(&mp.act_left(g, x)))));
    Ok(GradedSupport {
        component_dims: support.iter().map(|&x| (x, comps[x].len())).collect(),
        support,
        t: t_vec,
        grading_exhaustive,
        t_is_subgroup,
        support_stable,
        translation_covariant,
        support_closed_under_inverse,
        contains_function_algebra,
        meets_function_algebra_trivially,
        t_acts_trivially,
        t_stable,
    })
}
