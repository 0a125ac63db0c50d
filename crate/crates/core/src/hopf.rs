//! Finite-dimensional Hopf algebras given by structure constants.

use rayon::prelude::*;

use crate::exactnum::Cyclotomic;
use crate::linalg::{self, Echelon, Insert, Scalar, SparseVec, SubspaceCoords};
use crate::modp::{EchelonModP, ModP};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HopfError {
    #[error("no antipode exists: the defining linear system is inconsistent")]
    NoAntipode,
    #[error("internal error: antipode system has more than one solution")]
    NotUnique,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("axiom check failed: {0}")]
    AxiomFailure(String),
    #[error("not a Hopf algebra map: {0}")]
    NotHopfMap(String),
}

/// A term of a comultiplication: `c * b_left (x) b_right`.
pub type CoTerm = (usize, usize, Scalar);

#[derive(Clone, Debug)]
pub struct HopfData {
    pub dim: usize,
    pub labels: Vec<String>,
    /// `mult[i * dim + j] = b_i b_j`.
    pub mult: Vec<SparseVec>,
    pub unit: SparseVec,
    /// `comult[i]` lists the terms of `Delta(b_i)`, sorted by index pair.
    pub comult: Vec<Vec<CoTerm>>,
    pub counit: Vec<Scalar>,
    /// `antipode[i] = S(b_i)`.
    pub antipode: Vec<SparseVec>,
    /// Every eigenvalue of left multiplication by a basis element is zero or
    /// a root of unity of order dividing this number.
    pub exponent: u32,
    pub note: String,
}

/// Result of [`HopfData::verify`]; each flag is an exhaustive check over basis
/// elements.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HopfReport {
    pub associative: bool,
    pub coassociative: bool,
    pub bialgebra: bool,
    pub antipode_left: bool,
    pub antipode_right: bool,
    pub s_squared_identity: bool,
    pub commutative: bool,
    pub cocommutative: bool,
    pub first_failure: Option<String>,
}

impl HopfReport {
    /// All Hopf algebra axioms hold (commutativity flags are not axioms).
    pub fn is_hopf(&self) -> bool {
        self.associative && self.coassociative && self.bialgebra && self.antipode_left && self.antipode_right
    }
}

fn sorted_coterms(mut terms: Vec<CoTerm>) -> Vec<CoTerm> {
    terms.sort_by_key(|t| (t.0, t.1));
    let mut out: Vec<CoTerm> = Vec::with_capacity(terms.len());
    for (a, b, c) in terms {
        match out.last_mut() {
            Some((x, y, acc)) if *x == a && *y == b => *acc += &c,
            _ => out.push((a, b, c)),
        }
    }
    out.retain(|t| !t.2.is_zero());
    out
}

impl HopfData {
    /// Assemble a bialgebra and solve for its antipode.
    pub fn from_bialgebra(
        labels: Vec<String>,
        mult: Vec<SparseVec>,
        unit: SparseVec,
        comult: Vec<Vec<CoTerm>>,
        counit: Vec<Scalar>,
        exponent: u32,
        note: impl Into<String>,
    ) -> Result<Self, HopfError> {
        let mut h = Self::without_antipode(labels, mult, unit, comult, counit, exponent, note)?;
        h.antipode = solve_antipode(&h)?;
        Ok(h)
    }

    /// Assemble structure constants, leaving the antipode empty.
    pub fn without_antipode(
        labels: Vec<String>,
        mult: Vec<SparseVec>,
        unit: SparseVec,
        comult: Vec<Vec<CoTerm>>,
        counit: Vec<Scalar>,
        exponent: u32,
        note: impl Into<String>,
    ) -> Result<Self, HopfError> {
        let dim = labels.len();
        if mult.len() != dim * dim || comult.len() != dim || counit.len() != dim {
            return Err(HopfError::DimensionMismatch(format!(
                "dim {dim}: {} products, {} coproducts, {} counit values",
                mult.len(),
                comult.len(),
                counit.len()
            )));
        }
        let comult = comult.into_iter().map(sorted_coterms).collect();
        Ok(HopfData { dim, labels, mult, unit, comult, counit, antipode: Vec::new(), exponent, note: note.into() })
    }

    pub fn has_antipode(&self) -> bool {
        self.antipode.len() == self.dim
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        SparseVec::unit(i)
    }

    pub fn one(&self) -> SparseVec {
        self.unit.clone()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim + j]
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let ij = self.mul_basis(*i, *j);
                if ij.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, z) in ij.iter() {
                    terms.push((*k, &xy * z));
                }
            }
        }
        SparseVec::from_pairs(terms)
    }

    /// `Delta(a)` as a vector indexed by `p * dim + q`.
    pub fn comul(&self, a: &SparseVec) -> SparseVec {
        let n = self.dim;
        let mut terms = Vec::new();
        for (i, x) in a.iter() {
            for (p, q, c) in &self.comult[*i] {
                terms.push((p * n + q, x * c));
            }
        }
        SparseVec::from_pairs(terms)
    }

    pub fn counit_of(&self, a: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, x) in a.iter() {
            if !self.counit[*i].is_zero() {
                acc += &(x * &self.counit[*i]);
            }
        }
        acc
    }

    pub fn antipode_of(&self, a: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, x) in a.iter() {
            for (k, z) in self.antipode[*i].iter() {
                terms.push((*k, x * z));
            }
        }
        SparseVec::from_pairs(terms)
    }

    /// Product in `H (x) H` of two tensors indexed by `p * dim + q`.
    pub fn tensor_mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let n = self.dim;
        let mut terms = Vec::new();
        for (ia, x) in a.iter() {
            let (p, q) = (ia / n, ia % n);
            for (ib, y) in b.iter() {
                let (r, s) = (ib / n, ib % n);
                let left = self.mul_basis(p, r);
                if left.is_zero() {
                    continue;
                }
                let right = self.mul_basis(q, s);
                let xy = x * y;
                for (u, cu) in left.iter() {
                    let f = &xy * cu;
                    for (v, cv) in right.iter() {
                        terms.push((u * n + v, &f * cv));
                    }
                }
            }
        }
        SparseVec::from_pairs(terms)
    }

    pub fn outer(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let n = self.dim;
        let mut terms = Vec::with_capacity(a.nnz() * b.nnz());
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                terms.push((i * n + j, x * y));
            }
        }
        // a field has no zero divisors, and the indices come out sorted
        SparseVec::from_sorted(terms)
    }

    /// Human-readable form of an element, e.g. `e_z#(12) - 1/2*e_1#()`.
    pub fn format(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in v.iter() {
            let lab = &self.labels[*i];
            if c.is_one() {
                parts.push(lab.clone());
            } else if c.is_rational() {
                parts.push(format!("{c}*{lab}"));
            } else {
                parts.push(format!("({c})*{lab}"));
            }
        }
        parts.join(" + ")
    }

    fn check_assoc(&self) -> Option<String> {
        let n = self.dim;
        (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let left = self.mul(ij, &SparseVec::unit(k));
                    let right = self.mul(&SparseVec::unit(i), self.mul_basis(j, k));
                    if left != right {
                        return Some(format!(
                            "associativity fails at ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
            None
        })
    }

    fn check_unit(&self) -> Option<String> {
        (0..self.dim).find_map(|i| {
            let b = SparseVec::unit(i);
            (self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b)
                .then(|| format!("unit fails against {}", self.labels[i]))
        })
    }

    fn check_coassoc(&self) -> Option<String> {
        let n = self.dim;
        (0..n).into_par_iter().find_map_first(|i| {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for (p, q, c) in &self.comult[i] {
                for (a, b, d) in &self.comult[*p] {
                    l.push(((a * n + b) * n + q, c * d));
                }
                for (a, b, d) in &self.comult[*q] {
                    r.push(((p * n + a) * n + b, c * d));
                }
            }
            (SparseVec::from_pairs(l) != SparseVec::from_pairs(r))
                .then(|| format!("coassociativity fails at {}", self.labels[i]))
        })
    }

    fn check_counit(&self) -> Option<String> {
        (0..self.dim).find_map(|i| {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for (p, q, c) in &self.comult[i] {
                l.push((*q, c * &self.counit[*p]));
                r.push((*p, c * &self.counit[*q]));
            }
            let b = SparseVec::unit(i);
            (SparseVec::from_pairs(l) != b || SparseVec::from_pairs(r) != b)
                .then(|| format!("counit fails at {}", self.labels[i]))
        })
    }

    fn check_bialgebra(&self) -> Option<String> {
        let n = self.dim;
        let one = &self.unit;
        if self.comul(one) != self.outer(one, one) {
            return Some("comultiplication does not preserve the unit".into());
        }
        if !self.counit_of(one).is_one() {
            return Some("counit of the unit is not 1".into());
        }
        let deltas: Vec<SparseVec> = (0..n).map(|i| self.comul(&SparseVec::unit(i))).collect();
        (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let prod = self.mul_basis(i, j);
                if self.comul(prod) != self.tensor_mul(&deltas[i], &deltas[j]) {
                    return Some(format!("comultiplication not multiplicative at ({}, {})", self.labels[i], self.labels[j]));
                }
                if self.counit_of(prod) != &self.counit[i] * &self.counit[j] {
                    return Some(format!("counit not multiplicative at ({}, {})", self.labels[i], self.labels[j]));
                }
            }
            None
        })
    }

    fn check_antipode(&self, left: bool) -> Option<String> {
        if !self.has_antipode() {
            return Some("antipode missing".into());
        }
        (0..self.dim).into_par_iter().find_map_first(|i| {
            let mut acc = SparseVec::new();
            for (p, q, c) in &self.comult[i] {
                let t = if left {
                    self.mul(&self.antipode[*p], &SparseVec::unit(*q))
                } else {
                    self.mul(&SparseVec::unit(*p), &self.antipode[*q])
                };
                acc = acc.add_scaled(c, &t);
            }
            (acc != self.unit.scaled(&self.counit[i])).then(|| {
                format!("{} antipode axiom fails at {}", if left { "left" } else { "right" }, self.labels[i])
            })
        })
    }

    fn check_s_squared(&self) -> bool {
        self.has_antipode() && (0..self.dim).all(|i| self.antipode_of(&self.antipode[i]) == SparseVec::unit(i))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i + 1..n).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i)))
    }

    pub fn is_cocommutative(&self) -> bool {
        self.comult.iter().all(|terms| {
            let flipped = sorted_coterms(terms.iter().map(|(p, q, c)| (*q, *p, c.clone())).collect());
            &flipped == terms
        })
    }

    /// Exhaustive check of every axiom.
    pub fn verify(&self) -> HopfReport {
        let assoc = self.check_assoc().or_else(|| self.check_unit());
        let coassoc = self.check_coassoc().or_else(|| self.check_counit());
        let bialg = self.check_bialgebra();
        let al = self.check_antipode(true);
        let ar = self.check_antipode(false);
        let first_failure = [&assoc, &coassoc, &bialg, &al, &ar].into_iter().find_map(|f| f.clone());
        HopfReport {
            associative: assoc.is_none(),
            coassociative: coassoc.is_none(),
            bialgebra: bialg.is_none(),
            antipode_left: al.is_none(),
            antipode_right: ar.is_none(),
            s_squared_identity: self.check_s_squared(),
            commutative: self.is_commutative(),
            cocommutative: self.is_cocommutative(),
            first_failure,
        }
    }

    /// Verify and turn the first failure into an error.
    pub fn verified(self) -> Result<Self, HopfError> {
        let r = self.verify();
        match r.first_failure {
            Some(f) => Err(HopfError::AxiomFailure(f)),
            None => Ok(self),
        }
    }

    /// The dual Hopf algebra on the dual basis.
    pub fn dual(&self) -> HopfData {
        let n = self.dim;
        let mut mult = vec![Vec::new(); n * n];
        for (k, terms) in self.comult.iter().enumerate() {
            for (i, j, c) in terms {
                mult[i * n + j].push((k, c.clone()));
            }
        }
        let mult = mult.into_iter().map(SparseVec::from_pairs).collect();
        let mut comult = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.mul_basis(i, j).iter() {
                    comult[*k].push((i, j, c.clone()));
                }
            }
        }
        let comult = comult.into_iter().map(sorted_coterms).collect();
        let unit = SparseVec::from_dense(&self.counit);
        let counit = self.unit.to_dense(n);
        // S* is the transpose: S*(phi_k) = sum_i S_{k,i} phi_i where S(b_i) = sum_k S_{k,i} b_k.
        let mut cols = vec![Vec::new(); n];
        for (i, col) in self.antipode.iter().enumerate() {
            for (k, c) in col.iter() {
                cols[*k].push((i, c.clone()));
            }
        }
        let antipode = if self.has_antipode() { cols.into_iter().map(SparseVec::from_pairs).collect() } else { Vec::new() };
        let labels = self.labels.iter().map(|l| dual_label(l)).collect();
        HopfData {
            dim: n,
            labels,
            mult,
            unit,
            comult,
            counit,
            antipode,
            exponent: self.exponent,
            note: format!("dual of {}", self.note),
        }
    }

    /// Exact equality of all structure constants (labels ignored).
    pub fn same_structure(&self, other: &HopfData) -> bool {
        self.dim == other.dim
            && self.mult == other.mult
            && self.unit == other.unit
            && self.comult == other.comult
            && self.counit == other.counit
            && self.antipode == other.antipode
    }

    /// Structure constants after relabeling: `perm[i]` is the index in `self`
    /// of the basis element placed at position `i`.
    pub fn permuted(&self, perm: &[usize]) -> HopfData {
        let n = self.dim;
        let mut inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let map = |v: &SparseVec| SparseVec::from_pairs(v.iter().map(|(k, c)| (inv[*k], c.clone())).collect());
        let mut mult = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                mult.push(map(self.mul_basis(perm[i], perm[j])));
            }
        }
        let comult = (0..n)
            .map(|i| sorted_coterms(self.comult[perm[i]].iter().map(|(p, q, c)| (inv[*p], inv[*q], c.clone())).collect()))
            .collect();
        HopfData {
            dim: n,
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            mult,
            unit: map(&self.unit),
            comult,
            counit: perm.iter().map(|&p| self.counit[p].clone()).collect(),
            antipode: if self.has_antipode() { perm.iter().map(|&p| map(&self.antipode[p])).collect() } else { Vec::new() },
            exponent: self.exponent,
            note: self.note.clone(),
        }
    }

    /// The base field as a one-dimensional Hopf algebra.
    pub fn trivial() -> HopfData {
        HopfData {
            dim: 1,
            labels: vec!["1".into()],
            mult: vec![SparseVec::unit(0)],
            unit: SparseVec::unit(0),
            comult: vec![vec![(0, 0, Scalar::one())]],
            counit: vec![Scalar::one()],
            antipode: vec![SparseVec::unit(0)],
            exponent: 1,
            note: "base field".into(),
        }
    }

    pub fn tensor_product(&self, other: &HopfData) -> HopfData {
        let (n, m) = (self.dim, other.dim);
        let idx = |i: usize, j: usize| i * m + j;
        let outer = |a: &SparseVec, b: &SparseVec| {
            let mut t = Vec::new();
            for (i, x) in a.iter() {
                for (j, y) in b.iter() {
                    t.push((idx(*i, *j), x * y));
                }
            }
            SparseVec::from_pairs(t)
        };
        let mut labels = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                labels.push(format!("{}*{}", self.labels[i], other.labels[j]));
            }
        }
        let mut mult = Vec::with_capacity(n * n * m * m);
        for a in 0..n * m {
            for b in 0..n * m {
                mult.push(outer(self.mul_basis(a / m, b / m), other.mul_basis(a % m, b % m)));
            }
        }
        let mut comult = Vec::with_capacity(n * m);
        let mut counit = Vec::with_capacity(n * m);
        let mut antipode = Vec::with_capacity(n * m);
        for a in 0..n * m {
            let (i, j) = (a / m, a % m);
            let mut terms = Vec::new();
            for (p, q, c) in &self.comult[i] {
                for (r, s, d) in &other.comult[j] {
                    terms.push((idx(*p, *r), idx(*q, *s), c * d));
                }
            }
            comult.push(sorted_coterms(terms));
            counit.push(&self.counit[i] * &other.counit[j]);
            antipode.push(outer(&self.antipode[i], &other.antipode[j]));
        }
        HopfData {
            dim: n * m,
            labels,
            mult,
            unit: outer(&self.unit, &other.unit),
            comult,
            counit,
            antipode,
            exponent: num_integer::lcm(self.exponent, other.exponent),
            note: format!("{} tensor {}", self.note, other.note),
        }
    }

    pub fn is_grouplike(&self, v: &SparseVec) -> bool {
        self.counit_of(v).is_one() && self.comul(v) == self.outer(v, v)
    }

    /// Check that a subspace is closed under the product and contains the
    /// unit; returns a witness pair of basis positions on failure.
    pub fn subalgebra_witness(&self, basis: &[SparseVec]) -> Option<(usize, usize)> {
        let sc = SubspaceCoords::new(self.dim, basis)?;
        if !sc.contains(&self.unit) {
            return Some((usize::MAX, usize::MAX));
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if !sc.contains(&self.mul(a, b)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Whether a subspace is a Hopf subalgebra: subalgebra, subcoalgebra and
    /// stable under the antipode.
    pub fn is_hopf_subalgebra(&self, basis: &[SparseVec]) -> bool {
        let Some(sc) = SubspaceCoords::new(self.dim, basis) else { return false };
        if self.subalgebra_witness(basis).is_some() {
            return false;
        }
        let n = self.dim;
        for b in basis {
            if !sc.contains(&self.antipode_of(b)) {
                return false;
            }
            // Delta(b) must lie in W (x) W: every left slice and every right
            // slice lies in W.
            let d = self.comul(b);
            let mut left: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
            let mut right: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
            for (k, c) in d.iter() {
                left.entry(k % n).or_default().push((k / n, c.clone()));
                right.entry(k / n).or_default().push((k % n, c.clone()));
            }
            for v in left.into_values().chain(right.into_values()) {
                if !sc.contains(&SparseVec::from_pairs(v)) {
                    return false;
                }
            }
        }
        true
    }
}

fn dual_label(l: &str) -> String {
    match l.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{l}*"),
    }
}

/// Solve for the antipode of a bialgebra.
///
/// For each basis element `y` take the left coideal `W` it generates, with
/// basis `w_1..w_d` and `Delta(w_k) = sum_m M_km (x) w_m`. The right antipode
/// axiom restricted to `W` reads `sum_m M_km S(w_m) = eps(w_k) 1`, a linear
/// system in the `d` unknown vectors `S(w_m)`.
pub fn solve_antipode(h: &HopfData) -> Result<Vec<SparseVec>, HopfError> {
    let n = h.dim;
    let mut result: Vec<Option<SparseVec>> = vec![None; n];
    for y in 0..n {
        if result[y].is_some() {
            continue;
        }
        // Slices (f (x) id) Delta(y).
        let mut slices: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
        for (p, q, c) in &h.comult[y] {
            slices.entry(*p).or_default().push((*q, c.clone()));
        }
        let mut ech = Echelon::new();
        ech.insert(&SparseVec::unit(y));
        for v in slices.into_values() {
            ech.insert(&SparseVec::from_pairs(v));
        }
        let w = ech.basis();
        let d = w.len();
        let sc = SubspaceCoords::new(n, &w).expect("echelon basis is independent");
        // M[k][m] as elements of H.
        let mut m_mat: Vec<Vec<SparseVec>> = vec![vec![SparseVec::new(); d]; d];
        for (k, wk) in w.iter().enumerate() {
            let delta = h.comul(wk);
            let mut by_left: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
            for (idx, c) in delta.iter() {
                by_left.entry(idx / n).or_default().push((idx % n, c.clone()));
            }
            let mut acc: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); d];
            for (p, right) in by_left {
                let coords = sc.coords(&SparseVec::from_pairs(right)).ok_or_else(|| {
                    HopfError::AxiomFailure(format!("coassociativity fails near {}", h.labels[y]))
                })?;
                for (m, c) in coords.iter() {
                    acc[*m].push((p, c.clone()));
                }
            }
            for (m, terms) in acc.into_iter().enumerate() {
                m_mat[k][m] = SparseVec::from_pairs(terms);
            }
        }
        let nvars = d * n;
        let mut rows = Vec::new();
        for k in 0..d {
            // coordinate s of sum_m M_km X_m
            let mut eqs: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
            for m in 0..d {
                let mkm = &m_mat[k][m];
                if mkm.is_zero() {
                    continue;
                }
                for r in 0..n {
                    let prod = h.mul(mkm, &SparseVec::unit(r));
                    for (s, c) in prod.iter() {
                        eqs.entry(*s).or_default().push((m * n + r, c.clone()));
                    }
                }
            }
            let eps = h.counit_of(&w[k]);
            let rhs = h.unit.scaled(&eps);
            let mut all_s: std::collections::BTreeSet<usize> = eqs.keys().copied().collect();
            all_s.extend(rhs.iter().map(|p| p.0));
            for s in all_s {
                let a = SparseVec::from_pairs(eqs.remove(&s).unwrap_or_default());
                rows.push((a, rhs.get(s)));
            }
        }
        let sol = linalg::solve(nvars, rows).map_err(|_| HopfError::NoAntipode)?;
        if !sol.is_unique() {
            return Err(HopfError::NotUnique);
        }
        let xs: Vec<SparseVec> =
            (0..d).map(|m| SparseVec::from_dense(&sol.values[m * n..(m + 1) * n])).collect();
        for (i, slot) in result.iter_mut().enumerate() {
            if slot.is_some() {
                continue;
            }
            if let Some(c) = sc.coords(&SparseVec::unit(i)) {
                let mut acc = SparseVec::new();
                for (m, x) in c.iter() {
                    acc = acc.add_scaled(x, &xs[*m]);
                }
                *slot = Some(acc);
            }
        }
    }
    Ok(result.into_iter().map(|v| v.expect("every basis element covered")).collect())
}

/// Linear map between Hopf algebras, stored as images of source basis
/// elements.
#[derive(Clone, Debug)]
pub struct HopfMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub images: Vec<SparseVec>,
}

impl HopfMap {
    pub fn new(source_dim: usize, target_dim: usize, images: Vec<SparseVec>) -> Self {
        assert_eq!(images.len(), source_dim);
        HopfMap { source_dim, target_dim, images }
    }

    pub fn identity(n: usize) -> Self {
        HopfMap::new(n, n, (0..n).map(SparseVec::unit).collect())
    }

    /// The counit viewed as a map onto the one-dimensional Hopf algebra.
    pub fn counit_map(h: &HopfData) -> Self {
        HopfMap::new(h.dim, 1, h.counit.iter().map(|c| SparseVec::single(0, c.clone())).collect())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, x) in v.iter() {
            for (k, c) in self.images[*i].iter() {
                terms.push((*k, x * c));
            }
        }
        SparseVec::from_pairs(terms)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.images)
    }

    /// Check that the map intertwines all structure maps; the first failure is
    /// returned as an error.
    pub fn verify(&self, src: &HopfData, tgt: &HopfData) -> Result<(), HopfError> {
        if src.dim != self.source_dim || tgt.dim != self.target_dim {
            return Err(HopfError::DimensionMismatch("map dimensions do not match algebras".into()));
        }
        let m = tgt.dim;
        if self.apply(&src.unit) != tgt.unit {
            return Err(HopfError::NotHopfMap("unit not preserved".into()));
        }
        for i in 0..src.dim {
            if tgt.counit_of(&self.images[i]) != src.counit[i] {
                return Err(HopfError::NotHopfMap(format!("counit not preserved at {}", src.labels[i])));
            }
            let mut lhs = Vec::new();
            for (p, q, c) in &src.comult[i] {
                for (a, x) in self.images[*p].iter() {
                    for (b, y) in self.images[*q].iter() {
                        lhs.push((a * m + b, &(c * x) * y));
                    }
                }
            }
            if SparseVec::from_pairs(lhs) != tgt.comul(&self.images[i]) {
                return Err(HopfError::NotHopfMap(format!("comultiplication not preserved at {}", src.labels[i])));
            }
            for j in 0..src.dim {
                let l = self.apply(src.mul_basis(i, j));
                let r = tgt.mul(&self.images[i], &self.images[j]);
                if l != r {
                    return Err(HopfError::NotHopfMap(format!(
                        "product not preserved at ({}, {})",
                        src.labels[i], src.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Basis of `{h : (id (x) pi) Delta(h) = h (x) 1}`.
pub fn coinvariants(h: &HopfData, target: &HopfData, pi: &HopfMap) -> Vec<SparseVec> {
    let (n, m) = (h.dim, target.dim);
    let cols: Vec<SparseVec> = (0..n)
        .map(|i| {
            let mut terms = Vec::new();
            for (p, q, c) in &h.comult[i] {
                for (k, x) in pi.images[*q].iter() {
                    terms.push((p * m + k, c * x));
                }
            }
            for (k, x) in target.unit.iter() {
                terms.push((i * m + k, -x));
            }
            SparseVec::from_pairs(terms)
        })
        .collect();
    linalg::column_kernel(&cols)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ExactSequenceReport {
    pub iota_injective: bool,
    pub pi_surjective: bool,
    pub image_in_coinvariants: bool,
    pub coinvariants_equal_image: bool,
    pub dimension_identity: bool,
    pub dims: (usize, usize, usize),
}

impl ExactSequenceReport {
    pub fn all(&self) -> bool {
        self.iota_injective
            && self.pi_surjective
            && self.image_in_coinvariants
            && self.coinvariants_equal_image
            && self.dimension_identity
    }
}

/// Check `k -> A -> H -> Hbar -> k` given `iota: A -> H` and `pi: H -> Hbar`.
pub fn verify_exact_sequence(
    a: &HopfData,
    h: &HopfData,
    hbar: &HopfData,
    iota: &HopfMap,
    pi: &HopfMap,
) -> ExactSequenceReport {
    let co = coinvariants(h, hbar, pi);
    let sc = SubspaceCoords::new(h.dim, &co).expect("kernel basis is independent");
    let image_in = iota.images.iter().all(|v| sc.contains(v));
    let inj = iota.rank() == a.dim;
    ExactSequenceReport {
        iota_injective: inj,
        pi_surjective: pi.rank() == hbar.dim,
        image_in_coinvariants: image_in,
        coinvariants_equal_image: image_in && inj && co.len() == a.dim,
        dimension_identity: a.dim * hbar.dim == h.dim,
        dims: (a.dim, h.dim, hbar.dim),
    }
}

/// Smallest unital subalgebra containing `seed`, as a reduced echelon basis.
pub fn subalgebra_span_growth(h: &HopfData, seed: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut basis: Vec<SparseVec> = Vec::new();
    let mut fresh: Vec<SparseVec> = Vec::new();
    for v in std::iter::once(&h.unit).chain(seed) {
        if let Insert::Independent(_) = ech.insert(v) {
            basis.push(v.clone());
            fresh.push(v.clone());
        }
    }
    while !fresh.is_empty() && ech.rank() < h.dim {
        let products: Vec<SparseVec> = fresh
            .par_iter()
            .flat_map_iter(|a| basis.iter().flat_map(move |b| [h.mul(a, b), h.mul(b, a)]))
            .collect();
        let mut next = Vec::new();
        for p in products {
            if ech.rank() == h.dim {
                break;
            }
            if let Insert::Independent(_) = ech.insert(&p) {
                next.push(p);
            }
        }
        basis.extend(next.iter().cloned());
        fresh = next;
    }
    ech.basis()
}

fn reduce_vec(m: &ModP, v: &SparseVec, dim: usize) -> Option<Vec<u64>> {
    let mut out = vec![0u64; dim];
    for (i, c) in v.iter() {
        out[*i] = m.reduce(c)?;
    }
    Some(out)
}

/// Dimension of the subalgebra generated by `seed` computed over `F_p`, a
/// lower bound for the exact dimension. `None` if some coefficient is not
/// `p`-integral.
pub fn subalgebra_dim_mod_p(h: &HopfData, seed: &[SparseVec], m: &ModP) -> Option<usize> {
    let n = h.dim;
    let p = m.p;
    let table: Vec<Vec<(usize, u64)>> = h
        .mult
        .iter()
        .map(|v| v.iter().map(|(k, c)| m.reduce(c).map(|r| (*k, r))).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                let xy = x * y % p;
                for (k, z) in &table[i * n + j] {
                    out[*k] = (out[*k] + xy * z) % p;
                }
            }
        }
        out
    };
    let mut ech = EchelonModP::new(p);
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut fresh: Vec<Vec<u64>> = Vec::new();
    for v in std::iter::once(&h.unit).chain(seed) {
        let r = reduce_vec(m, v, n)?;
        if ech.insert(r.clone()) {
            basis.push(r.clone());
            fresh.push(r);
        }
    }
    while !fresh.is_empty() && ech.rank() < n {
        let products: Vec<Vec<u64>> = fresh
            .par_iter()
            .flat_map_iter(|a| basis.iter().flat_map(move |b| [mul(a, b), mul(b, a)]))
            .collect();
        let mut next = Vec::new();
        for v in products {
            if ech.rank() == n {
                break;
            }
            if ech.insert(v.clone()) {
                next.push(v);
            }
        }
        basis.extend(next.iter().cloned());
        fresh = next;
    }
    Some(ech.rank())
}

fn common_conductor<'a>(vs: impl Iterator<Item = &'a SparseVec>) -> u32 {
    let mut l = 1u32;
    for v in vs {
        for (_, c) in v.iter() {
            l = num_integer::Integer::lcm(&l, &c.conductor());
        }
    }
    l
}

/// Dimension of the subalgebra generated by `seed`. A modular computation
/// settles the full case; otherwise the exact span is computed.
pub fn generated_dim(h: &HopfData, seed: &[SparseVec]) -> usize {
    let l = common_conductor(h.mult.iter().chain(seed).chain(std::iter::once(&h.unit)));
    for skip in 0..2 {
        let m = ModP::new(l, skip);
        if subalgebra_dim_mod_p(h, seed, &m) == Some(h.dim) {
            return h.dim;
        }
    }
    subalgebra_span_growth(h, seed).len()
}

/// Whether `v` is a scalar multiple of the unit, returning the scalar.
pub fn scalar_of_unit(h: &HopfData, v: &SparseVec) -> Option<Cyclotomic> {
    let (k, u) = h.unit.leading()?;
    let c = v.get(*k).checked_div(u).ok()?;
    (h.unit.scaled(&c) == *v).then_some(c)
}
