//! Twisting the multiplication of a Hopf algebra by a convolution
//! invertible normalized 2-cocycle.

use num_integer::Integer;

use crate::builders::{self, Bicharacter, BuildError};
use crate::hopf::{HopfData, HopfError, HopfMap};
use crate::linalg::{self, Echelon, Insert, Scalar, SparseVec};
use crate::magic::{self, MagicCert, MagicError, Provenance};
use crate::permgrp::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("cocycle has no convolution inverse")]
    NotInvertible,
    #[error("condition fails at (i, j, l) = ({i}, {j}, {l}): {which}(u_ij, u_il) = {value}")]
    ConditionFails { i: usize, j: usize, l: usize, which: String, value: String },
    #[error("not a Hopf surjection: {0}")]
    NotHopfSurjection(String),
    #[error("not a bicharacter: {0}")]
    NotBicharacter(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Magic(#[from] MagicError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// A bilinear form `sigma(b_i, b_j)` on a Hopf algebra together with its
/// convolution inverse.
#[derive(Clone, Debug)]
pub struct CocycleForm {
    pub parent: HopfData,
    /// `table[i * dim + j] = sigma(b_i, b_j)`.
    pub table: Vec<Scalar>,
    pub inverse_table: Vec<Scalar>,
}

fn eval(table: &[Scalar], n: usize, u: &SparseVec, v: &SparseVec) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, x) in u.iter() {
        for (j, y) in v.iter() {
            let t = &table[i * n + j];
            if !t.is_zero() {
                acc += &(&(x * y) * t);
            }
        }
    }
    acc
}

/// Convolution product of two forms on `H (x) H`:
/// `(f * g)(x, y) = f(x_1, y_1) g(x_2, y_2)`.
fn convolve(h: &HopfData, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    let n = h.dim;
    let mut out = vec![Scalar::zero(); n * n];
    for x in 0..n {
        for y in 0..n {
            let mut acc = Scalar::zero();
            for (a, b, c) in &h.comult[x] {
                for (a2, b2, c2) in &h.comult[y] {
                    let fv = &f[a * n + a2];
                    if fv.is_zero() {
                        continue;
                    }
                    let gv = &g[b * n + b2];
                    if gv.is_zero() {
                        continue;
                    }
                    acc += &(&(&(c * c2) * fv) * gv);
                }
            }
            out[x * n + y] = acc;
        }
    }
    out
}

fn counit_form(h: &HopfData) -> Vec<Scalar> {
    let n = h.dim;
    let mut out = vec![Scalar::zero(); n * n];
    for x in 0..n {
        for y in 0..n {
            out[x * n + y] = &h.counit[x] * &h.counit[y];
        }
    }
    out
}

fn as_vec(t: &[Scalar]) -> SparseVec {
    SparseVec::from_dense(t)
}

/// Convolution inverse from the minimal polynomial of `sigma` in the
/// convolution algebra: with `sum_i c_i sigma^i = 0` and `c_0 != 0`,
/// `sigma^-1 = -(1/c_0) sum_(i>=1) c_i sigma^(i-1)`.
fn convolution_inverse(h: &HopfData, sigma: &[Scalar]) -> Result<Vec<Scalar>, TwistError> {
    let e = counit_form(h);
    let mut powers = vec![e];
    let mut ech = Echelon::new();
    ech.insert(&as_vec(&powers[0]));
    loop {
        let next = convolve(h, powers.last().unwrap(), sigma);
        let independent = matches!(ech.insert(&as_vec(&next)), Insert::Independent(_));
        powers.push(next);
        if !independent {
            break;
        }
    }
    let cols: Vec<SparseVec> = powers.iter().map(|p| as_vec(p)).collect();
    let kernel = linalg::column_kernel(&cols);
    let rel = kernel.first().ok_or(TwistError::NotInvertible)?;
    let c0 = rel.get(0);
    if c0.is_zero() {
        return Err(TwistError::NotInvertible);
    }
    let scale = -c0.inv().map_err(|_| TwistError::NotInvertible)?;
    let m = h.dim * h.dim;
    let mut inv = vec![Scalar::zero(); m];
    for (i, c) in rel.iter() {
        if *i == 0 {
            continue;
        }
        let k = &scale * c;
        for (slot, p) in inv.iter_mut().zip(&powers[*i - 1]) {
            if !p.is_zero() {
                *slot += &(&k * p);
            }
        }
    }
    Ok(inv)
}

impl CocycleForm {
    /// Check normalization and the cocycle identity exhaustively, then solve
    /// for the convolution inverse.
    pub fn new(h: &HopfData, table: Vec<Scalar>) -> Result<Self, TwistError> {
        let n = h.dim;
        if table.len() != n * n {
            return Err(TwistError::InvalidCocycle(format!("table has {} entries, expected {}", table.len(), n * n)));
        }
        for x in 0..n {
            let bx = SparseVec::unit(x);
            let l = eval(&table, n, &bx, &h.unit);
            let r = eval(&table, n, &h.unit, &bx);
            if l != h.counit[x] || r != h.counit[x] {
                return Err(TwistError::InvalidCocycle(format!("not normalized at {}", h.labels[x])));
            }
        }
        // p[x][y] = sigma(x_1, y_1) x_2 y_2
        let p: Vec<SparseVec> = (0..n * n)
            .map(|xy| {
                let (x, y) = (xy / n, xy % n);
                let mut terms = Vec::new();
                for (a, b, c) in &h.comult[x] {
                    for (a2, b2, c2) in &h.comult[y] {
                        let s = &table[a * n + a2];
                        if s.is_zero() {
                            continue;
                        }
                        let k = &(c * c2) * s;
                        terms.extend(h.mul_basis(*b, *b2).iter().map(|(i, z)| (*i, &k * z)));
                    }
                }
                SparseVec::from_pairs(terms)
            })
            .collect();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // sigma(x_1, y_1) sigma(x_2 y_2, z) = sigma(y_1, z_1) sigma(x, y_2 z_2)
                    let lhs = eval(&table, n, &p[x * n + y], &SparseVec::unit(z));
                    let rhs = eval(&table, n, &SparseVec::unit(x), &p[y * n + z]);
                    if lhs != rhs {
                        return Err(TwistError::InvalidCocycle(format!(
                            "cocycle identity fails at ({}, {}, {})",
                            h.labels[x], h.labels[y], h.labels[z]
                        )));
                    }
                }
            }
        }
        let inverse_table = convolution_inverse(h, &table)?;
        let e = counit_form(h);
        if convolve(h, &table, &inverse_table) != e || convolve(h, &inverse_table, &table) != e {
            return Err(TwistError::NotInvertible);
        }
        Ok(CocycleForm { parent: h.clone(), table, inverse_table })
    }

    /// `epsilon (x) epsilon`.
    pub fn trivial(h: &HopfData) -> Self {
        let e = counit_form(h);
        CocycleForm { parent: h.clone(), table: e.clone(), inverse_table: e }
    }

    pub fn value(&self, u: &SparseVec, v: &SparseVec) -> Scalar {
        eval(&self.table, self.parent.dim, u, v)
    }

    pub fn inverse_value(&self, u: &SparseVec, v: &SparseVec) -> Scalar {
        eval(&self.inverse_table, self.parent.dim, u, v)
    }

    pub fn is_trivial(&self) -> bool {
        self.table == counit_form(&self.parent)
    }

    /// `sigma^-1` as a 2-cocycle on the twisted algebra, verified there.
    pub fn inverse(&self, twisted: &HopfData) -> Result<CocycleForm, TwistError> {
        CocycleForm::new(twisted, self.inverse_table.clone())
    }
}

/// `[x][y] = sigma(x_1, y_1) sigma^-1(x_3, y_3) [x_2 y_2]`, same coalgebra.
pub fn doi_twist(h: &HopfData, sigma: &CocycleForm) -> Result<HopfData, TwistError> {
    let n = h.dim;
    if sigma.parent.dim != n {
        return Err(TwistError::InvalidCocycle("cocycle belongs to another algebra".into()));
    }
    // Delta^2(b) grouped by the middle leg: mid[b][m] = [(x_1, x_3, c)]
    let mid: Vec<Vec<Vec<(usize, usize, Scalar)>>> = (0..n)
        .map(|b| {
            let mut out = vec![Vec::new(); n];
            for (a, c, k) in &h.comult[b] {
                for (a1, a2, k2) in &h.comult[*a] {
                    out[*a2].push((*a1, *c, k * k2));
                }
            }
            out
        })
        .collect();
    let (s, si) = (&sigma.table, &sigma.inverse_table);
    let mut mult = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut terms = Vec::new();
            for (x2, lx) in mid[x].iter().enumerate().filter(|(_, l)| !l.is_empty()) {
                for (y2, ly) in mid[y].iter().enumerate().filter(|(_, l)| !l.is_empty()) {
                    let prod = h.mul_basis(x2, y2);
                    if prod.is_zero() {
                        continue;
                    }
                    let mut coef = Scalar::zero();
                    for (x1, x3, c) in lx {
                        for (y1, y3, c2) in ly {
                            let a = &s[x1 * n + y1];
                            if a.is_zero() {
                                continue;
                            }
                            let b = &si[x3 * n + y3];
                            if b.is_zero() {
                                continue;
                            }
                            coef += &(&(&(c * c2) * a) * b);
                        }
                    }
                    if !coef.is_zero() {
                        terms.extend(prod.iter().map(|(i, z)| (*i, &coef * z)));
                    }
                }
            }
            mult.push(SparseVec::from_pairs(terms));
        }
    }
    let mut orders = h.exponent;
    for v in s.iter().chain(si) {
        if let Some(o) = builders::root_of_unity_order(v) {
            orders = orders.lcm(&o);
        }
    }
    let note = format!("{} twisted by a 2-cocycle", h.note);
    let comult = h.comult.clone();
    let out = HopfData::from_bialgebra(h.labels.clone(), mult, h.unit.clone(), comult, h.counit.clone(), orders, note)?;
    let r = out.verify();
    if !r.is_hopf() {
        return Err(TwistError::InvalidCocycle(r.first_failure.unwrap_or_default()));
    }
    Ok(out)
}

/// If `sigma(u_ij, u_il) = delta_ij delta_il` and the same for
/// `sigma^-1`, the entries of `cert` form a magic matrix in the twisted
/// algebra. Returns that matrix, verified.
pub fn check_suff_twist(cert: &MagicCert, sigma: &CocycleForm) -> Result<MagicCert, TwistError> {
    let h = &sigma.parent;
    if cert.parent_dim != h.dim {
        return Err(TwistError::Magic(MagicError::ParentMismatch));
    }
    let n = cert.size;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let want = if i == j && i == l { Scalar::one() } else { Scalar::zero() };
                for (which, v) in [
                    ("sigma", sigma.value(cert.entry(i, j), cert.entry(i, l))),
                    ("sigma^-1", sigma.inverse_value(cert.entry(i, j), cert.entry(i, l))),
                ] {
                    if v != want {
                        return Err(TwistError::ConditionFails { i, j, l, which: which.into(), value: v.to_string() });
                    }
                }
            }
        }
    }
    let twisted = doi_twist(h, sigma)?;
    let provenance = vec![Provenance { kind: "twisted".into(), source: "magic matrix carried to H^sigma".into(), size: n }];
    Ok(magic::verify_magic(&twisted, cert.entries.clone(), provenance)?)
}

/// `sigma'(a, b) = s(p(a), p(b))` for a Hopf surjection `p: H -> k Gamma`
/// onto the group algebra of `s.group`.
pub fn lift_cocycle(h: &HopfData, p: &HopfMap, s: &Bicharacter) -> Result<CocycleForm, TwistError> {
    let gamma = &s.group;
    if !gamma.is_abelian() {
        return Err(TwistError::NotBicharacter("group is not abelian".into()));
    }
    let kg = builders::group_algebra(gamma);
    p.verify(h, &kg).map_err(|e| TwistError::NotHopfSurjection(e.to_string()))?;
    if p.rank() != kg.dim {
        return Err(TwistError::NotHopfSurjection(format!("image has dimension {} < {}", p.rank(), kg.dim)));
    }
    let m = gamma.order();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let l = s.value(gamma.mul(a, b), c);
                let r = s.value(a, c) * s.value(b, c);
                let l2 = s.value(a, gamma.mul(b, c));
                let r2 = s.value(a, b) * s.value(a, c);
                if *l != r || *l2 != r2 {
                    return Err(TwistError::NotBicharacter(format!("fails at ({a}, {b}, {c})")));
                }
            }
        }
    }
    let n = h.dim;
    let mut table = vec![Scalar::zero(); n * n];
    for x in 0..n {
        for y in 0..n {
            let mut acc = Scalar::zero();
            for (g, cg) in p.images[x].iter() {
                for (k, ck) in p.images[y].iter() {
                    acc += &(&(cg * ck) * s.value(*g, *k));
                }
            }
            table[x * n + y] = acc;
        }
    }
    CocycleForm::new(h, table)
}

/// For `A` abelian inside `G`: the character group of `A` as a permutation
/// group and the Hopf surjection `k^G -> k^A -> k(A^)`,
/// `e_a -> (1/|A|) sum_chi chi(a)^-1 chi`.
#[derive(Clone, Debug)]
pub struct CharacterProjection {
    pub dual_group: PermGroup,
    pub map: HopfMap,
    /// `characters[i]` is the character at index `i` of `dual_group`, as
    /// values on the elements of `A`.
    pub characters: Vec<Vec<Scalar>>,
}

pub fn character_projection(g: &PermGroup, a: &PermGroup) -> Result<CharacterProjection, TwistError> {
    if !a.is_subgroup_of(g) {
        return Err(TwistError::NotHopfSurjection("A is not a subgroup of G".into()));
    }
    let chars = a.characters().map_err(|e| TwistError::NotBicharacter(e.to_string()))?;
    let m = chars.len();
    let find = |v: &Vec<Scalar>| chars.iter().position(|c| c == v).expect("characters form a group");
    // regular permutation representation of the character group
    let perms: Vec<Perm> = (0..m)
        .map(|i| {
            let images: Vec<u32> = (0..m)
                .map(|j| {
                    let prod: Vec<Scalar> = chars[i].iter().zip(&chars[j]).map(|(x, y)| x * y).collect();
                    find(&prod) as u32
                })
                .collect();
            Perm::from_images(images)
        })
        .collect();
    let dual = PermGroup::closure(m, &perms).map_err(|e| TwistError::NotBicharacter(e.to_string()))?;
    let mut characters = vec![Vec::new(); m];
    for (i, p) in perms.iter().enumerate() {
        characters[dual.index_of(p).expect("in closure")] = chars[i].clone();
    }
    let inv_order = Scalar::from_rational(num_rational::BigRational::new(1.into(), (m as i64).into()));
    let images = g
        .elements()
        .iter()
        .map(|x| match a.index_of(x) {
            None => SparseVec::new(),
            Some(ai) => SparseVec::from_pairs(
                characters
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (k, &c[ai].inv().expect("roots of unity are invertible") * &inv_order))
                    .collect(),
            ),
        })
        .collect();
    Ok(CharacterProjection { dual_group: dual, map: HopfMap::new(g.order(), m, images), characters })
}
