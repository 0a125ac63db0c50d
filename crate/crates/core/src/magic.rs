//! Magic matrices with entries in a Hopf algebra, and their use as
//! certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders::DrinfeldDouble;
use crate::exactnum::Cyclotomic;
use crate::hopf::{self, HopfData, HopfMap};
use crate::linalg::{Scalar, SparseVec};
use crate::permgrp::PermGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MagicError {
    #[error("relation {identity} fails at {indices:?}: residual {residual}")]
    RelationFailure { identity: String, indices: Vec<usize>, residual: String },
    #[error("matrix is not square")]
    NotSquare,
    #[error("entries generate a subalgebra of dimension {achieved}, not {dim}")]
    GenerationFailure { achieved: usize, dim: usize },
    #[error("certificates have different parents")]
    ParentMismatch,
    #[error("{0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub source: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MagicCert {
    pub parent_dim: usize,
    pub size: usize,
    /// Row-major, `entries[i][j] = u_ij`.
    pub entries: Vec<Vec<SparseVec>>,
    pub generated_dim: usize,
    pub is_full_certificate: bool,
    pub provenance: Vec<Provenance>,
}

fn residual(h: &HopfData, v: &SparseVec) -> String {
    h.format(v)
}

fn fail(identity: &str, indices: Vec<usize>, residual: String) -> MagicError {
    MagicError::RelationFailure { identity: identity.into(), indices, residual }
}

/// Check every relation of a magic matrix that is also a matrix
/// corepresentation, then measure the generated subalgebra.
pub fn verify_magic(h: &HopfData, entries: Vec<Vec<SparseVec>>, provenance: Vec<Provenance>) -> Result<MagicCert, MagicError> {
    let n = entries.len();
    if entries.iter().any(|r| r.len() != n) {
        return Err(MagicError::NotSquare);
    }
    let u = &entries;
    let one = &h.unit;
    for i in 0..n {
        let row = u[i].iter().fold(SparseVec::new(), |a, b| a.add(b));
        if &row != one {
            return Err(fail("row sum", vec![i], residual(h, &row.sub(one))));
        }
        let col = (0..n).fold(SparseVec::new(), |a, k| a.add(&u[k][i]));
        if &col != one {
            return Err(fail("column sum", vec![i], residual(h, &col.sub(one))));
        }
    }
    let products = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            for k in 0..n {
                let p = h.mul(&u[i][j], &u[i][k]);
                let want = if j == k { u[i][j].clone() } else { SparseVec::new() };
                if p != want {
                    return Some(fail("u_ij u_ik = delta_jk u_ij", vec![i, j, k], residual(h, &p.sub(&want))));
                }
                let p = h.mul(&u[i][j], &u[k][j]);
                let want = if i == k { u[i][j].clone() } else { SparseVec::new() };
                if p != want {
                    return Some(fail("u_ij u_kj = delta_ik u_ij", vec![i, j, k], residual(h, &p.sub(&want))));
                }
            }
        }
        None
    });
    if let Some(e) = products {
        return Err(e);
    }
    let coalg = (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            let lhs = h.comul(&u[i][j]);
            let rhs = (0..n).fold(SparseVec::new(), |acc, k| acc.add(&h.outer(&u[i][k], &u[k][j])));
            if lhs != rhs {
                return Some(fail("Delta(u_ij) = sum_k u_ik (x) u_kj", vec![i, j], "tensor mismatch".into()));
            }
            let eps = h.counit_of(&u[i][j]);
            if eps != if i == j { Scalar::one() } else { Scalar::zero() } {
                return Some(fail("eps(u_ij) = delta_ij", vec![i, j], eps.to_string()));
            }
            if h.has_antipode() {
                let s = h.antipode_of(&u[i][j]);
                if s != u[j][i] {
                    return Some(fail("S(u_ij) = u_ji", vec![i, j], residual(h, &s.sub(&u[j][i]))));
                }
            }
        }
        None
    });
    if let Some(e) = coalg {
        return Err(e);
    }
    let seed: Vec<SparseVec> = u.iter().flatten().filter(|v| !v.is_zero()).cloned().collect();
    let generated_dim = hopf::generated_dim(h, &seed);
    Ok(MagicCert {
        parent_dim: h.dim,
        size: n,
        entries,
        generated_dim,
        is_full_certificate: generated_dim == h.dim,
        provenance,
    })
}

impl MagicCert {
    pub fn degree(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparseVec {
        &self.entries[i][j]
    }

    /// Re-run every check against `h`.
    pub fn reverify(&self, h: &HopfData) -> Result<MagicCert, MagicError> {
        if h.dim != self.parent_dim {
            return Err(MagicError::ParentMismatch);
        }
        verify_magic(h, self.entries.clone(), self.provenance.clone())
    }

    /// Require full generation.
    pub fn full(self) -> Result<Self, MagicError> {
        if self.is_full_certificate {
            Ok(self)
        } else {
            Err(MagicError::GenerationFailure { achieved: self.generated_dim, dim: self.parent_dim })
        }
    }

    /// Push the entries through an algebra and coalgebra map and re-verify in
    /// the target.
    pub fn embed(&self, map: &HopfMap, target: &HopfData, source_name: &str) -> Result<MagicCert, MagicError> {
        let entries = self.entries.iter().map(|r| r.iter().map(|v| map.apply(v)).collect()).collect();
        let provenance = self
            .provenance
            .iter()
            .map(|p| Provenance { kind: p.kind.clone(), source: format!("{} via {source_name}", p.source), size: p.size })
            .collect();
        verify_magic(target, entries, provenance)
    }

    /// Sum of block sizes recorded in the provenance, as a readable line.
    pub fn degree_line(&self) -> String {
        let parts: Vec<String> = self.provenance.iter().map(|p| p.size.to_string()).collect();
        format!("{} = {}", parts.join(" + "), self.size)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Vec<Vec<(usize, String)>>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(|(i, c)| (*i, c.to_string())).collect()).collect())
            .collect();
        serde_json::json!({
            "parent_dim": self.parent_dim,
            "size": self.size,
            "entries": entries,
            "generated_dim": self.generated_dim,
            "is_full_certificate": self.is_full_certificate,
            "provenance": self.provenance,
            "degree": self.degree_line(),
        })
    }

    /// Parse a certificate written by [`MagicCert::to_json`] and re-verify it
    /// against `h`; stored flags are recomputed, not trusted.
    pub fn from_json(h: &HopfData, v: &serde_json::Value) -> Result<MagicCert, MagicError> {
        #[derive(Deserialize)]
        struct Raw {
            parent_dim: usize,
            entries: Vec<Vec<Vec<(usize, Cyclotomic)>>>,
            #[serde(default)]
            provenance: Vec<Provenance>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| MagicError::Precondition(e.to_string()))?;
        if raw.parent_dim != h.dim {
            return Err(MagicError::ParentMismatch);
        }
        let entries = raw.entries.into_iter().map(|r| r.into_iter().map(SparseVec::from_pairs).collect()).collect();
        verify_magic(h, entries, raw.provenance)
    }
}

/// `u_ij = delta_ij 1` of the given size.
pub fn identity_magic(h: &HopfData, size: usize) -> Result<MagicCert, MagicError> {
    let entries = (0..size)
        .map(|i| (0..size).map(|j| if i == j { h.unit.clone() } else { SparseVec::new() }).collect())
        .collect();
    verify_magic(h, entries, vec![Provenance { kind: "identity".into(), source: "unit".into(), size }])
}

/// `u_{g,h} = e_{g^-1 h}` in `k^G`, rows and columns indexed by the elements
/// of `G` in their stored order.
pub fn cayley_magic(h: &HopfData, g: &PermGroup) -> Result<MagicCert, MagicError> {
    if h.dim != g.order() {
        return Err(MagicError::Precondition("not the function algebra of this group".into()));
    }
    let n = g.order();
    let entries = (0..n).map(|a| (0..n).map(|b| SparseVec::unit(g.mul(g.inv(a), b))).collect()).collect();
    verify_magic(h, entries, vec![Provenance { kind: "cayley".into(), source: format!("k^G, |G| = {n}"), size: n }])
}

/// The action of `G` on the cosets `gK`: `u_ij = sum of e_g over g with
/// g c_j = c_i`, cosets ordered by their first element. Generates `k^G`
/// exactly when `K` has trivial core.
pub fn coset_magic(h: &HopfData, g: &PermGroup, k: &PermGroup) -> Result<MagicCert, MagicError> {
    if h.dim != g.order() {
        return Err(MagicError::Precondition("not the function algebra of this group".into()));
    }
    let kidx: Vec<usize> = k
        .elements()
        .iter()
        .map(|p| g.index_of(p).ok_or_else(|| MagicError::Precondition(format!("{p} is not in G"))))
        .collect::<Result<_, _>>()?;
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in 0..n {
        if coset_of[a] == usize::MAX {
            for &x in &kidx {
                coset_of[g.mul(a, x)] = reps.len();
            }
            reps.push(a);
        }
    }
    let m = reps.len();
    let mut terms = vec![vec![Vec::new(); m]; m];
    for x in 0..n {
        for (j, &r) in reps.iter().enumerate() {
            terms[coset_of[g.mul(x, r)]][j].push((x, Scalar::one()));
        }
    }
    let entries = terms.into_iter().map(|r| r.into_iter().map(SparseVec::from_pairs).collect()).collect();
    verify_magic(h, entries, vec![Provenance { kind: "cosets".into(), source: format!("G/K, |K| = {}", k.order()), size: m }])
}

/// `u_ij = (1/n) sum_k z^(k(j-i)) g^k` in `kG`, for `g` of order `n`.
pub fn fourier_magic(h: &HopfData, group: &PermGroup, g: usize) -> Result<MagicCert, MagicError> {
    if h.dim != group.order() {
        return Err(MagicError::Precondition("not the group algebra of this group".into()));
    }
    let elt = group.element(g);
    let n = elt.order();
    let powers: Vec<usize> = (0..n).map(|k| group.index_of(&elt.pow(k as i64)).expect("power in group")).collect();
    let inv_n = Scalar::from_ratio(1, n as i64);
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = (j + n - i) % n;
                    SparseVec::from_pairs(
                        (0..n)
                            .map(|k| (powers[k], &Cyclotomic::root_of_unity(n as u32, (k * e % n) as i64) * &inv_n))
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();
    let name = if elt.is_identity() { "1".to_string() } else { elt.to_string() };
    verify_magic(h, entries, vec![Provenance { kind: "fourier".into(), source: format!("<{name}>"), size: n }])
}

/// Block-diagonal composition; the result is re-verified.
pub fn block_compose(h: &HopfData, certs: &[MagicCert]) -> Result<MagicCert, MagicError> {
    if certs.iter().any(|c| c.parent_dim != h.dim) {
        return Err(MagicError::ParentMismatch);
    }
    let n: usize = certs.iter().map(|c| c.size).sum();
    let mut entries = vec![vec![SparseVec::new(); n]; n];
    let mut off = 0;
    for c in certs {
        for i in 0..c.size {
            for j in 0..c.size {
                entries[off + i][off + j] = c.entries[i][j].clone();
            }
        }
        off += c.size;
    }
    let provenance = certs.iter().flat_map(|c| c.provenance.iter().cloned()).collect();
    verify_magic(h, entries, provenance)
}

/// Fourier blocks for a generating set of `G` chosen by descending order.
pub fn group_algebra_certificate(h: &HopfData, group: &PermGroup) -> Result<MagicCert, MagicError> {
    let gens = group.greedy_generators();
    if gens.is_empty() {
        return identity_magic(h, 1);
    }
    let blocks: Vec<MagicCert> = gens
        .iter()
        .map(|g| fourier_magic(h, group, group.index_of(g).expect("generator in group")))
        .collect::<Result<_, _>>()?;
    block_compose(h, &blocks)
}

/// Certificate for `D(G)` from certificates for `kG` and `k^G`, pushed
/// through the canonical inclusions.
pub fn double_magic(d: &DrinfeldDouble, cert_group: &MagicCert, cert_fun: &MagicCert) -> Result<MagicCert, MagicError> {
    let a = cert_group.embed(&d.group_inclusion(), &d.double, "kG -> D(G)")?;
    let b = cert_fun.embed(&d.function_inclusion(), &d.double, "k^G -> D(G)")?;
    block_compose(&d.double, &[a, b])?.full()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{function_algebra, group_algebra};

    #[test]
    fn identity_is_magic() {
        let h = group_algebra(&PermGroup::symmetric(3));
        let c = identity_magic(&h, 3).unwrap();
        assert_eq!(c.generated_dim, 1);
    }

    #[test]
    fn broken_row_sum() {
        let h = function_algebra(&PermGroup::cyclic(2));
        let e = vec![vec![SparseVec::unit(0), SparseVec::unit(0)], vec![SparseVec::unit(1), SparseVec::unit(0)]];
        match verify_magic(&h, e, vec![]) {
            Err(MagicError::RelationFailure { identity, indices, .. }) => {
                assert_eq!(identity, "row sum");
                assert_eq!(indices, vec![0]);
            }
            other => panic!("{other:?}"),
        }
    }
}
