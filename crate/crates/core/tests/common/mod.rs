#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::prelude::*;
use qpa_core::builders::{drinfeld_double, function_algebra, group_algebra};
use qpa_core::coideal::{self, CoidealSide};
use qpa_core::hopf::{self, HopfData};
use qpa_core::linalg::{Scalar, SparseVec};
use qpa_core::magic::{self, MagicCert};
use qpa_core::permgrp::{Perm, PermGroup};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

type Vector = BTreeMap<usize, Scalar>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    let e = m.entry(k).or_insert_with(Scalar::zero);
    *e = &*e + &c;
}

fn canonical<K: Ord>(mut m: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
    m.retain(|_, c| !c.is_zero());
    m
}

fn vector(v: &SparseVec) -> Vector {
    canonical(v.iter().cloned().collect())
}

fn product(h: &HopfData, a: &Vector, b: &Vector) -> Vector {
    let mut out = Vector::new();
    for (i, x) in a {
        for (j, y) in b {
            for (k, z) in h.mult[i * h.dim + j].iter() {
                add_to(&mut out, *k, &(x * y) * z);
            }
        }
    }
    canonical(out)
}

fn coproduct(h: &HopfData, a: &Vector) -> BTreeMap<(usize, usize), Scalar> {
    let mut out = BTreeMap::new();
    for (i, x) in a {
        for (p, q, c) in &h.comult[*i] {
            add_to(&mut out, (*p, *q), x * c);
        }
    }
    canonical(out)
}

/// Exhaustive check of the magic-matrix and corepresentation identities,
/// written against the raw structure tables. Returns the first failing
/// identity.
pub fn magic_identities(h: &HopfData, u: &[Vec<SparseVec>]) -> Result<(), String> {
    magic_relations(h, u)?;
    corepresentation(h, u)
}

/// Orthogonality of rows and columns and the unit sums only.
pub fn magic_relations(h: &HopfData, u: &[Vec<SparseVec>]) -> Result<(), String> {
    let n = u.len();
    let u: Vec<Vec<Vector>> = u.iter().map(|r| r.iter().map(vector).collect()).collect();
    let one = vector(&h.unit);
    let zero = Vector::new();
    for i in 0..n {
        let mut row = Vector::new();
        let mut col = Vector::new();
        for l in 0..n {
            for (k, c) in &u[i][l] {
                add_to(&mut row, *k, c.clone());
            }
            for (k, c) in &u[l][i] {
                add_to(&mut col, *k, c.clone());
            }
        }
        if canonical(row) != one {
            return Err(format!("row sum {i}"));
        }
        if canonical(col) != one {
            return Err(format!("column sum {i}"));
        }
        for j in 0..n {
            for k in 0..n {
                let want = if j == k { &u[i][j] } else { &zero };
                if &product(h, &u[i][j], &u[i][k]) != want {
                    return Err(format!("u{i}{j} u{i}{k}"));
                }
                let want = if i == k { &u[i][j] } else { &zero };
                if &product(h, &u[i][j], &u[k][j]) != want {
                    return Err(format!("u{i}{j} u{k}{j}"));
                }
            }
        }
    }
    Ok(())
}

/// `Delta(u_ij) = sum_k u_ik (x) u_kj`, `eps(u_ij) = delta_ij`, `S(u_ij) = u_ji`.
pub fn corepresentation(h: &HopfData, u: &[Vec<SparseVec>]) -> Result<(), String> {
    let n = u.len();
    let u: Vec<Vec<Vector>> = u.iter().map(|r| r.iter().map(vector).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            let mut rhs = BTreeMap::new();
            for k in 0..n {
                for (a, x) in &u[i][k] {
                    for (b, y) in &u[k][j] {
                        add_to(&mut rhs, (*a, *b), x * y);
                    }
                }
            }
            if coproduct(h, &u[i][j]) != canonical(rhs) {
                return Err(format!("coproduct of u{i}{j}"));
            }
            let eps = u[i][j].iter().fold(Scalar::zero(), |s, (k, c)| &s + &(c * &h.counit[*k]));
            let want = if i == j { Scalar::one() } else { Scalar::zero() };
            if eps != want {
                return Err(format!("counit of u{i}{j}"));
            }
            let mut s = Vector::new();
            for (k, c) in &u[i][j] {
                for (m, d) in h.antipode[*k].iter() {
                    add_to(&mut s, *m, c * d);
                }
            }
            if canonical(s) != u[j][i] {
                return Err(format!("antipode of u{i}{j}"));
            }
        }
    }
    Ok(())
}

/// A random subgroup of `S_5` of order at most 24, plus two element indices.
pub fn small_instance() -> impl Strategy<Value = (PermGroup, usize, usize)> {
    let s5 = PermGroup::symmetric(5);
    (prop::collection::vec(0usize..120, 1..3), any::<usize>(), any::<usize>()).prop_filter_map(
        "order at most 24",
        move |(idx, a, b)| {
            let gens: Vec<Perm> = idx.iter().map(|&i| s5.element(i).clone()).collect();
            let g = PermGroup::closure(5, &gens).unwrap();
            let n = g.order();
            (n <= 24).then_some((g, a % n, b % n))
        },
    )
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

/// Everything a certificate must satisfy, checked independently of the
/// library's own verifier where possible.
pub fn check_cert(h: &HopfData, c: &MagicCert, what: &str) -> Result<(), String> {
    ensure(c.size == c.entries.len(), format!("{what}: size"))?;
    magic_identities(h, &c.entries).map_err(|e| format!("{what}: {e}"))?;
    let span = hopf::subalgebra_span_growth(h, &c.entries.concat());
    ensure(span.len() == c.generated_dim, format!("{what}: generated dim"))?;
    ensure(c.is_full_certificate == (span.len() == h.dim), format!("{what}: full flag"))?;
    let text = serde_json::to_string(&c.to_json()).map_err(|e| e.to_string())?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let back = MagicCert::from_json(h, &value).map_err(|e| format!("{what}: {e}"))?;
    ensure(&back == c, format!("{what}: json round trip"))?;
    back.reverify(h).map_err(|e| format!("{what}: {e}"))?;
    Ok(())
}

fn core_is_trivial(g: &PermGroup, k: &PermGroup) -> bool {
    k.elements().iter().all(|x| {
        x.is_identity() || g.elements().iter().any(|a| !k.contains(&a.compose(x).compose(&a.inverse())))
    })
}

pub fn check_instance(g: &PermGroup, a: usize, b: usize) -> Result<(), String> {
    let f = function_algebra(g);
    let kg = group_algebra(g);
    ensure(f.dual().dual().same_structure(&f), "dual dual of k^G")?;
    ensure(kg.dual().dual().same_structure(&kg), "dual dual of kG")?;
    ensure(f.dual().same_structure(&kg), "dual of k^G")?;
    if g.order() <= 6 {
        let d = drinfeld_double(g).map_err(|e| e.to_string())?;
        ensure(d.double.dual().dual().same_structure(&d.double), "dual dual of D(G)")?;
    }

    let err = |e: &dyn std::fmt::Display| e.to_string();
    let k = g.generated_by(&[g.element(a).clone()]);
    let cay = magic::cayley_magic(&f, g).map_err(|e| err(&e))?;
    check_cert(&f, &cay, "cayley")?;
    let cos = magic::coset_magic(&f, g, &k).map_err(|e| err(&e))?;
    check_cert(&f, &cos, "cosets")?;
    ensure(cos.is_full_certificate == core_is_trivial(g, &k), "coset generation vs core")?;
    check_cert(&f, &magic::block_compose(&f, &[cay, cos]).map_err(|e| err(&e))?, "blocks")?;

    // functions constant on the cosets xK form a left coideal subalgebra
    let mut seen = vec![false; g.order()];
    let mut basis = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let coset: Vec<usize> = k.elements().iter().map(|y| g.mul(x, g.index_of(y).unwrap())).collect();
        for &c in &coset {
            seen[c] = true;
        }
        basis.push(SparseVec::from_pairs(coset.into_iter().map(|c| (c, Scalar::one())).collect()));
    }
    let l = coideal::check(&f, basis, CoidealSide::Left, "k^(G/K)").map_err(|e| err(&e))?;
    check_cert(&f, &coideal::coefficient_matrix(&f, &l).map_err(|e| err(&e))?, "coefficients in k^G")?;

    check_cert(&kg, &magic::group_algebra_certificate(&kg, g).map_err(|e| err(&e))?, "fourier blocks")?;
    check_cert(&kg, &magic::fourier_magic(&kg, g, b).map_err(|e| err(&e))?, "fourier")?;
    let x = g.element(b);
    let powers: Vec<SparseVec> = (0..x.order()).map(|i| SparseVec::unit(g.index_of(&x.pow(i as i64)).unwrap())).collect();
    for side in [CoidealSide::Left, CoidealSide::Right] {
        let l = coideal::check(&kg, powers.clone(), side, "k<x>").map_err(|e| err(&e))?;
        check_cert(&kg, &coideal::coefficient_matrix(&kg, &l).map_err(|e| err(&e))?, "coefficients in kG")?;
    }
    Ok(())
}
