use qpa_core::builders::*;
use qpa_core::coideal::*;
use qpa_core::linalg::{Scalar, SparseVec};
use qpa_core::magic;
use qpa_core::matchedpair::MatchedPair;
use qpa_core::permgrp::{Perm, PermGroup};

fn p(s: &str, n: usize) -> Perm {
    Perm::parse(s, n).unwrap()
}

fn orthogonal_complete(h: &qpa_core::hopf::HopfData, f: &[SparseVec]) {
    let mut sum = SparseVec::new();
    for (i, a) in f.iter().enumerate() {
        sum = sum.add(a);
        for (j, b) in f.iter().enumerate() {
            let want = if i == j { a.clone() } else { SparseVec::new() };
            assert_eq!(h.mul(a, b), want);
        }
    }
    assert_eq!(sum, h.unit);
}

#[test]
fn function_algebra_idempotents_and_cayley() {
    let g = PermGroup::symmetric(3);
    let h = function_algebra(&g);
    let l = check(&h, (0..6).map(SparseVec::unit).collect(), CoidealSide::Left, "k^G").unwrap();
    let f = primitive_idempotents(&h, &l, h.exponent).unwrap();
    assert_eq!(f, (0..6).map(SparseVec::unit).collect::<Vec<_>>());
    let c = coefficient_matrix(&h, &l).unwrap();
    assert!(c.is_full_certificate);
    // left coefficients come out as e_{g h^-1}; the Cayley matrix uses e_{g^-1 h}
    for a in 0..6 {
        for b in 0..6 {
            assert_eq!(c.entries[a][b], SparseVec::unit(g.mul(a, g.inv(b))));
        }
    }
    let r = check(&h, (0..6).map(SparseVec::unit).collect(), CoidealSide::Right, "k^G").unwrap();
    let c = coefficient_matrix(&h, &r).unwrap();
    for a in 0..6 {
        for b in 0..6 {
            assert_eq!(c.entries[a][b], SparseVec::unit(g.mul(g.inv(a), b)));
        }
    }
    assert_eq!(c.entries, magic::cayley_magic(&h, &g).unwrap().entries);
}

#[test]
fn cyclic_group_algebra_idempotents() {
    let g = PermGroup::symmetric(3);
    let h = group_algebra(&g);
    let x = g.index_of(&p("(123)", 3)).unwrap();
    let x2 = g.mul(x, x);
    let l = check(&h, vec![SparseVec::unit(0), SparseVec::unit(x), SparseVec::unit(x2)], CoidealSide::Left, "k<x>")
        .unwrap();
    assert!(l.commutative && l.separable);
    let f = primitive_idempotents(&h, &l, 3).unwrap();
    assert_eq!(f.len(), 3);
    orthogonal_complete(&h, &f);
    // oracle: (1/3) sum_k w^(-jk) x^k for j = 0, 1, 2
    for j in 0..3i64 {
        let want = SparseVec::from_pairs(
            [0, x, x2]
                .iter()
                .enumerate()
                .map(|(k, &e)| {
                    (e, &qpa_core::exactnum::Cyclotomic::root_of_unity(3, -j * k as i64) * &Scalar::from_ratio(1, 3))
                })
                .collect(),
        );
        assert!(f.contains(&want));
    }
    let c = coefficient_matrix(&h, &l).unwrap();
    assert_eq!(c.size, 3);
    assert_eq!(c.generated_dim, 3);
}

#[test]
fn lx_in_central_extension() {
    let d = drinfeld_double(&PermGroup::symmetric(3)).unwrap();
    let (b, _) = d.dual_as_bicrossed().unwrap();
    for x in 0..6 {
        let l = construct_named(&b, &NamedKind::Lx(x)).unwrap();
        let ord = b.mp.f.element(x).order();
        assert_eq!(l.dim(), 6 * ord);
        assert!(l.commutative && l.separable);
        let f = primitive_idempotents(&b.hopf, &l, b.hopf.exponent).unwrap();
        assert_eq!(f.len(), 6 * ord);
        orthogonal_complete(&b.hopf, &f);
        let c = coefficient_matrix(&b.hopf, &l).unwrap();
        assert_eq!(c.size, 6 * ord);
    }
}

#[test]
fn named_in_c4_s3() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    let t13 = PermGroup::closure(4, &[p("(13)", 4)]).unwrap();
    let r = construct_named(&b, &NamedKind::OneKT(t13.clone())).unwrap();
    assert_eq!(r.dim(), 2);
    assert!(r.commutative);
    let g = construct_named(&b, &NamedKind::KGH).unwrap();
    assert_eq!(g.dim(), 8);
    assert!(b.hopf.is_hopf_subalgebra(&g.basis));
    // equals k^C4 # k<(13)>
    let x13 = b.mp.f.index_of(&p("(13)", 4)).unwrap();
    let mut kc4 = Vec::new();
    for y in [0, x13] {
        kc4.extend((0..4).map(|s| SparseVec::unit(b.index(s, y))));
    }
    assert!(g.is_contained_in(&kc4));
    assert!(r.is_contained_in(&g.basis));
    // <| is nontrivial here
    assert!(matches!(construct_named(&b, &NamedKind::Lx(x13)), Err(CoidealError::PreconditionViolated(_))));
    let s3 = b.mp.f.clone();
    assert!(matches!(construct_named(&b, &NamedKind::OneKT(s3.generated_by(&[p("(12)", 4)]))), Err(_)));
}

#[test]
fn xt_in_semidirect() {
    // the D(G)* pair: Gamma acts on F by conjugation, <| trivial
    let d = drinfeld_double(&PermGroup::symmetric(3)).unwrap();
    let (b, _) = d.dual_as_bicrossed().unwrap();
    let f = &b.mp.f;
    for t in f.subgroups(qpa_core::permgrp::SubgroupFilter::All) {
        let r = construct_named(&b, &NamedKind::XT(t.clone())).unwrap();
        assert_eq!(r.commutative, t.is_abelian());
        let ga = graded_analysis(&b, &r).unwrap();
        assert!(ga.all_hold(), "{ga:?}");
        assert!(ga.contains_function_algebra);
        // support is the Gamma-orbit closure of T
        let mut orbit: Vec<usize> = Vec::new();
        for y in t.elements() {
            let yi = f.index_of(y).unwrap();
            for g in 0..b.mp.ngamma() {
                orbit.push(b.mp.act_left(g, yi));
            }
        }
        orbit.sort();
        orbit.dedup();
        assert_eq!(ga.support, orbit);
    }
}

#[test]
fn graded_analysis_one_kt() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    let t13 = PermGroup::closure(4, &[p("(13)", 4)]).unwrap();
    let r = construct_named(&b, &NamedKind::OneKT(t13)).unwrap();
    let ga = graded_analysis(&b, &r).unwrap();
    assert!(ga.all_hold());
    assert_eq!(ga.t_stable, Some(true));
    assert_eq!(ga.support.len(), 2);
    let unit = check(&b.hopf, vec![b.hopf.unit.clone()], CoidealSide::Right, "k1").unwrap();
    let ga = graded_analysis(&b, &unit).unwrap();
    assert_eq!(ga.support, vec![0]);
    assert_eq!(ga.t, vec![0]);
    assert!(ga.all_hold());
}

#[test]
fn antipode_swaps_sides() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    let t13 = PermGroup::closure(4, &[p("(13)", 4)]).unwrap();
    let r = construct_named(&b, &NamedKind::OneKT(t13)).unwrap();
    let l = antipode_image(&b.hopf, &r).unwrap();
    assert_eq!(l.side, CoidealSide::Left);
    let back = antipode_image(&b.hopf, &l).unwrap();
    assert!(back.is_contained_in(&r.basis) && r.is_contained_in(&back.basis));
}
