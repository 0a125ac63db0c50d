use qpa_core::builders::*;
use qpa_core::hopf::{self, HopfMap};
use qpa_core::linalg::{Scalar, SparseVec};
use qpa_core::matchedpair::MatchedPair;
use qpa_core::permgrp::{Perm, PermGroup};

fn p(s: &str, n: usize) -> Perm {
    Perm::parse(s, n).unwrap()
}

#[test]
fn dual_of_function_algebra_is_group_algebra() {
    let g = PermGroup::symmetric(3);
    assert!(function_algebra(&g).dual().same_structure(&group_algebra(&g)));
}

#[test]
fn c4_s3_bicrossed() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    assert_eq!(b.hopf.dim, 24);
    let r = b.hopf.verify();
    assert!(r.is_hopf() && r.s_squared_identity);
    assert!(!r.commutative && !r.cocommutative);
    let seq = b.exact_sequence();
    assert!(seq.all(), "{seq:?}");

    // oracle: product of basis elements straight from the defining formula
    let mp = &b.mp;
    for g in 0..4 {
        for x in 0..6 {
            for h in 0..4 {
                for y in 0..6 {
                    let got = b.hopf.mul_basis(b.index(g, x), b.index(h, y));
                    let want = if mp.act_right(g, x) == h {
                        SparseVec::unit(b.index(g, mp.f.mul(x, y)))
                    } else {
                        SparseVec::new()
                    };
                    assert_eq!(*got, want);
                }
            }
        }
    }
}

#[test]
fn c5_s4_bicrossed() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(5), None).unwrap();
    assert_eq!(b.hopf.dim, 120);
    assert!(b.hopf.verify().s_squared_identity);
    let seq = b.exact_sequence();
    assert!(seq.all());
    assert_eq!(seq.dims, (5, 120, 24));
}

#[test]
fn trivial_actions_give_tensor_product() {
    let gens = [p("(12)", 5), p("(345)", 5)];
    let mp = MatchedPair::from_generators(5, &gens, &gens[..1], &gens[1..]).unwrap();
    assert!(mp.left_trivial() && mp.right_trivial());
    let b = bicrossed(&mp, None).unwrap();
    let t = function_algebra(&mp.gamma).tensor_product(&group_algebra(&mp.f));
    assert!(b.hopf.same_structure(&t));
    let gl = b.grouplikes_split().unwrap();
    assert_eq!(gl.order(), 3 * 2);
}

#[test]
fn grouplikes_of_c4_s3() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    let gl = b.grouplikes_split().unwrap();
    assert_eq!(gl.order(), 8);
    assert!(!gl.is_abelian());
    // D4: five involutions, two elements of order 4
    assert_eq!(gl.order_statistics(), vec![(1, 1), (2, 5), (4, 2)]);
}

#[test]
fn grouplikes_of_c5_s4() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(5), None).unwrap();
    let gl = b.grouplikes_split().unwrap();
    assert_eq!(gl.order(), 20);
    // oracle: the fixed points of |> counted directly from the action table
    let fixed = (0..b.mp.nf()).filter(|&x| (0..5).all(|g| b.mp.act_left(g, x) == x)).count();
    assert_eq!(fixed, 4);
    assert_eq!(gl.order_statistics(), vec![(1, 1), (2, 5), (4, 10), (5, 4)]);
}

#[test]
fn dual_matches_transposed_pair() {
    for n in [3, 4, 5] {
        let mp = MatchedPair::cyclic_symmetric(n);
        let b = bicrossed(&mp, None).unwrap();
        let t = bicrossed(&mp.transposed().unwrap(), None).unwrap();
        let perm = dual_to_transposed(&b, &t);
        assert!(b.hopf.dual().permuted(&perm).same_structure(&t.hopf), "n = {n}");
        assert!(b.dual_is_transposed().unwrap());
    }
}

// as = (s^-1 a^-1)^-1, refactored through the original pair
fn dual_to_transposed(b: &Bicrossed, t: &Bicrossed) -> Vec<usize> {
    let mp = &b.mp;
    let mut out = vec![0; b.hopf.dim];
    for a in 0..mp.nf() {
        for s in 0..mp.ngamma() {
            let (si, ai) = (mp.gamma.inv(s), mp.f.inv(a));
            let g = mp.gamma.inv(mp.act_right(si, ai));
            let x = mp.f.inv(mp.act_left(si, ai));
            out[t.index(a, s)] = b.index(g, x);
        }
    }
    assert_eq!(out, b.transposed_dual_matching(t));
    out
}

#[test]
fn drinfeld_double_s3() {
    let d = drinfeld_double(&PermGroup::symmetric(3)).unwrap();
    assert_eq!(d.double.dim, 36);
    assert!(d.double.dual().dual().same_structure(&d.double));
    let (seq, central) = d.central_sequence();
    assert!(seq.all() && central);
    assert_eq!(seq.dims, (6, 36, 6));
    d.function_inclusion().verify(&function_algebra(&d.group), &d.double).unwrap();
    d.group_inclusion().verify(&group_algebra(&d.group), &d.double).unwrap();

    let (b, perm) = d.dual_as_bicrossed().unwrap();
    assert!(b.mp.right_trivial());
    assert!(d.dual.permuted(&perm).same_structure(&b.hopf));

    // generated by the images of k^G and kG
    let mut seed = d.function_inclusion().images;
    seed.extend(d.group_inclusion().images);
    assert_eq!(hopf::subalgebra_span_growth(&d.double, &seed).len(), 36);
}

#[test]
fn drinfeld_double_abelian_is_tensor() {
    let g = PermGroup::cyclic(3);
    let d = drinfeld_double(&g).unwrap();
    let r = d.double.verify();
    assert!(r.commutative && r.cocommutative);
    assert!(d.double.same_structure(&function_algebra(&g).tensor_product(&group_algebra(&g))));
}

#[test]
fn bad_cocycles_rejected() {
    let mp = MatchedPair::cyclic_symmetric(3);
    let mut c = CocyclePair::trivial(&mp);
    c.set_sigma(1, 1, 1, Scalar::from_int(2));
    assert!(matches!(bicrossed(&mp, Some(c)), Err(BuildError::IncompatibleCocycles(_))));
    let mut c = CocyclePair::trivial(&mp);
    c.set_tau(0, 0, 1, Scalar::from_int(-1));
    assert!(matches!(bicrossed(&mp, Some(c)), Err(BuildError::NotNormalized(_))));
}

#[test]
fn clifford_and_heisenberg() {
    let (t1, t2) = (p("(12)", 4), p("(34)", 4));
    let g = PermGroup::closure(4, &[t1.clone(), t2.clone()]).unwrap();
    let a = twisted_group_algebra(&triangular_bicharacter(&g, &[t1.clone(), t2.clone()]).unwrap()).unwrap();
    let (x, y) = (a.basis(&t1), a.basis(&t2));
    assert_eq!(a.mul(&x, &y), a.mul(&y, &x).scaled(&Scalar::from_int(-1)));
    assert_eq!(a.mul(&x, &x), SparseVec::unit(0));
    assert_eq!(a.center().len(), 1);

    let (u, v) = (p("(123)", 6), p("(456)", 6));
    let g = PermGroup::closure(6, &[u.clone(), v.clone()]).unwrap();
    let s = heisenberg_bicharacter(&g, &u, &v, 3).unwrap();
    let a = twisted_group_algebra(&s).unwrap();
    assert_eq!(a.dim(), 9);
    assert!(!a.is_commutative());
    assert_eq!(a.center().len(), 1);

    let triv = twisted_group_algebra(&Bicharacter::trivial(&g)).unwrap();
    assert!(triv.is_commutative());
    assert_eq!(triv.center().len(), 9);
}

#[test]
fn non_bicharacter_rejected() {
    let g = PermGroup::cyclic(2);
    let r = Bicharacter::from_fn(&g, |a, b| Scalar::from_int(if a == 1 && b == 1 { 2 } else { 1 }));
    assert!(matches!(r, Err(BuildError::NotBicharacter(_))));
    assert!(matches!(Bicharacter::from_fn(&PermGroup::symmetric(3), |_, _| Scalar::one()), Err(BuildError::NotAbelian)));
}

#[test]
fn iota_and_pi_are_hopf_maps() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    b.iota().verify(&b.gamma_function_algebra(), &b.hopf).unwrap();
    b.pi().verify(&b.hopf, &b.f_group_algebra()).unwrap();
    let triv = HopfMap::counit_map(&b.hopf);
    assert_eq!(hopf::coinvariants(&b.hopf, &qpa_core::hopf::HopfData::trivial(), &triv).len(), 24);
}
