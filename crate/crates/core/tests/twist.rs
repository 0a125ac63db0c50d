use qpa_core::builders::*;
use qpa_core::hopf::HopfMap;
use qpa_core::linalg::{Scalar, SparseVec};
use qpa_core::magic;
use qpa_core::permgrp::{Perm, PermGroup};
use qpa_core::twist::*;

fn klein_four(gens: [&str; 2]) -> PermGroup {
    let p = |s: &str| Perm::parse(s, 4).unwrap();
    PermGroup::closure(4, &[p(gens[0]), p(gens[1])]).unwrap()
}

fn klein_cocycle() -> (PermGroup, CocycleForm) {
    lifted(klein_four(["(12)", "(34)"]))
}

fn lifted(a: PermGroup) -> (PermGroup, CocycleForm) {
    let g = PermGroup::symmetric(4);
    let h = function_algebra(&g);
    let proj = character_projection(&g, &a).unwrap();
    let gens = proj.dual_group.greedy_generators();
    let s = triangular_bicharacter(&proj.dual_group, &gens).unwrap();
    (g, lift_cocycle(&h, &proj.map, &s).unwrap())
}

// sigma(e_a, e_b) as a function on G x G, cocycle identity written out with
// Delta(e_g) = sum_(st = g) e_s (x) e_t and e_s e_t = delta_st e_s
fn function_algebra_cocycle_holds(g: &PermGroup, s: &[Scalar]) -> bool {
    let n = g.order();
    let sig = |a: usize, b: usize| s[a * n + b].clone();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut lhs = Scalar::zero();
                let mut rhs = Scalar::zero();
                for t in 0..n {
                    // a = a1 t, b = b1 t
                    let a1 = g.mul(a, g.inv(t));
                    let b1 = g.mul(b, g.inv(t));
                    lhs += &(&sig(a1, b1) * &sig(t, c));
                    // b = b1 t, c = c1 t
                    let c1 = g.mul(c, g.inv(t));
                    rhs += &(&sig(b1, c1) * &sig(a, t));
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn trivial_twist_is_identity() {
    let g = PermGroup::symmetric(3);
    let h = function_algebra(&g);
    let t = doi_twist(&h, &CocycleForm::trivial(&h)).unwrap();
    assert_eq!(t.mult, h.mult);
    assert!(t.same_structure(&h));

    let proj = character_projection(&g, &PermGroup::closure(3, &[Perm::parse("(123)", 3).unwrap()]).unwrap()).unwrap();
    let s = Bicharacter::trivial(&proj.dual_group);
    let sigma = lift_cocycle(&h, &proj.map, &s).unwrap();
    assert!(sigma.is_trivial());
    assert_eq!(doi_twist(&h, &sigma).unwrap().mult, h.mult);
}

#[test]
fn klein_four_twist_of_s4() {
    let (g, sigma) = klein_cocycle();
    assert!(!sigma.is_trivial());
    assert!(function_algebra_cocycle_holds(&g, &sigma.table));
    let h = &sigma.parent;
    let t = doi_twist(h, &sigma).unwrap();
    assert_eq!(t.dim, 24);
    let r = t.verify();
    assert!(r.is_hopf(), "{r:?}");
    assert!(!r.commutative);
    assert_eq!(t.comult, h.comult);
    assert_eq!(t.counit, h.counit);

    let back = doi_twist(&t, &sigma.inverse(&t).unwrap()).unwrap();
    assert_eq!(back.mult, h.mult);
}

#[test]
fn normal_klein_four_twist_stays_commutative() {
    // conjugation preserves the alternating form of the cocycle
    let (g, sigma) = lifted(klein_four(["(12)(34)", "(13)(24)"]));
    assert!(!sigma.is_trivial());
    assert!(function_algebra_cocycle_holds(&g, &sigma.table));
    let r = doi_twist(&sigma.parent, &sigma).unwrap().verify();
    assert!(r.is_hopf() && r.commutative);
}

#[test]
fn projection_is_a_hopf_surjection() {
    let g = PermGroup::symmetric(4);
    let proj = character_projection(&g, &klein_four(["(12)", "(34)"])).unwrap();
    assert_eq!(proj.dual_group.order(), 4);
    proj.map.verify(&function_algebra(&g), &group_algebra(&proj.dual_group)).unwrap();
    assert_eq!(proj.map.rank(), 4);
}

#[test]
fn broken_tables_are_rejected() {
    let g = PermGroup::cyclic(2);
    let h = function_algebra(&g);
    let mut t = CocycleForm::trivial(&h).table;
    t[3] = Scalar::from_int(5);
    assert!(matches!(CocycleForm::new(&h, t), Err(TwistError::InvalidCocycle(_))));

    // a map that is not onto
    let proj = character_projection(&g, &g).unwrap();
    let zero = HopfMap::new(2, 2, vec![SparseVec::unit(0), SparseVec::unit(0)]);
    let s = Bicharacter::trivial(&proj.dual_group);
    assert!(matches!(lift_cocycle(&h, &zero, &s), Err(TwistError::NotHopfSurjection(_))));
}

#[test]
fn heisenberg_cocycle() {
    let (u, v) = (Perm::parse("(123)", 6).unwrap(), Perm::parse("(456)", 6).unwrap());
    let g = PermGroup::closure(6, &[u, v]).unwrap();
    let h = function_algebra(&g);
    let proj = character_projection(&g, &g).unwrap();
    let gens = proj.dual_group.greedy_generators();
    let s = heisenberg_bicharacter(&proj.dual_group, &gens[0], &gens[1], 3).unwrap();
    let sigma = lift_cocycle(&h, &proj.map, &s).unwrap();
    assert!(function_algebra_cocycle_holds(&g, &sigma.table));
    // k^A is cocommutative here, so the twist leaves it unchanged
    assert_eq!(doi_twist(&h, &sigma).unwrap().mult, h.mult);
    // the group-algebra side: the twisted group algebra is central simple
    let tga = twisted_group_algebra(&s).unwrap();
    assert_eq!(tga.dim(), 9);
    assert_eq!(tga.center().len(), 1);
}

#[test]
fn suff_twist_trivial_keeps_certificate() {
    let g = PermGroup::symmetric(3);
    let h = function_algebra(&g);
    let cert = magic::cayley_magic(&h, &g).unwrap();
    let out = check_suff_twist(&cert, &CocycleForm::trivial(&h)).unwrap();
    assert_eq!(out.entries, cert.entries);
    assert!(out.is_full_certificate);
}

#[test]
fn suff_twist_klein_four_on_cayley() {
    let (g, sigma) = klein_cocycle();
    let cert = magic::cayley_magic(&sigma.parent, &g).unwrap();
    let got = check_suff_twist(&cert, &sigma);
    // oracle: u_ij = e_(g_i^-1 g_j), look up sigma directly
    let n = g.order();
    let mut first = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let (a, b) = (g.mul(g.inv(i), j), g.mul(g.inv(i), l));
                let want = if i == j && i == l { Scalar::one() } else { Scalar::zero() };
                if sigma.table[a * n + b] != want {
                    first = Some((i, j, l));
                    break 'outer;
                }
            }
        }
    }
    match (got, first) {
        (Err(TwistError::ConditionFails { i, j, l, which, .. }), Some(f)) => {
            assert_eq!(which, "sigma");
            assert_eq!((i, j, l), f);
        }
        (Ok(c), None) => assert!(c.is_full_certificate),
        (got, first) => panic!("{got:?} vs {first:?}"),
    }
    assert_eq!(first, Some((0, 0, 0)));
}

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn lifted_fixtures() -> Vec<(String, PermGroup, CocycleForm)> {
    let mut out = Vec::new();
    for name in ["klein_four.toml", "zn_zn.toml"] {
        let bc = qpa_core::io::load_bicharacter(&fixture(name), qpa_core::permgrp::DEFAULT_ORDER_CAP).unwrap();
        let sigma = bc.lifted().unwrap().unwrap();
        out.push((name.to_string(), bc.lift.unwrap().0, sigma));
    }
    out
}

// sigma(u, v) straight from the table
fn evaluate(sigma: &CocycleForm, u: &SparseVec, v: &SparseVec) -> Scalar {
    let n = sigma.parent.dim;
    let mut acc = Scalar::zero();
    for (a, x) in u.iter() {
        for (b, y) in v.iter() {
            acc += &(&(x * y) * &sigma.table[a * n + b]);
        }
    }
    acc
}

fn check_outcome(sigma: &CocycleForm, cert: &magic::MagicCert, twisted: &qpa_core::hopf::HopfData) -> bool {
    match check_suff_twist(cert, sigma) {
        Ok(t) => {
            let again = magic::verify_magic(twisted, t.entries.clone(), vec![]).unwrap();
            assert_eq!(again.size, cert.size);
            if cert.is_full_certificate {
                assert!(t.is_full_certificate);
            }
            true
        }
        Err(TwistError::ConditionFails { i, j, l, which, .. }) => {
            let want = if i == j && i == l { Scalar::one() } else { Scalar::zero() };
            if which == "sigma" {
                assert_ne!(evaluate(sigma, cert.entry(i, j), cert.entry(i, l)), want);
            }
            false
        }
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn suff_twist_over_fixtures() {
    for (name, g, sigma) in lifted_fixtures() {
        let twisted = doi_twist(&sigma.parent, &sigma).unwrap();
        let mut held = Vec::new();
        for k in g.subgroups(qpa_core::permgrp::SubgroupFilter::All) {
            let cert = magic::coset_magic(&sigma.parent, &g, &k).unwrap();
            if check_outcome(&sigma, &cert, &twisted) {
                held.push((k.order(), cert.is_full_certificate));
            }
        }
        assert!(!held.is_empty(), "{name}");
        if name == "klein_four.toml" {
            // the natural action on 4 points survives the twist
            assert!(held.contains(&(6, true)), "{held:?}");
        }
    }
}

#[test]
fn clifford_relations() {
    let bc = qpa_core::io::load_bicharacter(&fixture("clifford.toml"), 100).unwrap();
    let t = twisted_group_algebra(&bc.sigma).unwrap();
    assert_eq!(t.dim(), 8);
    let one = t.basis(&Perm::identity(6));
    for (i, a) in bc.gens.iter().enumerate() {
        let ta = t.basis(a);
        assert_eq!(t.mul(&ta, &ta), one);
        for b in &bc.gens[i + 1..] {
            let tb = t.basis(b);
            assert_eq!(t.mul(&ta, &tb), t.mul(&tb, &ta).scaled(&Scalar::from_int(-1)));
        }
    }
}

#[test]
fn zn_zn_fixture_is_central_simple() {
    let bc = qpa_core::io::load_bicharacter(&fixture("zn_zn.toml"), 100).unwrap();
    let g = &bc.sigma.group;
    // sigma((i,j),(t,l)) = w^(jt) with a = (1,0), b = (0,1)
    let (a, b) = (&bc.gens[0], &bc.gens[1]);
    for (i, j, t, l) in [(0, 1, 1, 0), (1, 2, 2, 1), (2, 2, 2, 2), (1, 0, 0, 1)] {
        let x = g.index_of(&a.pow(i).compose(&b.pow(j))).unwrap();
        let y = g.index_of(&a.pow(t).compose(&b.pow(l))).unwrap();
        assert_eq!(*bc.sigma.value(x, y), qpa_core::exactnum::Cyclotomic::root_of_unity(3, j * t));
    }
    let tga = twisted_group_algebra(&bc.sigma).unwrap();
    assert_eq!((tga.dim(), tga.center().len()), (9, 1));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn suff_twist_on_random_coset_actions(a in 0usize..24, b in 0usize..24) {
            let (_, g, sigma) = lifted_fixtures().remove(0);
            let k = g.generated_by(&[g.element(a).clone(), g.element(b).clone()]);
            let cert = magic::coset_magic(&sigma.parent, &g, &k).unwrap();
            let twisted = doi_twist(&sigma.parent, &sigma).unwrap();
            check_outcome(&sigma, &cert, &twisted);
        }
    }
}
