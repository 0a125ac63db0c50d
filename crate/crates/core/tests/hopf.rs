use std::collections::BTreeMap;

use proptest::prelude::*;
use qpa_core::builders::*;
use qpa_core::hopf::{self, HopfData, HopfMap};
use qpa_core::linalg::{self, Scalar, SparseVec};
use qpa_core::magic;
use qpa_core::matchedpair::MatchedPair;
use qpa_core::modp::ModP;
use qpa_core::permgrp::{Perm, PermGroup};

type Dense = BTreeMap<usize, Scalar>;
type Dense2 = BTreeMap<(usize, usize), Scalar>;

fn acc<K: Ord>(m: &mut BTreeMap<K, Scalar>, k: K, c: Scalar) {
    let e = m.entry(k).or_insert_with(Scalar::zero);
    *e = &*e + &c;
}

fn clean<K: Ord>(mut m: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
    m.retain(|_, c| !c.is_zero());
    m
}

fn prod(h: &HopfData, a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (i, x) in a {
        for (j, y) in b {
            for (k, z) in h.mult[i * h.dim + j].iter() {
                acc(&mut out, *k, &(x * y) * z);
            }
        }
    }
    clean(out)
}

fn basis(i: usize) -> Dense {
    BTreeMap::from([(i, Scalar::one())])
}

fn cop(h: &HopfData, i: usize) -> Dense2 {
    let mut out = Dense2::new();
    for (a, b, c) in &h.comult[i] {
        acc(&mut out, (*a, *b), c.clone());
    }
    clean(out)
}

/// Direct evaluation of every Hopf identity on basis elements, from the raw
/// tables only.
fn oracle_is_hopf(h: &HopfData) -> bool {
    let n = h.dim;
    let unit: Dense = h.unit.iter().cloned().collect();
    for i in 0..n {
        if prod(h, &unit, &basis(i)) != basis(i) || prod(h, &basis(i), &unit) != basis(i) {
            return false;
        }
        for j in 0..n {
            let ij = prod(h, &basis(i), &basis(j));
            for k in 0..n {
                if prod(h, &ij, &basis(k)) != prod(h, &basis(i), &prod(h, &basis(j), &basis(k))) {
                    return false;
                }
            }
            // Delta(b_i b_j) = Delta(b_i) Delta(b_j)
            let mut lhs = Dense2::new();
            for (k, c) in &ij {
                for ((p, q), d) in cop(h, *k) {
                    acc(&mut lhs, (p, q), c * &d);
                }
            }
            let mut rhs = Dense2::new();
            for ((a, b), c) in cop(h, i) {
                for ((e, f), d) in cop(h, j) {
                    let l = prod(h, &basis(a), &basis(e));
                    let r = prod(h, &basis(b), &basis(f));
                    for (p, x) in &l {
                        for (q, y) in &r {
                            acc(&mut rhs, (*p, *q), &(&c * &d) * &(x * y));
                        }
                    }
                }
            }
            if clean(lhs) != clean(rhs) {
                return false;
            }
            let eps_ij: Scalar = ij.iter().fold(Scalar::zero(), |s, (k, c)| &s + &(c * &h.counit[*k]));
            if eps_ij != &h.counit[i] * &h.counit[j] {
                return false;
            }
        }
        // coassociativity and counit
        let d = cop(h, i);
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        let (mut l_eps, mut r_eps) = (Dense::new(), Dense::new());
        for ((a, b), c) in &d {
            for ((p, q), e) in cop(h, *a) {
                acc(&mut left, (p, q, *b), c * &e);
            }
            for ((p, q), e) in cop(h, *b) {
                acc(&mut right, (*a, p, q), c * &e);
            }
            acc(&mut l_eps, *b, c * &h.counit[*a]);
            acc(&mut r_eps, *a, c * &h.counit[*b]);
        }
        if clean(left) != clean(right) || clean(l_eps) != basis(i) || clean(r_eps) != basis(i) {
            return false;
        }
        // antipode on both sides
        let target: Dense = clean(unit.iter().map(|(k, c)| (*k, c * &h.counit[i])).collect());
        let s = |v: usize| -> Dense { h.antipode[v].iter().cloned().collect() };
        let (mut sl, mut sr) = (Dense::new(), Dense::new());
        for ((a, b), c) in &d {
            for (k, x) in prod(h, &s(*a), &basis(*b)) {
                acc(&mut sl, k, c * &x);
            }
            for (k, x) in prod(h, &basis(*a), &s(*b)) {
                acc(&mut sr, k, c * &x);
            }
        }
        if clean(sl) != target || clean(sr) != target {
            return false;
        }
    }
    true
}

fn p(s: &str, n: usize) -> Perm {
    Perm::parse(s, n).unwrap()
}

#[test]
fn verify_examples() {
    let s3 = PermGroup::symmetric(3);
    let r = function_algebra(&s3).verify();
    assert!(r.is_hopf() && r.s_squared_identity && r.commutative && !r.cocommutative);
    let r = group_algebra(&s3).verify();
    assert!(r.is_hopf() && r.s_squared_identity && r.cocommutative && !r.commutative);
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    let r = b.hopf.verify();
    assert!(r.is_hopf() && r.s_squared_identity && !r.commutative && !r.cocommutative);
    assert!(oracle_is_hopf(&b.hopf));
}

#[test]
fn oracle_rejects_broken_tables() {
    let mut h = group_algebra(&PermGroup::cyclic(3));
    h.antipode[1] = SparseVec::unit(1);
    assert!(!oracle_is_hopf(&h));
    assert!(!h.verify().is_hopf());
}

#[test]
fn antipode_examples() {
    let s3 = PermGroup::symmetric(3);
    for h in [function_algebra(&s3), group_algebra(&s3)] {
        let s = hopf::solve_antipode(&h).unwrap();
        for g in 0..6 {
            assert_eq!(s[g], SparseVec::unit(s3.inv(g)));
        }
    }
    let b = bicrossed(&MatchedPair::cyclic_symmetric(5), None).unwrap();
    let mut bare = b.hopf.clone();
    bare.antipode.clear();
    assert!(!bare.has_antipode());
    bare.antipode = hopf::solve_antipode(&bare).unwrap();
    assert_eq!(bare.antipode, b.hopf.antipode);
    // split bismash product: S(e_g # x) = e_{(g <| x)^-1} # (g |> x)^-1
    let mp = &b.mp;
    for g in 0..mp.ngamma() {
        for x in 0..mp.nf() {
            let g2 = mp.gamma.inv(mp.act_right(g, x));
            let x2 = mp.f.inv(mp.act_left(g, x));
            assert_eq!(bare.antipode[b.index(g, x)], SparseVec::unit(b.index(g2, x2)));
        }
    }
}

#[test]
fn antipode_absent_for_non_hopf_bialgebra() {
    // the monoid {1, 0} under multiplication: a bialgebra with no antipode
    let one = Scalar::one();
    let mult = vec![SparseVec::unit(0), SparseVec::unit(1), SparseVec::unit(1), SparseVec::unit(1)];
    let comult = vec![vec![(0, 0, one.clone())], vec![(1, 1, one.clone())]];
    let h = HopfData::without_antipode(
        vec!["1".into(), "0".into()],
        mult,
        SparseVec::unit(0),
        comult,
        vec![one.clone(), one],
        1,
        "monoid",
    )
    .unwrap();
    assert!(matches!(hopf::solve_antipode(&h), Err(hopf::HopfError::NoAntipode)));
}

#[test]
fn duals() {
    let s3 = PermGroup::symmetric(3);
    assert!(function_algebra(&s3).dual().same_structure(&group_algebra(&s3)));
    let d = drinfeld_double(&s3).unwrap();
    assert!(d.double.dual().dual().same_structure(&d.double));
    let b = bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap();
    let dual = b.hopf.dual();
    assert_eq!(dual.dim, 24);
    assert!(oracle_is_hopf(&dual));
    assert!(b.dual_is_transposed().unwrap());
}

#[test]
fn coinvariant_examples() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(5), None).unwrap();
    let hbar = b.f_group_algebra();
    let co = hopf::coinvariants(&b.hopf, &hbar, &b.pi());
    assert_eq!(co.len(), 5);
    let image: Vec<SparseVec> = b.iota().images.clone();
    assert_eq!(linalg::rank(&[co.clone(), image].concat()), 5);

    let h = group_algebra(&PermGroup::symmetric(3));
    let co = hopf::coinvariants(&h, &h, &HopfMap::identity(6));
    assert_eq!(co.len(), 1);
    assert!(hopf::scalar_of_unit(&h, &co[0]).is_some());

    let k = HopfData::trivial();
    let co = hopf::coinvariants(&h, &k, &HopfMap::counit_map(&h));
    assert_eq!(co.len(), 6);
}

#[test]
fn exact_sequences() {
    let b = bicrossed(&MatchedPair::cyclic_symmetric(5), None).unwrap();
    let r = b.exact_sequence();
    assert!(r.all());
    assert_eq!(r.dims, (5, 120, 24));

    let d = drinfeld_double(&PermGroup::symmetric(3)).unwrap();
    let (r, central) = d.central_sequence();
    assert!(r.all() && central);
    assert_eq!(r.dims, (6, 36, 6));

    let h = function_algebra(&PermGroup::cyclic(3));
    let k = HopfData::trivial();
    let r = hopf::verify_exact_sequence(&h, &h, &k, &HopfMap::identity(3), &HopfMap::counit_map(&h));
    assert!(r.all());
    let r = hopf::verify_exact_sequence(&h, &h, &h, &HopfMap::identity(3), &HopfMap::identity(3));
    assert!(!r.all() && !r.dimension_identity);
}

#[test]
fn span_growth_examples() {
    let s3 = PermGroup::symmetric(3);
    let h = function_algebra(&s3);
    assert_eq!(hopf::subalgebra_span_growth(&h, &[h.one()]).len(), 1);
    let cayley = magic::cayley_magic(&h, &s3).unwrap();
    let seed: Vec<SparseVec> = cayley.entries.iter().flatten().cloned().collect();
    assert_eq!(hopf::subalgebra_span_growth(&h, &seed).len(), 6);

    let b = bicrossed(&MatchedPair::cyclic_symmetric(5), None).unwrap();
    let c = PermGroup::closure(5, &[p("(1342)", 5)]).unwrap();
    let kernel = b.mp.trivially_acting_kernel();
    let mut seed = Vec::new();
    for sub in [&c, &kernel] {
        for x in sub.elements() {
            let xi = b.mp.f.index_of(x).unwrap();
            for g in 0..5 {
                seed.push(SparseVec::unit(b.index(g, xi)));
            }
        }
    }
    let span = hopf::subalgebra_span_growth(&b.hopf, &seed);
    assert_eq!(span.len(), 20);
    assert!(b.hopf.subalgebra_witness(&span).is_none());
    assert!(b.hopf.is_hopf_subalgebra(&span));
}

fn arb_seed(dim: usize) -> impl Strategy<Value = Vec<SparseVec>> {
    prop::collection::vec(prop::collection::vec((0..dim, -3i64..=3), 1..4), 1..3).prop_map(|vs| {
        vs.into_iter()
            .map(|terms| SparseVec::from_pairs(terms.into_iter().map(|(i, c)| (i, Scalar::from_int(c))).collect()))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modular_dimension_is_a_lower_bound(seed in arb_seed(24), which in 0usize..3) {
        let h = match which {
            0 => bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap().hopf,
            1 => group_algebra(&PermGroup::symmetric(4)),
            _ => bicrossed(&MatchedPair::cyclic_symmetric(4), None).unwrap().hopf.dual(),
        };
        let exact = hopf::subalgebra_span_growth(&h, &seed);
        for skip in 0..2 {
            let m = ModP::new(h.exponent.max(1), skip);
            if let Some(d) = hopf::subalgebra_dim_mod_p(&h, &seed, &m) {
                prop_assert!(d <= exact.len());
            }
        }
        prop_assert_eq!(hopf::generated_dim(&h, &seed), exact.len());
        prop_assert!(h.subalgebra_witness(&exact).is_none());
    }
}
