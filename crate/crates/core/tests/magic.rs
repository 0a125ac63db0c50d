mod common;

use qpa_core::builders::*;
use qpa_core::hopf;
use qpa_core::linalg::{Scalar, SparseVec};
use qpa_core::magic::*;
use qpa_core::permgrp::{Perm, PermGroup};

use common::{magic_identities, magic_relations};

fn p(s: &str, n: usize) -> Perm {
    Perm::parse(s, n).unwrap()
}

fn idx(g: &PermGroup, s: &str) -> usize {
    g.index_of(&p(s, g.degree())).unwrap()
}

#[test]
fn identity_style_matrix() {
    let h = group_algebra(&PermGroup::symmetric(3));
    let c = identity_magic(&h, 4).unwrap();
    assert_eq!(c.generated_dim, 1);
    assert!(!c.is_full_certificate);
    magic_identities(&h, &c.entries).unwrap();
}

#[test]
fn broken_row_sum_has_witness() {
    let s3 = PermGroup::symmetric(3);
    let h = function_algebra(&s3);
    let mut u = cayley_magic(&h, &s3).unwrap().entries;
    u[0][0] = SparseVec::new();
    assert!(magic_identities(&h, &u).is_err());
    match verify_magic(&h, u, vec![]) {
        Err(MagicError::RelationFailure { identity, indices, .. }) => {
            assert!(!identity.is_empty());
            assert!(!indices.is_empty());
        }
        other => panic!("expected a relation failure, got {other:?}"),
    }
}

#[test]
fn cayley_examples() {
    let t = PermGroup::trivial(1);
    let c = cayley_magic(&function_algebra(&t), &t).unwrap();
    assert_eq!((c.size, c.generated_dim), (1, 1));

    let z2 = PermGroup::cyclic(2);
    let h = function_algebra(&z2);
    let c = cayley_magic(&h, &z2).unwrap();
    assert_eq!(c.entries[0][0], SparseVec::unit(0));
    assert_eq!(c.entries[0][1], SparseVec::unit(1));
    assert!(c.is_full_certificate);

    let s3 = PermGroup::symmetric(3);
    let h = function_algebra(&s3);
    let c = cayley_magic(&h, &s3).unwrap();
    assert_eq!(c.degree(), 6);
    assert!(c.is_full_certificate);
    magic_identities(&h, &c.entries).unwrap();
}

#[test]
fn fourier_examples() {
    let s3 = PermGroup::symmetric(3);
    let h = group_algebra(&s3);
    let c = fourier_magic(&h, &s3, 0).unwrap();
    assert_eq!(c.size, 1);
    assert_eq!(c.entries[0][0], h.unit);

    let t = idx(&s3, "(12)");
    let c = fourier_magic(&h, &s3, t).unwrap();
    let half = Scalar::from_ratio(1, 2);
    let plus = SparseVec::from_pairs(vec![(0, half.clone()), (t, half.clone())]);
    let minus = SparseVec::from_pairs(vec![(0, half.clone()), (t, -&half)]);
    assert_eq!(c.entries, vec![vec![plus.clone(), minus.clone()], vec![minus, plus]]);
    magic_identities(&h, &c.entries).unwrap();

    let r = idx(&s3, "(123)");
    let c = fourier_magic(&h, &s3, r).unwrap();
    assert_eq!(c.size, 3);
    assert_eq!(c.generated_dim, 3);
    magic_identities(&h, &c.entries).unwrap();
    let seed: Vec<SparseVec> = c.entries.iter().flatten().cloned().collect();
    let span = hopf::subalgebra_span_growth(&h, &seed);
    let cyclic: Vec<SparseVec> = (0..3).map(|k| SparseVec::unit(s3.index_of(&s3.element(r).pow(k)).unwrap())).collect();
    assert_eq!(qpa_core::linalg::rank(&[span.clone(), cyclic].concat()), span.len());
}

#[test]
fn block_examples() {
    let s3 = PermGroup::symmetric(3);
    let h = group_algebra(&s3);
    let a = fourier_magic(&h, &s3, idx(&s3, "(12)")).unwrap();
    let b = fourier_magic(&h, &s3, idx(&s3, "(123)")).unwrap();
    let c = block_compose(&h, &[a.clone(), b.clone()]).unwrap();
    assert_eq!(c.size, a.size + b.size);
    assert_eq!(c.size, 5);
    assert!(c.is_full_certificate);
    assert_eq!(c.degree_line(), "2 + 3 = 5");
    magic_identities(&h, &c.entries).unwrap();

    let single = block_compose(&h, &[b.clone()]).unwrap();
    assert_eq!(single.entries, b.entries);

    let f = function_algebra(&s3);
    let cay = cayley_magic(&f, &s3).unwrap();
    let padded = block_compose(&f, &[cay, identity_magic(&f, 1).unwrap()]).unwrap();
    assert_eq!(padded.size, 7);
    assert!(padded.is_full_certificate);

    let other = group_algebra(&PermGroup::symmetric(4));
    assert!(matches!(block_compose(&other, &[padded]), Err(MagicError::ParentMismatch)));
}

#[test]
fn doubles() {
    for (g, bound, expect) in [(PermGroup::trivial(1), 2, 2), (PermGroup::cyclic(2), 4, 4), (PermGroup::symmetric(3), 42, 11)] {
        let d = drinfeld_double(&g).unwrap();
        let kg = group_algebra(&g);
        let fg = function_algebra(&g);
        let cg = group_algebra_certificate(&kg, &g).unwrap();
        let cf = cayley_magic(&fg, &g).unwrap();
        let c = double_magic(&d, &cg, &cf).unwrap();
        assert!(c.size <= bound);
        assert_eq!(c.size, expect);
        assert!(c.is_full_certificate);
        assert_eq!(c.generated_dim, d.double.dim);
        assert_eq!(hopf::subalgebra_span_growth(&d.double, &c.entries.concat()).len(), d.double.dim);
        magic_identities(&d.double, &c.entries).unwrap();
    }
}

#[test]
fn antipode_applied_entrywise() {
    let s3 = PermGroup::symmetric(3);
    let h = group_algebra(&s3);
    let f = function_algebra(&s3);
    let d = drinfeld_double(&s3).unwrap();
    let cg = group_algebra_certificate(&h, &s3).unwrap();
    let cf = cayley_magic(&f, &s3).unwrap();
    let cd = double_magic(&d, &cg, &cf).unwrap();
    for (h, c) in [(&h, &cg), (&f, &cf), (&d.double, &cd)] {
        let s: Vec<Vec<SparseVec>> = c.entries.iter().map(|r| r.iter().map(|v| h.antipode_of(v)).collect()).collect();
        magic_relations(h, &s).unwrap();
        for i in 0..c.size {
            for j in 0..c.size {
                assert_eq!(s[i][j], c.entries[j][i]);
            }
        }
    }
}

#[test]
fn generated_dim_is_monotone() {
    let s4 = PermGroup::symmetric(4);
    let h = group_algebra(&s4);
    let blocks: Vec<MagicCert> =
        ["(12)", "(1234)", "(123)"].iter().map(|s| fourier_magic(&h, &s4, idx(&s4, s)).unwrap()).collect();
    let mut last = 0;
    for k in 1..=blocks.len() {
        let c = block_compose(&h, &blocks[..k]).unwrap();
        assert_eq!(c.size, blocks[..k].iter().map(|b| b.size).sum::<usize>());
        assert!(c.generated_dim >= last);
        last = c.generated_dim;
    }
    assert_eq!(last, 24);
}

#[test]
fn json_round_trip() {
    let s3 = PermGroup::symmetric(3);
    let h = group_algebra(&s3);
    let c = group_algebra_certificate(&h, &s3).unwrap();
    let back = MagicCert::from_json(&h, &c.to_json()).unwrap();
    assert_eq!(back, c);
    let f = function_algebra(&s3);
    assert!(MagicCert::from_json(&f, &c.to_json()).is_err());
}
