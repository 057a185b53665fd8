use super::*;
use crate::complex::equivalent;
use crate::ring::{F2, Q, Z};
use proptest::prelude::*;

fn w(n: usize, s: &str) -> BraidWord {
    BraidWord::parse(n, s).unwrap()
}

#[test]
fn parse_and_display() {
    let b = w(3, "s1 s2^-1 s1^2");
    assert_eq!(b.letters(), &[1, -2, 1, 1]);
    assert_eq!(b.to_string(), "s1 s2^-1 s1 s1");
    assert_eq!(BraidWord::parse(3, &b.to_string()).unwrap(), b);
    assert!(BraidWord::parse(3, "s3").is_err());
    assert!(BraidWord::parse(3, "x1").is_err());
    assert_eq!(BraidWord::parse(2, "").unwrap(), BraidWord::identity(2));
}

#[test]
fn twist_words_and_permutations() {
    assert_eq!(q_braid(3).letters(), &[2, 1]);
    assert_eq!(full_twist(3).len(), 6);
    for n in 1..6 {
        let id: Vec<usize> = (0..n).collect();
        assert_eq!(full_twist(n).permutation(), id);
        let mut p = q_braid(n).permutation();
        // an n-cycle
        let mut k = 0;
        for step in 1..=n {
            k = p[k];
            assert_eq!(k == 0, step == n);
        }
        p.sort();
        assert_eq!(p, id);
    }
}

#[test]
fn cabling() {
    assert_eq!(cable(&w(2, "s1"), 2).letters(), &[2, 3, 1, 2]);
    assert_eq!(cable(&w(2, "s1^-1"), 2).letters(), &[-2, -1, -3, -2]);
    assert_eq!(cable(&w(3, "s1 s2"), 1), w(3, "s1 s2"));
    assert_eq!(cable_widths(&w(2, "s1"), &[2, 1]).letters(), &[2, 1]);
    assert_eq!(cable_widths(&w(2, "s1"), &[1, 2]).letters(), &[1, 2]);
    let t = full_twist(3);
    assert_eq!(cable(&t, 2).strands(), 6);
    assert_eq!(cable(&t, 2).len(), 24);
}

#[test]
fn psl2z_relations() {
    let m = |s: &str| braid_to_psl2z(&w(3, s)).unwrap();
    assert_eq!(m("s1 s2 s1"), m("s2 s1 s2"));
    assert_eq!(m("s1 s2 s1"), IntMatrix2([[0, 1], [-1, 0]]));
    assert_eq!(m("s1 s2 s1 s1 s2 s1"), IntMatrix2::I.neg());
    assert!(m("s1 s2 s1 s2 s1 s2").projectively_eq(&IntMatrix2::I));
    assert_eq!(braid_to_psl2z(&full_twist(3)).unwrap(), IntMatrix2::I.neg());
    assert_eq!(m("s1 s1^-1"), IntMatrix2::I);
    assert!(braid_to_psl2z(&w(2, "s1")).is_err());
}

#[test]
fn rewriting() {
    let a = w(3, "s1 s2 s1 s1 s2 s1");
    let b = w(3, "s1 s2 s1 s2 s1 s2");
    assert!(matches!(braid_words_equal(&a, &b, 100_000), RewriteOutcome::Equal { .. }));
    assert!(matches!(braid_words_equal(&a, &full_twist(3), 100_000), RewriteOutcome::Equal { .. }));
    assert!(matches!(
        braid_words_equal(&w(3, "s1"), &w(3, "s2"), 100_000),
        RewriteOutcome::NotEqual { .. }
    ));
    assert!(matches!(
        braid_words_equal(&w(3, "s1 s2 s2^-1"), &w(3, "s1"), 100_000),
        RewriteOutcome::Equal { .. }
    ));
    assert!(matches!(
        braid_words_equal(&w(3, "s1 s2 s1^-1"), &w(3, "s2^-1 s1 s2"), 100_000),
        RewriteOutcome::Equal { .. }
    ));
    assert!(matches!(braid_words_equal(&a, &full_twist(3).pow(2), 3), RewriteOutcome::Budget { .. }));
    let class = braid_class(&a, 100_000).unwrap();
    assert!(class.contains(full_twist(3).letters()));
}

#[test]
fn cable_of_inverse_pair_reduces() {
    let b = w(3, "s1 s2^-1 s2");
    let c = cable(&(&b * &b.inverse()), 2);
    assert!(c.free_reduce().is_empty());
}

#[test]
fn sliced_tangles() {
    let k = SlicedTangle::kink(true);
    assert_eq!(k.widths().unwrap(), vec![1, 3, 3, 1]);
    let c = SlicedTangle::closure(&w(2, "s1"));
    assert_eq!(c.widths().unwrap(), vec![0, 2, 4, 4, 2, 0]);
    assert!(SlicedTangle::new(2, vec![Slice::Cap { i: 2 }]).is_err());
    let json = serde_json::to_string(&k).unwrap();
    assert_eq!(
        json,
        r#"{"bottom":1,"slices":[{"op":"cup","i":2},{"op":"crossing","i":1,"positive":true},{"op":"cap","i":2}]}"#
    );
    let back: SlicedTangle = serde_json::from_str(&json).unwrap();
    assert_eq!(back, k);
    assert_eq!(SlicedTangle::framed_twist(2, true).crossings(), (4, 0));
}

#[test]
fn crossing_complexes_are_valid() {
    for pos in [true, false] {
        let c = crossing_complex::<Z>(3, 2, pos).unwrap();
        assert!(c.check().is_valid());
        assert_eq!(c.len(), 2);
    }
    assert!(crossing_complex::<Z>(3, 3, true).is_err());
}

#[test]
fn unknot_is_two_empty_diagrams() {
    let c = kh_bracket::<Z>(&SlicedTangle::closure(&BraidWord::identity(1))).unwrap();
    let ms: Vec<(i32, i32)> = c.objects().iter().map(|o| (o.degree.t2, o.degree.q)).collect();
    assert_eq!(ms, vec![(0, -1), (0, 1)]);
}

#[test]
fn reidemeister_two_and_three() {
    let id = Complex::<Z>::identity(2);
    for s in ["s1 s1^-1", "s1^-1 s1"] {
        let c = kh_braid::<Z>(&w(2, s)).unwrap();
        assert!(equivalent(&c, &id).is_yes(), "{s}");
    }
    let a = kh_braid::<Z>(&w(3, "s1 s2 s1")).unwrap();
    let b = kh_braid::<Z>(&w(3, "s2 s1 s2")).unwrap();
    assert!(equivalent(&a, &b).is_yes());
    let a = kh_braid::<Z>(&w(3, "s1^-1 s2^-1 s1^-1")).unwrap();
    let b = kh_braid::<Z>(&w(3, "s2^-1 s1^-1 s2^-1")).unwrap();
    assert!(equivalent(&a, &b).is_yes());
    let c = kh_braid::<Z>(&w(3, "s1 s2")).unwrap();
    let d = kh_braid::<Z>(&w(3, "s2 s1")).unwrap();
    assert!(equivalent(&c, &d).is_no());
}

#[test]
fn reidemeister_one_shift() {
    let one = Complex::<Z>::identity(1);
    let p = kh_bracket::<Z>(&SlicedTangle::kink(true)).unwrap();
    assert!(equivalent(&p, &one.shift(Degree::new(-1, -1))).is_yes());
    let n = kh_bracket::<Z>(&SlicedTangle::kink(false)).unwrap();
    assert!(equivalent(&n, &one.shift(Degree::new(1, 1))).is_yes());
}

#[test]
fn trefoil_ranks_and_torsion() {
    let t = SlicedTangle::closure(&w(2, "s1 s1 s1"));
    let z = kh_bracket::<Z>(&t).unwrap();
    let q = kh_bracket::<Q>(&t).unwrap();
    let f = kh_bracket::<F2>(&t).unwrap();
    assert_eq!(q.len(), 4);
    assert_eq!(f.len(), 6);
    assert_eq!(z.len(), 6);
    assert_eq!(z.diff().len(), 1);
    let hopf = kh_bracket::<Q>(&SlicedTangle::closure(&w(2, "s1 s1"))).unwrap();
    assert_eq!(hopf.len(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn psl2z_is_a_homomorphism(a in proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..12),
                               b in proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..12)) {
        let u = BraidWord::new(3, a).unwrap();
        let v = BraidWord::new(3, b).unwrap();
        let m = braid_to_psl2z(&(&u * &v)).unwrap();
        prop_assert_eq!(m, braid_to_psl2z(&u).unwrap() * braid_to_psl2z(&v).unwrap());
        prop_assert_eq!(braid_to_psl2z(&(&u * &u.inverse())).unwrap(), IntMatrix2::I);
    }

    #[test]
    fn cabling_respects_permutations(a in proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..6), c in 1usize..4) {
        let u = BraidWord::new(3, a).unwrap();
        let p = u.permutation();
        let pc = cable(&u, c).permutation();
        for k in 0..3 {
            for j in 0..c {
                prop_assert_eq!(pc[k * c + j], p[k] * c + j);
            }
        }
    }

    #[test]
    fn inverse_braid_cancels_up_to_homotopy(a in proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 1..3)) {
        let u = BraidWord::new(3, a).unwrap();
        let c = kh_braid::<Z>(&(&u * &u.inverse())).unwrap();
        prop_assert!(equivalent(&c, &Complex::identity(3)).is_yes());
    }
}


#[test]
fn full_twist_is_central() {
    assert!(center_commute_check::<Z>(2, 1).unwrap().pass);
    for i in 1..3 {
        let r = center_commute_check::<Z>(3, i).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.complexes, "yes");
    }
    let r = center_commute_check::<Z>(4, 2).unwrap();
    assert!(r.pass && r.complexes == "skipped");
    let r = commute_check::<Z>(&q_braid(3), 1, true).unwrap();
    assert!(!r.permutations_equal && !r.pass);
}

#[test]
fn modular_relations() {
    let r = psl2z_relation_report(100_000).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.twist_matrix, IntMatrix2::I.neg());
    let tiny = psl2z_relation_report(3).unwrap();
    assert!(!tiny.pass);
    assert!(tiny.rewriting.iter().any(|x| matches!(x.2, RewriteOutcome::Budget { .. })));
}
