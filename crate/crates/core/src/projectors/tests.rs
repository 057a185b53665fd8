use super::*;
use crate::ring::{F2, Z};
use crate::tl::{euler_bridge_series, framed_twist_eigenvalue, jones_wenzl, through_projectors};

#[test]
fn one_strand() {
    let p = universal_projector::<Z>(1, 5).unwrap();
    assert_eq!(p.base, Complex::identity(1));
    assert_eq!(p.provenance, Provenance::Strand);
    assert_eq!(higher_projector::<Z>(1, 1, 3).unwrap(), p);
}

#[test]
fn p2_shape() {
    let p = universal_projector::<Z>(2, 6).unwrap();
    let objs: Vec<(i32, i32, usize)> = p
        .base
        .objects()
        .iter()
        .map(|o| (o.degree.t2, o.degree.q, o.tangle().through_strands()))
        .collect();
    // 1_2 at the bottom, then one turnback per t-level.
    assert_eq!(objs[0], (0, 0, 2));
    assert_eq!(objs.len(), 7);
    for (j, o) in objs.iter().enumerate().skip(1) {
        assert_eq!((o.0, o.2), (2 * j as i32, 0));
    }
    assert!(p.base.check().is_valid());
    assert!(p.base.objects().iter().all(|o| o.degree.q * 2 >= o.degree.t2));
}

#[test]
fn p2_axioms() {
    let p = universal_projector::<Z>(2, 8).unwrap();
    let e = FlatTangle::generator(2, 1).unwrap();
    let r = check_kill(&p, &e).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.within_t2, Some(12));
    let r = check_idempotent(&p, &p).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(check_kill(&p, &FlatTangle::identity(2)).is_err());
    let one = ProjectorComplex {
        base: Complex::identity(2),
        n: 2,
        k: 2,
        t_hi: None,
        provenance: Provenance::Strand,
    };
    assert_eq!(simplify(&one.base.tensor(&p.base).unwrap()), p.base);
}

#[test]
fn p20_complement() {
    let q = higher_projector::<Z>(2, 0, 6).unwrap();
    assert_eq!(through_degree(&q.base), 0);
    let p = universal_projector::<Z>(2, 6).unwrap();
    assert!(check_idempotent(&p, &q).unwrap().pass);
    assert!(check_idempotent(&q, &p).unwrap().pass);
    assert!(check_idempotent(&q, &q).unwrap().pass);
    assert!(projection_to_identity(&p).is_ok());
}

#[test]
fn euler_bridge_of_p2() {
    let p = universal_projector::<Z>(2, 8).unwrap();
    let jw = jones_wenzl(2).unwrap();
    let r = euler_bridge_series(&p.base, &jw, 8).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.monomial, Some((1, 0)));
    let q = higher_projector::<Z>(2, 0, 6).unwrap();
    let pi = through_projectors(2).unwrap();
    let r = euler_bridge_series(&q.base, &pi[0].1, 6).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn kink_shifts() {
    let p = universal_projector::<Z>(1, 0).unwrap();
    let pos = derive_twist_shift(&p, true).unwrap();
    let neg = derive_twist_shift(&p, false).unwrap();
    assert_eq!(pos.degree, Degree::new(-1, -1));
    assert_eq!(pos.degree + neg.degree, Degree::ZERO);
    assert_eq!(
        predicted_eigenvalue(pos.degree, 1, 0),
        Some(framed_twist_eigenvalue(1, 1, true).unwrap())
    );
    assert_eq!(
        predicted_eigenvalue(neg.degree, 0, 1),
        Some(framed_twist_eigenvalue(1, 1, false).unwrap())
    );
}

#[test]
fn p2_twist_and_drag() {
    let p = universal_projector::<F2>(2, 6).unwrap();
    let s = derive_twist_shift(&p, true).unwrap();
    assert_eq!(predicted_eigenvalue(s.degree, 4, 0), Some(framed_twist_eigenvalue(2, 2, true).unwrap()));
    let w = BraidWord::parse(2, "s1").unwrap();
    let r = check_drag_through(&p, &w, &[2, 1], 0).unwrap();
    assert!(r.pass, "{r:?}");
    let r = check_drag_through(&p, &w.inverse(), &[2, 1], 0).unwrap();
    assert!(r.pass, "{r:?}");
    let e = Complex::<F2>::single(FlatTangle::generator(2, 1).unwrap(), Degree::ZERO);
    let r = drag_through_pair(&e, &p.base, &w, &[2, 1], 0, p.check_to2()).unwrap();
    assert!(!r.pass);
    let strand = universal_projector::<F2>(1, 4).unwrap();
    assert!(check_drag_through(&strand, &BraidWord::parse(3, "s1 s2^-1").unwrap(), &[1, 1, 1], 0).unwrap().pass);
}
