use super::*;
use crate::braid::{crossing_complex, kh_braid, kh_bracket, BraidWord, SlicedTangle};
use crate::cob::{saddle, Smoothing};
use crate::poly::Laurent;
use crate::ring::{F2, Q, Z};
use proptest::prelude::*;

fn e2() -> FlatTangle {
    FlatTangle::generator(2, 1).unwrap()
}

fn loops(n: usize) -> Complex<Z> {
    Complex::from_parts(
        0,
        0,
        vec![GradedObject {
            degree: Degree::ZERO,
            obj: Smoothing::with_loops(FlatTangle::empty(), n),
        }],
        BTreeMap::new(),
        None,
    )
    .unwrap()
}

fn qs(c: &Complex<impl Coeff>) -> Vec<i32> {
    let mut v: Vec<i32> = c.objects().iter().map(|o| o.degree.q).collect();
    v.sort();
    v
}

#[test]
fn check_complex_examples() {
    assert!(Complex::<Z>::identity(3).check().is_valid());
    let c = crossing_complex::<Z>(2, 1, true).unwrap();
    assert!(c.check().is_valid());
    // Dotted saddle: internal degree −3 against a q-step of one.
    let dotted = Morphism::<Z>::basis(Smoothing::flat(FlatTangle::identity(2)), Smoothing::flat(e2()), 1).unwrap();
    let bad = Complex::from_parts(2, 2, c.objects().to_vec(), [((0, 1), dotted)].into_iter().collect(), None).unwrap();
    assert!(!bad.check().is_valid());
}

#[test]
fn shift_is_a_group_action() {
    let c = kh_braid::<Z>(&BraidWord::parse(3, "s1 s2^-1").unwrap()).unwrap();
    assert_eq!(c.shift(Degree::ZERO), c);
    let (a, b) = (Degree::new(3, -2), Degree::new(-1, 5));
    assert_eq!(c.shift(a).shift(b), c.shift(a + b));
    let x = euler_char(&c).unwrap();
    let y = euler_char(&c.shift(Degree::tq(1, 2))).unwrap();
    assert_eq!(x.parity, y.parity);
    for (t, p) in &x.terms {
        assert_eq!(y.coeff(t), -&p.shift(2));
    }
}

#[test]
fn cones() {
    let c = crossing_complex::<Z>(2, 1, true).unwrap();
    let k = cone(&ChainMap::identity(&c)).unwrap();
    assert!(k.check().is_valid());
    assert!(simplify(&k).is_empty());
    let d = Complex::<Z>::single(e2(), Degree::new(0, 3));
    let z = cone(&ChainMap::zero(c.clone(), d.clone(), 0)).unwrap();
    let expected = c.shift(Degree::new(-2, 0)).direct_sum(&d).unwrap();
    assert_eq!(z.canonical().multiset(), expected.canonical().multiset());
    assert_eq!(z.diff().len(), 1);
    // The crossing complex is the cone of a saddle.
    let s = saddle::<Z>(&FlatTangle::identity(2), &e2()).unwrap();
    let f = ChainMap {
        source: Complex::single(FlatTangle::identity(2), Degree::new(1, 0)),
        target: Complex::single(e2(), Degree::new(1, 1)),
        t2_shift: 0,
        components: [((0, 0), s)].into_iter().collect(),
    };
    assert_eq!(cone(&f).unwrap(), c);
    let mut g = f.clone();
    g.target = g.target.shift(Degree::new(0, 1));
    assert!(cone(&g).is_err());
}

#[test]
fn tensor_examples() {
    let c = crossing_complex::<Z>(2, 1, true).unwrap();
    assert_eq!(c.tensor(&Complex::identity(2)).unwrap(), c);
    assert_eq!(Complex::identity(2).tensor(&c).unwrap(), c);
    let cc = c.tensor_raw(&c).unwrap();
    assert_eq!(cc.len(), 4);
    assert!(cc.check().is_valid());
}

#[test]
fn delooping() {
    let (d, (f, g)) = deloop(&loops(1));
    assert_eq!(qs(&d), vec![-1, 1]);
    assert!(!d.has_loops());
    f.verify().unwrap();
    g.verify().unwrap();
    let fg = f.then(&g).unwrap();
    assert_eq!(fg.components, ChainMap::identity(&loops(1)).components);
    let gf = g.then(&f).unwrap();
    assert_eq!(gf.components, ChainMap::identity(&d).components);
    let (d2, _) = deloop(&loops(2));
    assert_eq!(qs(&d2), vec![-2, 0, 0, 2]);
    let plain = crossing_complex::<Z>(3, 1, false).unwrap();
    assert_eq!(deloop(&plain).0, plain);
}

#[test]
fn unknot_from_cup_and_cap() {
    let t = SlicedTangle::new(0, vec![crate::braid::Slice::Cup { i: 1 }, crate::braid::Slice::Cap { i: 1 }]).unwrap();
    let c = kh_bracket::<Z>(&t).unwrap();
    assert_eq!(qs(&c), vec![-1, 1]);
    assert!(c.diff().is_empty());
    assert!(c.objects().iter().all(|o| o.tangle().n() == 0 && o.degree.t2 == 0));
    let x = euler_char(&c).unwrap();
    assert_eq!(x.coeff(&FlatTangle::empty()), Laurent::from_terms([(-1, 1), (1, 1)]));
    assert_eq!(simplify(&c), c);
}

#[test]
fn gaussian_elimination() {
    let c = crossing_complex::<Z>(2, 1, true).unwrap();
    assert!(gaussian_eliminate(&cone(&ChainMap::identity(&c)).unwrap(), PivotOrder::Forward, false)
        .complex
        .is_empty());
    // Multiplication by 2 on a single object.
    let two = Morphism::<Z>::id_flat(&e2()).scale(&Z::from_i64(2));
    let k = Complex::from_parts(
        2,
        2,
        vec![GradedObject::new(Degree::new(0, 0), e2()), GradedObject::new(Degree::new(2, 0), e2())],
        [((0, 1), two)].into_iter().collect(),
        None,
    )
    .unwrap();
    let r = gaussian_eliminate(&k, PivotOrder::Forward, false);
    assert!(r.reduced_over_z);
    assert_eq!(r.complex, k);
    assert!(gaussian_eliminate(&k.to_field(), PivotOrder::Forward, false).complex.is_empty());
    let r2 = kh_braid::<Z>(&BraidWord::parse(2, "s1 s1^-1").unwrap()).unwrap();
    assert_eq!(r2, Complex::identity(2));
}

#[test]
fn elimination_witnesses_are_inverse_equivalences() {
    let raw = crossing_complex::<Z>(3, 1, true)
        .unwrap()
        .tensor(&crossing_complex(3, 2, false).unwrap())
        .unwrap()
        .tensor(&crossing_complex(3, 1, false).unwrap())
        .unwrap();
    let r = gaussian_eliminate(&raw, PivotOrder::Forward, true);
    let (f, g) = r.witness.unwrap();
    f.verify().unwrap();
    g.verify().unwrap();
    // f then g is homotopic to the identity of the source.
    let fg = f.then(&g).unwrap();
    let mut diff = fg.clone();
    for (k, m) in ChainMap::identity(&raw).components {
        let e = diff.components.entry(k).or_insert_with(|| Morphism::zero(m.source().clone(), m.target().clone()));
        e.add_assign(&m.neg());
    }
    diff.components.retain(|_, m| !m.is_zero());
    assert!(hom_solve(&diff).unwrap().is_found());
    // g then f is the identity of the reduced complex.
    let id = g.then(&f).unwrap();
    assert_eq!(id.components, ChainMap::identity(&r.complex).components);
}

#[test]
fn hom_solve_examples() {
    let c = crossing_complex::<Z>(2, 1, true).unwrap();
    match hom_solve(&ChainMap::zero(c.clone(), c.clone(), 0)).unwrap() {
        HomSolution::Found(h) => assert!(h.components.is_empty()),
        other => panic!("{other:?}"),
    }
    let k = cone(&ChainMap::identity(&c)).unwrap();
    assert!(hom_solve(&ChainMap::identity(&k)).unwrap().is_found());
    for n in 1..4 {
        let one = Complex::<Z>::identity(n);
        assert!(matches!(hom_solve(&ChainMap::identity(&one)).unwrap(), HomSolution::None));
    }
}

#[test]
fn equivalence_examples() {
    let c = kh_braid::<Z>(&BraidWord::parse(3, "s1 s2 s1^-1").unwrap()).unwrap();
    assert!(equivalent(&c, &c).is_yes());
    let e = Complex::<Z>::single(e2(), Degree::ZERO);
    assert!(equivalent(&Complex::identity(2), &e).is_no());
    for d in [Degree::new(2, 0), Degree::new(0, 2), Degree::new(-2, -2)] {
        assert!(equivalent(&c, &c.shift(d)).is_no());
    }
    assert_eq!(find_shift(&c.shift(Degree::new(4, 2)), &c), Some(Degree::new(4, 2)));
    let q = c.to_field();
    assert!(equivalent::<Q>(&q, &q).is_yes());
}

#[test]
fn json_round_trip() {
    let c = kh_braid::<Z>(&BraidWord::parse(3, "s1 s2^-1 s1").unwrap()).unwrap();
    let s = c.to_json().unwrap();
    let back = Complex::<Z>::from_json(&s).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_json().unwrap(), s);
    assert!(Complex::<F2>::from_json(&s).is_err());
    let w = c.with_window(Some(Window::new(-3, 5)));
    assert_eq!(Complex::<Z>::from_json(&w.to_json().unwrap()).unwrap(), w);
    let empty = Complex::<Q>::empty(2, 4);
    assert_eq!(Complex::<Q>::from_json(&empty.to_json().unwrap()).unwrap(), empty);
}

#[test]
fn tensor_windows() {
    let a = Complex::<Z>::identity(2).with_window(Some(Window::new(0, 8)));
    let b = crossing_complex::<Z>(2, 1, true).unwrap().with_window(Some(Window::new(-1, 5)));
    let t = a.tensor(&b).unwrap();
    assert_eq!(t.window(), Some(Window::new(-1, 5)));
    let t = b.tensor(&b).unwrap();
    assert_eq!(t.window(), Some(Window::new(-2, 4)));
    assert!(t.objects().iter().all(|o| o.degree.t2 <= 4));
    let exact = crossing_complex::<Z>(2, 1, true).unwrap();
    assert_eq!(exact.tensor(&exact).unwrap().window(), None);
}

fn word() -> impl Strategy<Value = BraidWord> {
    (2usize..4).prop_flat_map(|n| {
        let letter = (1..n as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
        proptest::collection::vec(letter, 0..6).prop_map(move |l| BraidWord::new(n, l).unwrap())
    })
}

fn raw_complex(w: &BraidWord) -> Complex<Z> {
    let mut c = Complex::identity(w.strands());
    for &l in w.letters() {
        c = c.tensor_raw(&crossing_complex(w.strands(), l.unsigned_abs() as usize, l > 0).unwrap()).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn reduction_preserves_euler_characteristic(w in word()) {
        let raw = raw_complex(&w);
        let x = euler_char(&raw).unwrap();
        prop_assert_eq!(euler_char(&simplify(&raw)).unwrap(), x.clone());
        let g = gaussian_eliminate(&raw, PivotOrder::Seeded(7), false).complex;
        prop_assert_eq!(euler_char(&g).unwrap(), x.clone());
        prop_assert_eq!(euler_char(&kh_braid::<Z>(&w).unwrap()).unwrap(), x);
    }

    #[test]
    fn pivot_orders_agree(w in word(), seed in any::<u64>()) {
        let raw = raw_complex(&w);
        let a = simplify_with(&raw, PivotOrder::Forward);
        let b = simplify_with(&raw, PivotOrder::Seeded(seed));
        prop_assert!(a.check().is_valid());
        prop_assert!(equivalent(&a, &b).is_yes());
    }
}
