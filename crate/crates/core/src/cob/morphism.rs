//! Morphisms of the cobordism category in dotted normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::surface::{compose_kernel, hstack_kernel, tensor_kernel};
use super::tangle::{circles, FlatTangle, Smoothing};
use crate::error::{Error, Result};
use crate::ring::Coeff;

/// A basis cobordism: one disk per circle of `W(source, target)`, with a dot
/// on the circles in `dots` (bit `i` = circle `i`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MorphismBasisElement {
    pub source: Smoothing,
    pub target: Smoothing,
    pub dots: u64,
}

impl MorphismBasisElement {
    pub fn internal_degree(&self) -> i32 {
        basis_degree(&self.source, &self.target, self.dots)
    }
}

/// `deg_χ = χ − n` for a disk union: `(#circles − 2·#dots) − n`.
pub fn basis_degree(x: &Smoothing, y: &Smoothing, dots: u64) -> i32 {
    let c = circles(x, y).expect("matching boundaries").count() as i32;
    c - 2 * dots.count_ones() as i32 - x.tangle.n() as i32
}

/// Dot sets of `Hom(x, y)` whose basis elements have topological degree `deg`.
pub fn basis_of_degree(x: &Smoothing, y: &Smoothing, deg: i32) -> Vec<u64> {
    let c = match circles(x, y) {
        Ok(c) => c.count(),
        Err(_) => return Vec::new(),
    };
    let n = x.tangle.n() as i32;
    let twice = c as i32 - n - deg;
    if twice < 0 || twice % 2 != 0 {
        return Vec::new();
    }
    let k = (twice / 2) as u32;
    if k as usize > c {
        return Vec::new();
    }
    (0u64..(1u64 << c)).filter(|m| m.count_ones() == k).collect()
}

/// Exact linear combination of basis cobordisms `source → target`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism<R: Coeff> {
    source: Smoothing,
    target: Smoothing,
    terms: Vec<(u64, R)>,
}

impl<R: Coeff> Morphism<R> {
    pub fn zero(source: Smoothing, target: Smoothing) -> Self {
        Morphism {
            source,
            target,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(source: Smoothing, target: Smoothing, terms: Vec<(u64, R)>) -> Result<Self> {
        let c = circles(&source, &target)?.count();
        if terms.iter().any(|(d, _)| c < 64 && *d >> c != 0) {
            return Err(Error::Mismatch("dot on a nonexistent circle".into()));
        }
        let mut m = Morphism {
            source,
            target,
            terms,
        };
        m.normalize();
        Ok(m)
    }

    pub fn basis(source: Smoothing, target: Smoothing, dots: u64) -> Result<Self> {
        Self::from_terms(source, target, vec![(dots, R::one())])
    }

    pub(crate) fn basis_unchecked(source: Smoothing, target: Smoothing, dots: u64, c: R) -> Self {
        Morphism {
            source,
            target,
            terms: if c.is_zero() { Vec::new() } else { vec![(dots, c)] },
        }
    }

    /// Identity of `x`. On free loops the identity cylinder is neck-cut into
    /// `(dot on source disk) + (dot on target disk)`.
    pub fn identity(x: &Smoothing) -> Self {
        let c = circles(x, x).expect("square");
        let mut terms: Vec<u64> = vec![0];
        for l in 0..x.loops as usize {
            let (s, t) = (1u64 << c.x_loop(l), 1u64 << c.y_loop(l));
            terms = terms.iter().flat_map(|m| [m | s, m | t]).collect();
        }
        let mut m = Morphism {
            source: x.clone(),
            target: x.clone(),
            terms: terms.into_iter().map(|d| (d, R::one())).collect(),
        };
        m.normalize();
        m
    }

    /// Identity on a flat tangle.
    pub fn id_flat(t: &FlatTangle) -> Self {
        Self::identity(&Smoothing::flat(t.clone()))
    }

    pub fn source(&self) -> &Smoothing {
        &self.source
    }

    pub fn target(&self) -> &Smoothing {
        &self.target
    }

    pub fn terms(&self) -> &[(u64, R)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, dots: u64) -> R {
        self.terms
            .binary_search_by_key(&dots, |t| t.0)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| R::zero())
    }

    fn normalize(&mut self) {
        self.terms.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, R)> = Vec::with_capacity(self.terms.len());
        for (d, c) in self.terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.0 == d => last.1 = last.1.add(&c),
                _ => out.push((d, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        self.terms = out;
    }

    pub fn basis_elements(&self) -> impl Iterator<Item = (MorphismBasisElement, &R)> + '_ {
        self.terms.iter().map(move |(d, c)| {
            (
                MorphismBasisElement {
                    source: self.source.clone(),
                    target: self.target.clone(),
                    dots: *d,
                },
                c,
            )
        })
    }

    /// Topological degree; `None` for the zero morphism.
    pub fn internal_degree(&self) -> Result<Option<i32>> {
        let mut deg = None;
        for (d, _) in &self.terms {
            let k = basis_degree(&self.source, &self.target, *d);
            match deg {
                None => deg = Some(k),
                Some(j) if j != k => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// If this is `c · id` for a flat object, return `c`.
    pub fn identity_scalar(&self) -> Option<R> {
        if self.source != self.target || self.source.loops != 0 || self.terms.len() != 1 {
            return None;
        }
        let (d, c) = &self.terms[0];
        (*d == 0).then(|| c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Mismatch("adding morphisms with different ends".into()));
        }
        let mut m = self.clone();
        m.terms.extend(other.terms.iter().cloned());
        m.normalize();
        Ok(m)
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert!(self.source == other.source && self.target == other.target);
        self.terms.extend(other.terms.iter().cloned());
        self.normalize();
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut m = self.clone();
        for t in m.terms.iter_mut() {
            t.1 = t.1.mul(c);
        }
        m.terms.retain(|t| !t.1.is_zero());
        m
    }

    pub fn neg(&self) -> Self {
        self.scale(&R::one().neg())
    }

    /// `other ∘ self`: first `self : x → y`, then `other : y → z`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::Mismatch(format!(
                "cannot compose {:?} -> {:?} with {:?} -> {:?}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &Self) -> Self {
        let mut out = Morphism::zero(self.source.clone(), other.target.clone());
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let k = compose_kernel(&self.source, &self.target, &other.target);
        for (df, cf) in &self.terms {
            for (dg, cg) in &other.terms {
                let c = cf.mul(cg);
                for (d, k) in k.eval(*df, *dg) {
                    out.terms.push((d, c.mul(&R::from_i64(k))));
                }
            }
        }
        out.normalize();
        out
    }

    /// Vertical gluing: `self` below, `other` above.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.source.tangle.top() != other.source.tangle.bottom()
            || self.target.tangle.top() != other.target.tangle.bottom()
        {
            return Err(Error::Mismatch("vertical gluing of incompatible morphisms".into()));
        }
        let k = tensor_kernel(&self.source, &self.target, &other.source, &other.target);
        let mut out = Morphism::zero(k.source.clone(), k.target.clone());
        for (df, cf) in &self.terms {
            for (dg, cg) in &other.terms {
                let c = cf.mul(cg);
                for (d, w) in k.kernel.eval(*df, *dg) {
                    out.terms.push((d, c.mul(&R::from_i64(w))));
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Horizontal juxtaposition: `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        let k = hstack_kernel(&self.source, &self.target, &other.source, &other.target);
        let mut out = Morphism::zero(
            super::surface::hstack_smoothings(&self.source, &other.source),
            super::surface::hstack_smoothings(&self.target, &other.target),
        );
        for (df, cf) in &self.terms {
            for (dg, cg) in &other.terms {
                let c = cf.mul(cg);
                for (d, w) in k.eval(*df, *dg) {
                    out.terms.push((d, c.mul(&R::from_i64(w))));
                }
            }
        }
        out.normalize();
        out
    }

    /// Re-express with coefficients in another ring.
    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Morphism<S> {
        let mut m = Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            terms: self.terms.iter().map(|(d, c)| (*d, f(c))).collect(),
        };
        m.normalize();
        m
    }
}

impl<R: Coeff> fmt::Debug for Morphism<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}: ", self.source, self.target)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("{c}*[{d:b}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Saddle cobordism between two flat tangles whose `W` has one fewer circle
/// than the identity (undotted disks).
pub fn saddle<R: Coeff>(from: &FlatTangle, to: &FlatTangle) -> Result<Morphism<R>> {
    let x = Smoothing::flat(from.clone());
    let y = Smoothing::flat(to.clone());
    let c = circles(&x, &y)?.count();
    if c + 1 != from.n() {
        return Err(Error::Mismatch(format!("{from:?} and {to:?} do not differ by a saddle")));
    }
    Morphism::basis(x, y, 0)
}

/// Cap off every free loop of `x` (loops `0..k`), dotting the loops in `dots`
/// (bit `l` = loop `l`). Result goes to the flat part of `x`.
pub fn cap_loops<R: Coeff>(x: &Smoothing, dots: u64) -> Morphism<R> {
    let y = Smoothing::flat(x.tangle.clone());
    let c = circles(x, &y).expect("same boundary");
    let mut mask = 0;
    for l in 0..x.loops as usize {
        if dots >> l & 1 == 1 {
            mask |= 1 << c.x_loop(l);
        }
    }
    Morphism::basis_unchecked(x.clone(), y, mask, R::one())
}

/// Cup creating the free loops of `y` from its flat part, dotting loops in `dots`.
pub fn cup_loops<R: Coeff>(y: &Smoothing, dots: u64) -> Morphism<R> {
    let x = Smoothing::flat(y.tangle.clone());
    let c = circles(&x, y).expect("same boundary");
    let mut mask = 0;
    for l in 0..y.loops as usize {
        if dots >> l & 1 == 1 {
            mask |= 1 << c.y_loop(l);
        }
    }
    Morphism::basis_unchecked(x, y.clone(), mask, R::one())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct TermJson {
    pub source: FlatTangle,
    pub target: FlatTangle,
    pub dots: Vec<usize>,
    pub coeff: String,
}

impl<R: Coeff> Morphism<R> {
    /// JSON terms with circles named by their smallest boundary point.
    pub(crate) fn to_json_terms(&self) -> Result<Vec<TermJson>> {
        if self.source.loops != 0 || self.target.loops != 0 {
            return Err(Error::Unsupported("serializing morphisms between loopy objects".into()));
        }
        let c = circles(&self.source, &self.target)?;
        let mins = c.min_points();
        Ok(self
            .terms
            .iter()
            .map(|(d, k)| TermJson {
                source: self.source.tangle.clone(),
                target: self.target.tangle.clone(),
                dots: (0..c.count()).filter(|i| d >> i & 1 == 1).map(|i| mins[i]).collect(),
                coeff: k.to_coeff_string(),
            })
            .collect())
    }

    pub(crate) fn from_json_terms(
        source: &FlatTangle,
        target: &FlatTangle,
        terms: &[TermJson],
    ) -> Result<Self> {
        let x = Smoothing::flat(source.clone());
        let y = Smoothing::flat(target.clone());
        let c = circles(&x, &y)?;
        let mut out = Vec::new();
        for t in terms {
            if t.source != *source || t.target != *target {
                return Err(Error::Parse("morphism term with mismatched ends".into()));
            }
            let mut mask = 0u64;
            for &p in &t.dots {
                if p >= c.of_point.len() {
                    return Err(Error::Parse(format!("dot point {p} out of range")));
                }
                let circle = c.of_point[p] as usize;
                if c.min_points()[circle] != p {
                    return Err(Error::Parse(format!("dot point {p} is not a circle's minimum")));
                }
                mask |= 1 << circle;
            }
            out.push((mask, R::parse_coeff(&t.coeff)?));
        }
        Morphism::from_terms(x, y, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cob::tangle::all_matchings;
    use crate::ring::{F2, Z};
    use proptest::prelude::*;

    fn e() -> FlatTangle {
        FlatTangle::generator(2, 1).unwrap()
    }

    fn fl(t: &FlatTangle) -> Smoothing {
        Smoothing::flat(t.clone())
    }

    #[test]
    fn degrees() {
        let id = Morphism::<Z>::id_flat(&e());
        assert_eq!(id.internal_degree().unwrap(), Some(0));
        let s: Morphism<Z> = saddle(&FlatTangle::identity(2), &e()).unwrap();
        assert_eq!(s.internal_degree().unwrap(), Some(-1));
        let one = fl(&FlatTangle::identity(1));
        let dotted = Morphism::<Z>::basis(one.clone(), one, 1).unwrap();
        assert_eq!(dotted.internal_degree().unwrap(), Some(-2));
    }

    #[test]
    fn inhomogeneous_rejected() {
        let one = fl(&FlatTangle::identity(1));
        let m = Morphism::<Z>::from_terms(one.clone(), one, vec![(0, Z(1)), (1, Z(1))]).unwrap();
        assert_eq!(m.internal_degree(), Err(Error::Inhomogeneous));
    }

    #[test]
    fn saddle_then_saddle() {
        let id2 = FlatTangle::identity(2);
        let s: Morphism<Z> = saddle(&id2, &e()).unwrap();
        let t: Morphism<Z> = saddle(&e(), &id2).unwrap();
        let st = s.then(&t).unwrap();
        assert_eq!(st.terms(), &[(0b01, Z(1)), (0b10, Z(1))]);
        assert_eq!(st.internal_degree().unwrap(), Some(-2));
        // e → id → e: a torus piece on the inner circle gives 2·X there, and
        // the outer strands merge.
        let ts = t.then(&s).unwrap();
        assert_eq!(ts.internal_degree().unwrap(), Some(-2));
        assert_eq!(ts.terms().len(), 2);
    }

    #[test]
    fn dot_squared_is_zero() {
        let one = fl(&FlatTangle::identity(1));
        let x = Morphism::<Z>::basis(one.clone(), one, 1).unwrap();
        assert!(x.then(&x).unwrap().is_zero());
    }

    #[test]
    fn unit_counit() {
        let o = Smoothing::with_loops(FlatTangle::empty(), 1);
        let cup0: Morphism<Z> = cup_loops(&o, 0);
        let cup1: Morphism<Z> = cup_loops(&o, 1);
        let cap0: Morphism<Z> = cap_loops(&o, 0);
        let cap1: Morphism<Z> = cap_loops(&o, 1);
        let id = Morphism::<Z>::id_flat(&FlatTangle::empty());
        assert!(cup0.then(&cap0).unwrap().is_zero());
        assert_eq!(cup0.then(&cap1).unwrap(), id);
        assert_eq!(cup1.then(&cap0).unwrap(), id);
        assert!(cup1.then(&cap1).unwrap().is_zero());
        // The two splittings add up to the identity on the circle.
        let sum = cap1.then(&cup0).unwrap().add(&cap0.then(&cup1).unwrap()).unwrap();
        assert_eq!(sum, Morphism::identity(&o));
    }

    #[test]
    fn loop_identity_is_idempotent() {
        let o = Smoothing::with_loops(e(), 2);
        let id = Morphism::<Z>::identity(&o);
        assert_eq!(id.terms().len(), 4);
        assert_eq!(id.then(&id).unwrap(), id);
    }

    #[test]
    fn identity_laws() {
        for a in all_matchings(3, 3) {
            for b in all_matchings(3, 3) {
                let (x, y) = (fl(&a), fl(&b));
                let c = circles(&x, &y).unwrap().count();
                for d in 0..(1u64 << c) {
                    let f = Morphism::<Z>::basis(x.clone(), y.clone(), d).unwrap();
                    assert_eq!(Morphism::identity(&x).then(&f).unwrap(), f);
                    assert_eq!(f.then(&Morphism::identity(&y)).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn rank_law() {
        for n in 1..=4 {
            let all = all_matchings(n, n);
            for a in &all {
                for b in &all {
                    let c = circles(&fl(a), &fl(b)).unwrap().count();
                    let rank: usize = (-(2 * n as i32)..=n as i32)
                        .map(|k| basis_of_degree(&fl(a), &fl(b), k).len())
                        .sum();
                    assert_eq!(rank, 1 << c);
                }
            }
        }
    }

    #[test]
    fn tensor_of_identities() {
        for a in all_matchings(3, 3) {
            for b in all_matchings(3, 3) {
                let t = Morphism::<Z>::id_flat(&a).tensor(&Morphism::id_flat(&b)).unwrap();
                assert_eq!(t.source(), t.target());
                assert_eq!(t, Morphism::identity(t.source()));
            }
        }
    }

    #[test]
    fn hstack_of_saddles() {
        let s: Morphism<Z> = saddle(&FlatTangle::identity(2), &e()).unwrap();
        let h = s.hstack(&s);
        assert_eq!(h.internal_degree().unwrap(), Some(-2));
        assert_eq!(h.terms(), &[(0, Z(1))]);
    }

    #[test]
    fn f2_coefficients() {
        let id2 = FlatTangle::identity(2);
        let s: Morphism<F2> = saddle(&id2, &e()).unwrap();
        let t: Morphism<F2> = saddle(&e(), &id2).unwrap();
        let ts = t.then(&s).unwrap();
        // 2·X on the inner circle vanishes mod 2; the rest survives.
        assert_eq!(ts.terms().len(), 2);
    }

    #[test]
    fn json_terms_round_trip() {
        let id2 = FlatTangle::identity(2);
        let st = saddle::<Z>(&id2, &e()).unwrap().then(&saddle(&e(), &id2).unwrap()).unwrap();
        let js = st.to_json_terms().unwrap();
        assert_eq!(js[0].dots, vec![0]);
        assert_eq!(js[1].dots, vec![1]);
        let back = Morphism::<Z>::from_json_terms(&id2, &id2, &js).unwrap();
        assert_eq!(back, st);
    }

    fn square(n: usize) -> impl Strategy<Value = FlatTangle> {
        let all = all_matchings(n, n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    }

    fn basis_morphism(x: FlatTangle, y: FlatTangle) -> impl Strategy<Value = Morphism<Z>> {
        let c = circles(&fl(&x), &fl(&y)).unwrap().count();
        (0..(1u64 << c), -3i64..=3).prop_map(move |(d, k)| {
            Morphism::from_terms(fl(&x), fl(&y), vec![(d, Z(k))]).unwrap()
        })
    }

    fn composable(n: usize) -> impl Strategy<Value = (Morphism<Z>, Morphism<Z>, Morphism<Z>)> {
        (square(n), square(n), square(n), square(n)).prop_flat_map(|(a, b, c, d)| {
            (
                basis_morphism(a, b.clone()),
                basis_morphism(b, c.clone()),
                basis_morphism(c, d),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn degree_additivity((f, g, _) in (1usize..=4).prop_flat_map(composable)) {
            let fg = f.then(&g).unwrap();
            if let (Some(a), Some(b), Some(c)) = (
                f.internal_degree().unwrap(),
                g.internal_degree().unwrap(),
                fg.internal_degree().unwrap(),
            ) {
                prop_assert_eq!(c, a + b);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn associativity((f, g, h) in (1usize..=4).prop_flat_map(composable)) {
            let l = f.then(&g).unwrap().then(&h).unwrap();
            let r = f.then(&g.then(&h).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn interchange(
            ((f, f2, _), (g, g2, _)) in (1usize..=3).prop_flat_map(|n| (composable(n), composable(n)))
        ) {
            let l = f.tensor(&g).unwrap().then(&f2.tensor(&g2).unwrap()).unwrap();
            let r = f.then(&f2).unwrap().tensor(&g.then(&g2).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn hstack_interchange(
            ((f, f2, _), (g, g2, _)) in (1usize..=2).prop_flat_map(|n| (composable(n), composable(3 - n)))
        ) {
            let l = f.hstack(&g).then(&f2.hstack(&g2)).unwrap();
            let r = f.then(&f2).unwrap().hstack(&g.then(&g2).unwrap());
            prop_assert_eq!(l, r);
        }

        #[test]
        fn tensor_associativity(
            (f, g, h) in (1usize..=3).prop_flat_map(|n| (composable(n), composable(n), composable(n)))
        ) {
            let (f, g, h) = (f.0, g.0, h.0);
            let l = f.tensor(&g).unwrap().tensor(&h).unwrap();
            let r = f.tensor(&g.tensor(&h).unwrap()).unwrap();
            prop_assert_eq!(l.source().tangle.clone(), r.source().tangle.clone());
            prop_assert_eq!(l.source().loops, r.source().loops);
            // Loop numbering differs between the bracketings; compare degrees and sizes.
            prop_assert_eq!(l.internal_degree().unwrap(), r.internal_degree().unwrap());
            prop_assert_eq!(l.terms().len(), r.terms().len());
        }
    }
}
