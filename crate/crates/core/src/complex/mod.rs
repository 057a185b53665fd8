//! Half-graded chain complexes over the cobordism category.
//!
//! The homological degree `t` lives in `½Z` and is stored as `t2 = 2t`.
//! Differentials raise `t` by one and have internal degree zero:
//! `deg_χ(entry) + q(target) − q(source) = 0`.

mod deloop;
mod equiv;
mod euler;
mod gauss;
mod json;
pub mod linalg;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::cob::surface::glue_smoothings;
use crate::cob::{FlatTangle, Morphism, Smoothing};
use crate::error::{Error, Result};
use crate::ring::Coeff;

pub use deloop::deloop;
pub use equiv::{
    chain_map_space, equivalent, equivalent_with, find_shift, hom_solve, Equivalence, EquivOptions, HomSolution,
};
pub use euler::{euler_char, EulerChar};
pub use gauss::{gaussian_eliminate, simplify, simplify_with, Elimination, PivotOrder};
pub use json::ComplexJson;

/// Bigrading `(t, q)` with `t = t2 / 2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Degree {
    pub t2: i32,
    pub q: i32,
}

impl Degree {
    pub const ZERO: Degree = Degree { t2: 0, q: 0 };

    pub fn new(t2: i32, q: i32) -> Self {
        Degree { t2, q }
    }

    /// From an integer `t`.
    pub fn tq(t: i32, q: i32) -> Self {
        Degree { t2: 2 * t, q }
    }

    pub fn scale(self, j: i32) -> Self {
        Degree {
            t2: self.t2 * j,
            q: self.q * j,
        }
    }

    pub fn t(self) -> f64 {
        self.t2 as f64 / 2.0
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t2 % 2 == 0 {
            write!(f, "(t={}, q={})", self.t2 / 2, self.q)
        } else {
            write!(f, "(t={}/2, q={})", self.t2, self.q)
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.t2 + o.t2, self.q + o.q)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.t2 - o.t2, self.q - o.q)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.t2, -self.q)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GradedObject {
    pub degree: Degree,
    pub obj: Smoothing,
}

impl GradedObject {
    pub fn new(degree: Degree, tangle: FlatTangle) -> Self {
        GradedObject {
            degree,
            obj: Smoothing::flat(tangle),
        }
    }

    pub fn tangle(&self) -> &FlatTangle {
        &self.obj.tangle
    }

    /// Key used when comparing graded multisets.
    pub fn key(&self) -> (i32, i32, FlatTangle, u8) {
        (self.degree.t2, self.degree.q, self.obj.tangle.clone(), self.obj.loops)
    }
}

/// Validity interval `[lo, hi]` of a truncated complex (half-steps).
///
/// A truncated complex is the quotient keeping the objects with `t <= hi`;
/// it agrees with the untruncated complex there.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Window {
    pub lo2: i32,
    pub hi2: i32,
}

impl Window {
    pub fn new(lo2: i32, hi2: i32) -> Self {
        Window { lo2, hi2 }
    }

    pub fn shift(self, t2: i32) -> Self {
        Window::new(self.lo2 + t2, self.hi2 + t2)
    }
}

/// A bounded-below chain complex with sparse differential.
#[derive(Clone, PartialEq, Eq)]
pub struct Complex<R: Coeff> {
    bottom: usize,
    top: usize,
    objects: Vec<GradedObject>,
    diff: BTreeMap<(usize, usize), Morphism<R>>,
    window: Option<Window>,
}

impl<R: Coeff> fmt::Debug for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Complex[{}|{}] window={:?}", self.bottom, self.top, self.window)?;
        for (i, o) in self.objects.iter().enumerate() {
            writeln!(f, "  {i}: {} {:?} loops={}", o.degree, o.obj.tangle, o.obj.loops)?;
        }
        for ((i, j), m) in &self.diff {
            writeln!(f, "  {i}->{j}: {m:?}")?;
        }
        Ok(())
    }
}

/// Problems found by [`Complex::check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub violations: Vec<String>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<R: Coeff> Complex<R> {
    pub fn empty(bottom: usize, top: usize) -> Self {
        Complex {
            bottom,
            top,
            objects: Vec::new(),
            diff: BTreeMap::new(),
            window: None,
        }
    }

    /// One object at degree `d`, zero differential.
    pub fn single(tangle: FlatTangle, d: Degree) -> Self {
        Complex {
            bottom: tangle.bottom(),
            top: tangle.top(),
            objects: vec![GradedObject::new(d, tangle)],
            diff: BTreeMap::new(),
            window: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        Complex::single(FlatTangle::identity(n), Degree::ZERO)
    }

    /// Build from parts, validating boundaries and t-steps of entries.
    pub fn from_parts(
        bottom: usize,
        top: usize,
        objects: Vec<GradedObject>,
        diff: BTreeMap<(usize, usize), Morphism<R>>,
        window: Option<Window>,
    ) -> Result<Self> {
        for o in &objects {
            if o.obj.boundary() != (bottom, top) {
                return Err(Error::Mismatch(format!(
                    "object {:?} in a complex with boundary ({bottom}, {top})",
                    o.obj.tangle
                )));
            }
        }
        for ((i, j), m) in &diff {
            let (a, b) = (objects.get(*i), objects.get(*j));
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::Mismatch(format!("entry {i}->{j} out of range")));
            };
            if m.source() != &a.obj || m.target() != &b.obj {
                return Err(Error::Mismatch(format!("entry {i}->{j} has the wrong ends")));
            }
            if b.degree.t2 != a.degree.t2 + 2 {
                return Err(Error::Mismatch(format!("entry {i}->{j} does not raise t by one")));
            }
        }
        let mut c = Complex {
            bottom,
            top,
            objects,
            diff,
            window,
        };
        c.diff.retain(|_, m| !m.is_zero());
        Ok(c)
    }

    pub(crate) fn from_parts_unchecked(
        bottom: usize,
        top: usize,
        objects: Vec<GradedObject>,
        diff: BTreeMap<(usize, usize), Morphism<R>>,
        window: Option<Window>,
    ) -> Self {
        Complex {
            bottom,
            top,
            objects,
            diff,
            window,
        }
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn objects(&self) -> &[GradedObject] {
        &self.objects
    }

    pub fn diff(&self) -> &BTreeMap<(usize, usize), Morphism<R>> {
        &self.diff
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Morphism<R>> {
        self.diff.get(&(i, j))
    }

    pub fn window(&self) -> Option<Window> {
        self.window
    }

    pub fn with_window(mut self, w: Option<Window>) -> Self {
        self.window = w;
        self
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn has_loops(&self) -> bool {
        self.objects.iter().any(|o| o.obj.loops > 0)
    }

    pub fn min_t2(&self) -> Option<i32> {
        self.objects.iter().map(|o| o.degree.t2).min()
    }

    pub fn max_t2(&self) -> Option<i32> {
        self.objects.iter().map(|o| o.degree.t2).max()
    }

    /// Lower end used by window algebra.
    fn lo2(&self) -> Option<i32> {
        match self.window {
            Some(w) => Some(w.lo2),
            None => self.min_t2(),
        }
    }

    /// Upper end of validity (`None` = exact).
    pub fn hi2(&self) -> Option<i32> {
        self.window.map(|w| w.hi2)
    }

    /// Verify `d∘d = 0`, internal degree zero and t-steps.
    pub fn check(&self) -> ComplexReport {
        let mut report = ComplexReport::default();
        let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
        for (&(i, j), m) in &self.diff {
            out.entry(i).or_default().push(j);
            let (a, b) = (&self.objects[i], &self.objects[j]);
            if b.degree.t2 != a.degree.t2 + 2 {
                report.violations.push(format!("entry {i}->{j} does not raise t by one"));
            }
            if m.source() != &a.obj || m.target() != &b.obj {
                report.violations.push(format!("entry {i}->{j} has the wrong ends"));
                continue;
            }
            match m.internal_degree() {
                Ok(Some(k)) if k + b.degree.q - a.degree.q != 0 => report.violations.push(format!(
                    "entry {i}->{j} has internal degree {}",
                    k + b.degree.q - a.degree.q
                )),
                Err(_) => report.violations.push(format!("entry {i}->{j} is inhomogeneous")),
                _ => {}
            }
        }
        for (&i, mids) in &out {
            let mut sums: BTreeMap<usize, Morphism<R>> = BTreeMap::new();
            for &j in mids {
                let dij = &self.diff[&(i, j)];
                for &k in out.get(&j).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let c = dij.then_unchecked(&self.diff[&(j, k)]);
                    match sums.get_mut(&k) {
                        Some(s) => s.add_assign(&c),
                        None => {
                            sums.insert(k, c);
                        }
                    }
                }
            }
            for (k, s) in sums {
                if !s.is_zero() {
                    report.violations.push(format!("d∘d ≠ 0 on {i}->{k}: {s:?}"));
                }
            }
        }
        report.violations.sort();
        report
    }

    pub(crate) fn debug_check(&self) {
        #[cfg(debug_assertions)]
        {
            if self.len() <= 400 {
                let r = self.check();
                assert!(r.is_valid(), "invalid complex: {:?}", r.violations);
            }
        }
    }

    /// Translate every object degree by `d`.
    pub fn shift(&self, d: Degree) -> Self {
        let mut c = self.clone();
        for o in c.objects.iter_mut() {
            o.degree = o.degree + d;
        }
        c.window = c.window.map(|w| w.shift(d.t2));
        c
    }

    /// Quotient keeping objects with `t2 <= hi2`; records the window.
    pub fn truncate(&self, hi2: i32) -> Self {
        let lo2 = self.lo2().unwrap_or(hi2);
        let hi = self.hi2().map_or(hi2, |h| h.min(hi2));
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.objects[i].degree.t2 <= hi).collect();
        let mut c = self.restrict(&keep);
        c.window = Some(Window::new(lo2.min(hi), hi));
        c
    }

    /// Sub-quotient on the objects `keep` (in order); entries between kept objects survive.
    pub(crate) fn restrict(&self, keep: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let objects = keep.iter().map(|&i| self.objects[i].clone()).collect();
        let diff = self
            .diff
            .iter()
            .filter(|((i, j), _)| index[*i] != usize::MAX && index[*j] != usize::MAX)
            .map(|((i, j), m)| ((index[*i], index[*j]), m.clone()))
            .collect();
        Complex {
            bottom: self.bottom,
            top: self.top,
            objects,
            diff,
            window: self.window,
        }
    }

    /// Direct sum with no maps between the summands.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if (self.bottom, self.top) != (other.bottom, other.top) {
            return Err(Error::Mismatch("direct sum of complexes with different boundaries".into()));
        }
        let off = self.len();
        let mut c = self.clone();
        c.objects.extend(other.objects.iter().cloned());
        for ((i, j), m) in &other.diff {
            c.diff.insert((i + off, j + off), m.clone());
        }
        c.window = meet_windows(self.window, other.window);
        Ok(c)
    }

    /// Sort objects by `(t, q, tangle)`; used for canonical output.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.objects[a].cmp(&self.objects[b]).then(a.cmp(&b)));
        self.restrict(&order)
    }

    /// Graded multiset of objects, sorted.
    pub fn multiset(&self) -> Vec<(i32, i32, FlatTangle, u8)> {
        let mut v: Vec<_> = self.objects.iter().map(|o| o.key()).collect();
        v.sort();
        v
    }

    /// Largest through-strand count among objects (`None` if empty).
    pub fn through_degree(&self) -> Option<usize> {
        self.objects.iter().map(|o| o.obj.tangle.through_strands()).max()
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Complex<S> {
        Complex {
            bottom: self.bottom,
            top: self.top,
            objects: self.objects.clone(),
            diff: self
                .diff
                .iter()
                .map(|(k, m)| (*k, m.map_coeffs(&f)))
                .filter(|(_, m)| !m.is_zero())
                .collect(),
            window: self.window,
        }
    }

    /// Over a field: coefficients moved to the solving field.
    pub fn to_field(&self) -> Complex<R::Field> {
        self.map_coeffs(|c| c.to_field())
    }

    /// Stack `self` below `other`, deloop, with Koszul sign `(−1)^{⌊t2/2⌋}` of
    /// the lower factor on the upper differential.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(deloop::deloop_complex(&self.tensor_raw(other)?))
    }

    /// Tensor product keeping free loops on the objects.
    pub fn tensor_raw(&self, other: &Self) -> Result<Self> {
        if self.top != other.bottom {
            return Err(Error::Mismatch(format!(
                "cannot stack a complex with {} top points below one with {} bottom points",
                self.top, other.bottom
            )));
        }
        let window = tensor_window(self, other);
        let hi = window.map(|w| w.hi2);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut objects = Vec::new();
        for (i, a) in self.objects.iter().enumerate() {
            for (j, b) in other.objects.iter().enumerate() {
                let d = a.degree + b.degree;
                if hi.is_some_and(|h| d.t2 > h) {
                    continue;
                }
                let (obj, _) = glue_smoothings(&a.obj, &b.obj);
                index.insert((i, j), objects.len());
                objects.push(GradedObject { degree: d, obj });
            }
        }
        let mut diff = BTreeMap::new();
        for (&(i, i2), m) in &self.diff {
            for (j, b) in other.objects.iter().enumerate() {
                let (Some(&s), Some(&t)) = (index.get(&(i, j)), index.get(&(i2, j))) else {
                    continue;
                };
                let e = m.tensor(&Morphism::identity(&b.obj))?;
                if !e.is_zero() {
                    diff.insert((s, t), e);
                }
            }
        }
        for (&(j, j2), m) in &other.diff {
            for (i, a) in self.objects.iter().enumerate() {
                let (Some(&s), Some(&t)) = (index.get(&(i, j)), index.get(&(i, j2))) else {
                    continue;
                };
                let mut e = Morphism::identity(&a.obj).tensor(m)?;
                if a.degree.t2.div_euclid(2).rem_euclid(2) == 1 {
                    e = e.neg();
                }
                if !e.is_zero() {
                    diff.insert((s, t), e);
                }
            }
        }
        let c = Complex {
            bottom: self.bottom,
            top: other.top,
            objects,
            diff,
            window,
        };
        c.debug_check();
        Ok(c)
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut objects = Vec::new();
        let window = tensor_window(self, other);
        let hi = window.map(|w| w.hi2);
        for (i, a) in self.objects.iter().enumerate() {
            for (j, b) in other.objects.iter().enumerate() {
                let d = a.degree + b.degree;
                if hi.is_some_and(|h| d.t2 > h) {
                    continue;
                }
                index.insert((i, j), objects.len());
                objects.push(GradedObject {
                    degree: d,
                    obj: crate::cob::surface::hstack_smoothings(&a.obj, &b.obj),
                });
            }
        }
        let mut diff = BTreeMap::new();
        for (&(i, i2), m) in &self.diff {
            for (j, b) in other.objects.iter().enumerate() {
                if let (Some(&s), Some(&t)) = (index.get(&(i, j)), index.get(&(i2, j))) {
                    diff.insert((s, t), m.hstack(&Morphism::identity(&b.obj)));
                }
            }
        }
        for (&(j, j2), m) in &other.diff {
            for (i, a) in self.objects.iter().enumerate() {
                if let (Some(&s), Some(&t)) = (index.get(&(i, j)), index.get(&(i, j2))) {
                    let mut e = Morphism::identity(&a.obj).hstack(m);
                    if a.degree.t2.div_euclid(2).rem_euclid(2) == 1 {
                        e = e.neg();
                    }
                    diff.insert((s, t), e);
                }
            }
        }
        Complex {
            bottom: self.bottom + other.bottom,
            top: self.top + other.top,
            objects,
            diff,
            window,
        }
    }
}

fn meet_windows(a: Option<Window>, b: Option<Window>) -> Option<Window> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(Window::new(a.lo2.min(b.lo2), a.hi2.min(b.hi2))),
    }
}

/// `[a, b] ⊗ [c, d] ↦ [a + c, min(a + d, b + c)]`, with exact complexes
/// treated as `[min t, ∞)`.
pub(crate) fn tensor_window<R: Coeff>(x: &Complex<R>, y: &Complex<R>) -> Option<Window> {
    if x.window.is_none() && y.window.is_none() {
        return None;
    }
    let (Some(a), Some(c)) = (x.lo2(), y.lo2()) else {
        // One factor is empty and exact: the product is exactly empty.
        return None;
    };
    let mut hi = i32::MAX;
    if let Some(d) = y.hi2() {
        hi = hi.min(a + d);
    }
    if let Some(b) = x.hi2() {
        hi = hi.min(b + c);
    }
    Some(Window::new(a + c, hi))
}

/// A map `C → D` raising `t` by `t2_shift / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<R: Coeff> {
    pub source: Complex<R>,
    pub target: Complex<R>,
    pub t2_shift: i32,
    pub components: BTreeMap<(usize, usize), Morphism<R>>,
}

impl<R: Coeff> ChainMap<R> {
    pub fn zero(source: Complex<R>, target: Complex<R>, t2_shift: i32) -> Self {
        ChainMap {
            source,
            target,
            t2_shift,
            components: BTreeMap::new(),
        }
    }

    /// The identity of `C`.
    pub fn identity(c: &Complex<R>) -> Self {
        let components = (0..c.len())
            .map(|i| ((i, i), Morphism::identity(&c.objects[i].obj)))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            t2_shift: 0,
            components,
        }
    }

    /// `d_D ∘ f − (−1)^ℓ f ∘ d_C`, as a map of shift `ℓ + 1`.
    pub fn boundary(&self) -> BTreeMap<(usize, usize), Morphism<R>> {
        let sign_odd = (self.t2_shift / 2).rem_euclid(2) == 1;
        let mut out: BTreeMap<(usize, usize), Morphism<R>> = BTreeMap::new();
        let mut push = |k: (usize, usize), m: Morphism<R>| {
            if m.is_zero() {
                return;
            }
            match out.get_mut(&k) {
                Some(s) => s.add_assign(&m),
                None => {
                    out.insert(k, m);
                }
            }
        };
        for (&(x, y), f) in &self.components {
            for (&(y2, z), d) in self.target.diff.range((y, 0)..(y + 1, 0)) {
                debug_assert_eq!(y, y2);
                push((x, z), f.then_unchecked(d));
            }
        }
        for (&(x, x2), d) in &self.source.diff {
            for (&(_, z), f) in self.components.range((x2, 0)..(x2 + 1, 0)) {
                let m = d.then_unchecked(f);
                push((x, z), if sign_odd { m } else { m.neg() });
            }
        }
        out.retain(|_, m| !m.is_zero());
        out
    }

    /// Check degree constraints and the chain-map identity.
    pub fn verify(&self) -> Result<()> {
        for (&(x, y), f) in &self.components {
            let (a, b) = (&self.source.objects[x], &self.target.objects[y]);
            if b.degree.t2 != a.degree.t2 + self.t2_shift {
                return Err(Error::NotChainMap(format!("component {x}->{y} has the wrong t-degree")));
            }
            if let Some(k) = f.internal_degree()? {
                if k + b.degree.q - a.degree.q != 0 {
                    return Err(Error::NotChainMap(format!("component {x}->{y} has nonzero internal degree")));
                }
            }
        }
        let b = self.boundary();
        if let Some(((x, z), m)) = b.iter().next() {
            return Err(Error::NotChainMap(format!("df ≠ ±fd at {x}->{z}: {m:?}")));
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap<R>) -> Result<ChainMap<R>> {
        if self.target.len() != other.source.len() {
            return Err(Error::Mismatch("composing chain maps with different middles".into()));
        }
        let mut components: BTreeMap<(usize, usize), Morphism<R>> = BTreeMap::new();
        for (&(x, y), f) in &self.components {
            for (&(_, z), g) in other.components.range((y, 0)..(y + 1, 0)) {
                let m = f.then_unchecked(g);
                match components.get_mut(&(x, z)) {
                    Some(s) => s.add_assign(&m),
                    None => {
                        components.insert((x, z), m);
                    }
                }
            }
        }
        components.retain(|_, m| !m.is_zero());
        Ok(ChainMap {
            source: self.source.clone(),
            target: other.target.clone(),
            t2_shift: self.t2_shift + other.t2_shift,
            components,
        })
    }
}

/// Mapping cone of a degree-0 chain map: the source sits one step lower
/// with negated differential, followed by the target, joined by `f`.
pub fn cone<R: Coeff>(f: &ChainMap<R>) -> Result<Complex<R>> {
    if f.t2_shift != 0 {
        return Err(Error::NotChainMap("cone of a map of nonzero t-degree".into()));
    }
    f.verify()?;
    Ok(cone_unchecked(f))
}

pub(crate) fn cone_unchecked<R: Coeff>(f: &ChainMap<R>) -> Complex<R> {
    let (c, d) = (&f.source, &f.target);
    let down = Degree::new(-2, 0);
    let off = c.len();
    let mut objects: Vec<GradedObject> = c
        .objects
        .iter()
        .map(|o| GradedObject {
            degree: o.degree + down,
            obj: o.obj.clone(),
        })
        .collect();
    objects.extend(d.objects.iter().cloned());
    let mut diff = BTreeMap::new();
    for ((i, j), m) in &c.diff {
        diff.insert((*i, *j), m.neg());
    }
    for ((i, j), m) in &d.diff {
        diff.insert((i + off, j + off), m.clone());
    }
    for ((i, j), m) in &f.components {
        if !m.is_zero() {
            diff.insert((*i, j + off), m.clone());
        }
    }
    let window = match (c.window.map(|w| w.shift(-2)), d.window) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(Window::new(a.lo2.min(b.lo2), a.hi2.min(b.hi2))),
    };
    let k = Complex {
        bottom: d.bottom,
        top: d.top,
        objects,
        diff,
        window,
    };
    k.debug_check();
    k
}

#[cfg(test)]
mod tests;
