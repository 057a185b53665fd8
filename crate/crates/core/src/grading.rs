//! Cyclic quotients of the bigrading and the shift functor on the projector category.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::cob::Smoothing;
use crate::complex::{equivalent_with, simplify, Complex, Degree, EquivOptions};
use crate::error::{Error, Result};
use crate::projectors::{
    derive_twist_shift, higher_projector, predicted_eigenvalue, universal_projector, ProjectorComplex, ShiftSpec,
};
use crate::ring::Coeff;
use crate::tl::{framed_twist_eigenvalue, full_twist_eigenvalue};
use crate::{FlatTangle, Morphism};

/// The relation `t^{n/2} q^m = 1`, stored with a canonical sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientGrading {
    pub t_half_steps: i32,
    pub q_steps: i32,
}

impl QuotientGrading {
    pub fn new(t_half_steps: i32, q_steps: i32) -> Self {
        let flip = t_half_steps < 0 || (t_half_steps == 0 && q_steps < 0);
        if flip {
            QuotientGrading {
                t_half_steps: -t_half_steps,
                q_steps: -q_steps,
            }
        } else {
            QuotientGrading { t_half_steps, q_steps }
        }
    }

    pub fn from_degree(d: Degree) -> Self {
        Self::new(d.t2, d.q)
    }

    pub fn trivial() -> Self {
        Self::new(0, 0)
    }

    pub fn is_trivial(self) -> bool {
        self.t_half_steps == 0 && self.q_steps == 0
    }

    pub fn generator(self) -> Degree {
        Degree::new(self.t_half_steps, self.q_steps)
    }

    /// Canonical coset representative: `t2 ∈ [0, n)` when `n ≠ 0`, else `q ∈ [0, m)`.
    pub fn reduce(self, d: Degree) -> Degree {
        let g = self.generator();
        if g.t2 != 0 {
            d - g.scale(d.t2.div_euclid(g.t2))
        } else if g.q != 0 {
            d - g.scale(d.q.div_euclid(g.q))
        } else {
            d
        }
    }

    /// `Some(j)` with `d = j·generator`.
    pub fn multiple(self, d: Degree) -> Option<i32> {
        let g = self.generator();
        if g == Degree::ZERO {
            return (d == Degree::ZERO).then_some(0);
        }
        let j = if g.t2 != 0 { d.t2 / g.t2 } else { d.q / g.q };
        (g.scale(j) == d).then_some(j)
    }
}

/// A degree up to the quotient relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetDegree {
    representative: Degree,
    modulus: QuotientGrading,
}

impl CosetDegree {
    pub fn new(d: Degree, modulus: QuotientGrading) -> Self {
        CosetDegree {
            representative: modulus.reduce(d),
            modulus,
        }
    }

    pub fn representative(self) -> Degree {
        self.representative
    }

    pub fn modulus(self) -> QuotientGrading {
        self.modulus
    }

    pub fn contains(self, d: Degree) -> bool {
        self.modulus.reduce(d) == self.representative
    }

    fn check(self, o: CosetDegree) {
        assert_eq!(self.modulus, o.modulus, "cosets of different quotients");
    }
}

impl Add for CosetDegree {
    type Output = CosetDegree;
    fn add(self, o: CosetDegree) -> CosetDegree {
        self.check(o);
        CosetDegree::new(self.representative + o.representative, self.modulus)
    }
}

impl Sub for CosetDegree {
    type Output = CosetDegree;
    fn sub(self, o: CosetDegree) -> CosetDegree {
        self.check(o);
        CosetDegree::new(self.representative - o.representative, self.modulus)
    }
}

impl Neg for CosetDegree {
    type Output = CosetDegree;
    fn neg(self) -> CosetDegree {
        CosetDegree::new(-self.representative, self.modulus)
    }
}

impl fmt::Display for CosetDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.representative, self.modulus.generator())
    }
}

/// A complex whose objects carry coset degrees; the differential is untouched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientComplex<R: Coeff> {
    pub modulus: QuotientGrading,
    pub bottom: usize,
    pub top: usize,
    pub objects: Vec<(CosetDegree, Smoothing)>,
    pub diff: BTreeMap<(usize, usize), Morphism<R>>,
    source: Complex<R>,
}

pub fn reduce_gradings<R: Coeff>(c: &Complex<R>, g: QuotientGrading) -> QuotientComplex<R> {
    QuotientComplex {
        modulus: g,
        bottom: c.bottom(),
        top: c.top(),
        objects: c
            .objects()
            .iter()
            .map(|o| (CosetDegree::new(o.degree, g), o.obj.clone()))
            .collect(),
        diff: c.diff().clone(),
        source: c.clone(),
    }
}

impl<R: Coeff> QuotientComplex<R> {
    /// Multiplicity of each (coset, tangle) pair.
    pub fn fiber_ranks(&self) -> BTreeMap<(Degree, FlatTangle), usize> {
        let mut out = BTreeMap::new();
        for (d, o) in &self.objects {
            *out.entry((d.representative(), o.tangle.clone())).or_default() += 1;
        }
        out
    }

    /// Same structure once gradings are forgotten down to cosets.
    pub fn structurally_equal(&self, o: &Self) -> bool {
        (self.modulus, self.bottom, self.top, &self.objects, &self.diff)
            == (o.modulus, o.bottom, o.top, &o.objects, &o.diff)
    }

    /// The complex format with degrees replaced by representatives and a `modulus` field.
    pub fn to_json_value(&self) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self.source.to_json_value()?)?;
        if let Some(objs) = v.get_mut("objects").and_then(|o| o.as_array_mut()) {
            for (o, (d, _)) in objs.iter_mut().zip(&self.objects) {
                o["t"] = d.representative().t2.into();
                o["q"] = d.representative().q.into();
            }
        }
        v["modulus"] = serde_json::to_value(self.modulus)?;
        Ok(v)
    }
}

/// Fiber of the free functor by direct enumeration: objects of `c` in the coset `d`.
pub fn coset_fiber<R: Coeff>(c: &Complex<R>, d: CosetDegree, t: &FlatTangle) -> usize {
    c.objects()
        .iter()
        .filter(|o| d.contains(o.degree) && &o.obj.tangle == t)
        .count()
}

/// The shift functor on the projector category, assembled from two derived twist shifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftFunctor {
    pub n: usize,
    pub k: usize,
    pub degree: Degree,
    /// Negative framed twist of the small cable, used three times.
    pub small: ShiftSpec,
    /// Positive framed twist of the large cable.
    pub big: ShiftSpec,
    /// Decategorified prediction from `degree` for the unframed `T_3` cable.
    pub predicted: Option<(i128, i32)>,
    /// `λ(T_{3n})` on the through-degree `k` cell.
    pub oracle: (i128, i32),
    /// Product of framed eigenvalues, `λ_big · λ_small⁻³`.
    pub oracle_ratio: (i128, i32),
}

impl ShiftFunctor {
    pub fn quotient(&self) -> QuotientGrading {
        QuotientGrading::from_degree(self.degree)
    }

    pub fn decategorified_pass(&self) -> bool {
        self.predicted == Some(self.oracle) && self.oracle == self.oracle_ratio
    }
}

/// Projector on each small cable of `E_{n,k}`: `P_{n,k}`, or bare strands when
/// `k > n = 1` (there is no `P_{1,3}`).
pub fn small_projector<R: Coeff>(n: usize, k: usize, t_hi: i32) -> Result<ProjectorComplex<R>> {
    if k > 3 * n || !(3 * n - k).is_multiple_of(2) {
        return Err(Error::Unsupported(format!("E_{{{n},{k}}}")));
    }
    if k <= n {
        higher_projector(n, k, t_hi)
    } else if n == 1 {
        universal_projector(1, t_hi)
    } else {
        Err(Error::Unsupported(format!("small cable of E_{{{n},{k}}}")))
    }
}

/// `sh_k` for `E_{n,k}`; the big cable needs `P_{3n,k}`, so in practice `n = 1`.
pub fn shift_functor_sh<R: Coeff>(n: usize, k: usize, t_hi: i32) -> Result<ShiftFunctor> {
    let small_p = small_projector::<R>(n, k, t_hi)?;
    let big_p = higher_projector::<R>(3 * n, k, t_hi)?;
    let small = derive_twist_shift(&small_p, false)?;
    let big = derive_twist_shift(&big_p, true)?;
    let degree = big.degree + small.degree.scale(3);
    let crossings = 3 * n * (3 * n - 1);
    let oracle = full_twist_eigenvalue(3 * n, k)?;
    let b = framed_twist_eigenvalue(3 * n, k, true)?;
    let s = framed_twist_eigenvalue(n, small_p.k, false)?;
    let oracle_ratio = (b.0 * s.0.pow(3), b.1 + 3 * s.1);
    Ok(ShiftFunctor {
        n,
        k,
        degree,
        small,
        big,
        predicted: predicted_eigenvalue(degree, crossings, 0),
        oracle,
        oracle_ratio,
    })
}

/// Result of a search for `c ≃ shift(d, j·gen)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftMatch {
    pub j: Option<i32>,
    /// Outcome label per candidate `j` tried.
    pub tried: Vec<(i32, String)>,
}

impl ShiftMatch {
    pub fn inconclusive(&self) -> bool {
        self.j.is_none() && self.tried.iter().any(|(_, l)| l == "inconclusive")
    }
}

pub fn equivalent_up_to_shift<R: Coeff>(c: &Complex<R>, d: &Complex<R>, gen: Degree) -> Result<ShiftMatch> {
    equivalent_up_to_shift_with(c, d, gen, None)
}

/// Try every `j` for which the reduced supports can line up; `cutoff2` bounds the
/// compared range in the frame of `c`.
pub fn equivalent_up_to_shift_with<R: Coeff>(
    c: &Complex<R>,
    d: &Complex<R>,
    gen: Degree,
    cutoff2: Option<i32>,
) -> Result<ShiftMatch> {
    if gen == Degree::ZERO {
        return Err(Error::Unsupported("zero shift generator".into()));
    }
    let (cs, ds) = (simplify(c), simplify(d));
    let lowest = |x: &Complex<R>| x.objects().iter().map(|o| o.degree).min();
    let candidates: Vec<i32> = match (lowest(&cs), lowest(&ds)) {
        (None, None) => vec![0],
        (Some(a), Some(b)) => {
            // The lowest objects must correspond, which pins j when gen moves t;
            // otherwise scan the q-span.
            if gen.t2 != 0 {
                let diff = a.t2 - b.t2;
                if diff % gen.t2 == 0 {
                    vec![diff / gen.t2]
                } else {
                    vec![]
                }
            } else if a.t2 != b.t2 {
                vec![]
            } else {
                let span = |x: &Complex<R>| {
                    let qs = x.objects().iter().map(|o| o.degree.q);
                    (qs.clone().min().unwrap_or(0), qs.max().unwrap_or(0))
                };
                let (cl, ch) = span(&cs);
                let (dl, dh) = span(&ds);
                let (lo, hi) = (cl - dh, ch - dl);
                let m = gen.q.abs();
                (lo.div_euclid(m) - 1..=hi.div_euclid(m) + 1)
                    .map(|j| j * gen.q.signum())
                    .collect()
            }
        }
        _ => vec![],
    };
    let mut tried = Vec::new();
    let mut found = Vec::new();
    for j in candidates {
        let opts = EquivOptions {
            cutoff2,
            ..EquivOptions::default()
        };
        let e = equivalent_with(&cs, &ds.shift(gen.scale(j)), opts);
        if e.is_yes() {
            found.push(j);
        }
        tried.push((j, e.label().to_string()));
    }
    if found.len() > 1 {
        return Err(Error::Inconsistent(format!("several shifts match: {found:?}")));
    }
    Ok(ShiftMatch {
        j: found.first().copied(),
        tried,
    })
}
