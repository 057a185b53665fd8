//! Truncated categorified projectors and checks of their defining properties.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::braid::{cable_widths, crossing_complex, full_twist, kh_bracket_from, BraidWord, SlicedTangle};
use crate::cob::{all_matchings, FlatTangle, Morphism};
use crate::complex::{
    cone, equivalent_with, find_shift, simplify, ChainMap, Complex, Degree, EquivOptions, Window,
};
use crate::error::{Error, Result};
use crate::ring::Coeff;

/// t-levels at the top of a truncation that no check relies on.
pub const MARGIN: i32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// One strand, exact.
    Strand,
    /// Stable truncation of the normalized `T_n^m`.
    Stabilized { power: usize, crossings: usize },
    /// Reduced cone of the projection `P_n → 1_n`, built from `P_n` at `from_trunc`.
    Complement { from_trunc: i32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorComplex<R: Coeff> {
    pub base: Complex<R>,
    pub n: usize,
    pub k: usize,
    /// Objects with `t ≤ t_hi` are exact; `None` for exact complexes.
    pub t_hi: Option<i32>,
    pub provenance: Provenance,
}

impl<R: Coeff> ProjectorComplex<R> {
    /// Highest `t` (doubled) at which derived checks may assert.
    pub fn check_to2(&self) -> Option<i32> {
        self.t_hi.map(|h| 2 * (h - MARGIN))
    }
}

type CacheKey = (TypeId, usize, usize, i32);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>> {
    static C: OnceLock<Mutex<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached<R: Coeff>(n: usize, k: usize, t_hi: i32) -> Option<ProjectorComplex<R>> {
    let g = cache().lock().expect("projector cache");
    g.get(&(TypeId::of::<R>(), n, k, t_hi))
        .and_then(|v| v.downcast_ref::<ProjectorComplex<R>>())
        .cloned()
}

fn store<R: Coeff>(p: &ProjectorComplex<R>, t_hi: i32) {
    cache()
        .lock()
        .expect("projector cache")
        .insert((TypeId::of::<R>(), p.n, p.k, t_hi), Arc::new(p.clone()));
}

/// Forget every memoized projector.
pub fn clear_cache() {
    cache().lock().expect("projector cache").clear();
}

/// Every projector built so far with coefficients `R`, sorted by `(n, k, t_hi)`.
pub fn cache_entries<R: Coeff>() -> Vec<ProjectorComplex<R>> {
    let map = cache().lock().expect("projector cache");
    let mut out: Vec<ProjectorComplex<R>> = map
        .iter()
        .filter(|(key, _)| key.0 == TypeId::of::<R>())
        .filter_map(|(_, v)| v.downcast_ref::<ProjectorComplex<R>>().cloned())
        .collect();
    out.sort_by_key(|p| (p.n, p.k, p.t_hi));
    out
}

/// Crossing complex with the identity resolution at `(0, 0)`.
fn normalized_crossing<R: Coeff>(n: usize, i: usize) -> Result<Complex<R>> {
    Ok(crossing_complex::<R>(n, i, true)?.shift(Degree::new(1, 0)))
}

/// Keep objects with doubled `t ≤ hi2` and record the window.
fn cut<R: Coeff>(c: &Complex<R>, hi2: i32) -> Complex<R> {
    let lo = c.window().map_or(0, |w| w.lo2);
    c.truncate(hi2).with_window(Some(Window::new(lo, hi2)))
}

/// `P_n` exact for `t ≤ t_hi`, by stabilizing normalized full-twist powers.
pub fn universal_projector<R: Coeff>(n: usize, t_hi: i32) -> Result<ProjectorComplex<R>> {
    universal_projector_with(n, t_hi, 64)
}

pub fn universal_projector_with<R: Coeff>(n: usize, t_hi: i32, max_power: usize) -> Result<ProjectorComplex<R>> {
    if n == 0 || t_hi < 0 {
        return Err(Error::Unsupported(format!("P_{n} at t ≤ {t_hi}")));
    }
    if n == 1 {
        return Ok(ProjectorComplex {
            base: Complex::identity(1),
            n,
            k: 1,
            t_hi: None,
            provenance: Provenance::Strand,
        });
    }
    if let Some(p) = cached::<R>(n, n, t_hi) {
        return Ok(p);
    }
    let build2 = 2 * (t_hi + MARGIN);
    let twist = full_twist(n);
    let crossings: Vec<Complex<R>> = twist
        .letters()
        .iter()
        .map(|&l| normalized_crossing::<R>(n, l as usize))
        .collect::<Result<_>>()?;
    let mut cur = Complex::<R>::identity(n).with_window(Some(Window::new(0, build2)));
    let mut prev: Option<Complex<R>> = None;
    let opts = EquivOptions {
        cutoff2: Some(2 * t_hi),
        ..EquivOptions::default()
    };
    for m in 1..=max_power {
        for x in &crossings {
            cur = simplify(&cur.tensor(x)?);
        }
        let now = cut(&cur, 2 * t_hi);
        if let Some(p) = &prev {
            if p.multiset() == now.multiset() && equivalent_with(p, &now, opts).is_yes() {
                let out = ProjectorComplex {
                    base: now,
                    n,
                    k: n,
                    t_hi: Some(t_hi),
                    provenance: Provenance::Stabilized {
                        power: m,
                        crossings: m * twist.len(),
                    },
                };
                store(&out, t_hi);
                return Ok(out);
            }
        }
        prev = Some(now);
    }
    Err(Error::Budget(format!("P_{n} did not stabilize by T^{max_power}")))
}

/// The chain map `P_n → 1_n` that is the identity on the `t = 0` copy of `1_n`.
pub fn projection_to_identity<R: Coeff>(p: &ProjectorComplex<R>) -> Result<ChainMap<R>> {
    let id = FlatTangle::identity(p.n);
    let bottom: Vec<usize> = (0..p.base.len())
        .filter(|&i| {
            let o = &p.base.objects()[i];
            o.degree == Degree::ZERO && o.tangle() == &id && o.obj.loops == 0
        })
        .collect();
    if bottom.len() != 1 {
        return Err(Error::Inconsistent(format!(
            "expected one 1_{} at t = 0, found {}",
            p.n,
            bottom.len()
        )));
    }
    let target = Complex::identity(p.n);
    let f = ChainMap {
        source: p.base.clone(),
        target: target.clone(),
        t2_shift: 0,
        components: [((bottom[0], 0), Morphism::id_flat(&id))].into_iter().collect(),
    };
    f.verify()?;
    Ok(f)
}

/// `P_{n,k}`; the complementary projectors exist for `n ≤ 3`.
pub fn higher_projector<R: Coeff>(n: usize, k: usize, t_hi: i32) -> Result<ProjectorComplex<R>> {
    if k == n {
        return universal_projector(n, t_hi);
    }
    if !matches!((n, k), (2, 0) | (3, 1)) {
        return Err(Error::Unsupported(format!("P_{{{n},{k}}}")));
    }
    if let Some(p) = cached::<R>(n, k, t_hi) {
        return Ok(p);
    }
    let top = universal_projector::<R>(n, t_hi + 1)?;
    let c = simplify(&cone(&projection_to_identity(&top)?)?);
    let out = ProjectorComplex {
        base: cut(&c, 2 * t_hi),
        n,
        k,
        t_hi: Some(t_hi),
        provenance: Provenance::Complement { from_trunc: t_hi + 1 },
    };
    store(&out, t_hi);
    Ok(out)
}

pub fn through_degree<R: Coeff>(c: &Complex<R>) -> usize {
    c.through_degree().unwrap_or(0)
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn count_to<R: Coeff>(c: &Complex<R>, to2: Option<i32>) -> usize {
    c.objects()
        .iter()
        .filter(|o| to2.is_none_or(|h| o.degree.t2 <= h))
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KillReport {
    pub diagram: FlatTangle,
    /// Surviving objects within the checked range, diagram below / above.
    pub below: usize,
    pub above: usize,
    /// Doubled `t` up to which the claim is made (`None`: exact).
    pub within_t2: Option<i32>,
    pub pass: bool,
}

/// `a ⊗ P` and `P ⊗ a` reduce to zero within the margined window.
pub fn check_kill<R: Coeff>(p: &ProjectorComplex<R>, a: &FlatTangle) -> Result<KillReport> {
    if a.bottom() != p.n || a.top() != p.n {
        return Err(Error::Mismatch("diagram and projector widths differ".into()));
    }
    if a.through_strands() >= p.k {
        return Err(Error::Unsupported("diagram does not have smaller through-degree".into()));
    }
    let to2 = p.check_to2();
    if to2.is_some_and(|h| h < 0) {
        return Err(Error::Window("truncation too small to certify".into()));
    }
    let ac = Complex::<R>::single(a.clone(), Degree::ZERO);
    let below = count_to(&simplify(&ac.tensor(&p.base)?), to2);
    let above = count_to(&simplify(&p.base.tensor(&ac)?), to2);
    Ok(KillReport {
        diagram: a.clone(),
        below,
        above,
        within_t2: to2,
        pass: below == 0 && above == 0,
    })
}

/// Every flat diagram on `n` strands of through-degree below `k`; empty means vacuous.
pub fn killable_diagrams(n: usize, k: usize) -> Vec<FlatTangle> {
    all_matchings(n, n)
        .into_iter()
        .filter(|t| t.through_strands() < k)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub l: usize,
    pub k: usize,
    pub expect_zero: bool,
    pub outcome: String,
    pub within_t2: Option<i32>,
    pub pass: bool,
}

/// `P ⊗ Q ≃ Q` when the labels agree and `≃ 0` otherwise, within the window.
pub fn check_idempotent<R: Coeff>(p: &ProjectorComplex<R>, q: &ProjectorComplex<R>) -> Result<IdempotentReport> {
    if p.n != q.n {
        return Err(Error::Mismatch("projectors on different strand counts".into()));
    }
    let to2 = min_opt(p.check_to2(), q.check_to2());
    if to2.is_some_and(|h| h < 0) {
        return Err(Error::Window("truncation too small to certify".into()));
    }
    let prod = simplify(&p.base.tensor(&q.base)?);
    let expect_zero = p.k != q.k;
    let (outcome, pass) = if expect_zero {
        let left = count_to(&prod, to2);
        (format!("{left} objects remain"), left == 0)
    } else {
        let opts = EquivOptions {
            cutoff2: to2,
            ..EquivOptions::default()
        };
        let e = equivalent_with(&prod, &q.base, opts);
        (e.label().to_string(), e.is_yes())
    };
    Ok(IdempotentReport {
        l: p.k,
        k: q.k,
        expect_zero,
        outcome,
        within_t2: to2,
        pass,
    })
}

/// Degree by which a twist of the projector's cable is absorbed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSpec {
    pub degree: Degree,
    pub n: usize,
    pub k: usize,
    pub positive: bool,
    /// Doubled `t`, relative to the projector, up to which the equivalence was certified.
    pub certified_to2: Option<i32>,
}

/// `D ⊗ P ≃ shift(P, s)` for `D` the framed (ribbon) twist of the projector's cable.
pub fn derive_twist_shift<R: Coeff>(p: &ProjectorComplex<R>, positive: bool) -> Result<ShiftSpec> {
    let t = SlicedTangle::framed_twist(p.n, positive);
    let c = kh_bracket_from(p.base.clone(), &t, None)?;
    absorbed_shift(p, &c, positive)
}

/// Find `s` with `c ≃ shift(P, s)` and certify it within the windows.
pub(crate) fn absorbed_shift<R: Coeff>(p: &ProjectorComplex<R>, c: &Complex<R>, positive: bool) -> Result<ShiftSpec> {
    let s = find_shift(c, &p.base)
        .ok_or_else(|| Error::Inconsistent("no candidate shift: lowest objects differ".into()))?;
    let own = c.hi2().map(|h| h - 2 * MARGIN);
    let rel = p.check_to2().map(|h| h + s.t2);
    let cutoff = min_opt(own, rel);
    if cutoff.is_some_and(|h| h < s.t2) {
        return Err(Error::Window(format!(
            "twist uses up the truncation of P_{{{},{}}}",
            p.n, p.k
        )));
    }
    let opts = EquivOptions {
        cutoff2: cutoff,
        ..EquivOptions::default()
    };
    let e = equivalent_with(c, &p.base.shift(s), opts);
    if !e.is_yes() {
        return Err(Error::Inconsistent(format!(
            "twist is not absorbed by a shift ({})",
            e.label()
        )));
    }
    Ok(ShiftSpec {
        degree: s,
        n: p.n,
        k: p.k,
        positive,
        certified_to2: cutoff.map(|h| h - s.t2),
    })
}

/// The TL eigenvalue `±A^c` predicted by an absorbed shift of a diagram with
/// `pos` positive and `neg` negative crossings.
pub fn predicted_eigenvalue(shift: Degree, pos: usize, neg: usize) -> Option<(i128, i32)> {
    // Each positive crossing bridges to −i·A⁻¹⟨σ⟩, each negative to i·A⟨σ⁻¹⟩,
    // and the shift to i^{2t}(−q)^… with q ↦ −A⁻².
    let ipow = (shift.t2 + 2 * shift.q + pos as i32 - neg as i32).rem_euclid(4);
    let sign = match ipow {
        0 => 1,
        2 => -1,
        _ => return None,
    };
    Some((sign, pos as i32 - neg as i32 - 2 * shift.q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DragReport {
    pub word: String,
    pub widths: Vec<usize>,
    pub slot: usize,
    pub outcome: String,
    pub within_t2: Option<i32>,
    pub pass: bool,
}

fn place<R: Coeff>(widths: &[usize], slot: usize, x: &Complex<R>) -> Complex<R> {
    let mut c: Option<Complex<R>> = None;
    for (i, &w) in widths.iter().enumerate() {
        let piece = if i == slot { x.clone() } else { Complex::identity(w) };
        c = Some(match c {
            None => piece,
            Some(c) => c.hstack(&piece),
        });
    }
    c.unwrap_or_else(|| Complex::identity(0))
}

/// `below` on bundle `slot` then the cabled braid, against the braid then `above`
/// on the bundle where `slot` ends up.
pub fn drag_through_pair<R: Coeff>(
    below: &Complex<R>,
    above: &Complex<R>,
    w: &BraidWord,
    widths: &[usize],
    slot: usize,
    to2: Option<i32>,
) -> Result<DragReport> {
    if widths.len() != w.strands() || slot >= widths.len() {
        return Err(Error::Mismatch("one width per bundle".into()));
    }
    let cabled = SlicedTangle::from_braid(&cable_widths(w, widths));
    let perm = w.permutation();
    let mut after = vec![0; widths.len()];
    for (i, &wd) in widths.iter().enumerate() {
        after[perm[i]] = wd;
    }
    let lhs = kh_bracket_from(place(widths, slot, below), &cabled, None)?;
    let total: usize = widths.iter().sum();
    let braid = kh_bracket_from(Complex::identity(total), &cabled, None)?;
    let rhs = simplify(&braid.tensor(&place(&after, perm[slot], above))?);
    let own = min_opt(lhs.hi2(), rhs.hi2()).map(|h| h - 2 * MARGIN);
    let cutoff = min_opt(own, to2);
    let opts = EquivOptions {
        cutoff2: cutoff,
        ..EquivOptions::default()
    };
    let e = equivalent_with(&lhs, &rhs, opts);
    Ok(DragReport {
        word: w.to_string(),
        widths: widths.to_vec(),
        slot,
        outcome: e.label().into(),
        within_t2: cutoff,
        pass: e.is_yes(),
    })
}

pub fn check_drag_through<R: Coeff>(
    p: &ProjectorComplex<R>,
    w: &BraidWord,
    widths: &[usize],
    slot: usize,
) -> Result<DragReport> {
    if widths.get(slot) != Some(&p.n) {
        return Err(Error::Mismatch("projector width differs from its bundle".into()));
    }
    drag_through_pair(&p.base, &p.base, w, widths, slot, p.check_to2())
}

#[cfg(test)]
mod tests;
