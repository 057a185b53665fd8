//! Flat tangles: crossingless matchings of boundary points.
//!
//! Points are indexed canonically: bottom points `0..bottom` left to right,
//! then top points `bottom..bottom+top` left to right. Planarity is checked in
//! the circular order around the rectangle (bottom left to right, then top
//! right to left).

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Partners = SmallVec<[u8; 16]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatTangle {
    bottom: u8,
    top: u8,
    partner: Partners,
}

impl FlatTangle {
    pub fn new(bottom: usize, top: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let total = bottom + top;
        if !total.is_multiple_of(2) {
            return Err(Error::InvalidTangle(format!(
                "odd number of boundary points ({bottom} + {top})"
            )));
        }
        if total > 64 {
            return Err(Error::InvalidTangle("too many boundary points".into()));
        }
        let mut partner: Partners = SmallVec::from_elem(u8::MAX, total);
        for &(i, j) in pairs {
            if i >= total || j >= total || i == j {
                return Err(Error::InvalidTangle(format!("bad pair ({i}, {j})")));
            }
            if partner[i] != u8::MAX || partner[j] != u8::MAX {
                return Err(Error::InvalidTangle(format!("point reused in ({i}, {j})")));
            }
            partner[i] = j as u8;
            partner[j] = i as u8;
        }
        if partner.contains(&u8::MAX) {
            return Err(Error::InvalidTangle("matching is not perfect".into()));
        }
        let t = FlatTangle {
            bottom: bottom as u8,
            top: top as u8,
            partner,
        };
        if !t.is_planar() {
            return Err(Error::InvalidTangle(format!("pairs interleave: {:?}", t.pairs())));
        }
        Ok(t)
    }

    pub(crate) fn from_partners_unchecked(bottom: usize, top: usize, partner: Partners) -> Self {
        let t = FlatTangle {
            bottom: bottom as u8,
            top: top as u8,
            partner,
        };
        debug_assert!(t.is_planar());
        t
    }

    pub fn empty() -> Self {
        FlatTangle {
            bottom: 0,
            top: 0,
            partner: SmallVec::new(),
        }
    }

    /// `n` parallel vertical strands.
    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n)
            .map(|p| if p < n { (p + n) as u8 } else { (p - n) as u8 })
            .collect();
        FlatTangle {
            bottom: n as u8,
            top: n as u8,
            partner,
        }
    }

    /// Temperley–Lieb generator `e_i` on `n` strands (`1 <= i < n`): a cup
    /// and a cap on strands `i, i+1`.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::InvalidTangle(format!("e_{i} on {n} strands")));
        }
        let mut pairs = vec![(i - 1, i), (n + i - 1, n + i)];
        for s in 0..n {
            if s != i - 1 && s != i {
                pairs.push((s, n + s));
            }
        }
        FlatTangle::new(n, n, &pairs)
    }

    /// Cap joining strands `i, i+1` (1-based) of `n` bottom strands; `n-2` on top.
    pub fn cap(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::InvalidTangle(format!("cap_{i} on {n} strands")));
        }
        let top = n - 2;
        let mut pairs = vec![(i - 1, i)];
        let mut k = 0;
        for s in 0..n {
            if s != i - 1 && s != i {
                pairs.push((s, n + k));
                k += 1;
            }
        }
        FlatTangle::new(n, top, &pairs)
    }

    /// Cup creating strands `i, i+1` (1-based, counted on top) above `n` bottom strands.
    pub fn cup(n: usize, i: usize) -> Result<Self> {
        let top = n + 2;
        if i == 0 || i >= top {
            return Err(Error::InvalidTangle(format!("cup_{i} on {n} strands")));
        }
        let mut pairs = vec![(n + i - 1, n + i)];
        let mut k = 0;
        for s in 0..top {
            if s != i - 1 && s != i {
                pairs.push((k, n + s));
                k += 1;
            }
        }
        FlatTangle::new(n, top, &pairs)
    }

    pub fn bottom(&self) -> usize {
        self.bottom as usize
    }

    pub fn top(&self) -> usize {
        self.top as usize
    }

    pub fn num_points(&self) -> usize {
        self.partner.len()
    }

    /// Strand count `n` for square tangles (`2n` boundary points).
    pub fn n(&self) -> usize {
        self.num_points() / 2
    }

    pub fn is_square(&self) -> bool {
        self.bottom == self.top
    }

    pub fn partner(&self, p: usize) -> usize {
        self.partner[p] as usize
    }

    /// Sorted pair list `(i, j)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.num_points())
            .filter_map(|p| {
                let q = self.partner(p);
                (p < q).then_some((p, q))
            })
            .collect()
    }

    pub fn is_top(&self, p: usize) -> bool {
        p >= self.bottom()
    }

    fn circular(&self, p: usize) -> usize {
        let b = self.bottom();
        if p < b {
            p
        } else {
            b + (self.top() - 1 - (p - b))
        }
    }

    pub fn is_planar(&self) -> bool {
        let pairs: Vec<(usize, usize)> = self
            .pairs()
            .into_iter()
            .map(|(i, j)| {
                let (a, b) = (self.circular(i), self.circular(j));
                (a.min(b), a.max(b))
            })
            .collect();
        for (x, &(i, j)) in pairs.iter().enumerate() {
            for &(k, l) in &pairs[x + 1..] {
                if (i < k && k < j && j < l) || (k < i && i < l && l < j) {
                    return false;
                }
            }
        }
        true
    }

    /// Number of arcs joining the bottom to the top.
    pub fn through_strands(&self) -> usize {
        (0..self.bottom())
            .filter(|&p| self.is_top(self.partner(p)))
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == FlatTangle::identity(self.bottom())
    }

    /// Mirror top to bottom.
    pub fn reflect(&self) -> FlatTangle {
        let (b, t) = (self.bottom(), self.top());
        let map = |p: usize| if p < b { t + p } else { p - b };
        let mut partner: Partners = SmallVec::from_elem(0, b + t);
        for p in 0..b + t {
            partner[map(p)] = map(self.partner(p)) as u8;
        }
        FlatTangle::from_partners_unchecked(t, b, partner)
    }
}

impl fmt::Debug for FlatTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{}|{}]{:?}", self.bottom, self.top, self.pairs())
    }
}

impl fmt::Display for FlatTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// JSON shape: `{"n": bottom, "pairs": [[i, j], ...]}` with an explicit
/// `"top"` only when it differs from `"n"`.
#[derive(Serialize, Deserialize)]
struct TangleJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top: Option<usize>,
    pairs: Vec<[usize; 2]>,
}

impl Serialize for FlatTangle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TangleJson {
            n: self.bottom(),
            top: (!self.is_square()).then_some(self.top()),
            pairs: self.pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlatTangle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TangleJson::deserialize(d)?;
        let pairs: Vec<(usize, usize)> = j.pairs.iter().map(|p| (p[0], p[1])).collect();
        FlatTangle::new(j.n, j.top.unwrap_or(j.n), &pairs).map_err(serde::de::Error::custom)
    }
}

/// A flat tangle together with a number of free closed circles.
///
/// Complexes only carry circles transiently; `deloop` removes them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Smoothing {
    pub tangle: FlatTangle,
    pub loops: u8,
}

impl Smoothing {
    pub fn flat(tangle: FlatTangle) -> Self {
        Smoothing { tangle, loops: 0 }
    }

    pub fn with_loops(tangle: FlatTangle, loops: usize) -> Self {
        Smoothing {
            tangle,
            loops: loops as u8,
        }
    }

    pub fn boundary(&self) -> (usize, usize) {
        (self.tangle.bottom(), self.tangle.top())
    }
}

impl From<FlatTangle> for Smoothing {
    fn from(t: FlatTangle) -> Self {
        Smoothing::flat(t)
    }
}

/// Result of stacking `a` below `b`.
#[derive(Clone, Debug)]
pub struct Glued {
    pub tangle: FlatTangle,
    /// For each closed circle created, the smallest middle point it passes through.
    pub new_loops: Vec<usize>,
}

/// Stack `a` below `b` (identifying `a`'s top with `b`'s bottom).
pub fn glue(a: &FlatTangle, b: &FlatTangle) -> Result<Glued> {
    if a.top() != b.bottom() {
        return Err(Error::Mismatch(format!(
            "cannot glue {} top points onto {} bottom points",
            a.top(),
            b.bottom()
        )));
    }
    let (ab, m, bt) = (a.bottom(), a.top(), b.top());
    let total = ab + bt;
    let mut partner: Partners = SmallVec::from_elem(u8::MAX, total);
    let mut mid_seen = vec![false; m];
    // Outer point numbering: a's bottom points, then b's top points.
    for start in 0..total {
        if partner[start] != u8::MAX {
            continue;
        }
        // (in_a, local point index)
        let (mut in_a, mut p) = if start < ab {
            (true, start)
        } else {
            (false, b.bottom() + (start - ab))
        };
        let end = loop {
            if in_a {
                let q = a.partner(p);
                if q < ab {
                    break q;
                }
                let mid = q - ab;
                mid_seen[mid] = true;
                in_a = false;
                p = mid;
            } else {
                let q = b.partner(p);
                if q >= b.bottom() {
                    break ab + (q - b.bottom());
                }
                mid_seen[q] = true;
                in_a = true;
                p = ab + q;
            }
        };
        partner[start] = end as u8;
        partner[end] = start as u8;
    }
    let mut new_loops = Vec::new();
    for mid in 0..m {
        if mid_seen[mid] {
            continue;
        }
        new_loops.push(mid);
        // Walk the circle through `mid`, marking its middle points.
        let mut cur = mid;
        loop {
            mid_seen[cur] = true;
            let via_b = b.partner(cur);
            mid_seen[via_b] = true;
            let next = a.partner(ab + via_b) - ab;
            if next == mid {
                break;
            }
            cur = next;
        }
    }
    Ok(Glued {
        tangle: FlatTangle::from_partners_unchecked(ab, bt, partner),
        new_loops,
    })
}

/// Object-level vertical composition: the composite tangle and the number of
/// closed circles it creates.
pub fn glue_flat(a: &FlatTangle, b: &FlatTangle) -> Result<(FlatTangle, usize)> {
    let g = glue(a, b)?;
    Ok((g.tangle, g.new_loops.len()))
}

/// Horizontal juxtaposition: `b` placed to the right of `a`.
pub fn hstack_flat(a: &FlatTangle, b: &FlatTangle) -> FlatTangle {
    let (ab, at, bb, bt) = (a.bottom(), a.top(), b.bottom(), b.top());
    let nb = ab + bb;
    let map_a = |p: usize| if p < ab { p } else { nb + (p - ab) };
    let map_b = |p: usize| if p < bb { ab + p } else { nb + at + (p - bb) };
    let mut partner: Partners = SmallVec::from_elem(0, nb + at + bt);
    for p in 0..a.num_points() {
        partner[map_a(p)] = map_a(a.partner(p)) as u8;
    }
    for p in 0..b.num_points() {
        partner[map_b(p)] = map_b(b.partner(p)) as u8;
    }
    FlatTangle::from_partners_unchecked(nb, at + bt, partner)
}

/// Circle structure of `W(x, y)`: `x` glued to the reflection of `y` along
/// all boundary points, plus the free loops of both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circles {
    /// Circle index of each boundary point.
    pub of_point: SmallVec<[u8; 16]>,
    /// Circles passing through boundary points (ordered by smallest point).
    pub arc_circles: usize,
    pub x_loops: usize,
    pub y_loops: usize,
}

impl Circles {
    pub fn count(&self) -> usize {
        self.arc_circles + self.x_loops + self.y_loops
    }

    pub fn x_loop(&self, l: usize) -> usize {
        self.arc_circles + l
    }

    pub fn y_loop(&self, l: usize) -> usize {
        self.arc_circles + self.x_loops + l
    }

    /// Smallest boundary point of each arc circle.
    pub fn min_points(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.arc_circles];
        for (p, &c) in self.of_point.iter().enumerate() {
            let c = c as usize;
            if out[c] == usize::MAX {
                out[c] = p;
            }
        }
        out
    }
}

pub fn circles(x: &Smoothing, y: &Smoothing) -> Result<Circles> {
    if x.boundary() != y.boundary() {
        return Err(Error::Mismatch(format!(
            "Hom between boundaries {:?} and {:?}",
            x.boundary(),
            y.boundary()
        )));
    }
    Ok(circles_unchecked(&x.tangle, &y.tangle, x.loops as usize, y.loops as usize))
}

pub(crate) fn circles_unchecked(
    x: &FlatTangle,
    y: &FlatTangle,
    x_loops: usize,
    y_loops: usize,
) -> Circles {
    let total = x.num_points();
    let mut of_point: SmallVec<[u8; 16]> = SmallVec::from_elem(u8::MAX, total);
    let mut next = 0u8;
    for start in 0..total {
        if of_point[start] != u8::MAX {
            continue;
        }
        let mut p = start;
        loop {
            of_point[p] = next;
            let q = x.partner(p);
            of_point[q] = next;
            p = y.partner(q);
            if p == start {
                break;
            }
        }
        next += 1;
    }
    Circles {
        of_point,
        arc_circles: next as usize,
        x_loops,
        y_loops,
    }
}

/// All planar matchings with the given boundary, sorted.
pub fn all_matchings(bottom: usize, top: usize) -> Vec<FlatTangle> {
    let total = bottom + top;
    if !total.is_multiple_of(2) {
        return Vec::new();
    }
    // Enumerate non-crossing matchings on circular positions.
    fn rec(points: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if points.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = points[0];
        for k in (1..points.len()).step_by(2) {
            acc.push((first, points[k]));
            let inner = &points[1..k];
            let outer = &points[k + 1..];
            let mut inner_out = Vec::new();
            rec(inner, &mut Vec::new(), &mut inner_out);
            let mut outer_out = Vec::new();
            rec(outer, &mut Vec::new(), &mut outer_out);
            for i in &inner_out {
                for o in &outer_out {
                    let mut m = acc.clone();
                    m.extend_from_slice(i);
                    m.extend_from_slice(o);
                    out.push(m);
                }
            }
            acc.pop();
        }
    }
    let circ: Vec<usize> = (0..total).collect();
    let mut raw = Vec::new();
    rec(&circ, &mut Vec::new(), &mut raw);
    // circular position -> canonical index
    let canon = |c: usize| if c < bottom { c } else { bottom + (top - 1 - (c - bottom)) };
    let mut out: Vec<FlatTangle> = raw
        .into_iter()
        .map(|m| {
            let pairs: Vec<(usize, usize)> = m.into_iter().map(|(i, j)| (canon(i), canon(j))).collect();
            FlatTangle::new(bottom, top, &pairs).expect("enumerated matching is planar")
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> FlatTangle {
        FlatTangle::generator(2, 1).unwrap()
    }

    /// Independent loop count: union-find over the points of both tangles.
    fn brute_glue(a: &FlatTangle, b: &FlatTangle) -> (Vec<(usize, usize)>, usize) {
        let (ab, m, bt) = (a.bottom(), a.top(), b.top());
        // nodes: a points 0..ab+m, then b points
        let off = a.num_points();
        let total = off + b.num_points();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let union = |p: &mut Vec<usize>, x: usize, y: usize| {
            let (rx, ry) = (find(p, x), find(p, y));
            p[rx] = ry;
        };
        for (i, j) in a.pairs() {
            union(&mut parent, i, j);
        }
        for (i, j) in b.pairs() {
            union(&mut parent, off + i, off + j);
        }
        for k in 0..m {
            union(&mut parent, ab + k, off + k);
        }
        let outer: Vec<usize> = (0..ab).chain((0..bt).map(|k| off + m + k)).collect();
        let mut pairs = Vec::new();
        for (x, &p) in outer.iter().enumerate() {
            for (y, &q) in outer.iter().enumerate().skip(x + 1) {
                if find(&mut parent, p) == find(&mut parent, q) {
                    pairs.push((x, y));
                }
            }
        }
        let mut roots: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).collect();
        let outer_roots: Vec<usize> = outer.iter().map(|&p| find(&mut parent, p)).collect();
        roots.sort();
        roots.dedup();
        let loops = roots.iter().filter(|r| !outer_roots.contains(r)).count();
        (pairs, loops)
    }

    #[test]
    fn matching_counts_are_catalan() {
        let counts: Vec<usize> = (0..6).map(|n| all_matchings(n, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(all_matchings(3, 1).len(), 2);
    }

    #[test]
    fn rejects_bad_matchings() {
        assert!(FlatTangle::new(2, 2, &[(0, 2), (1, 3)]).is_ok());
        // crossing strands
        assert!(FlatTangle::new(2, 2, &[(0, 3), (1, 2)]).is_err());
        assert!(FlatTangle::new(2, 2, &[(0, 1)]).is_err());
        assert!(FlatTangle::new(1, 2, &[]).is_err());
    }

    #[test]
    fn glue_examples() {
        assert_eq!(glue_flat(&e(), &e()).unwrap(), (e(), 1));
        for a in all_matchings(3, 3) {
            assert_eq!(glue_flat(&FlatTangle::identity(3), &a).unwrap(), (a.clone(), 0));
            assert_eq!(glue_flat(&a, &FlatTangle::identity(3)).unwrap(), (a, 0));
        }
        assert!(glue_flat(&e(), &FlatTangle::identity(3)).is_err());
    }

    #[test]
    fn glue_table_matches_brute_force() {
        for n in [2, 4] {
            let all = all_matchings(n, n);
            for a in &all {
                for b in &all {
                    let (t, loops) = glue_flat(a, b).unwrap();
                    let (pairs, bl) = brute_glue(a, b);
                    assert_eq!(t.pairs(), pairs, "{a:?} * {b:?}");
                    assert_eq!(loops, bl);
                    assert!(t.is_planar());
                }
            }
        }
    }

    #[test]
    fn cap_cup_make_a_circle() {
        let g = glue(&FlatTangle::cup(0, 1).unwrap(), &FlatTangle::cap(2, 1).unwrap()).unwrap();
        assert_eq!(g.tangle, FlatTangle::empty());
        assert_eq!(g.new_loops, vec![0]);
        let (t, l) = glue_flat(&FlatTangle::cap(2, 1).unwrap(), &FlatTangle::cup(0, 1).unwrap()).unwrap();
        assert_eq!((t, l), (e(), 0));
    }

    #[test]
    fn hstack_examples() {
        let one = FlatTangle::identity(1);
        assert_eq!(hstack_flat(&one, &one), FlatTangle::identity(2));
        assert_eq!(hstack_flat(&e(), &one), FlatTangle::generator(3, 1).unwrap());
        assert_eq!(hstack_flat(&one, &e()), FlatTangle::generator(3, 2).unwrap());
        let all = all_matchings(2, 2);
        for a in &all {
            for b in &all {
                for c in &all {
                    let l = hstack_flat(&hstack_flat(a, b), c);
                    let r = hstack_flat(a, &hstack_flat(b, c));
                    assert_eq!(l, r);
                    assert!(l.is_planar());
                }
            }
        }
    }

    #[test]
    fn circle_counts() {
        let id2 = Smoothing::flat(FlatTangle::identity(2));
        assert_eq!(circles(&id2, &id2).unwrap().count(), 2);
        assert_eq!(circles(&id2, &Smoothing::flat(e())).unwrap().count(), 1);
        for n in 1..5 {
            for a in all_matchings(n, n) {
                let s = Smoothing::flat(a);
                assert_eq!(circles(&s, &s).unwrap().count(), n);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let a = FlatTangle::generator(3, 2).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":3,"pairs":[[0,3],[1,2],[4,5]]}"#);
        assert_eq!(serde_json::from_str::<FlatTangle>(&s).unwrap(), a);
        let c = FlatTangle::cap(2, 1).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<FlatTangle>(&s).unwrap(), c);
        assert!(serde_json::from_str::<FlatTangle>(r#"{"n":2,"pairs":[[0,3],[1,2]]}"#).is_err());
    }

    #[test]
    fn reflect_is_involution() {
        for a in all_matchings(3, 3).into_iter().chain(all_matchings(4, 2)) {
            assert_eq!(a.reflect().reflect(), a);
            assert!(a.reflect().is_planar());
        }
        assert_eq!(FlatTangle::cap(3, 1).unwrap().reflect(), FlatTangle::cup(1, 1).unwrap());
    }
}
