//! Braid words, sliced tangle diagrams and the Khovanov bracket.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::cob::{saddle, FlatTangle};
use crate::complex::{equivalent, simplify, Complex, Degree, GradedObject};
use crate::error::{Error, Result};
use crate::ring::Coeff;

/// A word in the generators `σ_i^{±1}` of the braid group on `strands`
/// strands; letter `+i` is `σ_i`, `-i` is `σ_i^{-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::Parse(format!("letter {l} out of range on {strands} strands")));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn generator(strands: usize, i: i32) -> Result<Self> {
        BraidWord::new(strands, vec![i])
    }

    /// Parse `"s1 s2^-1 s1"` on the given number of strands.
    pub fn parse(strands: usize, s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == ',').filter(|t| !t.is_empty()) {
            let body = tok
                .strip_prefix('s')
                .or_else(|| tok.strip_prefix('σ'))
                .ok_or_else(|| Error::Parse(format!("bad letter {tok:?}")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let i: i32 = idx.parse().map_err(|_| Error::Parse(format!("bad index in {tok:?}")))?;
            let e: i32 = exp
                .trim_matches(|c| c == '(' || c == ')')
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
            let l = if e < 0 { -i } else { i };
            for _ in 0..e.unsigned_abs() {
                letters.push(l);
            }
        }
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    pub fn writhe(&self) -> i32 {
        self.letters.iter().map(|l| l.signum()).sum()
    }

    /// Underlying permutation: `perm[k]` is the final position of the strand starting at `k`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[position] = strand
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &s) in at.iter().enumerate() {
            perm[s] = pos;
        }
        perm
    }

    /// Free reduction of adjacent inverse pairs.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    /// The same word with strands added on the right.
    pub fn widen(&self, strands: usize) -> Self {
        assert!(strands >= self.strands);
        BraidWord {
            strands,
            letters: self.letters.clone(),
        }
    }

    /// Shift every index by `k` on a wider strand set.
    pub fn offset(&self, k: usize, strands: usize) -> Self {
        BraidWord {
            strands,
            letters: self.letters.iter().map(|l| l.signum() * (l.abs() + k as i32)).collect(),
        }
    }
}

impl Mul for &BraidWord {
    type Output = BraidWord;
    fn mul(self, o: &BraidWord) -> BraidWord {
        let strands = self.strands.max(o.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&o.letters);
        BraidWord { strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| if l > 0 { format!("s{l}") } else { format!("s{}^-1", -l) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}[{}]", self.strands, self)
    }
}

/// `q_n = σ_{n−1} ⋯ σ_1`.
pub fn q_braid(n: usize) -> BraidWord {
    BraidWord {
        strands: n,
        letters: (1..n as i32).rev().collect(),
    }
}

/// `T_n = q_n^n`.
pub fn full_twist(n: usize) -> BraidWord {
    q_braid(n).pow(n)
}

/// Blackboard cabling with every strand replaced by `c` parallel strands.
pub fn cable(w: &BraidWord, c: usize) -> BraidWord {
    cable_widths(w, &vec![c; w.strands])
}

/// Cabling where the strand starting at position `k` has width `widths[k]`.
pub fn cable_widths(w: &BraidWord, widths: &[usize]) -> BraidWord {
    assert_eq!(widths.len(), w.strands, "one width per strand");
    let total: usize = widths.iter().sum();
    let mut cur: Vec<usize> = widths.to_vec();
    let mut letters = Vec::new();
    for &l in &w.letters {
        let i = l.unsigned_abs() as usize - 1;
        let p: usize = cur[..i].iter().sum();
        let (a, b) = (cur[i], cur[i + 1]);
        let mut block = Vec::with_capacity(a * b);
        for r in 0..a {
            for s in 0..b {
                block.push((p + a - r + s) as i32);
            }
        }
        if l < 0 {
            // σ^{-1} on bundles (a, b) undoes σ on bundles (b, a).
            let mut pos_ba = Vec::with_capacity(a * b);
            for r in 0..b {
                for s in 0..a {
                    pos_ba.push((p + b - r + s) as i32);
                }
            }
            block = pos_ba.into_iter().rev().map(|x| -x).collect();
        }
        letters.extend(block);
        cur.swap(i, i + 1);
    }
    BraidWord {
        strands: total,
        letters,
    }
}

/// An elementary horizontal slice of a tangle diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Slice {
    /// `σ_i^{±1}` on strands `i, i+1` (1-based).
    Crossing { i: usize, positive: bool },
    /// Joins strands `i, i+1`.
    Cap { i: usize },
    /// Creates strands `i, i+1` above.
    Cup { i: usize },
}

/// A diagram read bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlicedTangle {
    pub bottom: usize,
    pub slices: Vec<Slice>,
}

impl SlicedTangle {
    pub fn new(bottom: usize, slices: Vec<Slice>) -> Result<Self> {
        let t = SlicedTangle { bottom, slices };
        t.widths()?;
        Ok(t)
    }

    pub fn from_braid(w: &BraidWord) -> Self {
        SlicedTangle {
            bottom: w.strands,
            slices: w
                .letters
                .iter()
                .map(|&l| Slice::Crossing {
                    i: l.unsigned_abs() as usize,
                    positive: l > 0,
                })
                .collect(),
        }
    }

    /// Width below each slice, and the final width.
    pub fn widths(&self) -> Result<Vec<usize>> {
        let mut w = self.bottom;
        let mut out = vec![w];
        for s in &self.slices {
            w = match *s {
                Slice::Crossing { i, .. } if i >= 1 && i < w => w,
                Slice::Cap { i } if i >= 1 && i < w => w - 2,
                Slice::Cup { i } if i >= 1 && i <= w + 1 => w + 2,
                _ => return Err(Error::InvalidTangle(format!("slice {s:?} on {w} strands"))),
            };
            out.push(w);
        }
        Ok(out)
    }

    pub fn top(&self) -> usize {
        *self.widths().expect("validated").last().unwrap()
    }

    pub fn crossings(&self) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for s in &self.slices {
            if let Slice::Crossing { positive, .. } = s {
                if *positive {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
        }
        (pos, neg)
    }

    /// `self` followed by `other` on top.
    pub fn then(&self, other: &SlicedTangle) -> Result<SlicedTangle> {
        if self.top() != other.bottom {
            return Err(Error::Mismatch("slice widths do not match".into()));
        }
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&other.slices);
        Ok(SlicedTangle {
            bottom: self.bottom,
            slices,
        })
    }

    /// Trace closure of a braid: nested cups, the braid on the left strands, nested caps.
    pub fn closure(w: &BraidWord) -> SlicedTangle {
        let n = w.strands;
        let mut slices = Vec::new();
        for k in 0..n {
            slices.push(Slice::Cup { i: k + 1 });
        }
        for &l in &w.letters {
            slices.push(Slice::Crossing {
                i: l.unsigned_abs() as usize,
                positive: l > 0,
            });
        }
        for k in (0..n).rev() {
            slices.push(Slice::Cap { i: k + 1 });
        }
        SlicedTangle { bottom: 0, slices }
    }

    /// One curl on a single strand, crossing sign `positive`.
    pub fn kink(positive: bool) -> SlicedTangle {
        SlicedTangle {
            bottom: 1,
            slices: vec![Slice::Cup { i: 2 }, Slice::Crossing { i: 1, positive }, Slice::Cap { i: 2 }],
        }
    }

    /// A curl on strand `k` (1-based) of `n` strands.
    pub fn kink_on(n: usize, k: usize, positive: bool) -> SlicedTangle {
        SlicedTangle {
            bottom: n,
            slices: vec![
                Slice::Cup { i: k + 1 },
                Slice::Crossing { i: k, positive },
                Slice::Cap { i: k + 1 },
            ],
        }
    }

    /// Blackboard full twist of an `n`-strand ribbon: `T_n^{±1}` plus one curl per strand.
    pub fn framed_twist(n: usize, positive: bool) -> SlicedTangle {
        let t = full_twist(n);
        let t = if positive { t } else { t.inverse() };
        let mut s = SlicedTangle::from_braid(&t);
        for k in 1..=n {
            s = s.then(&SlicedTangle::kink_on(n, k, positive)).expect("same width");
        }
        s
    }
}

/// Two-term complex of one crossing on `n` strands.
///
/// Positive: `1_n` at `(−½, 0)` → `e_i` at `(½, 1)`. Negative: `e_i` at
/// `(−½, −1)` → `1_n` at `(½, 0)`. Both maps are saddles.
pub fn crossing_complex<R: Coeff>(n: usize, i: usize, positive: bool) -> Result<Complex<R>> {
    let id = FlatTangle::identity(n);
    let e = FlatTangle::generator(n, i)?;
    let (a, b, da, db) = if positive {
        (id, e, Degree::new(-1, 0), Degree::new(1, 1))
    } else {
        (e, id, Degree::new(-1, -1), Degree::new(1, 0))
    };
    let m = saddle::<R>(&a, &b)?;
    Complex::from_parts(
        n,
        n,
        vec![GradedObject::new(da, a), GradedObject::new(db, b)],
        [((0, 1), m)].into_iter().collect(),
        None,
    )
}

/// Complex of one slice below which there are `w` strands.
pub fn slice_complex<R: Coeff>(w: usize, s: Slice) -> Result<Complex<R>> {
    match s {
        Slice::Crossing { i, positive } => crossing_complex(w, i, positive),
        Slice::Cap { i } => Ok(Complex::single(FlatTangle::cap(w, i)?, Degree::ZERO)),
        Slice::Cup { i } => Ok(Complex::single(FlatTangle::cup(w, i)?, Degree::ZERO)),
    }
}

/// Khovanov bracket by iterated tensoring, simplifying after each slice.
pub fn kh_bracket<R: Coeff>(t: &SlicedTangle) -> Result<Complex<R>> {
    kh_bracket_from(Complex::identity(t.bottom), t, None)
}

pub fn kh_braid<R: Coeff>(w: &BraidWord) -> Result<Complex<R>> {
    kh_bracket(&SlicedTangle::from_braid(w))
}

/// Stack the slices of `t` on top of `start`, simplifying after each step
/// and truncating above `trunc2` when given.
pub fn kh_bracket_from<R: Coeff>(start: Complex<R>, t: &SlicedTangle, trunc2: Option<i32>) -> Result<Complex<R>> {
    let widths = t.widths()?;
    if start.top() != t.bottom {
        return Err(Error::Mismatch("diagram does not fit on top of the complex".into()));
    }
    let mut c = start;
    for (k, s) in t.slices.iter().enumerate() {
        let piece = slice_complex::<R>(widths[k], *s)?;
        c = simplify(&c.tensor(&piece)?);
        if let Some(h) = trunc2 {
            c = c.truncate(h);
        }
    }
    Ok(c)
}

/// A 2×2 integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix2(pub [[i64; 2]; 2]);

impl IntMatrix2 {
    pub const I: IntMatrix2 = IntMatrix2([[1, 0], [0, 1]]);

    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn neg(&self) -> Self {
        let m = self.0;
        IntMatrix2([[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]])
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Option<Self> {
        let m = self.0;
        match self.det() {
            1 => Some(IntMatrix2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])),
            -1 => Some(IntMatrix2([[-m[1][1], m[0][1]], [m[1][0], -m[0][0]]])),
            _ => None,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = IntMatrix2::I;
        for _ in 0..k {
            r = r * *self;
        }
        r
    }

    /// Equal up to sign (equality in PSL(2, Z)).
    pub fn projectively_eq(&self, o: &IntMatrix2) -> bool {
        self == o || *self == o.neg()
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;
    fn mul(self, o: IntMatrix2) -> IntMatrix2 {
        let (a, b) = (self.0, o.0);
        let mut r = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0]
                    .checked_mul(b[0][j])
                    .and_then(|x| x.checked_add(a[i][1].checked_mul(b[1][j])?))
                    .expect("matrix overflow");
            }
        }
        IntMatrix2(r)
    }
}

/// `σ1 ↦ [[1,1],[0,1]]`, `σ2 ↦ [[1,0],[−1,1]]`.
pub fn braid_to_psl2z(w: &BraidWord) -> Result<IntMatrix2> {
    if w.strands != 3 {
        return Err(Error::Mismatch(format!("PSL(2,Z) image needs 3 strands, got {}", w.strands)));
    }
    let s1 = IntMatrix2([[1, 1], [0, 1]]);
    let s2 = IntMatrix2([[1, 0], [-1, 1]]);
    let mut m = IntMatrix2::I;
    for &l in &w.letters {
        let g = if l.abs() == 1 { s1 } else { s2 };
        m = m * if l > 0 { g } else { g.inverse().unwrap() };
    }
    Ok(m)
}

/// Outcome of the bounded braid-relation search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RewriteOutcome {
    /// Equal; the number of words visited.
    Equal { visited: usize },
    /// The search space was exhausted without meeting.
    NotEqual { visited: usize },
    /// Budget ran out first.
    Budget { visited: usize },
}

fn neighbours(w: &[i32]) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for k in 0..w.len() {
        if k + 1 < w.len() {
            let (a, b) = (w[k], w[k + 1]);
            if a == -b {
                let mut v = w.to_vec();
                v.drain(k..k + 2);
                out.push(v);
            } else if (a.abs() - b.abs()).abs() >= 2 {
                let mut v = w.to_vec();
                v.swap(k, k + 1);
                out.push(v);
            }
        }
        if k + 2 < w.len() {
            let (a, b, c) = (w[k], w[k + 1], w[k + 2]);
            if a == c && a.signum() == b.signum() && (a.abs() - b.abs()).abs() == 1 {
                let mut v = w.to_vec();
                v[k] = b;
                v[k + 1] = a;
                v[k + 2] = b;
                out.push(v);
            }
            // σ_i σ_j σ_i^{-1} = σ_j^{-1} σ_i σ_j for |i − j| = 1
            if a == -c && b.signum() == a.signum() && (a.abs() - b.abs()).abs() == 1 {
                let mut v = w.to_vec();
                v[k] = -b;
                v[k + 1] = a;
                v[k + 2] = b;
                out.push(v);
            }
            if a == -c && b.signum() == c.signum() && (a.abs() - b.abs()).abs() == 1 {
                // σ_i^{-1} σ_j σ_i = σ_j σ_i σ_j^{-1}
                let mut v = w.to_vec();
                v[k] = b;
                v[k + 1] = c;
                v[k + 2] = -b;
                out.push(v);
            }
        }
    }
    out
}

/// Breadth-first search with non-lengthening braid moves from both words.
pub fn braid_words_equal(u: &BraidWord, v: &BraidWord, budget: usize) -> RewriteOutcome {
    let (a, b) = (u.free_reduce().letters, v.free_reduce().letters);
    if a == b {
        return RewriteOutcome::Equal { visited: 1 };
    }
    let mut seen: [HashSet<Vec<i32>>; 2] = [HashSet::new(), HashSet::new()];
    let mut queue: [VecDeque<Vec<i32>>; 2] = [VecDeque::new(), VecDeque::new()];
    seen[0].insert(a.clone());
    seen[1].insert(b.clone());
    queue[0].push_back(a);
    queue[1].push_back(b);
    let mut visited = 2;
    loop {
        if queue[0].is_empty() && queue[1].is_empty() {
            return RewriteOutcome::NotEqual { visited };
        }
        for side in 0..2 {
            let Some(w) = queue[side].pop_front() else { continue };
            for nb in neighbours(&w) {
                if seen[1 - side].contains(&nb) {
                    return RewriteOutcome::Equal { visited };
                }
                if seen[side].insert(nb.clone()) {
                    visited += 1;
                    if visited > budget {
                        return RewriteOutcome::Budget { visited };
                    }
                    queue[side].push_back(nb);
                }
            }
        }
    }
}

/// All words reachable by the moves (within budget), sorted; the first is
/// a canonical representative.
pub fn braid_class(w: &BraidWord, budget: usize) -> Result<BTreeSet<Vec<i32>>> {
    let start = w.free_reduce().letters;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for nb in neighbours(&x) {
            if seen.insert(nb.clone()) {
                if seen.len() > budget {
                    return Err(Error::Budget(format!("braid rewriting exceeded {budget} states")));
                }
                queue.push_back(nb);
            }
        }
    }
    Ok(seen)
}

/// `σ_i z` against `z σ_i`, as permutations and as complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommuteReport {
    pub word: String,
    pub i: usize,
    pub permutations_equal: bool,
    pub complexes: String,
    pub pass: bool,
}

pub fn commute_check<R: Coeff>(z: &BraidWord, i: usize, categorified: bool) -> Result<CommuteReport> {
    let s = BraidWord::generator(z.strands(), i as i32)?;
    let (l, r) = (&s * z, z * &s);
    let permutations_equal = l.permutation() == r.permutation();
    let complexes = if categorified && permutations_equal {
        let e = equivalent(&kh_braid::<R>(&l)?, &kh_braid::<R>(&r)?);
        e.label().to_string()
    } else {
        "skipped".to_string()
    };
    let pass = permutations_equal && (!categorified || complexes == "yes");
    Ok(CommuteReport {
        word: z.to_string(),
        i,
        permutations_equal,
        complexes,
        pass,
    })
}

/// Centrality of the full twist; complexes are compared for `n ≤ 3`.
pub fn center_commute_check<R: Coeff>(n: usize, i: usize) -> Result<CommuteReport> {
    commute_check::<R>(&full_twist(n), i, n <= 3)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub a_squared: String,
    pub b_cubed: String,
    pub permutations_equal: bool,
    pub a_squared_matrix: IntMatrix2,
    pub b_cubed_matrix: IntMatrix2,
    pub twist_matrix: IntMatrix2,
    pub rewriting: Vec<(String, String, RewriteOutcome)>,
    pub pass: bool,
}

/// `a = σ1σ2σ1`, `b = σ1σ2`: `a² = b³ = T_3` in words, permutations and matrices.
pub fn psl2z_relation_report(budget: usize) -> Result<RelationReport> {
    let a = BraidWord::parse(3, "s1 s2 s1")?;
    let b = BraidWord::parse(3, "s1 s2")?;
    let (a2, b3, t) = (a.pow(2), b.pow(3), full_twist(3));
    let m = |w: &BraidWord| braid_to_psl2z(w);
    let (ma, mb, mt) = (m(&a2)?, m(&b3)?, m(&t)?);
    let permutations_equal = a2.permutation() == b3.permutation() && b3.permutation() == t.permutation();
    let rewriting: Vec<(String, String, RewriteOutcome)> = [(&a2, &b3), (&a2, &t), (&b3, &t)]
        .into_iter()
        .map(|(u, v)| (u.to_string(), v.to_string(), braid_words_equal(u, v, budget)))
        .collect();
    let minus = IntMatrix2::I.neg();
    let pass = permutations_equal
        && ma == minus
        && mb == minus
        && mt == minus
        && rewriting.iter().all(|r| matches!(r.2, RewriteOutcome::Equal { .. }));
    Ok(RelationReport {
        a_squared: a2.to_string(),
        b_cubed: b3.to_string(),
        permutations_equal,
        a_squared_matrix: ma,
        b_cubed_matrix: mb,
        twist_matrix: mt,
        rewriting,
        pass,
    })
}

#[cfg(test)]
mod tests;
