use std::collections::BTreeMap;

use super::{ChainMap, Complex, Degree, GradedObject};
use crate::cob::{cap_loops, cup_loops, Morphism, Smoothing};
use crate::ring::Coeff;

/// Summand `s` of an object with `k` free loops: bit `l` set means loop `l`
/// contributes `q^{+1}` (undotted cup in, dotted cap out), clear means
/// `q^{-1}` (dotted cup in, undotted cap out).
struct Summands<R: Coeff> {
    flat: Smoothing,
    shifts: Vec<i32>,
    ins: Vec<Morphism<R>>,
    outs: Vec<Morphism<R>>,
}

fn summands<R: Coeff>(x: &Smoothing) -> Summands<R> {
    let k = x.loops as usize;
    let all = (1u64 << k) - 1;
    let mut s = Summands {
        flat: Smoothing::flat(x.tangle.clone()),
        shifts: Vec::new(),
        ins: Vec::new(),
        outs: Vec::new(),
    };
    for mask in 0..(1u64 << k) {
        let plus = mask.count_ones() as i32;
        s.shifts.push(2 * plus - k as i32);
        s.ins.push(cup_loops(x, all & !mask));
        s.outs.push(cap_loops(x, mask));
    }
    s
}

/// Replace every object carrying `k` free loops by `2^k` flat objects.
///
/// Returns the delooped complex and the inverse isomorphisms
/// `(C → C', C' → C)`.
pub fn deloop<R: Coeff>(c: &Complex<R>) -> (Complex<R>, (ChainMap<R>, ChainMap<R>)) {
    if !c.has_loops() {
        return (c.clone(), (ChainMap::identity(c), ChainMap::identity(c)));
    }
    let (d, parts, data) = deloop_parts(c);
    let mut f = BTreeMap::new();
    let mut g = BTreeMap::new();
    for (i, o) in c.objects.iter().enumerate() {
        match &data[i] {
            None => {
                let id = Morphism::identity(&o.obj);
                f.insert((i, parts[i][0]), id.clone());
                g.insert((parts[i][0], i), id);
            }
            Some(s) => {
                for (a, &ni) in parts[i].iter().enumerate() {
                    f.insert((i, ni), s.outs[a].clone());
                    g.insert((ni, i), s.ins[a].clone());
                }
            }
        }
    }
    let fwd = ChainMap {
        source: c.clone(),
        target: d.clone(),
        t2_shift: 0,
        components: f,
    };
    let back = ChainMap {
        source: d.clone(),
        target: c.clone(),
        t2_shift: 0,
        components: g,
    };
    (d, (fwd, back))
}

/// Delooped complex without the witness maps.
pub(crate) fn deloop_complex<R: Coeff>(c: &Complex<R>) -> Complex<R> {
    if !c.has_loops() {
        return c.clone();
    }
    deloop_parts(c).0
}

type Parts<R> = (Complex<R>, Vec<Vec<usize>>, Vec<Option<Summands<R>>>);

fn deloop_parts<R: Coeff>(c: &Complex<R>) -> Parts<R> {
    let mut objects = Vec::new();
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(c.len());
    let mut data: Vec<Option<Summands<R>>> = Vec::with_capacity(c.len());
    for o in &c.objects {
        if o.obj.loops == 0 {
            parts.push(vec![objects.len()]);
            objects.push(o.clone());
            data.push(None);
            continue;
        }
        let s = summands::<R>(&o.obj);
        let mut idx = Vec::new();
        for &sh in &s.shifts {
            idx.push(objects.len());
            objects.push(GradedObject {
                degree: o.degree + Degree::new(0, sh),
                obj: s.flat.clone(),
            });
        }
        parts.push(idx);
        data.push(Some(s));
    }
    let mut diff = BTreeMap::new();
    for (&(i, j), m) in &c.diff {
        for (a, &ni) in parts[i].iter().enumerate() {
            let left = match &data[i] {
                Some(s) => s.ins[a].then_unchecked(m),
                None => m.clone(),
            };
            if left.is_zero() {
                continue;
            }
            for (b, &nj) in parts[j].iter().enumerate() {
                let e = match &data[j] {
                    Some(s) => left.then_unchecked(&s.outs[b]),
                    None => left.clone(),
                };
                if !e.is_zero() {
                    diff.insert((ni, nj), e);
                }
            }
        }
    }
    let d = Complex::from_parts_unchecked(c.bottom, c.top, objects, diff, c.window);
    d.debug_check();
    (d, parts, data)
}
