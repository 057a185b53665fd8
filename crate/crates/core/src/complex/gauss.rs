use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::deloop::deloop_complex;
use super::{ChainMap, Complex, GradedObject};
use crate::cob::Morphism;
use crate::ring::Coeff;

/// Order in which candidate pivots are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    Forward,
    Reverse,
    Seeded(u64),
}

/// Result of Gaussian elimination.
#[derive(Clone, Debug)]
pub struct Elimination<R: Coeff> {
    pub complex: Complex<R>,
    pub eliminated: usize,
    /// Some entry is a non-unit multiple of an identity (only possible over Z).
    pub reduced_over_z: bool,
    /// Inverse homotopy equivalences `(C → C', C' → C)` when requested.
    pub witness: Option<(ChainMap<R>, ChainMap<R>)>,
}

struct Work<R: Coeff> {
    objs: Vec<Option<GradedObject>>,
    out: Vec<BTreeMap<usize, Morphism<R>>>,
    inc: Vec<BTreeSet<usize>>,
    // F: C → K by current column, G: K → C by current row.
    fcol: Option<Vec<BTreeMap<usize, Morphism<R>>>>,
    grow: Option<Vec<BTreeMap<usize, Morphism<R>>>>,
}

fn add_into<R: Coeff>(map: &mut BTreeMap<usize, Morphism<R>>, k: usize, m: Morphism<R>) -> bool {
    if m.is_zero() {
        return map.contains_key(&k);
    }
    match map.get_mut(&k) {
        Some(s) => {
            s.add_assign(&m);
            if s.is_zero() {
                map.remove(&k);
                return false;
            }
            true
        }
        None => {
            map.insert(k, m);
            true
        }
    }
}

impl<R: Coeff> Work<R> {
    fn new(c: &Complex<R>, witness: bool) -> Self {
        let n = c.len();
        let mut out = vec![BTreeMap::new(); n];
        let mut inc = vec![BTreeSet::new(); n];
        for (&(i, j), m) in &c.diff {
            out[i].insert(j, m.clone());
            inc[j].insert(i);
        }
        let (fcol, grow) = if witness {
            let id = |i: usize| Morphism::identity(&c.objects[i].obj);
            (
                Some((0..n).map(|i| BTreeMap::from([(i, id(i))])).collect()),
                Some((0..n).map(|i| BTreeMap::from([(i, id(i))])).collect()),
            )
        } else {
            (None, None)
        };
        Work {
            objs: c.objects.iter().cloned().map(Some).collect(),
            out,
            inc,
            fcol,
            grow,
        }
    }

    fn eliminate(&mut self, b: usize, c: usize, u: &R) {
        let uinv = u.inv().expect("pivot is a unit");
        let sources: Vec<(usize, Morphism<R>)> = self.inc[c]
            .iter()
            .filter(|&&x| x != b)
            .map(|&x| (x, self.out[x][&c].clone()))
            .collect();
        let targets: Vec<(usize, Morphism<R>)> = self.out[b]
            .iter()
            .filter(|(&y, _)| y != c)
            .map(|(&y, m)| (y, m.clone()))
            .collect();
        for (x, delta) in &sources {
            let left = delta.scale(&uinv.neg());
            for (y, gamma) in &targets {
                let m = left.then_unchecked(gamma);
                if add_into(&mut self.out[*x], *y, m) {
                    self.inc[*y].insert(*x);
                } else {
                    self.inc[*y].remove(x);
                }
            }
        }
        if let Some(fcol) = self.fcol.as_mut() {
            let from_c = std::mem::take(&mut fcol[c]);
            for (y, gamma) in &targets {
                let g = gamma.scale(&uinv.neg());
                for (i, m) in &from_c {
                    add_into(&mut fcol[*y], *i, m.then_unchecked(&g));
                }
            }
            fcol[b].clear();
        }
        if let Some(grow) = self.grow.as_mut() {
            let to_b = std::mem::take(&mut grow[b]);
            for (x, delta) in &sources {
                let d = delta.scale(&uinv.neg());
                for (o, m) in &to_b {
                    add_into(&mut grow[*x], *o, d.then_unchecked(m));
                }
            }
            grow[c].clear();
        }
        for v in [b, c] {
            for (y, _) in std::mem::take(&mut self.out[v]) {
                self.inc[y].remove(&v);
            }
            for x in std::mem::take(&mut self.inc[v]) {
                self.out[x].remove(&v);
            }
            self.objs[v] = None;
        }
    }

    fn pivot_candidates(&self, b: usize) -> Vec<(usize, R)> {
        self.out[b]
            .iter()
            .filter_map(|(&c, m)| m.identity_scalar().filter(|s| s.is_unit()).map(|s| (c, s)))
            .collect()
    }
}

/// Cancel unit multiples of identities until none remain.
pub fn gaussian_eliminate<R: Coeff>(c: &Complex<R>, order: PivotOrder, witness: bool) -> Elimination<R> {
    let mut w = Work::new(c, witness);
    let n = c.len();
    let mut visit: Vec<usize> = (0..n).collect();
    let mut rng = match order {
        PivotOrder::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        _ => None,
    };
    match order {
        PivotOrder::Forward => {}
        PivotOrder::Reverse => visit.reverse(),
        PivotOrder::Seeded(_) => visit.shuffle(rng.as_mut().unwrap()),
    }
    let mut eliminated = 0;
    loop {
        let mut changed = false;
        for &b in &visit {
            if w.objs[b].is_none() {
                continue;
            }
            let cands = w.pivot_candidates(b);
            if cands.is_empty() {
                continue;
            }
            let pick = match order {
                PivotOrder::Forward => 0,
                PivotOrder::Reverse => cands.len() - 1,
                PivotOrder::Seeded(_) => rng.as_mut().unwrap().gen_range(0..cands.len()),
            };
            let (cc, u) = cands[pick].clone();
            w.eliminate(b, cc, &u);
            eliminated += 1;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&i| w.objs[i].is_some()).collect();
    let mut index = vec![usize::MAX; n];
    for (k, &i) in keep.iter().enumerate() {
        index[i] = k;
    }
    let objects: Vec<GradedObject> = keep.iter().map(|&i| w.objs[i].clone().unwrap()).collect();
    let mut diff = BTreeMap::new();
    let mut reduced_over_z = false;
    for &i in &keep {
        for (&j, m) in &w.out[i] {
            if m.identity_scalar().is_some() {
                reduced_over_z = true;
            }
            diff.insert((index[i], index[j]), m.clone());
        }
    }
    let out = Complex::from_parts_unchecked(c.bottom, c.top, objects, diff, c.window);
    out.debug_check();
    let witness = match (w.fcol, w.grow) {
        (Some(fcol), Some(grow)) => {
            let mut f = BTreeMap::new();
            let mut g = BTreeMap::new();
            for &j in &keep {
                for (i, m) in &fcol[j] {
                    f.insert((*i, index[j]), m.clone());
                }
                for (o, m) in &grow[j] {
                    g.insert((index[j], *o), m.clone());
                }
            }
            Some((
                ChainMap {
                    source: c.clone(),
                    target: out.clone(),
                    t2_shift: 0,
                    components: f,
                },
                ChainMap {
                    source: out.clone(),
                    target: c.clone(),
                    t2_shift: 0,
                    components: g,
                },
            ))
        }
        _ => None,
    };
    Elimination {
        complex: out,
        eliminated,
        reduced_over_z,
        witness,
    }
}

/// Deloop, then eliminate every unit pivot.
pub fn simplify<R: Coeff>(c: &Complex<R>) -> Complex<R> {
    simplify_with(c, PivotOrder::Forward)
}

pub fn simplify_with<R: Coeff>(c: &Complex<R>, order: PivotOrder) -> Complex<R> {
    gaussian_eliminate(&deloop_complex(c), order, false).complex
}
