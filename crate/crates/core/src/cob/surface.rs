//! Evaluation of glued disk cobordisms in the dotted normal form.
//!
//! Every basis morphism is a disjoint union of (possibly dotted) disks, one
//! per circle of `W(source, target)`. Composition, vertical gluing and
//! horizontal juxtaposition all glue such disk unions along arcs (or whole
//! circles) and re-express the result in the target basis using neck cutting
//! with `X^2 = 0`: a connected component with `r` boundary circles, genus `g`
//! and `d` dots evaluates to `Δ^{r-1}(X^d (2X)^g)`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use smallvec::SmallVec;

use super::tangle::{circles_unchecked, glue, hstack_flat, Circles, Smoothing};

#[derive(Clone, Debug)]
struct Component {
    f_mask: u64,
    g_mask: u64,
    chi: i32,
    result: SmallVec<[u8; 8]>,
}

/// Precomputed gluing pattern: which disks merge and which result circles
/// bound each merged component.
#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    comps: Vec<Component>,
}

pub(crate) type Terms = SmallVec<[(u64, i64); 4]>;

impl Kernel {
    /// `f_disks` disks come first, then `g_disks`. Edges are `(disk, disk,
    /// interval)`; gluing along an interval lowers the Euler characteristic
    /// by one, along a whole circle by zero.
    fn build(
        f_disks: usize,
        g_disks: usize,
        edges: &[(usize, usize, bool)],
        result_rep: &[usize],
    ) -> Kernel {
        let total = f_disks + g_disks;
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b, _) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut comps: Vec<Component> = Vec::new();
        for d in 0..total {
            let r = find(&mut parent, d);
            let ci = *index.entry(r).or_insert_with(|| {
                comps.push(Component {
                    f_mask: 0,
                    g_mask: 0,
                    chi: 0,
                    result: SmallVec::new(),
                });
                comps.len() - 1
            });
            let c = &mut comps[ci];
            c.chi += 1;
            if d < f_disks {
                c.f_mask |= 1 << d;
            } else {
                c.g_mask |= 1 << (d - f_disks);
            }
        }
        for &(a, _, interval) in edges {
            if interval {
                let r = find(&mut parent, a);
                comps[index[&r]].chi -= 1;
            }
        }
        for (circle, &rep) in result_rep.iter().enumerate() {
            let r = find(&mut parent, rep);
            comps[index[&r]].result.push(circle as u8);
        }
        Kernel { comps }
    }

    /// Express the glued surface for dot sets `df`, `dg` in the result basis.
    pub(crate) fn eval(&self, df: u64, dg: u64) -> Terms {
        let mut acc: Terms = SmallVec::new();
        acc.push((0, 1));
        for c in &self.comps {
            let dots = (df & c.f_mask).count_ones() as i32 + (dg & c.g_mask).count_ones() as i32;
            let r = c.result.len() as i32;
            let twice_genus = 2 - r - c.chi;
            debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0, "bad surface");
            let genus = twice_genus / 2;
            let weight = dots + genus;
            if weight >= 2 {
                return SmallVec::new();
            }
            let all: u64 = c.result.iter().fold(0, |m, &i| m | (1u64 << i));
            let scale = 1i64 << genus;
            if r == 0 {
                if weight == 1 {
                    for t in acc.iter_mut() {
                        t.1 *= scale;
                    }
                    continue;
                }
                return SmallVec::new();
            }
            if weight == 1 {
                for t in acc.iter_mut() {
                    t.0 |= all;
                    t.1 *= scale;
                }
            } else {
                // Δ^{r-1}(1): exactly one circle undotted.
                let mut next: Terms = SmallVec::new();
                for &(m, k) in &acc {
                    for &i in &c.result {
                        next.push((m | (all & !(1u64 << i)), k));
                    }
                }
                acc = next;
            }
        }
        acc
    }
}

type Key3 = (Smoothing, Smoothing, Smoothing);
type Key4 = (Smoothing, Smoothing, Smoothing, Smoothing);

thread_local! {
    static COMPOSE: RefCell<HashMap<Key3, Rc<Kernel>>> = RefCell::new(HashMap::new());
    static TENSOR: RefCell<HashMap<Key4, Rc<TensorKernel>>> = RefCell::new(HashMap::new());
    static HSTACK: RefCell<HashMap<Key4, Rc<Kernel>>> = RefCell::new(HashMap::new());
}

fn circ(x: &Smoothing, y: &Smoothing) -> Circles {
    circles_unchecked(&x.tangle, &y.tangle, x.loops as usize, y.loops as usize)
}

/// Kernel for `g ∘ f` with `f : x → y`, `g : y → z`.
pub(crate) fn compose_kernel(x: &Smoothing, y: &Smoothing, z: &Smoothing) -> Rc<Kernel> {
    let key = (x.clone(), y.clone(), z.clone());
    if let Some(k) = COMPOSE.with(|c| c.borrow().get(&key).cloned()) {
        return k;
    }
    let cf = circ(x, y);
    let cg = circ(y, z);
    let cr = circ(x, z);
    let fdisks = cf.count();
    let mut edges = Vec::new();
    for (p, q) in y.tangle.pairs() {
        debug_assert_eq!(cf.of_point[p], cf.of_point[q]);
        edges.push((cf.of_point[p] as usize, fdisks + cg.of_point[p] as usize, true));
    }
    for l in 0..y.loops as usize {
        edges.push((cf.y_loop(l), fdisks + cg.x_loop(l), false));
    }
    let mut reps: Vec<usize> = cr.min_points().iter().map(|&p| cf.of_point[p] as usize).collect();
    reps.extend((0..x.loops as usize).map(|l| cf.x_loop(l)));
    reps.extend((0..z.loops as usize).map(|l| fdisks + cg.y_loop(l)));
    let k = Rc::new(Kernel::build(fdisks, cg.count(), &edges, &reps));
    COMPOSE.with(|c| c.borrow_mut().insert(key, k.clone()));
    k
}

/// Vertical gluing of `f : a → a2` (below) with `g : b → b2` (above).
pub(crate) struct TensorKernel {
    pub(crate) kernel: Kernel,
    pub(crate) source: Smoothing,
    pub(crate) target: Smoothing,
}

pub(crate) fn glue_smoothings(a: &Smoothing, b: &Smoothing) -> (Smoothing, Vec<usize>) {
    let g = glue(&a.tangle, &b.tangle).expect("boundary checked by caller");
    let loops = a.loops as usize + b.loops as usize + g.new_loops.len();
    (Smoothing::with_loops(g.tangle, loops), g.new_loops)
}

pub(crate) fn tensor_kernel(
    a: &Smoothing,
    a2: &Smoothing,
    b: &Smoothing,
    b2: &Smoothing,
) -> Rc<TensorKernel> {
    let key = (a.clone(), a2.clone(), b.clone(), b2.clone());
    if let Some(k) = TENSOR.with(|c| c.borrow().get(&key).cloned()) {
        return k;
    }
    let (x, new_x) = glue_smoothings(a, b);
    let (x2, new_x2) = glue_smoothings(a2, b2);
    let cf = circ(a, a2);
    let cg = circ(b, b2);
    let cr = circ(&x, &x2);
    let fdisks = cf.count();
    let ab = a.tangle.bottom();
    let edges: Vec<(usize, usize, bool)> = (0..a.tangle.top())
        .map(|m| (cf.of_point[ab + m] as usize, fdisks + cg.of_point[m] as usize, true))
        .collect();
    let bb = b.tangle.bottom();
    let mut reps: Vec<usize> = cr
        .min_points()
        .iter()
        .map(|&p| {
            if p < ab {
                cf.of_point[p] as usize
            } else {
                fdisks + cg.of_point[bb + (p - ab)] as usize
            }
        })
        .collect();
    reps.extend((0..a.loops as usize).map(|l| cf.x_loop(l)));
    reps.extend((0..b.loops as usize).map(|l| fdisks + cg.x_loop(l)));
    reps.extend(new_x.iter().map(|&m| cf.of_point[ab + m] as usize));
    reps.extend((0..a2.loops as usize).map(|l| cf.y_loop(l)));
    reps.extend((0..b2.loops as usize).map(|l| fdisks + cg.y_loop(l)));
    reps.extend(new_x2.iter().map(|&m| cf.of_point[ab + m] as usize));
    let k = Rc::new(TensorKernel {
        kernel: Kernel::build(fdisks, cg.count(), &edges, &reps),
        source: x,
        target: x2,
    });
    TENSOR.with(|c| c.borrow_mut().insert(key, k.clone()));
    k
}

pub(crate) fn hstack_smoothings(a: &Smoothing, b: &Smoothing) -> Smoothing {
    Smoothing::with_loops(
        hstack_flat(&a.tangle, &b.tangle),
        a.loops as usize + b.loops as usize,
    )
}

/// Horizontal juxtaposition of `f : a → a2` (left) and `g : b → b2` (right).
pub(crate) fn hstack_kernel(
    a: &Smoothing,
    a2: &Smoothing,
    b: &Smoothing,
    b2: &Smoothing,
) -> Rc<Kernel> {
    let key = (a.clone(), a2.clone(), b.clone(), b2.clone());
    if let Some(k) = HSTACK.with(|c| c.borrow().get(&key).cloned()) {
        return k;
    }
    let x = hstack_smoothings(a, b);
    let x2 = hstack_smoothings(a2, b2);
    let cf = circ(a, a2);
    let cg = circ(b, b2);
    let cr = circ(&x, &x2);
    let fdisks = cf.count();
    let (ab, bb, at) = (a.tangle.bottom(), b.tangle.bottom(), a.tangle.top());
    let nb = ab + bb;
    let mut reps: Vec<usize> = cr
        .min_points()
        .iter()
        .map(|&p| {
            if p < ab {
                cf.of_point[p] as usize
            } else if p < nb {
                fdisks + cg.of_point[p - ab] as usize
            } else if p - nb < at {
                cf.of_point[ab + (p - nb)] as usize
            } else {
                fdisks + cg.of_point[bb + (p - nb - at)] as usize
            }
        })
        .collect();
    reps.extend((0..a.loops as usize).map(|l| cf.x_loop(l)));
    reps.extend((0..b.loops as usize).map(|l| fdisks + cg.x_loop(l)));
    reps.extend((0..a2.loops as usize).map(|l| cf.y_loop(l)));
    reps.extend((0..b2.loops as usize).map(|l| fdisks + cg.y_loop(l)));
    let k = Rc::new(Kernel::build(fdisks, cg.count(), &[], &reps));
    HSTACK.with(|c| c.borrow_mut().insert(key, k.clone()));
    k
}
