use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gauss::simplify;
use super::linalg::{solve, Row, Rref};
use super::{cone_unchecked, ChainMap, Complex, Degree};
use crate::cob::{basis_of_degree, Morphism, Smoothing};
use crate::error::{Error, Result};
use crate::ring::{Coeff, RingKind, Q};

/// One unknown coefficient of a map `C → D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub x: usize,
    pub y: usize,
    pub dots: u64,
}

impl Var {
    fn is_identity(&self, c_obj: &Smoothing, d_obj: &Smoothing) -> bool {
        self.dots == 0 && c_obj == d_obj && c_obj.loops == 0
    }
}

/// Unknowns of all degree-preserving maps `C → D` raising `t` by `t2_shift/2`.
fn map_vars<R: Coeff>(c: &Complex<R>, d: &Complex<R>, t2_shift: i32) -> Vec<Var> {
    let mut by_t: HashMap<i32, Vec<usize>> = HashMap::new();
    for (y, o) in d.objects.iter().enumerate() {
        by_t.entry(o.degree.t2).or_default().push(y);
    }
    let mut vars = Vec::new();
    for (x, a) in c.objects.iter().enumerate() {
        for &y in by_t.get(&(a.degree.t2 + t2_shift)).map(|v| v.as_slice()).unwrap_or(&[]) {
            let b = &d.objects[y];
            for dots in basis_of_degree(&a.obj, &b.obj, a.degree.q - b.degree.q) {
                vars.push(Var { x, y, dots });
            }
        }
    }
    vars
}

/// Rows of the linear map `f ↦ d_D f − (−1)^ℓ f d_C` on the unknowns.
/// Equations are keyed by `(x, z, dots)` in `Hom(C_x, D_z)`.
fn boundary_rows<R: Coeff>(
    c: &Complex<R>,
    d: &Complex<R>,
    t2_shift: i32,
    vars: &[Var],
) -> (HashMap<(usize, usize, u64), usize>, Vec<Row<R::Field>>) {
    let sign_odd = (t2_shift / 2).rem_euclid(2) == 1;
    let mut incoming: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(i, j) in c.diff.keys() {
        incoming.entry(j).or_default().push(i);
    }
    let mut eq_index: HashMap<(usize, usize, u64), usize> = HashMap::new();
    let mut rows: Vec<BTreeMap<usize, R::Field>> = Vec::new();
    let mut push = |key: (usize, usize, u64), col: usize, v: R::Field| {
        let n = eq_index.len();
        let r = *eq_index.entry(key).or_insert(n);
        if r == rows.len() {
            rows.push(BTreeMap::new());
        }
        let e = rows[r].entry(col).or_insert_with(R::Field::zero);
        *e = e.add(&v);
    };
    for (col, v) in vars.iter().enumerate() {
        let b = Morphism::<R>::basis_unchecked(
            c.objects[v.x].obj.clone(),
            d.objects[v.y].obj.clone(),
            v.dots,
            R::one(),
        );
        for (&(_, z), dm) in d.diff.range((v.y, 0)..(v.y + 1, 0)) {
            for (dots, k) in b.then_unchecked(dm).terms() {
                push((v.x, z, *dots), col, k.to_field());
            }
        }
        for &x0 in incoming.get(&v.x).map(|v| v.as_slice()).unwrap_or(&[]) {
            let dm = &c.diff[&(x0, v.x)];
            for (dots, k) in dm.then_unchecked(&b).terms() {
                let k = k.to_field();
                push((x0, v.y, *dots), col, if sign_odd { k } else { k.neg() });
            }
        }
    }
    let rows = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    (eq_index, rows)
}

fn assemble<R: Coeff>(
    c: &Complex<R>,
    d: &Complex<R>,
    t2_shift: i32,
    vars: &[Var],
    values: &Row<R::Field>,
) -> Option<ChainMap<R>> {
    let mut comps: BTreeMap<(usize, usize), Vec<(u64, R)>> = BTreeMap::new();
    for (col, v) in values {
        let var = vars[*col];
        let r = R::from_field(v)?;
        comps.entry((var.x, var.y)).or_default().push((var.dots, r));
    }
    let components = comps
        .into_iter()
        .map(|((x, y), terms)| {
            let m = Morphism::from_terms(c.objects[x].obj.clone(), d.objects[y].obj.clone(), terms)
                .expect("valid dots");
            ((x, y), m)
        })
        .filter(|(_, m)| !m.is_zero())
        .collect();
    Some(ChainMap {
        source: c.clone(),
        target: d.clone(),
        t2_shift,
        components,
    })
}

/// The space of chain maps `C → D` of the given shift, as a reduced system.
pub struct ChainMapSpace<R: Coeff> {
    pub vars: Vec<Var>,
    pub rref: Rref<R::Field>,
}

pub fn chain_map_space<R: Coeff>(c: &Complex<R>, d: &Complex<R>, t2_shift: i32) -> ChainMapSpace<R> {
    let mut vars = map_vars(c, d, t2_shift);
    // Identity-shaped unknowns go last so that they tend to be free.
    vars.sort_by_key(|v| v.is_identity(&c.objects[v.x].obj, &d.objects[v.y].obj));
    let (_, rows) = boundary_rows(c, d, t2_shift, &vars);
    let mut rref = Rref::new(vars.len());
    for r in rows {
        rref.insert(r);
    }
    ChainMapSpace { vars, rref }
}

/// Outcome of solving `d h ± h d = f`.
#[derive(Clone, Debug)]
pub enum HomSolution<R: Coeff> {
    Found(ChainMap<R>),
    /// No solution over the field (definitive).
    None,
    /// Only a non-integral solution was found.
    Inconclusive,
}

impl<R: Coeff> HomSolution<R> {
    pub fn is_found(&self) -> bool {
        matches!(self, HomSolution::Found(_))
    }
}

/// Find `h` of shift `ℓ − 1` with `D(h) = f` for a cycle `f` of shift `ℓ`.
pub fn hom_solve<R: Coeff>(f: &ChainMap<R>) -> Result<HomSolution<R>> {
    let (c, d) = (&f.source, &f.target);
    if !f.boundary().is_empty() {
        return Err(Error::NotChainMap("hom_solve needs a cycle".into()));
    }
    let hs = f.t2_shift - 2;
    let vars = map_vars(c, d, hs);
    let (eq_index, rows) = boundary_rows(c, d, hs, &vars);
    let mut rhs: HashMap<usize, R::Field> = HashMap::new();
    let mut extra = Vec::new();
    for (&(x, y), m) in &f.components {
        for (dots, k) in m.terms() {
            match eq_index.get(&(x, y, *dots)) {
                Some(&r) => {
                    rhs.insert(r, k.to_field());
                }
                None => extra.push(k.to_field()),
            }
        }
    }
    if !extra.is_empty() {
        return Ok(HomSolution::None);
    }
    let system: Vec<(Row<R::Field>, R::Field)> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| (r, rhs.remove(&i).unwrap_or_else(R::Field::zero)))
        .collect();
    match solve(vars.len(), &system) {
        None => Ok(HomSolution::None),
        Some(x) => match assemble(c, d, hs, &vars, &x) {
            Some(h) => Ok(HomSolution::Found(h)),
            None => Ok(HomSolution::Inconclusive),
        },
    }
}

/// Three-valued answer of an equivalence test.
#[derive(Clone, Debug)]
pub enum Equivalence<R: Coeff> {
    /// A chain isomorphism between the reduced representatives.
    Yes(Box<ChainMap<R>>),
    No(String),
    Inconclusive(String),
}

impl<R: Coeff> Equivalence<R> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Equivalence::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Equivalence::No(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Equivalence::Yes(_) => "yes",
            Equivalence::No(_) => "no",
            Equivalence::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EquivOptions {
    /// Compare only objects with `t2 <= cutoff2`.
    pub cutoff2: Option<i32>,
    pub attempts: usize,
    pub seed: u64,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            cutoff2: None,
            attempts: 64,
            seed: 0x5eed,
        }
    }
}

pub fn equivalent<R: Coeff>(c: &Complex<R>, d: &Complex<R>) -> Equivalence<R> {
    equivalent_with(c, d, EquivOptions::default())
}

fn cut<R: Coeff>(c: Complex<R>, cutoff2: Option<i32>) -> Complex<R> {
    match cutoff2 {
        Some(h) => {
            let keep: Vec<usize> = (0..c.len()).filter(|&i| c.objects[i].degree.t2 <= h).collect();
            c.restrict(&keep)
        }
        None => c,
    }
}

pub fn equivalent_with<R: Coeff>(c: &Complex<R>, d: &Complex<R>, opts: EquivOptions) -> Equivalence<R> {
    if (c.bottom, c.top) != (d.bottom, d.top) {
        return Equivalence::No("different boundaries".into());
    }
    let cs = cut(simplify(c), opts.cutoff2);
    let ds = cut(simplify(d), opts.cutoff2);
    if cs.multiset() != ds.multiset() {
        if R::KIND.is_field() {
            return Equivalence::No(multiset_diff(&cs, &ds));
        }
        let cq = cut(simplify(&c.to_field()), opts.cutoff2);
        let dq = cut(simplify(&d.to_field()), opts.cutoff2);
        if cq.multiset() != dq.multiset() {
            return Equivalence::No(format!("over Q: {}", multiset_diff(&cq, &dq)));
        }
        return Equivalence::Inconclusive("reduced forms over Z differ but agree over Q".into());
    }
    match find_isomorphism(&cs, &ds, opts) {
        Some(f) => Equivalence::Yes(Box::new(f)),
        None => Equivalence::Inconclusive("no chain isomorphism found between reduced forms".into()),
    }
}

fn multiset_diff<R: Coeff>(c: &Complex<R>, d: &Complex<R>) -> String {
    let (a, b) = (c.multiset(), d.multiset());
    format!("graded objects differ ({} vs {} objects)", a.len(), b.len())
}

type BlockKey = (i32, i32, crate::cob::FlatTangle);

/// Search a degree-0 chain map with invertible scalar blocks.
fn find_isomorphism<R: Coeff>(c: &Complex<R>, d: &Complex<R>, opts: EquivOptions) -> Option<ChainMap<R>> {
    if c.is_empty() {
        return Some(ChainMap::zero(c.clone(), d.clone(), 0));
    }
    let space = chain_map_space(c, d, 0);
    let mut blocks: BTreeMap<BlockKey, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, o) in c.objects.iter().enumerate() {
        blocks.entry((o.degree.t2, o.degree.q, o.obj.tangle.clone())).or_default().0.push(i);
    }
    for (j, o) in d.objects.iter().enumerate() {
        blocks.entry((o.degree.t2, o.degree.q, o.obj.tangle.clone())).or_default().1.push(j);
    }
    let mut id_col: HashMap<(usize, usize), usize> = HashMap::new();
    for (col, v) in space.vars.iter().enumerate() {
        if v.is_identity(&c.objects[v.x].obj, &d.objects[v.y].obj) {
            id_col.insert((v.x, v.y), col);
        }
    }
    let free_id: Vec<usize> = space
        .rref
        .free_columns(space.vars.len())
        .into_iter()
        .filter(|col| id_col.values().any(|c| c == col))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 0..opts.attempts.max(1) {
        let mut free: BTreeMap<usize, R::Field> = BTreeMap::new();
        for (xs, ys) in blocks.values() {
            for (a, &x) in xs.iter().enumerate() {
                for (b, &y) in ys.iter().enumerate() {
                    let Some(&col) = id_col.get(&(x, y)) else { continue };
                    if !free_id.contains(&col) {
                        continue;
                    }
                    let v: i64 = if attempt == 0 {
                        i64::from(a == b)
                    } else if R::KIND == RingKind::Q {
                        rng.gen_range(-4..=4)
                    } else {
                        rng.gen_range(-1..=1)
                    };
                    if v != 0 {
                        free.insert(col, R::Field::from_i64(v));
                    }
                }
            }
        }
        let x = space.rref.kernel_element(&free);
        let Some(f) = assemble(c, d, 0, &space.vars, &x) else { continue };
        if blocks_invertible::<R>(&f, &blocks) {
            debug_assert!(f.verify().is_ok());
            if R::KIND.is_field() && !simplify(&cone_unchecked(&f)).is_empty() {
                continue;
            }
            return Some(f);
        }
    }
    None
}

fn blocks_invertible<R: Coeff>(f: &ChainMap<R>, blocks: &BTreeMap<BlockKey, (Vec<usize>, Vec<usize>)>) -> bool {
    for (xs, ys) in blocks.values() {
        if xs.len() != ys.len() {
            return false;
        }
        let m: Vec<Vec<Q>> = xs
            .iter()
            .map(|&x| {
                ys.iter()
                    .map(|&y| {
                        let s = f.components.get(&(x, y)).map(|m| m.coeff(0)).unwrap_or_else(R::zero);
                        to_q(&s)
                    })
                    .collect()
            })
            .collect();
        match R::KIND {
            RingKind::F2 => {
                let mf: Vec<Vec<R::Field>> = xs
                    .iter()
                    .map(|&x| {
                        ys.iter()
                            .map(|&y| {
                                f.components
                                    .get(&(x, y))
                                    .map(|m| m.coeff(0).to_field())
                                    .unwrap_or_else(R::Field::zero)
                            })
                            .collect()
                    })
                    .collect();
                if super::linalg::dense_rank(&mf) != xs.len() {
                    return false;
                }
            }
            RingKind::Q => {
                if det_q(m).is_zero() {
                    return false;
                }
            }
            RingKind::Z => {
                if !det_q(m).abs_is_one() {
                    return false;
                }
            }
        }
    }
    true
}

fn to_q<R: Coeff>(r: &R) -> Q {
    Q::parse_coeff(&r.to_coeff_string()).unwrap_or_else(|_| Q::from_i64(i64::from(!r.is_zero())))
}

/// Determinant over Q by elimination.
pub(crate) fn det_q(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        let piv = m[col][col].clone();
        det = det.mul(&piv);
        let inv = piv.inv().expect("nonzero");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&inv);
            for k in col..n {
                let v = m[r][k].sub(&factor.mul(&m[col][k]));
                m[r][k] = v;
            }
        }
    }
    det
}

/// Shift `s` with `C ≃ shift(D, s)` read off from the lowest objects of the
/// reduced forms; `None` if either is empty or their lowest tangles differ.
pub fn find_shift<R: Coeff>(c: &Complex<R>, d: &Complex<R>) -> Option<Degree> {
    let lowest = |x: &Complex<R>| {
        let s = simplify(x);
        s.objects.iter().map(|o| (o.degree.t2, o.degree.q, o.obj.tangle.clone())).min()
    };
    let (a, b) = (lowest(c)?, lowest(d)?);
    (a.2 == b.2).then(|| Degree::new(a.0 - b.0, a.1 - b.1))
}
