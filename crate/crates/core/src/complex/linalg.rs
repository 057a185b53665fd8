//! Sparse exact row reduction over a field.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::ring::Field;

pub type Row<F> = Vec<(usize, F)>;

/// `a + c·b` for sorted sparse rows.
pub fn axpy<F: Field>(a: &Row<F>, c: &F, b: &Row<F>) -> Row<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = c.mul(&b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&c.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup<F: Field>(row: &Row<F>, col: usize) -> Option<&F> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Fully reduced row echelon form, built incrementally. The pivot of each
/// row is its smallest column.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    ncols: usize,
    rows: HashMap<usize, Row<F>>,
    // column -> ids of rows containing it
    col_rows: HashMap<usize, BTreeSet<usize>>,
    pivots: BTreeMap<usize, usize>,
    next_id: usize,
}

impl<F: Field> Rref<F> {
    pub fn new(ncols: usize) -> Self {
        Rref {
            ncols,
            rows: HashMap::new(),
            col_rows: HashMap::new(),
            pivots: BTreeMap::new(),
            next_id: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduce `row` against the current pivots.
    pub fn reduce(&self, mut row: Row<F>) -> Row<F> {
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            match hit {
                None => return row,
                Some((c, v)) => {
                    let pr = &self.rows[&self.pivots[&c]];
                    row = axpy(&row, &v.neg(), pr);
                }
            }
        }
    }

    fn index_row(&mut self, id: usize) {
        for (c, _) in &self.rows[&id] {
            self.col_rows.entry(*c).or_default().insert(id);
        }
    }

    fn unindex_row(&mut self, id: usize) {
        for (c, _) in &self.rows[&id] {
            if let Some(s) = self.col_rows.get_mut(c) {
                s.remove(&id);
            }
        }
    }

    /// Add a row; returns `false` when it was dependent.
    pub fn insert(&mut self, row: Row<F>) -> bool {
        let row = self.reduce(row);
        let Some((p, lead)) = row.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero");
        let row: Row<F> = row.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        let id = self.next_id;
        self.next_id += 1;
        // Clear column p from existing rows.
        let holders: Vec<usize> = self.col_rows.get(&p).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for h in holders {
            let v = lookup(&self.rows[&h], p).cloned().expect("indexed");
            self.unindex_row(h);
            let nr = axpy(&self.rows[&h], &v.neg(), &row);
            self.rows.insert(h, nr);
            self.index_row(h);
        }
        self.rows.insert(id, row);
        self.index_row(id);
        self.pivots.insert(p, id);
        true
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn free_columns(&self, below: usize) -> Vec<usize> {
        (0..below).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Basis of `{x : Ax = 0}` restricted to columns `< ncols`.
    pub fn nullspace(&self) -> Vec<Row<F>> {
        self.free_columns(self.ncols)
            .into_iter()
            .map(|f| self.null_vector(f))
            .collect()
    }

    /// The kernel vector with free column `f` set to one and other free columns zero.
    pub fn null_vector(&self, f: usize) -> Row<F> {
        let mut v: Vec<(usize, F)> = vec![(f, F::one())];
        if let Some(rows) = self.col_rows.get(&f) {
            for &id in rows {
                let row = &self.rows[&id];
                let p = row[0].0;
                if p == f {
                    continue;
                }
                let c = lookup(row, f).expect("indexed").neg();
                v.push((p, c));
            }
        }
        v.sort_by_key(|e| e.0);
        v
    }

    /// Kernel element with the given values on free columns.
    pub fn kernel_element(&self, free: &BTreeMap<usize, F>) -> Row<F> {
        let mut x: BTreeMap<usize, F> = free.clone();
        for (&p, &id) in &self.pivots {
            let row = &self.rows[&id];
            let mut s = F::zero();
            for (c, v) in row.iter().skip(1) {
                if let Some(fv) = free.get(c) {
                    s = s.add(&v.mul(fv));
                }
            }
            if !s.is_zero() {
                x.insert(p, s.neg());
            }
        }
        x.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Solve `Ax = b` with `A` given by rows over `ncols` unknowns. Free
/// unknowns are set to zero. `None` if inconsistent.
pub fn solve<F: Field>(ncols: usize, rows: &[(Row<F>, F)]) -> Option<Row<F>> {
    let mut r = Rref::new(ncols + 1);
    for (row, rhs) in rows {
        let mut full = row.clone();
        if !rhs.is_zero() {
            full.push((ncols, rhs.clone()));
        }
        r.insert(full);
        if r.is_pivot(ncols) {
            return None;
        }
    }
    let mut x = Vec::new();
    for (&p, &id) in &r.pivots {
        if let Some(v) = lookup(&r.rows[&id], ncols) {
            x.push((p, v.clone()));
        }
    }
    x.sort_by_key(|e| e.0);
    Some(x)
}

/// Rank and invertibility of a small dense matrix.
pub fn dense_rank<F: Field>(m: &[Vec<F>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = Rref::new(cols);
    for row in m {
        let sparse: Row<F> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        r.insert(sparse);
    }
    r.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Coeff, F2, Q};

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn nullspace_of_small_matrix() {
        // x0 + x1 + x2 = 0, x1 - x2 = 0
        let mut r = Rref::new(3);
        r.insert(vec![(0, q(1)), (1, q(1)), (2, q(1))]);
        r.insert(vec![(1, q(1)), (2, q(-1))]);
        assert_eq!(r.rank(), 2);
        let ns = r.nullspace();
        assert_eq!(ns, vec![vec![(0, q(-2)), (1, q(1)), (2, q(1))]]);
        assert!(!r.insert(vec![(0, q(2)), (1, q(1)), (2, q(3))]));
    }

    #[test]
    fn solve_and_inconsistency() {
        let rows = vec![
            (vec![(0, q(2)), (1, q(1))], q(3)),
            (vec![(0, q(1)), (1, q(-1))], q(0)),
        ];
        assert_eq!(solve(2, &rows), Some(vec![(0, q(1)), (1, q(1))]));
        let bad = vec![(vec![(0, q(1))], q(1)), (vec![(0, q(2))], q(3))];
        assert_eq!(solve(1, &bad), None);
    }

    #[test]
    fn f2_rank() {
        let o = F2::one();
        let z = F2::zero();
        let m = vec![vec![o, o, z], vec![z, o, o], vec![o, z, o]];
        assert_eq!(dense_rank(&m), 2);
    }

    #[test]
    fn kernel_element_respects_free_values() {
        let mut r = Rref::new(3);
        r.insert(vec![(0, q(1)), (2, q(-1))]);
        let free = BTreeMap::from([(1, q(5)), (2, q(2))]);
        let x = r.kernel_element(&free);
        assert_eq!(x, vec![(0, q(2)), (1, q(5)), (2, q(2))]);
    }
}
