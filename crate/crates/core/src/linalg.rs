//! Sparse exact linear algebra: vectors keyed by arbitrary ordered labels,
//! column-major sparse matrices, incremental echelon forms, rank, kernels
//! and linear solvability.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// A finitely supported vector. Zero entries are never stored.
pub type SparseVec<K, S> = BTreeMap<K, S>;

/// `y += a * x`.
pub fn axpy<K: Ord + Clone, S: Scalar>(y: &mut SparseVec<K, S>, a: &S, x: &SparseVec<K, S>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let add = a.clone() * v.clone();
        match y.get_mut(k) {
            Some(e) => {
                *e = e.clone() + add;
                if e.is_negligible() {
                    y.remove(k);
                }
            }
            None => {
                if !add.is_negligible() {
                    y.insert(k.clone(), add);
                }
            }
        }
    }
}

/// Adds a single term.
pub fn add_term<K: Ord, S: Scalar>(y: &mut SparseVec<K, S>, k: K, c: S) {
    if c.is_negligible() {
        return;
    }
    match y.get_mut(&k) {
        Some(e) => {
            *e = e.clone() + c;
            if e.is_negligible() {
                y.remove(&k);
            }
        }
        None => {
            y.insert(k, c);
        }
    }
}

pub fn scaled<K: Ord + Clone, S: Scalar>(a: &S, x: &SparseVec<K, S>) -> SparseVec<K, S> {
    let mut out = SparseVec::new();
    axpy(&mut out, a, x);
    out
}

pub fn sub<K: Ord + Clone, S: Scalar>(x: &SparseVec<K, S>, y: &SparseVec<K, S>) -> SparseVec<K, S> {
    let mut out = x.clone();
    axpy(&mut out, &(-S::one()), y);
    out
}

pub fn is_zero_vec<K, S: Scalar>(x: &SparseVec<K, S>) -> bool {
    x.values().all(|v| v.is_negligible())
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    pub nrows: usize,
    pub ncols: usize,
    pub cols: Vec<SparseVec<usize, S>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (i, c) in m.cols.iter_mut().enumerate() {
            c.insert(i, S::one());
        }
        m
    }

    pub fn from_cols(nrows: usize, cols: Vec<SparseVec<usize, S>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.keys().all(|&r| r < nrows)));
        Self { nrows, ncols: cols.len(), cols }
    }

    pub fn from_dense(rows: &[Vec<S>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_negligible() {
                    m.cols[j].insert(i, v.clone());
                }
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.cols[j].get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        if v.is_negligible() {
            self.cols[j].remove(&i);
        } else {
            self.cols[j].insert(i, v);
        }
    }

    pub fn apply(&self, x: &SparseVec<usize, S>) -> SparseVec<usize, S> {
        let mut out = SparseVec::new();
        for (j, v) in x {
            axpy(&mut out, v, &self.cols[*j]);
        }
        out
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &SparseMatrix<S>) -> SparseMatrix<S> {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in composition");
        let cols = rhs.cols.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { nrows: self.nrows, ncols: rhs.ncols, cols }
    }

    pub fn add(&self, rhs: &SparseMatrix<S>) -> SparseMatrix<S> {
        self.add_scaled(&S::one(), rhs)
    }

    pub fn add_scaled(&self, a: &S, rhs: &SparseMatrix<S>) -> SparseMatrix<S> {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (c, r) in out.cols.iter_mut().zip(&rhs.cols) {
            axpy(c, a, r);
        }
        out
    }

    pub fn scale(&self, a: &S) -> SparseMatrix<S> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            cols: self.cols.iter().map(|c| scaled(a, c)).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix<S> {
        let mut out = Self::zeros(self.ncols, self.nrows);
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                out.cols[*i].insert(j, v.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(is_zero_vec)
    }

    /// First entry where the two matrices differ.
    pub fn first_difference(&self, rhs: &SparseMatrix<S>) -> Option<(usize, usize)> {
        let diff = self.add_scaled(&(-S::one()), rhs);
        diff.cols
            .iter()
            .enumerate()
            .find_map(|(j, c)| c.keys().next().map(|&i| (i, j)))
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.cols {
            e.insert(c.clone());
        }
        e.rank()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<SparseVec<usize, S>> {
        let mut e = Echelon::with_tags();
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            let mut tag = SparseVec::new();
            tag.insert(j, S::one());
            if let Some(dep) = e.insert_tagged(c.clone(), tag) {
                out.push(dep);
            }
        }
        out
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &SparseVec<usize, S>) -> Option<SparseVec<usize, S>> {
        let mut e = Echelon::with_tags();
        for (j, c) in self.cols.iter().enumerate() {
            let mut tag = SparseVec::new();
            tag.insert(j, S::one());
            e.insert_tagged(c.clone(), tag);
        }
        let (res, tag) = e.reduce_tagged(b.clone(), SparseVec::new());
        if res.is_empty() {
            Some(scaled(&(-S::one()), &tag))
        } else {
            None
        }
    }
}

/// Incrementally built row-echelon basis of a subspace. Each stored vector
/// has leading coefficient one at its pivot (its smallest key).
///
/// With tagging enabled, every stored vector remembers the combination of
/// inserted vectors it came from, which yields kernels and solutions.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pivots: BTreeMap<usize, (SparseVec<usize, S>, SparseVec<usize, S>)>,
    tagged: bool,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self { pivots: BTreeMap::new(), tagged: false }
    }

    pub fn with_tags() -> Self {
        Self { pivots: BTreeMap::new(), tagged: true }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn reduce(&self, v: SparseVec<usize, S>) -> SparseVec<usize, S> {
        self.reduce_tagged(v, SparseVec::new()).0
    }

    pub fn reduce_tagged(
        &self,
        mut v: SparseVec<usize, S>,
        mut tag: SparseVec<usize, S>,
    ) -> (SparseVec<usize, S>, SparseVec<usize, S>) {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(k, _)| self.pivots.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let (row, rtag) = &self.pivots[&k];
            let f = -c;
            axpy(&mut v, &f, row);
            if self.tagged {
                axpy(&mut tag, &f, rtag);
            }
            v.remove(&k);
            cursor = k + 1;
        }
        (v, tag)
    }

    pub fn contains(&self, v: &SparseVec<usize, S>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Inserts `v`; returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec<usize, S>) -> bool {
        self.insert_tagged(v, SparseVec::new()).is_none()
    }

    /// Inserts `v` with a tag. If `v` is dependent, returns the tag
    /// combination that reduces to zero.
    pub fn insert_tagged(
        &mut self,
        v: SparseVec<usize, S>,
        tag: SparseVec<usize, S>,
    ) -> Option<SparseVec<usize, S>> {
        let (v, tag) = self.reduce_tagged(v, tag);
        let Some((&k, lead)) = v.iter().next() else {
            return Some(tag);
        };
        let inv = S::one() / lead.clone();
        let v = scaled(&inv, &v);
        let tag = if self.tagged { scaled(&inv, &tag) } else { tag };
        self.pivots.insert(k, (v, tag));
        None
    }

    /// Fully reduced basis: every vector has zeros at every other pivot.
    pub fn reduced_basis(&self) -> Vec<SparseVec<usize, S>> {
        let keys: Vec<usize> = self.pivots.keys().copied().collect();
        let mut rows: BTreeMap<usize, SparseVec<usize, S>> =
            self.pivots.iter().map(|(k, (v, _))| (*k, v.clone())).collect();
        for &k in keys.iter().rev() {
            let row = rows[&k].clone();
            for &other in keys.iter().filter(|&&o| o < k) {
                let c = rows[&other].get(&k).cloned();
                if let Some(c) = c {
                    let r = rows.get_mut(&other).unwrap();
                    axpy(r, &(-c), &row);
                }
            }
        }
        rows.into_values().collect()
    }
}

/// A subspace of a coordinate space with a fully reduced basis, so that the
/// coordinates of a member are its entries at the pivot columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    pub ambient_dim: usize,
    pub basis: Vec<SparseVec<usize, S>>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn span(ambient_dim: usize, gens: impl IntoIterator<Item = SparseVec<usize, S>>) -> Self {
        let mut e = Echelon::new();
        for g in gens {
            e.insert(g);
        }
        Self::from_echelon(ambient_dim, &e)
    }

    pub fn from_echelon(ambient_dim: usize, e: &Echelon<S>) -> Self {
        let basis = e.reduced_basis();
        let pivots = basis.iter().map(|b| *b.keys().next().unwrap()).collect();
        Self { ambient_dim, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` in the reduced basis, or `None` if `v` is not a
    /// member.
    pub fn coordinates(&self, v: &SparseVec<usize, S>) -> Option<SparseVec<usize, S>> {
        let mut coords = SparseVec::new();
        let mut rest = v.clone();
        for (i, (p, b)) in self.pivots.iter().zip(&self.basis).enumerate() {
            if let Some(c) = rest.get(p).cloned() {
                axpy(&mut rest, &(-c.clone()), b);
                coords.insert(i, c);
            }
        }
        if is_zero_vec(&rest) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &SparseVec<usize, S>) -> bool {
        self.coordinates(v).is_some()
    }
}

/// A fixed, linearly independent family with fast coordinate lookup.
#[derive(Clone, Debug)]
pub struct Basis<S> {
    ech: Echelon<S>,
    len: usize,
}

impl<S: Scalar> Basis<S> {
    /// Returns `None` if the family is dependent.
    pub fn new(gens: impl IntoIterator<Item = SparseVec<usize, S>>) -> Option<Self> {
        let mut ech = Echelon::with_tags();
        let mut len = 0;
        for (i, g) in gens.into_iter().enumerate() {
            let mut tag = SparseVec::new();
            tag.insert(i, S::one());
            if ech.insert_tagged(g, tag).is_some() {
                return None;
            }
            len += 1;
        }
        Some(Self { ech, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coefficients `c` with `v = Σ c_i g_i`, or `None` outside the span.
    pub fn coordinates(&self, v: &SparseVec<usize, S>) -> Option<SparseVec<usize, S>> {
        let (res, tag) = self.ech.reduce_tagged(v.clone(), SparseVec::new());
        if is_zero_vec(&res) {
            Some(scaled(&(-S::one()), &tag))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn m(rows: &[&[i64]]) -> SparseMatrix<Q> {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        SparseMatrix::from_dense(&rows)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[0, 0]]);
        let mut b = SparseVec::new();
        b.insert(0, qi(5));
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
        b.insert(1, qi(1));
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn subspace_coordinates() {
        let mut v1 = SparseVec::new();
        v1.insert(0, qi(1));
        v1.insert(2, qi(1));
        let mut v2 = SparseVec::new();
        v2.insert(1, qi(2));
        v2.insert(2, qi(4));
        let s = Subspace::span(3, vec![v1.clone(), v2.clone()]);
        let mut w = scaled(&qi(3), &v1);
        axpy(&mut w, &qi(-1), &v2);
        let c = s.coordinates(&w).unwrap();
        let mut back = SparseVec::new();
        for (i, ci) in &c {
            axpy(&mut back, ci, &s.basis[*i]);
        }
        assert_eq!(back, w);
        let mut bad = SparseVec::new();
        bad.insert(2, qi(1));
        assert!(!s.contains(&bad));
    }

    proptest::proptest! {
        #[test]
        fn rank_plus_nullity(entries in proptest::collection::vec(-3i64..4, 20)) {
            let rows: Vec<Vec<Q>> = entries.chunks(5).map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
            let a = SparseMatrix::from_dense(&rows);
            proptest::prop_assert_eq!(a.rank() + a.kernel().len(), 5);
            proptest::prop_assert_eq!(a.rank(), a.transpose().rank());
        }
    }
}
