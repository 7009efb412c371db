//! Linear-algebra engine behind the Thom-Whitney totalizations.
//!
//! An *entry* is a finite cochain complex `V` tensored with one polynomial
//! form space per simplicial direction. Unknowns are `v_b ⊗ ω_{β_1} ⊗ ⋯`
//! with `ω` running over trimmed bases, so every solution lies in the
//! capped model. Matching equations `(Id ⊗ δ^k) x = (∂_k ⊗ Id) x'` are
//! written in monomial coordinates of the face.

use std::collections::{BTreeMap, HashMap};

use crate::apl::{self, AplForm, AplMonomial, AplSpace};
use crate::graded::{BasisLabel, CochainComplex, GradedVectorSpace};
use crate::linalg::{add_term, Basis, Echelon, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// One entry of a (multi)semicosimplicial object, with its simplex
/// dimension in each direction.
pub(crate) struct TwEntry<'a, S> {
    pub complex: &'a CochainComplex<S>,
    pub simplex: Vec<usize>,
}

/// Matching equation family: `δ^k` in direction `factor` on `entry` against
/// `coface` applied to `source`.
pub(crate) struct TwFace<'a, S> {
    pub entry: usize,
    pub factor: usize,
    pub k: usize,
    pub source: usize,
    pub coface: &'a SparseMatrix<S>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwUnknown {
    pub entry: usize,
    pub b: usize,
    pub betas: Vec<usize>,
}

/// Cached trimmed form spaces with monomial indices and `d` in basis
/// coordinates.
#[derive(Clone, Debug)]
pub(crate) struct FormSpace<S> {
    pub space: AplSpace<S>,
    pub d: Vec<SparseVec<usize, S>>,
}

impl<S: Scalar> FormSpace<S> {
    fn new(n: usize, cap: u32) -> Self {
        let space = AplSpace::trimmed(n, cap).expect("cap validated by caller");
        let mut index: BTreeMap<AplMonomial, usize> = BTreeMap::new();
        for f in &space.basis {
            for m in f.keys() {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            }
        }
        let to_vec = |f: &AplForm<S>, index: &BTreeMap<AplMonomial, usize>| -> SparseVec<usize, S> {
            f.iter().map(|(m, c)| (index[m], c.clone())).collect()
        };
        let coords = Basis::new(space.basis.iter().map(|f| to_vec(f, &index))).expect("trimmed basis is independent");
        let d = space
            .basis
            .iter()
            .map(|f| {
                let df = apl::d(f);
                if df.is_empty() {
                    return SparseVec::new();
                }
                coords.coordinates(&to_vec(&df, &index)).expect("d preserves the trimmed space")
            })
            .collect();
        Self { space, d }
    }
}

pub(crate) type FormCache<S> = BTreeMap<usize, FormSpace<S>>;

pub(crate) fn form_cache<S: Scalar>(dims: impl IntoIterator<Item = usize>, cap: u32) -> FormCache<S> {
    let mut out = BTreeMap::new();
    for n in dims {
        out.entry(n).or_insert_with(|| FormSpace::new(n, cap));
    }
    out
}

/// The assembled linear system.
#[derive(Clone, Debug)]
pub struct TwSystem<S> {
    pub cap: u32,
    pub unknowns: Vec<TwUnknown>,
    pub degrees: Vec<i32>,
    /// Matching equations; columns are unknowns.
    pub equations: SparseMatrix<S>,
    /// Componentwise differential on unknowns.
    pub differential: SparseMatrix<S>,
    pub(crate) forms: FormCache<S>,
    pub(crate) entry_simplex: Vec<Vec<usize>>,
}

pub(crate) fn build<S: Scalar>(entries: &[TwEntry<'_, S>], faces: &[TwFace<'_, S>], cap: u32) -> TwSystem<S> {
    let forms: FormCache<S> = form_cache(entries.iter().flat_map(|e| e.simplex.iter().copied()), cap);
    let mut unknowns = Vec::new();
    let mut degrees = Vec::new();
    let mut index: HashMap<TwUnknown, usize> = HashMap::new();
    for (ei, e) in entries.iter().enumerate() {
        let spaces: Vec<&FormSpace<S>> = e.simplex.iter().map(|n| &forms[n]).collect();
        for b in 0..e.complex.dim() {
            let vdeg = e.complex.space.degree(b);
            for betas in product(&spaces.iter().map(|s| s.space.dim()).collect::<Vec<_>>()) {
                let fdeg: usize = betas.iter().zip(&spaces).map(|(bb, s)| s.space.degrees[*bb]).sum();
                let u = TwUnknown { entry: ei, b, betas };
                index.insert(u.clone(), unknowns.len());
                unknowns.push(u);
                degrees.push(vdeg + fdeg as i32);
            }
        }
    }
    let nu = unknowns.len();

    // differential
    let mut dcols: Vec<SparseVec<usize, S>> = Vec::with_capacity(nu);
    for u in &unknowns {
        let e = &entries[u.entry];
        let mut col = SparseVec::new();
        for (b2, c) in &e.complex.differential.matrix.cols[u.b] {
            let t = TwUnknown { entry: u.entry, b: *b2, betas: u.betas.clone() };
            add_term(&mut col, index[&t], c.clone());
        }
        let mut sign_deg = e.complex.space.degree(u.b);
        for (f, n) in e.simplex.iter().enumerate() {
            let fs = &forms[n];
            let sign = if sign_deg.rem_euclid(2) == 0 { S::one() } else { -S::one() };
            for (b2, c) in &fs.d[u.betas[f]] {
                let mut betas = u.betas.clone();
                betas[f] = *b2;
                let t = TwUnknown { entry: u.entry, b: u.b, betas };
                add_term(&mut col, index[&t], sign.clone() * c.clone());
            }
            sign_deg += fs.space.degrees[u.betas[f]] as i32;
        }
        dcols.push(col);
    }
    let differential = SparseMatrix::from_cols(nu, dcols);

    // matching equations
    let mut rows: HashMap<(usize, usize, Vec<usize>, AplMonomial), usize> = HashMap::new();
    let mut ecols: Vec<SparseVec<usize, S>> = vec![SparseVec::new(); nu];
    // faces of trimmed basis forms, cached per (n, k, β)
    let mut face_cache: HashMap<(usize, usize, usize), AplForm<S>> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        let e = &entries[face.entry];
        let n = e.simplex[face.factor];
        for (ui, u) in unknowns.iter().enumerate() {
            if u.entry == face.entry {
                let key = (n, face.k, u.betas[face.factor]);
                let img = face_cache
                    .entry(key)
                    .or_insert_with(|| apl::face(face.k, n, &forms[&n].space.basis[u.betas[face.factor]]).expect("valid face"))
                    .clone();
                for (m, c) in img {
                    let mut others = u.betas.clone();
                    others[face.factor] = usize::MAX;
                    let next = rows.len();
                    let r = *rows.entry((fi, u.b, others, m)).or_insert(next);
                    add_term(&mut ecols[ui], r, c);
                }
            } else if u.entry == face.source {
                let form = &forms[&(n - 1)].space.basis[u.betas[face.factor]];
                for (b2, cb) in &face.coface.cols[u.b] {
                    for (m, c) in form {
                        let mut others = u.betas.clone();
                        others[face.factor] = usize::MAX;
                        let next = rows.len();
                        let r = *rows.entry((fi, *b2, others, m.clone())).or_insert(next);
                        add_term(&mut ecols[ui], r, -(cb.clone() * c.clone()));
                    }
                }
            }
        }
    }
    let equations = SparseMatrix::from_cols(rows.len(), ecols);
    TwSystem {
        cap,
        unknowns,
        degrees,
        equations,
        differential,
        forms,
        entry_simplex: entries.iter().map(|e| e.simplex.clone()).collect(),
    }
}

fn product(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for p in &out {
            for i in 0..d {
                let mut q = p.clone();
                q.push(i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

impl<S: Scalar> TwSystem<S> {
    pub fn unknowns_in_degree(&self, k: i32) -> Vec<usize> {
        (0..self.unknowns.len()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn degree_range(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.degrees.clone();
        v.sort();
        v.dedup();
        v
    }

    /// Rank of the columns `cols` of `[equations; differential]` (or just
    /// the equations).
    fn stacked_rank(&self, cols: &[usize], with_d: bool) -> usize {
        let off = self.equations.nrows;
        let mut ech = Echelon::new();
        for &j in cols {
            let mut v = self.equations.cols[j].clone();
            if with_d {
                for (r, c) in &self.differential.cols[j] {
                    v.insert(off + r, c.clone());
                }
            }
            ech.insert(v);
        }
        ech.rank()
    }

    /// `dim TW^k`.
    pub fn dim_in_degree(&self, k: i32) -> usize {
        let cols = self.unknowns_in_degree(k);
        cols.len() - self.stacked_rank(&cols, false)
    }

    /// `dim Z^k`: solutions of the matching equations killed by `d`.
    pub fn cocycle_dim(&self, k: i32) -> usize {
        let cols = self.unknowns_in_degree(k);
        cols.len() - self.stacked_rank(&cols, true)
    }

    /// Cohomology dimension in degree `k`, without choosing a basis.
    pub fn betti_in_degree(&self, k: i32) -> usize {
        let z = self.cocycle_dim(k);
        let b = self.dim_in_degree(k - 1) - self.cocycle_dim(k - 1);
        z - b
    }

    pub fn betti(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for k in self.degree_range() {
            out.insert(k, self.betti_in_degree(k));
        }
        out
    }

    /// A basis of the solution space in degree `k`, as vectors over
    /// unknowns.
    pub fn basis_in_degree(&self, k: i32) -> Vec<SparseVec<usize, S>> {
        let cols = self.unknowns_in_degree(k);
        let block = SparseMatrix::from_cols(self.equations.nrows, cols.iter().map(|&j| self.equations.cols[j].clone()).collect());
        block.kernel().into_iter().map(|v| v.into_iter().map(|(i, c)| (cols[i], c)).collect()).collect()
    }

    /// The solution space as a cochain complex with its embedding into the
    /// unknowns.
    pub fn complex(&self) -> (CochainComplex<S>, Vec<SparseVec<usize, S>>) {
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        let mut starts: BTreeMap<i32, usize> = BTreeMap::new();
        for k in self.degree_range() {
            starts.insert(k, basis.len());
            for v in self.basis_in_degree(k) {
                labels.push(BasisLabel { name: format!("tw{}", basis.len()), degree: k });
                basis.push(v);
            }
        }
        let n = basis.len();
        let space = GradedVectorSpace::from_labels_unchecked(labels);
        let mut subs: BTreeMap<i32, (Vec<usize>, Basis<S>)> = BTreeMap::new();
        for k in self.degree_range() {
            let idx: Vec<usize> = (0..n).filter(|&i| space.degree(i) == k).collect();
            let b = Basis::new(idx.iter().map(|&i| basis[i].clone())).expect("kernel basis is independent");
            subs.insert(k, (idx, b));
        }
        let mut d = SparseMatrix::zeros(n, n);
        for i in 0..n {
            let img = self.differential.apply(&basis[i]);
            if img.is_empty() {
                continue;
            }
            let k = space.degree(i) + 1;
            let (idx, b) = subs.get(&k).expect("d lands in the next degree");
            let coords = b.coordinates(&img).expect("d preserves the matching equations");
            for (j, c) in coords {
                d.set(idx[j], i, c);
            }
        }
        (CochainComplex::new(space, d).expect("d² = 0 on a subcomplex"), basis)
    }

    /// The forms of an unknown, one per direction.
    pub(crate) fn forms_of(&self, u: &TwUnknown) -> Vec<&AplForm<S>> {
        self.entry_simplex[u.entry].iter().zip(&u.betas).map(|(n, b)| &self.forms[n].space.basis[*b]).collect()
    }
}
