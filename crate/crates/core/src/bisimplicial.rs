//! Bisemicosimplicial DG vector spaces and DGLAs: the row-first,
//! column-first and triple totalizations, and the Thom-Whitney
//! totalization in both directions at once.
//!
//! Grid entries are `V_{i,j}` with `i` the horizontal and `j` the vertical
//! position. Horizontal cofaces `∂^{H_j}_s: V_{i−1,j} → V_{i,j}`, vertical
//! cofaces `∂^{V_i}_k: V_{i,j−1} → V_{i,j}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;

use thiserror::Error;

use crate::apl::{AplError, AplMonomial};
use crate::dgla::LieStructure;
use crate::graded::{BasisLabel, CochainComplex, GradedError, GradedVectorSpace};
use crate::linalg::{add_term, is_zero_vec, sub, Basis, Echelon, SparseMatrix, SparseVec};
use crate::scalar::Scalar;
use crate::simplicial::{sign, SemicosimplicialDgvs, SimplicialError, TwDgla, TwKey, TwLie};
use crate::tw::{self, TwEntry, TwFace, TwSystem, TwUnknown};

#[derive(Debug, Error, PartialEq)]
pub enum BisimplicialError {
    #[error("malformed grid: {0}")]
    Shape(String),
    #[error("row {row}: {source}")]
    Row { row: usize, source: SimplicialError },
    #[error("column {column}: {source}")]
    Column { column: usize, source: SimplicialError },
    #[error("mixed square fails: ∂^H_{s} ∂^V_{k} ≠ ∂^V_{k} ∂^H_{s} from ({i}, {j})")]
    MixedSquare { s: usize, k: usize, i: usize, j: usize },
    #[error("coface into ({i}, {j}) disagrees with the ambient on basis element {b}")]
    EmbeddingMismatch { i: usize, j: usize, b: usize },
    #[error("coface into ({i}, {j}) does not preserve the bracket of basis pair ({a}, {b})")]
    BracketNotPreserved { i: usize, j: usize, a: usize, b: usize },
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Apl(#[from] AplError),
}

/// A rectangular grid `0 ≤ i < width`, `0 ≤ j < height`; entries outside
/// are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BisemicosimplicialDgvs<S> {
    /// `grid[i][j] = V_{i,j}`.
    pub grid: Vec<Vec<CochainComplex<S>>>,
    /// `horizontal[i − 1][j][s]: V_{i−1,j} → V_{i,j}`.
    pub horizontal: Vec<Vec<Vec<SparseMatrix<S>>>>,
    /// `vertical[i][j − 1][k]: V_{i,j−1} → V_{i,j}`.
    pub vertical: Vec<Vec<Vec<SparseMatrix<S>>>>,
}

impl<S: Scalar> BisemicosimplicialDgvs<S> {
    pub fn new(
        grid: Vec<Vec<CochainComplex<S>>>,
        horizontal: Vec<Vec<Vec<SparseMatrix<S>>>>,
        vertical: Vec<Vec<Vec<SparseMatrix<S>>>>,
    ) -> Result<Self, BisimplicialError> {
        let b = Self { grid, horizontal, vertical };
        b.check()?;
        Ok(b)
    }

    /// The grid concentrated at `(0, 0)`.
    pub fn single(v: CochainComplex<S>) -> Self {
        Self { grid: vec![vec![v]], horizontal: vec![], vertical: vec![vec![]] }
    }

    pub fn width(&self) -> usize {
        self.grid.len()
    }

    pub fn height(&self) -> usize {
        self.grid.first().map_or(0, |c| c.len())
    }

    pub fn entry(&self, i: usize, j: usize) -> &CochainComplex<S> {
        &self.grid[i][j]
    }

    /// `∂^{H_j}_s` into `(i, j)`.
    pub fn h(&self, i: usize, j: usize, s: usize) -> &SparseMatrix<S> {
        &self.horizontal[i - 1][j][s]
    }

    /// `∂^{V_i}_k` into `(i, j)`.
    pub fn v(&self, i: usize, j: usize, k: usize) -> &SparseMatrix<S> {
        &self.vertical[i][j - 1][k]
    }

    /// Row `j`: `V_{0,j}, V_{1,j}, …` with the horizontal cofaces.
    pub fn row(&self, j: usize) -> SemicosimplicialDgvs<S> {
        SemicosimplicialDgvs {
            levels: (0..self.width()).map(|i| self.grid[i][j].clone()).collect(),
            cofaces: (1..self.width()).map(|i| self.horizontal[i - 1][j].clone()).collect(),
        }
    }

    /// Column `i`: `V_{i,0}, V_{i,1}, …` with the vertical cofaces.
    pub fn column(&self, i: usize) -> SemicosimplicialDgvs<S> {
        SemicosimplicialDgvs { levels: self.grid[i].clone(), cofaces: self.vertical[i].clone() }
    }

    fn check_shape(&self) -> Result<(), BisimplicialError> {
        let (w, h) = (self.width(), self.height());
        if self.grid.iter().any(|c| c.len() != h) {
            return Err(BisimplicialError::Shape("columns of unequal height".into()));
        }
        if self.horizontal.len() != w.saturating_sub(1) || self.vertical.len() != w {
            return Err(BisimplicialError::Shape("wrong number of coface families".into()));
        }
        for (i, fam) in self.horizontal.iter().enumerate() {
            if fam.len() != h || fam.iter().any(|f| f.len() != i + 2) {
                return Err(BisimplicialError::Shape(format!("horizontal cofaces into column {}", i + 1)));
            }
        }
        for (i, fam) in self.vertical.iter().enumerate() {
            if fam.len() != h.saturating_sub(1) || fam.iter().enumerate().any(|(j, f)| f.len() != j + 2) {
                return Err(BisimplicialError::Shape(format!("vertical cofaces in column {i}")));
            }
        }
        Ok(())
    }

    /// Row and column identities, chain-map conditions, then every mixed
    /// square; the first failure is returned with its witness.
    pub fn check(&self) -> Result<(), BisimplicialError> {
        self.check_shape()?;
        for j in 0..self.height() {
            self.row(j).check().map_err(|source| BisimplicialError::Row { row: j, source })?;
        }
        for i in 0..self.width() {
            self.column(i).check().map_err(|source| BisimplicialError::Column { column: i, source })?;
        }
        for i in 0..self.width().saturating_sub(1) {
            for j in 0..self.height().saturating_sub(1) {
                for s in 0..=i + 1 {
                    for k in 0..=j + 1 {
                        let lhs = self.h(i + 1, j + 1, s).compose(self.v(i, j + 1, k));
                        let rhs = self.v(i + 1, j + 1, k).compose(self.h(i + 1, j, s));
                        if lhs.first_difference(&rhs).is_some() {
                            return Err(BisimplicialError::MixedSquare { s, k, i, j });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Offsets of the entries `V_{n,m}` inside a direct sum, in the order
    /// produced by `order`.
    fn offsets(&self, order: &[(usize, usize)]) -> HashMap<(usize, usize), usize> {
        let mut out = HashMap::new();
        let mut off = 0;
        for &(i, j) in order {
            out.insert((i, j), off);
            off += self.grid[i][j].dim();
        }
        out
    }

    /// Rows first: level `m` is `tot` of row `m` with
    /// `D_m = Σ(−1)^n d_{n,m} + Σ(−1)^j ∂^{H_m}_j`; vertical cofaces act
    /// componentwise.
    pub fn tot_h_delta(&self) -> Result<SemicosimplicialDgvs<S>, BisimplicialError> {
        let mut levels = Vec::new();
        for m in 0..self.height() {
            levels.push(self.row(m).tot().map_err(|source| BisimplicialError::Row { row: m, source })?);
        }
        let mut cofaces = Vec::new();
        for m in 1..self.height() {
            let src: Vec<(usize, usize)> = (0..self.width()).map(|n| (n, m - 1)).collect();
            let tgt: Vec<(usize, usize)> = (0..self.width()).map(|n| (n, m)).collect();
            let (so, to) = (self.offsets(&src), self.offsets(&tgt));
            let mut fam = Vec::new();
            for k in 0..=m {
                let mut mat = SparseMatrix::zeros(levels[m].dim(), levels[m - 1].dim());
                for n in 0..self.width() {
                    place(&mut mat, self.v(n, m, k), to[&(n, m)], so[&(n, m - 1)], &S::one());
                }
                fam.push(mat);
            }
            cofaces.push(fam);
        }
        SemicosimplicialDgvs::new(levels, cofaces).map_err(|source| BisimplicialError::Column { column: 0, source })
    }

    /// Columns first: level `n` is `tot` of column `n` with
    /// `D′_n = Σ(−1)^m d_{n,m} + Σ(−1)^j ∂^{V_n}_j`; horizontal cofaces act
    /// componentwise.
    pub fn tot_v_delta(&self) -> Result<SemicosimplicialDgvs<S>, BisimplicialError> {
        let mut levels = Vec::new();
        for n in 0..self.width() {
            levels.push(self.column(n).tot().map_err(|source| BisimplicialError::Column { column: n, source })?);
        }
        let mut cofaces = Vec::new();
        for n in 1..self.width() {
            let src: Vec<(usize, usize)> = (0..self.height()).map(|m| (n - 1, m)).collect();
            let tgt: Vec<(usize, usize)> = (0..self.height()).map(|m| (n, m)).collect();
            let (so, to) = (self.offsets(&src), self.offsets(&tgt));
            let mut fam = Vec::new();
            for s in 0..=n {
                let mut mat = SparseMatrix::zeros(levels[n].dim(), levels[n - 1].dim());
                for m in 0..self.height() {
                    place(&mut mat, self.h(n, m, s), to[&(n, m)], so[&(n - 1, m)], &S::one());
                }
                fam.push(mat);
            }
            cofaces.push(fam);
        }
        SemicosimplicialDgvs::new(levels, cofaces).map_err(|source| BisimplicialError::Row { row: 0, source })
    }

    /// `⊕ V_{n,m}[−n−m]` with `D = Σ(−1)^{m+n} d + Σ(−1)^{j+m} ∂^{H_m}_j +
    /// Σ(−1)^k ∂^{V}_k`.
    pub fn tot_triangle(&self) -> Result<CochainComplex<S>, BisimplicialError> {
        // entries ordered by vertical index first, so that the layout matches
        // tot(tot_h_delta)
        let order: Vec<(usize, usize)> =
            (0..self.height()).flat_map(|m| (0..self.width()).map(move |n| (n, m))).collect();
        let offs = self.offsets(&order);
        let mut labels = Vec::new();
        for &(n, m) in &order {
            for l in self.grid[n][m].space.labels() {
                labels.push(BasisLabel { name: format!("{}@{n},{m}", l.name), degree: l.degree + (n + m) as i32 });
            }
        }
        let dim = labels.len();
        let mut d = SparseMatrix::zeros(dim, dim);
        for &(n, m) in &order {
            let o = offs[&(n, m)];
            place(&mut d, &self.grid[n][m].differential.matrix, o, o, &sign(n + m));
            if n + 1 < self.width() {
                for j in 0..=n + 1 {
                    place(&mut d, self.h(n + 1, m, j), offs[&(n + 1, m)], o, &sign(j + m));
                }
            }
            if m + 1 < self.height() {
                for k in 0..=m + 1 {
                    place(&mut d, self.v(n, m + 1, k), offs[&(n, m + 1)], o, &sign(k));
                }
            }
        }
        let c = CochainComplex::new(GradedVectorSpace::from_labels_unchecked(labels), d)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// The Thom-Whitney totalization in both directions: unknowns
    /// `v ⊗ α ⊗ β` on `V_{n,m} ⊗ A_n ⊗ A_m`.
    pub fn tot_tw_triangle(&self, cap: u32) -> Result<TwSystem<S>, BisimplicialError> {
        if cap == 0 && (self.width() > 1 || self.height() > 1) {
            return Err(AplError::CapTooSmall.into());
        }
        let (entries, faces) = self.tw_layout();
        Ok(tw::build(&entries, &faces, cap))
    }

    /// Entry index of `(i, j)` in Thom-Whitney layouts.
    pub fn entry_index(&self, i: usize, j: usize) -> usize {
        i * self.height() + j
    }

    fn tw_layout(&self) -> (Vec<TwEntry<'_, S>>, Vec<TwFace<'_, S>>) {
        let mut entries = Vec::new();
        let mut faces = Vec::new();
        for i in 0..self.width() {
            for j in 0..self.height() {
                entries.push(TwEntry { complex: &self.grid[i][j], simplex: vec![i, j] });
                let e = self.entry_index(i, j);
                if i > 0 {
                    for s in 0..=i {
                        faces.push(TwFace { entry: e, factor: 0, k: s, source: self.entry_index(i - 1, j), coface: self.h(i, j, s) });
                    }
                }
                if j > 0 {
                    for k in 0..=j {
                        faces.push(TwFace { entry: e, factor: 1, k, source: self.entry_index(i, j - 1), coface: self.v(i, j, k) });
                    }
                }
            }
        }
        (entries, faces)
    }
}

/// Adds `c · m` into `target` with the given row and column offsets.
fn place<S: Scalar>(target: &mut SparseMatrix<S>, m: &SparseMatrix<S>, row_off: usize, col_off: usize, c: &S) {
    for (j, col) in m.cols.iter().enumerate() {
        for (r, v) in col {
            add_term(&mut target.cols[col_off + j], row_off + r, c.clone() * v.clone());
        }
    }
}

/// Ambient Lie structure for a grid: keys know their position, and both
/// coface families act on keys.
pub trait GridLie<S: Scalar>: LieStructure<S> {
    fn position(&self, key: &Self::Key) -> (usize, usize);
    /// `∂^H_s` on a key at `(i, j)`, landing at `(i + 1, j)`.
    fn horizontal(&self, s: usize, key: &Self::Key) -> SparseVec<Self::Key, S>;
    /// `∂^V_k` on a key at `(i, j)`, landing at `(i, j + 1)`.
    fn vertical(&self, k: usize, key: &Self::Key) -> SparseVec<Self::Key, S>;
}

fn apply_keys<K: Ord + Clone, S: Scalar>(v: &SparseVec<K, S>, f: impl Fn(&K) -> SparseVec<K, S>) -> SparseVec<K, S> {
    let mut out = SparseVec::new();
    for (k, c) in v {
        crate::linalg::axpy(&mut out, c, &f(k));
    }
    out
}

/// A bisemicosimplicial DGLA: linear data plus an embedding of every grid
/// basis into an ambient Lie structure.
#[derive(Clone, Debug)]
pub struct BisemicosimplicialDgla<S: Scalar, L: LieStructure<S>> {
    pub dgvs: BisemicosimplicialDgvs<S>,
    pub ambient: L,
    /// `embed[entry_index(i, j)][b]`.
    pub embed: Vec<Vec<SparseVec<L::Key, S>>>,
}

impl<S: Scalar, L: GridLie<S>> BisemicosimplicialDgla<S, L> {
    pub fn new(
        dgvs: BisemicosimplicialDgvs<S>,
        ambient: L,
        embed: Vec<Vec<SparseVec<L::Key, S>>>,
    ) -> Result<Self, BisimplicialError> {
        let g = Self { dgvs, ambient, embed };
        g.check()?;
        Ok(g)
    }

    fn embed_vec(&self, i: usize, j: usize, v: &SparseVec<usize, S>) -> SparseVec<L::Key, S> {
        let e = &self.embed[self.dgvs.entry_index(i, j)];
        let mut out = SparseVec::new();
        for (b, c) in v {
            crate::linalg::axpy(&mut out, c, &e[*b]);
        }
        out
    }

    /// Linear checks, agreement of ambient cofaces with the coface
    /// matrices, and bracket preservation on basis pairs.
    pub fn check(&self) -> Result<(), BisimplicialError> {
        self.dgvs.check()?;
        let (w, h) = (self.dgvs.width(), self.dgvs.height());
        if self.embed.len() != w * h {
            return Err(BisimplicialError::Shape("embedding has the wrong number of entries".into()));
        }
        for i in 0..w {
            for j in 0..h {
                let mut maps: Vec<(usize, usize, &SparseMatrix<S>, Box<dyn Fn(&L::Key) -> SparseVec<L::Key, S> + '_>)> =
                    Vec::new();
                if i > 0 {
                    for s in 0..=i {
                        maps.push((i - 1, j, self.dgvs.h(i, j, s), Box::new(move |k| self.ambient.horizontal(s, k))));
                    }
                }
                if j > 0 {
                    for k in 0..=j {
                        maps.push((i, j - 1, self.dgvs.v(i, j, k), Box::new(move |key| self.ambient.vertical(k, key))));
                    }
                }
                for (si, sj, m, f) in &maps {
                    let src = &self.embed[self.dgvs.entry_index(*si, *sj)];
                    let img: Vec<_> = src.iter().map(|e| apply_keys(e, f)).collect();
                    for (b, lhs) in img.iter().enumerate() {
                        let rhs = self.embed_vec(i, j, &m.cols[b]);
                        if !is_zero_vec(&sub(lhs, &rhs)) {
                            return Err(BisimplicialError::EmbeddingMismatch { i, j, b });
                        }
                    }
                    // Skewsymmetry on both sides makes pairs a ≤ b enough.
                    for a in 0..src.len() {
                        for b in a..src.len() {
                            let lhs = apply_keys(&self.ambient.br(&src[a], &src[b]), f);
                            let rhs = self.ambient.br(&img[a], &img[b]);
                            if !is_zero_vec(&sub(&lhs, &rhs)) {
                                return Err(BisimplicialError::BracketNotPreserved { i, j, a, b });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The Thom-Whitney DGLA `tot_TW^▲`, bracket computed in
    /// `L ⊗ A ⊗ A`.
    pub fn tot_tw_triangle(&self, cap: u32) -> Result<TwDgla<'_, S, L>, BisimplicialError> {
        let system = self.dgvs.tot_tw_triangle(cap)?;
        Ok(TwDgla { system, lie: TwLie { lie: &self.ambient }, embed: &self.embed })
    }
}

/// Outcome of comparing the three Thom-Whitney constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwOrderReport {
    /// `dim` per degree of the direct construction.
    pub dims: BTreeMap<i32, usize>,
    pub rows_first_equal: bool,
    pub columns_first_equal: bool,
    pub differential_equal: bool,
    pub bracket_equal: bool,
}

impl TwOrderReport {
    pub fn coincide(&self) -> bool {
        self.rows_first_equal && self.columns_first_equal && self.differential_equal && self.bracket_equal
    }
}

/// Basis of one Thom-Whitney complex over the unknowns of its system,
/// together with coordinates on that basis.
struct Solved<S> {
    basis: Vec<SparseVec<usize, S>>,
    coords: Basis<S>,
    complex: CochainComplex<S>,
    index: HashMap<TwUnknown, usize>,
}

fn solve_system<S: Scalar>(sys: &TwSystem<S>) -> Solved<S> {
    let (complex, basis) = sys.complex();
    let coords = Basis::new(basis.iter().cloned()).expect("independent");
    let index = sys.unknowns.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
    Solved { basis, coords, complex, index }
}

/// Iterated Thom-Whitney totalization: inner direction first, giving
/// complexes `W_p` along the outer direction, then the outer totalization of
/// `p ↦ W_p`.
struct Iterated<S> {
    inner: Vec<(TwSystem<S>, Solved<S>)>,
    outer: TwSystem<S>,
}

#[allow(clippy::type_complexity)]
fn inner_levels<S: Scalar>(
    b: &BisemicosimplicialDgvs<S>,
    rows_first: bool,
    cap: u32,
) -> Result<(Vec<(TwSystem<S>, Solved<S>)>, SemicosimplicialDgvs<S>), BisimplicialError> {
    let outer_len = if rows_first { b.height() } else { b.width() };
    let mut inner = Vec::new();
    for p in 0..outer_len {
        let obj = if rows_first { b.row(p) } else { b.column(p) };
        let sys = obj.tot_tw(cap).map_err(|source| BisimplicialError::Row { row: p, source })?;
        let solved = solve_system(&sys);
        inner.push((sys, solved));
    }
    // outer cofaces: the grid cofaces applied componentwise to inner
    // solutions, re-expressed in the next inner basis
    let mut cofaces = Vec::new();
    for p in 1..outer_len {
        let (src_sys, src) = &inner[p - 1];
        let (_, tgt) = &inner[p];
        let mut fam = Vec::new();
        for k in 0..=p {
            let mut cols = Vec::new();
            for v in &src.basis {
                let mut img = SparseVec::new();
                for (ui, c) in v {
                    let u = &src_sys.unknowns[*ui];
                    // inner entry index u.entry is the inner position q
                    let q = u.entry;
                    let m = if rows_first { b.v(q, p, k) } else { b.h(p, q, k) };
                    for (b2, c2) in &m.cols[u.b] {
                        let t = TwUnknown { entry: q, b: *b2, betas: u.betas.clone() };
                        add_term(&mut img, tgt.index[&t], c.clone() * c2.clone());
                    }
                }
                let coords = if img.is_empty() { SparseVec::new() } else { tgt.coords.coordinates(&img).expect("cofaces preserve matching") };
                cols.push(coords);
            }
            fam.push(SparseMatrix::from_cols(tgt.basis.len(), cols));
        }
        cofaces.push(fam);
    }
    let outer_levels = SemicosimplicialDgvs {
        levels: inner.iter().map(|(_, s)| s.complex.clone()).collect(),
        cofaces,
    };
    outer_levels.check().map_err(|source| BisimplicialError::Column { column: 0, source })?;
    Ok((inner, outer_levels))
}

fn iterate<S: Scalar>(
    b: &BisemicosimplicialDgvs<S>,
    rows_first: bool,
    cap: u32,
) -> Result<Iterated<S>, BisimplicialError> {
    let (inner, outer_levels) = inner_levels(b, rows_first, cap)?;
    let outer = outer_levels.tot_tw(cap).map_err(|source| BisimplicialError::Column { column: 0, source })?;
    Ok(Iterated { inner, outer })
}

impl<S: Scalar> BisemicosimplicialDgvs<S> {
    /// `T^Δ`: the semicosimplicial complex `j ↦ TW(row j)` with cofaces
    /// induced by the vertical ones.
    pub fn rows_tw(&self, cap: u32) -> Result<SemicosimplicialDgvs<S>, BisimplicialError> {
        Ok(inner_levels(self, true, cap)?.1)
    }

    /// The map `TW(column 0) → TW(column 1)` induced by `∂^H_s`, on the
    /// reduced bases of both complexes.
    pub fn column_tw_map(
        &self,
        s: usize,
        cap: u32,
    ) -> Result<(CochainComplex<S>, CochainComplex<S>, SparseMatrix<S>), BisimplicialError> {
        if self.width() < 2 || s > 1 {
            return Err(BisimplicialError::Shape("need two columns and s ≤ 1".into()));
        }
        let mut solved = Vec::new();
        for i in 0..2 {
            let sys = self.column(i).tot_tw(cap).map_err(|source| BisimplicialError::Column { column: i, source })?;
            let sol = solve_system(&sys);
            solved.push((sys, sol));
        }
        let (src_sys, src) = &solved[0];
        let (_, tgt) = &solved[1];
        let mut cols = Vec::new();
        for v in &src.basis {
            let mut img = SparseVec::new();
            for (ui, c) in v {
                let u = &src_sys.unknowns[*ui];
                for (b2, c2) in &self.h(1, u.entry, s).cols[u.b] {
                    let t = TwUnknown { entry: u.entry, b: *b2, betas: u.betas.clone() };
                    add_term(&mut img, tgt.index[&t], c.clone() * c2.clone());
                }
            }
            let coords = if img.is_empty() { SparseVec::new() } else { tgt.coords.coordinates(&img).expect("cofaces preserve matching") };
            cols.push(coords);
        }
        let map = SparseMatrix::from_cols(tgt.basis.len(), cols);
        Ok((src.complex.clone(), tgt.complex.clone(), map))
    }
}

/// Key of the common ambient: grid position, basis index, and one form
/// monomial per direction in (horizontal, vertical) order.
type GridKey = (usize, usize, usize);

/// Expands an element over unknowns of a direct two-factor system.
fn expand_direct<S: Scalar>(b: &BisemicosimplicialDgvs<S>, sys: &TwSystem<S>, v: &SparseVec<usize, S>) -> SparseVec<TwKey<GridKey>, S> {
    let embed: Vec<Vec<SparseVec<GridKey, S>>> = unit_embed(b);
    crate::simplicial::ambient_of(sys, &embed, v)
}

fn unit_embed<S: Scalar>(b: &BisemicosimplicialDgvs<S>) -> Vec<Vec<SparseVec<GridKey, S>>> {
    let mut out = Vec::new();
    for i in 0..b.width() {
        for j in 0..b.height() {
            out.push(
                (0..b.grid[i][j].dim())
                    .map(|x| {
                        let mut v = SparseVec::new();
                        v.insert((i, j, x), S::one());
                        v
                    })
                    .collect(),
            );
        }
    }
    out
}

/// Expands an element of an iterated construction into the common
/// ambient, reordering factors (with the Koszul sign) for columns first.
fn expand_iterated<S: Scalar>(
    it: &Iterated<S>,
    rows_first: bool,
    v: &SparseVec<usize, S>,
) -> SparseVec<TwKey<GridKey>, S> {
    let mut out = SparseVec::new();
    for (ui, c) in v {
        let u = &it.outer.unknowns[*ui];
        let p = u.entry;
        let outer_forms = it.outer.forms_of(u);
        let (inner_sys, inner) = &it.inner[p];
        for (wi, cw) in &inner.basis[u.b] {
            let w = &inner_sys.unknowns[*wi];
            let q = w.entry;
            let inner_forms = inner_sys.forms_of(w);
            let (i, j) = if rows_first { (q, p) } else { (p, q) };
            for (a, ca) in inner_forms[0] {
                for (bm, cb) in outer_forms[0] {
                    let coef = c.clone() * cw.clone() * ca.clone() * cb.clone();
                    let (h, vv) = if rows_first { (a.clone(), bm.clone()) } else { (bm.clone(), a.clone()) };
                    // columns first stores v ⊗ β ⊗ α; bring α forward
                    let swap = !rows_first && (h.form_degree() * vv.form_degree()) % 2 == 1;
                    add_term(&mut out, ((i, j, w.b), vec![h, vv]), if swap { -coef } else { coef });
                }
            }
        }
    }
    out
}

/// Ambient coordinates: a deterministic index of keys.
struct KeyIndex<K> {
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> KeyIndex<K> {
    fn new() -> Self {
        Self { index: BTreeMap::new() }
    }
    fn vec<S: Scalar>(&mut self, v: &SparseVec<K, S>) -> SparseVec<usize, S> {
        v.iter()
            .map(|(k, c)| {
                let next = self.index.len();
                (*self.index.entry(k.clone()).or_insert(next), c.clone())
            })
            .collect()
    }
}

fn same_span<S: Scalar>(a: &[SparseVec<usize, S>], b: &[SparseVec<usize, S>]) -> bool {
    let mut ea = Echelon::new();
    for v in a {
        ea.insert(v.clone());
    }
    let mut eb = Echelon::new();
    for v in b {
        eb.insert(v.clone());
    }
    ea.rank() == eb.rank() && b.iter().all(|v| ea.contains(v))
}

/// A Lie structure whose keys are grid positions with basis indices, for
/// grids given by matrices only: the bracket is zero. Used to compare
/// differentials and Koszul signs of the three constructions.
struct GridOnly<'a, S> {
    b: &'a BisemicosimplicialDgvs<S>,
}

impl<S: Scalar> LieStructure<S> for GridOnly<'_, S> {
    type Key = GridKey;
    fn degree(&self, k: &GridKey) -> i32 {
        self.b.grid[k.0][k.1].space.degree(k.2)
    }
    fn differential(&self, k: &GridKey) -> SparseVec<GridKey, S> {
        self.b.grid[k.0][k.1].differential.matrix.cols[k.2].iter().map(|(r, c)| ((k.0, k.1, *r), c.clone())).collect()
    }
    fn bracket(&self, _: &GridKey, _: &GridKey) -> SparseVec<GridKey, S> {
        SparseVec::new()
    }
}

/// Swaps the two form factors of every key, with the Koszul sign.
fn swap_factors<K: Ord + Clone, S: Scalar>(v: &SparseVec<TwKey<K>, S>) -> SparseVec<TwKey<K>, S> {
    let mut out = SparseVec::new();
    for ((k, ms), c) in v {
        let neg = (ms[0].form_degree() * ms[1].form_degree()) % 2 == 1;
        add_term(&mut out, (k.clone(), vec![ms[1].clone(), ms[0].clone()]), if neg { -c.clone() } else { c.clone() });
    }
    out
}

/// Compares the direct `tot_TW^▲` with the rows-first and columns-first
/// iterated totalizations: equal subspaces of the common ambient
/// `⊕ V_{n,m} ⊗ A_n ⊗ A_m` in every degree, and equal structure constants
/// of the differential (computed in each construction's own factor order)
/// and, when `lie` is given, of the bracket, on a canonical basis.
pub fn tw_orders_report<S: Scalar, L: GridLie<S>>(
    b: &BisemicosimplicialDgvs<S>,
    lie: Option<(&L, &[Vec<SparseVec<L::Key, S>>])>,
    cap: u32,
) -> Result<TwOrderReport, BisimplicialError>
where
    L::Key: Debug,
{
    let direct = b.tot_tw_triangle(cap)?;
    let rows = iterate(b, true, cap)?;
    let cols = iterate(b, false, cap)?;
    let mut keys: KeyIndex<TwKey<GridKey>> = KeyIndex::new();
    let mut dims = BTreeMap::new();
    let mut rows_eq = true;
    let mut cols_eq = true;
    let mut canonical: BTreeMap<i32, Vec<SparseVec<TwKey<GridKey>, S>>> = BTreeMap::new();
    let mut degrees: Vec<i32> = direct.degree_range();
    degrees.extend(rows.outer.degree_range());
    degrees.extend(cols.outer.degree_range());
    degrees.sort();
    degrees.dedup();
    for &k in &degrees {
        let a: Vec<SparseVec<TwKey<GridKey>, S>> =
            if direct.degree_range().contains(&k) { direct.basis_in_degree(k).iter().map(|v| expand_direct(b, &direct, v)).collect() } else { vec![] };
        let r: Vec<_> = if rows.outer.degree_range().contains(&k) {
            rows.outer.basis_in_degree(k).iter().map(|v| expand_iterated(&rows, true, v)).collect()
        } else {
            vec![]
        };
        let c: Vec<_> = if cols.outer.degree_range().contains(&k) {
            cols.outer.basis_in_degree(k).iter().map(|v| expand_iterated(&cols, false, v)).collect()
        } else {
            vec![]
        };
        let av: Vec<_> = a.iter().map(|v| keys.vec(v)).collect();
        let rv: Vec<_> = r.iter().map(|v| keys.vec(v)).collect();
        let cv: Vec<_> = c.iter().map(|v| keys.vec(v)).collect();
        rows_eq &= same_span(&av, &rv);
        cols_eq &= same_span(&av, &cv);
        // canonical basis: reduced echelon basis of the direct subspace
        let mut e = Echelon::new();
        for v in &av {
            e.insert(v.clone());
        }
        let inv: BTreeMap<usize, TwKey<GridKey>> = keys.index.iter().map(|(k, i)| (*i, k.clone())).collect();
        let basis: Vec<SparseVec<TwKey<GridKey>, S>> =
            e.reduced_basis().into_iter().map(|v| v.into_iter().map(|(i, c)| (inv[&i].clone(), c)).collect()).collect();
        if !basis.is_empty() {
            dims.insert(k, basis.len());
        }
        canonical.insert(k, basis);
    }

    // differential: rows first and direct share the factor order; columns
    // first computes in v ⊗ β ⊗ α and maps back
    let grid_lie = GridOnly { b };
    let tw = TwLie { lie: &grid_lie };
    let mut differential_equal = true;
    for (it, rows_first) in [(&rows, true), (&cols, false)] {
        for k in it.outer.degree_range() {
            for v in it.outer.basis_in_degree(k) {
                let own = expand_iterated(it, rows_first, &it.outer.differential.apply(&v));
                differential_equal &= is_zero_vec(&sub(&own, &tw.d(&expand_iterated(it, rows_first, &v))));
            }
        }
    }
    for basis in canonical.values() {
        for x in basis {
            let d1 = tw.d(x);
            let d2 = swap_factors(&tw.d(&swap_factors(x)));
            differential_equal &= is_zero_vec(&sub(&d1, &d2));
        }
    }

    let mut bracket_equal = true;
    if let Some((lie, embed)) = lie {
        let tl = TwLie { lie };
        let to_lie = |x: &SparseVec<TwKey<GridKey>, S>| -> SparseVec<TwKey<L::Key>, S> {
            let mut out = SparseVec::new();
            for (((i, j, bi), ms), c) in x {
                for (k, ck) in &embed[b.entry_index(*i, *j)][*bi] {
                    add_term(&mut out, (k.clone(), ms.clone()), c.clone() * ck.clone());
                }
            }
            out
        };
        let all: Vec<(i32, SparseVec<TwKey<L::Key>, S>)> =
            canonical.iter().flat_map(|(k, v)| v.iter().map(move |x| (*k, x.clone()))).map(|(k, x)| (k, to_lie(&x))).collect();
        // Both sides of the identity are ±[k, l] ⊗ (product of form parts)
        // with a sign depending only on the form parts and the Lie degrees:
        // check it once per such tuple, on a key pair whose Lie bracket is
        // nonzero. Bilinearity extends it to every pair of basis elements.
        let mut forms: BTreeMap<L::Key, BTreeSet<Vec<AplMonomial>>> = BTreeMap::new();
        for (_, x) in &all {
            for (k, ms) in x.keys() {
                forms.entry(k.clone()).or_default().insert(ms.clone());
            }
        }
        let mut checked: BTreeMap<(Vec<AplMonomial>, Vec<AplMonomial>, i32, i32), bool> = BTreeMap::new();
        for (k, fk) in &forms {
            for (l, fl) in &forms {
                if lie.bracket(k, l).is_empty() {
                    continue;
                }
                let degs = (lie.degree(k).rem_euclid(2), lie.degree(l).rem_euclid(2));
                for a in fk {
                    for c in fl {
                        let ok = checked.entry((a.clone(), c.clone(), degs.0, degs.1)).or_insert_with(|| {
                            let x: SparseVec<TwKey<L::Key>, S> = SparseVec::from([((k.clone(), a.clone()), S::one())]);
                            let y: SparseVec<TwKey<L::Key>, S> = SparseVec::from([((l.clone(), c.clone()), S::one())]);
                            let b1 = tl.br(&x, &y);
                            let b2 = swap_factors(&tl.br(&swap_factors(&x), &swap_factors(&y)));
                            is_zero_vec(&sub(&b1, &b2))
                        });
                        bracket_equal &= *ok;
                    }
                }
            }
        }
    }
    Ok(TwOrderReport { dims, rows_first_equal: rows_eq, columns_first_equal: cols_eq, differential_equal, bracket_equal })
}

/// `true` iff the three Thom-Whitney constructions coincide exactly.
pub fn tw_orders_coincide<S: Scalar, L: GridLie<S>>(g: &BisemicosimplicialDgla<S, L>, cap: u32) -> Result<bool, BisimplicialError>
where
    L::Key: Debug,
{
    Ok(tw_orders_report(&g.dgvs, Some((&g.ambient, &g.embed[..])), cap)?.coincide())
}

/// Cohomology dimensions of the three classical totalizations.
pub fn triangle_betti<S: Scalar>(b: &BisemicosimplicialDgvs<S>) -> Result<[BTreeMap<i32, usize>; 3], BisimplicialError> {
    let t = b.tot_triangle()?.betti();
    let h = b.tot_h_delta()?.tot().map_err(|source| BisimplicialError::Column { column: 0, source })?.betti();
    let v = b.tot_v_delta()?.tot().map_err(|source| BisimplicialError::Row { row: 0, source })?.betti();
    Ok([t, h, v])
}

/// Finite DGLA entries with coface morphisms, keyed by `(i, j, basis index)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGrid<S> {
    pub entries: Vec<Vec<crate::dgla::Dgla<S>>>,
    pub dgvs: BisemicosimplicialDgvs<S>,
}

impl<S: Scalar> LieStructure<S> for FiniteGrid<S> {
    type Key = GridKey;

    fn degree(&self, k: &GridKey) -> i32 {
        self.entries[k.0][k.1].space().degree(k.2)
    }

    fn differential(&self, k: &GridKey) -> SparseVec<GridKey, S> {
        self.entries[k.0][k.1].differential(&k.2).into_iter().map(|(r, c)| ((k.0, k.1, r), c)).collect()
    }

    fn bracket(&self, a: &GridKey, b: &GridKey) -> SparseVec<GridKey, S> {
        if (a.0, a.1) != (b.0, b.1) {
            return SparseVec::new();
        }
        self.entries[a.0][a.1].bracket_of(a.2, b.2).into_iter().map(|(r, c)| ((a.0, a.1, r), c)).collect()
    }
}

impl<S: Scalar> GridLie<S> for FiniteGrid<S> {
    fn position(&self, key: &GridKey) -> (usize, usize) {
        (key.0, key.1)
    }

    fn horizontal(&self, s: usize, key: &GridKey) -> SparseVec<GridKey, S> {
        if key.0 + 1 >= self.dgvs.width() {
            return SparseVec::new();
        }
        self.dgvs.h(key.0 + 1, key.1, s).cols[key.2].iter().map(|(r, c)| ((key.0 + 1, key.1, *r), c.clone())).collect()
    }

    fn vertical(&self, k: usize, key: &GridKey) -> SparseVec<GridKey, S> {
        if key.1 + 1 >= self.dgvs.height() {
            return SparseVec::new();
        }
        self.dgvs.v(key.0, key.1 + 1, k).cols[key.2].iter().map(|(r, c)| ((key.0, key.1 + 1, *r), c.clone())).collect()
    }
}

impl<S: Scalar> BisemicosimplicialDgla<S, FiniteGrid<S>> {
    /// Finite DGLA entries `entries[i][j]`; cofaces must be DGLA
    /// morphisms.
    pub fn from_finite(
        entries: Vec<Vec<crate::dgla::Dgla<S>>>,
        horizontal: Vec<Vec<Vec<SparseMatrix<S>>>>,
        vertical: Vec<Vec<Vec<SparseMatrix<S>>>>,
    ) -> Result<Self, BisimplicialError> {
        let dgvs = BisemicosimplicialDgvs {
            grid: entries.iter().map(|c| c.iter().map(|l| l.complex.clone()).collect()).collect(),
            horizontal,
            vertical,
        };
        dgvs.check()?;
        let embed = unit_embed(&dgvs);
        Self::new(dgvs.clone(), FiniteGrid { entries, dgvs }, embed)
    }
}
