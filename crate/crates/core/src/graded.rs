//! Graded vector spaces, degree-homogeneous linear maps and cochain
//! complexes over a field, with exact cohomology.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("d∘d ≠ 0: first nonzero entry at row {row} ({row_label}), column {col} ({col_label})")]
    NotADifferential { row: usize, col: usize, row_label: String, col_label: String },
    #[error("map entry ({row}, {col}) does not respect degree {degree}")]
    DegreeMismatch { row: usize, col: usize, degree: i32 },
    #[error("duplicate basis label {0}")]
    DuplicateLabel(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisLabel {
    pub name: String,
    pub degree: i32,
}

/// A finite-dimensional Z-graded vector space with an ordered, labelled
/// basis. Basis elements are homogeneous.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedVectorSpace {
    labels: Vec<BasisLabel>,
}

impl GradedVectorSpace {
    pub fn new(labels: Vec<BasisLabel>) -> Result<Self, GradedError> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.name.as_str()) {
                return Err(GradedError::DuplicateLabel(l.name.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Labels are not checked for uniqueness; callers construct them from
    /// unique paths.
    pub fn from_labels_unchecked(labels: Vec<BasisLabel>) -> Self {
        Self { labels }
    }

    /// `dim` basis vectors named `{prefix}{i}`, all in one degree.
    pub fn concentrated(prefix: &str, degree: i32, dim: usize) -> Self {
        Self {
            labels: (0..dim).map(|i| BasisLabel { name: format!("{prefix}{i}"), degree }).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.labels[i].degree
    }

    pub fn indices_in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i].degree == d).collect()
    }

    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.labels.iter().filter(|l| l.degree == d).count()
    }

    /// Degrees with a nonzero component, ascending.
    pub fn support(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.labels.iter().map(|l| l.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for l in &self.labels {
            *m.entry(l.degree).or_insert(0) += 1;
        }
        m
    }

    /// Relabels every degree by `f`.
    pub fn regrade(&self, f: impl Fn(i32) -> i32) -> Self {
        Self {
            labels: self
                .labels
                .iter()
                .map(|l| BasisLabel { name: l.name.clone(), degree: f(l.degree) })
                .collect(),
        }
    }
}

/// A linear map of fixed degree between graded spaces, stored as one
/// sparse matrix in the global bases.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<S> {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub degree: i32,
    pub matrix: SparseMatrix<S>,
}

impl<S: Scalar> LinearMap<S> {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree: i32,
        matrix: SparseMatrix<S>,
    ) -> Result<Self, GradedError> {
        if matrix.ncols != source.dim() || matrix.nrows != target.dim() {
            return Err(GradedError::Dimension(format!(
                "matrix {}x{} for map {} -> {}",
                matrix.nrows,
                matrix.ncols,
                source.dim(),
                target.dim()
            )));
        }
        for (j, col) in matrix.cols.iter().enumerate() {
            for &i in col.keys() {
                if target.degree(i) != source.degree(j) + degree {
                    return Err(GradedError::DegreeMismatch { row: i, col: j, degree });
                }
            }
        }
        Ok(Self { source, target, degree, matrix })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, degree: i32) -> Self {
        let matrix = SparseMatrix::zeros(target.dim(), source.dim());
        Self { source, target, degree, matrix }
    }

    pub fn identity(space: GradedVectorSpace) -> Self {
        let matrix = SparseMatrix::identity(space.dim());
        Self { source: space.clone(), target: space, degree: 0, matrix }
    }

    pub fn apply(&self, x: &SparseVec<usize, S>) -> SparseVec<usize, S> {
        self.matrix.apply(x)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LinearMap<S>) -> LinearMap<S> {
        LinearMap {
            source: rhs.source.clone(),
            target: self.target.clone(),
            degree: self.degree + rhs.degree,
            matrix: self.matrix.compose(&rhs.matrix),
        }
    }

    pub fn scale(&self, a: &S) -> LinearMap<S> {
        LinearMap { matrix: self.matrix.scale(a), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    /// Columns of the block `source^d -> target^{d + degree}`, with their
    /// source indices.
    pub fn block(&self, d: i32) -> (Vec<usize>, SparseMatrix<S>) {
        let idx = self.source.indices_in_degree(d);
        let cols = idx.iter().map(|&j| self.matrix.cols[j].clone()).collect();
        (idx, SparseMatrix::from_cols(self.target.dim(), cols))
    }
}

/// A graded space with a degree +1 differential squaring to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainComplex<S> {
    pub space: GradedVectorSpace,
    pub differential: LinearMap<S>,
}

/// One cohomology group: dimension and cocycles whose classes form a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyGroup<S> {
    pub dim: usize,
    pub representatives: Vec<SparseVec<usize, S>>,
}

impl<S: Scalar> CochainComplex<S> {
    /// Validates `d∘d = 0`.
    pub fn new(space: GradedVectorSpace, differential: SparseMatrix<S>) -> Result<Self, GradedError> {
        let differential = LinearMap::new(space.clone(), space.clone(), 1, differential)?;
        let c = Self { space, differential };
        c.check_square_zero()?;
        Ok(c)
    }

    pub fn zero_differential(space: GradedVectorSpace) -> Self {
        let differential = LinearMap::zero(space.clone(), space.clone(), 1);
        Self { space, differential }
    }

    pub fn check_square_zero(&self) -> Result<(), GradedError> {
        let sq = self.differential.matrix.compose(&self.differential.matrix);
        if let Some((row, col)) = sq.first_difference(&SparseMatrix::zeros(sq.nrows, sq.ncols)) {
            return Err(GradedError::NotADifferential {
                row,
                col,
                row_label: self.space.labels()[row].name.clone(),
                col_label: self.space.labels()[col].name.clone(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn apply(&self, x: &SparseVec<usize, S>) -> SparseVec<usize, S> {
        self.differential.apply(x)
    }

    /// `V[n]`: degree `i` of the result is degree `n + i` of `self`, and the
    /// differential is multiplied by `(-1)^n`.
    pub fn shift(&self, n: i32) -> Self {
        let space = self.space.regrade(|d| d - n);
        let sign = if n.rem_euclid(2) == 0 { S::one() } else { -S::one() };
        let matrix = self.differential.matrix.scale(&sign);
        Self {
            differential: LinearMap { source: space.clone(), target: space.clone(), degree: 1, matrix },
            space,
        }
    }

    /// Rank of `d` restricted to degree `i`.
    pub fn rank_in_degree(&self, i: i32) -> usize {
        self.differential.block(i).1.rank()
    }

    /// Cohomology dimensions only.
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        let support = self.space.support();
        let ranks: BTreeMap<i32, usize> = support.iter().map(|&d| (d, self.rank_in_degree(d))).collect();
        for &d in &support {
            let n = self.space.dim_in_degree(d);
            let h = n - ranks[&d] - ranks.get(&(d - 1)).copied().unwrap_or(0);
            out.insert(d, h);
        }
        out
    }

    /// Cohomology with explicit representatives, by exact elimination.
    pub fn cohomology(&self) -> Result<BTreeMap<i32, CohomologyGroup<S>>, GradedError> {
        self.check_square_zero()?;
        let mut out = BTreeMap::new();
        for d in self.space.support() {
            let (idx, block) = self.differential.block(d);
            let kernel: Vec<SparseVec<usize, S>> = block
                .kernel()
                .into_iter()
                .map(|k| k.into_iter().map(|(j, c)| (idx[j], c)).collect())
                .collect();
            let (_, prev) = self.differential.block(d - 1);
            let mut ech = crate::linalg::Echelon::new();
            for c in prev.cols {
                ech.insert(c);
            }
            let mut reps = Vec::new();
            for k in kernel {
                if ech.insert(k.clone()) {
                    reps.push(k);
                }
            }
            out.insert(d, CohomologyGroup { dim: reps.len(), representatives: reps });
        }
        Ok(out)
    }
}

/// Cohomology dimensions agree in every degree (missing degrees count as 0).
pub fn compare_cohomology<S: Scalar>(a: &CochainComplex<S>, b: &CochainComplex<S>) -> bool {
    betti_equal(&a.betti(), &b.betti())
}

pub fn betti_equal(a: &BTreeMap<i32, usize>, b: &BTreeMap<i32, usize>) -> bool {
    let keys: std::collections::BTreeSet<i32> = a.keys().chain(b.keys()).copied().collect();
    keys.iter().all(|k| a.get(k).copied().unwrap_or(0) == b.get(k).copied().unwrap_or(0))
}

/// Drops zero entries from a Betti map.
pub fn nonzero_betti(b: &BTreeMap<i32, usize>) -> BTreeMap<i32, usize> {
    b.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, *v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn two_term(dim0: usize, dim1: usize, entries: &[(usize, usize, i64)]) -> CochainComplex<Q> {
        let mut labels = Vec::new();
        for i in 0..dim0 {
            labels.push(BasisLabel { name: format!("a{i}"), degree: 0 });
        }
        for i in 0..dim1 {
            labels.push(BasisLabel { name: format!("b{i}"), degree: 1 });
        }
        let space = GradedVectorSpace::new(labels).unwrap();
        let mut m = SparseMatrix::zeros(dim0 + dim1, dim0 + dim1);
        for &(r, c, v) in entries {
            m.set(dim0 + r, c, qi(v));
        }
        CochainComplex::new(space, m).unwrap()
    }

    #[test]
    fn zero_differential_cohomology_is_the_space() {
        let c = CochainComplex::<Q>::zero_differential(GradedVectorSpace::concentrated("e", 2, 3));
        let h = c.cohomology().unwrap();
        assert_eq!(h[&2].dim, 3);
    }

    #[test]
    fn isomorphism_is_acyclic() {
        let c = two_term(2, 2, &[(0, 0, 1), (1, 1, 2)]);
        assert_eq!(nonzero_betti(&c.betti()), BTreeMap::new());
    }

    #[test]
    fn rejects_non_differential() {
        let space = GradedVectorSpace::concentrated("e", 0, 1);
        let mut m = SparseMatrix::<Q>::zeros(1, 1);
        m.set(0, 0, qi(1));
        assert!(matches!(
            CochainComplex::new(space, m),
            Err(GradedError::DegreeMismatch { .. })
        ));
        // degree-respecting but d∘d ≠ 0
        let labels = vec![
            BasisLabel { name: "x".into(), degree: 0 },
            BasisLabel { name: "y".into(), degree: 1 },
            BasisLabel { name: "z".into(), degree: 2 },
        ];
        let space = GradedVectorSpace::new(labels).unwrap();
        let mut m = SparseMatrix::<Q>::zeros(3, 3);
        m.set(1, 0, qi(1));
        m.set(2, 1, qi(1));
        assert!(matches!(CochainComplex::new(space, m), Err(GradedError::NotADifferential { .. })));
    }

    #[test]
    fn shift_moves_degrees_and_signs() {
        let c = two_term(1, 1, &[(0, 0, 3)]);
        assert_eq!(c.shift(0), c);
        let s = c.shift(-1);
        assert_eq!(s.space.support(), vec![1, 2]);
        assert_eq!(s.differential.matrix.get(1, 0), qi(-3));
        assert_eq!(s.shift(1), c);
        let single = CochainComplex::<Q>::zero_differential(GradedVectorSpace::concentrated("e", 0, 2));
        assert_eq!(single.shift(-1).space.support(), vec![1]);
    }

    #[test]
    fn compare_detects_dimension_change() {
        let a = CochainComplex::<Q>::zero_differential(GradedVectorSpace::concentrated("e", 0, 2));
        let b = CochainComplex::<Q>::zero_differential(GradedVectorSpace::concentrated("e", 0, 3));
        assert!(compare_cohomology(&a, &a));
        assert!(!compare_cohomology(&a, &b));
    }

    #[test]
    fn representatives_are_cocycles() {
        let c = two_term(3, 2, &[(0, 0, 1), (0, 1, 1), (1, 2, 1)]);
        let h = c.cohomology().unwrap();
        assert_eq!(h[&0].dim, 1);
        assert_eq!(h[&1].dim, 0);
        for r in &h[&0].representatives {
            assert!(c.apply(r).is_empty());
        }
    }

    proptest::proptest! {
        #[test]
        fn shift_preserves_betti(entries in proptest::collection::vec(-2i64..3, 6), n in -3i32..4) {
            let e: Vec<(usize, usize, i64)> = entries.iter().enumerate().map(|(k, &v)| (k / 3, k % 3, v)).collect();
            let c = two_term(3, 2, &e);
            let b = c.betti();
            let s = c.shift(n).betti();
            for (d, v) in &b {
                proptest::prop_assert_eq!(s.get(&(d - n)).copied().unwrap_or(0), *v);
            }
        }
    }
}
