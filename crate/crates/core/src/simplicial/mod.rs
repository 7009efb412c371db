//! Semicosimplicial DG vector spaces and DGLAs, their total complex and the
//! Thom-Whitney totalization, and the functors `Z¹_sc`, `H¹_sc`, `MC_χ`.

mod functors;
mod thom_whitney;

use thiserror::Error;

use crate::apl::AplError;
use crate::dgla::{Dgla, DglaMorphism, LieStructure};
use crate::graded::{BasisLabel, CochainComplex, GradedError, GradedVectorSpace};
use crate::linalg::{is_zero_vec, sub, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

pub use functors::{
    def_chi_equivalence, def_chi_tangent, h1_sc_tangent, linearized_h1_sc, mc_chi_membership, z1_sc_membership, Z1Witness,
};
pub use thom_whitney::{check_tw_axioms, TwDgla, TwKey, TwLie};
pub(crate) use thom_whitney::ambient_of;

#[derive(Debug, Error, PartialEq)]
pub enum SimplicialError {
    #[error("malformed object: {0}")]
    Shape(String),
    #[error("cosimplicial identity ∂_{l}∂_{k} = ∂_{k1}∂_{l} fails into level {level}", k1 = k + 1)]
    CosimplicialIdentity { l: usize, k: usize, level: usize },
    #[error("coface ∂_{k} into level {level} does not commute with the differentials")]
    NotChainMap { level: usize, k: usize },
    #[error("coface ∂_{k} into level {level} does not preserve the bracket of basis pair ({a}, {b})")]
    BracketNotPreserved { level: usize, k: usize, a: usize, b: usize },
    #[error("ambient coface ∂_{k} disagrees with the coface matrix on basis element {b} of level {level}")]
    EmbeddingMismatch { level: usize, k: usize, b: usize },
    #[error("level {level} has nonzero cohomology in negative degree {degree}")]
    NegativeCohomology { level: usize, degree: i32 },
    #[error("morphism is not injective")]
    NotInjective,
    #[error("element has the wrong shape: {0}")]
    BadElement(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Apl(#[from] AplError),
}

/// `V_0, V_1, …, V_N` with cofaces `∂_k: V_{i−1} → V_i`, `k = 0..=i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemicosimplicialDgvs<S> {
    pub levels: Vec<CochainComplex<S>>,
    /// `cofaces[i − 1][k]` is `∂_k: V_{i−1} → V_i`.
    pub cofaces: Vec<Vec<SparseMatrix<S>>>,
}

impl<S: Scalar> SemicosimplicialDgvs<S> {
    pub fn new(levels: Vec<CochainComplex<S>>, cofaces: Vec<Vec<SparseMatrix<S>>>) -> Result<Self, SimplicialError> {
        let s = Self { levels, cofaces };
        s.check()?;
        Ok(s)
    }

    pub fn single(level: CochainComplex<S>) -> Self {
        Self { levels: vec![level], cofaces: vec![] }
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn coface(&self, target_level: usize, k: usize) -> &SparseMatrix<S> {
        &self.cofaces[target_level - 1][k]
    }

    fn check_shape(&self) -> Result<(), SimplicialError> {
        if self.levels.is_empty() {
            return Err(SimplicialError::Shape("no levels".into()));
        }
        if self.cofaces.len() + 1 != self.levels.len() {
            return Err(SimplicialError::Shape(format!(
                "{} levels need {} coface families, got {}",
                self.levels.len(),
                self.levels.len() - 1,
                self.cofaces.len()
            )));
        }
        for (i, fam) in self.cofaces.iter().enumerate() {
            if fam.len() != i + 2 {
                return Err(SimplicialError::Shape(format!("level {} needs {} cofaces, got {}", i + 1, i + 2, fam.len())));
            }
            for m in fam {
                if m.ncols != self.levels[i].dim() || m.nrows != self.levels[i + 1].dim() {
                    return Err(SimplicialError::Shape(format!("coface into level {} has the wrong shape", i + 1)));
                }
                for (j, col) in m.cols.iter().enumerate() {
                    let dj = self.levels[i].space.degree(j);
                    if col.keys().any(|r| self.levels[i + 1].space.degree(*r) != dj) {
                        return Err(SimplicialError::Shape(format!("coface into level {} is not of degree 0", i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Verifies `∂_l ∂_k = ∂_{k+1} ∂_l` for `l ≤ k`, that each level is a
    /// complex, and that cofaces are chain maps.
    pub fn check(&self) -> Result<(), SimplicialError> {
        self.check_shape()?;
        for l in &self.levels {
            l.check_square_zero()?;
        }
        for i in 1..self.levels.len() {
            let d_src = &self.levels[i - 1].differential.matrix;
            let d_tgt = &self.levels[i].differential.matrix;
            for (k, m) in self.cofaces[i - 1].iter().enumerate() {
                if m.compose(d_src).first_difference(&d_tgt.compose(m)).is_some() {
                    return Err(SimplicialError::NotChainMap { level: i, k });
                }
            }
        }
        for i in 2..self.levels.len() {
            // ∂_k: V_{i−2} → V_{i−1}, k ≤ i−1; ∂_l, ∂_{k+1}: V_{i−1} → V_i
            for k in 0..i {
                for l in 0..=k {
                    let lhs = self.coface(i, l).compose(self.coface(i - 1, k));
                    let rhs = self.coface(i, k + 1).compose(self.coface(i - 1, l));
                    if lhs.first_difference(&rhs).is_some() {
                        return Err(SimplicialError::CosimplicialIdentity { l, k, level: i });
                    }
                }
            }
        }
        Ok(())
    }

    /// Offsets of each level inside the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.levels.len());
        let mut acc = 0;
        for l in &self.levels {
            out.push(acc);
            acc += l.dim();
        }
        out
    }

    /// `⊕ V_n[−n]` with `D = Σ(−1)^n d_n + Σ_k (−1)^k ∂_k`.
    pub fn tot(&self) -> Result<CochainComplex<S>, SimplicialError> {
        let offs = self.offsets();
        let mut labels = Vec::new();
        for (n, l) in self.levels.iter().enumerate() {
            for lab in l.space.labels() {
                labels.push(BasisLabel { name: format!("{}@{n}", lab.name), degree: lab.degree + n as i32 });
            }
        }
        let dim = labels.len();
        let mut d = SparseMatrix::zeros(dim, dim);
        for (n, l) in self.levels.iter().enumerate() {
            let sn = sign::<S>(n);
            for (j, col) in l.differential.matrix.cols.iter().enumerate() {
                for (r, c) in col {
                    d.cols[offs[n] + j].insert(offs[n] + r, sn.clone() * c.clone());
                }
            }
            if n + 1 < self.levels.len() {
                for (k, m) in self.cofaces[n].iter().enumerate() {
                    let s = sign::<S>(k);
                    for (j, col) in m.cols.iter().enumerate() {
                        for (r, c) in col {
                            crate::linalg::add_term(&mut d.cols[offs[n] + j], offs[n + 1] + r, s.clone() * c.clone());
                        }
                    }
                }
            }
        }
        Ok(CochainComplex::new(GradedVectorSpace::from_labels_unchecked(labels), d)?)
    }

    /// The Thom-Whitney complex with forms of trimmed degree `cap`.
    pub fn tot_tw(&self, cap: u32) -> Result<crate::tw::TwSystem<S>, SimplicialError> {
        if cap == 0 && self.levels.len() > 1 {
            return Err(AplError::CapTooSmall.into());
        }
        let entries: Vec<crate::tw::TwEntry<'_, S>> = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, l)| crate::tw::TwEntry { complex: l, simplex: vec![n] })
            .collect();
        let mut faces = Vec::new();
        for n in 1..self.levels.len() {
            for k in 0..=n {
                faces.push(crate::tw::TwFace { entry: n, factor: 0, k, source: n - 1, coface: self.coface(n, k) });
            }
        }
        Ok(crate::tw::build(&entries, &faces, cap))
    }

    /// Fails if some level has cohomology in negative degree.
    pub fn check_no_negative_cohomology(&self) -> Result<(), SimplicialError> {
        for (i, l) in self.levels.iter().enumerate() {
            for (deg, h) in l.betti() {
                if deg < 0 && h > 0 {
                    return Err(SimplicialError::NegativeCohomology { level: i, degree: deg });
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn sign<S: Scalar>(n: usize) -> S {
    if n % 2 == 0 {
        S::one()
    } else {
        -S::one()
    }
}

/// Ambient Lie structure of a semicosimplicial DGLA: keys know their level
/// and cofaces act on keys.
pub trait LevelwiseLie<S: Scalar>: LieStructure<S> {
    fn level(&self, key: &Self::Key) -> usize;
    /// `∂_k` applied to a key of level `n`, landing in level `n + 1`.
    fn coface(&self, k: usize, key: &Self::Key) -> SparseVec<Self::Key, S>;

    fn coface_vec(&self, k: usize, v: &SparseVec<Self::Key, S>) -> SparseVec<Self::Key, S> {
        let mut out = SparseVec::new();
        for (key, c) in v {
            crate::linalg::axpy(&mut out, c, &self.coface(k, key));
        }
        out
    }
}

/// A semicosimplicial DGLA: the finite linear data plus an embedding of
/// every level basis into an ambient Lie structure where brackets are
/// computed exactly.
#[derive(Clone, Debug)]
pub struct SemicosimplicialDgla<S: Scalar, L: LieStructure<S>> {
    pub dgvs: SemicosimplicialDgvs<S>,
    pub ambient: L,
    /// `embed[n][b]`: basis element `b` of level `n` in ambient keys.
    pub embed: Vec<Vec<SparseVec<L::Key, S>>>,
}

impl<S: Scalar, L: LevelwiseLie<S>> SemicosimplicialDgla<S, L> {
    pub fn new(dgvs: SemicosimplicialDgvs<S>, ambient: L, embed: Vec<Vec<SparseVec<L::Key, S>>>) -> Result<Self, SimplicialError> {
        let g = Self { dgvs, ambient, embed };
        g.check()?;
        Ok(g)
    }

    pub fn embed_vec(&self, level: usize, v: &SparseVec<usize, S>) -> SparseVec<L::Key, S> {
        let mut out = SparseVec::new();
        for (b, c) in v {
            crate::linalg::axpy(&mut out, c, &self.embed[level][*b]);
        }
        out
    }

    /// The linear checks plus: ambient cofaces agree with the coface
    /// matrices, and preserve brackets of basis pairs.
    pub fn check(&self) -> Result<(), SimplicialError> {
        self.dgvs.check()?;
        if self.embed.len() != self.dgvs.levels.len() {
            return Err(SimplicialError::Shape("embedding has the wrong number of levels".into()));
        }
        for n in 1..self.dgvs.levels.len() {
            let src = &self.embed[n - 1];
            let mut images = Vec::new();
            for k in 0..=n {
                let m = self.dgvs.coface(n, k);
                let img: Vec<_> = src.iter().map(|e| self.ambient.coface_vec(k, e)).collect();
                for (b, lhs) in img.iter().enumerate() {
                    let rhs = self.embed_vec(n, &m.cols[b]);
                    if !is_zero_vec(&sub(lhs, &rhs)) {
                        return Err(SimplicialError::EmbeddingMismatch { level: n, k, b });
                    }
                }
                images.push(img);
            }
            // Graded skewsymmetry on both sides makes pairs a ≤ b enough.
            for a in 0..src.len() {
                for b in a..src.len() {
                    let br = self.ambient.br(&src[a], &src[b]);
                    for (k, img) in images.iter().enumerate() {
                        let lhs = self.ambient.coface_vec(k, &br);
                        let rhs = self.ambient.br(&img[a], &img[b]);
                        if !is_zero_vec(&sub(&lhs, &rhs)) {
                            return Err(SimplicialError::BracketNotPreserved { level: n, k, a, b });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tot_tw(&self, cap: u32) -> Result<TwDgla<'_, S, L>, SimplicialError> {
        let system = self.dgvs.tot_tw(cap)?;
        Ok(TwDgla { system, lie: TwLie { lie: &self.ambient }, embed: &self.embed })
    }
}

/// Finite DGLA levels with coface morphisms, as an ambient Lie structure
/// keyed by `(level, basis index)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLevels<S> {
    pub levels: Vec<Dgla<S>>,
    pub cofaces: Vec<Vec<SparseMatrix<S>>>,
}

impl<S: Scalar> LieStructure<S> for FiniteLevels<S> {
    type Key = (usize, usize);

    fn degree(&self, k: &(usize, usize)) -> i32 {
        self.levels[k.0].space().degree(k.1)
    }

    fn differential(&self, k: &(usize, usize)) -> SparseVec<(usize, usize), S> {
        self.levels[k.0].differential(&k.1).into_iter().map(|(j, c)| ((k.0, j), c)).collect()
    }

    fn bracket(&self, a: &(usize, usize), b: &(usize, usize)) -> SparseVec<(usize, usize), S> {
        if a.0 != b.0 {
            return SparseVec::new();
        }
        self.levels[a.0].bracket_of(a.1, b.1).into_iter().map(|(j, c)| ((a.0, j), c)).collect()
    }
}

impl<S: Scalar> LevelwiseLie<S> for FiniteLevels<S> {
    fn level(&self, key: &(usize, usize)) -> usize {
        key.0
    }

    fn coface(&self, k: usize, key: &(usize, usize)) -> SparseVec<(usize, usize), S> {
        match self.cofaces.get(key.0).and_then(|f| f.get(k)) {
            Some(m) => m.cols[key.1].iter().map(|(j, c)| ((key.0 + 1, *j), c.clone())).collect(),
            None => SparseVec::new(),
        }
    }
}

impl<S: Scalar> SemicosimplicialDgla<S, FiniteLevels<S>> {
    /// Levels that are finite DGLAs; cofaces must be DGLA morphisms.
    pub fn from_finite(levels: Vec<Dgla<S>>, cofaces: Vec<Vec<SparseMatrix<S>>>) -> Result<Self, SimplicialError> {
        let dgvs = SemicosimplicialDgvs { levels: levels.iter().map(|l| l.complex.clone()).collect(), cofaces: cofaces.clone() };
        let embed = levels
            .iter()
            .enumerate()
            .map(|(n, l)| {
                (0..l.dim())
                    .map(|b| {
                        let mut v = SparseVec::new();
                        v.insert((n, b), S::one());
                        v
                    })
                    .collect()
            })
            .collect();
        Self::new(dgvs, FiniteLevels { levels, cofaces }, embed)
    }

    /// The two-level object `L ⇉ M` with `∂_0 = χ`, `∂_1 = 0`.
    pub fn from_morphism(chi: &DglaMorphism<S>) -> Result<Self, SimplicialError> {
        let zero = SparseMatrix::zeros(chi.target.dim(), chi.source.dim());
        Self::from_finite(vec![chi.source.clone(), chi.target.clone()], vec![vec![chi.map.clone(), zero]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::examples::{abelian, sl2};
    use crate::scalar::{qi, Q};

    #[test]
    fn single_level_passes_and_tot_is_identity() {
        let l = sl2::<Q>();
        let s = SemicosimplicialDgvs::single(l.complex.clone());
        assert!(s.check().is_ok());
        let t = s.tot().unwrap();
        assert_eq!(t.betti(), l.complex.betti());
        let tw = s.tot_tw(2).unwrap();
        assert_eq!(tw.betti(), l.complex.betti());
    }

    #[test]
    fn from_identity_has_two_levels() {
        let l = sl2::<Q>();
        let g = SemicosimplicialDgla::from_morphism(&DglaMorphism::identity(l.clone())).unwrap();
        assert_eq!(g.dgvs.levels.len(), 2);
        assert_eq!(g.dgvs.coface(1, 0), &SparseMatrix::identity(3));
        assert!(g.dgvs.coface(1, 1).is_zero());
        // the mapping cone of an isomorphism is acyclic
        let t = g.dgvs.tot().unwrap();
        assert!(t.betti().values().all(|&h| h == 0));
    }

    #[test]
    fn zero_morphism_gives_zero_cofaces() {
        let l = abelian::<Q>(0, 2);
        let g = SemicosimplicialDgla::from_morphism(&DglaMorphism::zero(l.clone(), l)).unwrap();
        assert!(g.dgvs.coface(1, 0).is_zero() && g.dgvs.coface(1, 1).is_zero());
    }

    #[test]
    fn bad_shape_is_reported() {
        let l = abelian::<Q>(0, 1).complex;
        let s = SemicosimplicialDgvs { levels: vec![l.clone(), l], cofaces: vec![vec![SparseMatrix::identity(1)]] };
        assert!(matches!(s.check(), Err(SimplicialError::Shape(_))));
        let mut m = SparseMatrix::zeros(1, 1);
        m.set(0, 0, qi(1));
        let _ = m;
    }
}
