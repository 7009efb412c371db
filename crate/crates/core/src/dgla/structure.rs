use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::Debug;

use thiserror::Error;

use crate::coefficients::ArtinianAlgebra;
use crate::graded::{BasisLabel, CochainComplex, GradedError, GradedVectorSpace, LinearMap};
use crate::linalg::{add_term, axpy, is_zero_vec, sub, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// The data of a DGLA on a (possibly infinite) basis: degree, differential
/// and bracket of basis elements. Finite DGLAs, Laurent vector fields and
/// Thom-Whitney ambients all implement this.
pub trait LieStructure<S: Scalar> {
    type Key: Ord + Clone + Debug;

    fn degree(&self, k: &Self::Key) -> i32;
    fn differential(&self, k: &Self::Key) -> SparseVec<Self::Key, S>;
    fn bracket(&self, a: &Self::Key, b: &Self::Key) -> SparseVec<Self::Key, S>;

    fn d(&self, x: &SparseVec<Self::Key, S>) -> SparseVec<Self::Key, S> {
        let mut out = SparseVec::new();
        for (k, c) in x {
            axpy(&mut out, c, &self.differential(k));
        }
        out
    }

    fn br(&self, x: &SparseVec<Self::Key, S>, y: &SparseVec<Self::Key, S>) -> SparseVec<Self::Key, S> {
        let mut out = SparseVec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let c = ca.clone() * cb.clone();
                axpy(&mut out, &c, &self.bracket(a, b));
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    #[error("bracket of {a} and {b} is not homogeneous of the expected degree")]
    BracketDegree { a: String, b: String },
    #[error("differential of {a} is not of degree +1")]
    DifferentialDegree { a: String },
    #[error("d∘d ≠ 0 on {a}")]
    DifferentialSquare { a: String },
    #[error("skewsymmetry fails on ({a}, {b}): [a,b] = {lhs}, -(-1)^(|a||b|)[b,a] = {rhs}")]
    Skew { a: String, b: String, lhs: String, rhs: String },
    #[error("Jacobi fails on ({a}, {b}, {c}): [a,[b,c]] = {lhs}, [[a,b],c] + ±[b,[a,c]] = {rhs}")]
    Jacobi { a: String, b: String, c: String, lhs: String, rhs: String },
    #[error("Leibniz fails on ({a}, {b}): d[a,b] = {lhs}, [da,b] + ±[a,db] = {rhs}")]
    Leibniz { a: String, b: String, lhs: String, rhs: String },
}

fn sign<S: Scalar>(e: i32) -> S {
    if e.rem_euclid(2) == 0 {
        S::one()
    } else {
        -S::one()
    }
}

pub(crate) fn koszul<S: Scalar>(a: i32, b: i32) -> S {
    sign(a * b)
}

fn homogeneous_of<S: Scalar, L: LieStructure<S>>(l: &L, v: &SparseVec<L::Key, S>, deg: i32) -> bool {
    v.keys().all(|k| l.degree(k) == deg)
}

/// Counts of the checks performed by [`check_axioms`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs: usize,
    pub triples: usize,
}

/// Checks graded skewsymmetry and Leibniz on all pairs and graded Jacobi on
/// all triples of the given homogeneous elements. Elements are sparse
/// vectors in the structure's basis.
///
/// Once `[e_j, e_i] = −(−1)^{|e_i||e_j|}[e_i, e_j]` is verified, the
/// Jacobiator `J(a, b, c)` changes only by that sign when `a` and `b` are
/// swapped, so triples are taken with `i ≤ j` and every `k`.
pub fn check_axioms<S: Scalar, L: LieStructure<S>>(
    l: &L,
    elements: &[(i32, SparseVec<L::Key, S>)],
    names: &dyn Fn(usize) -> String,
) -> Result<AxiomReport, AxiomViolation> {
    let fmt = |v: &SparseVec<L::Key, S>| format!("{v:?}");
    let mut report = AxiomReport::default();
    let mut ds = Vec::with_capacity(elements.len());
    for (i, (da, a)) in elements.iter().enumerate() {
        let dx = l.d(a);
        if !homogeneous_of(l, &dx, da + 1) {
            return Err(AxiomViolation::DifferentialDegree { a: names(i) });
        }
        if !is_zero_vec(&l.d(&dx)) {
            return Err(AxiomViolation::DifferentialSquare { a: names(i) });
        }
        ds.push(dx);
    }
    let n = elements.len();
    // brackets[i][j - i] = [e_i, e_j] for i ≤ j
    let mut brackets: Vec<Vec<SparseVec<L::Key, S>>> = Vec::with_capacity(n);
    for i in 0..n {
        let (da, a) = &elements[i];
        let mut row = Vec::with_capacity(n - i);
        for j in i..n {
            let (db, b) = &elements[j];
            report.pairs += 1;
            let ab = l.br(a, b);
            if !homogeneous_of(l, &ab, da + db) {
                return Err(AxiomViolation::BracketDegree { a: names(i), b: names(j) });
            }
            let ba = l.br(b, a);
            let rhs = crate::linalg::scaled(&(-koszul::<S>(*da, *db)), &ba);
            if !is_zero_vec(&sub(&ab, &rhs)) {
                return Err(AxiomViolation::Skew { a: names(i), b: names(j), lhs: fmt(&ab), rhs: fmt(&rhs) });
            }
            for (x, y, bracket) in [(i, j, &ab), (j, i, &ba)] {
                let lhs = l.d(bracket);
                let mut rhs = l.br(&ds[x], &elements[y].1);
                axpy(&mut rhs, &sign(elements[x].0), &l.br(&elements[x].1, &ds[y]));
                if !is_zero_vec(&sub(&lhs, &rhs)) {
                    return Err(AxiomViolation::Leibniz { a: names(x), b: names(y), lhs: fmt(&lhs), rhs: fmt(&rhs) });
                }
            }
            row.push(ab);
        }
        brackets.push(row);
    }
    let br = |i: usize, j: usize| -> Cow<'_, SparseVec<L::Key, S>> {
        if i <= j {
            Cow::Borrowed(&brackets[i][j - i])
        } else {
            Cow::Owned(crate::linalg::scaled(&(-koszul::<S>(elements[i].0, elements[j].0)), &brackets[j][i - j]))
        }
    };
    for i in 0..n {
        let (da, a) = &elements[i];
        for j in i..n {
            let (db, b) = &elements[j];
            let ab = &brackets[i][j - i];
            for k in 0..n {
                let c = &elements[k].1;
                report.triples += 1;
                let lhs = l.br(a, &br(j, k));
                let mut rhs = l.br(ab, c);
                axpy(&mut rhs, &koszul(*da, *db), &l.br(b, &br(i, k)));
                if !is_zero_vec(&sub(&lhs, &rhs)) {
                    return Err(AxiomViolation::Jacobi {
                        a: names(i),
                        b: names(j),
                        c: names(k),
                        lhs: fmt(&lhs),
                        rhs: fmt(&rhs),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// A finite-dimensional DGLA given by a cochain complex and bracket
/// structure constants on basis pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Dgla<S> {
    pub complex: CochainComplex<S>,
    brackets: HashMap<(usize, usize), SparseVec<usize, S>>,
}

impl<S: Scalar> Dgla<S> {
    /// Structure constants are taken exactly as given for each ordered pair;
    /// missing pairs bracket to zero.
    pub fn new(
        complex: CochainComplex<S>,
        brackets: impl IntoIterator<Item = ((usize, usize), SparseVec<usize, S>)>,
    ) -> Self {
        let brackets = brackets.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Self { complex, brackets }
    }

    /// Like [`Dgla::new`] but fills in `[b,a]` from `[a,b]` by graded
    /// skewsymmetry.
    pub fn with_skew_brackets(
        complex: CochainComplex<S>,
        brackets: impl IntoIterator<Item = ((usize, usize), SparseVec<usize, S>)>,
    ) -> Self {
        let mut all = HashMap::new();
        for ((i, j), v) in brackets {
            let s = -koszul::<S>(complex.space.degree(i), complex.space.degree(j));
            if i != j {
                all.insert((j, i), crate::linalg::scaled(&s, &v));
            }
            all.insert((i, j), v);
        }
        Self::new(complex, all)
    }

    pub fn abelian(complex: CochainComplex<S>) -> Self {
        Self::new(complex, [])
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.complex.space
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn bracket_of(&self, i: usize, j: usize) -> SparseVec<usize, S> {
        self.brackets.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.values().all(is_zero_vec)
    }

    pub fn basis_elements(&self) -> Vec<(i32, SparseVec<usize, S>)> {
        (0..self.dim())
            .map(|i| {
                let mut v = SparseVec::new();
                v.insert(i, S::one());
                (self.space().degree(i), v)
            })
            .collect()
    }

    /// Exhaustive axiom check on basis pairs and triples.
    pub fn check_axioms(&self) -> Result<AxiomReport, AxiomViolation> {
        let labels = self.space().labels().to_vec();
        check_axioms(self, &self.basis_elements(), &|i| labels[i].name.clone())
    }

    /// `L ⊗ B` with `[l⊗a, m⊗b] = [l,m]⊗ab` and `d(l⊗a) = dl⊗a`. The basis
    /// is ordered with the `L` index major.
    pub fn tensor_with_algebra(&self, b: &ArtinianAlgebra) -> Dgla<S> {
        let nb = b.dim();
        let idx = |l: usize, a: usize| l * nb + a;
        let labels: Vec<BasisLabel> = self
            .space()
            .labels()
            .iter()
            .flat_map(|l| {
                (0..nb).map(move |a| BasisLabel { name: format!("{}⊗{}", l.name, b.basis_name(a)), degree: l.degree })
            })
            .collect();
        let space = GradedVectorSpace::from_labels_unchecked(labels);
        let n = space.dim();
        let mut d = SparseMatrix::zeros(n, n);
        for (l, col) in self.complex.differential.matrix.cols.iter().enumerate() {
            for a in 0..nb {
                for (r, c) in col {
                    d.set(idx(*r, a), idx(l, a), c.clone());
                }
            }
        }
        let mut brackets = Vec::new();
        for ((i, j), v) in &self.brackets {
            for a in 0..nb {
                for bb in 0..nb {
                    if let Some(ab) = b.mul_basis(a, bb) {
                        let w: SparseVec<usize, S> = v.iter().map(|(r, c)| (idx(*r, ab), c.clone())).collect();
                        brackets.push(((idx(*i, a), idx(*j, bb)), w));
                    }
                }
            }
        }
        let differential = LinearMap { source: space.clone(), target: space.clone(), degree: 1, matrix: d };
        Dgla::new(CochainComplex { space, differential }, brackets)
    }

    /// `dim H^1(L)`: the tangent space `Def_L(Q[ε])`.
    pub fn tangent_def(&self) -> usize {
        self.complex.betti().get(&1).copied().unwrap_or(0)
    }
}

impl<S: Scalar> LieStructure<S> for Dgla<S> {
    type Key = usize;

    fn degree(&self, k: &usize) -> i32 {
        self.space().degree(*k)
    }

    fn differential(&self, k: &usize) -> SparseVec<usize, S> {
        self.complex.differential.matrix.cols[*k].clone()
    }

    fn bracket(&self, a: &usize, b: &usize) -> SparseVec<usize, S> {
        self.bracket_of(*a, *b)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MorphismError {
    #[error("map does not commute with differentials at source basis {0}")]
    Differential(usize),
    #[error("map does not preserve the bracket of basis pair ({0}, {1})")]
    Bracket(usize, usize),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// A validated morphism of finite DGLAs.
#[derive(Clone, Debug, PartialEq)]
pub struct DglaMorphism<S> {
    pub source: Dgla<S>,
    pub target: Dgla<S>,
    pub map: SparseMatrix<S>,
}

impl<S: Scalar> DglaMorphism<S> {
    pub fn new(source: Dgla<S>, target: Dgla<S>, map: SparseMatrix<S>) -> Result<Self, MorphismError> {
        LinearMap::new(source.space().clone(), target.space().clone(), 0, map.clone())?;
        let m = Self { source, target, map };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(l: Dgla<S>) -> Self {
        let map = SparseMatrix::identity(l.dim());
        Self { source: l.clone(), target: l, map }
    }

    pub fn zero(source: Dgla<S>, target: Dgla<S>) -> Self {
        let map = SparseMatrix::zeros(target.dim(), source.dim());
        Self { source, target, map }
    }

    pub fn validate(&self) -> Result<(), MorphismError> {
        let d1 = self.map.compose(&self.source.complex.differential.matrix);
        let d2 = self.target.complex.differential.matrix.compose(&self.map);
        if let Some((_, j)) = d1.first_difference(&d2) {
            return Err(MorphismError::Differential(j));
        }
        for i in 0..self.source.dim() {
            for j in 0..self.source.dim() {
                let lhs = self.map.apply(&self.source.bracket_of(i, j));
                let rhs = self.target.br(&self.map.cols[i], &self.map.cols[j]);
                if !is_zero_vec(&sub(&lhs, &rhs)) {
                    return Err(MorphismError::Bracket(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.map.rank() == self.source.dim()
    }
}

/// Small hand-built DGLAs used in tests, examples and the CLI.
pub mod examples {
    use super::*;

    fn unit<S: Scalar>(i: usize, c: S) -> SparseVec<usize, S> {
        let mut v = SparseVec::new();
        add_term(&mut v, i, c);
        v
    }

    /// `sl_2` in degree 0 with basis `e, f, h`: `[e,f] = h`, `[h,e] = 2e`,
    /// `[h,f] = -2f`.
    pub fn sl2<S: Scalar>() -> Dgla<S> {
        let space = GradedVectorSpace::from_labels_unchecked(
            ["e", "f", "h"].iter().map(|n| BasisLabel { name: n.to_string(), degree: 0 }).collect(),
        );
        Dgla::with_skew_brackets(
            CochainComplex::zero_differential(space),
            [
                ((0, 1), unit(2, S::one())),
                ((2, 0), unit(0, S::int(2))),
                ((2, 1), unit(1, S::int(-2))),
            ],
        )
    }

    /// Heisenberg algebra `e, f, z` in degree 0 with `[e,f] = z`.
    pub fn heisenberg<S: Scalar>() -> Dgla<S> {
        let space = GradedVectorSpace::from_labels_unchecked(
            ["e", "f", "z"].iter().map(|n| BasisLabel { name: n.to_string(), degree: 0 }).collect(),
        );
        Dgla::with_skew_brackets(CochainComplex::zero_differential(space), [((0, 1), unit(2, S::one()))])
    }

    /// `u` in degree 1, `v` in degree 2, `du = 0`, `[u,u] = v`.
    pub fn obstructed<S: Scalar>() -> Dgla<S> {
        let space = GradedVectorSpace::from_labels_unchecked(vec![
            BasisLabel { name: "u".into(), degree: 1 },
            BasisLabel { name: "v".into(), degree: 2 },
        ]);
        Dgla::new(CochainComplex::zero_differential(space), [((0, 0), unit(1, S::one()))])
    }

    /// Abelian DGLA concentrated in one degree with zero differential.
    pub fn abelian<S: Scalar>(degree: i32, dim: usize) -> Dgla<S> {
        Dgla::abelian(CochainComplex::zero_differential(GradedVectorSpace::concentrated("x", degree, dim)))
    }

    /// `L^0 = span(a)`, `L^1 = span(b)`, `d a = b`: acyclic.
    pub fn acyclic_pair<S: Scalar>() -> Dgla<S> {
        let space = GradedVectorSpace::from_labels_unchecked(vec![
            BasisLabel { name: "a".into(), degree: 0 },
            BasisLabel { name: "b".into(), degree: 1 },
        ]);
        let mut d = SparseMatrix::zeros(2, 2);
        d.set(1, 0, S::one());
        Dgla::abelian(CochainComplex::new(space, d).expect("d² = 0"))
    }

    /// `gl_2 ⊗ C` for the small commutative DGA
    /// `C = Q[s, ds]/(s³, s²ds) ⊗ Λ(ξ)` with `|ξ| = 1`, `dξ = 0`: nonzero
    /// differential in degree 0 and nonzero brackets `L¹ × L¹ → L²`, so
    /// Maurer-Cartan and gauge are both nontrivial. Basis `E_ij ⊗ c`, index
    /// `4·c + 2i + j`.
    pub fn matrix_forms<S: Scalar>() -> Dgla<S> {
        // B: 0 = 1, 1 = s, 2 = s², 3 = ds, 4 = s·ds
        let bname = ["1", "s", "s²", "ds", "s·ds"];
        let bdeg = [0, 0, 0, 1, 1];
        let bmul = |x: usize, y: usize| -> Option<usize> {
            match (x, y) {
                (0, z) | (z, 0) => Some(z),
                (1, 1) => Some(2),
                (1, 3) | (3, 1) => Some(4),
                _ => None,
            }
        };
        let bd = |x: usize| -> Option<(usize, i64)> {
            match x {
                1 => Some((3, 1)),
                2 => Some((4, 2)),
                _ => None,
            }
        };
        // C = B ⊗ Λ(ξ): index 2b + e
        let cdeg = |c: usize| bdeg[c / 2] + (c % 2) as i32;
        let cmul = |x: usize, y: usize| -> Option<(usize, i64)> {
            let (b1, e1, b2, e2) = (x / 2, x % 2, y / 2, y % 2);
            if e1 + e2 > 1 {
                return None;
            }
            let b = bmul(b1, b2)?;
            let sign = if e1 == 1 && bdeg[b2] == 1 { -1 } else { 1 };
            Some((2 * b + e1 + e2, sign))
        };
        let nc = 10;
        let idx = |c: usize, i: usize, j: usize| 4 * c + 2 * i + j;
        let mut labels = Vec::new();
        for c in 0..nc {
            let cname = if c % 2 == 1 { format!("{}·ξ", bname[c / 2]) } else { bname[c / 2].to_string() };
            for i in 0..2 {
                for j in 0..2 {
                    labels.push(BasisLabel { name: format!("E{i}{j}⊗{cname}"), degree: cdeg(c) });
                }
            }
        }
        let space = GradedVectorSpace::from_labels_unchecked(labels);
        let n = 4 * nc;
        let mut d = SparseMatrix::zeros(n, n);
        for c in 0..nc {
            if let Some((b, k)) = bd(c / 2) {
                for i in 0..2 {
                    for j in 0..2 {
                        d.set(idx(2 * b + c % 2, i, j), idx(c, i, j), S::int(k));
                    }
                }
            }
        }
        let mut brackets = Vec::new();
        for p in 0..nc {
            for q in 0..nc {
                let Some((r, sign)) = cmul(p, q) else { continue };
                let sg = S::int(sign);
                for a in 0..2 {
                    for b in 0..2 {
                        for c in 0..2 {
                            for e in 0..2 {
                                // [E_ab ⊗ x, E_ce ⊗ y] = [E_ab, E_ce] ⊗ xy
                                let mut v = SparseVec::new();
                                if b == c {
                                    add_term(&mut v, idx(r, a, e), sg.clone());
                                }
                                if e == a {
                                    add_term(&mut v, idx(r, c, b), -sg.clone());
                                }
                                brackets.push(((idx(p, a, b), idx(q, c, e)), v));
                            }
                        }
                    }
                }
            }
        }
        Dgla::new(CochainComplex::new(space, d).expect("d² = 0"), brackets)
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::scalar::{qi, Q};

    #[test]
    fn hand_examples_pass_axioms() {
        assert!(abelian::<Q>(1, 3).check_axioms().is_ok());
        assert!(sl2::<Q>().check_axioms().is_ok());
        assert!(heisenberg::<Q>().check_axioms().is_ok());
        assert!(obstructed::<Q>().check_axioms().is_ok());
        matrix_forms::<Q>().check_axioms().unwrap();
    }

    #[test]
    fn corrupted_sign_is_caught_by_jacobi() {
        let g = sl2::<Q>();
        let mut br: Vec<_> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), g.bracket_of(i, j)))
            .collect();
        // flip [h,e] and [e,h] together so skewsymmetry still holds
        for ((i, j), v) in br.iter_mut() {
            if (*i, *j) == (2, 0) || (*i, *j) == (0, 2) {
                *v = crate::linalg::scaled(&qi(-1), v);
            }
        }
        let bad = Dgla::new(g.complex.clone(), br);
        match bad.check_axioms() {
            Err(AxiomViolation::Jacobi { .. }) => {}
            other => panic!("expected a Jacobi witness, got {other:?}"),
        }
    }

    #[test]
    fn tensor_rule_on_sl2() {
        let g = sl2::<Q>();
        let b = ArtinianAlgebra::truncated_poly(3).unwrap();
        let gt = g.tensor_with_algebra(&b);
        assert!(gt.check_axioms().is_ok());
        // [e⊗t, f⊗t] = h⊗t²; basis index = l * 3 + a
        let br = gt.bracket_of(1, 3 + 1);
        let mut expect = SparseVec::new();
        expect.insert(2 * 3 + 2, qi(1));
        assert_eq!(br, expect);
        assert!(gt.complex.differential.is_zero());
        let q = ArtinianAlgebra::from_staircase(vec![], Vec::<Vec<u32>>::new()).unwrap();
        let same = g.tensor_with_algebra(&q);
        assert_eq!(same.dim(), 3);
        assert_eq!(same.bracket_of(0, 1), g.bracket_of(0, 1));
        assert!(abelian::<Q>(0, 2).tensor_with_algebra(&b).is_abelian());
    }

    #[test]
    fn tangent_examples() {
        assert_eq!(abelian::<Q>(1, 4).tangent_def(), 4);
        assert_eq!(acyclic_pair::<Q>().tangent_def(), 0);
    }

    #[test]
    fn morphism_validation() {
        let g = sl2::<Q>();
        assert!(DglaMorphism::new(g.clone(), g.clone(), SparseMatrix::identity(3)).is_ok());
        let mut bad = SparseMatrix::identity(3);
        bad.set(2, 2, qi(2));
        assert_eq!(DglaMorphism::new(g.clone(), g, bad).unwrap_err(), MorphismError::Bracket(0, 1));
    }
}
