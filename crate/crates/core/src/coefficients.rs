//! Local Artinian algebras presented as monomial quotients.
//!
//! An algebra is described by its staircase: the monomials spanning the
//! maximal ideal. Every other monomial is zero. Elements are sparse vectors
//! over the full basis, where index 0 is the unit and index `i >= 1` is the
//! `i-1`-th staircase monomial.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::linalg::{add_term, SparseVec};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("truncation order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("staircase must not contain the unit monomial")]
    ContainsUnit,
    #[error("staircase is not closed under division: {0:?} is missing")]
    NotDivisionClosed(Vec<u32>),
    #[error("monomial {0:?} has {1} variables, expected {2}")]
    WrongArity(Vec<u32>, usize, usize),
}

/// Exponent vector of a monomial in the generators.
pub type Exponents = Vec<u32>;

/// A local Artinian algebra `Q ⊕ m_A` with monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinianAlgebra {
    generators: Vec<String>,
    staircase: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
    /// `table[i][j]`: product of full-basis elements `i` and `j`.
    table: Vec<Vec<Option<usize>>>,
}

/// Element of an Artinian algebra over the full basis (0 = unit).
pub type AlgElement<S> = SparseVec<usize, S>;

fn graded_lex(a: &Exponents, b: &Exponents) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl ArtinianAlgebra {
    /// Builds the algebra spanned by `1` and the given staircase.
    pub fn from_staircase(
        generators: Vec<String>,
        monomials: impl IntoIterator<Item = Exponents>,
    ) -> Result<Self, AlgebraError> {
        let nvars = generators.len();
        let set: BTreeSet<Exponents> = monomials.into_iter().collect();
        for m in &set {
            if m.len() != nvars {
                return Err(AlgebraError::WrongArity(m.clone(), m.len(), nvars));
            }
            if m.iter().all(|&e| e == 0) {
                return Err(AlgebraError::ContainsUnit);
            }
            for v in 0..nvars {
                if m[v] > 0 {
                    let mut d = m.clone();
                    d[v] -= 1;
                    if d.iter().any(|&e| e > 0) && !set.contains(&d) {
                        return Err(AlgebraError::NotDivisionClosed(d));
                    }
                }
            }
        }
        let mut staircase: Vec<Exponents> = set.into_iter().collect();
        staircase.sort_by(graded_lex);
        let index: HashMap<Exponents, usize> =
            staircase.iter().enumerate().map(|(i, m)| (m.clone(), i + 1)).collect();
        let n = staircase.len() + 1;
        let mut table = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = if i == 0 {
                    Some(j)
                } else if j == 0 {
                    Some(i)
                } else {
                    let prod: Exponents =
                        staircase[i - 1].iter().zip(&staircase[j - 1]).map(|(a, b)| a + b).collect();
                    index.get(&prod).copied()
                };
            }
        }
        Ok(Self { generators, staircase, index, table })
    }

    /// `Q[ε]/(ε²)`.
    pub fn dual_numbers() -> Self {
        Self::from_staircase(vec!["eps".into()], [vec![1]]).expect("valid staircase")
    }

    /// `Q[t]/(t^order)`.
    pub fn truncated_poly(order: u32) -> Result<Self, AlgebraError> {
        if order < 2 {
            return Err(AlgebraError::OrderTooSmall(order));
        }
        Self::from_staircase(vec!["t".into()], (1..order).map(|e| vec![e]))
    }

    /// `Q[t_1..t_k]` modulo all monomials of total degree `order`.
    pub fn truncated_total_degree(nvars: usize, order: u32) -> Result<Self, AlgebraError> {
        if order < 2 {
            return Err(AlgebraError::OrderTooSmall(order));
        }
        let mut mons = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
            if v == cur.len() {
                if cur.iter().any(|&e| e > 0) {
                    out.push(cur.clone());
                }
                return;
            }
            for e in 0..=left {
                cur[v] = e;
                rec(v + 1, left - e, cur, out);
            }
            cur[v] = 0;
        }
        rec(0, order - 1, &mut cur, &mut mons);
        let gens = (1..=nvars).map(|i| format!("t{i}")).collect();
        Self::from_staircase(gens, mons)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn staircase(&self) -> &[Exponents] {
        &self.staircase
    }

    /// `dim_Q m_A`.
    pub fn ideal_dim(&self) -> usize {
        self.staircase.len()
    }

    /// `dim_Q A`.
    pub fn dim(&self) -> usize {
        self.staircase.len() + 1
    }

    /// Smallest `N` with `m_A^N = 0`.
    pub fn nilpotency_order(&self) -> usize {
        self.staircase.iter().map(|m| m.iter().sum::<u32>() as usize).max().unwrap_or(0) + 1
    }

    /// Total degree of a full-basis element (0 for the unit).
    pub fn degree_of(&self, idx: usize) -> u32 {
        if idx == 0 {
            0
        } else {
            self.staircase[idx - 1].iter().sum()
        }
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        if m.iter().all(|&e| e == 0) {
            Some(0)
        } else {
            self.index.get(m).copied()
        }
    }

    /// Product of two full-basis elements.
    pub fn mul_basis(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i][j]
    }

    pub fn one<S: Scalar>(&self) -> AlgElement<S> {
        let mut e = SparseVec::new();
        e.insert(0, S::one());
        e
    }

    /// The element `c · m` for a monomial `m`.
    pub fn monomial<S: Scalar>(&self, m: &[u32], c: S) -> AlgElement<S> {
        let mut e = SparseVec::new();
        match self.index_of(m) {
            Some(i) => add_term(&mut e, i, c),
            None => {}
        }
        e
    }

    pub fn mul<S: Scalar>(&self, a: &AlgElement<S>, b: &AlgElement<S>) -> AlgElement<S> {
        let mut out = SparseVec::new();
        for (i, x) in a {
            for (j, y) in b {
                if let Some(k) = self.table[*i][*j] {
                    add_term(&mut out, k, x.clone() * y.clone());
                }
            }
        }
        out
    }

    pub fn pow<S: Scalar>(&self, a: &AlgElement<S>, n: u32) -> AlgElement<S> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn in_ideal<S: Scalar>(&self, a: &AlgElement<S>) -> bool {
        !a.contains_key(&0)
    }

    pub fn basis_name(&self, idx: usize) -> String {
        if idx == 0 {
            return "1".into();
        }
        let m = &self.staircase[idx - 1];
        let parts: Vec<String> = m
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for ArtinianAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..self.dim()).map(|i| self.basis_name(i)).collect();
        write!(f, "Q[{}]/<staircase {{{}}}>", self.generators.join(","), names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};
    use proptest::prelude::*;

    fn elem(a: &ArtinianAlgebra, coeffs: &[i64]) -> AlgElement<Q> {
        let mut e = SparseVec::new();
        for (i, c) in coeffs.iter().enumerate().take(a.dim()) {
            add_term(&mut e, i, qi(*c));
        }
        e
    }

    #[test]
    fn dual_numbers_shape() {
        let a = ArtinianAlgebra::dual_numbers();
        assert_eq!(a.ideal_dim(), 1);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.nilpotency_order(), 2);
        assert_eq!(a.mul_basis(1, 1), None);
    }

    #[test]
    fn truncated_products() {
        assert_eq!(ArtinianAlgebra::truncated_poly(1), Err(AlgebraError::OrderTooSmall(1)));
        let t2 = ArtinianAlgebra::truncated_poly(2).unwrap();
        assert_eq!(t2.ideal_dim(), ArtinianAlgebra::dual_numbers().ideal_dim());
        assert_eq!(t2.nilpotency_order(), 2);
        let t3 = ArtinianAlgebra::truncated_poly(3).unwrap();
        assert_eq!(t3.ideal_dim(), 2);
        assert_eq!(t3.mul_basis(1, 1), Some(2));
        assert_eq!(t3.mul_basis(1, 2), None);
        let t4 = ArtinianAlgebra::truncated_poly(4).unwrap();
        assert_eq!(t4.mul_basis(2, 2), None);
        // (1 + t)(1 - t) = 1 - t^2 in Q[t]/(t^3)
        let p = t3.mul(&elem(&t3, &[1, 1]), &elem(&t3, &[1, -1]));
        assert_eq!(p, elem(&t3, &[1, 0, -1]));
    }

    #[test]
    fn rejects_bad_staircase() {
        let r = ArtinianAlgebra::from_staircase(vec!["t".into()], [vec![2]]);
        assert_eq!(r, Err(AlgebraError::NotDivisionClosed(vec![1])));
        let r = ArtinianAlgebra::from_staircase(vec!["t".into()], [vec![0]]);
        assert_eq!(r, Err(AlgebraError::ContainsUnit));
    }

    fn ring_strategy() -> impl Strategy<Value = ArtinianAlgebra> {
        (1usize..3, 2u32..5).prop_map(|(n, o)| ArtinianAlgebra::truncated_total_degree(n, o).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in ring_strategy(), xs in proptest::collection::vec(-4i64..5, 30)) {
            let d = a.dim();
            let x = elem(&a, &xs[0..d.min(10)]);
            let y = elem(&a, &xs[10..10 + d.min(10)]);
            let z = elem(&a, &xs[20..20 + d.min(10)]);
            prop_assert_eq!(a.mul(&x, &y), a.mul(&y, &x));
            prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
            let mut ysum = y.clone();
            crate::linalg::axpy(&mut ysum, &qi(1), &z);
            let mut rhs = a.mul(&x, &y);
            crate::linalg::axpy(&mut rhs, &qi(1), &a.mul(&x, &z));
            prop_assert_eq!(a.mul(&x, &ysum), rhs);
        }

        #[test]
        fn ideal_elements_are_nilpotent(a in ring_strategy(), xs in proptest::collection::vec(-4i64..5, 10)) {
            let mut x = elem(&a, &xs);
            x.remove(&0);
            let n = a.nilpotency_order() as u32;
            prop_assert!(a.pow(&x, n).is_empty());
        }
    }
}
