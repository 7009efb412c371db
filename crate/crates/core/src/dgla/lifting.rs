//! Order-by-order lifting of first-order Maurer-Cartan elements over
//! `Q[t]/(t^n)`.

use super::nilpotent::NilpotentElement;
use super::structure::{Dgla, LieStructure};
use crate::coefficients::ArtinianAlgebra;
use crate::linalg::{axpy, is_zero_vec, SparseVec};
use crate::scalar::Scalar;

/// Either a lift `x = Σ x_k t^k` or the first order where the quadratic
/// defect is not exact.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftOutcome<S> {
    Lifted(NilpotentElement<usize, S>),
    Obstructed {
        /// Power of `t` at which no `x_k` exists.
        order: usize,
        /// `−½ Σ_{i+j=k} [x_i, x_j]`, a cocycle in `L²`.
        defect: SparseVec<usize, S>,
        /// Coordinates of its class in `H²(L)` with respect to the
        /// cohomology representatives of [`Dgla::complex`].
        class: SparseVec<usize, S>,
    },
}

impl<S: Scalar> LiftOutcome<S> {
    pub fn is_lifted(&self) -> bool {
        matches!(self, LiftOutcome::Lifted(_))
    }
}

/// Errors of [`lift_order_by_order`].
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("first-order element is not closed")]
    NotClosed,
    #[error("first-order element has a component outside degree 1")]
    WrongDegree,
    #[error("target ring must be Q[t]/(t^n)")]
    NotTruncatedPoly,
}

/// Solves `d x_k = −½ Σ_{i+j=k, i,j≥1} [x_i, x_j]` for `k = 2, …, n−1`
/// starting from the closed element `x1 ∈ L¹`.
pub fn lift_order_by_order<S: Scalar>(
    l: &Dgla<S>,
    x1: &SparseVec<usize, S>,
    target: &ArtinianAlgebra,
) -> Result<LiftOutcome<S>, LiftError> {
    if target.generators().len() != 1 {
        return Err(LiftError::NotTruncatedPoly);
    }
    let n = target.nilpotency_order();
    if x1.keys().any(|k| l.degree(k) != 1) {
        return Err(LiftError::WrongDegree);
    }
    if !is_zero_vec(&l.d(x1)) {
        return Err(LiftError::NotClosed);
    }
    let (cols1, d1) = l.complex.differential.block(1);
    let mut xs: Vec<SparseVec<usize, S>> = vec![SparseVec::new(), x1.clone()];
    for k in 2..n {
        let mut defect = SparseVec::new();
        for i in 1..k {
            let br = l.br(&xs[i], &xs[k - i]);
            axpy(&mut defect, &S::ratio(-1, 2), &br);
        }
        match d1.solve(&defect) {
            Some(sol) => {
                xs.push(sol.into_iter().map(|(j, c)| (cols1[j], c)).collect());
            }
            None => {
                let class = class_in_h2(l, &defect);
                return Ok(LiftOutcome::Obstructed { order: k, defect, class });
            }
        }
    }
    let terms = xs.iter().enumerate().skip(1).flat_map(|(k, x)| {
        let m = target.index_of(&[k as u32]).expect("power below nilpotency order");
        x.iter().map(move |(b, c)| (*b, m, c.clone()))
    });
    Ok(LiftOutcome::Lifted(NilpotentElement::from_terms(1, terms)))
}

/// Coordinates of a degree-2 cocycle in the basis of cohomology
/// representatives: solve `v = Σ c_i r_i + d(w)`.
fn class_in_h2<S: Scalar>(l: &Dgla<S>, v: &SparseVec<usize, S>) -> SparseVec<usize, S> {
    let reps = match l.complex.cohomology() {
        Ok(h) => h.get(&2).map(|g| g.representatives.clone()).unwrap_or_default(),
        Err(_) => return SparseVec::new(),
    };
    let (_, d1) = l.complex.differential.block(1);
    let n = l.dim();
    let mut cols: Vec<SparseVec<usize, S>> = reps.clone();
    cols.extend(d1.cols.iter().cloned());
    let m = crate::linalg::SparseMatrix::from_cols(n, cols);
    match m.solve(v) {
        Some(sol) => sol.into_iter().filter(|(j, _)| *j < reps.len()).collect(),
        None => SparseVec::new(),
    }
}
