//! Maurer-Cartan residual, gauge action and BCH product on `L ⊗ m_A`.

use std::fmt::Debug;

use thiserror::Error;

use super::structure::LieStructure;
use crate::coefficients::ArtinianAlgebra;
use crate::linalg::{add_term, axpy, is_zero_vec, scaled, SparseVec};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NilpotentError {
    #[error("expected an element of degree {expected}, got degree {found}")]
    WrongDegree { expected: i32, found: i32 },
    #[error("basis element {0} has degree {1}, element declares degree {2}")]
    InhomogeneousTerm(String, i32, i32),
    #[error("coefficient on the unit of the base ring: element is not in L ⊗ m_A")]
    UnitComponent,
    #[error("base ring must be the dual numbers")]
    NotDualNumbers,
}

/// A homogeneous element of `L ⊗ m_A`; keys are (basis of `L`, full-basis
/// index of `A`, never 0).
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentElement<K, S> {
    pub degree: i32,
    pub coeffs: SparseVec<(K, usize), S>,
}

impl<K: Ord + Clone, S: Scalar> NilpotentElement<K, S> {
    pub fn zero(degree: i32) -> Self {
        Self { degree, coeffs: SparseVec::new() }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    /// `Σ c · (l ⊗ m)`.
    pub fn from_terms(degree: i32, terms: impl IntoIterator<Item = (K, usize, S)>) -> Self {
        let mut coeffs = SparseVec::new();
        for (k, m, c) in terms {
            add_term(&mut coeffs, (k, m), c);
        }
        Self { degree, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        axpy(&mut coeffs, &S::one(), &other.coeffs);
        Self { degree: self.degree, coeffs }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { degree: self.degree, coeffs: scaled(c, &self.coeffs) }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The part of the element with base monomial `m`.
    pub fn component(&self, m: usize) -> SparseVec<K, S> {
        self.coeffs.iter().filter(|((_, j), _)| *j == m).map(|((k, _), c)| (k.clone(), c.clone())).collect()
    }

    /// Drops all base monomials of total degree `>= order`: the image in
    /// `A / m_A^order` for monomial algebras.
    pub fn truncate(&self, ring: &ArtinianAlgebra, order: u32) -> Self {
        let coeffs = self.coeffs.iter().filter(|((_, m), _)| ring.degree_of(*m) < order).map(|(k, c)| (k.clone(), c.clone())).collect();
        Self { degree: self.degree, coeffs }
    }
}

/// A DGLA paired with a base ring: the setting of `MC_L(A)` and `Def_L(A)`.
pub struct Deformations<'a, L> {
    pub lie: &'a L,
    pub ring: &'a ArtinianAlgebra,
}

impl<'a, L> Deformations<'a, L> {
    pub fn new(lie: &'a L, ring: &'a ArtinianAlgebra) -> Self {
        Self { lie, ring }
    }

    /// Number of terms after which every bracket/product series vanishes.
    pub fn series_bound(&self) -> usize {
        self.ring.nilpotency_order()
    }

    pub fn validate<S: Scalar>(&self, x: &NilpotentElement<L::Key, S>) -> Result<(), NilpotentError>
    where
        L: LieStructure<S>,
    {
        for (k, m) in x.coeffs.keys() {
            if *m == 0 {
                return Err(NilpotentError::UnitComponent);
            }
            let d = self.lie.degree(k);
            if d != x.degree {
                return Err(NilpotentError::InhomogeneousTerm(format!("{k:?}"), d, x.degree));
            }
        }
        Ok(())
    }

    fn expect_degree<S: Scalar>(&self, x: &NilpotentElement<L::Key, S>, d: i32) -> Result<(), NilpotentError>
    where
        L: LieStructure<S>,
    {
        if x.degree != d {
            return Err(NilpotentError::WrongDegree { expected: d, found: x.degree });
        }
        self.validate(x)
    }

    pub fn d<S: Scalar>(&self, x: &NilpotentElement<L::Key, S>) -> NilpotentElement<L::Key, S>
    where
        L: LieStructure<S>,
    {
        let mut coeffs = SparseVec::new();
        for ((k, m), c) in &x.coeffs {
            for (k2, c2) in self.lie.differential(k) {
                add_term(&mut coeffs, (k2, *m), c.clone() * c2);
            }
        }
        NilpotentElement { degree: x.degree + 1, coeffs }
    }

    /// `[l⊗a, m⊗b] = [l,m]⊗ab`.
    pub fn bracket<S: Scalar>(
        &self,
        x: &NilpotentElement<L::Key, S>,
        y: &NilpotentElement<L::Key, S>,
    ) -> NilpotentElement<L::Key, S>
    where
        L: LieStructure<S>,
    {
        let mut coeffs = SparseVec::new();
        for ((k1, m1), c1) in &x.coeffs {
            for ((k2, m2), c2) in &y.coeffs {
                let Some(m) = self.ring.mul_basis(*m1, *m2) else { continue };
                let c = c1.clone() * c2.clone();
                for (k, cb) in self.lie.bracket(k1, k2) {
                    add_term(&mut coeffs, (k, m), c.clone() * cb);
                }
            }
        }
        NilpotentElement { degree: x.degree + y.degree, coeffs }
    }

    /// `dx + ½[x,x]`; zero exactly on `MC_L(A)`.
    pub fn mc_residual<S: Scalar>(&self, x: &NilpotentElement<L::Key, S>) -> Result<NilpotentElement<L::Key, S>, NilpotentError>
    where
        L: LieStructure<S>,
    {
        self.expect_degree(x, 1)?;
        let mut r = self.d(x);
        let xx = self.bracket(x, x);
        axpy(&mut r.coeffs, &S::ratio(1, 2), &xx.coeffs);
        Ok(r)
    }

    pub fn is_mc<S: Scalar>(&self, x: &NilpotentElement<L::Key, S>) -> Result<bool, NilpotentError>
    where
        L: LieStructure<S>,
    {
        Ok(self.mc_residual(x)?.is_zero())
    }

    /// The terms `ad_a^n/(n+1)! ([a,x] − da)` for `n = 0, 1, …` up to and
    /// including the first zero term.
    pub fn gauge_terms<S: Scalar>(
        &self,
        a: &NilpotentElement<L::Key, S>,
        x: &NilpotentElement<L::Key, S>,
    ) -> Vec<NilpotentElement<L::Key, S>>
    where
        L: LieStructure<S>,
    {
        let mut cur = self.bracket(a, x).sub(&self.d(a));
        let mut terms = Vec::new();
        let mut n = 0i64;
        loop {
            let term = cur.scale(&(S::one() / factorial::<S>(n + 1)));
            let stop = term.is_zero();
            terms.push(term);
            if stop {
                break;
            }
            cur = self.bracket(a, &cur);
            n += 1;
        }
        terms
    }

    /// `e^a * x = x + Σ_{n≥0} ad_a^n/(n+1)! ([a,x] − da)`.
    pub fn gauge_action<S: Scalar>(
        &self,
        a: &NilpotentElement<L::Key, S>,
        x: &NilpotentElement<L::Key, S>,
    ) -> Result<NilpotentElement<L::Key, S>, NilpotentError>
    where
        L: LieStructure<S>,
    {
        self.expect_degree(a, 0)?;
        self.expect_degree(x, 1)?;
        let mut out = x.clone();
        for t in self.gauge_terms(a, x) {
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Baker-Campbell-Hausdorff product `a • b` with `e^a e^b = e^{a•b}`.
    ///
    /// Uses the recursion for the homogeneous parts `Z_n` of total word
    /// length `n`:
    /// `(n+1) Z_{n+1} = ½[X−Y, Z_n] + Σ_{p≥1} B_{2p}/(2p)! Σ_{k_1+…+k_{2p}=n} [Z_{k_1},[…,[Z_{k_{2p}}, X+Y]…]]`.
    /// A word of length `n` lies in `m_A^n`, so the series stops at the
    /// nilpotency order.
    pub fn bch<S: Scalar>(
        &self,
        a: &NilpotentElement<L::Key, S>,
        b: &NilpotentElement<L::Key, S>,
    ) -> Result<NilpotentElement<L::Key, S>, NilpotentError>
    where
        L: LieStructure<S>,
    {
        self.expect_degree(a, 0)?;
        self.expect_degree(b, 0)?;
        Ok(self.bch_parts(a, b).into_iter().fold(NilpotentElement::zero(0), |acc, z| acc.add(&z)))
    }

    /// The homogeneous parts `Z_1, …, Z_{N-1}` of the BCH series, `N` the
    /// nilpotency order.
    pub fn bch_parts<S: Scalar>(
        &self,
        a: &NilpotentElement<L::Key, S>,
        b: &NilpotentElement<L::Key, S>,
    ) -> Vec<NilpotentElement<L::Key, S>>
    where
        L: LieStructure<S>,
    {
        let bound = self.series_bound().max(2);
        let sum = a.add(b);
        let diff = a.sub(b);
        let bern = bernoulli::<S>(bound);
        // z[n-1] = Z_n
        let mut z: Vec<NilpotentElement<L::Key, S>> = vec![sum.clone()];
        for n in 1..bound - 1 {
            let mut next = self.bracket(&diff, &z[n - 1]).scale(&S::ratio(1, 2));
            let mut p = 1;
            while 2 * p <= n {
                let coeff = bern[2 * p].clone() / factorial::<S>(2 * p as i64);
                if !coeff.is_negligible() {
                    let inner = self.nested_compositions(&z, 2 * p, n, &sum);
                    next = next.add(&inner.scale(&coeff));
                }
                p += 1;
            }
            z.push(next.scale(&(S::one() / S::int(n as i64 + 1))));
        }
        z
    }

    /// `Σ_{k_1+…+k_m = n, k_i ≥ 1} [Z_{k_1},[Z_{k_2},…,[Z_{k_m}, w]…]]`.
    fn nested_compositions<S: Scalar>(
        &self,
        z: &[NilpotentElement<L::Key, S>],
        m: usize,
        n: usize,
        w: &NilpotentElement<L::Key, S>,
    ) -> NilpotentElement<L::Key, S>
    where
        L: LieStructure<S>,
    {
        if m == 0 {
            return if n == 0 { w.clone() } else { NilpotentElement::zero(w.degree) };
        }
        let mut acc = NilpotentElement::zero(w.degree);
        // outermost index k_1 ranges so that the remaining m-1 parts are >= 1
        for k in 1..=n.saturating_sub(m - 1) {
            let inner = self.nested_compositions(z, m - 1, n - k, w);
            if !inner.is_zero() {
                acc = acc.add(&self.bracket(&z[k - 1], &inner));
            }
        }
        acc
    }

    /// At first order, `x ~ y` iff `x − y ∈ d(L⁰ ⊗ ε)`.
    pub fn is_first_order_gauge_equivalent<S: Scalar>(
        &self,
        x: &NilpotentElement<L::Key, S>,
        y: &NilpotentElement<L::Key, S>,
        degree_zero_basis: &[L::Key],
    ) -> Result<bool, NilpotentError>
    where
        L: LieStructure<S>,
    {
        if self.ring.ideal_dim() != 1 || self.ring.nilpotency_order() != 2 {
            return Err(NilpotentError::NotDualNumbers);
        }
        self.expect_degree(x, 1)?;
        self.expect_degree(y, 1)?;
        let diff = x.sub(y).component(1);
        if is_zero_vec(&diff) {
            return Ok(true);
        }
        // index the keys in play
        let images: Vec<SparseVec<L::Key, S>> = degree_zero_basis.iter().map(|k| self.lie.differential(k)).collect();
        let mut keys: Vec<L::Key> = diff.keys().cloned().collect();
        for im in &images {
            keys.extend(im.keys().cloned());
        }
        keys.sort();
        keys.dedup();
        let pos = |k: &L::Key| keys.binary_search(k).expect("key indexed");
        let cols = images.iter().map(|im| im.iter().map(|(k, c)| (pos(k), c.clone())).collect()).collect();
        let m = crate::linalg::SparseMatrix::from_cols(keys.len(), cols);
        let rhs = diff.iter().map(|(k, c)| (pos(k), c.clone())).collect();
        Ok(m.solve(&rhs).is_some())
    }
}

pub(crate) fn factorial<S: Scalar>(n: i64) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::int(k))
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = −½`.
pub fn bernoulli<S: Scalar>(n: usize) -> Vec<S> {
    let mut b: Vec<S> = vec![S::one()];
    for m in 1..=n {
        // Σ_{k=0}^{m} C(m+1,k) B_k = 0
        let mut acc = S::zero();
        let mut binom = S::one(); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate() {
            acc = acc + binom.clone() * bk.clone();
            binom = binom * S::int((m + 1 - k) as i64) / S::int(k as i64 + 1);
        }
        b.push(-acc / S::int(m as i64 + 1));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn bernoulli_values() {
        let b = bernoulli::<Q>(8);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert_eq!(b[8], q(-1, 30));
    }
}
