//! Matrix oracle for BCH: `log(exp(A)·exp(B))` computed with matrices
//! whose entries lie in the maximal ideal of an Artinian algebra.
#![allow(dead_code)]

use deform::dgla::{Dgla, NilpotentElement};
use deform::graded::{CochainComplex, GradedVectorSpace};
use deform::linalg::{add_term, axpy, scaled, SparseVec};
use deform::{q, qi, ArtinianAlgebra, Q};

pub type El = SparseVec<usize, Q>;

/// Square matrices with entries in a commutative Artinian algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AMat {
    pub n: usize,
    pub e: Vec<El>,
}

impl AMat {
    pub fn zero(n: usize) -> Self {
        Self { n, e: vec![El::new(); n * n] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.e[i * n + i].insert(0, qi(1));
        }
        m
    }
    pub fn get(&self, i: usize, j: usize) -> &El {
        &self.e[i * self.n + j]
    }
    pub fn add_scaled(&self, c: &Q, o: &AMat) -> AMat {
        let mut m = self.clone();
        for (x, y) in m.e.iter_mut().zip(&o.e) {
            axpy(x, c, y);
        }
        m
    }
    pub fn mul(&self, o: &AMat, ring: &ArtinianAlgebra) -> AMat {
        let n = self.n;
        let mut m = AMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = El::new();
                for k in 0..n {
                    axpy(&mut acc, &qi(1), &ring.mul(self.get(i, k), o.get(k, j)));
                }
                m.e[i * n + j] = acc;
            }
        }
        m
    }
    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_empty())
    }
    /// `Σ X^k / k!`; finite because `X` has entries in `m_A`.
    pub fn exp(&self, ring: &ArtinianAlgebra) -> AMat {
        let mut out = AMat::identity(self.n);
        let mut pow = AMat::identity(self.n);
        let mut k = 0;
        loop {
            k += 1;
            pow = pow.mul(self, ring);
            pow = AMat { n: pow.n, e: pow.e.iter().map(|x| scaled(&q(1, k), x)).collect() };
            if pow.is_zero() {
                return out;
            }
            out = out.add_scaled(&qi(1), &pow);
        }
    }
    /// `log(I + N) = Σ (−1)^{k+1} N^k / k`.
    pub fn log(&self, ring: &ArtinianAlgebra) -> AMat {
        let nm = self.add_scaled(&qi(-1), &AMat::identity(self.n));
        let mut out = AMat::zero(self.n);
        let mut pow = AMat::identity(self.n);
        let mut k = 0i64;
        loop {
            k += 1;
            pow = pow.mul(&nm, ring);
            if pow.is_zero() {
                return out;
            }
            let c = if k % 2 == 1 { q(1, k) } else { q(-1, k) };
            out = out.add_scaled(&c, &pow);
        }
    }
}

/// A faithful representation: basis index → (row, col, coefficient) terms.
pub struct Rep {
    pub n: usize,
    pub basis: Vec<Vec<(usize, usize, i64)>>,
}

impl Rep {
    pub fn heisenberg() -> Self {
        // e = E01, f = E12, z = E02
        Rep { n: 3, basis: vec![vec![(0, 1, 1)], vec![(1, 2, 1)], vec![(0, 2, 1)]] }
    }
    pub fn sl2() -> Self {
        // e = E01, f = E10, h = E00 − E11
        Rep { n: 2, basis: vec![vec![(0, 1, 1)], vec![(1, 0, 1)], vec![(0, 0, 1), (1, 1, -1)]] }
    }
    /// `gl_n` with basis `E_ij` at index `n·i + j`.
    pub fn gl(n: usize) -> Self {
        Rep { n, basis: (0..n * n).map(|k| vec![(k / n, k % n, 1)]).collect() }
    }

    pub fn to_matrix(&self, x: &NilpotentElement<usize, Q>) -> AMat {
        let mut m = AMat::zero(self.n);
        for ((k, mono), c) in &x.coeffs {
            for (i, j, s) in &self.basis[*k] {
                add_term(&mut m.e[i * self.n + j], *mono, c.clone() * qi(*s));
            }
        }
        m
    }
}

pub fn bch_oracle(rep: &Rep, ring: &ArtinianAlgebra, a: &NilpotentElement<usize, Q>, b: &NilpotentElement<usize, Q>) -> AMat {
    let ea = rep.to_matrix(a).exp(ring);
    let eb = rep.to_matrix(b).exp(ring);
    ea.mul(&eb, ring).log(ring)
}


/// `gl_n` in degree 0: `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj`.
pub fn gl(n: usize) -> Dgla<Q> {
    let space = GradedVectorSpace::concentrated("E", 0, n * n);
    let mut brackets = Vec::new();
    for a in 0..n * n {
        for b in 0..n * n {
            let (i, j, k, l) = (a / n, a % n, b / n, b % n);
            let mut v = SparseVec::new();
            if j == k {
                add_term(&mut v, i * n + l, qi(1));
            }
            if l == i {
                add_term(&mut v, k * n + j, qi(-1));
            }
            brackets.push(((a, b), v));
        }
    }
    Dgla::new(CochainComplex::zero_differential(space), brackets)
}
