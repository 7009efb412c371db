//! Polynomial differential forms on the standard simplices.
//!
//! A form on `Δ^n` is stored in canonical coordinates: `t_0` and `dt_0` are
//! eliminated with `t_0 = 1 − Σ t_i`, `dt_0 = −Σ dt_i`, so a monomial is
//! `t_1^{a_1} ⋯ t_n^{a_n} dt_S` with `S ⊆ {1..n}` stored as a bitmask in
//! ascending order.
//!
//! Finite models. [`apl_basis`] enumerates all monomials whose coefficient
//! has degree at most `p`. That space is closed under `d` and faces but is
//! not acyclic (`t^p dt` on `Δ¹` is closed and not exact). The Thom-Whitney
//! constructions instead use [`AplSpace::trimmed`], the span of
//! `λ^α φ_σ` with `|α| = p − 1` and `φ_σ` the Whitney forms, which is
//! acyclic, closed under `d` and faces, and extendable from the boundary.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{add_term, axpy, Echelon, SparseVec};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AplError {
    #[error("face index {k} out of range for a {n}-simplex")]
    FaceOutOfRange { k: usize, n: usize },
    #[error("the 0-simplex has no faces")]
    NoFaces,
    #[error("degree cap must be at least 1 on simplices of positive dimension")]
    CapTooSmall,
}

/// `t^a dt_S` on `Δ^n` in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AplMonomial {
    pub exps: Vec<u32>,
    /// Bit `i − 1` set iff `dt_i` occurs.
    pub dt: u32,
}

impl AplMonomial {
    pub fn one(n: usize) -> Self {
        Self { exps: vec![0; n], dt: 0 }
    }

    pub fn simplex_dim(&self) -> usize {
        self.exps.len()
    }

    pub fn form_degree(&self) -> usize {
        self.dt.count_ones() as usize
    }

    /// Degree of the polynomial coefficient.
    pub fn poly_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        for (i, e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("t{}", i + 1)),
                _ => parts.push(format!("t{}^{e}", i + 1)),
            }
        }
        for i in 0..self.exps.len() {
            if self.dt & (1 << i) != 0 {
                parts.push(format!("dt{}", i + 1));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("·")
        }
    }
}

/// Product of monomials with the sign from reordering the `dt`s; `None` if
/// a `dt` repeats.
pub fn mul_monomials(a: &AplMonomial, b: &AplMonomial) -> Option<(AplMonomial, bool)> {
    if a.dt & b.dt != 0 {
        return None;
    }
    // each dt_j in b must pass every dt_i in a with i > j
    let mut swaps = 0;
    let mut bits = b.dt;
    while bits != 0 {
        let j = bits.trailing_zeros();
        swaps += (a.dt >> (j + 1)).count_ones();
        bits &= bits - 1;
    }
    let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
    Some((AplMonomial { exps, dt: a.dt | b.dt }, swaps % 2 == 1))
}

/// A polynomial form on one simplex.
pub type AplForm<S> = SparseVec<AplMonomial, S>;

pub fn constant<S: Scalar>(n: usize, c: S) -> AplForm<S> {
    let mut f = AplForm::new();
    add_term(&mut f, AplMonomial::one(n), c);
    f
}

/// The barycentric coordinate `t_i`, `0 ≤ i ≤ n`.
pub fn t<S: Scalar>(n: usize, i: usize) -> AplForm<S> {
    if i == 0 {
        let mut f = constant(n, S::one());
        for j in 1..=n {
            let mut m = AplMonomial::one(n);
            m.exps[j - 1] = 1;
            add_term(&mut f, m, -S::one());
        }
        f
    } else {
        let mut m = AplMonomial::one(n);
        m.exps[i - 1] = 1;
        let mut f = AplForm::new();
        f.insert(m, S::one());
        f
    }
}

/// `dt_i`, `0 ≤ i ≤ n`.
pub fn dt<S: Scalar>(n: usize, i: usize) -> AplForm<S> {
    let mut f = AplForm::new();
    if i == 0 {
        for j in 1..=n {
            add_term(&mut f, AplMonomial { exps: vec![0; n], dt: 1 << (j - 1) }, -S::one());
        }
    } else {
        f.insert(AplMonomial { exps: vec![0; n], dt: 1 << (i - 1) }, S::one());
    }
    f
}

pub fn mul<S: Scalar>(a: &AplForm<S>, b: &AplForm<S>) -> AplForm<S> {
    let mut out = AplForm::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((m, neg)) = mul_monomials(ma, mb) {
                let c = ca.clone() * cb.clone();
                add_term(&mut out, m, if neg { -c } else { c });
            }
        }
    }
    out
}

/// de Rham differential of a monomial.
pub fn d_monomial<S: Scalar>(m: &AplMonomial) -> AplForm<S> {
    let mut out = AplForm::new();
    for i in 0..m.exps.len() {
        let e = m.exps[i];
        if e == 0 || m.dt & (1 << i) != 0 {
            continue;
        }
        let mut exps = m.exps.clone();
        exps[i] -= 1;
        // dt_i moves to the front of dt_S past the dt_j with j < i
        let before = (m.dt & ((1 << i) - 1)).count_ones();
        let c = S::int(e as i64);
        add_term(&mut out, AplMonomial { exps, dt: m.dt | (1 << i) }, if before % 2 == 1 { -c } else { c });
    }
    out
}

pub fn d<S: Scalar>(a: &AplForm<S>) -> AplForm<S> {
    let mut out = AplForm::new();
    for (m, c) in a {
        axpy(&mut out, c, &d_monomial(m));
    }
    out
}

/// Pullback along the `k`-th coface `Δ^{n−1} → Δ^n`: `t_i ↦ t_i` for
/// `i < k`, `t_k ↦ 0`, `t_i ↦ t_{i−1}` for `i > k`, extended to `dt` by
/// commuting with `d`.
pub fn face<S: Scalar>(k: usize, n: usize, w: &AplForm<S>) -> Result<AplForm<S>, AplError> {
    if n == 0 {
        return Err(AplError::NoFaces);
    }
    if k > n {
        return Err(AplError::FaceOutOfRange { k, n });
    }
    // images of the canonical generators t_1..t_n and dt_1..dt_n
    let img = |i: usize| -> (AplForm<S>, AplForm<S>) {
        if i == k {
            (AplForm::new(), AplForm::new())
        } else if i < k {
            (t(n - 1, i), dt(n - 1, i))
        } else {
            (t(n - 1, i - 1), dt(n - 1, i - 1))
        }
    };
    let gens: Vec<(AplForm<S>, AplForm<S>)> = (1..=n).map(img).collect();
    let mut out = AplForm::new();
    for (m, c) in w {
        let mut term = constant(n - 1, c.clone());
        for (i, e) in m.exps.iter().enumerate() {
            for _ in 0..*e {
                term = mul(&term, &gens[i].0);
            }
        }
        for i in 0..n {
            if m.dt & (1 << i) != 0 {
                term = mul(&term, &gens[i].1);
            }
        }
        axpy(&mut out, &S::one(), &term);
    }
    Ok(out)
}

/// All canonical monomials on `Δ^n` with coefficient degree `≤ p`, ordered
/// by form degree, then coefficient degree, then exponents.
pub fn apl_basis(n: usize, p: u32) -> Vec<AplMonomial> {
    let mut exps_list = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[v] = e;
            rec(v + 1, left - e, cur, out);
        }
        cur[v] = 0;
    }
    rec(0, p, &mut cur, &mut exps_list);
    let mut out: Vec<AplMonomial> = Vec::new();
    for dt in 0u32..(1 << n) {
        for e in &exps_list {
            out.push(AplMonomial { exps: e.clone(), dt });
        }
    }
    out.sort_by(|a, b| {
        (a.form_degree(), a.poly_degree(), b.exps.clone(), a.dt).cmp(&(b.form_degree(), b.poly_degree(), a.exps.clone(), b.dt))
    });
    out
}

/// Whitney form `φ_σ = k! Σ_j (−1)^j t_{σ_j} dt_{σ_0} ⋯ \hat{dt_{σ_j}} ⋯ dt_{σ_k}`
/// without the `k!` normalisation.
pub fn whitney<S: Scalar>(n: usize, sigma: &[usize]) -> AplForm<S> {
    let mut out = AplForm::new();
    for j in 0..sigma.len() {
        let mut term = t::<S>(n, sigma[j]);
        for (l, &s) in sigma.iter().enumerate() {
            if l != j {
                term = mul(&term, &dt(n, s));
            }
        }
        let c = if j % 2 == 0 { S::one() } else { -S::one() };
        axpy(&mut out, &c, &term);
    }
    out
}

/// A finite subcomplex of the forms on `Δ^n` with a fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AplSpace<S> {
    pub n: usize,
    pub cap: u32,
    /// Basis forms, grouped by ascending form degree.
    pub basis: Vec<AplForm<S>>,
    pub degrees: Vec<usize>,
}

impl<S: Scalar> AplSpace<S> {
    /// The trimmed space spanned by `λ^α φ_σ`, `|α| = cap − 1`, in all form
    /// degrees. On `Δ^0` this is the constants for every cap.
    pub fn trimmed(n: usize, cap: u32) -> Result<Self, AplError> {
        if n == 0 {
            return Ok(Self { n, cap, basis: vec![constant(0, S::one())], degrees: vec![0] });
        }
        if cap == 0 {
            return Err(AplError::CapTooSmall);
        }
        let lambdas: Vec<Vec<u32>> = homogeneous_exponents(n + 1, cap - 1);
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        for k in 0..=n {
            let mut ech = Echelon::new();
            let mut forms = Vec::new();
            let mut index: BTreeMap<AplMonomial, usize> = BTreeMap::new();
            let mut sigma_list = Vec::new();
            subsets(n + 1, k + 1, &mut Vec::new(), 0, &mut sigma_list);
            for alpha in &lambdas {
                let mut pre = constant::<S>(n, S::one());
                for (i, e) in alpha.iter().enumerate() {
                    for _ in 0..*e {
                        pre = mul(&pre, &t(n, i));
                    }
                }
                for sigma in &sigma_list {
                    let f = mul(&pre, &whitney(n, sigma));
                    let v: SparseVec<usize, S> = f
                        .iter()
                        .map(|(m, c)| {
                            let next = index.len();
                            (*index.entry(m.clone()).or_insert(next), c.clone())
                        })
                        .collect();
                    if ech.insert(v) {
                        forms.push(f);
                    }
                }
            }
            degrees.extend(std::iter::repeat(k).take(forms.len()));
            basis.extend(forms);
        }
        Ok(Self { n, cap, basis, degrees })
    }

    /// All monomials of coefficient degree `≤ cap`, as in [`apl_basis`].
    pub fn full(n: usize, cap: u32) -> Self {
        let mons = apl_basis(n, cap);
        let degrees = mons.iter().map(|m| m.form_degree()).collect();
        let basis = mons
            .into_iter()
            .map(|m| {
                let mut f = AplForm::new();
                f.insert(m, S::one());
                f
            })
            .collect();
        Self { n, cap, basis, degrees }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 1];
        for d in &self.degrees {
            out[*d] += 1;
        }
        out
    }
}

fn homogeneous_exponents(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v + 1 == cur.len() {
            cur[v] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[v] = e;
            rec(v + 1, left - e, cur, out);
        }
    }
    let mut cur = vec![0; nvars];
    rec(0, deg, &mut cur, &mut out);
    out
}

fn subsets(n: usize, k: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, cur, i + 1, out);
        cur.pop();
    }
}
