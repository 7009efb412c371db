//! Torus-weight presentation of vector fields on opens of ℙⁿ.
//!
//! A homogeneous field of weight `A` (`ΣA = 0`) is `X^A Σ c_j X_j∂_j`,
//! taken modulo the Euler field. Per weight we keep the basis
//! `X^A X_j∂_j`, `j ≠ drop(A)`, where `drop(A)` is the last index with
//! `A_j ≥ 0`; the dropped direction is rewritten with the Euler relation.
//! A field on `U_I` is regular iff it has a representative whose
//! coefficients have nonnegative exponents outside `I`.

use std::fmt;

use crate::dgla::LieStructure;
use crate::linalg::{add_term, SparseVec};
use crate::scalar::Scalar;
use crate::simplicial::LevelwiseLie;

/// `X^weight X_dir ∂_dir` on the open `U_set`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldKey {
    pub set: Vec<usize>,
    pub weight: Vec<i32>,
    pub dir: usize,
}

impl fmt::Display for FieldKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: String = self.set.iter().map(|i| i.to_string()).collect();
        write!(f, "U{set}:X^{:?}·X{}∂{}", self.weight, self.dir, self.dir)
    }
}

pub fn drop_index(weight: &[i32]) -> usize {
    (0..weight.len()).rev().find(|&j| weight[j] >= 0).expect("weights sum to zero")
}

/// Directions `j` such that `X^A X_j∂_j` is a basis of the regular fields
/// of weight `A` on `U_set`.
pub fn regular_dirs(set: &[usize], weight: &[i32]) -> Vec<usize> {
    let outside: Vec<usize> = (0..weight.len()).filter(|l| !set.contains(l)).collect();
    if outside.iter().any(|&l| weight[l] <= -2) {
        return vec![];
    }
    let poles: Vec<usize> = outside.iter().copied().filter(|&l| weight[l] == -1).collect();
    match poles.len() {
        0 => {
            let d = drop_index(weight);
            (0..weight.len()).filter(|&j| j != d).collect()
        }
        1 => poles,
        _ => vec![],
    }
}

/// All `A ∈ [−w, w]^{n+1}` with `ΣA = total`, in lexicographic order.
pub fn window_weights(n: usize, w: u32, total: i32) -> Vec<Vec<i32>> {
    let w = w as i32;
    let mut out = Vec::new();
    let mut cur = vec![0; n + 1];
    fn rec(pos: usize, sum: i32, w: i32, total: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        let n = cur.len() - 1;
        if pos == n {
            let last = total - sum;
            if last.abs() <= w {
                cur[n] = last;
                out.push(cur.clone());
            }
            return;
        }
        for a in -w..=w {
            cur[pos] = a;
            rec(pos + 1, sum + a, w, total, cur, out);
        }
    }
    rec(0, 0, w, total, &mut cur, &mut out);
    out
}

/// Regular field keys on `U_set` with weights in the window.
pub fn window_keys(n: usize, set: &[usize], w: u32) -> Vec<FieldKey> {
    let mut keys = Vec::new();
    for weight in window_weights(n, w, 0) {
        for dir in regular_dirs(set, &weight) {
            keys.push(FieldKey { set: set.to_vec(), weight: weight.clone(), dir });
        }
    }
    keys
}

/// Adds `c · X^weight X_dir∂_dir` on `U_set`, rewriting the dropped
/// direction through the Euler relation.
pub(crate) fn push_field<S: Scalar>(out: &mut SparseVec<FieldKey, S>, set: &[usize], weight: Vec<i32>, dir: usize, c: S) {
    let d = drop_index(&weight);
    if dir != d {
        add_term(out, FieldKey { set: set.to_vec(), weight, dir }, c);
    } else {
        for j in (0..weight.len()).filter(|&j| j != d) {
            add_term(out, FieldKey { set: set.to_vec(), weight: weight.clone(), dir: j }, -c.clone());
        }
    }
}

/// Inserts each admissible index in gap `k` of `set`.
pub(crate) fn coface_sets(total: usize, set: &[usize], k: usize) -> Vec<Vec<usize>> {
    let lo = if k == 0 { 0 } else { set[k - 1] + 1 };
    let hi = if k == set.len() { total } else { set[k] };
    (lo..hi)
        .map(|m| {
            let mut s = set.to_vec();
            s.insert(k, m);
            s
        })
        .collect()
}

/// The Čech product `∏_I Θ(U_I)` of ℙⁿ as one Lie algebra in degree 0:
/// components on different opens commute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaLie {
    pub n: usize,
}

impl<S: Scalar> LieStructure<S> for ThetaLie {
    type Key = FieldKey;

    fn degree(&self, _k: &FieldKey) -> i32 {
        0
    }

    fn differential(&self, _k: &FieldKey) -> SparseVec<FieldKey, S> {
        SparseVec::new()
    }

    fn bracket(&self, a: &FieldKey, b: &FieldKey) -> SparseVec<FieldKey, S> {
        let mut out = SparseVec::new();
        if a.set != b.set {
            return out;
        }
        // [X^A D_j, X^B D_k] = B_j X^{A+B} D_k − A_k X^{A+B} D_j
        let sum: Vec<i32> = a.weight.iter().zip(&b.weight).map(|(x, y)| x + y).collect();
        let (j, k) = (a.dir, b.dir);
        push_field(&mut out, &a.set, sum.clone(), k, S::int(b.weight[j] as i64));
        push_field(&mut out, &a.set, sum, j, -S::int(a.weight[k] as i64));
        out
    }
}

impl<S: Scalar> LevelwiseLie<S> for ThetaLie {
    fn level(&self, key: &FieldKey) -> usize {
        key.set.len() - 1
    }

    fn coface(&self, k: usize, key: &FieldKey) -> SparseVec<FieldKey, S> {
        coface_sets(self.n + 1, &key.set, k)
            .into_iter()
            .map(|set| (FieldKey { set, ..key.clone() }, S::one()))
            .collect()
    }
}

impl ThetaLie {
    /// `key` in the coordinates of chart `i0`: terms `(c, x-exponents,
    /// variable)` meaning `c · x^e ∂/∂x_variable`, variables indexed by
    /// homogeneous index.
    pub fn chart_form<S: Scalar>(&self, key: &FieldKey, i0: usize) -> Vec<(S, Vec<i32>, usize)> {
        let coords: Vec<usize> = (0..=self.n).filter(|&a| a != i0).collect();
        let base: Vec<i32> = coords.iter().map(|&a| key.weight[a]).collect();
        let term = |var: usize, c: S| {
            let mut e = base.clone();
            let pos = coords.iter().position(|&a| a == var).unwrap();
            e[pos] += 1;
            (c, e, var)
        };
        if key.dir != i0 {
            vec![term(key.dir, S::one())]
        } else {
            coords.iter().map(|&a| term(a, -S::one())).collect()
        }
    }
}

/// `∏_I O(k)(U_I)` as an abelian Lie algebra in degree 0; keys are
/// `(set, weight)` with `Σweight = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineBundleLie {
    pub n: usize,
    pub twist: i32,
}

pub type SectionKey = (Vec<usize>, Vec<i32>);

impl<S: Scalar> LieStructure<S> for LineBundleLie {
    type Key = SectionKey;

    fn degree(&self, _k: &SectionKey) -> i32 {
        0
    }

    fn differential(&self, _k: &SectionKey) -> SparseVec<SectionKey, S> {
        SparseVec::new()
    }

    fn bracket(&self, _a: &SectionKey, _b: &SectionKey) -> SparseVec<SectionKey, S> {
        SparseVec::new()
    }
}

impl<S: Scalar> LevelwiseLie<S> for LineBundleLie {
    fn level(&self, key: &SectionKey) -> usize {
        key.0.len() - 1
    }

    fn coface(&self, k: usize, key: &SectionKey) -> SparseVec<SectionKey, S> {
        coface_sets(self.n + 1, &key.0, k).into_iter().map(|set| ((set, key.1.clone()), S::one())).collect()
    }
}

/// Regular sections of `O(k)` on `U_set` with weights in the window.
pub fn line_bundle_keys(n: usize, twist: i32, set: &[usize], w: u32) -> Vec<SectionKey> {
    window_weights(n, w, twist)
        .into_iter()
        .filter(|a| (0..=n).all(|l| set.contains(&l) || a[l] >= 0))
        .map(|a| (set.to_vec(), a))
        .collect()
}
