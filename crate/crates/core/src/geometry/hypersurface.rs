use super::fields::FieldKey;
use super::poly::{self, Exps, Poly};
use super::GeometryError;
use crate::linalg::{add_term, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// `Z = V(F)` for a homogeneous `F` of degree `d ≥ 1` in `X0..Xn`.
#[derive(Clone, Debug)]
pub struct Hypersurface<S> {
    pub n: usize,
    pub equation: Poly<S>,
    pub degree: u32,
    /// Parameter `t` of the coordinate change `X_i ↦ X_i + t·Σ_{j≠i}(j+1)X_j`
    /// applied because the given equation missed a chart.
    pub coordinate_change: Option<i64>,
}

impl<S: Scalar> Hypersurface<S> {
    pub fn parse(n: usize, text: &str) -> Result<Self, GeometryError> {
        Self::new(n, poly::parse(text, n + 1)?)
    }

    pub fn new(n: usize, equation: Poly<S>) -> Result<Self, GeometryError> {
        if !(1..=2).contains(&n) {
            return Err(GeometryError::UnsupportedDimension(n));
        }
        let d = poly::homogeneous_degree(&equation)?;
        if d < 1 {
            return Err(poly::PolyError::Constant.into());
        }
        let meets_all = |f: &Poly<S>| (0..=n).all(|i| !poly::divisible_by_variable(f, i));
        if meets_all(&equation) {
            return Ok(Self { n, equation, degree: d as u32, coordinate_change: None });
        }
        for t in 1..=16i64 {
            if !change_invertible::<S>(n, t) {
                continue;
            }
            let f = change_coordinates(n, &equation, t);
            if meets_all(&f) {
                return Ok(Self { n, equation: f, degree: d as u32, coordinate_change: Some(t) });
            }
        }
        Err(GeometryError::NoCoordinateChange)
    }

    /// `f_i`, the equation on chart `i` (exponent of `X_i` set to zero).
    pub fn dehomogenize(&self, i: usize) -> Poly<S> {
        let mut out = Poly::new();
        for (e, c) in &self.equation {
            let mut e = e.clone();
            e[i] = 0;
            add_term(&mut out, e, c.clone());
        }
        out
    }

    /// `θ(F)` for a field key, as a Laurent polynomial.
    pub fn apply_field(&self, key: &FieldKey) -> Poly<S> {
        apply_field(key, &self.equation)
    }

    /// Remainder of `X^M p` modulo `F`, `M` clearing the poles of `p`:
    /// zero iff `p ∈ (F)` on every open where `p` is regular. Exact for
    /// `F` coprime to every `X_i`.
    pub fn residual(&self, p: &Poly<S>) -> Poly<S> {
        poly::remainder(&poly::shift(p, &clearing_shift(self.n, [p])), &self.equation)
    }

    /// Residual of `θ(F)`; zero iff `θ` is tangent to `Z` on its open.
    pub fn log_residual(&self, v: &SparseVec<FieldKey, S>) -> Poly<S> {
        self.residual(&apply_vec(v, &self.equation))
    }

    pub fn is_logarithmic(&self, v: &SparseVec<FieldKey, S>) -> bool {
        self.log_residual(v).is_empty()
    }

    /// Matrix of the linear map `p ↦ residual(p)` on the given
    /// polynomials, with one common clearing shift.
    pub fn residual_columns(&self, polys: &[Poly<S>]) -> SparseMatrix<S> {
        let shift = clearing_shift(self.n, polys);
        let mut rows: std::collections::BTreeMap<Exps, usize> = Default::default();
        let mut cols = Vec::new();
        for p in polys {
            let r = poly::remainder(&poly::shift(p, &shift), &self.equation);
            let mut col = SparseVec::new();
            for (e, c) in r {
                let next = rows.len();
                let i = *rows.entry(e).or_insert(next);
                col.insert(i, c);
            }
            cols.push(col);
        }
        SparseMatrix::from_cols(rows.len(), cols)
    }

    /// Residual matrix of `θ ↦ θ(F)` on the given keys.
    pub fn residual_matrix(&self, keys: &[FieldKey]) -> SparseMatrix<S> {
        let polys: Vec<Poly<S>> = keys.iter().map(|k| self.apply_field(k)).collect();
        self.residual_columns(&polys)
    }
}

/// `X^M` with `M` the largest pole order of each variable.
fn clearing_shift<'a, S: 'a>(n: usize, polys: impl IntoIterator<Item = &'a Poly<S>>) -> Vec<i32> {
    let mut shift = vec![0; n + 1];
    for p in polys {
        for e in p.keys() {
            for (s, a) in shift.iter_mut().zip(e) {
                *s = (*s).max(-a);
            }
        }
    }
    shift
}

/// `X^A X_j ∂_j p`.
pub fn apply_field<S: Scalar>(key: &FieldKey, p: &Poly<S>) -> Poly<S> {
    let mut out = Poly::new();
    for (e, c) in p {
        let m = e[key.dir];
        if m == 0 {
            continue;
        }
        let t: Exps = e.iter().zip(&key.weight).map(|(x, y)| x + y).collect();
        add_term(&mut out, t, c.clone() * S::int(m as i64));
    }
    out
}

/// A field applied to a Laurent polynomial.
pub fn apply_vec<S: Scalar>(v: &SparseVec<FieldKey, S>, p: &Poly<S>) -> Poly<S> {
    let mut out = Poly::new();
    for (k, c) in v {
        for (e, x) in apply_field(k, p) {
            add_term(&mut out, e, c.clone() * x);
        }
    }
    out
}

fn change_matrix<S: Scalar>(n: usize, t: i64) -> Vec<Vec<S>> {
    (0..=n)
        .map(|i| (0..=n).map(|j| if i == j { S::one() } else { S::int(t * (j as i64 + 1)) }).collect())
        .collect()
}

fn change_invertible<S: Scalar>(n: usize, t: i64) -> bool {
    SparseMatrix::from_dense(&change_matrix::<S>(n, t)).rank() == n + 1
}

fn change_coordinates<S: Scalar>(n: usize, f: &Poly<S>, t: i64) -> Poly<S> {
    let m = change_matrix::<S>(n, t);
    let images: Vec<Poly<S>> = (0..=n)
        .map(|i| {
            let mut p = Poly::new();
            for (j, c) in m[i].iter().enumerate() {
                let mut e = vec![0; n + 1];
                e[j] = 1;
                add_term(&mut p, e, c.clone());
            }
            p
        })
        .collect();
    let mut out = Poly::new();
    for (e, c) in f {
        let mut term = poly::monomial(vec![0; n + 1], c.clone());
        for (i, &k) in e.iter().enumerate() {
            term = poly::mul(&term, &poly::pow(&images[i], k as u32, n + 1));
        }
        out = poly::add(&out, &term);
    }
    out
}
