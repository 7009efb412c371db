//! Locally trivial embedded deformations of a hypersurface `Z ⊂ ℙⁿ` through
//! logarithmic gluing data: fields `a_i ∈ Θ(U_i) ⊗ m_A` with
//! `bch(−a_i, a_j) ∈ Θ(−log Z)(U_ij) ⊗ m_A`, modulo `a_i ↦ bch(a_i, −b_i)`
//! with `b_i` logarithmic.

mod oracle;

use std::collections::BTreeMap;

use thiserror::Error;

pub use oracle::{equation_lift, normal_sheaf_h0, normal_sheaf_h0_at, EquationLift};

use crate::bisimplicial::BisimplicialError;
use crate::coefficients::ArtinianAlgebra;
use crate::dgla::{Deformations, NilpotentElement, NilpotentError};
use crate::geometry::poly::Poly;
use crate::geometry::{
    chi_bisemicosimplicial, log_theta_sections, regular_dirs, window_keys, Cover, FieldKey, GeometryError,
    Hypersurface, ThetaLie,
};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::scalar::Scalar;
use crate::simplicial::{def_chi_tangent, h1_sc_tangent, SimplicialError};

#[derive(Debug, Error)]
pub enum HilbError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Bisimplicial(#[from] BisimplicialError),
    #[error(transparent)]
    Nilpotent(#[from] NilpotentError),
    #[error("malformed gluing datum: {0}")]
    BadDatum(String),
}

/// Fields `a_i ∈ Θ(U_i) ⊗ m_A`, one per chart; keys carry `set = [i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingDatum<S> {
    pub ring: ArtinianAlgebra,
    pub fields: Vec<NilpotentElement<FieldKey, S>>,
}

impl<S: Scalar> GluingDatum<S> {
    pub fn zero(ring: ArtinianAlgebra, charts: usize) -> Self {
        Self { ring, fields: vec![NilpotentElement::zero(0); charts] }
    }

    /// `a_i ↦ bch(a_i, −b_i)`, i.e. `e^{a_i} = e^{a′_i} e^{b_i}`.
    pub fn act(&self, cover: &Cover, b: &[NilpotentElement<FieldKey, S>]) -> Result<Self, HilbError> {
        let lie = ThetaLie { n: cover.n };
        let def = Deformations::new(&lie, &self.ring);
        let fields =
            self.fields.iter().zip(b).map(|(a, b)| def.bch(a, &b.neg())).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { ring: self.ring.clone(), fields })
    }
}

/// `v` restricted to `U_set` (relabelling only: weights do not change).
pub fn restrict<S: Scalar>(v: &NilpotentElement<FieldKey, S>, set: &[usize]) -> NilpotentElement<FieldKey, S> {
    NilpotentElement {
        degree: v.degree,
        coeffs: v.coeffs.iter().map(|((k, m), c)| ((FieldKey { set: set.to_vec(), ..k.clone() }, *m), c.clone())).collect(),
    }
}

/// A pair whose transition is not logarithmic.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingFailure<S> {
    pub i: usize,
    pub j: usize,
    /// Index of the offending basis monomial of `A`.
    pub monomial: usize,
    /// Component of `bch(−a_i, a_j)` at that monomial.
    pub field: SparseVec<FieldKey, S>,
    /// `θ(F)` reduced modulo `F`.
    pub residual: Poly<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GluingReport<S> {
    pub failures: Vec<GluingFailure<S>>,
    /// On three charts: `bch(bch(d_01, d_12), −d_02) = 0` on `U_012`.
    pub cocycle: Option<bool>,
}

impl<S> GluingReport<S> {
    pub fn valid(&self) -> bool {
        self.failures.is_empty() && self.cocycle != Some(false)
    }
}

fn validate<S: Scalar>(datum: &GluingDatum<S>, cover: &Cover, w: u32) -> Result<(), HilbError> {
    if datum.fields.len() != cover.len() {
        return Err(HilbError::BadDatum(format!("{} fields for {} charts", datum.fields.len(), cover.len())));
    }
    let lie = ThetaLie { n: cover.n };
    let def = Deformations::new(&lie, &datum.ring);
    for (i, a) in datum.fields.iter().enumerate() {
        def.validate(a)?;
        if a.degree != 0 {
            return Err(HilbError::BadDatum(format!("a_{i} has degree {}", a.degree)));
        }
        for (k, _) in a.coeffs.keys() {
            if k.set != [i] || k.weight.len() != cover.n + 1 || !regular_dirs(&k.set, &k.weight).contains(&k.dir) {
                return Err(HilbError::BadDatum(format!("{k} is not a field on U{i}")));
            }
            if k.weight.iter().any(|a| a.unsigned_abs() > w) {
                return Err(HilbError::BadDatum(format!("{k} lies outside window {w}")));
            }
        }
    }
    Ok(())
}

/// Decides `bch(−a_i, a_j) ∈ Θ(−log Z)(U_ij) ⊗ m_A` on every overlap, per
/// basis monomial of `m_A`, and on ℙ² verifies the triple cocycle
/// identity that these memberships imply.
pub fn is_gluing_datum<S: Scalar>(
    datum: &GluingDatum<S>,
    z: &Hypersurface<S>,
    cover: &Cover,
    w: u32,
) -> Result<GluingReport<S>, HilbError> {
    validate(datum, cover, w)?;
    let lie = ThetaLie { n: cover.n };
    let def = Deformations::new(&lie, &datum.ring);
    let mut failures = Vec::new();
    let mut d: BTreeMap<(usize, usize), NilpotentElement<FieldKey, S>> = BTreeMap::new();
    for pair in cover.multi_indices(1) {
        let (i, j) = (pair[0], pair[1]);
        let dij = def.bch(&restrict(&datum.fields[i], &pair).neg(), &restrict(&datum.fields[j], &pair))?;
        for mu in 1..datum.ring.dim() {
            let field = dij.component(mu);
            if field.is_empty() {
                continue;
            }
            let residual = z.log_residual(&field);
            if !residual.is_empty() {
                failures.push(GluingFailure { i, j, monomial: mu, field, residual });
            }
        }
        d.insert((i, j), dij);
    }
    let cocycle = if cover.len() == 3 {
        let t = [0, 1, 2];
        let lhs = def.bch(&def.bch(&restrict(&d[&(0, 1)], &t), &restrict(&d[&(1, 2)], &t))?, &restrict(&d[&(0, 2)], &t).neg())?;
        Some(lhs.is_zero())
    } else {
        None
    };
    Ok(GluingReport { failures, cocycle })
}

/// Linear conditions `a_j − a_i ∈ Θ(−log Z)(U_ij)` on `∏ Θ_w(U_i)`, derived
/// from the gluing condition over `Q[ε]`: column `c` of the matrix is the
/// residual of `bch(−a_i, a_j)` for the datum with the `c`-th key.
struct FirstOrder<S> {
    keys: Vec<FieldKey>,
    matrix: SparseMatrix<S>,
}

fn first_order_conditions<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32) -> FirstOrder<S> {
    let ring = ArtinianAlgebra::dual_numbers();
    let lie = ThetaLie { n: cover.n };
    let def = Deformations::new(&lie, &ring);
    let keys: Vec<FieldKey> = (0..cover.len()).flat_map(|i| window_keys(cover.n, &[i], w)).collect();
    let pairs = cover.multi_indices(1);
    let mut blocks = Vec::new();
    for pair in &pairs {
        let pk = window_keys(cover.n, pair, w);
        let index: BTreeMap<FieldKey, usize> = pk.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        blocks.push((z.residual_matrix(&pk), index));
    }
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, (m, _)| {
            let o = *acc;
            *acc += m.nrows;
            Some(o)
        })
        .collect();
    let nrows = blocks.iter().map(|(m, _)| m.nrows).sum();
    let mut cols = Vec::new();
    for key in &keys {
        let c = key.set[0];
        let a = NilpotentElement::from_terms(0, [(key.clone(), 1, S::one())]);
        let mut col = SparseVec::new();
        for (p, pair) in pairs.iter().enumerate() {
            if !pair.contains(&c) {
                continue;
            }
            let zero = NilpotentElement::zero(0);
            let (ai, aj) = if pair[0] == c { (restrict(&a, pair), zero) } else { (zero, restrict(&a, pair)) };
            let dij = def.bch(&ai.neg(), &aj).expect("degree 0");
            let (m, index) = &blocks[p];
            let mut coords = SparseVec::new();
            for (k, x) in dij.component(1) {
                coords.insert(index[&k], x);
            }
            for (r, x) in m.apply(&coords) {
                col.insert(offsets[p] + r, x);
            }
        }
        cols.push(col);
    }
    FirstOrder { keys, matrix: SparseMatrix::from_cols(nrows, cols) }
}

/// Log fields `∏ Θ(−log Z)_w(U_i)` in the coordinates of
/// [`FirstOrder::keys`].
fn chart_log_fields<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, keys: &[FieldKey], w: u32) -> Result<Vec<SparseVec<usize, S>>, HilbError> {
    let index: BTreeMap<&FieldKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut out = Vec::new();
    for i in 0..cover.len() {
        for v in log_theta_sections(cover, &[i], z, w)?.basis {
            out.push(v.iter().map(|(k, c)| (index[k], c.clone())).collect());
        }
    }
    Ok(out)
}

/// Representatives of a basis of the first-order gluing classes at
/// window `w`.
pub fn first_order_classes<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32) -> Result<Vec<GluingDatum<S>>, HilbError> {
    let fo = first_order_conditions(z, cover, w);
    let mut ech = Echelon::new();
    for v in chart_log_fields(z, cover, &fo.keys, w)? {
        ech.insert(v);
    }
    let ring = ArtinianAlgebra::dual_numbers();
    let mut out = Vec::new();
    for v in fo.matrix.kernel() {
        if ech.insert(v.clone()) {
            let mut datum = GluingDatum::zero(ring.clone(), cover.len());
            for (idx, c) in v {
                let k = &fo.keys[idx];
                datum.fields[k.set[0]] = datum.fields[k.set[0]].add(&NilpotentElement::from_terms(0, [(k.clone(), 1, c)]));
            }
            out.push(datum);
        }
    }
    Ok(out)
}

/// Tangent dimension at a single window: first-order gluing data modulo
/// the logarithmic fields on the charts.
pub fn hilb_tangent_at<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32) -> Result<usize, HilbError> {
    let fo = first_order_conditions(z, cover, w);
    let cocycles = fo.keys.len() - fo.matrix.rank();
    let mut ech = Echelon::new();
    for v in chart_log_fields(z, cover, &fo.keys, w)? {
        ech.insert(v);
    }
    Ok(cocycles - ech.rank())
}

/// [`hilb_tangent_at`], refusing values that change between `w` and `w + 2`.
pub fn hilb_tangent<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32) -> Result<usize, HilbError> {
    stable("hilb tangent", w, |w| hilb_tangent_at(z, cover, w))
}

pub(crate) fn stable(what: &str, w: u32, f: impl Fn(u32) -> Result<usize, HilbError>) -> Result<usize, HilbError> {
    let (a, b) = (f(w)?, f(w + 2)?);
    if a != b {
        return Err(GeometryError::Unstable { what: what.into(), window: w, low: a.to_string(), high: b.to_string() }.into());
    }
    Ok(a)
}

/// Outcome of [`lift_gluing`].
#[derive(Clone, Debug, PartialEq)]
pub enum GluingLift<S> {
    /// A valid datum over `Q[t]/(t³)` restricting to the input, with the
    /// window its second-order part lives in.
    Lifted { datum: GluingDatum<S>, window: u32 },
    /// Residuals (per overlap) of the order-2 defect that no correction in
    /// the largest window tried cancels.
    Obstructed { window: u32, defect: Vec<((usize, usize), Poly<S>)> },
}

/// Solves the order-2 gluing equations
/// `a²_j − a²_i + ½[−a¹_i, a¹_j] ∈ Θ(−log Z)(U_ij)` for a first-order datum,
/// trying correction windows `w, w + 1, …, 2w`.
pub fn lift_gluing<S: Scalar>(
    first: &GluingDatum<S>,
    z: &Hypersurface<S>,
    cover: &Cover,
    w: u32,
) -> Result<GluingLift<S>, HilbError> {
    if first.ring != ArtinianAlgebra::dual_numbers() {
        return Err(HilbError::BadDatum("first-order data live over Q[ε]".into()));
    }
    if !is_gluing_datum(first, z, cover, w)?.valid() {
        return Err(HilbError::BadDatum("input is not a first-order gluing datum".into()));
    }
    let target = ArtinianAlgebra::truncated_poly(3).expect("order 3");
    let (t1, t2) = (target.index_of(&[1]).expect("t"), target.index_of(&[2]).expect("t²"));
    let lie = ThetaLie { n: cover.n };
    let def = Deformations::new(&lie, &target);
    let a1: Vec<NilpotentElement<FieldKey, S>> = first
        .fields
        .iter()
        .map(|a| NilpotentElement { degree: 0, coeffs: a.coeffs.iter().map(|((k, _), c)| ((k.clone(), t1), c.clone())).collect() })
        .collect();
    let pairs = cover.multi_indices(1);
    // inhomogeneous term per pair: t²-part of bch(−a¹_i, a¹_j)
    let inhom: Vec<SparseVec<FieldKey, S>> = pairs
        .iter()
        .map(|p| Ok(def.bch(&restrict(&a1[p[0]], p).neg(), &restrict(&a1[p[1]], p))?.component(t2)))
        .collect::<Result<_, HilbError>>()?;
    let mut last_defect = Vec::new();
    for w2 in w..=2 * w {
        let keys: Vec<FieldKey> = (0..cover.len()).flat_map(|i| window_keys(cover.n, &[i], w2)).collect();
        let mut rows = Vec::new();
        let mut rhs_cols = Vec::new();
        for (p, pair) in pairs.iter().enumerate() {
            // residuals of the unknown keys (restricted, signed) and of the
            // inhomogeneous term, with a common clearing shift
            let mut polys: Vec<Poly<S>> = keys
                .iter()
                .map(|k| {
                    let sign = if k.set[0] == pair[1] { S::one() } else if k.set[0] == pair[0] { -S::one() } else { S::zero() };
                    crate::geometry::poly::scale(&sign, &z.apply_field(k))
                })
                .collect();
            polys.push(crate::geometry::apply_vec(&inhom[p], &z.equation));
            let m = z.residual_columns(&polys);
            rows.push(m);
            rhs_cols.push(p);
        }
        // stack the pair blocks
        let nrows: usize = rows.iter().map(|m| m.nrows).sum();
        let mut cols: Vec<SparseVec<usize, S>> = vec![SparseVec::new(); keys.len()];
        let mut rhs = SparseVec::new();
        let mut off = 0;
        for m in &rows {
            for (c, col) in m.cols.iter().enumerate() {
                for (r, x) in col {
                    if c < keys.len() {
                        cols[c].insert(off + r, x.clone());
                    } else {
                        rhs.insert(off + r, -x.clone());
                    }
                }
            }
            off += m.nrows;
        }
        let system = SparseMatrix::from_cols(nrows, cols);
        if let Some(sol) = system.solve(&rhs) {
            let mut datum = GluingDatum::zero(target.clone(), cover.len());
            for (i, a) in a1.iter().enumerate() {
                datum.fields[i] = a.clone();
            }
            for (idx, c) in sol {
                let k = &keys[idx];
                datum.fields[k.set[0]] = datum.fields[k.set[0]].add(&NilpotentElement::from_terms(0, [(k.clone(), t2, c)]));
            }
            return Ok(GluingLift::Lifted { datum, window: w2 });
        }
        last_defect = pairs
            .iter()
            .zip(&inhom)
            .map(|(p, v)| ((p[0], p[1]), z.log_residual(v)))
            .filter(|(_, r)| !r.is_empty())
            .collect();
    }
    Ok(GluingLift::Obstructed { window: 2 * w, defect: last_defect })
}

/// First-order tangent dimension through four independent pipelines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    /// Gluing description.
    pub hilb: usize,
    /// `tangent_def` of the Thom-Whitney totalization of `χ^▲`.
    pub tw_triangle: usize,
    /// First-order `H¹_sc` of the row-first `T^Δ`.
    pub h1_sc: usize,
    /// First-order `Def_χ` of `χ_TW`.
    pub def_chi: usize,
}

impl CrosscheckReport {
    pub fn values(&self) -> [usize; 4] {
        [self.hilb, self.tw_triangle, self.h1_sc, self.def_chi]
    }

    pub fn agree(&self) -> bool {
        self.values().iter().all(|&v| v == self.hilb)
    }
}

/// Runs the four routes concurrently on the same grid.
pub fn functor_crosscheck<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32, cap: u32) -> Result<CrosscheckReport, HilbError> {
    let grid = chi_bisemicosimplicial(cover, z, w)?;
    let grid = &grid;
    std::thread::scope(|scope| {
        let hilb = scope.spawn(move || hilb_tangent_at(z, cover, w));
        let tw = scope.spawn(move || -> Result<usize, HilbError> { Ok(grid.tot_tw_triangle(cap)?.tangent_def()) });
        let sc = scope.spawn(move || -> Result<usize, HilbError> { Ok(h1_sc_tangent(&grid.dgvs.rows_tw(cap)?)?) });
        let chi = scope.spawn(move || -> Result<usize, HilbError> {
            let (l, m, chi) = grid.dgvs.column_tw_map(0, cap)?;
            Ok(def_chi_tangent(&l, &m, &chi)?)
        });
        let join = |h: std::thread::ScopedJoinHandle<'_, Result<usize, HilbError>>| h.join().expect("route panicked");
        Ok(CrosscheckReport { hilb: join(hilb)?, tw_triangle: join(tw)?, h1_sc: join(sc)?, def_chi: join(chi)? })
    })
}
