//! Independent checks of the gluing description: the normal sheaf as a
//! quotient presheaf, and second-order lifts built from equations.

use std::collections::BTreeMap;

use super::{is_gluing_datum, stable, GluingDatum, HilbError};
use crate::coefficients::ArtinianAlgebra;
use crate::dgla::NilpotentElement;
use crate::geometry::poly::{self, Poly};
use crate::geometry::{apply_vec, log_theta_sections, window_keys, Cover, FieldKey, Hypersurface};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// `Θ_w(U_I) / Θ(−log Z)_w(U_I)` with the log part in echelon form; the
/// quotient coordinates of a field are its entries off the pivots after
/// reduction.
struct Quotient<S> {
    index: BTreeMap<FieldKey, usize>,
    log: Echelon<S>,
    complement: Vec<usize>,
}

impl<S: Scalar> Quotient<S> {
    fn new(cover: &Cover, set: &[usize], z: &Hypersurface<S>, w: u32) -> Result<Self, HilbError> {
        let keys = window_keys(cover.n, set, w);
        let index: BTreeMap<FieldKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut log = Echelon::new();
        for v in log_theta_sections(cover, set, z, w)?.basis {
            log.insert(v.iter().map(|(k, c)| (index[k], c.clone())).collect());
        }
        let pivots: Vec<usize> = log.pivot_columns().collect();
        let complement = (0..keys.len()).filter(|i| pivots.binary_search(i).is_err()).collect();
        Ok(Self { index, log, complement })
    }

    fn dim(&self) -> usize {
        self.complement.len()
    }

    fn project(&self, v: &SparseVec<FieldKey, S>) -> SparseVec<usize, S> {
        let idx = v.iter().map(|(k, c)| (self.index[k], c.clone())).collect();
        self.log
            .reduce(idx)
            .into_iter()
            .map(|(i, c)| (self.complement.binary_search(&i).expect("reduced off pivots"), c))
            .collect()
    }

    fn representative(&self, q: usize) -> FieldKey {
        let target = self.complement[q];
        self.index.iter().find(|(_, &i)| i == target).map(|(k, _)| k.clone()).expect("indexed")
    }
}

/// `dim H⁰` of the two-term Čech complex of the quotient presheaf
/// `Θ / Θ(−log Z)` at one window.
pub fn normal_sheaf_h0_at<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32) -> Result<usize, HilbError> {
    let charts: Vec<Quotient<S>> = (0..cover.len()).map(|i| Quotient::new(cover, &[i], z, w)).collect::<Result<_, _>>()?;
    let pairs = cover.multi_indices(1);
    let overlaps: Vec<Quotient<S>> = pairs.iter().map(|p| Quotient::new(cover, p, z, w)).collect::<Result<_, _>>()?;
    let mut row_off = Vec::new();
    let mut acc = 0;
    for q in &overlaps {
        row_off.push(acc);
        acc += q.dim();
    }
    let mut cols = Vec::new();
    for (i, q) in charts.iter().enumerate() {
        for b in 0..q.dim() {
            let key = q.representative(b);
            let mut col = SparseVec::new();
            // (δa)_{jk} = a_k − a_j
            for (p, pair) in pairs.iter().enumerate() {
                let sign = if pair[1] == i { S::one() } else if pair[0] == i { -S::one() } else { continue };
                let restricted = SparseVec::from([(FieldKey { set: pair.clone(), ..key.clone() }, sign)]);
                for (r, c) in overlaps[p].project(&restricted) {
                    col.insert(row_off[p] + r, c);
                }
            }
            cols.push(col);
        }
    }
    let m = SparseMatrix::from_cols(acc, cols);
    Ok(m.ncols - m.rank())
}

/// [`normal_sheaf_h0_at`], refusing values that change between `w` and `w + 2`.
pub fn normal_sheaf_h0<S: Scalar>(z: &Hypersurface<S>, cover: &Cover, w: u32) -> Result<usize, HilbError> {
    stable("normal sheaf h0", w, |w| normal_sheaf_h0_at(z, cover, w))
}

/// A second-order datum obtained from the equation `F + tG`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationLift<S> {
    /// First-order equation: `e^{a¹_i}F ≡ F + εG` up to units on `U_i`.
    pub g: Poly<S>,
    pub datum: GluingDatum<S>,
    pub window: u32,
}

fn homogeneous_monomials(nvars: usize, d: i32) -> Vec<Vec<i32>> {
    fn rec(pos: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// Solves `Σ x_c R(p_c) = R(target)` with `R` the residual modulo `F`.
fn solve_residual<S: Scalar>(z: &Hypersurface<S>, unknowns: &[Poly<S>], target: &Poly<S>) -> Option<SparseVec<usize, S>> {
    let mut polys = unknowns.to_vec();
    polys.push(target.clone());
    let mut m = z.residual_columns(&polys);
    let rhs = m.cols.pop().expect("target column");
    m.ncols -= 1;
    m.solve(&rhs)
}

/// Builds the first-order equation `G` of a first-order datum and lifts
/// the datum to `Q[t]/(t³)` chart by chart along `F + tG`:
/// `a²_i(F) ≡ u_i G − ½ a¹_i(a¹_i(F))` mod `F`, where
/// `a¹_i(F) = G + u_i F`. Returns `None` if some step has no solution in
/// windows up to `2w`.
pub fn equation_lift<S: Scalar>(
    first: &GluingDatum<S>,
    z: &Hypersurface<S>,
    cover: &Cover,
    w: u32,
) -> Result<Option<EquationLift<S>>, HilbError> {
    if first.ring != ArtinianAlgebra::dual_numbers() {
        return Err(HilbError::BadDatum("first-order data live over Q[ε]".into()));
    }
    let f = &z.equation;
    let a1: Vec<SparseVec<FieldKey, S>> = first.fields.iter().map(|a| a.component(1)).collect();
    let images: Vec<Poly<S>> = a1.iter().map(|a| apply_vec(a, f)).collect();
    // G: one linear system over the degree-d monomials, stacked over charts
    let mons = homogeneous_monomials(cover.n + 1, z.degree as i32);
    let mut cols: Vec<SparseVec<usize, S>> = vec![SparseVec::new(); mons.len()];
    let mut rhs = SparseVec::new();
    let mut off = 0;
    for img in &images {
        let mut polys: Vec<Poly<S>> = mons.iter().map(|e| poly::monomial(e.clone(), S::one())).collect();
        polys.push(img.clone());
        let m = z.residual_columns(&polys);
        for (c, col) in m.cols.iter().enumerate() {
            for (r, x) in col {
                if c < mons.len() {
                    cols[c].insert(off + r, x.clone());
                } else {
                    rhs.insert(off + r, x.clone());
                }
            }
        }
        off += m.nrows;
    }
    let Some(gsol) = SparseMatrix::from_cols(off, cols).solve(&rhs) else { return Ok(None) };
    let g: Poly<S> = gsol.into_iter().map(|(i, c)| (mons[i].clone(), c)).collect();
    // u_i = (a¹_i(F) − G) / F, exactly after clearing poles
    let mut units = Vec::new();
    for img in &images {
        let diff = poly::add(img, &poly::scale(&-S::one(), &g));
        let shift: Vec<i32> = (0..=cover.n).map(|v| diff.keys().map(|e| -e[v]).max().unwrap_or(0).max(0)).collect();
        let Some(q) = poly::exact_quotient(&poly::shift(&diff, &shift), f) else { return Ok(None) };
        let back: Vec<i32> = shift.iter().map(|s| -s).collect();
        units.push(poly::shift(&q, &back));
    }
    let target = ArtinianAlgebra::truncated_poly(3).expect("order 3");
    let (t1, t2) = (target.index_of(&[1]).expect("t"), target.index_of(&[2]).expect("t²"));
    'windows: for w2 in w..=2 * w {
        let mut datum = GluingDatum::zero(target.clone(), cover.len());
        for (i, a) in a1.iter().enumerate() {
            let keys = window_keys(cover.n, &[i], w2);
            let unknowns: Vec<Poly<S>> = keys.iter().map(|k| z.apply_field(k)).collect();
            let half = poly::scale(&S::ratio(1, 2), &apply_vec(a, &apply_vec(a, f)));
            let rhs = poly::add(&poly::mul(&units[i], &g), &poly::scale(&-S::one(), &half));
            let Some(sol) = solve_residual(z, &unknowns, &rhs) else { continue 'windows };
            let terms = a
                .iter()
                .map(|(k, c)| (k.clone(), t1, c.clone()))
                .chain(sol.into_iter().map(|(idx, c)| (keys[idx].clone(), t2, c)));
            datum.fields[i] = NilpotentElement::from_terms(0, terms);
        }
        let report = is_gluing_datum(&datum, z, cover, w2)?;
        if report.valid() {
            return Ok(Some(EquationLift { g, datum, window: w2 }));
        }
    }
    Ok(None)
}
