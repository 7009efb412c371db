//! `Z¹_sc`, `H¹_sc` at first order, and the functors `MC_χ`, `Def_χ` of an
//! injective DGLA morphism.

use super::{LevelwiseLie, SemicosimplicialDgla, SemicosimplicialDgvs, SimplicialError};
use crate::coefficients::ArtinianAlgebra;
use crate::dgla::{Deformations, DglaMorphism, NilpotentElement};
use crate::graded::CochainComplex;
use crate::linalg::{add_term, is_zero_vec, scaled, Echelon, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

/// Which condition of `Z¹_sc` failed, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Z1Witness {
    Member,
    /// `dl + ½[l,l] ≠ 0`.
    NotMaurerCartan,
    /// `∂_1 l ≠ e^m * ∂_0 l`.
    GaugeMismatch,
    /// `∂_0 m • −∂_1 m • ∂_2 m` is not of the form `dn + [∂_2∂_0 l, n]`.
    NoHomotopy,
}

fn apply_coface<S: Scalar, L: LevelwiseLie<S>>(
    g: &L,
    k: usize,
    x: &NilpotentElement<L::Key, S>,
) -> NilpotentElement<L::Key, S> {
    let mut coeffs = SparseVec::new();
    for ((key, m), c) in &x.coeffs {
        for (k2, c2) in g.coface(k, key) {
            add_term(&mut coeffs, (k2, *m), c.clone() * c2);
        }
    }
    NilpotentElement { degree: x.degree, coeffs }
}

/// Membership of `(l, m) ∈ (𝔤_0¹ ⊕ 𝔤_1⁰) ⊗ m_A` in `Z¹_sc(A)`:
/// (1) `dl + ½[l,l] = 0`, (2) `∂_1 l = e^m * ∂_0 l`,
/// (3) `∂_0 m • −∂_1 m • ∂_2 m = dn + [∂_2∂_0 l, n]` for some
/// `n ∈ 𝔤_2^{−1} ⊗ m_A`, the last decided as a linear system in `n`.
pub fn z1_sc_membership<S: Scalar, L: LevelwiseLie<S>>(
    g: &SemicosimplicialDgla<S, L>,
    ring: &ArtinianAlgebra,
    l: &NilpotentElement<L::Key, S>,
    m: &NilpotentElement<L::Key, S>,
) -> Result<Z1Witness, SimplicialError> {
    let amb = &g.ambient;
    let def = Deformations::new(amb, ring);
    if l.degree != 1 || m.degree != 0 {
        return Err(SimplicialError::BadElement("expected l of degree 1 and m of degree 0".into()));
    }
    if l.coeffs.keys().any(|(k, _)| amb.level(k) != 0) || m.coeffs.keys().any(|(k, _)| amb.level(k) != 1) {
        return Err(SimplicialError::BadElement("l must live on level 0 and m on level 1".into()));
    }
    def.validate(l).map_err(|e| SimplicialError::BadElement(e.to_string()))?;
    def.validate(m).map_err(|e| SimplicialError::BadElement(e.to_string()))?;
    if !def.mc_residual(l).map_err(|e| SimplicialError::BadElement(e.to_string()))?.is_zero() {
        return Ok(Z1Witness::NotMaurerCartan);
    }
    let d0l = apply_coface(amb, 0, l);
    let d1l = apply_coface(amb, 1, l);
    let moved = def.gauge_action(m, &d0l).map_err(|e| SimplicialError::BadElement(e.to_string()))?;
    if !d1l.sub(&moved).is_zero() {
        return Ok(Z1Witness::GaugeMismatch);
    }
    if g.dgvs.levels.len() < 3 {
        // 𝔤_2 = 0: condition (3) is vacuous
        return Ok(Z1Witness::Member);
    }
    let bch = |a: &NilpotentElement<L::Key, S>, b: &NilpotentElement<L::Key, S>| def.bch(a, b).expect("degree 0");
    let lhs = bch(&bch(&apply_coface(amb, 0, m), &apply_coface(amb, 1, m).neg()), &apply_coface(amb, 2, m));
    let c = apply_coface(amb, 2, &d0l);
    // unknowns: n = Σ n_{b,μ} e_b ⊗ μ over the degree −1 basis of level 2
    let lvl2 = &g.dgvs.levels[2];
    let neg_basis = lvl2.space.indices_in_degree(-1);
    let mut keys: Vec<(L::Key, usize)> = lhs.coeffs.keys().cloned().collect();
    let mut images = Vec::new();
    for b in &neg_basis {
        for mu in 1..ring.dim() {
            let n = NilpotentElement {
                degree: -1,
                coeffs: g.embed[2][*b].iter().map(|(k, cc)| ((k.clone(), mu), cc.clone())).collect(),
            };
            let img = def.d(&n).add(&def.bracket(&c, &n));
            keys.extend(img.coeffs.keys().cloned());
            images.push(img);
        }
    }
    keys.sort();
    keys.dedup();
    let pos = |k: &(L::Key, usize)| keys.binary_search(k).expect("indexed");
    let cols = images.iter().map(|im| im.coeffs.iter().map(|(k, cc)| (pos(k), cc.clone())).collect()).collect();
    let mat = SparseMatrix::from_cols(keys.len(), cols);
    let rhs = lhs.coeffs.iter().map(|(k, cc)| (pos(k), cc.clone())).collect();
    Ok(if mat.solve(&rhs).is_some() { Z1Witness::Member } else { Z1Witness::NoHomotopy })
}

fn block<S: Scalar>(m: &SparseMatrix<S>, src: &[usize], tgt: &[usize]) -> SparseMatrix<S> {
    let pos: std::collections::HashMap<usize, usize> = tgt.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let cols = src
        .iter()
        .map(|&j| m.cols[j].iter().filter_map(|(r, c)| pos.get(r).map(|p| (*p, c.clone()))).collect())
        .collect();
    SparseMatrix::from_cols(tgt.len(), cols)
}

/// Dimensions of the linearized `Z¹_sc` and of the linearized equivalence,
/// and their difference `dim H¹_sc(Q[ε])`.
///
/// Over `Q[ε]` the conditions become `dl = 0`,
/// `∂_1 l − ∂_0 l + dm = 0`, `∂_0 m − ∂_1 m + ∂_2 m = dn`, and the relation
/// becomes `(l, m) ~ (l − da, m + ∂_1 a − ∂_0 a + db)`.
pub fn linearized_h1_sc<S: Scalar>(g: &SemicosimplicialDgvs<S>) -> (usize, usize, usize) {
    let level = |i: usize, d: i32| -> Vec<usize> { g.levels.get(i).map(|l| l.space.indices_in_degree(d)).unwrap_or_default() };
    let l1 = level(0, 1);
    let l0 = level(0, 0);
    let m0 = level(1, 0);
    let bneg = level(1, -1);
    let nneg = level(2, -1);
    let t02 = level(0, 2);
    let t11 = level(1, 1);
    let t20 = level(2, 0);
    let d = |i: usize| &g.levels[i].differential.matrix;
    let cf = |target: usize, k: usize| g.coface(target, k);

    // unknowns (l, m, n); equation blocks (dl, ∂_1l − ∂_0l + dm, ∂m − dn)
    let n_rows = [t02.len(), t11.len(), t20.len()];
    let r_off = [0, n_rows[0], n_rows[0] + n_rows[1]];
    let mut cols: Vec<SparseVec<usize, S>> = Vec::new();
    let push_block = |col: &mut SparseVec<usize, S>, m: &SparseMatrix<S>, j: usize, off: usize, sgn: S| {
        for (r, c) in &m.cols[j] {
            add_term(col, off + r, sgn.clone() * c.clone());
        }
    };
    if !g.levels.is_empty() {
        let dl = block(d(0), &l1, &t02);
        let (c0, c1) = if g.levels.len() > 1 { (Some(block(cf(1, 0), &l1, &t11)), Some(block(cf(1, 1), &l1, &t11))) } else { (None, None) };
        for j in 0..l1.len() {
            let mut col = SparseVec::new();
            push_block(&mut col, &dl, j, r_off[0], S::one());
            if let (Some(c0), Some(c1)) = (&c0, &c1) {
                push_block(&mut col, c1, j, r_off[1], S::one());
                push_block(&mut col, c0, j, r_off[1], -S::one());
            }
            cols.push(col);
        }
    }
    if g.levels.len() > 1 {
        let dm = block(d(1), &m0, &t11);
        let cs: Vec<SparseMatrix<S>> = if g.levels.len() > 2 { (0..3).map(|k| block(cf(2, k), &m0, &t20)).collect() } else { vec![] };
        for j in 0..m0.len() {
            let mut col = SparseVec::new();
            push_block(&mut col, &dm, j, r_off[1], S::one());
            for (k, c) in cs.iter().enumerate() {
                push_block(&mut col, c, j, r_off[2], if k == 1 { -S::one() } else { S::one() });
            }
            cols.push(col);
        }
    }
    let mut dn_kernel = 0;
    if g.levels.len() > 2 {
        let dn = block(d(2), &nneg, &t20);
        dn_kernel = nneg.len() - dn.rank();
        for j in 0..nneg.len() {
            let mut col = SparseVec::new();
            push_block(&mut col, &dn, j, r_off[2], -S::one());
            cols.push(col);
        }
    }
    let total_rows: usize = n_rows.iter().sum();
    let system = SparseMatrix::from_cols(total_rows, cols.clone());
    let sol_dim = cols.len() - system.rank();
    let z_dim = sol_dim - dn_kernel;

    // equivalence image in (l, m) coordinates
    let lm = l1.len() + m0.len();
    let mut ech = Echelon::new();
    if !g.levels.is_empty() {
        let da = block(d(0), &l0, &l1);
        let (c0, c1) = if g.levels.len() > 1 { (Some(block(cf(1, 0), &l0, &m0)), Some(block(cf(1, 1), &l0, &m0))) } else { (None, None) };
        for j in 0..l0.len() {
            let mut col = SparseVec::new();
            push_block(&mut col, &da, j, 0, -S::one());
            if let (Some(c0), Some(c1)) = (&c0, &c1) {
                push_block(&mut col, c1, j, l1.len(), S::one());
                push_block(&mut col, c0, j, l1.len(), -S::one());
            }
            ech.insert(col);
        }
    }
    if g.levels.len() > 1 {
        let db = block(d(1), &bneg, &m0);
        for j in 0..bneg.len() {
            let mut col = SparseVec::new();
            push_block(&mut col, &db, j, l1.len(), S::one());
            ech.insert(col);
        }
    }
    let _ = lm;
    let orbit = ech.rank();
    (z_dim, orbit, z_dim - orbit)
}

/// `dim H¹_sc(G)(Q[ε])`, after checking `H^k(𝔤_i) = 0` for `k < 0`.
pub fn h1_sc_tangent<S: Scalar>(g: &SemicosimplicialDgvs<S>) -> Result<usize, SimplicialError> {
    g.check()?;
    g.check_no_negative_cohomology()?;
    Ok(linearized_h1_sc(g).2)
}

fn require_injective<S: Scalar>(chi: &DglaMorphism<S>) -> Result<(), SimplicialError> {
    if chi.is_injective() {
        Ok(())
    } else {
        Err(SimplicialError::NotInjective)
    }
}

/// `e^a ∈ MC_χ(A)` for injective `χ: L ↪ M`: `e^{−a} * 0 ∈ χ(L¹) ⊗ m_A`.
pub fn mc_chi_membership<S: Scalar>(
    chi: &DglaMorphism<S>,
    ring: &ArtinianAlgebra,
    a: &NilpotentElement<usize, S>,
) -> Result<bool, SimplicialError> {
    require_injective(chi)?;
    let def = Deformations::new(&chi.target, ring);
    let x = def
        .gauge_action(&a.neg(), &NilpotentElement::zero(1))
        .map_err(|e| SimplicialError::BadElement(e.to_string()))?;
    let (_, img) = image_in_degree(chi, 1);
    for mu in 1..ring.dim() {
        let comp = x.component(mu);
        if !is_zero_vec(&comp) && !img.contains(&comp) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn image_in_degree<S: Scalar>(chi: &DglaMorphism<S>, d: i32) -> (Vec<usize>, Echelon<S>) {
    let idx = chi.source.space().indices_in_degree(d);
    let mut ech = Echelon::new();
    for &j in &idx {
        ech.insert(chi.map.cols[j].clone());
    }
    (idx, ech)
}

/// First-order equivalence in `Def_χ`: `a ~ a′` iff `a − a′ ∈ χ(L⁰)`.
pub fn def_chi_equivalence<S: Scalar>(
    chi: &DglaMorphism<S>,
    a: &NilpotentElement<usize, S>,
    a2: &NilpotentElement<usize, S>,
) -> Result<bool, SimplicialError> {
    require_injective(chi)?;
    let diff = a.sub(a2);
    if diff.coeffs.keys().any(|(_, m)| *m != 1) {
        return Err(SimplicialError::BadElement("first-order elements live over the dual numbers".into()));
    }
    let (_, img) = image_in_degree(chi, 0);
    Ok(img.contains(&diff.component(1)))
}

/// First-order `Def_χ` for an injective chain map `χ: L → M` of complexes
/// (e.g. Thom-Whitney totalizations): `dim{a ∈ M⁰ : da ∈ χ(L¹)}` minus
/// `dim(χ(L⁰) + dM⁻¹)`.
pub fn def_chi_tangent<S: Scalar>(
    l: &CochainComplex<S>,
    m: &CochainComplex<S>,
    chi: &SparseMatrix<S>,
) -> Result<usize, SimplicialError> {
    if chi.ncols != l.dim() || chi.nrows != m.dim() {
        return Err(SimplicialError::Shape("χ has the wrong shape".into()));
    }
    if chi.rank() != l.dim() {
        return Err(SimplicialError::NotInjective);
    }
    let (m0, m1, mneg) = (m.space.indices_in_degree(0), m.space.indices_in_degree(1), m.space.indices_in_degree(-1));
    let (l0, l1) = (l.space.indices_in_degree(0), l.space.indices_in_degree(1));
    // (a, y) with da − χy = 0; χ injective, so a determines y
    let d0 = block(&m.differential.matrix, &m0, &m1);
    let chi1 = block(chi, &l1, &m1);
    let mut cols = d0.cols.clone();
    cols.extend(chi1.cols.iter().map(|c| scaled(&-S::one(), c)));
    let z = cols.len() - SparseMatrix::from_cols(m1.len(), cols).rank();
    let mut ech = Echelon::new();
    for c in block(chi, &l0, &m0).cols.into_iter().chain(block(&m.differential.matrix, &mneg, &m0).cols) {
        ech.insert(c);
    }
    Ok(z - ech.rank())
}
