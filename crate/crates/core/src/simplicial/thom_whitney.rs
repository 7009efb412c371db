//! The Thom-Whitney DGLA as a subspace of `⊕ V_n ⊗ A_n` with the bracket
//! computed in the ambient product.

use std::fmt::Debug;

use crate::apl::{self, AplMonomial};
use crate::dgla::{check_axioms, AxiomReport, AxiomViolation, LieStructure};
use crate::linalg::{add_term, SparseVec};
use crate::scalar::Scalar;
use crate::tw::TwSystem;

/// Ambient key: a key of the underlying Lie structure tensored with one
/// form monomial per simplicial direction.
pub type TwKey<K> = (K, Vec<AplMonomial>);

/// `L ⊗ A ⊗ A ⊗ ⋯` with the Koszul sign rule.
#[derive(Clone, Copy, Debug)]
pub struct TwLie<'a, L> {
    pub lie: &'a L,
}

fn form_deg(ms: &[AplMonomial]) -> i32 {
    ms.iter().map(|m| m.form_degree() as i32).sum()
}

impl<'a, S: Scalar, L: LieStructure<S>> LieStructure<S> for TwLie<'a, L> {
    type Key = TwKey<L::Key>;

    fn degree(&self, k: &Self::Key) -> i32 {
        self.lie.degree(&k.0) + form_deg(&k.1)
    }

    fn differential(&self, k: &Self::Key) -> SparseVec<Self::Key, S> {
        let mut out = SparseVec::new();
        for (v, c) in self.lie.differential(&k.0) {
            add_term(&mut out, (v, k.1.clone()), c);
        }
        let mut deg = self.lie.degree(&k.0);
        for f in 0..k.1.len() {
            let sign = if deg.rem_euclid(2) == 0 { S::one() } else { -S::one() };
            for (m, c) in apl::d_monomial::<S>(&k.1[f]) {
                let mut ms = k.1.clone();
                ms[f] = m;
                add_term(&mut out, (k.0.clone(), ms), sign.clone() * c);
            }
            deg += k.1[f].form_degree() as i32;
        }
        out
    }

    fn bracket(&self, a: &Self::Key, b: &Self::Key) -> SparseVec<Self::Key, S> {
        // (v ⊗ α_1 ⊗ ⋯)(w ⊗ β_1 ⊗ ⋯): move w past all α, then each β_i past
        // α_j for j > i
        let mut exp = self.lie.degree(&b.0) * form_deg(&a.1);
        for i in 0..b.1.len() {
            for j in i + 1..a.1.len() {
                exp += (b.1[i].form_degree() * a.1[j].form_degree()) as i32;
            }
        }
        let mut neg = exp.rem_euclid(2) == 1;
        let mut ms = Vec::with_capacity(a.1.len());
        for (x, y) in a.1.iter().zip(&b.1) {
            match apl::mul_monomials(x, y) {
                Some((m, s)) => {
                    neg ^= s;
                    ms.push(m);
                }
                None => return SparseVec::new(),
            }
        }
        let mut out = SparseVec::new();
        for (v, c) in self.lie.bracket(&a.0, &b.0) {
            add_term(&mut out, (v, ms.clone()), if neg { -c } else { c });
        }
        out
    }
}

/// A Thom-Whitney totalization together with the ambient Lie structure in
/// which its bracket is computed.
pub struct TwDgla<'a, S: Scalar, L: LieStructure<S>> {
    pub system: TwSystem<S>,
    pub lie: TwLie<'a, L>,
    /// Level basis embeddings, indexed by TW entry.
    pub embed: &'a [Vec<SparseVec<L::Key, S>>],
}

impl<'a, S: Scalar, L: LieStructure<S>> TwDgla<'a, S, L> {
    /// An element given over unknowns, written in ambient keys.
    pub fn ambient(&self, v: &SparseVec<usize, S>) -> SparseVec<TwKey<L::Key>, S> {
        ambient_of(&self.system, self.embed, v)
    }

    pub fn tangent_def(&self) -> usize {
        self.system.betti_in_degree(1)
    }
}

pub(crate) fn ambient_of<S: Scalar, K: Ord + Clone>(
    system: &TwSystem<S>,
    embed: &[Vec<SparseVec<K, S>>],
    v: &SparseVec<usize, S>,
) -> SparseVec<TwKey<K>, S> {
    let mut out = SparseVec::new();
    for (i, c) in v {
        let u = &system.unknowns[*i];
        let forms = system.forms_of(u);
        // expand the tensor product of the forms
        let mut terms: Vec<(Vec<AplMonomial>, S)> = vec![(vec![], c.clone())];
        for f in forms {
            let mut next = Vec::new();
            for (ms, cc) in &terms {
                for (m, fc) in f {
                    let mut ms2 = ms.clone();
                    ms2.push(m.clone());
                    next.push((ms2, cc.clone() * fc.clone()));
                }
            }
            terms = next;
        }
        for (k, ck) in &embed[u.entry][u.b] {
            for (ms, cc) in &terms {
                add_term(&mut out, (k.clone(), ms.clone()), ck.clone() * cc.clone());
            }
        }
    }
    out
}

/// Exhaustive axiom check on a basis of the Thom-Whitney space, restricted
/// to the given degrees (all degrees if `None`).
pub fn check_tw_axioms<S: Scalar, L: LieStructure<S>>(
    tw: &TwDgla<'_, S, L>,
    degrees: Option<&[i32]>,
) -> Result<AxiomReport, AxiomViolation>
where
    L::Key: Debug,
{
    let mut elements = Vec::new();
    for k in tw.system.degree_range() {
        if degrees.map_or(true, |ds| ds.contains(&k)) {
            for v in tw.system.basis_in_degree(k) {
                elements.push((k, tw.ambient(&v)));
            }
        }
    }
    check_axioms(&tw.lie, &elements, &|i| format!("tw basis {i}"))
}
