use std::collections::BTreeSet;

use deform::apl::{self, AplMonomial, AplSpace};
use deform::dgla::examples::{abelian, heisenberg, matrix_forms, sl2};
use deform::dgla::{Deformations, Dgla, DglaMorphism, NilpotentElement};
use deform::graded::{BasisLabel, CochainComplex, GradedVectorSpace};
use deform::linalg::{Echelon, SparseMatrix, SparseVec};
use deform::simplicial::{
    check_tw_axioms, def_chi_equivalence, h1_sc_tangent, linearized_h1_sc, mc_chi_membership, z1_sc_membership,
    FiniteLevels, SemicosimplicialDgla, SemicosimplicialDgvs, SimplicialError, Z1Witness,
};
use deform::{qi, ArtinianAlgebra, Q};
use proptest::prelude::*;

/// Simplices of the downward closure of `top`, by dimension, each sorted.
fn closure(top: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in top {
        let n = s.len();
        for mask in 1u32..(1 << n) {
            all.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect());
        }
    }
    let dim = all.iter().map(|s| s.len()).max().unwrap_or(0);
    (1..=dim).map(|k| all.iter().filter(|s| s.len() == k).cloned().collect()).collect()
}

/// Cochains of a simplicial complex with coefficients in `g`: level `n` is
/// the product of copies of `g` over `n`-simplices and `∂_k` pulls back along
/// the face omitting the `k`-th vertex.
fn cochains(simplices: &[Vec<Vec<usize>>], g: &Dgla<Q>) -> SemicosimplicialDgla<Q, FiniteLevels<Q>> {
    let m = g.dim();
    let levels: Vec<Dgla<Q>> = simplices
        .iter()
        .map(|ss| {
            let labels: Vec<BasisLabel> = ss
                .iter()
                .flat_map(|s| {
                    g.space().labels().iter().map(move |l| BasisLabel { name: format!("{}{:?}", l.name, s), degree: l.degree })
                })
                .collect();
            let n = labels.len();
            let mut d = SparseMatrix::zeros(n, n);
            let mut br = Vec::new();
            for si in 0..ss.len() {
                for (j, col) in g.complex.differential.matrix.cols.iter().enumerate() {
                    for (r, c) in col {
                        d.set(si * m + r, si * m + j, c.clone());
                    }
                }
                for a in 0..m {
                    for b in 0..m {
                        let v: SparseVec<usize, Q> = g.bracket_of(a, b).into_iter().map(|(r, c)| (si * m + r, c)).collect();
                        br.push(((si * m + a, si * m + b), v));
                    }
                }
            }
            let space = GradedVectorSpace::from_labels_unchecked(labels);
            Dgla::new(CochainComplex::new(space, d).unwrap(), br)
        })
        .collect();
    let mut cofaces = Vec::new();
    for n in 1..simplices.len() {
        let mut fam = Vec::new();
        for k in 0..=n {
            let mut mat = SparseMatrix::zeros(simplices[n].len() * m, simplices[n - 1].len() * m);
            for (si, s) in simplices[n].iter().enumerate() {
                let mut face = s.clone();
                face.remove(k);
                let fi = simplices[n - 1].iter().position(|x| *x == face).unwrap();
                for b in 0..m {
                    mat.set(si * m + b, fi * m + b, qi(1));
                }
            }
            fam.push(mat);
        }
        cofaces.push(fam);
    }
    SemicosimplicialDgla::from_finite(levels, cofaces).unwrap()
}

fn scalars() -> Dgla<Q> {
    abelian(0, 1)
}

/// Cohomology of a finite form space, by ranks of `d` in monomial
/// coordinates.
fn form_betti(space: &AplSpace<Q>) -> Vec<usize> {
    let mut index: std::collections::BTreeMap<AplMonomial, usize> = Default::default();
    let mut coords = |f: &apl::AplForm<Q>| -> SparseVec<usize, Q> {
        f.iter()
            .map(|(m, c)| {
                let next = index.len();
                (*index.entry(m.clone()).or_insert(next), c.clone())
            })
            .collect()
    };
    let dims = space.dims_by_degree();
    let mut ranks = vec![0; space.n + 2];
    for k in 0..=space.n {
        let mut e = Echelon::new();
        for (f, deg) in space.basis.iter().zip(&space.degrees) {
            if *deg == k {
                e.insert(coords(&apl::d(f)));
            }
        }
        ranks[k + 1] = e.rank();
    }
    (0..=space.n).map(|k| dims[k] - ranks[k + 1] - ranks[k]).collect()
}

#[test]
fn trimmed_forms_are_acyclic_but_capped_monomials_are_not() {
    for n in 0..=3 {
        for cap in 1..=3 {
            let h = form_betti(&AplSpace::trimmed(n, cap).unwrap());
            let mut want = vec![0; n + 1];
            want[0] = 1;
            assert_eq!(h, want, "trimmed n={n} cap={cap}");
        }
    }
    // t dt on the interval is closed, and its primitive t²/2 exceeds cap 1
    let h = form_betti(&AplSpace::full(1, 1));
    assert_eq!(h, vec![1, 1]);
}

#[test]
fn trimmed_space_is_closed_under_faces() {
    for n in 1..=3 {
        for cap in 1..=2 {
            let big = AplSpace::<Q>::trimmed(n, cap).unwrap();
            let small = AplSpace::<Q>::trimmed(n - 1, cap).unwrap();
            let mut index: std::collections::BTreeMap<AplMonomial, usize> = Default::default();
            let mut coords = |f: &apl::AplForm<Q>| -> SparseVec<usize, Q> {
                f.iter()
                    .map(|(m, c)| {
                        let next = index.len();
                        (*index.entry(m.clone()).or_insert(next), c.clone())
                    })
                    .collect()
            };
            let mut e = Echelon::new();
            for f in &small.basis {
                e.insert(coords(f));
            }
            for f in &big.basis {
                for k in 0..=n {
                    let g = apl::face(k, n, f).unwrap();
                    assert!(e.contains(&coords(&g)), "face {k} of a trimmed form on Δ^{n}");
                }
            }
        }
    }
}

#[test]
fn circle_nerve_matches_between_totalizations() {
    // two arcs covering a circle, meeting in two components
    let v0 = CochainComplex::zero_differential(GradedVectorSpace::concentrated("a", 0, 2));
    let v1 = CochainComplex::zero_differential(GradedVectorSpace::concentrated("b", 0, 2));
    let d0 = SparseMatrix::from_dense(&[vec![qi(0), qi(1)], vec![qi(0), qi(1)]]);
    let d1 = SparseMatrix::from_dense(&[vec![qi(1), qi(0)], vec![qi(1), qi(0)]]);
    let s = SemicosimplicialDgvs::new(vec![v0, v1], vec![vec![d0, d1]]).unwrap();
    let want: Vec<(i32, usize)> = vec![(0, 1), (1, 1)];
    let nz = |b: std::collections::BTreeMap<i32, usize>| b.into_iter().filter(|(_, h)| *h > 0).collect::<Vec<_>>();
    assert_eq!(nz(s.tot().unwrap().betti()), want);
    for cap in 1..=3 {
        assert_eq!(nz(s.tot_tw(cap).unwrap().betti()), want, "cap {cap}");
    }
}

#[test]
fn cap_zero_is_rejected_beyond_one_level() {
    let g = cochains(&closure(&[vec![0, 1]]), &scalars());
    assert!(matches!(g.dgvs.tot_tw(0), Err(SimplicialError::Apl(_))));
}

#[test]
fn swapped_cofaces_are_caught() {
    let g = cochains(&closure(&[vec![0, 1, 2]]), &scalars());
    let mut bad = g.dgvs.clone();
    bad.cofaces[1].swap(0, 1);
    match bad.check() {
        Err(SimplicialError::CosimplicialIdentity { level, .. }) => assert_eq!(level, 2),
        other => panic!("expected a cosimplicial witness, got {other:?}"),
    }
}

#[test]
fn mapping_cone_of_identity_is_acyclic_in_both_models() {
    for l in [sl2::<Q>(), heisenberg(), matrix_forms()] {
        let g = SemicosimplicialDgla::from_morphism(&DglaMorphism::identity(l)).unwrap();
        assert!(g.dgvs.tot().unwrap().betti().values().all(|&h| h == 0));
        for cap in 1..=2 {
            let tw = g.tot_tw(cap).unwrap();
            assert!(tw.system.betti().values().all(|&h| h == 0), "cap {cap}");
        }
    }
}

#[test]
fn tw_of_cones_and_nerves_is_a_dgla() {
    let g = SemicosimplicialDgla::from_morphism(&DglaMorphism::identity(heisenberg::<Q>())).unwrap();
    let tw = g.tot_tw(1).unwrap();
    check_tw_axioms(&tw, None).unwrap();
    let g = cochains(&closure(&[vec![0, 1, 2]]), &sl2());
    let tw = g.tot_tw(1).unwrap();
    check_tw_axioms(&tw, Some(&[0, 1])).unwrap();
}

#[test]
fn cone_of_a_subalgebra_inclusion() {
    // span(h) ⊂ sl2
    let l = sl2::<Q>();
    let h = Dgla::abelian(CochainComplex::zero_differential(GradedVectorSpace::concentrated("h", 0, 1)));
    let chi = DglaMorphism::new(h, l, SparseMatrix::from_dense(&[vec![qi(0)], vec![qi(0)], vec![qi(1)]])).unwrap();
    let g = SemicosimplicialDgla::from_morphism(&chi).unwrap();
    let tot = g.dgvs.tot().unwrap().betti();
    // the cone computes sl2 / span(h) in degree 1
    assert_eq!(tot.get(&1).copied(), Some(2));
    for cap in 1..=2 {
        let tw = g.tot_tw(cap).unwrap();
        assert_eq!(tw.system.betti().get(&1).copied().unwrap_or(0), 2);
        assert_eq!(tw.tangent_def(), h1_sc_tangent(&g.dgvs).unwrap());
    }
}

#[test]
fn first_order_z1_of_a_lie_algebra_nerve_is_the_cocycle_condition() {
    let simplices = closure(&[vec![0, 1, 2]]);
    let g = cochains(&simplices, &sl2());
    let ring = ArtinianAlgebra::dual_numbers();
    // edges (01), (02), (12) carry three sl2 coordinates each
    let edge = |s: &[usize]| simplices[1].iter().position(|x| x == s).unwrap();
    let m_of = |vals: [[i64; 3]; 3]| {
        let mut terms = Vec::new();
        for (e, s) in [[0, 1], [0, 2], [1, 2]].iter().enumerate() {
            for (b, v) in vals[e].iter().enumerate() {
                if *v != 0 {
                    terms.push(((1, edge(s) * 3 + b), 1, qi(*v)));
                }
            }
        }
        NilpotentElement::from_terms(0, terms)
    };
    let zero_l = NilpotentElement::zero(1);
    // m(02) = m(01) + m(12) is a cocycle
    let good = m_of([[1, 2, 0], [1, 5, 3], [0, 3, 3]]);
    assert_eq!(z1_sc_membership(&g, &ring, &zero_l, &good).unwrap(), Z1Witness::Member);
    let bad = m_of([[1, 2, 0], [1, 5, 4], [0, 3, 3]]);
    assert_eq!(z1_sc_membership(&g, &ring, &zero_l, &bad).unwrap(), Z1Witness::NoHomotopy);
    // dimension count: cocycles of the full triangle are coboundaries
    let (z, b, h) = linearized_h1_sc(&g.dgvs);
    assert_eq!((z, b, h), (6, 6, 0));
}

#[test]
fn nonabelian_coboundaries_are_cocycles() {
    let simplices = closure(&[vec![0, 1, 2]]);
    let g = cochains(&simplices, &sl2());
    let ring = ArtinianAlgebra::truncated_total_degree(2, 4).unwrap();
    let lie = sl2::<Q>();
    let def = Deformations::new(&lie, &ring);
    let s = ring.index_of(&[1, 0]).unwrap();
    let t = ring.index_of(&[0, 1]).unwrap();
    let a = [
        NilpotentElement::from_terms(0, [(0, s, qi(1)), (2, t, qi(2))]),
        NilpotentElement::from_terms(0, [(1, t, qi(-1)), (2, s, qi(3))]),
        NilpotentElement::from_terms(0, [(0, t, qi(1)), (1, s, qi(1))]),
    ];
    // e^{m_ij} = e^{−a_i} e^{a_j}
    let mut terms = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let m = def.bch(&a[i].neg(), &a[j]).unwrap();
        let e = simplices[1].iter().position(|x| *x == vec![i, j]).unwrap();
        for ((b, mu), c) in m.coeffs {
            terms.push(((1, e * 3 + b), mu, c));
        }
    }
    let m = NilpotentElement::from_terms(0, terms);
    let z = z1_sc_membership(&g, &ring, &NilpotentElement::zero(1), &m).unwrap();
    assert_eq!(z, Z1Witness::Member);
    // flipping one edge breaks it
    let e = simplices[1].iter().position(|x| *x == vec![0, 2]).unwrap();
    let m2 = m.add(&NilpotentElement::from_terms(0, [((1, e * 3), s, qi(1))]));
    assert_eq!(z1_sc_membership(&g, &ring, &NilpotentElement::zero(1), &m2).unwrap(), Z1Witness::NoHomotopy);
}

#[test]
fn z1_of_a_cone_is_mc_chi() {
    // χ: span(h) ↪ sl2, two levels, condition (3) vacuous
    let l = sl2::<Q>();
    let h = Dgla::abelian(CochainComplex::zero_differential(GradedVectorSpace::concentrated("h", 0, 1)));
    let chi = DglaMorphism::new(h, l, SparseMatrix::from_dense(&[vec![qi(0)], vec![qi(0)], vec![qi(1)]])).unwrap();
    let g = SemicosimplicialDgla::from_morphism(&chi).unwrap();
    let ring = ArtinianAlgebra::truncated_poly(3).unwrap();
    let a = NilpotentElement::from_terms(0, [(0usize, 1, qi(1)), (2, 2, qi(1))]);
    assert!(mc_chi_membership(&chi, &ring, &a).unwrap());
    let m = NilpotentElement::from_terms(0, a.coeffs.iter().map(|((k, mu), c)| ((1usize, *k), *mu, c.clone())));
    assert_eq!(z1_sc_membership(&g, &ring, &NilpotentElement::zero(1), &m).unwrap(), Z1Witness::Member);
}

#[test]
fn mc_chi_and_def_chi_basics() {
    let l = sl2::<Q>();
    let ring = ArtinianAlgebra::dual_numbers();
    let id = DglaMorphism::identity(l.clone());
    let a = NilpotentElement::from_terms(0, [(0usize, 1, qi(3)), (1, 1, qi(-1))]);
    assert!(mc_chi_membership(&id, &ring, &NilpotentElement::zero(0)).unwrap());
    assert!(mc_chi_membership(&id, &ring, &a).unwrap());
    assert!(def_chi_equivalence(&id, &a, &a).unwrap());
    let zero = DglaMorphism::zero(l.clone(), l);
    assert_eq!(mc_chi_membership(&zero, &ring, &a), Err(SimplicialError::NotInjective));

    // acyclic pair into itself: a ∈ M⁰ moves 0 to −db ∉ χ(L¹) = 0 for L = 0
    let m = deform::dgla::examples::acyclic_pair::<Q>();
    let empty = Dgla::abelian(CochainComplex::zero_differential(GradedVectorSpace::concentrated("z", 0, 0)));
    let chi = DglaMorphism::new(empty, m, SparseMatrix::zeros(2, 0)).unwrap();
    let a = NilpotentElement::from_terms(0, [(0usize, 1, qi(1))]);
    assert!(!mc_chi_membership(&chi, &ring, &a).unwrap());
    assert!(!def_chi_equivalence(&chi, &a, &NilpotentElement::zero(0)).unwrap());
}

fn arb_complex() -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::sample::subsequence(vec![0usize, 1, 2, 3, 4], 1..=3), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tot_and_tw_agree_on_random_nerves(top in arb_complex()) {
        let simplices = closure(&top);
        let g = cochains(&simplices, &scalars());
        g.dgvs.check().unwrap();
        let tot = g.dgvs.tot().unwrap();
        tot.check_square_zero().unwrap();
        let b = tot.betti();
        let euler: i64 = simplices.iter().enumerate().map(|(n, s)| if n % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) }).sum();
        let euler_h: i64 = b.iter().map(|(k, h)| if k % 2 == 0 { *h as i64 } else { -(*h as i64) }).sum();
        prop_assert_eq!(euler, euler_h);
        let nz = |m: std::collections::BTreeMap<i32, usize>| m.into_iter().filter(|(_, h)| *h > 0).collect::<Vec<_>>();
        for cap in 1..=2 {
            let tw = g.dgvs.tot_tw(cap).unwrap();
            prop_assert_eq!(nz(tw.betti()), nz(b.clone()));
        }
    }

    #[test]
    fn tw_differential_squares_to_zero(top in arb_complex()) {
        let g = cochains(&closure(&top), &scalars());
        let tw = g.dgvs.tot_tw(2).unwrap();
        let (c, _) = tw.complex();
        prop_assert!(c.check_square_zero().is_ok());
    }

    #[test]
    fn first_order_h1_matches_tw_tangent(top in arb_complex()) {
        let g = cochains(&closure(&top), &scalars());
        let tw = g.tot_tw(1).unwrap();
        prop_assert_eq!(h1_sc_tangent(&g.dgvs).unwrap(), tw.tangent_def());
    }
}
