//! Acceptance suite: one pass/fail line per criterion, with the tolerance
//! and runtime budget it is held to. Runs without the test harness so the
//! lines are always printed; exits non-zero if any criterion fails.

use std::fmt::Debug;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context as _, Result};
use deform::bisimplicial::{triangle_betti, tw_orders_report, BisimplicialError};
use deform::dgla::examples::{acyclic_pair, heisenberg, matrix_forms, obstructed, sl2};
use deform::dgla::{Deformations, Dgla, LieStructure, NilpotentElement};
use deform::geometry::{
    cech_lie, cech_line_bundle, chart_inclusion, chi_bisemicosimplicial, required_window, standard_cover, window_keys,
    Cover, Hypersurface, Sheaf,
};
use deform::graded::nonzero_betti;
use deform::hilb::{
    equation_lift, first_order_classes, functor_crosscheck, hilb_tangent, is_gluing_datum, lift_gluing, normal_sheaf_h0,
    GluingLift, HilbError,
};
use deform::linalg::SparseVec;
use deform::simplicial::{check_tw_axioms, SimplicialError, TwDgla};
use deform::{qi, ArtinianAlgebra, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "../../core/tests/support/matrix.rs"]
mod matrix;

const POINT: (usize, &str) = (1, "X1 - X0");
const LINE: (usize, &str) = (2, "X0 + 2*X1 - X2");
const CONIC: (usize, &str) = (2, "X0^2 - X1*X2 + X2^2");
const CUBIC: (usize, &str) = (2, "X0^3 + X1^3 + X2^3 - X0*X1*X2");

/// Budget for checks whose runtime is specified as "seconds".
const SECONDS: Duration = Duration::from_secs(15);

struct Criterion {
    number: usize,
    title: &'static str,
    tolerance: &'static str,
    /// Budget for the whole criterion, or per item when `per_item`.
    budget: Duration,
    per_item: bool,
}

/// Items checked by a criterion, each with its own runtime.
#[derive(Default)]
struct Items(Vec<(String, Duration)>);

impl Items {
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<String>) -> Result<()> {
        let name = name.into();
        let start = Instant::now();
        let detail = f().with_context(|| name.clone())?;
        let label = if detail.is_empty() { name } else { format!("{name}: {detail}") };
        self.0.push((label, start.elapsed()));
        Ok(())
    }
}

fn report(c: &Criterion, f: impl FnOnce(&mut Items) -> Result<()>) -> bool {
    let start = Instant::now();
    let mut items = Items::default();
    let outcome = f(&mut items);
    let total = start.elapsed();
    let slowest = items.0.iter().map(|(_, t)| *t).max().unwrap_or_default();
    let measured = if c.per_item { slowest } else { total };
    let over = measured > c.budget;
    let passed = outcome.is_ok() && !over;
    let budget = if c.per_item { format!("≤ {:?} per item", c.budget) } else { format!("≤ {:?}", c.budget) };
    println!(
        "criterion {:>2} {}  {} [tolerance: {}; runtime {}; took {:.1?}]",
        c.number,
        if passed { "PASS" } else { "FAIL" },
        c.title,
        c.tolerance,
        budget,
        total
    );
    for (label, t) in &items.0 {
        println!("               - {label} ({t:.1?})");
    }
    if let Err(e) = &outcome {
        println!("               ! {e:#}");
    }
    if over {
        println!("               ! over the runtime budget ({measured:.1?})");
    }
    passed
}

fn setup((n, text): (usize, &str)) -> Result<(Hypersurface<Q>, Cover, u32)> {
    let z = Hypersurface::parse(n, text)?;
    let w = required_window(z.degree);
    Ok((z, standard_cover(n)?, w))
}

fn random_element<K: Ord + Clone>(
    degree: i32,
    basis: &[SparseVec<K, Q>],
    ring: &ArtinianAlgebra,
    rng: &mut ChaCha8Rng,
) -> NilpotentElement<K, Q> {
    if basis.is_empty() {
        return NilpotentElement::zero(degree);
    }
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let v = &basis[rng.gen_range(0..basis.len())];
        let mu = rng.gen_range(1..ring.dim());
        let c = qi(rng.gen_range(-3..=3));
        terms.extend(v.iter().map(|(k, x)| (k.clone(), mu, x.clone() * c.clone())));
    }
    NilpotentElement::from_terms(degree, terms)
}

/// `e^a * (e^b * x) = e^{a•b} * x` on random elements of the given bases.
fn gauge_law<L: LieStructure<Q>>(
    lie: &L,
    deg0: &[SparseVec<L::Key, Q>],
    deg1: &[SparseVec<L::Key, Q>],
    ring: &ArtinianAlgebra,
    seed: u64,
) -> Result<String>
where
    L::Key: Debug,
{
    let def = Deformations::new(lie, ring);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nontrivial = 0;
    for _ in 0..INSTANCES {
        let a = random_element(0, deg0, ring, &mut rng);
        let b = random_element(0, deg0, ring, &mut rng);
        let x = random_element(1, deg1, ring, &mut rng);
        let bx = def.gauge_action(&b, &x)?;
        let lhs = def.gauge_action(&a, &bx)?;
        let rhs = def.gauge_action(&def.bch(&a, &b)?, &x)?;
        ensure!(lhs == rhs, "group law fails for a = {a:?}, b = {b:?}, x = {x:?}");
        if bx != x.sub(&def.d(&b)) {
            nontrivial += 1;
        }
    }
    Ok(format!("{INSTANCES} instances, {nontrivial} with nonlinear gauge terms"))
}

const INSTANCES: usize = 100;

fn dgla_basis(l: &Dgla<Q>, degree: i32) -> Vec<SparseVec<usize, Q>> {
    l.space().indices_in_degree(degree).into_iter().map(|i| SparseVec::from([(i, qi(1))])).collect()
}

fn tw_basis<L: LieStructure<Q>>(tw: &TwDgla<'_, Q, L>, degree: i32) -> Vec<SparseVec<deform::simplicial::TwKey<L::Key>, Q>> {
    tw.system.basis_in_degree(degree).iter().map(|v| tw.ambient(v)).collect()
}

fn tw_axioms<L: LieStructure<Q>>(tw: &TwDgla<'_, Q, L>) -> Result<String>
where
    L::Key: Debug,
{
    let r = check_tw_axioms(tw, None)?;
    Ok(format!("{} pairs, {} triples", r.pairs, r.triples))
}

fn criterion_1(items: &mut Items) -> Result<()> {
    let hand = [
        ("sl2", sl2::<Q>()),
        ("heisenberg", heisenberg()),
        ("obstructed", obstructed()),
        ("acyclic pair", acyclic_pair()),
        ("gl2 ⊗ forms", matrix_forms()),
        ("gl3", matrix::gl(3)),
    ];
    for (name, l) in &hand {
        items.run(*name, || Ok(format!("{} triples", l.check_axioms()?.triples)))?;
    }
    let dual = ArtinianAlgebra::dual_numbers();
    let t3 = ArtinianAlgebra::truncated_poly(3)?;
    let plane = ArtinianAlgebra::truncated_total_degree(2, 3)?;
    for (name, l, b) in [("sl2 ⊗ Q[ε]", sl2::<Q>(), &dual), ("heisenberg ⊗ Q[t]/t³", heisenberg(), &t3),
        ("gl2 ⊗ forms ⊗ Q[s,t]/(s,t)³", matrix_forms(), &plane)]
    {
        items.run(name, || Ok(format!("{} triples", l.tensor_with_algebra(b).check_axioms()?.triples)))?;
    }
    let p1 = standard_cover(1)?;
    let p2 = standard_cover(2)?;
    let theta_p1 = cech_lie::<Q>(&p1, Sheaf::Theta, 2)?;
    items.run("Čech Θ_P1 (w 2), levels and tot_TW cap 1", || {
        theta_p1.check()?;
        tw_axioms(&theta_p1.tot_tw(1)?)
    })?;
    let o_m2 = cech_line_bundle::<Q>(&p1, -2, 2)?;
    items.run("Čech O_P1(−2) (w 2), levels and tot_TW cap 1", || {
        o_m2.check()?;
        tw_axioms(&o_m2.tot_tw(1)?)
    })?;
    let theta_p2 = cech_lie::<Q>(&p2, Sheaf::Theta, 1)?;
    items.run("Čech Θ_P2 (w 1), levels and tot_TW cap 1", || {
        theta_p2.check()?;
        tw_axioms(&theta_p2.tot_tw(1)?)
    })?;
    let (z, cover, w) = setup(POINT)?;
    let cone = chart_inclusion(&cover, &z, 0, w)?;
    items.run("cone Θ(−log p) ↪ Θ on U_0 of P1 (w 3), tot_TW cap 1", || {
        cone.check()?;
        tw_axioms(&cone.tot_tw(1)?)
    })?;
    let chi = chi_bisemicosimplicial(&cover, &z, w)?;
    items.run("χ^▲ of a point in P1 (w 3), tot_TW^▲ cap 1", || {
        chi.check()?;
        tw_axioms(&chi.tot_tw_triangle(1)?)
    })?;
    for (name, conf) in [("line", LINE), ("conic", CONIC)] {
        let (z, cover, w) = setup(conf)?;
        items.run(format!("χ^▲ grid of a {name} in P2 (w {w}), cofaces and brackets"), || {
            chi_bisemicosimplicial(&cover, &z, w)?.check()?;
            Ok(String::new())
        })?;
    }
    Ok(())
}

fn criterion_2(items: &mut Items) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases: Vec<(&str, Dgla<Q>, matrix::Rep, ArtinianAlgebra)> = vec![
        ("heisenberg (3×3), Q[t]/t⁶", heisenberg(), matrix::Rep::heisenberg(), ArtinianAlgebra::truncated_poly(6)?),
        ("sl2 (2×2), Q[s,t]/(s,t)⁶", sl2(), matrix::Rep::sl2(), ArtinianAlgebra::truncated_total_degree(2, 6)?),
        ("gl3 (3×3), Q[t]/t⁵", matrix::gl(3), matrix::Rep::gl(3), ArtinianAlgebra::truncated_poly(5)?),
        ("gl4 (4×4), Q[t]/t⁵", matrix::gl(4), matrix::Rep::gl(4), ArtinianAlgebra::truncated_poly(5)?),
    ];
    for (name, l, rep, ring) in &cases {
        items.run(*name, || {
            let def = Deformations::new(l, ring);
            let basis = dgla_basis(l, 0);
            let top = def.series_bound();
            let mut deepest = 0;
            for _ in 0..20 {
                let a = random_element(0, &basis, ring, &mut rng);
                let b = random_element(0, &basis, ring, &mut rng);
                let got = rep.to_matrix(&def.bch(&a, &b)?);
                ensure!(got == matrix::bch_oracle(rep, ring, &a, &b), "bch({a:?}, {b:?}) differs from log(e^A e^B)");
                let parts = def.bch_parts(&a, &b);
                deepest = deepest.max(parts.iter().rposition(|p| !p.is_zero()).map_or(0, |i| i + 1));
            }
            Ok(format!("20 pairs, nonzero words up to order {deepest} (series bound {top})"))
        })?;
    }
    Ok(())
}

fn criterion_3(items: &mut Items) -> Result<()> {
    let t4 = ArtinianAlgebra::truncated_poly(4)?;
    let t3 = ArtinianAlgebra::truncated_poly(3)?;
    let dual = ArtinianAlgebra::dual_numbers();
    let hand = [
        ("sl2", sl2::<Q>()),
        ("heisenberg", heisenberg()),
        ("obstructed", obstructed()),
        ("acyclic pair", acyclic_pair()),
        ("gl2 ⊗ forms", matrix_forms()),
        ("sl2 ⊗ Q[ε]", sl2().tensor_with_algebra(&dual)),
        ("gl2 ⊗ forms ⊗ Q[ε]", matrix_forms().tensor_with_algebra(&dual)),
    ];
    for (seed, (name, l)) in (30..).zip(&hand) {
        items.run(*name, || gauge_law(l, &dgla_basis(l, 0), &dgla_basis(l, 1), &t4, seed))?;
    }
    let p1 = standard_cover(1)?;
    let theta_p1 = cech_lie::<Q>(&p1, Sheaf::Theta, 2)?;
    let tw = theta_p1.tot_tw(1)?;
    items.run("tot_TW Θ_P1", || gauge_law(&tw.lie, &tw_basis(&tw, 0), &tw_basis(&tw, 1), &t3, 40))?;
    let o_m2 = cech_line_bundle::<Q>(&p1, -2, 2)?;
    let tw = o_m2.tot_tw(1)?;
    items.run("tot_TW O_P1(−2)", || gauge_law(&tw.lie, &tw_basis(&tw, 0), &tw_basis(&tw, 1), &t3, 41))?;
    let (z, cover, w) = setup(POINT)?;
    let cone = chart_inclusion(&cover, &z, 0, w)?;
    let tw = cone.tot_tw(1)?;
    items.run("tot_TW cone on U_0", || gauge_law(&tw.lie, &tw_basis(&tw, 0), &tw_basis(&tw, 1), &t3, 42))?;
    let chi = chi_bisemicosimplicial(&cover, &z, w)?;
    let tw = chi.tot_tw_triangle(1)?;
    items.run("tot_TW^▲ χ^▲ point", || gauge_law(&tw.lie, &tw_basis(&tw, 0), &tw_basis(&tw, 1), &t3, 43))?;
    Ok(())
}

fn compare_tot_tw(dgvs: &deform::simplicial::SemicosimplicialDgvs<Q>) -> Result<String> {
    let tot = nonzero_betti(&dgvs.tot()?.betti());
    let tw: Vec<_> = (1..=3).map(|cap| dgvs.tot_tw(cap).map(|t| nonzero_betti(&t.betti()))).collect::<Result<_, _>>()?;
    for (cap, b) in tw.iter().enumerate() {
        ensure!(*b == tot, "cap {}: tot_TW {b:?} ≠ tot {tot:?}", cap + 1);
    }
    Ok(format!("H = {tot:?} at caps 1, 2, 3"))
}

fn criterion_4(items: &mut Items) -> Result<()> {
    let p1 = standard_cover(1)?;
    let p2 = standard_cover(2)?;
    items.run("Θ_P1 (w 2)", || compare_tot_tw(&cech_lie::<Q>(&p1, Sheaf::Theta, 2)?.dgvs))?;
    items.run("O_P1(−2) (w 2)", || compare_tot_tw(&cech_line_bundle::<Q>(&p1, -2, 2)?.dgvs))?;
    items.run("Θ_P2 (w 1)", || compare_tot_tw(&cech_lie::<Q>(&p2, Sheaf::Theta, 1)?.dgvs))?;
    for (name, conf) in [("point in P1", POINT), ("line in P2", LINE), ("conic in P2", CONIC)] {
        let (z, cover, w) = setup(conf)?;
        items.run(format!("cone Θ(−log Z) ↪ Θ on U_0, {name} (w {w})"), || {
            compare_tot_tw(&chart_inclusion(&cover, &z, 0, w)?.dgvs)
        })?;
    }
    Ok(())
}

fn criterion_5(items: &mut Items) -> Result<()> {
    for (name, conf) in [("line", LINE), ("conic", CONIC)] {
        let (z, cover, w) = setup(conf)?;
        items.run(format!("χ^▲ of a {name} (w {w}, cap 1)"), || {
            let g = chi_bisemicosimplicial(&cover, &z, w)?;
            let r = tw_orders_report(&g.dgvs, Some((&g.ambient, &g.embed[..])), 1)?;
            ensure!(r.coincide(), "constructions differ: {r:?}");
            Ok(format!("dims {:?}", r.dims))
        })?;
    }
    Ok(())
}

fn criterion_6(items: &mut Items) -> Result<()> {
    for (name, conf) in [("point in P1", POINT), ("line in P2", LINE), ("conic in P2", CONIC)] {
        let (z, cover, w) = setup(conf)?;
        items.run(format!("χ^▲ of a {name} (w {w})"), || {
            let [t, h, v] = triangle_betti(&chi_bisemicosimplicial(&cover, &z, w)?.dgvs)?;
            let (t, h, v) = (nonzero_betti(&t), nonzero_betti(&h), nonzero_betti(&v));
            ensure!(t == h && t == v, "tot^▲ {t:?}, tot∘tot^H {h:?}, tot∘tot^V {v:?}");
            Ok(format!("H = {t:?}"))
        })?;
    }
    Ok(())
}

const CONFIGURATIONS: [(&str, (usize, &str), usize); 4] =
    [("point in P1", POINT, 1), ("line", LINE, 2), ("conic", CONIC, 5), ("cubic", CUBIC, 9)];

fn criterion_7(items: &mut Items) -> Result<()> {
    for (name, conf, expected) in CONFIGURATIONS {
        let (z, cover, w) = setup(conf)?;
        items.run(format!("{name} (w {w} and {})", w + 2), || {
            let hilb = hilb_tangent(&z, &cover, w)?;
            let normal = normal_sheaf_h0(&z, &cover, w)?;
            ensure!(hilb == expected && normal == expected, "hilb {hilb}, normal sheaf {normal}, expected {expected}");
            Ok(format!("{hilb}"))
        })?;
    }
    Ok(())
}

fn criterion_8(items: &mut Items) -> Result<()> {
    for (name, conf, expected) in CONFIGURATIONS {
        let (z, cover, w) = setup(conf)?;
        items.run(format!("{name} (w {w}, cap 1)"), || {
            let r = functor_crosscheck(&z, &cover, w, 1)?;
            ensure!(r.agree() && r.hilb == expected, "routes {:?}, expected {expected}", r.values());
            Ok(format!("{:?}", r.values()))
        })?;
    }
    Ok(())
}

fn criterion_9(items: &mut Items) -> Result<()> {
    for (name, conf, expected) in &CONFIGURATIONS[1..] {
        let (z, cover, w) = setup(*conf)?;
        items.run(format!("{name} (w {w})"), || {
            let classes = first_order_classes(&z, &cover, w)?;
            ensure!(classes.len() == *expected, "{} classes", classes.len());
            for (c, class) in classes.iter().enumerate() {
                let GluingLift::Lifted { datum, window } = lift_gluing(class, &z, &cover, w)? else {
                    bail!("class {c} reported obstructed");
                };
                ensure!(is_gluing_datum(&datum, &z, &cover, window)?.valid(), "lift of class {c} is not a gluing datum");
                let oracle = equation_lift(class, &z, &cover, w)?.with_context(|| format!("no equation lift of class {c}"))?;
                ensure!(is_gluing_datum(&oracle.datum, &z, &cover, oracle.window)?.valid(), "oracle lift of class {c} invalid");
                let t = datum.ring.index_of(&[1]).context("t in the ring")?;
                for i in 0..cover.len() {
                    ensure!(
                        datum.fields[i].component(t) == class.fields[i].component(1)
                            && oracle.datum.fields[i].component(t) == class.fields[i].component(1),
                        "class {c}: first-order part changed on chart {i}"
                    );
                }
            }
            Ok(format!("{} of {} classes lift to Q[t]/t³", classes.len(), expected))
        })?;
    }
    Ok(())
}

fn criterion_10(items: &mut Items) -> Result<()> {
    items.run("swapped cofaces of Čech Θ_P2", || {
        let mut bad = cech_lie::<Q>(&standard_cover(2)?, Sheaf::Theta, 1)?.dgvs;
        bad.cofaces[1].swap(0, 1);
        match bad.check() {
            Err(e @ SimplicialError::CosimplicialIdentity { .. }) => Ok(format!("witness: {e}")),
            other => bail!("not detected: {other:?}"),
        }
    })?;
    items.run("rescaled inclusion in χ^▲ of a line", || {
        let (z, cover, w) = setup(LINE)?;
        let mut bad = chi_bisemicosimplicial(&cover, &z, w)?.dgvs;
        bad.horizontal[0][1][0] = bad.horizontal[0][1][0].scale(&qi(2));
        match bad.check() {
            Err(e @ BisimplicialError::MixedSquare { .. }) => Ok(format!("witness: {e}")),
            other => bail!("not detected: {other:?}"),
        }
    })?;
    items.run("non-logarithmic field in a conic gluing datum", || {
        let (z, cover, w) = setup(CONIC)?;
        let mut datum = first_order_classes(&z, &cover, w)?.remove(0);
        let bad = window_keys(2, &[0], w)
            .into_iter()
            .find(|k| {
                let on_overlap = deform::geometry::FieldKey { set: vec![0, 1], ..k.clone() };
                !z.is_logarithmic(&SparseVec::from([(on_overlap, qi(1))]))
            })
            .context("a non-logarithmic field")?;
        datum.fields[0] = datum.fields[0].add(&NilpotentElement::from_terms(0, [(bad, 1, qi(1))]));
        let report = is_gluing_datum(&datum, &z, &cover, w)?;
        let f = report.failures.first().context("not detected")?;
        ensure!(z.log_residual(&f.field) == f.residual && !f.residual.is_empty(), "witness does not reproduce");
        ensure!(matches!(lift_gluing(&datum, &z, &cover, w), Err(HilbError::BadDatum(_))), "lifting accepted it");
        Ok(format!("witness: overlap ({}, {}), residual with {} terms", f.i, f.j, f.residual.len()))
    })?;
    Ok(())
}

fn canonical(scenario: &Path) -> Result<String> {
    let out = Command::new(env!("CARGO_BIN_EXE_deform")).arg("run").arg(scenario).output()?;
    ensure!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout)?;
    v.as_object_mut().context("report object")?.remove("timing");
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn criterion_11(items: &mut Items) -> Result<()> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let mut names: Vec<_> = std::fs::read_dir(root.join("golden"))?
        .map(|e| Ok(e?.path().file_stem().context("file name")?.to_string_lossy().into_owned()))
        .collect::<Result<_>>()?;
    names.sort();
    ensure!(!names.is_empty(), "no golden scenarios");
    for name in names {
        items.run(name.clone(), || {
            let scenario = root.join("scenarios").join(format!("{name}.scn"));
            let (first, second) = (canonical(&scenario)?, canonical(&scenario)?);
            ensure!(first == second, "runs differ");
            let golden = std::fs::read_to_string(root.join("golden").join(format!("{name}.json")))?;
            ensure!(first == golden, "differs from the golden report");
            Ok(format!("{} bytes, identical twice and to golden", first.len()))
        })?;
    }
    Ok(())
}

type Check = fn(&mut Items) -> Result<()>;

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let criteria: [(Criterion, Check); 11] = [
        (Criterion { number: 1, title: "DGLA axioms on every constructed algebra", tolerance: "exact", budget: SECONDS, per_item: true }, criterion_1),
        (Criterion { number: 2, title: "BCH against log(exp A · exp B), matrices up to 4×4", tolerance: "exact", budget: Duration::from_secs(1), per_item: false }, criterion_2),
        (Criterion { number: 3, title: "gauge group law, 100 instances per DGLA", tolerance: "exact", budget: SECONDS, per_item: true }, criterion_3),
        (Criterion { number: 4, title: "tot vs tot_TW at caps 1, 2 with cap stability", tolerance: "exact", budget: min(1), per_item: true }, criterion_4),
        (Criterion { number: 5, title: "Thom-Whitney order independence on χ^▲", tolerance: "exact structure constants", budget: min(2), per_item: false }, criterion_5),
        (Criterion { number: 6, title: "tot^▲ vs tot∘tot^H vs tot∘tot^V", tolerance: "exact", budget: min(1), per_item: false }, criterion_6),
        (Criterion { number: 7, title: "hilb tangent = H⁰ of the normal sheaf: 1, 2, 5, 9", tolerance: "exact, w and w+2 agree", budget: min(2), per_item: false }, criterion_7),
        (Criterion { number: 8, title: "four functor routes agree at first order", tolerance: "exact", budget: min(5), per_item: false }, criterion_8),
        (Criterion { number: 9, title: "second-order lifts match the equation oracle", tolerance: "exact", budget: min(5), per_item: false }, criterion_9),
        (Criterion { number: 10, title: "negative controls detected with a witness", tolerance: "exact", budget: SECONDS, per_item: false }, criterion_10),
        (Criterion { number: 11, title: "deterministic canonical reports", tolerance: "byte-identical", budget: min(5), per_item: false }, criterion_11),
    ];
    let mut failed = Vec::new();
    for (c, f) in &criteria {
        if !report(c, f) {
            failed.push(c.number);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
