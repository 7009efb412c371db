//! Task execution: each task adds results and assertions to the report.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{Context as _, Result};
use deform::bisimplicial::{triangle_betti, tw_orders_report};
use deform::dgla::{Deformations, NilpotentElement};
use deform::geometry::{
    cech_lie, chi_bisemicosimplicial, required_window, stable_at, standard_cover, window_keys, CechSections, Cover,
    Hypersurface, Sheaf, ThetaLie,
};
use deform::graded::nonzero_betti;
use deform::hilb::{
    equation_lift, first_order_classes, functor_crosscheck, hilb_tangent, is_gluing_datum, lift_gluing, normal_sheaf_h0,
    GluingLift,
};
use deform::simplicial::check_tw_axioms;
use deform::{qi, Q};
use serde_json::{json, Value};

use crate::report::{Report, ScenarioEcho};
use crate::scenario::{Scenario, Task};

/// Window used for the tangent sheaf alone.
const THETA_WINDOW: u32 = 2;

/// Window of the Thom-Whitney algebra whose axioms are checked
/// exhaustively; larger windows make the cubic check impractical.
const TW_AXIOM_WINDOW: u32 = 1;

struct Context<'a> {
    scenario: &'a Scenario,
    cover: Cover,
    z: Option<Hypersurface<Q>>,
    window: u32,
    cap: u32,
    verbose: bool,
}

impl Context<'_> {
    fn z(&self) -> &Hypersurface<Q> {
        self.z.as_ref().expect("validated: task needs a subscheme")
    }

    fn sheaves(&self) -> Vec<(&'static str, Sheaf<'_, Q>)> {
        let mut out = vec![("theta", Sheaf::Theta)];
        if let Some(z) = &self.z {
            out.push(("log_theta", Sheaf::LogTheta(z)));
        }
        out
    }
}

fn betti_json(b: &BTreeMap<i32, usize>) -> Value {
    Value::Object(nonzero_betti(b).into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

/// Runs every task of the scenario. Errors are input or stability errors;
/// failed checks are recorded as assertions instead.
pub fn run(scenario: &Scenario, verbose: bool) -> Result<Report> {
    let cover = standard_cover(scenario.variety)?;
    let z = match &scenario.subscheme {
        Some(text) => Some(Hypersurface::parse(scenario.variety, text).context("key `subscheme`")?),
        None => None,
    };
    let default_window = z.as_ref().map_or(THETA_WINDOW, |z| required_window(z.degree));
    let window = scenario.window.unwrap_or(default_window);
    let ctx = Context { scenario, cover, z, window, cap: scenario.apl_degree_cap, verbose };
    let mut report = Report::new(ScenarioEcho::new(scenario, window));
    if let Some(t) = ctx.z.as_ref().and_then(|z| z.coordinate_change) {
        report.result("coordinate_change", t, "geometry::Hypersurface (X_i ↦ X_i + t·Σ_{j≠i}(j+1)X_j)", None);
    }
    for &task in &scenario.tasks {
        if ctx.verbose {
            eprintln!("running {task}");
        }
        let start = Instant::now();
        match task {
            Task::Axioms => axioms(&ctx, &mut report),
            Task::Cech => cech(&ctx, &mut report),
            Task::Cohomology => cohomology(&ctx, &mut report),
            Task::TotCompare => tot_compare(&ctx, &mut report),
            Task::TwOrders => tw_orders(&ctx, &mut report),
            Task::Tangent => tangent(&ctx, &mut report),
            Task::Lift => lift(&ctx, &mut report),
            Task::Crosscheck => crosscheck(&ctx, &mut report),
        }
        .with_context(|| format!("task `{task}`"))?;
        let secs = start.elapsed().as_secs_f64();
        report.timing.insert(task.name().into(), json!((secs * 1000.0).round() / 1000.0));
    }
    Ok(report)
}

fn axioms(ctx: &Context, report: &mut Report) -> Result<()> {
    let mut checked = 0;
    for (name, sheaf) in ctx.sheaves() {
        let l = cech_lie(&ctx.cover, sheaf, ctx.window)?;
        report.assert_ok(&format!("axioms.{name}_cech"), l.check());
        checked += 1;
    }
    let small = cech_lie(&ctx.cover, Sheaf::<Q>::Theta, TW_AXIOM_WINDOW)?;
    let small = small.tot_tw(ctx.cap)?;
    report.assert_ok("axioms.theta_tot_tw", check_tw_axioms(&small, Some(&[0, 1])).map(|_| ()));
    report.result("axioms.tot_tw_window", TW_AXIOM_WINDOW, "simplicial::check_tw_axioms (degrees 0, 1)", None);
    checked += 1;
    if let Some(z) = &ctx.z {
        let g = chi_bisemicosimplicial(&ctx.cover, z, ctx.window)?;
        report.assert_ok("axioms.chi_grid", g.check());
        checked += 1;
    }
    // BCH associativity on Θ(U_0) ⊗ m_A for fixed elements
    let ring = ctx.scenario.ring.algebra();
    let lie = ThetaLie { n: ctx.cover.n };
    let def = Deformations::new(&lie, &ring);
    let keys = window_keys(ctx.cover.n, &[0], ctx.window);
    let elem = |offset: usize| {
        NilpotentElement::from_terms(
            0,
            keys.iter()
                .enumerate()
                .skip(offset)
                .step_by(3)
                .take(4)
                .flat_map(|(i, k)| (1..ring.dim()).map(move |mu| (k.clone(), mu, qi((i + mu) as i64 % 5 - 2)))),
        )
    };
    let (a, b, c) = (elem(0), elem(1), elem(2));
    let lhs = def.bch(&a, &def.bch(&b, &c)?)?;
    let rhs = def.bch(&def.bch(&a, &b)?, &c)?;
    report.assert("axioms.bch_associative", true, lhs == rhs);
    report.result("axioms", checked + 1, "dgla: exhaustive skew/Jacobi/Leibniz and coface checks", None);
    Ok(())
}

fn cech(ctx: &Context, report: &mut Report) -> Result<()> {
    report.assert_ok("cech.transitions", ctx.cover.check_transitions());
    for (name, sheaf) in ctx.sheaves() {
        let secs = CechSections::build(&ctx.cover, sheaf, ctx.window)?;
        let dims: Vec<usize> = (0..ctx.cover.num_levels()).map(|n| secs.level_dim(n)).collect();
        report.result(&format!("cech.{name}"), dims, "geometry::CechSections (windowed section spaces per level)", None);
    }
    Ok(())
}

fn cohomology(ctx: &Context, report: &mut Report) -> Result<()> {
    for (name, sheaf) in ctx.sheaves() {
        let b = stable_at(name, ctx.window, |w| Ok(nonzero_betti(&cech_lie(&ctx.cover, sheaf, w)?.dgvs.tot()?.betti())))?;
        report.result(&format!("cohomology.{name}"), betti_json(&b), "simplicial::tot (Čech complex)", Some(ctx.window));
    }
    Ok(())
}

fn tot_compare(ctx: &Context, report: &mut Report) -> Result<()> {
    for (name, sheaf) in ctx.sheaves() {
        let l = cech_lie(&ctx.cover, sheaf, ctx.window)?;
        let tot = nonzero_betti(&l.dgvs.tot()?.betti());
        report.result(&format!("tot_compare.{name}.tot"), betti_json(&tot), "simplicial::tot", None);
        for cap in [ctx.cap, ctx.cap + 1] {
            let tw = nonzero_betti(&l.dgvs.tot_tw(cap)?.betti());
            report.result(&format!("tot_compare.{name}.tot_tw_cap{cap}"), betti_json(&tw), "simplicial::tot_tw", None);
            report.assert(&format!("tot_compare.{name}.cap{cap}"), betti_json(&tot), betti_json(&tw));
        }
    }
    if let Some(z) = &ctx.z {
        let g = chi_bisemicosimplicial(&ctx.cover, z, ctx.window)?;
        let [t, h, v] = triangle_betti(&g.dgvs)?;
        let t = nonzero_betti(&t);
        report.result("tot_compare.chi.tot_triangle", betti_json(&t), "bisimplicial::tot_triangle", None);
        report.assert("tot_compare.chi.horizontal_first", betti_json(&t), betti_json(&h));
        report.assert("tot_compare.chi.vertical_first", betti_json(&t), betti_json(&v));
        let tw = g.dgvs.tot_tw_triangle(ctx.cap)?.betti();
        report.assert("tot_compare.chi.tot_tw_triangle", betti_json(&t), betti_json(&tw));
    }
    Ok(())
}

fn tw_orders(ctx: &Context, report: &mut Report) -> Result<()> {
    let g = chi_bisemicosimplicial(&ctx.cover, ctx.z(), ctx.window)?;
    let r = tw_orders_report(&g.dgvs, Some((&g.ambient, &g.embed[..])), ctx.cap)?;
    let dims: BTreeMap<i32, usize> = r.dims.clone();
    report.result("tw_orders.dims", betti_json(&dims), "bisimplicial::tw_orders_report (direct construction)", None);
    report.assert("tw_orders.rows_first", true, r.rows_first_equal);
    report.assert("tw_orders.columns_first", true, r.columns_first_equal);
    report.assert("tw_orders.differential", true, r.differential_equal);
    report.assert("tw_orders.bracket", true, r.bracket_equal);
    Ok(())
}

fn tangent(ctx: &Context, report: &mut Report) -> Result<()> {
    let (z, w) = (ctx.z(), ctx.window);
    let h = hilb_tangent(z, &ctx.cover, w)?;
    let n = normal_sheaf_h0(z, &ctx.cover, w)?;
    report.result("tangent", h, "hilb::hilb_tangent (first-order logarithmic gluing data)", Some(w));
    report.result("normal_sheaf_h0", n, "hilb::normal_sheaf_h0 (Čech H⁰ of Θ/Θ(−log Z))", Some(w));
    report.assert("tangent.matches_normal_sheaf", n, h);
    Ok(())
}

fn lift(ctx: &Context, report: &mut Report) -> Result<()> {
    let (z, w) = (ctx.z(), ctx.window);
    let classes = first_order_classes(z, &ctx.cover, w)?;
    let (mut lifted, mut oracle) = (0, 0);
    for class in &classes {
        if let GluingLift::Lifted { datum, window } = lift_gluing(class, z, &ctx.cover, w)? {
            if is_gluing_datum(&datum, z, &ctx.cover, window)?.valid() {
                lifted += 1;
            }
        }
        if let Some(e) = equation_lift(class, z, &ctx.cover, w)? {
            if is_gluing_datum(&e.datum, z, &ctx.cover, e.window)?.valid() {
                oracle += 1;
            }
        }
    }
    let target = format!("t^{}", ctx.scenario.lift_order);
    report.result("lift.classes", classes.len(), "hilb::first_order_classes", None);
    report.result("lift.lifted", lifted, &format!("hilb::lift_gluing (order-2 gluing equations, {target})"), None);
    report.result("lift.equation_oracle", oracle, &format!("hilb::equation_lift (F + tG, {target})"), None);
    report.assert("lift.every_class_lifts", classes.len(), lifted);
    report.assert("lift.matches_oracle", oracle, lifted);
    Ok(())
}

fn crosscheck(ctx: &Context, report: &mut Report) -> Result<()> {
    let r = functor_crosscheck(ctx.z(), &ctx.cover, ctx.window, ctx.cap)?;
    report.result("crosscheck.hilb", r.hilb, "hilb::hilb_tangent_at", None);
    report.result("crosscheck.tw_triangle", r.tw_triangle, "tangent_def of tot_tw_triangle(χ^▲)", None);
    report.result("crosscheck.h1_sc", r.h1_sc, "h1_sc_tangent of the row-first T^Δ", None);
    report.result("crosscheck.def_chi", r.def_chi, "first-order Def_χ of χ_TW", None);
    report.assert("crosscheck.agree", json!(vec![r.hilb; 4]), json!(r.values()));
    Ok(())
}
