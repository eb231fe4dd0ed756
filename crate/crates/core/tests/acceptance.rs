//! One line per gating criterion, plus a non-gating geometry diagnostic.
//! Exits non-zero when any gating line fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use technic::bom::{format_price, Catalog, Vendor};
use technic::locus::{
    certify, constraint_ideal, extract_linear_factors, locus_equation, LocusResult, Verdict,
};
use technic::model::{builtin_model, BuiltinModel, MODEL_NAMES};
use technic::poly::{
    buchberger_with, reduce, s_polynomial, GroebnerConfig, Monomial, MonomialOrder, MultiPoly, Rat,
    Ring,
};
use technic::solver::{
    fit_points, flip_branch, seed_configuration, straightness_stats, trace, trace_both_ways,
    trace_from, SolverSettings, Trace,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(name: &str) -> BuiltinModel {
    builtin_model(name).unwrap()
}

fn locus(name: &str) -> LocusResult {
    locus_equation(&model(name).spec).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Both ways from the seed until the linkage locks.
fn full_trace(m: &BuiltinModel, settings: &SolverSettings) -> Trace {
    let seed = seed_configuration(&m.spec, m.seed_angle, settings).unwrap();
    trace_both_ways(&m.spec, &seed, PI, settings).unwrap()
}

fn window_trace(m: &BuiltinModel) -> (Trace, (f64, f64)) {
    let w = m.straight_window.unwrap_or(m.sweep);
    (
        trace(&m.spec, w.0, w.1, &SolverSettings::default()).unwrap(),
        w,
    )
}

fn degrees() -> Check {
    let t = Instant::now();
    let watt = locus("watt");
    let watt_time = t.elapsed().as_secs_f64();
    ensure(watt.total_degree == 6, || {
        format!("watt degree {}", watt.total_degree)
    })?;
    ensure(watt_time < 60.0, || format!("watt took {watt_time:.1} s"))?;
    for name in ["chebyshev", "chebyshev_lambda"] {
        let l = locus(name);
        ensure(l.total_degree == 6, || {
            format!("{name} degree {}", l.total_degree)
        })?;
    }
    let hart = locus("hart_inversor");
    ensure(hart.total_degree == 7, || {
        format!("hart degree {}", hart.total_degree)
    })?;
    ensure(hart.linear_factor_count() == 1, || {
        format!("hart has {} lines", hart.linear_factor_count())
    })?;
    ensure(hart.residual_cofactor.total_degree() == Some(6), || {
        "hart cofactor is not a sextic".into()
    })?;
    let compass = locus("compass");
    ensure(
        compass.locus.to_normalized_string() == "x^2 + y^2 - 16",
        || format!("compass locus {}", compass.locus.to_normalized_string()),
    )?;
    Ok(format!(
        "watt 6 ({:.0} ms), chebyshev 6, lambda 6, hart 7 = 1 + {}, compass circle r = 4",
        watt_time * 1e3,
        hart.residual_cofactor.total_degree().unwrap()
    ))
}

fn certificates() -> Check {
    let mut out = Vec::new();
    for (name, exact) in [
        ("hart_inversor", true),
        ("hart_aframe", true),
        ("chebyshev", false),
        ("chebyshev_lambda", false),
        ("watt", false),
        ("compass", false),
    ] {
        let m = model(name);
        let (t, w) = window_trace(&m);
        let cert = certify(&m.spec, &t, w, &locus(name)).map_err(|e| format!("{name}: {e}"))?;
        let got = matches!(cert.verdict, Verdict::ExactLine { .. });
        ensure(got == exact, || format!("{name}: {:?}", cert.verdict))?;
        out.push(format!(
            "{name} {}",
            if exact { "exact" } else { "approximate" }
        ));
    }
    Ok(out.join(", "))
}

fn trace_invariants() -> Check {
    let settings = SolverSettings::default();
    let mut worst: f64 = 0.0;
    for name in MODEL_NAMES {
        let t = full_trace(&model(name), &settings);
        ensure(t.samples.len() > 20, || {
            format!("{name}: {} samples", t.samples.len())
        })?;
        for s in &t.samples {
            worst = worst.max(s.residual);
        }
        ensure(worst < 1e-12, || format!("{name}: residual {worst:e}"))?;
    }

    let compass = full_trace(&model("compass"), &settings);
    for s in &compass.samples {
        let r = s.point[0].hypot(s.point[1]);
        ensure((r - 4.0).abs() < 1e-9, || {
            format!("compass radius {r} at {}", s.theta)
        })?;
    }

    let mut halving: f64 = 0.0;
    for name in MODEL_NAMES {
        let m = model(name);
        let sweep = |step: f64| {
            let s = SolverSettings {
                initial_step: step,
                ..SolverSettings::default()
            };
            let seed = seed_configuration(&m.spec, m.sweep.0, &s).unwrap();
            trace_from(&m.spec, &seed, m.sweep.1, &s).unwrap()
        };
        let (coarse, fine) = (sweep(0.02), sweep(0.01));
        for c in &coarse.samples {
            if let Some(f) = fine.samples.iter().find(|f| f.theta == c.theta) {
                halving = halving.max((c.point[0] - f.point[0]).hypot(c.point[1] - f.point[1]));
            }
        }
    }
    ensure(halving < 1e-8, || {
        format!("step halving moved a sample by {halving:e}")
    })?;

    let hart = model("hart_inversor");
    let straight = full_trace(&hart, &settings);
    let on_line = straight
        .samples
        .iter()
        .map(|s| (2.0 * s.point[0] + 3.0).abs() / 2.0)
        .fold(0.0, f64::max);
    ensure(on_line < 1e-9, || {
        format!("hart straight branch off the line by {on_line:e}")
    })?;

    let l = locus("hart_inversor");
    let cof = &l.residual_cofactor;
    let seed = seed_configuration(&hart.spec, hart.seed_angle, &settings).unwrap();
    let flipped = flip_branch(&hart.spec, &seed, &"C".into()).map_err(|e| e.to_string())?;
    let other = trace_both_ways(&hart.spec, &flipped, PI, &settings).map_err(|e| e.to_string())?;
    ensure(other.samples.len() > 20, || {
        format!("flipped branch: {} samples", other.samples.len())
    })?;
    let norm = cof.coefficient_norm();
    let mut cof_worst: f64 = 0.0;
    let mut line_far: f64 = 0.0;
    for s in &other.samples {
        let scale = norm * (1.0 + s.point[0].hypot(s.point[1])).powi(6);
        cof_worst = cof_worst.max(cof.eval_f64(&s.point).abs() / scale);
        line_far = line_far.max((2.0 * s.point[0] + 3.0).abs() / 2.0);
    }
    ensure(cof_worst < 1e-12, || {
        format!("flipped branch off the sextic by {cof_worst:e}")
    })?;
    ensure(line_far > 1.0, || {
        format!("flipped branch stays within {line_far} of the line")
    })?;

    Ok(format!(
        "residual {worst:.1e}, compass radius 4, halving {halving:.1e}, hart line {on_line:.1e}, \
         flipped branch on sextic {cof_worst:.1e} and up to {line_far:.2} off the line"
    ))
}

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn poly(
    nvars: usize,
    max_exp: u16,
    max_terms: usize,
) -> impl Strategy<Value = Vec<(Vec<u16>, Rat)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), rat()),
        0..=max_terms,
    )
}

fn build(ring: &Arc<Ring>, t: &[(Vec<u16>, Rat)]) -> MultiPoly {
    MultiPoly::from_terms(
        ring,
        t.iter()
            .map(|(e, c)| (Monomial::from_exponents(e.clone()), c.clone())),
    )
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    )
}

fn s_pairs_vanish(basis: &[MultiPoly]) -> bool {
    basis.iter().enumerate().all(|(i, f)| {
        basis[i + 1..]
            .iter()
            .all(|g| reduce(&s_polynomial(f, g), basis).remainder.is_zero())
    })
}

fn symbolic_suite() -> Check {
    let ring = Ring::new(["x", "y", "z"], MonomialOrder::GrevLex);
    let r = ring.clone();
    runner(1000)
        .run(
            &(poly(3, 3, 6), poly(3, 3, 6), poly(3, 3, 6)),
            move |(a, b, c)| {
                let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a + &b) - &b, a.clone());
                Ok(())
            },
        )
        .map_err(|e| format!("ring axioms: {e}"))?;

    let mut bases = 0;
    let r = ring.clone();
    let mut random_bases = runner(64);
    random_bases
        .run(
            &(prop::collection::vec(poly(3, 2, 3), 1..=3), any::<bool>()),
            |(gens, lex)| {
                let order = if lex {
                    MonomialOrder::Lex
                } else {
                    MonomialOrder::GrevLex
                };
                let gens: Vec<MultiPoly> = gens
                    .iter()
                    .map(|t| build(&r, t).with_order(order.clone()))
                    .filter(|p| !p.is_zero())
                    .collect();
                if gens.is_empty() {
                    return Ok(());
                }
                if let Ok(gb) =
                    buchberger_with(&gens, &order, &GroebnerConfig { pair_budget: 2_000 })
                {
                    prop_assert!(s_pairs_vanish(gb.polys()));
                }
                Ok(())
            },
        )
        .map_err(|e| format!("random bases: {e}"))?;
    for name in ["compass", "chebyshev", "watt"] {
        let ideal = constraint_ideal(&model(name).spec);
        let gb = buchberger_with(
            &ideal.generators,
            &MonomialOrder::GrevLex,
            &GroebnerConfig {
                pair_budget: 20_000,
            },
        )
        .map_err(|e| format!("{name}: {e}"))?;
        ensure(s_pairs_vanish(gb.polys()), || {
            format!("{name} basis has a nonzero S-polynomial")
        })?;
        bases += 1;
    }

    let r = ring.clone();
    runner(300)
        .run(
            &(poly(3, 4, 8), poly(3, 2, 3), poly(3, 2, 3)),
            move |(p, f, g)| {
                let p = build(&r, &p);
                let divisors = [build(&r, &f), build(&r, &g)];
                prop_assert_eq!(reduce(&p, &divisors).recombine(&divisors), p);
                Ok(())
            },
        )
        .map_err(|e| format!("division: {e}"))?;

    let mut factored = 0;
    for name in ["hart_inversor", "hart_aframe", "watt", "chebyshev"] {
        let l = locus(name);
        let f = extract_linear_factors(&l.locus, &[]);
        ensure(f.product() == l.locus, || {
            format!("{name}: factors do not multiply back")
        })?;
        factored += 1;
    }
    let plane = Ring::new(["x", "y"], MonomialOrder::GrevLex);
    runner(300)
        .run(
            &(
                prop::collection::vec((rat(), rat(), rat()), 0..=3),
                poly(2, 2, 4),
            ),
            move |(lines, rest)| {
                let mut p = build(&plane, &rest);
                if p.is_zero() {
                    return Ok(());
                }
                for (a, b, c) in &lines {
                    let l = &(&MultiPoly::var(&plane, 0).scale(a)
                        + &MultiPoly::var(&plane, 1).scale(b))
                        + &MultiPoly::constant(&plane, c.clone());
                    if !l.is_zero() {
                        p = &p * &l;
                    }
                }
                prop_assert_eq!(extract_linear_factors(&p, &[]).product(), p);
                Ok(())
            },
        )
        .map_err(|e| format!("factor product: {e}"))?;

    Ok(format!(
        "1000 ring-axiom triples, S-pairs of 64 random and {bases} linkage bases, 300 divisions, \
         {factored} loci and 300 random products re-multiplied"
    ))
}

fn table_one() -> Check {
    let t = Instant::now();
    let cat = Catalog::shipped();
    let mut counts = Vec::new();
    for (name, total) in [
        ("compass", 3),
        ("chebyshev", 12),
        ("chebyshev_lambda", 10),
        ("watt", 21),
        ("hart_inversor", 14),
    ] {
        let n = cat.bom(name).map_err(|e| e.to_string())?.total();
        ensure(n == total, || format!("{name}: {n} parts"))?;
        counts.push(format!("{name} {n}"));
    }
    let names: Vec<&str> = cat.model_names().collect();
    let set = cat.set_union(&names).map_err(|e| e.to_string())?;
    ensure(set.total() == 24, || {
        format!("set of {} parts", set.total())
    })?;
    let owl = cat
        .price(&set, Vendor::BrickOwl)
        .map_err(|e| e.to_string())?;
    let link = cat
        .price(&set, Vendor::BrickLink)
        .map_err(|e| e.to_string())?;
    let exact = |n: i64, d: i64| Rat::new(BigInt::from(n), BigInt::from(d));
    ensure(owl == exact(1123, 1000), || format!("brickowl {owl}"))?;
    ensure(link == exact(4048, 10000), || format!("bricklink {link}"))?;
    Ok(format!(
        "{}, set 24, {} and {} EUR, {:.1} ms",
        counts.join(", "),
        format_price(&owl),
        format_price(&link),
        t.elapsed().as_secs_f64() * 1e3
    ))
}

/// Not gating: the build dimensions are reconstructions.
fn geometry() -> (bool, String) {
    let watt = model("watt");
    let (t, w) = window_trace(&watt);
    let stats = straightness_stats(&t, w).unwrap();
    let watt_mm = stats.span_mm();

    let hart = model("hart_inversor");
    let pts = full_trace(&hart, &SolverSettings::default()).points();
    let hart_mm = fit_points(&pts).unwrap().span_mm();

    let band = |got: f64, claimed: f64| got >= claimed / 2.0 && got <= claimed * 2.0;
    let ok = band(watt_mm, 70.0) && band(hart_mm, 20.0) && hart_mm < watt_mm;
    (
        ok,
        format!(
            "watt window {watt_mm:.1} mm (deviation {:.3} mm) vs about 70, hart line {hart_mm:.1} mm vs about 20",
            stats.max_deviation_mm()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 5] = [
        ("degree reproduction", degrees),
        ("certificate dichotomy", certificates),
        ("trace invariants", trace_invariants),
        ("symbolic property suite", symbolic_suite),
        ("parts table reproduction", table_one),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    let (ok, detail) = geometry();
    println!(
        "{}  order-of-magnitude geometry (diagnostic): {detail}",
        if ok { "PASS" } else { "WARN" }
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
