use std::f64::consts::PI;

use technic::locus::locus_equation;
use technic::model::{builtin_model, load, save, MODEL_NAMES};
use technic::solver::{seed_configuration, trace_both_ways, SolverSettings};

/// The implicit equation must vanish, relative to its size, at every traced
/// pen position.
#[test]
fn traced_points_satisfy_the_locus() {
    let settings = SolverSettings::default();
    for name in MODEL_NAMES {
        let m = builtin_model(name).unwrap();
        let l = locus_equation(&m.spec).unwrap();
        let norm = l.locus.coefficient_norm();
        let deg = l.total_degree as i32;
        let seed = seed_configuration(&m.spec, m.seed_angle, &settings).unwrap();
        let t = trace_both_ways(&m.spec, &seed, PI, &settings).unwrap();
        for s in &t.samples {
            let scale = norm * (1.0 + s.point[0].hypot(s.point[1])).powi(deg);
            let r = l.locus.eval_f64(&s.point).abs() / scale;
            assert!(r < 1e-12, "{name} at {}: {r:e}", s.theta);
        }
    }
}

#[test]
fn both_chebyshev_mechanisms_draw_the_same_curve() {
    let a = locus_equation(&builtin_model("chebyshev").unwrap().spec).unwrap();
    let b = locus_equation(&builtin_model("chebyshev_lambda").unwrap().spec).unwrap();
    assert_eq!(
        a.locus.to_normalized_string(),
        b.locus.to_normalized_string()
    );
}

#[test]
fn the_a_frame_splits_off_its_guide_line() {
    let l = locus_equation(&builtin_model("hart_aframe").unwrap().spec).unwrap();
    assert_eq!(l.total_degree, 7);
    assert_eq!(l.factors.len(), 1);
    assert_eq!(l.factors[0].0.to_normalized_string(), "x - 4");
}

#[test]
fn saved_models_reload_unchanged() {
    for name in MODEL_NAMES {
        let spec = builtin_model(name).unwrap().spec;
        assert_eq!(load(&save(&spec)).unwrap(), spec, "{name}");
    }
}
