use serde::Serialize;

use super::{LocusError, LocusResult, MIN_WINDOW_SAMPLES};
use crate::model::LinkageSpec;
use crate::poly::{rat_to_f64, MultiPoly, Rat};
use crate::solver::{fit_points, StraightnessStats, Trace, TraceSample};

/// Largest distance from a linear factor at which a sample still counts as on it.
pub const ON_LINE_TOLERANCE: f64 = 1e-9;

pub const BEZOUT_RATIONALE: &str =
    "a line meets an irreducible curve of degree n > 1 in at most n points, \
so a traced stretch that does not lie on a linear factor of the locus contains no straight segment";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// `a·x + b·y + c = 0` with coprime integers.
    ExactLine { a: String, b: String, c: String },
    Approximate {
        /// Units.
        max_deviation: f64,
        window: (f64, f64),
        stats: StraightnessStats,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    /// The linear factor carrying the samples, in normalized text.
    pub factor: Option<String>,
    /// Largest sample distance to each linear factor.
    pub line_distances: Vec<(String, f64)>,
    /// Largest `|cofactor|` over the samples, relative to its biggest coefficient.
    pub cofactor_residual: Option<f64>,
    pub samples: usize,
    /// Anything that needs a human look, e.g. disagreeing locus generators.
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StraightnessCertificate {
    pub model: String,
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub rationale: &'static str,
}

impl StraightnessCertificate {
    pub fn is_exact_line(&self) -> bool {
        matches!(self.verdict, Verdict::ExactLine { .. })
    }
}

fn windowed(trace: &Trace, window: (f64, f64)) -> Result<Vec<&TraceSample>, LocusError> {
    let samples = trace.window(window.0, window.1);
    if samples.len() < MIN_WINDOW_SAMPLES {
        return Err(LocusError::TooFewSamples(samples.len()));
    }
    Ok(samples)
}

fn line_coeffs(f: &MultiPoly) -> [Rat; 3] {
    let zero = Rat::from_integer(0.into());
    let one = Rat::from_integer(1.into());
    let c = f.eval(&[zero.clone(), zero.clone()]);
    let a = f.eval(&[one.clone(), zero.clone()]) - &c;
    let b = f.eval(&[zero, one]) - &c;
    [a, b, c]
}

/// Largest distance of the points from the line `f = 0`.
fn distance(f: &MultiPoly, pts: &[[f64; 2]]) -> f64 {
    let [a, b, c] = line_coeffs(f).map(|v| rat_to_f64(&v));
    let n = a.hypot(b);
    pts.iter()
        .map(|p| (a * p[0] + b * p[1] + c).abs() / n)
        .fold(0.0, f64::max)
}

fn approximate(pts: &[[f64; 2]], window: (f64, f64)) -> Verdict {
    let stats = fit_points(pts).expect("window checked to hold enough samples");
    Verdict::Approximate {
        max_deviation: stats.max_deviation,
        window,
        stats,
    }
}

/// Decides whether the windowed stretch of `trace` is an exact line by
/// checking which factor of the locus the samples lie on.
pub fn certify(
    spec: &LinkageSpec,
    trace: &Trace,
    window: (f64, f64),
    locus: &LocusResult,
) -> Result<StraightnessCertificate, LocusError> {
    let samples = windowed(trace, window)?;
    let pts: Vec<[f64; 2]> = samples.iter().map(|s| s.point).collect();

    let line_distances: Vec<(String, f64)> = locus
        .factors
        .iter()
        .map(|(f, _)| (f.to_normalized_string(), distance(f, &pts)))
        .collect();
    let on = locus
        .factors
        .iter()
        .zip(&line_distances)
        .find(|(_, (_, d))| *d < ON_LINE_TOLERANCE)
        .map(|((f, _), _)| f);

    let cof = &locus.residual_cofactor;
    let cofactor_residual = (!cof.is_constant()).then(|| {
        let scale = cof.coefficient_norm();
        pts.iter()
            .map(|p| cof.eval_f64(p).abs() / scale)
            .fold(0.0, f64::max)
    });

    let mut diagnostics = Vec::new();
    if let Some(f) = on {
        for (k, alt) in locus.alternatives.iter().enumerate() {
            if !matches!(alt.divide_exact(f), Ok(Some(_))) {
                diagnostics.push(format!(
                    "locus generator {} of the same degree is not divisible by {}",
                    k + 2,
                    f.to_normalized_string()
                ));
            }
        }
    }

    let verdict = match on {
        Some(f) => {
            let [a, b, c] = line_coeffs(f);
            Verdict::ExactLine {
                a: a.to_string(),
                b: b.to_string(),
                c: c.to_string(),
            }
        }
        None => approximate(&pts, window),
    };
    Ok(StraightnessCertificate {
        model: spec.name.clone(),
        verdict,
        evidence: Evidence {
            factor: on.map(|f| f.to_normalized_string()),
            line_distances,
            cofactor_residual,
            samples: pts.len(),
            diagnostics,
        },
        rationale: BEZOUT_RATIONALE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::locus_equation;
    use crate::model::builtin_model;
    use crate::solver::{trace, SolverSettings};

    fn run(name: &str) -> StraightnessCertificate {
        let m = builtin_model(name).unwrap();
        let window = m.straight_window.unwrap();
        let t = trace(&m.spec, window.0, window.1, &SolverSettings::default()).unwrap();
        let locus = locus_equation(&m.spec).unwrap();
        certify(&m.spec, &t, window, &locus).unwrap()
    }

    #[test]
    fn hart_draws_an_exact_line() {
        let c = run("hart_inversor");
        assert_eq!(
            c.verdict,
            Verdict::ExactLine {
                a: "2".into(),
                b: "0".into(),
                c: "3".into()
            }
        );
        assert_eq!(c.evidence.factor.as_deref(), Some("2*x + 3"));
        assert!(c.evidence.diagnostics.is_empty());
    }

    #[test]
    fn chebyshev_is_only_close() {
        let c = run("chebyshev");
        let Verdict::Approximate { max_deviation, .. } = c.verdict else {
            panic!("{c:?}")
        };
        assert!(
            max_deviation > 1e-4 && max_deviation < 0.1,
            "{max_deviation}"
        );
        assert!(c.evidence.cofactor_residual.unwrap() < 1e-9);
    }

    #[test]
    fn short_windows_are_refused() {
        let m = builtin_model("hart_inversor").unwrap();
        let t = trace(&m.spec, 2.0, 2.05, &SolverSettings::default()).unwrap();
        let locus = locus_equation(&m.spec).unwrap();
        assert_eq!(
            certify(&m.spec, &t, (2.0, 2.05), &locus),
            Err(LocusError::TooFewSamples(6))
        );
    }
}
