use crate::model::LinkageSpec;

use super::system::{condition, inf_norm, System};
use super::{
    newton, require_valid, seed_configuration, Configuration, SolverError, SolverSettings,
};

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSample {
    pub theta: f64,
    /// Pen position.
    pub point: [f64; 2],
    /// Constraint residual ∞-norm.
    pub residual: f64,
    /// Every joint, in spec order.
    pub positions: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BranchEventKind {
    /// The driver cannot turn further on this branch.
    WorkspaceBoundary,
    /// The Jacobian is close to rank-deficient; branches may meet here.
    SingularConfiguration,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct BranchEvent {
    pub theta: f64,
    pub kind: BranchEventKind,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub samples: Vec<TraceSample>,
    pub events: Vec<BranchEvent>,
}

impl Trace {
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|s| s.point).collect()
    }

    pub fn hit_boundary(&self) -> bool {
        self.events
            .iter()
            .any(|e| e.kind == BranchEventKind::WorkspaceBoundary)
    }

    /// Samples with `lo <= θ <= hi`, either order.
    pub fn window(&self, a: f64, b: f64) -> Vec<&TraceSample> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.samples
            .iter()
            .filter(|s| s.theta >= lo && s.theta <= hi)
            .collect()
    }

    pub fn last_configuration(&self) -> Option<Configuration> {
        self.samples.last().map(|s| Configuration {
            theta: s.theta,
            positions: s.positions.clone(),
        })
    }
}

/// Sweeps the driver from `theta_start` to `theta_end`, seeding automatically.
pub fn trace(
    spec: &LinkageSpec,
    theta_start: f64,
    theta_end: f64,
    settings: &SolverSettings,
) -> Result<Trace, SolverError> {
    let seed = seed_configuration(spec, theta_start, settings)?;
    trace_from(spec, &seed, theta_end, settings)
}

/// Sweeps the driver from `start.theta` to `theta_end` on the branch of `start`.
pub fn trace_from(
    spec: &LinkageSpec,
    start: &Configuration,
    theta_end: f64,
    settings: &SolverSettings,
) -> Result<Trace, SolverError> {
    require_valid(spec)?;
    settings.check()?;
    let sys = System::new(spec);
    let mut q = sys.unknowns_from(&start.positions);
    newton(&sys, &mut q, start.theta, settings)
        .map_err(|_| SolverError::NoSeed { theta: start.theta })?;

    let mut out = Trace::default();
    let mut singular = false;
    let mut record = |theta: f64, q: &[f64], out: &mut Trace| {
        let cond = condition(&sys.jacobian(q));
        if cond > settings.singular_condition {
            if !singular {
                out.events.push(BranchEvent {
                    theta,
                    kind: BranchEventKind::SingularConfiguration,
                });
            }
            singular = true;
        } else {
            singular = false;
        }
        out.samples.push(TraceSample {
            theta,
            point: sys.tracer(q),
            residual: inf_norm(&sys.residual(q, theta)),
            positions: sys.positions(q),
        });
    };
    record(start.theta, &q, &mut out);
    let boundary = sweep(&sys, &mut q, start.theta, theta_end, settings, |t, q| {
        record(t, q, &mut out)
    });
    if let Some(theta) = boundary {
        out.events.push(BranchEvent {
            theta,
            kind: BranchEventKind::WorkspaceBoundary,
        });
    }
    Ok(out)
}

/// Sweeps from `start` down to `start.theta - reach` and up to
/// `start.theta + reach`, stopping early at workspace boundaries. Samples come
/// back in increasing `θ`.
pub fn trace_both_ways(
    spec: &LinkageSpec,
    start: &Configuration,
    reach: f64,
    settings: &SolverSettings,
) -> Result<Trace, SolverError> {
    let down = trace_from(spec, start, start.theta - reach, settings)?;
    let up = trace_from(spec, start, start.theta + reach, settings)?;
    let mut samples: Vec<TraceSample> = down.samples.into_iter().skip(1).rev().collect();
    samples.extend(up.samples);
    let mut events: Vec<BranchEvent> = down.events.into_iter().rev().collect();
    events.extend(up.events);
    Ok(Trace { samples, events })
}

/// Continuation without recording; `None` if the sweep stops short.
pub(crate) fn walk(
    sys: &System,
    start: Configuration,
    theta_end: f64,
    settings: &SolverSettings,
) -> Option<Configuration> {
    let mut q = sys.unknowns_from(&start.positions);
    if start.theta == theta_end {
        return Some(start);
    }
    match sweep(sys, &mut q, start.theta, theta_end, settings, |_, _| {}) {
        Some(_) => None,
        None => Some(Configuration {
            theta: theta_end,
            positions: sys.positions(&q),
        }),
    }
}

/// Largest joint jump accepted between the predictor and the corrected point.
fn jump_limit(sys: &System, q: &[f64]) -> f64 {
    // a fraction of the shortest distance between joints that share a bar
    // would be ideal; the joint spread is a cheap stand-in
    let p = sys.positions(q);
    let mut spread: f64 = 0.0;
    for a in &p {
        for b in &p {
            spread = spread.max((a[0] - b[0]).abs()).max((a[1] - b[1]).abs());
        }
    }
    0.05 * spread.max(1.0)
}

/// Steps from `theta0` toward `theta1`, halving on failure. Sample angles sit
/// on the grid `theta0 + k·h/2^m`, so halving the initial step revisits every
/// angle of the coarser run. Returns the last good angle if the sweep stalls.
fn sweep(
    sys: &System,
    q: &mut Vec<f64>,
    theta0: f64,
    theta1: f64,
    settings: &SolverSettings,
    mut on_sample: impl FnMut(f64, &[f64]),
) -> Option<f64> {
    let dir = if theta1 >= theta0 { 1.0 } else { -1.0 };
    let h0 = settings.initial_step * dir;
    let total = (theta1 - theta0) / h0;
    // progress in units of h0
    let mut s = 0.0_f64;
    let mut ds = 1.0_f64;
    let mut prev: Option<(f64, Vec<f64>)> = None;
    let limit = jump_limit(sys, q);

    while s < total {
        let s_next = (s + ds).min(total);
        let theta = if s_next == total {
            theta1
        } else {
            theta0 + s_next * h0
        };
        let theta_now = theta0 + s * h0;

        // secant predictor from the previous accepted point
        let mut pred = q.clone();
        if let Some((tp, qp)) = &prev {
            let span = theta_now - tp;
            if span != 0.0 {
                let f = (theta - theta_now) / span;
                for (i, x) in pred.iter_mut().enumerate() {
                    *x += f * (*x - qp[i]);
                }
            }
        }
        let mut trial = pred.clone();
        let ok = newton(sys, &mut trial, theta, settings).is_ok()
            && trial.iter().zip(&pred).all(|(a, b)| (a - b).abs() <= limit);
        if ok {
            prev = Some((theta_now, std::mem::replace(q, trial)));
            s = s_next;
            on_sample(theta, q);
            // grow back once aligned with the coarser grid
            if ds < 1.0 && (s / (2.0 * ds)).fract() == 0.0 {
                ds *= 2.0;
            }
        } else {
            ds *= 0.5;
            if ds * settings.initial_step < settings.min_step {
                return Some(theta_now);
            }
        }
    }
    None
}
