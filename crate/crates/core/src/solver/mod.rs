//! Numeric placement of a driven linkage and continuation along the driver angle.

mod export;
mod stats;
mod system;
mod trace;

use nalgebra::DMatrix;

use crate::model::{builtin_model, JointId, LinkageSpec};

pub use export::{trace_csv, trace_svg};
pub use stats::{fit_points, straightness_stats, LineFit, StatsError, StraightnessStats};
pub use trace::{
    trace, trace_both_ways, trace_from, BranchEvent, BranchEventKind, Trace, TraceSample,
};

pub(crate) use system::System;
use system::{condition, inf_norm};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    /// Bound on the residual ∞-norm.
    pub tol: f64,
    pub max_newton_iters: usize,
    /// Radians.
    pub initial_step: f64,
    /// Radians.
    pub min_step: f64,
    /// Jacobian condition number above which a sample is flagged singular.
    pub singular_condition: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-12,
            max_newton_iters: 50,
            initial_step: 1e-2,
            min_step: 1e-7,
            singular_condition: 1e10,
        }
    }
}

impl SolverSettings {
    pub fn check(&self) -> Result<(), SolverError> {
        let positive = [
            self.tol,
            self.initial_step,
            self.min_step,
            self.singular_condition,
        ]
        .iter()
        .all(|v| *v > 0.0 && v.is_finite());
        if !positive || self.max_newton_iters == 0 || self.min_step > self.initial_step {
            return Err(SolverError::Settings(format!("{self:?}")));
        }
        Ok(())
    }
}

/// Joint positions at one driver angle, in the order of `spec.joints`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub theta: f64,
    pub positions: Vec<[f64; 2]>,
}

impl Configuration {
    pub fn position(&self, spec: &LinkageSpec, id: &JointId) -> Option<[f64; 2]> {
        spec.joint_index(id).map(|i| self.positions[i])
    }

    /// Pen position.
    pub fn tracer(&self, spec: &LinkageSpec) -> [f64; 2] {
        let sys = System::new(spec);
        sys.tracer(&sys.unknowns_from(&self.positions))
    }

    /// Constraint residual ∞-norm.
    pub fn residual(&self, spec: &LinkageSpec) -> f64 {
        let sys = System::new(spec);
        inf_norm(&sys.residual(&sys.unknowns_from(&self.positions), self.theta))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("Newton did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("singular Jacobian (condition {condition:e})")]
    SingularJacobian { condition: f64 },
    #[error("no assembly found at driver angle {theta}")]
    NoSeed { theta: f64 },
    #[error("invalid linkage: {0}")]
    InvalidSpec(String),
    #[error("invalid solver settings: {0}")]
    Settings(String),
    #[error("cannot flip joint {0}: {1}")]
    Flip(String, String),
}

fn require_valid(spec: &LinkageSpec) -> Result<(), SolverError> {
    let report = crate::model::validate(spec);
    if report.is_valid() {
        Ok(())
    } else {
        Err(SolverError::InvalidSpec(report.to_string()))
    }
}

/// Condition numbers past this mean the Jacobian is numerically rank-deficient.
const RANK_LOSS: f64 = 1e15;

/// Plain Newton from `q`, in place.
pub(crate) fn newton(
    sys: &System,
    q: &mut [f64],
    theta: f64,
    settings: &SolverSettings,
) -> Result<f64, SolverError> {
    let mut r = sys.residual(q, theta);
    let mut res = inf_norm(&r);
    for _ in 0..settings.max_newton_iters {
        if res < settings.tol {
            return Ok(res);
        }
        let jac = sys.jacobian(q);
        let step = match jac.clone().lu().solve(&r) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => {
                return Err(SolverError::SingularJacobian {
                    condition: condition(&jac),
                })
            }
        };
        for (x, d) in q.iter_mut().zip(step.iter()) {
            *x -= d;
        }
        r = sys.residual(q, theta);
        res = inf_norm(&r);
        if !res.is_finite() {
            break;
        }
    }
    if res < settings.tol {
        return Ok(res);
    }
    Err(SolverError::NonConvergence {
        iterations: settings.max_newton_iters,
        residual: res,
    })
}

/// Levenberg-Marquardt on the residual, for rough starting layouts.
pub(crate) fn damped_newton(sys: &System, q: &mut [f64], theta: f64, iters: usize) -> f64 {
    let n = sys.dim();
    let mut r = sys.residual(q, theta);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..iters {
        if cost < 1e-24 {
            break;
        }
        let jac = sys.jacobian(q);
        let jt = jac.transpose();
        let g = &jt * &r;
        let h = &jt * &jac;
        let mut improved = false;
        for _ in 0..30 {
            let a = &h + DMatrix::identity(n, n) * mu * (1.0 + h.diagonal().amax());
            let Some(step) = a.lu().solve(&g) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = q.iter().zip(step.iter()).map(|(x, d)| x - d).collect();
            let rt = sys.residual(&trial, theta);
            let ct = rt.norm_squared();
            if ct < cost {
                q.copy_from_slice(&trial);
                r = rt;
                cost = ct;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    inf_norm(&r)
}

/// Newton at driver angle `theta`, starting from `seed`.
///
/// The seed must assign every free joint; it also picks the assembly branch.
pub fn solve_configuration(
    spec: &LinkageSpec,
    theta: f64,
    seed: &Configuration,
    settings: &SolverSettings,
) -> Result<Configuration, SolverError> {
    require_valid(spec)?;
    settings.check()?;
    let sys = System::new(spec);
    let mut q = sys.unknowns_from(&seed.positions);
    newton(&sys, &mut q, theta, settings)?;
    let cond = condition(&sys.jacobian(&q));
    if cond > RANK_LOSS {
        return Err(SolverError::SingularJacobian { condition: cond });
    }
    Ok(Configuration {
        theta,
        positions: sys.positions(&q),
    })
}

/// Jacobian condition number of a configuration.
pub fn condition_number(spec: &LinkageSpec, config: &Configuration) -> f64 {
    let sys = System::new(spec);
    condition(&sys.jacobian(&sys.unknowns_from(&config.positions)))
}

/// A starting layout: the builtin seed when `spec` is a builtin, otherwise a
/// placement grown outward from the anchors.
pub fn initial_layout(spec: &LinkageSpec, theta: f64) -> Configuration {
    if let Ok(m) = builtin_model(&spec.name) {
        if &m.spec == spec {
            let mut positions = vec![[0.0; 2]; spec.joints.len()];
            for (i, j) in spec.joints.iter().enumerate() {
                if let Some(a) = j.anchor() {
                    positions[i] = a.to_f64();
                } else if let Some((_, p)) = m.seed.iter().find(|(id, _)| id == &j.id) {
                    positions[i] = *p;
                }
            }
            return Configuration {
                theta: m.seed_angle,
                positions,
            };
        }
    }
    Configuration {
        theta,
        positions: grow_layout(spec, theta),
    }
}

/// Places the driver tip, then any joint with two placed bar neighbours at a
/// circle intersection, then leftovers one bar length from a placed neighbour.
fn grow_layout(spec: &LinkageSpec, theta: f64) -> Vec<[f64; 2]> {
    use crate::poly::rat_to_f64;
    let n = spec.joints.len();
    let mut pos: Vec<Option<[f64; 2]>> = spec
        .joints
        .iter()
        .map(|j| j.anchor().map(|a| a.to_f64()))
        .collect();
    if let Some(b) = spec.bar(&spec.driver.bar) {
        let (ia, ib) = (spec.joint_index(&b.a), spec.joint_index(&b.b));
        if let (Some(ia), Some(ib)) = (ia, ib) {
            let (pivot, tip) = if pos[ia].is_some() {
                (ia, ib)
            } else {
                (ib, ia)
            };
            if let (Some(p), None) = (pos[pivot], pos[tip]) {
                let l = rat_to_f64(&b.length);
                pos[tip] = Some([p[0] + l * theta.cos(), p[1] + l * theta.sin()]);
            }
        }
    }
    let neighbours = |i: usize| -> Vec<(usize, f64)> {
        spec.bars
            .iter()
            .filter_map(|b| {
                let (ia, ib) = (spec.joint_index(&b.a)?, spec.joint_index(&b.b)?);
                let l = rat_to_f64(&b.length);
                if ia == i {
                    Some((ib, l))
                } else if ib == i {
                    Some((ia, l))
                } else {
                    None
                }
            })
            .collect()
    };
    loop {
        let mut progress = false;
        for i in 0..n {
            if pos[i].is_some() {
                continue;
            }
            if let Some(h) = &spec.joints[i].hole {
                if let Some(b) = spec.bar(&h.bar) {
                    let (ia, ib) = (spec.joint_index(&b.a), spec.joint_index(&b.b));
                    if let (Some(Some(pa)), Some(Some(pb))) =
                        (ia.map(|k| pos[k]), ib.map(|k| pos[k]))
                    {
                        let t = rat_to_f64(&h.offset);
                        pos[i] = Some([pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]);
                        progress = true;
                        continue;
                    }
                }
            }
            let placed: Vec<([f64; 2], f64)> = neighbours(i)
                .into_iter()
                .filter_map(|(k, l)| pos[k].map(|p| (p, l)))
                .collect();
            if placed.len() >= 2 {
                pos[i] = Some(circle_meet(placed[0], placed[1]));
                progress = true;
            }
        }
        if !progress {
            // fall back to one placed neighbour
            let mut any = false;
            for i in 0..n {
                if pos[i].is_none() {
                    if let Some((p, l)) = neighbours(i)
                        .into_iter()
                        .find_map(|(k, l)| pos[k].map(|p| (p, l)))
                    {
                        pos[i] = Some([p[0] + l * 0.6, p[1] + l * 0.8]);
                        any = true;
                        break;
                    }
                }
            }
            if !any {
                break;
            }
        }
    }
    pos.into_iter()
        .enumerate()
        .map(|(i, p)| p.unwrap_or([i as f64 * 0.37, 1.0 + i as f64 * 0.21]))
        .collect()
}

/// An intersection of two circles, or the nearest point toward it when they miss.
fn circle_meet((c0, r0): ([f64; 2], f64), (c1, r1): ([f64; 2], f64)) -> [f64; 2] {
    let (dx, dy) = (c1[0] - c0[0], c1[1] - c0[1]);
    let d = dx.hypot(dy).max(1e-9);
    let a = (r0 * r0 - r1 * r1 + d * d) / (2.0 * d);
    let h = (r0 * r0 - a * a).max(0.0).sqrt();
    let (ux, uy) = (dx / d, dy / d);
    [c0[0] + a * ux - h * uy, c0[1] + a * uy + h * ux]
}

/// Finds an assembly at `theta`: Newton from the layout's own angle, walking
/// the driver to `theta` if they differ.
pub fn seed_configuration(
    spec: &LinkageSpec,
    theta: f64,
    settings: &SolverSettings,
) -> Result<Configuration, SolverError> {
    require_valid(spec)?;
    settings.check()?;
    let layout = initial_layout(spec, theta);
    let sys = System::new(spec);
    let mut q = sys.unknowns_from(&layout.positions);
    damped_newton(&sys, &mut q, layout.theta, 200);
    newton(&sys, &mut q, layout.theta, settings).map_err(|_| SolverError::NoSeed { theta })?;
    let start = Configuration {
        theta: layout.theta,
        positions: sys.positions(&q),
    };
    trace::walk(&sys, start, theta, settings).ok_or(SolverError::NoSeed { theta })
}

/// Reflects one joint across the line through its two bar neighbours and
/// re-seats any joint riding in a hole of a bar it ends. This is the other
/// assembly of the triangle it closes, e.g. an antiparallelogram turned into
/// a parallelogram.
pub fn flip_branch(
    spec: &LinkageSpec,
    config: &Configuration,
    joint: &JointId,
) -> Result<Configuration, SolverError> {
    let flip_err = |msg: &str| SolverError::Flip(joint.to_string(), msg.to_string());
    let i = spec
        .joint_index(joint)
        .ok_or_else(|| flip_err("no such joint"))?;
    if spec.joints[i].is_anchored() {
        return Err(flip_err("joint is anchored"));
    }
    let nbrs: Vec<usize> = spec
        .bars
        .iter()
        .filter_map(|b| {
            if &b.a == joint {
                spec.joint_index(&b.b)
            } else if &b.b == joint {
                spec.joint_index(&b.a)
            } else {
                None
            }
        })
        .collect();
    if nbrs.len() != 2 {
        return Err(flip_err("joint needs exactly two bar neighbours"));
    }
    let (a, b) = (config.positions[nbrs[0]], config.positions[nbrs[1]]);
    let p = config.positions[i];
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let d2 = dx * dx + dy * dy;
    if d2 < 1e-24 {
        return Err(flip_err("neighbours coincide"));
    }
    let t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / d2;
    let foot = [a[0] + t * dx, a[1] + t * dy];
    let mut out = config.clone();
    out.positions[i] = [2.0 * foot[0] - p[0], 2.0 * foot[1] - p[1]];
    for (k, j) in spec.joints.iter().enumerate() {
        let Some(h) = &j.hole else { continue };
        let Some(host) = spec.bar(&h.bar) else {
            continue;
        };
        if (&host.a == joint || &host.b == joint) && !j.is_anchored() {
            let (ia, ib) = (
                spec.joint_index(&host.a).unwrap(),
                spec.joint_index(&host.b).unwrap(),
            );
            let t = crate::poly::rat_to_f64(&h.offset);
            let (pa, pb) = (out.positions[ia], out.positions[ib]);
            out.positions[k] = [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])];
        }
    }
    Ok(out)
}
