//! The square constraint system of a driven linkage.

use nalgebra::{DMatrix, DVector};

use crate::model::{JointKind, LinkageSpec, Tracer};
use crate::poly::rat_to_f64;

/// A point in the system: an anchored position or a pair of unknowns.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Loc {
    Fixed([f64; 2]),
    Var(usize),
}

#[derive(Clone, Debug)]
enum Equation {
    /// `|a - b|² - L² = 0`
    Length { a: Loc, b: Loc, l2: f64 },
    /// `tip - (pivot + L (cos θ, sin θ)) = 0`, two rows
    Driver { tip: Loc, pivot: [f64; 2], len: f64 },
    /// `j - (a + t (b - a)) = 0`, two rows
    Hole { j: Loc, a: Loc, b: Loc, t: f64 },
}

#[derive(Clone, Debug)]
pub(crate) struct System {
    /// Per joint of the spec, where it lives.
    pub locs: Vec<Loc>,
    pub unknowns: usize,
    equations: Vec<Equation>,
    rows: usize,
    tracer: TracerLoc,
}

#[derive(Clone, Copy, Debug)]
enum TracerLoc {
    Joint(Loc),
    OnBar { a: Loc, b: Loc, t: f64 },
}

fn at(q: &[f64], loc: Loc) -> [f64; 2] {
    match loc {
        Loc::Fixed(p) => p,
        Loc::Var(i) => [q[2 * i], q[2 * i + 1]],
    }
}

impl System {
    /// Assumes a validated spec.
    pub fn new(spec: &LinkageSpec) -> System {
        let mut locs = Vec::with_capacity(spec.joints.len());
        let mut unknowns = 0;
        for j in &spec.joints {
            match &j.kind {
                JointKind::Anchored(p) => locs.push(Loc::Fixed(p.to_f64())),
                JointKind::Free => {
                    locs.push(Loc::Var(unknowns));
                    unknowns += 1;
                }
            }
        }
        let loc = |id| locs[spec.joint_index(id).expect("validated spec")];
        let fixed = |l: Loc| matches!(l, Loc::Fixed(_));

        let mut equations = Vec::new();
        for b in &spec.bars {
            let (la, lb) = (loc(&b.a), loc(&b.b));
            let len = rat_to_f64(&b.length);
            if b.id == spec.driver.bar {
                let (pivot, tip) = match (la, lb) {
                    (Loc::Fixed(p), tip) => (p, tip),
                    (tip, Loc::Fixed(p)) => (p, tip),
                    _ => unreachable!("driver bar has an anchored end"),
                };
                equations.push(Equation::Driver { tip, pivot, len });
            } else if !(fixed(la) && fixed(lb)) {
                equations.push(Equation::Length {
                    a: la,
                    b: lb,
                    l2: len * len,
                });
            }
        }
        for (i, j) in spec.joints.iter().enumerate() {
            if let Some(h) = &j.hole {
                let host = spec.bar(&h.bar).expect("validated spec");
                let (la, lb, lj) = (loc(&host.a), loc(&host.b), locs[i]);
                if !(fixed(la) && fixed(lb) && fixed(lj)) {
                    equations.push(Equation::Hole {
                        j: lj,
                        a: la,
                        b: lb,
                        t: rat_to_f64(&h.offset),
                    });
                }
            }
        }
        let rows = equations
            .iter()
            .map(|e| match e {
                Equation::Length { .. } => 1,
                _ => 2,
            })
            .sum();
        let tracer = match &spec.tracer {
            Tracer::Joint(id) => TracerLoc::Joint(loc(id)),
            Tracer::OnBar { bar, offset } => {
                let b = spec.bar(bar).expect("validated spec");
                TracerLoc::OnBar {
                    a: loc(&b.a),
                    b: loc(&b.b),
                    t: rat_to_f64(offset),
                }
            }
        };
        System {
            locs,
            unknowns,
            equations,
            rows,
            tracer,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.unknowns
    }

    #[cfg(test)]
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn residual(&self, q: &[f64], theta: f64) -> DVector<f64> {
        let mut r = DVector::zeros(self.rows);
        let mut k = 0;
        for e in &self.equations {
            match *e {
                Equation::Length { a, b, l2 } => {
                    let (pa, pb) = (at(q, a), at(q, b));
                    let (dx, dy) = (pa[0] - pb[0], pa[1] - pb[1]);
                    r[k] = dx.mul_add(dx, dy.mul_add(dy, -l2));
                    k += 1;
                }
                Equation::Driver { tip, pivot, len } => {
                    let p = at(q, tip);
                    r[k] = p[0] - (pivot[0] + len * theta.cos());
                    r[k + 1] = p[1] - (pivot[1] + len * theta.sin());
                    k += 2;
                }
                Equation::Hole { j, a, b, t } => {
                    let (pj, pa, pb) = (at(q, j), at(q, a), at(q, b));
                    for c in 0..2 {
                        r[k + c] = pj[c] - (pa[c] + t * (pb[c] - pa[c]));
                    }
                    k += 2;
                }
            }
        }
        r
    }

    pub fn jacobian(&self, q: &[f64]) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.rows, self.dim());
        let mut k = 0;
        let add = |row: usize, loc: Loc, coord: usize, v: f64, jac: &mut DMatrix<f64>| {
            if let Loc::Var(i) = loc {
                jac[(row, 2 * i + coord)] += v;
            }
        };
        for e in &self.equations {
            match *e {
                Equation::Length { a, b, .. } => {
                    let (pa, pb) = (at(q, a), at(q, b));
                    for c in 0..2 {
                        let d = 2.0 * (pa[c] - pb[c]);
                        add(k, a, c, d, &mut jac);
                        add(k, b, c, -d, &mut jac);
                    }
                    k += 1;
                }
                Equation::Driver { tip, .. } => {
                    add(k, tip, 0, 1.0, &mut jac);
                    add(k + 1, tip, 1, 1.0, &mut jac);
                    k += 2;
                }
                Equation::Hole { j, a, b, t } => {
                    for c in 0..2 {
                        add(k + c, j, c, 1.0, &mut jac);
                        add(k + c, a, c, t - 1.0, &mut jac);
                        add(k + c, b, c, -t, &mut jac);
                    }
                    k += 2;
                }
            }
        }
        jac
    }

    /// Joint positions in spec order.
    pub fn positions(&self, q: &[f64]) -> Vec<[f64; 2]> {
        self.locs.iter().map(|&l| at(q, l)).collect()
    }

    pub fn unknowns_from(&self, positions: &[[f64; 2]]) -> Vec<f64> {
        let mut q = vec![0.0; self.dim()];
        for (l, p) in self.locs.iter().zip(positions) {
            if let Loc::Var(i) = *l {
                q[2 * i] = p[0];
                q[2 * i + 1] = p[1];
            }
        }
        q
    }

    pub fn tracer(&self, q: &[f64]) -> [f64; 2] {
        match self.tracer {
            TracerLoc::Joint(l) => at(q, l),
            TracerLoc::OnBar { a, b, t } => {
                let (pa, pb) = (at(q, a), at(q, b));
                [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
            }
        }
    }
}

pub(crate) fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Ratio of extreme singular values; infinite when rank-deficient.
pub(crate) fn condition(jac: &DMatrix<f64>) -> f64 {
    let sv = jac.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
