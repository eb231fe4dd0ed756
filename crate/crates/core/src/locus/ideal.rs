use std::sync::Arc;

use num_traits::One;

use crate::model::{JointKind, LinkageSpec, Tracer};
use crate::poly::{MonomialOrder, MultiPoly, Rat, Ring};

/// Polynomial constraints of a linkage with the driver left free.
///
/// Joint coordinates are named `<joint>_x`, `<joint>_y`; the pen position is
/// `x`, `y` and always comes last in the variable list.
#[derive(Clone, Debug)]
pub struct ConstraintIdeal {
    pub ring: Arc<Ring>,
    pub generators: Vec<MultiPoly>,
}

impl ConstraintIdeal {
    pub fn variables(&self) -> &[String] {
        self.ring.vars()
    }

    /// Every generator evaluated at a solver configuration, in the ring's
    /// variable order.
    pub fn residuals_at(&self, point: &[f64]) -> Vec<f64> {
        self.generators.iter().map(|g| g.eval_f64(point)).collect()
    }
}

enum Slot {
    /// Coordinates are the ring variables at this position.
    Vars(usize),
    Const(Rat, Rat),
    Pen,
    /// Hole joint whose position is substituted from its host bar.
    Subst,
}

/// Builds the ideal. Expects a validated spec.
///
/// Free joints sitting in a bar hole are substituted by the affine
/// combination of the host ends; only where that is impossible (the pen, an
/// anchor, or a cycle of holes) do they keep variables and two linear generators.
pub fn constraint_ideal(spec: &LinkageSpec) -> ConstraintIdeal {
    let pen_joint = match &spec.tracer {
        Tracer::Joint(id) => spec.joint_index(id),
        Tracer::OnBar { .. } => None,
    };

    let mut slots: Vec<Slot> = Vec::with_capacity(spec.joints.len());
    let mut names: Vec<String> = Vec::new();
    for (i, j) in spec.joints.iter().enumerate() {
        let slot = if Some(i) == pen_joint {
            Slot::Pen
        } else if let JointKind::Anchored(p) = &j.kind {
            Slot::Const(p.x.clone(), p.y.clone())
        } else if j.hole.is_some() {
            Slot::Subst
        } else {
            names.push(format!("{}_x", j.id));
            names.push(format!("{}_y", j.id));
            Slot::Vars(names.len() - 2)
        };
        slots.push(slot);
    }

    // hole joints whose host ends resolve without going through a cycle
    let host_ends = |i: usize| {
        let h = spec.joints[i].hole.as_ref().expect("hole joint");
        let bar = spec.bar(&h.bar).expect("validated spec");
        (
            spec.joint_index(&bar.a).expect("validated spec"),
            spec.joint_index(&bar.b).expect("validated spec"),
            h.offset.clone(),
        )
    };
    let mut resolved: Vec<bool> = slots.iter().map(|s| !matches!(s, Slot::Subst)).collect();
    let mut order: Vec<usize> = Vec::new();
    loop {
        let mut progress = false;
        for i in 0..slots.len() {
            if !resolved[i] {
                let (a, b, _) = host_ends(i);
                if resolved[a] && resolved[b] {
                    resolved[i] = true;
                    order.push(i);
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }
    for i in 0..slots.len() {
        if !resolved[i] {
            names.push(format!("{}_x", spec.joints[i].id));
            names.push(format!("{}_y", spec.joints[i].id));
            slots[i] = Slot::Vars(names.len() - 2);
        }
    }
    names.push("x".into());
    names.push("y".into());
    let ring = Ring::new(names, MonomialOrder::GrevLex);
    let n = ring.nvars();

    let mut pos: Vec<Option<[MultiPoly; 2]>> = slots
        .iter()
        .map(|s| match s {
            Slot::Vars(k) => Some([MultiPoly::var(&ring, *k), MultiPoly::var(&ring, k + 1)]),
            Slot::Const(x, y) => Some([
                MultiPoly::constant(&ring, x.clone()),
                MultiPoly::constant(&ring, y.clone()),
            ]),
            Slot::Pen => Some([MultiPoly::var(&ring, n - 2), MultiPoly::var(&ring, n - 1)]),
            Slot::Subst => None,
        })
        .collect();
    let affine = |a: &[MultiPoly; 2], b: &[MultiPoly; 2], t: &Rat| -> [MultiPoly; 2] {
        let s = Rat::one() - t;
        [
            &a[0].scale(&s) + &b[0].scale(t),
            &a[1].scale(&s) + &b[1].scale(t),
        ]
    };
    for &i in &order {
        let (a, b, t) = host_ends(i);
        let p = affine(pos[a].as_ref().unwrap(), pos[b].as_ref().unwrap(), &t);
        pos[i] = Some(p);
    }
    let pos: Vec<[MultiPoly; 2]> = pos.into_iter().map(|p| p.unwrap()).collect();

    let mut generators = Vec::new();
    let mut push = |g: MultiPoly| {
        if !g.is_zero() {
            generators.push(g);
        }
    };
    for bar in &spec.bars {
        let a = &pos[spec.joint_index(&bar.a).unwrap()];
        let b = &pos[spec.joint_index(&bar.b).unwrap()];
        let dx = &a[0] - &b[0];
        let dy = &a[1] - &b[1];
        let l2 = MultiPoly::constant(&ring, &bar.length * &bar.length);
        push(&(&(&dx * &dx) + &(&dy * &dy)) - &l2);
    }
    // holes that could not be substituted constrain their joint linearly
    for (i, j) in spec.joints.iter().enumerate() {
        if j.hole.is_some() && !order.contains(&i) {
            let (a, b, t) = host_ends(i);
            let p = affine(&pos[a], &pos[b], &t);
            push(&pos[i][0] - &p[0]);
            push(&pos[i][1] - &p[1]);
        }
    }
    if let Some(k) = pen_joint {
        if let JointKind::Anchored(p) = &spec.joints[k].kind {
            push(&pos[k][0] - &MultiPoly::constant(&ring, p.x.clone()));
            push(&pos[k][1] - &MultiPoly::constant(&ring, p.y.clone()));
        }
    }
    if let Tracer::OnBar { bar, offset } = &spec.tracer {
        let bar = spec.bar(bar).expect("validated spec");
        let a = &pos[spec.joint_index(&bar.a).unwrap()];
        let b = &pos[spec.joint_index(&bar.b).unwrap()];
        let p = affine(a, b, offset);
        push(&MultiPoly::var(&ring, n - 2) - &p[0]);
        push(&MultiPoly::var(&ring, n - 1) - &p[1]);
    }
    ConstraintIdeal { ring, generators }
}

/// Ring point for a solver configuration: joint coordinates in ring order, then the pen.
pub fn ring_point(
    ideal: &ConstraintIdeal,
    spec: &LinkageSpec,
    positions: &[[f64; 2]],
    pen: [f64; 2],
) -> Vec<f64> {
    let vars = ideal.variables();
    let mut out = vec![0.0; vars.len()];
    for (k, name) in vars.iter().enumerate() {
        if k + 2 >= vars.len() {
            out[k] = pen[k + 2 - vars.len()];
            continue;
        }
        let (id, axis) = name.rsplit_once('_').expect("joint variable");
        let j = spec
            .joints
            .iter()
            .position(|j| j.id.as_str() == id)
            .expect("variable of a spec joint");
        out[k] = positions[j][if axis == "x" { 0 } else { 1 }];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;

    fn texts(i: &ConstraintIdeal) -> Vec<String> {
        i.generators
            .iter()
            .map(|g| g.to_normalized_string())
            .collect()
    }

    #[test]
    fn compass_is_one_circle() {
        let i = constraint_ideal(&builtin("compass").unwrap());
        assert_eq!(i.variables(), ["x", "y"]);
        assert_eq!(texts(&i), ["x^2 + y^2 - 16"]);
    }

    #[test]
    fn chebyshev_counts() {
        let i = constraint_ideal(&builtin("chebyshev").unwrap());
        assert_eq!(i.variables(), ["B_x", "B_y", "C_x", "C_y", "x", "y"]);
        let degrees: Vec<u32> = i
            .generators
            .iter()
            .map(|g| g.total_degree().unwrap())
            .collect();
        assert_eq!(degrees, [2, 2, 2, 1, 1]);
    }

    #[test]
    fn hart_substitutes_the_crank_hole() {
        let i = constraint_ideal(&builtin("hart_inversor").unwrap());
        // P is replaced by the midpoint of AB; the anchored hole stays linear
        assert_eq!(
            i.variables(),
            ["A_x", "A_y", "B_x", "B_y", "C_x", "C_y", "D_x", "D_y", "x", "y"]
        );
        let quadratic = i
            .generators
            .iter()
            .filter(|g| g.total_degree() == Some(2))
            .count();
        assert_eq!(quadratic, 5);
        assert_eq!(i.generators.len(), 9);
        assert!(i.generators.iter().all(|g| g.total_degree().unwrap() <= 2));
    }

    #[test]
    fn generators_vanish_on_the_seed() {
        use crate::model::builtin_model;
        use crate::solver::{seed_configuration, SolverSettings};
        for name in ["chebyshev_lambda", "watt", "hart_inversor", "hart_aframe"] {
            let m = builtin_model(name).unwrap();
            let cfg =
                seed_configuration(&m.spec, m.seed_angle, &SolverSettings::default()).unwrap();
            let ideal = constraint_ideal(&m.spec);
            let pt = ring_point(&ideal, &m.spec, &cfg.positions, cfg.tracer(&m.spec));
            for r in ideal.residuals_at(&pt) {
                assert!(r.abs() < 1e-9, "{name}: {r}");
            }
        }
    }
}
