use std::fmt;

use num_traits::{One, Zero};

use crate::poly::Rat;

/// Label of a joint, unique within a [`LinkageSpec`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointId(pub String);

/// Label of a bar, unique within a [`LinkageSpec`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarId(pub String);

impl JointId {
    pub fn new(s: impl Into<String>) -> Self {
        JointId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl BarId {
    pub fn new(s: impl Into<String>) -> Self {
        BarId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for JointId {
    fn from(s: &str) -> Self {
        JointId::new(s)
    }
}

impl From<&str> for BarId {
    fn from(s: &str) -> Self {
        BarId::new(s)
    }
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for BarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Exact point in the plane, LEGO units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatPoint { x, y }
    }

    pub fn integer(x: i64, y: i64) -> Self {
        RatPoint {
            x: Rat::from_integer(x.into()),
            y: Rat::from_integer(y.into()),
        }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [
            crate::poly::rat_to_f64(&self.x),
            crate::poly::rat_to_f64(&self.y),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JointKind {
    Anchored(RatPoint),
    Free,
}

/// A hole partway along a bar: the joint sits at `a + offset·(b − a)` of that bar.
///
/// This is how a beam with more than two used holes is expressed; the beam
/// stays one rigid bar and the extra joint rides on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarHole {
    pub bar: BarId,
    pub offset: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Joint {
    pub id: JointId,
    pub kind: JointKind,
    pub hole: Option<BarHole>,
}

impl Joint {
    pub fn free(id: &str) -> Self {
        Joint {
            id: JointId::new(id),
            kind: JointKind::Free,
            hole: None,
        }
    }

    pub fn anchored(id: &str, at: RatPoint) -> Self {
        Joint {
            id: JointId::new(id),
            kind: JointKind::Anchored(at),
            hole: None,
        }
    }

    pub fn on_bar(mut self, bar: &str, offset: Rat) -> Self {
        self.hole = Some(BarHole {
            bar: BarId::new(bar),
            offset,
        });
        self
    }

    pub fn is_anchored(&self) -> bool {
        matches!(self.kind, JointKind::Anchored(_))
    }

    pub fn anchor(&self) -> Option<&RatPoint> {
        match &self.kind {
            JointKind::Anchored(p) => Some(p),
            JointKind::Free => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bar {
    pub id: BarId,
    pub a: JointId,
    pub b: JointId,
    pub length: Rat,
}

impl Bar {
    pub fn new(id: &str, a: &str, b: &str, length: Rat) -> Self {
        Bar {
            id: BarId::new(id),
            a: JointId::new(a),
            b: JointId::new(b),
            length,
        }
    }
}

/// Where the pen sits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tracer {
    Joint(JointId),
    OnBar { bar: BarId, offset: Rat },
}

/// The bar turned by hand; its angle at the anchored end is the sweep parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Driver {
    pub bar: BarId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkageSpec {
    pub name: String,
    pub joints: Vec<Joint>,
    pub bars: Vec<Bar>,
    pub driver: Driver,
    pub tracer: Tracer,
}

impl LinkageSpec {
    pub fn joint_index(&self, id: &JointId) -> Option<usize> {
        self.joints.iter().position(|j| &j.id == id)
    }

    pub fn bar_index(&self, id: &BarId) -> Option<usize> {
        self.bars.iter().position(|b| &b.id == id)
    }

    pub fn joint(&self, id: &JointId) -> Option<&Joint> {
        self.joints.iter().find(|j| &j.id == id)
    }

    pub fn bar(&self, id: &BarId) -> Option<&Bar> {
        self.bars.iter().find(|b| &b.id == id)
    }

    pub fn anchors(&self) -> impl Iterator<Item = (&Joint, &RatPoint)> {
        self.joints
            .iter()
            .filter_map(|j| j.anchor().map(|p| (j, p)))
    }

    pub fn free_joint_count(&self) -> usize {
        self.joints.iter().filter(|j| !j.is_anchored()).count()
    }

    /// Degrees of freedom before the driver is fixed: two per free joint, minus
    /// one per bar with a free end, minus two per hole constraint that moves
    /// something.
    pub fn mobility(&self) -> i64 {
        let anchored = |id: &JointId| self.joint(id).map(|j| j.is_anchored()).unwrap_or(false);
        let bar_eqs = self
            .bars
            .iter()
            .filter(|b| !(anchored(&b.a) && anchored(&b.b)))
            .count() as i64;
        let hole_eqs = self
            .joints
            .iter()
            .filter_map(|j| j.hole.as_ref().map(|h| (j, h)))
            .filter(|(j, h)| {
                !j.is_anchored()
                    || self
                        .bar(&h.bar)
                        .map(|b| !(anchored(&b.a) && anchored(&b.b)))
                        .unwrap_or(false)
            })
            .count() as i64
            * 2;
        2 * self.free_joint_count() as i64 - bar_eqs - hole_eqs
    }

    /// Mirror image across the vertical line `x = axis`.
    ///
    /// Driver angles map as θ ↦ π − θ.
    pub fn mirrored(&self, axis: &Rat) -> LinkageSpec {
        let two = Rat::one() + Rat::one();
        let mut out = self.clone();
        out.name = format!("{}_mirrored", self.name);
        for j in &mut out.joints {
            if let JointKind::Anchored(p) = &mut j.kind {
                p.x = &two * axis - &p.x;
            }
        }
        out
    }
}

pub(crate) fn in_unit_interval(r: &Rat) -> bool {
    *r >= Rat::zero() && *r <= Rat::one()
}
