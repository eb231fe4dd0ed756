//! The builtin models.
//!
//! Dimensions are in LEGO units. A beam with `n` holes spans `n - 1` units,
//! and a 6-hole span is made of two half beams. Where only part counts and
//! photographs pin a model down, the lengths below are reconstructions; each
//! set was kept only after the solver closed the loop over the whole sweep
//! and the locus came out with the expected degree.

use std::f64::consts::PI;

use num_bigint::BigInt;

use super::spec::{Bar, BarId, Driver, Joint, JointId, LinkageSpec, RatPoint, Tracer};
use super::ModelError;
use crate::poly::Rat;

pub const MODEL_NAMES: [&str; 7] = [
    "compass",
    "chebyshev",
    "chebyshev_open",
    "chebyshev_lambda",
    "watt",
    "hart_inversor",
    "hart_aframe",
];

pub fn model_names() -> &'static [&'static str] {
    &MODEL_NAMES
}

/// Which beam realizes a bar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeamUse {
    /// A full beam with this many holes.
    Beam(u32),
    /// Two half beams of this many holes each, overlapped into one span.
    HalfBeams(u32),
}

impl BeamUse {
    pub fn span(self) -> i64 {
        match self {
            BeamUse::Beam(n) | BeamUse::HalfBeams(n) => n as i64 - 1,
        }
    }
}

/// A builtin spec plus what it takes to drive it.
#[derive(Clone, Debug)]
pub struct BuiltinModel {
    pub spec: LinkageSpec,
    pub description: &'static str,
    /// Driver angle at which `seed` is laid out.
    pub seed_angle: f64,
    /// Rough positions of the free joints at `seed_angle`; they pick the assembly branch.
    pub seed: Vec<(JointId, [f64; 2])>,
    /// Driver range that stays inside the workspace.
    pub sweep: (f64, f64),
    /// Driver range where the pen draws its (near-)straight stretch.
    pub straight_window: Option<(f64, f64)>,
    pub beams: Vec<(BarId, BeamUse)>,
}

pub fn builtin(name: &str) -> Result<LinkageSpec, ModelError> {
    builtin_model(name).map(|m| m.spec)
}

pub fn builtin_model(name: &str) -> Result<BuiltinModel, ModelError> {
    match name {
        "compass" => Ok(compass()),
        "chebyshev" => Ok(chebyshev()),
        "chebyshev_open" => Ok(chebyshev_open()),
        "chebyshev_lambda" => Ok(chebyshev_lambda()),
        "watt" => Ok(watt()),
        "hart_inversor" => Ok(hart_inversor()),
        "hart_aframe" => Ok(hart_aframe()),
        _ => Err(ModelError::UnknownModel(name.to_string())),
    }
}

fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn half() -> Rat {
    Rat::new(1.into(), 2.into())
}

fn seed(pts: &[(&str, [f64; 2])]) -> Vec<(JointId, [f64; 2])> {
    pts.iter().map(|(id, p)| (JointId::new(*id), *p)).collect()
}

fn beams(list: &[(&str, BeamUse)]) -> Vec<(BarId, BeamUse)> {
    list.iter().map(|(id, b)| (BarId::new(*id), *b)).collect()
}

fn compass() -> BuiltinModel {
    BuiltinModel {
        spec: LinkageSpec {
            name: "compass".into(),
            joints: vec![
                Joint::anchored("O", RatPoint::integer(0, 0)),
                Joint::free("T"),
            ],
            bars: vec![Bar::new("arm", "O", "T", int(4))],
            driver: Driver { bar: "arm".into() },
            tracer: Tracer::Joint("T".into()),
        },
        description: "pair of compasses: a 5-hole beam turning about one hole, pen 4 units out",
        seed_angle: 0.0,
        seed: seed(&[("T", [4.0, 0.0])]),
        sweep: (0.0, 2.0 * PI),
        straight_window: None,
        beams: beams(&[("arm", BeamUse::Beam(5))]),
    }
}

/// Crossed four-bar in the classical 2:5:5:4 proportions (coupler, rockers,
/// ground), doubled: 11-hole rockers, a 5-hole coupler, pivots 8 apart on the
/// red beam. The pen sits in the middle of the coupler.
fn chebyshev() -> BuiltinModel {
    let h = 8.0;
    BuiltinModel {
        spec: chebyshev_spec("chebyshev"),
        description:
            "Chebyshev's crossed four-bar, pen at the coupler midpoint; nearly straight stretch",
        seed_angle: f64::atan2(h, 6.0),
        seed: seed(&[("B", [6.0, 8.0]), ("C", [2.0, 8.0])]),
        sweep: (0.65, 1.77),
        straight_window: Some((0.8, 1.5)),
        beams: chebyshev_beams(),
    }
}

/// Same bars as [`chebyshev`] in the uncrossed assembly.
fn chebyshev_open() -> BuiltinModel {
    let h = 96f64.sqrt();
    BuiltinModel {
        spec: chebyshev_spec("chebyshev_open"),
        description: "Chebyshev's bars assembled uncrossed; the pen draws a rounded curve",
        seed_angle: f64::atan2(h, 2.0),
        seed: seed(&[("B", [2.0, h]), ("C", [6.0, h])]),
        sweep: (0.65, 1.77),
        straight_window: None,
        beams: chebyshev_beams(),
    }
}

fn chebyshev_spec(name: &str) -> LinkageSpec {
    LinkageSpec {
        name: name.into(),
        joints: vec![
            Joint::anchored("A", RatPoint::integer(0, 0)),
            Joint::anchored("D", RatPoint::integer(8, 0)),
            Joint::free("B"),
            Joint::free("C"),
        ],
        bars: vec![
            Bar::new("left", "A", "B", int(10)),
            Bar::new("coupler", "B", "C", int(4)),
            Bar::new("right", "D", "C", int(10)),
        ],
        driver: Driver { bar: "left".into() },
        tracer: Tracer::OnBar {
            bar: "coupler".into(),
            offset: half(),
        },
    }
}

fn chebyshev_beams() -> Vec<(BarId, BeamUse)> {
    beams(&[
        ("left", BeamUse::Beam(11)),
        ("coupler", BeamUse::Beam(5)),
        ("right", BeamUse::Beam(11)),
    ])
}

/// Lambda linkage in the classical 1:2:2.5:5 proportions doubled: a 3-hole
/// crank, pivots 4 apart, a rocker of two half beams reaching the middle hole
/// of an 11-hole coupler. The pen is at the far end of the coupler.
fn chebyshev_lambda() -> BuiltinModel {
    BuiltinModel {
        spec: LinkageSpec {
            name: "chebyshev_lambda".into(),
            joints: vec![
                Joint::anchored("O", RatPoint::integer(0, 0)),
                Joint::anchored("Q", RatPoint::integer(4, 0)),
                Joint::free("A"),
                Joint::free("P"),
                Joint::free("M").on_bar("coupler", half()),
            ],
            bars: vec![
                Bar::new("crank", "O", "A", int(2)),
                Bar::new("coupler", "A", "P", int(10)),
                Bar::new("rocker", "Q", "M", int(5)),
            ],
            driver: Driver {
                bar: "crank".into(),
            },
            tracer: Tracer::Joint("P".into()),
        },
        description: "Chebyshev's lambda mechanism: full crank turn, closed curve with a flat side",
        seed_angle: PI / 2.0,
        seed: seed(&[("A", [0.0, 2.0]), ("M", [4.0, 5.0]), ("P", [8.0, 8.0])]),
        sweep: (0.0, 2.0 * PI),
        straight_window: Some((2.0, 4.28)),
        beams: beams(&[
            ("crank", BeamUse::Beam(3)),
            ("coupler", BeamUse::Beam(11)),
            ("rocker", BeamUse::HalfBeams(6)),
        ]),
    }
}

/// Watt's parallel motion: two 9-hole rockers and a 5-hole coupler, pen at the
/// coupler midpoint. One pivot is on the red beam, the other 4 units above the
/// beam's end on a perpendicular squared off with a 3-4-5 triangle, so the
/// rockers lie horizontal and the coupler vertical in the middle position.
fn watt() -> BuiltinModel {
    BuiltinModel {
        spec: LinkageSpec {
            name: "watt".into(),
            joints: vec![
                Joint::anchored("A", RatPoint::integer(0, 4)),
                Joint::anchored("D", RatPoint::integer(16, 0)),
                Joint::free("B"),
                Joint::free("C"),
            ],
            bars: vec![
                Bar::new("upper", "A", "B", int(8)),
                Bar::new("coupler", "B", "C", int(4)),
                Bar::new("lower", "D", "C", int(8)),
            ],
            driver: Driver {
                bar: "upper".into(),
            },
            tracer: Tracer::OnBar {
                bar: "coupler".into(),
                offset: half(),
            },
        },
        description: "Watt's linkage: figure eight with a long, nearly straight middle stretch",
        seed_angle: 0.0,
        seed: seed(&[("B", [8.0, 4.0]), ("C", [8.0, 0.0])]),
        sweep: (-1.0, 0.5),
        straight_window: Some((-0.4, 0.4)),
        beams: beams(&[
            ("upper", BeamUse::Beam(9)),
            ("coupler", BeamUse::Beam(5)),
            ("lower", BeamUse::Beam(9)),
        ]),
    }
}

/// Hart's antiparallelogram: 9-hole beams as the long sides, 5-hole beams as
/// the short ones. The fixed pivot is the middle hole of one long side, the
/// driven hole is the middle of the adjacent short side, turned by a third
/// 5-hole beam from a pivot 4 units away, so its circle passes through the
/// fixed pivot. The pen is in the middle of the other short side and moves
/// on the line `x = -3/2`.
fn hart_inversor() -> BuiltinModel {
    BuiltinModel {
        spec: LinkageSpec {
            name: "hart_inversor".into(),
            joints: vec![
                Joint::anchored("O", RatPoint::integer(0, 0)).on_bar("DA", half()),
                Joint::anchored("Z", RatPoint::integer(4, 0)),
                Joint::free("A"),
                Joint::free("B"),
                Joint::free("C"),
                Joint::free("D"),
                Joint::free("P").on_bar("AB", half()),
            ],
            bars: vec![
                Bar::new("AB", "A", "B", int(4)),
                Bar::new("BC", "B", "C", int(8)),
                Bar::new("CD", "C", "D", int(4)),
                Bar::new("DA", "D", "A", int(8)),
                Bar::new("crank", "Z", "P", int(4)),
            ],
            driver: Driver { bar: "crank".into() },
            tracer: Tracer::OnBar {
                bar: "CD".into(),
                offset: half(),
            },
        },
        description: "Hart's inversor: antiparallelogram inverting a circle through the pivot into a straight line",
        seed_angle: 2.0,
        seed: seed(&[
            ("A", [0.365581, 3.983259]),
            ("B", [4.305244, 3.291121]),
            ("C", [-2.634419, -0.688964]),
            ("D", [-0.365581, -3.983259]),
            ("P", [2.335413, 3.63719]),
        ]),
        sweep: (1.46, 2.62),
        straight_window: Some((1.46, 2.62)),
        beams: beams(&[
            ("AB", BeamUse::Beam(5)),
            ("BC", BeamUse::Beam(9)),
            ("CD", BeamUse::Beam(5)),
            ("DA", BeamUse::Beam(9)),
            ("crank", BeamUse::Beam(5)),
        ]),
    }
}

/// Two 8-unit legs hinged on the base 8 units apart, braced by a 4-unit
/// crossbar between their 6-unit holes; the pen sits where the two 4-unit
/// arms from the leg tips meet, and moves on the base's perpendicular bisector.
fn hart_aframe() -> BuiltinModel {
    let three_quarters = Rat::new(BigInt::from(3), BigInt::from(4));
    BuiltinModel {
        spec: LinkageSpec {
            name: "hart_aframe".into(),
            joints: vec![
                Joint::anchored("L", RatPoint::integer(0, 0)),
                Joint::anchored("R", RatPoint::integer(8, 0)),
                Joint::free("LT"),
                Joint::free("RT"),
                Joint::free("LC").on_bar("left_leg", three_quarters.clone()),
                Joint::free("RC").on_bar("right_leg", three_quarters),
                Joint::free("pen"),
            ],
            bars: vec![
                Bar::new("left_leg", "L", "LT", int(8)),
                Bar::new("right_leg", "R", "RT", int(8)),
                Bar::new("crossbar", "LC", "RC", int(4)),
                Bar::new("left_arm", "LT", "pen", int(4)),
                Bar::new("right_arm", "RT", "pen", int(4)),
            ],
            driver: Driver {
                bar: "left_leg".into(),
            },
            tracer: Tracer::Joint("pen".into()),
        },
        description:
            "Hart's A-frame: two legs and a crossbar guiding the pen along a straight line",
        seed_angle: 1.0,
        seed: seed(&[
            ("LT", [4.38, 6.6945]),
            ("RT", [0.1601, 1.5923]),
            ("LC", [3.285, 5.0208]),
            ("RC", [2.1201, 1.1942]),
            ("pen", [4.0, 2.7125]),
        ]),
        sweep: (0.2, 1.55),
        straight_window: Some((0.5, 1.45)),
        beams: beams(&[
            ("left_leg", BeamUse::Beam(9)),
            ("right_leg", BeamUse::Beam(9)),
            ("crossbar", BeamUse::Beam(5)),
            ("left_arm", BeamUse::Beam(5)),
            ("right_arm", BeamUse::Beam(5)),
        ]),
    }
}
