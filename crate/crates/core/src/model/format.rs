//! Linkage files: JSON with every number an exact integer ratio.
//!
//! ```json
//! {
//!   "name": "compass",
//!   "joints": [{"id": "O", "anchored": [0, 1, 0, 1]}, {"id": "T"}],
//!   "bars": [{"id": "arm", "a": "O", "b": "T", "length": [4, 1]}],
//!   "driver": {"bar": "arm"},
//!   "tracer": {"joint": "T"}
//! }
//! ```
//!
//! A joint may also carry `"on": {"bar": "...", "offset": [n, d]}` to sit in an
//! intermediate hole of that bar.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::spec::{
    Bar, BarHole, BarId, Driver, Joint, JointId, JointKind, LinkageSpec, RatPoint, Tracer,
};
use super::{validate, ModelError};
use crate::poly::Rat;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    name: String,
    joints: Vec<FileJoint>,
    bars: Vec<FileBar>,
    driver: FileDriver,
    tracer: FileTracer,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileJoint {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchored: Option<[i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    on: Option<FileHole>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileHole {
    bar: String,
    offset: [i64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileBar {
    id: String,
    a: String,
    b: String,
    length: [i64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDriver {
    bar: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FileTracer {
    Joint { joint: String },
    OnBar { bar: String, offset: [i64; 2] },
}

fn rat(pair: [i64; 2], field: String) -> Result<Rat, ModelError> {
    if pair[1] == 0 {
        return Err(ModelError::Field {
            field,
            msg: "zero denominator".into(),
        });
    }
    Ok(Rat::new(BigInt::from(pair[0]), BigInt::from(pair[1])))
}

fn pair(r: &Rat) -> [i64; 2] {
    let n = r.numer().to_i64().expect("numerator exceeds i64");
    let d = r.denom().to_i64().expect("denominator exceeds i64");
    [n, d]
}

/// Parses without validating.
pub fn parse(text: &str) -> Result<LinkageSpec, ModelError> {
    let file: FileSpec = serde_json::from_str(text).map_err(|e| ModelError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;

    let mut joints = Vec::with_capacity(file.joints.len());
    for (i, j) in file.joints.into_iter().enumerate() {
        let kind = match j.anchored {
            Some([xn, xd, yn, yd]) => JointKind::Anchored(RatPoint::new(
                rat([xn, xd], format!("joints[{i}].anchored"))?,
                rat([yn, yd], format!("joints[{i}].anchored"))?,
            )),
            None => JointKind::Free,
        };
        let hole = match j.on {
            Some(h) => Some(BarHole {
                bar: BarId(h.bar),
                offset: rat(h.offset, format!("joints[{i}].on.offset"))?,
            }),
            None => None,
        };
        joints.push(Joint {
            id: JointId(j.id),
            kind,
            hole,
        });
    }

    let mut bars = Vec::with_capacity(file.bars.len());
    for (i, b) in file.bars.into_iter().enumerate() {
        bars.push(Bar {
            id: BarId(b.id),
            a: JointId(b.a),
            b: JointId(b.b),
            length: rat(b.length, format!("bars[{i}].length"))?,
        });
    }

    let tracer = match file.tracer {
        FileTracer::Joint { joint } => Tracer::Joint(JointId(joint)),
        FileTracer::OnBar { bar, offset } => Tracer::OnBar {
            bar: BarId(bar),
            offset: rat(offset, "tracer.offset".into())?,
        },
    };

    Ok(LinkageSpec {
        name: file.name,
        joints,
        bars,
        driver: Driver {
            bar: BarId(file.driver.bar),
        },
        tracer,
    })
}

/// Parses and validates.
pub fn load(text: &str) -> Result<LinkageSpec, ModelError> {
    let spec = parse(text)?;
    let report = validate(&spec);
    if report.is_valid() {
        Ok(spec)
    } else {
        Err(ModelError::Invalid(report))
    }
}

/// Pretty JSON; rationals are written in lowest terms.
///
/// Panics if a numerator or denominator does not fit in an `i64`.
pub fn save(spec: &LinkageSpec) -> String {
    let file = FileSpec {
        name: spec.name.clone(),
        joints: spec
            .joints
            .iter()
            .map(|j| FileJoint {
                id: j.id.0.clone(),
                anchored: j.anchor().map(|p| {
                    let [xn, xd] = pair(&p.x);
                    let [yn, yd] = pair(&p.y);
                    [xn, xd, yn, yd]
                }),
                on: j.hole.as_ref().map(|h| FileHole {
                    bar: h.bar.0.clone(),
                    offset: pair(&h.offset),
                }),
            })
            .collect(),
        bars: spec
            .bars
            .iter()
            .map(|b| FileBar {
                id: b.id.0.clone(),
                a: b.a.0.clone(),
                b: b.b.0.clone(),
                length: pair(&b.length),
            })
            .collect(),
        driver: FileDriver {
            bar: spec.driver.bar.0.clone(),
        },
        tracer: match &spec.tracer {
            Tracer::Joint(j) => FileTracer::Joint { joint: j.0.clone() },
            Tracer::OnBar { bar, offset } => FileTracer::OnBar {
                bar: bar.0.clone(),
                offset: pair(offset),
            },
        },
    };
    let mut s = serde_json::to_string_pretty(&file).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const COMPASS: &str = r#"{
        "name": "compass",
        "joints": [{"id": "O", "anchored": [0, 1, 0, 1]}, {"id": "T"}],
        "bars": [{"id": "arm", "a": "O", "b": "T", "length": [4, 1]}],
        "driver": {"bar": "arm"},
        "tracer": {"joint": "T"}
    }"#;

    #[test]
    fn load_and_round_trip() {
        let s = load(COMPASS).unwrap();
        assert_eq!(s.bars[0].length, Rat::from_integer(4.into()));
        assert_eq!(load(&save(&s)).unwrap(), s);
    }

    #[test]
    fn negative_length_is_a_validation_error() {
        let text = COMPASS.replace("[4, 1]", "[-3, 1]");
        match load(&text) {
            Err(ModelError::Invalid(r)) => assert!(!r.check("positive-lengths").unwrap().passed),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_driver_names_the_field() {
        let text = COMPASS.replace(r#""driver": {"bar": "arm"},"#, "");
        match load(&text) {
            Err(ModelError::Parse { msg, line, .. }) => {
                assert!(msg.contains("driver"), "{msg}");
                assert!(line > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let text = COMPASS.replace("[4, 1]", "[4, 0]");
        assert!(
            matches!(load(&text), Err(ModelError::Field { field, .. }) if field == "bars[0].length")
        );
    }

    #[test]
    fn bar_tracer_and_holes_round_trip() {
        let text = r#"{
            "name": "t",
            "joints": [
                {"id": "A", "anchored": [0, 1, 0, 1]},
                {"id": "D", "anchored": [4, 1, 0, 1]},
                {"id": "B"}, {"id": "C"},
                {"id": "M", "on": {"bar": "coupler", "offset": [1, 2]}}
            ],
            "bars": [
                {"id": "crank", "a": "A", "b": "B", "length": [2, 1]},
                {"id": "coupler", "a": "B", "b": "C", "length": [5, 1]},
                {"id": "rocker", "a": "D", "b": "M", "length": [5, 2]}
            ],
            "driver": {"bar": "crank"},
            "tracer": {"bar": "coupler", "offset": [1, 1]}
        }"#;
        let s = load(text).unwrap();
        assert!(matches!(s.tracer, Tracer::OnBar { .. }));
        assert_eq!(parse(&save(&s)).unwrap(), s);
    }
}
