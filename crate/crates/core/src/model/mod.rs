//! Bar-joint linkages: data model, validation, file format and the builtin models.

mod catalog;
mod format;
mod spec;
mod validate;

pub use catalog::{builtin, builtin_model, model_names, BeamUse, BuiltinModel, MODEL_NAMES};
pub use format::{load, parse, save};
pub use spec::{
    Bar, BarHole, BarId, Driver, Joint, JointId, JointKind, LinkageSpec, RatPoint, Tracer,
};
pub use validate::{validate, Check, ValidationReport};

/// LEGO hole pitch, used only when reporting lengths in millimetres.
pub const MM_PER_UNIT: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("field {field}: {msg}")]
    Field { field: String, msg: String },
    #[error("invalid linkage:\n{0}")]
    Invalid(ValidationReport),
}
