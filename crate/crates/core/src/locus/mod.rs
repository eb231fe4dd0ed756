//! Implicit equations of pen curves and exact straightness certificates.

mod certify;
mod factor;
mod ideal;

use serde::{Deserialize, Serialize};

pub use certify::{
    certify, Evidence, StraightnessCertificate, Verdict, BEZOUT_RATIONALE, ON_LINE_TOLERANCE,
};
pub use factor::{extract_linear_factors, LinearFactors};
pub use ideal::{constraint_ideal, ring_point, ConstraintIdeal};

use crate::model::{validate, LinkageSpec};
use crate::poly::{eliminate_with, GroebnerConfig, MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocusError {
    #[error("invalid linkage:\n{0}")]
    InvalidSpec(String),
    #[error("elimination left no equation in x, y; the pen has two degrees of freedom")]
    EmptyElimination,
    #[error("window holds {0} samples, need at least {MIN_WINDOW_SAMPLES}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Fewest trace samples a certificate is decided on.
pub const MIN_WINDOW_SAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct LocusResult {
    /// Minimal-degree generator of the elimination ideal, primitive.
    pub locus: MultiPoly,
    pub total_degree: u32,
    /// Linear factors with multiplicities.
    pub factors: Vec<(MultiPoly, u32)>,
    /// `locus / Π factorᵐ`, never split further.
    pub residual_cofactor: MultiPoly,
    /// Further generators of the same minimal degree, if elimination gave several.
    pub alternatives: Vec<MultiPoly>,
}

impl LocusResult {
    pub fn linear_factor_count(&self) -> usize {
        self.factors.len()
    }

    /// JSON-ready view with every polynomial in normalized text form.
    pub fn report(&self) -> LocusReport {
        LocusReport {
            locus: self.locus.to_normalized_string(),
            total_degree: self.total_degree,
            factors: self
                .factors
                .iter()
                .map(|(f, m)| FactorReport {
                    factor: f.to_normalized_string(),
                    multiplicity: *m,
                    linear: true,
                })
                .collect(),
            cofactor: self.residual_cofactor.to_normalized_string(),
            cofactor_degree: self.residual_cofactor.total_degree().unwrap_or(0),
            alternatives: self
                .alternatives
                .iter()
                .map(|p| p.to_normalized_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub factor: String,
    pub multiplicity: u32,
    pub linear: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub locus: String,
    pub total_degree: u32,
    pub factors: Vec<FactorReport>,
    pub cofactor: String,
    pub cofactor_degree: u32,
    pub alternatives: Vec<String>,
}

pub fn locus_equation(spec: &LinkageSpec) -> Result<LocusResult, LocusError> {
    locus_equation_with(spec, &GroebnerConfig::default(), &[])
}

/// As [`locus_equation`], with an explicit pair budget and pen positions that
/// help spot a straight component.
pub fn locus_equation_with(
    spec: &LinkageSpec,
    config: &GroebnerConfig,
    hints: &[[f64; 2]],
) -> Result<LocusResult, LocusError> {
    let report = validate(spec);
    if !report.is_valid() {
        return Err(LocusError::InvalidSpec(report.to_string()));
    }
    let ideal = constraint_ideal(spec);
    let elim = eliminate_with(&ideal.generators, &["x", "y"], config)?;
    let first = elim.first().ok_or(LocusError::EmptyElimination)?;
    let degree = first.total_degree().unwrap_or(0);
    // a constant means the ideal is the whole ring: nothing can be traced
    if first.is_constant() {
        return Err(LocusError::EmptyElimination);
    }
    let mut same: Vec<MultiPoly> = elim
        .iter()
        .filter(|p| p.total_degree() == Some(degree))
        .cloned()
        .collect();
    let locus = same.remove(0);
    let split = extract_linear_factors(&locus, hints);
    Ok(LocusResult {
        total_degree: degree,
        factors: split.factors,
        residual_cofactor: split.cofactor,
        locus,
        alternatives: same,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin, Bar, Driver, Joint, LinkageSpec, RatPoint, Tracer};
    use crate::poly::Rat;

    #[test]
    fn compass_circle() {
        let r = locus_equation(&builtin("compass").unwrap()).unwrap();
        assert_eq!(r.locus.to_normalized_string(), "x^2 + y^2 - 16");
        assert_eq!(r.total_degree, 2);
        assert!(r.factors.is_empty());
        assert_eq!(r.report().cofactor_degree, 2);
    }

    #[test]
    fn pen_on_a_sliding_bar_is_two_dimensional() {
        // a two-bar arm: the validator rejects it, so build the ideal by hand
        let spec = LinkageSpec {
            name: "arm".into(),
            joints: vec![
                Joint::anchored("O", RatPoint::integer(0, 0)),
                Joint::free("E"),
                Joint::free("T"),
            ],
            bars: vec![
                Bar::new("upper", "O", "E", Rat::from_integer(3.into())),
                Bar::new("lower", "E", "T", Rat::from_integer(2.into())),
            ],
            driver: Driver {
                bar: "upper".into(),
            },
            tracer: Tracer::Joint("T".into()),
        };
        assert!(matches!(
            locus_equation(&spec),
            Err(LocusError::InvalidSpec(_))
        ));
        let ideal = constraint_ideal(&spec);
        let elim =
            eliminate_with(&ideal.generators, &["x", "y"], &GroebnerConfig::default()).unwrap();
        assert!(elim.is_empty());
    }
}
