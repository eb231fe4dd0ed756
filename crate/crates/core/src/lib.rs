//! Planar bar linkages: numeric tracing, exact locus equations and straightness
//! certificates, plus the parts list for building them.

pub mod bom;
pub mod locus;
pub mod model;
pub mod poly;
pub mod solver;

pub use bom::{Catalog, ShoppingList, Vendor};
pub use locus::{certify, locus_equation, LocusResult, StraightnessCertificate};
pub use model::{builtin, LinkageSpec};
pub use poly::{MultiPoly, Rat};
pub use solver::{Configuration, SolverSettings, Trace};
