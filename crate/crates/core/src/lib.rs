//! Stratified ground-state varieties of the quintic gauged linear sigma
//! model: singular rays of `G`, the stratification on both sheets, exocurve
//! atlases, the Mayer–Vietoris cohomology of the compactification and the
//! small-resolution transition graph.

pub mod atlas;
pub mod cohomology;
pub mod cyclotomic;
pub mod groebner;
pub mod linalg;
pub mod model;
pub mod parse;
pub mod polynomial;
pub mod resolution;
pub mod singular;
pub mod strata;

pub use cyclotomic::{Cyclo, CyclotomicField};
pub use model::{MomentMap, Sheet};
pub use parse::{parse_polynomial, ParseContext, ParseError};
pub use polynomial::{Monomial, Polynomial, Variables};
pub use singular::{CandidateSource, SingularRay, SingularityClass, TransversalityReport};
pub use strata::{StratifiedVariety, Stratum, StratumKind};
pub use cohomology::{ConifoldData, GradedSpace};
pub use resolution::{ResolutionChoice, TransitionGraph};
