//! Finite-field toolkit for flat sets in projective space and the additive
//! codes they induce: exact field arithmetic, subspace-set geometry, secant
//! spectra, closed-form predictions, classical constructions, and exhaustive
//! search with machine-checkable certificates.

pub mod analysis;
pub mod codes;
pub mod constructions;
pub mod error;
pub mod formulas;
pub mod geometry;
pub mod gf;
pub mod io;
pub mod search;

pub use analysis::{MaximalityReport, SkewSecantCounts, Spectrum};
pub use codes::{AdditiveCode, WeightDistribution};
pub use constructions::{Construction, ConstructionDescriptor, MathonReport};
pub use error::Error;
pub use formulas::{FeasibilityReason, FeasibilityStatus, FeasibilityVerdict, ParameterSet};
pub use geometry::{Hyperplane, Point, QuotientOutcome, Subspace, SubspaceSet};
pub use gf::{FiniteField, GFElem, SubfieldEmbedding};
pub use search::{SearchOutcome, SearchProblem, SearchStats, SearchStatus, SymmetryBreaking};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
