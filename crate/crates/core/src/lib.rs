//! Finite generalized metric spaces treated as categories enriched over
//! `[0, ∞]`: profunctor nuclei and Isbell completions, directed Hausdorff
//! distances, magnitude, and the Legendre-Fenchel transform on grids.

// `!(x > 0.0)` style guards are there to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ext;
pub mod hausdorff;
pub mod io;
pub mod legendre;
pub mod linalg;
pub mod magnitude;
pub mod nucleus;
pub mod space;

pub use error::{Error, ParseError, Result};
pub use ext::{ExtReal, Flavor, Scalar, DEFAULT_TOL};
pub use hausdorff::SubsetSelection;
pub use legendre::{DualGrid, Grid, SampledFunction};
pub use magnitude::{Outcome, SimilarityMatrix};
pub use nucleus::{Copresheaf, Presheaf, Profunctor};
pub use space::{GenMetricSpace, ScalarFunction, SpaceKind};
