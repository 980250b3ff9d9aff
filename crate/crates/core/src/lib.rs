//! Exact linear algebra of Lagrangian subspaces in orthogonal spaces, and a
//! calculator for the Segre stratification of the moduli of odd-rank
//! orthogonal bundles on a curve.
//!
//! * [`field`]: rationals and odd prime fields.
//! * [`linalg`]: matrices and canonical (RREF) subspaces.
//! * [`ortho`]: symmetric bilinear spaces, Witt reduction, isometries.
//! * [`lagrange`]: Lagrangian enumeration, components of `OG(n, 2n)`, the
//!   2:1 correspondence between Lagrangians of `V` and of `V ⊥ <c>`.
//! * [`strata`]: closed-form dimensions, bounds and tables.
//! * [`json`]: the JSON encodings used by the command-line tool.
//! * [`oracle`]: brute-force reference searches over finite fields.

pub mod field;
pub mod json;
pub mod lagrange;
pub mod linalg;
pub mod oracle;
pub mod ortho;
pub mod strata;

pub use field::{FieldCtx, FieldError, Scalar};
pub use lagrange::{Component, ComponentLabel, CorankRecord, LagrangeError, LiftPair};
pub use linalg::{LinalgError, Matrix, Subspace};
pub use ortho::{GramSpace, OrthoError, Shape, WittDecomposition};
pub use strata::{CurveParams, Sign, StrataError, StratumRow};
