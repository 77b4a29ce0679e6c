//! Exact computations in Hecke algebras, the Drinfeld-Jimbo R-matrix and the
//! FRT quantum matrix algebra over Q(q), with the machinery needed to compare
//! the diagonal subalgebra against the pseudo-plactic relations.

pub mod exactq;
pub mod hecke;
pub mod linalgq;
pub mod pplactic;
pub mod qma;
pub mod rmat;
pub mod symgroup;

pub use exactq::{omega, q_int, ExactError, LaurentPoly, QScalar};
pub use hecke::{DiagElt, HeckeElt, HeckeError, Sign};
pub use linalgq::{LinalgError, QMatrix, SparseVec, SubspaceBasis};
pub use symgroup::{MultiIndex, Perm, SymError};
pub use pplactic::{IdealVariant, PpError};
pub use qma::{FreeElt, FreeWord, QmaError};
pub use rmat::RmatError;

/// Version tag mixed into cache keys.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
