//! Exact special values of Witten zeta functions of rank-two and rank-three Lie algebras
//! (and sl(5)) by partial-fraction reduction of multiple lattice sums.

pub mod catalog;
pub mod closed_forms;
pub mod error;
pub mod exact;
pub mod factor;
pub mod linalg;
pub mod method;
pub mod numeric;
pub mod oracle;
pub mod reduction;
pub mod tree;
pub mod zfunction;

pub use error::{Error, Result};
pub use exact::{ExactScalar, PiValue};
pub use tree::ComputationTree;
pub use zfunction::FormMatrix;
