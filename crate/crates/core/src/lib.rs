//! Matrix-valued Hardy space tools: symbols, block Toeplitz sections,
//! inner/outer factorization and nearly invariant subspaces.

pub mod config;
pub mod element;
pub mod error;
pub mod fixtures;
pub mod grid;
pub mod hayashi;
pub mod inner_outer;
pub mod linalg;
pub mod nearly_inv;
pub mod pointwise;
pub mod symbol;
pub mod toeplitz;
pub mod transform;

pub use config::ToleranceConfig;
pub use element::HardyElement;
pub use error::{HardyError, Result};
pub use grid::SampleGrid;
pub use symbol::{MatrixSymbol, Sign};
