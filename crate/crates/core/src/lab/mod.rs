//! Explicit small-rank modules and the brute-force oracles built on them.

pub mod algebra;
pub mod freudenthal;
pub mod highest;
pub mod induced;
pub mod localize;
pub mod module;
pub mod oracles;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    #[error("depth-too-large: {basis} basis vectors exceed the cap {cap}")]
    DepthTooLarge { basis: usize, cap: usize },
    #[error("window-too-small: undecided weights {undecided:?}")]
    WindowTooSmall { undecided: Vec<String> },
    #[error("not-injective: {0}")]
    NotInjective(String),
    #[error("not-bijective-input: {0}")]
    NotBijective(String),
    #[error("invalid-input: {0}")]
    InvalidInput(String),
    #[error("not-a-lie-algebra: {0}")]
    NotLieAlgebra(String),
    #[error("unknown-suite: {0}")]
    UnknownSuite(String),
}

pub use algebra::LabAlgebra;
pub use highest::{construct_kac, construct_verma, HighestWeightModule};
pub use module::{Submodule, WindowModule};
