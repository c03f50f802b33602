//! Canonical bases of higher-level Fock spaces for the quantum affine
//! algebra of type A, and the effect on them of adding an empty runner to
//! every component's abacus display.

pub mod abacus;
pub mod canonical;
pub mod error;
pub mod fock;
pub mod laurent;
pub mod multipartition;
pub mod partition;
pub mod runnerthm;

pub use canonical::{CanonicalBasis, ColumnKey, ColumnSet, DecompositionMatrix, TieBreak};
pub use error::{Error, Result};
pub use fock::FockVector;
pub use laurent::LaurentPoly;
pub use multipartition::{Multicharge, Multipartition, Node};
pub use partition::Partition;
pub use runnerthm::{Report, RunnerSpec, Verdict};
