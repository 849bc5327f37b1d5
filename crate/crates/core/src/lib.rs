//! Toolkit for IQP-based verifiable quantum advantage: GF(2) linear algebra,
//! instance construction, exact correlation evaluation, brute-force
//! simulation, the verifier, and classical secret-extraction attacks.

pub mod attacks;
pub mod codes;
pub mod error;
pub mod f2linalg;
pub mod protocol;
pub mod scheme;
pub mod simulator;
pub mod stabilizer;

pub use attacks::{AttackConfig, AttackReport};
pub use error::{Error, Result};
pub use f2linalg::{BitMatrix, BitVector};
pub use protocol::{Prover, SampleBatch, Verdict};
pub use scheme::{Instance, SchemeKind, SchemeMeta};
pub use stabilizer::Correlation;
