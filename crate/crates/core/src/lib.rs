//! SIMECK block ciphers, a single-bit fault simulator, and a differential
//! fault attack that recovers the master key from faults in one round.
//!
//! The crate is split along the attack boundary:
//!
//! * [`cipher`]: the three SIMECK variants, key schedule and its inverse.
//! * [`oracle`]: the simulated device. It hands out correct/faulty
//!   ciphertext pairs and keeps the fault positions to itself.
//! * [`dfa`]: the attacker, which sees only ciphertext pairs.
//! * [`experiment`]: seeded Monte-Carlo campaigns and their reports.

pub mod cipher;
pub mod dfa;
pub mod error;
pub mod experiment;
pub mod oracle;

pub use cipher::{Block, Cipher, MasterKey, RoundKeys, Variant, Word};
pub use error::{Error, Result};
pub use oracle::{CiphertextPair, FaultOracle, FaultSpec, FaultTarget, FaultedPair};
