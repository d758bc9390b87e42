//! Moore-Crutchfield quantum finite automata for the unary language
//! MOD_p = { a^j : j ≡ 0 (mod p) }.
//!
//! The crate covers the whole pipeline from abstract machine to circuits:
//!
//! * [`linalg`]: dense complex state vectors and unitaries.
//! * [`automaton`]: MCQFA semantics, the 2-state and direct-sum MOD_p
//!   machines, and closed-form acceptance probabilities.
//! * [`circuit`]: gate-level IR, a statevector simulator, builders for
//!   every circuit variant and OpenQASM 2.0 import/export.
//! * [`synthesis`]: controlled-Ry decompositions, basis-set transpilation,
//!   gate counting and Ry-run fusion.
//! * [`sampling`]: seeded finite-shot sampling under depolarizing and
//!   readout noise.
//! * [`ksearch`]: exhaustive search over rotation multipliers for the
//!   smallest worst-case nonmember acceptance.

pub mod automaton;
pub mod circuit;
pub mod error;
pub mod ksearch;
pub mod linalg;
pub mod sampling;
pub mod synthesis;

pub use error::{Error, Result};
