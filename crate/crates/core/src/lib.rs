//! Two-dimensional complete complementary codes (CCCs) from generalized
//! Boolean functions.
//!
//! - [`gbf`]: Boolean functions over Z_q and their `2^n × 2^m` arrays.
//! - [`construct`]: the direct `(2^k, 2^k, 2^n, 2^m)` construction.
//! - [`correlation`]: 2D aperiodic correlation and exhaustive GCAS / CCC checks.
//! - [`mimo`]: URA steering, omnidirectional precoding, STBC and BER simulation.

pub mod array;
pub mod construct;
pub mod correlation;
pub mod family;
pub mod gbf;
pub mod mimo;

pub use array::ZqArray;
pub use construct::{example_spec, ConstructionSpec, SpecDocument, SpecError};
pub use correlation::{verify_ccc, verify_gcas, VerificationReport};
pub use family::CccFamily;
pub use gbf::GbfPolynomial;
