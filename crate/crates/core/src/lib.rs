//! Low-rank parity-check codes over finite commutative rings.
//!
//! Local rings are Galois rings or quotients `Z_{p^s}[x]/(g)`; arbitrary finite
//! rings are products of those. Codes live over the degree-`m` Galois
//! extension of each factor.

pub mod arith;
pub mod error;
pub mod field;
pub mod ring;
pub mod chain;
pub mod ext_module;
pub mod extension;
pub mod modlin;
pub mod lrpc;
pub mod spec;
pub mod product_ring;
pub mod bound;
pub mod sim;

pub use arith::{Mat, RingOps};
pub use error::{Error, Result};
pub use extension::{ExtElem, Extension};
pub use lrpc::{CodeParams, DecodingFailure, FailureLine, LrpcCode};
pub use modlin::{FreeBasis, Submodule};
pub use product_ring::{ProductExtension, ProductLrpcCode, ProductRing};
pub use ring::{LocalRing, RingElem};

/// Vectors over an extension, e.g. codewords and syndromes.
pub type ExtVector = Vec<ExtElem>;
/// Matrices over the base ring.
pub type RingMatrix = Mat<RingElem>;
/// Matrices over an extension.
pub type ExtMatrix = Mat<ExtElem>;
