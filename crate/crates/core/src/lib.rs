//! Weighted Davenport and Erdős–Burgess constants for finite commutative rings.
//!
//! Rings are products of chain rings (`Z/p^k`, `GF(q)`, `GF(q)[x]/(x^k)`), weights
//! are subgroups of the ring's automorphism group, and both constants are
//! computed by exact search. The [`witness`] module builds the explicit
//! idempotent-product-free sequence behind the lower bound
//! `I_Ψ(R) ≥ D_Ψ(U(R)) + Σ_P T(Ind(P); h_P) / h_P` and checks each step of its
//! construction.

pub mod arith;
pub mod automorphism;
pub mod bitset;
pub mod claims;
pub mod error;
pub mod family;
pub mod ideal;
pub mod poly;
pub mod psi;
pub mod report;
pub mod ring;
pub mod search;
pub mod sequence;
pub(crate) mod symmetry;
pub mod syntax;
pub mod tfunc;
pub mod witness;

/// Identifies the algorithms behind cached results; bump when any engine changes.
pub const ENGINE_VERSION: &str = concat!("zsring-", env!("CARGO_PKG_VERSION"), "/engine-3");

pub use automorphism::{full_aut, Orbit, RingAutomorphism, WeightGroup};
pub use bitset::ElemSet;
pub use error::{Error, Result};
pub use ideal::{Ideal, PrimeInfo};
pub use ring::{Elem, FactorDescriptor, FiniteRing};
pub use search::{weighted_burgess, weighted_davenport, SearchConfig, Target};
pub use sequence::{achievable_products, is_idempotent_product_free, AchievableSet, SequenceMultiset};
pub use tfunc::{t_function, t_function_bruteforce, TProfile};
