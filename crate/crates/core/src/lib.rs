//! Hausdorff dimension of limit sets of Hecke triangle groups from
//! finite transfer-operator determinants.
//!
//! The dimension δ(w) of Γ_w = ⟨z ↦ z + w, z ↦ −1/z⟩ is the largest real
//! zero of the Fredholm determinant det(1 − L_{s,w}). Truncating L to the
//! first k monomials gives an explicit k×k matrix whose determinant D_k has
//! a unique real zero s_k(w) converging to δ(w) like (w/2)^{−k}.

// `!(x > y)` guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Constants are transcribed at the precision they were computed.
#![allow(clippy::excessive_precision)]

pub mod asymptotics;
pub mod certify;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod geodesic_oracle;
pub mod hyperbolic;
pub mod linalg;
pub mod specfun;
pub mod transfer;

pub use error::{Error, Result};
