//! Exact symbolic engine for the twisted Zhu algebra of a cyclic permutation
//! orbifold, verified over the rank-1 Heisenberg vertex operator algebra.
//!
//! The engine works over arbitrary-precision rationals and cyclotomic fields
//! Q(eta_k); every identity it checks is decided by exact equality of
//! canonical forms. Truncated formal Laurent series carry explicit exactness
//! windows so truncation can never silently produce a wrong residue.
//!
//! Layers, bottom up:
//! - [`scalar`], [`poly`], [`cyclo`]: exact arithmetic kernels;
//! - [`series`], [`ratfn`]: formal Laurent calculus and exact rational
//!   function identities;
//! - [`model`], [`fock`]: the graded vertex-algebra interface and the free
//!   boson realization;
//! - [`zhu`]: the untwisted products u o v and u * v with constructive
//!   O(V)-membership witnesses;
//! - [`tensor`]: V tensor k with the k-cycle action, eigenspace projectors
//!   and the twisted products;
//! - [`delta`]: the Delta_k operator, its coefficient table a_j, inverse and
//!   series form;
//! - [`iso`]: the isomorphism phi between the twisted Zhu algebra of the
//!   cyclic orbifold and the Zhu algebra of one factor, with end-to-end
//!   verification of both product reduction chains;
//! - [`parse`], [`harness`]: the expression grammar and the deterministic
//!   check-suite runner used by the command line tool.

pub mod cyclo;
pub mod delta;
pub mod error;
pub mod fock;
pub mod harness;
pub mod iso;
pub mod linear;
pub mod model;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod scalar;
pub mod series;
pub mod tensor;
pub mod zhu;

pub use cyclo::{eta_power, CycloScalar};
pub use error::{Error, Result};
pub use fock::{FockMonomial, Heisenberg, Vector};
pub use linear::{AddGroup, BasisKey, Coeff, GVector, Module};
pub use model::Model;
pub use scalar::{rational_binomial, Scalar};
pub use series::Series;
pub use tensor::{TensorMonomial, TensorVector};
