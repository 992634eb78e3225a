//! Exact computations on the iterated matrix multiplication polynomial
//! `IMM_q^n(X_1, ..., X_n) = trace(X_n ... X_1)` and the hypersurface it cuts out.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals or
//! elements of the quotient ring `Q[t]/(t^n + q - 1)`, and every verdict
//! (invariance, rank, nilpotency, dimension) is decided without floating point.
//!
//! Module map:
//!
//! * [`exact`]: rationals, the quotient ring, dense matrices, rank and
//!   division-free determinants.
//! * [`imm`]: points of `(Mat_q)^n`, evaluation and derivatives.
//! * [`symmetry`]: the symmetry group and its Lie algebra, the stabilizer of
//!   the marked Dynkin diagrams, and the invariant-space check.
//! * [`hessian`]: the Hessian at the distinguished point, its closed-form
//!   inverse, and the dual-variety dimension.
//! * [`quiver`]: irreducible components of the singular locus via nilpotent
//!   representations of the cyclic quiver.
//! * [`jacobian`]: components of the `(n-2)`-nd Jacobian locus.
//! * [`catalog`]: JSON point files and component catalogs.

pub mod catalog;
mod error;
pub mod exact;
pub mod hessian;
pub mod imm;
pub mod jacobian;
pub mod quiver;
pub mod random;
pub mod symmetry;

pub use error::{Error, Result};
pub use exact::{Matrix, Modulus, QuotientScalar, Rational, Scalar};
pub use imm::{MatTuple, VarIndex};
