//! Limit-cycle replication through separable polynomial pullbacks.
//!
//! A planar polynomial field `X = (P, Q)` is pulled back through
//! `Phi(u, v) = (p(u), p(v))` to
//! `Y = (p'(v) P(p(u), p(v)), p'(u) Q(p(u), p(v)))`, which satisfies
//! `DPhi . Y = p'(u) p'(v) X o Phi`. Every full monotone branch of `p` on
//! `(-1, 1)` carries a copy of each limit cycle of `X`, so a Chebyshev cover
//! of degree `m` multiplies the cycle count by `m^2` while the degree grows to
//! `m deg(X) + m - 1`.
//!
//! * [`polycore`]: exact rational polynomials and fields.
//! * [`branches`]: monotone full branches of univariate covers.
//! * [`pullback`]: pullback construction and exact identity checks.
//! * [`dynamics`]: integration, return maps, cycle search and lifting.
//! * [`bounds`]: seed tables and replication bound arithmetic.
//! * [`svg`]: figure output; [`numfmt`]: fixed nine-digit number text.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod branches;
pub mod dynamics;
pub mod error;
pub mod numfmt;
pub mod polycore;
pub mod pullback;
pub mod svg;

pub use error::{Error, Result};
