//! Hairs and Cantor bouquets for disjoint-type transcendental entire maps.
//!
//! The crate works in logarithmic coordinates: a model map `f` (the
//! exponential family `λe^w`, the sine family `λ sin w`, or a finite
//! composition of these) is represented by its logarithmic transform
//! `F`, a `2πi`-periodic map from the tracts onto a right half-plane `H`.
//!
//! * [`model`] evaluates `F`, its derivative, tract membership and the
//!   per-tract inverse branches.
//! * [`address`] holds the symbolic side: external and intermediate
//!   addresses, their lexicographic order and an order embedding into `[0, 1]`.
//! * [`rays`] traces hairs by pulling back an anchor tower, locates their
//!   endpoints, and checks head-start, speed ordering and accumulation.
//! * [`brush`] assembles traced hairs into a straight-brush picture and
//!   checks its axioms on finite families.
//! * [`cli`] is the command-line surface used by the `bouquet` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod address;
pub mod brush;
pub mod cli;
pub mod error;
pub mod fmt;
pub mod model;
pub mod rays;

pub use address::{AddressPoint, CircularAddress, ExtendedSymbol, ExternalAddress, IntermediateAddress};
pub use error::{Error, Result};
pub use model::{ComplexPoint, Half, LogModel, TractId};
