//! Exact computations of asymptotic lengths and multiplicities for graded
//! families of monomial ideals in `k[x_1..x_d]` localized at the origin.
//!
//! The crate is organized bottom-up:
//!
//! - [`ideal`], [`length`], [`module`]: monomial ideal arithmetic and
//!   lattice-point lengths.
//! - [`families`]: graded families and filtrations, including the classical
//!   counterexample constructions.
//! - [`asymptotics`]: length sequences, limit estimation and the executable
//!   limit/inequality checks.
//! - [`geometry`]: exact convex geometry in the positive orthant.
//! - [`semigroup`]: graded lattice semigroups and their Okounkov bodies.

pub mod asymptotics;
pub mod error;
pub mod families;
pub mod geometry;
pub mod ideal;
pub mod length;
pub mod module;
pub mod rational;
pub mod ring;
pub mod semigroup;
pub mod syntax;

pub use error::{Error, Result};
pub use families::{build_family, ExponentSequence, FamilySpec, GradedFamily, ValuationWeight, VerificationReport};
pub use ideal::{MembershipIndex, MonomialIdeal};
pub use length::{colength, length_mod_power, rel_length, Length};
pub use module::{module_piece, MonomialModule};
pub use rational::Q;
pub use ring::{AmbientRing, Exponent};
pub use syntax::{parse_family, parse_ideal};
