//! Exact finite-scale Gelfand–Nachbin duality.
//!
//! Finite posets are Nachbin spaces; their function algebras `R^X` carry a
//! proximity `a ≺ b` ("some monotone function fits between a and b"), and
//! the ordered spectrum of such an algebra recovers the poset. This crate
//! implements every piece of that correspondence with exact rationals:
//!
//! * [`order`]: quasi-orders, posets, monotone envelopes, enumeration;
//! * [`fnalg`]: the lattice-ordered algebra `R^X` and its closed sub-algebras;
//! * [`sbal`]: monotone cones, their envelope of formal differences and its
//!   universal property;
//! * [`proximity`]: proximity oracles and sampled axiom suites;
//! * [`spectrum`]: maximal ideals, the induced order, and the Gelfand maps;
//! * [`approximation`]: constructive Stone–Weierstrass and Dieudonné procedures;
//! * [`plus`]: the positive-cone presentation and its round trips.

pub mod approximation;
pub mod error;
pub mod fnalg;
pub mod order;
pub mod plus;
pub mod proximity;
pub mod rational;
pub mod report;
pub mod sampling;
pub mod sbal;
pub mod spectrum;

pub use error::{Error, Result};
pub use fnalg::{carrier, Carrier, RationalFn, SubalgebraPartition};
pub use order::{Direction, FinitePoset, QuasiOrder};
pub use proximity::ProximityOracle;
pub use rational::{int, rat, Rational};
pub use sbal::{EnvelopePair, SbalSkeleton};
