//! Exact lattice arithmetic for singular Kummer-type surfaces.
//!
//! The modules build on each other: [`matrix`] and [`snf`] give exact linear
//! algebra, [`lattice`] and [`roots`] handle even negative definite lattices,
//! [`ade`] enumerates configurations of (-2)-curves, [`divisibility`] runs
//! the nonexistence checks, [`kummer`] builds the curve lattices of Kummer
//! surfaces and [`torus`] computes quotient singularities of torus actions.

pub mod ade;
pub mod commands;
pub mod divisibility;
pub mod kummer;
pub mod lattice;
pub mod matrix;
pub mod quaternion;
pub mod roots;
pub mod snf;
pub mod torus;
