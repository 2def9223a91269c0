//! Fredholm solvability of nonlocal elliptic problems in plane angles.
//!
//! The pipeline: orbit data ([`pencil::OrbitSpec`]) gives a characteristic
//! matrix [`pencil::Pencil`]; [`spectrum`] finds its zeros, [`jordan`]
//! classifies those on critical lines, [`condition`] evaluates the rank
//! condition on the differentiated boundary operators, and [`verdict`]
//! combines them.

pub mod algebra;
pub mod asymptotics;
pub mod cli;
pub mod condition;
pub mod config;
pub mod contour;
pub mod fixtures;
pub mod jordan;
pub mod literal;
pub mod pencil;
pub mod report;
pub mod spectrum;
pub mod tolerance;
pub mod verdict;

pub use tolerance::Tolerances;
