//! Exact Laplacian, incidence and dual-Laplacian machinery for multigraphs:
//! congruence and row equivalence over the integers, superbase trace
//! descent, and certified abstract duals.

pub mod budget;
pub mod congruence;
pub mod duality;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod json;
pub mod laplacian;
pub mod lattice;
pub mod matrix;
pub mod planarity;
pub mod properties;

pub use budget::{Budget, Decision, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use graph::{ForestCertificate, MultiGraph, Orientation};
pub use matrix::{IntMatrix, UnimodularWitness};
