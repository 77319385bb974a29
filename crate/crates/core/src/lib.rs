//! Exact constraint analysis for finite-dimensional singular Lagrangian models.
//!
//! The pipeline runs the Legendre map, Dirac's multi-generation consistency
//! algorithm and first/second-class classification, and independently builds
//! constraints by contracting momenta with declared gauge generators. The
//! `compare` stage decides whether both routes describe the same constraint
//! surface on the canonical sector.

pub mod cli;
pub mod compare;
pub mod constraint;
pub mod diracflow;
pub mod gaugegen;
pub mod legendre;
pub mod linalg;
pub mod modelspec;
pub mod symexpr;
