//! Exact computations on homomorphism-number profiles of graphs.
//!
//! The crate counts graph homomorphisms exactly, decides pure binomial
//! inequalities between path homomorphism numbers with certificates, computes
//! homomorphism domination exponents two independent ways, and materializes the
//! polyhedral cones that describe the logarithmic limits of several profiles.

pub mod blowup;
pub mod catalog;
pub mod cones;
pub mod exactlp;
pub mod graphs;
pub mod hde;
pub mod pathprofile;
