//! Exact-arithmetic analysis of complete Nevanlinna-Pick (CNP) Dirichlet
//! series kernels given by weight data `b` and frequency data `n`.
//!
//! The library validates kernels, expands their weights, enumerates the
//! rational-dependence circuits of the frequency data, builds the defining
//! polynomials of the associated multiplier varieties, and decides when two
//! kernels have (isometrically) isomorphic multiplier algebras. The exact
//! pipeline never leaves the rationals; a high-precision floating layer
//! backs the numeric verification commands.

pub mod circuits;
pub mod classify;
pub mod dirichlet;
pub mod eigen;
pub mod exact;
pub mod hp;
pub mod jsonio;
pub mod kernelspec;
pub mod numeric;
pub mod variety;
