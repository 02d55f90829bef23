//! Exact-arithmetic toolkit for bifoliated singular flat surfaces.
//!
//! A surface is described by plane polygons with coordinates in a fixed real
//! quadratic field Q(√d), glued edge-to-edge by maps `z ↦ ±z + c`. On top of
//! that data model the crate provides
//!
//! * vertical straight-line flow and first-return interval exchange maps,
//! * embedded piecewise-straight curves with exact intersection counts,
//!   bicorn surgery and bicorn paths,
//! * developing maps, unfolded balls of the universal cover and exact
//!   CAT(0) geodesics with size/width functionals,
//! * Farey-graph distance oracles on the torus, `D(L)` / `D(ε,B)` membership
//!   tests and convergence certificates for curve sequences approaching the
//!   boundary point of an ending vertical foliation,
//! * affine automorphisms (torus Anosov maps, declared origami symmetries)
//!   and quasi-axis orbit experiments.
//!
//! Every decision predicate is computed in exact arithmetic; floating point
//! only ever appears in human-readable output.
//!
//! The crate is data-parallel over trials via rayon when the default
//! `parallel` feature is enabled; disabling it yields a fully sequential
//! build with identical results.

pub mod builtin;
pub mod curves;
pub mod dynamics;
pub mod exact;
pub mod exec;
pub mod flow;
pub mod geom;
pub mod graphdist;
pub mod surface;

pub use exact::{QuadNum, Rat};
pub use surface::Surface;
