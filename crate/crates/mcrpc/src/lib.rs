//! Solvers for minimum-clique demand routing on ring networks.
//!
//! Each demand on a cycle can be routed clockwise or counterclockwise; the
//! cost of a routing is the maximum total weight of a set of pairwise
//! arc-sharing routes (a clique of the route intersection graph). This crate
//! provides the data model, an exact maximum-weight clique engine for route
//! families, a ground-truth enumeration solver, a shortest-side
//! 2-approximation, a cutting-plane LP 3/2-approximation over exact rational
//! arithmetic, and a fixed-parameter solver for uniform weights, plus
//! instance I/O, generators, and bundled example fixtures.

pub mod approx;
pub mod clique;
pub mod error;
pub mod exact;
pub mod fpt;
pub mod instances;
pub mod lp;
pub mod rational;
pub mod ring;
pub mod rng;

pub use error::{Error, Result};
pub use rational::{format_rational, parse_rational, rational_int, rational_to_f64, Rational};
pub use ring::{ArcSet, ConflictGraph, Demand, Instance, RouteSide, Routing};
