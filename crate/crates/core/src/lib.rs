//! Exact finite combinatorics for partial concept classes.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computations: the matrix model for partial and total classes, exact VC and
//! Littlestone dimensions, the SOA disambiguation, the `H_{r,d}` and
//! biclique-class generators, exact graph solvers (chromatic number, biclique
//! partition number, spectral bound) and the communication layer
//! (certificates, rectangle covers, gadget lifting, conflict-graph pipeline).
//!
//! File formats, reports and the command line live in the `pcc` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod bits;
pub mod comm;
pub mod constructions;
pub mod dimensions;
pub mod disambiguation;
mod error;
pub mod graph;
mod limits;
pub mod model;

pub use error::{Error, Result};
pub use limits::{Limits, Work};
pub use model::{Cell, PartialMatrix, Pattern, TotalMatrix};
