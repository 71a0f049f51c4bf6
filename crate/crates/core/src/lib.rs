//! Coprime planar sensor arrays from Chinese remaindering over imaginary quadratic
//! integer rings.
//!
//! Exact ring arithmetic lives in [`ring`], prime splitting in [`splitting`], the
//! canonical embedding in [`embedding`], Voronoi coset enumeration in [`lattice`] and the
//! array constructions in [`design`]. [`io`], [`svg`] and [`cli`] handle documents,
//! drawings and the command line.

pub mod arith;
pub mod cli;
pub mod design;
pub mod embedding;
pub mod error;
pub mod io;
pub mod lattice;
pub mod ring;
pub mod splitting;
pub mod svg;

pub use design::{ArrayDesign, Coarray, Strategy, Variant};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticePoint};
pub use ring::{QuadInt, RingSpec};
