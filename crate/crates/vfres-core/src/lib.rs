#![cfg_attr(not(feature = "std"), no_std)]

//! Exact Newton-polyhedron machinery for polynomial vector fields in three
//! variables: logarithmic Newton maps, stability preparation, weighted
//! directional blow-ups and a local resolution driver with an invariant
//! decrease certificate.
//!
//! Everything works over the rationals. The crate is `no_std` (it needs
//! `alloc`); enable the `std` feature for `std::error::Error` impls.

extern crate alloc;

pub mod error;
pub mod rat;
pub mod poly;
pub mod upoly;
pub mod linalg;
pub mod field;
pub mod gmap;
pub mod polyhedron;
pub mod classify;
pub mod prepare;
pub mod blowup;
pub mod invariant;
pub mod fiber;
pub mod driver;
pub mod badtree;
pub mod line_bound;

pub use error::{Error, Result};
pub use field::{NewtonMap, PolyVectorField};
pub use rat::Q;
