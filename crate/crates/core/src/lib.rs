//! Fibers, singular loci and asymptotic sets of complex polynomial maps.

pub mod asymset;
pub mod elim;
pub mod error;
pub mod fibertop;
pub mod numeric;
pub mod polycore;
pub mod realify;
pub mod singloc;
pub mod vgcloud;

pub use error::Error;
pub use polycore::{parse_poly, parse_poly_map, GaussRat, MPoly, PolyMap};
