//! Exact polynomial arithmetic over ℚ(i) and the text format for polynomial maps.

pub mod gauss;
pub mod map;
pub mod mpoly;
pub mod parse;

pub use gauss::GaussRat;
pub use map::{format_poly, parse_poly_map, MapText, PolyMap};
pub use mpoly::{Coeff, ExactField, MPoly, Monomial};
pub use parse::{parse_constant, parse_poly, parse_poly_list, ParseError};
