//! Elimination kernels: exact gcd/content/squarefree parts, resultants,
//! discriminants, subresultants, and a complex root finder.

pub mod exact;
pub mod resultant;
pub mod roots;
pub mod unipoly;

pub use exact::{content_in, exact_div, gcd, normalize, primitive_part, squarefree_part};
pub use resultant::{bareiss_det, discriminant, principal_subresultants, resultant};
pub use roots::{roots, RootSet};
pub use unipoly::UniPoly;
