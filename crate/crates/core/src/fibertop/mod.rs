//! Fiber topology: Euler characteristics of fibers, χ jumps over the target,
//! very-good-projection checks and leading-form rank and dimension.

pub mod curve;
pub mod leading;
pub mod profile;
pub mod projection;
pub mod reduce;

pub use curve::{curve_chi, euler_characteristic_plane_fiber};
pub use profile::{chi_profile, fiber_chi, AxisProbe, CandidateSource, ChiConfig, ChiReport, SpecialValue};
pub use reduce::{reduce, FiberShape, Reduction};
pub use projection::{check_very_good_projection, CardinalitySample, EscapeBin, ProjectionConfig, ProjectionReport, ProperEvidence, Tri};
pub use leading::{leading_form_report, LeadingConfig, LeadingFormReport};
