//! Translations of `T^k` realised as piecewise translations of a
//! fundamental domain, and their orbit codings.

mod cell;
pub mod examples;
pub mod measure;
pub mod minimality;
mod piecewise;

pub use cell::{shoelace, Cell, CellGeometry, HalfSpace, Membership};
pub use examples::{circle_rotation, hexagon_default, hexagon_translation};
pub use measure::{
    exact_measure_identities, fundamental_domain_coverage, image_coverage, interval_cylinder_measures,
    monte_carlo_measure_identities, Coverage, MeasureMethod, MeasureReport,
};
pub use minimality::{minimality_check, MinimalityStatus, MinimalityVerdict};
pub use piecewise::{
    BoundaryHit, CellDescription, DomainDescription, Orbit, OrbitStatus, PiecewiseTranslation, TorusTranslation,
    DEFAULT_BOUNDARY_TOLERANCE,
};
