//! Descent data for principal bundles over covered finite sets, the
//! fiber product with the canonical atlas, and reconstruction from it.

mod atlas;
mod datum;

pub use atlas::{
    fiber_product_from_parts, fiber_product_with_atlas, groupoid_from_atlas, AtlasArrow, AtlasReconstruction,
    FiberProduct,
};
pub use datum::{
    check_cocycle, check_transitions, glue, glue_round_trip, restrict_bundle, restrict_round_trip,
    restrict_to_cover, CocycleViolation, DescentArrow, DescentDatum, DescentError, Glued, Transition,
};
