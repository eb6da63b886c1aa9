//! Principal finite-group bundles over graphs as edge cocycles.

mod circle;
mod cocycle;
mod graph;

pub use circle::{circle_demo, circle_demo_with, ArcCover, CircleReport, OverlapValue};
pub use cocycle::{
    class_of, classify_bundles, count_classes_by_search, gauge_equivalent, gauge_fix, restrict_cocycle,
    Classification, EdgeCocycle, GaugeTransform,
};
pub use graph::{reduce_path, Dart, EdgePath, Graph, GraphError, SpanningForest};
