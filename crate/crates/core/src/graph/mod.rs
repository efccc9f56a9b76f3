//! Rauzy graphs, their cycle spaces and flow conservation.

mod cycles;
mod multigraph;
mod rauzy;

pub use cycles::{
    cycle_space, cycle_vector_from_walk, decompose_in_cycles, CycleSpaceBasis, CycleVector, Decomposition,
    DecompositionFailure,
};
pub use multigraph::{four_vertex_example, Multigraph, SpanningForest};
pub use rauzy::{
    build_rauzy_graph, euler_characteristic_check, euler_characteristic_with_report, stats_csv, EulerReport, EulerRow, GraphStats, RauzyGraph,
    STATS_CSV_HEADER,
};
