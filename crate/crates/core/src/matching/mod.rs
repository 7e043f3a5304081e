//! Minimum-weight perfect matching: shortest paths over restricted graphs,
//! defect graphs with boundary partners, an exact blossom solver and a
//! subset-DP reference.

mod blossom;
mod defect;
mod paths;

pub use blossom::max_weight_matching;
pub use defect::{
    build_defect_graph, build_sparse_defect_graph, mwpm, mwpm_oracle, recover_paths, DefectGraph,
    DefectGraphDump, Matching, ORACLE_NODE_LIMIT,
};
pub use paths::{
    boundary_distances, shortest_paths, shortest_paths_bounded, shortest_paths_from, ShortestPaths,
};
