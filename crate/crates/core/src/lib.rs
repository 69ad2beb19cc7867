//! Clique search trees, clique censuses for sparse graphs, and an audit
//! harness for the clique-count bounds of graphs without `K_t`-subdivisions.

pub mod audit;
pub mod constructions;
pub mod graph;
pub mod numeric;
pub mod sparsity;
pub mod topo;
pub mod tree;

pub use audit::{audit, AuditConfig, AuditReport, Check};
pub use constructions::{ConstructionSpec, Family};
pub use graph::{Degeneracy, Graph, GraphError, VertexSet};
pub use tree::{
    build_tree, census, count_cliques, enumerate_cliques, CliqueCensus, CliqueSearchTree,
    CliqueTreeNode, NodeId, RootedSubtree, TreeError,
};

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub(crate) fn serialize_opt_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &Option<T>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => serializer.collect_str(v),
        None => serializer.serialize_none(),
    }
}
