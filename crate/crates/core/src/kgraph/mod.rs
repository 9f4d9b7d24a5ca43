//! Knowledge-graph data model and the property hierarchy built over it.

mod graph;
mod hierarchy;

pub use graph::{Edge, Entity, KnowledgeGraph};
pub use hierarchy::{
    choose_eta, EtaEntry, EtaPolicy, ExportNode, Hierarchy, HierarchyExport, Node, NodeId,
    NodeKind, RoutePath, Routing,
};
