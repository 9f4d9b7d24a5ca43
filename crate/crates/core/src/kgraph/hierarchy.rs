//! Mixed sibling/binary hierarchy over a knowledge graph.
//!
//! The root holds every entity and fans out one branch per property. Each
//! branch splits its members on that property into `{x < eta}` and
//! `{x >= eta}`; each half fans out again over the properties not yet used
//! on its path, until every path has split on every property once. A path
//! therefore corresponds to one ordering of the properties plus one
//! low/high outcome per property, giving `M! * 2^M` leaves.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::graph::KnowledgeGraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "eta")]
pub enum EtaPolicy {
    /// One threshold per property, in property order.
    Fixed(Vec<f64>),
    /// Per-node median of the members' values.
    #[default]
    Median,
}

impl EtaPolicy {
    fn validate(&self, property_count: usize) -> Result<()> {
        if let EtaPolicy::Fixed(etas) = self {
            if etas.len() != property_count {
                return Err(Error::Shape(format!(
                    "fixed policy has {} thresholds for {property_count} properties",
                    etas.len()
                )));
            }
            if etas.iter().any(|e| !e.is_finite()) {
                return Err(Error::NonFinite("fixed eta".into()));
            }
        }
        Ok(())
    }
}

/// Threshold for one property's values at a node.
///
/// Median mode takes the middle order statistic for odd counts and the
/// midpoint of the two middle ones for even counts.
pub fn choose_eta(values: &[f64], policy: &EtaPolicy, property: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("eta needs at least one value".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eta input".into()));
    }
    match policy {
        EtaPolicy::Fixed(etas) => etas
            .get(property)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("no fixed eta for property {property}"))),
        EtaPolicy::Median => {
            let mut v = values.to_vec();
            v.sort_by(f64::total_cmp);
            let n = v.len();
            Ok(if n % 2 == 1 {
                v[n / 2]
            } else {
                let (lo, hi) = (v[n / 2 - 1], v[n / 2]);
                lo + (hi - lo) / 2.0
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    /// Fans out one branch per property still unused on this path.
    Sibling {
        candidates: Vec<usize>,
        branches: Vec<NodeId>,
    },
    /// Splits members on `property`. `eta` is `None` only for an empty node
    /// under the median policy; points reaching it go high.
    Binary {
        property: usize,
        eta: Option<f64>,
        low: NodeId,
        high: NodeId,
    },
    /// End of a path; `ordering` is the property order used to get here.
    Leaf { ordering: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: NodeId,
    /// 1 for the root.
    pub level: usize,
    /// Entity indices into the source graph.
    pub members: Vec<usize>,
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaEntry {
    pub node: NodeId,
    /// Node ids from the root down to (excluding) `node`.
    pub path: Vec<NodeId>,
    pub property: usize,
    pub eta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutePath {
    pub ordering: Vec<usize>,
    /// Root first, leaf last.
    pub nodes: Vec<NodeId>,
    pub leaf: NodeId,
}

/// Leaves reached by a point, one per property ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct Routing {
    pub paths: Vec<RoutePath>,
}

impl Routing {
    /// Path for the ordering that uses properties in declaration order.
    pub fn canonical(&self) -> &RoutePath {
        self.paths
            .iter()
            .find(|p| p.ordering.windows(2).all(|w| w[0] < w[1]))
            .expect("routing always contains the declaration-order path")
    }
}

#[derive(Clone, Debug)]
pub struct Hierarchy {
    property_names: Vec<String>,
    entity_ids: Vec<String>,
    policy: EtaPolicy,
    nodes: Vec<Node>,
    leaves: Vec<NodeId>,
}

struct Builder<'a> {
    graph: &'a KnowledgeGraph,
    policy: &'a EtaPolicy,
    nodes: Vec<Node>,
    leaves: Vec<NodeId>,
}

impl Builder<'_> {
    fn push(&mut self, level: usize, members: Vec<usize>, kind: NodeKind) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            id,
            level,
            members,
            kind,
        });
        id
    }

    fn fan_out(
        &mut self,
        level: usize,
        members: Vec<usize>,
        remaining: &[usize],
        ordering: &[usize],
    ) -> Result<NodeId> {
        if remaining.is_empty() {
            let id = self.push(
                level,
                members,
                NodeKind::Leaf {
                    ordering: ordering.to_vec(),
                },
            );
            self.leaves.push(id);
            return Ok(id);
        }
        let id = self.push(
            level,
            members.clone(),
            NodeKind::Sibling {
                candidates: remaining.to_vec(),
                branches: Vec::new(),
            },
        );
        let mut branches = Vec::with_capacity(remaining.len());
        for &p in remaining {
            let rest: Vec<usize> = remaining.iter().copied().filter(|&q| q != p).collect();
            let mut path = ordering.to_vec();
            path.push(p);
            branches.push(self.split(level + 1, members.clone(), p, &rest, &path)?);
        }
        if let NodeKind::Sibling { branches: b, .. } = &mut self.nodes[id.0].kind {
            *b = branches;
        }
        Ok(id)
    }

    fn split(
        &mut self,
        level: usize,
        members: Vec<usize>,
        property: usize,
        rest: &[usize],
        ordering: &[usize],
    ) -> Result<NodeId> {
        let entities = self.graph.entities();
        let values: Vec<f64> = members
            .iter()
            .map(|&i| entities[i].values[property])
            .collect();
        let eta = match (self.policy, values.is_empty()) {
            (EtaPolicy::Median, true) => None,
            (EtaPolicy::Fixed(etas), true) => Some(etas[property]),
            (policy, false) => Some(choose_eta(&values, policy, property)?),
        };
        let (low, high): (Vec<usize>, Vec<usize>) = members
            .iter()
            .partition(|&&i| goes_low(entities[i].values[property], eta));

        let id = self.push(
            level,
            members,
            NodeKind::Binary {
                property,
                eta,
                low: NodeId(usize::MAX),
                high: NodeId(usize::MAX),
            },
        );
        let low_id = self.fan_out(level + 1, low, rest, ordering)?;
        let high_id = self.fan_out(level + 1, high, rest, ordering)?;
        if let NodeKind::Binary { low, high, .. } = &mut self.nodes[id.0].kind {
            *low = low_id;
            *high = high_id;
        }
        Ok(id)
    }
}

fn goes_low(value: f64, eta: Option<f64>) -> bool {
    eta.is_some_and(|eta| value < eta)
}

impl Hierarchy {
    /// Builds the full hierarchy. An empty graph yields a root with no
    /// branches and no leaves.
    pub fn build(graph: &KnowledgeGraph, policy: &EtaPolicy) -> Result<Self> {
        let m = graph.property_count();
        policy.validate(m)?;
        let mut b = Builder {
            graph,
            policy,
            nodes: Vec::new(),
            leaves: Vec::new(),
        };
        let all: Vec<usize> = (0..graph.entities().len()).collect();
        if all.is_empty() {
            b.push(
                1,
                Vec::new(),
                NodeKind::Sibling {
                    candidates: (0..m).collect(),
                    branches: Vec::new(),
                },
            );
        } else {
            let props: Vec<usize> = (0..m).collect();
            b.fan_out(1, all, &props, &[])?;
        }
        Ok(Hierarchy {
            property_names: graph.property_names().to_vec(),
            entity_ids: graph.entities().iter().map(|e| e.id.clone()).collect(),
            policy: policy.clone(),
            nodes: b.nodes,
            leaves: b.leaves,
        })
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Node> {
        self.leaves.iter().map(|&id| self.node(id))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// True when the source graph had no entities: the hierarchy is only a
    /// root and has no leaves.
    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn property_names(&self) -> &[String] {
        &self.property_names
    }

    pub fn entity_ids(&self) -> &[String] {
        &self.entity_ids
    }

    pub fn policy(&self) -> &EtaPolicy {
        &self.policy
    }

    /// Leaves grouped by the property ordering of their path. Each group
    /// partitions the entity set.
    pub fn leaves_by_ordering(&self) -> BTreeMap<Vec<usize>, Vec<NodeId>> {
        let mut groups: BTreeMap<Vec<usize>, Vec<NodeId>> = BTreeMap::new();
        for leaf in self.leaves() {
            if let NodeKind::Leaf { ordering } = &leaf.kind {
                groups.entry(ordering.clone()).or_default().push(leaf.id);
            }
        }
        groups
    }

    /// Every threshold used, keyed by the path leading to its node.
    pub fn eta_table(&self) -> Vec<EtaEntry> {
        let mut out = Vec::new();
        let mut stack = vec![(NodeId(0), Vec::new())];
        while let Some((id, path)) = stack.pop() {
            let node = self.node(id);
            let mut child_path = path.clone();
            child_path.push(id);
            match &node.kind {
                NodeKind::Sibling { branches, .. } => {
                    for &b in branches.iter().rev() {
                        stack.push((b, child_path.clone()));
                    }
                }
                NodeKind::Binary {
                    property,
                    eta,
                    low,
                    high,
                } => {
                    out.push(EtaEntry {
                        node: id,
                        path,
                        property: *property,
                        eta: *eta,
                    });
                    stack.push((*high, child_path.clone()));
                    stack.push((*low, child_path));
                }
                NodeKind::Leaf { .. } => {}
            }
        }
        out
    }

    /// Routes a point through the stored thresholds, following every branch
    /// at sibling levels.
    pub fn route(&self, point: &[f64]) -> Result<Routing> {
        let m = self.property_names.len();
        if point.len() != m {
            return Err(Error::Shape(format!(
                "point has {} components, hierarchy has {m} properties",
                point.len()
            )));
        }
        if point.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("routed point".into()));
        }
        if self.is_empty() {
            return Err(Error::Empty("hierarchy has no leaves".into()));
        }
        let mut paths = Vec::new();
        self.walk(NodeId(0), point, &mut Vec::new(), &mut paths);
        Ok(Routing { paths })
    }

    fn walk(&self, id: NodeId, point: &[f64], trail: &mut Vec<NodeId>, out: &mut Vec<RoutePath>) {
        trail.push(id);
        match &self.node(id).kind {
            NodeKind::Sibling { branches, .. } => {
                for &b in branches {
                    self.walk(b, point, trail, out);
                }
            }
            NodeKind::Binary {
                property,
                eta,
                low,
                high,
            } => {
                let next = if goes_low(point[*property], *eta) {
                    *low
                } else {
                    *high
                };
                self.walk(next, point, trail, out);
            }
            NodeKind::Leaf { ordering } => out.push(RoutePath {
                ordering: ordering.clone(),
                nodes: trail.clone(),
                leaf: id,
            }),
        }
        trail.pop();
    }

    pub fn export(&self) -> HierarchyExport {
        HierarchyExport {
            properties: self.property_names.clone(),
            policy: self.policy.clone(),
            leaf_count: self.leaf_count(),
            root: self.export_node(NodeId(0)),
        }
    }

    fn export_node(&self, id: NodeId) -> ExportNode {
        let node = self.node(id);
        let (kind, property, eta, children, members) = match &node.kind {
            NodeKind::Sibling {
                candidates,
                branches,
            } => (
                "sibling",
                None,
                None,
                branches.iter().map(|&b| self.export_node(b)).collect(),
                Some(
                    candidates
                        .iter()
                        .map(|&p| self.property_names[p].clone())
                        .collect(),
                ),
            ),
            NodeKind::Binary {
                property,
                eta,
                low,
                high,
            } => (
                "binary",
                Some(self.property_names[*property].clone()),
                *eta,
                vec![self.export_node(*low), self.export_node(*high)],
                None,
            ),
            NodeKind::Leaf { .. } => ("leaf", None, None, Vec::new(), None),
        };
        let is_leaf = matches!(node.kind, NodeKind::Leaf { .. });
        ExportNode {
            id: id.0,
            kind,
            level: node.level,
            size: node.members.len(),
            property,
            eta,
            candidates: members,
            members: is_leaf.then(|| {
                node.members
                    .iter()
                    .map(|&i| self.entity_ids[i].clone())
                    .collect()
            }),
            children,
        }
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, &self.export())?;
        writeln!(writer)?;
        Ok(())
    }
}

/// Nested export of a hierarchy.
#[derive(Clone, Debug, Serialize)]
pub struct HierarchyExport {
    pub properties: Vec<String>,
    pub policy: EtaPolicy,
    pub leaf_count: usize,
    pub root: ExportNode,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportNode {
    pub id: usize,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub level: usize,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ExportNode>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgraph::Entity;

    fn graph(props: &[&str], rows: &[&[f64]]) -> KnowledgeGraph {
        let entities = rows
            .iter()
            .enumerate()
            .map(|(i, v)| Entity {
                id: format!("e{i}"),
                values: v.to_vec(),
            })
            .collect();
        KnowledgeGraph::new(
            props.iter().map(|s| s.to_string()).collect(),
            entities,
            vec![],
        )
        .unwrap()
    }

    fn leaf_members(h: &Hierarchy) -> Vec<Vec<usize>> {
        h.leaves().map(|l| l.members.clone()).collect()
    }

    #[test]
    fn median_eta() {
        assert_eq!(
            choose_eta(&[1.0, 2.0, 3.0, 4.0], &EtaPolicy::Median, 0).unwrap(),
            2.5
        );
        assert_eq!(
            choose_eta(&[5.0, 5.0, 5.0], &EtaPolicy::Median, 0).unwrap(),
            5.0
        );
        assert_eq!(
            choose_eta(&[0.9, 0.1, 0.2], &EtaPolicy::Median, 0).unwrap(),
            0.2
        );
        assert_eq!(
            choose_eta(&[0.9], &EtaPolicy::Fixed(vec![0.3]), 0).unwrap(),
            0.3
        );
        assert!(choose_eta(&[], &EtaPolicy::Median, 0).is_err());
    }

    #[test]
    fn single_property_fixed_threshold() {
        let g = graph(&["x"], &[&[0.2], &[0.7]]);
        let h = Hierarchy::build(&g, &EtaPolicy::Fixed(vec![0.5])).unwrap();
        assert_eq!(h.leaf_count(), 2);
        assert_eq!(leaf_members(&h), vec![vec![0], vec![1]]);

        let low = h.route(&[0.3]).unwrap();
        let boundary = h.route(&[0.5]).unwrap();
        assert_eq!(h.node(low.canonical().leaf).members, vec![0]);
        assert_eq!(h.node(boundary.canonical().leaf).members, vec![1]);
    }

    #[test]
    fn two_properties_give_eight_leaves() {
        let g = graph(&["x", "y"], &[&[0.1, 0.9], &[0.4, 0.3], &[0.8, 0.5]]);
        let h = Hierarchy::build(&g, &EtaPolicy::Median).unwrap();
        assert_eq!(h.leaf_count(), 8);
        assert_eq!(h.root().level, 1);
        let levels: Vec<usize> = h.leaves().map(|l| l.level).collect();
        assert!(levels.iter().all(|&l| l == 5));
        let groups = h.leaves_by_ordering();
        assert_eq!(
            groups.keys().cloned().collect::<Vec<_>>(),
            vec![vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn identical_points_all_go_high() {
        let same: &[f64] = &[0.5, 0.5];
        let g = graph(&["x", "y"], &[same; 4]);
        let h = Hierarchy::build(&g, &EtaPolicy::Median).unwrap();
        for node in h.nodes() {
            if let NodeKind::Binary { low, high, .. } = node.kind {
                assert!(h.node(low).members.is_empty());
                assert_eq!(h.node(high).members.len(), node.members.len());
            }
        }
        assert_eq!(h.leaf_count(), 8);
    }

    #[test]
    fn empty_graph_is_root_only() {
        let g = graph(&["x", "y"], &[]);
        let h = Hierarchy::build(&g, &EtaPolicy::Median).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.nodes().len(), 1);
        assert!(h.route(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn routing_checks_dimension_and_is_repeatable() {
        let g = graph(
            &["x", "y"],
            &[&[0.1, 0.9], &[0.4, 0.3], &[0.8, 0.5], &[0.6, 0.2]],
        );
        let h = Hierarchy::build(&g, &EtaPolicy::Median).unwrap();
        assert!(matches!(h.route(&[0.1]), Err(Error::Shape(_))));
        let a = h.route(&[0.45, 0.35]).unwrap();
        let b = h.route(&[0.45, 0.35]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.paths.len(), 2);
        assert_eq!(a.canonical().ordering, vec![0, 1]);
        assert_eq!(a.canonical().nodes.len(), 5);
    }

    #[test]
    fn fixed_policy_arity_checked() {
        let g = graph(&["x", "y"], &[&[0.1, 0.9]]);
        assert!(Hierarchy::build(&g, &EtaPolicy::Fixed(vec![0.5])).is_err());
    }

    #[test]
    fn eta_table_lists_every_split() {
        let g = graph(&["x", "y"], &[&[0.1, 0.9], &[0.4, 0.3]]);
        let h = Hierarchy::build(&g, &EtaPolicy::Median).unwrap();
        let table = h.eta_table();
        // 2 top-level splits, each with 2 halves splitting once more
        assert_eq!(table.len(), 6);
        assert_eq!(table[0].path, vec![NodeId(0)]);
        assert_eq!(table[0].eta, Some(0.25));
    }

    #[test]
    fn export_has_leaf_members() {
        let g = graph(&["x"], &[&[0.2], &[0.7]]);
        let h = Hierarchy::build(&g, &EtaPolicy::Fixed(vec![0.5])).unwrap();
        let v = serde_json::to_value(h.export()).unwrap();
        assert_eq!(v["leaf_count"], 2);
        let split = &v["root"]["children"][0];
        assert_eq!(split["type"], "binary");
        assert_eq!(split["eta"], 0.5);
        assert_eq!(split["children"][0]["members"][0], "e0");
        assert_eq!(split["children"][1]["members"][0], "e1");
    }
}
