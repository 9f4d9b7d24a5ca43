use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: String,
    /// One value per property, in `property_names` order.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

#[derive(Deserialize)]
struct RawGraph {
    properties: Vec<String>,
    entities: Vec<Entity>,
    #[serde(default)]
    edges: Vec<Edge>,
}

/// Undirected graph of entities described by `M` continuous properties.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct KnowledgeGraph {
    properties: Vec<String>,
    entities: Vec<Entity>,
    edges: Vec<Edge>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl TryFrom<RawGraph> for KnowledgeGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        KnowledgeGraph::new(raw.properties, raw.entities, raw.edges)
    }
}

impl KnowledgeGraph {
    pub fn new(properties: Vec<String>, entities: Vec<Entity>, edges: Vec<Edge>) -> Result<Self> {
        if properties.is_empty() {
            return Err(Error::InvalidArgument(
                "a knowledge graph needs at least one property".into(),
            ));
        }
        let m = properties.len();
        let mut index = HashMap::with_capacity(entities.len());
        for (i, e) in entities.iter().enumerate() {
            if e.values.len() != m {
                return Err(Error::Shape(format!(
                    "entity `{}` has {} values, expected {m}",
                    e.id,
                    e.values.len()
                )));
            }
            if e.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("properties of entity `{}`", e.id)));
            }
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate entity id `{}`",
                    e.id
                )));
            }
        }
        for e in &edges {
            for end in [&e.source, &e.target] {
                if !index.contains_key(end) {
                    return Err(Error::InvalidArgument(format!(
                        "edge references unknown entity `{end}`"
                    )));
                }
            }
            if e.source == e.target {
                return Err(Error::InvalidArgument(format!(
                    "self-loop on `{}`",
                    e.source
                )));
            }
            if !(e.weight.is_finite() && e.weight >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "edge {}-{} has invalid weight {}",
                    e.source, e.target, e.weight
                )));
            }
        }
        Ok(KnowledgeGraph {
            properties,
            entities,
            edges,
            index,
        })
    }

    pub fn property_names(&self) -> &[String] {
        &self.properties
    }

    pub fn property_count(&self) -> usize {
        self.properties.len()
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.index.get(id).map(|&i| &self.entities[i])
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> Option<f64> {
        self.edges
            .iter()
            .find(|e| (e.source == a && e.target == b) || (e.source == b && e.target == a))
            .map(|e| e.weight)
    }

    pub fn from_json<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn to_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, self)?;
        writeln!(writer)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ent(id: &str, values: &[f64]) -> Entity {
        Entity {
            id: id.into(),
            values: values.to_vec(),
        }
    }

    #[test]
    fn rejects_bad_records() {
        let props = vec!["x".to_string()];
        assert!(KnowledgeGraph::new(props.clone(), vec![ent("a", &[1.0, 2.0])], vec![]).is_err());
        assert!(KnowledgeGraph::new(props.clone(), vec![ent("a", &[f64::NAN])], vec![]).is_err());
        assert!(KnowledgeGraph::new(
            props.clone(),
            vec![ent("a", &[1.0]), ent("a", &[2.0])],
            vec![]
        )
        .is_err());
        let self_loop = Edge {
            source: "a".into(),
            target: "a".into(),
            weight: 1.0,
        };
        assert!(
            KnowledgeGraph::new(props.clone(), vec![ent("a", &[1.0])], vec![self_loop]).is_err()
        );
        let dangling = Edge {
            source: "a".into(),
            target: "zz".into(),
            weight: 1.0,
        };
        assert!(KnowledgeGraph::new(props, vec![ent("a", &[1.0])], vec![dangling]).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let text = r#"{"properties":["x","y"],
            "entities":[{"id":"a","values":[0.1,0.2]},{"id":"b","values":[0.3,0.4]}],
            "edges":[{"source":"a","target":"b","weight":2.0}]}"#;
        let g = KnowledgeGraph::from_json(text.as_bytes()).unwrap();
        assert_eq!(g.edge_weight("b", "a"), Some(2.0));
        let mut buf = Vec::new();
        g.to_json(&mut buf).unwrap();
        let back = KnowledgeGraph::from_json(buf.as_slice()).unwrap();
        assert_eq!(back.entities(), g.entities());

        let bad = r#"{"properties":["x"],"entities":[{"id":"a","values":[0.1,0.2]}]}"#;
        assert!(KnowledgeGraph::from_json(bad.as_bytes()).is_err());
    }
}
