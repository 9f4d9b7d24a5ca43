use super::{CooccurrenceMatrix, EmbeddingMap};
use crate::error::{Error, Result};
use crate::kgraph::{Edge, Entity, KnowledgeGraph};
use crate::matrix::Dataset;

/// One entity per vocabulary word carrying its property row, with an
/// undirected edge wherever two words co-occur, weighted by the count.
pub fn build_graph(
    embedding: &EmbeddingMap,
    cooc: &CooccurrenceMatrix,
    properties: &Dataset,
    property_names: &[String],
) -> Result<KnowledgeGraph> {
    let vocab = cooc.vocabulary();
    if embedding.words() != vocab {
        return Err(Error::Shape(
            "embedding and co-occurrence matrix use different vocabularies".into(),
        ));
    }
    if properties.rows() != vocab.len() {
        return Err(Error::Shape(format!(
            "{} property rows for {} words",
            properties.rows(),
            vocab.len()
        )));
    }
    if properties.cols() != property_names.len() {
        return Err(Error::Shape(format!(
            "{} property columns but {} property names",
            properties.cols(),
            property_names.len()
        )));
    }

    let entities = vocab
        .iter()
        .zip(properties.row_iter())
        .map(|(w, row)| Entity {
            id: w.clone(),
            values: row.to_vec(),
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..vocab.len() {
        for v in u + 1..vocab.len() {
            let c = cooc.get(u, v);
            if c > 0 {
                edges.push(Edge {
                    source: vocab[u].clone(),
                    target: vocab[v].clone(),
                    weight: c as f64,
                });
            }
        }
    }
    KnowledgeGraph::new(property_names.to_vec(), entities, edges)
}
