//! Corpus statistics: document-term and co-occurrence counts, the
//! reduced-rank SVD embedding, vocabulary mapping and the knowledge graph
//! derived from co-occurrence.

mod graph;
mod matrices;
mod svd;
mod vocab;

pub use graph::build_graph;
pub use matrices::{
    build_cooccurrence, build_dtm, CooccurrenceMatrix, DocTermMatrix, TokenizedCorpus,
};
pub use svd::{jacobi_svd, svd_embed, EmbeddingMap, Svd};
pub use vocab::{map_sparse_vocab, VocabMapping};

use crate::error::Result;

/// Rank-`k` embedding of a co-occurrence matrix, labelled with its words.
pub fn embed_cooccurrence(cooc: &CooccurrenceMatrix, k: usize) -> Result<EmbeddingMap> {
    svd_embed(&cooc.to_matrix(), k)?.with_words(cooc.vocabulary().to_vec())
}
