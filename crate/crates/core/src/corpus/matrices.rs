use std::collections::HashMap;
use std::io::BufRead;

use crate::error::Result;
use crate::matrix::Matrix;

/// Pre-tokenized documents over a vocabulary indexed in first-seen order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TokenizedCorpus {
    documents: Vec<Vec<usize>>,
    vocabulary: Vec<String>,
    index: HashMap<String, usize>,
}

impl TokenizedCorpus {
    pub fn from_documents<D, S>(documents: D) -> Self
    where
        D: IntoIterator,
        D::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut corpus = TokenizedCorpus::default();
        for doc in documents {
            let ids = doc.into_iter().map(|t| corpus.intern(t.as_ref())).collect();
            corpus.documents.push(ids);
        }
        corpus
    }

    fn intern(&mut self, token: &str) -> usize {
        if let Some(&i) = self.index.get(token) {
            return i;
        }
        let i = self.vocabulary.len();
        self.vocabulary.push(token.to_string());
        self.index.insert(token.to_string(), i);
        i
    }

    /// One document per line, tokens separated by spaces.
    pub fn parse(text: &str) -> Self {
        Self::from_documents(text.lines().map(|l| l.split(' ').filter(|t| !t.is_empty())))
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let lines = reader.lines().collect::<std::io::Result<Vec<_>>>()?;
        Ok(Self::from_documents(
            lines.iter().map(|l| l.split(' ').filter(|t| !t.is_empty())),
        ))
    }

    pub fn documents(&self) -> &[Vec<usize>] {
        &self.documents
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }
}

/// Documents x vocabulary token counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DocTermMatrix {
    vocabulary: Vec<String>,
    docs: usize,
    counts: Vec<u64>,
}

impl DocTermMatrix {
    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.docs, self.vocabulary.len())
    }

    pub fn get(&self, doc: usize, word: usize) -> u64 {
        self.counts[doc * self.vocabulary.len() + word]
    }

    pub fn row(&self, doc: usize) -> &[u64] {
        let n = self.vocabulary.len();
        &self.counts[doc * n..(doc + 1) * n]
    }
}

pub fn build_dtm(corpus: &TokenizedCorpus) -> DocTermMatrix {
    let n = corpus.vocabulary.len();
    let mut counts = vec![0u64; corpus.documents.len() * n];
    for (d, doc) in corpus.documents.iter().enumerate() {
        for &w in doc {
            counts[d * n + w] += 1;
        }
    }
    DocTermMatrix {
        vocabulary: corpus.vocabulary.clone(),
        docs: corpus.documents.len(),
        counts,
    }
}

/// Symmetric word x word counts of documents containing both words; the
/// diagonal is each word's document frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct CooccurrenceMatrix {
    vocabulary: Vec<String>,
    counts: Vec<u64>,
}

impl CooccurrenceMatrix {
    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.counts[u * self.vocabulary.len() + v]
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.size();
        Matrix::from_vec(n, n, self.counts.iter().map(|&c| c as f64).collect())
            .expect("square by construction")
    }
}

pub fn build_cooccurrence(dtm: &DocTermMatrix) -> CooccurrenceMatrix {
    let n = dtm.vocabulary.len();
    let mut counts = vec![0u64; n * n];
    for d in 0..dtm.docs {
        let present: Vec<usize> = (0..n).filter(|&w| dtm.get(d, w) > 0).collect();
        for &u in &present {
            for &v in &present {
                counts[u * n + v] += 1;
            }
        }
    }
    CooccurrenceMatrix {
        vocabulary: dtm.vocabulary.clone(),
        counts,
    }
}
