use std::collections::HashMap;

/// Correspondence from a sparse word list into a generic vocabulary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VocabMapping {
    /// Sparse word and the index of its generic counterpart, in sparse order.
    pub pairs: Vec<(String, usize)>,
    pub unmatched: Vec<String>,
}

impl VocabMapping {
    pub fn get(&self, word: &str) -> Option<usize> {
        self.pairs.iter().find(|(w, _)| w == word).map(|&(_, i)| i)
    }
}

/// Exact matches first, then case-insensitive ones. When several generic
/// words fold to the same key the lowest index wins. Repeated sparse words
/// are mapped once.
pub fn map_sparse_vocab<S: AsRef<str>>(sparse: &[S], generic: &[String]) -> VocabMapping {
    let mut exact: HashMap<&str, usize> = HashMap::new();
    let mut folded: HashMap<String, usize> = HashMap::new();
    for (i, w) in generic.iter().enumerate() {
        exact.entry(w.as_str()).or_insert(i);
        folded.entry(w.to_lowercase()).or_insert(i);
    }

    let mut mapping = VocabMapping::default();
    let mut seen = std::collections::HashSet::new();
    for word in sparse.iter().map(AsRef::as_ref) {
        if !seen.insert(word) {
            continue;
        }
        let hit = exact
            .get(word)
            .or_else(|| folded.get(&word.to_lowercase()))
            .copied();
        match hit {
            Some(i) => mapping.pairs.push((word.to_string(), i)),
            None => mapping.unmatched.push(word.to_string()),
        }
    }
    mapping
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> Vec<String> {
        ["paris", "london", "Berlin", "BERLIN"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn subset_maps_fully() {
        let m = map_sparse_vocab(&["london", "paris"], &generic());
        assert_eq!(
            m.pairs,
            vec![("london".to_string(), 1), ("paris".to_string(), 0)]
        );
        assert!(m.unmatched.is_empty());
    }

    #[test]
    fn disjoint_maps_nothing() {
        let m = map_sparse_vocab(&["rome", "oslo"], &generic());
        assert!(m.pairs.is_empty());
        assert_eq!(m.unmatched, vec!["rome", "oslo"]);
    }

    #[test]
    fn case_fold_fallback() {
        let m = map_sparse_vocab(&["Paris"], &generic());
        assert_eq!(m.get("Paris"), Some(0));
    }

    #[test]
    fn exact_beats_fold() {
        let m = map_sparse_vocab(&["BERLIN", "berlin"], &generic());
        assert_eq!(m.get("BERLIN"), Some(3));
        assert_eq!(m.get("berlin"), Some(2));
    }

    #[test]
    fn duplicates_mapped_once() {
        let m = map_sparse_vocab(&["paris", "paris", "rome", "rome"], &generic());
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.unmatched.len(), 1);
    }
}
