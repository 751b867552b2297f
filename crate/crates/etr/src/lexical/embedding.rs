//! Word-embedding lookup table with cosine similarity over label tokens.

use std::collections::BTreeMap;
use std::path::Path;

use super::{tokenize_label, LexicalError};

/// A word → vector table loaded from the text format
/// `count dim` on the first line, then `word v1 … vdim` per line.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Self {
        EmbeddingTable {
            dimension,
            vectors: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, word: &str, vector: Vec<f64>) -> Result<(), LexicalError> {
        if vector.len() != self.dimension {
            return Err(LexicalError::DimensionMismatch {
                line: 0,
                expected: self.dimension,
                found: vector.len(),
            });
        }
        self.vectors.insert(word.to_lowercase(), vector);
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, LexicalError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LexicalError> {
        let mut lines = text.lines().enumerate();
        let (count, dimension) = match lines.next() {
            None => (0usize, 0usize),
            Some((_, header)) => {
                let fields: Vec<&str> = header.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(LexicalError::Parse {
                        line: 1,
                        message: format!("expected header `count dim`, found {header:?}"),
                    });
                }
                let parse = |s: &str| -> Result<usize, LexicalError> {
                    s.parse().map_err(|_| LexicalError::Parse {
                        line: 1,
                        message: format!("invalid integer {s:?} in header"),
                    })
                };
                (parse(fields[0])?, parse(fields[1])?)
            }
        };
        let mut vectors = BTreeMap::new();
        for (idx, raw) in lines {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let word = fields
                .next()
                .expect("non-empty line has a first field")
                .to_lowercase();
            let values: Result<Vec<f64>, _> = fields.map(|f| f.parse::<f64>()).collect();
            let values = values.map_err(|e| LexicalError::Parse {
                line: idx + 1,
                message: format!("invalid vector component: {e}"),
            })?;
            if values.len() != dimension {
                return Err(LexicalError::DimensionMismatch {
                    line: idx + 1,
                    expected: dimension,
                    found: values.len(),
                });
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(LexicalError::Parse {
                    line: idx + 1,
                    message: format!("non-finite component in vector for {word:?}"),
                });
            }
            vectors.insert(word, values);
        }
        let _ = count; // declared count is informational
        Ok(EmbeddingTable { dimension, vectors })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(&word.to_lowercase()).map(|v| v.as_slice())
    }

    /// Mean vector of the in-vocabulary tokens of a label, `None` when every
    /// token is out of vocabulary.
    fn label_vector(&self, label: &str) -> Option<Vec<f64>> {
        let mut sum = vec![0.0; self.dimension];
        let mut hits = 0usize;
        for token in tokenize_label(label) {
            if let Some(v) = self.get(&token) {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
                hits += 1;
            }
        }
        if hits == 0 {
            return None;
        }
        for s in &mut sum {
            *s /= hits as f64;
        }
        Some(sum)
    }
}

/// Cosine similarity of the mean token vectors of two labels, clamped to
/// `[0,1]`. Either side fully out of vocabulary → 0.
pub fn embedding_sim(table: &EmbeddingTable, a: &str, b: &str) -> f64 {
    let (va, vb) = match (table.label_vector(a), table.label_vector(b)) {
        (Some(va), Some(vb)) => (va, vb),
        _ => return 0.0,
    };
    let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
    let na: f64 = va.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = vb.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}
