//! Hypernym taxonomy with Wu–Palmer similarity over word senses.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{tokenize_label, LexicalError};

/// A rooted hypernym DAG with a lemma index mapping words to sense nodes.
///
/// File format is line oriented; blank lines and `#` comments are skipped:
///
/// ```text
/// edge <child_node_id> <parent_node_id>
/// lemma <word> <node_id>
/// ```
///
/// Roots are nodes that never appear as a child. Depth of a node is the
/// number of nodes on the longest path from a root to it, so `depth(root) = 1`.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    nodes: BTreeSet<String>,
    parents: BTreeMap<String, BTreeSet<String>>,
    lemmas: BTreeMap<String, BTreeSet<String>>,
    depths: BTreeMap<String, usize>,
}

impl Taxonomy {
    pub fn load(path: &Path) -> Result<Self, LexicalError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LexicalError> {
        let mut nodes = BTreeSet::new();
        let mut parents: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut lemmas: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["edge", child, parent] => {
                    nodes.insert(child.to_string());
                    nodes.insert(parent.to_string());
                    parents
                        .entry(child.to_string())
                        .or_default()
                        .insert(parent.to_string());
                }
                ["lemma", word, node] => {
                    nodes.insert(node.to_string());
                    lemmas
                        .entry(word.to_lowercase())
                        .or_default()
                        .insert(node.to_string());
                }
                _ => {
                    return Err(LexicalError::Parse {
                        line: idx + 1,
                        message: format!("expected `edge <child> <parent>` or `lemma <word> <node>`, found {line:?}"),
                    })
                }
            }
        }
        let depths = compute_depths(&nodes, &parents).ok_or(LexicalError::Parse {
            line: 0,
            message: "hypernym edges contain a cycle".to_string(),
        })?;
        Ok(Taxonomy {
            nodes,
            parents,
            lemmas,
            depths,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn lemma_count(&self) -> usize {
        self.lemmas.len()
    }

    pub fn depth(&self, node: &str) -> Option<usize> {
        self.depths.get(node).copied()
    }

    /// Sense nodes for a word, empty when the word is unknown.
    pub fn senses(&self, word: &str) -> BTreeSet<String> {
        self.lemmas
            .get(&word.to_lowercase())
            .cloned()
            .unwrap_or_default()
    }

    /// A node together with all its ancestors.
    fn ancestors(&self, node: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![node.to_string()];
        while let Some(n) = stack.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if let Some(ps) = self.parents.get(&n) {
                stack.extend(ps.iter().cloned());
            }
        }
        seen
    }

    /// Wu–Palmer similarity between two sense nodes:
    /// `2·depth(lcs) / (depth(a) + depth(b))` where `lcs` is the deepest
    /// common ancestor (either node counts as its own ancestor).
    pub fn wu_palmer_senses(&self, a: &str, b: &str) -> Option<f64> {
        let da = *self.depths.get(a)?;
        let db = *self.depths.get(b)?;
        let common: Vec<&String> = self
            .ancestors(a)
            .intersection(&self.ancestors(b))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        let lcs_depth = common
            .into_iter()
            .filter_map(|n| self.depths.get(n))
            .max()?;
        Some(2.0 * *lcs_depth as f64 / (da + db) as f64)
    }
}

/// Longest-path depth per node; `None` when the parent edges contain a cycle.
fn compute_depths(
    nodes: &BTreeSet<String>,
    parents: &BTreeMap<String, BTreeSet<String>>,
) -> Option<BTreeMap<String, usize>> {
    let mut depths = BTreeMap::new();
    #[derive(PartialEq)]
    enum Mark {
        InProgress,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    fn visit<'a>(
        node: &'a str,
        parents: &'a BTreeMap<String, BTreeSet<String>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        depths: &mut BTreeMap<String, usize>,
    ) -> Option<usize> {
        match marks.get(node) {
            Some(Mark::Done) => return Some(depths[node]),
            Some(Mark::InProgress) => return None,
            None => {}
        }
        marks.insert(node, Mark::InProgress);
        let depth = match parents.get(node) {
            None => 1,
            Some(ps) if ps.is_empty() => 1,
            Some(ps) => {
                let mut max_parent = 0usize;
                for p in ps {
                    max_parent = max_parent.max(visit(p, parents, marks, depths)?);
                }
                max_parent + 1
            }
        };
        marks.insert(node, Mark::Done);
        depths.insert(node.to_string(), depth);
        Some(depth)
    }
    for node in nodes {
        visit(node, parents, &mut marks, &mut depths)?;
    }
    Some(depths)
}

/// Wu–Palmer similarity between two labels.
///
/// Each label is tokenized; a token's senses are looked up in the lemma
/// index, and the result is the maximum Wu–Palmer score over all sense
/// pairs across the two token sets. Any side with no known sense → 0.
pub fn taxonomy_sim(tax: &Taxonomy, a: &str, b: &str) -> f64 {
    let senses_of = |label: &str| -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for token in tokenize_label(label) {
            out.extend(tax.senses(&token));
        }
        out
    };
    let sa = senses_of(a);
    let sb = senses_of(b);
    if sa.is_empty() || sb.is_empty() {
        return 0.0;
    }
    let mut best: f64 = 0.0;
    for x in &sa {
        for y in &sb {
            if let Some(s) = tax.wu_palmer_senses(x, y) {
                best = best.max(s);
            }
        }
    }
    best.clamp(0.0, 1.0)
}
