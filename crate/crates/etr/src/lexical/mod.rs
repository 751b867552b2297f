//! String-based and language-based similarity metrics used as classifier
//! features, plus loaders for the taxonomy and word-embedding resources.
//!
//! All metrics return values in `[0,1]` and are symmetric in their two
//! string arguments. Ontology labels are code-like (`locatedIn`,
//! `has_author`), so callers normally pass them through [`normalize_label`]
//! before comparing.

mod embedding;
mod taxonomy;

pub use embedding::{embedding_sim, EmbeddingTable};
pub use taxonomy::{taxonomy_sim, Taxonomy};

use thiserror::Error;

/// Errors raised while loading lexical resources.
#[derive(Debug, Error)]
pub enum LexicalError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dimension mismatch at line {line}: expected {expected}, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Splits a code-like label into lowercase word tokens.
///
/// Boundaries are whitespace, `_`, `-`, and lower-to-upper camelCase
/// transitions: `locatedIn` → `["located", "in"]`.
pub fn tokenize_label(label: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut prev_lower = false;
    for ch in label.chars() {
        if ch.is_whitespace() || ch == '_' || ch == '-' {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            prev_lower = false;
            continue;
        }
        if ch.is_uppercase() && prev_lower && !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
        prev_lower = ch.is_lowercase() || ch.is_numeric();
        current.extend(ch.to_lowercase());
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Case-folds and tokenizes a label, rejoining tokens with single spaces.
///
/// `"locatedIn"` → `"located in"`, `"has_author"` → `"has author"`.
pub fn normalize_label(label: &str) -> String {
    tokenize_label(label).join(" ")
}

const NGRAM_PAD: char = '\0';

/// Character n-gram Dice similarity with `n = 3`.
pub fn ngram_sim(a: &str, b: &str) -> f64 {
    ngram_sim_n(a, b, 3)
}

/// Dice coefficient over padded character n-grams of the case-folded inputs.
///
/// Each string is padded with `n-1` sentinel characters on both sides, so a
/// string of `k` chars yields `k + n - 1` grams. The intersection is taken
/// with multiset semantics. Both inputs empty → 1; exactly one empty → 0.
pub fn ngram_sim_n(a: &str, b: &str, n: usize) -> f64 {
    assert!(n >= 1, "n-gram size must be at least 1");
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let grams_a = padded_grams(a, n);
    let grams_b = padded_grams(b, n);
    let mut counts = std::collections::HashMap::new();
    for g in &grams_a {
        *counts.entry(g.clone()).or_insert(0i64) += 1;
    }
    let mut shared = 0usize;
    for g in &grams_b {
        if let Some(c) = counts.get_mut(g) {
            if *c > 0 {
                *c -= 1;
                shared += 1;
            }
        }
    }
    2.0 * shared as f64 / (grams_a.len() + grams_b.len()) as f64
}

fn padded_grams(s: &str, n: usize) -> Vec<Vec<char>> {
    let mut chars: Vec<char> = Vec::new();
    for _ in 0..n - 1 {
        chars.push(NGRAM_PAD);
    }
    chars.extend(s.to_lowercase().chars());
    for _ in 0..n - 1 {
        chars.push(NGRAM_PAD);
    }
    chars.windows(n).map(|w| w.to_vec()).collect()
}

/// Longest-common-subsequence similarity: `2·|LCS(a,b)| / (|a|+|b|)`.
///
/// Both inputs empty → 1.
pub fn lcs_sim(a: &str, b: &str) -> f64 {
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    if ca.is_empty() && cb.is_empty() {
        return 1.0;
    }
    if ca.is_empty() || cb.is_empty() {
        return 0.0;
    }
    2.0 * lcs_length(&ca, &cb) as f64 / (ca.len() + cb.len()) as f64
}

fn lcs_length(a: &[char], b: &[char]) -> usize {
    // Two-row DP over the shorter string.
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut curr = vec![0usize; short.len() + 1];
    for &cl in long {
        for (j, &cs) in short.iter().enumerate() {
            curr[j + 1] = if cl == cs {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[short.len()]
}

/// Levenshtein similarity: `1 − dist(a,b) / max(|a|,|b|)`.
///
/// Both inputs empty → 1.
pub fn levenshtein_sim(a: &str, b: &str) -> f64 {
    let la = a.chars().count();
    let lb = b.chars().count();
    if la == 0 && lb == 0 {
        return 1.0;
    }
    1.0 - levenshtein_distance(a, b) as f64 / la.max(lb) as f64
}

/// Edit distance (insertions, deletions, substitutions all cost 1),
/// computed over chars with a single rolling row.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    if ca.is_empty() {
        return cb.len();
    }
    if cb.is_empty() {
        return ca.len();
    }
    let mut row: Vec<usize> = (0..=cb.len()).collect();
    for (i, &x) in ca.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &y) in cb.iter().enumerate() {
            let cost = if x == y { 0 } else { 1 };
            let next = (diag + cost).min(row[j] + 1).min(row[j + 1] + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[cb.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    // Naive full-matrix DP, kept independent of the rolling-row version.
    fn levenshtein_naive(a: &str, b: &str) -> usize {
        let ca: Vec<char> = a.chars().collect();
        let cb: Vec<char> = b.chars().collect();
        let mut d = vec![vec![0usize; cb.len() + 1]; ca.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=cb.len() {
            d[0][j] = j;
        }
        for i in 1..=ca.len() {
            for j in 1..=cb.len() {
                let cost = if ca[i - 1] == cb[j - 1] { 0 } else { 1 };
                d[i][j] = (d[i - 1][j] + 1)
                    .min(d[i][j - 1] + 1)
                    .min(d[i - 1][j - 1] + cost);
            }
        }
        d[ca.len()][cb.len()]
    }

    fn random_string(rng: &mut StdRng, max_len: usize) -> String {
        let len = rng.gen_range(0..=max_len);
        (0..len)
            .map(|_| (b'a' + rng.gen_range(0..6)) as char)
            .collect()
    }

    #[test]
    fn ngram_identical() {
        assert_eq!(ngram_sim("paper", "paper"), 1.0);
    }

    #[test]
    fn ngram_disjoint() {
        assert_eq!(ngram_sim("abc", "xyz"), 0.0);
    }

    #[test]
    fn ngram_paper_papers() {
        // padded trigrams: 7 for "paper", 8 for "papers", 5 shared
        assert!((ngram_sim("paper", "papers") - 0.6666666666666666).abs() < 1e-12);
    }

    #[test]
    fn ngram_empty_rules() {
        assert_eq!(ngram_sim("", ""), 1.0);
        assert_eq!(ngram_sim("", "abc"), 0.0);
        assert_eq!(ngram_sim("abc", ""), 0.0);
    }

    #[test]
    fn ngram_case_folds() {
        assert_eq!(ngram_sim("Paper", "paper"), 1.0);
    }

    #[test]
    fn lcs_identical() {
        assert_eq!(lcs_sim("chair", "chair"), 1.0);
    }

    #[test]
    fn lcs_chair_chairman() {
        // LCS length 5 → 10/13
        assert!((lcs_sim("chair", "chairman") - 0.7692307692307693).abs() < 1e-12);
    }

    #[test]
    fn lcs_empty() {
        assert_eq!(lcs_sim("ab", ""), 0.0);
        assert_eq!(lcs_sim("", ""), 1.0);
    }

    #[test]
    fn levenshtein_kitten_sitting() {
        assert_eq!(levenshtein_distance("kitten", "sitting"), 3);
        assert!((levenshtein_sim("kitten", "sitting") - 0.5714285714285714).abs() < 1e-12);
    }

    #[test]
    fn levenshtein_empty() {
        assert_eq!(levenshtein_sim("", "abc"), 0.0);
        assert_eq!(levenshtein_sim("", ""), 1.0);
        assert_eq!(levenshtein_sim("same", "same"), 1.0);
    }

    #[test]
    fn levenshtein_matches_naive_dp() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..1000 {
            let a = random_string(&mut rng, 32);
            let b = random_string(&mut rng, 32);
            assert_eq!(
                levenshtein_distance(&a, &b),
                levenshtein_naive(&a, &b),
                "mismatch for {a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn string_metrics_symmetric_and_in_range() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let a = random_string(&mut rng, 16);
            let b = random_string(&mut rng, 16);
            for (name, m) in [
                ("ngram", ngram_sim as fn(&str, &str) -> f64),
                ("lcs", lcs_sim),
                ("levenshtein", levenshtein_sim),
            ] {
                let xy = m(&a, &b);
                let yx = m(&b, &a);
                assert_eq!(xy, yx, "{name} not symmetric on {a:?}/{b:?}");
                assert!((0.0..=1.0).contains(&xy), "{name} out of range on {a:?}/{b:?}");
            }
            if !a.is_empty() {
                assert_eq!(ngram_sim(&a, &a), 1.0);
                assert_eq!(lcs_sim(&a, &a), 1.0);
                assert_eq!(levenshtein_sim(&a, &a), 1.0);
            }
        }
    }

    #[test]
    fn tokenize_camel_and_underscore() {
        assert_eq!(tokenize_label("locatedIn"), vec!["located", "in"]);
        assert_eq!(tokenize_label("has_author"), vec!["has", "author"]);
        assert_eq!(tokenize_label("SubjectArea"), vec!["subject", "area"]);
        assert_eq!(tokenize_label("name"), vec!["name"]);
        assert_eq!(normalize_label("locatedIn"), "located in");
        assert!(tokenize_label("").is_empty());
    }
}
