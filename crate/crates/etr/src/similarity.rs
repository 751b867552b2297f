//! Property alignment across two contexts and the property-based
//! similarity metrics built on top of it.
//!
//! For a candidate object pair, each aligned property pair contributes the
//! specificity of its two endpoints, each divided by the size of its
//! object's property set; the halved sum is the similarity. One kind of
//! specificity gives one similarity metric (horizontal, vertical,
//! informational). Raw similarity lists are normalized to `[0,1]` at the
//! end of a run.

use thiserror::Error;

use crate::fca::{ContextError, FcaContext};
use crate::lexical::{levenshtein_sim, ngram_sim, normalize_label};
use crate::specificity::{specificity, SpecificityConfig, SpecificityError, SpecificityKind};

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("object {0} has no properties")]
    EmptyPropertySet(String),
    #[error("pair {index}: {source}")]
    Pair {
        index: usize,
        #[source]
        source: Box<SimilarityError>,
    },
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Specificity(#[from] SpecificityError),
}

/// One aligned property pair with its label-similarity score.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    pub a: String,
    pub b: String,
    pub score: f64,
}

/// A 1:1 alignment between the properties of two contexts.
#[derive(Debug, Clone, Default)]
pub struct PropertyAlignment {
    pairs: Vec<AlignedPair>,
}

impl PropertyAlignment {
    pub fn new(pairs: Vec<AlignedPair>) -> Self {
        PropertyAlignment { pairs }
    }

    pub fn pairs(&self) -> &[AlignedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Swaps the two sides, preserving pair order.
    pub fn reversed(&self) -> PropertyAlignment {
        PropertyAlignment {
            pairs: self
                .pairs
                .iter()
                .map(|p| AlignedPair {
                    a: p.b.clone(),
                    b: p.a.clone(),
                    score: p.score,
                })
                .collect(),
        }
    }

    /// Identity alignment over the common property ids of two contexts.
    pub fn identity(f_a: &FcaContext, f_b: &FcaContext) -> PropertyAlignment {
        let pairs = f_a
            .property_ids()
            .iter()
            .filter(|id| f_b.property_position(id).is_ok())
            .map(|id| AlignedPair {
                a: id.clone(),
                b: id.clone(),
                score: 1.0,
            })
            .collect();
        PropertyAlignment { pairs }
    }
}

/// Greedy best-first 1:1 property matching on label similarity.
///
/// The score of a candidate pair is the mean of trigram-Dice and
/// Levenshtein similarity over normalized labels; pairs scoring below
/// `threshold` are excluded. Ties are broken lexicographically by
/// (property id in `f_a`, property id in `f_b`).
pub fn match_properties(
    f_a: &FcaContext,
    f_b: &FcaContext,
    threshold: f64,
) -> PropertyAlignment {
    let labels_a: Vec<String> = (0..f_a.property_count())
        .map(|i| normalize_label(f_a.property_label(i)))
        .collect();
    let labels_b: Vec<String> = (0..f_b.property_count())
        .map(|i| normalize_label(f_b.property_label(i)))
        .collect();

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (ia, la) in labels_a.iter().enumerate() {
        for (ib, lb) in labels_b.iter().enumerate() {
            let score = (ngram_sim(la, lb) + levenshtein_sim(la, lb)) / 2.0;
            if score >= threshold {
                candidates.push((score, ia, ib));
            }
        }
    }
    candidates.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then_with(|| f_a.property_ids()[x.1].cmp(&f_a.property_ids()[y.1]))
            .then_with(|| f_b.property_ids()[x.2].cmp(&f_b.property_ids()[y.2]))
    });

    let mut used_a = vec![false; f_a.property_count()];
    let mut used_b = vec![false; f_b.property_count()];
    let mut pairs = Vec::new();
    for (score, ia, ib) in candidates {
        if used_a[ia] || used_b[ib] {
            continue;
        }
        used_a[ia] = true;
        used_b[ib] = true;
        pairs.push(AlignedPair {
            a: f_a.property_ids()[ia].clone(),
            b: f_b.property_ids()[ib].clone(),
            score,
        });
    }
    pairs.sort_by(|x, y| x.a.cmp(&y.a).then_with(|| x.b.cmp(&y.b)));
    PropertyAlignment { pairs }
}

/// Similarity of one object pair under one specificity kind:
/// `½ Σ (SPC_A(E_a,p_n)/|prop(E_a)| + SPC_B(E_b,p_m)/|prop(E_b)|)` over
/// aligned pairs `(p_n, p_m)` possessed by both objects.
pub fn compute_similarity(
    f_a: &FcaContext,
    f_b: &FcaContext,
    object_a: &str,
    object_b: &str,
    alignment: &PropertyAlignment,
    kind: SpecificityKind,
    cfg: &SpecificityConfig,
) -> Result<f64, SimilarityError> {
    let oa = f_a.object_position(object_a)?;
    let ob = f_b.object_position(object_b)?;
    let na = f_a.object_property_count(oa);
    let nb = f_b.object_property_count(ob);
    if na == 0 {
        return Err(SimilarityError::EmptyPropertySet(object_a.to_string()));
    }
    if nb == 0 {
        return Err(SimilarityError::EmptyPropertySet(object_b.to_string()));
    }
    let cfg_a = cfg.with_context(f_a);
    let cfg_b = cfg.with_context(f_b);
    let mut sum = 0.0;
    for pair in alignment.pairs() {
        let pa = f_a.property_position(&pair.a)?;
        let pb = f_b.property_position(&pair.b)?;
        if f_a.has(oa, pa) && f_b.has(ob, pb) {
            let spc_a = specificity(f_a, object_a, &pair.a, kind, &cfg_a)?;
            let spc_b = specificity(f_b, object_b, &pair.b, kind, &cfg_b)?;
            sum += spc_a.value / na as f64 + spc_b.value / nb as f64;
        }
    }
    Ok(0.5 * sum)
}

/// Maps [`compute_similarity`] over a candidate pair list, preserving
/// order; per-pair failures carry the offending index.
pub fn compute_similarity_list(
    f_a: &FcaContext,
    f_b: &FcaContext,
    pairs: &[(String, String)],
    alignment: &PropertyAlignment,
    kind: SpecificityKind,
    cfg: &SpecificityConfig,
) -> Result<Vec<f64>, SimilarityError> {
    pairs
        .iter()
        .enumerate()
        .map(|(index, (a, b))| {
            compute_similarity(f_a, f_b, a, b, alignment, kind, cfg).map_err(|e| {
                SimilarityError::Pair {
                    index,
                    source: Box::new(e),
                }
            })
        })
        .collect()
}

/// How raw similarity lists are squeezed into `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMethod {
    MinMax,
    ZscoreThenMinmax,
}

impl Default for NormalizeMethod {
    fn default() -> Self {
        NormalizeMethod::ZscoreThenMinmax
    }
}

impl std::str::FromStr for NormalizeMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minmax" => Ok(NormalizeMethod::MinMax),
            "zscore" | "zscore_then_minmax" => Ok(NormalizeMethod::ZscoreThenMinmax),
            other => Err(format!("unknown normalization method {other:?}")),
        }
    }
}

/// Rescales a list into `[0,1]`. A constant list maps to all 0.5; the
/// z-score variant standardizes (population σ) before min-max.
pub fn normalize(values: &[f64], method: NormalizeMethod) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let staged: Vec<f64> = match method {
        NormalizeMethod::MinMax => values.to_vec(),
        NormalizeMethod::ZscoreThenMinmax => {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let sigma = var.sqrt();
            if sigma <= f64::EPSILON {
                return vec![0.5; values.len()];
            }
            values.iter().map(|v| (v - mean) / sigma).collect()
        }
    };
    let min = staged.iter().copied().fold(f64::INFINITY, f64::min);
    let max = staged.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max - min <= f64::EPSILON {
        return vec![0.5; values.len()];
    }
    staged
        .iter()
        .map(|v| ((v - min) / (max - min)).clamp(0.0, 1.0))
        .collect()
}

/// Raw and normalized similarities of one candidate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityRecord {
    pub object_a: String,
    pub object_b: String,
    pub sim_h: f64,
    pub sim_v: f64,
    pub sim_i: f64,
    pub sim_h_n: f64,
    pub sim_v_n: f64,
    pub sim_i_n: f64,
}

/// Tab-delimited dump, fixed column order, `format_version` comment first.
pub fn dump_records(records: &[SimilarityRecord]) -> String {
    let mut out = String::from("# format_version: 1\n");
    out.push_str("object_a\tobject_b\tsim_h\tsim_v\tsim_i\tsim_h_n\tsim_v_n\tsim_i_n\n");
    for r in records {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.object_a, r.object_b, r.sim_h, r.sim_v, r.sim_i, r.sim_h_n, r.sim_v_n, r.sim_i_n
        ));
    }
    out
}
