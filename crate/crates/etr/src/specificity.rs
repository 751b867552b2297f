//! Property specificity measures over an incidence context.
//!
//! Three measures are provided, all signed by property possession:
//!
//! * horizontal — decays exponentially with how many objects share the
//!   property: `w · e^(λ(1−|K_v|))`
//! * vertical — driven by the hierarchy layer of the shallowest object
//!   possessing the property: `w · min layer(K_v) / max depth`
//! * informational — information gain of the binary possession partition
//!   under the sample-count entropy, min-max rescaled per context
//!
//! `w` is +1 when the object has the property and −1 otherwise, so every
//! value lands in `[-1, 1]`. Natural logarithms throughout. All functions
//! are pure; identical inputs give bit-identical outputs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fca::{ContextError, ExtentSet, FcaContext, GainTable};

#[derive(Debug, Error)]
pub enum SpecificityError {
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Which specificity measure (and derived similarity) to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SpecificityKind {
    Horizontal,
    Vertical,
    Informational,
}

impl SpecificityKind {
    pub const ALL: [SpecificityKind; 3] = [
        SpecificityKind::Horizontal,
        SpecificityKind::Vertical,
        SpecificityKind::Informational,
    ];

    /// Feature name used in manifests and dumps.
    pub fn feature_name(self) -> &'static str {
        match self {
            SpecificityKind::Horizontal => "sim_h",
            SpecificityKind::Vertical => "sim_v",
            SpecificityKind::Informational => "sim_i",
        }
    }
}

/// Tuning knobs shared by all specificity computations.
///
/// `lambda` is the horizontal constraint factor (the useful range is
/// `(0, 1]`, default 0.5). `layer_normalizer` divides the vertical measure
/// and must be the max hierarchy depth of the context it is used with;
/// [`SpecificityConfig::for_context`] fills it in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecificityConfig {
    pub lambda: f64,
    pub layer_normalizer: u32,
}

impl Default for SpecificityConfig {
    fn default() -> Self {
        SpecificityConfig {
            lambda: 0.5,
            layer_normalizer: 1,
        }
    }
}

impl SpecificityConfig {
    pub fn new(lambda: f64) -> Self {
        SpecificityConfig {
            lambda,
            layer_normalizer: 1,
        }
    }

    pub fn for_context(ctx: &FcaContext, lambda: f64) -> Self {
        SpecificityConfig {
            lambda,
            layer_normalizer: ctx.layer_max(),
        }
    }

    /// Same lambda, normalizer taken from the given context.
    pub fn with_context(self, ctx: &FcaContext) -> Self {
        SpecificityConfig {
            lambda: self.lambda,
            layer_normalizer: ctx.layer_max(),
        }
    }
}

/// A computed specificity with its kind tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecificityValue {
    pub kind: SpecificityKind,
    pub value: f64,
}

/// +1 when the object possesses the property, −1 otherwise.
pub fn association_weight(has_property: bool) -> f64 {
    if has_property {
        1.0
    } else {
        -1.0
    }
}

/// `w · e^(λ(1−|K_v|))`; a property with an empty extent yields 0.
pub fn horizontal_specificity(
    ctx: &FcaContext,
    object_id: &str,
    property_id: &str,
    cfg: &SpecificityConfig,
) -> Result<SpecificityValue, SpecificityError> {
    let obj = ctx.object_position(object_id)?;
    let prop = ctx.property_position(property_id)?;
    let kv = ctx.extent_size(prop);
    let value = if kv == 0 {
        0.0
    } else {
        let w = association_weight(ctx.has(obj, prop));
        w * (cfg.lambda * (1.0 - kv as f64)).exp()
    };
    Ok(SpecificityValue {
        kind: SpecificityKind::Horizontal,
        value,
    })
}

/// `w · min layer over K_v / layer_normalizer`; empty extent yields 0.
pub fn vertical_specificity(
    ctx: &FcaContext,
    object_id: &str,
    property_id: &str,
    cfg: &SpecificityConfig,
) -> Result<SpecificityValue, SpecificityError> {
    let obj = ctx.object_position(object_id)?;
    let prop = ctx.property_position(property_id)?;
    let extent = ctx.extent_indices(prop);
    let value = if extent.is_empty() {
        0.0
    } else {
        let min_layer = extent
            .iter()
            .map(|&i| ctx.object_layer(i))
            .min()
            .expect("extent nonempty");
        let w = association_weight(ctx.has(obj, prop));
        w * min_layer as f64 / cfg.layer_normalizer.max(1) as f64
    };
    Ok(SpecificityValue {
        kind: SpecificityKind::Vertical,
        value,
    })
}

/// Sample-count entropy of a set of counts:
/// `(−Σ F_i · ln(F_i / n)) / n` with `n` the set size; zero counts drop out
/// and the empty set has entropy 0.
pub fn entropy_of_counts(counts: &[f64]) -> f64 {
    let n = counts.len();
    if n == 0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for &f in counts {
        if f > 0.0 {
            sum += f * (f / n as f64).ln();
        }
    }
    -sum / n as f64
}

/// Entropy of an extent under a counts table (ids absent from the table
/// count as 0).
pub fn informational_entropy(kv: &ExtentSet, counts: &BTreeMap<String, f64>) -> f64 {
    let fs: Vec<f64> = kv
        .object_ids
        .iter()
        .map(|id| counts.get(id).copied().unwrap_or(0.0))
        .collect();
    entropy_of_counts(&fs)
}

/// Raw information gain of the binary possession partition of a property:
/// `H(K) − (|K⁺|/|K|)·H(K⁺) − (|K⁻|/|K|)·H(K⁻)`.
///
/// A property held by every object or by none has gain exactly 0.
pub fn informational_gain(
    ctx: &FcaContext,
    property_id: &str,
) -> Result<f64, SpecificityError> {
    let prop = ctx.property_position(property_id)?;
    Ok(gain_table(ctx).gains[prop])
}

/// `w ·` the property's information gain min-max rescaled to `[0,1]` over
/// all properties of the context. When every property has the same gain
/// the rescaled value is 0 (no property discriminates).
pub fn informational_specificity(
    ctx: &FcaContext,
    object_id: &str,
    property_id: &str,
    _cfg: &SpecificityConfig,
) -> Result<SpecificityValue, SpecificityError> {
    let obj = ctx.object_position(object_id)?;
    let prop = ctx.property_position(property_id)?;
    let table = gain_table(ctx);
    let spread = table.max - table.min;
    let scaled = if spread > 1e-12 {
        ((table.gains[prop] - table.min) / spread).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let w = association_weight(ctx.has(obj, prop));
    Ok(SpecificityValue {
        kind: SpecificityKind::Informational,
        value: w * scaled,
    })
}

/// Dispatches on kind.
pub fn specificity(
    ctx: &FcaContext,
    object_id: &str,
    property_id: &str,
    kind: SpecificityKind,
    cfg: &SpecificityConfig,
) -> Result<SpecificityValue, SpecificityError> {
    match kind {
        SpecificityKind::Horizontal => horizontal_specificity(ctx, object_id, property_id, cfg),
        SpecificityKind::Vertical => vertical_specificity(ctx, object_id, property_id, cfg),
        SpecificityKind::Informational => {
            informational_specificity(ctx, object_id, property_id, cfg)
        }
    }
}

fn gain_table(ctx: &FcaContext) -> &GainTable {
    ctx.gain_cache.get_or_init(|| {
        let all: Vec<f64> = (0..ctx.object_count())
            .map(|i| ctx.object_count_f(i))
            .collect();
        let h_k = entropy_of_counts(&all);
        let total = all.len() as f64;
        let mut gains = Vec::with_capacity(ctx.property_count());
        for prop in 0..ctx.property_count() {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            for (i, &f) in all.iter().enumerate() {
                if ctx.has(i, prop) {
                    plus.push(f);
                } else {
                    minus.push(f);
                }
            }
            let gain = h_k
                - (plus.len() as f64 / total) * entropy_of_counts(&plus)
                - (minus.len() as f64 / total) * entropy_of_counts(&minus);
            gains.push(gain);
        }
        let min = gains.iter().copied().fold(f64::INFINITY, f64::min);
        let max = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        GainTable { gains, min, max }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fca::{build_context, ContextOptions};
    use crate::ontology::{canonical, Level};

    /// n etypes named e00..e(n-1); `assoc[i]` lists property indices of etype i;
    /// properties named p0..; entity counts per etype in `f`.
    fn context_from(assoc: &[&[usize]], n_props: usize, f: &[usize]) -> crate::fca::FcaContext {
        let mut doc = String::from("format_version = 1\nid = \"t\"\n");
        for p in 0..n_props {
            doc.push_str(&format!("[[properties]]\nid = \"p{p}\"\n"));
        }
        for (i, props) in assoc.iter().enumerate() {
            doc.push_str(&format!("[[etypes]]\nid = \"e{i:02}\"\n"));
            let list: Vec<String> = props.iter().map(|p| format!("\"p{p}\"")).collect();
            doc.push_str(&format!("properties = [{}]\n", list.join(", ")));
        }
        let mut entity = 0;
        for (i, &count) in f.iter().enumerate() {
            for _ in 0..count {
                doc.push_str(&format!(
                    "[[entities]]\nid = \"x{entity:03}\"\ntypes = [\"e{i:02}\"]\n"
                ));
                entity += 1;
            }
        }
        let o = canonical::parse(&doc).unwrap();
        build_context(&o, Level::Schema, ContextOptions::default()).unwrap()
    }

    const E_HALF: f64 = 0.6065306597126334; // e^-0.5
    const E_ONE: f64 = 0.36787944117144233; // e^-1
    const LN_2: f64 = 0.6931471805599453;

    #[test]
    fn hs_unique_property_is_one() {
        let ctx = context_from(&[&[0], &[1]], 2, &[0, 0]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = horizontal_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((v.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hs_shared_by_three() {
        let ctx = context_from(&[&[0], &[0], &[0]], 1, &[0, 0, 0]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = horizontal_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((v.value - E_ONE).abs() < 1e-9);
    }

    #[test]
    fn hs_negative_when_absent() {
        // p0 on two other etypes, e00 lacks it
        let ctx = context_from(&[&[1], &[0], &[0]], 2, &[0, 0, 0]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = horizontal_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((v.value + E_HALF).abs() < 1e-9);
    }

    #[test]
    fn hs_degenerate_extent_is_zero() {
        let ctx = context_from(&[&[0]], 2, &[0]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = horizontal_specificity(&ctx, "e00", "p1", &cfg).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn hs_decreases_with_shareability() {
        // p0 shared by k etypes for k = 1..6
        for k in 1..6usize {
            let assoc_k: Vec<&[usize]> = (0..6).map(|i| if i < k { &[0][..] } else { &[1][..] }).collect();
            let assoc_k1: Vec<&[usize]> =
                (0..6).map(|i| if i <= k { &[0][..] } else { &[1][..] }).collect();
            let ctx_k = context_from(&assoc_k, 2, &[0; 6]);
            let ctx_k1 = context_from(&assoc_k1, 2, &[0; 6]);
            let cfg = SpecificityConfig::new(0.5);
            let hs_k = horizontal_specificity(&ctx_k, "e00", "p0", &cfg).unwrap().value;
            let hs_k1 = horizontal_specificity(&ctx_k1, "e00", "p0", &cfg).unwrap().value;
            assert!(hs_k > hs_k1, "HS must strictly decrease as |K_v| grows");
        }
    }

    #[test]
    fn hs_lambda_zero_collapses_to_weight() {
        let ctx = context_from(&[&[0], &[0], &[1]], 2, &[0, 0, 0]);
        let cfg = SpecificityConfig::new(0.0);
        assert_eq!(
            horizontal_specificity(&ctx, "e00", "p0", &cfg).unwrap().value,
            1.0
        );
        assert_eq!(
            horizontal_specificity(&ctx, "e02", "p0", &cfg).unwrap().value,
            -1.0
        );
    }

    /// Hierarchy e00 ← e01 ← e02 ← e03 (chain, layers 1..4); property map by index.
    fn chain_context(assoc: &[&[usize]], n_props: usize) -> crate::fca::FcaContext {
        let mut doc = String::from("format_version = 1\nid = \"t\"\n");
        for p in 0..n_props {
            doc.push_str(&format!("[[properties]]\nid = \"p{p}\"\n"));
        }
        for (i, props) in assoc.iter().enumerate() {
            doc.push_str(&format!("[[etypes]]\nid = \"e{i:02}\"\n"));
            if i > 0 {
                doc.push_str(&format!("parents = [\"e{:02}\"]\n", i - 1));
            }
            let list: Vec<String> = props.iter().map(|p| format!("\"p{p}\"")).collect();
            doc.push_str(&format!("properties = [{}]\n", list.join(", ")));
        }
        let o = canonical::parse(&doc).unwrap();
        build_context(&o, Level::Schema, ContextOptions::default()).unwrap()
    }

    #[test]
    fn vs_layer_three_of_four() {
        // p0 only on the layer-3 etype; depth 4
        let ctx = chain_context(&[&[1], &[1], &[0], &[1]], 2);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = vertical_specificity(&ctx, "e02", "p0", &cfg).unwrap();
        assert!((v.value - 0.75).abs() < 1e-9);
    }

    #[test]
    fn vs_min_layer_wins() {
        // p0 on layers 1 and 3; depth 4 → 1/4
        let ctx = chain_context(&[&[0], &[1], &[0], &[1]], 2);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = vertical_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((v.value - 0.25).abs() < 1e-9);
    }

    #[test]
    fn vs_flat_ontology_is_one() {
        let ctx = context_from(&[&[0], &[0]], 1, &[0, 0]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = vertical_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((v.value - 1.0).abs() < 1e-9);
        // a root is always in the extent here, so VS = 1/max_depth holds too
        assert_eq!(cfg.layer_normalizer, 1);
    }

    #[test]
    fn vs_root_extent_is_inverse_depth() {
        // p0 on the root of a 4-deep chain
        let ctx = chain_context(&[&[0], &[0], &[1], &[1]], 2);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        let v = vertical_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((v.value - 0.25).abs() < 1e-9);
    }

    #[test]
    fn entropy_oracle_cases() {
        assert_eq!(entropy_of_counts(&[]), 0.0);
        assert!((entropy_of_counts(&[1.0])).abs() < 1e-12);
        assert!((entropy_of_counts(&[1.0, 1.0]) - LN_2).abs() < 1e-12);
        assert!((entropy_of_counts(&[2.0, 2.0])).abs() < 1e-12);
    }

    #[test]
    fn entropy_uniform_counts_equal_log_size() {
        for n in 1..=4usize {
            let counts = vec![1.0; n];
            assert!(
                (entropy_of_counts(&counts) - (n as f64).ln()).abs() < 1e-12,
                "uniform F=1 entropy must be ln {n}"
            );
        }
    }

    #[test]
    fn entropy_zero_counts_drop_out() {
        // 0·ln(0/n) = 0 by convention
        assert!((entropy_of_counts(&[0.0, 1.0]) - 0.5 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn entropy_over_extent_set() {
        let ctx = context_from(&[&[0], &[0]], 1, &[1, 1]);
        let kv = ctx.extent("p0").unwrap();
        let h = informational_entropy(&kv, &ctx.counts_table());
        assert!((h - LN_2).abs() < 1e-12);
    }

    #[test]
    fn is_gain_discriminating_property() {
        // K = {e00, e01}, F = (1,1), p0 only on e00 → gain ln 2
        let ctx = context_from(&[&[0], &[1]], 2, &[1, 1]);
        let gain = informational_gain(&ctx, "p0").unwrap();
        assert!((gain - LN_2).abs() < 1e-9);
    }

    #[test]
    fn is_gain_universal_property_is_zero() {
        let ctx = context_from(&[&[0], &[0]], 1, &[1, 2]);
        assert!(informational_gain(&ctx, "p0").unwrap().abs() < 1e-12);
    }

    #[test]
    fn is_gain_absent_property_is_zero() {
        let ctx = context_from(&[&[0], &[0]], 2, &[1, 2]);
        assert!(informational_gain(&ctx, "p1").unwrap().abs() < 1e-12);
    }

    #[test]
    fn is_rescaled_range_and_sign() {
        let ctx = context_from(&[&[0, 1], &[1]], 3, &[1, 3]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.5);
        for obj in ["e00", "e01"] {
            for p in ["p0", "p1", "p2"] {
                let v = informational_specificity(&ctx, obj, p, &cfg).unwrap();
                assert!(v.value.abs() <= 1.0 + 1e-9);
            }
        }
        // p0 discriminates most, held by e00 → rescaled 1 with w = +1
        let top = informational_specificity(&ctx, "e00", "p0", &cfg).unwrap();
        assert!((top.value - 1.0).abs() < 1e-9);
        let anti = informational_specificity(&ctx, "e01", "p0", &cfg).unwrap();
        assert!((anti.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_functions_bit_identical() {
        let ctx = context_from(&[&[0, 1], &[1]], 2, &[2, 5]);
        let cfg = SpecificityConfig::for_context(&ctx, 0.37);
        for kind in SpecificityKind::ALL {
            let a = specificity(&ctx, "e00", "p1", kind, &cfg).unwrap();
            let b = specificity(&ctx, "e00", "p1", kind, &cfg).unwrap();
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn eq4_form_differs_from_shannon_on_raw_counts() {
        // standard Shannon entropy over the empirical distribution, for
        // comparison with the sample-count form used above
        fn shannon(counts: &[f64]) -> f64 {
            let total: f64 = counts.iter().sum();
            if total <= 0.0 {
                return 0.0;
            }
            -counts
                .iter()
                .filter(|&&f| f > 0.0)
                .map(|&f| (f / total) * (f / total).ln())
                .sum::<f64>()
        }
        // uniform unit counts agree…
        assert!((entropy_of_counts(&[1.0, 1.0]) - shannon(&[1.0, 1.0])).abs() < 1e-12);
        // …but raw counts diverge: Shannon stays positive, the sample-count
        // form vanishes at F = (2,2)
        assert!(shannon(&[2.0, 2.0]) > 0.5);
        assert!(entropy_of_counts(&[2.0, 2.0]).abs() < 1e-12);
    }

    #[test]
    fn unknown_ids_error() {
        let ctx = context_from(&[&[0]], 1, &[0]);
        let cfg = SpecificityConfig::default();
        assert!(horizontal_specificity(&ctx, "nope", "p0", &cfg).is_err());
        assert!(vertical_specificity(&ctx, "e00", "nope", &cfg).is_err());
    }
}
