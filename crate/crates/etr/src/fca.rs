//! Formal-concept incidence structure built from an ontology: objects are
//! etypes (schema level) or entities (instance level), columns are the
//! ontology's properties, and a bit says "object has property".
//!
//! Only incidence and extent queries are needed downstream; no lattice is
//! constructed.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use thiserror::Error;

use crate::ontology::{Level, Ontology, OntologyError};

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("empty context: no {0}-level objects with properties")]
    EmptyContext(Level),
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Flags controlling how an ontology is projected into a context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ContextOptions {
    /// Union etype properties with all ancestor properties.
    pub inherit_props: bool,
    /// Count instances of descendant etypes into each etype's F(·).
    pub rollup_counts: bool,
}

/// Objects of a context that possess one particular property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtentSet {
    pub property_id: String,
    pub object_ids: BTreeSet<String>,
}

impl ExtentSet {
    pub fn len(&self) -> usize {
        self.object_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object_ids.is_empty()
    }
}

/// Immutable objects × properties incidence structure.
///
/// Object and property orderings are lexicographic by id, so identical
/// inputs produce identical contexts.
#[derive(Debug, Clone)]
pub struct FcaContext {
    level: Level,
    ontology_id: String,
    object_ids: Vec<String>,
    object_labels: Vec<String>,
    property_ids: Vec<String>,
    property_labels: Vec<String>,
    object_index: BTreeMap<String, usize>,
    property_index: BTreeMap<String, usize>,
    incidence: Vec<Vec<bool>>,
    /// Hierarchy layer per object (min over asserted etypes at instance level).
    layers: Vec<u32>,
    /// F(·) sample counts per object.
    counts: Vec<f64>,
    /// Max hierarchy depth of the source ontology, ≥ 1.
    layer_max: u32,
    /// Per-property informational gain, filled on first use.
    pub(crate) gain_cache: OnceLock<GainTable>,
}

#[derive(Debug, Clone)]
pub(crate) struct GainTable {
    pub gains: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

/// Builds the incidence context for an ontology at the requested level.
pub fn build_context(
    ontology: &Ontology,
    level: Level,
    options: ContextOptions,
) -> Result<FcaContext, ContextError> {
    let mut object_ids: Vec<String> = match level {
        Level::Schema => ontology.etypes().map(|e| e.id.clone()).collect(),
        Level::Instance => ontology.entities().map(|e| e.id.clone()).collect(),
    };
    object_ids.sort();
    let mut property_ids: Vec<String> = ontology.properties().map(|p| p.id.clone()).collect();
    property_ids.sort();

    let property_index: BTreeMap<String, usize> = property_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();
    let object_index: BTreeMap<String, usize> = object_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();

    let layer_max = ontology.max_depth().max(1);
    let mut incidence = Vec::with_capacity(object_ids.len());
    let mut layers = Vec::with_capacity(object_ids.len());
    let mut counts = Vec::with_capacity(object_ids.len());
    let mut object_labels = Vec::with_capacity(object_ids.len());
    let mut any_property = false;

    for id in &object_ids {
        let props = ontology.props_of(id, level, options.inherit_props)?;
        let mut row = vec![false; property_ids.len()];
        for p in &props {
            row[property_index[p]] = true;
            any_property = true;
        }
        incidence.push(row);
        match level {
            Level::Schema => {
                layers.push(ontology.layer_of(id)?);
                counts.push(ontology.instance_count(id, options.rollup_counts)? as f64);
                object_labels.push(ontology.etype(id).expect("listed etype exists").label.clone());
            }
            Level::Instance => {
                let entity = ontology.entity(id).expect("listed entity exists");
                let layer = entity
                    .etype_ids
                    .iter()
                    .map(|t| ontology.layer_of(t))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .min()
                    .unwrap_or(layer_max);
                layers.push(layer);
                let mut f = 0.0;
                for t in &entity.etype_ids {
                    f += ontology.instance_count(t, options.rollup_counts)? as f64;
                }
                counts.push(f.max(1.0));
                object_labels.push(entity.label.clone());
            }
        }
    }

    if object_ids.is_empty() || !any_property {
        return Err(ContextError::EmptyContext(level));
    }

    let property_labels = property_ids
        .iter()
        .map(|id| ontology.property(id).expect("listed property exists").label.clone())
        .collect();

    Ok(FcaContext {
        level,
        ontology_id: ontology.id().to_string(),
        object_ids,
        object_labels,
        property_ids,
        property_labels,
        object_index,
        property_index,
        incidence,
        layers,
        counts,
        layer_max,
        gain_cache: OnceLock::new(),
    })
}

impl FcaContext {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn ontology_id(&self) -> &str {
        &self.ontology_id
    }

    pub fn object_ids(&self) -> &[String] {
        &self.object_ids
    }

    pub fn property_ids(&self) -> &[String] {
        &self.property_ids
    }

    pub fn object_count(&self) -> usize {
        self.object_ids.len()
    }

    pub fn property_count(&self) -> usize {
        self.property_ids.len()
    }

    pub fn object_position(&self, object_id: &str) -> Result<usize, ContextError> {
        self.object_index
            .get(object_id)
            .copied()
            .ok_or_else(|| ContextError::UnknownId(object_id.to_string()))
    }

    pub fn property_position(&self, property_id: &str) -> Result<usize, ContextError> {
        self.property_index
            .get(property_id)
            .copied()
            .ok_or_else(|| ContextError::UnknownId(property_id.to_string()))
    }

    pub fn object_label(&self, index: usize) -> &str {
        &self.object_labels[index]
    }

    pub fn property_label(&self, index: usize) -> &str {
        &self.property_labels[index]
    }

    /// Incidence bit at (object index, property index).
    pub fn has(&self, object: usize, property: usize) -> bool {
        self.incidence[object][property]
    }

    /// Number of properties of one object (|prop(E)|).
    pub fn object_property_count(&self, object: usize) -> usize {
        self.incidence[object].iter().filter(|b| **b).count()
    }

    /// Hierarchy layer of an object.
    pub fn object_layer(&self, object: usize) -> u32 {
        self.layers[object]
    }

    /// F(·) sample count of an object.
    pub fn object_count_f(&self, object: usize) -> f64 {
        self.counts[object]
    }

    /// Max hierarchy depth of the source ontology (the VS normalizer).
    pub fn layer_max(&self) -> u32 {
        self.layer_max
    }

    /// Column support size of a property (|K_v|).
    pub fn extent_size(&self, property: usize) -> usize {
        self.incidence.iter().filter(|row| row[property]).count()
    }

    pub(crate) fn extent_indices(&self, property: usize) -> Vec<usize> {
        (0..self.object_count())
            .filter(|&i| self.incidence[i][property])
            .collect()
    }

    /// Objects possessing the property (K_v).
    pub fn extent(&self, property_id: &str) -> Result<ExtentSet, ContextError> {
        let col = self.property_position(property_id)?;
        Ok(ExtentSet {
            property_id: property_id.to_string(),
            object_ids: self
                .extent_indices(col)
                .into_iter()
                .map(|i| self.object_ids[i].clone())
                .collect(),
        })
    }

    /// Binary partition of K by property possession: (K⁺, K⁻) with
    /// K⁺ = extent(p).
    pub fn partition_by(
        &self,
        property_id: &str,
    ) -> Result<(ExtentSet, ExtentSet), ContextError> {
        let k_plus = self.extent(property_id)?;
        let k_minus = ExtentSet {
            property_id: property_id.to_string(),
            object_ids: self
                .object_ids
                .iter()
                .filter(|id| !k_plus.object_ids.contains(*id))
                .cloned()
                .collect(),
        };
        Ok((k_plus, k_minus))
    }

    /// F(·) keyed by object id, for entropy over arbitrary extents.
    pub fn counts_table(&self) -> BTreeMap<String, f64> {
        self.object_ids
            .iter()
            .cloned()
            .zip(self.counts.iter().copied())
            .collect()
    }

    /// Text dump: header row of property ids, one `1`/`0` row per object.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("object");
        for p in &self.property_ids {
            out.push('\t');
            out.push_str(p);
        }
        out.push('\n');
        for (i, id) in self.object_ids.iter().enumerate() {
            out.push_str(id);
            for j in 0..self.property_ids.len() {
                out.push('\t');
                out.push(if self.incidence[i][j] { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}
