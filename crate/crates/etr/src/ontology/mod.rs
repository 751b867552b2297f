//! Ontology domain model: etypes, entities, properties, the is-a hierarchy,
//! and the structural queries the rest of the pipeline depends on.
//!
//! Two input formats are supported: the canonical TOML document
//! ([`canonical`]) and a Turtle subset ([`turtle`]). Both produce a
//! validated, immutable [`Ontology`].

pub mod canonical;
pub mod turtle;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Supported input formats for [`parse_ontology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Canonical,
    TurtleSubset,
}

/// Which objects an operation ranges over: etypes or entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Schema,
    Instance,
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::Schema => write!(f, "schema"),
            Level::Instance => write!(f, "instance"),
        }
    }
}

/// A class/concept in the ontology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Etype {
    pub id: String,
    pub label: String,
    pub property_ids: BTreeSet<String>,
}

/// An individual asserted to belong to zero or more etypes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub id: String,
    pub label: String,
    pub etype_ids: BTreeSet<String>,
    pub property_ids: BTreeSet<String>,
}

/// An attribute or relation used to describe etypes and entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub id: String,
    pub label: String,
}

/// Counters accumulated while importing an ontology.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    /// Triples whose predicate is outside the supported subset.
    pub ignored_triples: usize,
}

/// A validated, immutable ontology.
///
/// Construction goes through [`OntologyBuilder`], which checks that the
/// subclass edges form a DAG, that every reference resolves, and that ids
/// are unique; layers and roots are derived at that point.
#[derive(Debug, Clone)]
pub struct Ontology {
    id: String,
    etypes: BTreeMap<String, Etype>,
    entities: BTreeMap<String, Entity>,
    properties: BTreeMap<String, Property>,
    subclass_edges: BTreeSet<(String, String)>,
    roots: BTreeSet<String>,
    layers: BTreeMap<String, u32>,
    max_depth: u32,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        // Derived fields follow from the core collections.
        self.id == other.id
            && self.etypes == other.etypes
            && self.entities == other.entities
            && self.properties == other.properties
            && self.subclass_edges == other.subclass_edges
    }
}

impl Ontology {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn etypes(&self) -> impl Iterator<Item = &Etype> {
        self.etypes.values()
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &Property> {
        self.properties.values()
    }

    pub fn etype(&self, id: &str) -> Option<&Etype> {
        self.etypes.get(id)
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.get(id)
    }

    pub fn property(&self, id: &str) -> Option<&Property> {
        self.properties.get(id)
    }

    pub fn etype_count(&self) -> usize {
        self.etypes.len()
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn property_count(&self) -> usize {
        self.properties.len()
    }

    /// Etype ids with no parent in the subclass hierarchy.
    pub fn roots(&self) -> &BTreeSet<String> {
        &self.roots
    }

    pub fn subclass_edges(&self) -> &BTreeSet<(String, String)> {
        &self.subclass_edges
    }

    /// Depth of the deepest etype; 1 for a flat ontology, 0 only when there
    /// are no etypes at all.
    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    /// Hierarchy layer of an etype: 1 for roots, and one more than the
    /// deepest parent along the longest path from any root otherwise.
    pub fn layer_of(&self, etype_id: &str) -> Result<u32, OntologyError> {
        self.layers
            .get(etype_id)
            .copied()
            .ok_or_else(|| OntologyError::UnknownId(etype_id.to_string()))
    }

    /// Direct parent etype ids of an etype.
    pub fn parents_of(&self, etype_id: &str) -> BTreeSet<&str> {
        self.subclass_edges
            .iter()
            .filter(|(c, _)| c == etype_id)
            .map(|(_, p)| p.as_str())
            .collect()
    }

    /// Property ids of an object at the requested level.
    ///
    /// Schema level resolves etypes, instance level resolves entities.
    /// `inherit` unions an etype's own properties with those of all its
    /// ancestors; it has no effect at instance level.
    pub fn props_of(
        &self,
        object_id: &str,
        level: Level,
        inherit: bool,
    ) -> Result<BTreeSet<String>, OntologyError> {
        match level {
            Level::Schema => {
                let etype = self
                    .etypes
                    .get(object_id)
                    .ok_or_else(|| OntologyError::UnknownId(object_id.to_string()))?;
                let mut props = etype.property_ids.clone();
                if inherit {
                    for ancestor in self.ancestors_of(object_id) {
                        props.extend(self.etypes[&ancestor].property_ids.iter().cloned());
                    }
                }
                Ok(props)
            }
            Level::Instance => self
                .entities
                .get(object_id)
                .map(|e| e.property_ids.clone())
                .ok_or_else(|| OntologyError::UnknownId(object_id.to_string())),
        }
    }

    /// All strict ancestors of an etype (transitive closure over parents).
    pub fn ancestors_of(&self, etype_id: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = self
            .parents_of(etype_id)
            .into_iter()
            .map(str::to_string)
            .collect();
        while let Some(p) = stack.pop() {
            if seen.insert(p.clone()) {
                stack.extend(self.parents_of(&p).into_iter().map(str::to_string));
            }
        }
        seen
    }

    /// Number of entities asserting this etype.
    ///
    /// Counts direct type assertions; with `rollup`, assertions of any
    /// descendant etype count as well (still one per entity per etype).
    pub fn instance_count(&self, etype_id: &str, rollup: bool) -> Result<usize, OntologyError> {
        if !self.etypes.contains_key(etype_id) {
            return Err(OntologyError::UnknownId(etype_id.to_string()));
        }
        let count = if rollup {
            let mut group: BTreeSet<&str> = BTreeSet::new();
            group.insert(etype_id);
            for (child, _) in &self.subclass_edges {
                if self.ancestors_of(child).contains(etype_id) {
                    group.insert(child);
                }
            }
            self.entities
                .values()
                .filter(|e| e.etype_ids.iter().any(|t| group.contains(t.as_str())))
                .count()
        } else {
            self.entities
                .values()
                .filter(|e| e.etype_ids.contains(etype_id))
                .count()
        };
        Ok(count)
    }

    /// Total number of (entity, etype) assertions.
    pub fn assertion_count(&self) -> usize {
        self.entities.values().map(|e| e.etype_ids.len()).sum()
    }
}

/// Mutable accumulator that becomes an [`Ontology`] after validation.
#[derive(Debug, Default)]
pub struct OntologyBuilder {
    pub id: String,
    pub etypes: Vec<Etype>,
    pub entities: Vec<Entity>,
    pub properties: Vec<Property>,
    pub subclass_edges: Vec<(String, String)>,
}

impl OntologyBuilder {
    pub fn new(id: &str) -> Self {
        OntologyBuilder {
            id: id.to_string(),
            ..Default::default()
        }
    }

    pub fn build(self) -> Result<Ontology, OntologyError> {
        let mut etypes = BTreeMap::new();
        for e in self.etypes {
            if e.id.is_empty() {
                return Err(OntologyError::Validation("empty etype id".into()));
            }
            let id = e.id.clone();
            if etypes.insert(id.clone(), e).is_some() {
                return Err(OntologyError::Validation(format!("duplicate etype id: {id}")));
            }
        }
        let mut properties = BTreeMap::new();
        for p in self.properties {
            if p.id.is_empty() {
                return Err(OntologyError::Validation("empty property id".into()));
            }
            if p.label.is_empty() {
                return Err(OntologyError::Validation(format!(
                    "property {} has an empty label",
                    p.id
                )));
            }
            if properties.insert(p.id.clone(), p).is_some() {
                return Err(OntologyError::Validation("duplicate property id".into()));
            }
        }
        let mut entities = BTreeMap::new();
        for e in self.entities {
            if e.id.is_empty() {
                return Err(OntologyError::Validation("empty entity id".into()));
            }
            if entities.insert(e.id.clone(), e).is_some() {
                return Err(OntologyError::Validation("duplicate entity id".into()));
            }
        }

        // Dangling references.
        for e in etypes.values() {
            for p in &e.property_ids {
                if !properties.contains_key(p) {
                    return Err(OntologyError::Validation(format!(
                        "etype {} references unknown property {p}",
                        e.id
                    )));
                }
            }
        }
        for en in entities.values() {
            for t in &en.etype_ids {
                if !etypes.contains_key(t) {
                    return Err(OntologyError::Validation(format!(
                        "entity {} references unknown etype {t}",
                        en.id
                    )));
                }
            }
            for p in &en.property_ids {
                if !properties.contains_key(p) {
                    return Err(OntologyError::Validation(format!(
                        "entity {} references unknown property {p}",
                        en.id
                    )));
                }
            }
        }
        let mut subclass_edges = BTreeSet::new();
        for (child, parent) in self.subclass_edges {
            if !etypes.contains_key(&child) || !etypes.contains_key(&parent) {
                return Err(OntologyError::Validation(format!(
                    "subclass edge ({child}, {parent}) references an unknown etype"
                )));
            }
            if child == parent {
                return Err(OntologyError::Validation(format!(
                    "hierarchy cycle: {child} is its own parent"
                )));
            }
            subclass_edges.insert((child, parent));
        }

        let layers = compute_layers(&etypes, &subclass_edges)?;
        let children: BTreeSet<&String> = subclass_edges.iter().map(|(c, _)| c).collect();
        let roots: BTreeSet<String> = etypes
            .keys()
            .filter(|id| !children.contains(id))
            .cloned()
            .collect();
        let max_depth = layers.values().copied().max().unwrap_or(0);

        Ok(Ontology {
            id: self.id,
            etypes,
            entities,
            properties,
            subclass_edges,
            roots,
            layers,
            max_depth,
        })
    }
}

/// Longest-path layers: roots at 1, layer(child) = 1 + max over parents.
/// Fails with a `Validation` error when the edges contain a cycle.
fn compute_layers(
    etypes: &BTreeMap<String, Etype>,
    edges: &BTreeSet<(String, String)>,
) -> Result<BTreeMap<String, u32>, OntologyError> {
    let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (child, parent) in edges {
        parents.entry(child).or_default().push(parent);
    }
    let mut layers: BTreeMap<String, u32> = BTreeMap::new();
    // Iterative DFS with an explicit in-progress set for cycle detection.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        InProgress,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    for start in etypes.keys() {
        if marks.get(start.as_str()) == Some(&Mark::Done) {
            continue;
        }
        let mut stack: Vec<(&str, bool)> = vec![(start, false)];
        while let Some((node, children_done)) = stack.pop() {
            if children_done {
                let layer = parents
                    .get(node)
                    .map(|ps| {
                        ps.iter()
                            .map(|p| layers[*p])
                            .max()
                            .expect("parents nonempty")
                            + 1
                    })
                    .unwrap_or(1);
                layers.insert(node.to_string(), layer);
                marks.insert(node, Mark::Done);
                continue;
            }
            match marks.get(node) {
                Some(Mark::Done) => continue,
                Some(Mark::InProgress) => {
                    return Err(OntologyError::Validation(format!(
                        "hierarchy cycle through etype {node}"
                    )));
                }
                None => {}
            }
            marks.insert(node, Mark::InProgress);
            stack.push((node, true));
            if let Some(ps) = parents.get(node) {
                for p in ps {
                    match marks.get(*p) {
                        Some(Mark::Done) => {}
                        Some(Mark::InProgress) => {
                            return Err(OntologyError::Validation(format!(
                                "hierarchy cycle through etype {p}"
                            )));
                        }
                        None => stack.push((p, false)),
                    }
                }
            }
        }
    }
    Ok(layers)
}

/// Parses and validates an ontology from one of the supported formats.
pub fn parse_ontology(
    source: &[u8],
    format: Format,
) -> Result<(Ontology, ParseReport), OntologyError> {
    let text = std::str::from_utf8(source).map_err(|e| OntologyError::Parse {
        line: 0,
        column: 0,
        message: format!("input is not valid UTF-8: {e}"),
    })?;
    match format {
        Format::Canonical => Ok((canonical::parse(text)?, ParseReport::default())),
        Format::TurtleSubset => turtle::parse(text),
    }
}
