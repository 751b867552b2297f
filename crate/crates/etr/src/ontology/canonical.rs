//! The canonical ontology exchange format: one TOML document.
//!
//! ```toml
//! format_version = 1
//! id = "conference"
//!
//! [[properties]]
//! id = "p_name"
//! label = "name"
//!
//! [[etypes]]
//! id = "et_person"
//! label = "Person"
//! properties = ["p_name"]
//! parents = []
//!
//! [[entities]]
//! id = "en_bob"
//! label = "Bob"
//! types = ["et_person"]
//! properties = ["p_name"]
//! ```
//!
//! `label` defaults to the id when omitted; `parents`, `types`, and
//! `properties` default to empty. Serialization sorts every collection by
//! id, so parse → serialize → parse is the identity on the model.

use serde::{Deserialize, Serialize};

use super::{Entity, Etype, Ontology, OntologyBuilder, OntologyError, Property};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    format_version: u32,
    id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<PropertyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    etypes: Vec<EtypeDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    entities: Vec<EntityDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PropertyDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EtypeDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parents: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntityDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    types: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<String>,
}

/// Parses and validates a canonical document.
pub fn parse(text: &str) -> Result<Ontology, OntologyError> {
    let doc: Document = toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|span| position_of(text, span.start))
            .unwrap_or((0, 0));
        OntologyError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(OntologyError::Validation(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            doc.format_version
        )));
    }
    let mut builder = OntologyBuilder::new(&doc.id);
    for p in doc.properties {
        let label = p.label.unwrap_or_else(|| p.id.clone());
        builder.properties.push(Property { id: p.id, label });
    }
    for e in doc.etypes {
        let label = e.label.unwrap_or_else(|| e.id.clone());
        for parent in e.parents {
            builder.subclass_edges.push((e.id.clone(), parent));
        }
        builder.etypes.push(Etype {
            id: e.id,
            label,
            property_ids: e.properties.into_iter().collect(),
        });
    }
    for en in doc.entities {
        let label = en.label.unwrap_or_else(|| en.id.clone());
        builder.entities.push(Entity {
            id: en.id,
            label,
            etype_ids: en.types.into_iter().collect(),
            property_ids: en.properties.into_iter().collect(),
        });
    }
    builder.build()
}

/// Serializes an ontology back to the canonical document, deterministically.
pub fn serialize(ontology: &Ontology) -> String {
    let doc = Document {
        format_version: FORMAT_VERSION,
        id: ontology.id().to_string(),
        properties: ontology
            .properties()
            .map(|p| PropertyDoc {
                id: p.id.clone(),
                label: Some(p.label.clone()),
            })
            .collect(),
        etypes: ontology
            .etypes()
            .map(|e| EtypeDoc {
                id: e.id.clone(),
                label: Some(e.label.clone()),
                properties: e.property_ids.iter().cloned().collect(),
                parents: ontology
                    .parents_of(&e.id)
                    .into_iter()
                    .map(str::to_string)
                    .collect(),
            })
            .collect(),
        entities: ontology
            .entities()
            .map(|en| EntityDoc {
                id: en.id.clone(),
                label: Some(en.label.clone()),
                types: en.etype_ids.iter().cloned().collect(),
                properties: en.property_ids.iter().cloned().collect(),
            })
            .collect(),
    };
    toml::to_string(&doc).expect("canonical document serializes")
}

fn position_of(text: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut column = 1;
    for (i, ch) in text.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::Level;

    const SMALL: &str = r#"
format_version = 1
id = "tiny"

[[properties]]
id = "p_name"
label = "name"

[[etypes]]
id = "et_person"
label = "Person"
properties = ["p_name"]
"#;

    #[test]
    fn parses_single_etype() {
        let o = parse(SMALL).unwrap();
        assert_eq!(o.etype_count(), 1);
        assert_eq!(o.layer_of("et_person").unwrap(), 1);
        assert_eq!(o.etype("et_person").unwrap().label, "Person");
    }

    #[test]
    fn parses_edge_and_layers() {
        let text = r#"
format_version = 1
id = "two"

[[etypes]]
id = "person"

[[etypes]]
id = "athlete"
parents = ["person"]
"#;
        let o = parse(text).unwrap();
        assert_eq!(o.layer_of("athlete").unwrap(), 2);
        assert_eq!(o.layer_of("person").unwrap(), 1);
    }

    #[test]
    fn cycle_reported_as_validation_error() {
        let text = r#"
format_version = 1
id = "cyclic"

[[etypes]]
id = "a"
parents = ["b"]

[[etypes]]
id = "b"
parents = ["a"]
"#;
        let err = parse(text).unwrap_err();
        assert!(matches!(err, OntologyError::Validation(m) if m.contains("cycle")));
    }

    #[test]
    fn malformed_toml_reports_position() {
        let err = parse("format_version = 1\nid = \"x\"\n[[etypes\n").unwrap_err();
        match err {
            OntologyError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_version_rejected() {
        let err = parse("format_version = 99\nid = \"x\"\n").unwrap_err();
        assert!(matches!(err, OntologyError::Validation(_)));
    }

    #[test]
    fn round_trip_is_identity() {
        let text = r#"
format_version = 1
id = "rt"

[[properties]]
id = "p1"

[[properties]]
id = "p2"
label = "fancy label"

[[etypes]]
id = "a"
properties = ["p1", "p2"]

[[etypes]]
id = "b"
parents = ["a"]
properties = ["p2"]

[[entities]]
id = "x"
types = ["b"]
properties = ["p1"]
"#;
        let o = parse(text).unwrap();
        let serialized = serialize(&o);
        let o2 = parse(&serialized).unwrap();
        assert_eq!(o, o2);
        assert_eq!(serialize(&o2), serialized);
        assert_eq!(o2.props_of("x", Level::Instance, false).unwrap().len(), 1);
    }
}
