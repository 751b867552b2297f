//! Importer for a Turtle subset sufficient for real ontology snapshots.
//!
//! Supported syntax: `@prefix` directives, IRIs, prefixed names, the `a`
//! keyword, string/number/boolean literals (datatype and language tags are
//! parsed and dropped), predicate lists with `;`, object lists with `,`,
//! and `#` comments.
//!
//! Recognized predicates:
//! * `rdf:type` — classifies the subject (etype, property, or entity)
//! * `rdfs:subClassOf` — etype hierarchy edge
//! * `rdfs:domain` — associates the subject property with the object etype
//! * `rdfs:label` — human-readable label for any resource
//! * any *declared* property — property assertion on the subject
//!
//! Triples with any other predicate are ignored and counted in the parse
//! report. Labels default to the IRI local name.

use std::collections::{BTreeMap, BTreeSet};

use super::{Entity, Etype, Ontology, OntologyBuilder, OntologyError, ParseReport, Property};

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const RDF_PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
const RDFS_SUBCLASS: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Resource(String),
    Literal(String),
}

#[derive(Debug, Clone)]
struct Triple {
    subject: String,
    predicate: String,
    object: Node,
}

/// Parses the Turtle subset into a validated ontology plus a report with
/// the count of ignored triples.
pub fn parse(text: &str) -> Result<(Ontology, ParseReport), OntologyError> {
    let triples = TurtleReader::new(text).read_all()?;

    let mut etypes: BTreeSet<String> = BTreeSet::new();
    let mut properties: BTreeSet<String> = BTreeSet::new();
    let mut labels: BTreeMap<String, String> = BTreeMap::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut domain_assoc: Vec<(String, String)> = Vec::new(); // (property, etype)
    let mut type_assertions: Vec<(String, String)> = Vec::new(); // (subject, object)
    let mut report = ParseReport::default();

    // First sweep: declarations.
    for t in &triples {
        match t.predicate.as_str() {
            RDFS_SUBCLASS => {
                if let Node::Resource(obj) = &t.object {
                    etypes.insert(t.subject.clone());
                    etypes.insert(obj.clone());
                    edges.push((t.subject.clone(), obj.clone()));
                } else {
                    report.ignored_triples += 1;
                }
            }
            RDFS_DOMAIN => {
                if let Node::Resource(obj) = &t.object {
                    properties.insert(t.subject.clone());
                    etypes.insert(obj.clone());
                    domain_assoc.push((t.subject.clone(), obj.clone()));
                } else {
                    report.ignored_triples += 1;
                }
            }
            RDF_TYPE => match &t.object {
                Node::Resource(obj) => match obj.as_str() {
                    OWL_CLASS | RDFS_CLASS => {
                        etypes.insert(t.subject.clone());
                    }
                    OWL_OBJECT_PROPERTY | OWL_DATATYPE_PROPERTY | RDF_PROPERTY => {
                        properties.insert(t.subject.clone());
                    }
                    _ => {
                        etypes.insert(obj.clone());
                        type_assertions.push((t.subject.clone(), obj.clone()));
                    }
                },
                Node::Literal(_) => report.ignored_triples += 1,
            },
            RDFS_LABEL => {
                if let Node::Literal(l) = &t.object {
                    labels.insert(t.subject.clone(), l.clone());
                } else {
                    report.ignored_triples += 1;
                }
            }
            _ => {}
        }
    }

    // Second sweep: property assertions and unknown predicates.
    let mut etype_props: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut entity_props: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut entity_types: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (subject, object) in type_assertions {
        if etypes.contains(&subject) || properties.contains(&subject) {
            // A declared etype/property typed with a non-meta class is
            // outside the subset.
            report.ignored_triples += 1;
        } else {
            entity_types.entry(subject).or_default().insert(object);
        }
    }
    for (prop, etype) in domain_assoc {
        etype_props.entry(etype).or_default().insert(prop);
    }
    for t in &triples {
        match t.predicate.as_str() {
            RDF_TYPE | RDFS_SUBCLASS | RDFS_DOMAIN | RDFS_LABEL => {}
            p if properties.contains(p) => {
                if etypes.contains(&t.subject) {
                    etype_props
                        .entry(t.subject.clone())
                        .or_default()
                        .insert(p.to_string());
                } else {
                    entity_props
                        .entry(t.subject.clone())
                        .or_default()
                        .insert(p.to_string());
                }
            }
            _ => report.ignored_triples += 1,
        }
    }

    let label_of = |iri: &str| labels.get(iri).cloned().unwrap_or_else(|| local_name(iri));

    let mut builder = OntologyBuilder::new("turtle-import");
    for id in &properties {
        builder.properties.push(Property {
            id: id.clone(),
            label: label_of(id),
        });
    }
    for id in &etypes {
        builder.etypes.push(Etype {
            id: id.clone(),
            label: label_of(id),
            property_ids: etype_props.remove(id).unwrap_or_default(),
        });
    }
    let entity_ids: BTreeSet<String> = entity_types
        .keys()
        .chain(entity_props.keys())
        .cloned()
        .collect();
    for id in entity_ids {
        builder.entities.push(Entity {
            label: label_of(&id),
            etype_ids: entity_types.remove(&id).unwrap_or_default(),
            property_ids: entity_props.remove(&id).unwrap_or_default(),
            id,
        });
    }
    builder.subclass_edges = edges;
    let ontology = builder.build()?;
    Ok((ontology, report))
}

/// Fragment after `#`, else the last path segment.
fn local_name(iri: &str) -> String {
    let tail = iri.rsplit(['#', '/']).next().unwrap_or(iri);
    if tail.is_empty() {
        iri.to_string()
    } else {
        tail.to_string()
    }
}

struct TurtleReader<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: BTreeMap<String, String>,
    text: std::marker::PhantomData<&'a str>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Iri(String),
    Literal(String),
    A,
    Dot,
    Semicolon,
    Comma,
    PrefixDirective,
    PnameNs(String), // "ns:" in a @prefix directive
    Eof,
}

impl<'a> TurtleReader<'a> {
    fn new(text: &'a str) -> Self {
        TurtleReader {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            prefixes: BTreeMap::new(),
            text: std::marker::PhantomData,
        }
    }

    fn error(&self, message: impl Into<String>) -> OntologyError {
        OntologyError::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if ch == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(ch)
    }

    fn skip_trivia(&mut self) {
        while let Some(ch) = self.peek() {
            if ch.is_whitespace() {
                self.bump();
            } else if ch == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, OntologyError> {
        self.skip_trivia();
        let Some(ch) = self.peek() else {
            return Ok(Token::Eof);
        };
        match ch {
            '.' => {
                self.bump();
                Ok(Token::Dot)
            }
            ';' => {
                self.bump();
                Ok(Token::Semicolon)
            }
            ',' => {
                self.bump();
                Ok(Token::Comma)
            }
            '<' => {
                self.bump();
                let mut iri = String::new();
                loop {
                    match self.bump() {
                        Some('>') => break,
                        Some(c) if c == '\n' => return Err(self.error("unterminated IRI")),
                        Some(c) => iri.push(c),
                        None => return Err(self.error("unterminated IRI")),
                    }
                }
                Ok(Token::Iri(iri))
            }
            '"' => {
                self.bump();
                let mut lit = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => lit.push('\n'),
                            Some('t') => lit.push('\t'),
                            Some(c) => lit.push(c),
                            None => return Err(self.error("unterminated literal")),
                        },
                        Some(c) => lit.push(c),
                        None => return Err(self.error("unterminated literal")),
                    }
                }
                // optional @lang or ^^datatype, consumed and dropped
                if self.peek() == Some('@') {
                    self.bump();
                    while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '-') {
                        self.bump();
                    }
                } else if self.peek() == Some('^') {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.error("expected ^^ before datatype"));
                    }
                    match self.next_token()? {
                        Token::Iri(_) => {}
                        other => {
                            return Err(self.error(format!("expected datatype IRI, got {other:?}")))
                        }
                    }
                }
                Ok(Token::Literal(lit))
            }
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_alphabetic());
                if word == "prefix" {
                    Ok(Token::PrefixDirective)
                } else {
                    Err(self.error(format!("unsupported directive @{word}")))
                }
            }
            c if c.is_alphanumeric() || c == '_' || c == ':' || c == '+' || c == '-' => {
                let word = self.take_while(|c| {
                    c.is_alphanumeric() || matches!(c, '_' | ':' | '-' | '.' | '+' | '%' | '/')
                });
                // a trailing '.' is the statement terminator, not part of the name
                let (word, gave_back) = match word.strip_suffix('.') {
                    Some(w) => (w.to_string(), true),
                    None => (word, false),
                };
                if gave_back {
                    self.pos -= 1;
                    self.column = self.column.saturating_sub(1);
                }
                if word == "a" {
                    return Ok(Token::A);
                }
                if word == "true" || word == "false" || word.parse::<f64>().is_ok() {
                    return Ok(Token::Literal(word));
                }
                if let Some(colon) = word.find(':') {
                    let (ns, local) = word.split_at(colon);
                    let local = &local[1..];
                    if local.is_empty() {
                        return Ok(Token::PnameNs(ns.to_string()));
                    }
                    let base = self
                        .prefixes
                        .get(ns)
                        .ok_or_else(|| self.error(format!("undeclared prefix {ns:?}")))?;
                    return Ok(Token::Iri(format!("{base}{local}")));
                }
                Err(self.error(format!("unexpected token {word:?}")))
            }
            other => Err(self.error(format!("unexpected character {other:?}"))),
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if pred(c) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn expect_resource(&mut self) -> Result<String, OntologyError> {
        match self.next_token()? {
            Token::Iri(iri) => Ok(iri),
            other => Err(self.error(format!("expected IRI or prefixed name, got {other:?}"))),
        }
    }

    fn read_all(mut self) -> Result<Vec<Triple>, OntologyError> {
        // rdf/rdfs/owl prefixes are predeclared for convenience; files may
        // redeclare them.
        self.prefixes.insert(
            "rdf".into(),
            "http://www.w3.org/1999/02/22-rdf-syntax-ns#".into(),
        );
        self.prefixes
            .insert("rdfs".into(), "http://www.w3.org/2000/01/rdf-schema#".into());
        self.prefixes
            .insert("owl".into(), "http://www.w3.org/2002/07/owl#".into());

        let mut triples = Vec::new();
        loop {
            let token = self.next_token()?;
            match token {
                Token::Eof => break,
                Token::PrefixDirective => {
                    let ns = match self.next_token()? {
                        Token::PnameNs(ns) => ns,
                        other => {
                            return Err(self.error(format!("expected prefix name, got {other:?}")))
                        }
                    };
                    let iri = match self.next_token()? {
                        Token::Iri(iri) => iri,
                        other => {
                            return Err(self.error(format!("expected prefix IRI, got {other:?}")))
                        }
                    };
                    if self.next_token()? != Token::Dot {
                        return Err(self.error("expected '.' after @prefix directive"));
                    }
                    self.prefixes.insert(ns, iri);
                }
                Token::Iri(subject) => {
                    self.read_predicate_object_list(&subject, &mut triples)?;
                }
                other => return Err(self.error(format!("expected subject, got {other:?}"))),
            }
        }
        Ok(triples)
    }

    fn read_predicate_object_list(
        &mut self,
        subject: &str,
        triples: &mut Vec<Triple>,
    ) -> Result<(), OntologyError> {
        loop {
            let predicate = match self.next_token()? {
                Token::A => RDF_TYPE.to_string(),
                Token::Iri(iri) => iri,
                // trailing ';' before the statement terminator
                Token::Dot => return Ok(()),
                other => return Err(self.error(format!("expected predicate, got {other:?}"))),
            };
            loop {
                let object = match self.next_token()? {
                    Token::Iri(iri) => Node::Resource(iri),
                    Token::Literal(lit) => Node::Literal(lit),
                    other => return Err(self.error(format!("expected object, got {other:?}"))),
                };
                triples.push(Triple {
                    subject: subject.to_string(),
                    predicate: predicate.clone(),
                    object,
                });
                match self.next_token()? {
                    Token::Comma => continue,
                    Token::Semicolon => break,
                    Token::Dot => return Ok(()),
                    other => {
                        return Err(self.error(format!(
                            "expected ',', ';' or '.' after object, got {other:?}"
                        )))
                    }
                }
            }
        }
    }
}
