//! Binary sub-variable scoring: rule-assisted suggestion plus authoritative
//! manual overrides, with provenance kept per value.
//!
//! Suggestion only ever asserts presence — a keyword hit in the token stream
//! or a pattern hit in the normalized body sets an item to 1. Everything else
//! stays 0 with `default-zero` provenance, and manual entries override both.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use regex::Regex;
use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{fold, PolicyDocument, TokenStream};
use crate::error::{Error, Result};
use crate::schema::IndicatorSchema;

/// Where a scorecard value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Manual,
    /// The evidence rule that fired, e.g. `kw:debt risk` or `re:0`.
    Rule(String),
    DefaultZero,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Manual => write!(f, "manual"),
            Source::Rule(id) => write!(f, "rule:{id}"),
            Source::DefaultZero => write!(f, "default-zero"),
        }
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "manual" => Ok(Source::Manual),
            "default-zero" => Ok(Source::DefaultZero),
            _ => match s.strip_prefix("rule:") {
                Some(id) if !id.is_empty() => Ok(Source::Rule(id.to_string())),
                _ => Err(format!("unrecognized source {s:?}")),
            },
        }
    }
}

/// Per-document binary values for every scoreable item in the schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scorecard {
    pub doc_id: String,
    pub values: BTreeMap<String, bool>,
    pub provenance: BTreeMap<String, Source>,
}

impl Scorecard {
    /// Ids required by the schema but absent here, in schema order.
    pub fn missing_items(&self, schema: &IndicatorSchema) -> Vec<String> {
        schema
            .scoreable_ids()
            .iter()
            .filter(|id| !self.values.contains_key(**id))
            .map(|id| id.to_string())
            .collect()
    }

    pub fn ensure_complete(&self, schema: &IndicatorSchema) -> Result<()> {
        let missing = self.missing_items(schema);
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::IncompleteScorecard {
                doc_id: self.doc_id.clone(),
                missing,
            })
        }
    }
}

/// One manual override row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverrideEntry {
    pub doc_id: String,
    pub subvar_id: String,
    pub value: bool,
}

/// Evidence-rule suggestion: an item is 1 iff one of its keywords occurs as a
/// token or one of its patterns matches the body. Matching is case-folded for
/// keywords; patterns see the normalized body as-is.
pub fn suggest_scores(
    doc: &PolicyDocument,
    stream: &TokenStream,
    schema: &IndicatorSchema,
) -> Result<Scorecard> {
    let tokens: BTreeSet<String> = stream.tokens.iter().map(|t| fold(t)).collect();
    let mut values = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for main in &schema.main_variables {
        for sub in &main.sub_variables {
            let mut hit: Option<Source> = None;
            for kw in &sub.keywords {
                if tokens.contains(&fold(kw)) {
                    hit = Some(Source::Rule(format!("kw:{kw}")));
                    break;
                }
            }
            if hit.is_none() {
                for (i, pattern) in sub.patterns.iter().enumerate() {
                    let re = Regex::new(pattern).map_err(|e| Error::SchemaInvalidPattern {
                        id: sub.id.clone(),
                        message: e.to_string(),
                    })?;
                    if re.is_match(&doc.body) {
                        hit = Some(Source::Rule(format!("re:{i}")));
                        break;
                    }
                }
            }
            match hit {
                Some(source) => {
                    values.insert(sub.id.clone(), true);
                    provenance.insert(sub.id.clone(), source);
                }
                None => {
                    values.insert(sub.id.clone(), false);
                    provenance.insert(sub.id.clone(), Source::DefaultZero);
                }
            }
        }
    }
    Ok(Scorecard {
        doc_id: doc.id.clone(),
        values,
        provenance,
    })
}

/// Apply manual overrides on top of a suggested scorecard. Entries for other
/// documents are ignored; entries naming unknown sub-variables error.
pub fn resolve_scorecard(
    suggested: &Scorecard,
    overrides: &[OverrideEntry],
    schema: &IndicatorSchema,
) -> Result<Scorecard> {
    let known: BTreeSet<&str> = schema.scoreable_ids().into_iter().collect();
    let mut card = suggested.clone();
    for entry in overrides {
        if entry.doc_id != card.doc_id {
            continue;
        }
        if !known.contains(entry.subvar_id.as_str()) {
            return Err(Error::UnknownSubVariable {
                id: entry.subvar_id.clone(),
            });
        }
        card.values.insert(entry.subvar_id.clone(), entry.value);
        card.provenance
            .insert(entry.subvar_id.clone(), Source::Manual);
    }
    Ok(card)
}

/// Scorecard CSV, columns exactly `doc_id,subvar_id,value,source`. Documents
/// appear in input order, items in schema order where written by this crate.
pub fn write_scorecards_csv(cards: &[Scorecard], schema: &IndicatorSchema) -> String {
    let mut out = String::from("doc_id,subvar_id,value,source\n");
    for card in cards {
        for id in schema.scoreable_ids() {
            if let Some(&value) = card.values.get(id) {
                let source = card
                    .provenance
                    .get(id)
                    .cloned()
                    .unwrap_or(Source::Manual);
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    card.doc_id,
                    id,
                    if value { 1 } else { 0 },
                    source
                ));
            }
        }
    }
    out
}

/// Parse scorecards from CSV text. Rows group by doc_id in first-appearance
/// order; values must be 0/1; duplicate (doc, item) rows are rejected.
pub fn parse_scorecards_csv(text: &str, schema: &IndicatorSchema) -> Result<Vec<Scorecard>> {
    let known: BTreeSet<&str> = schema.scoreable_ids().into_iter().collect();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut order: Vec<String> = Vec::new();
    let mut cards: BTreeMap<String, Scorecard> = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            path: "<scorecards>".into(),
            message: e.to_string(),
        })?;
        if record.len() != 4 {
            return Err(Error::Parse {
                path: "<scorecards>".into(),
                message: format!("row {}: expected 4 columns, got {}", i + 2, record.len()),
            });
        }
        let (doc_id, subvar_id, value_s, source_s) =
            (&record[0], &record[1], &record[2], &record[3]);
        if !known.contains(subvar_id) {
            return Err(Error::UnknownSubVariable {
                id: subvar_id.to_string(),
            });
        }
        let value = match value_s {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::InvalidScoreValue {
                    doc_id: doc_id.to_string(),
                    subvar_id: subvar_id.to_string(),
                    value: other.to_string(),
                })
            }
        };
        let source = Source::from_str(source_s).map_err(|message| Error::Parse {
            path: "<scorecards>".into(),
            message: format!("row {}: {message}", i + 2),
        })?;
        let card = cards.entry(doc_id.to_string()).or_insert_with(|| {
            order.push(doc_id.to_string());
            Scorecard {
                doc_id: doc_id.to_string(),
                values: BTreeMap::new(),
                provenance: BTreeMap::new(),
            }
        });
        if card.values.contains_key(subvar_id) {
            return Err(Error::Parse {
                path: "<scorecards>".into(),
                message: format!("row {}: duplicate entry {doc_id}/{subvar_id}", i + 2),
            });
        }
        card.values.insert(subvar_id.to_string(), value);
        card.provenance.insert(subvar_id.to_string(), source);
    }
    Ok(order.into_iter().map(|id| cards.remove(&id).unwrap()).collect())
}

pub fn load_scorecards(path: impl AsRef<Path>, schema: &IndicatorSchema) -> Result<Vec<Scorecard>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scorecards_csv(&text, schema).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

/// Parse a manual override CSV, columns `doc_id,subvar_id,value`.
pub fn parse_overrides_csv(text: &str) -> Result<Vec<OverrideEntry>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            path: "<overrides>".into(),
            message: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(Error::Parse {
                path: "<overrides>".into(),
                message: format!("row {}: expected 3 columns, got {}", i + 2, record.len()),
            });
        }
        let value = match &record[2] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::InvalidScoreValue {
                    doc_id: record[0].to_string(),
                    subvar_id: record[1].to_string(),
                    value: other.to_string(),
                })
            }
        };
        out.push(OverrideEntry {
            doc_id: record[0].to_string(),
            subvar_id: record[1].to_string(),
            value,
        });
    }
    Ok(out)
}

pub fn load_overrides(path: impl AsRef<Path>) -> Result<Vec<OverrideEntry>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_overrides_csv(&text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}
