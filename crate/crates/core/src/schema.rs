//! Hierarchical indicator schema: main variables, their binary sub-variables,
//! and the slot table derived from them.
//!
//! Nothing downstream hard-codes a sub-variable count — n, n_i, and the id
//! space all come from the loaded schema. A main variable flagged `direct`
//! has no listed sub-variables; it is scored through a single synthetic item
//! carrying the main variable's own id, so the mean over items degenerates to
//! the binary value itself.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use regex::Regex;
use serde::Deserialize;

use crate::error::{Error, Result};

/// One binary scoreable item, optionally backed by evidence rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubVariable {
    pub id: String,
    pub name: String,
    /// Terms whose presence in the token stream suggests value 1.
    pub keywords: Vec<String>,
    /// Regular expressions matched against the normalized body.
    pub patterns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainVariable {
    pub id: String,
    pub name: String,
    /// Scored directly: `sub_variables` holds one synthetic item whose id is
    /// the main variable's own id.
    pub direct: bool,
    pub sub_variables: Vec<SubVariable>,
}

impl MainVariable {
    /// n_i: the number of scoreable items.
    pub fn item_count(&self) -> usize {
        self.sub_variables.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorSchema {
    pub main_variables: Vec<MainVariable>,
}

#[derive(Deserialize)]
struct SchemaFile {
    #[serde(rename = "main")]
    mains: Vec<MainEntry>,
}

#[derive(Deserialize)]
struct MainEntry {
    id: String,
    name: String,
    #[serde(default)]
    direct: bool,
    #[serde(default, rename = "sub")]
    subs: Vec<SubEntry>,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(default)]
    patterns: Vec<String>,
}

#[derive(Deserialize)]
struct SubEntry {
    id: String,
    name: String,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(default)]
    patterns: Vec<String>,
}

pub fn load_schema(path: impl AsRef<Path>) -> Result<IndicatorSchema> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_schema(&text).map_err(|e| match e {
        Error::SchemaInvalid { message } => Error::Parse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

pub fn parse_schema(text: &str) -> Result<IndicatorSchema> {
    let file: SchemaFile = toml::from_str(text).map_err(|e| Error::SchemaInvalid {
        message: e.to_string(),
    })?;
    let mut mains = Vec::with_capacity(file.mains.len());
    for entry in file.mains {
        let sub_variables = if entry.direct {
            if !entry.subs.is_empty() {
                return Err(Error::SchemaInvalid {
                    message: format!(
                        "main variable {:?} is direct but lists sub-variables",
                        entry.id
                    ),
                });
            }
            vec![SubVariable {
                id: entry.id.clone(),
                name: entry.name.clone(),
                keywords: entry.keywords,
                patterns: entry.patterns,
            }]
        } else {
            if !entry.keywords.is_empty() || !entry.patterns.is_empty() {
                return Err(Error::SchemaInvalid {
                    message: format!(
                        "main variable {:?} carries rules but is not direct",
                        entry.id
                    ),
                });
            }
            entry
                .subs
                .into_iter()
                .map(|s| SubVariable {
                    id: s.id,
                    name: s.name,
                    keywords: s.keywords,
                    patterns: s.patterns,
                })
                .collect()
        };
        mains.push(MainVariable {
            id: entry.id,
            name: entry.name,
            direct: entry.direct,
            sub_variables,
        });
    }
    let schema = IndicatorSchema {
        main_variables: mains,
    };
    schema.validate()?;
    Ok(schema)
}

/// The schema shipped with the crate: ten main variables with item counts
/// 6, 3, 5, 4, 5, 5, 5, 4, 5 and a tenth scored directly.
pub fn builtin_schema() -> IndicatorSchema {
    parse_schema(include_str!("../fixtures/schema/default.toml"))
        .expect("bundled schema is valid")
}

impl IndicatorSchema {
    pub fn validate(&self) -> Result<()> {
        if self.main_variables.is_empty() {
            return Err(Error::SchemaInvalid {
                message: "schema lists no main variables".into(),
            });
        }
        let mut ids: BTreeSet<&str> = BTreeSet::new();
        for main in &self.main_variables {
            if main.id.trim().is_empty() {
                return Err(Error::SchemaInvalid {
                    message: "main variable with blank id".into(),
                });
            }
            if !ids.insert(&main.id) {
                return Err(Error::SchemaDuplicateId {
                    id: main.id.clone(),
                });
            }
            if main.sub_variables.is_empty() {
                return Err(Error::SchemaEmptyMain {
                    id: main.id.clone(),
                });
            }
            for sub in &main.sub_variables {
                if sub.id.trim().is_empty() {
                    return Err(Error::SchemaInvalid {
                        message: format!("blank sub-variable id under {:?}", main.id),
                    });
                }
                // A direct variable's single item reuses the main id on
                // purpose; every other item id must be fresh.
                if !(main.direct && sub.id == main.id) && !ids.insert(&sub.id) {
                    return Err(Error::SchemaDuplicateId { id: sub.id.clone() });
                }
                for pattern in &sub.patterns {
                    Regex::new(pattern).map_err(|e| Error::SchemaInvalidPattern {
                        id: sub.id.clone(),
                        message: e.to_string(),
                    })?;
                }
            }
        }
        Ok(())
    }

    pub fn main(&self, id: &str) -> Option<&MainVariable> {
        self.main_variables.iter().find(|m| m.id == id)
    }

    /// Every scoreable item id, in schema order.
    pub fn scoreable_ids(&self) -> Vec<&str> {
        self.main_variables
            .iter()
            .flat_map(|m| m.sub_variables.iter().map(|s| s.id.as_str()))
            .collect()
    }

    pub fn scoreable_count(&self) -> usize {
        self.main_variables.iter().map(|m| m.item_count()).sum()
    }
}

/// Slot table: one row per main variable, one labeled slot per item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiotTable {
    pub rows: Vec<MiotRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiotRow {
    pub main_id: String,
    pub slots: Vec<String>,
}

pub fn build_miot(schema: &IndicatorSchema) -> MiotTable {
    MiotTable {
        rows: schema
            .main_variables
            .iter()
            .map(|m| MiotRow {
                main_id: m.id.clone(),
                slots: m.sub_variables.iter().map(|s| s.id.clone()).collect(),
            })
            .collect(),
    }
}

impl MiotTable {
    /// Ragged CSV, one line per main variable: `main_id,slot,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.main_id);
            for slot in &row.slots {
                out.push(',');
                out.push_str(slot);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<MiotTable> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',').map(str::to_string);
            let main_id = fields.next().filter(|f| !f.is_empty()).ok_or_else(|| {
                Error::SchemaInvalid {
                    message: format!("slot table line {}: missing main id", lineno + 1),
                }
            })?;
            let slots: Vec<String> = fields.collect();
            if slots.is_empty() {
                return Err(Error::SchemaInvalid {
                    message: format!("slot table line {}: row {:?} has no slots", lineno + 1, main_id),
                });
            }
            rows.push(MiotRow { main_id, slots });
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput { what: "slot table" });
        }
        Ok(MiotTable { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtin_matches_expected_shape() {
        let schema = builtin_schema();
        assert_eq!(schema.main_variables.len(), 10);
        let counts: Vec<usize> = schema
            .main_variables
            .iter()
            .map(|m| m.item_count())
            .collect();
        assert_eq!(counts, vec![6, 3, 5, 4, 5, 5, 5, 4, 5, 1]);
        assert_eq!(schema.scoreable_count(), 43);

        let last = &schema.main_variables[9];
        assert!(last.direct);
        assert_eq!(last.sub_variables[0].id, last.id);
        assert!(!schema.main_variables[0].direct);
    }

    #[test]
    fn scoreable_ids_in_schema_order() {
        let schema = builtin_schema();
        let ids = schema.scoreable_ids();
        assert_eq!(ids[0], "P11");
        assert_eq!(ids[5], "P16");
        assert_eq!(ids[6], "P21");
        assert_eq!(ids[42], "P10");
    }

    #[test]
    fn duplicate_sub_id_rejected() {
        let text = r#"
            [[main]]
            id = "P1"
            name = "A"
            [[main.sub]]
            id = "P11"
            name = "x"
            [[main.sub]]
            id = "P11"
            name = "y"
        "#;
        assert!(matches!(
            parse_schema(text),
            Err(Error::SchemaDuplicateId { id }) if id == "P11"
        ));
    }

    #[test]
    fn duplicate_across_mains_rejected() {
        let text = r#"
            [[main]]
            id = "P1"
            name = "A"
            [[main.sub]]
            id = "X"
            name = "x"
            [[main]]
            id = "P2"
            name = "B"
            [[main.sub]]
            id = "X"
            name = "y"
        "#;
        assert!(matches!(
            parse_schema(text),
            Err(Error::SchemaDuplicateId { id }) if id == "X"
        ));
    }

    #[test]
    fn minimal_schema_loads() {
        let text = r#"
            [[main]]
            id = "M"
            name = "Only"
            [[main.sub]]
            id = "M1"
            name = "one"
        "#;
        let schema = parse_schema(text).unwrap();
        assert_eq!(schema.main_variables.len(), 1);
        assert_eq!(schema.scoreable_count(), 1);
    }

    #[test]
    fn empty_main_rejected() {
        let text = r#"
            [[main]]
            id = "P1"
            name = "empty"
        "#;
        assert!(matches!(
            parse_schema(text),
            Err(Error::SchemaEmptyMain { id }) if id == "P1"
        ));
    }

    #[test]
    fn direct_with_subs_rejected() {
        let text = r#"
            [[main]]
            id = "P1"
            name = "bad"
            direct = true
            [[main.sub]]
            id = "P11"
            name = "x"
        "#;
        assert!(matches!(parse_schema(text), Err(Error::SchemaInvalid { .. })));
    }

    #[test]
    fn bad_pattern_names_the_item() {
        let text = r#"
            [[main]]
            id = "P1"
            name = "A"
            [[main.sub]]
            id = "P11"
            name = "x"
            patterns = ["(unclosed"]
        "#;
        assert!(matches!(
            parse_schema(text),
            Err(Error::SchemaInvalidPattern { id, .. }) if id == "P11"
        ));
    }

    #[test]
    fn rules_parse_on_subs_and_direct_mains() {
        let text = r#"
            [[main]]
            id = "P1"
            name = "A"
            [[main.sub]]
            id = "P11"
            name = "x"
            keywords = ["debt risk"]
            patterns = ["risk\\b"]
            [[main]]
            id = "P2"
            name = "B"
            direct = true
            keywords = ["bond"]
        "#;
        let schema = parse_schema(text).unwrap();
        assert_eq!(schema.main_variables[0].sub_variables[0].keywords, vec!["debt risk"]);
        assert_eq!(schema.main_variables[1].sub_variables[0].keywords, vec!["bond"]);
    }

    #[test]
    fn miot_shape_follows_schema() {
        let miot = build_miot(&builtin_schema());
        assert_eq!(miot.rows.len(), 10);
        let counts: Vec<usize> = miot.rows.iter().map(|r| r.slots.len()).collect();
        assert_eq!(counts, vec![6, 3, 5, 4, 5, 5, 5, 4, 5, 1]);
        assert_eq!(miot.rows[0].slots[0], "P11");
        assert_eq!(miot.rows[9].slots[0], "P10");
    }

    #[test]
    fn miot_minimal() {
        let schema = parse_schema(
            r#"
            [[main]]
            id = "M"
            name = "Only"
            [[main.sub]]
            id = "M1"
            name = "one"
        "#,
        )
        .unwrap();
        let miot = build_miot(&schema);
        assert_eq!(miot.rows.len(), 1);
        assert_eq!(miot.rows[0].slots, vec!["M1"]);
        assert_eq!(miot.to_csv(), "M,M1\n");
    }

    #[test]
    fn miot_round_trips_random_schemas() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in 0..10 {
            let mains: Vec<MainVariable> = (0..4)
                .map(|i| {
                    let n = rng.gen_range(1..7);
                    MainVariable {
                        id: format!("V{case}{i}"),
                        name: format!("variable {i}"),
                        direct: false,
                        sub_variables: (0..n)
                            .map(|j| SubVariable {
                                id: format!("V{case}{i}{j}"),
                                name: format!("item {j}"),
                                keywords: vec![],
                                patterns: vec![],
                            })
                            .collect(),
                    }
                })
                .collect();
            let schema = IndicatorSchema {
                main_variables: mains,
            };
            schema.validate().unwrap();
            let miot = build_miot(&schema);
            let parsed = MiotTable::from_csv(&miot.to_csv()).unwrap();
            assert_eq!(parsed, miot);
        }
    }

    #[test]
    fn miot_from_csv_rejects_garbage() {
        assert!(MiotTable::from_csv("").is_err());
        assert!(MiotTable::from_csv("P1\n").is_err());
        assert!(MiotTable::from_csv(",P11\n").is_err());
    }

    #[test]
    fn load_schema_reports_path_on_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("schema.toml");
        std::fs::write(&path, "not toml [[").unwrap();
        match load_schema(&path) {
            Err(Error::Parse { path: p, .. }) => {
                assert!(p.to_string_lossy().contains("schema.toml"))
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
