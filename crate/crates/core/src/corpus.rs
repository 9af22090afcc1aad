//! Corpus loading, text normalization, and dictionary-assisted segmentation.
//!
//! A corpus is described by a TOML manifest listing one `[[document]]` record
//! per policy text. Bodies live in separate UTF-8 plain-text files so fixtures
//! stay diffable. Segmentation is greedy longest match against a user
//! dictionary, with alphanumeric-run splitting for spans no dictionary term
//! covers.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::Deserialize;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// One policy document with its manifest metadata and normalized body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyDocument {
    pub id: String,
    pub title: String,
    pub issuer: String,
    pub release_date: NaiveDate,
    pub goal: String,
    /// Body text after [`normalize`]; never empty.
    pub body: String,
}

/// Ordered token sequence for one document, stopwords removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub doc_id: String,
    pub tokens: Vec<String>,
}

/// Dictionary of terms for longest-match segmentation.
///
/// Terms are compared after case folding; matches emit the term's canonical
/// spelling as written in the dictionary. When two spellings fold to the same
/// key the lexicographically smallest spelling wins, so the dictionary is
/// independent of insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    canonical: BTreeMap<String, String>,
    max_chars: usize,
}

impl Dictionary {
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut dict = Dictionary::default();
        for term in terms {
            let term = term.as_ref().trim();
            if term.is_empty() {
                continue;
            }
            let folded = fold(term);
            dict.max_chars = dict.max_chars.max(folded.chars().count());
            dict.canonical
                .entry(folded)
                .and_modify(|canon| {
                    if term < canon.as_str() {
                        *canon = term.to_string();
                    }
                })
                .or_insert_with(|| term.to_string());
        }
        dict
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(Self::from_terms(read_term_file(path)?))
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    /// Canonical spellings, sorted by folded key.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.canonical.values().map(|s| s.as_str())
    }

    /// Longest folded-key match starting at the beginning of `chars`.
    /// Returns (match length in chars, canonical spelling).
    fn longest_match(&self, chars: &[char]) -> Option<(usize, &str)> {
        let max = self.max_chars.min(chars.len());
        if max == 0 {
            return None;
        }
        let mut candidate: String = chars[..max].iter().collect();
        for len in (1..=max).rev() {
            if let Some(canon) = self.canonical.get(&candidate) {
                return Some((len, canon.as_str()));
            }
            candidate.pop();
        }
        None
    }
}

/// Stopword set; membership is tested on folded forms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordSet {
    folded: BTreeSet<String>,
}

impl StopwordSet {
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordSet {
            folded: terms
                .into_iter()
                .filter(|t| !t.as_ref().trim().is_empty())
                .map(|t| fold(t.as_ref().trim()))
                .collect(),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(Self::from_terms(read_term_file(path)?))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.folded.contains(&fold(token))
    }

    pub fn len(&self) -> usize {
        self.folded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folded.is_empty()
    }
}

/// An immutable document collection in manifest order.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<PolicyDocument>,
    pub dictionary: Dictionary,
    pub stopwords: StopwordSet,
}

impl Corpus {
    /// Load a corpus from a TOML manifest. Stopwords default to empty and the
    /// dictionary to none; attach them with [`Corpus::with_dictionary`] and
    /// [`Corpus::with_stopwords`].
    pub fn load(manifest_path: &Path) -> Result<Self> {
        load_corpus(manifest_path)
    }

    pub fn with_dictionary(mut self, dictionary: Dictionary) -> Self {
        self.dictionary = dictionary;
        self
    }

    pub fn with_stopwords(mut self, stopwords: StopwordSet) -> Self {
        self.stopwords = stopwords;
        self
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn document(&self, id: &str) -> Option<&PolicyDocument> {
        self.documents.iter().find(|d| d.id == id)
    }

    /// Segment every document. Runs per document in parallel; the output is
    /// merged back into manifest order so it is independent of scheduling.
    pub fn segment_all(&self) -> Vec<TokenStream> {
        self.documents
            .par_iter()
            .map(|doc| segment(doc, &self.dictionary, &self.stopwords))
            .collect()
    }
}

#[derive(Debug, Deserialize)]
struct ManifestFile {
    #[serde(default)]
    document: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct ManifestEntry {
    id: String,
    title: String,
    #[serde(default)]
    issuer: String,
    release_date: String,
    #[serde(default)]
    goal: String,
    body: String,
}

/// Load and validate a corpus manifest.
///
/// Entry-level problems (missing body file, bad date, duplicate id, empty
/// body) are collected across all entries and reported together, each tagged
/// with the offending entry id.
pub fn load_corpus(manifest_path: &Path) -> Result<Corpus> {
    let raw = std::fs::read_to_string(manifest_path).map_err(|source| Error::Io {
        path: manifest_path.to_path_buf(),
        source,
    })?;
    let manifest: ManifestFile = toml::from_str(&raw).map_err(|e| Error::Parse {
        path: manifest_path.to_path_buf(),
        message: e.to_string(),
    })?;
    if manifest.document.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut seen = BTreeSet::new();
    let mut errors: Vec<(String, String)> = Vec::new();
    let mut documents = Vec::with_capacity(manifest.document.len());

    for entry in &manifest.document {
        let id = entry.id.trim().to_string();
        if id.is_empty() {
            errors.push(("<blank>".into(), "empty document id".into()));
            continue;
        }
        if !seen.insert(id.clone()) {
            errors.push((id.clone(), format!("duplicate id {id:?}")));
            continue;
        }
        let release_date = match NaiveDate::parse_from_str(&entry.release_date, "%Y-%m-%d") {
            Ok(d) => d,
            Err(e) => {
                errors.push((id.clone(), format!("unparseable date {:?}: {e}", entry.release_date)));
                continue;
            }
        };
        let body_path = base.join(&entry.body);
        let raw_body = match std::fs::read(&body_path) {
            Ok(b) => b,
            Err(e) => {
                errors.push((id.clone(), format!("missing body file {}: {e}", body_path.display())));
                continue;
            }
        };
        let body = match normalize_bytes(&raw_body) {
            Ok(b) => b,
            Err(Error::InvalidUtf8 { offset, .. }) => {
                errors.push((
                    id.clone(),
                    format!("invalid UTF-8 at byte {offset} in {}", body_path.display()),
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        if body.is_empty() {
            errors.push((id.clone(), "empty body after normalization".into()));
            continue;
        }
        documents.push(PolicyDocument {
            id,
            title: entry.title.clone(),
            issuer: entry.issuer.clone(),
            release_date,
            goal: entry.goal.clone(),
            body,
        });
    }

    if !errors.is_empty() {
        return Err(Error::CorpusInvalid { errors });
    }
    Ok(Corpus {
        documents,
        dictionary: Dictionary::default(),
        stopwords: StopwordSet::default(),
    })
}

/// Read a one-term-per-line file. Blank lines and `#` comments are skipped.
pub fn read_term_file(path: &Path) -> Result<Vec<String>> {
    let raw = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = std::str::from_utf8(&raw).map_err(|e| Error::InvalidUtf8 {
        path: path.to_path_buf(),
        offset: e.valid_up_to(),
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

/// Normalize raw text: NFC composition, every whitespace run (including line
/// endings) collapsed to a single space, and boundary whitespace dropped.
/// Idempotent: `normalize(normalize(x)) == normalize(x)`.
pub fn normalize(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut in_ws = false;
    for ch in raw.chars().nfc() {
        if ch.is_whitespace() {
            in_ws = true;
        } else {
            if in_ws && !out.is_empty() {
                out.push(' ');
            }
            in_ws = false;
            out.push(ch);
        }
    }
    out
}

/// UTF-8 validate then [`normalize`]. Invalid bytes are reported with the
/// offset of the first bad byte.
pub fn normalize_bytes(raw: &[u8]) -> Result<String> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::InvalidUtf8 {
        path: PathBuf::new(),
        offset: e.valid_up_to(),
    })?;
    Ok(normalize(text))
}

/// Case folding used for all dictionary, stopword, and keyword comparisons.
/// Only scripts with case are affected.
pub fn fold(s: &str) -> String {
    s.to_lowercase()
}

/// Dictionary-assisted segmentation of a normalized document body.
///
/// Scans left to right taking the greedy longest dictionary match at each
/// position (folded comparison, canonical spelling emitted). Spans covered by
/// no dictionary term are split into maximal alphanumeric runs. Stopwords are
/// removed afterwards; surviving token order preserves surface order.
pub fn segment(doc: &PolicyDocument, dictionary: &Dictionary, stopwords: &StopwordSet) -> TokenStream {
    let folded: Vec<char> = fold(&doc.body).chars().collect();
    let mut tokens = Vec::new();
    let mut pending = String::new();
    let mut i = 0;
    while i < folded.len() {
        if let Some((len, canon)) = dictionary.longest_match(&folded[i..]) {
            flush_fallback(&mut pending, &mut tokens);
            tokens.push(canon.to_string());
            i += len;
        } else {
            pending.push(folded[i]);
            i += 1;
        }
    }
    flush_fallback(&mut pending, &mut tokens);

    tokens.retain(|t| !stopwords.contains(t));
    TokenStream {
        doc_id: doc.id.clone(),
        tokens,
    }
}

/// Split an uncovered span into maximal alphanumeric runs.
fn flush_fallback(pending: &mut String, tokens: &mut Vec<String>) {
    if pending.is_empty() {
        return;
    }
    let mut run = String::new();
    for ch in pending.chars() {
        if ch.is_alphanumeric() {
            run.push(ch);
        } else if !run.is_empty() {
            tokens.push(std::mem::take(&mut run));
        }
    }
    if !run.is_empty() {
        tokens.push(run);
    }
    pending.clear();
}
