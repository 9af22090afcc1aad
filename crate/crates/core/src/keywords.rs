//! Term frequencies, TF-IDF, TextRank, and fused keyword ranking.
//!
//! TF-IDF uses relative term frequency times `ln(N / df)` with no smoothing,
//! so a term present in every document scores exactly zero. TextRank runs a
//! weighted PageRank over a co-occurrence window graph. The fused ranking is
//! the mean of the min-max-normalized score families.

use std::collections::BTreeMap;

use crate::corpus::TokenStream;
use crate::error::{Error, Result};

/// Corpus-wide term counts, sorted by count descending then term ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    pub entries: Vec<(String, u64)>,
}

/// Per-document TF-IDF scores, sorted by score descending then term ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DocScores {
    pub doc_id: String,
    pub scores: Vec<(String, f64)>,
}

/// TextRank parameters. Defaults: window 5, damping 0.85, tol 1e-6,
/// max 100 iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextRankParams {
    pub window: usize,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TextRankParams {
    fn default() -> Self {
        TextRankParams {
            window: 5,
            damping: 0.85,
            tol: 1e-6,
            max_iter: 100,
        }
    }
}

impl TextRankParams {
    fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::InvalidParameter {
                name: "window",
                message: format!("must be >= 2, got {}", self.window),
            });
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParameter {
                name: "damping",
                message: format!("must be in (0, 1), got {}", self.damping),
            });
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "tol",
                message: format!("must be positive, got {}", self.tol),
            });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iter",
                message: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// TextRank output for one token stream.
#[derive(Debug, Clone, PartialEq)]
pub struct TextRankResult {
    /// (term, score) sorted by score descending then term ascending.
    pub scores: Vec<(String, f64)>,
    /// L1 change of the final iteration.
    pub residual: f64,
    pub iterations: usize,
    /// False when `max_iter` was reached before the residual dropped
    /// below `tol`; the scores are still returned.
    pub converged: bool,
}

/// A fused keyword with its raw family scores.
#[derive(Debug, Clone, PartialEq)]
pub struct KeywordScore {
    pub term: String,
    pub tfidf: f64,
    pub textrank: f64,
    /// Mean of the min-max-normalized families; always in [0, 1].
    pub fused: f64,
}

/// Exact multiset counts over all streams.
pub fn term_frequencies(streams: &[TokenStream]) -> Result<FrequencyTable> {
    if streams.is_empty() {
        return Err(Error::EmptyInput {
            what: "token stream list",
        });
    }
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for stream in streams {
        for token in &stream.tokens {
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(String, u64)> = counts
        .into_iter()
        .map(|(t, c)| (t.to_string(), c))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(FrequencyTable { entries })
}

/// Per-document TF-IDF: `tf(t, d) = count(t, d) / len(d)`,
/// `idf(t) = ln(N / df(t))`. Empty streams contribute no scores.
pub fn tfidf(streams: &[TokenStream]) -> Result<Vec<DocScores>> {
    if streams.is_empty() {
        return Err(Error::EmptyInput {
            what: "token stream list",
        });
    }
    let n = streams.len() as f64;
    let mut df: BTreeMap<&str, u64> = BTreeMap::new();
    for stream in streams {
        let mut seen: Vec<&str> = stream.tokens.iter().map(|t| t.as_str()).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *df.entry(t).or_insert(0) += 1;
        }
    }

    let mut out = Vec::with_capacity(streams.len());
    for stream in streams {
        let len = stream.tokens.len();
        let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
        for t in &stream.tokens {
            *counts.entry(t).or_insert(0) += 1;
        }
        let mut scores: Vec<(String, f64)> = counts
            .into_iter()
            .map(|(t, c)| {
                let tf = c as f64 / len as f64;
                let idf = (n / df[t] as f64).ln();
                (t.to_string(), tf * idf)
            })
            .collect();
        sort_scored(&mut scores);
        out.push(DocScores {
            doc_id: stream.doc_id.clone(),
            scores,
        });
    }
    Ok(out)
}

/// Weighted PageRank over the term co-occurrence graph of one stream.
///
/// Distinct terms are vertices; an undirected edge accumulates one unit of
/// weight for every position pair closer than `window` (self pairs skipped).
/// Scores start at 1 and iterate
/// `WS(v) = (1 - d) + d * sum_u w(u,v) / strength(u) * WS(u)`
/// until the L1 change drops below `tol` or `max_iter` is hit.
pub fn textrank(stream: &TokenStream, params: &TextRankParams) -> Result<TextRankResult> {
    params.validate()?;
    if stream.tokens.is_empty() {
        return Err(Error::EmptyInput {
            what: "token stream",
        });
    }

    // Dense vertex ids in first-appearance order keep iteration deterministic.
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut terms: Vec<&str> = Vec::new();
    for t in &stream.tokens {
        index.entry(t).or_insert_with(|| {
            terms.push(t);
            terms.len() - 1
        });
    }
    let n = terms.len();

    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (p, t) in stream.tokens.iter().enumerate() {
        let a = index[t.as_str()];
        for q in p + 1..(p + params.window).min(stream.tokens.len()) {
            let b = index[stream.tokens[q].as_str()];
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            *weights.entry(key).or_insert(0.0) += 1.0;
        }
    }

    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (&(a, b), &w) in &weights {
        adjacency[a].push((b, w));
        adjacency[b].push((a, w));
    }
    let strength: Vec<f64> = adjacency
        .iter()
        .map(|edges| edges.iter().map(|&(_, w)| w).sum())
        .collect();

    let mut scores = vec![1.0f64; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iter {
        let mut next = vec![0.0f64; n];
        for v in 0..n {
            let mut acc = 0.0;
            for &(u, w) in &adjacency[v] {
                acc += w / strength[u] * scores[u];
            }
            next[v] = (1.0 - params.damping) + params.damping * acc;
        }
        residual = scores
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum();
        scores = next;
        iterations += 1;
        if residual < params.tol {
            converged = true;
            break;
        }
    }

    let mut scored: Vec<(String, f64)> = terms
        .iter()
        .zip(&scores)
        .map(|(t, s)| (t.to_string(), *s))
        .collect();
    sort_scored(&mut scored);
    Ok(TextRankResult {
        scores: scored,
        residual,
        iterations,
        converged,
    })
}

/// Sum per-document TF-IDF scores into one corpus-level map.
pub fn aggregate_tfidf(docs: &[DocScores]) -> BTreeMap<String, f64> {
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for doc in docs {
        for (term, score) in &doc.scores {
            *out.entry(term.clone()).or_insert(0.0) += score;
        }
    }
    out
}

/// Run TextRank per document and sum the scores per term. Empty streams are
/// skipped.
pub fn textrank_corpus(
    streams: &[TokenStream],
    params: &TextRankParams,
) -> Result<BTreeMap<String, f64>> {
    if streams.is_empty() {
        return Err(Error::EmptyInput {
            what: "token stream list",
        });
    }
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    for stream in streams {
        if stream.tokens.is_empty() {
            continue;
        }
        let result = textrank(stream, params)?;
        for (term, score) in result.scores {
            *out.entry(term).or_insert(0.0) += score;
        }
    }
    Ok(out)
}

/// Fuse two score families into a top-k ranking.
///
/// The candidate set is the union of both families; missing scores count as
/// zero before normalization. Each family is min-max normalized over the
/// candidates (a constant family maps to 0.5 everywhere) and the fused score
/// is the mean of the two normalized values. Ordering is fused descending,
/// term ascending. If `k` exceeds the candidate count all candidates are
/// returned.
pub fn fuse_keywords(
    tfidf_scores: &BTreeMap<String, f64>,
    textrank_scores: &BTreeMap<String, f64>,
    k: usize,
) -> Result<Vec<KeywordScore>> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            message: "must be positive".into(),
        });
    }
    let mut candidates: Vec<&str> = tfidf_scores
        .keys()
        .chain(textrank_scores.keys())
        .map(|s| s.as_str())
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let raw_tfidf: Vec<f64> = candidates
        .iter()
        .map(|t| tfidf_scores.get(*t).copied().unwrap_or(0.0))
        .collect();
    let raw_textrank: Vec<f64> = candidates
        .iter()
        .map(|t| textrank_scores.get(*t).copied().unwrap_or(0.0))
        .collect();
    let norm_tfidf = min_max_normalize(&raw_tfidf);
    let norm_textrank = min_max_normalize(&raw_textrank);

    let mut fused: Vec<KeywordScore> = candidates
        .iter()
        .enumerate()
        .map(|(i, t)| KeywordScore {
            term: t.to_string(),
            tfidf: raw_tfidf[i],
            textrank: raw_textrank[i],
            fused: (norm_tfidf[i] + norm_textrank[i]) / 2.0,
        })
        .collect();
    fused.sort_by(|a, b| {
        b.fused
            .partial_cmp(&a.fused)
            .unwrap()
            .then_with(|| a.term.cmp(&b.term))
    });
    fused.truncate(k);
    Ok(fused)
}

/// Min-max normalization to [0, 1]; a constant family maps to 0.5.
fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return vec![0.5; values.len()];
    }
    values.iter().map(|v| (v - min) / (max - min)).collect()
}

fn sort_scored(scores: &mut [(String, f64)]) {
    scores.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });
}
