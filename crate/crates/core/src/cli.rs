//! Command-line pipeline: ingest → keywords → coword → cluster → suggest →
//! score → report.
//!
//! Every flag can also be supplied through a TOML config file (`--config`);
//! a flag given on the command line wins over the file. Referenced paths are
//! checked before any stage runs. Exit codes: 0 success, 2 input validation,
//! 3 computation.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::corpus::{load_corpus, Corpus, Dictionary, StopwordSet, TokenStream};
use crate::coword::{coword_matrix, hierarchical_cluster};
use crate::engine::{descriptive_stats, evaluate_all, PmcResult};
use crate::error::{Error, ErrorClass, Result};
use crate::keywords::{
    aggregate_tfidf, fuse_keywords, term_frequencies, textrank, textrank_corpus, tfidf,
    TextRankParams,
};
use crate::report::{
    render_spider, render_surface, render_trend, results_to_csv, results_to_markdown,
    stats_to_csv,
};
use crate::schema::{builtin_schema, load_schema, IndicatorSchema};
use crate::scoring::{
    load_overrides, load_scorecards, resolve_scorecard, suggest_scores, write_scorecards_csv,
    OverrideEntry, Scorecard,
};

#[derive(Parser)]
#[command(
    name = "pmckit",
    version,
    about = "Mine a policy corpus for keywords and score it against an indicator schema"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a corpus manifest
    Ingest {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Emit frequency, TF-IDF, TextRank, and fused keyword tables
    Keywords {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Which keyword tables to write
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Build the co-word matrix over the fused keyword set
    Coword {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Cluster the co-word matrix and emit the dendrogram
    Cluster {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Suggest scorecards from schema evidence rules
    Suggest {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
    },
    /// Compute index values from scorecards and emit result tables
    Score {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Also emit surface, spider, and trend charts
        #[arg(long)]
        charts: bool,
    },
    /// Full bundle: tables, Markdown report, and all charts
    Report {
        #[command(flatten)]
        inputs: InputArgs,
        #[command(flatten)]
        tuning: TuningArgs,
    },
}

#[derive(Args, Default)]
struct InputArgs {
    /// Corpus manifest (TOML)
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Indicator schema (TOML); the bundled default is used when omitted
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Dictionary of multi-word terms, one per line
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Stopword list, one per line
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Scorecard CSV (doc_id,subvar_id,value,source)
    #[arg(long)]
    scorecards: Option<PathBuf>,
    /// Manual override CSV (doc_id,subvar_id,value)
    #[arg(long)]
    overrides: Option<PathBuf>,
    /// TOML file supplying defaults for any flag
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Default)]
struct TuningArgs {
    /// Co-occurrence window for TextRank (≥ 2)
    #[arg(long)]
    window: Option<usize>,
    /// TextRank damping factor in (0, 1)
    #[arg(long)]
    damping: Option<f64>,
    /// TextRank convergence tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// TextRank iteration cap
    #[arg(long)]
    max_iter: Option<usize>,
    /// How many fused keywords to keep
    #[arg(long)]
    top: Option<usize>,
    /// Cluster count for the cluster subcommand
    #[arg(long)]
    k_clusters: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Table format for score output
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Freq,
    Tfidf,
    Textrank,
    Fused,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Markdown,
}

/// Flag-or-config values resolved against defaults.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    manifest: Option<PathBuf>,
    schema: Option<PathBuf>,
    dict: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    scorecards: Option<PathBuf>,
    overrides: Option<PathBuf>,
    window: Option<usize>,
    damping: Option<f64>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    top: Option<usize>,
    k_clusters: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

struct RunConfig {
    manifest: Option<PathBuf>,
    schema: Option<PathBuf>,
    dict: Option<PathBuf>,
    stopwords: Option<PathBuf>,
    scorecards: Option<PathBuf>,
    overrides: Option<PathBuf>,
    textrank: TextRankParams,
    top: usize,
    k_clusters: usize,
    out: PathBuf,
    format: Format,
}

impl RunConfig {
    fn resolve(inputs: InputArgs, tuning: TuningArgs) -> Result<RunConfig> {
        let file: ConfigFile = match &inputs.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                toml::from_str(&text).map_err(|e| Error::Parse {
                    path: path.clone(),
                    message: e.to_string(),
                })?
            }
            None => ConfigFile::default(),
        };
        let defaults = TextRankParams::default();
        let config = RunConfig {
            manifest: inputs.manifest.or(file.manifest),
            schema: inputs.schema.or(file.schema),
            dict: inputs.dict.or(file.dict),
            stopwords: inputs.stopwords.or(file.stopwords),
            scorecards: inputs.scorecards.or(file.scorecards),
            overrides: inputs.overrides.or(file.overrides),
            textrank: TextRankParams {
                window: tuning.window.or(file.window).unwrap_or(defaults.window),
                damping: tuning.damping.or(file.damping).unwrap_or(defaults.damping),
                tol: tuning.tol.or(file.tol).unwrap_or(defaults.tol),
                max_iter: tuning
                    .max_iter
                    .or(file.max_iter)
                    .unwrap_or(defaults.max_iter),
            },
            top: tuning.top.or(file.top).unwrap_or(20),
            k_clusters: tuning.k_clusters.or(file.k_clusters).unwrap_or(4),
            out: tuning.out.or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            format: tuning.format.or(file.format).unwrap_or(Format::Csv),
        };
        config.check_paths()?;
        Ok(config)
    }

    /// Fail fast on any referenced path that does not exist.
    fn check_paths(&self) -> Result<()> {
        for path in [
            &self.manifest,
            &self.schema,
            &self.dict,
            &self.stopwords,
            &self.scorecards,
            &self.overrides,
        ]
        .into_iter()
        .flatten()
        {
            if !path.exists() {
                return Err(Error::Io {
                    path: path.clone(),
                    source: std::io::Error::new(
                        std::io::ErrorKind::NotFound,
                        "no such file",
                    ),
                });
            }
        }
        Ok(())
    }

    fn manifest_path(&self) -> Result<&Path> {
        self.manifest.as_deref().ok_or(Error::InvalidParameter {
            name: "manifest",
            message: "required: pass --manifest or set it in the config file".into(),
        })
    }

    fn load_corpus(&self) -> Result<Corpus> {
        let mut corpus = load_corpus(self.manifest_path()?)?;
        if let Some(dict) = &self.dict {
            corpus = corpus.with_dictionary(Dictionary::from_file(dict)?);
        }
        if let Some(stop) = &self.stopwords {
            corpus = corpus.with_stopwords(StopwordSet::from_file(stop)?);
        }
        Ok(corpus)
    }

    fn load_schema(&self) -> Result<IndicatorSchema> {
        match &self.schema {
            Some(path) => load_schema(path),
            None => Ok(builtin_schema()),
        }
    }

    fn scorecards_path(&self) -> Result<&Path> {
        self.scorecards.as_deref().ok_or(Error::InvalidParameter {
            name: "scorecards",
            message: "required: pass --scorecards or set it in the config file".into(),
        })
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out).map_err(|source| Error::Io {
            path: self.out.clone(),
            source,
        })?;
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        println!("wrote {}", path.display());
        Ok(path)
    }
}

/// Parse arguments, run, and map errors to exit codes.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Validation => 2,
                ErrorClass::Computation => 3,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { inputs, tuning } => cmd_ingest(RunConfig::resolve(inputs, tuning)?),
        Command::Keywords {
            inputs,
            tuning,
            method,
        } => cmd_keywords(RunConfig::resolve(inputs, tuning)?, method),
        Command::Coword { inputs, tuning } => cmd_coword(RunConfig::resolve(inputs, tuning)?, false),
        Command::Cluster { inputs, tuning } => cmd_coword(RunConfig::resolve(inputs, tuning)?, true),
        Command::Suggest { inputs, tuning } => cmd_suggest(RunConfig::resolve(inputs, tuning)?),
        Command::Score {
            inputs,
            tuning,
            charts,
        } => cmd_score(RunConfig::resolve(inputs, tuning)?, charts, false),
        Command::Report { inputs, tuning } => cmd_score(RunConfig::resolve(inputs, tuning)?, true, true),
    }
}

fn cmd_ingest(config: RunConfig) -> Result<()> {
    let corpus = config.load_corpus()?;
    println!("{} documents loaded", corpus.documents.len());
    Ok(())
}

fn segmented(config: &RunConfig) -> Result<(Corpus, Vec<TokenStream>)> {
    let corpus = config.load_corpus()?;
    let streams = corpus.segment_all();
    Ok((corpus, streams))
}

fn float(v: f64) -> String {
    format!("{v}")
}

fn cmd_keywords(config: RunConfig, method: Method) -> Result<()> {
    let (_, streams) = segmented(&config)?;

    if matches!(method, Method::Freq | Method::All) {
        let table = term_frequencies(&streams)?;
        let mut out = String::from("term,count\n");
        for (term, count) in &table.entries {
            out.push_str(&format!("{term},{count}\n"));
        }
        config.write("frequency.csv", &out)?;
    }
    if matches!(method, Method::Tfidf | Method::All) {
        let docs = tfidf(&streams)?;
        let mut out = String::from("doc_id,term,score\n");
        for doc in &docs {
            for (term, score) in &doc.scores {
                out.push_str(&format!("{},{},{}\n", doc.doc_id, term, float(*score)));
            }
        }
        config.write("tfidf.csv", &out)?;
    }
    if matches!(method, Method::Textrank | Method::All) {
        let mut out = String::from("doc_id,term,score\n");
        for stream in &streams {
            if stream.tokens.is_empty() {
                continue;
            }
            let result = textrank(stream, &config.textrank)?;
            for (term, score) in &result.scores {
                out.push_str(&format!("{},{},{}\n", stream.doc_id, term, float(*score)));
            }
        }
        config.write("textrank.csv", &out)?;
    }
    if matches!(method, Method::Fused | Method::All) {
        let fused = fused_keywords(&config, &streams)?;
        let mut out = String::from("term,tfidf,textrank,fused\n");
        for k in &fused {
            out.push_str(&format!(
                "{},{},{},{}\n",
                k.term,
                float(k.tfidf),
                float(k.textrank),
                float(k.fused)
            ));
        }
        config.write("keywords.csv", &out)?;
    }
    Ok(())
}

fn fused_keywords(
    config: &RunConfig,
    streams: &[TokenStream],
) -> Result<Vec<crate::keywords::KeywordScore>> {
    let agg_tfidf = aggregate_tfidf(&tfidf(streams)?);
    let agg_rank = textrank_corpus(streams, &config.textrank)?;
    fuse_keywords(&agg_tfidf, &agg_rank, config.top)
}

fn cmd_coword(config: RunConfig, cluster: bool) -> Result<()> {
    let (_, streams) = segmented(&config)?;
    let fused = fused_keywords(&config, &streams)?;
    let terms: Vec<String> = fused.into_iter().map(|k| k.term).collect();
    let matrix = coword_matrix(&streams, &terms)?;
    config.write("coword.csv", &matrix.to_csv())?;
    config.write("edges.csv", &matrix.edge_list())?;

    if cluster {
        let (dendrogram, clusters) = hierarchical_cluster(&matrix, config.k_clusters)?;
        config.write("dendrogram.csv", &dendrogram.to_merge_csv())?;
        config.write("dendrogram.txt", &(dendrogram.to_nested_list() + "\n"))?;
        let mut out = String::from("cluster,term\n");
        for (i, cluster) in clusters.iter().enumerate() {
            for term in cluster {
                out.push_str(&format!("{i},{term}\n"));
            }
        }
        config.write("clusters.csv", &out)?;
    }
    Ok(())
}

fn cmd_suggest(config: RunConfig) -> Result<()> {
    let (corpus, streams) = segmented(&config)?;
    let schema = config.load_schema()?;
    let overrides = match &config.overrides {
        Some(path) => load_overrides(path)?,
        None => Vec::new(),
    };
    check_override_docs(&overrides, corpus.documents.iter().map(|d| d.id.as_str()))?;

    let mut cards = Vec::with_capacity(corpus.documents.len());
    for (doc, stream) in corpus.documents.iter().zip(&streams) {
        let suggested = suggest_scores(doc, stream, &schema)?;
        cards.push(resolve_scorecard(&suggested, &overrides, &schema)?);
    }
    config.write("suggested.csv", &write_scorecards_csv(&cards, &schema))?;
    Ok(())
}

fn check_override_docs<'a>(
    overrides: &[OverrideEntry],
    known: impl Iterator<Item = &'a str>,
) -> Result<()> {
    let known: std::collections::BTreeSet<&str> = known.collect();
    for entry in overrides {
        if !known.contains(entry.doc_id.as_str()) {
            return Err(Error::InvalidParameter {
                name: "overrides",
                message: format!("override names unknown document id {:?}", entry.doc_id),
            });
        }
    }
    Ok(())
}

fn cmd_score(config: RunConfig, charts: bool, markdown_always: bool) -> Result<()> {
    let schema = config.load_schema()?;
    let mut cards = load_scorecards(config.scorecards_path()?, &schema)?;
    if let Some(path) = &config.overrides {
        let overrides = load_overrides(path)?;
        check_override_docs(&overrides, cards.iter().map(|c| c.doc_id.as_str()))?;
        cards = cards
            .iter()
            .map(|c| resolve_scorecard(c, &overrides, &schema))
            .collect::<Result<Vec<_>>>()?;
    }

    // With a manifest, documents run in manifest order and release dates
    // become available for the trend chart.
    let corpus = match &config.manifest {
        Some(_) => Some(config.load_corpus()?),
        None => None,
    };
    if let Some(corpus) = &corpus {
        cards = order_by_manifest(cards, corpus)?;
    }

    let results = evaluate_all(&cards, &schema)?;
    config.write("results.csv", &results_to_csv(&results)?)?;
    config.write("stats.csv", &stats_to_csv(&descriptive_stats(&results)?))?;
    if markdown_always || config.format == Format::Markdown {
        config.write("report.md", &results_to_markdown(&results)?)?;
    }
    if charts {
        emit_charts(&config, &results, corpus.as_ref())?;
    }
    Ok(())
}

fn order_by_manifest(cards: Vec<Scorecard>, corpus: &Corpus) -> Result<Vec<Scorecard>> {
    let mut by_id: std::collections::BTreeMap<String, Scorecard> =
        cards.into_iter().map(|c| (c.doc_id.clone(), c)).collect();
    let mut ordered = Vec::with_capacity(corpus.documents.len());
    for doc in &corpus.documents {
        match by_id.remove(&doc.id) {
            Some(card) => ordered.push(card),
            None => {
                return Err(Error::IncompleteScorecard {
                    doc_id: doc.id.clone(),
                    missing: vec!["<all items>".into()],
                })
            }
        }
    }
    if let Some(extra) = by_id.keys().next() {
        return Err(Error::InvalidParameter {
            name: "scorecards",
            message: format!("scorecard names document id {extra:?} not in the manifest"),
        });
    }
    Ok(ordered)
}

fn emit_charts(config: &RunConfig, results: &[PmcResult], corpus: Option<&Corpus>) -> Result<()> {
    for r in results {
        if let Some(surface) = &r.surface {
            let svg = render_surface(&format!("PMC surface, document {}", r.doc_id), surface)?;
            config.write(&format!("surface_{}.svg", sanitize(&r.doc_id)), &svg)?;
        }
        let axes: Vec<(String, crate::engine::Value)> = r
            .main_ids
            .iter()
            .cloned()
            .zip(r.main_values.iter().copied())
            .collect();
        if axes.len() >= 3 {
            let svg = render_spider(&format!("Variable profile, document {}", r.doc_id), &axes)?;
            config.write(&format!("spider_{}.svg", sanitize(&r.doc_id)), &svg)?;
        }
    }
    let corpus = corpus.ok_or(Error::InvalidParameter {
        name: "manifest",
        message: "charts need release dates: pass --manifest".into(),
    })?;
    let series: Vec<(chrono::NaiveDate, crate::engine::Value)> = corpus
        .documents
        .iter()
        .zip(results)
        .map(|(doc, r)| (doc.release_date, r.g))
        .collect();
    if series.len() >= 2 {
        let svg = render_trend("Guarantee intensity by release year", &series)?;
        config.write("trend.svg", &svg)?;
    }
    Ok(())
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs_with_config(path: &Path) -> InputArgs {
        InputArgs {
            config: Some(path.to_path_buf()),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_without_config() {
        let config = RunConfig::resolve(InputArgs::default(), TuningArgs::default()).unwrap();
        assert_eq!(config.textrank.window, 5);
        assert_eq!(config.textrank.damping, 0.85);
        assert_eq!(config.top, 20);
        assert_eq!(config.k_clusters, 4);
        assert_eq!(config.out, PathBuf::from("out"));
        assert_eq!(config.format, Format::Csv);
    }

    #[test]
    fn config_file_fills_gaps_but_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "window = 9\ntop = 7\nformat = \"markdown\"\n").unwrap();
        let tuning = TuningArgs {
            window: Some(3),
            ..Default::default()
        };
        let config = RunConfig::resolve(inputs_with_config(&path), tuning).unwrap();
        assert_eq!(config.textrank.window, 3); // flag beats file
        assert_eq!(config.top, 7); // file beats default
        assert_eq!(config.format, Format::Markdown);
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "wnidow = 9\n").unwrap();
        assert!(matches!(
            RunConfig::resolve(inputs_with_config(&path), TuningArgs::default()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn missing_referenced_path_fails_fast() {
        let inputs = InputArgs {
            manifest: Some(PathBuf::from("/nonexistent/manifest.toml")),
            ..Default::default()
        };
        assert!(matches!(
            RunConfig::resolve(inputs, TuningArgs::default()),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn override_doc_check() {
        let entries = vec![OverrideEntry {
            doc_id: "ghost".into(),
            subvar_id: "P11".into(),
            value: true,
        }];
        assert!(check_override_docs(&entries, ["1", "2"].into_iter()).is_err());
        assert!(check_override_docs(&entries, ["ghost"].into_iter()).is_ok());
    }

    #[test]
    fn sanitize_keeps_alnum() {
        assert_eq!(sanitize("doc 3/a"), "doc_3_a");
        assert_eq!(sanitize("17"), "17");
    }
}
