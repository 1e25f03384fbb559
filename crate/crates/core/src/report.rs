//! Pipeline orchestration and report rendering.
//!
//! [`run_analysis`] wires ingestion, tagging, index aggregation and the
//! statistical comparison together and returns a fully self-describing
//! [`AnalysisReport`]: every policy that can move a number is echoed back,
//! so a report alone reconstructs the run.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    build_matched_splits, filter_feeds_by_size, load_corpus, Corpus, CorpusFormat, CorpusKind,
};
use crate::error::{Error, Result};
use crate::index::{
    index_series_independent, index_series_matched, IndexConfig, IndexSeries, ZeroTagPolicy,
};
use crate::stats::{
    descriptives, ks_normality, mann_whitney_u, wilcoxon_signed_rank, Alternative, Descriptives,
    TestResult,
};
use crate::tagger::{AmbiguityPolicy, Lexicon, TaggerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonMode {
    /// Per-author label-0 vs label-1 tweet subsets, Wilcoxon signed-rank.
    MatchedPairs,
    /// Label-0 vs label-1 author groups, Mann-Whitney U.
    IndependentGroups,
}

impl fmt::Display for ComparisonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonMode::MatchedPairs => write!(f, "matched"),
            ComparisonMode::IndependentGroups => write!(f, "groups"),
        }
    }
}

/// Everything a run depends on. The `alternative` is directional for the
/// label-1 side: `Less` asks whether label-1 scores run below label-0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub corpus_path: String,
    pub format: CorpusFormat,
    pub mode: ComparisonMode,
    pub min_tweets: usize,
    pub max_tweets: Option<usize>,
    pub ambiguity: AmbiguityPolicy,
    pub zero_tag: ZeroTagPolicy,
    pub polite_second: bool,
    pub alternative: Alternative,
    pub seed: u64,
    pub workers: usize,
}

impl AnalysisConfig {
    pub fn new(corpus_path: impl Into<String>, format: CorpusFormat, mode: ComparisonMode) -> Self {
        AnalysisConfig {
            corpus_path: corpus_path.into(),
            format,
            mode,
            min_tweets: 0,
            max_tweets: None,
            ambiguity: AmbiguityPolicy::Exclude,
            zero_tag: ZeroTagPolicy::Include,
            polite_second: true,
            alternative: Alternative::TwoSided,
            seed: 0,
            workers: 1,
        }
    }

    fn index_config(&self) -> IndexConfig {
        IndexConfig {
            tagger: TaggerConfig {
                ambiguity: self.ambiguity,
                polite_second: self.polite_second,
            },
            zero_tag: self.zero_tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub name: String,
    pub users: usize,
    /// Ingested tweets behind this side (after the feed-size filter, before
    /// the zero-tag policy).
    pub tweets: usize,
    pub descriptives: Descriptives,
    pub normality: Option<TestResult>,
    /// Set when the normality diagnostic could not run (degenerate sample).
    pub normality_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub author_id: String,
    pub subset_or_class: String,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub index: f64,
    pub n_tweets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub config: AnalysisConfig,
    pub lexicon_version: String,
    /// label_0 side first, label_1 side second.
    pub groups: Vec<GroupSummary>,
    pub main_test: TestResult,
    pub index_rows: Vec<IndexRow>,
    pub warnings: Vec<String>,
}

pub fn run_analysis(config: &AnalysisConfig) -> Result<AnalysisReport> {
    let lexicon = Lexicon::default_spanish();
    run_analysis_with_lexicon(config, &lexicon)
}

pub fn run_analysis_with_lexicon(
    config: &AnalysisConfig,
    lexicon: &Lexicon,
) -> Result<AnalysisReport> {
    let corpus = load_corpus(Path::new(&config.corpus_path), config.format)?;
    run_analysis_on_corpus(config, lexicon, &corpus)
}

/// Same pipeline, starting from an already-loaded corpus.
pub fn run_analysis_on_corpus(
    config: &AnalysisConfig,
    lexicon: &Lexicon,
    corpus: &Corpus,
) -> Result<AnalysisReport> {
    let expected_kind = match config.mode {
        ComparisonMode::MatchedPairs => CorpusKind::PerTweetLabeled,
        ComparisonMode::IndependentGroups => CorpusKind::PerAuthorLabeled,
    };
    if corpus.kind != expected_kind {
        return Err(Error::WrongCorpusKind {
            expected: expected_kind.to_string(),
            found: corpus.kind.to_string(),
        });
    }

    let mut warnings = Vec::new();
    let filtered = filter_feeds_by_size(
        corpus,
        config.min_tweets,
        config.max_tweets.unwrap_or(usize::MAX),
    )?;
    if !filtered.discarded_authors.is_empty() {
        warnings.push(format!(
            "feed-size filter discarded {} feeds: {}",
            filtered.discarded_authors.len(),
            filtered.discarded_authors.join(", ")
        ));
    }
    warnings.extend(filtered.warnings.clone());

    let series = match config.mode {
        ComparisonMode::MatchedPairs => {
            let split_set = build_matched_splits(&filtered.corpus)?;
            if !split_set.excluded_authors.is_empty() {
                warnings.push(format!(
                    "{} authors lacked one label class and were excluded: {}",
                    split_set.excluded_authors.len(),
                    split_set.excluded_authors.join(", ")
                ));
            }
            index_series_matched(
                &split_set.splits,
                lexicon,
                &config.index_config(),
                config.workers,
            )?
        }
        ComparisonMode::IndependentGroups => index_series_independent(
            &filtered.corpus,
            lexicon,
            &config.index_config(),
            config.workers,
        )?,
    };
    warnings.extend(series.warnings.clone());

    summarize(config, lexicon, &series, warnings)
}

fn summarize(
    config: &AnalysisConfig,
    lexicon: &Lexicon,
    series: &IndexSeries,
    warnings: Vec<String>,
) -> Result<AnalysisReport> {
    let values_zero = series.groups[0].values();
    let values_one = series.groups[1].values();
    for (group, values) in series.groups.iter().zip([&values_zero, &values_one]) {
        if values.len() < 2 {
            return Err(Error::InsufficientUsers {
                group: group.name.clone(),
                count: values.len(),
            });
        }
    }

    let mut groups = Vec::with_capacity(2);
    for (slot, (own, other)) in series
        .groups
        .iter()
        .zip([(&values_zero, &values_one), (&values_one, &values_zero)])
    {
        let stats = descriptives(&slot.name, own, Some(other))?;
        let (normality, normality_note) = match ks_normality(own) {
            Ok(result) => (Some(result), None),
            Err(e) => (None, Some(format!("normality diagnostic unavailable: {e}"))),
        };
        groups.push(GroupSummary {
            name: slot.name.clone(),
            users: own.len(),
            tweets: slot.tweet_count,
            descriptives: stats,
            normality,
            normality_note,
        });
    }

    // The configured alternative reads label-1 relative to label-0, so the
    // label-1 series is the first argument of the test.
    let main_test = if series.paired {
        wilcoxon_signed_rank(&values_one, &values_zero, config.alternative)?
    } else {
        mann_whitney_u(&values_one, &values_zero, config.alternative)?
    };

    let mut index_rows = Vec::new();
    for group in &series.groups {
        for (profile, score) in group.profiles.iter().zip(&group.scores) {
            index_rows.push(IndexRow {
                author_id: profile.author_id.clone(),
                subset_or_class: profile
                    .subset_tag
                    .clone()
                    .unwrap_or_else(|| group.name.clone()),
                p1: profile.p1,
                p2: profile.p2,
                p3: profile.p3,
                index: score.value,
                n_tweets: profile.n_tweets,
            });
        }
    }

    Ok(AnalysisReport {
        config: config.clone(),
        lexicon_version: lexicon.version().to_string(),
        groups,
        main_test,
        index_rows,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Text,
    Markdown,
    Json,
    Tsv,
}

pub const TABLE_COLUMNS: [&str; 5] = ["group", "users", "tweets", "Mdn", "rank"];

/// Renders the per-group table plus a statistic/p footer. Text and Markdown
/// round numbers to 4 significant digits; JSON and TSV keep full precision.
pub fn render_table(report: &AnalysisReport, format: RenderFormat) -> String {
    match format {
        RenderFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(report).expect("report serializes to JSON");
            out.push('\n');
            out
        }
        RenderFormat::Tsv => render_tsv(report),
        RenderFormat::Markdown => render_markdown(report),
        RenderFormat::Text => render_text(report),
    }
}

fn group_cells(report: &AnalysisReport, human: bool) -> Vec<[String; 5]> {
    report
        .groups
        .iter()
        .map(|g| {
            let rank = g.descriptives.mean_rank.unwrap_or(f64::NAN);
            [
                g.name.clone(),
                g.users.to_string(),
                g.tweets.to_string(),
                if human { sig4(g.descriptives.median) } else { full(g.descriptives.median) },
                if human { sig4(rank) } else { full(rank) },
            ]
        })
        .collect()
}

fn footer_lines(report: &AnalysisReport, human: bool) -> Vec<(String, String)> {
    let fmt = |x: f64| if human { sig4(x) } else { full(x) };
    let t = &report.main_test;
    let mut lines = vec![
        ("method".to_string(), t.method.to_string()),
        ("statistic".to_string(), fmt(t.statistic)),
    ];
    for (key, value) in &t.diagnostics {
        lines.push((key.clone(), fmt(*value)));
    }
    if let Some(z) = t.z_value {
        lines.push(("z".to_string(), fmt(z)));
    }
    lines.push(("p_value".to_string(), fmt(t.p_value)));
    lines.push(("alternative".to_string(), t.alternative.to_string()));
    lines.push(("test_mode".to_string(), t.mode.to_string()));
    lines.push(("tie_count".to_string(), t.tie_count.to_string()));
    lines.push(("zero_count".to_string(), t.zero_count.to_string()));
    for g in &report.groups {
        match (&g.normality, &g.normality_note) {
            (Some(n), _) => lines.push((
                format!("normality_{}", g.name),
                format!("D={} p={} ({})", fmt(n.statistic), fmt(n.p_value),
                    n.note.as_deref().unwrap_or("")),
            )),
            (None, Some(note)) => lines.push((format!("normality_{}", g.name), note.clone())),
            (None, None) => {}
        }
    }
    let c = &report.config;
    lines.push(("corpus".to_string(), c.corpus_path.clone()));
    lines.push(("format".to_string(), c.format.to_string()));
    lines.push(("mode".to_string(), c.mode.to_string()));
    lines.push(("min_tweets".to_string(), c.min_tweets.to_string()));
    lines.push((
        "max_tweets".to_string(),
        c.max_tweets.map_or("none".to_string(), |m| m.to_string()),
    ));
    lines.push(("ambiguity".to_string(), c.ambiguity.to_string()));
    lines.push(("zero_tag".to_string(), c.zero_tag.to_string()));
    lines.push(("polite_second".to_string(), c.polite_second.to_string()));
    lines.push(("seed".to_string(), c.seed.to_string()));
    lines.push(("workers".to_string(), c.workers.to_string()));
    lines.push(("lexicon_version".to_string(), report.lexicon_version.clone()));
    for w in &report.warnings {
        lines.push(("warning".to_string(), w.clone()));
    }
    lines
}

fn render_text(report: &AnalysisReport) -> String {
    let rows = group_cells(report, true);
    let mut widths: Vec<usize> = TABLE_COLUMNS.iter().map(|c| c.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let header: Vec<String> = TABLE_COLUMNS
        .iter()
        .zip(&widths)
        .map(|(c, w)| format!("{c:<w$}"))
        .collect();
    out.push_str(header.join("  ").trim_end());
    out.push('\n');
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out.push('\n');
    for (key, value) in footer_lines(report, true) {
        out.push_str(&format!("{key}: {value}\n"));
    }
    out
}

fn render_markdown(report: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", TABLE_COLUMNS.join(" | ")));
    out.push_str("| --- | --- | --- | --- | --- |\n");
    for row in group_cells(report, true) {
        out.push_str(&format!("| {} |\n", row.join(" | ")));
    }
    out.push('\n');
    for (key, value) in footer_lines(report, true) {
        out.push_str(&format!("- **{key}**: {value}\n"));
    }
    out
}

fn render_tsv(report: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&TABLE_COLUMNS.join("\t"));
    out.push('\n');
    for row in group_cells(report, false) {
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    for (key, value) in footer_lines(report, false) {
        out.push_str(&format!("# {key}\t{value}\n"));
    }
    out
}

fn full(x: f64) -> String {
    format!("{x}")
}

/// 4 significant digits for human-facing tables.
pub fn sig4(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{x:.3e}");
    }
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
