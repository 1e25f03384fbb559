//! Loading, validation, filtering, and grouping of labeled tweet corpora.
//!
//! Three on-disk layouts are supported:
//!
//! * **JSONL** — one tweet object per line:
//!   `{"id": str, "author_id": str, "label": 0|1|null, "text": str}`.
//!   Every tweet must carry a 0/1 label; the corpus is per-tweet labeled.
//! * **TSV** — tab-separated with the mandatory header
//!   `id<TAB>author_id<TAB>label<TAB>text`, no quoting; tabs, newlines and
//!   backslashes inside `text` are escaped as `\t`, `\n`, `\\`. Per-tweet
//!   labeled, like JSONL.
//! * **FeedDir** — one `<author_id>.txt` file per author with one tweet per
//!   line, plus a `truth.txt` file with one `author_id:::label` line per
//!   author. The label applies to the whole feed (per-author labeled).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary 0/1 annotation used both for tweet relevance and author class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(value: u8) -> std::result::Result<Self, String> {
        match value {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(format!("label {other} outside {{0,1}}")),
        }
    }
}

impl From<Label> for u8 {
    fn from(label: Label) -> u8 {
        label.as_u8()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub author_id: String,
    pub label: Option<Label>,
    pub text: String,
}

/// All tweets of one author, plus the author-level class label when the
/// corpus is per-author labeled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserFeed {
    pub author_id: String,
    pub tweets: Vec<Tweet>,
    pub class_label: Option<Label>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorpusKind {
    /// Each tweet carries its own 0/1 label (relevance-style annotation).
    PerTweetLabeled,
    /// Each author carries a 0/1 class label (spreader-style annotation).
    PerAuthorLabeled,
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusKind::PerTweetLabeled => write!(f, "per-tweet-labeled"),
            CorpusKind::PerAuthorLabeled => write!(f, "per-author-labeled"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Tsv,
    FeedDir,
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusFormat::Jsonl => write!(f, "jsonl"),
            CorpusFormat::Tsv => write!(f, "tsv"),
            CorpusFormat::FeedDir => write!(f, "feeddir"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub path: String,
    pub format: CorpusFormat,
}

/// A validated, immutable corpus. Feeds keep their ingestion order; no
/// operation in this module mutates an existing corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub kind: CorpusKind,
    pub feeds: Vec<UserFeed>,
    pub provenance: Provenance,
}

impl Corpus {
    pub fn user_count(&self) -> usize {
        self.feeds.len()
    }

    pub fn tweet_count(&self) -> usize {
        self.feeds.iter().map(|f| f.tweets.len()).sum()
    }

    /// Serializes per-tweet-labeled corpora back to canonical JSONL. Loading
    /// a file produced here and re-serializing it is byte-identical.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for feed in &self.feeds {
            for tweet in &feed.tweets {
                out.push_str(&serde_json::to_string(tweet).expect("tweet serializes"));
                out.push('\n');
            }
        }
        out
    }
}

/// One author's tweets split by per-tweet label: `subset_a` holds label 0,
/// `subset_b` holds label 1. Both sides are non-empty by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedSplit {
    pub author_id: String,
    pub subset_a: Vec<Tweet>,
    pub subset_b: Vec<Tweet>,
}

/// Outcome of [`build_matched_splits`]: the usable splits plus the authors
/// that were dropped for having only one label class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedSplitSet {
    pub splits: Vec<MatchedSplit>,
    pub excluded_authors: Vec<String>,
}

/// Outcome of [`filter_feeds_by_size`]: the retained corpus, the authors
/// discarded by the size window, and any warnings raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredCorpus {
    pub corpus: Corpus,
    pub discarded_authors: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    match format {
        CorpusFormat::Jsonl => load_jsonl(path),
        CorpusFormat::Tsv => load_tsv(path),
        CorpusFormat::FeedDir => load_feed_dir(path),
    }
}

/// Retains exactly the feeds with `min <= |tweets| <= max` and reports the
/// discarded author ids. An empty result is permitted but flagged.
pub fn filter_feeds_by_size(corpus: &Corpus, min: usize, max: usize) -> Result<FilteredCorpus> {
    if min > max {
        return Err(Error::InvalidConfig(format!(
            "feed-size filter requires min <= max, got {min} > {max}"
        )));
    }
    let mut retained = Vec::new();
    let mut discarded = Vec::new();
    for feed in &corpus.feeds {
        let n = feed.tweets.len();
        if n >= min && n <= max {
            retained.push(feed.clone());
        } else {
            discarded.push(feed.author_id.clone());
        }
    }
    let mut warnings = Vec::new();
    if retained.is_empty() {
        warnings.push(format!(
            "feed-size filter [{min}, {max}] discarded every feed"
        ));
    }
    Ok(FilteredCorpus {
        corpus: Corpus {
            kind: corpus.kind,
            feeds: retained,
            provenance: corpus.provenance.clone(),
        },
        discarded_authors: discarded,
        warnings,
    })
}

/// Splits each author's tweets by per-tweet label. Authors with only one
/// label class cannot form a pair and are excluded (and reported).
pub fn build_matched_splits(corpus: &Corpus) -> Result<MatchedSplitSet> {
    if corpus.kind != CorpusKind::PerTweetLabeled {
        return Err(Error::WrongCorpusKind {
            expected: CorpusKind::PerTweetLabeled.to_string(),
            found: corpus.kind.to_string(),
        });
    }
    let mut splits = Vec::new();
    let mut excluded = Vec::new();
    for feed in &corpus.feeds {
        let mut subset_a = Vec::new();
        let mut subset_b = Vec::new();
        for tweet in &feed.tweets {
            match tweet.label {
                Some(Label::Zero) => subset_a.push(tweet.clone()),
                Some(Label::One) => subset_b.push(tweet.clone()),
                None => {
                    return Err(Error::WrongCorpusKind {
                        expected: "label on every tweet".into(),
                        found: format!("unlabeled tweet '{}'", tweet.id),
                    })
                }
            }
        }
        if subset_a.is_empty() || subset_b.is_empty() {
            excluded.push(feed.author_id.clone());
        } else {
            splits.push(MatchedSplit {
                author_id: feed.author_id.clone(),
                subset_a,
                subset_b,
            });
        }
    }
    Ok(MatchedSplitSet {
        splits,
        excluded_authors: excluded,
    })
}

// ---------------------------------------------------------------------------
// format readers
// ---------------------------------------------------------------------------

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Groups validated tweets into feeds, preserving first-appearance order of
/// authors and input order of tweets.
fn assemble_per_tweet(tweets: Vec<Tweet>, provenance: Provenance) -> Result<Corpus> {
    let mut order: Vec<String> = Vec::new();
    let mut by_author: HashMap<String, Vec<Tweet>> = HashMap::new();
    let mut seen_ids: HashMap<String, HashSet<String>> = HashMap::new();
    for tweet in tweets {
        let ids = seen_ids.entry(tweet.author_id.clone()).or_default();
        if !ids.insert(tweet.id.clone()) {
            return Err(Error::DuplicateTweetId {
                author_id: tweet.author_id,
                tweet_id: tweet.id,
            });
        }
        if !by_author.contains_key(&tweet.author_id) {
            order.push(tweet.author_id.clone());
        }
        by_author
            .entry(tweet.author_id.clone())
            .or_default()
            .push(tweet);
    }
    let feeds = order
        .into_iter()
        .map(|author_id| {
            let tweets = by_author.remove(&author_id).expect("author collected");
            UserFeed {
                author_id,
                tweets,
                class_label: None,
            }
        })
        .collect();
    Ok(Corpus {
        kind: CorpusKind::PerTweetLabeled,
        feeds,
        provenance,
    })
}

fn validate_tweet(
    path: &str,
    line: usize,
    id: &str,
    author_id: &str,
    text: &str,
) -> Result<()> {
    if id.is_empty() {
        return Err(Error::malformed(path, line, "empty tweet id"));
    }
    if author_id.is_empty() {
        return Err(Error::malformed(path, line, "empty author_id"));
    }
    if text.trim().is_empty() {
        return Err(Error::malformed(path, line, "empty tweet text"));
    }
    Ok(())
}

fn load_jsonl(path: &Path) -> Result<Corpus> {
    let content = read_to_string(path)?;
    let shown = path.display().to_string();
    let mut tweets = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            return Err(Error::malformed(&shown, lineno, "blank line"));
        }
        let tweet: Tweet = serde_json::from_str(line)
            .map_err(|e| Error::malformed(&shown, lineno, e.to_string()))?;
        validate_tweet(&shown, lineno, &tweet.id, &tweet.author_id, &tweet.text)?;
        if tweet.label.is_none() {
            return Err(Error::malformed(
                &shown,
                lineno,
                "label required in per-tweet-labeled input",
            ));
        }
        tweets.push(tweet);
    }
    assemble_per_tweet(
        tweets,
        Provenance {
            path: shown,
            format: CorpusFormat::Jsonl,
        },
    )
}

const TSV_HEADER: &str = "id\tauthor_id\tlabel\ttext";

fn unescape_tsv(field: &str, path: &str, line: usize) -> Result<String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            other => {
                return Err(Error::malformed(
                    path,
                    line,
                    format!("bad escape '\\{}'", other.map_or(String::new(), String::from)),
                ))
            }
        }
    }
    Ok(out)
}

fn load_tsv(path: &Path) -> Result<Corpus> {
    let content = read_to_string(path)?;
    let shown = path.display().to_string();
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == TSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::malformed(
                &shown,
                1,
                format!("expected header '{}', got '{}'", TSV_HEADER.escape_default(), header),
            ))
        }
        None => return Err(Error::malformed(&shown, 1, "missing header row")),
    }
    let mut tweets = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::malformed(
                &shown,
                lineno,
                format!("expected 4 tab-separated fields, got {}", fields.len()),
            ));
        }
        let label_num: u8 = fields[2]
            .parse()
            .map_err(|_| Error::malformed(&shown, lineno, format!("label '{}' not an integer", fields[2])))?;
        let label = Label::try_from(label_num)
            .map_err(|reason| Error::malformed(&shown, lineno, reason))?;
        let text = unescape_tsv(fields[3], &shown, lineno)?;
        validate_tweet(&shown, lineno, fields[0], fields[1], &text)?;
        tweets.push(Tweet {
            id: fields[0].to_string(),
            author_id: fields[1].to_string(),
            label: Some(label),
            text,
        });
    }
    assemble_per_tweet(
        tweets,
        Provenance {
            path: shown,
            format: CorpusFormat::Tsv,
        },
    )
}

const TRUTH_FILE: &str = "truth.txt";
const TRUTH_SEPARATOR: &str = ":::";

fn load_feed_dir(path: &Path) -> Result<Corpus> {
    let truth_path = path.join(TRUTH_FILE);
    let truth = read_to_string(&truth_path)?;
    let truth_shown = truth_path.display().to_string();

    let mut entries: Vec<(String, Label)> = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in truth.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (author, label_str) = line.split_once(TRUTH_SEPARATOR).ok_or_else(|| {
            Error::malformed(&truth_shown, lineno, "expected 'author_id:::label'")
        })?;
        let label_num: u8 = label_str.trim().parse().map_err(|_| {
            Error::malformed(&truth_shown, lineno, format!("label '{label_str}' not an integer"))
        })?;
        let label = Label::try_from(label_num)
            .map_err(|reason| Error::malformed(&truth_shown, lineno, reason))?;
        if !seen.insert(author.to_string()) {
            return Err(Error::DuplicateAuthor(author.to_string()));
        }
        entries.push((author.to_string(), label));
    }

    let mut feeds = Vec::with_capacity(entries.len());
    for (author_id, label) in &entries {
        let feed_path = path.join(format!("{author_id}.txt"));
        if !feed_path.is_file() {
            return Err(Error::MissingFeed(author_id.clone()));
        }
        let feed_shown = feed_path.display().to_string();
        let content = read_to_string(&feed_path)?;
        let mut tweets = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                return Err(Error::malformed(&feed_shown, lineno, "empty tweet text"));
            }
            tweets.push(Tweet {
                id: format!("{author_id}/{lineno}"),
                author_id: author_id.clone(),
                label: None,
                text: line.to_string(),
            });
        }
        if tweets.is_empty() {
            return Err(Error::malformed(&feed_shown, 1, "feed file has no tweets"));
        }
        feeds.push(UserFeed {
            author_id: author_id.clone(),
            tweets,
            class_label: Some(*label),
        });
    }

    // Feed files without a truth entry would silently vanish; reject them.
    for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
        let entry = entry.map_err(|e| Error::io(path, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name == TRUTH_FILE || !name.ends_with(".txt") {
            continue;
        }
        let author = name.trim_end_matches(".txt");
        if !entries.iter().any(|(a, _)| a == author) {
            return Err(Error::MissingTruthEntry(author.to_string()));
        }
    }

    Ok(Corpus {
        kind: CorpusKind::PerAuthorLabeled,
        feeds,
        provenance: Provenance {
            path: path.display().to_string(),
            format: CorpusFormat::FeedDir,
        },
    })
}
