//! Per-tweet person percentages, per-user profiles, and the ingroup vs
//! outgroup index (mean first-person percentage minus mean third-person
//! percentage, on a 0-100 scale).
//!
//! A positive index means the author talks mostly in the first person
//! (self/own group); a negative one means the focus is on others.

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, CorpusKind, Label, MatchedSplit, Tweet};
use crate::error::{Error, Result};
use crate::tagger::{count_persons, Lexicon, PersonCounts, TaggerConfig};

/// Share of each person category among a tweet's person tags, in [0, 100].
/// A tweet without unambiguous person tags is all zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersonPercentages {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonProfile {
    pub author_id: String,
    pub subset_tag: Option<String>,
    /// Arithmetic means of the per-tweet percentages over `n_tweets`.
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub n_tweets: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexScore {
    pub author_id: String,
    pub subset_tag: Option<String>,
    /// `p1 - p3` of the profile; always in [-100, 100].
    pub value: f64,
}

/// Whether tweets with zero person tags stay in the per-user denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroTagPolicy {
    /// Count them as 0% in every category (default; keeps the stated
    /// per-user denominator "number of tweets").
    Include,
    /// Drop them before averaging.
    Exclude,
}

impl std::fmt::Display for ZeroTagPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZeroTagPolicy::Include => write!(f, "include"),
            ZeroTagPolicy::Exclude => write!(f, "exclude"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexConfig {
    pub tagger: TaggerConfig,
    pub zero_tag: ZeroTagPolicy,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            tagger: TaggerConfig::default(),
            zero_tag: ZeroTagPolicy::Include,
        }
    }
}

pub fn tweet_percentages(counts: &PersonCounts) -> PersonPercentages {
    let total = counts.total_unambiguous();
    if total == 0 {
        return PersonPercentages { p1: 0.0, p2: 0.0, p3: 0.0 };
    }
    let total = f64::from(total);
    PersonPercentages {
        p1: 100.0 * f64::from(counts.first) / total,
        p2: 100.0 * f64::from(counts.second) / total,
        p3: 100.0 * f64::from(counts.third) / total,
    }
}

/// Compensated summation so per-user means do not depend on how the tweet
/// stream was chunked. Tweets are always summed in feed order.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

pub fn user_profile(
    author_id: &str,
    subset_tag: Option<&str>,
    percentages: &[PersonPercentages],
) -> Result<PersonProfile> {
    if percentages.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no tweets to aggregate for author '{author_id}'"
        )));
    }
    let mut s1 = KahanSum::default();
    let mut s2 = KahanSum::default();
    let mut s3 = KahanSum::default();
    for p in percentages {
        s1.add(p.p1);
        s2.add(p.p2);
        s3.add(p.p3);
    }
    let n = percentages.len() as f64;
    Ok(PersonProfile {
        author_id: author_id.to_string(),
        subset_tag: subset_tag.map(str::to_string),
        p1: s1.value() / n,
        p2: s2.value() / n,
        p3: s3.value() / n,
        n_tweets: percentages.len(),
    })
}

pub fn ingroup_outgroup_index(profile: &PersonProfile) -> IndexScore {
    IndexScore {
        author_id: profile.author_id.clone(),
        subset_tag: profile.subset_tag.clone(),
        value: profile.p1 - profile.p3,
    }
}

/// One comparison side: aligned profiles and scores plus raw bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesGroup {
    pub name: String,
    pub profiles: Vec<PersonProfile>,
    pub scores: Vec<IndexScore>,
    /// Ingested tweets feeding this side, before any zero-tag drop.
    pub tweet_count: usize,
}

impl SeriesGroup {
    pub fn values(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.value).collect()
    }
}

/// The two comparison series for a corpus, either independent author groups
/// or per-author matched subsets (order-aligned for paired testing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSeries {
    pub paired: bool,
    /// label-0 side first, label-1 side second.
    pub groups: [SeriesGroup; 2],
    pub warnings: Vec<String>,
}

pub const GROUP_ZERO: &str = "label_0";
pub const GROUP_ONE: &str = "label_1";

fn tweets_to_percentages(
    tweets: &[Tweet],
    lexicon: &Lexicon,
    config: &IndexConfig,
) -> Vec<PersonPercentages> {
    tweets
        .iter()
        .map(|t| tweet_percentages(&count_persons(&t.text, lexicon, &config.tagger)))
        .filter(|p| {
            config.zero_tag == ZeroTagPolicy::Include || p.p1 + p.p2 + p.p3 > 0.0
        })
        .collect()
}

/// Maps `f` over `items`, preserving order. With more than one worker the
/// map fans out over a dedicated thread pool; per-item work is pure, so the
/// result is identical to the sequential path.
pub(crate) fn map_ordered<T, U, F>(items: &[T], workers: usize, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(f).collect())
}

/// Scores per user, grouped by author class label. Requires a
/// per-author-labeled corpus.
pub fn index_series_independent(
    corpus: &Corpus,
    lexicon: &Lexicon,
    config: &IndexConfig,
    workers: usize,
) -> Result<IndexSeries> {
    if corpus.kind != CorpusKind::PerAuthorLabeled {
        return Err(Error::WrongCorpusKind {
            expected: CorpusKind::PerAuthorLabeled.to_string(),
            found: corpus.kind.to_string(),
        });
    }
    let mut warnings = Vec::new();
    if corpus.feeds.is_empty() {
        warnings.push("empty corpus: no feeds to score".to_string());
    }

    let scored = map_ordered(&corpus.feeds, workers, |feed| {
        let label = feed.class_label.ok_or_else(|| Error::WrongCorpusKind {
            expected: "class label on every feed".into(),
            found: format!("unlabeled feed '{}'", feed.author_id),
        })?;
        let percentages = tweets_to_percentages(&feed.tweets, lexicon, config);
        let profile = if percentages.is_empty() {
            None
        } else {
            Some(user_profile(&feed.author_id, None, &percentages)?)
        };
        Ok((label, profile))
    })?;

    let mut groups = [
        SeriesGroup { name: GROUP_ZERO.into(), profiles: vec![], scores: vec![], tweet_count: 0 },
        SeriesGroup { name: GROUP_ONE.into(), profiles: vec![], scores: vec![], tweet_count: 0 },
    ];
    for (feed, (label, profile)) in corpus.feeds.iter().zip(scored) {
        let slot = match label {
            Label::Zero => &mut groups[0],
            Label::One => &mut groups[1],
        };
        match profile {
            Some(profile) => {
                // Raw ingested tweets of scored users, before the zero-tag drop.
                slot.tweet_count += feed.tweets.len();
                slot.scores.push(ingroup_outgroup_index(&profile));
                slot.profiles.push(profile);
            }
            None => warnings.push(format!(
                "author '{}' skipped: no tweets left under zero-tag policy",
                feed.author_id
            )),
        }
    }
    Ok(IndexSeries { paired: false, groups, warnings })
}

/// Two order-aligned score vectors, one entry per author: subset_a (label 0)
/// and subset_b (label 1).
pub fn index_series_matched(
    splits: &[MatchedSplit],
    lexicon: &Lexicon,
    config: &IndexConfig,
    workers: usize,
) -> Result<IndexSeries> {
    let mut warnings = Vec::new();
    if splits.is_empty() {
        warnings.push("empty corpus: no matched splits to score".to_string());
    }

    let scored = map_ordered(splits, workers, |split| {
        let pct_a = tweets_to_percentages(&split.subset_a, lexicon, config);
        let pct_b = tweets_to_percentages(&split.subset_b, lexicon, config);
        if pct_a.is_empty() || pct_b.is_empty() {
            return Ok(None);
        }
        let profile_a = user_profile(&split.author_id, Some(GROUP_ZERO), &pct_a)?;
        let profile_b = user_profile(&split.author_id, Some(GROUP_ONE), &pct_b)?;
        Ok(Some((profile_a, profile_b)))
    })?;

    let mut groups = [
        SeriesGroup { name: GROUP_ZERO.into(), profiles: vec![], scores: vec![], tweet_count: 0 },
        SeriesGroup { name: GROUP_ONE.into(), profiles: vec![], scores: vec![], tweet_count: 0 },
    ];
    for (split, outcome) in splits.iter().zip(scored) {
        match outcome {
            Some((profile_a, profile_b)) => {
                groups[0].tweet_count += split.subset_a.len();
                groups[1].tweet_count += split.subset_b.len();
                groups[0].scores.push(ingroup_outgroup_index(&profile_a));
                groups[1].scores.push(ingroup_outgroup_index(&profile_b));
                groups[0].profiles.push(profile_a);
                groups[1].profiles.push(profile_b);
            }
            None => warnings.push(format!(
                "author '{}' skipped: one subset has no tweets left under zero-tag policy",
                split.author_id
            )),
        }
    }
    Ok(IndexSeries { paired: true, groups, warnings })
}

pub const INDEX_TSV_HEADER: &str = "author_id\tsubset_or_class\tP1\tP2\tP3\tindex\tn_tweets";

/// Full-precision TSV export of an index series.
pub fn series_to_tsv(series: &IndexSeries) -> String {
    let mut out = String::from(INDEX_TSV_HEADER);
    out.push('\n');
    for group in &series.groups {
        for (profile, score) in group.profiles.iter().zip(&group.scores) {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                profile.author_id,
                profile.subset_tag.as_deref().unwrap_or(&group.name),
                profile.p1,
                profile.p2,
                profile.p3,
                score.value,
                profile.n_tweets
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusFormat, Provenance, UserFeed};

    fn pc(first: u32, second: u32, third: u32) -> PersonCounts {
        PersonCounts { first, second, third, ambiguous: 0 }
    }

    #[test]
    fn percentages_basic() {
        let p = tweet_percentages(&pc(2, 0, 2));
        assert_eq!((p.p1, p.p2, p.p3), (50.0, 0.0, 50.0));
    }

    #[test]
    fn percentages_zero_tags() {
        let p = tweet_percentages(&pc(0, 0, 0));
        assert_eq!((p.p1, p.p2, p.p3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn percentages_thirds() {
        let p = tweet_percentages(&pc(1, 1, 1));
        assert!((p.p1 - 100.0 / 3.0).abs() < 1e-12);
        assert!((p.p2 - 100.0 / 3.0).abs() < 1e-12);
        assert!((p.p3 - 100.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn profile_averages() {
        let profile = user_profile(
            "u",
            None,
            &[
                PersonPercentages { p1: 100.0, p2: 0.0, p3: 0.0 },
                PersonPercentages { p1: 0.0, p2: 0.0, p3: 100.0 },
            ],
        )
        .unwrap();
        assert_eq!((profile.p1, profile.p2, profile.p3), (50.0, 0.0, 50.0));
        assert_eq!(profile.n_tweets, 2);
    }

    #[test]
    fn profile_zero_tag_tweet_dilutes() {
        let profile = user_profile(
            "u",
            None,
            &[
                PersonPercentages { p1: 50.0, p2: 0.0, p3: 50.0 },
                PersonPercentages { p1: 0.0, p2: 0.0, p3: 0.0 },
            ],
        )
        .unwrap();
        assert_eq!((profile.p1, profile.p2, profile.p3), (25.0, 0.0, 25.0));
    }

    #[test]
    fn profile_single_tweet_identity() {
        let p = PersonPercentages { p1: 20.0, p2: 30.0, p3: 50.0 };
        let profile = user_profile("u", None, &[p]).unwrap();
        assert_eq!((profile.p1, profile.p2, profile.p3), (20.0, 30.0, 50.0));
        assert_eq!(profile.n_tweets, 1);
    }

    #[test]
    fn profile_empty_errors() {
        assert!(matches!(user_profile("u", None, &[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn independent_series_groups_by_class_label() {
        let feed = |author: &str, label: u8| UserFeed {
            author_id: author.into(),
            tweets: vec![Tweet {
                id: "0".into(),
                author_id: author.into(),
                label: None,
                text: "Nosotros ganamos".into(),
            }],
            class_label: Some(Label::try_from(label).unwrap()),
        };
        let mut feeds: Vec<UserFeed> = (0..138).map(|i| feed(&format!("n{i}"), 0)).collect();
        feeds.extend((0..146).map(|i| feed(&format!("s{i}"), 1)));
        let corpus = Corpus {
            kind: CorpusKind::PerAuthorLabeled,
            feeds,
            provenance: Provenance { path: "<memory>".into(), format: CorpusFormat::FeedDir },
        };
        let series = index_series_independent(
            &corpus,
            &Lexicon::default_spanish(),
            &IndexConfig::default(),
            1,
        )
        .unwrap();
        assert_eq!(series.groups[0].scores.len(), 138);
        assert_eq!(series.groups[1].scores.len(), 146);
        assert!(series.warnings.is_empty());
    }

    #[test]
    fn empty_independent_corpus_warns() {
        let corpus = Corpus {
            kind: CorpusKind::PerAuthorLabeled,
            feeds: vec![],
            provenance: Provenance { path: "<memory>".into(), format: CorpusFormat::FeedDir },
        };
        let series = index_series_independent(
            &corpus,
            &Lexicon::default_spanish(),
            &IndexConfig::default(),
            1,
        )
        .unwrap();
        assert!(series.groups[0].scores.is_empty());
        assert!(series.warnings.iter().any(|w| w.contains("empty corpus")));
    }

    #[test]
    fn zero_tag_exclude_drops_tagless_tweets() {
        let tweets = vec![
            Tweet { id: "0".into(), author_id: "u".into(), label: None, text: "Nosotros ganamos".into() },
            Tweet { id: "1".into(), author_id: "u".into(), label: None, text: "nada nuevo".into() },
        ];
        let corpus = Corpus {
            kind: CorpusKind::PerAuthorLabeled,
            feeds: vec![
                UserFeed { author_id: "u".into(), tweets, class_label: Some(Label::Zero) },
                UserFeed {
                    author_id: "v".into(),
                    tweets: vec![Tweet { id: "0".into(), author_id: "v".into(), label: None, text: "Ellos mienten".into() }],
                    class_label: Some(Label::Zero),
                },
            ],
            provenance: Provenance { path: "<memory>".into(), format: CorpusFormat::FeedDir },
        };
        let lexicon = Lexicon::default_spanish();
        let include = index_series_independent(&corpus, &lexicon, &IndexConfig::default(), 1).unwrap();
        assert_eq!(include.groups[0].profiles[0].n_tweets, 2);
        assert_eq!(include.groups[0].scores[0].value, 50.0);

        let config = IndexConfig { zero_tag: ZeroTagPolicy::Exclude, ..IndexConfig::default() };
        let exclude = index_series_independent(&corpus, &lexicon, &config, 1).unwrap();
        assert_eq!(exclude.groups[0].profiles[0].n_tweets, 1);
        assert_eq!(exclude.groups[0].scores[0].value, 100.0);
    }

    #[test]
    fn index_is_first_minus_third() {
        let profile = PersonProfile {
            author_id: "u".into(),
            subset_tag: None,
            p1: 30.0,
            p2: 25.0,
            p3: 45.0,
            n_tweets: 3,
        };
        assert_eq!(ingroup_outgroup_index(&profile).value, -15.0);
    }

    #[test]
    fn index_symmetry_and_bounds() {
        for x in [0.0, 13.7, 100.0] {
            let profile = PersonProfile {
                author_id: "u".into(),
                subset_tag: None,
                p1: x,
                p2: 0.0,
                p3: x,
                n_tweets: 1,
            };
            assert_eq!(ingroup_outgroup_index(&profile).value, 0.0);
        }
        let all_first = PersonProfile {
            author_id: "u".into(),
            subset_tag: None,
            p1: 100.0,
            p2: 0.0,
            p3: 0.0,
            n_tweets: 1,
        };
        assert_eq!(ingroup_outgroup_index(&all_first).value, 100.0);
    }
}
