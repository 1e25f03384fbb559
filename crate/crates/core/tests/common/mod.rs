//! Synthetic corpus builders shared by the integration suites.
//!
//! Tweets are drawn from template pools that carry purely first-person or
//! purely third-person tags under the default lexicon, so a user's index is
//! 100 * (first-template fraction - third-template fraction).

// Each integration test target compiles its own view of this module.
#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ingroup_outgroup::corpus::{Corpus, CorpusFormat, CorpusKind, Label, Provenance, Tweet, UserFeed};

pub const FIRST_TEMPLATES: &[&str] = &[
    "Nosotros ganamos con trabajo",
    "Yo creo en nuestro proyecto",
    "Vamos a construir juntos",
    "Tenemos un plan serio",
    "Sabemos ganar siempre",
    "Yo defiendo mi tierra",
    "Hoy celebramos nuestra victoria",
    "Podemos cambiar el rumbo",
    "Apostamos por el futuro",
    "Seguiremos adelante sin miedo",
];

pub const THIRD_TEMPLATES: &[&str] = &[
    "Ellos mienten sin descanso",
    "Ellas dicen cosas falsas",
    "Se esconden del pueblo",
    "Él nunca cumple nada",
    "Hablan mal del barrio",
    "Ellos roban el futuro",
    "Les gusta el poder",
    "Ella engaña a todos",
    "Dicen que van a volver",
    "Ocultan la verdad entera",
];

/// Zero person tags under the default lexicon.
pub const NEUTRAL_TEMPLATES: &[&str] = &[
    "Todo sigue igual",
    "Nada cambia aquí",
    "Otro martes cualquiera",
];

fn draw_text(rng: &mut ChaCha8Rng, p_third: f64) -> String {
    if rng.gen_bool(p_third) {
        THIRD_TEMPLATES[rng.gen_range(0..THIRD_TEMPLATES.len())].to_string()
    } else {
        FIRST_TEMPLATES[rng.gen_range(0..FIRST_TEMPLATES.len())].to_string()
    }
}

fn provenance() -> Provenance {
    Provenance {
        path: "<synthetic>".into(),
        format: CorpusFormat::Jsonl,
    }
}

/// Per-author-labeled corpus: `users_per_group` authors with label 0 drawing
/// third-person templates with probability `p_third_group0`, and the same
/// for label 1.
pub fn independent_corpus(
    seed: u64,
    users_per_group: usize,
    tweets_per_user: usize,
    p_third_group0: f64,
    p_third_group1: f64,
) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feeds = Vec::new();
    for (group, p_third) in [(0u8, p_third_group0), (1u8, p_third_group1)] {
        for u in 0..users_per_group {
            let author_id = format!("g{group}_u{u:03}");
            let tweets = (0..tweets_per_user)
                .map(|t| Tweet {
                    id: format!("{t}"),
                    author_id: author_id.clone(),
                    label: None,
                    text: draw_text(&mut rng, p_third),
                })
                .collect();
            feeds.push(UserFeed {
                author_id,
                tweets,
                class_label: Some(Label::try_from(group).unwrap()),
            });
        }
    }
    Corpus {
        kind: CorpusKind::PerAuthorLabeled,
        feeds,
        provenance: provenance(),
    }
}

/// Null-calibration corpus: every author draws from the same distribution,
/// labels are a random but exactly balanced split.
pub fn null_corpus(seed: u64, users_per_group: usize, tweets_per_user: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = users_per_group * 2;
    let mut labels: Vec<u8> = (0..total).map(|i| (i % 2) as u8).collect();
    // Fisher-Yates with the seeded rng
    for i in (1..total).rev() {
        let j = rng.gen_range(0..=i);
        labels.swap(i, j);
    }
    let feeds = labels
        .into_iter()
        .enumerate()
        .map(|(u, label)| {
            let author_id = format!("u{u:03}");
            let tweets = (0..tweets_per_user)
                .map(|t| Tweet {
                    id: format!("{t}"),
                    author_id: author_id.clone(),
                    label: None,
                    text: draw_text(&mut rng, 0.5),
                })
                .collect();
            UserFeed {
                author_id,
                tweets,
                class_label: Some(Label::try_from(label).unwrap()),
            }
        })
        .collect();
    Corpus {
        kind: CorpusKind::PerAuthorLabeled,
        feeds,
        provenance: provenance(),
    }
}

/// Per-tweet-labeled corpus: each author gets `tweets_per_subset` label-0
/// tweets drawing third templates with probability `p_third_label0`, and the
/// same for label 1.
pub fn matched_corpus(
    seed: u64,
    authors: usize,
    tweets_per_subset: usize,
    p_third_label0: f64,
    p_third_label1: f64,
) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feeds = Vec::new();
    for u in 0..authors {
        let author_id = format!("pol{u:03}");
        let mut tweets = Vec::new();
        for (label, p_third) in [(0u8, p_third_label0), (1u8, p_third_label1)] {
            for t in 0..tweets_per_subset {
                tweets.push(Tweet {
                    id: format!("{label}-{t}"),
                    author_id: author_id.clone(),
                    label: Some(Label::try_from(label).unwrap()),
                    text: draw_text(&mut rng, p_third),
                });
            }
        }
        feeds.push(UserFeed {
            author_id,
            tweets,
            class_label: None,
        });
    }
    Corpus {
        kind: CorpusKind::PerTweetLabeled,
        feeds,
        provenance: provenance(),
    }
}

/// Writes a per-author-labeled corpus in the FeedDir layout.
pub fn write_feed_dir(corpus: &Corpus, dir: &Path) {
    let mut truth = String::new();
    for feed in &corpus.feeds {
        truth.push_str(&format!(
            "{}:::{}\n",
            feed.author_id,
            feed.class_label.expect("labeled feed")
        ));
        let mut body = String::new();
        for tweet in &feed.tweets {
            body.push_str(&tweet.text);
            body.push('\n');
        }
        fs::write(dir.join(format!("{}.txt", feed.author_id)), body).unwrap();
    }
    fs::write(dir.join("truth.txt"), truth).unwrap();
}
