//! Corpus-analysis toolkit for "us vs them" narrative profiling of Spanish
//! tweet collections.
//!
//! The pipeline ingests labeled tweet corpora ([`corpus`]), tags pronouns and
//! finite verbs with grammatical person using a rule-based Spanish lexicon
//! ([`tagger`]), aggregates per-tweet person percentages into per-user
//! profiles and an ingroup vs outgroup index ([`index`]), and compares groups
//! with a nonparametric test battery ([`stats`]). [`report`] wires the stages
//! together and renders human- and machine-readable result tables.

pub mod corpus;
pub mod error;
pub mod index;
pub mod report;
pub mod selftest;
pub mod stats;
pub mod tagger;

pub use error::{Error, Result};
