//! Lexicon tables: pronoun inventory, verb-form table, suffix rules.
//!
//! The on-disk format is line oriented UTF-8. `form<TAB>class` lines feed
//! the exact-match tables, `suffix<TAB>tense<TAB>person` lines feed the
//! conjugation-ending rules, and `#` starts a comment. A comment of the form
//! `# version: <string>` names the lexicon version that gets embedded in
//! reports.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Grammatical person of an unambiguous pronoun or verb form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Person {
    First,
    Second,
    Third,
}

/// Person resolution for a finite verb form. Spanish syncretism (imperfect,
/// conditional, subjunctives) collapses 1sg and 3sg into one surface form,
/// which gets its own class instead of a forced guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerbPerson {
    First,
    Second,
    Third,
    FirstOrThird,
}

impl fmt::Display for VerbPerson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerbPerson::First => write!(f, "first"),
            VerbPerson::Second => write!(f, "second"),
            VerbPerson::Third => write!(f, "third"),
            VerbPerson::FirstOrThird => write!(f, "first-or-third"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PronounEntry {
    Plain(Person),
    /// usted/ustedes: semantically an addressee, morphologically third
    /// person. The tagger config decides which reading wins.
    PoliteSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FormEntry {
    Verb(VerbPerson),
    /// Non-verb pinned here because its ending collides with a suffix rule.
    NonPerson,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: String,
    pub tense: String,
    pub person: Option<VerbPerson>,
}

/// Immutable lookup tables; safe to share across parallel taggers.
#[derive(Debug, Clone)]
pub struct Lexicon {
    version: String,
    pronouns: HashMap<String, PronounEntry>,
    forms: HashMap<String, FormEntry>,
    rules: Vec<SuffixRule>,
}

const DEFAULT_LEXICON: &str = include_str!("../../data/es_default.lex");

impl Lexicon {
    /// The Spanish lexicon shipped with the crate.
    pub fn default_spanish() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("shipped lexicon parses")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content)
    }

    pub fn parse(content: &str) -> Result<Self> {
        let mut version = String::from("unversioned");
        let mut pronouns: HashMap<String, PronounEntry> = HashMap::new();
        let mut forms: HashMap<String, FormEntry> = HashMap::new();
        let mut rules: Vec<SuffixRule> = Vec::new();

        for (idx, raw) in content.lines().enumerate() {
            let lineno = idx + 1;
            if let Some(comment) = raw.trim_start().strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version = v.trim().to_string();
                }
                continue;
            }
            let line = raw.trim_end();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                [form, class] => {
                    parse_table_entry(form, class, lineno, &mut pronouns, &mut forms)?
                }
                [suffix, tense, person] => {
                    if suffix.is_empty() {
                        return Err(Error::LexiconParse {
                            line: lineno,
                            reason: "empty suffix".into(),
                        });
                    }
                    if rules.iter().any(|r| r.suffix == *suffix) {
                        return Err(Error::LexiconConflict {
                            form: (*suffix).to_string(),
                            existing: "suffix rule".into(),
                            conflicting: "suffix rule".into(),
                        });
                    }
                    rules.push(SuffixRule {
                        suffix: (*suffix).to_string(),
                        tense: (*tense).to_string(),
                        person: parse_rule_person(person, lineno)?,
                    });
                }
                _ => {
                    return Err(Error::LexiconParse {
                        line: lineno,
                        reason: format!("expected 2 or 3 tab-separated fields, got {}", fields.len()),
                    })
                }
            }
        }

        // Longest suffix wins; ties cannot happen (duplicates rejected).
        rules.sort_by(|a, b| {
            b.suffix
                .len()
                .cmp(&a.suffix.len())
                .then_with(|| a.suffix.cmp(&b.suffix))
        });

        Ok(Lexicon {
            version,
            pronouns,
            forms,
            rules,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub(crate) fn pronoun(&self, normalized: &str) -> Option<PronounEntry> {
        self.pronouns.get(normalized).copied()
    }

    pub(crate) fn form(&self, normalized: &str) -> Option<FormEntry> {
        self.forms.get(normalized).copied()
    }

    /// First (longest) rule whose suffix is a strict suffix of the token.
    pub(crate) fn matching_rule(&self, normalized: &str) -> Option<&SuffixRule> {
        self.rules
            .iter()
            .find(|r| normalized.len() > r.suffix.len() && normalized.ends_with(r.suffix.as_str()))
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn entry_count(&self) -> usize {
        self.pronouns.len() + self.forms.len()
    }
}

fn parse_table_entry(
    form: &str,
    class: &str,
    lineno: usize,
    pronouns: &mut HashMap<String, PronounEntry>,
    forms: &mut HashMap<String, FormEntry>,
) -> Result<()> {
    if form.is_empty() {
        return Err(Error::LexiconParse {
            line: lineno,
            reason: "empty form".into(),
        });
    }
    let conflict = |existing: &str| Error::LexiconConflict {
        form: form.to_string(),
        existing: existing.to_string(),
        conflicting: class.to_string(),
    };
    match class {
        "pronoun:first" | "pronoun:second" | "pronoun:third" | "pronoun:polite-second" => {
            if forms.contains_key(form) {
                return Err(conflict("verb/nonperson table"));
            }
            let entry = match class {
                "pronoun:first" => PronounEntry::Plain(Person::First),
                "pronoun:second" => PronounEntry::Plain(Person::Second),
                "pronoun:third" => PronounEntry::Plain(Person::Third),
                _ => PronounEntry::PoliteSecond,
            };
            if pronouns.insert(form.to_string(), entry).is_some() {
                return Err(conflict("pronoun table"));
            }
        }
        "verb:first" | "verb:second" | "verb:third" | "verb:first-or-third" | "nonperson" => {
            if pronouns.contains_key(form) {
                return Err(conflict("pronoun table"));
            }
            let entry = match class {
                "verb:first" => FormEntry::Verb(VerbPerson::First),
                "verb:second" => FormEntry::Verb(VerbPerson::Second),
                "verb:third" => FormEntry::Verb(VerbPerson::Third),
                "verb:first-or-third" => FormEntry::Verb(VerbPerson::FirstOrThird),
                _ => FormEntry::NonPerson,
            };
            if forms.insert(form.to_string(), entry).is_some() {
                return Err(conflict("verb/nonperson table"));
            }
        }
        other => {
            return Err(Error::LexiconParse {
                line: lineno,
                reason: format!("unknown class '{other}'"),
            })
        }
    }
    Ok(())
}

fn parse_rule_person(person: &str, lineno: usize) -> Result<Option<VerbPerson>> {
    match person {
        "first" => Ok(Some(VerbPerson::First)),
        "second" => Ok(Some(VerbPerson::Second)),
        "third" => Ok(Some(VerbPerson::Third)),
        "first-or-third" => Ok(Some(VerbPerson::FirstOrThird)),
        "nonperson" => Ok(None),
        other => Err(Error::LexiconParse {
            line: lineno,
            reason: format!("unknown rule person '{other}'"),
        }),
    }
}
