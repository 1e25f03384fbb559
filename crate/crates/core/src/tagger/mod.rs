//! Tokenization and rule-based grammatical-person tagging for Spanish text.
//!
//! Tagging is deliberately shallow: a pronoun table, a verb-form table and a
//! whitelist of conjugation endings, with no syntactic disambiguation. Verb
//! forms where Spanish morphology merges 1sg and 3sg (imperfect, conditional,
//! subjunctives) are reported as [`PersonTag::Verb`] with
//! [`VerbPerson::FirstOrThird`] and, by default, excluded from the person
//! tallies so they cannot bias a first-minus-third contrast. Unknown words
//! stay untagged; false negatives are acceptable, silent misassignment is
//! not.

mod lexicon;

pub use lexicon::{Lexicon, Person, SuffixRule, VerbPerson};

use serde::{Deserialize, Serialize};

/// Byte range of a token within the original tweet text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Url,
    Mention,
    Hashtag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Case-folded, de-elongated, accent-preserving lookup key.
    pub normalized: String,
    pub span: Span,
    pub kind: TokenKind,
}

impl Token {
    pub fn person_eligible(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PersonTag {
    Pronoun(Person),
    Verb(VerbPerson),
    NonPerson,
}

impl PersonTag {
    pub fn describe(&self) -> String {
        match self {
            PersonTag::Pronoun(Person::First) => "first/pronoun".into(),
            PersonTag::Pronoun(Person::Second) => "second/pronoun".into(),
            PersonTag::Pronoun(Person::Third) => "third/pronoun".into(),
            PersonTag::Verb(p) => format!("{p}/verb"),
            PersonTag::NonPerson => "nonperson".into(),
        }
    }
}

/// Per-tweet tally of person tags. `ambiguous` counts 1sg/3sg-syncretic verb
/// forms and is diagnostic; under [`AmbiguityPolicy::Third`] those forms are
/// also added to `third`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonCounts {
    pub first: u32,
    pub second: u32,
    pub third: u32,
    pub ambiguous: u32,
}

impl PersonCounts {
    pub fn total_unambiguous(&self) -> u32 {
        self.first + self.second + self.third
    }
}

impl std::ops::Add for PersonCounts {
    type Output = PersonCounts;

    fn add(self, rhs: PersonCounts) -> PersonCounts {
        PersonCounts {
            first: self.first + rhs.first,
            second: self.second + rhs.second,
            third: self.third + rhs.third,
            ambiguous: self.ambiguous + rhs.ambiguous,
        }
    }
}

/// What to do with 1sg/3sg-syncretic verb forms when tallying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbiguityPolicy {
    /// Keep them out of the person tallies (default; unbiased for a
    /// first-minus-third contrast).
    Exclude,
    /// Count them as third person, for sensitivity analysis.
    Third,
}

impl std::fmt::Display for AmbiguityPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AmbiguityPolicy::Exclude => write!(f, "exclude"),
            AmbiguityPolicy::Third => write!(f, "third"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggerConfig {
    pub ambiguity: AmbiguityPolicy,
    /// Tag usted/ustedes as second person (addressee) rather than third
    /// (their agreement morphology).
    pub polite_second: bool,
}

impl Default for TaggerConfig {
    fn default() -> Self {
        TaggerConfig {
            ambiguity: AmbiguityPolicy::Exclude,
            polite_second: true,
        }
    }
}

/// Splits on Unicode whitespace and punctuation. URLs, @-mentions and
/// hashtags survive as single tokens of their own kind so they can never
/// carry a person tag. Diacritics are preserved ("él" vs "el" is a person
/// distinction); case is folded and character runs of length >= 3 are
/// collapsed to 2 in the normalized form.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (chunk_start, chunk) in whitespace_chunks(text) {
        // Leading wrapper punctuation like quotes or inverted question marks
        // must not hide a mention/URL marker.
        let lead = chunk
            .char_indices()
            .find(|(_, c)| c.is_alphanumeric() || *c == '@' || *c == '#')
            .map(|(i, _)| i);
        let Some(lead) = lead else { continue };
        let trimmed = &chunk[lead..];
        let trimmed_start = chunk_start + lead;

        let kind = if trimmed.starts_with('@') {
            Some(TokenKind::Mention)
        } else if trimmed.starts_with('#') {
            Some(TokenKind::Hashtag)
        } else if is_url(trimmed) {
            Some(TokenKind::Url)
        } else {
            None
        };

        if let Some(kind) = kind {
            if trimmed.chars().count() > 1 {
                tokens.push(make_token(trimmed, trimmed_start, kind));
            }
            continue;
        }

        let mut run_start: Option<usize> = None;
        for (i, c) in trimmed.char_indices() {
            if c.is_alphanumeric() {
                if run_start.is_none() {
                    run_start = Some(i);
                }
            } else if let Some(s) = run_start.take() {
                tokens.push(make_token(&trimmed[s..i], trimmed_start + s, TokenKind::Word));
            }
        }
        if let Some(s) = run_start {
            tokens.push(make_token(&trimmed[s..], trimmed_start + s, TokenKind::Word));
        }
    }
    tokens
}

fn whitespace_chunks(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |chunk| (chunk.as_ptr() as usize - text.as_ptr() as usize, chunk))
}

fn is_url(chunk: &str) -> bool {
    let lower = chunk.to_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

fn make_token(surface: &str, start: usize, kind: TokenKind) -> Token {
    Token {
        surface: surface.to_string(),
        normalized: normalize(surface),
        span: Span {
            start,
            end: start + surface.len(),
        },
        kind,
    }
}

fn normalize(surface: &str) -> String {
    let mut out = String::with_capacity(surface.len());
    let mut prev: Option<char> = None;
    let mut run = 0usize;
    for c in surface.chars().flat_map(char::to_lowercase) {
        if Some(c) == prev {
            run += 1;
            if run >= 2 {
                continue;
            }
        } else {
            prev = Some(c);
            run = 0;
        }
        out.push(c);
    }
    out
}

/// Lookup order: pronoun table, then verb-form table, then suffix rules,
/// then NonPerson. Deterministic for a fixed lexicon and config.
pub fn tag_person(token: &Token, lexicon: &Lexicon, config: &TaggerConfig) -> PersonTag {
    if !token.person_eligible() {
        return PersonTag::NonPerson;
    }
    tag_normalized(&token.normalized, lexicon, config)
}

fn tag_normalized(normalized: &str, lexicon: &Lexicon, config: &TaggerConfig) -> PersonTag {
    use lexicon::{FormEntry, PronounEntry};

    if let Some(entry) = lexicon.pronoun(normalized) {
        return match entry {
            PronounEntry::Plain(person) => PersonTag::Pronoun(person),
            PronounEntry::PoliteSecond => {
                if config.polite_second {
                    PersonTag::Pronoun(Person::Second)
                } else {
                    PersonTag::Pronoun(Person::Third)
                }
            }
        };
    }
    if let Some(entry) = lexicon.form(normalized) {
        return match entry {
            FormEntry::Verb(person) => PersonTag::Verb(person),
            FormEntry::NonPerson => PersonTag::NonPerson,
        };
    }
    match lexicon.matching_rule(normalized) {
        Some(rule) => match rule.person {
            Some(person) => PersonTag::Verb(person),
            None => PersonTag::NonPerson,
        },
        None => PersonTag::NonPerson,
    }
}

/// Tokenizes `text` and tallies person tags under the configured policies.
pub fn count_persons(text: &str, lexicon: &Lexicon, config: &TaggerConfig) -> PersonCounts {
    let mut counts = PersonCounts::default();
    for token in tokenize(text) {
        match tag_person(&token, lexicon, config) {
            PersonTag::Pronoun(Person::First) | PersonTag::Verb(VerbPerson::First) => {
                counts.first += 1
            }
            PersonTag::Pronoun(Person::Second) | PersonTag::Verb(VerbPerson::Second) => {
                counts.second += 1
            }
            PersonTag::Pronoun(Person::Third) | PersonTag::Verb(VerbPerson::Third) => {
                counts.third += 1
            }
            PersonTag::Verb(VerbPerson::FirstOrThird) => {
                counts.ambiguous += 1;
                if config.ambiguity == AmbiguityPolicy::Third {
                    counts.third += 1;
                }
            }
            PersonTag::NonPerson => {}
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::default_spanish()
    }

    fn counts(text: &str) -> PersonCounts {
        count_persons(text, &lex(), &TaggerConfig::default())
    }

    fn tag(word: &str) -> PersonTag {
        let tokens = tokenize(word);
        assert_eq!(tokens.len(), 1, "expected single token for {word:?}");
        tag_person(&tokens[0], &lex(), &TaggerConfig::default())
    }

    #[test]
    fn tokenize_drops_punctuation() {
        let tokens = tokenize("Yo canto.");
        let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, vec!["Yo", "canto"]);
    }

    #[test]
    fn tokenize_empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t\n").is_empty());
    }

    #[test]
    fn tokenize_marks_urls_and_mentions() {
        let tokens = tokenize("ellos ganan https://x.co @ana");
        let eligible: Vec<&str> = tokens
            .iter()
            .filter(|t| t.person_eligible())
            .map(|t| t.surface.as_str())
            .collect();
        assert_eq!(eligible, vec!["ellos", "ganan"]);
        assert_eq!(tokens.len(), 4);
        assert_eq!(tokens[2].kind, TokenKind::Url);
        assert_eq!(tokens[3].kind, TokenKind::Mention);
    }

    #[test]
    fn tokenize_spans_are_ordered_and_in_bounds() {
        let text = "¿Tú?? ellos... https://a.b #tag @x yoooo";
        let tokens = tokenize(text);
        let mut prev_end = 0;
        for t in &tokens {
            assert!(t.span.start >= prev_end);
            assert!(t.span.end <= text.len());
            assert_eq!(&text[t.span.start..t.span.end], t.surface);
            prev_end = t.span.end;
        }
    }

    #[test]
    fn normalization_folds_case_and_elongation() {
        let tokens = tokenize("GOOOOL Siiii");
        assert_eq!(tokens[0].normalized, "gool");
        assert_eq!(tokens[1].normalized, "sii");
    }

    #[test]
    fn pronoun_lookup() {
        assert_eq!(tag("nosotros"), PersonTag::Pronoun(Person::First));
        assert_eq!(tag("Tú"), PersonTag::Pronoun(Person::Second));
        assert_eq!(tag("ellas"), PersonTag::Pronoun(Person::Third));
        assert_eq!(tag("conmigo"), PersonTag::Pronoun(Person::First));
        assert_eq!(tag("se"), PersonTag::Pronoun(Person::Third));
    }

    #[test]
    fn imperfect_is_ambiguous() {
        assert_eq!(tag("cantaba"), PersonTag::Verb(VerbPerson::FirstOrThird));
        assert_eq!(tag("tenía"), PersonTag::Verb(VerbPerson::FirstOrThird));
        assert_eq!(tag("haría"), PersonTag::Verb(VerbPerson::FirstOrThird));
    }

    #[test]
    fn unknown_word_is_nonperson() {
        assert_eq!(tag("mesa"), PersonTag::NonPerson);
        assert_eq!(tag("que"), PersonTag::NonPerson);
        assert_eq!(tag("programa"), PersonTag::NonPerson);
    }

    #[test]
    fn stop_forms_beat_suffix_rules() {
        assert_eq!(tag("día"), PersonTag::NonPerson);
        assert_eq!(tag("país"), PersonTag::NonPerson);
        assert_eq!(tag("bien"), PersonTag::NonPerson);
        assert_eq!(tag("detrás"), PersonTag::NonPerson);
        assert_eq!(tag("buenísimos"), PersonTag::NonPerson);
    }

    #[test]
    fn irregular_forms_resolve() {
        assert_eq!(tag("es"), PersonTag::Verb(VerbPerson::Third));
        assert_eq!(tag("somos"), PersonTag::Verb(VerbPerson::First));
        assert_eq!(tag("fueron"), PersonTag::Verb(VerbPerson::Third));
        assert_eq!(tag("sé"), PersonTag::Verb(VerbPerson::First));
        assert_eq!(tag("vaya"), PersonTag::Verb(VerbPerson::FirstOrThird));
    }

    #[test]
    fn suffix_rules_resolve_regulars() {
        assert_eq!(tag("ganamos"), PersonTag::Verb(VerbPerson::First));
        assert_eq!(tag("pierden"), PersonTag::Verb(VerbPerson::Third));
        assert_eq!(tag("hablaron"), PersonTag::Verb(VerbPerson::Third));
        assert_eq!(tag("ganaré"), PersonTag::Verb(VerbPerson::First));
        assert_eq!(tag("cantaste"), PersonTag::Verb(VerbPerson::Second));
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            counts("Nosotros ganamos y ellos pierden"),
            PersonCounts { first: 2, second: 0, third: 2, ambiguous: 0 }
        );
        assert_eq!(counts(""), PersonCounts::default());
        assert_eq!(
            counts("Tú sabes que yo cantaba"),
            PersonCounts { first: 1, second: 2, third: 0, ambiguous: 1 }
        );
    }

    #[test]
    fn accent_sensitivity() {
        let plain = counts("el dia");
        let accented = counts("él día");
        assert_eq!(plain, PersonCounts::default());
        assert_eq!(
            accented,
            PersonCounts { first: 0, second: 0, third: 1, ambiguous: 0 }
        );
    }

    #[test]
    fn polite_pronoun_flag() {
        let config = TaggerConfig { polite_second: false, ..TaggerConfig::default() };
        let c = count_persons("usted sabe", &lex(), &config);
        assert_eq!(c, PersonCounts { first: 0, second: 0, third: 2, ambiguous: 0 });
        let c = counts("usted sabe");
        assert_eq!(c, PersonCounts { first: 0, second: 1, third: 1, ambiguous: 0 });
    }

    #[test]
    fn ambiguity_policy_third() {
        let config = TaggerConfig { ambiguity: AmbiguityPolicy::Third, ..TaggerConfig::default() };
        let c = count_persons("cantaba mucho", &lex(), &config);
        assert_eq!(c, PersonCounts { first: 0, second: 0, third: 1, ambiguous: 1 });
    }

    #[test]
    fn concatenation_adds_counts() {
        let a = "Yo creo que nosotros podemos";
        let b = "ellos dicen que no según ellas";
        let joined = format!("{a} {b}");
        assert_eq!(counts(&joined), counts(a) + counts(b));
    }

    #[test]
    fn permutation_stability() {
        let words = ["yo", "gano", "ellos", "pierden", "siempre", "tú"];
        let forward = words.join(" ");
        let mut reversed = words;
        reversed.reverse();
        let backward = reversed.join(" ");
        assert_eq!(counts(&forward), counts(&backward));
    }
}
