//! Command-line interface: full analysis runs, token-tag dumps, index
//! exports, and the exact-vs-oracle selftest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ingroup_outgroup::corpus::{build_matched_splits, filter_feeds_by_size, load_corpus, CorpusFormat};
use ingroup_outgroup::index::{
    index_series_independent, index_series_matched, series_to_tsv, IndexConfig, ZeroTagPolicy,
};
use ingroup_outgroup::report::{
    render_table, run_analysis, AnalysisConfig, ComparisonMode, RenderFormat,
};
use ingroup_outgroup::selftest::run_selftest;
use ingroup_outgroup::stats::Alternative;
use ingroup_outgroup::tagger::{tag_person, tokenize, AmbiguityPolicy, Lexicon, TaggerConfig};

#[derive(Parser)]
#[command(
    name = "ingroup-outgroup",
    about = "Grammatical-person profiling of labeled tweet corpora with a nonparametric test battery",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write reports.
    Analyze(AnalyzeArgs),
    /// Dump token-level person tags for a text.
    Tag(TagArgs),
    /// Emit the per-user index series as TSV.
    Index(IndexArgs),
    /// Run the exact-vs-oracle verification suite.
    Selftest,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Jsonl,
    Tsv,
    Feeddir,
}

impl From<FormatArg> for CorpusFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Jsonl => CorpusFormat::Jsonl,
            FormatArg::Tsv => CorpusFormat::Tsv,
            FormatArg::Feeddir => CorpusFormat::FeedDir,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Matched,
    Groups,
}

impl From<ModeArg> for ComparisonMode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Matched => ComparisonMode::MatchedPairs,
            ModeArg::Groups => ComparisonMode::IndependentGroups,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AmbiguityArg {
    Exclude,
    Third,
}

impl From<AmbiguityArg> for AmbiguityPolicy {
    fn from(value: AmbiguityArg) -> Self {
        match value {
            AmbiguityArg::Exclude => AmbiguityPolicy::Exclude,
            AmbiguityArg::Third => AmbiguityPolicy::Third,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ZeroTagArg {
    Include,
    Exclude,
}

impl From<ZeroTagArg> for ZeroTagPolicy {
    fn from(value: ZeroTagArg) -> Self {
        match value {
            ZeroTagArg::Include => ZeroTagPolicy::Include,
            ZeroTagArg::Exclude => ZeroTagPolicy::Exclude,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AlternativeArg {
    #[value(name = "two-sided")]
    TwoSided,
    Less,
    Greater,
}

impl From<AlternativeArg> for Alternative {
    fn from(value: AlternativeArg) -> Self {
        match value {
            AlternativeArg::TwoSided => Alternative::TwoSided,
            AlternativeArg::Less => Alternative::Less,
            AlternativeArg::Greater => Alternative::Greater,
        }
    }
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file (jsonl/tsv) or directory (feeddir).
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum)]
    format: FormatArg,
    /// matched: per-author label split (per-tweet-labeled corpora);
    /// groups: label-0 vs label-1 authors (per-author-labeled corpora).
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Keep only feeds with at least this many tweets.
    #[arg(long, default_value_t = 0)]
    min_tweets: usize,
    /// Keep only feeds with at most this many tweets.
    #[arg(long)]
    max_tweets: Option<usize>,
    /// Treatment of 1sg/3sg-syncretic verb forms.
    #[arg(long, value_enum, default_value = "exclude")]
    ambiguity: AmbiguityArg,
    /// Whether tweets without person tags count toward per-user means.
    #[arg(long, value_enum, default_value = "include")]
    zero_tag: ZeroTagArg,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Direction for the label-1 side: less = label-1 scores below label-0.
    #[arg(long, value_enum, default_value = "two-sided")]
    alternative: AlternativeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for per-user tagging (results are identical for any
    /// worker count).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output directory for report.{json,txt,md,tsv} and index.tsv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TagArgs {
    /// Text to tokenize and tag.
    text: String,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Tag(args) => tag(args),
        Command::Index(args) => index(args),
        Command::Selftest => selftest(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut config = AnalysisConfig::new(
        args.corpus.corpus.display().to_string(),
        args.corpus.format.into(),
        args.corpus.mode.into(),
    );
    config.min_tweets = args.corpus.min_tweets;
    config.max_tweets = args.corpus.max_tweets;
    config.ambiguity = args.corpus.ambiguity.into();
    config.zero_tag = args.corpus.zero_tag.into();
    config.alternative = args.alternative.into();
    config.seed = args.seed;
    config.workers = args.workers.max(1);

    let report = run_analysis(&config)?;

    fs::create_dir_all(&args.out)?;
    let outputs = [
        ("report.json", RenderFormat::Json),
        ("report.txt", RenderFormat::Text),
        ("report.md", RenderFormat::Markdown),
        ("report.tsv", RenderFormat::Tsv),
    ];
    for (name, format) in outputs {
        fs::write(args.out.join(name), render_table(&report, format))?;
    }
    fs::write(args.out.join("index.tsv"), index_tsv_from(&config)?)?;

    print!("{}", render_table(&report, RenderFormat::Text));
    println!("reports written to {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn index_tsv_from(config: &AnalysisConfig) -> Result<String, Box<dyn std::error::Error>> {
    let lexicon = Lexicon::default_spanish();
    let corpus = load_corpus(Path::new(&config.corpus_path), config.format)?;
    let filtered = filter_feeds_by_size(
        &corpus,
        config.min_tweets,
        config.max_tweets.unwrap_or(usize::MAX),
    )?;
    let index_config = IndexConfig {
        tagger: TaggerConfig {
            ambiguity: config.ambiguity,
            polite_second: config.polite_second,
        },
        zero_tag: config.zero_tag,
    };
    let series = match config.mode {
        ComparisonMode::MatchedPairs => {
            let splits = build_matched_splits(&filtered.corpus)?;
            index_series_matched(&splits.splits, &lexicon, &index_config, config.workers)?
        }
        ComparisonMode::IndependentGroups => {
            index_series_independent(&filtered.corpus, &lexicon, &index_config, config.workers)?
        }
    };
    Ok(series_to_tsv(&series))
}

fn tag(args: TagArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let lexicon = Lexicon::default_spanish();
    let config = TaggerConfig::default();
    println!("surface\tnormalized\tspan\tkind\ttag");
    for token in tokenize(&args.text) {
        let tag = tag_person(&token, &lexicon, &config);
        println!(
            "{}\t{}\t{}..{}\t{:?}\t{}",
            token.surface,
            token.normalized,
            token.span.start,
            token.span.end,
            token.kind,
            tag.describe()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn index(args: IndexArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut config = AnalysisConfig::new(
        args.corpus.corpus.display().to_string(),
        args.corpus.format.into(),
        args.corpus.mode.into(),
    );
    config.min_tweets = args.corpus.min_tweets;
    config.max_tweets = args.corpus.max_tweets;
    config.ambiguity = args.corpus.ambiguity.into();
    config.zero_tag = args.corpus.zero_tag.into();

    let tsv = index_tsv_from(&config)?;
    match args.out {
        Some(path) => fs::write(path, tsv)?,
        None => print!("{tsv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn selftest() -> Result<ExitCode, Box<dyn std::error::Error>> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let report = run_selftest(&mut lock)?;
    writeln!(lock, "{} passed, {} failed", report.passed, report.failed)?;
    Ok(if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
