use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sarkas::corpus::{read_jsonl, read_jsonl_from, to_jsonl};
use sarkas::evaluation::{
    evaluate, experiment_method, experiment_sarcasm, experiment_sentiment_score,
    generate_synthetic_corpus, CorpusSpec, ExperimentConfig, ExperimentReport, Metrics,
};
use sarkas::lexicon::{load_lexicon, overlay_aux_lists, AuxPaths};
use sarkas::normalizer::normalize;
use sarkas::pipeline::train_pipeline;
use sarkas::{
    Algorithm, AuxLists, FeatureMode, Pipeline, PipelineConfig, SentimentLexicon, Stage1Method,
};

#[derive(Parser)]
#[command(
    name = "sarkas",
    version,
    about = "Indonesian sentiment analysis with sarcasm detection"
)]
struct Cli {
    #[command(flatten)]
    resources: ResourceArgs,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads for experiment cells.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

/// Resource files; the bundled copy is used for any that is not given.
#[derive(Args)]
struct ResourceArgs {
    /// Sentiment lexicon (term, pos, neg) replacing the bundled one
    #[arg(long, global = true, value_name = "TSV")]
    lexicon: Option<PathBuf>,
    /// Informal to formal word map
    #[arg(long, global = true, value_name = "TSV")]
    informal_dict: Option<PathBuf>,
    /// Negation word list
    #[arg(long, global = true, value_name = "FILE")]
    negations: Option<PathBuf>,
    /// Interjection word list
    #[arg(long, global = true, value_name = "FILE")]
    interjections: Option<PathBuf>,
    /// Question word list
    #[arg(long, global = true, value_name = "FILE")]
    question_words: Option<PathBuf>,
    /// Context, target and signed score rows
    #[arg(long, global = true, value_name = "TSV")]
    context_overrides: Option<PathBuf>,
    /// Term and signed score rows
    #[arg(long, global = true, value_name = "TSV")]
    affix_overrides: Option<PathBuf>,
}

impl ResourceArgs {
    fn lexicon(&self) -> Result<SentimentLexicon> {
        match &self.lexicon {
            Some(p) => Ok(load_lexicon(p)?),
            None => Ok(SentimentLexicon::bundled()),
        }
    }

    fn aux(&self) -> Result<AuxLists> {
        let paths = AuxPaths {
            informal_dict: self.informal_dict.clone(),
            negations: self.negations.clone(),
            interjections: self.interjections.clone(),
            question_words: self.question_words.clone(),
            context_overrides: self.context_overrides.clone(),
            affix_overrides: self.affix_overrides.clone(),
        };
        Ok(overlay_aux_lists(AuxLists::bundled(), &paths)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lexical,
    Score,
}

impl From<ModeArg> for FeatureMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Lexical => FeatureMode::Lexical,
            ModeArg::Score => FeatureMode::Score,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Leveled,
}

impl From<MethodArg> for Stage1Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Stage1Method::Direct,
            MethodArg::Leveled => Stage1Method::Leveled,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Nb,
    Maxent,
    Svm,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Nb => Algorithm::NaiveBayes,
            AlgorithmArg::Maxent => Algorithm::MaxEnt,
            AlgorithmArg::Svm => Algorithm::Svm,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Unigram encoding.
    #[arg(long, value_enum, default_value = "score")]
    mode: ModeArg,
    /// Sentiment stage layout.
    #[arg(long, value_enum, default_value = "direct")]
    method: MethodArg,
    /// Learner for both stages.
    #[arg(long, value_enum, default_value = "nb")]
    algorithm: AlgorithmArg,
}

impl ModelArgs {
    fn config(&self, seed: u64) -> PipelineConfig {
        PipelineConfig {
            stage1_method: self.method.into(),
            stage1_algorithm: self.algorithm.into(),
            stage2_algorithm: self.algorithm.into(),
            feature_mode: self.mode.into(),
            seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    /// Lexical vs score unigram features.
    Score,
    /// Direct vs leveled sentiment classification.
    Method,
    /// Unigram vs unigram + negativity + interjection sarcasm features.
    Sarcasm,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize text lines from stdin (or a file), one token line per input line.
    Normalize { input: Option<PathBuf> },
    /// Merge raw term/pos/neg rows into a lexicon file.
    BuildLexicon {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Train a pipeline bundle from a labeled JSONL corpus.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Classify JSONL documents from stdin (or a file) with a trained bundle.
    Predict {
        #[arg(long)]
        bundle: PathBuf,
        input: Option<PathBuf>,
    },
    /// Score a bundle's final labels on a labeled JSONL corpus.
    Evaluate {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Run one of the comparative experiments.
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        /// Labeled JSONL corpus; defaults to the synthetic corpus for --seed.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 980.0 / 1280.0)]
        train_fraction: f64,
        /// Unigram encoding where the experiment does not vary it.
        #[arg(long, value_enum, default_value = "score")]
        mode: ModeArg,
        /// Emit TSV instead of the text table.
        #[arg(long, conflicts_with = "json")]
        tsv: bool,
    },
    /// Write a synthetic labeled corpus as JSONL.
    GenCorpus {
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 502)]
        neutral: usize,
        #[arg(long, default_value_t = 250)]
        positive: usize,
        #[arg(long, default_value_t = 228)]
        negative: usize,
        #[arg(long, default_value_t = 0.4)]
        sarcasm_rate: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(io::BufReader::new(
            fs::File::open(p).with_context(|| format!("cannot open {}", p.display()))?,
        )),
        None => Box::new(io::stdin().lock()),
    })
}

fn source_name(path: &Option<PathBuf>) -> String {
    path.as_ref()
        .map_or("<stdin>".into(), |p| p.display().to_string())
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    match &cli.command {
        Command::Normalize { input } => {
            let aux = cli.resources.aux()?;
            let mut out = BufWriter::new(io::stdout().lock());
            for line in open_input(input)?.lines() {
                let tokens = normalize(&line?, &aux);
                if cli.json {
                    writeln!(out, "{}", serde_json::to_string(&*tokens)?)?;
                } else {
                    writeln!(out, "{}", tokens.join())?;
                }
            }
            out.flush()?;
        }
        Command::BuildLexicon { input, out } => {
            let lex = load_lexicon(input)?;
            lex.save(out)?;
            eprintln!("{} terms written to {}", lex.len(), out.display());
        }
        Command::Train { corpus, out, model } => {
            let docs = read_jsonl(corpus)?;
            let lex = cli.resources.lexicon()?;
            let aux = cli.resources.aux()?;
            let pipeline = train_pipeline(&docs, &lex, &aux, &model.config(seed))?;
            pipeline.save(out)?;
            let counts = pipeline.training_counts();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(counts)?);
            } else {
                eprintln!(
                    "trained on {} documents; bundle written to {}",
                    docs.len(),
                    out.display()
                );
            }
        }
        Command::Predict { bundle, input } => {
            let pipeline = Pipeline::load(bundle)?;
            let docs = read_jsonl_from(open_input(input)?, &source_name(input))?;
            let mut out = BufWriter::new(io::stdout().lock());
            for doc in &docs {
                let p = pipeline.classify_document(doc)?;
                writeln!(out, "{}", serde_json::to_string(&p)?)?;
            }
            out.flush()?;
        }
        Command::Evaluate { bundle, corpus } => {
            let pipeline = Pipeline::load(bundle)?;
            let docs = read_jsonl(corpus)?;
            let m = evaluate(&pipeline, &docs)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&m)?);
            } else {
                print!("{}", metrics_table(&m));
            }
        }
        Command::Experiment {
            kind,
            corpus,
            train_fraction,
            mode,
            tsv,
        } => {
            let docs = match corpus {
                Some(p) => read_jsonl(p)?,
                None => generate_synthetic_corpus(&CorpusSpec::default(), seed)?.documents,
            };
            let lex = cli.resources.lexicon()?;
            let aux = cli.resources.aux()?;
            if cli.jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let config = ExperimentConfig {
                train_fraction: *train_fraction,
                pipeline: PipelineConfig {
                    feature_mode: (*mode).into(),
                    ..Default::default()
                },
                jobs: cli.jobs,
            };
            let run = match kind {
                ExperimentKind::Score => experiment_sentiment_score,
                ExperimentKind::Method => experiment_method,
                ExperimentKind::Sarcasm => experiment_sarcasm,
            };
            let report: ExperimentReport = run(&docs, &lex, &aux, &config, seed)?;
            let text = if cli.json {
                report.to_json()
            } else if *tsv {
                report.to_tsv()
            } else {
                report.to_table()
            };
            write_output(&None, &text)?;
        }
        Command::GenCorpus {
            out,
            neutral,
            positive,
            negative,
            sarcasm_rate,
        } => {
            let spec = CorpusSpec {
                neutral: *neutral,
                positive: *positive,
                negative: *negative,
                sarcasm_rate: *sarcasm_rate,
                ..Default::default()
            };
            let corpus = generate_synthetic_corpus(&spec, seed)?;
            write_output(out, &to_jsonl(&corpus.documents))?;
        }
    }
    Ok(())
}

fn metrics_table(m: &Metrics) -> String {
    let mut out = format!(
        "accuracy {:.4} ({}/{})\n\n",
        m.accuracy,
        m.correct(),
        m.total
    );
    out.push_str("class  precision  recall      f1  support\n");
    for c in &m.per_class {
        out.push_str(&format!(
            "{:<5}  {:>9.4}  {:>6.4}  {:>6.4}  {:>7}\n",
            c.class, c.precision, c.recall, c.f1, c.support
        ));
    }
    out.push_str("\nconfusion (rows gold, columns predicted)\n");
    out.push_str(&format!(
        "     {}\n",
        m.classes
            .iter()
            .map(|c| format!("{c:>6}"))
            .collect::<String>()
    ));
    for (name, row) in m.classes.iter().zip(&m.confusion) {
        out.push_str(&format!(
            "{name:<5}{}\n",
            row.iter().map(|v| format!("{v:>6}")).collect::<String>()
        ));
    }
    out
}
