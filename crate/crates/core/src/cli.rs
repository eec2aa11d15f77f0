//! Command-line front end. Every stochastic subcommand takes an explicit `--seed`.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bayes::{Network, ACTION};
use crate::datagen::{build_corpus, word_histogram, Lexicon, NoiseProfile, WorldModel};
use crate::error::{Error, Result};
use crate::eval::{
    curve_csv, default_instructions, evaluate, parse_instructions, staged_learning, StagedConfig,
    Topology, DEFAULT_SIZES,
};
use crate::grounding::{format_experiences, parse_experiences, BagOfWords};
use crate::inference::{
    parse_scene, rescore_nbest, select_action_object, ActionObjectRanking, InferenceOptions,
    NBestList, SceneObject,
};
use crate::structure::{structure_report, train, TrainConfig};

#[derive(Debug, Parser)]
#[command(
    name = "afflang",
    version,
    about = "Word-affordance Bayesian networks for a manipulation robot"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic corpus of described experiences.
    Generate(GenerateArgs),
    /// Learn a word-affordance network from a corpus.
    Train(TrainArgs),
    /// Rank (action, object) pairs for one instruction.
    Instruct(InstructArgs),
    /// Rescore a recognizer N-best list against a scene.
    Rescore(RescoreArgs),
    /// Staged learning curve on an instruction set, written as CSV.
    Eval(EvalArgs),
    /// Read instructions from standard input, one per line.
    Repl(SceneArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub seed: u64,
    /// Number of sampled situations.
    #[arg(long, default_value_t = 254)]
    pub n: usize,
    /// Descriptions per situation.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Also write a corpus passed through the recognition noise channel.
    #[arg(long)]
    pub noise: bool,
    /// Lexicon JSON replacing the bundled one.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Output directory; receives corpus.txt and, with --noise, corpus_noisy.txt.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct LearnArgs {
    /// CPT pseudocount (0 gives relative frequencies).
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3)]
    pub max_parents: usize,
    /// Comma-separated K2 candidate ordering.
    #[arg(long, value_delimiter = ',')]
    pub ordering: Option<Vec<String>>,
    /// Learn the affordance edges with K2 instead of using the default graph.
    #[arg(long)]
    pub learn_affordances: bool,
}

impl LearnArgs {
    fn config(&self) -> TrainConfig {
        let mut cfg = TrainConfig {
            cpt_alpha: self.alpha,
            learn_affordances: self.learn_affordances,
            ..TrainConfig::default()
        };
        cfg.k2.max_parents = self.max_parents;
        if let Some(o) = &self.ordering {
            cfg.k2.ordering = o.clone();
        }
        cfg
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub learn: LearnArgs,
    /// Model JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the structure report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SceneArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Scene file, one `id|color,size,shape` per line.
    #[arg(long)]
    pub scene: PathBuf,
    /// Also use absent known words as evidence.
    #[arg(long)]
    pub absent_evidence: bool,
}

impl SceneArgs {
    fn load(&self) -> Result<(Network, Vec<SceneObject>, InferenceOptions)> {
        let network = Network::load(&self.model)?;
        let scene = parse_scene(&read(&self.scene)?)?;
        if scene.is_empty() {
            return Err(Error::Invalid(format!(
                "scene {} has no objects",
                self.scene.display()
            )));
        }
        let mut opts = InferenceOptions::default();
        if self.absent_evidence {
            opts.evidence = crate::grounding::WordEvidence::PresentAndAbsent;
        }
        Ok((network, scene, opts))
    }
}

#[derive(Debug, Args)]
pub struct InstructArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Instruction words.
    #[arg(required = true)]
    pub words: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RescoreArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// N-best file, one `probability|tokens` per line.
    #[arg(long)]
    pub nbest: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub corpus: PathBuf,
    /// Instruction file replacing the bundled set.
    #[arg(long)]
    pub instructions: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub reps: usize,
    /// Evaluate the one-parent baseline instead of the affordance model.
    #[arg(long)]
    pub baseline: bool,
    #[command(flatten)]
    pub learn: LearnArgs,
    /// CSV file to write.
    #[arg(long)]
    pub out: PathBuf,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Train(a) => cmd_train(&a, out),
        Command::Instruct(a) => cmd_instruct(&a, out),
        Command::Rescore(a) => cmd_rescore(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Repl(a) => cmd_repl(&a, &mut std::io::stdin().lock(), out),
    }
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let lexicon = match &args.lexicon {
        Some(p) => Lexicon::from_json(&read(p)?)?,
        None => Lexicon::default(),
    };
    let profile = NoiseProfile::new(lexicon.vocabulary());
    let corpus = build_corpus(
        &WorldModel::default(),
        &lexicon,
        args.n,
        args.k,
        args.noise.then_some(&profile),
        args.seed,
    )?;
    write(
        &args.out.join("corpus.txt"),
        &format_experiences(&corpus.clean),
    )?;
    if let Some(noisy) = &corpus.corrupted {
        write(
            &args.out.join("corpus_noisy.txt"),
            &format_experiences(noisy),
        )?;
    }
    writeln!(out, "{} records", corpus.clean.len())?;
    let hist = word_histogram(&corpus.clean);
    let width = hist.keys().map(String::len).max().unwrap_or(0);
    for (word, count) in &hist {
        writeln!(out, "{word:<width$} {count:>5}")?;
    }
    Ok(())
}

pub fn cmd_train(args: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let experiences = parse_experiences(&read(&args.corpus)?)?;
    let cfg = args.learn.config();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let network = pool.install(|| train(&experiences, &cfg))?;
    write(&args.out, &network.to_json())?;
    let report = structure_report(&network, &cfg.k2);
    if let Some(p) = &args.report {
        write(p, &report)?;
    }
    out.write_all(report.as_bytes())?;
    Ok(())
}

fn print_ranking(
    ranking: &ActionObjectRanking,
    scene: &[SceneObject],
    out: &mut dyn Write,
) -> Result<()> {
    if ranking.impossible {
        writeln!(
            out,
            "IMPOSSIBLE: no action and object in the scene fit the instruction"
        )?;
        return Ok(());
    }
    let best = ranking.best().expect("possible ranking has a best entry");
    let label_width = scene
        .iter()
        .map(|o| o.to_string().len() + o.id().len() + 3)
        .max()
        .unwrap_or(0);
    writeln!(
        out,
        "{:<label_width$}  {:<6} {:>6}",
        "object",
        ACTION.to_lowercase(),
        "p"
    )?;
    for (i, obj) in scene.iter().enumerate() {
        let label = format!("{} ({obj})", obj.id());
        let e = ranking.best_for(i).expect("every object is ranked");
        let (action, p) = if e.posterior < 0.005 {
            ("-".to_string(), "-".to_string())
        } else {
            (e.action.clone(), format!("{:.2}", e.posterior))
        };
        let mark = if e == best { " *" } else { "" };
        writeln!(out, "{label:<label_width$}  {action:<6} {p:>6}{mark}")?;
    }
    writeln!(
        out,
        "best: {} {} {:.4}",
        best.action, best.object, best.posterior
    )?;
    Ok(())
}

pub fn cmd_instruct(args: &InstructArgs, out: &mut dyn Write) -> Result<()> {
    let (network, scene, opts) = args.scene.load()?;
    let bag = BagOfWords::parse(&args.words.join(" "));
    let ranking = select_action_object(&network, &bag, &scene, &opts)?;
    print_ranking(&ranking, &scene, out)
}

pub fn cmd_rescore(args: &RescoreArgs, out: &mut dyn Write) -> Result<()> {
    let (network, scene, opts) = args.scene.load()?;
    let nbest = NBestList::parse(&read(&args.nbest)?)?;
    let rescored = rescore_nbest(&network, &nbest, &scene, &opts)?;
    writeln!(out, "rank orig acoustic   final        hypothesis")?;
    for (i, r) in rescored.iter().enumerate() {
        writeln!(
            out,
            "{:>4} {:>4} {:<10.4} {:<12.4e} {}",
            i + 1,
            r.original_rank + 1,
            r.acoustic,
            r.final_score,
            r.tokens.join(" ")
        )?;
    }
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = parse_experiences(&read(&args.corpus)?)?;
    let instructions = match &args.instructions {
        Some(p) => parse_instructions(&read(p)?)?,
        None => default_instructions(),
    };
    let config = StagedConfig {
        sizes: args.sizes.clone(),
        repetitions: args.reps,
        seed: args.seed,
        train: args.learn.config(),
        topology: if args.baseline {
            Topology::Baseline
        } else {
            Topology::Affordance
        },
        inference: InferenceOptions::default(),
    };
    let points = staged_learning(&corpus, &instructions, &config)?;
    write(&args.out, &curve_csv(&points))?;
    writeln!(out, "size  reps  median_soft  median_hard")?;
    for p in &points {
        writeln!(
            out,
            "{:>4}  {:>4}  {:>11.4}  {:>11.4}",
            p.train_size,
            p.repetitions.len(),
            p.median_soft(),
            p.median_hard()
        )?;
    }
    Ok(())
}

/// Evaluates a trained model on an instruction set without resampling.
pub fn summarize(network: &Network, text: Option<&str>) -> Result<crate::eval::EvalSummary> {
    let instructions = match text {
        Some(t) => parse_instructions(t)?,
        None => default_instructions(),
    };
    evaluate(network, &instructions, &InferenceOptions::default())
}

pub fn cmd_repl(args: &SceneArgs, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    let (network, scene, opts) = args.load()?;
    let mut line = String::new();
    loop {
        write!(out, "> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let bag = BagOfWords::parse(&line);
        if bag.is_empty() {
            continue;
        }
        let ranking = select_action_object(&network, &bag, &scene, &opts)?;
        print_ranking(&ranking, &scene, out)?;
    }
    writeln!(out)?;
    Ok(())
}
