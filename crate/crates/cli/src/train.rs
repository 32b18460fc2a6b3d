use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use verbprobe::analysis::normalize_answer;
use verbprobe::corpus::{generate_contrast_corpus, write_squad, ContrastSpec, QaDataset};
use verbprobe::qamodel::{
    grad_check, load_checkpoint, save_checkpoint, train, GradCheckReport, Model, ModelConfig, QaProbe, Reader,
    TrainingExample, Vocabulary,
};
use verbprobe::report::{loss_curve_table, Table};

use crate::common::{ensure_dir, load_dataset, write_json, write_table, Warnings};
use crate::GlobalArgs;

/// Relative error at or above which a gradient check fails.
pub const GRAD_CHECK_TOLERANCE: f64 = 1e-4;
const GRAD_CHECK_EPSILON: f64 = 1e-5;
/// Window of the moving average written next to the loss curve.
const LOSS_WINDOW: usize = 10;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Synthetic {
    Unique,
    Contrast,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// SQuAD v1.1 training file.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    pub dataset: Option<PathBuf>,
    /// Train on a generated corpus instead of a file.
    #[arg(long, value_enum)]
    pub synthetic: Option<Synthetic>,
    /// JSON corpus spec for --synthetic; defaults apply when omitted.
    #[arg(long, requires = "synthetic")]
    pub contrast_spec: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// JSON model config; the flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub embed_dim: Option<usize>,
    #[arg(long)]
    pub hidden_dim: Option<usize>,
    /// Share of contexts held out for evaluation (written as heldout.json).
    #[arg(long, default_value_t = 0.0)]
    pub holdout: f64,
    /// Checkpoint path; defaults to model.json in --out-dir.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Check gradients on the first example before training.
    #[arg(long)]
    pub grad_check: bool,
}

#[derive(Args, Debug)]
pub struct GradCheckArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Check a trained checkpoint instead of a fresh initialization.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Parameters sampled per example.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Number of examples checked, each with its own sample.
    #[arg(long, default_value_t = 1)]
    pub examples: usize,
}

#[derive(Debug, Serialize)]
struct TrainSummary {
    train_examples: usize,
    heldout_examples: usize,
    heldout_exact_match: Option<f64>,
    epochs: usize,
    final_epoch_loss: Option<f64>,
    checksum: String,
    config: ModelConfig,
}

fn load_data(global: &GlobalArgs, data: &DataArgs, warnings: &mut Warnings) -> Result<QaDataset> {
    if let Some(path) = &data.dataset {
        return load_dataset(path, warnings);
    }
    let spec = match &data.contrast_spec {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing corpus spec {}", path.display()))?
        }
        None => ContrastSpec::default(),
    };
    let (unique, contrast) = generate_contrast_corpus(&spec, global.seed)?;
    Ok(match data.synthetic.expect("clap requires a data source") {
        Synthetic::Unique => unique,
        Synthetic::Contrast => contrast,
    })
}

fn examples(reader: &Reader, dataset: &QaDataset, warnings: &mut Warnings) -> Vec<TrainingExample> {
    let mut out = Vec::with_capacity(dataset.items.len());
    for item in &dataset.items {
        let ex = item
            .answer_byte_span(0)
            .and_then(|span| reader.example(&item.id, &item.question, &item.context, span));
        match ex {
            Some(ex) => out.push(ex),
            None => warnings.push("train", format!("question {}: answer covers no context token; skipped", item.id)),
        }
    }
    out
}

fn print_grad_check(label: &str, r: &GradCheckReport) {
    println!("{label}: {} parameters, max relative error {:.3e}", r.checked, r.max_relative_error);
    for g in &r.groups {
        println!("  {:<16} {:>4} sampled  max {:.3e}", g.group, g.sampled, g.max_relative_error);
    }
}

fn exact_match(reader: &Reader, dataset: &QaDataset) -> Result<f64> {
    let mut hits = 0;
    for item in &dataset.items {
        let (answer, _) = reader.probe(&item.question, &item.context)?;
        let gold = &item.answers[0].text;
        if normalize_answer(&answer.text) == normalize_answer(gold) {
            hits += 1;
        }
    }
    Ok(hits as f64 / dataset.items.len() as f64)
}

pub fn run(global: &GlobalArgs, args: TrainArgs, warnings: &mut Warnings) -> Result<()> {
    let dataset = load_data(global, &args.data, warnings)?;
    let (train_set, heldout) = dataset.split_by_context(args.holdout);
    if train_set.items.is_empty() {
        bail!("no training questions left after holding out {}", args.holdout);
    }
    let mut config: ModelConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing model config {}", path.display()))?
        }
        None => ModelConfig::default(),
    };
    let vocab = Vocabulary::build(train_set.items.iter().flat_map(|i| [i.context.as_str(), i.question.as_str()]));
    config.vocab_size = vocab.len();
    config.seed = global.seed;
    config.epochs = args.epochs.unwrap_or(config.epochs);
    config.learning_rate = args.learning_rate.unwrap_or(config.learning_rate);
    config.batch_size = args.batch_size.unwrap_or(config.batch_size);
    config.embed_dim = args.embed_dim.unwrap_or(config.embed_dim);
    config.hidden_dim = args.hidden_dim.unwrap_or(config.hidden_dim);
    let mut reader = Reader::new(Model::new(config)?, vocab)?;
    let train_examples = examples(&reader, &train_set, warnings);
    if train_examples.is_empty() {
        bail!("no usable training examples");
    }

    ensure_dir(&global.out_dir)?;
    if args.grad_check {
        let r = grad_check(&reader.model, &train_examples[0], GRAD_CHECK_EPSILON, 200, global.seed)?;
        print_grad_check("gradient check", &r);
        write_json(&global.out_dir.join("grad_check.json"), &r)?;
        if r.max_relative_error >= GRAD_CHECK_TOLERANCE {
            bail!("gradient check failed: max relative error {:.3e}", r.max_relative_error);
        }
    }

    let report = train(&mut reader.model, &train_examples)?;
    let format = global.format.into();
    write_table(&global.out_dir, "loss_curve", &loss_curve_table(&report, LOSS_WINDOW), format)?;
    let mut steps = Table::new(&["step", "loss"]);
    for (i, l) in report.step_losses.iter().enumerate() {
        steps.push(vec![(i + 1).into(), (*l).into()])?;
    }
    write_table(&global.out_dir, "step_losses", &steps, format)?;

    let checkpoint = args.checkpoint.unwrap_or_else(|| global.out_dir.join("model.json"));
    save_checkpoint(&reader, &checkpoint)?;

    let heldout_exact_match = if heldout.items.is_empty() {
        None
    } else {
        write_squad(&heldout, global.out_dir.join("heldout.json"))?;
        Some(exact_match(&reader, &heldout)?)
    };
    let summary = TrainSummary {
        train_examples: train_examples.len(),
        heldout_examples: heldout.items.len(),
        heldout_exact_match,
        epochs: reader.model.config().epochs,
        final_epoch_loss: report.epoch_losses.last().copied(),
        checksum: format!("{:016x}", reader.model.checksum()),
        config: reader.model.config().clone(),
    };
    write_json(&global.out_dir.join("train_summary.json"), &summary)?;
    for (e, l) in report.epoch_losses.iter().enumerate() {
        println!("epoch {:>3}  loss {l:.4}", e + 1);
    }
    if let Some(em) = heldout_exact_match {
        println!("held-out exact match {em:.3} over {} questions", heldout.items.len());
    }
    println!("checkpoint {}", checkpoint.display());
    Ok(())
}

pub fn run_grad_check(global: &GlobalArgs, args: GradCheckArgs, warnings: &mut Warnings) -> Result<()> {
    let dataset = load_data(global, &args.data, warnings)?;
    let reader = match &args.checkpoint {
        Some(path) => load_checkpoint(path).with_context(|| format!("loading checkpoint {}", path.display()))?,
        None => {
            let vocab =
                Vocabulary::build(dataset.items.iter().flat_map(|i| [i.context.as_str(), i.question.as_str()]));
            let config = ModelConfig { vocab_size: vocab.len(), seed: global.seed, ..Default::default() };
            Reader::new(Model::new(config)?, vocab)?
        }
    };
    let ex = examples(&reader, &dataset, warnings);
    if ex.is_empty() {
        bail!("no usable examples to check");
    }
    let mut reports = Vec::new();
    let mut worst: f64 = 0.0;
    for (k, example) in ex.iter().take(args.examples.max(1)).enumerate() {
        let seed = global.seed.wrapping_add(k as u64);
        let r = grad_check(&reader.model, example, GRAD_CHECK_EPSILON, args.samples, seed)?;
        print_grad_check(&format!("example {}", example.id), &r);
        worst = worst.max(r.max_relative_error);
        reports.push(r);
    }
    ensure_dir(&global.out_dir)?;
    write_json(&global.out_dir.join("grad_check.json"), &reports)?;
    println!("max relative error {worst:.3e}");
    if worst >= GRAD_CHECK_TOLERANCE {
        bail!("gradient check failed: max relative error {worst:.3e} >= {GRAD_CHECK_TOLERANCE:e}");
    }
    Ok(())
}
