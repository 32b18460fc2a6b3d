use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use verbprobe::perturb::PerturbationRecord;
use verbprobe::qamodel::{load_checkpoint, QaProbe};

use crate::common::{ensure_dir, load_dataset, load_lexicon, thread_pool, write_text, Warnings};
use crate::report::{build, print_summary, ProbeRecord, VariantTrace, TRACES_FILE};
use crate::GlobalArgs;

/// Orphan ids listed in full before the message is truncated.
const MAX_LISTED_IDS: usize = 20;

#[derive(Args, Debug)]
pub struct ProbeArgs {
    /// SQuAD v1.1 JSON file holding the probed questions.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Reader checkpoint written by `train`.
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Perturbation JSONL written by `negate`.
    #[arg(long)]
    pub perturbations: PathBuf,
    /// Comma-separated question words to draw hidden-layer heatmaps for.
    #[arg(long, value_delimiter = ',')]
    pub heatmap_words: Vec<String>,
}

pub fn read_perturbations(path: &Path) -> Result<Vec<PerturbationRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r: PerturbationRecord =
            serde_json::from_str(line).with_context(|| format!("{} line {}", path.display(), n + 1))?;
        records.push(r);
    }
    if records.is_empty() {
        bail!("perturbation file {} is empty", path.display());
    }
    Ok(records)
}

fn list_ids(ids: &[&str]) -> String {
    let mut s = ids.iter().take(MAX_LISTED_IDS).copied().collect::<Vec<_>>().join(", ");
    if ids.len() > MAX_LISTED_IDS {
        s.push_str(&format!(" (and {} more)", ids.len() - MAX_LISTED_IDS));
    }
    s
}

pub fn run(global: &GlobalArgs, args: ProbeArgs, warnings: &mut Warnings) -> Result<()> {
    let dataset = load_dataset(&args.dataset, warnings)?;
    let perturbations = read_perturbations(&args.perturbations)?;
    let reader = load_checkpoint(&args.checkpoint)
        .with_context(|| format!("loading checkpoint {}", args.checkpoint.display()))?;
    let (_, tagger) = load_lexicon(global, warnings)?;

    let dataset_ids: HashSet<&str> = dataset.items.iter().map(|i| i.id.as_str()).collect();
    let orphans: Vec<&str> =
        perturbations.iter().map(|p| p.id.as_str()).filter(|id| !dataset_ids.contains(id)).collect();
    if !orphans.is_empty() {
        bail!("{} perturbation ids are not in the dataset: {}", orphans.len(), list_ids(&orphans));
    }
    let mut by_id: HashMap<&str, &PerturbationRecord> = HashMap::new();
    for p in &perturbations {
        if by_id.insert(p.id.as_str(), p).is_some() {
            bail!("perturbation id {} occurs more than once", p.id);
        }
    }
    let mut work = Vec::new();
    for item in &dataset.items {
        let Some(p) = by_id.get(item.id.as_str()) else { continue };
        if p.original != item.question {
            bail!("perturbation {} was made from {:?}, the dataset asks {:?}", p.id, p.original, item.question);
        }
        work.push((item, *p));
    }
    if work.len() < dataset.items.len() {
        warnings.push(
            "probe",
            format!("{} dataset questions have no perturbation and are skipped", dataset.items.len() - work.len()),
        );
    }

    let pool = thread_pool(global.workers)?;
    let records: Vec<ProbeRecord> = pool.install(|| {
        work.par_iter()
            .map(|(item, p)| -> Result<ProbeRecord> {
                let run = |question: &str| -> Result<VariantTrace> {
                    let (answer, trace) =
                        reader.probe(question, &item.context).with_context(|| format!("question {}", item.id))?;
                    Ok(VariantTrace { question: question.to_string(), tagged: tagger.tag_text(question), answer, trace })
                };
                Ok(ProbeRecord {
                    id: item.id.clone(),
                    strategy: p.strategy,
                    original: run(&item.question)?,
                    perturbed: run(&p.perturbed)?,
                })
            })
            .collect::<Result<_>>()
    })?;

    ensure_dir(&global.out_dir)?;
    let mut jsonl = String::new();
    for r in &records {
        jsonl.push_str(&serde_json::to_string(r)?);
        jsonl.push('\n');
    }
    write_text(&global.out_dir.join(TRACES_FILE), &jsonl)?;
    let summary = build(&records, &args.heatmap_words, global, warnings)?;
    print_summary(&summary);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orphan_listing_truncates() {
        let ids: Vec<String> = (0..25).map(|i| format!("q{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let s = list_ids(&refs);
        assert!(s.starts_with("q0, q1"));
        assert!(s.ends_with("(and 5 more)"));
    }

    #[test]
    fn empty_perturbation_file_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        fs::write(&path, "\n").unwrap();
        assert!(read_perturbations(&path).unwrap_err().to_string().contains("empty"));
    }
}
