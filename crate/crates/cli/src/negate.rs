use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use verbprobe::perturb::{negate_question, PerturbError, PerturbationRecord, Strategy, VerbPool};
use verbprobe::report::Table;

use crate::common::{ensure_dir, load_dataset, load_lexicon, thread_pool, write_table, write_text, Warnings};
use crate::GlobalArgs;

pub const PERTURBATIONS_FILE: &str = "perturbations.jsonl";

#[derive(Args, Debug)]
pub struct NegateArgs {
    /// SQuAD v1.1 JSON file.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Verb lemmas for random replacement, one per line. Defaults to the
    /// most frequent verbs of the dataset's questions.
    #[arg(long)]
    pub verb_pool: Option<PathBuf>,
    #[arg(long, default_value_t = VerbPool::DEFAULT_SIZE)]
    pub pool_size: usize,
}

pub fn run(global: &GlobalArgs, args: NegateArgs, warnings: &mut Warnings) -> Result<()> {
    let dataset = load_dataset(&args.dataset, warnings)?;
    let (index, tagger) = load_lexicon(global, warnings)?;
    let pool = thread_pool(global.workers)?;

    let tagged: Vec<_> = pool.install(|| dataset.items.par_iter().map(|it| tagger.tag_text(&it.question)).collect());
    let verb_pool = match &args.verb_pool {
        Some(path) => VerbPool::from_file(path)?,
        None => match VerbPool::from_questions(&tagged, args.pool_size) {
            Ok(p) => p,
            // no verbs at all, so no question can take the random fallback
            Err(PerturbError::EmptyVerbPool) => VerbPool::new(vec!["be".into()])?,
            Err(e) => return Err(e.into()),
        },
    };
    let records: Vec<PerturbationRecord> = pool.install(|| {
        dataset
            .items
            .par_iter()
            .zip(&tagged)
            .map(|(it, tq)| PerturbationRecord::new(&it.id, &negate_question(tq, &it.id, &index, &verb_pool, global.seed)))
            .collect()
    });

    let mut jsonl = String::new();
    for r in &records {
        jsonl.push_str(&serde_json::to_string(r)?);
        jsonl.push('\n');
    }
    ensure_dir(&global.out_dir)?;
    write_text(&global.out_dir.join(PERTURBATIONS_FILE), &jsonl)?;

    let mut histogram: BTreeMap<Strategy, usize> = Strategy::ALL.iter().map(|s| (*s, 0)).collect();
    for r in &records {
        *histogram.entry(r.strategy).or_default() += 1;
    }
    let mut table = Table::new(&["strategy", "count"]);
    for s in Strategy::ALL {
        println!("{:<16} {}", s.as_str(), histogram[&s]);
        table.push(vec![s.as_str().into(), histogram[&s].into()])?;
    }
    write_table(&global.out_dir, "strategy_histogram", &table, global.format.into())?;
    Ok(())
}
