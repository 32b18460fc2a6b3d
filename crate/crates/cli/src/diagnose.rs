use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use verbprobe::corpus::noun_uniqueness_scan;
use verbprobe::report::uniqueness_table;

use crate::common::{ensure_dir, load_dataset, load_lexicon, write_json, write_table, Warnings};
use crate::GlobalArgs;

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    /// SQuAD v1.1 JSON file.
    #[arg(long)]
    pub dataset: PathBuf,
}

pub fn run(global: &GlobalArgs, args: DiagnoseArgs, warnings: &mut Warnings) -> Result<()> {
    let dataset = load_dataset(&args.dataset, warnings)?;
    let (_, tagger) = load_lexicon(global, warnings)?;
    let report = noun_uniqueness_scan(&dataset, &tagger);
    ensure_dir(&global.out_dir)?;
    write_table(&global.out_dir, "uniqueness", &uniqueness_table(&report), global.format.into())?;
    write_json(&global.out_dir.join("uniqueness_report.json"), &report)?;
    println!("contexts           {}", report.per_context.len());
    println!("corpus uniqueness  {:.3}", report.corpus_fraction);
    Ok(())
}
