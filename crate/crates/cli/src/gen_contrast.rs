use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use verbprobe::corpus::{generate_contrast_corpus, write_squad, ContrastSpec};

use crate::common::{ensure_dir, Warnings};
use crate::GlobalArgs;

pub const UNIQUE_FILE: &str = "unique.json";
pub const CONTRAST_FILE: &str = "contrast.json";

#[derive(Args, Debug)]
pub struct GenContrastArgs {
    /// JSON corpus spec; omitted fields keep their defaults.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

pub fn run(global: &GlobalArgs, args: GenContrastArgs, _warnings: &mut Warnings) -> Result<()> {
    let spec: ContrastSpec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing corpus spec {}", path.display()))?
        }
        None => ContrastSpec::default(),
    };
    let (unique, contrast) = generate_contrast_corpus(&spec, global.seed)?;
    ensure_dir(&global.out_dir)?;
    write_squad(&unique, global.out_dir.join(UNIQUE_FILE))?;
    write_squad(&contrast, global.out_dir.join(CONTRAST_FILE))?;
    println!("{} unique and {} contrast questions written to {}", unique.items.len(), contrast.items.len(), global.out_dir.display());
    Ok(())
}
