use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use verbprobe::corpus::{load_squad, QaDataset};
use verbprobe::lexicon::{load_wordnet, WordNetIndex};
use verbprobe::report::{Table, TableFormat};
use verbprobe::textproc::{load_verb_exceptions, Tagger};

use crate::GlobalArgs;

pub const WARNINGS_FILE: &str = "warnings.json";

#[derive(Debug, Clone, Serialize)]
pub struct Warning {
    pub source: String,
    pub message: String,
}

/// Non-fatal problems, logged as they occur and written to `warnings.json`.
#[derive(Debug, Default)]
pub struct Warnings {
    items: Vec<Warning>,
}

impl Warnings {
    pub fn push(&mut self, source: &str, message: impl Into<String>) {
        let message = message.into();
        log::warn!("{source}: {message}");
        self.record(source, message);
    }

    /// Adds a warning to the file without logging it.
    pub fn record(&mut self, source: &str, message: impl Into<String>) {
        self.items.push(Warning { source: source.to_string(), message: message.into() });
    }

    pub fn extend(&mut self, source: &str, messages: impl IntoIterator<Item = String>) {
        for m in messages {
            self.push(source, m);
        }
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        if !out_dir.exists() && self.items.is_empty() {
            return Ok(());
        }
        write_json(&out_dir.join(WARNINGS_FILE), &self.items)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Writes `table` as `<dir>/<stem>.<csv|json>`.
pub fn write_table(dir: &Path, stem: &str, table: &Table, format: TableFormat) -> Result<()> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    write_text(&path, &table.render(format)?)
}

pub fn load_dataset(path: &Path, warnings: &mut Warnings) -> Result<QaDataset> {
    let (dataset, w) = load_squad(path).with_context(|| format!("loading dataset {}", path.display()))?;
    warnings.extend("dataset", w);
    Ok(dataset)
}

pub fn load_lexicon(global: &GlobalArgs, warnings: &mut Warnings) -> Result<(WordNetIndex, Tagger)> {
    let Some(dir) = &global.wordnet_dir else {
        bail!("no WordNet directory: pass --wordnet-dir or set VERBPROBE_WORDNET_DIR");
    };
    let index = load_wordnet(dir).with_context(|| format!("loading WordNet from {}", dir.display()))?;
    if !index.warnings().is_empty() {
        log::info!("{} non-reciprocal antonym pointers in WordNet; listed in {WARNINGS_FILE}", index.warnings().len());
    }
    for w in index.warnings() {
        warnings.record("wordnet", w.to_string());
    }
    let mut tagger = Tagger::with_wordnet(&index);
    match load_verb_exceptions(dir) {
        Ok(exc) => tagger.lemmatizer_mut().add_exceptions(exc),
        Err(e) => warnings.push("wordnet", format!("verb exceptions unavailable: {e}")),
    }
    Ok((index, tagger))
}

pub fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .context("building worker pool")
}

/// Filesystem-safe file stem for a word.
pub fn file_stem(word: &str) -> String {
    word.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems_are_safe() {
        assert_eq!(file_stem("Notre Dame/x"), "Notre_Dame_x");
    }

    #[test]
    fn warnings_file_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = Warnings::default();
        w.push("dataset", "dropped q1");
        w.write(dir.path()).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(WARNINGS_FILE)).unwrap()).unwrap();
        assert_eq!(v[0]["message"], "dropped q1");
    }
}
