use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Model, ModelConfig, ModelError, ParamGroup, ParamLayout, Reader, Vocabulary};

pub const CHECKPOINT_FORMAT: &str = "verbprobe-reader";
pub const CHECKPOINT_VERSION: u32 = 1;

/// JSON container. The layout is written for readers of the file and
/// checked against the config on load.
#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    config: ModelConfig,
    vocabulary: Vec<String>,
    layout: Vec<ParamGroup>,
    parameters: Vec<f64>,
}

pub fn save_checkpoint(reader: &Reader, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    let file = CheckpointFile {
        format: CHECKPOINT_FORMAT.into(),
        version: CHECKPOINT_VERSION,
        config: reader.model.config().clone(),
        vocabulary: reader.vocab.tokens().to_vec(),
        layout: reader.model.layout().groups.clone(),
        parameters: reader.model.params().to_vec(),
    };
    let json = serde_json::to_string(&file).map_err(|e| bad(path, e.to_string()))?;
    fs::write(path, json).map_err(|source| ModelError::Io { path: path.display().to_string(), source })
}

fn bad(path: &Path, message: String) -> ModelError {
    ModelError::Checkpoint { path: path.display().to_string(), message }
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Reader, ModelError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ModelError::Io { path: path.display().to_string(), source })?;
    let file: CheckpointFile = serde_json::from_str(&text).map_err(|e| bad(path, e.to_string()))?;
    if file.format != CHECKPOINT_FORMAT {
        return Err(bad(path, format!("unknown format {:?}", file.format)));
    }
    if file.version != CHECKPOINT_VERSION {
        return Err(bad(path, format!("unsupported version {}", file.version)));
    }
    if ParamLayout::new(&file.config).groups != file.layout {
        return Err(bad(path, "parameter layout does not match config".into()));
    }
    let vocab = Vocabulary::from_tokens(file.vocabulary).map_err(|m| bad(path, m))?;
    let model = Model::from_parts(file.config, file.parameters)?;
    Reader::new(model, vocab)
}
