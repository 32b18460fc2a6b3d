//! WordNet verb database loading and antonym lookup.
//!
//! Only `index.verb` and `data.verb` are read. Antonymy is taken from the
//! direct `!` pointers and lifted to the synset level: a lemma `a` has
//! antonym `b` when some sense of `a` carries an antonym pointer into a
//! synset that lists `b`. WordNet attaches antonym pointers to individual
//! lemmas (`enter`/`drop_out` in synset 01082606, which also lists
//! `participate`), so a strictly lemma-level lookup misses most verbs that
//! share a sense with an antonym-bearing lemma.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub const ANTONYM_SYMBOL: &str = "!";

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read WordNet file {}: {source}", path.display())]
    MissingFile {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse {
        file: &'static str,
        line: usize,
        message: String,
    },
}

/// A typed link from one synset (or one of its lemmas) to another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pointer {
    pub symbol: String,
    pub target_offset: u32,
    pub target_pos: char,
    /// 1-based lemma index in the source synset, 0 for semantic pointers.
    pub source_index: u16,
    /// 1-based lemma index in the target synset, 0 for semantic pointers.
    pub target_index: u16,
}

impl Pointer {
    pub fn is_antonym(&self) -> bool {
        self.symbol == ANTONYM_SYMBOL
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Synset {
    pub offset: u32,
    pub part_of_speech: char,
    pub lemmas: Vec<String>,
    pub pointers: Vec<Pointer>,
}

/// An antonym pointer whose target does not point back at its source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegrityWarning {
    pub source_offset: u32,
    pub source_lemma: String,
    pub target_offset: u32,
    pub target_lemma: String,
}

impl std::fmt::Display for IntegrityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "antonym pointer {}:{} -> {}:{} has no reciprocal pointer",
            self.source_offset, self.source_lemma, self.target_offset, self.target_lemma
        )
    }
}

/// Parsed verb half of a WordNet database. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct WordNetIndex {
    verb_lemmas: BTreeMap<String, Vec<u32>>,
    synsets: BTreeMap<u32, Synset>,
    warnings: Vec<IntegrityWarning>,
}

/// Normalizes a surface lemma into WordNet key form.
pub fn lemma_key(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .to_lowercase()
}

/// Loads `index.verb` and `data.verb` from a WordNet `dict` directory.
pub fn load_wordnet(dir: impl AsRef<Path>) -> Result<WordNetIndex, LexiconError> {
    let dir = dir.as_ref();
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read_to_string(&path).map_err(|source| LexiconError::MissingFile { path, source })
    };
    let index = read("index.verb")?;
    let data = read("data.verb")?;
    WordNetIndex::parse(&index, &data)
}

impl WordNetIndex {
    /// Builds an index from the text of `index.verb` and `data.verb`.
    pub fn parse(index_text: &str, data_text: &str) -> Result<Self, LexiconError> {
        let mut synsets = BTreeMap::new();
        for (lineno, line) in data_text.lines().enumerate() {
            if is_header(line) {
                continue;
            }
            let synset = parse_data_line(line).map_err(|message| LexiconError::Parse {
                file: "data.verb",
                line: lineno + 1,
                message,
            })?;
            synsets.insert(synset.offset, synset);
        }

        let mut verb_lemmas = BTreeMap::new();
        for (lineno, line) in index_text.lines().enumerate() {
            if is_header(line) {
                continue;
            }
            let err = |message: String| LexiconError::Parse {
                file: "index.verb",
                line: lineno + 1,
                message,
            };
            let (lemma, offsets) = parse_index_line(line).map_err(err)?;
            if let Some(missing) = offsets.iter().find(|o| !synsets.contains_key(o)) {
                return Err(err(format!("offset {missing:08} not found in data.verb")));
            }
            verb_lemmas.insert(lemma, offsets);
        }

        let mut index = WordNetIndex {
            verb_lemmas,
            synsets,
            warnings: Vec::new(),
        };
        index.validate_pointers()?;
        index.warnings = index.reciprocity_warnings();
        Ok(index)
    }

    fn validate_pointers(&self) -> Result<(), LexiconError> {
        for synset in self.synsets.values() {
            for ptr in synset.pointers.iter().filter(|p| p.is_antonym()) {
                let bad = |message: String| LexiconError::Parse {
                    file: "data.verb",
                    line: 0,
                    message: format!("synset {:08}: {message}", synset.offset),
                };
                if ptr.source_index == 0 || ptr.target_index == 0 {
                    return Err(bad("antonym pointer is not lemma-to-lemma".into()));
                }
                if ptr.target_pos != 'v' {
                    continue;
                }
                let Some(target) = self.synsets.get(&ptr.target_offset) else {
                    return Err(bad(format!("dangling pointer to {:08}", ptr.target_offset)));
                };
                if ptr.source_index as usize > synset.lemmas.len()
                    || ptr.target_index as usize > target.lemmas.len()
                {
                    return Err(bad("antonym pointer lemma index out of range".into()));
                }
            }
        }
        Ok(())
    }

    fn reciprocity_warnings(&self) -> Vec<IntegrityWarning> {
        let mut warnings = Vec::new();
        for synset in self.synsets.values() {
            for ptr in verb_antonyms(synset) {
                let target = &self.synsets[&ptr.target_offset];
                let reciprocal = verb_antonyms(target).any(|back| {
                    back.target_offset == synset.offset
                        && back.source_index == ptr.target_index
                        && back.target_index == ptr.source_index
                });
                if !reciprocal {
                    warnings.push(IntegrityWarning {
                        source_offset: synset.offset,
                        source_lemma: synset.lemmas[ptr.source_index as usize - 1].clone(),
                        target_offset: target.offset,
                        target_lemma: target.lemmas[ptr.target_index as usize - 1].clone(),
                    });
                }
            }
        }
        warnings
    }

    /// Direct antonyms of `lemma`, ordered by sense, then pointer, then the
    /// target synset's lemma order (pointed-to lemma first).
    pub fn antonym_of(&self, lemma: &str) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for offset in self.senses(&lemma_key(lemma)) {
            let synset = &self.synsets[offset];
            for ptr in verb_antonyms(synset) {
                let target = &self.synsets[&ptr.target_offset];
                let pointed = &target.lemmas[ptr.target_index as usize - 1];
                for candidate in std::iter::once(pointed).chain(&target.lemmas) {
                    if !out.contains(candidate) {
                        out.push(candidate.clone());
                    }
                }
            }
        }
        out
    }

    /// Synset offsets for a verb lemma key in sense order.
    pub fn senses(&self, lemma: &str) -> &[u32] {
        self.verb_lemmas.get(lemma).map_or(&[], Vec::as_slice)
    }

    pub fn contains_verb(&self, lemma: &str) -> bool {
        self.verb_lemmas.contains_key(lemma)
    }

    pub fn synset(&self, offset: u32) -> Option<&Synset> {
        self.synsets.get(&offset)
    }

    pub fn verb_lemmas(&self) -> impl Iterator<Item = &str> {
        self.verb_lemmas.keys().map(String::as_str)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Lemma-level antonym pointers that lack a reciprocal pointer.
    pub fn warnings(&self) -> &[IntegrityWarning] {
        &self.warnings
    }

    /// Every `(lemma, antonym)` pair the index can return.
    pub fn antonym_pairs(&self) -> Vec<(String, String)> {
        self.verb_lemmas()
            .flat_map(|a| self.antonym_of(a).into_iter().map(move |b| (a.to_string(), b)))
            .collect()
    }
}

fn verb_antonyms(synset: &Synset) -> impl Iterator<Item = &Pointer> {
    synset
        .pointers
        .iter()
        .filter(|p| p.is_antonym() && p.target_pos == 'v')
}

// License lines at the top of every database file start with two spaces.
fn is_header(line: &str) -> bool {
    line.starts_with("  ") || line.trim().is_empty()
}

fn parse_index_line(line: &str) -> Result<(String, Vec<u32>), String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let field = |i: usize| {
        fields
            .get(i)
            .copied()
            .ok_or_else(|| format!("truncated entry, expected field {i}"))
    };
    let lemma = field(0)?;
    if field(1)? != "v" {
        return Err(format!("unexpected part of speech {:?}", fields[1]));
    }
    let synset_cnt: usize = parse_num(field(2)?, "synset_cnt")?;
    let p_cnt: usize = parse_num(field(3)?, "p_cnt")?;
    // lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt [offsets...]
    let offsets_start = 4 + p_cnt + 2;
    if fields.len() != offsets_start + synset_cnt {
        return Err(format!(
            "expected {} fields for {synset_cnt} synsets, found {}",
            offsets_start + synset_cnt,
            fields.len()
        ));
    }
    let offsets = fields[offsets_start..]
        .iter()
        .map(|f| parse_num(f, "synset_offset"))
        .collect::<Result<Vec<u32>, _>>()?;
    Ok((lemma_key(lemma), offsets))
}

fn parse_data_line(line: &str) -> Result<Synset, String> {
    let body = line.split(" | ").next().unwrap_or(line);
    let fields: Vec<&str> = body.split_whitespace().collect();
    let mut cursor = 0usize;
    let mut next = |what: &str| {
        let f = fields
            .get(cursor)
            .copied()
            .ok_or_else(|| format!("truncated synset, missing {what}"));
        cursor += 1;
        f
    };

    let offset: u32 = parse_num(next("synset_offset")?, "synset_offset")?;
    let _lex_filenum = next("lex_filenum")?;
    let ss_type = next("ss_type")?;
    let part_of_speech = ss_type.chars().next().unwrap_or('?');
    if part_of_speech != 'v' {
        return Err(format!("synset {offset:08} has type {ss_type:?}, expected v"));
    }
    let w_cnt = u16::from_str_radix(next("w_cnt")?, 16).map_err(|e| format!("w_cnt: {e}"))?;
    if w_cnt == 0 {
        return Err(format!("synset {offset:08} has no lemmas"));
    }
    let mut lemmas = Vec::with_capacity(w_cnt as usize);
    for _ in 0..w_cnt {
        lemmas.push(lemma_key(next("word")?));
        let _lex_id = next("lex_id")?;
    }
    let p_cnt: usize = parse_num(next("p_cnt")?, "p_cnt")?;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let symbol = next("pointer_symbol")?.to_string();
        let target_offset = parse_num(next("pointer offset")?, "pointer offset")?;
        let target_pos = next("pointer pos")?.chars().next().unwrap_or('?');
        let st = next("source/target")?;
        if st.len() != 4 {
            return Err(format!("bad source/target field {st:?}"));
        }
        let hex = |s: &str| u16::from_str_radix(s, 16).map_err(|e| format!("source/target: {e}"));
        pointers.push(Pointer {
            symbol,
            target_offset,
            target_pos,
            source_index: hex(&st[..2])?,
            target_index: hex(&st[2..])?,
        });
    }
    Ok(Synset {
        offset,
        part_of_speech,
        lemmas,
        pointers,
    })
}

fn parse_num<T: std::str::FromStr>(field: &str, what: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    field.parse().map_err(|e| format!("{what} {field:?}: {e}"))
}

#[cfg(test)]
pub(crate) mod fixture {
    /// Three synsets: `rise`/`lift` opposed to `fall`, plus an unrelated `sing`.
    pub const INDEX: &str = "  1 license header line\n\
fall v 1 1 ! 1 0 00000300  \n\
lift v 1 1 ! 1 0 00000100  \n\
rise v 1 1 ! 1 0 00000100  \n\
sing v 1 0 1 0 00000500  \n";

    pub const DATA: &str = "  1 license header line\n\
00000100 30 v 02 rise 0 lift 0 001 ! 00000300 v 0101 01 + 01 00 | move upward  \n\
00000300 30 v 01 fall 0 001 ! 00000100 v 0101 01 + 01 00 | move downward  \n\
00000500 36 v 01 sing 0 000 01 + 01 00 | produce tones with the voice  \n";
}
