//! English verb morphology: inflection, form detection and lemmatization.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use super::{TextprocError, VerbForm};

/// `(lemma, past, past participle)` for irregular verbs.
pub const IRREGULAR_VERBS: &[(&str, &str, &str)] = &[
    ("arise", "arose", "arisen"),
    ("awake", "awoke", "awoken"),
    ("be", "was", "been"),
    ("bear", "bore", "borne"),
    ("beat", "beat", "beaten"),
    ("become", "became", "become"),
    ("begin", "began", "begun"),
    ("bend", "bent", "bent"),
    ("bet", "bet", "bet"),
    ("bid", "bid", "bid"),
    ("bind", "bound", "bound"),
    ("bite", "bit", "bitten"),
    ("bleed", "bled", "bled"),
    ("blow", "blew", "blown"),
    ("break", "broke", "broken"),
    ("breed", "bred", "bred"),
    ("bring", "brought", "brought"),
    ("broadcast", "broadcast", "broadcast"),
    ("build", "built", "built"),
    ("burst", "burst", "burst"),
    ("buy", "bought", "bought"),
    ("cast", "cast", "cast"),
    ("catch", "caught", "caught"),
    ("choose", "chose", "chosen"),
    ("cling", "clung", "clung"),
    ("come", "came", "come"),
    ("cost", "cost", "cost"),
    ("creep", "crept", "crept"),
    ("cut", "cut", "cut"),
    ("deal", "dealt", "dealt"),
    ("dig", "dug", "dug"),
    ("do", "did", "done"),
    ("draw", "drew", "drawn"),
    ("drink", "drank", "drunk"),
    ("drive", "drove", "driven"),
    ("eat", "ate", "eaten"),
    ("fall", "fell", "fallen"),
    ("feed", "fed", "fed"),
    ("feel", "felt", "felt"),
    ("fight", "fought", "fought"),
    ("find", "found", "found"),
    ("flee", "fled", "fled"),
    ("fling", "flung", "flung"),
    ("fly", "flew", "flown"),
    ("forbid", "forbade", "forbidden"),
    ("forecast", "forecast", "forecast"),
    ("foresee", "foresaw", "foreseen"),
    ("forget", "forgot", "forgotten"),
    ("forgive", "forgave", "forgiven"),
    ("freeze", "froze", "frozen"),
    ("get", "got", "gotten"),
    ("give", "gave", "given"),
    ("go", "went", "gone"),
    ("grind", "ground", "ground"),
    ("grow", "grew", "grown"),
    ("hang", "hung", "hung"),
    ("have", "had", "had"),
    ("hear", "heard", "heard"),
    ("hide", "hid", "hidden"),
    ("hit", "hit", "hit"),
    ("hold", "held", "held"),
    ("hurt", "hurt", "hurt"),
    ("keep", "kept", "kept"),
    ("kneel", "knelt", "knelt"),
    ("know", "knew", "known"),
    ("lay", "laid", "laid"),
    ("lead", "led", "led"),
    ("leave", "left", "left"),
    ("lend", "lent", "lent"),
    ("let", "let", "let"),
    ("lie", "lay", "lain"),
    ("light", "lit", "lit"),
    ("lose", "lost", "lost"),
    ("make", "made", "made"),
    ("mean", "meant", "meant"),
    ("meet", "met", "met"),
    ("mislead", "misled", "misled"),
    ("mistake", "mistook", "mistaken"),
    ("overcome", "overcame", "overcome"),
    ("overtake", "overtook", "overtaken"),
    ("overthrow", "overthrew", "overthrown"),
    ("pay", "paid", "paid"),
    ("put", "put", "put"),
    ("quit", "quit", "quit"),
    ("read", "read", "read"),
    ("rebuild", "rebuilt", "rebuilt"),
    ("ride", "rode", "ridden"),
    ("ring", "rang", "rung"),
    ("rise", "rose", "risen"),
    ("run", "ran", "run"),
    ("say", "said", "said"),
    ("see", "saw", "seen"),
    ("seek", "sought", "sought"),
    ("sell", "sold", "sold"),
    ("send", "sent", "sent"),
    ("set", "set", "set"),
    ("shake", "shook", "shaken"),
    ("shed", "shed", "shed"),
    ("shine", "shone", "shone"),
    ("shoot", "shot", "shot"),
    ("show", "showed", "shown"),
    ("shrink", "shrank", "shrunk"),
    ("shut", "shut", "shut"),
    ("sing", "sang", "sung"),
    ("sink", "sank", "sunk"),
    ("sit", "sat", "sat"),
    ("sleep", "slept", "slept"),
    ("slide", "slid", "slid"),
    ("speak", "spoke", "spoken"),
    ("speed", "sped", "sped"),
    ("spend", "spent", "spent"),
    ("spin", "spun", "spun"),
    ("split", "split", "split"),
    ("spread", "spread", "spread"),
    ("spring", "sprang", "sprung"),
    ("stand", "stood", "stood"),
    ("steal", "stole", "stolen"),
    ("stick", "stuck", "stuck"),
    ("sting", "stung", "stung"),
    ("strike", "struck", "struck"),
    ("strive", "strove", "striven"),
    ("swear", "swore", "sworn"),
    ("sweep", "swept", "swept"),
    ("swim", "swam", "swum"),
    ("swing", "swung", "swung"),
    ("take", "took", "taken"),
    ("teach", "taught", "taught"),
    ("tear", "tore", "torn"),
    ("tell", "told", "told"),
    ("think", "thought", "thought"),
    ("throw", "threw", "thrown"),
    ("thrust", "thrust", "thrust"),
    ("undergo", "underwent", "undergone"),
    ("understand", "understood", "understood"),
    ("undertake", "undertook", "undertaken"),
    ("upset", "upset", "upset"),
    ("wake", "woke", "woken"),
    ("wear", "wore", "worn"),
    ("weave", "wove", "woven"),
    ("weep", "wept", "wept"),
    ("win", "won", "won"),
    ("wind", "wound", "wound"),
    ("withdraw", "withdrew", "withdrawn"),
    ("write", "wrote", "written"),
];

/// Irregular forms outside the canonical table columns.
const IRREGULAR_EXTRA: &[(&str, &str, VerbForm)] = &[
    ("be", "am", VerbForm::Base),
    ("be", "are", VerbForm::Base),
    ("be", "is", VerbForm::ThirdSg),
    ("be", "were", VerbForm::Past),
    ("have", "has", VerbForm::ThirdSg),
];

// Multi-syllable verbs whose stress falls on the final syllable.
const DOUBLING_VERBS: &[&str] = &[
    "admit", "commit", "compel", "confer", "control", "defer", "deter", "emit", "equip", "excel",
    "expel", "format", "incur", "infer", "occur", "omit", "patrol", "permit", "prefer", "propel",
    "rebel", "recur", "refer", "regret", "remit", "repel", "submit", "transfer", "transmit",
];

fn irregular(lemma: &str) -> Option<(&'static str, &'static str)> {
    IRREGULAR_VERBS
        .iter()
        .find(|(l, _, _)| *l == lemma)
        .map(|&(_, past, pp)| (past, pp))
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn vowel_groups(word: &str) -> usize {
    let bytes = word.as_bytes();
    let mut groups = 0;
    let mut prev_vowel = false;
    for &c in bytes {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    groups
}

/// Whether the final consonant doubles before `-ed`/`-ing`.
fn doubles_final(word: &str) -> bool {
    let b = word.as_bytes();
    let n = b.len();
    if n < 3 || !b.iter().all(u8::is_ascii_lowercase) {
        return false;
    }
    let (c1, v, c2) = (b[n - 3], b[n - 2], b[n - 1]);
    let cvc = !is_vowel(c1) && is_vowel(v) && !is_vowel(c2) && !matches!(c2, b'w' | b'x' | b'y');
    // "qu" behaves as a consonant cluster: quit -> quitting.
    let cvc = cvc || (n >= 4 && &b[n - 3..n - 1] == b"ui" && b[n - 4] == b'q' && !is_vowel(c2));
    cvc && (vowel_groups(word) == 1 || DOUBLING_VERBS.contains(&word))
}

fn ends_consonant_y(word: &str) -> bool {
    let b = word.as_bytes();
    b.len() >= 2 && b[b.len() - 1] == b'y' && !is_vowel(b[b.len() - 2])
}

fn regular_third(word: &str) -> String {
    if ends_consonant_y(word) {
        format!("{}ies", &word[..word.len() - 1])
    } else if ["s", "x", "z", "ch", "sh", "o"].iter().any(|s| word.ends_with(s)) {
        format!("{word}es")
    } else {
        format!("{word}s")
    }
}

fn regular_past(word: &str) -> String {
    if word.ends_with('e') {
        format!("{word}d")
    } else if ends_consonant_y(word) {
        format!("{}ied", &word[..word.len() - 1])
    } else if doubles_final(word) {
        format!("{word}{}ed", &word[word.len() - 1..])
    } else {
        format!("{word}ed")
    }
}

fn regular_gerund(word: &str) -> String {
    if word.ends_with("ie") {
        format!("{}ying", &word[..word.len() - 2])
    } else if word.len() > 2
        && word.ends_with('e')
        && !["ee", "oe", "ye"].iter().any(|s| word.ends_with(s))
    {
        format!("{}ing", &word[..word.len() - 1])
    } else if doubles_final(word) {
        format!("{word}{}ing", &word[word.len() - 1..])
    } else {
        format!("{word}ing")
    }
}

fn inflect_word(word: &str, form: VerbForm) -> String {
    match form {
        VerbForm::Base | VerbForm::NotVerb => word.to_string(),
        VerbForm::ThirdSg => match word {
            "be" => "is".into(),
            "have" => "has".into(),
            _ => regular_third(word),
        },
        VerbForm::Past => irregular(word).map_or_else(|| regular_past(word), |(p, _)| p.into()),
        VerbForm::PastPart => {
            irregular(word).map_or_else(|| regular_past(word), |(_, pp)| pp.into())
        }
        VerbForm::Gerund => regular_gerund(word),
    }
}

/// Realizes a verb lemma key in the requested form. Only the head word of a
/// multi-word lemma inflects; particles are appended with spaces.
pub fn inflect(lemma: &str, form: VerbForm) -> String {
    let mut parts = lemma.split('_');
    let head = parts.next().unwrap_or_default();
    let mut out = inflect_word(head, form);
    for rest in parts {
        out.push(' ');
        out.push_str(rest);
    }
    out
}

/// Classifies a verb surface given its lemma.
pub fn detect_form(surface: &str, lemma: &str) -> VerbForm {
    let surface = surface.to_lowercase();
    let surface = surface.split_whitespace().next().unwrap_or_default();
    let lemma = lemma.to_lowercase();
    let head = lemma.split('_').next().unwrap_or_default();
    if surface == head {
        return VerbForm::Base;
    }
    if let Some(&(_, _, form)) = IRREGULAR_EXTRA
        .iter()
        .find(|(l, s, _)| *l == head && *s == surface)
    {
        return form;
    }
    for form in [
        VerbForm::Past,
        VerbForm::PastPart,
        VerbForm::ThirdSg,
        VerbForm::Gerund,
    ] {
        if inflect_word(head, form) == surface {
            return form;
        }
    }
    if surface.ends_with("ing") {
        VerbForm::Gerund
    } else if surface.ends_with("ed") {
        VerbForm::Past
    } else if surface.ends_with('s') {
        VerbForm::ThirdSg
    } else {
        VerbForm::Base
    }
}

/// Reads WordNet's `verb.exc` (inflected form followed by one or more lemmas).
pub fn load_verb_exceptions(
    dir: impl AsRef<Path>,
) -> Result<HashMap<String, Vec<String>>, TextprocError> {
    let path = dir.as_ref().join("verb.exc");
    let text = fs::read_to_string(&path).map_err(|source| TextprocError::Io {
        path: path.clone(),
        source,
    })?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut fields = line.split_whitespace();
        let Some(form) = fields.next() else { continue };
        let lemmas: Vec<String> = fields.map(str::to_string).collect();
        if lemmas.is_empty() {
            return Err(TextprocError::Format {
                line: lineno + 1,
                message: format!("exception {form:?} lists no lemma"),
            });
        }
        map.insert(form.to_string(), lemmas);
    }
    Ok(map)
}

/// Maps inflected verb surfaces back to lemmas, validating candidates against
/// a set of known verb lemmas.
#[derive(Debug, Clone)]
pub struct VerbLemmatizer {
    known: HashSet<String>,
    exceptions: HashMap<String, Vec<String>>,
}

impl Default for VerbLemmatizer {
    fn default() -> Self {
        let mut known: HashSet<String> = super::words::COMMON_VERBS
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut exceptions: HashMap<String, Vec<String>> = HashMap::new();
        for &(lemma, past, pp) in IRREGULAR_VERBS {
            known.insert(lemma.to_string());
            for form in [past, pp] {
                if form != lemma {
                    exceptions.entry(form.to_string()).or_default().push(lemma.into());
                }
            }
        }
        for &(lemma, form, _) in IRREGULAR_EXTRA {
            exceptions.entry(form.to_string()).or_default().push(lemma.into());
        }
        for list in exceptions.values_mut() {
            list.dedup();
        }
        VerbLemmatizer { known, exceptions }
    }
}

impl VerbLemmatizer {
    pub fn add_known<I, S>(&mut self, lemmas: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.known.extend(lemmas.into_iter().map(Into::into));
    }

    pub fn add_exceptions(&mut self, exceptions: HashMap<String, Vec<String>>) {
        for (form, lemmas) in exceptions {
            let entry = self.exceptions.entry(form).or_default();
            for lemma in lemmas {
                if !entry.contains(&lemma) {
                    entry.push(lemma);
                }
            }
        }
    }

    pub fn is_known(&self, lemma: &str) -> bool {
        self.known.contains(lemma)
    }

    /// Lemma for `surface`, or `None` when no candidate is a known verb.
    pub fn lemmatize_known(&self, surface: &str) -> Option<String> {
        let word = surface.to_lowercase();
        if let Some(lemmas) = self.exceptions.get(&word) {
            let choice = lemmas
                .iter()
                .find(|l| self.known.contains(*l))
                .or_else(|| lemmas.first());
            return choice.cloned();
        }
        if self.known.contains(&word) {
            return Some(word);
        }
        candidates(&word)
            .into_iter()
            .find(|(cand, form)| self.known.contains(cand) && inflect_word(cand, *form) == word)
            .map(|(cand, _)| cand)
    }

    /// Best-effort lemma: validated when possible, suffix heuristics otherwise.
    pub fn lemmatize(&self, surface: &str) -> String {
        self.lemmatize_known(surface)
            .unwrap_or_else(|| heuristic_lemma(&surface.to_lowercase()))
    }
}

/// Candidate lemmas for an inflected surface, paired with the form that
/// would produce it. Order encodes preference among ambiguous analyses.
fn candidates(word: &str) -> Vec<(String, VerbForm)> {
    let mut out = Vec::new();
    let mut push = |s: &str, form| {
        if !s.is_empty() {
            out.push((s.to_string(), form));
        }
    };
    if let Some(stem) = word.strip_suffix("ing") {
        push(stem, VerbForm::Gerund);
        push(&format!("{stem}e"), VerbForm::Gerund);
        if let Some(un) = undouble(stem) {
            push(un, VerbForm::Gerund);
        }
        if let Some(s) = stem.strip_suffix('y') {
            push(&format!("{s}ie"), VerbForm::Gerund);
        }
    }
    if let Some(stem) = word.strip_suffix("ied") {
        push(&format!("{stem}y"), VerbForm::Past);
    }
    if let Some(stem) = word.strip_suffix("ed") {
        push(&format!("{stem}e"), VerbForm::Past);
        push(stem, VerbForm::Past);
        if let Some(un) = undouble(stem) {
            push(un, VerbForm::Past);
        }
    }
    if let Some(stem) = word.strip_suffix("ies") {
        push(&format!("{stem}y"), VerbForm::ThirdSg);
    }
    if let Some(stem) = word.strip_suffix("es") {
        push(stem, VerbForm::ThirdSg);
    }
    if let Some(stem) = word.strip_suffix('s') {
        push(stem, VerbForm::ThirdSg);
    }
    out
}

fn undouble(stem: &str) -> Option<&str> {
    let b = stem.as_bytes();
    let n = b.len();
    (n >= 3 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1])).then(|| &stem[..n - 1])
}

fn needs_silent_e(stem: &str) -> bool {
    let b = stem.as_bytes();
    let Some(&last) = b.last() else { return false };
    if matches!(last, b'u' | b'v') {
        return true;
    }
    // consonant + l: glorbl -> glorble
    if last == b'l' && b.len() >= 2 && !is_vowel(b[b.len() - 2]) && b[b.len() - 2] != b'l' {
        return true;
    }
    if b.len() >= 2 && matches!(last, b'c' | b'g' | b's' | b'z') && b[b.len() - 2] != last {
        return true;
    }
    b.len() >= 3
        && vowel_groups(stem) == 1
        && !is_vowel(b[b.len() - 3])
        && is_vowel(b[b.len() - 2])
        && !is_vowel(last)
        && !matches!(last, b'w' | b'x' | b'y')
}

fn heuristic_lemma(word: &str) -> String {
    let strip_ed_ing = |stem: &str| -> String {
        if let Some(un) = undouble(stem) {
            if !matches!(stem.as_bytes()[stem.len() - 1], b'l' | b's' | b'f' | b'z') {
                return un.to_string();
            }
        }
        if needs_silent_e(stem) {
            format!("{stem}e")
        } else {
            stem.to_string()
        }
    };
    if let Some(stem) = word.strip_suffix("ied") {
        return format!("{stem}y");
    }
    if word.len() > 4 {
        if let Some(stem) = word.strip_suffix("ing") {
            return strip_ed_ing(stem);
        }
    }
    if word.len() > 3 {
        if let Some(stem) = word.strip_suffix("ed") {
            return strip_ed_ing(stem);
        }
        if let Some(stem) = word.strip_suffix("ies") {
            return format!("{stem}y");
        }
        for suffix in ["sses", "ches", "shes", "xes", "zes", "oes"] {
            if word.ends_with(suffix) {
                return word[..word.len() - 2].to_string();
            }
        }
        if word.ends_with('s') && !word.ends_with("ss") {
            return word[..word.len() - 1].to_string();
        }
    }
    word.to_string()
}
