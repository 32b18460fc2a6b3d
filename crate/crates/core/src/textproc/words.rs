//! Embedded closed-class lists and a small majority-tag lexicon.

use super::{Pos, VerbForm};

/// Auxiliaries: surface, lemma, form. `ca`/`wo` are the stems left by
/// splitting `can't`/`won't`.
pub const AUXILIARIES: &[(&str, &str, VerbForm)] = &[
    ("be", "be", VerbForm::Base),
    ("am", "be", VerbForm::Base),
    ("are", "be", VerbForm::Base),
    ("is", "be", VerbForm::ThirdSg),
    ("was", "be", VerbForm::Past),
    ("were", "be", VerbForm::Past),
    ("been", "be", VerbForm::PastPart),
    ("being", "be", VerbForm::Gerund),
    ("'m", "be", VerbForm::Base),
    ("'re", "be", VerbForm::Base),
    ("do", "do", VerbForm::Base),
    ("does", "do", VerbForm::ThirdSg),
    ("did", "do", VerbForm::Past),
    ("have", "have", VerbForm::Base),
    ("has", "have", VerbForm::ThirdSg),
    ("had", "have", VerbForm::Past),
    ("having", "have", VerbForm::Gerund),
    ("'ve", "have", VerbForm::Base),
    ("will", "will", VerbForm::Base),
    ("'ll", "will", VerbForm::Base),
    ("wo", "will", VerbForm::Base),
    ("would", "would", VerbForm::Base),
    ("'d", "would", VerbForm::Base),
    ("can", "can", VerbForm::Base),
    ("ca", "can", VerbForm::Base),
    ("could", "could", VerbForm::Base),
    ("shall", "shall", VerbForm::Base),
    ("should", "should", VerbForm::Base),
    ("may", "may", VerbForm::Base),
    ("might", "might", VerbForm::Base),
    ("must", "must", VerbForm::Base),
];

pub fn auxiliary(lower: &str) -> Option<(&'static str, VerbForm)> {
    AUXILIARIES
        .iter()
        .find(|(s, _, _)| *s == lower)
        .map(|&(_, lemma, form)| (lemma, form))
}

pub const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our",
    "their", "some", "any", "no", "every", "each", "many", "much", "several", "few", "all",
    "both", "another", "other", "which", "what", "whose", "'s",
];

/// Closed-class words that never carry a noun or verb tag.
pub const FUNCTION_WORDS: &[&str] = &[
    // pronouns
    "i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself", "itself",
    "himself", "herself", "themselves", "one", "someone", "something", "anyone", "anything",
    "everyone", "everything", "nobody", "nothing", "mine", "yours", "hers", "ours", "theirs",
    // wh-words
    "who", "whom", "whose", "what", "which", "when", "where", "why", "how", "whether",
    // prepositions and particles
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into", "onto", "upon", "about",
    "above", "below", "under", "over", "between", "among", "through", "during", "before",
    "after", "since", "until", "against", "without", "within", "across", "along", "around",
    "behind", "beyond", "near", "off", "out", "up", "down", "per", "via", "than", "like",
    "despite", "towards", "toward", "throughout", "beside", "besides", "inside", "outside",
    // conjunctions
    "and", "or", "but", "nor", "so", "yet", "if", "because", "although", "though", "while",
    "whereas", "unless", "as", "then",
    // negation and adverbs
    "not", "n't", "never", "also", "only", "just", "very", "too", "often", "always", "already",
    "still", "even", "ever", "there", "here", "now", "again", "once", "first", "last", "most",
    "more", "less", "least", "well", "however", "currently", "usually", "later", "early",
    "ago", "far", "else", "instead", "together", "almost", "rather", "quite",
    // quantifiers and numerals
    "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "hundred",
    "thousand", "million", "billion", "second", "third", "fourth", "fifth",
    // frequent adjectives
    "new", "old", "large", "small", "big", "long", "high", "low", "great", "good", "bad",
    "best", "major", "main", "same", "different", "own", "such", "early", "late", "national",
    "public", "local", "first", "former", "largest", "total", "original", "popular",
    "important", "common", "modern", "famous", "annual", "current", "official", "average",
];

/// Frequent content words with their majority coarse tag.
pub const LEXICON: &[(&str, Pos)] = &[
    // nouns
    ("art", Pos::Noun), ("museum", Pos::Noun), ("team", Pos::Noun), ("tournament", Pos::Noun),
    ("year", Pos::Noun), ("time", Pos::Noun), ("people", Pos::Noun), ("person", Pos::Noun),
    ("city", Pos::Noun), ("country", Pos::Noun), ("state", Pos::Noun), ("world", Pos::Noun),
    ("school", Pos::Noun), ("university", Pos::Noun), ("college", Pos::Noun),
    ("student", Pos::Noun), ("church", Pos::Noun), ("government", Pos::Noun),
    ("war", Pos::Noun), ("name", Pos::Noun), ("number", Pos::Noun), ("part", Pos::Noun),
    ("area", Pos::Noun), ("day", Pos::Noun), ("century", Pos::Noun), ("group", Pos::Noun),
    ("company", Pos::Noun), ("system", Pos::Noun), ("language", Pos::Noun),
    ("building", Pos::Noun), ("population", Pos::Noun), ("game", Pos::Noun),
    ("season", Pos::Noun), ("album", Pos::Noun), ("song", Pos::Noun), ("film", Pos::Noun),
    ("music", Pos::Noun), ("king", Pos::Noun), ("president", Pos::Noun), ("member", Pos::Noun),
    ("family", Pos::Noun), ("water", Pos::Noun), ("land", Pos::Noun), ("river", Pos::Noun),
    ("island", Pos::Noun), ("type", Pos::Noun), ("percent", Pos::Noun), ("money", Pos::Noun),
    ("law", Pos::Noun), ("power", Pos::Noun), ("office", Pos::Noun), ("library", Pos::Noun),
    ("newspaper", Pos::Noun), ("magazine", Pos::Noun), ("book", Pos::Noun), ("car", Pos::Noun),
    ("house", Pos::Noun), ("lamp", Pos::Noun), ("cup", Pos::Noun), ("pen", Pos::Noun),
    ("chair", Pos::Noun), ("table", Pos::Noun), ("bike", Pos::Noun), ("boat", Pos::Noun),
    ("clock", Pos::Noun), ("coat", Pos::Noun), ("desk", Pos::Noun), ("door", Pos::Noun),
    ("drum", Pos::Noun), ("guitar", Pos::Noun), ("hat", Pos::Noun), ("key", Pos::Noun),
    ("kite", Pos::Noun), ("ladder", Pos::Noun), ("map", Pos::Noun), ("mirror", Pos::Noun),
    ("piano", Pos::Noun), ("radio", Pos::Noun), ("ring", Pos::Noun), ("rope", Pos::Noun),
    ("sofa", Pos::Noun), ("stove", Pos::Noun), ("tent", Pos::Noun), ("truck", Pos::Noun),
    ("violin", Pos::Noun), ("wagon", Pos::Noun), ("watch", Pos::Noun), ("basket", Pos::Noun),
    ("blanket", Pos::Noun), ("bottle", Pos::Noun), ("camera", Pos::Noun), ("candle", Pos::Noun),
    ("carpet", Pos::Noun), ("helmet", Pos::Noun), ("jacket", Pos::Noun), ("kettle", Pos::Noun),
    ("lantern", Pos::Noun), ("painting", Pos::Noun), ("statue", Pos::Noun),
    ("telescope", Pos::Noun), ("trumpet", Pos::Noun), ("umbrella", Pos::Noun),
    ("vase", Pos::Noun), ("wallet", Pos::Noun), ("horse", Pos::Noun), ("ship", Pos::Noun),
    ("farm", Pos::Noun), ("shop", Pos::Noun), ("garden", Pos::Noun), ("bridge", Pos::Noun),
    ("tower", Pos::Noun), ("road", Pos::Noun), ("street", Pos::Noun), ("station", Pos::Noun),
    ("player", Pos::Noun), ("director", Pos::Noun), ("army", Pos::Noun), ("empire", Pos::Noun),
    ("party", Pos::Noun), ("church", Pos::Noun), ("court", Pos::Noun), ("age", Pos::Noun),
    ("man", Pos::Noun), ("woman", Pos::Noun), ("child", Pos::Noun), ("word", Pos::Noun),
    ("place", Pos::Noun), ("term", Pos::Noun), ("process", Pos::Noun), ("form", Pos::Noun),
    ("cost", Pos::Noun), ("price", Pos::Noun), ("size", Pos::Noun), ("end", Pos::Noun),
    // verbs
    ("participate", Pos::Verb), ("administer", Pos::Verb), ("buy", Pos::Verb),
    ("sell", Pos::Verb), ("lend", Pos::Verb), ("borrow", Pos::Verb), ("push", Pos::Verb),
    ("pull", Pos::Verb), ("raise", Pos::Verb), ("lower", Pos::Verb), ("accept", Pos::Verb),
    ("reject", Pos::Verb), ("remember", Pos::Verb), ("forget", Pos::Verb), ("hire", Pos::Verb),
    ("fire", Pos::Verb), ("include", Pos::Verb), ("exclude", Pos::Verb), ("import", Pos::Verb),
    ("export", Pos::Verb), ("attack", Pos::Verb), ("defend", Pos::Verb), ("increase", Pos::Verb),
    ("decrease", Pos::Verb), ("say", Pos::Verb), ("make", Pos::Verb), ("go", Pos::Verb),
    ("take", Pos::Verb), ("come", Pos::Verb), ("see", Pos::Verb), ("know", Pos::Verb),
    ("get", Pos::Verb), ("give", Pos::Verb), ("find", Pos::Verb), ("think", Pos::Verb),
    ("tell", Pos::Verb), ("become", Pos::Verb), ("leave", Pos::Verb), ("feel", Pos::Verb),
    ("bring", Pos::Verb), ("begin", Pos::Verb), ("keep", Pos::Verb), ("hold", Pos::Verb),
    ("write", Pos::Verb), ("provide", Pos::Verb), ("lose", Pos::Verb), ("pay", Pos::Verb),
    ("meet", Pos::Verb), ("lead", Pos::Verb), ("win", Pos::Verb), ("build", Pos::Verb),
    ("receive", Pos::Verb), ("call", Pos::Verb), ("use", Pos::Verb), ("found", Pos::Verb),
    ("create", Pos::Verb), ("establish", Pos::Verb), ("own", Pos::Verb), ("open", Pos::Verb),
    ("close", Pos::Verb), ("love", Pos::Verb), ("hate", Pos::Verb), ("start", Pos::Verb),
    ("finish", Pos::Verb), ("name", Pos::Noun), ("play", Pos::Verb), ("happen", Pos::Verb),
    ("occur", Pos::Verb), ("die", Pos::Verb), ("live", Pos::Verb), ("consider", Pos::Verb),
    ("contain", Pos::Verb), ("describe", Pos::Verb), ("produce", Pos::Verb),
    ("publish", Pos::Verb), ("release", Pos::Verb), ("replace", Pos::Verb),
    ("represent", Pos::Verb), ("require", Pos::Verb), ("serve", Pos::Verb),
];

pub fn lexicon_tag(lower: &str) -> Option<Pos> {
    LEXICON.iter().find(|(w, _)| *w == lower).map(|&(_, p)| p)
}

/// Regular and irregular verb lemmas used to validate lemmatization when no
/// WordNet index is loaded.
pub const COMMON_VERBS: &[&str] = &[
    "accept", "add", "administer", "agree", "allow", "announce", "appear", "apply", "arrive",
    "ask", "attack", "attend", "believe", "belong", "borrow", "call", "carry", "cause",
    "change", "claim", "close", "compete", "complete", "consider", "contain", "continue",
    "create", "decide", "declare", "decrease", "defend", "describe", "design", "destroy",
    "develop", "die", "discover", "divide", "end", "enter", "establish", "exclude", "exist",
    "expect", "explain", "export", "fail", "finish", "fire", "follow", "form", "found",
    "happen", "hate", "help", "hire", "hope", "import", "include", "increase", "introduce",
    "invent", "involve", "join", "kill", "last", "learn", "like", "limit", "listen", "live",
    "look", "love", "lower", "manage", "marry", "move", "name", "need", "note", "offer",
    "open", "order", "own", "participate", "pass", "perform", "place", "plan", "play",
    "prefer", "prepare", "produce", "provide", "publish", "pull", "push", "raise", "reach",
    "receive", "record", "reduce", "refer", "reject", "release", "remain", "remember",
    "remove", "replace", "report", "represent", "require", "return", "serve", "settle",
    "start", "stay", "stop", "study", "support", "talk", "try", "turn", "use", "visit", "wait",
    "walk", "want", "watch", "work",
];

/// Abbreviations whose trailing period neither ends a token nor a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "st", "no", "jr", "sr", "vs", "prof", "gen", "gov", "sen", "rep",
    "mt", "ft", "inc", "ltd", "co", "corp", "etc", "e.g", "i.e", "u.s", "u.k", "jan", "feb",
    "mar", "apr", "aug", "sept", "oct", "nov", "dec", "approx", "capt", "col", "lt", "sgt",
];

pub fn is_abbreviation(word: &str) -> bool {
    let lower = word.to_lowercase();
    let bytes = word.as_bytes();
    (bytes.len() == 1 && bytes[0].is_ascii_uppercase())
        || ABBREVIATIONS.contains(&lower.as_str())
        || (lower.contains('.') && lower.chars().all(|c| c.is_alphabetic() || c == '.'))
}

pub const IRREGULAR_PLURALS: &[(&str, &str)] = &[
    ("men", "man"),
    ("women", "woman"),
    ("children", "child"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("mice", "mouse"),
    ("geese", "goose"),
    ("people", "people"),
    ("data", "data"),
    ("media", "media"),
];
