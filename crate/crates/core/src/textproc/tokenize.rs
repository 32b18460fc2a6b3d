use super::words::is_abbreviation;

/// A token surface with its byte span in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub span: (usize, usize),
}

const CLITICS: &[&str] = &["n't", "'s", "'re", "'ve", "'ll", "'d", "'m"];

/// Splits on whitespace, peels punctuation off word edges and separates
/// contraction clitics (`isn't` -> `is` + `n't`).
pub fn tokenize(text: &str) -> Vec<RawToken> {
    let mut out = Vec::new();
    let mut chunk_start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (c.is_whitespace(), chunk_start) {
            (true, Some(start)) => {
                split_chunk(text, start, i, &mut out);
                chunk_start = None;
            }
            (false, None) => chunk_start = Some(i),
            _ => {}
        }
    }
    out
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn split_chunk(text: &str, start: usize, end: usize, out: &mut Vec<RawToken>) {
    let push = |out: &mut Vec<RawToken>, s: usize, e: usize| {
        out.push(RawToken {
            surface: text[s..e].to_string(),
            span: (s, e),
        })
    };

    let mut lo = start;
    let mut hi = end;
    // leading punctuation, one token per character
    while lo < hi {
        let c = text[lo..hi].chars().next().unwrap();
        if is_word_char(c) {
            break;
        }
        push(out, lo, lo + c.len_utf8());
        lo += c.len_utf8();
    }
    // trailing punctuation, collected right-to-left
    let mut trailing = Vec::new();
    while lo < hi {
        let c = text[lo..hi].chars().next_back().unwrap();
        if is_word_char(c) {
            break;
        }
        if c == '.' && is_abbreviation(&text[lo..hi - 1]) && hi - 1 > lo {
            break;
        }
        trailing.push((hi - c.len_utf8(), hi));
        hi -= c.len_utf8();
    }
    if lo < hi {
        let core = &text[lo..hi];
        let normalized = core.replace('\u{2019}', "'").to_lowercase();
        let clitic = CLITICS
            .iter()
            .find(|cl| normalized.ends_with(*cl) && normalized.len() > cl.len());
        match clitic {
            Some(cl) => {
                // curly apostrophes are three bytes, so measure in chars
                let clitic_chars = cl.chars().count();
                let split = core
                    .char_indices()
                    .rev()
                    .nth(clitic_chars - 1)
                    .map(|(i, _)| lo + i)
                    .unwrap_or(lo);
                push(out, lo, split);
                push(out, split, hi);
            }
            None => push(out, lo, hi),
        }
    }
    for &(s, e) in trailing.iter().rev() {
        push(out, s, e);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn splits_question_punctuation() {
        assert_eq!(
            surfaces("Which art museum does Notre Dame administer?"),
            ["Which", "art", "museum", "does", "Notre", "Dame", "administer", "?"]
        );
    }

    #[test]
    fn empty_text_has_no_tokens() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \n").is_empty());
    }

    #[test]
    fn contractions() {
        assert_eq!(surfaces("isn't"), ["is", "n't"]);
        assert_eq!(surfaces("Doesn't it?"), ["Does", "n't", "it", "?"]);
        assert_eq!(surfaces("can't"), ["ca", "n't"]);
        assert_eq!(surfaces("John's book"), ["John", "'s", "book"]);
        assert_eq!(surfaces("they\u{2019}re"), ["they", "\u{2019}re"]);
    }

    #[test]
    fn keeps_abbreviations_and_inner_punctuation() {
        assert_eq!(surfaces("Mr. Smith"), ["Mr.", "Smith"]);
        assert_eq!(surfaces("the U.S. army"), ["the", "U.S.", "army"]);
        assert_eq!(surfaces("(e-mail, 3.5)."), ["(", "e-mail", ",", "3.5", ")", "."]);
    }

    proptest! {
        #[test]
        fn spans_reconstruct_text(text in "\\PC{0,60}") {
            let toks = tokenize(&text);
            let mut rebuilt = String::new();
            let mut cursor = 0;
            for t in &toks {
                prop_assert!(t.span.0 >= cursor);
                let gap = &text[cursor..t.span.0];
                prop_assert!(gap.chars().all(char::is_whitespace));
                rebuilt.push_str(gap);
                prop_assert_eq!(&text[t.span.0..t.span.1], t.surface.as_str());
                rebuilt.push_str(&t.surface);
                cursor = t.span.1;
            }
            prop_assert!(text[cursor..].chars().all(char::is_whitespace));
            rebuilt.push_str(&text[cursor..]);
            prop_assert_eq!(rebuilt, text);
        }
    }
}
