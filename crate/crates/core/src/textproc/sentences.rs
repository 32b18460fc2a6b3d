use super::words::is_abbreviation;

const OPENERS: &[char] = &['"', '\'', '(', '[', '\u{201c}', '\u{2018}'];
const CLOSERS: &[char] = &['"', '\'', ')', ']', '\u{201d}', '\u{2019}'];

/// Sentence spans partitioning `text`: each span runs from its first byte to
/// the first byte of the next sentence, the last one to the end of the text.
pub fn sentence_split(text: &str) -> Vec<(usize, usize)> {
    if text.trim().is_empty() {
        return Vec::new();
    }
    let mut starts = vec![0];
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (matches!(chars[j].1, '.' | '!' | '?') || CLOSERS.contains(&chars[j].1)) {
            j += 1;
        }
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let mut m = k;
        while m < chars.len() && OPENERS.contains(&chars[m].1) {
            m += 1;
        }
        let boundary = k > j && m < chars.len() && chars[m].1.is_uppercase();
        if boundary && !(c == '.' && ends_with_abbreviation(&text[..pos])) {
            starts.push(chars[k].0);
        }
        i = j;
    }
    let mut spans: Vec<(usize, usize)> = starts
        .windows(2)
        .map(|w| (w[0], w[1]))
        .collect();
    spans.push((*starts.last().unwrap(), text.len()));
    spans
}

fn ends_with_abbreviation(prefix: &str) -> bool {
    let word = prefix
        .rsplit(|c: char| c.is_whitespace() || c == '(')
        .next()
        .unwrap_or_default();
    !word.is_empty() && is_abbreviation(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pieces(text: &str) -> Vec<&str> {
        sentence_split(text).into_iter().map(|(s, e)| &text[s..e]).collect()
    }

    #[test]
    fn splits_on_terminal_punctuation() {
        assert_eq!(pieces("A b. C d."), ["A b. ", "C d."]);
        assert_eq!(pieces("Stop! Who goes there? Me."), ["Stop! ", "Who goes there? ", "Me."]);
    }

    #[test]
    fn abbreviation_guard() {
        assert_eq!(pieces("Mr. Smith ran. He won."), ["Mr. Smith ran. ", "He won."]);
        assert_eq!(pieces("It was built by J. Doe in St. Louis."), ["It was built by J. Doe in St. Louis."]);
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(pieces("Approx. three. e.g. more"), ["Approx. three. e.g. more"]);
    }

    #[test]
    fn empty_text() {
        assert!(sentence_split("").is_empty());
    }

    #[test]
    fn spans_cover_text() {
        let text = "  One. \"Two.\" Three? Four";
        let spans = sentence_split(text);
        assert_eq!(spans.first().unwrap().0, 0);
        assert_eq!(spans.last().unwrap().1, text.len());
        for w in spans.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert_eq!(spans.len(), 4);
    }
}
