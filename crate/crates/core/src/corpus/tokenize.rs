use std::ops::Range;

/// Splits raw text into lowercase word tokens and sentence ranges.
///
/// Tokens are maximal runs of letters and digits. A single apostrophe
/// between two alphanumeric characters stays inside the token, so
/// `isn't` survives as one word. A sentence ends at `.`, `!` or `?`
/// followed by whitespace or the end of the text. Sentences without any
/// token are dropped, so the returned ranges always partition the tokens.
pub fn tokenize(raw: &str) -> (Vec<String>, Vec<Range<usize>>) {
    let chars: Vec<char> = raw.chars().collect();
    let mut tokens = Vec::new();
    let mut bounds = Vec::new();
    let mut sentence_start = 0;
    let mut current = String::new();
    let mut has_apostrophe = false;

    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if is_apostrophe(c)
            && !current.is_empty()
            && !has_apostrophe
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            current.push('\'');
            has_apostrophe = true;
        } else {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
                has_apostrophe = false;
            }
            if matches!(c, '.' | '!' | '?')
                && chars.get(i + 1).is_none_or(|n| n.is_whitespace())
                && tokens.len() > sentence_start
            {
                bounds.push(sentence_start..tokens.len());
                sentence_start = tokens.len();
            }
        }
        i += 1;
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    if tokens.len() > sentence_start {
        bounds.push(sentence_start..tokens.len());
    }
    (tokens, bounds)
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}
