//! Token splitting and normalization shared by keyword binding and matching.

/// Characters a token is split on besides whitespace.
const DASHES: [char; 4] = ['-', '\u{2010}', '\u{2013}', '\u{2014}'];

/// Case-folded form used for matching: leading and trailing non-alphanumeric
/// characters (punctuation, quotes, ellipses, asterisks) are stripped.
/// Internal punctuation such as apostrophes is kept.
pub fn normalize(token: &str) -> String {
    token
        .trim_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
}

/// Splits a line into raw tokens on whitespace and dashes.
pub fn split_tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || DASHES.contains(&c))
        .filter(|t| !t.is_empty())
}
