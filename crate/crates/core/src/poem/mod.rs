//! Poems whose lines realize the triples of a Steiner triple system.
//!
//! A `.poem` file is a `#! key: value` header followed by the body:
//!
//! ```text
//! #! title: Karak
//! #! keywords: Bird, Seeks, Home, Trees, Here, Food, Not
//! #! variant: pure
//!
//! Bird seeks home.
//! Seeks trees here.
//!
//! Home not here.
//! ```
//!
//! Stanzas are separated by blank lines. Required header keys are `keywords`
//! and `variant`; `title`, `after` and `rules` are optional.

mod keywords;
mod scaffold;
mod text;
mod validate;

pub use keywords::KeywordMap;
pub use scaffold::{scaffold, SCAFFOLD_ATTEMPTS};
pub use text::{normalize, split_tokens};
pub use validate::{validate_poem, Finding, Location, Rule, Severity, ValidationReport, Verdict};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::design::Point;
use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Pure,
    Relaxed,
    ResolvablePure,
    ResolvableRelaxed,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Pure,
        Variant::Relaxed,
        Variant::ResolvablePure,
        Variant::ResolvableRelaxed,
    ];

    /// No filler words allowed.
    pub fn is_pure(self) -> bool {
        matches!(self, Variant::Pure | Variant::ResolvablePure)
    }

    /// Stanzas are parallel classes.
    pub fn is_resolvable(self) -> bool {
        matches!(self, Variant::ResolvablePure | Variant::ResolvableRelaxed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Pure => "pure",
            Variant::Relaxed => "relaxed",
            Variant::ResolvablePure => "resolvable-pure",
            Variant::ResolvableRelaxed => "resolvable-relaxed",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| {
                format!("unknown variant {s:?}; expected pure, relaxed, resolvable-pure or resolvable-relaxed")
            })
    }
}

/// Optional extra constraints.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PoemRules {
    /// The last keyword of each line is the first keyword of the next.
    pub chain_last_to_first: bool,
}

impl PoemRules {
    pub fn parse_list(list: &str) -> Result<Self, String> {
        let mut rules = PoemRules::default();
        for flag in list.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            match flag {
                "chain_last_to_first" => rules.chain_last_to_first = true,
                other => {
                    return Err(format!(
                        "unknown rule {other:?}; known rules: chain_last_to_first"
                    ))
                }
            }
        }
        Ok(rules)
    }

    pub fn to_list(self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if self.chain_last_to_first {
            flags.push("chain_last_to_first");
        }
        flags
    }

    pub fn is_empty(self) -> bool {
        self == PoemRules::default()
    }

    pub fn union(self, other: PoemRules) -> PoemRules {
        PoemRules {
            chain_last_to_first: self.chain_last_to_first || other.chain_last_to_first,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "point", rename_all = "snake_case")]
pub enum Tag {
    Keyword(Point),
    Filler,
    /// Nothing left after normalization; never counted as filler.
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub text: String,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoemLine {
    pub source_text: String,
    pub tokens: Vec<Token>,
}

impl PoemLine {
    pub fn parse(source: &str, keywords: &KeywordMap) -> Self {
        let source_text = source.trim().to_owned();
        let tokens = split_tokens(&source_text)
            .map(|raw| {
                let norm = normalize(raw);
                let tag = if norm.is_empty() {
                    Tag::Punctuation
                } else {
                    keywords.point_of(&norm).map_or(Tag::Filler, Tag::Keyword)
                };
                Token {
                    text: raw.to_owned(),
                    tag,
                }
            })
            .collect();
        PoemLine {
            source_text,
            tokens,
        }
    }

    /// Keyword occurrences in reading order, repeats included.
    pub fn keyword_occurrences(&self) -> impl Iterator<Item = Point> + '_ {
        self.tokens.iter().filter_map(|t| match t.tag {
            Tag::Keyword(p) => Some(p),
            _ => None,
        })
    }

    /// Distinct keywords in ascending point order.
    pub fn keyword_set(&self) -> Vec<Point> {
        let mut points: Vec<Point> = self.keyword_occurrences().collect();
        points.sort_unstable();
        points.dedup();
        points
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poem {
    pub title: Option<String>,
    pub after: Option<String>,
    pub variant: Variant,
    pub keywords: KeywordMap,
    pub rules: PoemRules,
    pub stanzas: Vec<Vec<PoemLine>>,
}

impl Poem {
    /// Lines in reading order with their 0-based stanza and line indices.
    pub fn lines(&self) -> impl Iterator<Item = (usize, usize, &PoemLine)> {
        self.stanzas
            .iter()
            .enumerate()
            .flat_map(|(s, lines)| lines.iter().enumerate().map(move |(l, line)| (s, l, line)))
    }

    pub fn line_count(&self) -> usize {
        self.stanzas.iter().map(Vec::len).sum()
    }

    /// Re-tokenizes one line in place. Indices are 0-based.
    pub fn set_line(&mut self, stanza: usize, line: usize, text: &str) -> Option<()> {
        let slot = self.stanzas.get_mut(stanza)?.get_mut(line)?;
        *slot = PoemLine::parse(text, &self.keywords);
        Some(())
    }

    /// Serializes back to the `.poem` format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(title) = &self.title {
            out.push_str(&format!("#! title: {title}\n"));
        }
        if let Some(after) = &self.after {
            out.push_str(&format!("#! after: {after}\n"));
        }
        out.push_str(&format!(
            "#! keywords: {}\n",
            self.keywords.words().join(", ")
        ));
        out.push_str(&format!("#! variant: {}\n", self.variant));
        if !self.rules.is_empty() {
            out.push_str(&format!("#! rules: {}\n", self.rules.to_list().join(", ")));
        }
        for stanza in &self.stanzas {
            out.push('\n');
            for line in stanza {
                out.push_str(&line.source_text);
                out.push('\n');
            }
        }
        out
    }
}

const HEADER_PREFIX: &str = "#!";

/// Parses a `.poem` file.
///
/// Only the header can fail; how many keywords a line carries is left to
/// [`validate_poem`].
pub fn parse_poem(text: &str) -> Result<Poem, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();

    let mut title = None;
    let mut after = None;
    let mut keywords = None;
    let mut variant = None;
    let mut rules = None;

    while let Some(&(number, raw)) = lines.peek() {
        let Some(entry) = raw.trim_start().strip_prefix(HEADER_PREFIX) else {
            break;
        };
        lines.next();
        let Some((key, value)) = entry.split_once(':') else {
            return Err(ParseError::new(
                number,
                "header line needs the form \"#! key: value\"",
            ));
        };
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_owned();
        let slot = match key.as_str() {
            "title" => &mut title,
            "after" => &mut after,
            "keywords" => &mut keywords,
            "variant" => &mut variant,
            "rules" => &mut rules,
            other => {
                return Err(ParseError::new(
                    number,
                    format!("unknown header key {other:?}; expected title, after, keywords, variant or rules"),
                ))
            }
        };
        if slot.is_some() {
            return Err(ParseError::new(
                number,
                format!("header key {key:?} given twice"),
            ));
        }
        *slot = Some((number, value));
    }

    let header_end = lines.peek().map_or(text.lines().count() + 1, |&(n, _)| n);
    let (kw_line, kw_value) =
        keywords.ok_or_else(|| ParseError::new(header_end, "missing header key \"keywords\""))?;
    let words: Vec<&str> = kw_value
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .collect();
    let keywords = KeywordMap::new(&words).map_err(|e| ParseError::new(kw_line, e.to_string()))?;
    keywords
        .require_admissible()
        .map_err(|e| ParseError::new(kw_line, e.to_string()))?;

    let (variant_line, variant_value) =
        variant.ok_or_else(|| ParseError::new(header_end, "missing header key \"variant\""))?;
    let variant: Variant = variant_value
        .parse()
        .map_err(|e: String| ParseError::new(variant_line, e))?;
    let rules = match rules {
        None => PoemRules::default(),
        Some((line, value)) => {
            PoemRules::parse_list(&value).map_err(|e| ParseError::new(line, e))?
        }
    };

    let mut stanzas: Vec<Vec<PoemLine>> = Vec::new();
    let mut current = Vec::new();
    for (_, raw) in lines {
        if raw.trim().is_empty() {
            if !current.is_empty() {
                stanzas.push(std::mem::take(&mut current));
            }
        } else {
            current.push(PoemLine::parse(raw, &keywords));
        }
    }
    if !current.is_empty() {
        stanzas.push(current);
    }

    Ok(Poem {
        title: title.map(|(_, v)| v),
        after: after.map(|(_, v)| v),
        variant,
        keywords,
        rules,
        stanzas,
    })
}
