#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use tripoem_core::design::{Order, Triple, TripleSystem};
use tripoem_core::poem::{parse_poem, Poem};

pub const CORPUS: [&str; 5] = [
    "karak",
    "a_pause_in_the_rain",
    "footprints_on_a_snowy_evening",
    "wordstorm",
    "things_we_cannot_keep",
];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.poem"))
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).expect("corpus file")
}

pub fn corpus(name: &str) -> Poem {
    parse_poem(&corpus_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const TABLE_1_POINTS: [&str; 7] = ["Bird", "Seeks", "Home", "Trees", "Here", "Food", "Not"];

/// Table 1, line by line.
pub const TABLE_1: [[&str; 3]; 7] = [
    ["Bird", "Seeks", "Home"],
    ["Seeks", "Trees", "Here"],
    ["Bird", "Food", "Here"],
    ["Home", "Food", "Trees"],
    ["Bird", "Not", "Trees"],
    ["Seeks", "Not", "Food"],
    ["Here", "Not", "Home"],
];

pub const TABLE_2_POINTS: [&str; 9] = [
    "Dark",
    "Woods",
    "Man",
    "Lake",
    "Footprints",
    "Wind",
    "Snow",
    "Evening",
    "Horse",
];

/// Table 2, line by line.
pub const TABLE_2: [[&str; 3]; 12] = [
    ["Dark", "Woods", "Man"],
    ["Woods", "Lake", "Footprints"],
    ["Footprints", "Dark", "Wind"],
    ["Man", "Lake", "Snow"],
    ["Woods", "Snow", "Wind"],
    ["Evening", "Dark", "Lake"],
    ["Horse", "Evening", "Woods"],
    ["Horse", "Lake", "Wind"],
    ["Evening", "Man", "Wind"],
    ["Evening", "Snow", "Footprints"],
    ["Man", "Footprints", "Horse"],
    ["Dark", "Horse", "Snow"],
];

/// Order-insensitive, case-insensitive set of keyword triples.
pub fn keyword_triple_set<'a>(
    triples: impl IntoIterator<Item = [&'a str; 3]>,
) -> BTreeSet<[String; 3]> {
    triples
        .into_iter()
        .map(|t| {
            let mut t = t.map(|w| w.to_lowercase());
            t.sort();
            t
        })
        .collect()
}

pub fn system_from_table(points: &[&str], table: &[[&str; 3]]) -> TripleSystem {
    let idx = |w: &str| points.iter().position(|p| *p == w).expect("table word") as u32;
    let triples = table
        .iter()
        .map(|[a, b, c]| Triple::new(idx(a), idx(b), idx(c)).unwrap())
        .collect();
    TripleSystem::new(Order::new(points.len() as u32).unwrap(), triples).unwrap()
}

pub fn labels(points: &[&str]) -> Vec<String> {
    points.iter().map(|s| s.to_string()).collect()
}

use tripoem_core::poem::{Rule, Tag};

#[derive(Debug, Clone, Copy)]
pub enum Mutation {
    DeleteLine { stanza: usize, line: usize },
    DuplicateLine { stanza: usize, line: usize },
    SwapKeyword { stanza: usize, line: usize },
    MoveLine { stanza: usize, line: usize },
}

impl Mutation {
    /// Rules a mutated poem is expected to violate (at least one of them).
    pub fn expected_rules(self) -> &'static [Rule] {
        match self {
            Mutation::DeleteLine { .. } | Mutation::DuplicateLine { .. } => {
                &[Rule::PairCoverage, Rule::LineCount]
            }
            Mutation::SwapKeyword { .. } => &[Rule::LineKeywords],
            Mutation::MoveLine { .. } => &[Rule::StanzaSize, Rule::StanzaCoverage],
        }
    }

    pub fn apply(self, poem: &Poem) -> Poem {
        let mut p = poem.clone();
        match self {
            Mutation::DeleteLine { stanza, line } => {
                p.stanzas[stanza].remove(line);
                p.stanzas.retain(|s| !s.is_empty());
            }
            Mutation::DuplicateLine { stanza, line } => {
                let copy = p.stanzas[stanza][line].clone();
                p.stanzas[stanza].insert(line + 1, copy);
            }
            Mutation::SwapKeyword { stanza, line } => {
                let original = &p.stanzas[stanza][line];
                let token = original
                    .tokens
                    .iter()
                    .find(|t| matches!(t.tag, Tag::Keyword(_)))
                    .expect("line has a keyword")
                    .text
                    .clone();
                let text = original.source_text.replacen(&token, "zzyzx", 1);
                p.set_line(stanza, line, &text).unwrap();
            }
            Mutation::MoveLine { stanza, line } => {
                let moved = p.stanzas[stanza].remove(line);
                let target = (stanza + 1) % p.stanzas.len();
                p.stanzas[target].push(moved);
            }
        }
        p
    }
}

/// Every mutation of every line; line moves only for resolvable variants.
pub fn all_mutations(poem: &Poem) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (stanza, lines) in poem.stanzas.iter().enumerate() {
        for line in 0..lines.len() {
            out.push(Mutation::DeleteLine { stanza, line });
            out.push(Mutation::DuplicateLine { stanza, line });
            out.push(Mutation::SwapKeyword { stanza, line });
            if poem.variant.is_resolvable() {
                out.push(Mutation::MoveLine { stanza, line });
            }
        }
    }
    out
}
