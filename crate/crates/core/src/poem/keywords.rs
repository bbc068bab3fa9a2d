use std::collections::HashMap;

use crate::design::{admissible_order, Order, Point};
use crate::error::KeywordError;

use super::text::{normalize, split_tokens};

/// Binds design points `0..u` to keywords, in the order given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordMap {
    words: Vec<String>,
    normalized: Vec<String>,
}

impl KeywordMap {
    pub fn new<S: AsRef<str>>(words: &[S]) -> Result<Self, KeywordError> {
        if words.len() < 3 {
            return Err(KeywordError::TooFew(words.len()));
        }
        let mut display = Vec::with_capacity(words.len());
        let mut normalized = Vec::with_capacity(words.len());
        for (i, word) in words.iter().enumerate() {
            let word = word.as_ref().trim();
            let norm = normalize(word);
            if norm.is_empty() {
                return Err(KeywordError::Empty(i + 1));
            }
            if split_tokens(word).count() != 1 {
                return Err(KeywordError::NotSingleWord(word.to_owned()));
            }
            display.push(word.to_owned());
            normalized.push(norm);
        }

        let mut seen: HashMap<&str, usize> = HashMap::new();
        let mut duplicates = Vec::new();
        for (i, norm) in normalized.iter().enumerate() {
            if let Some(&first) = seen.get(norm.as_str()) {
                if !duplicates.contains(&display[first]) {
                    duplicates.push(display[first].clone());
                }
                duplicates.push(display[i].clone());
            } else {
                seen.insert(norm, i);
            }
        }
        if !duplicates.is_empty() {
            return Err(KeywordError::Duplicate(duplicates));
        }

        Ok(KeywordMap {
            words: display,
            normalized,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, point: Point) -> &str {
        &self.words[point as usize]
    }

    /// Point whose keyword normalizes to `normalized`.
    pub fn point_of(&self, normalized: &str) -> Option<Point> {
        self.normalized
            .iter()
            .position(|w| w == normalized)
            .map(|i| i as Point)
    }

    pub fn order(&self) -> Order {
        Order::new(self.words.len() as u32).expect("at least 3 keywords")
    }

    pub fn require_admissible(&self) -> Result<Order, KeywordError> {
        if admissible_order(self.words.len() as u32) {
            Ok(self.order())
        } else {
            Err(KeywordError::Inadmissible(self.words.len()))
        }
    }
}
