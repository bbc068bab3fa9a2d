//! JSON interchange for triple systems.
//!
//! ```json
//! { "order": 7, "points": ["bird", ...], "triples": [[0, 1, 2], ...], "classes": [[0, 5, 9], ...] }
//! ```
//!
//! `classes` is optional and holds indices into `triples`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::design::{Order, Resolution, Triple, TripleSystem};
use crate::error::InterchangeError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub order: u32,
    pub points: Vec<String>,
    pub triples: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<usize>>>,
}

/// A validated document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedSystem {
    pub system: TripleSystem,
    pub points: Vec<String>,
    pub resolution: Option<Resolution>,
}

/// `p1`, `p2`, ... for systems generated without keywords.
pub fn default_labels(u: u32) -> Vec<String> {
    (1..=u).map(|i| format!("p{i}")).collect()
}

impl SystemDocument {
    pub fn from_system(system: &TripleSystem, points: &[String]) -> Self {
        assert_eq!(points.len(), system.order().get() as usize);
        SystemDocument {
            order: system.order().get(),
            points: points.to_vec(),
            triples: system
                .triples()
                .iter()
                .map(|t| t.points().to_vec())
                .collect(),
            classes: None,
        }
    }

    pub fn from_resolution(resolution: &Resolution, points: &[String]) -> Self {
        SystemDocument {
            classes: Some(resolution.class_indices()),
            ..SystemDocument::from_system(resolution.system(), points)
        }
    }

    pub fn parse(text: &str) -> Result<LoadedSystem, InterchangeError> {
        let doc: SystemDocument =
            serde_json::from_str(text).map_err(|e| InterchangeError::Json(e.to_string()))?;
        doc.load()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    /// Checks shape and ranges; errors name the offending position.
    pub fn load(&self) -> Result<LoadedSystem, InterchangeError> {
        let order =
            Order::new(self.order).map_err(|e| InterchangeError::at("order", e.to_string()))?;
        if self.points.len() != self.order as usize {
            return Err(InterchangeError::at(
                "points",
                format!("expected {} entries, got {}", self.order, self.points.len()),
            ));
        }
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (i, word) in self.points.iter().enumerate() {
            if word.trim().is_empty() {
                return Err(InterchangeError::at(format!("points[{i}]"), "empty label"));
            }
            if let Some(first) = seen.insert(word.as_str(), i) {
                return Err(InterchangeError::at(
                    format!("points[{i}]"),
                    format!("duplicate of points[{first}] ({word:?})"),
                ));
            }
        }

        let mut triples = Vec::with_capacity(self.triples.len());
        for (i, entry) in self.triples.iter().enumerate() {
            let &[a, b, c] = entry.as_slice() else {
                return Err(InterchangeError::at(
                    format!("triples[{i}]"),
                    format!("expected 3 entries, got {}", entry.len()),
                ));
            };
            if let Some(j) = entry.iter().position(|&p| p >= self.order) {
                return Err(InterchangeError::at(
                    format!("triples[{i}][{j}]"),
                    format!("point {} out of range for order {}", entry[j], self.order),
                ));
            }
            if !(a < b && b < c) {
                return Err(InterchangeError::at(
                    format!("triples[{i}]"),
                    "entries must be strictly ascending",
                ));
            }
            triples.push(Triple::new(a, b, c).expect("ascending entries are distinct"));
        }
        // `TripleSystem` sorts; class indices refer to document order
        let system = TripleSystem::new(order, triples.clone())
            .map_err(|e| InterchangeError::at("triples", e.to_string()))?;

        let resolution = match &self.classes {
            None => None,
            Some(classes) => {
                let mut resolved = Vec::with_capacity(classes.len());
                for (k, class) in classes.iter().enumerate() {
                    let mut members = Vec::with_capacity(class.len());
                    for (j, &idx) in class.iter().enumerate() {
                        let Some(t) = triples.get(idx) else {
                            return Err(InterchangeError::at(
                                format!("classes[{k}][{j}]"),
                                format!("triple index {idx} out of range"),
                            ));
                        };
                        members.push(*t);
                    }
                    resolved.push(members);
                }
                Some(
                    Resolution::new(system.clone(), resolved)
                        .map_err(|e| InterchangeError::at("classes", e.to_string()))?,
                )
            }
        };

        Ok(LoadedSystem {
            system,
            points: self.points.clone(),
            resolution,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{construct_sts, find_resolution, SearchBudget};

    fn err(text: &str) -> String {
        SystemDocument::parse(text).unwrap_err().to_string()
    }

    #[test]
    fn round_trip_with_classes() {
        let s = construct_sts(9, 4).unwrap();
        let res = find_resolution(&s, SearchBudget::default())
            .unwrap()
            .resolution()
            .unwrap();
        let doc = SystemDocument::from_resolution(&res, &default_labels(9));
        let loaded = SystemDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(loaded.system, s);
        assert_eq!(loaded.resolution.as_ref(), Some(&res));
        assert_eq!(loaded.points[0], "p1");
    }

    #[test]
    fn classes_omitted_when_absent() {
        let s = construct_sts(3, 0).unwrap();
        let json = SystemDocument::from_system(&s, &default_labels(3)).to_json();
        assert!(!json.contains("classes"));
    }

    #[test]
    fn positional_errors() {
        assert_eq!(
            err(r#"{"order":3,"points":["a","b"],"triples":[]}"#),
            "points: expected 3 entries, got 2"
        );
        assert_eq!(
            err(r#"{"order":3,"points":["a","b","a"],"triples":[]}"#),
            "points[2]: duplicate of points[0] (\"a\")"
        );
        assert_eq!(
            err(r#"{"order":3,"points":["a","b","c"],"triples":[[0,2,1]]}"#),
            "triples[0]: entries must be strictly ascending"
        );
        assert_eq!(
            err(r#"{"order":3,"points":["a","b","c"],"triples":[[0,1,2],[0,1,3]]}"#),
            "triples[1][2]: point 3 out of range for order 3"
        );
        assert_eq!(
            err(r#"{"order":3,"points":["a","b","c"],"triples":[[0,1]]}"#),
            "triples[0]: expected 3 entries, got 2"
        );
        assert_eq!(
            err(r#"{"order":3,"points":["a","b","c"],"triples":[[0,1,2]],"classes":[[1]]}"#),
            "classes[0][0]: triple index 1 out of range"
        );
        assert!(err(r#"{"order":3"#).starts_with("malformed JSON"));
        assert!(err(r#"{"order":2,"points":["a","b"],"triples":[]}"#).starts_with("order:"));
    }

    #[test]
    fn invalid_systems_load_but_bad_classes_do_not() {
        // loading accepts any triple collection; verification is separate
        let loaded = SystemDocument::parse(
            r#"{"order":7,"points":["a","b","c","d","e","f","g"],"triples":[[0,1,2]]}"#,
        )
        .unwrap();
        assert_eq!(loaded.system.len(), 1);
        let e = err(
            r#"{"order":9,"points":["a","b","c","d","e","f","g","h","i"],"triples":[[0,1,2]],"classes":[[0]]}"#,
        );
        assert!(e.starts_with("classes:"), "{e}");
    }
}
