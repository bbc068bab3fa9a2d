use std::fmt;

use serde::{Serialize, Serializer};

use crate::design::{verify_sts, Point, StsViolation, Triple, TripleSystem};
use crate::interchange::SystemDocument;

use super::{Poem, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Order must allow the requested structure.
    Order,
    /// Each line carries exactly three distinct keywords.
    LineKeywords,
    RepeatedKeyword,
    /// Each keyword pair shares exactly one line.
    PairCoverage,
    LineCount,
    Replication,
    FillerInPure,
    StanzaCount,
    StanzaSize,
    StanzaCoverage,
    Chain,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Order => "order",
            Rule::LineKeywords => "line-keywords",
            Rule::RepeatedKeyword => "repeated-keyword",
            Rule::PairCoverage => "pair-coverage",
            Rule::LineCount => "line-count",
            Rule::Replication => "replication",
            Rule::FillerInPure => "filler-in-pure",
            Rule::StanzaCount => "stanza-count",
            Rule::StanzaSize => "stanza-size",
            Rule::StanzaCoverage => "stanza-coverage",
            Rule::Chain => "chain",
        }
    }

    /// Rules whose findings come from the induced triple system.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            Rule::Order | Rule::PairCoverage | Rule::LineCount | Rule::Replication
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// 1-based position; unset fields mean the finding is about the whole
/// stanza or poem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stanza: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub token: Option<usize>,
}

impl Location {
    pub fn poem() -> Self {
        Location::default()
    }

    pub fn stanza(stanza: usize) -> Self {
        Location {
            stanza: Some(stanza + 1),
            ..Location::default()
        }
    }

    pub fn line(stanza: usize, line: usize) -> Self {
        Location {
            stanza: Some(stanza + 1),
            line: Some(line + 1),
            token: None,
        }
    }

    pub fn token(stanza: usize, line: usize, token: usize) -> Self {
        Location {
            token: Some(token + 1),
            ..Location::line(stanza, line)
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.stanza, self.line, self.token) {
            (None, _, _) => f.write_str("poem"),
            (Some(s), None, _) => write!(f, "stanza {s}"),
            (Some(s), Some(l), None) => write!(f, "stanza {s} line {l}"),
            (Some(s), Some(l), Some(t)) => write!(f, "stanza {s} line {l} token {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Finding {
    pub rule: Rule,
    pub severity: Severity,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{sev}[{}] {}: {}",
            self.rule, self.location, self.message
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
    derived_system: TripleSystem,
    points: Vec<String>,
}

impl ValidationReport {
    /// Triple system formed by the lines that carry exactly three keywords.
    pub fn derived_system(&self) -> &TripleSystem {
        &self.derived_system
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn has_error(&self, rule: Rule) -> bool {
        self.errors().any(|f| f.rule == rule)
    }

    /// Derived triples as keyword triples, for comparison against word lists.
    pub fn derived_keyword_triples(&self) -> Vec<[&str; 3]> {
        self.derived_system
            .triples()
            .iter()
            .map(|t| t.points().map(|p| self.points[p as usize].as_str()))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        let errors = self.errors().count();
        let warnings = self.findings.len() - errors;
        out.push_str(&format!(
            "{}: {} errors, {} warnings, {} structural lines\n",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            },
            errors,
            warnings,
            self.derived_system.len()
        ));
        out
    }
}

impl Serialize for ValidationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            verdict: Verdict,
            findings: &'a [Finding],
            derived_system: SystemDocument,
        }
        Repr {
            verdict: self.verdict,
            findings: &self.findings,
            derived_system: SystemDocument::from_system(&self.derived_system, &self.points),
        }
        .serialize(serializer)
    }
}

struct Checker<'a> {
    poem: &'a Poem,
    findings: Vec<Finding>,
}

impl Checker<'_> {
    fn push(&mut self, rule: Rule, severity: Severity, location: Location, message: String) {
        self.findings.push(Finding {
            rule,
            severity,
            location,
            message,
        });
    }

    fn error(&mut self, rule: Rule, location: Location, message: String) {
        self.push(rule, Severity::Error, location, message);
    }

    fn word(&self, p: Point) -> &str {
        self.poem.keywords.word(p)
    }

    fn words(&self, points: &[Point]) -> String {
        points
            .iter()
            .map(|&p| self.word(p))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Checks, in order: keywords per line, pair coverage of the induced system,
/// fillers (pure variants), stanza structure (resolvable variants) and the
/// optional chain rule. Lines are treated as a multiset except by the chain
/// rule.
pub fn validate_poem(poem: &Poem) -> ValidationReport {
    let mut c = Checker {
        poem,
        findings: Vec::new(),
    };
    let u = poem.keywords.len() as u32;
    let order = poem.keywords.order();

    // (a) three distinct keywords per line
    let mut triples = Vec::new();
    let mut triple_lines: Vec<(usize, usize)> = Vec::new();
    for (s, l, line) in poem.lines() {
        let occurrences: Vec<Point> = line.keyword_occurrences().collect();
        let set = line.keyword_set();
        if set.len() != 3 {
            c.error(
                Rule::LineKeywords,
                Location::line(s, l),
                format!("line has {} keywords, needs 3", set.len()),
            );
        } else {
            triples.push(Triple::new(set[0], set[1], set[2]).expect("distinct points"));
            triple_lines.push((s, l));
        }
        if occurrences.len() != set.len() {
            let repeated: Vec<Point> = set
                .iter()
                .copied()
                .filter(|p| occurrences.iter().filter(|&q| q == p).count() > 1)
                .collect();
            c.push(
                Rule::RepeatedKeyword,
                Severity::Warning,
                Location::line(s, l),
                format!("keyword repeated within the line: {}", c.words(&repeated)),
            );
        }
    }

    // (b) induced system must be an STS
    let derived = TripleSystem::new(order, triples.clone()).expect("keyword points in range");
    let report = verify_sts(&derived);
    for violation in &report.violations {
        match *violation {
            StsViolation::InadmissibleOrder { order } => c.error(
                Rule::Order,
                Location::poem(),
                format!("order {order} inadmissible: a triple poem needs u mod 6 to be 1 or 3"),
            ),
            StsViolation::UncoveredPair { pair: (a, b) } => c.error(
                Rule::PairCoverage,
                Location::poem(),
                format!(
                    "keywords {} and {} never share a line",
                    c.word(a),
                    c.word(b)
                ),
            ),
            StsViolation::OvercoveredPair {
                pair: (a, b),
                count,
            } => {
                let lines: Vec<(usize, usize)> = triples
                    .iter()
                    .zip(&triple_lines)
                    .filter(|(t, _)| t.contains(a) && t.contains(b))
                    .map(|(_, &loc)| loc)
                    .collect();
                let listed: Vec<String> = lines
                    .iter()
                    .map(|&(s, l)| format!("{}.{}", s + 1, l + 1))
                    .collect();
                let (s, l) = lines[1];
                c.error(
                    Rule::PairCoverage,
                    Location::line(s, l),
                    format!(
                        "keywords {} and {} share {count} lines ({})",
                        c.word(a),
                        c.word(b),
                        listed.join(", ")
                    ),
                );
            }
            StsViolation::BlockCount { expected, actual } => c.error(
                Rule::LineCount,
                Location::poem(),
                format!("{actual} lines carry a keyword triple, STS({u}) needs {expected}"),
            ),
            StsViolation::Replication {
                point,
                expected,
                actual,
            } => c.error(
                Rule::Replication,
                Location::poem(),
                format!(
                    "keyword {} appears in {actual} lines, needs {expected}",
                    c.word(point)
                ),
            ),
        }
    }

    // (c) pure variants: keywords only
    if poem.variant.is_pure() {
        for (s, l, line) in poem.lines() {
            for (t, token) in line.tokens.iter().enumerate() {
                if token.tag == Tag::Filler {
                    c.error(
                        Rule::FillerInPure,
                        Location::token(s, l, t),
                        format!("filler word {:?} in a {} poem", token.text, poem.variant),
                    );
                }
            }
        }
    }

    // (d) resolvable variants: stanzas are parallel classes
    if poem.variant.is_resolvable() {
        check_stanzas(&mut c, u);
    }

    // (e) optional chaining
    if poem.rules.chain_last_to_first {
        let lines: Vec<_> = poem.lines().collect();
        for pair in lines.windows(2) {
            let (s0, l0, prev) = pair[0];
            let (s1, l1, next) = pair[1];
            let last = prev.keyword_occurrences().last();
            let first = next.keyword_occurrences().next();
            if last.is_none() || last != first {
                let show =
                    |p: Option<Point>| p.map_or("(none)".to_owned(), |p| c.word(p).to_owned());
                let message = format!(
                    "line {}.{} ends with keyword {} but line {}.{} starts with {}",
                    s0 + 1,
                    l0 + 1,
                    show(last),
                    s1 + 1,
                    l1 + 1,
                    show(first)
                );
                c.error(Rule::Chain, Location::line(s1, l1), message);
            }
        }
    }

    let findings = c.findings;
    let verdict = if findings.iter().any(|f| f.severity == Severity::Error) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    ValidationReport {
        verdict,
        findings,
        derived_system: derived,
        points: poem.keywords.words().to_vec(),
    }
}

fn check_stanzas(c: &mut Checker<'_>, u: u32) {
    let poem = c.poem;
    if u % 6 != 3 {
        c.error(
            Rule::Order,
            Location::poem(),
            format!("resolvable variants need u ≡ 3 (mod 6), got u = {u}"),
        );
        return;
    }
    let expected_stanzas = ((u - 1) / 2) as usize;
    let per_stanza = (u / 3) as usize;
    if poem.stanzas.len() != expected_stanzas {
        c.error(
            Rule::StanzaCount,
            Location::poem(),
            format!(
                "poem has {} stanzas, a resolvable STS({u}) has {expected_stanzas} parallel classes",
                poem.stanzas.len()
            ),
        );
    }
    for (s, stanza) in poem.stanzas.iter().enumerate() {
        if stanza.len() != per_stanza {
            c.error(
                Rule::StanzaSize,
                Location::stanza(s),
                format!("stanza has {} lines, needs {per_stanza}", stanza.len()),
            );
        }
        let mut counts = vec![0usize; u as usize];
        for line in stanza {
            for p in line.keyword_set() {
                counts[p as usize] += 1;
            }
        }
        let missing: Vec<Point> = (0..u).filter(|&p| counts[p as usize] == 0).collect();
        let repeated: Vec<Point> = (0..u).filter(|&p| counts[p as usize] > 1).collect();
        if !missing.is_empty() {
            let message = format!("stanza is missing keywords: {}", c.words(&missing));
            c.error(Rule::StanzaCoverage, Location::stanza(s), message);
        }
        if !repeated.is_empty() {
            let message = format!(
                "keywords used in more than one line: {}",
                c.words(&repeated)
            );
            c.error(Rule::StanzaCoverage, Location::stanza(s), message);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poem::parse_poem;

    const HEADER: &str =
        "#! keywords: Bird, Seeks, Home, Trees, Here, Food, Not\n#! variant: pure\n\n";
    const LINES: [&str; 7] = [
        "Bird seeks home.",
        "Seeks trees here.",
        "Bird food here?",
        "Trees: Food, home.",
        "Trees, Bird? Not …",
        "Seeks food? Not …",
        "Home not here.",
    ];

    fn poem_from(header: &str, lines: &[&str]) -> Poem {
        parse_poem(&format!("{header}{}\n", lines.join("\n"))).unwrap()
    }

    fn rules(r: &ValidationReport) -> Vec<&'static str> {
        r.errors().map(|f| f.rule.id()).collect()
    }

    #[test]
    fn karak_passes() {
        let r = validate_poem(&poem_from(HEADER, &LINES));
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.findings.is_empty());
        assert_eq!(r.derived_system().len(), 7);
    }

    #[test]
    fn deleted_line() {
        let r = validate_poem(&poem_from(HEADER, &LINES[1..]));
        assert_eq!(r.verdict, Verdict::Fail);
        let e = rules(&r);
        assert_eq!(e.iter().filter(|&&x| x == "pair-coverage").count(), 3);
        assert!(e.contains(&"line-count"));
        assert_eq!(e.iter().filter(|&&x| x == "replication").count(), 3);
    }

    #[test]
    fn duplicated_line_points_at_the_copy() {
        let mut lines = LINES.to_vec();
        lines.push(LINES[0]);
        let r = validate_poem(&poem_from(HEADER, &lines));
        let over: Vec<_> = r
            .errors()
            .filter(|f| f.rule == Rule::PairCoverage)
            .collect();
        assert_eq!(over.len(), 3);
        assert_eq!(over[0].location, Location::line(0, 7));
        assert!(
            over[0].message.contains("(1.1, 1.8)"),
            "{}",
            over[0].message
        );
    }

    #[test]
    fn keyword_count_messages() {
        let mut lines = LINES.to_vec();
        lines[0] = "Bird seeks.";
        lines[1] = "Seeks trees here, home.";
        let r = validate_poem(&poem_from(HEADER, &lines));
        let msgs: Vec<_> = r
            .errors()
            .filter(|f| f.rule == Rule::LineKeywords)
            .map(|f| (f.location, f.message.as_str()))
            .collect();
        assert_eq!(
            msgs,
            vec![
                (Location::line(0, 0), "line has 2 keywords, needs 3"),
                (Location::line(0, 1), "line has 4 keywords, needs 3")
            ]
        );
    }

    #[test]
    fn repeated_keyword_is_a_warning() {
        let mut lines = LINES.to_vec();
        lines[0] = "Bird, bird seeks home.";
        let r = validate_poem(&poem_from(HEADER, &lines));
        assert!(r.passed());
        assert_eq!(r.findings.len(), 1);
        assert_eq!(r.findings[0].rule, Rule::RepeatedKeyword);
        assert_eq!(r.findings[0].severity, Severity::Warning);
    }

    #[test]
    fn filler_in_pure_located_by_token() {
        let mut lines = LINES.to_vec();
        lines[2] = "Bird finds food here?";
        let r = validate_poem(&poem_from(HEADER, &lines));
        assert_eq!(rules(&r), vec!["filler-in-pure"]);
        assert_eq!(r.findings[0].location, Location::token(0, 2, 1));

        let relaxed = HEADER.replace("pure", "relaxed");
        assert!(validate_poem(&poem_from(&relaxed, &lines)).passed());
    }

    #[test]
    fn chain_rule() {
        let header = "#! keywords: a, b, c\n#! variant: pure\n#! rules: chain_last_to_first\n\n";
        assert!(validate_poem(&poem_from(header, &["a b c"])).passed());
        let r = validate_poem(&poem_from(header, &["a b c", "c b a"]));
        // STS(3) has one line, so the second line is structural noise; chain holds
        assert!(!r.has_error(Rule::Chain));
        let r = validate_poem(&poem_from(header, &["a b c", "a c b"]));
        assert!(r.has_error(Rule::Chain));
    }

    #[test]
    fn json_shape() {
        let r = validate_poem(&poem_from(HEADER, &LINES[..6]));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["verdict"], "fail");
        assert_eq!(v["derived_system"]["order"], 7);
        assert_eq!(v["derived_system"]["points"][0], "Bird");
        assert_eq!(v["derived_system"]["triples"].as_array().unwrap().len(), 6);
        let f = &v["findings"][0];
        assert_eq!(f["rule"], "pair-coverage");
        assert_eq!(f["severity"], "error");
        assert!(f["location"].as_object().unwrap().is_empty());
    }
}
