//! Steiner triple systems: construction, verification and resolution.
//!
//! Points are 0-based indices. A [`TripleSystem`] holds its triples as a
//! canonically sorted sequence; duplicates are kept so that verification can
//! see them.

mod construct;
mod oracle;
mod resolve;

pub use construct::{construct_sts, random_sts, relabel};
pub use oracle::{brute_force_sts, ORACLE_MAX_ORDER};
pub use resolve::{
    find_resolution, find_resolvable_sts, Resolution, ResolutionOutcome, SearchBudget,
    DEFAULT_NODE_LIMIT,
};

use std::fmt;

use serde::Serialize;

use crate::error::DesignError;

pub type Point = u32;

/// True iff a Steiner triple system of order `u` exists.
pub fn admissible_order(u: u32) -> bool {
    matches!(u % 6, 1 | 3)
}

/// Number of triples and the replication number of an STS(u).
pub fn counts_for(order: Order) -> Result<(u32, u32), DesignError> {
    let u = order.get();
    if !admissible_order(u) {
        return Err(DesignError::Inadmissible(u));
    }
    Ok((u * (u - 1) / 6, (u - 1) / 2))
}

/// Number of points of a triple system. Always at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Order(u32);

impl Order {
    pub fn new(u: u32) -> Result<Self, DesignError> {
        if u < 3 {
            return Err(DesignError::OrderTooSmall(u));
        }
        Ok(Order(u))
    }

    /// Like [`Order::new`] but also rejects orders with no STS.
    pub fn admissible(u: u32) -> Result<Self, DesignError> {
        let order = Order::new(u)?;
        if !order.is_admissible() {
            return Err(DesignError::Inadmissible(u));
        }
        Ok(order)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_admissible(self) -> bool {
        admissible_order(self.0)
    }

    pub fn pair_count(self) -> usize {
        let u = self.0 as usize;
        u * (u - 1) / 2
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Three distinct points in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Triple([Point; 3]);

impl Triple {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self, DesignError> {
        let mut points = [a, b, c];
        points.sort_unstable();
        if points[0] == points[1] || points[1] == points[2] {
            return Err(DesignError::RepeatedPoint(points[1]));
        }
        Ok(Triple(points))
    }

    pub fn points(&self) -> [Point; 3] {
        self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    /// The three unordered pairs, each as `(low, high)`.
    pub fn pairs(&self) -> [(Point, Point); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn intersection_size(&self, other: &Triple) -> usize {
        self.0.iter().filter(|p| other.contains(**p)).count()
    }

    pub(crate) fn map(&self, f: impl Fn(Point) -> Point) -> Triple {
        let [a, b, c] = self.0;
        Triple::new(f(a), f(b), f(c)).expect("point map must be injective")
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{{{a},{b},{c}}}")
    }
}

/// An order and a collection of triples on `0..order`.
///
/// Nothing here guarantees the STS property; use [`verify_sts`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleSystem {
    order: Order,
    triples: Vec<Triple>,
}

impl TripleSystem {
    pub fn new(order: Order, mut triples: Vec<Triple>) -> Result<Self, DesignError> {
        for t in &triples {
            if let Some(&p) = t.points().iter().find(|&&p| p >= order.get()) {
                return Err(DesignError::PointOutOfRange {
                    point: p,
                    order: order.get(),
                });
            }
        }
        triples.sort_unstable();
        Ok(TripleSystem { order, triples })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn pair_coverage(&self) -> PairCoverage {
        PairCoverage::of(self)
    }

    /// Number of triples through each point.
    pub fn replication(&self) -> Vec<u32> {
        let mut counts = vec![0; self.order.get() as usize];
        for t in &self.triples {
            for p in t.points() {
                counts[p as usize] += 1;
            }
        }
        counts
    }

    /// Fails with the verifier's summary unless this is a valid STS.
    pub fn ensure_valid(&self) -> Result<(), DesignError> {
        let report = verify_sts(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(DesignError::InvalidSystem(report.summary()))
        }
    }
}

/// How many triples contain each unordered pair of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCoverage {
    order: u32,
    counts: Vec<u32>,
}

impl PairCoverage {
    pub fn of(system: &TripleSystem) -> Self {
        let order = system.order().get();
        let mut coverage = PairCoverage {
            order,
            counts: vec![0; system.order().pair_count()],
        };
        for t in system.triples() {
            for (a, b) in t.pairs() {
                let i = coverage.index(a, b);
                coverage.counts[i] += 1;
            }
        }
        coverage
    }

    fn index(&self, a: Point, b: Point) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let (a, b, u) = (a as usize, b as usize, self.order as usize);
        // row-major upper triangle
        a * (2 * u - a - 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, a: Point, b: Point) -> u32 {
        assert!(a != b, "pair coverage is defined for distinct points");
        self.counts[self.index(a, b)]
    }

    /// Every pair with its count, in lexicographic pair order.
    pub fn iter(&self) -> impl Iterator<Item = ((Point, Point), u32)> + '_ {
        let u = self.order;
        (0..u)
            .flat_map(move |a| (a + 1..u).map(move |b| (a, b)))
            .zip(self.counts.iter().copied())
    }

    pub fn all_ones(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StsViolation {
    InadmissibleOrder {
        order: u32,
    },
    UncoveredPair {
        pair: (Point, Point),
    },
    OvercoveredPair {
        pair: (Point, Point),
        count: u32,
    },
    BlockCount {
        expected: u32,
        actual: u32,
    },
    Replication {
        point: Point,
        expected: u32,
        actual: u32,
    },
}

impl fmt::Display for StsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StsViolation::InadmissibleOrder { order } => {
                write!(f, "order {order} is not 1 or 3 mod 6")
            }
            StsViolation::UncoveredPair { pair: (a, b) } => {
                write!(f, "pair {{{a},{b}}} is not covered")
            }
            StsViolation::OvercoveredPair {
                pair: (a, b),
                count,
            } => {
                write!(f, "pair {{{a},{b}}} is covered {count} times")
            }
            StsViolation::BlockCount { expected, actual } => {
                write!(f, "{actual} triples, expected {expected}")
            }
            StsViolation::Replication {
                point,
                expected,
                actual,
            } => write!(
                f,
                "point {point} lies in {actual} triples, expected {expected}"
            ),
        }
    }
}

/// Result of [`verify_sts`]. Empty violation list iff the system is an STS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StsReport {
    pub order: u32,
    pub violations: Vec<StsViolation>,
}

impl StsReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn uncovered_pairs(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.violations.iter().filter_map(|v| match v {
            StsViolation::UncoveredPair { pair } => Some(*pair),
            _ => None,
        })
    }

    pub fn overcovered_pairs(&self) -> impl Iterator<Item = ((Point, Point), u32)> + '_ {
        self.violations.iter().filter_map(|v| match v {
            StsViolation::OvercoveredPair { pair, count } => Some((*pair, *count)),
            _ => None,
        })
    }

    pub fn block_count_mismatch(&self) -> Option<(u32, u32)> {
        self.violations.iter().find_map(|v| match v {
            StsViolation::BlockCount { expected, actual } => Some((*expected, *actual)),
            _ => None,
        })
    }

    pub fn replication_violations(&self) -> impl Iterator<Item = (Point, u32, u32)> + '_ {
        self.violations.iter().filter_map(|v| match v {
            StsViolation::Replication {
                point,
                expected,
                actual,
            } => Some((*point, *expected, *actual)),
            _ => None,
        })
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            return "valid".to_owned();
        }
        let uncovered = self.uncovered_pairs().count();
        let over = self.overcovered_pairs().count();
        let mut parts = Vec::new();
        if self
            .violations
            .iter()
            .any(|v| matches!(v, StsViolation::InadmissibleOrder { .. }))
        {
            parts.push(format!("order {} inadmissible", self.order));
        }
        if uncovered > 0 {
            parts.push(format!("{uncovered} uncovered pairs"));
        }
        if over > 0 {
            parts.push(format!("{over} pairs covered more than once"));
        }
        if let Some((expected, actual)) = self.block_count_mismatch() {
            parts.push(format!("block count {actual} ≠ {expected}"));
        }
        let repl = self.replication_violations().count();
        if repl > 0 {
            parts.push(format!("{repl} points with wrong replication"));
        }
        parts.join("; ")
    }
}

/// Checks the pair condition, the block count and the replication number
/// independently; each failure is listed.
pub fn verify_sts(system: &TripleSystem) -> StsReport {
    let u = system.order().get();
    let mut violations = Vec::new();
    if !admissible_order(u) {
        violations.push(StsViolation::InadmissibleOrder { order: u });
    }

    for (pair, count) in system.pair_coverage().iter() {
        match count {
            0 => violations.push(StsViolation::UncoveredPair { pair }),
            1 => {}
            count => violations.push(StsViolation::OvercoveredPair { pair, count }),
        }
    }

    if admissible_order(u) {
        let expected_blocks = u * (u - 1) / 6;
        let actual = system.len() as u32;
        if actual != expected_blocks {
            violations.push(StsViolation::BlockCount {
                expected: expected_blocks,
                actual,
            });
        }
        let expected_r = (u - 1) / 2;
        for (point, &actual) in system.replication().iter().enumerate() {
            if actual != expected_r {
                violations.push(StsViolation::Replication {
                    point: point as Point,
                    expected: expected_r,
                    actual,
                });
            }
        }
    }

    StsReport {
        order: u,
        violations,
    }
}

/// True iff every two distinct triples meet in exactly one point.
pub fn is_fano(system: &TripleSystem) -> Result<bool, DesignError> {
    system.ensure_valid()?;
    let triples = system.triples();
    Ok(triples
        .iter()
        .enumerate()
        .all(|(i, a)| triples[i + 1..].iter().all(|b| a.intersection_size(b) == 1)))
}
