use super::{construct_sts, random_sts, Triple, TripleSystem};
use crate::error::DesignError;

pub const DEFAULT_NODE_LIMIT: u64 = 20_000_000;

/// Node budget for the exact-cover search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub node_limit: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// A partition of a system's triples into parallel classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    system: TripleSystem,
    classes: Vec<Vec<Triple>>,
}

impl Resolution {
    /// Checks every resolution invariant against `system`.
    pub fn new(system: TripleSystem, mut classes: Vec<Vec<Triple>>) -> Result<Self, DesignError> {
        system.ensure_valid()?;
        let u = system.order().get() as usize;
        let invalid = |msg: String| Err(DesignError::InvalidSystem(msg));
        if !u.is_multiple_of(3) {
            return invalid(format!("order {u} has no parallel classes"));
        }
        if classes.len() != (u - 1) / 2 {
            return invalid(format!(
                "{} parallel classes, expected {}",
                classes.len(),
                (u - 1) / 2
            ));
        }
        for (k, class) in classes.iter_mut().enumerate() {
            let mut seen = vec![false; u];
            for t in class.iter() {
                for p in t.points() {
                    if std::mem::replace(&mut seen[p as usize], true) {
                        return invalid(format!("class {} repeats point {p}", k + 1));
                    }
                }
            }
            if class.len() != u / 3 {
                return invalid(format!("class {} has {} triples", k + 1, class.len()));
            }
            class.sort_unstable();
        }
        let mut flat: Vec<Triple> = classes.iter().flatten().copied().collect();
        flat.sort_unstable();
        if flat != system.triples() {
            return invalid("classes do not partition the triples".to_owned());
        }
        Ok(Resolution { system, classes })
    }

    pub fn system(&self) -> &TripleSystem {
        &self.system
    }

    pub fn classes(&self) -> &[Vec<Triple>] {
        &self.classes
    }

    /// Each class as indices into `system().triples()`.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        let triples = self.system.triples();
        self.classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|t| {
                        triples
                            .binary_search(t)
                            .expect("class triple is in the system")
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionOutcome {
    Resolved(Resolution),
    /// The search space was exhausted: no resolution exists.
    NotResolvable {
        nodes: u64,
        reason: String,
    },
}

impl ResolutionOutcome {
    pub fn resolution(self) -> Option<Resolution> {
        match self {
            ResolutionOutcome::Resolved(r) => Some(r),
            ResolutionOutcome::NotResolvable { .. } => None,
        }
    }
}

/// Exact-cover search for a resolution.
///
/// Classes are filled one at a time. Class `k` is seeded with the `k`-th
/// triple through point 0 (every class holds exactly one such triple), then
/// the lowest-index uncovered point is covered by each unused disjoint triple
/// in canonical order. The first resolution found is returned, so the output
/// is deterministic.
pub fn find_resolution(
    system: &TripleSystem,
    budget: SearchBudget,
) -> Result<ResolutionOutcome, DesignError> {
    system.ensure_valid()?;
    let u = system.order().get() as usize;
    if !u.is_multiple_of(3) {
        return Ok(ResolutionOutcome::NotResolvable {
            nodes: 0,
            reason: format!("order {u} is not divisible by 3, so no parallel class exists"),
        });
    }

    let mut search = Search::new(system, budget.node_limit);
    if search.step(0)? {
        let classes = search
            .classes
            .iter()
            .map(|c| c.iter().map(|&t| system.triples()[t]).collect())
            .collect();
        Ok(ResolutionOutcome::Resolved(Resolution::new(
            system.clone(),
            classes,
        )?))
    } else {
        Ok(ResolutionOutcome::NotResolvable {
            nodes: search.nodes,
            reason: format!("search exhausted after {} nodes", search.nodes),
        })
    }
}

struct Search<'a> {
    triples: &'a [Triple],
    u: usize,
    by_point: Vec<Vec<usize>>,
    used: Vec<bool>,
    covered: Vec<Vec<bool>>,
    classes: Vec<Vec<usize>>,
    nodes: u64,
    limit: u64,
}

impl<'a> Search<'a> {
    fn new(system: &'a TripleSystem, limit: u64) -> Self {
        let triples = system.triples();
        let u = system.order().get() as usize;
        let r = (u - 1) / 2;
        let mut by_point = vec![Vec::new(); u];
        for (i, t) in triples.iter().enumerate() {
            for p in t.points() {
                by_point[p as usize].push(i);
            }
        }
        let mut search = Search {
            triples,
            u,
            used: vec![false; triples.len()],
            covered: vec![vec![false; u]; r],
            classes: vec![Vec::new(); r],
            by_point,
            nodes: 0,
            limit,
        };
        for k in 0..r {
            let t = search.by_point[0][k];
            search.place(k, t);
        }
        search
    }

    fn place(&mut self, class: usize, t: usize) {
        self.used[t] = true;
        for p in self.triples[t].points() {
            self.covered[class][p as usize] = true;
        }
        self.classes[class].push(t);
    }

    fn unplace(&mut self, class: usize, t: usize) {
        self.used[t] = false;
        for p in self.triples[t].points() {
            self.covered[class][p as usize] = false;
        }
        self.classes[class].pop();
    }

    fn step(&mut self, class: usize) -> Result<bool, DesignError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(DesignError::BoundExceeded {
                nodes: self.nodes,
                limit: self.limit,
            });
        }
        let Some(p) = (0..self.u).find(|&p| !self.covered[class][p]) else {
            return if class + 1 == self.classes.len() {
                Ok(true)
            } else {
                self.step(class + 1)
            };
        };
        for i in 0..self.by_point[p].len() {
            let t = self.by_point[p][i];
            if self.used[t]
                || self.triples[t]
                    .points()
                    .iter()
                    .any(|&q| self.covered[class][q as usize])
            {
                continue;
            }
            self.place(class, t);
            if self.step(class)? {
                return Ok(true);
            }
            self.unplace(class, t);
        }
        Ok(false)
    }
}

/// Searches for a resolvable STS(u) with restarts.
///
/// Attempt 0 is `construct_sts(u, seed)`; attempt `i > 0` is
/// `random_sts(u, seed + i)`. An attempt whose search exceeds `budget` is
/// abandoned and counted as a failure. Returns the resolution and the index
/// of the successful attempt.
pub fn find_resolvable_sts(
    u: u32,
    seed: u64,
    attempts: u32,
    budget: SearchBudget,
) -> Result<(Resolution, u32), DesignError> {
    super::Order::admissible(u)?;
    if u % 6 != 3 {
        return Err(DesignError::NotResolvableOrder(u));
    }
    for attempt in 0..attempts {
        let system = if attempt == 0 {
            construct_sts(u, seed)?
        } else {
            random_sts(u, seed.wrapping_add(u64::from(attempt)))?
        };
        match find_resolution(&system, budget) {
            Ok(ResolutionOutcome::Resolved(r)) => return Ok((r, attempt)),
            Ok(ResolutionOutcome::NotResolvable { .. })
            | Err(DesignError::BoundExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(DesignError::NoResolvableFound { attempts })
}
