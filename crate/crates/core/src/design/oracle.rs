use super::{Order, Point, Triple, TripleSystem};
use crate::error::DesignError;

/// Largest order [`brute_force_sts`] accepts.
pub const ORACLE_MAX_ORDER: u32 = 15;

/// The lexicographically least STS(u), found by backtracking.
///
/// Each step takes the smallest uncovered pair `{a, b}` and tries third
/// points in ascending order. Shares no code with the direct constructions,
/// so it serves as an independent oracle for them.
pub fn brute_force_sts(u: u32) -> Result<TripleSystem, DesignError> {
    let order = Order::admissible(u)?;
    if u > ORACLE_MAX_ORDER {
        return Err(DesignError::OracleTooLarge {
            order: u,
            max: ORACLE_MAX_ORDER,
        });
    }
    let n = u as usize;
    let mut covered = vec![false; n * n];
    let mut chosen = Vec::with_capacity(n * (n - 1) / 6);
    if !extend(n, &mut covered, &mut chosen) {
        // admissible orders always have a solution
        unreachable!("no STS({u}) found");
    }
    let triples = chosen
        .into_iter()
        .map(|[a, b, c]| Triple::new(a, b, c))
        .collect::<Result<Vec<_>, _>>()?;
    TripleSystem::new(order, triples)
}

fn extend(n: usize, covered: &mut [bool], chosen: &mut Vec<[Point; 3]>) -> bool {
    let Some((a, b)) = first_uncovered(n, covered) else {
        return true;
    };
    for c in 0..n {
        if c == a || c == b || covered[a * n + c] || covered[b * n + c] {
            continue;
        }
        set(n, covered, [a, b, c], true);
        chosen.push([a as Point, b as Point, c as Point]);
        if extend(n, covered, chosen) {
            return true;
        }
        chosen.pop();
        set(n, covered, [a, b, c], false);
    }
    false
}

fn first_uncovered(n: usize, covered: &[bool]) -> Option<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| !covered[a * n + b])
}

fn set(n: usize, covered: &mut [bool], [a, b, c]: [usize; 3], value: bool) {
    for (x, y) in [(a, b), (a, c), (b, c)] {
        covered[x * n + y] = value;
        covered[y * n + x] = value;
    }
}
