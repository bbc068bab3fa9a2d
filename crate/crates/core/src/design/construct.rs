use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Order, Point, Triple, TripleSystem};
use crate::error::DesignError;

/// Builds an STS(u) directly and relabels its points with a permutation
/// drawn from `seed`.
///
/// u ≡ 3 (mod 6) uses the Bose construction over the idempotent commutative
/// quasigroup (Z_{2n+1}, (x + y)/2); u ≡ 1 (mod 6) uses the Skolem
/// construction over the half-idempotent commutative quasigroup of order 2n.
/// The result is checked with [`verify_sts`] before it is returned.
pub fn construct_sts(u: u32, seed: u64) -> Result<TripleSystem, DesignError> {
    let order = Order::admissible(u)?;
    let triples = if u % 6 == 3 { bose(u) } else { skolem(u) };
    let system = TripleSystem::new(order, triples)?;
    let relabeled = relabel(&system, &seeded_permutation(u, seed));
    relabeled.ensure_valid()?;
    Ok(relabeled)
}

/// Applies `perm` (point `p` becomes `perm[p]`) to every triple.
pub fn relabel(system: &TripleSystem, perm: &[Point]) -> TripleSystem {
    assert_eq!(perm.len(), system.order().get() as usize);
    let triples = system
        .triples()
        .iter()
        .map(|t| t.map(|p| perm[p as usize]))
        .collect();
    TripleSystem::new(system.order(), triples).expect("permutation keeps points in range")
}

pub(crate) fn seeded_permutation(u: u32, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<Point> = (0..u).collect();
    perm.shuffle(&mut rng);
    perm
}

fn bose(u: u32) -> Vec<Triple> {
    let n = (u - 3) / 6;
    let m = 2 * n + 1;
    // (x + y) * (n + 1) is (x + y) / 2 in Z_m
    let op = |x: u32, y: u32| ((x + y) * (n + 1)) % m;
    let point = |x: u32, level: u32| x + m * level;

    let mut triples = Vec::with_capacity((u * (u - 1) / 6) as usize);
    for x in 0..m {
        triples.push(tri(point(x, 0), point(x, 1), point(x, 2)));
    }
    for x in 0..m {
        for y in x + 1..m {
            for level in 0..3 {
                triples.push(tri(
                    point(x, level),
                    point(y, level),
                    point(op(x, y), (level + 1) % 3),
                ));
            }
        }
    }
    triples
}

fn skolem(u: u32) -> Vec<Triple> {
    let n = (u - 1) / 6;
    let m = 2 * n;
    // half-idempotent: x∘x = (n+x)∘(n+x) = x for x < n
    let op = |x: u32, y: u32| {
        let s = (x + y) % m;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            n + s / 2
        }
    };
    let infinity = u - 1;
    let point = |x: u32, level: u32| x + m * level;

    let mut triples = Vec::with_capacity((u * (u - 1) / 6) as usize);
    for x in 0..n {
        triples.push(tri(point(x, 0), point(x, 1), point(x, 2)));
        for level in 0..3 {
            triples.push(tri(
                infinity,
                point(n + x, level),
                point(x, (level + 1) % 3),
            ));
        }
    }
    for x in 0..m {
        for y in x + 1..m {
            for level in 0..3 {
                triples.push(tri(
                    point(x, level),
                    point(y, level),
                    point(op(x, y), (level + 1) % 3),
                ));
            }
        }
    }
    triples
}

fn tri(a: Point, b: Point, c: Point) -> Triple {
    Triple::new(a, b, c).expect("construction yields distinct points")
}

/// A random STS(u) by Stinson's hill-climbing algorithm.
///
/// Unlike [`construct_sts`], different seeds reach non-isomorphic systems, so
/// this is the restart source when a particular structure (e.g. a resolution)
/// is needed.
pub fn random_sts(u: u32, seed: u64) -> Result<TripleSystem, DesignError> {
    let order = Order::admissible(u)?;
    let n = u as usize;
    let target = n * (n - 1) / 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    const NONE: u32 = u32::MAX;
    // third[x * n + y] = z when {x, y, z} is a block
    let mut third = vec![NONE; n * n];
    // live[x] = points y with {x, y} not yet in a block
    let mut live: Vec<Vec<u32>> = (0..n)
        .map(|x| (0..u).filter(|&y| y as usize != x).collect())
        .collect();
    let mut live_points: Vec<u32> = (0..u).collect();
    let mut blocks = 0usize;

    fn remove(list: &mut Vec<u32>, v: u32) {
        let i = list
            .iter()
            .position(|&w| w == v)
            .expect("live pair present");
        list.swap_remove(i);
    }

    let link = |third: &mut Vec<u32>, a: u32, b: u32, c: u32| {
        for (p, q, r) in [(a, b, c), (b, c, a), (a, c, b)] {
            third[p as usize * n + q as usize] = r;
            third[q as usize * n + p as usize] = r;
        }
    };
    let unlink_pair = |third: &mut Vec<u32>, a: u32, b: u32| {
        third[a as usize * n + b as usize] = NONE;
        third[b as usize * n + a as usize] = NONE;
    };

    while blocks < target {
        let x = live_points[rng.gen_range(0..live_points.len())];
        let candidates = &live[x as usize];
        let i = rng.gen_range(0..candidates.len());
        let mut j = rng.gen_range(0..candidates.len() - 1);
        if j >= i {
            j += 1;
        }
        let (y, z) = (candidates[i], candidates[j]);

        let kill = |live: &mut Vec<Vec<u32>>, a: u32, b: u32| {
            remove(&mut live[a as usize], b);
            remove(&mut live[b as usize], a);
        };
        let revive = |live: &mut Vec<Vec<u32>>, a: u32, b: u32| {
            live[a as usize].push(b);
            live[b as usize].push(a);
        };

        let w = third[y as usize * n + z as usize];
        if w == NONE {
            link(&mut third, x, y, z);
            kill(&mut live, x, y);
            kill(&mut live, x, z);
            kill(&mut live, y, z);
            blocks += 1;
        } else {
            // swap out block {y, z, w} for {x, y, z}
            unlink_pair(&mut third, y, w);
            unlink_pair(&mut third, z, w);
            revive(&mut live, y, w);
            revive(&mut live, z, w);
            link(&mut third, x, y, z);
            kill(&mut live, x, y);
            kill(&mut live, x, z);
        }
        live_points.retain(|&p| !live[p as usize].is_empty());
        for p in [y, z, w] {
            if p != NONE && !live[p as usize].is_empty() && !live_points.contains(&p) {
                live_points.push(p);
            }
        }
        // keep the draw order independent of push order
        live_points.sort_unstable();
    }

    let mut triples = Vec::with_capacity(target);
    for a in 0..u {
        for b in a + 1..u {
            let c = third[a as usize * n + b as usize];
            if c > b {
                triples.push(tri(a, b, c));
            }
        }
    }
    let system = TripleSystem::new(order, triples)?;
    system.ensure_valid()?;
    Ok(system)
}
