//! Seeded random graphs and the named instances used throughout the tests.

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::Rational;
use crate::error::{Error, Result};
use crate::graph::{parse_graph, Graph};

const FIGURE3: &str = include_str!("../data/figure3.txt");
const FIGURE4: &str = include_str!("../data/figure4.txt");

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

/// Cycle `0-1-..-(n-1)-0`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
}

/// Wheel on `k` vertices: center 0 joined to the cycle `1..k-1`.
pub fn wheel(k: usize) -> Graph {
    let rim = k - 1;
    let edges = (1..k)
        .map(|i| (0, i))
        .chain((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
    Graph::from_edges(k, edges).expect("valid wheel")
}

/// Paths `0-1-2` and `3-4-5`.
pub fn two_p3() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).expect("valid 2P3")
}

/// 2P3 (`1-2-3`, `4-5-6`) plus the universal vertex 0.
pub fn two_p3_apex() -> Graph {
    let paths = [(1, 2), (2, 3), (4, 5), (5, 6)];
    Graph::from_edges(7, paths.into_iter().chain((1..7).map(|i| (0, i)))).expect("valid graph")
}

/// Outer cycle `0..4`, inner pentagram `5..9`, spokes `i - (i+5)`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes)).expect("valid Petersen graph")
}

/// Twin-free graph with universal root 0 whose neighborhood is a K4 on
/// `1..4` with pendants 5-2, 6-1, 7-3. See `data/README.md`.
pub fn figure3() -> Graph {
    parse_graph(FIGURE3).expect("shipped instance parses")
}

/// Root 0 with one distance-two vertex 5 whose removal creates the twin
/// pairs `{1,2}` and `{0,3}`. See `data/README.md`.
pub fn figure4() -> Graph {
    parse_graph(FIGURE4).expect("shipped instance parses")
}

/// Erdős–Rényi `G(n, p)` with an exact rational `p`. Pairs are visited in
/// lexicographic order and one uniform draw in `0..q` decides each pair, so
/// the output depends only on `(n, p, seed)`.
pub fn gnp(n: usize, p: &Rational, seed: u64) -> Result<Graph> {
    if p.numer().sign() == Sign::Minus || p > &Rational::one() {
        return Err(Error::contract(format!("edge probability {p} outside [0, 1]")));
    }
    let num = p.numer().to_u64();
    let den = p.denom().to_u64();
    let (Some(num), Some(den)) = (num, den) else {
        return Err(Error::contract(format!("edge probability {p} has a too large denominator")));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_range(0..den) < num {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Uniform integer costs in `lo..=hi`.
pub fn random_costs(n: usize, lo: u64, hi: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Parses an edge probability such as `"1/2"` or `"0.25"`.
pub fn parse_probability(s: &str) -> Option<Rational> {
    if let Some(r) = crate::cost::parse_rational(s) {
        return Some(r);
    }
    let (int_part, frac) = s.trim().split_once('.')?;
    let digits = format!("{int_part}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}
