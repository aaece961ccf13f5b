//! Exhaustive and batch drivers over many small instances.
//!
//! Every driver takes a [`Mode`]. With the `parallel` feature (on by default)
//! [`Mode::Parallel`] spreads the work over the rayon pool; without it both
//! modes run the same sequential loop.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cost::{CostFn, Rational};
use crate::error::Result;
use crate::generate;
use crate::goodness::{find_2good, verify_certificate};
use crate::graph::Graph;
use crate::localratio::{cluster_vd_apx, cluster_vd_exact, validate, ExactSolver, HittingSet, P3Branching, SubsetEnumeration};
use crate::sa::{integrality_gap, Gap};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

/// How many instances a sweep looked at and what went wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `f` on every index; `None` means skipped, `Some(Ok(()))` passed.
fn run<F>(range: Range<u64>, mode: Mode, f: F) -> SweepReport
where
    F: Fn(u64) -> Option<std::result::Result<(), String>> + Sync + Send,
{
    let outcomes: Vec<Option<std::result::Result<(), String>>> = match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(&f).collect()
        }
        _ => range.map(&f).collect(),
    };
    let mut report = SweepReport::default();
    for outcome in outcomes.into_iter().flatten() {
        report.checked += 1;
        if let Err(e) = outcome {
            report.failures.push(e);
        }
    }
    report
}

fn map<T, U, F>(items: &[T], mode: Mode, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn pair_count(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// Number of labeled graphs on `n` vertices.
pub fn labeled_count(n: usize) -> u64 {
    1u64 << pair_count(n)
}

/// Checks one approximation run: a minimal hitting set within twice the optimum.
pub fn check_apx(g: &Graph, c: &CostFn) -> std::result::Result<(), String> {
    let apx = cluster_vd_apx(g, c).map_err(|e| format!("{g:?}: {e}"))?;
    let v = validate(g, c, &apx.vertices);
    if !v.is_hitting || !v.is_minimal {
        return Err(format!("{g:?} {c:?}: {:?} is not a minimal hitting set", apx.vertices));
    }
    let opt = cluster_vd_exact(g, c).map_err(|e| e.to_string())?.cost;
    if apx.cost > &opt * Rational::from_integer(BigInt::from(2)) {
        return Err(format!("{g:?} {c:?}: cost {} against optimum {opt}", apx.cost));
    }
    Ok(())
}

/// Every labeled graph on `n` vertices with unit costs.
pub fn apx_all_graphs(n: usize, mode: Mode) -> SweepReport {
    run(0..labeled_count(n), mode, |mask| {
        let g = Graph::from_edge_mask(n, mask);
        Some(check_apx(&g, &CostFn::unit(n)))
    })
}

/// `count` seeded random instances: `n` uniform in `sizes`, edge probability
/// 1/2, integer costs uniform in `costs`.
pub fn apx_random(count: u64, sizes: Range<usize>, costs: (u64, u64), seed: u64, mode: Mode) -> SweepReport {
    run(0..count, mode, |i| {
        let (g, c) = random_instance(sizes.clone(), costs, seed.wrapping_add(i));
        Some(check_apx(&g, &c))
    })
}

pub fn random_instance(sizes: Range<usize>, costs: (u64, u64), seed: u64) -> (Graph, CostFn) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(sizes);
    let g = generate::gnp(n, &Rational::new(1.into(), 2.into()), rng.gen()).expect("valid probability");
    let c = CostFn::from_ints(&generate::random_costs(n, costs.0, costs.1, rng.gen()));
    (g, c)
}

/// Every connected twin-free labeled graph on `n` vertices, every root:
/// the certificate found must verify.
pub fn certificates_all_graphs(n: usize, mode: Mode) -> SweepReport {
    run(0..labeled_count(n), mode, |mask| {
        let g = Graph::from_edge_mask(n, mask);
        if g.components().len() != 1 || !g.twin_classes().is_twin_free() {
            return None;
        }
        Some(check_certificates(&g))
    })
}

pub fn check_certificates(g: &Graph) -> std::result::Result<(), String> {
    for v0 in 0..g.n() {
        let cert = find_2good(g, v0).map_err(|e| format!("{g:?} root {v0}: {e}"))?;
        match verify_certificate(g, &cert, &SubsetEnumeration) {
            Ok(true) => {}
            Ok(false) => return Err(format!("{g:?} root {v0}: certificate {cert:?} fails")),
            Err(e) => return Err(format!("{g:?} root {v0}: {e}")),
        }
    }
    Ok(())
}

/// Subset enumeration against P3 branching on every labeled graph, unit costs.
pub fn oracles_all_graphs(n: usize, mode: Mode) -> SweepReport {
    run(0..labeled_count(n), mode, |mask| {
        let g = Graph::from_edge_mask(n, mask);
        let c = CostFn::unit(n);
        let a = SubsetEnumeration.opt(&g, &c);
        let b = P3Branching.opt(&g, &c);
        Some(match (a, b) {
            (Ok(a), Ok(b)) if a == b => Ok(()),
            (a, b) => Err(format!("{g:?}: {a:?} against {b:?}")),
        })
    })
}

/// The edge mask of `g` relabeled by `perm`.
fn permuted_mask(edges: &[(usize, usize)], perm: &[usize]) -> u64 {
    let n = perm.len();
    edges.iter().fold(0u64, |m, &(u, v)| {
        let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
        // Pair (a, b) sits at position a*n - a(a+1)/2 + (b - a - 1).
        m | 1 << (a * n - a * (a + 1) / 2 + (b - a - 1))
    })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Vertex colors from iterated degree refinement. Colors are numbered by
/// sorting signatures, so isomorphic graphs get matching colorings.
fn refined_colors(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = 0;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = g.neighbors(v).ones().map(|u| colors[u]).collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colors = sigs.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

/// The least edge mask over all relabelings that list the refined color
/// classes in order. Isomorphic graphs get equal masks.
pub fn canonical_mask(g: &Graph) -> u64 {
    let n = g.n();
    let colors = refined_colors(g);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if colors[v] >= cells.len() {
            cells.resize(colors[v] + 1, Vec::new());
        }
        cells[colors[v]].push(v);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    // Cell i occupies the positions from starts[i] on, in every order of its members.
    let mut perm = vec![0; n];
    let mut orders: Vec<Vec<usize>> = cells.clone();
    let starts: Vec<usize> = cells
        .iter()
        .scan(0, |acc, c| {
            let s = *acc;
            *acc += c.len();
            Some(s)
        })
        .collect();
    let mut best = u64::MAX;
    loop {
        for (cell, &start) in orders.iter().zip(&starts) {
            for (k, &v) in cell.iter().enumerate() {
                perm[v] = start + k;
            }
        }
        best = best.min(permuted_mask(&edges, &perm));
        // Advance the cells like an odometer.
        let mut i = 0;
        loop {
            if i == orders.len() {
                return best;
            }
            if next_permutation(&mut orders[i]) {
                break;
            }
            orders[i].sort_unstable();
            i += 1;
        }
    }
}

/// One representative per isomorphism class of graphs on `n <= 11` vertices,
/// grown vertex by vertex from the classes on `n - 1` vertices.
pub fn nonisomorphic(n: usize, mode: Mode) -> Vec<Graph> {
    assert!(n <= 11, "edge masks hold at most 64 pairs");
    let mut classes = vec![0u64];
    for k in 1..=n {
        let candidates: Vec<(u64, u64)> = classes
            .iter()
            .flat_map(|&mask| (0..1u64 << (k - 1)).map(move |nbrs| (mask, nbrs)))
            .collect();
        let mut next = map(&candidates, mode, |&(mask, nbrs)| {
            let prev = Graph::from_edge_mask(k - 1, mask);
            let mut edges: Vec<(usize, usize)> = prev.edges().collect();
            edges.extend((0..k - 1).filter(|&u| nbrs >> u & 1 == 1).map(|u| (u, k - 1)));
            canonical_mask(&Graph::from_edges(k, edges).expect("valid graph"))
        });
        next.sort_unstable();
        next.dedup();
        classes = next;
    }
    classes.into_iter().map(|m| Graph::from_edge_mask(n, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSweep {
    pub classes: usize,
    pub max_gap: Rational,
    pub witness: Option<Graph>,
    pub failures: Vec<String>,
}

/// Unit-cost integrality gap of `SA_r` over all graphs on `n` vertices, one
/// per isomorphism class.
pub fn gap_all_graphs(n: usize, r: u8, mode: Mode) -> GapSweep {
    let graphs = nonisomorphic(n, mode);
    let gaps = map(&graphs, mode, |g| integrality_gap(g, &CostFn::unit(g.n()), r));
    let mut sweep = GapSweep {
        classes: graphs.len(),
        max_gap: Rational::zero(),
        witness: None,
        failures: Vec::new(),
    };
    for (g, report) in graphs.iter().zip(gaps) {
        match report {
            Ok(report) => match report.gap {
                Gap::Finite(q) => {
                    if q > sweep.max_gap {
                        sweep.max_gap = q;
                        sweep.witness = Some(g.clone());
                    }
                }
                Gap::Infinite => sweep.failures.push(format!("{g:?}: infinite gap")),
            },
            Err(e) => sweep.failures.push(format!("{g:?}: {e}")),
        }
    }
    sweep
}

/// Solves every instance with the approximation.
pub fn solve_batch(instances: &[(Graph, CostFn)], mode: Mode) -> Vec<Result<HittingSet>> {
    map(instances, mode, |(g, c)| cluster_vd_apx(g, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_known_values() {
        let counts: Vec<usize> = (0..=6).map(|n| nonisomorphic(n, Mode::Sequential).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn canonical_mask_is_invariant() {
        let p = generate::path(4);
        let relabeled = Graph::from_edges(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_mask(&p), canonical_mask(&relabeled));
        assert_ne!(canonical_mask(&p), canonical_mask(&generate::star(3)));
    }

    #[test]
    fn modes_agree() {
        let a = apx_all_graphs(4, Mode::Sequential);
        let b = apx_all_graphs(4, Mode::Parallel);
        assert_eq!(a, b);
        assert_eq!(a.checked, 64);
        assert!(a.passed());
    }

    #[test]
    fn small_sweeps_pass() {
        let certs = certificates_all_graphs(5, Mode::Parallel);
        assert!(certs.passed(), "{:?}", &certs.failures[..certs.failures.len().min(5)]);
        assert!(oracles_all_graphs(5, Mode::Parallel).passed());
        let gap = gap_all_graphs(4, 1, Mode::Parallel);
        assert!(gap.failures.is_empty());
        assert!(gap.max_gap <= Rational::new(5.into(), 2.into()));
    }
}
