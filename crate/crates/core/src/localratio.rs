//! The local-ratio 2-approximation driver, two independent exact solvers and
//! the hitting-set validator.

use std::ops::AddAssign;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cost::{CostFn, Rational};
use crate::error::{Error, Result};
use crate::goodness::find_2good;
use crate::graph::Graph;

/// Largest instance the exact solvers accept.
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSet {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub cost: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub is_hitting: bool,
    pub is_minimal: bool,
    pub cost: Rational,
}

pub fn validate(g: &Graph, c: &CostFn, x: &[usize]) -> Validation {
    let mut keep = g.all_vertices();
    for &v in x {
        keep.set(v, false);
    }
    let is_hitting = g.is_cluster_on(&keep);
    let is_minimal = is_hitting
        && x.iter().all(|&v| {
            keep.insert(v);
            let still = g.is_cluster_on(&keep);
            keep.set(v, false);
            !still
        });
    Validation {
        is_hitting,
        is_minimal,
        cost: c.total(x),
    }
}

/// Largest `λ` with `c - λ c_H >= 0` on every vertex of `H`, i.e. the least
/// ratio `c(v) / c_H(v)` over vertices with `c_H(v) > 0`.
pub fn lambda_star(c: &[Rational], c_h: &[u64]) -> Result<Rational> {
    if c.len() != c_h.len() {
        return Err(Error::contract("cost vectors differ in length"));
    }
    c.iter()
        .zip(c_h)
        .filter(|(_, &k)| k > 0)
        .map(|(cv, &k)| cv / Rational::from_integer(BigInt::from(k)))
        .min()
        .ok_or_else(|| Error::contract("local cost function is identically zero"))
}

/// Merges the true twin `u2` into `u`: `G - u2` with `c'(u) = c(u) + c(u2)`.
/// The returned map sends new indices to indices of `g`.
pub fn contract_twins(g: &Graph, c: &CostFn, u: usize, u2: usize) -> Result<(Graph, CostFn, Vec<usize>)> {
    if u == u2 || !g.has_edge(u, u2) || g.closed_neighbors(u) != g.closed_neighbors(u2) {
        return Err(Error::contract(format!("{u} and {u2} are not true twins")));
    }
    let sub = g.without(&[u2]);
    let mut costs = c.restrict(&sub.map);
    let at = sub.local(u).expect("u survives");
    costs.values_mut()[at] += c.get(u2);
    Ok((sub.graph, costs, sub.map))
}

enum Action {
    /// A zero-cost vertex was deleted.
    Zero(usize),
    /// `drop` was contracted into its twin `keep`.
    Twin { keep: usize, drop: usize },
}

/// Local-ratio 2-approximation. Returns a minimal hitting set of cost at most
/// twice the optimum.
///
/// The recursion runs as a loop: every round either stops on a cluster graph,
/// deletes the least zero-cost vertex, contracts the least twin pair, or
/// subtracts `λ* c_H` for a 2-good certificate rooted at a maximum-degree
/// vertex. Deletions and contractions are replayed backward afterwards to
/// rebuild the solution.
pub fn cluster_vd_apx(g: &Graph, c: &CostFn) -> Result<HittingSet> {
    cluster_vd_apx_with_stats(g, c).map(|(x, _)| x)
}

/// How often each branch of the driver fired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApxStats {
    pub zero_deletions: usize,
    pub contractions: usize,
    pub reductions: usize,
}

impl ApxStats {
    pub fn rounds(&self) -> usize {
        self.zero_deletions + self.contractions + self.reductions
    }
}

pub fn cluster_vd_apx_with_stats(g: &Graph, c: &CostFn) -> Result<(HittingSet, ApxStats)> {
    if c.len() != g.n() {
        return Err(Error::contract(format!("{} costs for {} vertices", c.len(), g.n())));
    }
    let mut cur = g.clone();
    let mut ids: Vec<usize> = (0..g.n()).collect();
    let mut costs: Vec<Rational> = c.values().to_vec();
    let mut actions = Vec::new();
    let mut stats = ApxStats::default();

    loop {
        if cur.is_cluster() {
            break;
        }
        if let Some(u) = costs.iter().position(Zero::is_zero) {
            actions.push(Action::Zero(ids[u]));
            stats.zero_deletions += 1;
            let sub = cur.without(&[u]);
            costs = sub.map.iter().map(|&i| costs[i].clone()).collect();
            ids = sub.map.iter().map(|&i| ids[i]).collect();
            cur = sub.graph;
            continue;
        }
        if let Some((u, u2)) = cur.twin_classes().first_pair() {
            actions.push(Action::Twin { keep: ids[u], drop: ids[u2] });
            stats.contractions += 1;
            let extra = costs[u2].clone();
            costs[u] += extra;
            let sub = cur.without(&[u2]);
            costs = sub.map.iter().map(|&i| costs[i].clone()).collect();
            ids = sub.map.iter().map(|&i| ids[i]).collect();
            cur = sub.graph;
            continue;
        }
        let v0 = cur.max_degree_vertex().expect("non-cluster graph has vertices");
        stats.reductions += 1;
        let cert = find_2good(&cur, v0)?;
        let local: Vec<Rational> = cert.vertices.iter().map(|&v| costs[v].clone()).collect();
        let lambda = lambda_star(&local, &cert.costs)?;
        let mut zeroed = false;
        for (&v, &k) in cert.vertices.iter().zip(&cert.costs) {
            if k == 0 {
                continue;
            }
            costs[v] -= &lambda * Rational::from_integer(BigInt::from(k));
            if costs[v].is_negative() {
                return Err(Error::invariant("cost reduction went negative"));
            }
            zeroed |= costs[v].is_zero();
        }
        if !zeroed {
            return Err(Error::invariant("cost reduction created no zero"));
        }
    }

    let mut alive = FixedBitSet::with_capacity(g.n());
    alive.extend(ids.iter().copied());
    let mut x = FixedBitSet::with_capacity(g.n());
    let mut kept = FixedBitSet::with_capacity(g.n());
    for action in actions.iter().rev() {
        match *action {
            Action::Zero(u) => {
                alive.insert(u);
                kept.clone_from(&alive);
                kept.difference_with(&x);
                if !g.is_cluster_on(&kept) {
                    x.insert(u);
                }
            }
            Action::Twin { keep, drop } => {
                alive.insert(drop);
                if x.contains(keep) {
                    x.insert(drop);
                }
            }
        }
    }
    let vertices: Vec<usize> = x.ones().collect();
    let cost = c.total(&vertices);
    Ok((HittingSet { vertices, cost }, stats))
}

/// An exact solver for small instances.
pub trait ExactSolver {
    fn solve(&self, g: &Graph, c: &CostFn) -> Result<HittingSet>;

    fn opt(&self, g: &Graph, c: &CostFn) -> Result<Rational> {
        self.solve(g, c).map(|h| h.cost)
    }
}

/// Exhaustive subset enumeration, by size then lexicographically, skipping
/// subsets that cannot beat the incumbent. Among optima the least set in
/// (size, lexicographic) order is returned.
#[derive(Clone, Copy, Debug, Default)]
pub struct SubsetEnumeration;

/// Independent reference: branch three ways on the least P3 (delete the
/// first end; keep it and delete the middle; keep both and delete the other end).
#[derive(Clone, Copy, Debug, Default)]
pub struct P3Branching;

pub fn cluster_vd_exact(g: &Graph, c: &CostFn) -> Result<HittingSet> {
    SubsetEnumeration.solve(g, c)
}

impl ExactSolver for SubsetEnumeration {
    fn solve(&self, g: &Graph, c: &CostFn) -> Result<HittingSet> {
        let (adj, weights) = prepare(g, c)?;
        let best = match weights {
            Weights::Small(w) => enumerate_subsets(&adj, &w),
            Weights::Big(w) => enumerate_subsets(&adj, &w),
        };
        let vertices = mask_to_vec(best);
        let cost = c.total(&vertices);
        Ok(HittingSet { vertices, cost })
    }
}

impl ExactSolver for P3Branching {
    fn solve(&self, g: &Graph, c: &CostFn) -> Result<HittingSet> {
        let (adj, weights) = prepare(g, c)?;
        let full = low_mask(g.n());
        let best = match weights {
            Weights::Small(w) => branch(&adj, &w, full, 0, 0, u128::zero(), None).expect("deleting all works").1,
            Weights::Big(w) => branch(&adj, &w, full, 0, 0, BigInt::zero(), None).expect("deleting all works").1,
        };
        let vertices = mask_to_vec(best);
        let cost = c.total(&vertices);
        Ok(HittingSet { vertices, cost })
    }
}

/// Costs scaled by the lcm of their denominators; integer comparisons are
/// then order-equivalent to the rational ones.
enum Weights {
    Small(Vec<u128>),
    Big(Vec<BigInt>),
}

fn prepare(g: &Graph, c: &CostFn) -> Result<(Vec<u32>, Weights)> {
    if g.n() > EXACT_LIMIT {
        return Err(Error::TooLarge { n: g.n(), max: EXACT_LIMIT });
    }
    if c.len() != g.n() {
        return Err(Error::contract(format!("{} costs for {} vertices", c.len(), g.n())));
    }
    let adj: Vec<u32> = (0..g.n())
        .map(|v| g.neighbors(v).ones().fold(0u32, |m, u| m | 1 << u))
        .collect();
    let lcm = c.values().iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let scaled: Vec<BigInt> = c.values().iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let small: Option<Vec<u128>> = scaled.iter().map(|x| x.to_u64().map(u128::from)).collect();
    Ok((adj, small.map_or(Weights::Big(scaled), Weights::Small)))
}

fn low_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn mask_to_vec(mut m: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Cluster test on the vertices of `keep`: peel one closed neighborhood at a
/// time and require every member to see exactly that set.
pub(crate) fn is_cluster_mask(adj: &[u32], keep: u32) -> bool {
    let mut rest = keep;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        let nv = (adj[v] & keep) | 1 << v;
        let mut members = nv;
        while members != 0 {
            let u = members.trailing_zeros() as usize;
            members &= members - 1;
            if (adj[u] & keep) | 1 << u != nv {
                return false;
            }
        }
        rest &= !nv;
    }
    true
}

fn lex_less(a: u32, b: u32) -> bool {
    // Equal popcounts: the set whose least differing element is smaller wins.
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

fn enumerate_subsets<W>(adj: &[u32], w: &[W]) -> u32
where
    W: Clone + Ord + Zero + for<'a> AddAssign<&'a W>,
{
    let n = adj.len();
    let full = low_mask(n);
    let mut best: Option<(W, u32)> = None;
    for k in 0..=n as u32 {
        if k == 0 {
            if is_cluster_mask(adj, full) {
                return 0;
            }
            continue;
        }
        // Gosper's hack: all masks with popcount k in increasing order.
        let mut s: u32 = (1u32 << k) - 1;
        loop {
            let mut cost = W::zero();
            let mut m = s;
            while m != 0 {
                cost += &w[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            let better = match &best {
                None => true,
                Some((bc, bs)) => cost < *bc || (cost == *bc && bs.count_ones() == k && lex_less(s, *bs)),
            };
            if better && is_cluster_mask(adj, full & !s) {
                best = Some((cost, s));
            }
            let c = s & s.wrapping_neg();
            let r = s.wrapping_add(c);
            if r == 0 || r > full || k as usize == n {
                break;
            }
            s = (((r ^ s) >> 2) / c) | r;
            if s > full {
                break;
            }
        }
    }
    best.map(|(_, s)| s).unwrap_or(full)
}

fn branch<W>(adj: &[u32], w: &[W], alive: u32, fixed: u32, taken: u32, cost: W, bound: Option<&W>) -> Option<(W, u32)>
where
    W: Clone + Ord + Zero + for<'a> AddAssign<&'a W>,
{
    if let Some(b) = bound {
        if &cost >= b {
            return None;
        }
    }
    // Least P3 in the alive graph, by (end, mid, end).
    let mut p3 = None;
    'outer: for a in 0..adj.len() {
        if alive >> a & 1 == 0 {
            continue;
        }
        let mut mids = adj[a] & alive;
        while mids != 0 {
            let mid = mids.trailing_zeros() as usize;
            mids &= mids - 1;
            let ends = adj[mid] & alive & !adj[a] & !(1 << a);
            if ends != 0 {
                p3 = Some([a, mid, ends.trailing_zeros() as usize]);
                break 'outer;
            }
        }
    }
    let Some(p3) = p3 else {
        return Some((cost, taken));
    };
    let mut best: Option<(W, u32)> = None;
    let mut fixed_now = fixed;
    for &x in &p3 {
        if fixed_now >> x & 1 == 0 {
            let mut c2 = cost.clone();
            c2 += &w[x];
            let cap = match (&best, bound) {
                (Some((b, _)), _) => Some(b.clone()),
                (None, Some(b)) => Some(b.clone()),
                (None, None) => None,
            };
            if let Some(found) = branch(adj, w, alive & !(1 << x), fixed_now, taken | 1 << x, c2, cap.as_ref()) {
                best = Some(found);
            }
        }
        fixed_now |= 1 << x;
    }
    best
}
