//! Local cost functions certifying that an induced subgraph is strongly or
//! centrally 2-good, and the search that always finds one around a root.

use fixedbitset::FixedBitSet;

use crate::chordal::{clique_tree, find_2p3_chordal, hitting_clique, peo_or_hole, Chordality, Hole, TwoP3};
use crate::cost::{int, CostFn};
use crate::error::{Error, Result};
use crate::graph::{Graph, Induced};
use crate::localratio::{ExactSolver, EXACT_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Total cost at most twice the local optimum.
    Strong,
    /// Total cost at most twice the local optimum plus one, with the root's
    /// whole neighborhood inside and positive costs on its closed neighborhood.
    Central { root: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodCertificate {
    /// Sorted host indices of `V(H)`.
    pub vertices: Vec<usize>,
    /// `costs[i]` belongs to `vertices[i]`.
    pub costs: Vec<u64>,
    pub kind: Kind,
}

impl GoodCertificate {
    fn from_pairs(mut pairs: Vec<(usize, u64)>, kind: Kind) -> Self {
        pairs.sort_unstable();
        let (vertices, costs) = pairs.into_iter().unzip();
        GoodCertificate { vertices, costs, kind }
    }

    pub fn total(&self) -> u64 {
        self.costs.iter().sum()
    }

    pub fn cost_of(&self, v: usize) -> Option<u64> {
        self.vertices.binary_search(&v).ok().map(|i| self.costs[i])
    }
}

fn require_inside(host: &Graph, vs: &[usize], v0: usize, what: &str) -> Result<()> {
    if v0 >= host.n() {
        return Err(Error::contract(format!("root {v0} out of range")));
    }
    if let Some(&v) = vs.iter().find(|&&v| v >= host.n() || !host.has_edge(v0, v)) {
        return Err(Error::contract(format!("{what} vertex {v} is not a neighbor of {v0}")));
    }
    Ok(())
}

/// The wheel formed by `v0` and a hole of its neighborhood: rim vertices
/// cost 1, the center `k - 5`, where `k = |hole| + 1`.
pub fn wheel_certificate(host: &Graph, hole: &Hole, v0: usize) -> Result<GoodCertificate> {
    require_inside(host, &hole.cycle, v0, "hole")?;
    if !hole.verify(host) {
        return Err(Error::contract("not an induced cycle of length at least 4"));
    }
    let k = hole.len() + 1;
    if k < 5 {
        return Err(Error::contract(format!("wheel on {k} vertices")));
    }
    let pairs = hole.cycle.iter().map(|&v| (v, 1)).chain([(v0, k as u64 - 5)]).collect();
    Ok(GoodCertificate::from_pairs(pairs, Kind::Strong))
}

/// A 2P3 inside `N(v0)` plus `v0`: cost 1 on the six path vertices, 2 on `v0`.
pub fn two_p3_certificate(host: &Graph, six: &TwoP3, v0: usize) -> Result<GoodCertificate> {
    let vs = six.vertices();
    require_inside(host, &vs, v0, "2P3")?;
    if !six.verify(host) {
        return Err(Error::contract("not an induced 2P3"));
    }
    let pairs = vs.into_iter().map(|v| (v, 1)).chain([(v0, 2)]).collect();
    Ok(GoodCertificate::from_pairs(pairs, Kind::Strong))
}

/// Everything the twin-free base case builds on its way to the certificate.
/// Indices in `k0`, `stable_sets` and `inner_costs` refer to `inner.graph`.
#[derive(Clone, Debug)]
pub struct BaseCase {
    /// `h - v0` with its index map into `h`.
    pub inner: Induced,
    /// The hitting clique.
    pub k0: Vec<usize>,
    /// One stable set per member of `k0`, in the same order.
    pub stable_sets: Vec<Vec<usize>>,
    /// Number of stable sets containing each inner vertex.
    pub inner_costs: Vec<u64>,
    pub certificate: GoodCertificate,
}

pub fn base_case_certificate(h: &Graph, v0: usize) -> Result<GoodCertificate> {
    base_case(h, v0).map(|b| b.certificate)
}

/// Base case for a twin-free `h` with universal `v0` such that `h - v0` is
/// chordal and 2P3-free.
///
/// For each cluster `K` of `h - v0 - K0`, the columns of the `K0 x K`
/// adjacency matrix are ordered by nonincreasing column sum, which turns every
/// row into a prefix of ones. A row `v` that is not complete to `K` picks the
/// first column holding a zero; those choices together with `v` form `S_v`.
pub fn base_case(h: &Graph, v0: usize) -> Result<BaseCase> {
    if v0 >= h.n() {
        return Err(Error::contract(format!("root {v0} out of range")));
    }
    if let Some((a, b)) = h.twin_classes().first_pair() {
        return Err(Error::precondition(format!("{a} and {b} are true twins")));
    }
    if h.degree(v0) + 1 != h.n() {
        return Err(Error::precondition(format!("{v0} is not universal")));
    }
    let inner = h.without(&[v0]);
    let g = &inner.graph;
    let order = match peo_or_hole(g) {
        Chordality::Chordal(order) => order,
        Chordality::Hole(hole) => {
            return Err(Error::precondition(format!(
                "hole {:?} in the graph without the root",
                inner.lift(&hole.cycle)
            )))
        }
    };
    let tree = clique_tree(g, &order)?;
    if let Some(two) = find_2p3_chordal(g, &tree) {
        return Err(Error::precondition(format!(
            "2P3 {:?} in the graph without the root",
            inner.lift(&two.vertices())
        )));
    }
    let k0 = hitting_clique(g, &tree)?;

    let mut rest = g.all_vertices();
    for &v in &k0 {
        rest.set(v, false);
    }
    let mut stable_sets: Vec<Vec<usize>> = k0.iter().map(|&v| vec![v]).collect();
    for cluster in g.components_in(&rest) {
        let weight = |u: usize| k0.iter().filter(|&&v| g.has_edge(u, v)).count();
        let mut cols = cluster.clone();
        cols.sort_by_key(|&u| (std::cmp::Reverse(weight(u)), u));
        for (row, &v) in k0.iter().enumerate() {
            let ones = cols.iter().take_while(|&&u| g.has_edge(v, u)).count();
            if cols[ones..].iter().any(|&u| g.has_edge(v, u)) {
                return Err(Error::invariant(format!("row {v} of the cluster {cluster:?} is not a staircase row")));
            }
            if ones < cols.len() {
                stable_sets[row].push(cols[ones]);
            }
        }
    }
    for s in &mut stable_sets {
        s.sort_unstable();
    }
    let mut inner_costs = vec![0u64; g.n()];
    for s in &stable_sets {
        for &u in s {
            inner_costs[u] += 1;
        }
    }
    if cfg!(debug_assertions) {
        check_stable_family(g, &stable_sets)?;
    }
    let inner_total: u64 = inner_costs.iter().sum();
    let root_cost = inner_total + 1 - 2 * k0.len() as u64;
    let pairs = inner
        .map
        .iter()
        .zip(&inner_costs)
        .map(|(&v, &c)| (v, c))
        .chain([(v0, root_cost)])
        .collect();
    let certificate = GoodCertificate::from_pairs(pairs, Kind::Central { root: v0 });
    Ok(BaseCase {
        inner,
        k0,
        stable_sets,
        inner_costs,
        certificate,
    })
}

/// Checks the three stable-set properties: every vertex is covered, every set
/// holds at least two vertices and is independent, and any two sets together
/// induce a P3.
pub fn check_stable_family(g: &Graph, sets: &[Vec<usize>]) -> Result<()> {
    let mut covered = FixedBitSet::with_capacity(g.n());
    for s in sets {
        if s.len() < 2 && g.n() > 1 {
            return Err(Error::invariant(format!("stable set {s:?} has fewer than two vertices")));
        }
        if s.iter().any(|&a| s.iter().any(|&b| g.has_edge(a, b))) {
            return Err(Error::invariant(format!("{s:?} is not stable")));
        }
        covered.extend(s.iter().copied());
    }
    if covered.count_ones(..) != g.n() {
        return Err(Error::invariant("stable sets do not cover every vertex"));
    }
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            let mut both = g.set_of(a);
            both.extend(b.iter().copied());
            if g.find_p3_in(&both).is_none() {
                return Err(Error::invariant(format!("{a:?} and {b:?} induce no P3")));
            }
        }
    }
    Ok(())
}

/// One peel: `v` and one endpoint of every matched edge were removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    /// The peeled vertex, as an index of the graph before the peel.
    pub peeled: usize,
    /// `(kept, deleted)` endpoints of the edges in `N[v0]` whose only
    /// distinguisher is `peeled`.
    pub matching: Vec<(usize, usize)>,
    /// Maps indices of the peeled graph to indices before the peel.
    pub kept: Vec<usize>,
}

/// Removes `v` from distance two of `v0` together with one endpoint of every
/// edge of `N[v0]` that only `v` distinguishes. The returned graph comes with
/// the step needed to lift costs back.
pub fn peel_vertex(h: &Graph, v0: usize, v: usize) -> Result<(Graph, PeelStep)> {
    if v0 >= h.n() || !h.second_neighborhood(v0).contains(&v) {
        return Err(Error::contract(format!("{v} is not at distance two from {v0}")));
    }
    let near: Vec<usize> = h.closed_neighbors(v0).ones().collect();
    let mut matching = Vec::new();
    let mut used = FixedBitSet::with_capacity(h.n());
    for (i, &a) in near.iter().enumerate() {
        for &b in &near[i + 1..] {
            if !h.has_edge(a, b) {
                continue;
            }
            let d = h.distinguishers(a, b)?;
            if d.is_empty() {
                return Err(Error::precondition(format!("{a} and {b} are true twins in N[{v0}]")));
            }
            if d != [v] {
                continue;
            }
            if used.contains(a) || used.contains(b) {
                return Err(Error::invariant(format!(
                    "edges distinguished only by {v} share the vertex {}",
                    if used.contains(a) { a } else { b }
                )));
            }
            used.insert(a);
            used.insert(b);
            let pair = if b == v0 { (b, a) } else { (a, b) };
            matching.push(pair);
        }
    }
    let mut removed: Vec<usize> = matching.iter().map(|&(_, d)| d).collect();
    removed.push(v);
    let sub = h.without(&removed);
    Ok((
        sub.graph,
        PeelStep {
            peeled: v,
            matching,
            kept: sub.map,
        },
    ))
}

/// Lifts costs on the peeled graph back: a deleted endpoint copies its
/// partner and the peeled vertex receives the sum over the matching.
pub fn lift_cost(step: &PeelStep, inner: &[u64]) -> Result<Vec<u64>> {
    if inner.len() != step.kept.len() {
        return Err(Error::contract(format!(
            "{} costs for a graph on {} vertices",
            inner.len(),
            step.kept.len()
        )));
    }
    let n = step.kept.len() + step.matching.len() + 1;
    let mut c = vec![0u64; n];
    for (&p, &x) in step.kept.iter().zip(inner) {
        c[p] = x;
    }
    for &(u, u2) in &step.matching {
        c[u2] = c[u];
        c[step.peeled] += c[u];
    }
    Ok(c)
}

/// A certificate around `v0` in a twin-free graph: a wheel if `N(v0)` has a
/// hole, else a 2P3 if `N(v0)` has one, else the base case on the radius-two
/// ball after peeling its distance-two layer from the highest index down.
pub fn find_2good(g: &Graph, v0: usize) -> Result<GoodCertificate> {
    if v0 >= g.n() {
        return Err(Error::contract(format!("root {v0} out of range")));
    }
    if let Some((a, b)) = g.twin_classes().first_pair() {
        return Err(Error::contract(format!("{a} and {b} are true twins")));
    }
    let nbrs: Vec<usize> = g.neighbors(v0).ones().collect();
    let local = g.induced(&nbrs);
    match peo_or_hole(&local.graph) {
        Chordality::Hole(hole) => {
            let cycle = hole.cycle.iter().map(|&v| local.map[v]).collect();
            return wheel_certificate(g, &Hole { cycle }, v0);
        }
        Chordality::Chordal(order) => {
            let tree = clique_tree(&local.graph, &order)?;
            if let Some(two) = find_2p3_chordal(&local.graph, &tree) {
                return two_p3_certificate(g, &two.mapped(&local.map), v0);
            }
        }
    }

    let ball = g.induced(&g.ball2(v0));
    let mut cur = ball.graph.clone();
    let mut root = ball.local(v0).expect("root lies in its ball");
    let mut steps = Vec::new();
    while let Some(&v) = cur.second_neighborhood(root).last() {
        let (next, step) = peel_vertex(&cur, root, v)?;
        root = step.kept.binary_search(&root).map_err(|_| Error::invariant("peel removed the root"))?;
        steps.push(step);
        cur = next;
    }
    let base = base_case_certificate(&cur, root)?;
    let mut costs = base.costs;
    for step in steps.iter().rev() {
        costs = lift_cost(step, &costs)?;
    }
    Ok(GoodCertificate {
        vertices: ball.map,
        costs,
        kind: Kind::Central { root: v0 },
    })
}

/// Checks every certificate invariant in `host`, computing the local optimum
/// with `oracle`.
pub fn verify_certificate(host: &Graph, cert: &GoodCertificate, oracle: &dyn ExactSolver) -> Result<bool> {
    let vs = &cert.vertices;
    if vs.len() > EXACT_LIMIT {
        return Err(Error::TooLarge { n: vs.len(), max: EXACT_LIMIT });
    }
    let well_formed = vs.len() == cert.costs.len()
        && vs.windows(2).all(|w| w[0] < w[1])
        && vs.iter().all(|&v| v < host.n());
    if !well_formed || cert.total() == 0 {
        return Ok(false);
    }
    let slack = match cert.kind {
        Kind::Strong => 0,
        Kind::Central { root } => {
            if root >= host.n() {
                return Ok(false);
            }
            let positive = |v: usize| cert.cost_of(v).is_some_and(|c| c >= 1);
            if !positive(root) || !host.neighbors(root).ones().all(positive) {
                return Ok(false);
            }
            1
        }
    };
    let sub = host.induced(vs);
    let costs = CostFn::from_ints(&cert.costs);
    let opt = oracle.opt(&sub.graph, &costs)?;
    let bound = opt * int(2) + int(slack);
    Ok(int(cert.total() as i64) <= bound)
}
