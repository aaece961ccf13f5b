//! Chordal graph machinery: recognition with hole certificates, clique trees,
//! 2P3 detection and the hitting-clique finder for chordal 2P3-free graphs.

use std::collections::VecDeque;
use std::ops::Add;

use fixedbitset::FixedBitSet;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Graph, P3};

/// An induced cycle of length at least four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    /// Normalized: least vertex first, then the direction whose second
    /// vertex is smaller.
    pub cycle: Vec<usize>,
}

impl Hole {
    fn normalized(mut cycle: Vec<usize>) -> Hole {
        let k = cycle.len();
        let at = (0..k).min_by_key(|&i| cycle[i]).unwrap_or(0);
        cycle.rotate_left(at);
        if k > 2 && cycle[k - 1] < cycle[1] {
            cycle[1..].reverse();
        }
        Hole { cycle }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Consecutive vertices adjacent, all other pairs non-adjacent, length >= 4.
    pub fn verify(&self, g: &Graph) -> bool {
        let c = &self.cycle;
        let k = c.len();
        if k < 4 || c.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let mut seen = c.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != k {
            return false;
        }
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                g.has_edge(c[i], c[j]) == consecutive
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chordality {
    /// A perfect elimination order: each vertex's later neighbors form a clique.
    Chordal(Vec<usize>),
    Hole(Hole),
}

/// Maximum cardinality search visiting order, ties to the least index.
fn mcs_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited vertex");
        done[v] = true;
        order.push(v);
        for u in g.neighbors(v).ones() {
            if !done[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

fn positions(order: &[usize], n: usize) -> Option<Vec<usize>> {
    if order.len() != n {
        return None;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return None;
        }
        pos[v] = i;
    }
    Some(pos)
}

/// First vertex whose later neighbors are not a clique, together with two
/// non-adjacent later neighbors. `None` means `order` is a perfect elimination order.
fn peo_violation(g: &Graph, order: &[usize], pos: &[usize]) -> Option<(usize, usize, usize)> {
    for &v in order {
        let later: Vec<usize> = g.neighbors(v).ones().filter(|&u| pos[u] > pos[v]).collect();
        let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if let Some(&x) = later.iter().find(|&&x| x != parent && !g.has_edge(parent, x)) {
            return Some((v, parent, x));
        }
    }
    None
}

pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    match positions(order, g.n()) {
        Some(pos) => peo_violation(g, order, &pos).is_none(),
        None => false,
    }
}

/// Shortest `a`-`b` path avoiding every neighbor of `v` except `a` and `b`
/// (and `v` itself). Closing it through `v` yields a hole.
fn hole_through(g: &Graph, v: usize, a: usize, b: usize) -> Option<Hole> {
    let n = g.n();
    let mut allowed = g.all_vertices();
    allowed.difference_with(&g.closed_neighbors(v));
    allowed.insert(a);
    allowed.insert(b);
    let mut parent = vec![usize::MAX; n];
    parent[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for y in g.neighbors(x).intersection(&allowed) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if parent[b] == usize::MAX {
        return None;
    }
    let mut cycle = vec![v];
    let mut path = vec![b];
    let mut x = b;
    while x != a {
        x = parent[x];
        path.push(x);
    }
    path.reverse();
    cycle.extend(path);
    Some(Hole::normalized(cycle))
}

/// Chordality test by maximum cardinality search plus verification. On
/// failure a hole is extracted from the failing triple; if that particular
/// triple does not close into a hole every vertex is tried in turn.
pub fn peo_or_hole(g: &Graph) -> Chordality {
    let mut order = mcs_order(g);
    order.reverse();
    let pos = positions(&order, g.n()).expect("mcs order is a permutation");
    let Some((v, a, b)) = peo_violation(g, &order, &pos) else {
        return Chordality::Chordal(order);
    };
    if let Some(hole) = hole_through(g, v, a, b) {
        return Chordality::Hole(hole);
    }
    for v in 0..g.n() {
        let nb: Vec<usize> = g.neighbors(v).ones().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !g.has_edge(a, b) {
                    if let Some(hole) = hole_through(g, v, a, b) {
                        return Chordality::Hole(hole);
                    }
                }
            }
        }
    }
    unreachable!("graph failed the elimination-order check but has no hole")
}

/// Maximal cliques of a chordal graph joined by tree edges such that, for
/// every vertex, the nodes containing it form a subtree. A forest when the
/// graph is disconnected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueTree {
    /// Sorted cliques, in lexicographic order.
    pub nodes: Vec<Vec<usize>>,
    /// Node index pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl CliqueTree {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Nodes reachable from `start` without crossing the edge `start`-`skip`.
    fn side(&self, adj: &[Vec<usize>], start: usize, skip: usize) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        seen[start] = true;
        seen[skip] = true;
        let mut out = vec![start];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out
    }

    fn union(&self, n: usize, nodes: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &i in nodes {
            s.extend(self.nodes[i].iter().copied());
        }
        s
    }

    /// For tree edge `e`: the vertex sets of both sides with the separator
    /// `K_i ∩ K_j` removed.
    fn separated_sides(&self, g: &Graph, adj: &[Vec<usize>], e: usize) -> (FixedBitSet, FixedBitSet) {
        let (i, j) = self.edges[e];
        let sep = g.set_of(&self.nodes[i]);
        let sep = {
            let mut s = sep;
            s.intersect_with(&g.set_of(&self.nodes[j]));
            s
        };
        let mut left = self.union(g.n(), &self.side(adj, i, j));
        let mut right = self.union(g.n(), &self.side(adj, j, i));
        left.difference_with(&sep);
        right.difference_with(&sep);
        (left, right)
    }

    /// Checks every structural invariant except completeness of the
    /// maximal-clique list (which needs enumeration).
    pub fn check(&self, g: &Graph) -> Result<()> {
        let fail = |m: String| Err(Error::invariant(m));
        for (i, k) in self.nodes.iter().enumerate() {
            if k.is_empty() || !g.is_clique(k) {
                return fail(format!("node {i} is not a nonempty clique"));
            }
            let set = g.set_of(k);
            if (0..g.n()).any(|v| !set.contains(v) && k.iter().all(|&u| g.has_edge(u, v))) {
                return fail(format!("node {i} is not maximal"));
            }
        }
        let mut sorted = self.nodes.clone();
        sorted.dedup();
        if sorted.len() != self.nodes.len() {
            return fail("duplicate node".into());
        }
        let comps = g.components().len();
        if self.edges.len() + comps != self.nodes.len() {
            return fail(format!(
                "{} edges for {} nodes and {} components",
                self.edges.len(),
                self.nodes.len(),
                comps
            ));
        }
        let adj = self.adjacency();
        for v in 0..g.n() {
            let holding: Vec<usize> = (0..self.nodes.len())
                .filter(|&i| self.nodes[i].binary_search(&v).is_ok())
                .collect();
            let Some(&first) = holding.first() else {
                return fail(format!("vertex {v} in no node"));
            };
            // BFS restricted to holding nodes must reach them all.
            let mut seen = vec![false; self.nodes.len()];
            seen[first] = true;
            let mut stack = vec![first];
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] && self.nodes[y].binary_search(&v).is_ok() {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != holding.len() {
                return fail(format!("nodes containing {v} are not a subtree"));
            }
        }
        Ok(())
    }
}

/// Clique tree from a perfect elimination order: candidate cliques
/// `{v} ∪ later(v)`, keep the maximal ones, then a maximum-weight spanning
/// forest of the intersection graph (weight = intersection size).
pub fn clique_tree(g: &Graph, order: &[usize]) -> Result<CliqueTree> {
    let pos = positions(order, g.n())
        .ok_or_else(|| Error::contract("elimination order is not a permutation"))?;
    if peo_violation(g, order, &pos).is_some() {
        return Err(Error::contract("not a perfect elimination order"));
    }
    let mut cands: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut c: Vec<usize> = g.neighbors(v).ones().filter(|&u| pos[u] > pos[v]).collect();
            c.push(v);
            c.sort_unstable();
            c
        })
        .collect();
    cands.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    cands.dedup();
    let mut nodes: Vec<Vec<usize>> = Vec::new();
    let mut node_sets: Vec<FixedBitSet> = Vec::new();
    for c in cands {
        let set = g.set_of(&c);
        if !node_sets.iter().any(|s| set.is_subset(s)) {
            node_sets.push(set);
            nodes.push(c);
        }
    }
    nodes.sort();
    let sets: Vec<FixedBitSet> = nodes.iter().map(|k| g.set_of(k)).collect();

    let k = nodes.len();
    let mut weighted = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = sets[i].intersection_count(&sets[j]);
            if w > 0 {
                weighted.push((w, i, j));
            }
        }
    }
    weighted.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut root: Vec<usize> = (0..k).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while root[r] != r {
            r = root[r];
        }
        let mut y = x;
        while root[y] != r {
            let next = root[y];
            root[y] = r;
            y = next;
        }
        r
    }
    let mut edges = Vec::new();
    for (_, i, j) in weighted {
        let (ri, rj) = (find(&mut root, i), find(&mut root, j));
        if ri != rj {
            root[ri] = rj;
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    Ok(CliqueTree { nodes, edges })
}

/// Two vertex-disjoint, anticomplete induced P3s.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoP3 {
    pub first: P3,
    pub second: P3,
}

impl TwoP3 {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.first.vertices().into_iter().chain(self.second.vertices()).collect();
        v.sort_unstable();
        v
    }

    pub fn mapped(&self, map: &[usize]) -> TwoP3 {
        TwoP3 {
            first: self.first.mapped(map),
            second: self.second.mapped(map),
        }
    }

    pub fn verify(&self, g: &Graph) -> bool {
        let a = self.first.vertices();
        let b = self.second.vertices();
        let mut all = self.vertices();
        all.dedup();
        all.len() == 6
            && g.is_p3_set(a[0], a[1], a[2])
            && g.is_p3_set(b[0], b[1], b[2])
            && a.iter().all(|&x| b.iter().all(|&y| !g.has_edge(x, y)))
    }
}

/// Finds a 2P3 in a chordal graph, or proves there is none. Two non-cluster
/// components give one directly; otherwise some clique-tree separator must
/// leave a P3 on both of its sides.
pub fn find_2p3_chordal(g: &Graph, t: &CliqueTree) -> Option<TwoP3> {
    let p3s: Vec<P3> = g
        .components()
        .iter()
        .filter_map(|c| g.find_p3_in(&g.set_of(c)))
        .collect();
    if p3s.len() >= 2 {
        return Some(TwoP3 { first: p3s[0], second: p3s[1] });
    }
    let adj = t.adjacency();
    for e in 0..t.edges.len() {
        let (left, right) = t.separated_sides(g, &adj, e);
        if let (Some(first), Some(second)) = (g.find_p3_in(&left), g.find_p3_in(&right)) {
            return Some(TwoP3 { first, second });
        }
    }
    None
}

/// A maximal clique whose removal leaves a cluster graph. Each tree edge is
/// oriented toward the side that is not a cluster after removing the
/// separator; edges with two cluster sides stay unoriented. The
/// lexicographically least sink is returned.
pub fn hitting_clique(g: &Graph, t: &CliqueTree) -> Result<Vec<usize>> {
    let comps = g.components();
    let bad: Vec<&Vec<usize>> = comps.iter().filter(|c| !g.is_cluster_on(&g.set_of(c))).collect();
    let clique = match bad.len() {
        0 => match t.nodes.first() {
            Some(k) => k.clone(),
            None => return Ok(Vec::new()),
        },
        1 => {
            let comp = g.set_of(bad[0]);
            let adj = t.adjacency();
            let mut outdeg = vec![0usize; t.nodes.len()];
            for e in 0..t.edges.len() {
                let (i, j) = t.edges[e];
                if !comp.contains(t.nodes[i][0]) {
                    continue;
                }
                let (left, right) = t.separated_sides(g, &adj, e);
                match (g.is_cluster_on(&left), g.is_cluster_on(&right)) {
                    (false, false) => {
                        return Err(Error::precondition(format!(
                            "both sides of clique-tree edge {:?}-{:?} contain a P3 (graph has a 2P3)",
                            t.nodes[i], t.nodes[j]
                        )))
                    }
                    (false, true) => outdeg[j] += 1,
                    (true, false) => outdeg[i] += 1,
                    (true, true) => {}
                }
            }
            let sink = (0..t.nodes.len())
                .find(|&i| comp.contains(t.nodes[i][0]) && outdeg[i] == 0)
                .ok_or_else(|| Error::invariant("oriented clique tree without a sink"))?;
            t.nodes[sink].clone()
        }
        _ => {
            return Err(Error::precondition(
                "two components contain a P3 (graph has a 2P3)",
            ))
        }
    };
    check_hitting_clique(g, &clique)?;
    Ok(clique)
}

fn check_hitting_clique(g: &Graph, k: &[usize]) -> Result<()> {
    let set = g.set_of(k);
    let maximal = g.is_clique(k) && (0..g.n()).all(|v| set.contains(v) || !k.iter().all(|&u| g.has_edge(u, v)));
    let mut rest = g.all_vertices();
    rest.difference_with(&set);
    if !maximal || !g.is_cluster_on(&rest) {
        return Err(Error::invariant(format!("{k:?} is not a maximal hitting clique")));
    }
    Ok(())
}

/// Maximum-weight clique of a chordal graph: the best candidate
/// `{v} ∪ later(v)` over the elimination order; ties go to the
/// lexicographically least vertex set.
pub fn max_weight_clique_chordal<W>(g: &Graph, order: &[usize], w: &[W]) -> (Vec<usize>, W)
where
    W: Clone + PartialOrd + Zero,
    for<'a> &'a W: Add<&'a W, Output = W>,
{
    let pos = positions(order, g.n()).expect("order is a permutation");
    let mut best: (Vec<usize>, W) = (Vec::new(), W::zero());
    for &v in order {
        let mut c: Vec<usize> = g.neighbors(v).ones().filter(|&u| pos[u] > pos[v]).collect();
        c.push(v);
        let weight = c.iter().fold(W::zero(), |acc, &u| &acc + &w[u]);
        c.sort_unstable();
        if best.0.is_empty() || weight > best.1 || (weight == best.1 && c < best.0) {
            best = (c, weight);
        }
    }
    best
}
