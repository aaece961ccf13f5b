//! Undirected simple graphs over dense `0..n` vertex indices.
//!
//! Adjacency is stored as one bit-row per vertex, so neighborhood
//! intersections and row comparisons cost `O(n / 64)`. Graphs are immutable;
//! every deletion goes through [`Graph::induced`], which also returns the map
//! back to the parent's indices.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<FixedBitSet>,
}

/// An induced `P3`: `mid` is adjacent to both ends, the ends are not adjacent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P3 {
    pub mid: usize,
    /// Always stored with `ends.0 < ends.1`.
    pub ends: (usize, usize),
}

impl P3 {
    pub fn new(a: usize, mid: usize, b: usize) -> Self {
        let ends = if a < b { (a, b) } else { (b, a) };
        P3 { mid, ends }
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.ends.0, self.mid, self.ends.1]
    }

    /// Maps every vertex through `map` (used to lift witnesses out of induced subgraphs).
    pub fn mapped(&self, map: &[usize]) -> P3 {
        P3::new(map[self.ends.0], map[self.mid], map[self.ends.1])
    }
}

impl fmt::Display for P3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.ends.0, self.mid, self.ends.1)
    }
}

/// Partition of the vertex set into true-twin classes (equal closed neighborhoods).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinPartition {
    /// Each class sorted, classes ordered by least member.
    pub classes: Vec<Vec<usize>>,
}

impl TwinPartition {
    pub fn is_twin_free(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// The least twin pair: the two smallest members of the first non-singleton class.
    pub fn first_pair(&self) -> Option<(usize, usize)> {
        self.classes
            .iter()
            .find(|c| c.len() > 1)
            .map(|c| (c[0], c[1]))
    }
}

/// Result of [`Graph::induced`]: the subgraph plus `map[i]` = parent index of vertex `i`.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Graph,
    pub map: Vec<usize>,
}

impl Induced {
    pub fn lift(&self, vs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = vs.iter().map(|&v| self.map[v]).collect();
        out.sort_unstable();
        out
    }

    /// Index of parent vertex `v` inside the subgraph, if present.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.map.binary_search(&v).ok()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::contract(format!("edge {u}-{v} out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::contract(format!("self-loop at {u}")));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    /// Graph whose edges are the set bits of `mask`, pairs ordered
    /// `(0,1), (0,2), .., (0,n-1), (1,2), ..`. Used for exhaustive enumeration.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    g.adj[u].insert(v);
                    g.adj[v].insert(u);
                }
                bit += 1;
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn closed_neighbors(&self, v: usize) -> FixedBitSet {
        let mut row = self.adj[v].clone();
        row.insert(v);
        row
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn all_vertices(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, vs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.extend(vs.iter().copied());
        s
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Vertex of maximum degree, ties to the least index.
    pub fn max_degree_vertex(&self) -> Option<usize> {
        (0..self.n).max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v)))
    }

    pub fn is_cluster(&self) -> bool {
        self.is_cluster_on(&self.all_vertices())
    }

    /// Is `G[set]` a disjoint union of cliques? Equivalent to: every edge inside
    /// `set` joins two vertices with equal closed neighborhoods inside `set`.
    pub fn is_cluster_on(&self, set: &FixedBitSet) -> bool {
        let mut a = FixedBitSet::with_capacity(self.n);
        let mut b = FixedBitSet::with_capacity(self.n);
        for v in set.ones() {
            a.clone_from(&self.adj[v]);
            a.intersect_with(set);
            a.insert(v);
            for u in self.adj[v].intersection(set).filter(|&u| u > v) {
                b.clone_from(&self.adj[u]);
                b.intersect_with(set);
                b.insert(u);
                if a != b {
                    return false;
                }
            }
        }
        true
    }

    pub fn find_p3(&self) -> Option<P3> {
        self.find_p3_in(&self.all_vertices())
    }

    /// Least induced `P3` of `G[set]`, ordered by the path sequence
    /// `(ends.0, mid, ends.1)`.
    pub fn find_p3_in(&self, set: &FixedBitSet) -> Option<P3> {
        let mut cand = FixedBitSet::with_capacity(self.n);
        for a in set.ones() {
            for mid in self.adj[a].intersection(set) {
                cand.clone_from(&self.adj[mid]);
                cand.intersect_with(set);
                cand.difference_with(&self.adj[a]);
                cand.set(a, false);
                // Any candidate below `a` would have produced a P3 at an earlier `a`.
                if let Some(b) = cand.ones().next() {
                    return Some(P3::new(a, mid, b));
                }
            }
        }
        None
    }

    /// Does `{a, b, c}` induce a P3 (exactly two of the three edges)?
    pub fn is_p3_set(&self, a: usize, b: usize, c: usize) -> bool {
        let e = self.has_edge(a, b) as u8 + self.has_edge(b, c) as u8 + self.has_edge(a, c) as u8;
        e == 2
    }

    /// Every induced P3 once, by vertex set, in lexicographic order of `(ends.0, mid, ends.1)`.
    pub fn all_p3s(&self) -> Vec<P3> {
        let mut out = Vec::new();
        for mid in 0..self.n {
            let nb: Vec<usize> = self.adj[mid].ones().collect();
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !self.has_edge(a, b) {
                        out.push(P3::new(a, mid, b));
                    }
                }
            }
        }
        out.sort_by_key(|p| (p.ends.0, p.mid, p.ends.1));
        out
    }

    /// Connected components of `G[set]`, each sorted, ordered by least vertex.
    pub fn components_in(&self, set: &FixedBitSet) -> Vec<Vec<usize>> {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut comps = Vec::new();
        for s in set.ones() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for u in self.adj[v].intersection(set) {
                    if !seen.put(u) {
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_in(&self.all_vertices())
    }

    /// Subgraph induced by `vs` (any order, duplicates ignored); vertex `i`
    /// of the result is the `i`-th smallest member of `vs`.
    pub fn induced(&self, vs: &[usize]) -> Induced {
        let mut map = vs.to_vec();
        map.sort_unstable();
        map.dedup();
        let k = map.len();
        let mut graph = Graph::empty(k);
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(map[i], map[j]) {
                    graph.adj[i].insert(j);
                    graph.adj[j].insert(i);
                }
            }
        }
        Induced { graph, map }
    }

    pub fn without(&self, removed: &[usize]) -> Induced {
        let mut keep = self.all_vertices();
        for &v in removed {
            keep.set(v, false);
        }
        self.induced(&keep.ones().collect::<Vec<_>>())
    }

    /// True-twin classes by recursive column splitting of the closed adjacency
    /// matrix: each column refines every current class into its 0-rows and
    /// 1-rows, `O(n^2)` cell reads in total.
    pub fn twin_classes(&self) -> TwinPartition {
        let mut classes: Vec<Vec<usize>> = if self.n == 0 {
            Vec::new()
        } else {
            vec![(0..self.n).collect()]
        };
        for col in 0..self.n {
            let mut next = Vec::with_capacity(classes.len());
            for class in classes {
                if class.len() == 1 {
                    next.push(class);
                    continue;
                }
                let (ones, zeros): (Vec<usize>, Vec<usize>) = class
                    .into_iter()
                    .partition(|&r| r == col || self.adj[r].contains(col));
                for part in [zeros, ones] {
                    if !part.is_empty() {
                        next.push(part);
                    }
                }
            }
            classes = next;
        }
        classes.sort_unstable_by_key(|c| c[0]);
        TwinPartition { classes }
    }

    /// Vertices at distance at most two from `v0`, `v0` included, sorted.
    pub fn ball2(&self, v0: usize) -> Vec<usize> {
        let mut ball = self.closed_neighbors(v0);
        for u in self.adj[v0].ones() {
            ball.union_with(&self.adj[u]);
        }
        ball.ones().collect()
    }

    /// Vertices at distance exactly two from `v0`, sorted.
    pub fn second_neighborhood(&self, v0: usize) -> Vec<usize> {
        let near = self.closed_neighbors(v0);
        self.ball2(v0).into_iter().filter(|&v| !near.contains(v)).collect()
    }

    /// Vertices other than `u, u2` adjacent to exactly one of them.
    pub fn distinguishers(&self, u: usize, u2: usize) -> Result<Vec<usize>> {
        if u == u2 || !self.has_edge(u, u2) {
            return Err(Error::contract(format!("{u}-{u2} is not an edge")));
        }
        let mut d = self.adj[u].clone();
        d.symmetric_difference_with(&self.adj[u2]);
        d.set(u, false);
        d.set(u2, false);
        Ok(d.ones().collect())
    }

    /// Edge-list text: `"n m"` then one sorted `"u v"` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// Parses the edge-list format: a header `"n m"` followed by `m` lines
/// `"u v"`. Blank lines are skipped and duplicate edges are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header \"n m\"".into(),
    })?;
    let [n, m] = parse_pair(hline, header, "header")?;

    let mut g = Graph::empty(n);
    let mut count = 0;
    for (line, l) in lines {
        let [u, v] = parse_pair(line, l, "edge")?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("vertex index out of range (n = {n})"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                msg: format!("self-loop at vertex {u}"),
            });
        }
        g.adj[u].insert(v);
        g.adj[v].insert(u);
        count += 1;
    }
    if count != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header announces {m} edges, found {count}"),
        });
    }
    Ok(g)
}

fn parse_pair(line: usize, text: &str, what: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let bad = || Error::Parse {
        line,
        msg: format!("malformed {what} {text:?}, expected two non-negative integers"),
    };
    if fields.len() != 2 {
        return Err(bad());
    }
    let a = fields[0].parse().map_err(|_| bad())?;
    let b = fields[1].parse().map_err(|_| bad())?;
    Ok([a, b])
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn k4_pendant() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = parse_graph("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g, path(3));
        let g = parse_graph("1 0").unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
        assert!(matches!(parse_graph("2 1\n0 0"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert!(matches!(parse_graph(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("3 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n1 3"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n1 2 3"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("3 3\n0 1\n1 2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn parse_dedups_and_roundtrips() {
        let g = parse_graph("3 3\n0 1\n1 0\n2 1\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn find_p3_examples() {
        let k3k2 = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        assert_eq!(k3k2.find_p3(), None);
        assert_eq!(path(3).find_p3(), Some(P3 { mid: 1, ends: (0, 2) }));
        assert_eq!(cycle(4).find_p3(), Some(P3 { mid: 1, ends: (0, 2) }));
    }

    #[test]
    fn twin_class_examples() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.twin_classes().classes, vec![vec![0, 1, 2, 3]]);
        assert_eq!(path(3).twin_classes().classes, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            k4_pendant().twin_classes().classes,
            vec![vec![0], vec![1, 2, 3], vec![4]]
        );
        assert_eq!(Graph::empty(0).twin_classes().classes, Vec::<Vec<usize>>::new());
    }

    #[test]
    fn ball2_examples() {
        assert_eq!(path(5).ball2(0), vec![0, 1, 2]);
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(star.ball2(0), vec![0, 1, 2, 3, 4]);
        assert_eq!(Graph::empty(3).ball2(1), vec![1]);
        assert_eq!(path(5).second_neighborhood(0), vec![2]);
    }

    #[test]
    fn induced_examples() {
        let c4 = cycle(4);
        let sub = c4.induced(&[0, 1, 2]);
        assert_eq!(sub.graph, path(3));
        assert_eq!(sub.map, vec![0, 1, 2]);
        let all = c4.induced(&[3, 2, 1, 0]);
        assert_eq!(all.graph, c4);
        let k3 = k4_pendant().induced(&[1, 2, 3]).graph;
        assert!(k3.is_clique(&[0, 1, 2]) && k3.n() == 3);
    }

    #[test]
    fn distinguisher_examples() {
        let k3 = cycle(3);
        for (u, v) in k3.edges() {
            assert!(k3.distinguishers(u, v).unwrap().is_empty());
        }
        assert_eq!(path(3).distinguishers(0, 1).unwrap(), vec![2]);
        assert!(matches!(path(3).distinguishers(0, 2), Err(Error::Contract(_))));
    }

    #[test]
    fn cluster_checks() {
        assert!(Graph::empty(4).is_cluster());
        assert!(!path(3).is_cluster());
        let g = path(3);
        let mut s = g.all_vertices();
        s.set(1, false);
        assert!(g.is_cluster_on(&s));
        assert_eq!(g.find_p3_in(&s), None);
    }

    #[test]
    fn edge_mask_enumeration_covers_all_pairs() {
        let full = Graph::from_edge_mask(5, (1 << 10) - 1);
        assert_eq!(full.m(), 10);
        let g = Graph::from_edge_mask(4, 0b1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }
}
