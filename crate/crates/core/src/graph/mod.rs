//! Simple undirected graphs on vertices `0..n`.

mod cliques;
mod coloring;
mod enumerate;
mod io;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cliques::{all_cliques, maximal_cliques, maximal_independent_sets, DEFAULT_CLIQUE_CAP};
pub use coloring::{
    chromatic_number, clique_number, find_coloring, independence_number, is_proper_coloring,
    EXACT_VERTEX_LIMIT,
};
pub use enumerate::{connected_graphs, connected_graphs_upto};
pub use io::{encode_graph6, parse_dimacs, parse_dimacs_with_warnings, parse_graph6, GraphJson};

/// A sorted, duplicate-free list of vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        VertexSet::new(v)
    }
}

/// Undirected simple graph. Equality compares structure only, not the name.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<FixedBitSet>,
    name: Option<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![FixedBitSet::with_capacity(n); n],
            name: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name if set, otherwise the graph6 encoding.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| encode_graph6(self))
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].ones() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Non-adjacent pairs `(u, v)` with `u < v`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.adj[u].contains(v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub(crate) fn adjacency_row(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &u)| set[k + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &u)| set[k + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(v) = stack.pop() {
            for w in self.adj[v].ones() {
                if !seen.put(w) {
                    stack.push(w);
                }
            }
        }
        seen.count_ones(..) == self.n
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        g.name = self.name.as_ref().map(|s| format!("co-{s}"));
        g
    }

    /// Cycle `C_k`.
    pub fn cycle(k: usize) -> Result<Graph> {
        if k < 3 {
            return Err(Error::InvalidArgument(format!("cycle needs k >= 3, got {k}")));
        }
        let mut g = Graph::empty(k);
        for v in 0..k {
            g.add_edge_unchecked(v, (v + 1) % k);
        }
        Ok(g.with_name(format!("C{k}")))
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Graph> {
        if n < 1 {
            return Err(Error::InvalidArgument("complete graph needs n >= 1".into()));
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge_unchecked(u, v);
            }
        }
        Ok(g.with_name(format!("K{n}")))
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Result<Graph> {
        if n < 1 {
            return Err(Error::InvalidArgument("path needs n >= 1".into()));
        }
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge_unchecked(v - 1, v);
        }
        Ok(g.with_name(format!("P{n}")))
    }

    /// Kneser graph `K(a, b)`: `b`-subsets of `{0..a}`, adjacent when disjoint.
    /// Vertices are ordered lexicographically by subset.
    pub fn kneser(a: usize, b: usize) -> Result<Graph> {
        if b < 1 || a < 2 * b {
            return Err(Error::InvalidArgument(format!(
                "kneser needs a >= 2b and b >= 1, got a={a}, b={b}"
            )));
        }
        if a > 63 {
            return Err(Error::InvalidArgument("kneser ground set limited to 63".into()));
        }
        let subsets = k_subsets(a, b);
        let mut g = Graph::empty(subsets.len());
        for (i, &s) in subsets.iter().enumerate() {
            for (j, &t) in subsets.iter().enumerate().skip(i + 1) {
                if s & t == 0 {
                    g.add_edge_unchecked(i, j);
                }
            }
        }
        Ok(g.with_name(format!("Kneser({a},{b})")))
    }

    pub fn petersen() -> Graph {
        Graph::kneser(5, 2).unwrap().with_name("Petersen")
    }

    /// Disjunctive (co-normal, OR) product: `(g,h) ~ (g',h')` iff `g ~ g'` or
    /// `h ~ h'`. Vertex `(g, h)` has index `g * |H| + h`.
    pub fn disjunctive_product(&self, other: &Graph) -> Graph {
        self.product_with(other, |gg, hh, _| gg || hh, "*")
    }

    /// Lexicographic product `G[H]`: `g ~ g'`, or `g = g'` and `h ~ h'`.
    pub fn lexicographic_product(&self, other: &Graph) -> Graph {
        self.product_with(other, |gg, hh, same| gg || (same && hh), "lex")
    }

    fn product_with(
        &self,
        other: &Graph,
        rule: impl Fn(bool, bool, bool) -> bool,
        op: &str,
    ) -> Graph {
        let m = other.n;
        let mut g = Graph::empty(self.n * m);
        for a in 0..self.n * m {
            for b in a + 1..self.n * m {
                let (g1, h1) = (a / m, a % m);
                let (g2, h2) = (b / m, b % m);
                if rule(self.has_edge(g1, g2), other.has_edge(h1, h2), g1 == g2) {
                    g.add_edge_unchecked(a, b);
                }
            }
        }
        if let (Some(x), Some(y)) = (self.name(), other.name()) {
            g.name = Some(if op == "*" {
                format!("{x}*{y}")
            } else {
                format!("{x}[{y}]")
            });
        }
        g
    }

    /// Graph with the vertex order permuted: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Shape(format!(
                "permutation length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge_unchecked(perm[u], perm[v]);
        }
        g.name = self.name.clone();
        Ok(g)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            name: self.name.clone(),
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

fn k_subsets(a: usize, b: usize) -> Vec<u64> {
    fn rec(start: usize, a: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for x in start..a {
            if a - x < left {
                break;
            }
            rec(x + 1, a, left - 1, cur | (1 << x), out);
        }
    }
    let mut out = Vec::new();
    rec(0, a, b, 0, &mut out);
    out
}

#[cfg(test)]
pub(crate) use tests::random_graph;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn generators() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!((k3.n(), k3.edge_count()), (3, 3));
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!((c5.n(), c5.edge_count()), (5, 5));
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::kneser(3, 2).is_err());
    }

    #[test]
    fn petersen_matches_disjoint_pair_count() {
        let p = Graph::kneser(5, 2).unwrap();
        assert_eq!(p.n(), 10);
        // disjoint unordered pairs of 2-subsets of a 5-set, counted directly
        let mut pairs = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                pairs.push([a, b]);
            }
        }
        let mut count = 0;
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                if pairs[i].iter().all(|x| !pairs[j].contains(x)) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 15);
        assert_eq!(p.edge_count(), count);
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn complement_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.complement().edge_count(), 0);
        let c5 = Graph::cycle(5).unwrap();
        let cc = c5.complement();
        assert_eq!(cc.edge_count(), 5);
        assert!((0..5).all(|v| cc.degree(v) == 2));
        assert!(cc.is_connected());
    }

    #[test]
    fn product_examples() {
        let k2 = Graph::complete(2).unwrap();
        let p = k2.disjunctive_product(&k2);
        assert_eq!(p.edges(), Graph::complete(4).unwrap().edges());
        let c5k3 = Graph::cycle(5)
            .unwrap()
            .disjunctive_product(&Graph::complete(3).unwrap());
        assert_eq!(c5k3.n(), 15);
        assert_eq!(c5k3.name(), Some("C5*K3"));
    }

    #[test]
    fn clique_and_independent_checks() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(c5.is_clique(&[0, 1]));
        assert!(!c5.is_clique(&[0, 2]));
        assert!(c5.is_independent(&[0, 2]));
        assert!(c5.is_connected());
        assert!(!Graph::empty(2).is_connected());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::empty(n);
                let mut k = 0;
                for v in 1..n {
                    for u in 0..v {
                        if bits[k] {
                            g.add_edge_unchecked(u, v);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn complement_is_involution(g in arb_graph(9)) {
            let c = g.complement();
            prop_assert_eq!(c.complement().edges(), g.edges());
            prop_assert_eq!(g.edge_count() + c.edge_count(), g.n() * (g.n() - 1) / 2);
        }

        #[test]
        fn lexicographic_inside_disjunctive(g in arb_graph(4), h in arb_graph(4)) {
            let lex = g.lexicographic_product(&h);
            let dis = g.disjunctive_product(&h);
            for (u, v) in lex.edges() {
                prop_assert!(dis.has_edge(u, v));
            }
        }

        #[test]
        fn adjacency_symmetric(g in arb_graph(10)) {
            for u in 0..g.n() {
                prop_assert!(!g.has_edge(u, u));
                for v in 0..g.n() {
                    prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                }
            }
        }
    }

    pub(crate) fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.add_edge_unchecked(u, v);
                }
            }
        }
        g
    }
}

