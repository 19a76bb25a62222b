//! Undirected simple graphs with dense vertex ids and optional role tags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Immutable undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    roles: BTreeMap<usize, String>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).build()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbour list. Panics on an out-of-range id; see [`degree`] for the checked form.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adj[v].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_k_regular(&self, k: usize) -> bool {
        self.adj.iter().all(|a| a.len() == k)
    }

    /// The common degree if the graph is regular (and non-empty).
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.is_k_regular(d).then_some(d)
    }

    pub fn roles(&self) -> &BTreeMap<usize, String> {
        &self.roles
    }

    pub fn role(&self, v: usize) -> Option<&str> {
        self.roles.get(&v).map(String::as_str)
    }

    /// Vertices whose role tag equals `tag`.
    pub fn vertices_with_role(&self, tag: &str) -> Vec<usize> {
        self.roles.iter().filter(|(_, t)| t.as_str() == tag).map(|(&v, _)| v).collect()
    }

    pub fn without_roles(&self) -> Graph {
        Graph { roles: BTreeMap::new(), ..self.clone() }
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n || perm.iter().collect::<BTreeSet<_>>().len() != self.n || perm.iter().any(|&p| p >= self.n) {
            return Err(invalid("permutation does not match vertex count"));
        }
        let mut b = GraphBuilder::new(self.n);
        for &(u, v) in &self.edges {
            b.add_edge(perm[u], perm[v])?;
        }
        for (&v, t) in &self.roles {
            b.set_role(perm[v], t.clone());
        }
        Ok(b.build())
    }

    /// Connected components (each sorted), ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Closed-twin pairs `(u, v)` with `u < v` and `N[u] = N[v]`.
    pub fn closed_twin_pairs(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| {
                let mut a: Vec<usize> = self.adj[u].iter().copied().filter(|&w| w != v).collect();
                let b: Vec<usize> = self.adj[v].iter().copied().filter(|&w| w != u).collect();
                a.sort_unstable();
                a == b
            })
            .collect()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }
}

/// Incremental construction of a [`Graph`]; vertex ids are allocated in call order.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    adj: Vec<BTreeSet<usize>>,
    roles: BTreeMap<usize, String>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> GraphBuilder {
        GraphBuilder { adj: vec![BTreeSet::new(); n], roles: BTreeMap::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_tagged(&mut self, tag: impl Into<String>) -> usize {
        let v = self.add_vertex();
        self.roles.insert(v, tag.into());
        v
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.adj.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(invalid(format!("self-loop at vertex {u}")));
        }
        if !self.adj[u].insert(v) {
            return Err(invalid(format!("duplicate edge {u} {v}")));
        }
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn set_role(&mut self, v: usize, tag: impl Into<String>) {
        self.roles.insert(v, tag.into());
    }

    /// Copies `g` in with ids shifted; returns the offset. Role tags get `prefix` prepended.
    pub fn embed(&mut self, g: &Graph, prefix: &str) -> usize {
        let off = self.adj.len();
        for _ in 0..g.vertex_count() {
            self.add_vertex();
        }
        for &(u, v) in g.edges() {
            self.adj[u + off].insert(v + off);
            self.adj[v + off].insert(u + off);
        }
        for (&v, t) in g.roles() {
            self.roles.insert(v + off, format!("{prefix}{t}"));
        }
        off
    }

    pub fn build(self) -> Graph {
        let adj: Vec<Vec<usize>> = self.adj.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut edges = Vec::new();
        for (u, a) in adj.iter().enumerate() {
            edges.extend(a.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        Graph { n: adj.len(), adj, edges, roles: self.roles }
    }
}

/// A k-part partition; `parts[v]` is in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLabels")]
pub struct VertexSetPartition {
    k: usize,
    #[serde(rename = "labels")]
    parts: Vec<usize>,
}

/// Wire form shared by partitions and labelings: `{"k": int, "labels": [int]}`.
#[derive(Deserialize)]
pub(crate) struct RawLabels {
    pub(crate) k: usize,
    pub(crate) labels: Vec<usize>,
}

impl TryFrom<RawLabels> for VertexSetPartition {
    type Error = Error;
    fn try_from(r: RawLabels) -> Result<Self> {
        VertexSetPartition::new(r.k, r.labels)
    }
}

impl VertexSetPartition {
    pub fn new(k: usize, parts: Vec<usize>) -> Result<VertexSetPartition> {
        if k == 0 {
            return Err(invalid("partition needs k >= 1"));
        }
        if let Some((v, p)) = parts.iter().enumerate().find(|(_, &p)| p == 0 || p > k) {
            return Err(invalid(format!("vertex {v} has part {p} outside 1..={k}")));
        }
        Ok(VertexSetPartition { k, parts })
    }

    pub fn single_part(n: usize) -> VertexSetPartition {
        VertexSetPartition { k: 1, parts: vec![1; n] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.parts[v]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sizes of parts 1..=k.
    pub fn part_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &p in &self.parts {
            s[p - 1] += 1;
        }
        s
    }
}

/// Parses the edge-list text format: `n m`, then `m` lines `u v`, then optional `# role u <tag>` lines.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| perr(1, "missing header".into()))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    let parse_num = |s: &str, line: usize| s.parse::<usize>().map_err(|_| perr(line, format!("expected a non-negative integer, got {s:?}")));
    if nums.len() != 2 {
        return Err(perr(hl, "header must be \"n m\"".into()));
    }
    let n = parse_num(nums[0], hl)?;
    let m = parse_num(nums[1], hl)?;
    let mut b = GraphBuilder::new(n);
    let mut seen_edges = 0;
    for (ln, line) in lines {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            let rest = rest.trim_start();
            if let Some(r) = rest.strip_prefix("role") {
                let r = r.trim_start();
                let (vs, tag) = r.split_once(' ').ok_or_else(|| perr(ln, "role line must be \"# role u <tag>\"".into()))?;
                let v = parse_num(vs, ln)?;
                if v >= n {
                    return Err(perr(ln, format!("vertex {v} >= n = {n}")));
                }
                b.set_role(v, tag.trim().to_string());
            }
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(perr(ln, "edge line must be \"u v\"".into()));
        }
        let (u, v) = (parse_num(parts[0], ln)?, parse_num(parts[1], ln)?);
        if u >= n || v >= n {
            return Err(perr(ln, format!("vertex id >= n = {n}")));
        }
        if u == v {
            return Err(perr(ln, format!("self-loop at vertex {u}")));
        }
        if b.has_edge(u, v) {
            return Err(perr(ln, format!("duplicate edge {u} {v}")));
        }
        b.add_edge(u, v)?;
        seen_edges += 1;
    }
    if seen_edges != m {
        return Err(perr(hl, format!("header declares {m} edges but {seen_edges} were given")));
    }
    Ok(b.build())
}

/// Canonical text form: sorted edges, then role lines sorted by vertex; LF line endings.
pub fn serialize_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    for (v, t) in g.roles() {
        let _ = writeln!(s, "# role {v} {t}");
    }
    s
}

/// Named small graphs used throughout tests and examples.
pub mod families {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, &e).expect("valid clique")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..a {
            for v in 0..b {
                e.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &e).expect("valid biclique")
    }

    pub fn star(leaves: usize) -> Graph {
        complete_bipartite(1, leaves)
    }

    pub fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &e).expect("valid Petersen graph")
    }
}
