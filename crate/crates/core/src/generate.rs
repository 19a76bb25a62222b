//! Small-graph enumeration: isomorphism classes by vertex augmentation, regular graphs by
//! 2-switch closure, and seeded random graphs.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{Graph, GraphBuilder};

/// Stable colouring by iterated neighbour-colour refinement, starting from degrees.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut color: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nc: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
                nc.sort_unstable();
                (color[v], nc)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| sorted.binary_search(s).expect("present")).collect();
        if sorted.len() == classes {
            return next;
        }
        classes = sorted.len();
        color = next;
    }
}

/// Isomorphism-invariant fingerprint: class sizes of the stable colouring and the quotient counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Fingerprint {
    n: usize,
    m: usize,
    cells: Vec<(usize, Vec<usize>)>,
}

fn fingerprint(g: &Graph, color: &[usize]) -> Fingerprint {
    let k = color.iter().max().map_or(0, |&c| c + 1);
    let mut cells = vec![(0usize, vec![0usize; k]); k];
    for v in 0..g.vertex_count() {
        let c = color[v];
        cells[c].0 += 1;
        if cells[c].0 == 1 {
            for &w in g.neighbors(v) {
                cells[c].1[color[w]] += 1;
            }
        }
    }
    Fingerprint { n: g.vertex_count(), m: g.edge_count(), cells }
}

/// Exact isomorphism test guided by stable colourings.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    let (ca, cb) = (refine(a), refine(b));
    fingerprint(a, &ca) == fingerprint(b, &cb) && iso_with_colors(a, &ca, b, &cb)
}

fn iso_with_colors(a: &Graph, ca: &[usize], b: &Graph, cb: &[usize]) -> bool {
    let n = a.vertex_count();
    // order a's vertices: small colour classes first, then connectivity to already-ordered vertices
    let mut class_size = HashMap::new();
    for &c in ca {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let linked = a.neighbors(v).iter().filter(|&&w| placed[w]).count();
                (std::cmp::Reverse(linked), class_size[&ca[v]], v)
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn extend(i: usize, order: &[usize], a: &Graph, ca: &[usize], b: &Graph, cb: &[usize], map: &mut [usize], used: &mut [bool]) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for t in 0..b.vertex_count() {
            if used[t] || cb[t] != ca[v] {
                continue;
            }
            let consistent = order[..i].iter().all(|&u| a.has_edge(u, v) == b.has_edge(map[u], t));
            if consistent {
                map[v] = t;
                used[t] = true;
                if extend(i + 1, order, a, ca, b, cb, map, used) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }
    extend(0, &order, a, ca, b, cb, &mut map, &mut used)
}

/// A set of pairwise non-isomorphic graphs.
#[derive(Debug, Default)]
pub struct IsoClasses {
    buckets: HashMap<Fingerprint, Vec<(Graph, Vec<usize>)>>,
    reps: Vec<Graph>,
}

impl IsoClasses {
    pub fn new() -> IsoClasses {
        IsoClasses::default()
    }

    /// Adds `g` unless an isomorphic graph is present; returns whether it was new.
    pub fn insert(&mut self, g: Graph) -> bool {
        let c = refine(&g);
        let fp = fingerprint(&g, &c);
        let bucket = self.buckets.entry(fp).or_default();
        if bucket.iter().any(|(h, ch)| iso_with_colors(&g, &c, h, ch)) {
            return false;
        }
        bucket.push((g.clone(), c));
        self.reps.push(g);
        true
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representatives in insertion order.
    pub fn into_graphs(self) -> Vec<Graph> {
        self.reps
    }
}

/// One graph per isomorphism class on exactly `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for size in 1..=n {
        let mut classes = IsoClasses::new();
        for g in &level {
            let prev = size - 1;
            for mask in 0u64..(1u64 << prev) {
                let mut b = GraphBuilder::new(size);
                for &(u, v) in g.edges() {
                    b.add_edge(u, v).expect("copied edge");
                }
                for u in 0..prev {
                    if mask >> u & 1 == 1 {
                        b.add_edge(u, prev).expect("new edge");
                    }
                }
                classes.insert(b.build());
            }
        }
        level = classes.into_graphs();
    }
    level
}

/// One graph per isomorphism class of `d`-regular graphs on `n` vertices (connected or not).
pub fn regular_graphs(n: usize, d: usize) -> Result<Vec<Graph>> {
    if n == 0 {
        return Ok(vec![Graph::empty(0)]);
    }
    if d >= n || (n * d) % 2 == 1 {
        return Ok(Vec::new());
    }
    // circulant seed: i ~ i±1..i±d/2, plus the antipode when d is odd
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        for s in 1..=d / 2 {
            let j = (i + s) % n;
            if !b.has_edge(i, j) {
                b.add_edge(i, j)?;
            }
        }
        if d % 2 == 1 {
            let j = (i + n / 2) % n;
            if !b.has_edge(i, j) {
                b.add_edge(i, j)?;
            }
        }
    }
    let seed = b.build();
    let mut classes = IsoClasses::new();
    classes.insert(seed.clone());
    let mut queue = vec![seed];
    while let Some(g) = queue.pop() {
        let e = g.edges();
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                let (a, b1) = e[i];
                let (c, d1) = e[j];
                if a == c || a == d1 || b1 == c || b1 == d1 {
                    continue;
                }
                for (x, y, z, w) in [(a, c, b1, d1), (a, d1, b1, c)] {
                    if g.has_edge(x, y) || g.has_edge(z, w) {
                        continue;
                    }
                    let mut edges: Vec<(usize, usize)> = e.iter().copied().filter(|&f| f != e[i] && f != e[j]).collect();
                    edges.push((x, y));
                    edges.push((z, w));
                    let h = Graph::from_edges(n, &edges)?;
                    if classes.insert(h.clone()) {
                        queue.push(h);
                    }
                }
            }
        }
    }
    Ok(classes.into_graphs())
}

/// Connected regular graphs on `n` vertices of every degree `1..n`.
pub fn connected_regular_graphs(n: usize) -> Vec<Graph> {
    (1..n)
        .filter_map(|d| regular_graphs(n, d).ok())
        .flatten()
        .filter(Graph::is_connected)
        .collect()
}

/// Erdős–Rényi graph G(n, p) from a seeded generator.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("random edges are simple")
}
