use crate::error::{invalid, Result};
use crate::graph::{Graph, GraphBuilder, VertexSetPartition};

fn roots(k: usize) -> Vec<[usize; 3]> {
    (0..=k).flat_map(|a| (0..=k - a).map(move |b| [a, b, k - a - b])).collect()
}

/// `K_N` with `N = C(k+2, 2)` and `k` pendant leaves on each clique vertex. Clique vertices
/// come first; the leaves of clique vertex `i` follow in order.
pub fn build_remark2_graph(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let n = roots(k).len();
    let mut b = GraphBuilder::new(0);
    let clique: Vec<usize> = (0..n).map(|i| b.add_tagged(format!("clique{}", i + 1))).collect();
    for i in 0..n {
        for j in i + 1..n {
            b.add_edge(clique[i], clique[j])?;
        }
    }
    for (i, &c) in clique.iter().enumerate() {
        for l in 0..k {
            let leaf = b.add_tagged(format!("leaf{}_{}", i + 1, l + 1));
            b.add_edge(c, leaf)?;
        }
    }
    Ok(b.build())
}

/// The 3-part sigma coloring: clique in part 1, and the leaves of the clique vertex matched to
/// root `(n1, n2, n3)` split `n1 / n2 / n3` over parts 1, 2, 3.
pub fn remark2_coloring(k: usize) -> Result<VertexSetPartition> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    let rs = roots(k);
    let mut parts = vec![1; rs.len()];
    for r in &rs {
        for (p, &count) in r.iter().enumerate() {
            parts.extend(std::iter::repeat_n(p + 1, count));
        }
    }
    VertexSetPartition::new(3, parts)
}
