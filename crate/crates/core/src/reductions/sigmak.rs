use std::collections::BTreeMap;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSetPartition};
use crate::labeling::is_sigma_coloring;

use super::{Layout, ReductionKind, ReductionOutput, ReductionParams};

/// Regular graph `g_star` and `k ≥ 2` → graph whose sigma chromatic number is at most `k`
/// iff `g_star` is `k`-colorable.
///
/// Per source vertex α: a clique `y[α][β][γ]` with rows `β = 1..k-1` of length `k-1` and a
/// last row of length `k`; row `β < k` is joined to hub `v_β`, the last row to `x_α`;
/// `x_α` carries a pendant `z_α`, and the `x` vertices induce a copy of `g_star`.
pub fn build_sigma_k_reduction(g_star: &Graph, k: usize) -> Result<ReductionOutput> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    if g_star.regular_degree().is_none() {
        return Err(invalid("source graph must be regular"));
    }
    let n = g_star.vertex_count();
    let mut b = GraphBuilder::new(0);
    let mut y = Vec::with_capacity(n);
    for a in 0..n {
        let rows: Vec<Vec<usize>> = (1..=k)
            .map(|beta| {
                let len = if beta < k { k - 1 } else { k };
                (1..=len).map(|gamma| b.add_tagged(format!("clique:a{}:y{beta}_{gamma}", a + 1))).collect()
            })
            .collect();
        let all: Vec<usize> = rows.iter().flatten().copied().collect();
        for (i, &u) in all.iter().enumerate() {
            for &w in &all[i + 1..] {
                b.add_edge(u, w)?;
            }
        }
        y.push(rows);
    }
    let hubs: Vec<usize> = (1..k).map(|beta| b.add_tagged(format!("hub:v{beta}"))).collect();
    let x: Vec<usize> = (0..n).map(|a| b.add_tagged(format!("x{}", a + 1))).collect();
    let z: Vec<usize> = (0..n).map(|a| b.add_tagged(format!("z{}", a + 1))).collect();
    for a in 0..n {
        for (beta, row) in y[a].iter().enumerate() {
            let target = if beta + 1 < k { hubs[beta] } else { x[a] };
            for &u in row {
                b.add_edge(u, target)?;
            }
        }
        b.add_edge(x[a], z[a])?;
    }
    for &(u, v) in g_star.edges() {
        b.add_edge(x[u], x[v])?;
    }
    let graph = b.build();
    let expected = n * (k * k - k + 1) + (k - 1) + 2 * n;
    if graph.vertex_count() != expected {
        return Err(Error::Gadget(format!("expected {expected} vertices, built {}", graph.vertex_count())));
    }
    let var_ports: BTreeMap<usize, Vec<usize>> = (0..n).map(|a| (a, vec![x[a], z[a]])).collect();
    let clause_vertices = (0..n).map(|a| (a, y[a].iter().flatten().copied().collect())).collect();
    let params = ReductionParams { kind: ReductionKind::SigmaK, k, n, clauses: 0, t_beta: None, f_beta: None, gadget_size: None };
    Ok(ReductionOutput {
        graph,
        var_ports,
        clause_vertices,
        anchors: BTreeMap::new(),
        params,
        layout: Layout::SigmaK { g_star: g_star.clone(), hubs, x, z, y },
    })
}

/// Sigma `k`-coloring of the reduced graph from a proper `k`-coloring of `g_star`.
pub fn sigma_k_coloring_from_proper_coloring(r: &ReductionOutput, c_prime: &VertexSetPartition) -> Result<VertexSetPartition> {
    let Layout::SigmaK { g_star, hubs, x, z, y } = &r.layout else {
        return Err(invalid("not a colorability reduction"));
    };
    let k = r.params.k;
    if c_prime.len() != g_star.vertex_count() || c_prime.k() > k {
        return Err(invalid(format!("expected a coloring of {} vertices with at most {k} colors", g_star.vertex_count())));
    }
    if let Some(&(u, v)) = g_star.edges().iter().find(|&&(u, v)| c_prime.part_of(u) == c_prime.part_of(v)) {
        return Err(invalid(format!("coloring is not proper on edge {u}-{v}")));
    }
    let mut parts = vec![0; r.graph.vertex_count()];
    for (beta, &v) in hubs.iter().enumerate() {
        parts[v] = beta + 1;
    }
    for a in 0..g_star.vertex_count() {
        parts[x[a]] = k;
        parts[z[a]] = c_prime.part_of(a);
        for (beta, row) in y[a].iter().enumerate() {
            let beta = beta + 1;
            for (gamma, &u) in row.iter().enumerate() {
                parts[u] = if beta == k { gamma + 1 } else { (1..=k).filter(|&c| c != beta).nth(gamma).expect("k-1 colors remain") };
            }
        }
    }
    let p = VertexSetPartition::new(k, parts)?;
    if !is_sigma_coloring(&r.graph, &p)? {
        return Err(Error::Gadget("constructed partition is not a sigma coloring".into()));
    }
    Ok(p)
}
