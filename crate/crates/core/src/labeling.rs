//! Sigma colorings (partition form) and lucky labelings, with their verifiers.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, RawLabels, VertexSetPartition};

/// Largest label value and vertex degree accepted by sum-based checks; keeps sums far below `u64::MAX`.
pub const SUM_CAP: u64 = 1 << 20;

/// A labeling with labels in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLabels")]
pub struct Labeling {
    k: usize,
    labels: Vec<usize>,
}

impl TryFrom<RawLabels> for Labeling {
    type Error = Error;
    fn try_from(r: RawLabels) -> Result<Self> {
        Labeling::new(r.k, r.labels)
    }
}

impl Labeling {
    pub fn new(k: usize, labels: Vec<usize>) -> Result<Labeling> {
        if k == 0 {
            return Err(invalid("labeling needs k >= 1"));
        }
        if k as u64 > SUM_CAP {
            return Err(Error::TooLarge(format!("k = {k} exceeds label cap {SUM_CAP}")));
        }
        if let Some((v, l)) = labels.iter().enumerate().find(|(_, &l)| l == 0 || l > k) {
            return Err(invalid(format!("vertex {v} has label {l} outside 1..={k}")));
        }
        Ok(Labeling { k, labels })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Exchanges labels 1 and 2 (requires `k == 2`).
    pub fn swapped(&self) -> Labeling {
        assert_eq!(self.k, 2, "swap is defined for two labels");
        Labeling { k: 2, labels: self.labels.iter().map(|&l| 3 - l).collect() }
    }

    pub fn to_partition(&self) -> VertexSetPartition {
        VertexSetPartition::new(self.k, self.labels.clone()).expect("labels already validated")
    }

    pub fn from_partition(p: &VertexSetPartition) -> Labeling {
        Labeling { k: p.k(), labels: p.parts().to_vec() }
    }
}

/// Entry `i` counts neighbours of a vertex in part `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NeighborCountVector(pub Vec<usize>);

fn check_cover(g: &Graph, len: usize) -> Result<()> {
    if len == g.vertex_count() {
        Ok(())
    } else {
        Err(invalid(format!("assignment covers {len} vertices, graph has {}", g.vertex_count())))
    }
}

pub fn neighbor_count_vector(g: &Graph, part: &VertexSetPartition, v: usize) -> Result<NeighborCountVector> {
    check_cover(g, part.len())?;
    g.check_vertex(v)?;
    let mut c = vec![0; part.k()];
    for &w in g.neighbors(v) {
        c[part.part_of(w) - 1] += 1;
    }
    Ok(NeighborCountVector(c))
}

/// True iff adjacent vertices always have different neighbour-count vectors.
pub fn is_sigma_coloring(g: &Graph, part: &VertexSetPartition) -> Result<bool> {
    check_cover(g, part.len())?;
    let vecs: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| neighbor_count_vector(g, part, v).map(|c| c.0))
        .collect::<Result<_>>()?;
    Ok(g.edges().iter().all(|&(u, v)| vecs[u] != vecs[v]))
}

/// True iff adjacent vertices always have different neighbour label sums.
pub fn is_lucky_labeling(g: &Graph, lab: &Labeling) -> Result<bool> {
    let values: Vec<u64> = lab.labels().iter().map(|&l| l as u64).collect();
    sums_separate_edges(g, &values)
}

/// Sum condition for arbitrary positive label values (each ≤ [`SUM_CAP`]).
pub fn sums_separate_edges(g: &Graph, values: &[u64]) -> Result<bool> {
    check_cover(g, values.len())?;
    if values.iter().any(|&x| x > SUM_CAP) {
        return Err(Error::TooLarge(format!("label value exceeds cap {SUM_CAP}")));
    }
    if g.max_degree() as u64 > SUM_CAP {
        return Err(Error::TooLarge(format!("degree exceeds cap {SUM_CAP}")));
    }
    let sums: Vec<u64> = (0..g.vertex_count()).map(|v| g.neighbors(v).iter().map(|&w| values[w]).sum()).collect();
    Ok(g.edges().iter().all(|&(u, v)| sums[u] != sums[v]))
}

/// Compares sigma validity of `part` with sum validity of the labels `s^(part-1)`.
///
/// With `s > Δ(g)` the two always agree; smaller `s` is rejected.
pub fn sigma_equals_lucky_for_labels(g: &Graph, part: &VertexSetPartition, s: u64) -> Result<bool> {
    let delta = g.max_degree() as u64;
    if s < delta + 1 {
        return Err(invalid(format!("base s = {s} must be at least max degree + 1 = {}", delta + 1)));
    }
    let mut powers = Vec::with_capacity(part.k());
    let mut p: u64 = 1;
    for i in 0..part.k() {
        if i > 0 {
            p = p.checked_mul(s).filter(|&x| x <= SUM_CAP).ok_or_else(|| Error::TooLarge(format!("s^{i} exceeds label cap {SUM_CAP}")))?;
        }
        powers.push(p);
    }
    check_cover(g, part.len())?;
    let values: Vec<u64> = part.parts().iter().map(|&q| powers[q - 1]).collect();
    Ok(sums_separate_edges(g, &values)? == is_sigma_coloring(g, part)?)
}
