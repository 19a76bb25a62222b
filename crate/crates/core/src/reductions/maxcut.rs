use std::collections::BTreeMap;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::sat::{cut_value, is_nae_satisfying, Assignment, Flavor, Formula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutReduction {
    pub graph: Graph,
    /// Edge multiplicities; a variable occurring once yields a doubled edge (weight 2).
    pub weights: BTreeMap<(usize, usize), u64>,
    pub threshold: u64,
    /// Per variable and occurrence: `[literal vertex, complemented literal vertex]`.
    pub literal_vertices: Vec<Vec<[usize; 2]>>,
    pub clause_vertices: Vec<[usize; 3]>,
    formula: Formula,
}

/// NAE formula with `k` clauses → weighted graph on `9k` vertices whose maximum cut is
/// `11k` iff the formula is NAE-satisfiable.
pub fn build_maxcut_reduction(f: &Formula) -> Result<MaxCutReduction> {
    if f.flavor() == Flavor::OneInThree {
        return Err(invalid("expected an NAE (or plain) formula"));
    }
    let mut b = GraphBuilder::new(0);
    let mut weights = BTreeMap::new();
    let mut add = |b: &mut GraphBuilder, u: usize, v: usize| -> Result<()> {
        if !b.has_edge(u, v) {
            b.add_edge(u, v)?;
        }
        *weights.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        Ok(())
    };
    let mut literal_vertices = Vec::with_capacity(f.num_vars());
    for (x, &nx) in f.occurrences().iter().enumerate() {
        let cycle: Vec<usize> = (0..2 * nx)
            .map(|p| b.add_tagged(format!("var:x{}:{}{}", x + 1, if p % 2 == 0 { "lit" } else { "neg" }, p / 2 + 1)))
            .collect();
        for p in 0..cycle.len() {
            add(&mut b, cycle[p], cycle[(p + 1) % cycle.len()])?;
        }
        literal_vertices.push(cycle.chunks(2).map(|c| [c[0], c[1]]).collect::<Vec<_>>());
    }
    let mut next = vec![0usize; f.num_vars()];
    let mut clause_vertices = Vec::with_capacity(f.clauses().len());
    for (j, cl) in f.clauses().iter().enumerate() {
        let tri = [0, 1, 2].map(|s| b.add_tagged(format!("clause:c{}:v{}", j + 1, s + 1)));
        add(&mut b, tri[0], tri[1])?;
        add(&mut b, tri[1], tri[2])?;
        add(&mut b, tri[0], tri[2])?;
        for (s, lit) in cl.iter().enumerate() {
            let [pos, neg] = literal_vertices[lit.var][next[lit.var]];
            next[lit.var] += 1;
            add(&mut b, tri[s], if lit.negated { pos } else { neg })?;
        }
        clause_vertices.push(tri);
    }
    let graph = b.build();
    let k = f.clauses().len();
    if graph.vertex_count() != 9 * k {
        return Err(Error::Gadget(format!("expected {} vertices, built {}", 9 * k, graph.vertex_count())));
    }
    Ok(MaxCutReduction { graph, weights, threshold: 11 * k as u64, literal_vertices, clause_vertices, formula: f.clone() })
}

/// Cut sides reaching the threshold, built from an NAE-satisfying assignment.
pub fn maxcut_side_from_assignment(r: &MaxCutReduction, a: &Assignment) -> Result<Vec<bool>> {
    if a.len() != r.formula.num_vars() || !is_nae_satisfying(&r.formula, a) {
        return Err(invalid("assignment is not NAE-satisfying"));
    }
    let mut side = vec![false; r.graph.vertex_count()];
    for (x, occ) in r.literal_vertices.iter().enumerate() {
        for &[pos, neg] in occ {
            side[pos] = a.value(x);
            side[neg] = !a.value(x);
        }
    }
    for (cl, tri) in r.formula.clauses().iter().zip(&r.clause_vertices) {
        for (lit, &t) in cl.iter().zip(tri) {
            side[t] = lit.eval(a);
        }
    }
    let value = cut_value(&r.graph, &r.weights, &side);
    if value != r.threshold {
        return Err(Error::Gadget(format!("constructed cut has value {value}, expected {}", r.threshold)));
    }
    Ok(side)
}
