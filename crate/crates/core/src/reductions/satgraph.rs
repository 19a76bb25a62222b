use std::collections::BTreeMap;

use crate::error::{invalid, Error, Result};
use crate::gadgets::{attach_labels, certify, t_gadget, theta_gadget, variable_gadget, Gadget};
use crate::graph::GraphBuilder;
use crate::labeling::{is_lucky_labeling, is_sigma_coloring, Labeling};
use crate::sat::{is_nae_satisfying, nae_satisfiable, Assignment, Flavor, Formula};

use super::{Layout, ReductionKind, ReductionOutput, ReductionParams, Rule};

struct Assembly {
    b: GraphBuilder,
    rules: Vec<Rule>,
    var_ports: BTreeMap<usize, Vec<usize>>,
    clause_vertices: BTreeMap<usize, Vec<usize>>,
    anchors: BTreeMap<usize, usize>,
}

impl Assembly {
    fn new() -> Assembly {
        Assembly { b: GraphBuilder::new(0), rules: Vec::new(), var_ports: BTreeMap::new(), clause_vertices: BTreeMap::new(), anchors: BTreeMap::new() }
    }

    /// Embeds a variable gadget; returns the vertex offset.
    fn add_variable(&mut self, var: usize, g: &Gadget, anchor: &str) -> usize {
        let off = self.b.embed(&g.graph, &format!("var:x{}:", var + 1));
        self.rules.extend(g.template.iter().map(|&l| Rule::Var { var, if_true: l }));
        let a = g.graph.vertices_with_role(anchor)[0];
        self.anchors.insert(var, off + a);
        off
    }

    /// Adds clause triangles joined to the given occurrence ports.
    fn add_clauses(&mut self, f: &Formula) -> Result<()> {
        for (j, _) in f.clauses().iter().enumerate() {
            let c: Vec<usize> = (0..3)
                .map(|s| {
                    self.rules.push(Rule::Clause { clause: j, slot: s });
                    self.b.add_tagged(format!("clause:c{}:v{}", j + 1, s + 1))
                })
                .collect();
            self.b.add_edge(c[0], c[1])?;
            self.b.add_edge(c[1], c[2])?;
            self.b.add_edge(c[0], c[2])?;
            self.clause_vertices.insert(j, c);
        }
        let mut next = vec![0usize; f.num_vars()];
        for (j, cl) in f.clauses().iter().enumerate() {
            for (s, lit) in cl.iter().enumerate() {
                let port = self.var_ports[&lit.var][next[lit.var]];
                next[lit.var] += 1;
                self.b.add_edge(self.clause_vertices[&j][s], port)?;
            }
        }
        Ok(())
    }

    fn finish(self, f: &Formula, params: ReductionParams) -> Result<ReductionOutput> {
        let graph = self.b.build();
        if !graph.is_k_regular(3) {
            return Err(Error::Gadget("assembled graph is not 3-regular".into()));
        }
        Ok(ReductionOutput {
            graph,
            var_ports: self.var_ports,
            clause_vertices: self.clause_vertices,
            anchors: self.anchors,
            params,
            layout: Layout::Formula { formula: f.clone(), rules: self.rules },
        })
    }
}

fn require_certified(g: &Gadget) -> Result<crate::gadgets::GadgetCertificate> {
    let c = certify(&g.graph, &g.contract)?;
    if c.certified() && c.robust.both() {
        Ok(c)
    } else {
        Err(Error::Gadget(format!("{} failed certification", g.name)))
    }
}

/// NAE-3SAT instance → 3-regular graph that has a 2-label lucky labeling iff the formula is NAE-satisfiable.
pub fn build_nae_reduction(f: &Formula) -> Result<ReductionOutput> {
    if f.flavor() == Flavor::OneInThree {
        return Err(invalid("expected an NAE (or plain) formula"));
    }
    let occ = f.occurrences();
    let filler = t_gadget();
    require_certified(&filler)?;
    let mut a = Assembly::new();
    let mut unused = Vec::new();
    for (x, &k) in occ.iter().enumerate() {
        let g = variable_gadget(k, k)?;
        if k <= 2 {
            require_certified(&g)?;
        }
        let off = a.add_variable(x, &g, "x");
        let port = |name: String| off + g.port(&name).expect("named port");
        let mut ports = Vec::new();
        let mut i = 0;
        for cl in f.clauses() {
            for lit in cl.iter().filter(|l| l.var == x) {
                i += 1;
                let (used, spare) = if lit.negated { (format!("neg{i}"), format!("pos{i}")) } else { (format!("pos{i}"), format!("neg{i}")) };
                ports.push(port(used));
                unused.push(port(spare));
            }
        }
        a.var_ports.insert(x, ports);
    }
    a.add_clauses(f)?;
    // two completion passes; each deficient vertex gets fresh fillers until it has degree 3
    let mut fills = 0;
    for _ in 0..2 {
        let mut v = 0;
        while v < a.b.vertex_count() {
            while a.b.degree(v) < 3 {
                fills += 1;
                let off = a.b.embed(&filler.graph, &format!("fill{fills}:"));
                let t = off + filler.port("t").expect("apex port");
                a.b.add_edge(v, t)?;
                a.rules.extend(filler.template.iter().map(|&l| Rule::Fill { host: v, apex: l == filler.template[0] }));
            }
            v += 1;
        }
    }
    debug_assert_eq!(fills, unused.len());
    let params = ReductionParams { kind: ReductionKind::Nae3Sat, k: 2, n: f.num_vars(), clauses: f.clauses().len(), t_beta: None, f_beta: None, gadget_size: None };
    a.finish(f, params)
}

fn formula_layout(r: &ReductionOutput) -> Result<(&Formula, &[Rule])> {
    match &r.layout {
        Layout::Formula { formula, rules } => Ok((formula, rules)),
        Layout::SigmaK { .. } => Err(invalid("not a formula reduction")),
    }
}

fn labels_from_assignment(r: &ReductionOutput, a: &Assignment) -> Result<Labeling> {
    let (f, rules) = formula_layout(r)?;
    if a.len() != f.num_vars() {
        return Err(invalid("assignment does not cover the formula's variables"));
    }
    let n = r.graph.vertex_count();
    let mut lab = vec![0u8; n];
    for (v, rule) in rules.iter().enumerate() {
        if let Rule::Var { var, if_true } = *rule {
            lab[v] = if a.value(var) { if_true } else { 3 - if_true };
        }
    }
    for (v, rule) in rules.iter().enumerate() {
        if let Rule::Fill { host, apex } = *rule {
            let h = lab[host];
            lab[v] = if apex { 3 - h } else { h };
        }
    }
    for (j, c) in &r.clause_vertices {
        let ext: Vec<u8> = c.iter().map(|&cv| lab[*r.graph.neighbors(cv).iter().find(|w| !c.contains(w)).expect("port neighbour")]).collect();
        let t = attach_labels([ext[0], ext[1], ext[2]]).ok_or_else(|| invalid(format!("clause {} is not satisfied", j + 1)))?;
        for (s, &cv) in c.iter().enumerate() {
            lab[cv] = t[s];
        }
    }
    debug_assert!(rules.iter().zip(&lab).all(|(_, &l)| l == 1 || l == 2));
    Labeling::new(2, lab.into_iter().map(usize::from).collect())
}

/// Valid 2-label lucky labeling built from an NAE-satisfying assignment.
pub fn nae_coloring_from_assignment(r: &ReductionOutput, a: &Assignment) -> Result<Labeling> {
    let (f, _) = formula_layout(r)?;
    if !is_nae_satisfying(f, a) {
        return Err(invalid("assignment is not NAE-satisfying"));
    }
    let lab = labels_from_assignment(r, a)?;
    if !is_lucky_labeling(&r.graph, &lab)? {
        return Err(Error::Gadget("constructed labeling is not valid".into()));
    }
    Ok(lab)
}

/// Reads the assignment off a valid 2-label labeling: a variable is true iff its anchor has label 1.
pub fn nae_assignment_from_coloring(r: &ReductionOutput, lab: &Labeling) -> Result<Assignment> {
    let (f, _) = formula_layout(r)?;
    if lab.len() != r.graph.vertex_count() || lab.labels().iter().any(|&l| l > 2) || !is_lucky_labeling(&r.graph, lab)? {
        return Err(invalid("not a valid 2-label lucky labeling of the reduced graph"));
    }
    Ok(Assignment::new((0..f.num_vars()).map(|x| lab.label(r.anchors[&x]) == 1).collect()))
}

/// Cubic monotone formula → 3-regular graph whose smallest sigma-coloring part meets
/// [`theta_threshold`] iff the formula is 1-in-3 satisfiable.
///
/// Returns `None` (unless `skip_nae_gate`) when the formula is not even NAE-satisfiable.
pub fn build_1in3_reduction(f: &Formula, skip_nae_gate: bool) -> Result<Option<ReductionOutput>> {
    if f.flavor() != Flavor::OneInThree {
        return Err(invalid("expected a cubic monotone (1-in-3) formula"));
    }
    if !skip_nae_gate && nae_satisfiable(f)?.is_none() {
        return Ok(None);
    }
    let g = theta_gadget();
    let cert = require_certified(&g)?;
    let (lo, hi) = cert.black_label_count.ok_or_else(|| Error::Gadget("gadget has no conforming labeling".into()))?;
    if lo != hi {
        return Err(Error::Gadget("gadget label counts are not fixed".into()));
    }
    let size = g.graph.vertex_count();
    let mut a = Assembly::new();
    for x in 0..f.num_vars() {
        let off = a.add_variable(x, &g, "p1");
        a.var_ports.insert(x, (1..=3).map(|i| off + g.port(&format!("p{i}")).expect("port")).collect());
    }
    a.add_clauses(f)?;
    let params = ReductionParams {
        kind: ReductionKind::Cubic1In3,
        k: 2,
        n: f.num_vars(),
        clauses: f.clauses().len(),
        t_beta: Some(lo),
        f_beta: Some(size - lo),
        gadget_size: Some(size),
    };
    a.finish(f, params).map(Some)
}

/// Sigma 2-coloring of the minimum-part reduction built from an NAE-satisfying assignment
/// (label 1 on the true variables' ports).
pub fn theta_coloring_from_assignment(r: &ReductionOutput, a: &Assignment) -> Result<Labeling> {
    let (f, _) = formula_layout(r)?;
    if !is_nae_satisfying(f, a) {
        return Err(invalid("assignment is not NAE-satisfying"));
    }
    let lab = labels_from_assignment(r, a)?;
    if !is_sigma_coloring(&r.graph, &lab.to_partition())? {
        return Err(Error::Gadget("constructed coloring is not valid".into()));
    }
    Ok(lab)
}

/// Lower bound on the label-1 count: clause triangles contribute at least `m` and the
/// gadgets `t·T + f·(m − T)` with `T ≥ ⌈m/3⌉` true variables.
pub fn theta_bound(m: usize, t_beta: usize, f_beta: usize) -> Result<usize> {
    if t_beta + 3 <= f_beta {
        return Err(invalid("bound requires t_beta + 3 > f_beta"));
    }
    let t_min = m.div_ceil(3);
    Ok(f_beta * m + t_min * (3 + t_beta - f_beta))
}

pub fn theta_threshold(r: &ReductionOutput) -> Result<usize> {
    match (r.params.kind, r.params.t_beta, r.params.f_beta) {
        (super::ReductionKind::Cubic1In3, Some(t), Some(f)) => theta_bound(r.params.n, t, f),
        _ => Err(invalid("threshold is defined for the minimum-part reduction only")),
    }
}
