//! Polynomial constructions from SAT variants and colorability to labeling problems, with
//! both proof directions executable.

mod maxcut;
mod remark2;
mod satgraph;
mod sigmak;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::sat::Formula;

pub use maxcut::{build_maxcut_reduction, maxcut_side_from_assignment, MaxCutReduction};
pub use remark2::{build_remark2_graph, remark2_coloring};
pub use satgraph::{
    build_1in3_reduction, build_nae_reduction, nae_assignment_from_coloring, nae_coloring_from_assignment, theta_bound,
    theta_coloring_from_assignment, theta_threshold,
};
pub use sigmak::{build_sigma_k_reduction, sigma_k_coloring_from_proper_coloring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Nae3Sat,
    SigmaK,
    Cubic1In3,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionParams {
    pub kind: ReductionKind,
    /// Target number of labels.
    pub k: usize,
    /// Variables of the formula, or vertices of the source graph.
    pub n: usize,
    pub clauses: usize,
    pub t_beta: Option<usize>,
    pub f_beta: Option<usize>,
    pub gadget_size: Option<usize>,
}

/// How each vertex is labeled from a truth assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rule {
    /// Label when the variable is true; flipped when false.
    Var { var: usize, if_true: u8 },
    /// Completion gadget vertex: `apex` means "same label as the gadget apex", which is opposite to `host`.
    Fill { host: usize, apex: bool },
    Clause { clause: usize, slot: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Layout {
    Formula { formula: Formula, rules: Vec<Rule> },
    SigmaK { g_star: Graph, hubs: Vec<usize>, x: Vec<usize>, z: Vec<usize>, y: Vec<Vec<Vec<usize>>> },
}

/// A reduced graph with traceback maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub graph: Graph,
    /// Formula reductions: the port used by each occurrence, in clause order.
    /// Colorability reduction: `[x_α, z_α]` per source vertex.
    pub var_ports: BTreeMap<usize, Vec<usize>>,
    /// Formula reductions: the triangle of each clause. Colorability reduction: the clique of each source vertex.
    pub clause_vertices: BTreeMap<usize, Vec<usize>>,
    /// Vertex whose label encodes each variable's truth value (label 1 = true).
    pub anchors: BTreeMap<usize, usize>,
    pub params: ReductionParams,
    pub(crate) layout: Layout,
}

/// Serializable traceback maps (everything except the graph).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Traceback {
    pub params: ReductionParams,
    pub var_ports: BTreeMap<usize, Vec<usize>>,
    pub clause_vertices: BTreeMap<usize, Vec<usize>>,
    pub anchors: BTreeMap<usize, usize>,
    pub hubs: Vec<usize>,
}

impl ReductionOutput {
    pub fn traceback(&self) -> Traceback {
        Traceback {
            params: self.params.clone(),
            var_ports: self.var_ports.clone(),
            clause_vertices: self.clause_vertices.clone(),
            anchors: self.anchors.clone(),
            hubs: self.hubs().to_vec(),
        }
    }

    /// The vertices `v_1..v_{k-1}` of a colorability reduction (empty otherwise).
    pub fn hubs(&self) -> &[usize] {
        match &self.layout {
            Layout::SigmaK { hubs, .. } => hubs,
            Layout::Formula { .. } => &[],
        }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match &self.layout {
            Layout::Formula { formula, .. } => Some(formula),
            Layout::SigmaK { .. } => None,
        }
    }
}
