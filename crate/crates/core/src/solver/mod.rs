//! Exact search for sigma colorings and lucky labelings.
//!
//! All procedures share one constraint engine ([`engine`]): one constraint per edge `uv`,
//! scoped to the symmetric difference of the two neighbourhoods (common neighbours cancel in
//! both the count-vector and the sum comparison).

mod engine;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, VertexSetPartition};
use crate::labeling::{is_lucky_labeling, is_sigma_coloring, Labeling};
use engine::{Engine, MinOutcome, Outcome, Problem, Symmetry};

/// Default node budget per call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest label count the engine handles (domains are 64-bit masks).
pub const MAX_LABELS: usize = 64;

/// Which validity notion a search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sigma,
    Lucky,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: Option<usize>,
    pub exhausted: bool,
    #[serde(rename = "nodes")]
    pub nodes_explored: u64,
    pub witness: Option<Labeling>,
}

impl SolveResult {
    fn trivial(n: usize, nodes: u64) -> SolveResult {
        let witness = Labeling::new(1, vec![1; n]).expect("k = 1 labeling");
        SolveResult { value: Some(1), exhausted: true, nodes_explored: nodes, witness: Some(witness) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPartResult {
    pub min_size: usize,
    pub witness: VertexSetPartition,
    pub exhausted: bool,
    #[serde(rename = "nodes")]
    pub nodes_explored: u64,
}

fn verify(g: &Graph, mode: Mode, lab: &Labeling) -> Result<bool> {
    match mode {
        Mode::Sigma => is_sigma_coloring(g, &lab.to_partition()),
        Mode::Lucky => is_lucky_labeling(g, lab),
    }
}

fn single_label_valid(g: &Graph) -> bool {
    g.edges().iter().all(|&(u, v)| g.neighbors(u).len() != g.neighbors(v).len())
}

fn to_labeling(k: usize, values: &[u8]) -> Labeling {
    Labeling::new(k, values.iter().map(|&x| x as usize + 1).collect()).expect("engine labels are in range")
}

fn checked_witness(g: &Graph, mode: Mode, lab: Labeling) -> Result<Labeling> {
    if verify(g, mode, &lab)? {
        Ok(lab)
    } else {
        Err(Error::InvalidInput("internal error: solver produced an invalid witness".into()))
    }
}

fn smallest_number(g: &Graph, mode: Mode, max_k: usize, budget: u64) -> Result<SolveResult> {
    if max_k == 0 {
        return Err(invalid("max_k must be at least 1"));
    }
    if single_label_valid(g) {
        return Ok(SolveResult::trivial(g.vertex_count(), 0));
    }
    if max_k > MAX_LABELS {
        return Err(Error::TooLarge(format!("max_k = {max_k} exceeds {MAX_LABELS}")));
    }
    let mut nodes = 0;
    for k in 2..=max_k {
        let sym = match mode {
            Mode::Sigma => Symmetry::Labels,
            Mode::Lucky => Symmetry::None,
        };
        let problem = Problem::new(g, k, mode, sym);
        let mut e = Engine::new(&problem, budget.saturating_sub(nodes));
        let out = e.solve();
        nodes += e.nodes();
        match out {
            Outcome::Found => {
                let w = checked_witness(g, mode, to_labeling(k, &e.values()))?;
                return Ok(SolveResult { value: Some(k), exhausted: true, nodes_explored: nodes, witness: Some(w) });
            }
            Outcome::Budget => return Ok(SolveResult { value: None, exhausted: false, nodes_explored: nodes, witness: None }),
            Outcome::Infeasible => {}
        }
    }
    Ok(SolveResult { value: None, exhausted: true, nodes_explored: nodes, witness: None })
}

/// Smallest `k ≤ max_k` with a sigma coloring using `k` parts.
pub fn sigma_number(g: &Graph, max_k: usize, budget: u64) -> Result<SolveResult> {
    smallest_number(g, Mode::Sigma, max_k, budget)
}

/// Smallest `k ≤ max_k` with a lucky labeling from `{1..k}`.
pub fn lucky_number(g: &Graph, max_k: usize, budget: u64) -> Result<SolveResult> {
    smallest_number(g, Mode::Lucky, max_k, budget)
}

/// Decides whether a valid assignment with labels `{1, 2}` exists.
///
/// `value` is `Some(1)` when one label already suffices, `Some(2)` when two are needed,
/// and `None` when no two-label assignment exists (or the budget ran out).
pub fn decide_two(g: &Graph, mode: Mode, budget: u64) -> Result<SolveResult> {
    if single_label_valid(g) {
        return Ok(SolveResult::trivial(g.vertex_count(), 0));
    }
    let problem = Problem::new(g, 2, mode, Symmetry::ClosedTwins);
    let mut e = Engine::new(&problem, budget);
    let out = e.solve();
    let nodes = e.nodes();
    Ok(match out {
        Outcome::Found => {
            let w = checked_witness(g, mode, to_labeling(2, &e.values()))?;
            SolveResult { value: Some(2), exhausted: true, nodes_explored: nodes, witness: Some(w) }
        }
        Outcome::Infeasible => SolveResult { value: None, exhausted: true, nodes_explored: nodes, witness: None },
        Outcome::Budget => SolveResult { value: None, exhausted: false, nodes_explored: nodes, witness: None },
    })
}

/// Compares the two-label answers for sigma and lucky mode on a regular graph.
pub fn regular_sigma2_iff_eta2(g: &Graph, budget: u64) -> Result<bool> {
    if g.vertex_count() > 0 && g.regular_degree().is_none() {
        return Err(invalid("graph is not regular"));
    }
    let s = decide_two(g, Mode::Sigma, budget)?;
    let l = decide_two(g, Mode::Lucky, budget)?;
    if !s.exhausted || !l.exhausted {
        return Err(Error::Budget(budget));
    }
    Ok(s.value.is_some() == l.value.is_some())
}

/// Minimum over valid two-part sigma colorings of the smaller part size.
pub fn min_part_size(g: &Graph, budget: u64) -> Result<MinPartResult> {
    let first = decide_two(g, Mode::Sigma, budget)?;
    let Some(w0) = first.witness else {
        return Err(if first.exhausted {
            Error::Promise("graph has no sigma coloring with two parts".into())
        } else {
            Error::Budget(budget)
        });
    };
    let n = g.vertex_count();
    let ones = w0.labels().iter().filter(|&&l| l == 1).count();
    let mut labels: Vec<usize> = w0.labels().to_vec();
    if ones > n - ones {
        labels.iter_mut().for_each(|l| *l = 3 - *l);
    }
    let incumbent = ones.min(n - ones);
    let fallback = VertexSetPartition::new(2, labels).expect("two-part witness");

    let problem = Problem::new(g, 2, Mode::Sigma, Symmetry::ClosedTwins);
    let mut e = Engine::new(&problem, budget.saturating_sub(first.nodes_explored));
    let out = e.minimize(incumbent);
    let nodes = first.nodes_explored + e.nodes();
    match out {
        MinOutcome::Improved(values) => {
            let lab = checked_witness(g, Mode::Sigma, to_labeling(2, &values))?;
            let p = lab.to_partition();
            let sizes = p.part_sizes();
            Ok(MinPartResult { min_size: sizes[0].min(sizes[1]), witness: p, exhausted: true, nodes_explored: nodes })
        }
        MinOutcome::NoBetter => Ok(MinPartResult { min_size: incumbent, witness: fallback, exhausted: true, nodes_explored: nodes }),
        MinOutcome::Budget(best) => {
            let (min_size, witness) = match best {
                Some(values) if values.iter().filter(|&&x| x == 0).count() < incumbent => {
                    let lab = checked_witness(g, Mode::Sigma, to_labeling(2, &values))?;
                    let p = lab.to_partition();
                    let s = p.part_sizes();
                    (s[0].min(s[1]), p)
                }
                _ => (incumbent, fallback),
            };
            Ok(MinPartResult { min_size, witness, exhausted: false, nodes_explored: nodes })
        }
    }
}
