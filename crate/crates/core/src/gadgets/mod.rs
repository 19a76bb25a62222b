//! Forcing contracts, exhaustive certification, synthesis, and the gadget library.
//!
//! A gadget is a graph fragment whose ports will each receive external neighbours up to a
//! host degree. Certification enumerates every 2-labeling of the fragment together with every
//! labeling of those external neighbours, and checks the edge conditions inside the fragment.

mod bundle;
mod library;
mod synth;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

pub use bundle::{bundle_file_name, shipped_bundles, write_shipped_bundles, GadgetBundle};
pub use library::{
    attach_labels, s_link, skew_block_labels, t_gadget, theta_gadget, variable_gadget, Gadget, SKEW_BLOCK_EDGES,
};
pub use synth::synthesize;

/// Largest fragment [`certify`] accepts.
pub const MAX_CERTIFY_VERTICES: usize = 64;
/// Largest number of external neighbour labels enumerated.
pub const MAX_BOUNDARY_BITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    Sigma2,
    Lucky2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PortSpec {
    pub name: String,
    pub vertex: usize,
    pub internal_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForcingContract {
    pub ports: Vec<PortSpec>,
    pub black: Vec<usize>,
    pub white: Vec<usize>,
    pub mode: LabelMode,
    /// Each port gets `host_degree - internal_degree` external neighbours of free label.
    pub host_degree: usize,
}

impl ForcingContract {
    /// Structural problems that make the contract unsatisfiable by any fragment.
    pub fn contradiction(&self) -> Option<String> {
        if let Some(v) = self.black.iter().find(|v| self.white.contains(v)) {
            return Some(format!("vertex {v} is required to be both black and white"));
        }
        if let Some(p) = self.ports.iter().find(|p| !self.black.contains(&p.vertex) && !self.white.contains(&p.vertex)) {
            return Some(format!("port {} is neither black nor white", p.name));
        }
        if let Some(p) = self.ports.iter().find(|p| p.internal_degree > self.host_degree) {
            return Some(format!("port {} has internal degree above the host degree", p.name));
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Counterexample {
    /// Fragment labels in `{1, 2}`.
    pub labels: Vec<u8>,
    /// External neighbour labels, grouped by port in contract order.
    pub context: Vec<u8>,
}

/// Which polarities (label of the black set) have the property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Polarities {
    pub black_is_1: bool,
    pub black_is_2: bool,
}

impl Polarities {
    pub fn both(&self) -> bool {
        self.black_is_1 && self.black_is_2
    }

    fn set(&mut self, black_label: u8) {
        if black_label == 1 {
            self.black_is_1 = true;
        } else {
            self.black_is_2 = true;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GadgetCertificate {
    pub vertices: usize,
    pub boundary_bits: usize,
    /// `2^(vertices + boundary_bits)`: the size of the space the pruned enumeration covers.
    pub enumerated_labelings: u128,
    /// Valid (fragment labeling, context) pairs.
    pub valid_labelings: u64,
    /// No valid pair exists at all.
    pub vacuous: bool,
    pub all_conforming: bool,
    /// Each polarity appears in some valid conforming pair.
    pub both_polarities_realizable: bool,
    pub realizable: Polarities,
    /// Polarities with one fragment labeling that is valid under every context.
    pub robust: Polarities,
    /// Range of the number of fragment vertices carrying the black label over conforming pairs.
    pub black_label_count: Option<(usize, usize)>,
    pub counterexample: Option<Counterexample>,
}

impl GadgetCertificate {
    pub fn certified(&self) -> bool {
        self.all_conforming && self.both_polarities_realizable
    }
}

struct Layout {
    n: usize,
    /// degree including external neighbours
    deg: Vec<usize>,
    /// external neighbour bit indices per vertex
    ext: Vec<Vec<usize>>,
    bits: usize,
}

fn layout(g: &Graph, c: &ForcingContract) -> Result<Layout> {
    let n = g.vertex_count();
    let mut ext = vec![Vec::new(); n];
    let mut bits = 0;
    for p in &c.ports {
        g.check_vertex(p.vertex)?;
        let d = g.neighbors(p.vertex).len();
        if d != p.internal_degree {
            return Err(invalid(format!("port {} has internal degree {d}, contract says {}", p.name, p.internal_degree)));
        }
        for _ in d..c.host_degree {
            ext[p.vertex].push(bits);
            bits += 1;
        }
    }
    for &v in c.black.iter().chain(&c.white) {
        g.check_vertex(v)?;
    }
    let deg = (0..n).map(|v| g.neighbors(v).len() + ext[v].len()).collect();
    Ok(Layout { n, deg, ext, bits })
}

/// Exhaustively checks `g` against `contract`.
pub fn certify(g: &Graph, contract: &ForcingContract) -> Result<GadgetCertificate> {
    if let Some(msg) = contract.contradiction() {
        return Err(invalid(format!("contradictory contract: {msg}")));
    }
    let n = g.vertex_count();
    if n > MAX_CERTIFY_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices exceed certification limit {MAX_CERTIFY_VERTICES}")));
    }
    let lay = layout(g, contract)?;
    if lay.bits > MAX_BOUNDARY_BITS {
        return Err(Error::TooLarge(format!("{} boundary bits exceed limit {MAX_BOUNDARY_BITS}", lay.bits)));
    }
    let mut st = Enumeration::new(g, contract, lay);
    st.run();
    Ok(st.finish())
}

/// Calls `visit(labels, context)` for every valid pair, in enumeration order.
pub fn for_each_valid(g: &Graph, contract: &ForcingContract, mut visit: impl FnMut(&[u8], &[u8])) -> Result<()> {
    let lay = layout(g, contract)?;
    if g.vertex_count() > MAX_CERTIFY_VERTICES || lay.bits > MAX_BOUNDARY_BITS {
        return Err(Error::TooLarge("fragment too large to enumerate".into()));
    }
    let mut st = Enumeration::new(g, contract, lay);
    st.visitor = Some(&mut visit);
    st.run();
    Ok(())
}

type Visitor<'a> = &'a mut dyn FnMut(&[u8], &[u8]);

struct Enumeration<'a> {
    g: &'a Graph,
    c: &'a ForcingContract,
    lay: Layout,
    order: Vec<usize>,
    /// edges checkable once `order[i]` is labeled (no external labels involved)
    inner_at: Vec<Vec<(usize, usize)>>,
    /// edges that involve external labels, checked per context
    outer: Vec<(usize, usize)>,
    labels: Vec<u8>,
    ctx: Vec<u8>,
    valid: u64,
    conforming_all: bool,
    realizable: Polarities,
    robust: Polarities,
    count_range: Option<(usize, usize)>,
    counterexample: Option<Counterexample>,
    visitor: Option<Visitor<'a>>,
}

impl<'a> Enumeration<'a> {
    fn new(g: &'a Graph, c: &'a ForcingContract, lay: Layout) -> Enumeration<'a> {
        let n = lay.n;
        // breadth-first order from the first port so edge scopes close early
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let starts: Vec<usize> = c.ports.iter().map(|p| p.vertex).chain(0..n).collect();
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut i = order.len();
            order.push(s);
            while i < order.len() {
                for &w in g.neighbors(order[i]) {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                    }
                }
                i += 1;
            }
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut inner_at = vec![Vec::new(); n];
        let mut outer = Vec::new();
        for &(u, v) in g.edges() {
            if !lay.ext[u].is_empty() || !lay.ext[v].is_empty() {
                outer.push((u, v));
            } else {
                let last = g.neighbors(u).iter().chain(g.neighbors(v)).map(|&w| pos[w]).max().expect("edge has neighbours");
                inner_at[last].push((u, v));
            }
        }
        let bits = lay.bits;
        Enumeration {
            g,
            c,
            lay,
            order,
            inner_at,
            outer,
            labels: vec![0; n],
            ctx: vec![0; bits],
            valid: 0,
            conforming_all: true,
            realizable: Polarities::default(),
            robust: Polarities::default(),
            count_range: None,
            counterexample: None,
            visitor: None,
        }
    }

    /// Number of label-2 neighbours, external ones included.
    fn twos(&self, x: usize) -> usize {
        self.g.neighbors(x).iter().filter(|&&w| self.labels[w] == 2).count() + self.lay.ext[x].iter().filter(|&&b| self.ctx[b] == 2).count()
    }

    fn edge_ok(&self, u: usize, v: usize) -> bool {
        let (du, dv) = (self.lay.deg[u], self.lay.deg[v]);
        let (tu, tv) = (self.twos(u), self.twos(v));
        match self.c.mode {
            LabelMode::Sigma2 => du != dv || tu != tv,
            LabelMode::Lucky2 => du + tu != dv + tv,
        }
    }

    fn run(&mut self) {
        self.dfs(0);
    }

    fn dfs(&mut self, i: usize) {
        if i == self.lay.n {
            self.leaf();
            return;
        }
        let v = self.order[i];
        for l in [1u8, 2] {
            self.labels[v] = l;
            if self.inner_at[i].iter().all(|&(a, b)| self.edge_ok(a, b)) {
                self.dfs(i + 1);
            }
        }
        self.labels[v] = 0;
    }

    /// Black label if the current fragment labeling conforms.
    fn polarity(&self) -> Option<u8> {
        let uniform = |set: &[usize]| -> Option<Option<u8>> {
            let first = set.first().map(|&v| self.labels[v]);
            set.iter().all(|&v| Some(self.labels[v]) == first).then_some(first)
        };
        let b = uniform(&self.c.black)?;
        let w = uniform(&self.c.white)?;
        match (b, w) {
            (Some(b), Some(w)) if b == w => None,
            (Some(b), _) => Some(b),
            (None, Some(w)) => Some(3 - w),
            (None, None) => Some(1),
        }
    }

    fn leaf(&mut self) {
        let pol = self.polarity();
        let mut all_contexts = true;
        for code in 0u64..(1 << self.lay.bits) {
            for b in 0..self.lay.bits {
                self.ctx[b] = 1 + (code >> b & 1) as u8;
            }
            if !self.outer.iter().all(|&(a, b)| self.edge_ok(a, b)) {
                all_contexts = false;
                continue;
            }
            self.valid += 1;
            if let Some(f) = self.visitor.as_mut() {
                f(&self.labels, &self.ctx);
            }
            match pol {
                Some(p) => {
                    self.realizable.set(p);
                    let cnt = self.labels.iter().filter(|&&l| l == p).count();
                    self.count_range = Some(self.count_range.map_or((cnt, cnt), |(lo, hi)| (lo.min(cnt), hi.max(cnt))));
                }
                None => {
                    self.conforming_all = false;
                    if self.counterexample.is_none() {
                        self.counterexample = Some(Counterexample { labels: self.labels.clone(), context: self.ctx.clone() });
                    }
                }
            }
        }
        if all_contexts {
            if let Some(p) = pol {
                self.robust.set(p);
            }
        }
    }

    fn finish(self) -> GadgetCertificate {
        let vacuous = self.valid == 0;
        GadgetCertificate {
            vertices: self.lay.n,
            boundary_bits: self.lay.bits,
            enumerated_labelings: 1u128 << (self.lay.n + self.lay.bits),
            valid_labelings: self.valid,
            vacuous,
            all_conforming: !vacuous && self.conforming_all,
            both_polarities_realizable: self.realizable.both(),
            realizable: self.realizable,
            robust: self.robust,
            black_label_count: self.count_range,
            counterexample: self.counterexample,
        }
    }
}
