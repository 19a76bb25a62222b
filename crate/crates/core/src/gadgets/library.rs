//! Reconstructed gadgets, each with a labeling template for the polarity "black = 1".
//!
//! Building blocks:
//! - link: `K4` minus an edge (closed twins `w1, w2`, degree-2 vertices `u1, u2`) joining
//!   two endpoints through `u1` and `u2`. Its valid labelings force the endpoints equal and
//!   `u1, u2` opposite to them.
//! - ring: vertices joined cyclically by links. Each member keeps one free edge and both its
//!   internal neighbours carry the opposite label.
//! - skew block: a 7-vertex piece hung from a ring member that puts five of its vertices on
//!   the member's label and two on the other, whatever the polarity.

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

use super::{ForcingContract, LabelMode, PortSpec};

/// A certified-by-construction fragment plus a valid labeling template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub graph: Graph,
    pub contract: ForcingContract,
    /// Labels in `{1, 2}` with the black set on 1; valid under every context.
    pub template: Vec<u8>,
}

impl Gadget {
    pub fn port(&self, name: &str) -> Option<usize> {
        self.contract.ports.iter().find(|p| p.name == name).map(|p| p.vertex)
    }

    /// Template for the chosen black label.
    pub fn labels(&self, black_label: u8) -> Vec<u8> {
        self.template.iter().map(|&l| if black_label == 1 { l } else { 3 - l }).collect()
    }
}

/// Edges of the skew block; vertex 4 attaches to the host.
pub const SKEW_BLOCK_EDGES: [(usize, usize); 10] = [(0, 1), (0, 3), (0, 5), (1, 2), (1, 5), (2, 3), (2, 6), (3, 6), (4, 5), (4, 6)];

/// Skew block labels for a host with label `host`.
pub fn skew_block_labels(host: u8) -> [u8; 7] {
    let o = 3 - host;
    [o, host, o, host, host, host, host]
}

/// Labels for a triangle whose vertex `i` has one external neighbour labeled `ext[i]`,
/// each external vertex having its other two neighbours on the opposite label.
/// Returns the first valid choice, or `None` when the external labels are all equal.
pub fn attach_labels(ext: [u8; 3]) -> Option<[u8; 3]> {
    let ones = |l: u8| usize::from(l == 1);
    (0..8u8).map(|m| [1 + (m >> 2 & 1), 1 + (m >> 1 & 1), 1 + (m & 1)]).find(|t| {
        let inner: Vec<usize> = (0..3).map(|i| ones(ext[i]) + (0..3).filter(|&j| j != i).map(|j| ones(t[j])).sum::<usize>()).collect();
        let outer: Vec<usize> = (0..3).map(|i| 2 * usize::from(ext[i] == 2) + ones(t[i])).collect();
        inner[0] != inner[1] && inner[1] != inner[2] && inner[0] != inner[2] && (0..3).all(|i| inner[i] != outer[i])
    })
}

struct Draft {
    b: GraphBuilder,
    labels: Vec<u8>,
}

impl Draft {
    fn new() -> Draft {
        Draft { b: GraphBuilder::new(0), labels: Vec::new() }
    }

    fn vertex(&mut self, tag: impl Into<String>, label: u8) -> usize {
        self.labels.push(label);
        self.b.add_tagged(tag)
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.b.add_edge(u, v).expect("gadget edges are distinct");
    }

    /// Link from `a` to `b` (possibly equal); returns `[u1, u2, w1, w2]`.
    fn link(&mut self, a: usize, b: usize, tag: &str) -> [usize; 4] {
        let c = self.labels[a];
        let u1 = self.vertex(format!("{tag}:u1"), 3 - c);
        let u2 = self.vertex(format!("{tag}:u2"), 3 - c);
        let w1 = self.vertex(format!("{tag}:w1"), c);
        let w2 = self.vertex(format!("{tag}:w2"), 3 - c);
        for (x, y) in [(a, u1), (b, u2), (u1, w1), (u1, w2), (u2, w1), (u2, w2), (w1, w2)] {
            self.edge(x, y);
        }
        [u1, u2, w1, w2]
    }

    fn ring(&mut self, members: &[usize], tag: &str) -> Vec<[usize; 4]> {
        let r = members.len();
        (0..r).map(|i| self.link(members[i], members[(i + 1) % r], &format!("{tag}:link{}", i + 1))).collect()
    }

    fn finish(self, name: &str, ports: Vec<PortSpec>, black: Vec<usize>, white: Vec<usize>) -> Gadget {
        let contract = ForcingContract { ports, black, white, mode: LabelMode::Sigma2, host_degree: 3 };
        Gadget { name: name.to_string(), graph: self.b.build(), contract, template: self.labels }
    }
}

fn port(name: &str, vertex: usize, internal_degree: usize) -> PortSpec {
    PortSpec { name: name.to_string(), vertex, internal_degree }
}

fn opposite_vertices(links: &[[usize; 4]]) -> Vec<usize> {
    links.iter().flat_map(|l| [l[0], l[1]]).collect()
}

/// Degree-completion gadget: apex `t` on a link whose both ends are `t`. Five vertices.
pub fn t_gadget() -> Gadget {
    let mut d = Draft::new();
    let t = d.vertex("t", 1);
    let l = d.link(t, t, "link");
    d.finish("t-gadget", vec![port("t", t, 2)], vec![t], vec![l[0], l[1]])
}

/// A single link between two endpoints of internal degree 1.
pub fn s_link() -> Gadget {
    let mut d = Draft::new();
    let a = d.vertex("end1", 1);
    let b = d.vertex("end2", 1);
    let l = d.link(a, b, "link");
    d.finish("s-link", vec![port("end1", a, 1), port("end2", b, 1)], vec![a, b], vec![l[0], l[1]])
}

/// Variable gadget with ports `pos1..` (black, same label as `x`) and `neg1..` (white).
///
/// `x`, `x0` and the positive ports form one ring, `notx` and the negative ports another;
/// an odd triangle on `x`, `notx`, `x0` makes the two rings take different labels.
pub fn variable_gadget(num_pos: usize, num_neg: usize) -> Result<Gadget> {
    let core = attach_labels([1, 2, 1]).ok_or_else(|| Error::Gadget("core triangle has no valid labeling".into()))?;
    let mut d = Draft::new();
    let x = d.vertex("x", 1);
    let x0 = d.vertex("x0", 1);
    let pos: Vec<usize> = (1..=num_pos).map(|i| d.vertex(format!("pos{i}"), 1)).collect();
    let nx = d.vertex("notx", 2);
    let neg: Vec<usize> = (1..=num_neg).map(|i| d.vertex(format!("neg{i}"), 2)).collect();
    let black: Vec<usize> = [x, x0].into_iter().chain(pos.iter().copied()).collect();
    let white: Vec<usize> = std::iter::once(nx).chain(neg.iter().copied()).collect();
    d.ring(&black, "black");
    d.ring(&white, "white");
    let c: Vec<usize> = (0..3).map(|i| d.vertex(format!("core{}", i + 1), core[i])).collect();
    for (i, ext) in [x, nx, x0].into_iter().enumerate() {
        d.edge(c[i], ext);
    }
    d.edge(c[0], c[1]);
    d.edge(c[1], c[2]);
    d.edge(c[0], c[2]);
    let ports = pos
        .iter()
        .enumerate()
        .map(|(i, &v)| port(&format!("pos{}", i + 1), v, 2))
        .chain(neg.iter().enumerate().map(|(i, &v)| port(&format!("neg{}", i + 1), v, 2)))
        .collect();
    Ok(d.finish(&format!("variable-gadget-{num_pos}-{num_neg}"), ports, black, white))
}

/// Three-port gadget for the minimum-part reduction: ring `p1, p2, p3, q` with a skew block on `q`.
///
/// Every valid labeling puts 13 vertices on the ports' label and 14 on the other.
pub fn theta_gadget() -> Gadget {
    let mut d = Draft::new();
    let p: Vec<usize> = (1..=3).map(|i| d.vertex(format!("p{i}"), 1)).collect();
    let q = d.vertex("q", 1);
    let members = [p[0], p[1], p[2], q];
    let links = d.ring(&members, "ring");
    let bl = skew_block_labels(1);
    let s: Vec<usize> = (0..7).map(|i| d.vertex(format!("skew{i}"), bl[i])).collect();
    for (a, b) in SKEW_BLOCK_EDGES {
        d.edge(s[a], s[b]);
    }
    d.edge(q, s[4]);
    let ports = (0..3).map(|i| port(&format!("p{}", i + 1), p[i], 2)).collect();
    d.finish("theta-gadget", ports, members.to_vec(), opposite_vertices(&links))
}
