//! Reference oracles that share no code with the library's search.
#![allow(dead_code)]

use sigma_forge::Graph;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Sigma,
    Lucky,
}

fn edge_ok(g: &Graph, kind: Kind, lab: &[usize], k: usize, u: usize, v: usize) -> bool {
    match kind {
        Kind::Lucky => {
            let s = |x: usize| g.neighbors(x).iter().map(|&w| lab[w] + 1).sum::<usize>();
            s(u) != s(v)
        }
        Kind::Sigma => {
            let c = |x: usize| {
                let mut c = vec![0; k];
                for &w in g.neighbors(x) {
                    c[lab[w]] += 1;
                }
                c
            };
            c(u) != c(v)
        }
    }
}

/// Every edge checked at the first vertex index where its whole neighbourhood is labeled.
fn checkpoints(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.vertex_count();
    let mut at = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        let last = g.neighbors(u).iter().chain(g.neighbors(v)).copied().max().unwrap();
        at[last].push((u, v));
    }
    at
}

/// Whether some labeling with labels `0..k` satisfies every edge (plain enumeration with edge checks).
pub fn exists_labeling(g: &Graph, kind: Kind, k: usize) -> Option<Vec<usize>> {
    exists_labeling_with_prefix(g, kind, k, &[])
}

/// Like [`exists_labeling`], with the first `prefix.len()` vertices pinned to the given labels.
pub fn exists_labeling_with_prefix(g: &Graph, kind: Kind, k: usize, prefix: &[usize]) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let at = checkpoints(g);
    let mut lab = vec![0; n];
    fn go(i: usize, g: &Graph, kind: Kind, k: usize, at: &[Vec<(usize, usize)>], prefix: &[usize], lab: &mut Vec<usize>) -> bool {
        if i == lab.len() {
            return true;
        }
        let choices = if i < prefix.len() { prefix[i]..prefix[i] + 1 } else { 0..k };
        for l in choices {
            lab[i] = l;
            if at[i].iter().all(|&(u, v)| edge_ok(g, kind, lab, k, u, v)) && go(i + 1, g, kind, k, at, prefix, lab) {
                return true;
            }
        }
        false
    }
    if go(0, g, kind, k, &at, prefix, &mut lab) {
        Some(lab)
    } else {
        None
    }
}

pub fn naive_number(g: &Graph, kind: Kind, max_k: usize) -> Option<usize> {
    (1..=max_k).find(|&k| exists_labeling(g, kind, k).is_some())
}

/// All valid labelings with labels `0..k`.
pub fn all_labelings(g: &Graph, kind: Kind, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_labeling(g, kind, k, |l| out.push(l.to_vec()));
    out
}

/// Streams every valid labeling with labels `0..k`.
pub fn for_each_labeling(g: &Graph, kind: Kind, k: usize, mut visit: impl FnMut(&[usize])) {
    let n = g.vertex_count();
    let at = checkpoints(g);
    let mut lab = vec![0; n];
    fn go(i: usize, g: &Graph, kind: Kind, k: usize, at: &[Vec<(usize, usize)>], lab: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if i == lab.len() {
            visit(lab);
            return;
        }
        for l in 0..k {
            lab[i] = l;
            if at[i].iter().all(|&(u, v)| edge_ok(g, kind, lab, k, u, v)) {
                go(i + 1, g, kind, k, at, lab, visit);
            }
        }
    }
    go(0, g, kind, k, &at, &mut lab, &mut visit);
}

pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&k| {
            let mut col = vec![usize::MAX; n];
            fn go(i: usize, g: &Graph, k: usize, col: &mut Vec<usize>) -> bool {
                if i == col.len() {
                    return true;
                }
                for c in 0..k {
                    if g.neighbors(i).iter().all(|&w| col[w] != c) {
                        col[i] = c;
                        if go(i + 1, g, k, col) {
                            return true;
                        }
                        col[i] = usize::MAX;
                    }
                }
                false
            }
            go(0, g, k, &mut col)
        })
        .unwrap()
}

/// Smallest part over all valid two-part sigma colorings (2^n enumeration).
pub fn brute_min_part(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    assert!(n <= 22);
    let mut best = None;
    for mask in 0u32..(1 << n) {
        let lab: Vec<usize> = (0..n).map(|v| (mask >> v & 1) as usize).collect();
        if g.edges().iter().all(|&(u, v)| edge_ok(g, Kind::Sigma, &lab, 2, u, v)) {
            let ones = mask.count_ones() as usize;
            let m = ones.min(n - ones);
            best = Some(best.map_or(m, |b: usize| b.min(m)));
        }
    }
    best
}
