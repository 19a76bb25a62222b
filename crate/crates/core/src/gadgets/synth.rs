use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::{certify, ForcingContract};

/// Largest vertex count searched exhaustively; larger sizes use seeded random sampling.
pub const EXHAUSTIVE_LIMIT: usize = 14;

/// Searches for a connected fragment satisfying `contract`.
///
/// Ports must be vertices `0..ports.len()`. Other vertices get degree `host_degree`.
/// Candidates are visited by vertex count, then lexicographically by sorted edge list;
/// the first certified one is returned. `budget` caps the number of candidates examined.
pub fn synthesize(contract: &ForcingContract, max_vertices: usize, budget: u64) -> Option<Graph> {
    if contract.contradiction().is_some() {
        return None;
    }
    let p = contract.ports.len();
    if contract.ports.iter().enumerate().any(|(i, s)| s.vertex != i) {
        return None;
    }
    let min_n = contract.black.iter().chain(&contract.white).map(|&v| v + 1).max().unwrap_or(0).max(p).max(1);
    let mut left = budget;
    for n in min_n..=max_vertices {
        let mut deg: Vec<usize> = vec![contract.host_degree; n];
        for s in &contract.ports {
            deg[s.vertex] = s.internal_degree;
        }
        if deg.iter().sum::<usize>() % 2 == 1 || deg.iter().any(|&d| d >= n && n > 1) {
            continue;
        }
        let found = if n <= EXHAUSTIVE_LIMIT { exhaustive(contract, &deg, &mut left) } else { sampled(contract, &deg, &mut left, n as u64) };
        if found.is_some() || left == 0 {
            return found;
        }
    }
    None
}

fn accept(contract: &ForcingContract, g: &Graph, left: &mut u64) -> Option<bool> {
    if *left == 0 {
        return None;
    }
    *left -= 1;
    if !g.is_connected() {
        return Some(false);
    }
    Some(certify(g, contract).is_ok_and(|c| c.certified()))
}

fn exhaustive(contract: &ForcingContract, deg: &[usize], left: &mut u64) -> Option<Graph> {
    let n = deg.len();
    let mut rem = deg.to_vec();
    let mut edges = Vec::new();
    let mut out = None;
    fn rec(u: usize, n: usize, rem: &mut [usize], edges: &mut Vec<(usize, usize)>, contract: &ForcingContract, left: &mut u64, out: &mut Option<Graph>) -> bool {
        if u == n {
            let g = Graph::from_edges(n, edges).expect("simple by construction");
            return match accept(contract, &g, left) {
                None => true,
                Some(true) => {
                    *out = Some(g);
                    true
                }
                Some(false) => false,
            };
        }
        let need = rem[u];
        let cands: Vec<usize> = (u + 1..n).filter(|&v| rem[v] > 0).collect();
        if need > cands.len() {
            return false;
        }
        // combinations of `need` candidates in lexicographic order
        let mut idx: Vec<usize> = (0..need).collect();
        loop {
            for &i in &idx {
                rem[cands[i]] -= 1;
                edges.push((u, cands[i]));
            }
            rem[u] = 0;
            let stop = rec(u + 1, n, rem, edges, contract, left, out);
            rem[u] = need;
            for &i in &idx {
                rem[cands[i]] += 1;
                edges.pop();
            }
            if stop {
                return true;
            }
            let mut k = need;
            loop {
                if k == 0 {
                    return false;
                }
                k -= 1;
                if idx[k] < cands.len() - need + k {
                    break;
                }
            }
            idx[k] += 1;
            for j in k + 1..need {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    rec(0, n, &mut rem, &mut edges, contract, left, &mut out);
    out
}

fn sampled(contract: &ForcingContract, deg: &[usize], left: &mut u64, seed: u64) -> Option<Graph> {
    let n = deg.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ seed);
    while *left > 0 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, deg[v])).collect();
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        edges.sort_unstable();
        if edges.iter().any(|&(a, b)| a == b) || edges.windows(2).any(|w| w[0] == w[1]) {
            *left -= 1;
            continue;
        }
        let g = Graph::from_edges(n, &edges).expect("checked simple");
        if accept(contract, &g, left) == Some(true) {
            return Some(g);
        }
    }
    None
}
