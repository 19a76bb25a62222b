//! One PASS/FAIL line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{chromatic_number, exists_labeling, exists_labeling_with_prefix, for_each_labeling, naive_number, Kind};
use sigma_forge::gadgets::{for_each_valid, t_gadget, variable_gadget, GadgetBundle};
use sigma_forge::generate::{all_graphs, connected_regular_graphs, random_graph};
use sigma_forge::graph::families;
use sigma_forge::labeling::{is_lucky_labeling, is_sigma_coloring};
use sigma_forge::reductions::*;
use sigma_forge::sat::*;
use sigma_forge::solver::{decide_two, lucky_number, min_part_size, sigma_number, Mode, DEFAULT_BUDGET};
use sigma_forge::{Graph, GraphBuilder, Labeling, VertexSetPartition};

const B: u64 = DEFAULT_BUDGET;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn value(r: sigma_forge::Result<sigma_forge::solver::SolveResult>) -> Result<Option<usize>, String> {
    let r = r.map_err(|e| e.to_string())?;
    ensure(r.exhausted, || "search budget exhausted".into())?;
    Ok(r.value)
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let t = Instant::now();
    let out = f();
    ensure(t.elapsed() < limit, || format!("{what} took {:?}", t.elapsed()))?;
    Ok(out)
}

fn criterion_1() -> Outcome {
    let second = Duration::from_secs(1);
    for n in [3, 5, 7] {
        let v = timed(second, &format!("lucky C{n}"), || value(lucky_number(&families::cycle(n), 8, B)))??;
        ensure(v == Some(3), || format!("lucky number of C{n} is {v:?}"))?;
    }
    let v = timed(second, "sigma P3", || value(sigma_number(&families::path(3), 8, B)))??;
    ensure(v == Some(1), || format!("sigma number of P3 is {v:?}"))?;
    let mut checked = 0;
    for n in 2..=7 {
        for g in all_graphs(n) {
            let distinct = g.edge_count() > 0 && g.edges().iter().all(|&(u, v)| g.neighbors(u).len() != g.neighbors(v).len());
            if !distinct {
                continue;
            }
            let v = timed(second, "sigma on a degree-distinct graph", || value(sigma_number(&g, 8, B)))??;
            ensure(v == Some(1), || format!("{g:?} has sigma number {v:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("C3/C5/C7 lucky 3, P3 sigma 1, {checked} degree-distinct graphs sigma 1"))
}

fn criterion_2() -> Outcome {
    let mut graphs: Vec<Graph> = (1..=8).flat_map(all_graphs).collect();
    let exhaustive = graphs.len();
    for seed in 0..200u64 {
        let n = 9 + (seed as usize % 6);
        let p = [0.2, 0.35, 0.5][seed as usize % 3];
        graphs.push(random_graph(n, p, 1000 + seed));
    }
    let t = Instant::now();
    for g in &graphs {
        let n = g.vertex_count();
        let s = value(sigma_number(g, n, B))?;
        let l = value(lucky_number(g, n + 1, B))?;
        let (os, ol) = (naive_number(g, Kind::Sigma, n), naive_number(g, Kind::Lucky, n + 1));
        ensure(s == os, || format!("sigma {s:?} vs oracle {os:?} on {g:?}"))?;
        ensure(l == ol, || format!("lucky {l:?} vs oracle {ol:?} on {g:?}"))?;
    }
    ensure(t.elapsed() < Duration::from_secs(600), || format!("took {:?}", t.elapsed()))?;
    Ok(format!("{exhaustive} graphs on at most 8 vertices and 200 random graphs on 9 to 14 vertices agree with the oracle"))
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for n in 1..=10 {
        for g in connected_regular_graphs(n) {
            let s = value(decide_two(&g, Mode::Sigma, B))?;
            let l = value(decide_two(&g, Mode::Lucky, B))?;
            ensure(s.is_some() == l.is_some(), || format!("sigma {s:?} vs lucky {l:?} on {g:?}"))?;
            ensure((exists_labeling(&g, Kind::Sigma, 2).is_some() || exists_labeling(&g, Kind::Sigma, 1).is_some()) == s.is_some(), || {
                format!("solver and oracle disagree on {g:?}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} connected regular graphs on at most 10 vertices"))
}

fn criterion_4() -> Outcome {
    let mut graphs: Vec<Graph> = (1..=7).flat_map(all_graphs).collect();
    graphs.extend((1..=10).flat_map(connected_regular_graphs));
    graphs.extend((0..100u64).map(|s| random_graph(8 + (s as usize % 3), 0.4, 5000 + s)));
    for g in &graphs {
        let chi = chromatic_number(g);
        let s = value(sigma_number(g, chi.max(1), B))?;
        ensure(s.is_some(), || format!("sigma number exceeds chromatic number {chi} on {g:?}"))?;
    }
    Ok(format!("sigma <= chi on {} graphs", graphs.len()))
}

fn shipped_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gadgets")
}

fn criterion_5() -> Outcome {
    let mut names = Vec::new();
    for entry in std::fs::read_dir(shipped_dir()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let b = GadgetBundle::load(&path).map_err(|e| e.to_string())?;
        let cert = b.recertify().map_err(|e| e.to_string())?;
        ensure(cert == b.certificate, || format!("{} certificate differs from the stored one", b.name))?;
        ensure(cert.all_conforming && cert.both_polarities_realizable, || format!("{} is not certified", b.name))?;
        names.push(b.name);
    }
    ensure(!names.is_empty(), || "no shipped bundles".into())?;

    for (p, q) in [(1, 1), (2, 2), (3, 0), (1, 2)] {
        let g = variable_gadget(p, q).map_err(|e| e.to_string())?;
        let x = g.graph.vertices_with_role("x")[0];
        let nx = g.graph.vertices_with_role("notx")[0];
        let mut bad = 0;
        let mut seen = 0;
        for_each_valid(&g.graph, &g.contract, |l, _| {
            seen += 1;
            if l[x] == l[nx] {
                bad += 1;
            }
        })
        .map_err(|e| e.to_string())?;
        ensure(seen > 0 && bad == 0, || format!("fact one fails on H({p},{q}): {bad} of {seen}"))?;
    }

    let t = t_gadget();
    let mut b = GraphBuilder::new(0);
    let tri = [b.add_vertex(), b.add_vertex(), b.add_vertex()];
    for (u, v) in [(0, 1), (1, 2), (0, 2)] {
        b.add_edge(tri[u], tri[v]).map_err(|e| e.to_string())?;
    }
    let mut ports = [0; 3];
    for (i, &c) in tri.iter().enumerate() {
        ports[i] = b.embed(&t.graph, "t:");
        b.add_edge(c, ports[i]).map_err(|e| e.to_string())?;
    }
    let g = b.build();
    let mut patterns = BTreeSet::new();
    for_each_labeling(&g, Kind::Lucky, 2, |l| {
        patterns.insert(ports.map(|p| l[p]));
    });
    ensure(patterns.len() == 6 && patterns.iter().all(|p| !(p[0] == p[1] && p[1] == p[2])), || {
        format!("clause port patterns {patterns:?}")
    })?;
    Ok(format!("{} bundles recertified, fact one on 4 variable gadgets, fact three on the clause assembly", names.len()))
}

/// Canonical NAE formulas on exactly `n` variables with `m` clauses, up to variable renaming,
/// per-variable polarity flips, literal order and clause order.
fn canonical_formulas(n: usize, m: usize) -> Vec<Vec<[i64; 3]>> {
    let lits: Vec<i64> = (1..=n as i64).flat_map(|v| [v, -v]).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut clause = Vec::new();
    for a in &lits {
        for b in &lits {
            for c in &lits {
                clause.push([*a, *b, *c]);
            }
        }
    }
    let mut out = Vec::new();
    let mut choose = |cls: Vec<[i64; 3]>| {
        let used: BTreeSet<i64> = cls.iter().flatten().map(|l| l.abs()).collect();
        if used.len() != n {
            return;
        }
        let mut best: Option<Vec<[i64; 3]>> = None;
        for perm in &perms {
            for flips in 0..1u32 << n {
                let mut img: Vec<[i64; 3]> = cls
                    .iter()
                    .map(|c| {
                        let mut c = c.map(|l| {
                            let v = l.unsigned_abs() as usize - 1;
                            let s = if flips >> v & 1 == 1 { -l.signum() } else { l.signum() };
                            s * (perm[v] as i64 + 1)
                        });
                        c.sort();
                        c
                    })
                    .collect();
                img.sort();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
        let best = best.unwrap();
        if seen.insert(best.clone()) {
            out.push(best);
        }
    };
    if m == 1 {
        for c in &clause {
            choose(vec![*c]);
        }
    } else {
        for (i, c) in clause.iter().enumerate() {
            for d in &clause[i..] {
                choose(vec![*c, *d]);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn small_nae_formulas() -> Vec<Formula> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=2 {
            for cls in canonical_formulas(n, m) {
                out.push(Formula::from_ints(n, &cls, Flavor::Nae).unwrap());
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let formulas = small_nae_formulas();
    let mut conclusive = 0;
    let mut sat_count = 0;
    for f in &formulas {
        let r = build_nae_reduction(f).map_err(|e| e.to_string())?;
        ensure(r.graph.is_k_regular(3), || format!("{f}: reduced graph is not cubic"))?;
        let s = decide_two(&r.graph, Mode::Lucky, B).map_err(|e| e.to_string())?;
        if !s.exhausted {
            continue;
        }
        conclusive += 1;
        let sat = nae_satisfiable(f).map_err(|e| e.to_string())?;
        ensure(s.value.is_some() == sat.is_some(), || format!("{f}: two labels {:?} but NAE {:?}", s.value, sat.is_some()))?;
        if let Some(a) = sat {
            sat_count += 1;
            let lab = nae_coloring_from_assignment(&r, &a).map_err(|e| e.to_string())?;
            ensure(is_lucky_labeling(&r.graph, &lab).unwrap_or(false), || format!("{f}: constructed labeling invalid"))?;
            let w = nae_assignment_from_coloring(&r, s.witness.as_ref().unwrap()).map_err(|e| e.to_string())?;
            ensure(is_nae_satisfying(f, &w), || format!("{f}: extracted assignment fails"))?;
        }
    }
    let total = formulas.len();
    ensure(conclusive * 10 >= total * 9, || format!("only {conclusive} of {total} conclusive"))?;
    Ok(format!("{conclusive} of {total} formulas conclusive ({sat_count} satisfiable), labeling and extraction verified"))
}

fn proper_coloring(g: &Graph, k: usize) -> Option<VertexSetPartition> {
    let n = g.vertex_count();
    let mut col = vec![0; n];
    fn go(i: usize, g: &Graph, k: usize, col: &mut Vec<usize>) -> bool {
        if i == col.len() {
            return true;
        }
        for c in 1..=k {
            if g.neighbors(i).iter().filter(|&&w| w < i).all(|&w| col[w] != c) {
                col[i] = c;
                if go(i + 1, g, k, col) {
                    return true;
                }
            }
        }
        false
    }
    go(0, g, k, &mut col).then(|| VertexSetPartition::new(k, col).unwrap())
}

fn hubs_first(r: &ReductionOutput) -> (Graph, Vec<usize>) {
    let mut order = r.hubs().to_vec();
    for (a, ports) in &r.var_ports {
        order.extend(ports);
        order.extend(&r.clause_vertices[a]);
    }
    let mut perm = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        perm[v] = i;
    }
    (r.graph.permuted(&perm).unwrap(), perm)
}

fn criterion_7() -> Outcome {
    let sources = [families::cycle(3), families::cycle(4), families::cycle(5), families::cycle(6), families::complete_bipartite(4, 4)];
    let mut built = 0;
    for g in &sources {
        for k in [2, 3] {
            let Some(c) = proper_coloring(g, k) else { continue };
            let r = build_sigma_k_reduction(g, k).map_err(|e| e.to_string())?;
            let p = sigma_k_coloring_from_proper_coloring(&r, &c).map_err(|e| e.to_string())?;
            ensure(is_sigma_coloring(&r.graph, &p).unwrap_or(false), || format!("part a: constructed coloring invalid for k={k}"))?;
            built += 1;
        }
    }

    let mut partitions = 0;
    for n in 3..=6 {
        let r = build_sigma_k_reduction(&families::cycle(n), 2).map_err(|e| e.to_string())?;
        let (h, perm) = hubs_first(&r);
        let mut all = Vec::new();
        for_each_labeling(&h, Kind::Sigma, 2, |l| all.push(l.to_vec()));
        let bip = n % 2 == 0;
        ensure(all.is_empty() != bip, || format!("part b: C{n} gives {} partitions", all.len()))?;
        let s = value(sigma_number(&r.graph, 2, B))?;
        ensure(s.is_some() == bip, || format!("part b: solver says {s:?} on C{n}"))?;
        let hub = perm[r.hubs()[0]];
        for l in &all {
            ensure(r.var_ports.values().all(|p| l[perm[p[0]]] != l[hub]), || format!("part c: hub shares a part with some x on C{n}"))?;
        }
        partitions += all.len();
    }

    for g in [families::cycle(3), families::cycle(4), families::cycle(5), families::complete_bipartite(3, 3)] {
        let r = build_sigma_k_reduction(&g, 3).map_err(|e| e.to_string())?;
        let (h, _) = hubs_first(&r);
        for c in 0..3 {
            ensure(exists_labeling_with_prefix(&h, Kind::Sigma, 3, &[c, c]).is_none(), || "part c: two hubs share a part at k=3".into())?;
        }
    }
    Ok(format!("a: {built} constructions valid; b: C3..C6 at k=2 match bipartiteness; c: {partitions} partitions checked, hubs distinct at k=3"))
}

fn criterion_8() -> Outcome {
    let wide = theta_bound(3, 27, 16).map_err(|e| e.to_string())?;
    ensure(wide == 62, || format!("bound for t=27, f=16 is {wide}"))?;

    let f = Formula::from_ints(3, &[[1, 2, 3], [1, 2, 3], [1, 2, 3]], Flavor::OneInThree).unwrap();
    let r = build_1in3_reduction(&f, false).map_err(|e| e.to_string())?.ok_or("gate rejected a NAE-satisfiable formula")?;
    let thr = theta_threshold(&r).map_err(|e| e.to_string())?;
    let m = min_part_size(&r.graph, B).map_err(|e| e.to_string())?;
    ensure(m.exhausted && m.min_size == thr, || format!("m=3: min part {} vs threshold {thr}", m.min_size))?;

    let f = Formula::from_ints(6, &[[1, 2, 3], [1, 2, 4], [1, 5, 6], [2, 5, 6], [3, 4, 5], [3, 4, 6]], Flavor::OneInThree).unwrap();
    ensure(one_in_three_satisfiable(&f).unwrap().is_none(), || "m=6 instance is 1-in-3 satisfiable".into())?;
    let r6 = build_1in3_reduction(&f, false).map_err(|e| e.to_string())?.ok_or("gate rejected a NAE-satisfiable formula")?;
    let thr6 = theta_threshold(&r6).map_err(|e| e.to_string())?;
    let m6 = min_part_size(&r6.graph, B).map_err(|e| e.to_string())?;
    ensure(m6.exhausted && m6.min_size > thr6, || format!("m=6: min part {} vs threshold {thr6}", m6.min_size))?;
    Ok(format!("m=3: min part {} = threshold {thr}; m=6: min part {} > threshold {thr6}", m.min_size, m6.min_size))
}

fn criterion_9() -> Outcome {
    let formulas = small_nae_formulas();
    for f in &formulas {
        let r = build_maxcut_reduction(f).map_err(|e| e.to_string())?;
        let cut = max_cut_weighted(&r.graph, &r.weights).map_err(|e| e.to_string())?.size;
        let sat = nae_satisfiable(f).map_err(|e| e.to_string())?;
        ensure(cut <= r.threshold, || format!("{f}: cut {cut} above threshold {}", r.threshold))?;
        ensure((cut == r.threshold) == sat.is_some(), || format!("{f}: cut {cut}, threshold {}, NAE {}", r.threshold, sat.is_some()))?;
        if let Some(a) = sat {
            let side = maxcut_side_from_assignment(&r, &a).map_err(|e| e.to_string())?;
            ensure(cut_value(&r.graph, &r.weights, &side) == r.threshold, || format!("{f}: constructed cut misses the threshold"))?;
        }
    }
    Ok(format!("{} formulas with at most 2 clauses", formulas.len()))
}

fn criterion_10() -> Outcome {
    for k in 1..=3 {
        let g = build_remark2_graph(k).map_err(|e| e.to_string())?;
        let p = remark2_coloring(k).map_err(|e| e.to_string())?;
        ensure(is_sigma_coloring(&g, &p).unwrap_or(false), || format!("coloring for k={k} invalid"))?;
    }
    let g = build_remark2_graph(4).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let one = value(lucky_number(&g, 1, B))?;
    ensure(one.is_none(), || "one label suffices for k=4".into())?;
    let ones = Labeling::new(1, vec![1; g.vertex_count()]).unwrap();
    ensure(!is_lucky_labeling(&g, &ones).unwrap_or(true), || "all-one labeling is lucky for k=4".into())?;
    ensure(t.elapsed() < Duration::from_secs(300), || format!("took {:?}", t.elapsed()))?;
    Ok(format!("colorings valid for k=1..3; lucky number of the k=4 graph ({} vertices) is at least 2", g.vertex_count()))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (id, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2}: PASS ({secs:.1}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL ({secs:.1}s) {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
