use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;
use sigma_forge::gadgets::{certify as certify_fragment, write_shipped_bundles, GadgetBundle};
use sigma_forge::labeling::{is_lucky_labeling, is_sigma_coloring};
use sigma_forge::reductions::{
    build_1in3_reduction, build_maxcut_reduction, build_nae_reduction, build_remark2_graph, build_sigma_k_reduction,
    maxcut_side_from_assignment, nae_assignment_from_coloring, nae_coloring_from_assignment, remark2_coloring,
    theta_coloring_from_assignment, theta_threshold,
};
use sigma_forge::sat::{
    is_nae_satisfying, is_one_in_three_satisfying, max_cut, max_cut_weighted, nae_satisfiable, one_in_three_satisfiable,
    parse_dimacs, Flavor, Formula,
};
use sigma_forge::solver::{decide_two, lucky_number, min_part_size, sigma_number, Mode};
use sigma_forge::{parse_graph, serialize_graph, Error, Graph};

use crate::report::{sha256_hex, RunReport, Verdict};
use crate::{ModeArg, OracleArg, ReductionArg};

fn load_graph(r: &mut RunReport, name: &str, path: &Path) -> Result<Graph> {
    let text = r.read_input(name, path)?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_formula(r: &mut RunReport, path: &Path, flavor: Flavor) -> Result<Formula> {
    let text = r.read_input("formula", path)?;
    parse_dimacs(&text, flavor).with_context(|| format!("parsing {}", path.display()))
}

fn exhausted(done: bool) -> Verdict {
    if done {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    }
}

pub fn solve(path: &Path, mode: ModeArg, max_k: usize, budget: u64) -> Result<RunReport> {
    let mut r = RunReport::new("solve");
    r.budgets.insert("nodes".into(), budget);
    let g = load_graph(&mut r, "graph", path)?;
    let (mode, res) = match mode {
        ModeArg::Sigma => (Mode::Sigma, sigma_number(&g, max_k, budget)?),
        ModeArg::Lucky => (Mode::Lucky, lucky_number(&g, max_k, budget)?),
    };
    r.nodes("solve", res.nodes_explored);
    r.require(exhausted(res.exhausted), "search budget");
    if let Some(w) = &res.witness {
        let ok = match mode {
            Mode::Sigma => is_sigma_coloring(&g, &w.to_partition())?,
            Mode::Lucky => is_lucky_labeling(&g, w)?,
        };
        r.require(Verdict::check(ok), "witness verification");
    }
    r.note(match res.value {
        Some(v) => format!("{mode:?} number = {v}"),
        None if res.exhausted => format!("no valid labeling with at most {max_k} labels"),
        None => "budget exhausted".to_string(),
    });
    r.set("mode", mode);
    r.set("max_k", max_k);
    r.set("vertices", g.vertex_count());
    r.set("edges", g.edge_count());
    r.set("solve", &res);
    Ok(r)
}

pub fn minpart(path: &Path, budget: u64) -> Result<RunReport> {
    let mut r = RunReport::new("minpart");
    r.budgets.insert("nodes".into(), budget);
    let g = load_graph(&mut r, "graph", path)?;
    let res = min_part_size(&g, budget)?;
    r.nodes("minpart", res.nodes_explored);
    r.require(exhausted(res.exhausted), "search budget");
    let sizes = res.witness.part_sizes();
    let ok = is_sigma_coloring(&g, &res.witness)? && sizes.iter().copied().min() == Some(res.min_size);
    r.require(Verdict::check(ok), "witness verification");
    r.note(format!("smallest part = {}{}", res.min_size, if res.exhausted { "" } else { " (upper bound)" }));
    r.set("minpart", &res);
    Ok(r)
}

fn write_graph(r: &mut RunReport, g: &Graph, output: Option<&Path>) -> Result<()> {
    let text = serialize_graph(g);
    r.set("vertices", g.vertex_count());
    r.set("edges", g.edge_count());
    r.set("graph_sha256", sha256_hex(text.as_bytes()));
    if let Some(p) = output {
        std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
        r.set("output", p.display().to_string());
    }
    Ok(())
}

fn formula_flavor(reduction: ReductionArg) -> Result<Flavor> {
    match reduction {
        ReductionArg::Nae3sat | ReductionArg::Maxcut => Ok(Flavor::Nae),
        ReductionArg::Cubic1in3 => Ok(Flavor::OneInThree),
        ReductionArg::Sigmak | ReductionArg::Remark2 => bail!("this reduction does not take a formula"),
    }
}

pub fn reduce(reduction: ReductionArg, input: Option<&Path>, k: usize, output: Option<&Path>, skip_nae_gate: bool) -> Result<RunReport> {
    let mut r = RunReport::new("reduce");
    let need_input = || input.context("this reduction needs an input file");
    match reduction {
        ReductionArg::Nae3sat => {
            let f = load_formula(&mut r, need_input()?, Flavor::Nae)?;
            let red = build_nae_reduction(&f)?;
            r.require(Verdict::check(red.graph.is_k_regular(3)), "3-regular output");
            write_graph(&mut r, &red.graph, output)?;
            r.set("traceback", red.traceback());
        }
        ReductionArg::Cubic1in3 => {
            let f = load_formula(&mut r, need_input()?, Flavor::OneInThree)?;
            match build_1in3_reduction(&f, skip_nae_gate)? {
                None => {
                    r.note("formula has no NAE assignment, hence no 1-in-3 assignment; nothing built");
                    r.set("built", false);
                }
                Some(red) => {
                    r.require(Verdict::check(red.graph.is_k_regular(3)), "3-regular output");
                    write_graph(&mut r, &red.graph, output)?;
                    r.set("built", true);
                    r.set("threshold", theta_threshold(&red)?);
                    r.set("traceback", red.traceback());
                }
            }
        }
        ReductionArg::Maxcut => {
            let f = load_formula(&mut r, need_input()?, Flavor::Nae)?;
            let red = build_maxcut_reduction(&f)?;
            write_graph(&mut r, &red.graph, output)?;
            let doubled: Vec<_> = red.weights.iter().filter(|(_, &w)| w != 1).map(|(&(u, v), &w)| [u as u64, v as u64, w]).collect();
            r.set("threshold", red.threshold);
            r.set("weighted_edges", doubled);
            r.set("literal_vertices", &red.literal_vertices);
            r.set("clause_vertices", &red.clause_vertices);
        }
        ReductionArg::Sigmak => {
            let g = load_graph(&mut r, "graph", need_input()?)?;
            let red = build_sigma_k_reduction(&g, k)?;
            write_graph(&mut r, &red.graph, output)?;
            r.set("traceback", red.traceback());
        }
        ReductionArg::Remark2 => {
            let g = build_remark2_graph(k)?;
            let p = remark2_coloring(k)?;
            r.require(Verdict::check(is_sigma_coloring(&g, &p)?), "constructed 3-part coloring");
            write_graph(&mut r, &g, output)?;
            r.set("k", k);
            r.set("coloring", &p);
        }
    }
    Ok(r)
}

pub fn certify(path: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("certify");
    let text = r.read_input("bundle", path)?;
    let bundle = GadgetBundle::from_json(&text)?;
    r.set("name", &bundle.name);
    r.set("content_hash", bundle.content_hash());
    let graph = bundle.parse_graph()?;
    match certify_fragment(&graph, &bundle.contract) {
        Ok(cert) => {
            let certified = cert.certified();
            let same = cert == bundle.certificate;
            if let Some(ce) = &cert.counterexample {
                r.note(format!("counterexample labels {:?} under context {:?}", ce.labels, ce.context));
            }
            r.require(Verdict::check(certified), "all_conforming and both polarities");
            r.require(Verdict::check(same), "matches stored certificate");
            r.set("certificate", &cert);
            r.set("matches_stored", same);
        }
        Err(Error::TooLarge(msg)) => {
            r.note(msg);
            r.verdict = Verdict::Inconclusive;
        }
        Err(e) => {
            r.note(format!("certification rejected the bundle: {e}"));
            r.set("error", e.to_string());
            r.verdict = Verdict::Fail;
        }
    }
    Ok(r)
}

pub fn roundtrip(reduction: ReductionArg, path: &Path, budget: u64) -> Result<RunReport> {
    let mut r = RunReport::new("roundtrip");
    r.budgets.insert("nodes".into(), budget);
    let f = load_formula(&mut r, path, formula_flavor(reduction)?)?;
    let nae = nae_satisfiable(&f)?;
    r.set("nae_satisfiable", nae.is_some());
    match reduction {
        ReductionArg::Nae3sat => roundtrip_nae(&mut r, &f, nae, budget)?,
        ReductionArg::Cubic1in3 => roundtrip_theta(&mut r, &f, budget)?,
        ReductionArg::Maxcut => roundtrip_maxcut(&mut r, &f, nae)?,
        _ => unreachable!("formula_flavor rejects the others"),
    }
    Ok(r)
}

fn roundtrip_nae(r: &mut RunReport, f: &Formula, nae: Option<sigma_forge::sat::Assignment>, budget: u64) -> Result<()> {
    let red = build_nae_reduction(f)?;
    r.set("vertices", red.graph.vertex_count());
    let res = decide_two(&red.graph, Mode::Lucky, budget)?;
    r.nodes("decide_two", res.nodes_explored);
    if !res.exhausted {
        r.require(Verdict::Inconclusive, "decide_two budget");
        return Ok(());
    }
    let two = res.value.is_some();
    r.set("two_labels", two);
    r.require(Verdict::check(two == nae.is_some()), "oracle and solver agree");
    if let Some(a) = nae {
        let lab = nae_coloring_from_assignment(&red, &a)?;
        let back = nae_assignment_from_coloring(&red, &lab)?;
        r.require(Verdict::check(back == a || back == a.complement()), "constructed labeling extracts the assignment");
        if let Some(w) = &res.witness {
            let ext = nae_assignment_from_coloring(&red, w)?;
            r.require(Verdict::check(is_nae_satisfying(f, &ext)), "solver witness extracts an NAE assignment");
            r.set("extracted_assignment", &ext);
        }
        r.set("oracle_assignment", &a);
    }
    r.note(format!("NAE-satisfiable = {}, two labels suffice = {two}", r.results["nae_satisfiable"]));
    Ok(())
}

fn roundtrip_theta(r: &mut RunReport, f: &Formula, budget: u64) -> Result<()> {
    let one = one_in_three_satisfiable(f)?;
    r.set("one_in_three_satisfiable", one.is_some());
    let Some(red) = build_1in3_reduction(f, false)? else {
        r.require(Verdict::check(one.is_none()), "gate rejects only 1-in-3 unsatisfiable formulas");
        r.note("gate: no NAE assignment, so no 1-in-3 assignment");
        return Ok(());
    };
    let thr = theta_threshold(&red)?;
    r.set("threshold", thr);
    r.set("vertices", red.graph.vertex_count());
    let res = min_part_size(&red.graph, budget)?;
    r.nodes("minpart", res.nodes_explored);
    r.set("min_part", res.min_size);
    r.set("min_part_exhausted", res.exhausted);
    if let Some(a) = &one {
        let lab = theta_coloring_from_assignment(&red, a)?;
        let ones = lab.labels().iter().filter(|&&l| l == 1).count();
        r.set("constructed_part", ones);
        r.require(Verdict::check(ones == thr), "constructed coloring meets the threshold");
        r.require(Verdict::check(res.min_size <= thr), "solver finds a part no larger than the threshold");
        r.require(exhausted(res.exhausted), "minpart budget");
        r.require(Verdict::check(res.min_size == thr), "min part equals threshold");
    } else if res.min_size <= thr {
        // no 1-in-3 assignment, so every valid partition must be larger than the threshold
        r.require(Verdict::Fail, "min part exceeds threshold");
    } else {
        r.require(exhausted(res.exhausted), "minpart budget");
    }
    r.note(format!("min part {} vs threshold {thr}", res.min_size));
    Ok(())
}

fn roundtrip_maxcut(r: &mut RunReport, f: &Formula, nae: Option<sigma_forge::sat::Assignment>) -> Result<()> {
    let red = build_maxcut_reduction(f)?;
    r.set("threshold", red.threshold);
    r.set("vertices", red.graph.vertex_count());
    let cut = match max_cut_weighted(&red.graph, &red.weights) {
        Ok(c) => c,
        Err(Error::TooLarge(msg)) => {
            r.note(msg);
            r.verdict = Verdict::Inconclusive;
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    r.set("max_cut", cut.size);
    r.require(Verdict::check(cut.size <= red.threshold), "cut never exceeds the threshold");
    r.require(Verdict::check((cut.size == red.threshold) == nae.is_some()), "cut reaches the threshold iff NAE-satisfiable");
    if let Some(a) = &nae {
        r.require(Verdict::check(maxcut_side_from_assignment(&red, a).is_ok()), "constructed cut reaches the threshold");
    }
    r.note(format!("max cut {} vs threshold {}", cut.size, red.threshold));
    Ok(())
}

pub fn oracle(problem: OracleArg, path: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("oracle");
    match problem {
        OracleArg::Nae | OracleArg::OneInThree => {
            let one = matches!(problem, OracleArg::OneInThree);
            let f = load_formula(&mut r, path, if one { Flavor::OneInThree } else { Flavor::Nae })?;
            let res = if one { one_in_three_satisfiable(&f)? } else { nae_satisfiable(&f)? };
            if let Some(a) = &res {
                let ok = if one { is_one_in_three_satisfying(&f, a) } else { is_nae_satisfying(&f, a) };
                r.require(Verdict::check(ok), "assignment re-verification");
            }
            r.note(format!("satisfiable = {}", res.is_some()));
            r.set("satisfiable", res.is_some());
            r.set("assignment", &res);
        }
        OracleArg::Maxcut => {
            let g = load_graph(&mut r, "graph", path)?;
            let cut = max_cut(&g)?;
            let recount = g.edges().iter().filter(|&&(u, v)| cut.side[u] != cut.side[v]).count() as u64;
            r.require(Verdict::check(recount == cut.size), "cut re-count");
            r.note(format!("max cut = {}", cut.size));
            r.set("max_cut", &cut);
        }
    }
    Ok(r)
}

pub fn export_gadgets(dir: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("export-gadgets");
    let paths = write_shipped_bundles(dir)?;
    let names: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
    r.note(format!("wrote {} bundles", names.len()));
    r.set("files", json!(names));
    Ok(r)
}
