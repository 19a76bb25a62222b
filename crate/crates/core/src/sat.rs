//! Formulas, DIMACS ingestion and brute-force oracles (NAE-3SAT, 1-in-3 3SAT, MaxCut).
//!
//! The oracles are plain exhaustive loops; they share nothing with the solver.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Largest variable count the SAT oracles enumerate.
pub const MAX_ORACLE_VARS: usize = 25;
/// Largest vertex count the MaxCut oracle enumerates.
pub const MAX_CUT_VERTICES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lit {
    /// 0-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, negated: false }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, negated: true }
    }

    /// From a DIMACS integer (1-based, sign = polarity).
    pub fn from_dimacs(x: i64) -> Option<Lit> {
        (x != 0).then(|| Lit { var: x.unsigned_abs() as usize - 1, negated: x < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn eval(self, a: &Assignment) -> bool {
        a.value(self.var) != self.negated
    }

    pub fn negate(self) -> Lit {
        Lit { negated: !self.negated, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Nae,
    OneInThree,
    Plain,
}

pub type Clause = [Lit; 3];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Clause>,
    flavor: Flavor,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>, flavor: Flavor) -> Result<Formula> {
        let f = Formula { num_vars, clauses, flavor };
        if let Some((i, msg)) = f.violation() {
            return Err(invalid(match i {
                Some(i) => format!("clause {}: {msg}", i + 1),
                None => msg,
            }));
        }
        Ok(f)
    }

    /// Convenience constructor from DIMACS-style signed integers.
    pub fn from_ints(num_vars: usize, clauses: &[[i64; 3]], flavor: Flavor) -> Result<Formula> {
        let cl = clauses
            .iter()
            .map(|c| {
                let mut out = [Lit::pos(0); 3];
                for (o, &x) in out.iter_mut().zip(c) {
                    *o = Lit::from_dimacs(x).ok_or_else(|| invalid("literal 0"))?;
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Formula::new(num_vars, cl, flavor)
    }

    /// First offending clause index (if one is to blame) and reason.
    fn violation(&self) -> Option<(Option<usize>, String)> {
        if self.num_vars == 0 {
            return Some((None, "formula needs at least one variable".into()));
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var >= self.num_vars) {
                return Some((Some(i), format!("variable {} exceeds declared count {}", l.var + 1, self.num_vars)));
            }
            if self.flavor == Flavor::OneInThree && c.iter().any(|l| l.negated) {
                return Some((Some(i), "negated literal not allowed in 1-in-3 formulas".into()));
            }
        }
        if self.flavor == Flavor::OneInThree {
            let occ = self.occurrences();
            if let Some(v) = (0..self.num_vars).find(|&v| occ[v] != 3) {
                let last = self.clauses.iter().rposition(|c| c.iter().any(|l| l.var == v));
                return Some((last, format!("variable {} occurs {} times, expected 3", v + 1, occ[v])));
            }
        }
        None
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Occurrence count per variable (a repeated literal counts each time).
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars];
        for c in &self.clauses {
            for l in c {
                occ[l.var] += 1;
            }
        }
        occ
    }

    /// Every literal flipped.
    pub fn negated(&self) -> Formula {
        let clauses = self.clauses.iter().map(|c| c.map(Lit::negate)).collect();
        Formula { num_vars: self.num_vars, clauses, flavor: if self.flavor == Flavor::OneInThree { Flavor::Plain } else { self.flavor } }
    }

    pub fn with_flavor(&self, flavor: Flavor) -> Result<Formula> {
        Formula::new(self.num_vars, self.clauses.clone(), flavor)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs()));
        }
        s
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |l: &Lit| format!("{}x{}", if l.negated { "¬" } else { "" }, l.var + 1);
        let parts: Vec<String> = self.clauses.iter().map(|c| format!("({} ∨ {} ∨ {})", lit(&c[0]), lit(&c[1]), lit(&c[2]))).collect();
        write!(f, "{}", parts.join(" ∧ "))
    }
}

/// Parses `p cnf V C` followed by clause lines of exactly three nonzero integers and a trailing 0.
pub fn parse_dimacs(text: &str, flavor: Flavor) -> Result<Formula> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut clause_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let w: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() || w.len() != 4 || w[1] != "cnf" {
                return Err(perr(ln, "expected a single header \"p cnf <vars> <clauses>\"".into()));
            }
            let v = w[2].parse().map_err(|_| perr(ln, format!("bad variable count {:?}", w[2])))?;
            let c = w[3].parse().map_err(|_| perr(ln, format!("bad clause count {:?}", w[3])))?;
            header = Some((v, c, ln));
            continue;
        }
        let Some((nv, _, _)) = header else {
            return Err(perr(ln, "clause before header".into()));
        };
        let nums = t
            .split_whitespace()
            .map(|x| x.parse::<i64>().map_err(|_| perr(ln, format!("bad literal {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if nums.last() != Some(&0) || nums[..nums.len() - 1].contains(&0) {
            return Err(perr(ln, "clause must be terminated by a single 0".into()));
        }
        if nums.len() != 4 {
            return Err(perr(ln, format!("clause has {} literals, expected 3", nums.len() - 1)));
        }
        let mut c = [Lit::pos(0); 3];
        for (slot, &x) in c.iter_mut().zip(&nums) {
            if x.unsigned_abs() as usize > nv {
                return Err(perr(ln, format!("variable {} exceeds declared count {nv}", x.abs())));
            }
            *slot = Lit::from_dimacs(x).expect("nonzero literal");
        }
        if flavor == Flavor::OneInThree && c.iter().any(|l| l.negated) {
            return Err(perr(ln, "negated literal not allowed in 1-in-3 formulas".into()));
        }
        clauses.push(c);
        clause_lines.push(ln);
    }
    let (nv, nc, hl) = header.ok_or_else(|| perr(1, "missing \"p cnf\" header".into()))?;
    if nc != clauses.len() {
        return Err(perr(hl, format!("header declares {nc} clauses but {} were given", clauses.len())));
    }
    let f = Formula { num_vars: nv, clauses, flavor };
    match f.violation() {
        Some((i, msg)) => Err(perr(i.map_or(hl, |i| clause_lines[i]), msg)),
        None => Ok(f),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment(values)
    }

    pub fn from_bits(n: usize, bits: u64) -> Assignment {
        Assignment((0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn value(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn complement(&self) -> Assignment {
        Assignment(self.0.iter().map(|b| !b).collect())
    }

    pub fn count_true(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

pub fn is_nae_satisfying(f: &Formula, a: &Assignment) -> bool {
    a.len() == f.num_vars()
        && f.clauses().iter().all(|c| {
            let t = c.iter().filter(|l| l.eval(a)).count();
            t == 1 || t == 2
        })
}

pub fn is_one_in_three_satisfying(f: &Formula, a: &Assignment) -> bool {
    a.len() == f.num_vars() && f.clauses().iter().all(|c| c.iter().filter(|l| l.eval(a)).count() == 1)
}

fn exhaustive(f: &Formula, ok: impl Fn(&Formula, &Assignment) -> bool) -> Result<Option<Assignment>> {
    if f.num_vars() > MAX_ORACLE_VARS {
        return Err(Error::TooLarge(format!("{} variables exceed oracle limit {MAX_ORACLE_VARS}", f.num_vars())));
    }
    Ok((0u64..1 << f.num_vars()).map(|bits| Assignment::from_bits(f.num_vars(), bits)).find(|a| ok(f, a)))
}

/// First NAE-satisfying assignment in binary counting order.
pub fn nae_satisfiable(f: &Formula) -> Result<Option<Assignment>> {
    exhaustive(f, is_nae_satisfying)
}

/// First assignment with exactly one true literal per clause.
pub fn one_in_three_satisfiable(f: &Formula) -> Result<Option<Assignment>> {
    exhaustive(f, is_one_in_three_satisfying)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub size: u64,
    /// `side[v]` is true for vertices on the second shore.
    pub side: Vec<bool>,
}

/// Maximum cut by enumerating all bipartitions (vertex 0 fixed on the first shore).
pub fn max_cut(g: &Graph) -> Result<Cut> {
    max_cut_weighted(g, &BTreeMap::new())
}

/// Maximum cut where edge `(u, v)` (u < v) counts `weights[(u, v)]` times (default 1).
pub fn max_cut_weighted(g: &Graph, weights: &BTreeMap<(usize, usize), u64>) -> Result<Cut> {
    let n = g.vertex_count();
    if n > MAX_CUT_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices exceed MaxCut oracle limit {MAX_CUT_VERTICES}")));
    }
    let edges: Vec<(usize, usize, u64)> = g.edges().iter().map(|&(u, v)| (u, v, *weights.get(&(u, v)).unwrap_or(&1))).collect();
    let mut best = (0u64, 0u64);
    let free = n.saturating_sub(1);
    for mask in 0u64..(1u64 << free) {
        let side = mask << 1;
        let size: u64 = edges.iter().filter(|&&(u, v, _)| (side >> u ^ side >> v) & 1 == 1).map(|e| e.2).sum();
        if size > best.0 {
            best = (size, side);
        }
    }
    Ok(Cut { size: best.0, side: (0..n).map(|v| best.1 >> v & 1 == 1).collect() })
}

/// Number of edges crossing a given bipartition (weighted as in [`max_cut_weighted`]).
pub fn cut_value(g: &Graph, weights: &BTreeMap<(usize, usize), u64>, side: &[bool]) -> u64 {
    g.edges().iter().filter(|&&(u, v)| side[u] != side[v]).map(|e| *weights.get(e).unwrap_or(&1)).sum()
}
