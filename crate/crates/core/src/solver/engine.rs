use crate::graph::Graph;

use super::Mode;

const NONE: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Symmetry {
    None,
    /// Labels not yet used anywhere are interchangeable; only the smallest is tried.
    Labels,
    /// Closed twins are swapped by an automorphism; each disjoint pair is fixed to (first, second).
    ClosedTwins,
}

struct Constraint {
    left: Vec<u32>,
    right: Vec<u32>,
}

pub(crate) struct Problem {
    n: usize,
    k: usize,
    mode: Mode,
    symmetry: Symmetry,
    cons: Vec<Constraint>,
    var_cons: Vec<Vec<u32>>,
    co_scope: Vec<Vec<u32>>,
    fixed: Vec<(u32, u8)>,
}

impl Problem {
    pub(crate) fn new(g: &Graph, k: usize, mode: Mode, symmetry: Symmetry) -> Problem {
        assert!((1..=super::MAX_LABELS).contains(&k));
        let n = g.vertex_count();
        let mut cons = Vec::new();
        for &(u, v) in g.edges() {
            let (nu, nv) = (g.neighbors(u), g.neighbors(v));
            if mode == Mode::Sigma && nu.len() != nv.len() {
                continue;
            }
            let left = nu.iter().filter(|w| nv.binary_search(w).is_err()).map(|&w| w as u32).collect();
            let right = nv.iter().filter(|w| nu.binary_search(w).is_err()).map(|&w| w as u32).collect();
            cons.push(Constraint { left, right });
        }
        let mut var_cons = vec![Vec::new(); n];
        let mut co_scope = vec![Vec::new(); n];
        for (ci, c) in cons.iter().enumerate() {
            for &x in c.left.iter().chain(&c.right) {
                var_cons[x as usize].push(ci as u32);
                co_scope[x as usize].extend(c.left.iter().chain(&c.right).copied().filter(|&y| y != x));
            }
        }
        for s in &mut co_scope {
            s.sort_unstable();
            s.dedup();
        }
        let mut fixed = Vec::new();
        if symmetry == Symmetry::ClosedTwins && k >= 2 {
            let mut taken = vec![false; n];
            for (u, v) in g.closed_twin_pairs() {
                if !taken[u] && !taken[v] {
                    taken[u] = true;
                    taken[v] = true;
                    fixed.push((u as u32, 0));
                    fixed.push((v as u32, 1));
                }
            }
        }
        Problem { n, k, mode, symmetry, cons, var_cons, co_scope, fixed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Found,
    Infeasible,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum MinOutcome {
    /// Values of an assignment strictly better than the incumbent, and optimal.
    Improved(Vec<u8>),
    /// The incumbent is optimal.
    NoBetter,
    Budget(Option<Vec<u8>>),
}

struct BudgetHit;

enum Entry {
    Dom(u32, u64),
    Assign(u32),
}

pub(crate) struct Engine<'p> {
    p: &'p Problem,
    dom: Vec<u64>,
    val: Vec<u8>,
    open: Vec<u32>,
    used: Vec<u32>,
    trail: Vec<Entry>,
    queue: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    scratch: Vec<i32>,
    nodes: u64,
    budget: u64,
}

fn bits(mut m: u64) -> impl Iterator<Item = u8> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as u8;
            m &= m - 1;
            b
        })
    })
}

impl<'p> Engine<'p> {
    pub(crate) fn new(p: &'p Problem, budget: u64) -> Engine<'p> {
        let full = if p.k == 64 { u64::MAX } else { (1u64 << p.k) - 1 };
        Engine {
            p,
            dom: vec![full; p.n],
            val: vec![NONE; p.n],
            open: p.cons.iter().map(|c| (c.left.len() + c.right.len()) as u32).collect(),
            used: vec![0; p.k],
            trail: Vec::new(),
            queue: Vec::new(),
            stamp: vec![0; p.n],
            epoch: 0,
            scratch: vec![0; p.k],
            nodes: 0,
            budget,
        }
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    pub(crate) fn values(&self) -> Vec<u8> {
        self.val.clone()
    }

    fn satisfied(&mut self, ci: usize) -> bool {
        let c = &self.p.cons[ci];
        match self.p.mode {
            Mode::Lucky => {
                let s = |side: &[u32]| side.iter().map(|&x| self.val[x as usize] as i64 + 1).sum::<i64>();
                s(&c.left) != s(&c.right)
            }
            Mode::Sigma => {
                for &x in &c.left {
                    self.scratch[self.val[x as usize] as usize] += 1;
                }
                for &x in &c.right {
                    self.scratch[self.val[x as usize] as usize] -= 1;
                }
                let mut differ = false;
                for &x in c.left.iter().chain(&c.right) {
                    let l = self.val[x as usize] as usize;
                    differ |= self.scratch[l] != 0;
                    self.scratch[l] = 0;
                }
                differ
            }
        }
    }

    /// Removes values of the single open variable of `ci` that would violate it.
    fn forward(&mut self, ci: usize) -> bool {
        let c = &self.p.cons[ci];
        let (w, sign) = match c.left.iter().find(|&&x| self.val[x as usize] == NONE) {
            Some(&x) => (x, 1i64),
            None => (*c.right.iter().find(|&&x| self.val[x as usize] == NONE).expect("one open variable"), -1),
        };
        let wi = w as usize;
        let mut forbidden = 0u64;
        match self.p.mode {
            Mode::Lucky => {
                let mut d = 0i64;
                for &x in &c.left {
                    if x != w {
                        d += self.val[x as usize] as i64 + 1;
                    }
                }
                for &x in &c.right {
                    if x != w {
                        d -= self.val[x as usize] as i64 + 1;
                    }
                }
                // violated iff d + sign * (l + 1) == 0
                let l = -d * sign - 1;
                if (0..self.p.k as i64).contains(&l) {
                    forbidden = 1 << l;
                }
            }
            Mode::Sigma => {
                for &x in &c.left {
                    if x != w {
                        self.scratch[self.val[x as usize] as usize] += 1;
                    }
                }
                for &x in &c.right {
                    if x != w {
                        self.scratch[self.val[x as usize] as usize] -= 1;
                    }
                }
                let mut nonzero = Vec::new();
                for &x in c.left.iter().chain(&c.right) {
                    if x != w {
                        let l = self.val[x as usize] as usize;
                        if self.scratch[l] != 0 {
                            nonzero.push((l, self.scratch[l]));
                        }
                        self.scratch[l] = 0;
                    }
                }
                nonzero.sort_unstable();
                nonzero.dedup();
                if nonzero.len() == 1 && nonzero[0].1 as i64 == -sign {
                    forbidden = 1 << nonzero[0].0;
                }
            }
        }
        let new = self.dom[wi] & !forbidden;
        if new == 0 {
            return false;
        }
        if new != self.dom[wi] {
            self.trail.push(Entry::Dom(w, self.dom[wi]));
            self.dom[wi] = new;
            if new.count_ones() == 1 {
                self.queue.push(w);
            }
        }
        true
    }

    fn assign(&mut self, x: u32, v: u8) -> bool {
        let xi = x as usize;
        debug_assert_eq!(self.val[xi], NONE);
        if self.dom[xi] & (1 << v) == 0 {
            return false;
        }
        if self.dom[xi] != 1 << v {
            self.trail.push(Entry::Dom(x, self.dom[xi]));
            self.dom[xi] = 1 << v;
        }
        self.val[xi] = v;
        self.used[v as usize] += 1;
        self.trail.push(Entry::Assign(x));
        let p = self.p;
        for &ci in &p.var_cons[xi] {
            self.open[ci as usize] -= 1;
        }
        for &ci in &p.var_cons[xi] {
            let ok = match self.open[ci as usize] {
                0 => self.satisfied(ci as usize),
                1 => self.forward(ci as usize),
                _ => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn propagate(&mut self) -> bool {
        while let Some(x) = self.queue.pop() {
            if self.val[x as usize] != NONE {
                continue;
            }
            let v = self.dom[x as usize].trailing_zeros() as u8;
            if !self.assign(x, v) {
                self.queue.clear();
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        self.queue.clear();
        while self.trail.len() > mark {
            match self.trail.pop().expect("non-empty trail") {
                Entry::Dom(x, old) => self.dom[x as usize] = old,
                Entry::Assign(x) => {
                    let xi = x as usize;
                    self.used[self.val[xi] as usize] -= 1;
                    self.val[xi] = NONE;
                    for &ci in &self.p.var_cons[xi] {
                        self.open[ci as usize] += 1;
                    }
                }
            }
        }
    }

    /// Splits the open variables of `vars` into independent groups.
    fn components(&mut self, vars: &[u32]) -> Vec<Vec<u32>> {
        self.epoch += 1;
        let ep = self.epoch;
        let mut out = Vec::new();
        for &s in vars {
            if self.val[s as usize] != NONE || self.stamp[s as usize] == ep {
                continue;
            }
            self.stamp[s as usize] = ep;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i] as usize;
                for &y in &self.p.co_scope[x] {
                    let yi = y as usize;
                    if self.val[yi] == NONE && self.stamp[yi] != ep {
                        self.stamp[yi] = ep;
                        comp.push(y);
                    }
                }
                i += 1;
            }
            out.push(comp);
        }
        out
    }

    /// Fail-first: smallest domain, then most nearly-closed constraints, then smallest id.
    fn pick(&self, comp: &[u32]) -> u32 {
        let mut best = None;
        for &x in comp {
            let xi = x as usize;
            if self.val[xi] != NONE {
                continue;
            }
            let size = self.dom[xi].count_ones();
            let tight = self.p.var_cons[xi].iter().filter(|&&c| self.open[c as usize] <= 2).count();
            let key = (size, std::cmp::Reverse(tight), x);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.expect("component has an open variable").2
    }

    fn candidates(&self, x: u32) -> u64 {
        let mut m = self.dom[x as usize];
        if self.p.symmetry == Symmetry::Labels {
            if let Some(first_unused) = self.used.iter().position(|&u| u == 0) {
                let mut allowed = 1u64 << first_unused;
                for (l, &u) in self.used.iter().enumerate() {
                    if u > 0 {
                        allowed |= 1 << l;
                    }
                }
                m &= allowed;
            }
        }
        m
    }

    fn tick(&mut self) -> Result<(), BudgetHit> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(BudgetHit)
        } else {
            Ok(())
        }
    }

    fn start(&mut self) -> bool {
        let p = self.p;
        for &(x, v) in &p.fixed {
            if self.val[x as usize] == NONE && !(self.assign(x, v) && self.propagate()) {
                return false;
            }
        }
        // constraints whose scope is a single variable
        for ci in 0..p.cons.len() {
            if self.open[ci] == 1 && !self.forward(ci) {
                return false;
            }
        }
        self.propagate()
    }

    pub(crate) fn solve(&mut self) -> Outcome {
        if !self.start() {
            return Outcome::Infeasible;
        }
        let all: Vec<u32> = (0..self.p.n as u32).collect();
        for comp in self.components(&all) {
            match self.solve_comp(&comp) {
                Ok(true) => {}
                Ok(false) => return Outcome::Infeasible,
                Err(BudgetHit) => return Outcome::Budget,
            }
        }
        Outcome::Found
    }

    fn solve_comp(&mut self, comp: &[u32]) -> Result<bool, BudgetHit> {
        let x = self.pick(comp);
        for v in bits(self.candidates(x)) {
            self.tick()?;
            let mark = self.trail.len();
            if self.assign(x, v) && self.propagate() {
                let rest: Vec<u32> = comp.iter().copied().filter(|&y| self.val[y as usize] == NONE).collect();
                let mut ok = true;
                for sub in self.components(&rest) {
                    if !self.solve_comp(&sub)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(true);
                }
            }
            self.undo(mark);
        }
        Ok(false)
    }

    /// Minimizes the number of variables labeled 0, looking only for values below `incumbent`.
    pub(crate) fn minimize(&mut self, incumbent: usize) -> MinOutcome {
        assert_eq!(self.p.k, 2);
        if !self.start() {
            return MinOutcome::NoBetter;
        }
        let all: Vec<u32> = (0..self.p.n as u32).collect();
        let mut total = self.val.iter().filter(|&&v| v == 0).count();
        if total >= incumbent {
            return MinOutcome::NoBetter;
        }
        for comp in self.components(&all) {
            match self.min_comp(&comp, incumbent - total) {
                Err(BudgetHit) => return MinOutcome::Budget(None),
                Ok(None) => return MinOutcome::NoBetter,
                Ok(Some((c, snap))) => {
                    total += c;
                    self.reapply(&snap);
                }
            }
        }
        debug_assert!(total < incumbent);
        MinOutcome::Improved(self.val.clone())
    }

    fn reapply(&mut self, snap: &[(u32, u8)]) {
        for &(x, v) in snap {
            if self.val[x as usize] == NONE {
                let ok = self.assign(x, v) && self.propagate();
                debug_assert!(ok, "stored optimum must be consistent");
            }
        }
    }

    /// Best cost (< `limit`) for the variables of `comp`, with the assignment achieving it.
    #[allow(clippy::type_complexity)]
    fn min_comp(&mut self, comp: &[u32], limit: usize) -> Result<Option<(usize, Vec<(u32, u8)>)>, BudgetHit> {
        if limit == 0 {
            return Ok(None);
        }
        let mut lim = limit;
        let mut best = None;
        let x = self.pick(comp);
        let order: Vec<u8> = [1u8, 0].into_iter().filter(|&v| self.dom[x as usize] & (1 << v) != 0).collect();
        for v in order {
            self.tick()?;
            let mark = self.trail.len();
            if self.assign(x, v) && self.propagate() {
                let mut total = comp.iter().filter(|&&y| self.val[y as usize] == 0).count();
                if total < lim {
                    let rest: Vec<u32> = comp.iter().copied().filter(|&y| self.val[y as usize] == NONE).collect();
                    let mut feasible = true;
                    for sub in self.components(&rest) {
                        match self.min_comp(&sub, lim - total)? {
                            None => {
                                feasible = false;
                                break;
                            }
                            Some((c, snap)) => {
                                total += c;
                                self.reapply(&snap);
                            }
                        }
                    }
                    if feasible && total < lim {
                        lim = total;
                        best = Some((total, comp.iter().map(|&y| (y, self.val[y as usize])).collect()));
                    }
                }
            }
            self.undo(mark);
            if lim == 0 {
                break;
            }
        }
        Ok(best)
    }
}
