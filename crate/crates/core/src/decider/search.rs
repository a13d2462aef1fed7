//! Exact not-all-equal search with conflict learning.
//!
//! Each hyperedge `e` becomes two clauses over "vertex is color two" literals:
//! some vertex of `e` is two, and some vertex of `e` is one. Search is
//! backtracking over vertices in a fixed order (descending degree, ties by
//! index) with watched-literal propagation: once all but one vertex of an
//! edge share a color, the last is forced to the other. Conflicts are
//! analysed to a first-UIP learned constraint and the search backjumps.

use std::time::Instant;

use crate::hypergraph::{Color, Coloring, Vertex};

use super::{Budget, SearchStats, Verdict};

const NO_REASON: u32 = u32::MAX;

/// Literal `2v` reads "v is Two", `2v + 1` reads "v is One".
#[inline]
fn lit(v: Vertex, c: Color) -> u32 {
    2 * v + u32::from(c == Color::One)
}

#[inline]
fn var(l: u32) -> usize {
    (l >> 1) as usize
}

pub(crate) struct NaeSearch {
    n: usize,
    lits: Vec<u32>,
    starts: Vec<u32>,
    watches: Vec<Vec<u32>>,
    // per literal: 1 true, -1 false, 0 unassigned
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    order: Vec<Vertex>,
    order_pos: Vec<usize>,
    next_pos: usize,
    phase: Vec<Color>,
    seen: Vec<bool>,
    units: Vec<(Vertex, Color)>,
    pub(crate) stats: SearchStats,
}

impl NaeSearch {
    /// `edges` must be sorted vertex sets in `0..n` of size >= 2. `units` pin colors.
    /// With no units the first vertex in the order is fixed to color one, which
    /// loses nothing because the complement of a proper coloring is proper.
    pub(crate) fn new<'a, I>(n: usize, edges: I, units: &[(Vertex, Color)]) -> Self
    where
        I: IntoIterator<Item = &'a [Vertex]>,
    {
        let mut lits = Vec::new();
        let mut starts = vec![0u32];
        let mut degree = vec![0usize; n];
        for e in edges {
            debug_assert!(e.len() >= 2);
            for &v in e {
                degree[v as usize] += 1;
            }
            lits.extend(e.iter().map(|&v| lit(v, Color::Two)));
            starts.push(lits.len() as u32);
            lits.extend(e.iter().map(|&v| lit(v, Color::One)));
            starts.push(lits.len() as u32);
        }
        let mut watches = vec![Vec::new(); 2 * n];
        for c in 0..starts.len() - 1 {
            let s = starts[c] as usize;
            watches[lits[s] as usize].push(c as u32);
            watches[lits[s + 1] as usize].push(c as u32);
        }

        let mut order: Vec<Vertex> = (0..n as Vertex)
            .filter(|&v| degree[v as usize] > 0)
            .collect();
        order.sort_by(|&a, &b| degree[b as usize].cmp(&degree[a as usize]).then(a.cmp(&b)));
        let mut order_pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            order_pos[v as usize] = i;
        }

        let mut units = units.to_vec();
        if units.is_empty() {
            if let Some(&first) = order.first() {
                units.push((first, Color::One));
            }
        }

        NaeSearch {
            n,
            lits,
            starts,
            watches,
            value: vec![0; 2 * n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            order,
            order_pos,
            next_pos: 0,
            phase: vec![Color::One; n],
            seen: vec![false; n],
            units,
            stats: SearchStats::default(),
        }
    }

    #[inline]
    fn clause(&self, c: u32) -> &[u32] {
        &self.lits[self.starts[c as usize] as usize..self.starts[c as usize + 1] as usize]
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn assign(&mut self, l: u32, reason: u32) {
        let v = var(l);
        self.value[l as usize] = 1;
        self.value[(l ^ 1) as usize] = -1;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let c = ws[i];
                let s = self.starts[c as usize] as usize;
                let e = self.starts[c as usize + 1] as usize;
                if self.lits[s] == false_lit {
                    self.lits.swap(s, s + 1);
                }
                let first = self.lits[s];
                if self.value[first as usize] == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for j in s + 2..e {
                    let l = self.lits[j];
                    if self.value[l as usize] != -1 {
                        self.lits.swap(s + 1, j);
                        self.watches[l as usize].push(c);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value[first as usize] == -1 {
                    conflict = Some(c);
                    break;
                }
                self.assign(first, c);
                i += 1;
            }
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let current = self.decision_level();
        let mut learnt = vec![0u32];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut p: Option<u32> = None;
        loop {
            let skip_first = p.is_some();
            let clause: Vec<u32> = self.clause(confl).to_vec();
            for (j, &q) in clause.iter().enumerate() {
                if skip_first && j == 0 {
                    continue;
                }
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] == current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let pl = self.trail[idx];
            self.seen[var(pl)] = false;
            pending -= 1;
            p = Some(pl);
            if pending == 0 {
                break;
            }
            confl = self.reason[var(pl)];
            debug_assert_ne!(confl, NO_REASON);
        }
        learnt[0] = p.expect("conflict at positive level has a UIP") ^ 1;
        for &q in &learnt[1..] {
            self.seen[var(q)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for j in 2..learnt.len() {
                if self.level[var(learnt[j])] > self.level[var(learnt[best])] {
                    best = j;
                }
            }
            learnt.swap(1, best);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn backjump(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for &l in &self.trail[keep..] {
            let v = var(l);
            self.value[l as usize] = 0;
            self.value[(l ^ 1) as usize] = 0;
            self.reason[v] = NO_REASON;
            self.phase[v] = if l & 1 == 0 { Color::Two } else { Color::One };
            let pos = self.order_pos[v];
            if pos < self.next_pos {
                self.next_pos = pos;
            }
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    fn add_learnt(&mut self, learnt: &[u32]) -> u32 {
        let c = (self.starts.len() - 1) as u32;
        self.lits.extend_from_slice(learnt);
        self.starts.push(self.lits.len() as u32);
        self.watches[learnt[0] as usize].push(c);
        self.watches[learnt[1] as usize].push(c);
        c
    }

    fn pick_branch(&mut self) -> Option<Vertex> {
        while self.next_pos < self.order.len() {
            let v = self.order[self.next_pos];
            if self.value[lit(v, Color::One) as usize] == 0 {
                return Some(v);
            }
            self.next_pos += 1;
        }
        None
    }

    pub(crate) fn solve(&mut self, budget: &Budget) -> (Verdict, Option<Coloring>) {
        let start = Instant::now();
        let verdict = self.run(budget, start);
        self.stats.elapsed_us = start.elapsed().as_micros() as u64;
        let witness = (verdict == Verdict::Colorable).then(|| self.witness());
        (verdict, witness)
    }

    fn run(&mut self, budget: &Budget, start: Instant) -> Verdict {
        for (v, c) in std::mem::take(&mut self.units) {
            let l = lit(v, c);
            match self.value[l as usize] {
                1 => {}
                -1 => return Verdict::NotColorable,
                _ => self.assign(l, NO_REASON),
            }
        }
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    return Verdict::NotColorable;
                }
                let (learnt, back) = self.analyze(confl);
                self.backjump(back);
                if learnt.len() == 1 {
                    self.assign(learnt[0], NO_REASON);
                } else {
                    let c = self.add_learnt(&learnt);
                    self.assign(learnt[0], c);
                }
                continue;
            }
            let Some(v) = self.pick_branch() else {
                return Verdict::Colorable;
            };
            if budget.max_nodes.is_some_and(|m| self.stats.nodes >= m) {
                return Verdict::Undecided;
            }
            if self.stats.nodes.is_multiple_of(256)
                && budget.max_time.is_some_and(|t| start.elapsed() >= t)
            {
                return Verdict::Undecided;
            }
            self.stats.nodes += 1;
            self.trail_lim.push(self.trail.len());
            let c = self.phase[v as usize];
            self.assign(lit(v, c), NO_REASON);
        }
    }

    fn witness(&self) -> Coloring {
        Coloring::new(
            (0..self.n as Vertex)
                .map(|v| {
                    if self.value[lit(v, Color::Two) as usize] == 1 {
                        Color::Two
                    } else {
                        Color::One
                    }
                })
                .collect(),
        )
    }
}
