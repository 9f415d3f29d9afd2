//! Embedded conflict-driven SAT solver.
//!
//! Deliberately classical: two watched literals per clause, first-UIP
//! conflict analysis with integer variable activities, phase saving, Luby
//! restarts and periodic learnt-clause reduction.  All state evolves by
//! index arithmetic over vectors, so runs are bit-for-bit reproducible.
//! Activities use saturating integer bumps with periodic rescaling; there is
//! no floating point and no hashing.

use super::CnfFormula;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Embedded,
    External(String),
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct SolveStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    #[serde(skip)]
    pub wall_ms: u64,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Value of each variable, indexed by variable − 1.  Present iff SAT.
    pub model: Option<Vec<bool>>,
    pub solver: SolverKind,
    pub stats: SolveStats,
}

/// Decides the formula with the embedded solver.  Complete: always returns
/// SAT (with a re-verified model) or UNSAT.
pub fn solve(f: &CnfFormula) -> Result<SolveResult> {
    solve_with_progress(f, None, &mut |_| {})
}

/// As [`solve`], with an optional conflict budget and a progress callback
/// invoked every few thousand conflicts.  Exhausting the budget is an error,
/// distinct from any answer.
pub fn solve_with_progress(
    f: &CnfFormula,
    max_conflicts: Option<u64>,
    progress: &mut dyn FnMut(&SolveStats),
) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    let mut solver = Solver::new(f)?;
    let status = solver.run(max_conflicts, progress)?;
    let mut stats = solver.stats;
    stats.wall_ms = start.elapsed().as_millis() as u64;
    let model = if status == SolveStatus::Sat {
        let model: Vec<bool> = (0..f.variable_count)
            .map(|v| solver.assign[v] == Value::True)
            .collect();
        for (i, clause) in f.clauses.iter().enumerate() {
            let ok = clause
                .iter()
                .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0));
            if !ok {
                return Err(Error::invalid(format!(
                    "internal solver model falsifies clause {i}"
                )));
            }
        }
        Some(model)
    } else {
        None
    };
    Ok(SolveResult {
        status,
        model,
        solver: SolverKind::Embedded,
        stats,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Undef,
}

/// Literal encoded as 2·var + sign, variables 0-based internally.
type Lit = u32;

fn lit_from_dimacs(l: i32) -> Lit {
    let v = (l.unsigned_abs() - 1) * 2;
    if l > 0 {
        v
    } else {
        v + 1
    }
}

fn negate(l: Lit) -> Lit {
    l ^ 1
}

fn var_of(l: Lit) -> usize {
    (l >> 1) as usize
}

fn is_pos(l: Lit) -> bool {
    l & 1 == 0
}

struct Clause {
    lits: Vec<Lit>,
    deleted: bool,
    lbd: u32,
}

#[derive(Clone, Copy)]
struct Watch {
    clause: u32,
    blocker: Lit,
}

const NO_REASON: u32 = u32::MAX;

struct Solver {
    nvars: usize,
    clauses: Vec<Clause>,
    first_learnt: usize,
    live_learnts: usize,
    watches: Vec<Vec<Watch>>,
    assign: Vec<Value>,
    phase: Vec<bool>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<u64>,
    act_inc: u64,
    seen: Vec<bool>,
    stats: SolveStats,
    reduce_at: u64,
}

impl Solver {
    fn new(f: &CnfFormula) -> Result<Self> {
        let nvars = f.variable_count;
        for clause in &f.clauses {
            for &l in clause {
                let v = l.unsigned_abs() as usize;
                if l == 0 || v > nvars {
                    return Err(Error::invalid(format!(
                        "literal {l} outside variable range 1..={nvars}"
                    )));
                }
            }
        }
        let mut s = Solver {
            nvars,
            clauses: Vec::with_capacity(f.clauses.len()),
            first_learnt: f.clauses.len(),
            live_learnts: 0,
            watches: vec![Vec::new(); nvars * 2],
            assign: vec![Value::Undef; nvars],
            phase: vec![false; nvars],
            level: vec![0; nvars],
            reason: vec![NO_REASON; nvars],
            trail: Vec::with_capacity(nvars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0; nvars],
            act_inc: 1 << 10,
            seen: vec![false; nvars],
            stats: SolveStats::default(),
            reduce_at: 4000,
        };
        for clause in &f.clauses {
            // Deduplicate literals; a clause with l and ¬l is vacuous.
            let mut lits: Vec<Lit> = clause.iter().map(|&l| lit_from_dimacs(l)).collect();
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] == negate(w[1])) {
                continue;
            }
            s.add_clause(lits, false);
        }
        s.first_learnt = s.clauses.len();
        Ok(s)
    }

    fn value(&self, l: Lit) -> Value {
        match self.assign[var_of(l)] {
            Value::Undef => Value::Undef,
            v => {
                if (v == Value::True) == is_pos(l) {
                    Value::True
                } else {
                    Value::False
                }
            }
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause and installs watches on its first two literals.  Empty
    /// and unit clauses get no watches; `run` seeds them onto the trail.
    fn add_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> Option<u32> {
        let idx = self.clauses.len() as u32;
        let watched = lits.len() >= 2;
        if watched {
            self.watches[lits[0] as usize].push(Watch {
                clause: idx,
                blocker: lits[1],
            });
            self.watches[lits[1] as usize].push(Watch {
                clause: idx,
                blocker: lits[0],
            });
        }
        self.clauses.push(Clause {
            lits,
            deleted: false,
            lbd: 0,
        });
        if watched {
            if learnt {
                self.live_learnts += 1;
            }
            Some(idx)
        } else {
            None
        }
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = var_of(l);
        self.assign[v] = if is_pos(l) { Value::True } else { Value::False };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = negate(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut kept = 0;
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Value::True {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                let cid = w.clause as usize;
                if self.clauses[cid].deleted {
                    continue;
                }
                if self.clauses[cid].lits[0] == false_lit {
                    self.clauses[cid].lits.swap(0, 1);
                }
                let first = self.clauses[cid].lits[0];
                if first != w.blocker && self.value(first) == Value::True {
                    ws[kept] = Watch {
                        clause: w.clause,
                        blocker: first,
                    };
                    kept += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[cid].lits.len() {
                    let cand = self.clauses[cid].lits[k];
                    if self.value(cand) != Value::False {
                        self.clauses[cid].lits.swap(1, k);
                        self.watches[cand as usize].push(Watch {
                            clause: w.clause,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // Clause is unit or conflicting on lits[0].
                ws[kept] = Watch {
                    clause: w.clause,
                    blocker: first,
                };
                kept += 1;
                if self.value(first) == Value::False {
                    conflict = Some(w.clause);
                    while i < ws.len() {
                        ws[kept] = ws[i];
                        kept += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.enqueue(first, w.clause);
                }
            }
            ws.truncate(kept);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] = self.activity[v].saturating_add(self.act_inc);
    }

    fn decay(&mut self) {
        self.act_inc = self.act_inc.saturating_add(self.act_inc >> 4);
        if self.act_inc > 1 << 48 {
            for a in &mut self.activity {
                *a >>= 24;
            }
            self.act_inc >>= 24;
            if self.act_inc == 0 {
                self.act_inc = 1 << 10;
            }
        }
    }

    /// First-UIP analysis.  Returns the learnt clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut counter = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut clause_id = confl;
        loop {
            let lits_len = self.clauses[clause_id as usize].lits.len();
            for j in 0..lits_len {
                let q = self.clauses[clause_id as usize].lits[j];
                // Reason clauses contain the implied literal itself; resolve
                // it away rather than re-adding it.
                if Some(q) == p {
                    continue;
                }
                let v = var_of(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= self.decision_level() {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var_of(self.trail[idx])] {
                    break;
                }
            }
            let pl = self.trail[idx];
            self.seen[var_of(pl)] = false;
            counter -= 1;
            p = Some(pl);
            if counter == 0 {
                break;
            }
            clause_id = self.reason[var_of(pl)];
        }
        learnt[0] = negate(p.unwrap());

        // Cheap minimization: drop literals whose reason clause lies
        // entirely inside the learnt set.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                let r = self.reason[var_of(l)];
                if r == NO_REASON {
                    return true;
                }
                !self.clauses[r as usize]
                    .lits
                    .iter()
                    .all(|&q| q == negate(l) || learnt.contains(&q) || self.level[var_of(q)] == 0)
            })
            .collect();
        let mut filtered = Vec::with_capacity(learnt.len());
        for (i, &l) in learnt.iter().enumerate() {
            if keep[i] {
                filtered.push(l);
            }
            self.seen[var_of(l)] = false;
        }
        let mut learnt = filtered;

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var_of(learnt[i])] > self.level[var_of(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[var_of(learnt[1])]
        };
        (learnt, backjump)
    }

    fn lbd(&self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|&l| self.level[var_of(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn backtrack(&mut self, to_level: u32) {
        while self.decision_level() > to_level {
            let lim = self.trail_lim.pop().unwrap();
            for &l in self.trail[lim..].iter().rev() {
                let v = var_of(l);
                self.phase[v] = is_pos(l);
                self.assign[v] = Value::Undef;
                self.reason[v] = NO_REASON;
            }
            self.trail.truncate(lim);
        }
        self.qhead = self.trail.len();
    }

    fn decide(&mut self) -> Option<Lit> {
        let mut best: Option<usize> = None;
        for v in 0..self.nvars {
            if self.assign[v] == Value::Undef
                && best.is_none_or(|b| self.activity[v] > self.activity[b])
            {
                best = Some(v);
            }
        }
        best.map(|v| {
            let l = if self.phase[v] {
                (v * 2) as Lit
            } else {
                (v * 2 + 1) as Lit
            };
            self.trail_lim.push(self.trail.len());
            l
        })
    }

    fn reduce_learnts(&mut self) {
        let mut ids: Vec<usize> = (self.first_learnt..self.clauses.len())
            .filter(|&i| !self.clauses[i].deleted && self.clauses[i].lits.len() > 2)
            .collect();
        // Locked clauses (current reasons) must survive.
        let locked: Vec<bool> = ids
            .iter()
            .map(|&i| {
                let first = self.clauses[i].lits[0];
                self.value(first) == Value::True && self.reason[var_of(first)] == i as u32
            })
            .collect();
        let order: Vec<usize> = {
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_by_key(|&k| {
                let c = &self.clauses[ids[k]];
                (c.lbd, c.lits.len(), ids[k])
            });
            order
        };
        let keep_count = ids.len() / 2;
        for (rank, &k) in order.iter().enumerate() {
            if rank >= keep_count && !locked[k] && self.clauses[ids[k]].lbd > 2 {
                self.clauses[ids[k]].deleted = true;
                self.live_learnts -= 1;
            }
        }
        ids.clear();
    }

    fn luby(mut x: u64) -> u64 {
        let (mut size, mut seq) = (1u64, 0u32);
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) / 2;
            seq -= 1;
            x %= size;
        }
        1 << seq
    }

    fn run(
        &mut self,
        max_conflicts: Option<u64>,
        progress: &mut dyn FnMut(&SolveStats),
    ) -> Result<SolveStatus> {
        // Seed level-zero facts from unit and empty input clauses.
        for i in 0..self.clauses.len() {
            match self.clauses[i].lits.len() {
                0 => return Ok(SolveStatus::Unsat),
                1 => {
                    let l = self.clauses[i].lits[0];
                    match self.value(l) {
                        Value::False => return Ok(SolveStatus::Unsat),
                        Value::Undef => self.enqueue(l, NO_REASON),
                        Value::True => {}
                    }
                }
                _ => {}
            }
        }
        if self.propagate().is_some() {
            return Ok(SolveStatus::Unsat);
        }

        let mut restart_round = 0u64;
        let mut conflicts_this_round = 0u64;
        let mut budget = Self::luby(restart_round) * 128;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_this_round += 1;
                if self.stats.conflicts.is_multiple_of(8192) {
                    progress(&self.stats);
                }
                if self.decision_level() == 0 {
                    return Ok(SolveStatus::Unsat);
                }
                if let Some(limit) = max_conflicts {
                    if self.stats.conflicts > limit {
                        return Err(Error::BudgetExceeded {
                            what: "solver conflicts",
                            limit: limit as usize,
                            actual: self.stats.conflicts as usize,
                            hint: Some(
                                "raise the conflict budget or set FOLKMAN_SAT_CMD to an \
                                 external solver"
                                    .into(),
                            ),
                        });
                    }
                }
                let (learnt, backjump) = self.analyze(confl);
                let lbd = self.lbd(&learnt);
                self.decay();
                self.backtrack(backjump);
                let asserting = learnt[0];
                if learnt.len() == 1 {
                    self.enqueue(asserting, NO_REASON);
                } else {
                    let idx = self.add_clause(learnt, true).expect("len >= 2");
                    self.clauses[idx as usize].lbd = lbd;
                    self.enqueue(asserting, idx);
                }
                if self.stats.conflicts >= self.reduce_at {
                    self.reduce_learnts();
                    self.reduce_at += 2000 + 500 * (self.live_learnts as u64 / 1000);
                }
            } else if conflicts_this_round >= budget {
                conflicts_this_round = 0;
                restart_round += 1;
                budget = Self::luby(restart_round) * 128;
                self.backtrack(0);
            } else {
                match self.decide() {
                    None => return Ok(SolveStatus::Sat),
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}
