//! Polynomial-time decision procedure for Reachable Assignment on cycles.
//!
//! For every edge where a first rational swap is possible the solver fixes
//! the two objects exchanged there (the guess), infers forced directions,
//! and builds a 2-CNF formula whose models are exactly the valid selections
//! that start with that swap.

use thiserror::Error;

use crate::dynamics::{greedy_swap, is_rational_swap, GreedyOutcome, Swap};
use crate::geometry::{theta, total_displacement, CandidateTable, GeometryError};
use crate::model::{cycle::cw_distance, AgentId, Instance, ModelError, ObjectId};
use crate::selection::{Direction, Selection};
use crate::twosat::{Lit, TwoSat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("the instance topology is not a cycle")]
    TopologyMismatch,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("edge {edge} out of range for n = {n}")]
    EdgeOutOfRange { edge: usize, n: usize },
}

#[inline]
fn lit(o: ObjectId, d: Direction) -> Lit {
    Lit::new(o.0, d == Direction::Cw)
}

/// Clauses forbidding shields and incompatible opposite-direction pairs.
pub fn build_psi_h(table: &CandidateTable) -> TwoSat {
    let n = table.n();
    let mut f = TwoSat::new(n);
    for p in (0..n).map(ObjectId) {
        for q in (0..n).map(ObjectId) {
            if p == q {
                continue;
            }
            for c in [Direction::Ccw, Direction::Cw] {
                if p < q && (table.shields(q, p, c) || table.shields(p, q, c)) {
                    f.add_clause(lit(p, c).negate(), lit(q, c).negate());
                }
                if !table.compatible(p, q, c) {
                    f.add_implication(lit(p, c), lit(q, c));
                }
            }
        }
    }
    f
}

/// The objects exchanged by the first swap across edge `edge`: `x` moves
/// clockwise, `y` counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guess {
    pub edge: usize,
    pub x: ObjectId,
    pub y: ObjectId,
}

impl Guess {
    pub fn at(instance: &Instance, edge: usize) -> Self {
        let n = instance.n();
        Guess {
            edge,
            x: instance.initial().object_of(AgentId(edge)),
            y: instance.initial().object_of(AgentId((edge + 1) % n)),
        }
    }

    pub fn guessed(&self, o: ObjectId) -> Option<Direction> {
        if o == self.x {
            Some(Direction::Cw)
        } else if o == self.y {
            Some(Direction::Ccw)
        } else {
            None
        }
    }

    /// `Φ_d`: the guessed object moving in direction `d`.
    pub fn phi(&self, d: Direction) -> ObjectId {
        match d {
            Direction::Cw => self.x,
            Direction::Ccw => self.y,
        }
    }
}

/// Where two opposite objects meet, which side of the guessed object the
/// partner starts on, and whether the meeting edge is the edge of the list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct STuple {
    pub meet_edge: Option<usize>,
    pub side: bool,
    pub successful: bool,
}

/// Per-list conditional directions of members of `C(p, e)` under
/// `γ(p) = d(p, e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDecided {
    pub direction: Direction,
    pub members: Vec<(ObjectId, Option<Direction>)>,
    /// No valid selection respecting the guess has `γ(p) = d(p, e)`.
    pub conflict: bool,
}

impl PDecided {
    fn count(&self, d: Option<Direction>) -> usize {
        self.members.iter().filter(|m| m.1 == d).count()
    }
}

/// Prefix sums over positions measured clockwise from the agent right after
/// the guessed edge.
struct Counts {
    cw: Vec<usize>,
    ccw: Vec<usize>,
    open: Vec<usize>,
    stat: Vec<usize>,
}

impl Counts {
    /// Sum over the open interval `(lo, hi)`.
    fn range(v: &[usize], lo: usize, hi: usize) -> usize {
        if hi <= lo + 1 {
            0
        } else {
            v[hi] - v[lo + 1]
        }
    }
}

/// Shared, guess-independent data for one instance.
pub struct Prepared {
    instance: Instance,
    table: CandidateTable,
    psi_h: TwoSat,
    /// Number of clockwise movers in any valid selection.
    cw_movers: usize,
    /// Number of counterclockwise movers in any valid selection.
    ccw_movers: usize,
}

impl Prepared {
    /// Expects a cycle instance already reduced by Rule 1.
    pub fn new(instance: Instance) -> Result<Self, SolveError> {
        let table = CandidateTable::build(&instance).map_err(|_| SolveError::TopologyMismatch)?;
        let n = instance.n();
        let ccw_movers = total_displacement(&instance) / n;
        let stationary = (0..n).filter(|&o| table.is_stationary(ObjectId(o))).count();
        let cw_movers = n - ccw_movers - stationary;
        let psi_h = build_psi_h(&table);
        Ok(Prepared {
            instance,
            table,
            psi_h,
            cw_movers,
            ccw_movers,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn table(&self) -> &CandidateTable {
        &self.table
    }

    pub fn psi_h(&self) -> &TwoSat {
        &self.psi_h
    }

    pub fn analyse(&self, edge: usize) -> GuessAnalysis<'_> {
        GuessAnalysis::new(self, Guess::at(&self.instance, edge))
    }

    /// Decide whether a valid selection starts with the swap across `edge`.
    pub fn solve_first_swap(&self, edge: usize) -> FirstSwapOutcome {
        let mut analysis = self.analyse(edge);
        analysis.infer();
        let formula = analysis.formula();
        let Some(model) = formula.solve() else {
            return FirstSwapOutcome {
                formula,
                verdict: FirstSwapVerdict::Unsatisfiable,
            };
        };
        let gamma = Selection::from_bits(&model);
        let verdict = match greedy_swap(&self.instance, &gamma) {
            GreedyOutcome::Reached(trace) => FirstSwapVerdict::Yes {
                selection: gamma,
                trace: trace.swaps,
            },
            GreedyOutcome::Failed(_) => FirstSwapVerdict::GateRejected(gamma),
        };
        FirstSwapOutcome { formula, verdict }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstSwapVerdict {
    Yes {
        selection: Selection,
        trace: Vec<Swap>,
    },
    Unsatisfiable,
    /// The formula had a model but the simulation did not reach the target.
    GateRejected(Selection),
}

#[derive(Debug, Clone)]
pub struct FirstSwapOutcome {
    pub formula: TwoSat,
    pub verdict: FirstSwapVerdict,
}

/// Inference state for a single guess.
pub struct GuessAnalysis<'a> {
    prep: &'a Prepared,
    pub guess: Guess,
    dir: Vec<Option<Direction>>,
    wrong: bool,
    /// Object starting at each position, positions counted clockwise from
    /// the initial holder of `y`.
    at_pos: Vec<ObjectId>,
    counts: Option<Counts>,
}

impl<'a> GuessAnalysis<'a> {
    fn new(prep: &'a Prepared, guess: Guess) -> Self {
        let n = prep.instance.n();
        let mut dir = vec![None; n];
        dir[guess.x.0] = Some(Direction::Cw);
        dir[guess.y.0] = Some(Direction::Ccw);
        let base = (guess.edge + 1) % n;
        let at_pos = (0..n)
            .map(|u| prep.instance.initial().object_of(AgentId((base + u) % n)))
            .collect();
        GuessAnalysis {
            prep,
            guess,
            dir,
            wrong: false,
            at_pos,
            counts: None,
        }
    }

    pub fn decided(&self, o: ObjectId) -> Option<Direction> {
        self.dir[o.0]
    }

    pub fn is_wrong(&self) -> bool {
        self.wrong
    }

    fn n(&self) -> usize {
        self.prep.instance.n()
    }

    fn pos(&self, o: ObjectId) -> usize {
        let n = self.n();
        let s = self.prep.instance.initial().holder_of(o).0;
        cw_distance((self.guess.edge + 1) % n, s, n)
    }

    fn movers(&self) -> impl Iterator<Item = ObjectId> + '_ {
        let t = &self.prep.table;
        let g = self.guess;
        (0..self.n())
            .map(ObjectId)
            .filter(move |&o| !t.is_stationary(o) && o != g.x && o != g.y)
    }

    fn decide(&mut self, o: ObjectId, d: Direction) -> bool {
        match self.dir[o.0] {
            None => {
                self.dir[o.0] = Some(d);
                self.counts = None;
                true
            }
            Some(e) => {
                if e != d {
                    self.wrong = true;
                }
                false
            }
        }
    }

    /// Run the decided-object rules and the promotion of conditional
    /// directions inside the guessed objects' lists to a fixpoint.
    pub fn infer(&mut self) {
        loop {
            self.infer_decided();
            if self.wrong || !self.promote_guessed() || self.wrong {
                break;
            }
        }
    }

    /// The five decided-object rules, applied until nothing changes.
    pub fn infer_decided(&mut self) {
        let t = &self.prep.table;
        let g = self.guess;
        let movers: Vec<ObjectId> = self.movers().collect();
        loop {
            let mut changed = false;

            // Opposite to a guessed object.
            for &p in &movers {
                if t.is_opposite(p, g.x) {
                    changed |= self.decide(p, Direction::Ccw);
                }
                if t.is_opposite(p, g.y) {
                    changed |= self.decide(p, Direction::Cw);
                }
            }

            // Absent from every list of a guessed object.
            for c in [Direction::Cw, Direction::Ccw] {
                let phi = g.phi(c);
                for &p in &movers {
                    let shared = t.shared(phi, p, c);
                    if shared.is_empty() {
                        changed |= self.decide(p, c.flip());
                    } else if shared.iter().all(|s| s.swap_edge.is_none()) {
                        changed |= self.decide(p, c);
                    }
                }
            }

            // A guessed list with a member decided against the guessed object.
            for c in [Direction::Cw, Direction::Ccw] {
                for list in t.lists_along(g.phi(c), c) {
                    let against: Vec<ObjectId> = list
                        .iter()
                        .copied()
                        .filter(|&q| self.dir[q.0] == Some(c.flip()))
                        .collect();
                    match against.len() {
                        0 => {}
                        1 => {
                            for &q in list {
                                if q != against[0] {
                                    changed |= self.decide(q, c);
                                }
                            }
                        }
                        _ => self.wrong = true,
                    }
                }
            }

            // Destination off both guessed paths.
            if !t.is_opposite(g.x, g.y) {
                let px = t.path(g.x, Direction::Cw);
                let py = t.path(g.y, Direction::Ccw);
                for &q in &movers {
                    let dest = self.prep.instance.target().holder_of(q).0;
                    if px.vertex_offset(dest).is_some() || py.vertex_offset(dest).is_some() {
                        continue;
                    }
                    for c in [Direction::Cw, Direction::Ccw] {
                        if t.shields(g.phi(c), q, c) {
                            changed |= self.decide(q, c.flip());
                        }
                    }
                }
            }

            // Starting between a guessed object and a decided object that
            // never meets the other guessed object.
            let n = self.n();
            for d in [Direction::Cw, Direction::Ccw] {
                let other = g.phi(d.flip());
                for &q in &movers {
                    if self.dir[q.0] != Some(d) || !t.shared(q, other, d).is_empty() {
                        continue;
                    }
                    let uq = self.pos(q);
                    let range = match d {
                        Direction::Cw => 1..uq,
                        Direction::Ccw => uq + 1..n - 1,
                    };
                    for u in range {
                        let r = self.at_pos[u];
                        if t.is_stationary(r) {
                            continue;
                        }
                        if t.shields(q, r, d) {
                            changed |= self.decide(r, d.flip());
                        } else if t.shields(other, r, d.flip()) {
                            changed |= self.decide(r, d);
                        }
                    }
                }
            }

            if self.wrong || !changed {
                break;
            }
        }
    }

    fn promote_guessed(&mut self) -> bool {
        let mut changed = false;
        for c in [Direction::Cw, Direction::Ccw] {
            let phi = self.guess.phi(c);
            let path = *self.prep.table.path(phi, c);
            for i in 0..path.len {
                let pd = self.infer_p_decided(phi, path.edge(i));
                if pd.conflict {
                    self.wrong = true;
                    return false;
                }
                for (q, s) in pd.members {
                    if let Some(s) = s {
                        changed |= self.decide(q, s);
                    }
                }
            }
        }
        changed
    }

    fn counts(&mut self) -> &Counts {
        if self.counts.is_none() {
            let n = self.n();
            let mut c = Counts {
                cw: vec![0; n + 1],
                ccw: vec![0; n + 1],
                open: vec![0; n + 1],
                stat: vec![0; n + 1],
            };
            for u in 0..n {
                let o = self.at_pos[u];
                let stat = self.prep.table.is_stationary(o);
                let d = self.dir[o.0];
                c.cw[u + 1] = c.cw[u] + usize::from(!stat && d == Some(Direction::Cw));
                c.ccw[u + 1] = c.ccw[u] + usize::from(!stat && d == Some(Direction::Ccw));
                c.open[u + 1] = c.open[u] + usize::from(!stat && d.is_none());
                c.stat[u + 1] = c.stat[u] + usize::from(stat);
            }
            self.counts = Some(c);
        }
        self.counts.as_ref().unwrap()
    }

    /// Clockwise movers strictly between `a` and `x`, going clockwise from
    /// `a`, assuming `a` moves clockwise.
    fn cw_before_x(&mut self, a: ObjectId) -> Option<i64> {
        let g = self.guess;
        if a == g.x {
            return Some(-1);
        }
        let t = &self.prep.table;
        let shared = t.shared(a, g.y, Direction::Cw);
        if let Some(first) = shared.iter().min_by_key(|s| s.q_first) {
            let k = first.swap_edge?;
            let idx = t.path(g.y, Direction::Ccw).edge_offset(k)?;
            return Some(idx as i64 - 1);
        }
        let n = self.n();
        let ua = self.pos(a);
        let theta_cw = self.prep.cw_movers as i64;
        let c = self.counts();
        if Counts::range(&c.open, ua, n - 1) == 0 {
            Some(Counts::range(&c.cw, ua, n - 1) as i64)
        } else if Counts::range(&c.open, 0, ua) == 0 {
            Some(theta_cw - 2 - Counts::range(&c.cw, 0, ua) as i64)
        } else {
            None
        }
    }

    /// Counterclockwise movers strictly between `y` and `b`, going
    /// clockwise from `y`, assuming `b` moves counterclockwise.
    fn ccw_after_y(&mut self, b: ObjectId) -> Option<i64> {
        let g = self.guess;
        if b == g.y {
            return Some(-1);
        }
        let t = &self.prep.table;
        let shared = t.shared(b, g.x, Direction::Ccw);
        if let Some(first) = shared.iter().min_by_key(|s| s.q_first) {
            let k = first.swap_edge?;
            let idx = t.path(g.x, Direction::Cw).edge_offset(k)?;
            return Some(idx as i64 - 1);
        }
        let n = self.n();
        let ub = self.pos(b);
        let psi = self.prep.ccw_movers as i64;
        let c = self.counts();
        if Counts::range(&c.open, 0, ub) == 0 {
            Some(Counts::range(&c.ccw, 0, ub) as i64)
        } else if Counts::range(&c.open, ub, n - 1) == 0 {
            Some(psi - 2 - Counts::range(&c.ccw, ub, n - 1) as i64)
        } else {
            None
        }
    }

    /// Clockwise movers starting strictly inside the clockwise arc from `a`
    /// to `b`, for `a` moving clockwise and `b` counterclockwise.
    fn cw_between(&mut self, a: ObjectId, b: ObjectId) -> Option<i64> {
        let k = self.cw_before_x(a)?;
        let m = self.ccw_after_y(b)?;
        let n = self.n() as i64;
        let (ua, ub) = (self.pos(a), self.pos(b));
        let psi = self.prep.ccw_movers as i64;
        let c = self.counts();
        if ua < ub {
            let stat = Counts::range(&c.stat, ub, n as usize - 1) as i64;
            Some(k - ((n - 2 - ub as i64) - stat - (psi - 2 - m)))
        } else {
            let stat = Counts::range(&c.stat, 0, ub) as i64;
            Some(k + 1 + (ub as i64 - 1 - stat - m))
        }
    }

    /// The meeting tuple `S(p, e, q)` for `q ∈ C(p, e)`, when the meeting
    /// edge can be pinned down.
    pub fn meet_edge(&mut self, p: ObjectId, edge: usize, q: ObjectId) -> Option<STuple> {
        let t = &self.prep.table;
        let d = t.edge_direction(p, edge);
        let (a, b) = match d {
            Direction::Cw => (p, q),
            Direction::Ccw => (q, p),
        };
        let shared = t.shared(a, b, Direction::Cw);
        let i = t.path(a, Direction::Cw).edge_offset(edge)?;
        let piece = shared.iter().find(|s| s.contains_edge_offset(i))?;
        let rank = shared.iter().filter(|s| s.q_first < piece.q_first).count() as i64;

        let n = self.n();
        let (sp, sq, sphi) = {
            let init = self.prep.instance.initial();
            (
                init.holder_of(p).0,
                init.holder_of(q).0,
                init.holder_of(self.guess.phi(d)).0,
            )
        };
        let dist = |to: usize| match d {
            Direction::Cw => cw_distance(sp, to, n),
            Direction::Ccw => cw_distance(to, sp, n),
        };
        let side = p != self.guess.phi(d) && dist(sq) < dist(sphi);

        let before = self.cw_between(a, b)?;
        let offset = before + rank * self.prep.cw_movers as i64;
        let bpath = self.prep.table.path(b, Direction::Ccw);
        let meet = (0..bpath.len as i64)
            .contains(&offset)
            .then(|| bpath.edge(offset as usize));
        Some(STuple {
            meet_edge: meet,
            side,
            successful: meet == Some(edge),
        })
    }

    /// Conditional directions of the members of `C(p, e)` assuming `p`
    /// passes `e`.
    pub fn infer_p_decided(&mut self, p: ObjectId, edge: usize) -> PDecided {
        let t = &self.prep.table;
        let (d, list) = t.list(p, edge);
        let list = list.to_vec();
        let mut conflict = false;
        let mut members = Vec::with_capacity(list.len());
        for &q in &list {
            if let Some(dq) = self.dir[q.0] {
                members.push((q, Some(dq)));
                continue;
            }
            let shielded = self.prep.table.shields(q, p, d);
            let unsuccessful = matches!(self.meet_edge(p, edge, q), Some(s) if !s.successful);
            if shielded && unsuccessful {
                conflict = true;
            }
            let s = if shielded {
                Some(d.flip())
            } else if unsuccessful {
                Some(d)
            } else {
                None
            };
            members.push((q, s));
        }
        let mut pd = PDecided {
            direction: d,
            members,
            conflict,
        };
        match pd.count(Some(d.flip())) {
            0 => {
                let open: Vec<usize> = (0..pd.members.len())
                    .filter(|&i| pd.members[i].1.is_none())
                    .collect();
                match open.len() {
                    0 => pd.conflict = true,
                    1 => pd.members[open[0]].1 = Some(d.flip()),
                    _ => {}
                }
            }
            1 => {
                for m in pd.members.iter_mut() {
                    if m.1.is_none() {
                        m.1 = Some(d);
                    }
                }
            }
            _ => pd.conflict = true,
        }
        pd
    }

    /// Exactness clauses for every candidate list, plus units for the guess
    /// and every decided object.
    pub fn build_psi_e(&mut self) -> TwoSat {
        let n = self.n();
        let mut f = TwoSat::new(n);
        if self.wrong {
            f.add_bottom();
            return f;
        }
        for o in (0..n).map(ObjectId) {
            if let Some(d) = self.dir[o.0] {
                f.add_unit(lit(o, d));
            }
        }
        for p in (0..n).map(ObjectId) {
            if self.prep.table.is_stationary(p) {
                continue;
            }
            for d in [Direction::Ccw, Direction::Cw] {
                if self.dir[p.0] == Some(d.flip()) {
                    continue;
                }
                let path = *self.prep.table.path(p, d);
                for i in 0..path.len {
                    let edge = path.edge(i);
                    let pd = self.infer_p_decided(p, edge);
                    let open = pd.count(None);
                    if pd.conflict || (pd.count(Some(d.flip())) != 1 && open == 0) {
                        f.add_unit(lit(p, d).negate());
                        continue;
                    }
                    for &(q, s) in &pd.members {
                        if self.dir[q.0].is_none() {
                            if let Some(s) = s {
                                f.add_implication(lit(p, d), lit(q, s));
                            }
                        }
                    }
                    if self.guess.guessed(p).is_some() {
                        let undecided: Vec<ObjectId> = pd
                            .members
                            .iter()
                            .map(|m| m.0)
                            .filter(|q| self.dir[q.0].is_none())
                            .collect();
                        match undecided.len() {
                            0 => {}
                            2 => {
                                let (a, b) = (undecided[0], undecided[1]);
                                f.add_clause(Lit::pos(a.0), Lit::pos(b.0));
                                f.add_clause(Lit::neg(a.0), Lit::neg(b.0));
                            }
                            _ => f.add_bottom(),
                        }
                    }
                }
            }
        }
        f
    }

    /// `φ = ψ_h ∧ ψ_e` for this guess; just `⊥` once the guess is known
    /// to be wrong.
    pub fn formula(&mut self) -> TwoSat {
        let psi_e = self.build_psi_e();
        if psi_e.is_bottom() {
            return psi_e;
        }
        let mut f = self.prep.psi_h.clone();
        f.extend(&psi_e);
        f
    }

    /// Undecided, decided-against-a-guessed-list and remaining objects.
    pub fn partition(&self) -> (Vec<ObjectId>, Vec<ObjectId>, Vec<ObjectId>) {
        let t = &self.prep.table;
        let mut in_d = vec![false; self.n()];
        for c in [Direction::Cw, Direction::Ccw] {
            for list in t.lists_along(self.guess.phi(c), c) {
                for &q in list {
                    if self.dir[q.0] == Some(c.flip()) {
                        in_d[q.0] = true;
                    }
                }
            }
        }
        let (mut u, mut d, mut d0) = (Vec::new(), Vec::new(), Vec::new());
        for o in (0..self.n()).map(ObjectId) {
            if in_d[o.0] {
                d.push(o);
            } else if self.dir[o.0].is_none() && !t.is_stationary(o) {
                u.push(o);
            } else {
                d0.push(o);
            }
        }
        (u, d, d0)
    }
}

/// Result of the full decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub reachable: bool,
    /// Agents `(i, i + 1)` of the first swap, for a non-empty trace.
    pub first_swap_edge: Option<(AgentId, AgentId)>,
    pub selection: Option<Selection>,
    pub trace: Option<Vec<Swap>>,
    pub guesses_examined: usize,
    /// Guesses whose formula had a model the simulation rejected.
    pub gate_rejections: usize,
}

impl Solution {
    fn no(guesses_examined: usize, gate_rejections: usize) -> Self {
        Solution {
            reachable: false,
            first_swap_edge: None,
            selection: None,
            trace: None,
            guesses_examined,
            gate_rejections,
        }
    }
}

/// Rule 1 reduction plus the checks that make the result trivially No.
/// Returns `None` when the answer is No without further work.
pub fn normalise(instance: &Instance) -> Result<Option<Instance>, SolveError> {
    if !instance.is_cycle() {
        return Err(SolveError::TopologyMismatch);
    }
    if instance.initial_beats_target().is_some() {
        // Still report a malformed instance as an error.
        instance.apply_rule_1()?;
        return Ok(None);
    }
    let reduced = instance.apply_rule_1()?;
    match theta(&reduced) {
        Ok(_) => Ok(Some(reduced)),
        Err(GeometryError::NotDivisible { .. }) => Ok(None),
        Err(GeometryError::NotACycle) => Err(SolveError::TopologyMismatch),
    }
}

/// Decide Reachable Assignment on a cycle and produce a witness trace.
pub fn solve(instance: &Instance) -> Result<Solution, SolveError> {
    solve_observed(instance, |_, _| {})
}

/// Like [`solve`], calling `on_guess(edge, formula)` for every examined guess.
pub fn solve_observed(
    instance: &Instance,
    mut on_guess: impl FnMut(usize, &TwoSat),
) -> Result<Solution, SolveError> {
    let n = instance.n();
    let Some(reduced) = normalise(instance)? else {
        return Ok(Solution::no(0, 0));
    };
    if reduced.initial() == reduced.target() {
        return Ok(Solution {
            reachable: true,
            first_swap_edge: None,
            selection: None,
            trace: Some(Vec::new()),
            guesses_examined: 0,
            gate_rejections: 0,
        });
    }
    let prep = Prepared::new(reduced)?;
    let mut examined = 0;
    let mut rejected = 0;
    for edge in 0..n {
        let (a, b) = (AgentId(edge), AgentId((edge + 1) % n));
        if !is_rational_swap(prep.instance(), prep.instance().initial(), a, b) {
            continue;
        }
        examined += 1;
        let outcome = prep.solve_first_swap(edge);
        on_guess(edge, &outcome.formula);
        match outcome.verdict {
            FirstSwapVerdict::Yes { selection, trace } => {
                let first = trace.first().map(|s| (s.a, s.b));
                return Ok(Solution {
                    reachable: true,
                    first_swap_edge: first,
                    selection: Some(selection),
                    trace: Some(trace),
                    guesses_examined: examined,
                    gate_rejections: rejected,
                });
            }
            FirstSwapVerdict::GateRejected(_) => rejected += 1,
            FirstSwapVerdict::Unsatisfiable => {}
        }
    }
    Ok(Solution::no(examined, rejected))
}

/// Prepare `instance` (Rule 1 applied) and solve the single guess at `edge`.
pub fn solve_first_swap(instance: &Instance, edge: usize) -> Result<FirstSwapOutcome, SolveError> {
    if edge >= instance.n() {
        return Err(SolveError::EdgeOutOfRange {
            edge,
            n: instance.n(),
        });
    }
    let reduced = if instance.is_cycle() {
        instance.apply_rule_1()?
    } else {
        return Err(SolveError::TopologyMismatch);
    };
    Ok(Prepared::new(reduced)?.solve_first_swap(edge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Topology;

    fn ids(v: &[usize]) -> Vec<ObjectId> {
        v.iter().map(|&o| ObjectId(o)).collect()
    }

    fn fig1(third: &[usize]) -> Instance {
        Instance::new(
            Topology::Cycle,
            vec![ids(&[1, 0]), ids(&[2, 1]), ids(third)],
            ids(&[0, 1, 2]),
            ids(&[1, 2, 0]),
        )
        .unwrap()
    }

    #[test]
    fn fig1_yes_with_two_swaps() {
        let sol = solve(&fig1(&[0, 1, 2])).unwrap();
        assert!(sol.reachable);
        let trace = sol.trace.unwrap();
        let pairs: Vec<_> = trace.iter().map(|s| (s.a.0, s.b.0)).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 0)]);
        assert_eq!(sol.first_swap_edge, Some((AgentId(1), AgentId(2))));
    }

    #[test]
    fn fig1_truncated_is_no() {
        assert!(!solve(&fig1(&[0, 2])).unwrap().reachable);
    }

    #[test]
    fn non_cycle_rejected() {
        let inst = Instance::new(
            Topology::Graph(vec![(0, 1), (1, 2)]),
            vec![ids(&[0]), ids(&[1]), ids(&[2])],
            ids(&[0, 1, 2]),
            ids(&[0, 1, 2]),
        )
        .unwrap();
        assert_eq!(solve(&inst), Err(SolveError::TopologyMismatch));
    }

    #[test]
    fn identity_is_trivially_yes() {
        let inst = fig1(&[0, 1, 2]).with_target(ids(&[0, 1, 2])).unwrap();
        let sol = solve(&inst).unwrap();
        assert!(sol.reachable);
        assert_eq!(sol.trace, Some(Vec::new()));
        assert_eq!(sol.guesses_examined, 0);
    }

    #[test]
    fn fig3_guess_keeps_only_the_valid_selection() {
        let inst = Instance::new(
            Topology::Cycle,
            vec![
                ids(&[2, 1, 0]),
                ids(&[0, 2, 3, 1]),
                ids(&[3, 0, 2]),
                ids(&[1, 2, 3]),
            ],
            ids(&[0, 1, 2, 3]),
            ids(&[2, 0, 3, 1]),
        )
        .unwrap();
        let sol = solve(&inst).unwrap();
        assert!(sol.reachable);
        assert_eq!(sol.selection.unwrap().to_string(), "1010");
    }
}
