//! Rational swaps, swap traces and the Greedy Swap simulation on cycles.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{AgentId, Assignment, Instance, ObjectId};
use crate::selection::{Direction, Selection};

/// One exchange: agent `a` gave `oa` to agent `b` and received `ob`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Swap {
    pub a: AgentId,
    pub b: AgentId,
    pub oa: ObjectId,
    pub ob: ObjectId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapTrace {
    pub start: Assignment,
    pub swaps: Vec<Swap>,
    pub end: Assignment,
}

pub fn is_rational_swap(instance: &Instance, state: &Assignment, i: AgentId, j: AgentId) -> bool {
    if !instance.adjacent(i, j) {
        return false;
    }
    let (oi, oj) = (state.object_of(i), state.object_of(j));
    instance.accepts(i, oj, oi) && instance.accepts(j, oi, oj)
}

/// Replay `swaps` from the initial assignment and check each one is a
/// rational swap recorded with the right objects, ending at the target.
pub fn verify_trace(instance: &Instance, swaps: &[Swap]) -> Result<(), TraceError> {
    let mut state = instance.initial().clone();
    for (step, s) in swaps.iter().enumerate() {
        let n = instance.n();
        if s.a.0 >= n || s.b.0 >= n {
            return Err(TraceError::BadStep(step));
        }
        if state.object_of(s.a) != s.oa || state.object_of(s.b) != s.ob {
            return Err(TraceError::WrongObjects(step));
        }
        if !is_rational_swap(instance, &state, s.a, s.b) {
            return Err(TraceError::Irrational(step));
        }
        state.swap(s.a, s.b);
    }
    if &state != instance.target() {
        return Err(TraceError::WrongEnd);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("step {0} names an agent outside the instance")]
    BadStep(usize),
    #[error("step {0} records objects the agents do not hold")]
    WrongObjects(usize),
    #[error("step {0} is not a rational swap")]
    Irrational(usize),
    #[error("the trace does not end at the target assignment")]
    WrongEnd,
}

/// Whether `p` and `q` sit on adjacent agents, `p` about to move clockwise
/// and `q` counterclockwise, neither at its target.
pub fn in_swap_position(
    instance: &Instance,
    state: &Assignment,
    p: ObjectId,
    q: ObjectId,
    gamma: &Selection,
) -> bool {
    let n = instance.n();
    let (i, j) = (state.holder_of(p), state.holder_of(q));
    (i.0 + 1) % n == j.0
        && gamma.get(p) == Direction::Cw
        && gamma.get(q) == Direction::Ccw
        && instance.target().holder_of(p) != i
        && instance.target().holder_of(q) != j
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyFailure {
    /// The initial assignment differs from the target but every object has
    /// the same direction.
    AllSameDirection,
    /// Two objects met in swap position on `edge` but the swap is irrational.
    IrrationalMeeting {
        p: ObjectId,
        q: ObjectId,
        edge: usize,
    },
    /// No pair is in swap position and the target is not reached.
    StalledShortOfTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOutcome {
    Reached(SwapTrace),
    Failed(GreedyFailure),
}

impl GreedyOutcome {
    pub fn is_reached(&self) -> bool {
        matches!(self, GreedyOutcome::Reached(_))
    }
}

/// Chooses which swap-position edge fires next. Edges are named by their
/// clockwise endpoint.
pub trait PairOrder {
    fn pick(&mut self, active: &BTreeSet<usize>) -> usize;
}

/// Fire the edge whose clockwise-moving holder has the smallest index.
#[derive(Debug, Default, Clone, Copy)]
pub struct LowestHolder;

impl PairOrder for LowestHolder {
    fn pick(&mut self, active: &BTreeSet<usize>) -> usize {
        *active.first().expect("pick on empty set")
    }
}

/// Fire a uniformly random swap-position edge.
pub struct RandomOrder<R>(pub R);

impl<R: Rng> PairOrder for RandomOrder<R> {
    fn pick(&mut self, active: &BTreeSet<usize>) -> usize {
        let k = self.0.gen_range(0..active.len());
        *active.iter().nth(k).unwrap()
    }
}

pub fn greedy_swap(instance: &Instance, gamma: &Selection) -> GreedyOutcome {
    greedy_swap_with(instance, gamma, &mut LowestHolder)
}

/// Simulate the selection: repeatedly swap a pair in swap position until
/// none is left.
///
/// Panics if the instance is not a cycle.
pub fn greedy_swap_with(
    instance: &Instance,
    gamma: &Selection,
    order: &mut impl PairOrder,
) -> GreedyOutcome {
    assert!(instance.is_cycle(), "greedy swap runs on cycles only");
    let n = instance.n();
    let start = instance.initial().clone();
    if &start == instance.target() {
        return GreedyOutcome::Reached(SwapTrace {
            end: start.clone(),
            start,
            swaps: Vec::new(),
        });
    }
    let first = gamma.get(ObjectId(0));
    if gamma.directions().iter().all(|&d| d == first) {
        return GreedyOutcome::Failed(GreedyFailure::AllSameDirection);
    }

    let mut state = start.clone();
    let ready = |state: &Assignment, k: usize| {
        let p = state.object_of(AgentId(k));
        let q = state.object_of(AgentId((k + 1) % n));
        in_swap_position(instance, state, p, q, gamma)
    };
    let mut active: BTreeSet<usize> = (0..n).filter(|&k| ready(&state, k)).collect();
    let mut swaps = Vec::new();
    while !active.is_empty() {
        let k = order.pick(&active);
        let (i, j) = (AgentId(k), AgentId((k + 1) % n));
        let (p, q) = (state.object_of(i), state.object_of(j));
        if !(instance.accepts(i, q, p) && instance.accepts(j, p, q)) {
            return GreedyOutcome::Failed(GreedyFailure::IrrationalMeeting { p, q, edge: k });
        }
        state.swap(i, j);
        swaps.push(Swap {
            a: i,
            b: j,
            oa: p,
            ob: q,
        });
        for e in [(k + n - 1) % n, k, (k + 1) % n] {
            if ready(&state, e) {
                active.insert(e);
            } else {
                active.remove(&e);
            }
        }
    }
    if &state == instance.target() {
        GreedyOutcome::Reached(SwapTrace {
            start,
            swaps,
            end: state,
        })
    } else {
        GreedyOutcome::Failed(GreedyFailure::StalledShortOfTarget)
    }
}
