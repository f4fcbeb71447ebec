//! Exhaustive breadth-first search over assignments, for small instances.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::dynamics::{greedy_swap, is_rational_swap, Swap};
use crate::geometry::CandidateTable;
use crate::model::{AgentId, Assignment, Instance, ModelError, ObjectId};
use crate::selection::Selection;

pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} agents, above the cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    /// A shortest sequence of rational swaps reaching the goal.
    Yes(Vec<Swap>),
    No,
}

impl OracleAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleAnswer::Yes(_))
    }
}

fn check_cap(instance: &Instance, cap: usize) -> Result<(), OracleError> {
    if instance.n() > cap {
        return Err(OracleError::InstanceTooLarge {
            n: instance.n(),
            cap,
        });
    }
    Ok(())
}

fn bfs(instance: &Instance, goal: impl Fn(&Assignment) -> bool) -> OracleAnswer {
    let start = instance.initial().clone();
    if goal(&start) {
        return OracleAnswer::Yes(Vec::new());
    }
    let edges = instance.edges();
    let mut parent: HashMap<Assignment, Option<(Assignment, Swap)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        for &(a, b) in &edges {
            if !is_rational_swap(instance, &state, a, b) {
                continue;
            }
            let mut next = state.clone();
            next.swap(a, b);
            if parent.contains_key(&next) {
                continue;
            }
            let swap = Swap {
                a,
                b,
                oa: state.object_of(a),
                ob: state.object_of(b),
            };
            parent.insert(next.clone(), Some((state.clone(), swap)));
            if goal(&next) {
                let mut swaps = Vec::new();
                let mut cur = next;
                while let Some(Some((prev, s))) = parent.get(&cur) {
                    swaps.push(*s);
                    cur = prev.clone();
                }
                swaps.reverse();
                return OracleAnswer::Yes(swaps);
            }
            queue.push_back(next);
        }
    }
    OracleAnswer::No
}

/// Is the target assignment reachable by rational swaps?
pub fn oracle_reachable_assignment(instance: &Instance, cap: usize) -> Result<OracleAnswer, OracleError> {
    check_cap(instance, cap)?;
    if instance.initial_beats_target().is_some() {
        return Ok(OracleAnswer::No);
    }
    let reduced = instance.apply_rule_1()?;
    let target = reduced.target().clone();
    Ok(bfs(&reduced, |s| *s == target))
}

/// Can `agent` obtain `object` by rational swaps? The instance's target is
/// ignored.
pub fn oracle_reachable_object(
    instance: &Instance,
    agent: AgentId,
    object: ObjectId,
    cap: usize,
) -> Result<OracleAnswer, OracleError> {
    check_cap(instance, cap)?;
    Ok(bfs(instance, |s| s.object_of(agent) == object))
}

/// All selections for which Greedy Swap reaches the target, as bit masks.
/// Expects a cycle instance already reduced by Rule 1.
pub fn enumerate_valid_selections(instance: &Instance) -> Vec<u64> {
    let n = instance.n();
    assert!(n <= 14, "enumeration is limited to 14 objects");
    (0..1u64 << n)
        .filter(|&m| greedy_swap(instance, &Selection::from_mask(m, n)).is_reached())
        .collect()
}

/// The same set computed from the valid-selection characterisation.
pub fn enumerate_characterised_selections(instance: &Instance, table: &CandidateTable) -> Vec<u64> {
    let n = instance.n();
    assert!(n <= 14, "enumeration is limited to 14 objects");
    let trivial = instance.initial() == instance.target();
    (0..1u64 << n)
        .filter(|&m| {
            let gamma = Selection::from_mask(m, n);
            let uniform = m == 0 || m == (1 << n) - 1;
            trivial || (!uniform && crate::geometry::is_valid(&gamma, table))
        })
        .collect()
}
