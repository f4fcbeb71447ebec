//! Agents, objects, preference profiles and assignments.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an agent, `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub usize);

/// Index of an object, `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "agent {}", self.0)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("expected {expected} entries in {what}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("index {index} out of range 0..{n} in {what}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        n: usize,
    },
    #[error("{what} is not a bijection: {object} appears twice")]
    NotBijective { what: &'static str, object: ObjectId },
    #[error("preference list of {agent} lists {object} twice")]
    DuplicatePreference { agent: AgentId, object: ObjectId },
    #[error("a cycle needs at least 3 agents, got {0}")]
    CycleTooSmall(usize),
    #[error("an instance needs at least one agent")]
    Empty,
    #[error("invalid edge ({0}, {1})")]
    BadEdge(usize, usize),
    #[error("malformed instance: target object {object} missing from the list of {agent}")]
    TargetMissing { agent: AgentId, object: ObjectId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Cycle,
    Graph(Vec<(usize, usize)>),
}

/// A bijection between agents and objects, stored in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    holding: Vec<ObjectId>,
    holder: Vec<AgentId>,
}

impl Assignment {
    pub fn new(holding: Vec<ObjectId>) -> Result<Self, ModelError> {
        Self::checked(holding, "assignment")
    }

    fn checked(holding: Vec<ObjectId>, what: &'static str) -> Result<Self, ModelError> {
        let n = holding.len();
        let mut holder = vec![AgentId(usize::MAX); n];
        for (a, &o) in holding.iter().enumerate() {
            if o.0 >= n {
                return Err(ModelError::OutOfRange {
                    what,
                    index: o.0,
                    n,
                });
            }
            if holder[o.0].0 != usize::MAX {
                return Err(ModelError::NotBijective { what, object: o });
            }
            holder[o.0] = AgentId(a);
        }
        Ok(Assignment { holding, holder })
    }

    pub fn identity(n: usize) -> Self {
        Assignment {
            holding: (0..n).map(ObjectId).collect(),
            holder: (0..n).map(AgentId).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.holding.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holding.is_empty()
    }

    #[inline]
    pub fn object_of(&self, a: AgentId) -> ObjectId {
        self.holding[a.0]
    }

    #[inline]
    pub fn holder_of(&self, o: ObjectId) -> AgentId {
        self.holder[o.0]
    }

    pub fn swap(&mut self, a: AgentId, b: AgentId) {
        let (oa, ob) = (self.holding[a.0], self.holding[b.0]);
        self.holding[a.0] = ob;
        self.holding[b.0] = oa;
        self.holder[oa.0] = b;
        self.holder[ob.0] = a;
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.holding
    }
}

const UNRANKED: u32 = u32::MAX;

/// A housing market on a graph: agents, strict preference lists, the initial
/// assignment and the target assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    topology: Topology,
    adjacency: Option<Vec<bool>>,
    preferences: Vec<Vec<ObjectId>>,
    rank: Vec<u32>,
    initial: Assignment,
    target: Assignment,
}

impl Instance {
    pub fn new(
        topology: Topology,
        preferences: Vec<Vec<ObjectId>>,
        initial: Vec<ObjectId>,
        target: Vec<ObjectId>,
    ) -> Result<Self, ModelError> {
        let n = preferences.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        for (what, len) in [("initial", initial.len()), ("target", target.len())] {
            if len != n {
                return Err(ModelError::LengthMismatch {
                    what,
                    expected: n,
                    found: len,
                });
            }
        }
        let adjacency = match &topology {
            Topology::Cycle => {
                if n < 3 {
                    return Err(ModelError::CycleTooSmall(n));
                }
                None
            }
            Topology::Graph(edges) => {
                let mut adj = vec![false; n * n];
                for &(i, j) in edges {
                    if i >= n || j >= n || i == j || adj[i * n + j] {
                        return Err(ModelError::BadEdge(i, j));
                    }
                    adj[i * n + j] = true;
                    adj[j * n + i] = true;
                }
                Some(adj)
            }
        };
        let initial = Assignment::checked(initial, "initial")?;
        let target = Assignment::checked(target, "target")?;

        let mut rank = vec![UNRANKED; n * n];
        for (a, list) in preferences.iter().enumerate() {
            for (r, &o) in list.iter().enumerate() {
                if o.0 >= n {
                    return Err(ModelError::OutOfRange {
                        what: "preferences",
                        index: o.0,
                        n,
                    });
                }
                if rank[a * n + o.0] != UNRANKED {
                    return Err(ModelError::DuplicatePreference {
                        agent: AgentId(a),
                        object: o,
                    });
                }
                rank[a * n + o.0] = r as u32;
            }
            // An unlisted initial object sits below every listed one.
            let init = initial.object_of(AgentId(a));
            if rank[a * n + init.0] == UNRANKED {
                rank[a * n + init.0] = list.len() as u32;
            }
        }

        Ok(Instance {
            n,
            topology,
            adjacency,
            preferences,
            rank,
            initial,
            target,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self.topology, Topology::Cycle)
    }

    pub fn adjacent(&self, a: AgentId, b: AgentId) -> bool {
        match &self.adjacency {
            None => {
                let n = self.n;
                a != b && ((a.0 + 1) % n == b.0 || (b.0 + 1) % n == a.0)
            }
            Some(adj) => adj[a.0 * self.n + b.0],
        }
    }

    /// All edges of the underlying graph as `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(AgentId, AgentId)> {
        match &self.topology {
            Topology::Cycle => (0..self.n)
                .map(|i| {
                    let j = (i + 1) % self.n;
                    (AgentId(i.min(j)), AgentId(i.max(j)))
                })
                .collect(),
            Topology::Graph(edges) => edges
                .iter()
                .map(|&(i, j)| (AgentId(i.min(j)), AgentId(i.max(j))))
                .collect(),
        }
    }

    pub fn preferences(&self, a: AgentId) -> &[ObjectId] {
        &self.preferences[a.0]
    }

    pub fn all_preferences(&self) -> &[Vec<ObjectId>] {
        &self.preferences
    }

    pub fn initial(&self) -> &Assignment {
        &self.initial
    }

    pub fn target(&self) -> &Assignment {
        &self.target
    }

    /// Position of `o` in the list of `a`, if listed.
    pub fn rank(&self, a: AgentId, o: ObjectId) -> Option<usize> {
        let r = self.rank[a.0 * self.n + o.0];
        (r != UNRANKED && (r as usize) < self.preferences[a.0].len()).then_some(r as usize)
    }

    pub fn prefers(&self, a: AgentId, better: ObjectId, worse: ObjectId) -> bool {
        let row = &self.rank[a.0 * self.n..(a.0 + 1) * self.n];
        row[better.0] < row[worse.0]
    }

    /// Whether agent `a`, holding `old`, would rationally trade it for `new`.
    ///
    /// `new` must be listed, `old` must be an object `a` can ever hold (its
    /// initial object or something it ranks above it) and `a` must prefer
    /// `new`.
    #[inline]
    pub fn accepts(&self, a: AgentId, new: ObjectId, old: ObjectId) -> bool {
        let row = &self.rank[a.0 * self.n..(a.0 + 1) * self.n];
        let (rn, ro) = (row[new.0], row[old.0]);
        let init = row[self.initial.object_of(a).0];
        (rn as usize) < self.preferences[a.0].len() && ro <= init && rn < ro
    }

    /// Raw rank entry: list position, list length for an unlisted initial
    /// object, `u32::MAX` otherwise.
    #[inline]
    pub(crate) fn raw_rank(&self, a: AgentId, o: ObjectId) -> u32 {
        self.rank[a.0 * self.n + o.0]
    }

    /// An object whose initial holder is also its target holder.
    pub fn is_stationary(&self, o: ObjectId) -> bool {
        self.initial.holder_of(o) == self.target.holder_of(o)
    }

    /// Some agent that ranks its initial object strictly above its target.
    /// Such an instance can never reach its target.
    pub fn initial_beats_target(&self) -> Option<AgentId> {
        (0..self.n).map(AgentId).find(|&a| {
            let init = self.initial.object_of(a);
            let tgt = self.target.object_of(a);
            init != tgt && self.rank(a, tgt).is_some() && !self.prefers(a, tgt, init)
        })
    }

    /// Truncate every list just before its target object.
    pub fn apply_rule_1(&self) -> Result<Instance, ModelError> {
        let mut prefs = Vec::with_capacity(self.n);
        for a in (0..self.n).map(AgentId) {
            let t = self.target.object_of(a);
            let list = &self.preferences[a.0];
            let pos = list
                .iter()
                .position(|&o| o == t)
                .ok_or(ModelError::TargetMissing {
                    agent: a,
                    object: t,
                })?;
            prefs.push(list[pos..].to_vec());
        }
        Instance::new(
            self.topology.clone(),
            prefs,
            self.initial.objects().to_vec(),
            self.target.objects().to_vec(),
        )
    }

    /// A copy of this instance with a different target.
    pub fn with_target(&self, target: Vec<ObjectId>) -> Result<Instance, ModelError> {
        Instance::new(
            self.topology.clone(),
            self.preferences.clone(),
            self.initial.objects().to_vec(),
            target,
        )
    }
}

/// Agent-index arithmetic on the cycle `C_n`.
pub mod cycle {
    use super::AgentId;

    /// Number of clockwise steps from `from` to `to`.
    #[inline]
    pub fn cw_distance(from: usize, to: usize, n: usize) -> usize {
        (to + n - from) % n
    }

    /// Agents visited clockwise from `a` to `b`, both ends included.
    pub fn cycseq(a: AgentId, b: AgentId, n: usize) -> Vec<AgentId> {
        let len = cw_distance(a.0, b.0, n);
        (0..=len).map(|k| AgentId((a.0 + k) % n)).collect()
    }
}
