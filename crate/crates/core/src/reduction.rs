//! Reduction from Reachable Object on complete graphs to Reachable
//! Assignment on complete graphs with twice as many agents.

use thiserror::Error;

use crate::model::{AgentId, Instance, ModelError, ObjectId, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("the input graph is not a complete graph")]
    NotAClique,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Can `agent` obtain `object`? The instance's target is not used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoInstance {
    pub instance: Instance,
    pub agent: AgentId,
    pub object: ObjectId,
}

fn is_clique(instance: &Instance) -> bool {
    let n = instance.n();
    (0..n).all(|i| (i + 1..n).all(|j| instance.adjacent(AgentId(i), AgentId(j))))
}

/// Agents `0..n` are the originals and `n + j` is the copy of agent `j`.
/// Object `n + j` is the initial object of copy `n + j`.
///
/// Copies other than the one of `agent` rank their head object first and
/// then the rest of `X \ {x_l}` in one shared order, so any arrangement of
/// those objects among them can be sorted by rational swaps.
pub fn reduce_ro_to_ra(ro: &RoInstance) -> Result<Instance, ReductionError> {
    let inst = &ro.instance;
    if !is_clique(inst) {
        return Err(ReductionError::NotAClique);
    }
    let n = inst.n();
    let init = inst.initial();
    let x = |j: usize| init.object_of(AgentId(j));
    let i = ro.agent.0;
    let l = init.holder_of(ro.object).0;

    let mut prefs = Vec::with_capacity(2 * n);
    let mut target = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut list = vec![ObjectId(n + j)];
        list.extend_from_slice(inst.preferences(AgentId(j)));
        prefs.push(list);
        target.push(ObjectId(n + j));
    }
    for j in 0..n {
        let list = if j == i {
            vec![x(l), ObjectId(n + i)]
        } else {
            let head = if j == l { x(i) } else { x(j) };
            let mut list = vec![head];
            for k in (0..n).rev() {
                if k != l && x(k) != head {
                    list.push(x(k));
                }
            }
            list.push(ObjectId(n + j));
            list
        };
        target.push(list[0]);
        prefs.push(list);
    }
    let initial: Vec<ObjectId> = (0..n).map(x).chain((n..2 * n).map(ObjectId)).collect();
    let edges = (0..2 * n)
        .flat_map(|a| (a + 1..2 * n).map(move |b| (a, b)))
        .collect();
    Ok(Instance::new(Topology::Graph(edges), prefs, initial, target)?)
}
