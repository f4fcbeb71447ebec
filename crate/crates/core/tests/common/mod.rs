//! Test-side helpers, including a brute-force search that shares no code
//! with the library's oracle.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use swapreach::{AgentId, Instance, ObjectId, RoInstance, Topology};

pub fn ids(v: &[usize]) -> Vec<ObjectId> {
    v.iter().map(|&o| ObjectId(o)).collect()
}

/// The triangle from the introduction, 0-based.
pub fn fig1() -> Instance {
    Instance::new(
        Topology::Cycle,
        vec![ids(&[1, 0]), ids(&[2, 1]), ids(&[0, 1, 2])],
        ids(&[0, 1, 2]),
        ids(&[1, 2, 0]),
    )
    .unwrap()
}

/// Position of `o` in `a`'s list, with unlisted objects ranked last.
fn pos(prefs: &[Vec<usize>], a: usize, o: usize) -> usize {
    prefs[a].iter().position(|&x| x == o).unwrap_or(usize::MAX)
}

fn wants(prefs: &[Vec<usize>], a: usize, new: usize, old: usize) -> bool {
    pos(prefs, a, new) != usize::MAX && pos(prefs, a, new) < pos(prefs, a, old)
}

/// Plain breadth-first search over assignments, from the raw lists.
/// Stops as soon as `goal` holds.
pub fn brute_force(instance: &Instance, goal: impl Fn(&[usize]) -> bool) -> bool {
    let n = instance.n();
    let prefs: Vec<Vec<usize>> = instance
        .all_preferences()
        .iter()
        .map(|l| l.iter().map(|o| o.0).collect())
        .collect();
    let edges: Vec<(usize, usize)> = instance.edges().iter().map(|&(a, b)| (a.0, b.0)).collect();
    let start: Vec<usize> = (0..n).map(|a| instance.initial().object_of(AgentId(a)).0).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if goal(&state) {
            return true;
        }
        for &(a, b) in &edges {
            let (oa, ob) = (state[a], state[b]);
            if wants(&prefs, a, ob, oa) && wants(&prefs, b, oa, ob) {
                let mut next = state.clone();
                next.swap(a, b);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    false
}

pub fn brute_force_assignment(instance: &Instance) -> bool {
    let target: Vec<usize> = instance.target().objects().iter().map(|o| o.0).collect();
    brute_force(instance, |s| s == target.as_slice())
}

pub fn brute_force_object(ro: &RoInstance) -> bool {
    brute_force(&ro.instance, |s| s[ro.agent.0] == ro.object.0)
}

/// Random Reachable Object instance on the complete graph with `n` agents.
pub fn random_clique_ro(n: usize, rng: &mut impl Rng) -> RoInstance {
    let mut initial: Vec<ObjectId> = (0..n).map(ObjectId).collect();
    initial.shuffle(rng);
    let prefs = (0..n)
        .map(|_| {
            let mut l: Vec<ObjectId> = (0..n).map(ObjectId).filter(|_| rng.gen_bool(0.8)).collect();
            l.shuffle(rng);
            l
        })
        .collect();
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let instance = Instance::new(Topology::Graph(edges), prefs, initial.clone(), initial).unwrap();
    RoInstance {
        instance,
        agent: AgentId(rng.gen_range(0..n)),
        object: ObjectId(rng.gen_range(0..n)),
    }
}
