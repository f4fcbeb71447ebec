//! Seeded random instance generators. The same seed always yields the same
//! instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{AgentId, Assignment, Instance, ObjectId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// Random lists and a random target; usually unreachable.
    Random,
    /// Built by replaying random rational swaps; always reachable.
    YesGuaranteed,
    /// A reachable instance with a few list entries moved or dropped.
    Perturbed,
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(n: usize, mode: GenMode, seed: u64) -> Instance {
    let mut rng = rng_for(seed);
    generate_with(n, mode, &mut rng)
}

pub fn generate_with(n: usize, mode: GenMode, rng: &mut impl Rng) -> Instance {
    assert!(n >= 3, "a cycle needs at least 3 agents");
    match mode {
        GenMode::Random => random_instance(n, rng),
        GenMode::YesGuaranteed => yes_instance(n, rng),
        GenMode::Perturbed => perturb(&yes_instance(n, rng), rng),
    }
}

fn permutation(n: usize, rng: &mut impl Rng) -> Vec<ObjectId> {
    let mut v: Vec<ObjectId> = (0..n).map(ObjectId).collect();
    v.shuffle(rng);
    v
}

fn random_instance(n: usize, rng: &mut impl Rng) -> Instance {
    let initial = permutation(n, rng);
    let target = if rng.gen_bool(0.5) {
        permutation(n, rng)
    } else {
        // A target close to the initial assignment.
        let mut t = initial.clone();
        for _ in 0..rng.gen_range(1..=n) {
            let k = rng.gen_range(0..n);
            t.swap(k, (k + 1) % n);
        }
        t
    };
    let prefs = (0..n)
        .map(|a| {
            let mut rest: Vec<ObjectId> = (0..n)
                .map(ObjectId)
                .filter(|&o| o != target[a])
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            rest.shuffle(rng);
            let mut list = vec![target[a]];
            list.extend(rest);
            if !list.contains(&initial[a]) && rng.gen_bool(0.8) {
                let at = rng.gen_range(1..=list.len());
                list.insert(at, initial[a]);
            }
            list
        })
        .collect();
    Instance::new(Topology::Cycle, prefs, initial, target).expect("generated instance is well formed")
}

fn yes_instance(n: usize, rng: &mut impl Rng) -> Instance {
    let initial = permutation(n, rng);
    let mut state = Assignment::new(initial.clone()).unwrap();
    let mut history: Vec<Vec<ObjectId>> = initial.iter().map(|&o| vec![o]).collect();
    let mut held = vec![false; n * n];
    for (a, &o) in initial.iter().enumerate() {
        held[a * n + o.0] = true;
    }
    let wanted = rng.gen_range(1..=(n * n / 4).max(1));
    let mut done = 0;
    for _ in 0..wanted * 20 {
        if done == wanted {
            break;
        }
        let k = rng.gen_range(0..n);
        let (a, b) = (AgentId(k), AgentId((k + 1) % n));
        let (oa, ob) = (state.object_of(a), state.object_of(b));
        if held[a.0 * n + ob.0] || held[b.0 * n + oa.0] {
            continue;
        }
        state.swap(a, b);
        held[a.0 * n + ob.0] = true;
        held[b.0 * n + oa.0] = true;
        history[a.0].push(ob);
        history[b.0].push(oa);
        done += 1;
    }
    let prefs = (0..n)
        .map(|a| {
            let mut list: Vec<ObjectId> = history[a].iter().rev().copied().collect();
            for o in (0..n).map(ObjectId) {
                if !held[a * n + o.0] && rng.gen_bool(0.3) {
                    let at = rng.gen_range(1..=list.len());
                    list.insert(at, o);
                }
            }
            list
        })
        .collect();
    Instance::new(Topology::Cycle, prefs, initial, state.objects().to_vec())
        .expect("generated instance is well formed")
}

fn perturb(base: &Instance, rng: &mut impl Rng) -> Instance {
    let n = base.n();
    let mut prefs: Vec<Vec<ObjectId>> = base.all_preferences().to_vec();
    for _ in 0..rng.gen_range(1..=2) {
        let a = rng.gen_range(0..n);
        let list = &mut prefs[a];
        if list.len() < 3 {
            continue;
        }
        let i = rng.gen_range(1..list.len());
        if rng.gen_bool(0.5) {
            list.remove(i);
        } else {
            let j = rng.gen_range(1..list.len());
            list.swap(i, j);
        }
    }
    Instance::new(
        Topology::Cycle,
        prefs,
        base.initial().objects().to_vec(),
        base.target().objects().to_vec(),
    )
    .expect("perturbed instance is well formed")
}
