//! Object paths, shared paths, swap edges, shields and candidate lists on a
//! cycle, together with the exact/harmonic/valid predicates on selections.
//!
//! Edge `k` is the edge between agents `k` and `k + 1 (mod n)`.

use arrayvec::ArrayVec;
use serde::Serialize;
use thiserror::Error;

use crate::model::{cycle::cw_distance, AgentId, Instance, ObjectId};
use crate::selection::{Direction, Selection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the instance is not a cycle")]
    NotACycle,
    #[error("total clockwise displacement {total} is not divisible by n = {n}")]
    NotDivisible { total: usize, n: usize },
}

/// The agents an object visits moving in one direction from its initial
/// holder to its target holder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectPath {
    pub start: usize,
    pub len: usize,
    pub dir: Direction,
    n: usize,
}

impl ObjectPath {
    pub fn new(start: usize, end: usize, dir: Direction, n: usize) -> Self {
        let len = match dir {
            Direction::Cw => cw_distance(start, end, n),
            Direction::Ccw => cw_distance(end, start, n),
        };
        ObjectPath { start, len, dir, n }
    }

    pub fn end(&self) -> usize {
        self.vertex(self.len)
    }

    /// Agent at offset `i` from the start.
    #[inline]
    pub fn vertex(&self, i: usize) -> usize {
        match self.dir {
            Direction::Cw => (self.start + i) % self.n,
            Direction::Ccw => (self.start + self.n - i % self.n) % self.n,
        }
    }

    /// Edge between the agents at offsets `i` and `i + 1`.
    #[inline]
    pub fn edge(&self, i: usize) -> usize {
        match self.dir {
            Direction::Cw => (self.start + i) % self.n,
            Direction::Ccw => (self.start + 2 * self.n - i % self.n - 1) % self.n,
        }
    }

    #[inline]
    pub fn vertex_offset(&self, v: usize) -> Option<usize> {
        let off = match self.dir {
            Direction::Cw => cw_distance(self.start, v, self.n),
            Direction::Ccw => cw_distance(v, self.start, self.n),
        };
        (off <= self.len).then_some(off)
    }

    #[inline]
    pub fn edge_offset(&self, k: usize) -> Option<usize> {
        let off = match self.dir {
            Direction::Cw => cw_distance(self.start, k, self.n),
            Direction::Ccw => cw_distance(k, self.start, self.n) + self.n - 1,
        } % self.n;
        (off < self.len).then_some(off)
    }

    pub fn agents(&self) -> Vec<AgentId> {
        (0..=self.len).map(|i| AgentId(self.vertex(i))).collect()
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.len).map(|i| self.edge(i)).collect()
    }
}

pub fn path_of(instance: &Instance, p: ObjectId, dir: Direction) -> ObjectPath {
    ObjectPath::new(
        instance.initial().holder_of(p).0,
        instance.target().holder_of(p).0,
        dir,
        instance.n(),
    )
}

/// One connected piece of the intersection of two opposite-direction paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedPath {
    /// First and last offset along the path of `p`.
    pub p_first: usize,
    pub p_last: usize,
    /// Smallest offset along the path of `q`.
    pub q_first: usize,
    /// Number of edges where the two objects can be swapped.
    pub swappable: usize,
    /// The swappable edge, if it is the only one.
    pub swap_edge: Option<usize>,
}

impl SharedPath {
    pub fn contains_edge_offset(&self, i: usize) -> bool {
        self.p_first <= i && i < self.p_last
    }
}

pub type SharedPaths = ArrayVec<SharedPath, 3>;

/// Whether objects `p` (moving `dir`) and `q` (moving the other way) can be
/// exchanged across edge `k`.
#[inline]
fn swappable(instance: &Instance, p: ObjectId, q: ObjectId, dir: Direction, k: usize) -> bool {
    let n = instance.n();
    let (cw, ccw) = match dir {
        Direction::Cw => (p, q),
        Direction::Ccw => (q, p),
    };
    let (a, b) = (AgentId(k), AgentId((k + 1) % n));
    instance.accepts(a, ccw, cw) && instance.accepts(b, cw, ccw)
}

/// `swappable(i)` tells whether the two objects can be exchanged across the
/// edge at offset `i` of `pp`.
fn shared_between(pp: &ObjectPath, qp: &ObjectPath, dir: Direction, mut swappable: impl FnMut(usize) -> bool) -> SharedPaths {
    let n = pp.n;
    // Walked in p's direction, q's path is the arc of offsets s..=s + Lq
    // (mod n), measured from p's start. It meets [0, Lp] in at most two
    // pieces, which are separate components even when they touch.
    let s = match dir {
        Direction::Cw => cw_distance(pp.start, qp.end(), n),
        Direction::Ccw => cw_distance(qp.end(), pp.start, n),
    };
    let mut out = SharedPaths::new();
    let mut piece = |first: usize, last: usize, q_first: usize| {
        let mut shared = SharedPath {
            p_first: first,
            p_last: last,
            q_first,
            swappable: 0,
            swap_edge: None,
        };
        for i in first..last {
            if swappable(i) {
                shared.swappable += 1;
                shared.swap_edge = (shared.swappable == 1).then(|| pp.edge(i));
            }
        }
        out.push(shared);
    };
    if s + qp.len >= n {
        let last = (s + qp.len - n).min(pp.len);
        piece(0, last, qp.len - (last + n - s));
    }
    if s <= pp.len {
        let last = (s + qp.len).min(n - 1).min(pp.len);
        piece(s, last, qp.len - (last - s));
    }
    out
}

/// Rank data laid out for scanning one object's path against many others.
struct SwapScan {
    n: usize,
    /// `col[o * n + a]`: raw rank of object `o` for agent `a`.
    col: Vec<u32>,
    /// Rank of each agent's initial object.
    init: Vec<u32>,
}

/// Per-edge conditions on `q` for a swap with a fixed `p` across that edge.
#[derive(Clone, Copy)]
struct EdgeTest {
    /// Agent receiving `p`: needs `lo < rank(q) <= init`.
    recv_p: u32,
    lo: u32,
    init: u32,
    /// Agent receiving `q`: needs `rank(q) < hi`.
    recv_q: u32,
    hi: u32,
}

impl SwapScan {
    fn new(instance: &Instance) -> Self {
        let n = instance.n();
        let mut col = vec![0; n * n];
        for a in 0..n {
            for o in 0..n {
                col[o * n + a] = instance.raw_rank(AgentId(a), ObjectId(o));
            }
        }
        let init = (0..n)
            .map(|a| instance.raw_rank(AgentId(a), instance.initial().object_of(AgentId(a))))
            .collect();
        SwapScan { n, col, init }
    }

    fn tests(&self, instance: &Instance, p: ObjectId, pp: &ObjectPath, out: &mut Vec<EdgeTest>) {
        let n = self.n;
        out.clear();
        for i in 0..pp.len {
            let k = pp.edge(i);
            let (lower, upper) = (k, (k + 1) % n);
            let (recv_p, recv_q) = match pp.dir {
                Direction::Cw => (upper, lower),
                Direction::Ccw => (lower, upper),
            };
            let len = |a: usize| instance.preferences(AgentId(a)).len() as u32;
            let rp = self.col[p.0 * n + recv_p];
            let lo = if rp < len(recv_p) { rp } else { u32::MAX };
            let rq = self.col[p.0 * n + recv_q];
            let hi = if rq <= self.init[recv_q] { rq.min(len(recv_q)) } else { 0 };
            out.push(EdgeTest {
                recv_p: recv_p as u32,
                lo,
                init: self.init[recv_p],
                recv_q: recv_q as u32,
                hi,
            });
        }
    }

    #[inline]
    fn passes(&self, q: ObjectId, t: &EdgeTest) -> bool {
        let row = &self.col[q.0 * self.n..(q.0 + 1) * self.n];
        let r = row[t.recv_p as usize];
        t.lo < r && r <= t.init && row[t.recv_q as usize] < t.hi
    }
}

/// Connected pieces of `P(p, dir) ∩ P(q, 1 - dir)`.
pub fn shared_paths(instance: &Instance, p: ObjectId, q: ObjectId, dir: Direction) -> SharedPaths {
    let pp = path_of(instance, p, dir);
    let qp = path_of(instance, q, dir.flip());
    shared_between(&pp, &qp, dir, |i| swappable(instance, p, q, dir, pp.edge(i)))
}

/// The unique swap edge of every shared path that has exactly one.
pub fn swap_edges(instance: &Instance, p: ObjectId, q: ObjectId, dir: Direction) -> Vec<usize> {
    shared_paths(instance, p, q, dir)
        .iter()
        .filter_map(|s| s.swap_edge)
        .collect()
}

fn shields_on(instance: &Instance, q: ObjectId, p: ObjectId, pp: &ObjectPath, qp: &ObjectPath) -> bool {
    let Some(k) = pp.vertex_offset(qp.start) else {
        return false;
    };
    if k == 0 || k >= pp.len {
        return false;
    }
    let last = pp.len.min(k + qp.len);
    (k..=last).any(|i| !instance.accepts(AgentId(pp.vertex(i)), p, q))
}

/// Whether `q` blocks `p` when both move in direction `dir`: `q` starts
/// strictly inside the path of `p` and some agent both pass would have to
/// trade `q` for `p` but does not accept that.
pub fn shields(instance: &Instance, q: ObjectId, p: ObjectId, dir: Direction) -> bool {
    if p == q {
        return false;
    }
    shields_on(instance, q, p, &path_of(instance, p, dir), &path_of(instance, q, dir))
}

/// Total clockwise displacement `Y` and `θ = n - Y/n`.
pub fn theta(instance: &Instance) -> Result<usize, GeometryError> {
    if !instance.is_cycle() {
        return Err(GeometryError::NotACycle);
    }
    let n = instance.n();
    let total = total_displacement(instance);
    if total % n != 0 {
        return Err(GeometryError::NotDivisible { total, n });
    }
    Ok(n - total / n)
}

pub fn total_displacement(instance: &Instance) -> usize {
    let n = instance.n();
    (0..n)
        .map(ObjectId)
        .map(|o| {
            cw_distance(
                instance.initial().holder_of(o).0,
                instance.target().holder_of(o).0,
                n,
            )
        })
        .sum()
}

/// Everything about pairs of objects that does not depend on a selection,
/// plus the candidate lists `C(p, e)`.
#[derive(Debug, Clone)]
pub struct CandidateTable {
    n: usize,
    paths: Vec<[ObjectPath; 2]>,
    stationary: Vec<bool>,
    /// Indexed by `pair_index(p, q, dir)` for `p` moving `dir`.
    pairs: Vec<SharedPaths>,
    /// Indexed by `pair_index(q, p, dir)`: `q` shields `p` in `dir`.
    shield: Vec<bool>,
    /// `lists[p][dir][i]` is the candidate list at offset `i` of `P(p, dir)`.
    lists: Vec<[Vec<Vec<ObjectId>>; 2]>,
}

#[inline]
fn pair_index(n: usize, p: ObjectId, q: ObjectId, dir: Direction) -> usize {
    (p.0 * n + q.0) * 2 + dir.index()
}

impl CandidateTable {
    /// Precompute all pairwise data in `O(n^3)` time.
    pub fn build(instance: &Instance) -> Result<Self, GeometryError> {
        if !instance.is_cycle() {
            return Err(GeometryError::NotACycle);
        }
        let n = instance.n();
        let paths: Vec<[ObjectPath; 2]> = (0..n)
            .map(ObjectId)
            .map(|o| {
                [
                    path_of(instance, o, Direction::Ccw),
                    path_of(instance, o, Direction::Cw),
                ]
            })
            .collect();
        let stationary: Vec<bool> = (0..n).map(|o| paths[o][0].len == 0).collect();
        let mut pairs = vec![SharedPaths::new(); n * n * 2];
        let mut shield = vec![false; n * n * 2];
        let scan = SwapScan::new(instance);
        let mut tests = Vec::with_capacity(n);
        for p in (0..n).map(ObjectId) {
            for dir in [Direction::Ccw, Direction::Cw] {
                let pp = &paths[p.0][dir.index()];
                scan.tests(instance, p, pp, &mut tests);
                for q in (0..n).map(ObjectId) {
                    if p == q {
                        continue;
                    }
                    let qo = &paths[q.0][dir.flip().index()];
                    pairs[pair_index(n, p, q, dir)] = shared_between(pp, qo, dir, |i| scan.passes(q, &tests[i]));
                    let qs = &paths[q.0][dir.index()];
                    shield[pair_index(n, q, p, dir)] = shields_on(instance, q, p, pp, qs);
                }
            }
        }
        let mut lists: Vec<[Vec<Vec<ObjectId>>; 2]> = (0..n)
            .map(|p| {
                [
                    vec![Vec::new(); paths[p][0].len],
                    vec![Vec::new(); paths[p][1].len],
                ]
            })
            .collect();
        for p in (0..n).map(ObjectId) {
            for dir in [Direction::Ccw, Direction::Cw] {
                let pp = paths[p.0][dir.index()];
                for q in (0..n).map(ObjectId) {
                    if p == q {
                        continue;
                    }
                    for s in &pairs[pair_index(n, p, q, dir)] {
                        if let Some(k) = s.swap_edge {
                            let i = pp.edge_offset(k).expect("swap edge lies on the path");
                            lists[p.0][dir.index()][i].push(q);
                        }
                    }
                }
            }
        }
        Ok(CandidateTable {
            n,
            paths,
            stationary,
            pairs,
            shield,
            lists,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn path(&self, p: ObjectId, dir: Direction) -> &ObjectPath {
        &self.paths[p.0][dir.index()]
    }

    #[inline]
    pub fn is_stationary(&self, p: ObjectId) -> bool {
        self.stationary[p.0]
    }

    /// Shared paths of `p` moving `dir` and `q` moving the other way.
    #[inline]
    pub fn shared(&self, p: ObjectId, q: ObjectId, dir: Direction) -> &[SharedPath] {
        &self.pairs[pair_index(self.n, p, q, dir)]
    }

    /// `q` shields `p` when both move in `dir`.
    #[inline]
    pub fn shields(&self, q: ObjectId, p: ObjectId, dir: Direction) -> bool {
        self.shield[pair_index(self.n, q, p, dir)]
    }

    /// `p` moving `dir` and `q` moving the other way are compatible.
    #[inline]
    pub fn compatible(&self, p: ObjectId, q: ObjectId, dir: Direction) -> bool {
        self.shared(p, q, dir).iter().all(|s| s.swappable == 1)
    }

    pub fn is_opposite(&self, p: ObjectId, q: ObjectId) -> bool {
        p != q
            && (self.shared(p, q, Direction::Cw).len() > 1
                || self.shared(p, q, Direction::Ccw).len() > 1)
    }

    /// The candidate list of `p` for edge `k`, in the direction whose path
    /// of `p` contains `k`. Empty for stationary objects.
    pub fn list(&self, p: ObjectId, k: usize) -> (Direction, &[ObjectId]) {
        let d = self.edge_direction(p, k);
        let i = self.path(p, d).edge_offset(k);
        match i {
            Some(i) => (d, &self.lists[p.0][d.index()][i]),
            None => (d, &[]),
        }
    }

    /// `d(p, e)`: the direction in which `p` passes edge `k`.
    pub fn edge_direction(&self, p: ObjectId, k: usize) -> Direction {
        if self.path(p, Direction::Cw).edge_offset(k).is_some() {
            Direction::Cw
        } else {
            Direction::Ccw
        }
    }

    /// Candidate lists along `P(p, dir)`, one per edge offset.
    pub fn lists_along(&self, p: ObjectId, dir: Direction) -> &[Vec<ObjectId>] {
        &self.lists[p.0][dir.index()]
    }

    /// Sum of all candidate list sizes.
    pub fn total_size(&self) -> usize {
        self.lists
            .iter()
            .flat_map(|l| l.iter())
            .flat_map(|v| v.iter())
            .map(Vec::len)
            .sum()
    }

    /// One entry per object, direction and edge of the object's path in that
    /// direction. Labels are shifted by one when `one_based` is set.
    pub fn to_json(&self, one_based: bool) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            object: usize,
            edge: [usize; 2],
            direction: u8,
            candidates: Vec<usize>,
        }
        let n = self.n;
        let off = usize::from(one_based);
        let mut out = Vec::new();
        for p in 0..n {
            for dir in [Direction::Ccw, Direction::Cw] {
                let pp = self.paths[p][dir.index()];
                for (i, list) in self.lists[p][dir.index()].iter().enumerate() {
                    let k = pp.edge(i);
                    out.push(Entry {
                        object: p + off,
                        edge: [k + off, (k + 1) % n + off],
                        direction: dir as u8,
                        candidates: list.iter().map(|q| q.0 + off).collect(),
                    });
                }
            }
        }
        serde_json::to_value(out).expect("serializable")
    }
}

/// `f_γ(p, e)`: how many members of `C(p, e)` move opposite to `p`'s
/// direction at `e`.
pub fn f_gamma(gamma: &Selection, table: &CandidateTable, p: ObjectId, k: usize) -> usize {
    let (d, list) = table.list(p, k);
    list.iter().filter(|&&q| gamma.get(q) != d).count()
}

pub fn is_exact(gamma: &Selection, table: &CandidateTable) -> bool {
    (0..table.n()).map(ObjectId).all(|p| {
        if table.is_stationary(p) {
            return true;
        }
        let d = gamma.get(p);
        table
            .lists_along(p, d)
            .iter()
            .all(|list| list.iter().filter(|&&q| gamma.get(q) != d).count() == 1)
    })
}

pub fn is_harmonic(gamma: &Selection, table: &CandidateTable) -> bool {
    let n = table.n();
    for p in (0..n).map(ObjectId) {
        let d = gamma.get(p);
        for q in (0..n).map(ObjectId) {
            if p == q {
                continue;
            }
            if gamma.get(q) == d {
                if table.shields(q, p, d) {
                    return false;
                }
            } else if !table.compatible(p, q, d) {
                return false;
            }
        }
    }
    true
}

pub fn is_valid(gamma: &Selection, table: &CandidateTable) -> bool {
    is_exact(gamma, table) && is_harmonic(gamma, table)
}
