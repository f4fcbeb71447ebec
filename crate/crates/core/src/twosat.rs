//! 2-CNF formulas solved through the strongly connected components of the
//! implication graph.

use std::fmt::Write as _;

/// A literal: variable `var` with the given polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn new(var: usize, positive: bool) -> Self {
        Lit { var, positive }
    }

    pub fn negate(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    #[inline]
    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var] == self.positive
    }
}

/// A conjunction of two-literal clauses. Unit clauses are stored as a
/// clause with the literal repeated. The `bottom` flag marks a formula that
/// contains the empty clause.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoSat {
    n_vars: usize,
    clauses: Vec<(Lit, Lit)>,
    bottom: bool,
}

impl TwoSat {
    pub fn new(n_vars: usize) -> Self {
        TwoSat {
            n_vars,
            clauses: Vec::new(),
            bottom: false,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[(Lit, Lit)] {
        &self.clauses
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        assert!(a.var < self.n_vars && b.var < self.n_vars, "variable out of range");
        self.clauses.push((a, b));
    }

    /// `a → b`, i.e. `¬a ∨ b`.
    pub fn add_implication(&mut self, a: Lit, b: Lit) {
        self.add_clause(a.negate(), b);
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    pub fn add_bottom(&mut self) {
        self.bottom = true;
    }

    pub fn extend(&mut self, other: &TwoSat) {
        assert_eq!(self.n_vars, other.n_vars);
        self.clauses.extend_from_slice(&other.clauses);
        self.bottom |= other.bottom;
    }

    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        !self.bottom && self.clauses.iter().all(|&(a, b)| a.eval(model) || b.eval(model))
    }

    /// A satisfying assignment, or `None` if there is none.
    pub fn solve(&self) -> Option<Vec<bool>> {
        if self.bottom {
            return None;
        }
        let nodes = 2 * self.n_vars;
        let mut head = vec![usize::MAX; nodes];
        let mut next = Vec::with_capacity(2 * self.clauses.len());
        let mut to = Vec::with_capacity(2 * self.clauses.len());
        let mut add = |u: usize, v: usize| {
            to.push(v);
            next.push(head[u]);
            head[u] = to.len() - 1;
        };
        for &(a, b) in &self.clauses {
            add(a.negate().node(), b.node());
            add(b.negate().node(), a.node());
        }
        let comp = tarjan(nodes, &head, &next, &to);
        let mut model = Vec::with_capacity(self.n_vars);
        for v in 0..self.n_vars {
            let (t, f) = (comp[2 * v], comp[2 * v + 1]);
            if t == f {
                return None;
            }
            // Components come out in reverse topological order.
            model.push(t < f);
        }
        Some(model)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let count = self.clauses.len() + usize::from(self.bottom);
        writeln!(out, "p cnf {} {}", self.n_vars, count).unwrap();
        let lit = |l: Lit| {
            let v = l.var as i64 + 1;
            if l.positive {
                v
            } else {
                -v
            }
        };
        for &(a, b) in &self.clauses {
            if a == b {
                writeln!(out, "{} 0", lit(a)).unwrap();
            } else {
                writeln!(out, "{} {} 0", lit(a), lit(b)).unwrap();
            }
        }
        if self.bottom {
            writeln!(out, "0").unwrap();
        }
        out
    }
}

/// Iterative Tarjan SCC over an adjacency list in linked form.
fn tarjan(nodes: usize, head: &[usize], next: &[usize], to: &[usize]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; nodes];
    let mut low = vec![0; nodes];
    let mut comp = vec![UNSEEN; nodes];
    let mut on_stack = vec![false; nodes];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut n_comp = 0;

    for root in 0..nodes {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, head[root]));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut e)) = call.last_mut() {
            if *e != usize::MAX {
                let v = to[*e];
                *e = next[*e];
                if index[v] == UNSEEN {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, head[v]));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = n_comp;
                    if w == u {
                        break;
                    }
                }
                n_comp += 1;
            }
        }
    }
    comp
}
