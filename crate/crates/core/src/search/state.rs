//! Partial assignments of the edge variables and the propagation rules over them.

use crate::bitset::BitSet;

/// Fixed data shared by every node of one search.
pub(crate) struct Context {
    pub order: usize,
    pub dim: u32,
    pub d: usize,
    pub labels: Vec<u32>,
    /// Vertex carrying each label.
    pub inverse: Vec<usize>,
    pub require_connected: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub adj: Vec<BitSet>,
    /// Undecided pairs per vertex.
    pub free: Vec<BitSet>,
    pub deg: Vec<usize>,
    /// XOR the vertex's remaining neighbours still have to contribute.
    pub residual: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Conflict;

pub(crate) type Step = Result<(), Conflict>;

/// Work-list of vertices whose constraints need re-examination.
pub(crate) struct Queue {
    items: Vec<usize>,
    queued: Vec<bool>,
}

impl Queue {
    pub fn new(order: usize) -> Self {
        Queue {
            items: Vec::with_capacity(order),
            queued: vec![false; order],
        }
    }

    pub fn push(&mut self, v: usize) {
        if !std::mem::replace(&mut self.queued[v], true) {
            self.items.push(v);
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let v = self.items.pop()?;
        self.queued[v] = false;
        Some(v)
    }

    fn clear(&mut self) {
        while self.pop().is_some() {}
    }
}

impl State {
    /// Nothing decided; closed mode seeds each residual with the vertex's own label.
    pub fn root(ctx: &Context, closed: bool) -> State {
        let n = ctx.order;
        State {
            adj: vec![BitSet::new(n); n],
            free: (0..n)
                .map(|v| {
                    let mut s = BitSet::full(n);
                    s.remove(v);
                    s
                })
                .collect(),
            deg: vec![0; n],
            residual: if closed {
                ctx.labels.clone()
            } else {
                vec![0; n]
            },
        }
    }

    pub fn force_edge(&mut self, ctx: &Context, q: &mut Queue, u: usize, v: usize) -> Step {
        debug_assert!(self.free[u].contains(v));
        self.free[u].remove(v);
        self.free[v].remove(u);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.residual[u] ^= ctx.labels[v];
        self.residual[v] ^= ctx.labels[u];
        q.push(u);
        q.push(v);
        if self.deg[u] > ctx.d || self.deg[v] > ctx.d {
            return Err(Conflict);
        }
        Ok(())
    }

    pub fn force_non_edge(&mut self, q: &mut Queue, u: usize, v: usize) {
        debug_assert!(self.free[u].contains(v));
        self.free[u].remove(v);
        self.free[v].remove(u);
        q.push(u);
        q.push(v);
    }

    /// Runs every rule to a fixpoint. Only sound inferences are made: no completion
    /// satisfying all constraints is ever removed.
    pub fn propagate(&mut self, ctx: &Context, q: &mut Queue) -> Step {
        while let Some(v) = q.pop() {
            if let Err(c) = self.examine(ctx, q, v) {
                q.clear();
                return Err(c);
            }
        }
        Ok(())
    }

    fn examine(&mut self, ctx: &Context, q: &mut Queue, v: usize) -> Step {
        let slots = ctx.d - self.deg[v];
        let open = self.free[v].count();
        let r = self.residual[v];
        if open < slots {
            return Err(Conflict);
        }
        if slots == 0 {
            if r != 0 {
                return Err(Conflict);
            }
            for u in self.free[v].clone().iter() {
                self.force_non_edge(q, v, u);
            }
            return Ok(());
        }
        if open == slots {
            for u in self.free[v].clone().iter() {
                self.force_edge(ctx, q, v, u)?;
            }
            return Ok(());
        }
        match slots {
            1 => {
                // the last neighbour must carry exactly the residual
                let w = ctx.inverse[r as usize];
                if w == v || !self.free[v].contains(w) {
                    return Err(Conflict);
                }
                for u in self.free[v].clone().iter() {
                    if u != w {
                        self.force_non_edge(q, v, u);
                    }
                }
                self.force_edge(ctx, q, v, w)
            }
            2 => {
                // two distinct labels cannot cancel
                if r == 0 {
                    return Err(Conflict);
                }
                for u in self.free[v].clone().iter() {
                    let partner = ctx.inverse[(ctx.labels[u] ^ r) as usize];
                    if partner == v || !self.free[v].contains(partner) {
                        self.force_non_edge(q, v, u);
                    }
                }
                Ok(())
            }
            _ => self.parity_feasible(ctx, v, slots, r),
        }
    }

    /// Per coordinate, some admissible number of chosen labels with a one in that
    /// coordinate must have the residual's parity; and the residual must lie in the
    /// span of the available labels.
    fn parity_feasible(&self, ctx: &Context, v: usize, slots: usize, r: u32) -> Step {
        let open = self.free[v].count();
        let mut ones = [0usize; 32];
        let mut basis = [0u32; 32];
        for u in self.free[v].iter() {
            let x = ctx.labels[u];
            for (i, c) in ones.iter_mut().enumerate().take(ctx.dim as usize) {
                *c += (x >> i & 1) as usize;
            }
            insert_basis(&mut basis, x);
        }
        if !in_span(&basis, r) {
            return Err(Conflict);
        }
        for (i, &o) in ones.iter().enumerate().take(ctx.dim as usize) {
            let zeros = open - o;
            let lo = slots.saturating_sub(zeros);
            let hi = o.min(slots);
            let want = (r >> i & 1) as usize;
            let first = if lo % 2 == want { lo } else { lo + 1 };
            if first > hi {
                return Err(Conflict);
            }
        }
        Ok(())
    }

    /// Whether decided edges plus undecided pairs still span a connected graph.
    pub fn can_connect(&self) -> bool {
        let n = self.adj.len();
        let mut seen = BitSet::new(n);
        let mut frontier = BitSet::new(n);
        seen.insert(0);
        frontier.insert(0);
        let mut reached = 1;
        while let Some(u) = frontier.first() {
            frontier.remove(u);
            let mut next = self.adj[u].clone();
            next.union_with(&self.free[u]);
            next.difference_with(&seen);
            reached += next.count();
            seen.union_with(&next);
            frontier.union_with(&next);
        }
        reached == n
    }

    pub fn is_complete(&self) -> bool {
        self.free.iter().all(BitSet::is_empty)
    }
}

fn insert_basis(basis: &mut [u32; 32], mut x: u32) {
    while x != 0 {
        let top = 31 - x.leading_zeros() as usize;
        if basis[top] == 0 {
            basis[top] = x;
            return;
        }
        x ^= basis[top];
    }
}

fn in_span(basis: &[u32; 32], mut x: u32) -> bool {
    while x != 0 {
        let top = 31 - x.leading_zeros() as usize;
        if basis[top] == 0 {
            return false;
        }
        x ^= basis[top];
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32, d: usize) -> Context {
        let order = 1usize << n;
        Context {
            order,
            dim: n,
            d,
            labels: (0..order as u32).collect(),
            inverse: (0..order).collect(),
            require_connected: false,
        }
    }

    #[test]
    fn saturated_vertex_needs_zero_residual() {
        let c = ctx(3, 2);
        let mut s = State::root(&c, false);
        let mut q = Queue::new(8);
        s.force_edge(&c, &mut q, 0, 3).unwrap();
        s.force_edge(&c, &mut q, 0, 5).unwrap();
        // 3 ^ 5 != 0
        assert_eq!(s.propagate(&c, &mut q), Err(Conflict));
    }

    #[test]
    fn saturated_vertex_forces_non_edges() {
        let c = ctx(3, 2);
        let mut s = State::root(&c, true);
        let mut q = Queue::new(8);
        // closed: 1 ^ 6 ^ 7 = 0
        s.force_edge(&c, &mut q, 1, 6).unwrap();
        s.force_edge(&c, &mut q, 1, 7).unwrap();
        q.clear();
        s.examine(&c, &mut q, 1).unwrap();
        assert!(s.free[1].is_empty());
        assert_eq!(s.adj[1].iter().collect::<Vec<_>>(), vec![6, 7]);
    }

    #[test]
    fn last_slot_needs_matching_label() {
        let c = ctx(3, 3);
        let mut s = State::root(&c, false);
        let mut q = Queue::new(8);
        s.force_edge(&c, &mut q, 0, 1).unwrap();
        s.force_edge(&c, &mut q, 0, 2).unwrap();
        q.clear();
        // residual 3 is still free: forced
        s.examine(&c, &mut q, 0).unwrap();
        assert_eq!(s.adj[0].iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(s.free[0].is_empty());

        let mut s = State::root(&c, false);
        let mut q = Queue::new(8);
        s.force_edge(&c, &mut q, 0, 1).unwrap();
        s.force_edge(&c, &mut q, 0, 2).unwrap();
        s.force_non_edge(&mut q, 0, 3);
        q.clear();
        assert_eq!(s.examine(&c, &mut q, 0), Err(Conflict));
    }

    #[test]
    fn complete_assignment_is_a_fixpoint() {
        // K4 with the canonical labeling is closed-magic
        let c = ctx(2, 3);
        let mut s = State::root(&c, true);
        let mut q = Queue::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                s.force_edge(&c, &mut q, u, v).unwrap();
            }
        }
        let before = s.clone();
        s.propagate(&c, &mut q).unwrap();
        assert!(s.is_complete());
        assert_eq!(s.adj, before.adj);
        assert_eq!(s.residual, vec![0; 4]);
    }

    #[test]
    fn zero_vertex_with_one_slot_conflicts() {
        let c = ctx(2, 1);
        let mut s = State::root(&c, false);
        let mut q = Queue::new(4);
        q.push(0);
        assert_eq!(s.propagate(&c, &mut q), Err(Conflict));
    }

    #[test]
    fn span_and_parity_screens() {
        let c = ctx(3, 4);
        let mut s = State::root(&c, false);
        let mut q = Queue::new(8);
        // leave vertex 0 with only labels 1, 2, 3 and 4 available: 4 slots, all forced,
        // weight 1^2^3^4 = 4 != 0
        for u in 5..8 {
            s.force_non_edge(&mut q, 0, u);
        }
        assert_eq!(s.propagate(&c, &mut q), Err(Conflict));

        let mut s = State::root(&c, false);
        let mut q = Queue::new(8);
        // vertex 1 keeps labels {0, 2, 3}; all three are needed and XOR to 1
        for u in 4..8 {
            s.force_non_edge(&mut q, 1, u);
        }
        q.clear();
        s.residual[1] = 4;
        assert_eq!(s.parity_feasible(&c, 1, 3, 4), Err(Conflict));
        assert_eq!(s.parity_feasible(&c, 1, 3, 0), Err(Conflict));
        assert_eq!(s.parity_feasible(&c, 1, 3, 1), Ok(()));
    }
}
