//! Exact search for a `d`-regular graph on `2^n` vertices whose weights all vanish
//! under a fixed bijective labeling.
//!
//! Fixing the labeling loses nothing: a solution for one bijection is carried to any
//! other by renaming vertices. The unknowns are the edge indicators; the search
//! branches on one pair at a time and propagates degree, residual and
//! connectivity constraints after every decision.
//!
//! An exhausted tree is a proof of infeasibility; an exhausted budget proves nothing.

mod state;

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::labeling::{first_nonzero_weight, Labeling, Mode};

use state::{Context, Queue, State};

/// Largest dimension the search accepts; the state is quadratic in `2^n`.
pub const MAX_SEARCH_POWER: u32 = 10;

/// Resource limits. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn seconds(secs: f64) -> Self {
        Budget {
            time: Some(Duration::from_secs_f64(secs)),
            nodes: None,
        }
    }

    pub fn nodes(limit: u64) -> Self {
        Budget {
            time: None,
            nodes: Some(limit),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub n: u32,
    pub d: usize,
    pub mode: Mode,
    pub require_connected: bool,
    pub labeling: Labeling,
    pub budget: Budget,
    pub seed: u64,
    /// Fix two edges at the zero-labelled vertex. Sound because the problem is
    /// invariant under linear automorphisms of the label space, which act
    /// transitively on ordered pairs of independent vectors.
    pub symmetry_breaking: bool,
    /// More than one worker splits the tree; results stay correct but which
    /// solution is returned is no longer reproducible.
    pub workers: usize,
    /// Single-worker runs restart with a fresh branching order whenever a node
    /// limit is hit, doubling the limit each time, so the search stays complete.
    pub restarts: bool,
}

impl SearchProblem {
    pub fn new(n: u32, d: usize, mode: Mode) -> Result<Self> {
        if n > MAX_SEARCH_POWER {
            return invalid(format!("search supports n <= {MAX_SEARCH_POWER}, got {n}"));
        }
        let order = 1usize << n;
        if d >= order {
            return invalid(format!("degree {d} impossible on {order} vertices"));
        }
        Ok(SearchProblem {
            n,
            d,
            mode,
            require_connected: false,
            labeling: Labeling::canonical(n)?,
            budget: Budget::unlimited(),
            seed: 0,
            symmetry_breaking: true,
            workers: 1,
            restarts: true,
        })
    }

    pub fn order(&self) -> usize {
        1 << self.n
    }

    pub fn connected(mut self, yes: bool) -> Self {
        self.require_connected = yes;
        self
    }

    pub fn with_labeling(mut self, labeling: Labeling) -> Result<Self> {
        if labeling.dim() != self.n || labeling.len() != self.order() {
            return invalid("labeling does not match the problem size");
        }
        if !labeling.is_bijection() {
            return invalid("search needs a bijective labeling");
        }
        self.labeling = labeling;
        Ok(self)
    }

    pub fn budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn symmetry_breaking(mut self, yes: bool) -> Self {
        self.symmetry_breaking = yes;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn restarts(mut self, yes: bool) -> Self {
        self.restarts = yes;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Feasible { graph: Graph, connected: bool },
    Infeasible,
    BudgetExhausted,
}

impl SearchStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SearchStatus::Feasible { .. } => "feasible",
            SearchStatus::Infeasible => "infeasible",
            SearchStatus::BudgetExhausted => "budget_exhausted",
        }
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            SearchStatus::Feasible { graph, .. } => Some(graph),
            _ => None,
        }
    }
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search-tree nodes expanded.
    pub nodes: u64,
    /// Subtrees cut because no connected completion remained.
    pub connectivity_prunes: u64,
    pub restarts: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub stats: SearchStats,
}

struct Node {
    state: State,
    decisions: Vec<(usize, usize, bool)>,
    /// Root only: every vertex needs examining.
    full: bool,
}

enum Expansion {
    Dead,
    Solution(Graph),
    Branch(Box<(Node, Node)>),
}

/// Counters and stop flags for one run.
struct Shared {
    stop: AtomicBool,
    /// The overall budget is spent.
    exhausted: AtomicBool,
    /// Only this run's restart limit was hit.
    cut: AtomicBool,
    nodes: AtomicU64,
    prunes: AtomicU64,
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    run_limit: Option<u64>,
}

impl Shared {
    fn new(deadline: Option<Instant>, node_limit: Option<u64>, run_limit: Option<u64>) -> Self {
        Shared {
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
            cut: AtomicBool::new(false),
            nodes: AtomicU64::new(0),
            prunes: AtomicU64::new(0),
            deadline,
            node_limit,
            run_limit,
        }
    }

    /// Counts one node; false once the budget or the run limit is gone.
    fn tick(&self) -> bool {
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.node_limit.is_some_and(|lim| k > lim);
        let over_time = k.is_multiple_of(64) && self.deadline.is_some_and(|t| Instant::now() >= t);
        if over_nodes || over_time {
            self.exhausted.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        if self.run_limit.is_some_and(|lim| k > lim) {
            self.cut.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

struct Solver<'a> {
    ctx: Context,
    /// Tiebreak among equally constrained vertices.
    rank: Vec<usize>,
    /// Order in which candidate partners are tried; the label itself on the first run.
    key: Vec<u32>,
    shared: &'a Shared,
}

impl Solver<'_> {
    fn expand(&self, mut node: Node) -> Expansion {
        let ctx = &self.ctx;
        let mut q = Queue::new(ctx.order);
        if node.full {
            (0..ctx.order).for_each(|v| q.push(v));
        }
        for &(u, v, edge) in &node.decisions {
            if !node.state.free[u].contains(v) {
                // already decided by an earlier entry; only consistent if it agrees
                if node.state.adj[u].contains(v) != edge {
                    return Expansion::Dead;
                }
                continue;
            }
            if edge {
                if node.state.force_edge(ctx, &mut q, u, v).is_err() {
                    return Expansion::Dead;
                }
            } else {
                node.state.force_non_edge(&mut q, u, v);
            }
        }
        if node.state.propagate(ctx, &mut q).is_err() {
            return Expansion::Dead;
        }
        if ctx.require_connected && !node.state.can_connect() {
            self.shared.prunes.fetch_add(1, Ordering::Relaxed);
            return Expansion::Dead;
        }
        let Some((v, w)) = self.choose(&node.state) else {
            debug_assert!(node.state.is_complete());
            return Expansion::Solution(Graph::from_rows(node.state.adj).expect("symmetric rows"));
        };
        let skip = Node {
            state: node.state.clone(),
            decisions: vec![(v, w, false)],
            full: false,
        };
        let take = Node {
            state: node.state,
            decisions: vec![(v, w, true)],
            full: false,
        };
        Expansion::Branch(Box::new((take, skip)))
    }

    /// Pair `(v, w)` minimising the slack of `v` (spare candidates beyond what it
    /// still needs), then the key of `w`, then the shuffled rank of `v`.
    fn choose(&self, s: &State) -> Option<(usize, usize)> {
        (0..self.ctx.order)
            .filter(|&v| !s.free[v].is_empty())
            .map(|v| {
                let w = s.free[v]
                    .iter()
                    .min_by_key(|&u| self.key[u])
                    .expect("nonempty");
                let slack = s.free[v].count() - (self.ctx.d - s.deg[v]);
                ((slack, self.key[w], self.rank[v]), (v, w))
            })
            .min()
            .map(|(_, pair)| pair)
    }

    fn explore(&self, mut stack: Vec<Node>) -> Option<Graph> {
        while let Some(node) = stack.pop() {
            if self.shared.stop.load(Ordering::Relaxed) || !self.shared.tick() {
                return None;
            }
            match self.expand(node) {
                Expansion::Dead => {}
                Expansion::Solution(g) => return Some(g),
                Expansion::Branch(pair) => {
                    let (take, skip) = *pair;
                    stack.push(skip);
                    stack.push(take);
                }
            }
        }
        None
    }

    fn root(&self, symmetry_breaking: bool, closed: bool) -> Node {
        let ctx = &self.ctx;
        let mut decisions = Vec::new();
        if symmetry_breaking {
            let z = ctx.inverse[0];
            if ctx.d >= 1 && ctx.dim >= 1 {
                decisions.push((z, ctx.inverse[1], true));
            }
            if ctx.d >= 2 && ctx.dim >= 2 {
                decisions.push((z, ctx.inverse[2], true));
            }
        }
        Node {
            state: State::root(ctx, closed),
            decisions,
            full: true,
        }
    }

    /// Breadth-first split of the tree into roughly `want` independent subtrees.
    fn frontier(&self, root: Node, want: usize) -> std::result::Result<Vec<Node>, Option<Graph>> {
        let mut layer = std::collections::VecDeque::from([root]);
        while layer.len() < want {
            let Some(node) = layer.pop_front() else {
                return Err(None);
            };
            if !self.shared.tick() {
                return Err(None);
            }
            match self.expand(node) {
                Expansion::Dead => {}
                Expansion::Solution(g) => return Err(Some(g)),
                Expansion::Branch(pair) => {
                    let (take, skip) = *pair;
                    layer.push_back(take);
                    layer.push_back(skip);
                }
            }
        }
        // reverse so workers popping from the back take the edge-first subtrees first
        Ok(layer.into_iter().rev().collect())
    }
}

/// First restart limit in nodes.
const RESTART_BASE: u64 = 4096;

pub fn solve(problem: &SearchProblem) -> SearchOutcome {
    let start = Instant::now();
    let order = problem.order();
    let labels = problem.labeling.values().to_vec();
    let mut inverse = vec![0; order];
    for (v, &x) in labels.iter().enumerate() {
        inverse[x as usize] = v;
    }
    let deadline = problem.budget.time.map(|t| start + t);
    let closed = problem.mode == Mode::Closed;
    let restarting = problem.restarts && problem.workers <= 1;
    let mut run_limit = restarting.then_some(RESTART_BASE);
    let mut stats = SearchStats::default();
    let mut run = 0u64;

    let (found, exhausted) = loop {
        let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
        rng.set_stream(run);
        let mut rank: Vec<usize> = (0..order).collect();
        rank.shuffle(&mut rng);
        let key = if run == 0 {
            labels.clone()
        } else {
            let mut perm: Vec<u32> = (0..order as u32).collect();
            perm.shuffle(&mut rng);
            labels.iter().map(|&x| perm[x as usize]).collect()
        };
        let remaining = problem.budget.nodes.map(|n| n.saturating_sub(stats.nodes));
        let shared = Shared::new(deadline, remaining, run_limit);
        let solver = Solver {
            ctx: Context {
                order,
                dim: problem.n,
                d: problem.d,
                labels: labels.clone(),
                inverse: inverse.clone(),
                require_connected: problem.require_connected,
            },
            rank,
            key,
            shared: &shared,
        };
        let root = solver.root(problem.symmetry_breaking, closed);
        let found = if problem.workers <= 1 {
            solver.explore(vec![root])
        } else {
            match solver.frontier(root, 8 * problem.workers) {
                Err(found) => found,
                Ok(subtrees) => run_parallel(&solver, subtrees, problem.workers),
            }
        };
        stats.nodes += shared.nodes.load(Ordering::Relaxed);
        stats.connectivity_prunes += shared.prunes.load(Ordering::Relaxed);
        let exhausted = shared.exhausted.load(Ordering::Relaxed);
        if found.is_some() || exhausted || !shared.cut.load(Ordering::Relaxed) {
            break (found, exhausted);
        }
        run += 1;
        stats.restarts += 1;
        run_limit = run_limit.map(|l| l.saturating_mul(2));
    };

    let status = match found {
        Some(graph) => SearchStatus::Feasible {
            connected: graph.is_connected(),
            graph,
        },
        None if exhausted => SearchStatus::BudgetExhausted,
        None => SearchStatus::Infeasible,
    };
    stats.elapsed = start.elapsed();
    SearchOutcome { status, stats }
}

fn run_parallel(solver: &Solver<'_>, subtrees: Vec<Node>, workers: usize) -> Option<Graph> {
    let queue = Mutex::new(subtrees);
    let result: Mutex<Option<Graph>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if solver.shared.stop.load(Ordering::Relaxed) {
                    return;
                }
                let Some(node) = queue.lock().expect("queue poisoned").pop() else {
                    return;
                };
                if let Some(g) = solver.explore(vec![node]) {
                    let mut slot = result.lock().expect("result poisoned");
                    if slot.is_none() {
                        *slot = Some(g);
                    }
                    solver.shared.stop.store(true, Ordering::Relaxed);
                    return;
                }
            });
        }
    });
    result.into_inner().expect("result poisoned")
}

/// Re-checks a feasible outcome from scratch with the labeling module: order,
/// regularity, every weight, and connectivity when it was required or claimed.
pub fn certify(problem: &SearchProblem, outcome: &SearchOutcome) -> bool {
    let SearchStatus::Feasible { graph, connected } = &outcome.status else {
        return false;
    };
    if graph.order() != problem.order() || graph.regularity() != Some(problem.d) {
        return false;
    }
    if graph.is_connected() != *connected || (problem.require_connected && !connected) {
        return false;
    }
    first_nonzero_weight(graph, &problem.labeling, problem.mode).is_none()
}
