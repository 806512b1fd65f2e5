//! Exact search oracles: independence number, the minimum induced maximum
//! degree over `(alpha + s)`-vertex subsets, and the degree/eigenvalue bound
//! check. None of the searches consult the closed-form results unless a
//! caller opts in through [`FSearchOptions::lower_bound`].

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::alpha_formula;
use crate::error::{Error, Result};
use crate::grid::{PathPower, VertexSet};
use crate::signed::{check_support, principal_submatrix, SignedMatrix};
use crate::spectral::{beta, eigenvalues_sym, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Cap on search nodes (partial or complete subsets) visited.
    pub max_subsets: u64,
    pub max_seconds: f64,
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_subsets: 1_000_000_000,
            max_seconds: 600.0,
            workers: 1,
        }
    }
}

impl SearchBudget {
    fn validate(&self) -> Result<()> {
        if self.workers < 1 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
        if self.max_seconds.is_nan() || self.max_seconds <= 0.0 {
            return Err(Error::InvalidParameter("max_seconds must be positive".into()));
        }
        Ok(())
    }

    fn deadline(&self) -> Instant {
        Instant::now() + Duration::from_secs_f64(self.max_seconds.min(1e9))
    }
}

// ---------------------------------------------------------------------------
// Bitsets over ranks

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and_count(&self, o: &Bits) -> usize {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }

    fn first_common(&self, o: &Bits) -> Option<usize> {
        self.0
            .iter()
            .zip(&o.0)
            .enumerate()
            .find(|(_, (a, b))| *a & *b != 0)
            .map(|(i, (a, b))| i * 64 + (a & b).trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

// ---------------------------------------------------------------------------
// Maximum independent set

#[derive(Debug, Clone, Serialize)]
pub struct MisResult {
    pub size: usize,
    pub witness: VertexSet,
    /// False when the budget ran out before optimality was proven.
    pub proven_optimal: bool,
    pub nodes: u64,
}

struct MisSearch<'a> {
    adj: &'a [Bits],
    /// Closed neighbourhoods.
    closed: Vec<Bits>,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    aborted: bool,
}

impl MisSearch<'_> {
    /// Greedy cover of `cand` by edges and singletons; every independent set
    /// meets each part at most once.
    fn cover_bound(&self, cand: &Bits) -> usize {
        let mut rest = cand.clone();
        let mut parts = 0;
        loop {
            let Some(u) = rest.iter().next() else { break };
            rest.clear(u);
            if let Some(w) = rest.first_common(&self.adj[u]) {
                rest.clear(w);
            }
            parts += 1;
        }
        parts
    }

    fn run(&mut self, cand: Bits, cur: &mut Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline) {
            self.aborted = true;
        }
        if self.aborted {
            return;
        }
        if cand.is_empty() {
            if cur.len() > self.best.len() {
                self.best = cur.clone();
            }
            return;
        }
        if cur.len() + self.cover_bound(&cand) <= self.best.len() {
            return;
        }
        // Branch on a minimum-degree candidate.
        let (v, deg) = cand
            .iter()
            .map(|v| (v, cand.and_count(&self.adj[v])))
            .min_by_key(|&(v, d)| (d, v))
            .expect("non-empty");

        cur.push(v);
        self.run(cand.and_not(&self.closed[v]), cur);
        cur.pop();
        // A vertex of degree <= 1 lies in some maximum independent set of
        // the candidate graph, so excluding it cannot do better.
        if deg <= 1 {
            return;
        }
        let mut without = cand;
        without.clear(v);
        self.run(without, cur);
    }
}

fn adjacency_bits(g: &PathPower) -> Vec<Bits> {
    let n = g.n_vertices();
    (0..n)
        .map(|r| {
            let mut b = Bits::empty(n);
            g.for_each_neighbor(r, |x| b.set(x));
            b
        })
        .collect()
}

/// Exact independence number with a witness, by branch and bound.
pub fn max_independent_set(g: &PathPower, budget: &SearchBudget) -> Result<MisResult> {
    budget.validate()?;
    let n = g.n_vertices();
    let adj = adjacency_bits(g);
    let closed = adj
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut c = b.clone();
            c.set(i);
            c
        })
        .collect();
    let mut s = MisSearch {
        adj: &adj,
        closed,
        best: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_subsets,
        deadline: budget.deadline(),
        aborted: false,
    };
    s.run(Bits::full(n), &mut Vec::new());
    let witness = VertexSet::from_ranks(g, s.best.iter().copied())?;
    Ok(MisResult {
        size: witness.len(),
        witness,
        proven_optimal: !s.aborted,
        nodes: s.nodes,
    })
}

// ---------------------------------------------------------------------------
// f(G) and its (alpha + s) generalisation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueKind {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "lower")]
    Lower,
    #[serde(rename = "upper-unproven")]
    UpperUnproven,
}

impl std::fmt::Display for ValueKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ValueKind::Exact => "exact",
            ValueKind::Lower => "lower",
            ValueKind::UpperUnproven => "upper-unproven",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FSearchOptions {
    /// Extra proven lower bound; the search stops as soon as a subset
    /// attains `max(1, lower_bound)`. `None` uses only the trivial bound 1.
    pub lower_bound: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FResult {
    /// Minimum induced maximum degree found; `None` if the budget ran out
    /// before any complete subset was scored.
    pub value: Option<usize>,
    pub kind: ValueKind,
    pub witness: Option<VertexSet>,
    pub subset_size: usize,
    pub alpha: usize,
    pub subsets_examined: u64,
    /// True when the search stopped because the value met the lower bound.
    pub early_exit: bool,
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    stop: AtomicBool,
    aborted: AtomicBool,
    witness: Mutex<Option<(usize, Vec<usize>)>>,
}

struct FWorker<'a> {
    g: &'a PathPower,
    target: usize,
    floor: usize,
    shared: &'a Shared,
    max_nodes: u64,
    deadline: Instant,
    /// Chosen neighbours per vertex.
    cnt: Vec<usize>,
    chosen: Vec<usize>,
    in_set: Vec<bool>,
    local_nodes: u64,
}

const NODE_FLUSH: u64 = 4096;

impl FWorker<'_> {
    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total > self.max_nodes || Instant::now() > self.deadline {
            self.shared.aborted.store(true, Ordering::Relaxed);
            self.shared.stop.store(true, Ordering::Relaxed);
        }
    }

    /// Adds `v`; returns the induced maximum degree contribution among the
    /// touched vertices.
    fn push(&mut self, v: usize) -> usize {
        let mut worst = self.cnt[v];
        self.g.for_each_neighbor(v, |u| {
            self.cnt[u] += 1;
            if self.in_set[u] {
                worst = worst.max(self.cnt[u]);
            }
        });
        self.in_set[v] = true;
        self.chosen.push(v);
        worst
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().expect("non-empty");
        self.in_set[v] = false;
        self.g.for_each_neighbor(v, |u| self.cnt[u] -= 1);
    }

    fn record(&mut self, value: usize) {
        let mut w = self.shared.witness.lock().expect("poisoned");
        let better = match &*w {
            None => true,
            Some((bv, bs)) => value < *bv || (value == *bv && self.chosen < *bs),
        };
        if better {
            *w = Some((value, self.chosen.clone()));
        }
        self.shared.best.fetch_min(value, Ordering::Relaxed);
        if value <= self.floor {
            self.shared.stop.store(true, Ordering::Relaxed);
        }
    }

    fn dfs(&mut self, next: usize, cur_max: usize) {
        self.local_nodes += 1;
        if self.local_nodes >= NODE_FLUSH {
            self.flush();
        }
        if self.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        if self.chosen.len() == self.target {
            self.record(cur_max);
            return;
        }
        let n = self.g.n_vertices();
        let need = self.target - self.chosen.len();
        for v in next..=n - need {
            let worst = self.push(v).max(cur_max);
            if worst < self.shared.best.load(Ordering::Relaxed) {
                self.dfs(v + 1, worst);
            }
            self.pop();
            if self.shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

/// Minimum over all subsets `S` with `|S| = alpha + s` of the maximum
/// degree of the induced subgraph, with a witness.
///
/// Subsets are scanned in lexicographic rank order; a partial subset is
/// abandoned once one of its members already has as many chosen neighbours
/// as the best value found. Work is split across workers by the smallest
/// member. With one worker the witness is the lexicographically smallest
/// optimal subset.
pub fn brute_force_f(
    g: &PathPower,
    s: usize,
    budget: &SearchBudget,
    opts: &FSearchOptions,
) -> Result<FResult> {
    budget.validate()?;
    if s < 1 {
        return Err(Error::InvalidParameter("s must be >= 1".into()));
    }
    let mis = max_independent_set(g, budget)?;
    if !mis.proven_optimal {
        return Err(Error::BudgetExhausted(
            "independence number not proven within the budget".into(),
        ));
    }
    let alpha = mis.size;
    let target = alpha + s;
    let n = g.n_vertices();
    if target > n {
        return Err(Error::InvalidParameter(format!(
            "no subset of size {target} in a graph on {n} vertices"
        )));
    }
    let floor = opts.lower_bound.unwrap_or(1).max(1);
    let shared = Shared {
        best: AtomicUsize::new(usize::MAX),
        nodes: AtomicU64::new(mis.nodes),
        stop: AtomicBool::new(false),
        aborted: AtomicBool::new(false),
        witness: Mutex::new(None),
    };
    let next_first = AtomicUsize::new(0);
    let deadline = budget.deadline();
    let last_first = n - target;

    let work = || {
        let mut w = FWorker {
            g,
            target,
            floor,
            shared: &shared,
            max_nodes: budget.max_subsets,
            deadline,
            cnt: vec![0; n],
            chosen: Vec::with_capacity(target),
            in_set: vec![false; n],
            local_nodes: 0,
        };
        loop {
            let f = next_first.fetch_add(1, Ordering::Relaxed);
            if f > last_first || shared.stop.load(Ordering::Relaxed) {
                break;
            }
            let worst = w.push(f);
            w.dfs(f + 1, worst);
            w.pop();
        }
        w.flush();
    };
    if budget.workers == 1 {
        work();
    } else {
        std::thread::scope(|sc| {
            for _ in 0..budget.workers {
                sc.spawn(work);
            }
        });
    }

    let aborted = shared.aborted.load(Ordering::Relaxed);
    let found = shared.witness.into_inner().expect("poisoned");
    let early_exit = !aborted && found.as_ref().is_some_and(|(v, _)| *v <= floor);
    let (value, witness) = match found {
        Some((v, ranks)) => (Some(v), Some(VertexSet::from_ranks(g, ranks)?)),
        None => (None, None),
    };
    let kind = if aborted && !early_exit {
        ValueKind::UpperUnproven
    } else {
        ValueKind::Exact
    };
    Ok(FResult {
        value,
        kind,
        witness,
        subset_size: target,
        alpha,
        subsets_examined: shared.nodes.load(Ordering::Relaxed),
        early_exit,
    })
}

// ---------------------------------------------------------------------------
// Spectral bounds

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HuangCheck {
    pub max_degree: usize,
    pub lambda_max: f64,
    pub passed: bool,
}

/// `Δ(G[S]) >= λ_1(A[S]) - tol` for a signing `A` of the graph.
pub fn huang_bound_check(a: &SignedMatrix, s: &VertexSet, tol: f64) -> Result<HuangCheck> {
    let g = s.graph();
    if !check_support(a, g)? {
        return Err(Error::InvalidParameter(
            "matrix support differs from the graph adjacency".into(),
        ));
    }
    let b = principal_submatrix(a, s)?;
    let lambda_max = eigenvalues_sym(&b, &Tolerances::default())?
        .max()
        .unwrap_or(0.0);
    let max_degree = s.induced_max_degree()?;
    Ok(HuangCheck {
        max_degree,
        lambda_max,
        passed: max_degree as f64 >= lambda_max - tol,
    })
}

/// Tolerance used for `beta_n` inside [`lower_bound_even`].
pub const LOWER_BOUND_BETA_TOL: f64 = 1e-12;
const CEIL_GUARD: f64 = 1e-9;

/// `ceil(sqrt(k * beta_n))`, guard-banded near integers.
///
/// If the square root lies within `1e-9` of an integer, `beta_n` is
/// recomputed ten times more tightly; if it is still inside the band the
/// value is taken to be that integer.
pub fn lower_bound_even(n: u32, k: u32) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let root = |tol: f64| -> Result<f64> { Ok((k as f64 * beta(n, tol)?).sqrt()) };
    let mut r = root(LOWER_BOUND_BETA_TOL)?;
    if (r - r.round()).abs() <= CEIL_GUARD {
        r = root(LOWER_BOUND_BETA_TOL / 10.0)?;
        if (r - r.round()).abs() <= CEIL_GUARD {
            return Ok(r.round() as u64);
        }
    }
    Ok(r.ceil() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremValue {
    pub m: u32,
    pub k: u32,
    pub value: u64,
    pub kind: ValueKind,
}

/// Closed-form value or lower bound for `f(P_m^k)`.
pub fn f_value_theorem(m: u32, k: u32) -> Result<TheoremValue> {
    if m < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("need m >= 2 and k >= 1, got m={m} k={k}")));
    }
    let (value, kind) = match m {
        3 => (2, ValueKind::Exact),
        m if m % 2 == 1 => (1, ValueKind::Exact),
        m => (lower_bound_even(m / 2, k)?, ValueKind::Lower),
    };
    Ok(TheoremValue { m, k, value, kind })
}

/// The known lower bound to hand to [`brute_force_f`] as an early exit for
/// `s = 1`: the closed-form value when it is a lower bound too.
pub fn theorem_lower_bound(m: u32, k: u32) -> Result<usize> {
    Ok(f_value_theorem(m, k)?.value as usize)
}

/// Uniform random subset of `size` vertices.
pub fn random_subset<R: Rng + ?Sized>(g: &PathPower, size: usize, rng: &mut R) -> Result<VertexSet> {
    if size > g.n_vertices() {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {size} of {} vertices",
            g.n_vertices()
        )));
    }
    VertexSet::from_ranks(g, sample(rng, g.n_vertices(), size))
}

/// `alpha + 1` as a machine integer, for sizing subsets.
pub fn alpha_plus_one(g: &PathPower) -> usize {
    alpha_formula(g.m(), g.k()) as usize + 1
}
