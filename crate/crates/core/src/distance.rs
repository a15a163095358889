//! Parallel flip distance between two triangulations: certified lower
//! bounds, an exact iterative-deepening search for small instances, and a
//! greedy parallel walk that produces witnessed upper bounds at scale.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::segments_cross;
use crate::rng::{derive_seed, Rng};
use crate::seggrid::SegGrid;
use crate::triangulation::{
    Edge, FlippableEdge, Map, PointSet, Set, Triangulation, TriangulationError,
};

/// An ordered list of parallel flip steps. Replaying the steps from the
/// source triangulation yields the target; the length is the number of
/// parallel steps.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct FlipSequence {
    pub steps: Vec<Vec<Edge>>,
}

impl FlipSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Lower and upper bounds on a parallel flip distance, with a witness
/// sequence achieving the upper bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceResult {
    pub lower: u32,
    pub upper: u32,
    pub witness: FlipSequence,
    pub exact: bool,
}

impl DistanceResult {
    fn exact_zero() -> Self {
        DistanceResult {
            lower: 0,
            upper: 0,
            witness: FlipSequence::default(),
            exact: true,
        }
    }
}

/// Node and depth limits for the exact search.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_depth: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 10_000_000,
            max_depth: 64,
        }
    }
}

#[derive(Error, Debug)]
pub enum DistanceError {
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("search budget exhausted (proven lower {})", .partial.lower)]
    BudgetExhausted { partial: DistanceResult },
    #[error("greedy walk made no progress at step {step}")]
    NoProgress { step: usize },
    #[error("flip sequence step {index} is invalid: {source}")]
    InvalidStep {
        index: usize,
        source: TriangulationError,
    },
}

/// Admissible lower bound on the parallel flip distance. Each parallel
/// step replaces at most floor(t/2) edges (t = triangle count, every flip
/// occupies two triangles), and d edge replacements are required, so
/// ceil(d / floor(t/2)) steps are needed; any difference needs at least one.
pub fn distance_lower_bound(t1: &Triangulation, t2: &Triangulation) -> Result<u32, DistanceError> {
    let d = t1.edge_difference(t2)? as u64;
    if d == 0 {
        return Ok(0);
    }
    let cap = (t1.triangle_count() / 2).max(1) as u64;
    Ok((d.div_ceil(cap)).max(1) as u32)
}

/// Replays a flip sequence from `source`, validating each step.
pub fn replay(source: &Triangulation, seq: &FlipSequence) -> Result<Triangulation, DistanceError> {
    let mut cur = source.clone();
    for (index, step) in seq.steps.iter().enumerate() {
        cur.apply_parallel_flip_in_place(step)
            .map_err(|source| DistanceError::InvalidStep { index, source })?;
    }
    Ok(cur)
}

fn canonical_key(t: &Triangulation) -> Box<[u64]> {
    let mut key: Vec<u64> = t
        .edges()
        .map(|e| ((e.u() as u64) << 32) | e.v() as u64)
        .collect();
    key.sort_unstable();
    key.into_boxed_slice()
}

enum Dfs {
    Found,
    /// Minimum f-value seen beyond the current bound, for the next iteration.
    NotFound(u32),
    OutOfBudget,
}

struct ExactSearch<'a> {
    target: &'a Triangulation,
    visited: Map<Box<[u64]>, u32>,
    path: Vec<Vec<Edge>>,
    nodes: u64,
    max_nodes: u64,
}

impl ExactSearch<'_> {
    /// The only parallel flip finishing in one step flips exactly the edges
    /// absent from the target onto their opposites. Returns that set when
    /// it is a valid independent set of flippable edges with all opposites
    /// in the target.
    fn finishing_set(&self, cur: &Triangulation) -> Option<Vec<Edge>> {
        let mut diff: Vec<Edge> = cur
            .edges()
            .filter(|e| !self.target.contains_edge(*e))
            .collect();
        diff.sort_unstable();
        let mut infos: Vec<FlippableEdge> = Vec::with_capacity(diff.len());
        for &e in &diff {
            let info = cur.flippable_info(e)?;
            if !self.target.contains_edge(info.opposite) {
                return None;
            }
            infos.push(info);
        }
        let mut blocked: Set<[u32; 3]> = Set::default();
        for info in &infos {
            let (u, v) = info.edge.endpoints();
            let [_, r, _, l] = info.quad;
            let mut t1 = [u, v, l];
            t1.sort_unstable();
            let mut t2 = [u, v, r];
            t2.sort_unstable();
            if !blocked.insert(t1) || !blocked.insert(t2) {
                return None;
            }
        }
        Some(diff)
    }

    fn dfs(&mut self, cur: &mut Triangulation, g: u32, bound: u32) -> Result<Dfs, DistanceError> {
        let h = distance_lower_bound(cur, self.target)?;
        if h == 0 {
            return Ok(Dfs::Found);
        }
        if g + h > bound {
            return Ok(Dfs::NotFound(g + h));
        }

        let key = canonical_key(cur);
        if let Some(&prev) = self.visited.get(&key) {
            if prev <= g {
                return Ok(Dfs::NotFound(u32::MAX));
            }
        }
        self.visited.insert(key, g);

        // Try to finish in a single parallel step.
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Ok(Dfs::OutOfBudget);
        }
        if let Some(finish) = self.finishing_set(cur) {
            self.path.push(finish.clone());
            cur.apply_parallel_flip_in_place(&finish)?;
            return Ok(Dfs::Found);
        }
        if g + 1 == bound {
            // The remaining single step cannot finish.
            return Ok(Dfs::NotFound(g + 1 + h));
        }

        let flippable = cur.flippable_edges();
        let mut chosen: Vec<FlippableEdge> = Vec::new();
        let mut blocked: Set<[u32; 3]> = Set::default();
        self.enumerate(cur, g, bound, &flippable, 0, &mut chosen, &mut blocked)
    }

    /// Ordered include/exclude branching over the flippable edges, pruning
    /// subsets whose members share a triangle. Each completed non-empty
    /// subset becomes one search node.
    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        cur: &mut Triangulation,
        g: u32,
        bound: u32,
        flippable: &[FlippableEdge],
        i: usize,
        chosen: &mut Vec<FlippableEdge>,
        blocked: &mut Set<[u32; 3]>,
    ) -> Result<Dfs, DistanceError> {
        if i == flippable.len() {
            if chosen.is_empty() {
                return Ok(Dfs::NotFound(u32::MAX));
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Ok(Dfs::OutOfBudget);
            }
            let edges: Vec<Edge> = chosen.iter().map(|f| f.edge).collect();
            let mut new_edges: Vec<Edge> = Vec::with_capacity(edges.len());
            for &e in &edges {
                new_edges.push(cur.flip_in_place(e)?);
            }
            self.path.push(edges);
            let res = self.dfs(cur, g + 1, bound)?;
            if matches!(res, Dfs::Found) {
                return Ok(Dfs::Found);
            }
            self.path.pop();
            for &f in new_edges.iter().rev() {
                cur.flip_in_place(f)?;
            }
            return Ok(res);
        }

        // Exclude flippable[i].
        let mut best_excess = u32::MAX;
        match self.enumerate(cur, g, bound, flippable, i + 1, chosen, blocked)? {
            Dfs::Found => return Ok(Dfs::Found),
            Dfs::OutOfBudget => return Ok(Dfs::OutOfBudget),
            Dfs::NotFound(x) => best_excess = best_excess.min(x),
        }

        // Include flippable[i] when its triangles are free.
        let info = &flippable[i];
        let (u, v) = info.edge.endpoints();
        let [_, r, _, l] = info.quad;
        let mut t1 = [u, v, l];
        t1.sort_unstable();
        let mut t2 = [u, v, r];
        t2.sort_unstable();
        if !blocked.contains(&t1) && !blocked.contains(&t2) {
            blocked.insert(t1);
            blocked.insert(t2);
            chosen.push(info.clone());
            match self.enumerate(cur, g, bound, flippable, i + 1, chosen, blocked)? {
                Dfs::Found => return Ok(Dfs::Found),
                Dfs::OutOfBudget => return Ok(Dfs::OutOfBudget),
                Dfs::NotFound(x) => best_excess = best_excess.min(x),
            }
            chosen.pop();
            blocked.remove(&t1);
            blocked.remove(&t2);
        }
        Ok(Dfs::NotFound(best_excess))
    }
}

/// Exact parallel flip distance by iterative deepening over parallel flip
/// steps, guided by [`distance_lower_bound`]. Intended for small instances;
/// on budget exhaustion the error carries the best proven bounds.
pub fn exact_distance(
    t1: &Triangulation,
    t2: &Triangulation,
    budget: &SearchBudget,
) -> Result<DistanceResult, DistanceError> {
    let lb = distance_lower_bound(t1, t2)?;
    if lb == 0 {
        return Ok(DistanceResult::exact_zero());
    }

    let mut search = ExactSearch {
        target: t2,
        visited: Map::default(),
        path: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
    };

    let mut bound = lb;
    loop {
        if bound > budget.max_depth {
            return Err(budget_exhausted(t1, t2, bound.min(budget.max_depth)));
        }
        search.visited.clear();
        search.path.clear();
        let mut cur = t1.clone();
        match search.dfs(&mut cur, 0, bound)? {
            Dfs::Found => {
                debug_assert_eq!(&cur, t2);
                let witness = FlipSequence {
                    steps: search.path.clone(),
                };
                let upper = witness.len() as u32;
                return Ok(DistanceResult {
                    lower: upper,
                    upper,
                    witness,
                    exact: true,
                });
            }
            Dfs::OutOfBudget => {
                // Every bound below `bound` is refuted, so `bound` itself is
                // a proven lower bound.
                return Err(budget_exhausted(t1, t2, bound));
            }
            Dfs::NotFound(next) => {
                bound = if next == u32::MAX || next <= bound {
                    bound + 1
                } else {
                    next
                };
            }
        }
    }
}

fn budget_exhausted(t1: &Triangulation, t2: &Triangulation, proven_lower: u32) -> DistanceError {
    let fallback = heuristic_distance(t1, t2, 0, 2);
    let partial = match fallback {
        Ok(h) => DistanceResult {
            lower: proven_lower.max(h.lower),
            upper: h.upper,
            witness: h.witness,
            exact: false,
        },
        Err(_) => DistanceResult {
            lower: proven_lower,
            upper: u32::MAX,
            witness: FlipSequence::default(),
            exact: false,
        },
    };
    DistanceError::BudgetExhausted { partial }
}

/// Crossing-count index over a fixed target triangulation. Counts are pure
/// per-edge properties of the target, so they are memoized.
struct TargetIndex<'a> {
    target: &'a Triangulation,
    grid: SegGrid,
    memo: Map<Edge, u32>,
}

impl<'a> TargetIndex<'a> {
    fn new(target: &'a Triangulation) -> Self {
        let ps = target.point_set();
        let mut grid = SegGrid::new(ps.bbox(), target.edge_count());
        for e in target.edges_sorted() {
            grid.insert(ps.point(e.u()), ps.point(e.v()));
        }
        TargetIndex {
            target,
            grid,
            memo: Map::default(),
        }
    }

    fn crossings(&mut self, ps: &PointSet, e: Edge) -> u32 {
        if let Some(&c) = self.memo.get(&e) {
            return c;
        }
        let a = ps.point(e.u());
        let b = ps.point(e.v());
        let c = self
            .grid
            .count_matches(a, b, |s0, s1| segments_cross(a, b, s0, s1)) as u32;
        self.memo.insert(e, c);
        c
    }

    fn contains(&self, e: Edge) -> bool {
        self.target.contains_edge(e)
    }
}

const TABU_LEN: usize = 8;
const STALL_NEUTRAL_LIMIT: u32 = 3;

/// One greedy parallel walk from `t1` toward `t2`. Per step it builds a
/// maximal independent set preferring (a) edges whose opposite diagonal is
/// in the target, then (b) edges whose flip strictly reduces crossings with
/// the target; happy edges (already in the target) are never flipped. On a
/// stall it permits a bounded number of crossing-neutral flips (escalating
/// to minimum-delta flips) steered away from recently seen states.
fn greedy_parallel_walk(
    t1: &Triangulation,
    t2: &Triangulation,
    index: &mut TargetIndex,
    seed: u64,
    max_flips_per_step: usize,
) -> Result<Vec<Vec<Edge>>, DistanceError> {
    let ps = t1.point_set().clone();
    let mut cur = t1.clone();
    let mut remaining = cur.edge_difference(t2)?;
    let mut rng = Rng::new(seed);
    let mut steps: Vec<Vec<Edge>> = Vec::new();
    let mut tabu: VecDeque<u64> = VecDeque::with_capacity(TABU_LEN);
    let mut neutral_run = 0u32;
    let step_cap = 24 * ps.len() + 64;

    while remaining > 0 {
        if steps.len() > step_cap {
            return Err(DistanceError::NoProgress { step: steps.len() });
        }

        let flippable = cur.flippable_edges();
        let mut directed: Vec<FlippableEdge> = Vec::new();
        let mut reducing: Vec<(i64, FlippableEdge)> = Vec::new();
        for f in flippable.iter() {
            if index.contains(f.edge) {
                continue; // happy edges stay put
            }
            if index.contains(f.opposite) {
                directed.push(f.clone());
            } else {
                let delta = index.crossings(&ps, f.opposite) as i64
                    - index.crossings(&ps, f.edge) as i64;
                if delta < 0 {
                    reducing.push((delta, f.clone()));
                }
            }
        }
        rng.shuffle(&mut directed);
        rng.shuffle(&mut reducing);
        reducing.sort_by_key(|(delta, _)| *delta);

        let mut blocked: Set<[u32; 3]> = Set::default();
        let mut chosen: Vec<Edge> = Vec::new();
        let try_take = |f: &FlippableEdge,
                            blocked: &mut Set<[u32; 3]>,
                            chosen: &mut Vec<Edge>| {
            let (u, v) = f.edge.endpoints();
            let [_, r, _, l] = f.quad;
            let mut a = [u, v, l];
            a.sort_unstable();
            let mut b = [u, v, r];
            b.sort_unstable();
            if blocked.contains(&a) || blocked.contains(&b) {
                return;
            }
            blocked.insert(a);
            blocked.insert(b);
            chosen.push(f.edge);
        };
        for f in &directed {
            if chosen.len() >= max_flips_per_step {
                break;
            }
            try_take(f, &mut blocked, &mut chosen);
        }
        for (_, f) in &reducing {
            if chosen.len() >= max_flips_per_step {
                break;
            }
            try_take(f, &mut blocked, &mut chosen);
        }

        if !chosen.is_empty() {
            let new_edges = cur.apply_parallel_flip_in_place(&chosen)?;
            for f in &new_edges {
                if index.contains(*f) {
                    remaining -= 1;
                }
            }
            steps.push(chosen);
            neutral_run = 0;
            push_tabu(&mut tabu, cur.canonical_hash());
            continue;
        }

        // Stall: no directed or crossing-reducing move exists. Take one
        // lateral flip, preferring crossing-neutral moves and unseen states.
        let mut lateral: Vec<(i64, FlippableEdge)> = Vec::new();
        for f in flippable.iter() {
            if index.contains(f.edge) {
                continue;
            }
            let delta =
                index.crossings(&ps, f.opposite) as i64 - index.crossings(&ps, f.edge) as i64;
            lateral.push((delta, f.clone()));
        }
        if lateral.is_empty() {
            return Err(DistanceError::NoProgress { step: steps.len() });
        }
        rng.shuffle(&mut lateral);
        lateral.sort_by_key(|(delta, _)| *delta);
        let allowed_delta = if neutral_run < STALL_NEUTRAL_LIMIT { 0 } else { i64::MAX };
        let candidates: Vec<&(i64, FlippableEdge)> = lateral
            .iter()
            .filter(|(d, _)| *d <= allowed_delta)
            .collect();
        let pool = if candidates.is_empty() {
            lateral.iter().collect::<Vec<_>>()
        } else {
            candidates
        };
        let fresh: Vec<&&(i64, FlippableEdge)> = pool
            .iter()
            .filter(|(_, f)| {
                let next_hash =
                    cur.canonical_hash() ^ f.edge.stable_hash() ^ f.opposite.stable_hash();
                !tabu.contains(&next_hash)
            })
            .collect();
        let (_, pick) = if fresh.is_empty() {
            pool[rng.next_usize(pool.len())]
        } else {
            fresh[rng.next_usize(fresh.len())]
        };
        let e = pick.edge;
        let f = cur.flip_in_place(e)?;
        if index.contains(f) {
            remaining -= 1;
        }
        steps.push(vec![e]);
        neutral_run += 1;
        push_tabu(&mut tabu, cur.canonical_hash());
    }

    Ok(steps)
}

fn push_tabu(tabu: &mut VecDeque<u64>, hash: u64) {
    if tabu.len() == TABU_LEN {
        tabu.pop_front();
    }
    tabu.push_back(hash);
}

/// Point-count threshold below which a pure sequential walk is also tried
/// as an extra upper-bound candidate (its singleton steps form a valid
/// parallel witness).
const SEQUENTIAL_CANDIDATE_LIMIT: usize = 600;

/// Witnessed upper bound on the parallel flip distance from seeded greedy
/// parallel walks, paired with [`distance_lower_bound`]. The best of
/// `restarts` walks is kept, ties broken by restart index.
pub fn heuristic_distance(
    t1: &Triangulation,
    t2: &Triangulation,
    seed: u64,
    restarts: u32,
) -> Result<DistanceResult, DistanceError> {
    let lower = distance_lower_bound(t1, t2)?;
    if lower == 0 {
        return Ok(DistanceResult::exact_zero());
    }

    let mut index = TargetIndex::new(t2);
    let mut best: Option<Vec<Vec<Edge>>> = None;
    for r in 0..restarts.max(1) {
        let walk = greedy_parallel_walk(t1, t2, &mut index, derive_seed(seed, r as u64), usize::MAX)?;
        if best.as_ref().map_or(true, |b| walk.len() < b.len()) {
            best = Some(walk);
        }
    }
    if t1.point_set().len() <= SEQUENTIAL_CANDIDATE_LIMIT {
        let walk = greedy_parallel_walk(t1, t2, &mut index, derive_seed(seed, 1 << 32), 1)?;
        if best.as_ref().map_or(true, |b| walk.len() < b.len()) {
            best = Some(walk);
        }
    }

    let steps = best.expect("at least one walk runs");
    let upper = steps.len() as u32;
    Ok(DistanceResult {
        lower,
        upper,
        exact: lower == upper,
        witness: FlipSequence { steps },
    })
}

/// Length of a pure sequential greedy walk (one flip per step). Upper
/// bound on the sequential flip distance; used as a sanity ceiling for the
/// parallel heuristic in tests.
pub fn sequential_walk_length(
    t1: &Triangulation,
    t2: &Triangulation,
    seed: u64,
) -> Result<u32, DistanceError> {
    if t1.edge_difference(t2)? == 0 {
        return Ok(0);
    }
    let mut index = TargetIndex::new(t2);
    let walk = greedy_parallel_walk(t1, t2, &mut index, seed, 1)?;
    Ok(walk.len() as u32)
}
