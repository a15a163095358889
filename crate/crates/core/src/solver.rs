//! Center search: construct a triangulation minimizing the sum of parallel
//! flip distances to the m input triangulations.
//!
//! The search keeps two views of the objective. The cheap proxy is the sum
//! over inputs of the edge difference |C \ T_i|; a single flip changes it by
//! `cnt(removed) - cnt(added)` where `cnt` counts how many inputs contain an
//! edge, so annealing proposals cost O(1). The reported objective is the sum
//! of witnessed heuristic distance upper bounds (exact distances on small
//! instances), refreshed periodically and used for incumbent tracking.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{
    exact_distance, heuristic_distance, DistanceError, DistanceResult, SearchBudget,
};
use crate::instances::Instance;
use crate::rng::{derive_seed, Rng};
use crate::triangulation::{
    greedy_completion, Edge, Map, Triangulation, TriangulationError,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalMode {
    Exact,
    Surrogate,
}

/// Per-input distance results and their totals for one candidate center.
#[derive(Clone, Debug)]
pub struct ObjectiveValue {
    pub per_input: Vec<DistanceResult>,
    pub total_lower: u64,
    pub total_upper: u64,
    pub mode: EvalMode,
}

impl ObjectiveValue {
    fn from_results(per_input: Vec<DistanceResult>, mode: EvalMode) -> Self {
        let total_lower = per_input.iter().map(|r| r.lower as u64).sum();
        let total_upper = per_input.iter().map(|r| r.upper as u64).sum();
        ObjectiveValue {
            per_input,
            total_lower,
            total_upper,
            mode,
        }
    }

    pub fn summary(&self) -> ObjectiveSummary {
        ObjectiveSummary {
            total_lower: self.total_lower,
            total_upper: self.total_upper,
            mode: self.mode,
            per_input: self
                .per_input
                .iter()
                .map(|r| PerInputSummary {
                    lower: r.lower,
                    upper: r.upper,
                    exact: r.exact,
                })
                .collect(),
        }
    }
}

/// Witness-free serializable form of an [`ObjectiveValue`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ObjectiveSummary {
    pub total_lower: u64,
    pub total_upper: u64,
    pub mode: EvalMode,
    pub per_input: Vec<PerInputSummary>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PerInputSummary {
    pub lower: u32,
    pub upper: u32,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct AnnealingParams {
    /// Starting temperature; None self-calibrates so the median sampled
    /// |delta| is accepted with probability one half.
    pub initial_temperature: Option<f64>,
    /// Multiplicative cooling per batch.
    pub cooling: f64,
    /// Proposals per batch = batch_factor * current flippable edge count.
    pub batch_factor: usize,
}

impl Default for AnnealingParams {
    fn default() -> Self {
        AnnealingParams {
            initial_temperature: None,
            cooling: 0.995,
            batch_factor: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub seed: u64,
    /// Wall-clock cap, checked at batch boundaries. None = no time cap.
    pub time_budget: Option<Duration>,
    /// Deterministic proposal cap. None derives a default from instance size.
    pub proposal_budget: Option<u64>,
    /// Restarts per heuristic distance evaluation. None = 8 for n <= 1000,
    /// 2 above.
    pub eval_restarts: Option<u32>,
    pub annealing: AnnealingParams,
    /// Full objective refresh every this many accepted moves.
    pub refresh_interval: u32,
    /// Exact distances are used when n is at most this threshold.
    pub exact_threshold: usize,
    pub exact_budget: SearchBudget,
    /// Number of initial candidates carried into local search.
    pub top_k: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            time_budget: None,
            proposal_budget: None,
            eval_restarts: None,
            annealing: AnnealingParams::default(),
            refresh_interval: 50,
            exact_threshold: 12,
            exact_budget: SearchBudget::default(),
            top_k: 3,
        }
    }
}

impl SolverConfig {
    fn restarts_for(&self, n: usize) -> u32 {
        self.eval_restarts
            .unwrap_or(if n <= 1000 { 8 } else { 2 })
    }

    fn default_proposals(&self, edge_count: usize) -> u64 {
        (400 * edge_count as u64).clamp(20_000, 2_000_000)
    }
}

#[derive(Error, Debug)]
pub enum SolverError {
    #[error("exact evaluation unavailable for input {input}: {reason}")]
    ExactModeUnavailable { input: usize, reason: String },
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// Called on every incumbent improvement with the new center, its
/// objective, and the elapsed wall clock.
pub type IncumbentObserver<'a> = dyn FnMut(&Triangulation, &ObjectiveValue, Duration) + 'a;

/// Evaluates a candidate center against every input. Exact mode demands
/// n within the exact threshold and a completed search per input;
/// surrogate mode sums witnessed heuristic upper bounds. Deterministic per
/// config seed: evaluation sub-seeds are keyed by the candidate's edge-set
/// hash, so the same center always evaluates the same way.
pub fn evaluate(
    center: &Triangulation,
    instance: &Instance,
    mode: EvalMode,
    config: &SolverConfig,
) -> Result<ObjectiveValue, SolverError> {
    let n = instance.point_set().len();
    match mode {
        EvalMode::Exact => {
            if n > config.exact_threshold {
                return Err(SolverError::ExactModeUnavailable {
                    input: 0,
                    reason: format!(
                        "instance has {n} points, exact threshold is {}",
                        config.exact_threshold
                    ),
                });
            }
            let budget = config.exact_budget;
            let results: Vec<Result<DistanceResult, SolverError>> = instance
                .inputs()
                .par_iter()
                .enumerate()
                .map(|(i, t)| {
                    exact_distance(center, t, &budget).map_err(|e| {
                        SolverError::ExactModeUnavailable {
                            input: i,
                            reason: e.to_string(),
                        }
                    })
                })
                .collect();
            let per_input = results.into_iter().collect::<Result<Vec<_>, _>>()?;
            Ok(ObjectiveValue::from_results(per_input, EvalMode::Exact))
        }
        EvalMode::Surrogate => {
            let restarts = config.restarts_for(n);
            let eval_seed = derive_seed(config.seed, center.canonical_hash());
            let per_input = instance
                .inputs()
                .par_iter()
                .enumerate()
                .map(|(i, t)| heuristic_distance(center, t, derive_seed(eval_seed, i as u64), restarts))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ObjectiveValue::from_results(per_input, EvalMode::Surrogate))
        }
    }
}

/// Counts, for every edge occurring in some input, how many inputs contain
/// it. The proxy objective of a center C is
/// `sum_i |C \ T_i| = sum_{e in C} (m - cnt(e))`.
fn input_edge_counts(instance: &Instance) -> Map<Edge, u32> {
    let mut cnt: Map<Edge, u32> = Map::default();
    for t in instance.inputs() {
        for e in t.edges() {
            *cnt.entry(e).or_insert(0) += 1;
        }
    }
    cnt
}

fn proxy_objective(t: &Triangulation, cnt: &Map<Edge, u32>, m: u64) -> u64 {
    t.edges()
        .map(|e| m - cnt.get(&e).copied().unwrap_or(0) as u64)
        .sum()
}

/// Initial candidate centers: every input triangulation plus the
/// edge-majority greedy triangulation (edges ordered by how many inputs
/// contain them, ties shuffled by seed, inserted greedily and completed to
/// a full triangulation).
pub fn initial_candidates(
    instance: &Instance,
    seed: u64,
) -> Result<Vec<Triangulation>, SolverError> {
    let mut candidates: Vec<Triangulation> = instance.inputs().to_vec();
    let cnt = input_edge_counts(instance);
    let mut ranked: Vec<Edge> = cnt.keys().copied().collect();
    ranked.sort_unstable();
    let mut rng = Rng::new(derive_seed(seed, 0));
    rng.shuffle(&mut ranked);
    ranked.sort_by_key(|e| std::cmp::Reverse(cnt[e]));
    let majority = greedy_completion(instance.point_set(), &ranked, derive_seed(seed, 1))?;
    candidates.push(majority);
    Ok(candidates)
}

struct FlippablePool {
    list: Vec<Edge>,
    pos: Map<Edge, usize>,
}

impl FlippablePool {
    fn rebuild(t: &Triangulation) -> Self {
        let list: Vec<Edge> = t.flippable_edges().into_iter().map(|f| f.edge).collect();
        let mut pos = Map::default();
        for (i, &e) in list.iter().enumerate() {
            pos.insert(e, i);
        }
        FlippablePool { list, pos }
    }

    fn len(&self) -> usize {
        self.list.len()
    }

    fn sample(&self, rng: &mut Rng) -> Edge {
        self.list[rng.next_usize(self.list.len())]
    }

    fn set(&mut self, e: Edge, flippable: bool) {
        match (self.pos.contains_key(&e), flippable) {
            (false, true) => {
                self.pos.insert(e, self.list.len());
                self.list.push(e);
            }
            (true, false) => {
                let i = self.pos.remove(&e).unwrap();
                let last = self.list.len() - 1;
                self.list.swap(i, last);
                self.list.pop();
                if i < self.list.len() {
                    self.pos.insert(self.list[i], i);
                }
            }
            _ => {}
        }
    }

    /// Re-checks the edges whose quads a flip just changed.
    fn update_after_flip(&mut self, t: &Triangulation, removed: Edge, added: Edge, quad: [u32; 4]) {
        self.set(removed, false);
        let [u, r, v, l] = quad;
        for e in [
            added,
            Edge::new(u, l),
            Edge::new(v, l),
            Edge::new(u, r),
            Edge::new(v, r),
        ] {
            self.set(e, t.flippable_info(e).is_some());
        }
    }
}

struct Evaluator<'a> {
    instance: &'a Instance,
    config: &'a SolverConfig,
    use_exact: bool,
    cache: Map<Box<[u64]>, ObjectiveValue>,
}

impl<'a> Evaluator<'a> {
    fn new(instance: &'a Instance, config: &'a SolverConfig) -> Self {
        Evaluator {
            instance,
            config,
            use_exact: instance.point_set().len() <= config.exact_threshold,
            cache: Map::default(),
        }
    }

    fn eval(&mut self, t: &Triangulation) -> Result<ObjectiveValue, SolverError> {
        if self.use_exact {
            let key: Box<[u64]> = {
                let mut k: Vec<u64> = t
                    .edges()
                    .map(|e| ((e.u() as u64) << 32) | e.v() as u64)
                    .collect();
                k.sort_unstable();
                k.into_boxed_slice()
            };
            if let Some(v) = self.cache.get(&key) {
                return Ok(v.clone());
            }
            match evaluate(t, self.instance, EvalMode::Exact, self.config) {
                Ok(v) => {
                    self.cache.insert(key, v.clone());
                    return Ok(v);
                }
                Err(SolverError::ExactModeUnavailable { .. }) => {
                    // Exact search blew its budget; stay on surrogates from
                    // here on so incumbent comparisons remain consistent.
                    self.use_exact = false;
                    self.cache.clear();
                }
                Err(e) => return Err(e),
            }
        }
        evaluate(t, self.instance, EvalMode::Surrogate, self.config)
    }
}

/// Simulated annealing over the single-flip neighborhood, tracking the
/// incumbent by full objective evaluations. Deterministic per seed as long
/// as the wall-clock cap does not interrupt the run.
pub fn local_search(
    instance: &Instance,
    start: &Triangulation,
    config: &SolverConfig,
) -> Result<(Triangulation, ObjectiveValue), SolverError> {
    let deadline = config.time_budget.map(|d| Instant::now() + d);
    let proposals = config
        .proposal_budget
        .unwrap_or_else(|| config.default_proposals(start.edge_count()));
    let mut evaluator = Evaluator::new(instance, config);
    let t0 = Instant::now();
    local_search_impl(
        instance,
        start,
        config,
        proposals,
        deadline,
        &mut evaluator,
        &mut |_t, _o, _d| {},
        t0,
        derive_seed(config.seed, 0x10ca1),
    )
}

#[allow(clippy::too_many_arguments)]
fn local_search_impl(
    instance: &Instance,
    start: &Triangulation,
    config: &SolverConfig,
    proposal_budget: u64,
    deadline: Option<Instant>,
    evaluator: &mut Evaluator,
    observer: &mut IncumbentObserver,
    run_start: Instant,
    chain_seed: u64,
) -> Result<(Triangulation, ObjectiveValue), SolverError> {
    let m = instance.inputs().len() as u64;
    let cnt = input_edge_counts(instance);
    let mut rng = Rng::new(chain_seed);

    let mut cur = start.clone();
    let mut proxy = proxy_objective(&cur, &cnt, m);
    let mut pool = FlippablePool::rebuild(&cur);

    let mut incumbent_obj = evaluator.eval(&cur)?;
    let mut incumbent = cur.clone();
    observer(&incumbent, &incumbent_obj, run_start.elapsed());

    if pool.len() == 0 || incumbent_obj.total_upper == 0 {
        return Ok((incumbent, incumbent_obj));
    }

    // Self-calibrating start temperature: accept the median sampled |delta|
    // with probability 1/2.
    let temperature0 = config.annealing.initial_temperature.unwrap_or_else(|| {
        let mut deltas: Vec<u64> = (0..100)
            .map(|_| {
                let e = pool.sample(&mut rng);
                let f = cur.flippable_info(e).expect("pool member").opposite;
                let before = m - cnt.get(&e).copied().unwrap_or(0) as u64;
                let after = m - cnt.get(&f).copied().unwrap_or(0) as u64;
                after.abs_diff(before)
            })
            .collect();
        deltas.sort_unstable();
        let median = deltas[deltas.len() / 2].max(1);
        median as f64 / std::f64::consts::LN_2
    });

    let mut temperature = temperature0;
    let mut proposals_done = 0u64;
    let mut accepted = 0u64;
    let mut best_proxy = proxy;
    let mut proxy_improved = false;
    let mut idle_batches = 0u32;

    'outer: loop {
        let batch = (config.annealing.batch_factor * pool.len().max(1)).max(16);
        let mut batch_accepts = 0u64;
        for _ in 0..batch {
            if proposals_done >= proposal_budget {
                break 'outer;
            }
            proposals_done += 1;
            if pool.len() == 0 {
                break 'outer;
            }
            let e = pool.sample(&mut rng);
            let info = cur.flippable_info(e).expect("pool member is flippable");
            let f = info.opposite;
            let delta = (m - cnt.get(&f).copied().unwrap_or(0) as u64) as i64
                - (m - cnt.get(&e).copied().unwrap_or(0) as u64) as i64;
            let accept = delta <= 0 || rng.next_f64() < (-(delta as f64) / temperature).exp();
            if !accept {
                continue;
            }
            let quad = info.quad;
            cur.flip_in_place(e)?;
            pool.update_after_flip(&cur, e, f, quad);
            proxy = (proxy as i64 + delta) as u64;
            accepted += 1;
            batch_accepts += 1;
            if proxy < best_proxy {
                best_proxy = proxy;
                proxy_improved = true;
            }

            // Exact mode also evaluates every proxy-best state (the cache
            // makes repeats free); proxy order and exact order can differ.
            let refresh_now = (evaluator.use_exact && proxy <= best_proxy)
                || accepted % config.refresh_interval as u64 == 0;
            if refresh_now {
                let obj = evaluator.eval(&cur)?;
                if obj.total_upper < incumbent_obj.total_upper {
                    incumbent = cur.clone();
                    incumbent_obj = obj;
                    observer(&incumbent, &incumbent_obj, run_start.elapsed());
                    if incumbent_obj.total_upper == 0 {
                        break 'outer;
                    }
                }
            }
        }

        // Batch boundary: refresh on proxy improvement, cool, check stops.
        if proxy_improved {
            proxy_improved = false;
            let obj = evaluator.eval(&cur)?;
            if obj.total_upper < incumbent_obj.total_upper {
                incumbent = cur.clone();
                incumbent_obj = obj;
                observer(&incumbent, &incumbent_obj, run_start.elapsed());
                if incumbent_obj.total_upper == 0 {
                    break;
                }
            }
        }
        temperature *= config.annealing.cooling;
        idle_batches = if batch_accepts == 0 { idle_batches + 1 } else { 0 };
        if idle_batches >= 4 && temperature < 1e-6 * temperature0 {
            break;
        }
        if proposals_done >= proposal_budget {
            break;
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                break;
            }
        }
    }

    // Final look at the chain state.
    let obj = evaluator.eval(&cur)?;
    if obj.total_upper < incumbent_obj.total_upper {
        incumbent = cur;
        incumbent_obj = obj;
        observer(&incumbent, &incumbent_obj, run_start.elapsed());
    }
    Ok((incumbent, incumbent_obj))
}

/// Full solve: initial candidates, proxy triage, local search from the top
/// K, best incumbent wins (ties by candidate order). Always returns a valid
/// triangulation; in the worst case the best initial candidate.
pub fn solve(
    instance: &Instance,
    config: &SolverConfig,
    observer: Option<&mut IncumbentObserver>,
) -> Result<(Triangulation, ObjectiveValue), SolverError> {
    let run_start = Instant::now();
    let deadline = config.time_budget.map(|d| run_start + d);
    let mut noop = |_: &Triangulation, _: &ObjectiveValue, _: Duration| {};
    let observer: &mut IncumbentObserver = match observer {
        Some(o) => o,
        None => &mut noop,
    };

    let m = instance.inputs().len() as u64;
    let cnt = input_edge_counts(instance);
    let candidates = initial_candidates(instance, derive_seed(config.seed, 1))?;

    // Proxy triage; full evaluation only for the carried candidates.
    let mut ranked: Vec<(u64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, t)| (proxy_objective(t, &cnt, m), i))
        .collect();
    ranked.sort_unstable();
    let top_k = config.top_k.max(1).min(ranked.len());

    let mut evaluator = Evaluator::new(instance, config);
    let mut best: Option<(Triangulation, ObjectiveValue)> = None;

    let total_proposals = config
        .proposal_budget
        .unwrap_or_else(|| config.default_proposals(candidates[0].edge_count()));
    let share = (total_proposals / top_k as u64).max(1);

    for k in 0..top_k {
        let cand = &candidates[ranked[k].1];
        let mut gated = |t: &Triangulation, o: &ObjectiveValue, d: Duration| {
            let better = best
                .as_ref()
                .map_or(true, |(_, b)| o.total_upper < b.total_upper);
            if better {
                observer(t, o, d);
            }
        };
        let (t, obj) = local_search_impl(
            instance,
            cand,
            config,
            share,
            deadline,
            &mut evaluator,
            &mut gated,
            run_start,
            derive_seed(config.seed, 0x5ea2c4 + k as u64),
        )?;
        let better = best
            .as_ref()
            .map_or(true, |(_, b)| obj.total_upper < b.total_upper);
        if better {
            best = Some((t, obj));
        }
        if best.as_ref().unwrap().1.total_upper == 0 {
            break;
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                break;
            }
        }
    }

    let (center, mut objective) = best.expect("at least one candidate searched");

    // Exact re-evaluation of the final incumbent on small instances.
    if objective.mode == EvalMode::Surrogate
        && instance.point_set().len() <= config.exact_threshold
    {
        if let Ok(exact) = evaluate(&center, instance, EvalMode::Exact, config) {
            objective = exact;
            observer(&center, &objective, run_start.elapsed());
        }
    }

    Ok((center, objective))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::Instance;
    use crate::triangulation::fixtures::*;

    fn square_instance() -> Instance {
        let ps = square_ps();
        let a = square_tri(&ps, true);
        let b = square_tri(&ps, false);
        Instance::from_parts("square-both".into(), ps, vec![a, b], None).unwrap()
    }

    fn pentagon_instance() -> Instance {
        let ps = pentagon_ps();
        let inputs = vec![
            pentagon_fan(&ps, 0),
            pentagon_fan(&ps, 1),
            pentagon_fan(&ps, 2),
        ];
        Instance::from_parts("pentagon-fans".into(), ps, inputs, None).unwrap()
    }

    #[test]
    fn evaluate_identical_inputs() {
        let ps = pentagon_ps();
        let t = pentagon_fan(&ps, 0);
        let inst =
            Instance::from_parts("same".into(), ps, vec![t.clone(), t.clone()], None).unwrap();
        let cfg = SolverConfig::default();
        let obj = evaluate(&t, &inst, EvalMode::Exact, &cfg).unwrap();
        assert_eq!(obj.total_upper, 0);
        let obj = evaluate(&t, &inst, EvalMode::Surrogate, &cfg).unwrap();
        assert_eq!(obj.total_upper, 0);
    }

    #[test]
    fn evaluate_square_instance() {
        let inst = square_instance();
        let cfg = SolverConfig::default();
        for center in inst.inputs() {
            let obj = evaluate(center, &inst, EvalMode::Exact, &cfg).unwrap();
            assert_eq!(obj.total_upper, 1);
        }
    }

    #[test]
    fn exact_mode_refused_above_threshold() {
        let inst = square_instance();
        let cfg = SolverConfig {
            exact_threshold: 3,
            ..Default::default()
        };
        assert!(matches!(
            evaluate(inst.inputs().first().unwrap(), &inst, EvalMode::Exact, &cfg),
            Err(SolverError::ExactModeUnavailable { .. })
        ));
    }

    #[test]
    fn initial_candidates_contains_inputs_and_majority() {
        let inst = square_instance();
        let cands = initial_candidates(&inst, 7).unwrap();
        assert_eq!(cands.len(), 3);
        assert_eq!(&cands[0], &inst.inputs()[0]);
        assert_eq!(&cands[1], &inst.inputs()[1]);
        // All inputs identical: majority equals the input.
        let ps = pentagon_ps();
        let t = pentagon_fan(&ps, 2);
        let inst =
            Instance::from_parts("same".into(), ps, vec![t.clone(), t.clone()], None).unwrap();
        let cands = initial_candidates(&inst, 3).unwrap();
        assert_eq!(cands[2], t);
    }

    #[test]
    fn solve_single_input_is_zero() {
        let ps = pentagon_ps();
        let t = pentagon_fan(&ps, 1);
        let inst = Instance::from_parts("m1".into(), ps, vec![t.clone()], None).unwrap();
        let cfg = SolverConfig {
            seed: 5,
            proposal_budget: Some(2_000),
            ..Default::default()
        };
        let (center, obj) = solve(&inst, &cfg, None).unwrap();
        assert_eq!(obj.total_upper, 0);
        assert_eq!(center, t);
    }

    #[test]
    fn solve_square_instance() {
        let inst = square_instance();
        let cfg = SolverConfig {
            seed: 11,
            proposal_budget: Some(2_000),
            ..Default::default()
        };
        let (center, obj) = solve(&inst, &cfg, None).unwrap();
        assert_eq!(obj.total_upper, 1);
        assert!(inst.inputs().iter().any(|t| t == &center));
    }

    #[test]
    fn solve_pentagon_matches_exhaustive_minimum() {
        // All 5 triangulations of a convex pentagon are the 5 fans; the
        // flip graph is a 5-cycle and the fans at 0, 1, 2 admit a best
        // objective of 3 (computed independently in the oracle tests).
        let inst = pentagon_instance();
        let cfg = SolverConfig {
            seed: 2,
            proposal_budget: Some(4_000),
            ..Default::default()
        };
        let (_, obj) = solve(&inst, &cfg, None).unwrap();
        assert_eq!(obj.mode, EvalMode::Exact);
        assert_eq!(obj.total_upper, 3);
    }

    #[test]
    fn local_search_preserves_optimal_start() {
        let ps = pentagon_ps();
        let t = pentagon_fan(&ps, 3);
        let inst = Instance::from_parts("m1b".into(), ps, vec![t.clone()], None).unwrap();
        let cfg = SolverConfig {
            seed: 9,
            proposal_budget: Some(3_000),
            ..Default::default()
        };
        let (center, obj) = local_search(&inst, &t, &cfg).unwrap();
        assert_eq!(obj.total_upper, 0);
        assert_eq!(center, t);
    }

    #[test]
    fn solve_deterministic_per_seed() {
        let inst = pentagon_instance();
        let cfg = SolverConfig {
            seed: 31,
            proposal_budget: Some(3_000),
            ..Default::default()
        };
        let (a, oa) = solve(&inst, &cfg, None).unwrap();
        let (b, ob) = solve(&inst, &cfg, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(oa.total_upper, ob.total_upper);
    }
}
