//! Strength evolution: synchronous iteration of a kernel over a BSAF or a
//! BAF, convergence detection and extraction of assumption strengths.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aba::Abaf;
use crate::instantiation::{Baf, Bsaf};
use crate::kernels::{Agg, Influence, Kernel, SetAgg};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon must be positive, got {0}")]
    Epsilon(f64),
    #[error("window must be at least 1")]
    Window,
    #[error("iteration cap {max_iters} is smaller than the window {delta}")]
    Cap { max_iters: usize, delta: usize },
    #[error("influence parameter must be positive, got {0}")]
    InfluenceParameter(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub kernel: Kernel,
    pub epsilon: f64,
    pub delta: usize,
    pub max_iters: usize,
    pub wall_budget: Duration,
    pub record_trajectories: bool,
}

impl EvolutionConfig {
    pub const DEFAULT_EPSILON: f64 = 1e-3;
    pub const DEFAULT_DELTA: usize = 5;
    pub const DEFAULT_MAX_ITERS: usize = 5000;
    pub const DEFAULT_WALL_BUDGET: Duration = Duration::from_secs(600);

    pub fn new(kernel: Kernel) -> Self {
        EvolutionConfig {
            kernel,
            epsilon: Self::DEFAULT_EPSILON,
            delta: Self::DEFAULT_DELTA,
            max_iters: Self::DEFAULT_MAX_ITERS,
            wall_budget: Self::DEFAULT_WALL_BUDGET,
            record_trajectories: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon > 0.0) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if self.delta == 0 {
            return Err(ConfigError::Window);
        }
        if self.max_iters < self.delta {
            return Err(ConfigError::Cap {
                max_iters: self.max_iters,
                delta: self.delta,
            });
        }
        if !(self.kernel.iota.k > 0.0) {
            return Err(ConfigError::InfluenceParameter(self.kernel.iota.k));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Last iterate, indexed by node.
    pub strengths: Vec<f64>,
    pub converged: bool,
    /// First step at which convergence was detected, or the iteration cap.
    pub steps: usize,
    /// Number of updates actually performed.
    pub iterations: usize,
    /// Per node, the values `s(0), s(1), ...`.
    pub trajectories: Option<Vec<Vec<f64>>>,
    pub wall_time: Duration,
    pub timed_out: bool,
}

/// Anything the evolution process can run on.
pub trait Framework {
    fn node_count(&self) -> usize;
    fn base_scores(&self) -> &[f64];
    /// Writes `s(t+1)` into `next` given `s(t)` in `current`.
    fn step_into(&self, kernel: &Kernel, current: &[f64], next: &mut [f64]);
}

fn update_from(zeta: SetAgg, members: &[usize], current: &[f64], scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend(members.iter().map(|&m| current[m]));
    zeta.eval(scratch)
}

impl Framework for Bsaf {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn base_scores(&self) -> &[f64] {
        self.tau()
    }

    fn step_into(&self, kernel: &Kernel, current: &[f64], next: &mut [f64]) {
        let mut scratch = Vec::new();
        let mut att = Vec::new();
        let mut sup = Vec::new();
        for (a, out) in next.iter_mut().enumerate() {
            att.clear();
            sup.clear();
            for e in self.attackers_of(a) {
                att.push(update_from(kernel.zeta, &e.members, current, &mut scratch));
            }
            for e in self.supporters_of(a) {
                sup.push(update_from(kernel.zeta, &e.members, current, &mut scratch));
            }
            *out = kernel
                .iota
                .eval(self.tau()[a], kernel.alpha.eval(&att, &sup));
        }
    }
}

/// A BAF with incoming edges indexed per argument.
#[derive(Debug, Clone)]
pub struct IndexedBaf<'a> {
    baf: &'a Baf,
    attackers: Vec<Vec<usize>>,
    supporters: Vec<Vec<usize>>,
}

impl<'a> IndexedBaf<'a> {
    pub fn new(baf: &'a Baf) -> Self {
        let mut attackers = vec![Vec::new(); baf.len()];
        let mut supporters = vec![Vec::new(); baf.len()];
        for &(x, y) in &baf.attacks {
            attackers[y].push(x);
        }
        for &(x, y) in &baf.supports {
            supporters[y].push(x);
        }
        IndexedBaf {
            baf,
            attackers,
            supporters,
        }
    }

    fn step_with(&self, alpha: Agg, iota: &Influence, current: &[f64], next: &mut [f64]) {
        let mut att = Vec::new();
        let mut sup = Vec::new();
        for (x, out) in next.iter_mut().enumerate() {
            att.clear();
            sup.clear();
            att.extend(self.attackers[x].iter().map(|&y| current[y]));
            sup.extend(self.supporters[x].iter().map(|&y| current[y]));
            *out = iota.eval(self.baf.beta[x], alpha.eval(&att, &sup));
        }
    }
}

impl Framework for IndexedBaf<'_> {
    fn node_count(&self) -> usize {
        self.baf.len()
    }

    fn base_scores(&self) -> &[f64] {
        &self.baf.beta
    }

    /// The set aggregation of the kernel is not used.
    fn step_into(&self, kernel: &Kernel, current: &[f64], next: &mut [f64]) {
        self.step_with(kernel.alpha, &kernel.iota, current, next);
    }
}

/// One synchronous update of every assumption.
pub fn step_bsaf(f: &Bsaf, kernel: &Kernel, current: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; f.len()];
    f.step_into(kernel, current, &mut next);
    next
}

/// One synchronous update of every argument.
pub fn step_baf(f: &Baf, alpha: Agg, iota: Influence, current: &[f64]) -> Vec<f64> {
    let mut next = vec![0.0; f.len()];
    IndexedBaf::new(f).step_with(alpha, &iota, current, &mut next);
    next
}

/// `s(0), ..., s(n)` without any convergence check.
pub fn iterate<F: Framework + ?Sized>(f: &F, kernel: &Kernel, n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(f.base_scores().to_vec());
    for t in 0..n {
        let mut next = vec![0.0; f.node_count()];
        f.step_into(kernel, &out[t], &mut next);
        out.push(next);
    }
    out
}

fn bit_identical(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

fn window_settled(history: &VecDeque<Vec<f64>>, epsilon: f64) -> bool {
    let last = history.back().expect("non-empty history");
    history
        .iter()
        .rev()
        .skip(1)
        .all(|past| last.iter().zip(past).all(|(x, y)| (x - y).abs() <= epsilon))
}

/// Iterates from the base scores until the last `delta` updates all stay
/// within `epsilon`, the iteration cap, or the wall budget.
pub fn run<F: Framework + ?Sized>(f: &F, cfg: &EvolutionConfig) -> RunReport {
    run_observed(f, cfg, &|s: &[f64], out: &mut Vec<f64>| {
        out.extend_from_slice(s)
    })
}

/// Like [`run`], but the convergence window, the reported strengths and the
/// trajectories all refer to `observe(s(t))` rather than to `s(t)`.
pub fn run_observed<F, O>(f: &F, cfg: &EvolutionConfig, observe: &O) -> RunReport
where
    F: Framework + ?Sized,
    O: Fn(&[f64], &mut Vec<f64>) + ?Sized,
{
    let start = Instant::now();
    let look = |s: &[f64]| {
        let mut out = Vec::new();
        observe(s, &mut out);
        out
    };
    let mut current = f.base_scores().to_vec();
    let mut next = vec![0.0; f.node_count()];
    let mut seen = look(&current);
    let mut trajectories = cfg
        .record_trajectories
        .then(|| seen.iter().map(|v| vec![*v]).collect::<Vec<_>>());
    let mut history: VecDeque<Vec<f64>> = VecDeque::with_capacity(cfg.delta + 1);
    history.push_back(seen);

    let mut converged = false;
    let mut timed_out = false;
    let mut iterations = 0;
    for t in 1..=cfg.max_iters {
        f.step_into(&cfg.kernel, &current, &mut next);
        iterations = t;
        let fixed = bit_identical(&current, &next);
        std::mem::swap(&mut current, &mut next);
        seen = if history.len() == cfg.delta + 1 {
            let mut v = history.pop_front().expect("full history");
            v.clear();
            observe(&current, &mut v);
            v
        } else {
            look(&current)
        };
        if let Some(tr) = trajectories.as_mut() {
            for (row, v) in tr.iter_mut().zip(&seen) {
                row.push(*v);
            }
        }
        history.push_back(seen);
        if fixed || (t >= cfg.delta && window_settled(&history, cfg.epsilon)) {
            converged = true;
            break;
        }
        if start.elapsed() > cfg.wall_budget {
            timed_out = true;
            break;
        }
    }
    RunReport {
        strengths: history.pop_back().expect("non-empty history"),
        converged,
        steps: if converged { iterations } else { cfg.max_iters },
        iterations,
        trajectories,
        wall_time: start.elapsed(),
        timed_out,
    }
}

/// Runs a BAF; the set aggregation of the kernel is ignored.
pub fn run_baf(f: &Baf, cfg: &EvolutionConfig) -> RunReport {
    run(&IndexedBaf::new(f), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceBound {
    /// Product of the Lipschitz constants of ζ, α and ι.
    pub lambda_product: f64,
    pub guaranteed: bool,
    /// Largest number of attacking or supporting sets of one assumption.
    pub d: usize,
    /// Largest attacking or supporting set.
    pub h: usize,
    pub k: f64,
}

/// Sufficient condition for the evolution process to converge.
pub fn convergence_guarantee(f: &Bsaf, kernel: &Kernel) -> ConvergenceBound {
    let d = (0..f.len())
        .map(|a| {
            let mut sets: Vec<&Vec<usize>> = f
                .attackers_of(a)
                .chain(f.supporters_of(a))
                .map(|e| &e.members)
                .collect();
            sets.sort();
            sets.dedup();
            sets.len()
        })
        .max()
        .unwrap_or(0);
    let h = f
        .attacks()
        .iter()
        .chain(f.supports())
        .map(|e| e.members.len())
        .max()
        .unwrap_or(0);
    let k = kernel.iota.k;
    let lambda_zeta = match kernel.zeta {
        SetAgg::Sum | SetAgg::Prod => h as f64,
        SetAgg::Min | SetAgg::Max => 1.0,
    };
    let lambda_alpha = d as f64;
    let lambda_product = lambda_zeta * lambda_alpha * kernel.iota.lipschitz();
    let side = match kernel.zeta {
        SetAgg::Sum | SetAgg::Prod => ((h * d) as f64) < k,
        SetAgg::Min | SetAgg::Max => (d as f64) < k,
    };
    ConvergenceBound {
        lambda_product,
        guaranteed: side || lambda_product < 1.0,
        d,
        h,
        k,
    }
}

/// Adjacency of the primal graph: `e → a` for every member `e` of an
/// attacking or supporting set of `a`.
fn primal_successors(f: &Bsaf) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); f.len()];
    for e in f.attacks().iter().chain(f.supports()) {
        for &m in &e.members {
            succ[m].push(e.target);
        }
    }
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
    }
    succ
}

/// Topological order of the primal graph, or `None` on a cycle.
fn primal_topological_order(f: &Bsaf) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    let succ = primal_successors(f);
    let mut indegree = vec![0usize; f.len()];
    for s in &succ {
        for &t in s {
            indegree[t] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..f.len()).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(f.len());
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &t in &succ[v] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    (order.len() == f.len()).then_some((order, succ))
}

pub fn primal_acyclic(f: &Bsaf) -> bool {
    primal_topological_order(f).is_some()
}

/// Number of edges on the longest primal path, or `None` if the primal
/// graph has a cycle.
pub fn longest_primal_path(f: &Bsaf) -> Option<usize> {
    let (order, succ) = primal_topological_order(f)?;
    let mut depth = vec![0usize; f.len()];
    for v in order {
        for &t in &succ[v] {
            depth[t] = depth[t].max(depth[v] + 1);
        }
    }
    Some(depth.into_iter().max().unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaStar {
    Asm,
    Min,
    Max,
    Avg,
}

crate::kernels::names!(SigmaStar {
    "asm" => SigmaStar::Asm,
    "min" => SigmaStar::Min,
    "max" => SigmaStar::Max,
    "avg" => SigmaStar::Avg,
});

/// Reads assumption strengths off argument strengths: for each assumption,
/// the strengths of all arguments claiming it, reduced by a [`SigmaStar`]
/// mode.
#[derive(Debug, Clone)]
pub struct SigmaStarProjection {
    mode: SigmaStar,
    /// Arguments claiming each assumption.
    claiming: Vec<Vec<usize>>,
    /// The argument `{a} ⊢ a` of each assumption; in non-flat frameworks it
    /// may also be rule-based.
    own: Vec<usize>,
}

impl SigmaStarProjection {
    pub fn new(d: &Abaf, baf: &Baf, mode: SigmaStar) -> Self {
        let by_claim = baf.arguments_by_claim();
        let mut claiming = Vec::with_capacity(d.assumption_count());
        let mut own = Vec::with_capacity(d.assumption_count());
        for (i, claim) in d.assumptions().iter().enumerate() {
            let ids = by_claim.get(claim).cloned().unwrap_or_default();
            own.push(
                *ids.iter()
                    .find(|&&x| baf.arguments[x].support == [i])
                    .expect("every assumption has its own argument"),
            );
            claiming.push(ids);
        }
        SigmaStarProjection {
            mode,
            claiming,
            own,
        }
    }

    pub fn project_into(&self, strengths: &[f64], out: &mut Vec<f64>) {
        let mut values = Vec::new();
        for (ids, own) in self.claiming.iter().zip(&self.own) {
            values.clear();
            values.extend(ids.iter().map(|&x| strengths[x]));
            out.push(match self.mode {
                SigmaStar::Asm => strengths[*own],
                SigmaStar::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
                SigmaStar::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                SigmaStar::Avg => {
                    values.sort_by(f64::total_cmp);
                    values.iter().sum::<f64>() / values.len() as f64
                }
            });
        }
    }

    pub fn project(&self, strengths: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.own.len());
        self.project_into(strengths, &mut out);
        out
    }
}

/// Assumption strengths from final argument strengths.
pub fn sigma_star(d: &Abaf, baf: &Baf, strengths: &[f64], mode: SigmaStar) -> Vec<f64> {
    SigmaStarProjection::new(d, baf, mode).project(strengths)
}
