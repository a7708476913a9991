//! Experiment plumbing: single-instance evaluation, corpus sweeps over a grid
//! of semantics and instantiations, convergence metrics and CSV/JSON output.

pub mod properties;

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aba::{check_flat, parse_abaf, Abaf};
use crate::engine::{
    run, run_observed, ConfigError, EvolutionConfig, IndexedBaf, RunReport, SigmaStar,
    SigmaStarProjection,
};
use crate::generator::{derive_seed, gen_abaf, rng_for, GenParams};
use crate::instantiation::{
    baf_from_pairs, bsaf_from_pairs, saturate, BaseScoreFn, BsafOptions, DerivedPair,
    InstantiationError, SaturationLimits,
};
use crate::kernels::{Kernel, QeVariant, Semantics, SetAgg, UnknownName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Bsaf,
    Baf,
}

crate::kernels::names!(Approach { "bsaf" => Approach::Bsaf, "baf" => Approach::Baf });

/// Where initial base scores come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauInit {
    /// Weights given in the input file.
    File,
    Const(f64),
    /// Uniform on `[0, 1]`, seeded per instance.
    Uniform,
}

impl fmt::Display for TauInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauInit::File => f.write_str("file"),
            TauInit::Const(v) => write!(f, "const:{v}"),
            TauInit::Uniform => f.write_str("uniform"),
        }
    }
}

impl FromStr for TauInit {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "file" => Ok(TauInit::File),
            "uniform" => Ok(TauInit::Uniform),
            "const" => Ok(TauInit::Const(0.5)),
            _ => s
                .strip_prefix("const:")
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| (0.0..=1.0).contains(v))
                .map(TauInit::Const)
                .ok_or_else(|| UnknownName(s.to_string())),
        }
    }
}

impl TauInit {
    /// Base scores of `d` under this initialisation. `instance_seed` drives
    /// the uniform draw so every cell sees the same scores for one instance.
    pub fn scores(self, d: &Abaf, instance_seed: u64) -> Vec<f64> {
        match self {
            TauInit::File => d.tau().to_vec(),
            TauInit::Const(v) => vec![v; d.assumption_count()],
            TauInit::Uniform => {
                let mut rng = rng_for(instance_seed);
                (0..d.assumption_count())
                    .map(|_| rng.gen::<f64>())
                    .collect()
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("grid axis `{0}` is empty")]
    EmptyAxis(&'static str),
    #[error("number of trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub approaches: Vec<Approach>,
    pub semantics: Vec<Semantics>,
    /// Used by `bsaf` cells.
    pub set_aggs: Vec<SetAgg>,
    /// Used by `baf` cells.
    pub base_aggs: Vec<BaseScoreFn>,
    /// Used by `baf` cells.
    pub sigma_star: Vec<SigmaStar>,
    pub tau_init: Vec<TauInit>,
    pub seeds: Vec<u64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            approaches: vec![Approach::Bsaf, Approach::Baf],
            semantics: vec![Semantics::Dfq, Semantics::Qe],
            set_aggs: vec![SetAgg::Min, SetAgg::Prod],
            base_aggs: vec![BaseScoreFn::Min, BaseScoreFn::Prod],
            sigma_star: vec![SigmaStar::Asm, SigmaStar::Avg],
            tau_init: vec![TauInit::Const(0.5), TauInit::Uniform],
            seeds: vec![0],
        }
    }
}

/// One combination of grid values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub approach: Approach,
    pub semantics: Semantics,
    pub set_agg: Option<SetAgg>,
    pub base_agg: Option<BaseScoreFn>,
    pub sigma_star: Option<SigmaStar>,
    pub tau_init: TauInit,
    pub seed: u64,
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Cell {
    pub fn bsaf(semantics: Semantics, set_agg: SetAgg, tau_init: TauInit, seed: u64) -> Cell {
        Cell {
            approach: Approach::Bsaf,
            semantics,
            set_agg: Some(set_agg),
            base_agg: None,
            sigma_star: None,
            tau_init,
            seed,
        }
    }

    pub fn baf(
        semantics: Semantics,
        base_agg: BaseScoreFn,
        sigma_star: SigmaStar,
        tau_init: TauInit,
        seed: u64,
    ) -> Cell {
        Cell {
            approach: Approach::Baf,
            semantics,
            set_agg: None,
            base_agg: Some(base_agg),
            sigma_star: Some(sigma_star),
            tau_init,
            seed,
        }
    }

    /// Grid coordinates without the seed, as used to group metrics.
    pub fn label(&self) -> String {
        cell_label(
            self.approach,
            self.semantics,
            &opt(self.set_agg),
            &opt(self.base_agg),
            &opt(self.sigma_star),
            &self.tau_init.to_string(),
        )
    }

    pub fn kernel(&self, settings: &RunSettings) -> Kernel {
        // BAF runs never look at the set aggregation
        let zeta = self.set_agg.unwrap_or(SetAgg::Prod);
        self.semantics.kernel(zeta, settings.k, settings.qe_variant)
    }
}

fn cell_label(
    approach: Approach,
    semantics: Semantics,
    set_agg: &str,
    base_agg: &str,
    sigma_star: &str,
    tau_init: &str,
) -> String {
    let mut parts = vec![approach.to_string(), semantics.to_string()];
    for part in [set_agg, base_agg, sigma_star] {
        if !part.is_empty() {
            parts.push(part.to_string());
        }
    }
    parts.push(tau_init.to_string());
    parts.join("/")
}

impl GridSpec {
    pub fn cells(&self) -> Result<Vec<Cell>, HarnessError> {
        let non_empty = |len: usize, name| {
            if len == 0 {
                Err(HarnessError::EmptyAxis(name))
            } else {
                Ok(())
            }
        };
        non_empty(self.approaches.len(), "approaches")?;
        non_empty(self.semantics.len(), "semantics")?;
        non_empty(self.tau_init.len(), "tau_init")?;
        non_empty(self.seeds.len(), "seeds")?;
        if self.approaches.contains(&Approach::Bsaf) {
            non_empty(self.set_aggs.len(), "set_aggs")?;
        }
        if self.approaches.contains(&Approach::Baf) {
            non_empty(self.base_aggs.len(), "base_aggs")?;
            non_empty(self.sigma_star.len(), "sigma_star")?;
        }
        let mut cells = Vec::new();
        for &approach in &self.approaches {
            for &semantics in &self.semantics {
                for &tau_init in &self.tau_init {
                    for &seed in &self.seeds {
                        match approach {
                            Approach::Bsaf => {
                                for &z in &self.set_aggs {
                                    cells.push(Cell::bsaf(semantics, z, tau_init, seed));
                                }
                            }
                            Approach::Baf => {
                                for &b in &self.base_aggs {
                                    for &m in &self.sigma_star {
                                        cells.push(Cell::baf(semantics, b, m, tau_init, seed));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(cells)
    }
}

/// Which strengths the convergence window of a BAF run watches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BafWindow {
    /// Every argument.
    Arguments,
    /// The assumption strengths read off the arguments.
    Assumptions,
}

crate::kernels::names!(BafWindow {
    "arguments" => BafWindow::Arguments,
    "assumptions" => BafWindow::Assumptions,
});

/// Knobs shared by every run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub k: f64,
    pub qe_variant: QeVariant,
    pub epsilon: f64,
    pub delta: usize,
    pub max_iters: usize,
    pub wall_budget: Duration,
    pub limits: SaturationLimits,
    pub bsaf_options: BsafOptions,
    pub baf_window: BafWindow,
    pub record_trajectories: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            k: 1.0,
            qe_variant: QeVariant::Standard,
            epsilon: EvolutionConfig::DEFAULT_EPSILON,
            delta: EvolutionConfig::DEFAULT_DELTA,
            max_iters: EvolutionConfig::DEFAULT_MAX_ITERS,
            wall_budget: EvolutionConfig::DEFAULT_WALL_BUDGET,
            limits: SaturationLimits::default(),
            bsaf_options: BsafOptions::default(),
            baf_window: BafWindow::Arguments,
            record_trajectories: false,
        }
    }
}

impl RunSettings {
    pub fn config(&self, kernel: Kernel) -> Result<EvolutionConfig, ConfigError> {
        let cfg = EvolutionConfig {
            kernel,
            epsilon: self.epsilon,
            delta: self.delta,
            max_iters: self.max_iters,
            wall_budget: self.wall_budget,
            record_trajectories: self.record_trajectories,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Abstraction,
    Semantics,
}

crate::kernels::names!(Phase { "abstraction" => Phase::Abstraction, "semantics" => Phase::Semantics });

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("abstraction failed: {0}")]
    Abstraction(#[from] InstantiationError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl EvalError {
    pub fn phase(&self) -> Option<Phase> {
        match self {
            EvalError::Abstraction(_) => Some(Phase::Abstraction),
            EvalError::Config(_) => None,
        }
    }
}

/// Result of one evaluation. The strengths and trajectories of the report
/// are per assumption for both approaches.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub kernel: Kernel,
    pub report: RunReport,
}

impl Evaluation {
    pub fn phase_timeout(&self) -> Option<Phase> {
        self.report.timed_out.then_some(Phase::Semantics)
    }
}

/// Evaluates one framework under one grid cell. `instance_seed` only matters
/// for uniform base scores.
pub fn eval_instance(
    d: &Abaf,
    cell: &Cell,
    settings: &RunSettings,
    instance_seed: u64,
) -> Result<Evaluation, EvalError> {
    let pairs = saturate(d, settings.limits)?;
    eval_with_pairs(d, &pairs, cell, settings, instance_seed)
}

fn eval_with_pairs(
    d: &Abaf,
    pairs: &[DerivedPair],
    cell: &Cell,
    settings: &RunSettings,
    instance_seed: u64,
) -> Result<Evaluation, EvalError> {
    let kernel = cell.kernel(settings);
    let cfg = settings.config(kernel)?;
    let tau = cell.tau_init.scores(d, instance_seed);
    let report = match cell.approach {
        Approach::Bsaf => {
            let d = d.with_tau(tau).expect("base scores lie in [0, 1]");
            let f = bsaf_from_pairs(&d, pairs, settings.bsaf_options);
            run(&f, &cfg)
        }
        Approach::Baf => {
            let beta_fn = cell.base_agg.unwrap_or(BaseScoreFn::Prod);
            let baf = baf_from_pairs(d, pairs, beta_fn, &tau, settings.limits)?;
            let projection =
                SigmaStarProjection::new(d, &baf, cell.sigma_star.unwrap_or(SigmaStar::Asm));
            let f = IndexedBaf::new(&baf);
            match settings.baf_window {
                BafWindow::Arguments => {
                    let mut r = run(&f, &cfg);
                    r.strengths = projection.project(&r.strengths);
                    r.trajectories = r.trajectories.map(|tr| {
                        let len = tr.first().map_or(0, Vec::len);
                        let mut out = vec![Vec::with_capacity(len); d.assumption_count()];
                        let mut column = Vec::with_capacity(tr.len());
                        for t in 0..len {
                            column.clear();
                            column.extend(tr.iter().map(|row| row[t]));
                            for (row, v) in out.iter_mut().zip(projection.project(&column)) {
                                row.push(v);
                            }
                        }
                        out
                    });
                    r
                }
                BafWindow::Assumptions => {
                    run_observed(&f, &cfg, &|s: &[f64], out: &mut Vec<f64>| {
                        projection.project_into(s, out)
                    })
                }
            }
        }
    };
    Ok(Evaluation { kernel, report })
}

/// JSON form of a single evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub instance: String,
    pub approach: Approach,
    pub kernel: Kernel,
    pub converged: bool,
    pub steps: usize,
    pub wall_ms: u64,
    pub strengths: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<BTreeMap<String, Vec<f64>>>,
}

impl JsonReport {
    pub fn new(instance: &str, d: &Abaf, approach: Approach, eval: &Evaluation) -> Self {
        let name = |i: usize| d.assumption_name(i).to_string();
        let r = &eval.report;
        JsonReport {
            instance: instance.to_string(),
            approach,
            kernel: eval.kernel,
            converged: r.converged,
            steps: r.steps,
            wall_ms: r.wall_time.as_millis() as u64,
            strengths: r
                .strengths
                .iter()
                .enumerate()
                .map(|(i, v)| (name(i), *v))
                .collect(),
            trajectories: r.trajectories.as_ref().map(|tr| {
                tr.iter()
                    .enumerate()
                    .map(|(i, row)| (name(i), row.clone()))
                    .collect()
            }),
        }
    }
}

/// One CSV row: an instance evaluated in one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub instance: String,
    pub approach: Approach,
    pub semantics: Semantics,
    pub set_agg: Option<SetAgg>,
    pub base_agg: Option<String>,
    pub sigma_star: Option<SigmaStar>,
    pub tau_init: String,
    pub seed: u64,
    pub n_assumptions: usize,
    pub n_rules: usize,
    pub avg_body: f64,
    pub flat: bool,
    pub converged: bool,
    pub steps: usize,
    pub wall_ms: u64,
    /// `abstraction`, `semantics`, `error` or empty.
    pub phase_timeout: String,
}

pub const CSV_HEADER: &str = "instance,approach,semantics,set_agg,base_agg,sigma_star,tau_init,seed,\
                              n_assumptions,n_rules,avg_body,flat,converged,steps,wall_ms,phase_timeout";

impl MetricsRow {
    pub fn cell_label(&self) -> String {
        cell_label(
            self.approach,
            self.semantics,
            &opt(self.set_agg),
            self.base_agg.as_deref().unwrap_or(""),
            &opt(self.sigma_star),
            &self.tau_init,
        )
    }
}

/// Framework of a corpus, or the reason it could not be read.
#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub id: String,
    pub source: Result<Abaf, String>,
    /// Seeds uniform base scores together with the cell seed.
    pub seed: u64,
}

/// Reads every `.aba` file of a directory, sorted by name.
pub fn load_dir(dir: &Path) -> io::Result<Vec<CorpusInstance>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "aba"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let text = std::fs::read_to_string(&p)?;
            Ok(CorpusInstance {
                id: p
                    .file_stem()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned(),
                source: parse_abaf(&text).map_err(|e| e.to_string()),
                seed: i as u64,
            })
        })
        .collect()
}

/// Ranges of the generated corpus; each instance draws its own shape.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub size: usize,
    pub seed: u64,
    pub assumptions: Vec<usize>,
    pub rules: (usize, usize),
    pub max_body: (usize, usize),
    /// Extra atoms per assumption.
    pub atoms_ratio: f64,
    /// Share of flat instances.
    pub flat_share: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            size: 100,
            seed: 2024,
            assumptions: vec![10, 20, 30],
            rules: (5, 50),
            max_body: (1, 5),
            atoms_ratio: 1.0,
            flat_share: 1.0 / 3.0,
        }
    }
}

impl SweepSpec {
    pub fn params(&self, index: usize) -> GenParams {
        let seed = derive_seed(self.seed, index as u64);
        let mut rng = rng_for(seed ^ 0x5EED);
        let n_assumptions = self.assumptions[rng.gen_range(0..self.assumptions.len())];
        GenParams {
            n_assumptions,
            n_atoms_extra: ((n_assumptions as f64 * self.atoms_ratio).round() as usize).max(1),
            n_rules: rng.gen_range(self.rules.0..=self.rules.1),
            max_body: rng.gen_range(self.max_body.0..=self.max_body.1),
            flat: rng.gen_bool(self.flat_share),
            seed,
        }
    }

    pub fn instances(&self) -> Vec<CorpusInstance> {
        (0..self.size)
            .map(|i| {
                let p = self.params(i);
                CorpusInstance {
                    id: format!("gen-{i:04}"),
                    source: gen_abaf(&p).map_err(|e| e.to_string()),
                    seed: p.seed,
                }
            })
            .collect()
    }
}

fn row_for(inst: &CorpusInstance, d: Option<&Abaf>, cell: &Cell) -> MetricsRow {
    MetricsRow {
        instance: inst.id.clone(),
        approach: cell.approach,
        semantics: cell.semantics,
        set_agg: cell.set_agg,
        base_agg: cell.base_agg.map(|b| b.to_string()),
        sigma_star: cell.sigma_star,
        tau_init: cell.tau_init.to_string(),
        seed: cell.seed,
        n_assumptions: d.map_or(0, Abaf::assumption_count),
        n_rules: d.map_or(0, |d| d.rules().len()),
        avg_body: d.map_or(0.0, Abaf::avg_body_size),
        flat: d.is_some_and(|d| check_flat(d).flat),
        converged: false,
        steps: 0,
        wall_ms: 0,
        phase_timeout: String::new(),
    }
}

fn eval_corpus_instance(
    inst: &CorpusInstance,
    cells: &[Cell],
    settings: &RunSettings,
) -> Vec<MetricsRow> {
    let d = match &inst.source {
        Ok(d) => d,
        Err(_) => {
            return cells
                .iter()
                .map(|c| MetricsRow {
                    phase_timeout: "error".into(),
                    ..row_for(inst, None, c)
                })
                .collect()
        }
    };
    let pairs = saturate(d, settings.limits);
    cells
        .iter()
        .map(|cell| {
            let mut row = row_for(inst, Some(d), cell);
            let outcome = match &pairs {
                Ok(pairs) => {
                    eval_with_pairs(d, pairs, cell, settings, derive_seed(cell.seed, inst.seed))
                }
                Err(e) => Err(EvalError::Abstraction(e.clone())),
            };
            match outcome {
                Ok(eval) => {
                    row.converged = eval.report.converged;
                    row.steps = eval.report.steps;
                    row.wall_ms = eval.report.wall_time.as_millis() as u64;
                    row.phase_timeout = opt(eval.phase_timeout());
                }
                Err(e) => {
                    row.phase_timeout = e.phase().map_or("error".into(), |p| p.to_string());
                }
            }
            row
        })
        .collect()
}

/// One row per instance and cell, in instance-major order. Instances are
/// evaluated in parallel; the output does not depend on scheduling.
pub fn run_corpus(
    instances: &[CorpusInstance],
    grid: &GridSpec,
    settings: &RunSettings,
) -> Result<Vec<MetricsRow>, HarnessError> {
    let cells = grid.cells()?;
    settings.config(cells[0].kernel(settings))?;
    let rows: Vec<Vec<MetricsRow>> = instances
        .par_iter()
        .map(|inst| eval_corpus_instance(inst, &cells, settings))
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: io::Write>(rows: &[MetricsRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<MetricsRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMetrics {
    pub cell: String,
    pub rows: usize,
    pub converged: usize,
    /// Share of rows that converged.
    pub rate: f64,
    /// Mean steps over converged rows only.
    pub mean_steps: Option<f64>,
}

fn summarise(cell: String, rows: &[&MetricsRow]) -> CellMetrics {
    let converged: Vec<&&MetricsRow> = rows.iter().filter(|r| r.converged).collect();
    let mean_steps = (!converged.is_empty())
        .then(|| converged.iter().map(|r| r.steps as f64).sum::<f64>() / converged.len() as f64);
    CellMetrics {
        cell,
        rows: rows.len(),
        converged: converged.len(),
        rate: if rows.is_empty() {
            0.0
        } else {
            converged.len() as f64 / rows.len() as f64
        },
        mean_steps,
    }
}

/// Convergence rate and mean steps for every grid cell, sorted by label.
pub fn cell_metrics(rows: &[MetricsRow]) -> Vec<CellMetrics> {
    let mut groups: BTreeMap<String, Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.cell_label()).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(cell, rs)| summarise(cell, &rs))
        .collect()
}

/// Metrics over all rows of one approach.
pub fn pooled_metrics(rows: &[MetricsRow], approach: Approach) -> CellMetrics {
    let rs: Vec<&MetricsRow> = rows.iter().filter(|r| r.approach == approach).collect();
    summarise(approach.to_string(), &rs)
}

/// Structural features used to bin the sensitivity output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    Assumptions,
    Rules,
    AvgBody,
}

crate::kernels::names!(Feature {
    "assumptions" => Feature::Assumptions,
    "rules" => Feature::Rules,
    "avg_body" => Feature::AvgBody,
});

impl Feature {
    pub fn bin(self, row: &MetricsRow) -> String {
        match self {
            Feature::Assumptions => row.n_assumptions.to_string(),
            Feature::Rules => {
                let lo = (row.n_rules / 10) * 10;
                format!("{lo}-{}", lo + 9)
            }
            Feature::AvgBody => {
                let lo = row.avg_body.floor();
                format!("{lo:.0}-{:.0}", lo + 1.0)
            }
        }
    }
}

/// Metrics per (cell, feature bin).
pub fn sensitivity_metrics(rows: &[MetricsRow], feature: Feature) -> Vec<(String, CellMetrics)> {
    let mut groups: BTreeMap<(String, String), Vec<&MetricsRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((feature.bin(r), r.cell_label()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((bin, cell), rs)| (bin, summarise(cell, &rs)))
        .collect()
}
