use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use abagrad::aba::{parse_abaf, serialize_abaf};
use abagrad::engine::SigmaStar;
use abagrad::generator::{gen_abaf, GenParams};
use abagrad::harness::properties::check_properties;
use abagrad::harness::{
    cell_metrics, eval_instance, load_dir, pooled_metrics, run_corpus, sensitivity_metrics,
    write_csv, Approach, BafWindow, Cell, Feature, GridSpec, JsonReport, RunSettings, SweepSpec,
    TauInit,
};
use abagrad::instantiation::{build_baf, build_bsaf, BaseScoreFn, BsafOptions, SaturationLimits};
use abagrad::kernels::{QeVariant, Semantics, SetAgg};

#[derive(Parser)]
#[command(
    name = "abagrad",
    version,
    about = "Gradual semantics for weighted ABA frameworks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one framework under one configuration.
    Eval(EvalArgs),
    /// Generate a random framework.
    Gen(GenArgs),
    /// Sweep a corpus over a grid of configurations and write CSV rows.
    Corpus(CorpusArgs),
    /// Run the randomised property checks.
    CheckProperties(PropertyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Influence parameter.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = QeVariant::Standard)]
    qe_variant: QeVariant,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Number of trailing updates that must stay within epsilon.
    #[arg(long, default_value_t = 5)]
    delta: usize,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Wall-clock budget per run, in seconds.
    #[arg(long, default_value_t = 600.0)]
    wall_budget: f64,
    /// Cap on derived (support, claim) pairs during abstraction.
    #[arg(long, default_value_t = 1_000_000)]
    max_pairs: usize,
    /// Wall-clock budget for abstraction, in seconds.
    #[arg(long, default_value_t = 600.0)]
    abstraction_budget: f64,
    /// Keep only subset-minimal attacking and supporting sets.
    #[arg(long)]
    minimal: bool,
    /// Strengths watched by the convergence window of BAF runs.
    #[arg(long, default_value_t = BafWindow::Arguments)]
    baf_window: BafWindow,
}

impl RunArgs {
    fn settings(&self, record_trajectories: bool) -> Result<RunSettings, String> {
        let secs = |v: f64, what: &str| {
            Duration::try_from_secs_f64(v).map_err(|_| format!("invalid {what}: {v}"))
        };
        Ok(RunSettings {
            k: self.k,
            qe_variant: self.qe_variant,
            epsilon: self.epsilon,
            delta: self.delta,
            max_iters: self.max_iters,
            wall_budget: secs(self.wall_budget, "wall budget")?,
            limits: SaturationLimits {
                max_pairs: self.max_pairs,
                wall_time: secs(self.abstraction_budget, "abstraction budget")?,
            },
            bsaf_options: BsafOptions {
                minimal_only: self.minimal,
            },
            baf_window: self.baf_window,
            record_trajectories,
        })
    }
}

#[derive(Args)]
struct EvalArgs {
    file: PathBuf,
    #[arg(long, default_value_t = Approach::Bsaf)]
    approach: Approach,
    #[arg(long, default_value_t = Semantics::Dfq)]
    semantics: Semantics,
    #[arg(long, default_value_t = SetAgg::Prod)]
    set_agg: SetAgg,
    #[arg(long, default_value_t = BaseScoreFn::Prod)]
    base_agg: BaseScoreFn,
    #[arg(long, default_value_t = SigmaStar::Asm)]
    sigma_star: SigmaStar,
    /// file, const:<v> or uniform.
    #[arg(long, default_value_t = TauInit::File)]
    tau_init: TauInit,
    /// Seed for uniform base scores.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    run: RunArgs,
    /// Record per-assumption trajectories in the JSON report.
    #[arg(long)]
    trajectories: bool,
    /// Print a JSON report instead of a table.
    #[arg(long)]
    json: bool,
    /// Print the instantiated framework before evaluating.
    #[arg(long)]
    dump: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    assumptions: usize,
    /// Number of non-assumption atoms.
    #[arg(long)]
    atoms: usize,
    #[arg(long)]
    rules: usize,
    #[arg(long)]
    max_body: usize,
    #[arg(long)]
    flat: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CorpusArgs {
    /// Directory of `.aba` files; without it a corpus is generated.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Size of the generated corpus.
    #[arg(long, default_value_t = 100)]
    generate: usize,
    #[arg(long, default_value_t = 2024)]
    corpus_seed: u64,
    /// Non-assumption atoms per assumption in a generated corpus.
    #[arg(long, default_value_t = 1.0)]
    atoms_ratio: f64,
    /// Share of flat frameworks in a generated corpus.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    flat_share: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [Approach::Bsaf, Approach::Baf])]
    approaches: Vec<Approach>,
    #[arg(long, value_delimiter = ',', default_values_t = [Semantics::Dfq, Semantics::Qe])]
    semantics: Vec<Semantics>,
    #[arg(long, value_delimiter = ',', default_values_t = [SetAgg::Min, SetAgg::Prod])]
    set_aggs: Vec<SetAgg>,
    #[arg(long, value_delimiter = ',', default_values_t = [BaseScoreFn::Min, BaseScoreFn::Prod])]
    base_aggs: Vec<BaseScoreFn>,
    #[arg(long, value_delimiter = ',', default_values_t = [SigmaStar::Asm, SigmaStar::Avg])]
    sigma_star: Vec<SigmaStar>,
    #[arg(long, value_delimiter = ',', default_values_t = [TauInit::Const(0.5), TauInit::Uniform])]
    tau_init: Vec<TauInit>,
    #[arg(long, value_delimiter = ',', default_values_t = [0])]
    seeds: Vec<u64>,
    #[command(flatten)]
    run: RunArgs,
    /// CSV output; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print per-cell metrics to stderr.
    #[arg(long)]
    summary: bool,
    /// Also print metrics binned by a structural feature.
    #[arg(long)]
    bins: Option<Feature>,
}

#[derive(Args)]
struct PropertyArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Gen(a) => gen(a),
        Command::Corpus(a) => corpus(a),
        Command::CheckProperties(a) => properties(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn eval(a: EvalArgs) -> Result<ExitCode, String> {
    let text = fs::read_to_string(&a.file).map_err(|e| format!("{}: {e}", a.file.display()))?;
    let d = parse_abaf(&text).map_err(|e| format!("{}: {e}", a.file.display()))?;
    let settings = a.run.settings(a.trajectories)?;
    let cell = match a.approach {
        Approach::Bsaf => Cell::bsaf(a.semantics, a.set_agg, a.tau_init, a.seed),
        Approach::Baf => Cell::baf(a.semantics, a.base_agg, a.sigma_star, a.tau_init, a.seed),
    };
    if a.dump {
        let tau = a.tau_init.scores(&d, a.seed);
        let dumped = match a.approach {
            Approach::Bsaf => {
                let d = d.with_tau(tau).map_err(|e| e.to_string())?;
                build_bsaf(&d, settings.limits, settings.bsaf_options).map(|f| f.dump())
            }
            Approach::Baf => build_baf(&d, a.base_agg, &tau, settings.limits).map(|f| f.dump(&d)),
        };
        eprint!("{}", dumped.map_err(|e| e.to_string())?);
    }
    let evaluation = eval_instance(&d, &cell, &settings, a.seed).map_err(|e| e.to_string())?;
    let instance = a
        .file
        .file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .into_owned();
    let report = JsonReport::new(&instance, &d, a.approach, &evaluation);
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(|e| e.to_string())?;
        writeln!(out).map_err(|e| e.to_string())?;
    } else {
        for (name, v) in &report.strengths {
            writeln!(out, "{name}\t{v}").map_err(|e| e.to_string())?;
        }
        let status = if report.converged {
            "converged".to_string()
        } else if evaluation.report.timed_out {
            "timed out".to_string()
        } else {
            "not converged".to_string()
        };
        writeln!(
            out,
            "# {status} after {} steps, {} ms",
            report.steps, report.wall_ms
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(a: GenArgs) -> Result<ExitCode, String> {
    let p = GenParams {
        n_assumptions: a.assumptions,
        n_atoms_extra: a.atoms,
        n_rules: a.rules,
        max_body: a.max_body,
        flat: a.flat,
        seed: a.seed,
    };
    let text = serialize_abaf(&gen_abaf(&p).map_err(|e| e.to_string())?);
    match a.output {
        Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn corpus(a: CorpusArgs) -> Result<ExitCode, String> {
    if !(0.0..=1.0).contains(&a.flat_share) {
        return Err(format!(
            "flat share must lie in [0, 1], got {}",
            a.flat_share
        ));
    }
    if !(a.atoms_ratio >= 0.0) {
        return Err(format!(
            "atoms ratio must be non-negative, got {}",
            a.atoms_ratio
        ));
    }
    let settings = a.run.settings(false)?;
    let grid = GridSpec {
        approaches: a.approaches,
        semantics: a.semantics,
        set_aggs: a.set_aggs,
        base_aggs: a.base_aggs,
        sigma_star: a.sigma_star,
        tau_init: a.tau_init,
        seeds: a.seeds,
    };
    let instances = match &a.dir {
        Some(dir) => load_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?,
        None => SweepSpec {
            size: a.generate,
            seed: a.corpus_seed,
            atoms_ratio: a.atoms_ratio,
            flat_share: a.flat_share,
            ..SweepSpec::default()
        }
        .instances(),
    };
    let rows = run_corpus(&instances, &grid, &settings).map_err(|e| e.to_string())?;
    match &a.output {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            write_csv(&rows, io::BufWriter::new(file)).map_err(|e| e.to_string())?;
        }
        None => write_csv(&rows, io::stdout().lock()).map_err(|e| e.to_string())?,
    }
    if a.summary {
        for m in cell_metrics(&rows) {
            eprintln!(
                "{:<32} rate {:.3} ({}/{})  mean steps {}",
                m.cell,
                m.rate,
                m.converged,
                m.rows,
                m.mean_steps.map_or("-".into(), |s| format!("{s:.1}"))
            );
        }
        for approach in [Approach::Bsaf, Approach::Baf] {
            let m = pooled_metrics(&rows, approach);
            if m.rows > 0 {
                eprintln!(
                    "{:<32} rate {:.3} ({}/{})  mean steps {}",
                    format!("pooled {approach}"),
                    m.rate,
                    m.converged,
                    m.rows,
                    m.mean_steps.map_or("-".into(), |s| format!("{s:.1}"))
                );
            }
        }
    }
    if let Some(feature) = a.bins {
        for (bin, m) in sensitivity_metrics(&rows, feature) {
            eprintln!(
                "{bin:<8} {:<32} rate {:.3} ({}/{})",
                m.cell, m.rate, m.converged, m.rows
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn properties(a: PropertyArgs) -> Result<ExitCode, String> {
    let outcomes = check_properties(a.trials, a.seed).map_err(|e| e.to_string())?;
    let mut failed = false;
    for o in &outcomes {
        println!("{o}");
        failed |= !o.ok();
    }
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}
