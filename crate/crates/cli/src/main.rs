use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use invsim::engine::EngineKind;
use invsim::harness::{self, RunOptions};
use invsim::policy::{self, PolicyKind};
use invsim::tasks::{self, build_task, find_task, Split, TaskSpec};

/// Multi-echelon inventory simulation: run baselines, fit policies, render
/// reports and measure throughput.
#[derive(Parser)]
#[command(name = "invsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one policy on one split and write its report.
    Run {
        #[command(flatten)]
        task: TaskArg,
        /// bs-static, bs-dynamic, ss-static, ss-hindsight, never or external:<file>.
        #[arg(long)]
        policy: PolicyKind,
        #[arg(long, default_value = "test")]
        split: Split,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report directory.
        #[arg(long)]
        out: PathBuf,
        /// Parameters written by `solve`, instead of fitting them.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value = "matrix")]
        engine: EngineKind,
    },
    /// List the built-in tasks.
    ListTasks,
    /// Fit a policy's parameters and write them as CSV.
    Solve {
        #[command(flatten)]
        task: TaskArg,
        #[arg(long)]
        policy: PolicyKind,
        #[arg(long, default_value = "test")]
        split: Split,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure engine steps per second under a fixed order-up-to rule.
    Bench {
        #[command(flatten)]
        task: TaskArg,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        /// Steps per repetition; defaults to the test split's length.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value = "matrix")]
        engine: EngineKind,
    },
    /// Re-render the HTML pages of a run directory from its CSV ledgers.
    Report {
        #[arg(long)]
        run: PathBuf,
    },
    /// Write every built-in task as a TOML file.
    ExportTasks {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct TaskArg {
    /// Built-in task name.
    #[arg(long, required_unless_present = "task_file", conflicts_with = "task_file")]
    task: Option<String>,
    /// Task spec TOML file.
    #[arg(long)]
    task_file: Option<PathBuf>,
}

impl TaskArg {
    fn spec(&self) -> Result<TaskSpec> {
        match (&self.task, &self.task_file) {
            (Some(name), _) => Ok(find_task(name)?),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(TaskSpec::from_toml(&text)?)
            }
            (None, None) => bail!("either --task or --task-file is required"),
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            task,
            policy,
            split,
            seed,
            out,
            params,
            engine,
        } => {
            let task = build_task(&task.spec()?, seed)?;
            let opts = RunOptions {
                engine,
                params: None,
                params_file: params,
            };
            let result = harness::run(&task, &policy, split, &opts)?;
            harness::emit_report(&result, &out).with_context(|| format!("writing report to {}", out.display()))?;
            println!(
                "task={} policy={} split={} seed={} steps={} agents={} metric={} wall_clock_s={:.3} memory_bytes={}",
                result.task,
                result.policy,
                result.split,
                result.seed,
                result.records.len(),
                result.agents(),
                result.metric,
                result.wall_clock.as_secs_f64(),
                result.memory_bytes
            );
        }
        Command::ListTasks => {
            for name in tasks::task_names() {
                println!("{name}");
            }
        }
        Command::Solve {
            task,
            policy,
            split,
            seed,
            out,
        } => {
            let task = build_task(&task.spec()?, seed)?;
            let params = policy::fit(&policy, &task, split)?;
            let file = fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            policy::write_params(file, &params, task.series.ids())?;
            println!("wrote {} parameter rows to {}", params.cells(), out.display());
        }
        Command::Bench {
            task,
            repetitions,
            steps,
            engine,
        } => {
            if repetitions == 0 {
                bail!("--repetitions must be at least 1");
            }
            let task = build_task(&task.spec()?, 0)?;
            let r = harness::benchmark_throughput(&task, Split::Test, engine, repetitions, steps, || {
                Box::new(harness::cover_rule_for(&task, Split::Test))
            })?;
            println!(
                "task={} engine={engine:?} agents={} steps={} median_steps_per_s={:.1} samples={:?}",
                task.name(),
                r.agents,
                r.steps,
                r.median,
                r.samples.iter().map(|s| format!("{s:.1}")).collect::<Vec<_>>()
            );
        }
        Command::Report { run } => {
            harness::render_html(&run)?;
            let metric = harness::metric_from_ledgers(&run)?;
            println!("rendered {} metric={metric}", run.join("index.html").display());
        }
        Command::ExportTasks { out } => {
            fs::create_dir_all(&out)?;
            let specs = tasks::builtin_tasks();
            for spec in &specs {
                fs::write(out.join(format!("{}.toml", spec.name)), spec.to_toml()?)?;
            }
            println!("wrote {} task files to {}", specs.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
