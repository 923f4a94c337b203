use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use rearrange::bench::{builtin, gen_m_block, render_svg, run_suite, write_csv, FlatConfig, TaskSuite};
use rearrange::planner::{mo_segman, replay, to_text, PlannerConfig, Status};
use rearrange::sequencer::SequenceMode;
use rearrange::world::scenario::{load_scenario, scenario_to_string};
use rearrange::world::Scene;

#[derive(Parser)]
#[command(
    name = "rearrange",
    version,
    about = "Plan object rearrangement for a planar pick-and-place robot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one scenario and print the plan report.
    Plan {
        /// Scenario file or built-in name.
        scenario: String,
        #[command(flatten)]
        planner: PlannerArgs,
        #[arg(long)]
        svg_out: Option<PathBuf>,
        /// Print the planning log to stderr.
        #[arg(long)]
        trace: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a suite (`desk` or a suite file) and emit CSV records.
    Bench {
        suite: String,
        #[command(flatten)]
        planner: PlannerArgs,
        #[arg(long)]
        csv_out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Generate scenarios.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Draw a scenario as SVG, optionally with its plan.
    Render {
        scenario: String,
        /// Plan first and overlay the trajectories.
        #[arg(long)]
        plan: bool,
        #[command(flatten)]
        planner: PlannerArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Random goal objects west of a two-door divider.
    MBlock {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PlannerArgs {
    /// Config file with a `[planner]` table.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seconds per run.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, value_parser = parse_mode)]
    sequencer: Option<SequenceMode>,
    /// Disable subgoal merging.
    #[arg(long)]
    no_refine: bool,
}

fn parse_mode(s: &str) -> Result<SequenceMode, String> {
    match s {
        "full" => Ok(SequenceMode::Full),
        "euclidean" => Ok(SequenceMode::Euclidean),
        "greedy" => Ok(SequenceMode::Greedy),
        "random" => Ok(SequenceMode::Random),
        _ => Err(format!("unknown sequencer `{s}` (full, euclidean, greedy, random)")),
    }
}

impl PlannerArgs {
    fn resolve(&self) -> Result<PlannerConfig> {
        let file = match &self.config {
            Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
            None => None,
        };
        let flat = FlatConfig::from_sources(file.as_deref(), std::env::vars())?;
        let mut cfg = PlannerConfig::default();
        flat.apply(&mut cfg);
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.time_limit {
            cfg.time_limit = t;
        }
        if let Some(m) = self.sequencer {
            cfg.sequencer.mode = m;
        }
        if self.no_refine {
            cfg.motion.refine = false;
        }
        Ok(cfg)
    }
}

fn load(scenario: &str) -> Result<Scene> {
    let path = Path::new(scenario);
    if path.exists() {
        return load_scenario(path).with_context(|| format!("loading {scenario}"));
    }
    builtin(scenario).with_context(|| format!("`{scenario}` is neither a file nor a built-in scenario"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the command; `Ok(false)` means it ran but some plan failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Plan {
            scenario,
            planner,
            svg_out,
            trace,
            out,
        } => {
            let scene = load(&scenario)?;
            let mut cfg = planner.resolve()?;
            cfg.sgfs.trace = trace;
            let result = mo_segman(&scene, &cfg)?;
            if trace {
                for e in &result.events {
                    eprintln!("{e}");
                }
            }
            if let Err(e) = replay(&scene, &result.steps) {
                eprintln!("replay check failed: {e}");
                return Ok(false);
            }
            emit(out.as_deref(), &to_text(&result))?;
            if let Some(p) = svg_out {
                let plans: Vec<_> = result.plans().cloned().collect();
                std::fs::write(&p, render_svg(&scene, Some(&plans)))?;
            }
            eprintln!("wall time {:.2} s", result.metrics.wall_time);
            Ok(result.status == Status::Success)
        }
        Command::Bench {
            suite,
            planner,
            csv_out,
            workers,
        } => {
            let suite = TaskSuite::load(&suite)?;
            let cfg = planner.resolve()?;
            let records = run_suite(&suite, &cfg, workers);
            match csv_out {
                Some(p) => write_csv(&records, std::fs::File::create(&p)?)?,
                None => write_csv(&records, std::io::stdout().lock())?,
            }
            let ok = records.iter().filter(|r| r.is_success()).count();
            eprintln!("{ok}/{} runs succeeded", records.len());
            Ok(ok == records.len())
        }
        Command::Gen {
            kind: GenKind::MBlock { m, seed, out },
        } => {
            let scene = gen_m_block(m, seed)?;
            emit(out.as_deref(), &scenario_to_string(&scene))?;
            Ok(true)
        }
        Command::Render {
            scenario,
            plan,
            planner,
            out,
        } => {
            let scene = load(&scenario)?;
            let mut ok = true;
            let svg = if plan {
                let result = mo_segman(&scene, &planner.resolve()?)?;
                ok = result.status == Status::Success;
                let plans: Vec<_> = result.plans().cloned().collect();
                render_svg(&scene, Some(&plans))
            } else {
                render_svg(&scene, None)
            };
            emit(out.as_deref(), &svg)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("REARRANGE_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            // most messages already embed their source, so skip repeats
            let mut msg = String::new();
            for cause in e.chain().map(|c| c.to_string()) {
                if !msg.ends_with(&cause) {
                    if !msg.is_empty() {
                        msg.push_str(": ");
                    }
                    msg.push_str(&cause);
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
