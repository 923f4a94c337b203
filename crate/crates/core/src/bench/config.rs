//! Flat planner settings for config files and environment overrides.
//!
//! A config file uses the scenario syntax with a single `[planner]` table:
//!
//! ```toml
//! [planner]
//! time_limit = 120.0
//! sequencer = "random"
//! refine = false
//! ```
//!
//! Variables named `REARRANGE_<KEY>` override file values; command-line
//! flags override both.

use serde::Deserialize;

use crate::error::BenchError;
use crate::planner::PlannerConfig;
use crate::sequencer::SequenceMode;

pub const ENV_PREFIX: &str = "REARRANGE_";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConfig {
    pub seed: Option<u64>,
    pub time_limit: Option<f64>,
    pub skip_max_divisor: Option<usize>,
    pub iter_max_offset: Option<usize>,
    pub sgfs_rounds: Option<usize>,
    pub sequencer: Option<SequenceMode>,
    pub lazy_rounds: Option<usize>,
    pub refine: Option<bool>,
    pub epsilon_factor: Option<f64>,
    pub kappa: Option<f64>,
    pub rrt_max_iters: Option<usize>,
    pub goal_bias: Option<f64>,
    pub c0: Option<f64>,
    pub k_max: Option<usize>,
    pub beam: Option<usize>,
    pub sgfs_iter_limit: Option<usize>,
    pub clearance_min: Option<f64>,
    pub stall_limit: Option<usize>,
    pub alt_crit_limit: Option<usize>,
    pub literal_exploration: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    #[serde(default)]
    planner: toml::Table,
}

impl FlatConfig {
    /// Merges the `[planner]` table of `file` (if any) with `REARRANGE_*`
    /// entries of `env`, the latter winning.
    pub fn from_sources(
        file: Option<&str>,
        env: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, BenchError> {
        let mut table = match file {
            Some(text) => {
                toml::from_str::<ConfigDoc>(text)
                    .map_err(|e| BenchError::Suite(e.to_string()))?
                    .planner
            }
            None => toml::Table::new(),
        };
        for (k, v) in env {
            let Some(key) = k.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let key = key.to_ascii_lowercase();
            if key == "log" {
                continue;
            }
            // bare words are strings, everything else is read as a TOML value
            let value = toml::from_str::<toml::Table>(&format!("v = {v}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or(toml::Value::String(v));
            table.insert(key, value);
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| BenchError::Suite(e.to_string()))
    }

    pub fn apply(&self, c: &mut PlannerConfig) {
        macro_rules! set {
            ($($src:ident => $($dst:ident).+;)*) => {
                $(if let Some(v) = self.$src { c.$($dst).+ = v; })*
            };
        }
        set! {
            seed => seed;
            time_limit => time_limit;
            skip_max_divisor => skip_max_divisor;
            iter_max_offset => iter_max_offset;
            sgfs_rounds => sgfs_rounds;
            sequencer => sequencer.mode;
            lazy_rounds => sequencer.lazy_rounds;
            refine => motion.refine;
            epsilon_factor => motion.epsilon_factor;
            kappa => motion.kappa;
            rrt_max_iters => motion.max_iters;
            goal_bias => motion.goal_bias;
            c0 => sgfs.c0;
            k_max => sgfs.k_max;
            beam => sgfs.beam;
            sgfs_iter_limit => sgfs.iter_limit;
            clearance_min => sgfs.clearance_min;
            stall_limit => sgfs.stall_limit;
            alt_crit_limit => sgfs.alt_crit_limit;
            literal_exploration => sgfs.literal_exploration;
        }
    }
}
