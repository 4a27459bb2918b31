//! Command-line grammar. The parsed arguments double as the echoed run
//! configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    #[default]
    Double,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    #[default]
    Full,
    Half,
}

/// Evenly spaced grid written `lo:hi:step`, both ends included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|k| self.lo + self.step * k as f64).collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Grid, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("grid '{s}' is not lo:hi:step"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("grid '{s}': {e}"));
        let grid = Grid {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(grid.step > 0.0) || !(grid.hi >= grid.lo) || !grid.lo.is_finite() || !grid.hi.is_finite() {
            return Err(format!("grid '{s}' needs lo <= hi and a positive step"));
        }
        Ok(grid)
    }
}

#[derive(Debug, Parser)]
#[command(name = "sawlab", version, about = "Exact enumeration and numerics for self-avoiding walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Common {
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t)]
    pub precision: PrecisionMode,
    /// Print pass/fail lines against the reference values and fail on any miss.
    #[arg(long, global = true)]
    pub check: bool,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; defaults to SAWLAB_THREADS, then to the core count.
    #[arg(long, global = true, env = "SAWLAB_THREADS")]
    pub threads: Option<usize>,
    /// Refuse enumerations whose estimated node count exceeds this.
    #[arg(long, global = true, default_value_t = 5e10)]
    pub max_nodes: f64,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Walk counts c_n from the origin.
    Count {
        #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
        n_max: i64,
        #[arg(long, value_enum, default_value_t)]
        region: Region,
    },
    /// Polygon counts by perimeter and area.
    Polygons {
        #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
        m_max: i64,
    },
    /// Half-plane walks by length and surface contacts.
    Halfplane {
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        n_max: i64,
    },
    /// Corner-to-corner crossings of squares of side 1..=L.
    Crossing {
        #[arg(long = "l", default_value_t = 4, allow_negative_numbers = true)]
        side: i64,
    },
    /// Tethered interacting walks by contacts and end displacement.
    Interacting {
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        n_max: i64,
    },
    /// Growth constant estimate from walk counts.
    Mu {
        #[arg(long, default_value_t = 16, allow_negative_numbers = true)]
        n_max: i64,
    },
    /// Crossing growth constant estimate.
    Lambda {
        #[arg(long = "l", default_value_t = 5, allow_negative_numbers = true)]
        side: i64,
    },
    /// Finite-perimeter polygon free energy over an area fugacity grid.
    Kappa {
        #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
        m_max: i64,
        #[arg(long, default_value = "0.1:1:0.1")]
        q_grid: Grid,
    },
    /// Local identity residuals of the honeycomb observable.
    HoneycombLocal {
        #[arg(long = "l", default_value_t = 2)]
        width: usize,
        #[arg(long = "t", default_value_t = 2)]
        height: usize,
        /// Step weight; the critical value when omitted.
        #[arg(long)]
        x: Option<f64>,
        /// Winding exponent; the critical value when omitted.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
    },
    /// Boundary identity of the honeycomb observable.
    HoneycombDomain {
        #[arg(long = "l", default_value_t = 2)]
        width: usize,
        #[arg(long = "t", default_value_t = 2)]
        height: usize,
        #[arg(long)]
        x: Option<f64>,
    },
    /// Boundary identity with an adsorbing wall.
    HoneycombAdsorb {
        #[arg(long = "l", default_value_t = 2)]
        width: usize,
        #[arg(long = "t", default_value_t = 2)]
        height: usize,
        /// Wall weight; the critical value when omitted.
        #[arg(long)]
        y: Option<f64>,
    },
    /// End-to-side hitting ratio of an r:1 rectangle.
    Hit {
        #[arg(long, default_value_t = 10.0)]
        r: f64,
        #[arg(long, default_value_t = 0.625)]
        b: f64,
    },
    /// Large-aspect expansions of the hitting ratio.
    HitAsymptotic {
        #[arg(long, default_value_t = 10.0)]
        r: f64,
        #[arg(long, default_value_t = 0.625)]
        b: f64,
    },
    /// Closed-form Brownian end-hit probability of the 10:1 rectangle.
    Trefethen,
    /// Contact fluctuation of a pulled interacting walk over temperature.
    PullScan {
        #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
        n_max: i64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        force: f64,
        #[arg(long, default_value = "0.2:3:0.05")]
        temp_grid: Grid,
        /// Smooth with a 3-point average before locating peaks.
        #[arg(long)]
        smooth: bool,
    },
    /// Growth of half-plane walks weighted by surface contacts.
    Adsorb {
        #[arg(long, default_value_t = 14, allow_negative_numbers = true)]
        n_max: i64,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
        y: Vec<f64>,
    },
    /// Size exponent from pivot Monte Carlo.
    PivotNu {
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
        n_values: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Polygons { .. } => "polygons",
            Command::Halfplane { .. } => "halfplane",
            Command::Crossing { .. } => "crossing",
            Command::Interacting { .. } => "interacting",
            Command::Mu { .. } => "mu",
            Command::Lambda { .. } => "lambda",
            Command::Kappa { .. } => "kappa",
            Command::HoneycombLocal { .. } => "honeycomb-local",
            Command::HoneycombDomain { .. } => "honeycomb-domain",
            Command::HoneycombAdsorb { .. } => "honeycomb-adsorb",
            Command::Hit { .. } => "hit",
            Command::HitAsymptotic { .. } => "hit-asymptotic",
            Command::Trefethen => "trefethen",
            Command::PullScan { .. } => "pull-scan",
            Command::Adsorb { .. } => "adsorb",
            Command::PivotNu { .. } => "pivot-nu",
        }
    }
}

/// Everything a run depends on, echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub common: Common,
    /// Resolved worker count.
    pub workers: usize,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let workers = match cli.common.threads {
            Some(0) => return Err(CliError::Validation("--threads must be positive".into())),
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if !(cli.common.max_nodes > 0.0) {
            return Err(CliError::Validation("--max-nodes must be positive".into()));
        }
        Ok(RunConfig {
            command: cli.command,
            common: cli.common,
            workers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.2:3:0.05".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 57);
        assert!((pts[56] - 3.0).abs() < 1e-12);
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("a:1:0.1".parse::<Grid>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
