//! `qgame`: equilibrium reports, payoff-surface sweeps, oracle checks,
//! moderation and entropy for correlated two-qubit games.
//!
//! Exit codes: 0 success, 1 oracle disagreement, 2 malformed input,
//! 3 output could not be written.

mod config;
mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgame_core::analysis::LogBase;
use qgame_core::equilibria::surface_point;
use qgame_core::{CorrelationParams, GameError, Selection, StrategyVector, SurfaceRow};
use rayon::prelude::*;

use config::{parse_angle, parse_grid, parse_list, Format, GameConfig, PayoffSection};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("write failed: {0}")]
    Write(String),
    #[error("oracle rejected at least one equilibrium")]
    Rejected,
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn input(e: GameError) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError::Internal(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Rejected => 1,
            CliError::Input(_) => 2,
            CliError::Write(_) | CliError::Internal(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qgame", version, about = "Nash equilibria of correlated two-qubit games")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML game definition.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Payoff entries `a00,a01,a10,a11`, replacing the config's [payoff].
    #[arg(long, global = true, allow_hyphen_values = true)]
    payoff: Option<String>,
    /// Correlation angle gamma1 in radians (`pi/2` style tokens accepted).
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    gamma1: String,
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    gamma2: String,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_enum, default_value = "e")]
    log_base: BaseArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseArg {
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SelectionArg {
    Max,
    Symmetric,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form equilibria at one gamma (JSON).
    Equilibria {
        /// Also list this many samples of the asymmetric interior family.
        #[arg(long)]
        family: Option<usize>,
    },
    /// Equilibrium payoff surface over a gamma grid (CSV or JSON).
    Sweep {
        /// Grid steps `NxM`, replacing the config's step counts.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value = "max")]
        selection: SelectionArg,
    },
    /// Checks every record at gamma against the grid oracle; exit 1 on failure.
    Verify {
        #[arg(long)]
        family: Option<usize>,
        /// Extra candidate `a0,phase,b0,chi` checked alongside the records.
        #[arg(long, hide = true, allow_hyphen_values = true)]
        inject: Vec<String>,
    },
    /// Average payoff operator over uniformly random gamma (JSON).
    Moderate {
        #[arg(long, default_value_t = 64)]
        n_quad: usize,
    },
    /// Entanglement entropy of a binary split, a strategy pair, or the records at gamma.
    Entropy {
        /// Binary entropy of the weight `lambda` in [0, 1].
        #[arg(long)]
        lambda: Option<f64>,
        /// Player A's strategy `a0,phase`; needs --beta.
        #[arg(long, requires = "beta", allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, requires = "alpha", allow_hyphen_values = true)]
        beta: Option<String>,
    },
}

impl Common {
    fn game(&self) -> Result<GameConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => Some(GameConfig::load(path)?),
            None => None,
        };
        if let Some(text) = &self.payoff {
            let [a00, a01, a10, a11] = parse_list::<4>(text, "--payoff")?;
            let p = PayoffSection { a00, a01, a10, a11 };
            config = Some(match config {
                Some(mut c) => {
                    c.payoff = p;
                    c.matrix()?;
                    c
                }
                None => GameConfig::from_payoff(p)?,
            });
        }
        config.ok_or_else(|| CliError::Input("a game needs --config or --payoff".into()))
    }

    fn gamma(&self) -> Result<CorrelationParams, CliError> {
        CorrelationParams::new(parse_angle(&self.gamma1)?, parse_angle(&self.gamma2)?).map_err(CliError::input)
    }

    fn base(&self) -> LogBase {
        match self.log_base {
            BaseArg::E => LogBase::Natural,
            BaseArg::Two => LogBase::Two,
        }
    }

    /// `--out` wins over the config's output path.
    fn out_path(&self, config: Option<&GameConfig>) -> Option<PathBuf> {
        self.out.clone().or_else(|| config.and_then(|c| c.output.path.clone()))
    }
}

fn strategy(text: &str, what: &str) -> Result<StrategyVector, CliError> {
    let [a0, phase] = parse_list::<2>(text, what)?;
    StrategyVector::new(a0, phase).map_err(CliError::input)
}

fn sweep_rows(
    config: &GameConfig,
    grid: Option<(usize, usize)>,
    selection: Selection,
) -> Result<Vec<SurfaceRow>, CliError> {
    let spec = config.sweep_grid(grid)?;
    let a = config.matrix()?;
    let points = spec.points();
    let compute = || -> Result<Vec<SurfaceRow>, GameError> {
        let chunks: Vec<Vec<SurfaceRow>> = points
            .par_iter()
            .map(|&(g1, g2)| surface_point(&a, g1, g2, selection))
            .collect::<Result<_, _>>()?;
        Ok(chunks.into_iter().flatten().collect())
    };
    let threads = match std::env::var("QGAME_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Input(format!("QGAME_THREADS must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    let rows = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(CliError::internal)?
            .install(compute),
        None => compute(),
    };
    rows.map_err(CliError::input)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Equilibria { family } => {
            let config = common.game()?;
            let (_, doc) = report::equilibria(&config.matrix()?, &common.gamma()?, common.base(), *family);
            output::emit(&output::json_bytes(&doc)?, common.out_path(Some(&config)).as_deref())
        }
        Command::Sweep { grid, selection } => {
            let config = common.game()?;
            let steps = grid.as_deref().map(parse_grid).transpose()?;
            let selection = match selection {
                SelectionArg::Max => Selection::MaxForA,
                SelectionArg::Symmetric => Selection::SymmetricMaxForA,
                SelectionArg::All => Selection::AllRecords,
            };
            let rows = sweep_rows(&config, steps, selection)?;
            let format = common.format.or(config.output.format).unwrap_or_default();
            let bytes = match format {
                Format::Csv => output::surface_csv(&rows)?,
                Format::Json => output::json_bytes(&rows.iter().map(report::RowDoc::from).collect::<Vec<_>>())?,
            };
            output::emit(&bytes, common.out_path(Some(&config)).as_deref())
        }
        Command::Verify { family, inject } => {
            let config = common.game()?;
            let (grid, tol) = config.oracle();
            let injected = inject
                .iter()
                .map(|text| {
                    let [a0, phase, b0, chi] = parse_list::<4>(text, "--inject")?;
                    let alpha = StrategyVector::new(a0, phase).map_err(CliError::input)?;
                    let beta = StrategyVector::new(b0, chi).map_err(CliError::input)?;
                    Ok((alpha, beta))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let doc = report::verify(&config.matrix()?, &common.gamma()?, &grid, tol, *family, &injected)?;
            output::emit(&output::json_bytes(&doc)?, common.out_path(Some(&config)).as_deref())?;
            if doc.all_pass {
                Ok(())
            } else {
                Err(CliError::Rejected)
            }
        }
        Command::Moderate { n_quad } => {
            let config = common.game()?;
            let doc = report::moderate(&config.matrix()?, *n_quad)?;
            output::emit(&output::json_bytes(&doc)?, common.out_path(Some(&config)).as_deref())
        }
        Command::Entropy { lambda, alpha, beta } => {
            let base = common.base();
            let (doc, config) = match (lambda, alpha, beta) {
                (Some(l), None, None) => (report::entropy_lambda(*l, base)?, None),
                (None, Some(a), Some(b)) => {
                    let doc = report::entropy_state(
                        &common.gamma()?,
                        &strategy(a, "--alpha")?,
                        &strategy(b, "--beta")?,
                        base,
                    );
                    (doc, None)
                }
                (None, None, None) => {
                    let config = common.game()?;
                    (report::entropy_records(&config.matrix()?, &common.gamma()?, base), Some(config))
                }
                _ => return Err(CliError::Input("use either --lambda or --alpha/--beta".into())),
            };
            let config = match (config, &common.config) {
                (Some(c), _) => Some(c),
                (None, Some(path)) => Some(GameConfig::load(path)?),
                (None, None) => None,
            };
            output::emit(&output::json_bytes(&doc)?, common.out_path(config.as_ref()).as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgame: {e}");
            ExitCode::from(e.code())
        }
    }
}
