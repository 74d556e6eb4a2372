//! Game definitions loaded from TOML, with command-line overrides.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use qgame_core::equilibria::Axis;
use qgame_core::oracle::{StrategyGrid, DEFAULT_TOL};
use qgame_core::{GridSpec, PayoffMatrix};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_N_AMP: usize = 51;
pub const DEFAULT_N_PHASE: usize = 24;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    pub payoff: PayoffSection,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub oracle: Option<OracleSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffSection {
    pub a00: f64,
    pub a01: f64,
    pub a10: f64,
    pub a11: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub gamma1_steps: usize,
    pub gamma2_steps: usize,
    #[serde(default)]
    pub range: RangeSpec,
}

/// `"half"` for `[0, pi]^2`, `"full"` for `[0, 2pi)^2`, or explicit closed
/// bounds `[g1_lo, g1_hi, g2_lo, g2_hi]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RangeSpec {
    Named(String),
    Bounds([Angle; 4]),
}

impl Default for RangeSpec {
    fn default() -> Self {
        RangeSpec::Named("half".into())
    }
}

/// An angle written as a number or as a token such as `"pi/2"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Number(f64),
    Text(String),
}

impl Angle {
    fn value(&self) -> Result<f64, CliError> {
        match self {
            Angle::Number(x) => Ok(*x),
            Angle::Text(s) => parse_angle(s),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub n_amp: usize,
    pub n_phase: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

impl GameConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: GameConfig =
            toml::from_str(text).map_err(|e| CliError::Input(format!("malformed config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// A config holding only a payoff matrix.
    pub fn from_payoff(p: PayoffSection) -> Result<Self, CliError> {
        let config = GameConfig { payoff: p, grid: None, oracle: None, output: OutputSection::default() };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.matrix()?;
        if let Some(g) = &self.grid {
            self.grid_spec(g)?;
        }
        if let Some(o) = &self.oracle {
            if o.tol <= 0.0 || !o.tol.is_finite() {
                return Err(CliError::Input(format!("oracle tol must be positive, got {}", o.tol)));
            }
            StrategyGrid::new(o.n_amp, o.n_phase).map_err(CliError::input)?;
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<PayoffMatrix, CliError> {
        let p = self.payoff;
        PayoffMatrix::new(p.a00, p.a01, p.a10, p.a11).map_err(CliError::input)
    }

    fn grid_spec(&self, g: &GridSection) -> Result<GridSpec, CliError> {
        let (n1, n2) = (g.gamma1_steps, g.gamma2_steps);
        let spec = match &g.range {
            RangeSpec::Named(name) => match name.as_str() {
                "half" => GridSpec::half_square(n1, n2),
                "full" => GridSpec::full_torus(n1, n2),
                other => return Err(CliError::Input(format!("unknown grid range {other:?}"))),
            },
            RangeSpec::Bounds(b) => GridSpec {
                gamma1: Axis::closed(b[0].value()?, b[1].value()?, n1),
                gamma2: Axis::closed(b[2].value()?, b[3].value()?, n2),
            },
        };
        spec.validate().map_err(CliError::input)?;
        Ok(spec)
    }

    /// Sweep grid, with `--grid NxM` replacing the step counts.
    pub fn sweep_grid(&self, steps: Option<(usize, usize)>) -> Result<GridSpec, CliError> {
        let mut section = self.grid.clone().unwrap_or(GridSection {
            gamma1_steps: DEFAULT_STEPS,
            gamma2_steps: DEFAULT_STEPS,
            range: RangeSpec::default(),
        });
        if let Some((n1, n2)) = steps {
            section.gamma1_steps = n1;
            section.gamma2_steps = n2;
        }
        self.grid_spec(&section)
    }

    pub fn oracle(&self) -> (StrategyGrid, f64) {
        let o = self.oracle.unwrap_or(OracleSection { n_amp: DEFAULT_N_AMP, n_phase: DEFAULT_N_PHASE, tol: DEFAULT_TOL });
        (StrategyGrid::new(o.n_amp, o.n_phase).expect("validated on load"), o.tol)
    }
}

/// Parses radians: a float, or a multiple of pi such as `pi`, `-pi/4`,
/// `3pi/4`, `2*pi`.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Input(format!("cannot parse angle {text:?}"));
    let s: String = text.trim().replace('π', "pi").chars().filter(|c| !c.is_whitespace()).collect();
    let Some(at) = s.find("pi") else {
        return s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    };
    let coeff = s[..at].trim_end_matches('*');
    let coeff = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = &s[at + 2..];
    let denom = match rest {
        "" => 1.0,
        r => r.strip_prefix('/').and_then(|d| d.parse::<f64>().ok()).ok_or_else(bad)?,
    };
    let value = coeff * PI / denom;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Parses `NxM` step counts.
pub fn parse_grid(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("grid must look like 101x101, got {text:?}"));
    let (n, m) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
}

/// Parses a comma-separated list of exactly `N` numbers or angles.
pub fn parse_list<const N: usize>(text: &str, what: &str) -> Result<[f64; N], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != N {
        return Err(CliError::Input(format!("{what} needs {N} comma-separated values, got {text:?}")));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = parse_angle(part)?;
    }
    Ok(out)
}
