use crate::error::{CliError, CliResult};
use clap::{Args, ValueEnum};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Gl,
    Hahn,
    Gram,
    Jacobi,
    Legendre,
    Laguerre,
    Ideal,
    Butterworth,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Hahn => "hahn",
            Family::Gram => "gram",
            Family::Jacobi => "jacobi",
            Family::Legendre => "legendre",
            Family::Laguerre => "laguerre",
            Family::Ideal => "ideal",
            Family::Butterworth => "butterworth",
        }
    }

    /// Families whose `delta` is the sample spacing.
    pub fn is_discrete(self) -> bool {
        matches!(self, Family::Gl | Family::Hahn | Family::Gram)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Options shared by all modes. Every field can also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Flat `key = value` file; keys are the long flag names
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Order of differentiation
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Kernel scale; for gl, hahn and gram the sample spacing
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Polynomial degree
    #[arg(long = "n", value_name = "N")]
    pub degree: Option<u32>,
    /// Hahn window length
    #[arg(long = "N", value_name = "N")]
    pub window: Option<u32>,
    /// Backward history (hahn, gram, gl) or tail samples (continuous kernels)
    #[arg(long = "M", value_name = "M")]
    pub history: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Butterworth corner frequency
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Frequency grid `lo:hi:points:log|lin`
    #[arg(long)]
    pub grid: Option<String>,
    /// Figure preset fig1..fig7
    #[arg(long)]
    pub preset: Option<String>,
    /// Phase convention of the ideal differentiator: weyl or rl
    #[arg(long)]
    pub convention: Option<String>,
    /// Treat the signal as zero before its first sample
    #[arg(long)]
    pub causal: bool,
    #[arg(short = 'i', long = "input", value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Identifier written into output metadata
    #[arg(long)]
    pub run_id: Option<String>,
    /// Disable the parallel evaluation
    #[arg(long)]
    pub sequential: bool,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> CliResult<T> {
    value.parse().map_err(|_| CliError::Validation(format!("config line {line}: bad value '{value}' for '{key}'")))
}

fn set<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

impl Options {
    /// Fills unset options from the config file, if one is given.
    pub fn resolve(mut self) -> CliResult<Self> {
        if let Some(path) = self.config.clone() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
            self.merge_config(&text, path.parent().unwrap_or(Path::new(".")))?;
        }
        Ok(self)
    }

    /// Merges `key = value` lines; flags already set win. Relative paths
    /// are taken relative to `base`.
    pub fn merge_config(&mut self, text: &str, base: &Path) -> CliResult<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Validation(format!("config line {line_no}: expected key = value")))?;
            let path = || base.join(value);
            match key {
                "family" => set(
                    &mut self.family,
                    Family::from_str(value, true).map_err(|_| {
                        CliError::Validation(format!("config line {line_no}: unknown family '{value}'"))
                    })?,
                ),
                "nu" => set(&mut self.nu, parse_value(key, value, line_no)?),
                "delta" => set(&mut self.delta, parse_value(key, value, line_no)?),
                "n" => set(&mut self.degree, parse_value(key, value, line_no)?),
                "N" => set(&mut self.window, parse_value(key, value, line_no)?),
                "M" => set(&mut self.history, parse_value(key, value, line_no)?),
                "alpha" => set(&mut self.alpha, parse_value(key, value, line_no)?),
                "beta" => set(&mut self.beta, parse_value(key, value, line_no)?),
                "omega0" => set(&mut self.omega0, parse_value(key, value, line_no)?),
                "grid" => set(&mut self.grid, value.to_string()),
                "preset" => set(&mut self.preset, value.to_string()),
                "convention" => set(&mut self.convention, value.to_string()),
                "causal" => self.causal |= parse_value::<bool>(key, value, line_no)?,
                "sequential" => self.sequential |= parse_value::<bool>(key, value, line_no)?,
                "input" => set(&mut self.input, path()),
                "output" => set(&mut self.output, path()),
                "format" => set(
                    &mut self.format,
                    Format::from_str(value, true).map_err(|_| {
                        CliError::Validation(format!("config line {line_no}: unknown format '{value}'"))
                    })?,
                ),
                "run_id" => set(&mut self.run_id, value.to_string()),
                other => {
                    return Err(CliError::Validation(format!("config line {line_no}: unknown key '{other}'")));
                }
            }
        }
        Ok(())
    }

    pub fn require_family(&self) -> CliResult<Family> {
        self.family.ok_or_else(|| CliError::Validation("--family is required".into()))
    }

    pub fn require_nu(&self) -> CliResult<f64> {
        self.nu.ok_or_else(|| CliError::Validation("--nu is required".into()))
    }

    pub fn require_window(&self) -> CliResult<u32> {
        self.window.ok_or_else(|| CliError::Validation("--N is required for hahn and gram".into()))
    }

    pub fn run_id(&self) -> &str {
        self.run_id.as_deref().unwrap_or("fracfilt")
    }

    pub fn execution(&self) -> fracfilt::Execution {
        if self.sequential {
            fracfilt::Execution::Sequential
        } else {
            fracfilt::Execution::Parallel
        }
    }
}
