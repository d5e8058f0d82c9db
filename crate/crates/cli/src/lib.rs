//! The `fracfilt` command line: filter sampled signals, sweep transfer
//! functions and report filter metrics.

pub mod config;
pub mod error;
pub mod signal;

use clap::{Parser, Subcommand};
use config::{Family, Format, Options};
use error::{CliError, CliResult};
use fracfilt::figures::preset;
use fracfilt::fracops::{gl_filter, SampledSignal};
use fracfilt::hahn::{
    default_history, evaluation_offset, filter_signal, gram_n1_weights, hahn_weights, HahnFilterParams,
};
use fracfilt::kernels::{jacobi_sampled, laguerre_sampled, JacobiKernelParams};
use fracfilt::transfer::{filter_metrics, Convention, FrequencyGrid, SweepReport, TransferSpec};
use serde_json::json;
use signal::{read_signal, write_rows, Row};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

const CONFIG_HELP: &str = "\
Config files hold one `key = value` per line; `#` starts a comment. Keys are the
long flag names: family, nu, delta, n, N, M, alpha, beta, omega0, grid, preset,
convention, causal, sequential, input, output, format, run_id. Flags override
config values; relative paths are resolved against the config file's directory.

Exit status: 0 ok, 1 invalid input or parameters, 2 I/O failure, 3 numeric failure.";

#[derive(Debug, Parser)]
#[command(name = "fracfilt", version, about = "Fractional differentiation filters", after_help = CONFIG_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
pub enum Mode {
    /// Apply a filter to a two-column CSV signal (x, value)
    #[command(after_help = CONFIG_HELP)]
    Filter(Options),
    /// Evaluate a transfer function on a frequency grid, or a figure preset
    #[command(after_help = CONFIG_HELP)]
    Sweep(Options),
    /// Pass band and DC leakage of the truncated Gram filter
    #[command(after_help = CONFIG_HELP)]
    Metrics(Options),
}

pub fn run(cli: Cli) -> CliResult<()> {
    let (text, opts) = match cli.mode {
        Mode::Filter(o) => {
            let o = o.resolve()?;
            (run_filter(&o)?, o)
        }
        Mode::Sweep(o) => {
            let o = o.resolve()?;
            (run_sweep(&o)?, o)
        }
        Mode::Metrics(o) => {
            let o = o.resolve()?;
            (run_metrics(&o)?, o)
        }
    };
    emit(&opts, &text)
}

fn emit(opts: &Options, text: &str) -> CliResult<()> {
    match &opts.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn validation<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Validation(msg.into()))
}

/// Hahn parameters from the options; `gram` pins `alpha = beta = 0, n = 1`.
fn hahn_params(o: &Options, family: Family, delta: f64) -> CliResult<HahnFilterParams> {
    let (nu, window) = (o.require_nu()?, o.require_window()?);
    let (alpha, beta, n) = match family {
        Family::Gram => {
            if o.degree.is_some_and(|n| n != 1) || o.alpha.is_some_and(|a| a != 0.0) || o.beta.is_some_and(|b| b != 0.0)
            {
                return validation("gram means n = 1, alpha = beta = 0; use --family hahn otherwise");
            }
            (0.0, 0.0, 1)
        }
        _ => (o.alpha.unwrap_or(0.0), o.beta.unwrap_or(0.0), o.degree.unwrap_or(1)),
    };
    let history = match o.history {
        Some(m) => m,
        None if n >= 1 && n <= window => default_history(window, n, nu),
        None => 1,
    };
    Ok(HahnFilterParams::new(alpha, beta, window, n, nu, delta, history)?)
}

fn jacobi_params(o: &Options, family: Family) -> CliResult<JacobiKernelParams> {
    let delta = o
        .delta
        .ok_or_else(|| CliError::Validation(format!("--delta (kernel scale) is required for {}", family.name())))?;
    let (alpha, beta) = match family {
        Family::Legendre => {
            if o.alpha.is_some_and(|a| a != 0.0) || o.beta.is_some_and(|b| b != 0.0) {
                return validation("legendre means alpha = beta = 0; use --family jacobi otherwise");
            }
            (0.0, 0.0)
        }
        _ => (o.alpha.unwrap_or(0.0), o.beta.unwrap_or(0.0)),
    };
    Ok(JacobiKernelParams::new(alpha, beta, o.degree.unwrap_or(1), o.require_nu()?, delta)?)
}

fn check_spacing(o: &Options, s: &SampledSignal) -> CliResult<()> {
    if let Some(d) = o.delta {
        if (d - s.delta).abs() > signal::SPACING_TOLERANCE * s.delta {
            return validation(format!("--delta {d} differs from the sample spacing {}", s.delta));
        }
    }
    Ok(())
}

fn run_filter(o: &Options) -> CliResult<String> {
    let family = o.require_family()?;
    let input = o.input.as_ref().ok_or_else(|| CliError::Validation("-i INPUT is required".into()))?;
    let delta_hint = if family.is_discrete() { o.delta } else { None };
    let s = read_signal(input, o.causal, delta_hint)?;
    let exec = o.execution();
    let mut params: BTreeMap<&str, f64> = BTreeMap::new();
    let mut shift = 0.0;
    let values = match family {
        Family::Gl => {
            check_spacing(o, &s)?;
            let nu = o.require_nu()?;
            let terms = o.history.unwrap_or_else(|| {
                if s.causal {
                    s.len()
                } else if nu.fract() == 0.0 {
                    nu as usize + 1
                } else {
                    let n = nu.ceil().max(1.0) as u32;
                    default_history(n, n, nu).min(s.len())
                }
            });
            params.extend([("nu", nu), ("delta", s.delta), ("M", terms as f64)]);
            gl_filter(&s, nu, terms, exec)
        }
        Family::Hahn | Family::Gram => {
            check_spacing(o, &s)?;
            let p = hahn_params(o, family, s.delta)?;
            let needed = if s.causal { p.window as usize + 1 } else { p.window as usize + p.history + 1 };
            if s.len() < needed {
                return validation(format!(
                    "{} samples are too few: N = {} and M = {} need at least {needed}",
                    s.len(),
                    p.window,
                    p.history
                ));
            }
            let w = if family == Family::Gram {
                gram_n1_weights(p.window, p.nu, p.delta, p.history)?
            } else {
                hahn_weights(&p, exec)?
            };
            shift = evaluation_offset(&p) * s.delta;
            params.extend([
                ("alpha", p.alpha),
                ("beta", p.beta),
                ("N", p.window as f64),
                ("n", p.n as f64),
                ("nu", p.nu),
                ("delta", p.delta),
                ("M", p.history as f64),
                ("offset", shift),
            ]);
            filter_signal(&s, &w, exec)
        }
        Family::Jacobi | Family::Legendre => {
            let p = jacobi_params(o, family)?;
            let tail = o.history.unwrap_or(s.len());
            params.extend([("alpha", p.alpha), ("beta", p.beta), ("n", p.n as f64), ("nu", p.nu), ("delta", p.delta)]);
            jacobi_sampled(&p, s.delta, tail, exec)?.apply(&s, exec)
        }
        Family::Laguerre => {
            let delta = o
                .delta
                .ok_or_else(|| CliError::Validation("--delta (kernel scale) is required for laguerre".into()))?;
            let (alpha, n, nu) = (o.alpha.unwrap_or(0.0), o.degree.unwrap_or(1), o.require_nu()?);
            let tail = o.history.unwrap_or(s.len());
            params.extend([("alpha", alpha), ("n", n as f64), ("nu", nu), ("delta", delta)]);
            laguerre_sampled(alpha, n, nu, delta, s.delta, tail, exec)?.apply(&s, exec)
        }
        Family::Ideal | Family::Butterworth => {
            return validation(format!("{} has no sampled filter; use the sweep mode", family.name()));
        }
    };
    if values.iter().all(Option::is_none) {
        return validation(format!(
            "no sample has enough surrounding data for this {} filter ({} samples{})",
            family.name(),
            s.len(),
            if s.causal { "" } else { "; --causal pads the history with zeros" }
        ));
    }
    let rows: Vec<Row> = values.into_iter().enumerate().map(|(i, value)| Row { x: s.x(i) + shift, value }).collect();
    match o.format.unwrap_or_default() {
        Format::Text => {
            let mut buf = Vec::new();
            write_rows(&rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Json => {
            let rows: Vec<_> =
                rows.iter().map(|r| json!({"x": r.x, "value": r.value, "valid": r.value.is_some()})).collect();
            let doc = json!({"run_id": o.run_id(), "family": family.name(), "causal": s.causal, "params": params, "rows": rows});
            Ok(serde_json::to_string_pretty(&doc).expect("json value serializes") + "\n")
        }
    }
}

fn transfer_spec(o: &Options, family: Family) -> CliResult<TransferSpec> {
    let delta = o.delta.unwrap_or(1.0);
    Ok(match family {
        Family::Ideal => {
            let convention: Convention = o.convention.as_deref().unwrap_or("weyl").parse()?;
            TransferSpec::Ideal { nu: o.require_nu()?, convention }
        }
        Family::Jacobi => TransferSpec::Jacobi(JacobiKernelParams::new(
            o.alpha.unwrap_or(0.0),
            o.beta.unwrap_or(0.0),
            o.degree.unwrap_or(1),
            o.require_nu()?,
            delta,
        )?),
        Family::Legendre => {
            let n = o.degree.unwrap_or(1);
            let nu = o.require_nu()?;
            JacobiKernelParams::new(0.0, 0.0, n, nu, delta)?;
            TransferSpec::Legendre { n, nu, delta }
        }
        Family::Hahn => TransferSpec::Hahn(hahn_params(o, family, delta)?),
        Family::Gram if o.history.is_some() => TransferSpec::HahnTruncated(hahn_params(o, family, delta)?),
        Family::Gram => TransferSpec::Hahn(hahn_params(o, family, delta)?),
        Family::Gl => TransferSpec::Gl { nu: o.require_nu()?, delta },
        Family::Butterworth => {
            TransferSpec::Butterworth { nu: o.require_nu()?, n: o.degree.unwrap_or(1), omega0: o.omega0.unwrap_or(1.0) }
        }
        Family::Laguerre => {
            return validation(
                "laguerre has no transfer function sweep; use jacobi, legendre, hahn, gram, gl, ideal or butterworth",
            )
        }
    })
}

fn default_grid(o: &Options, family: Family) -> CliResult<FrequencyGrid> {
    let delta = o.delta.unwrap_or(1.0);
    Ok(match family {
        Family::Gl | Family::Hahn | Family::Gram => FrequencyGrid::logarithmic(1e-3 / delta, PI / delta, 201)?,
        Family::Butterworth => {
            let w0 = o.omega0.unwrap_or(1.0);
            FrequencyGrid::logarithmic(1e-2 * w0, 1e3 * w0, 201)?
        }
        _ => FrequencyGrid::logarithmic(1e-3 / delta, 1e2 / delta, 201)?,
    })
}

fn run_sweep(o: &Options) -> CliResult<String> {
    let grid = o.grid.as_deref().map(str::parse::<FrequencyGrid>).transpose()?;
    let exec = o.execution();
    let report = match (&o.preset, o.family) {
        (Some(_), Some(_)) => return validation("give either --preset or --family, not both"),
        (Some(name), None) => {
            let fig = preset(name)?;
            fig.render_on(grid.as_ref().unwrap_or(&fig.grid), o.run_id(), exec)
        }
        (None, Some(family)) => {
            let spec = transfer_spec(o, family)?;
            let grid = match grid {
                Some(g) => g,
                None => default_grid(o, family)?,
            };
            SweepReport::new(o.run_id(), vec![spec.curve(family.name(), &grid, exec)])
        }
        (None, None) => return validation("sweep needs --family or --preset"),
    };
    if report.curves.iter().all(|c| c.samples.iter().all(|s| s.value.is_none())) {
        let first = report.curves.first().and_then(|c| c.samples.first()).and_then(|s| s.error.clone());
        return Err(CliError::Numeric(format!("every grid point failed: {}", first.unwrap_or_default())));
    }
    Ok(match o.format.unwrap_or_default() {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| format!("{v}"))
}

fn run_metrics(o: &Options) -> CliResult<String> {
    let family = o.require_family()?;
    if !matches!(family, Family::Gram | Family::Hahn) {
        return validation(format!("metrics are defined for gram and hahn filters, not {}", family.name()));
    }
    let p = hahn_params(o, family, o.delta.unwrap_or(1.0))?;
    let m = filter_metrics(&p)?;
    let note = m.integer_order.then_some("integer order: the omega_max estimate degenerates to 0");
    Ok(match o.format.unwrap_or_default() {
        Format::Text => {
            let mut s = format!("# run_id: {}\n", o.run_id());
            let fields = [
                ("family", family.name().to_string()),
                ("N", p.window.to_string()),
                ("M", p.history.to_string()),
                ("nu", format!("{}", p.nu)),
                ("delta", format!("{}", p.delta)),
                ("omega_lower", format!("{}", m.omega_lower)),
                ("omega_lower_practical", format!("{}", m.omega_lower_practical)),
                ("omega_max", format!("{}", m.omega_max)),
                ("bandwidth", fmt_opt(m.bandwidth)),
                ("h_zero", format!("{}", m.h_zero)),
            ];
            for (k, v) in fields {
                s.push_str(&format!("{k}: {v}\n"));
            }
            if let Some(n) = note {
                s.push_str(&format!("note: {n}\n"));
            }
            s
        }
        Format::Json => {
            let doc = json!({
                "run_id": o.run_id(),
                "family": family.name(),
                "params": {"N": p.window, "M": p.history, "nu": p.nu, "delta": p.delta},
                "metrics": m,
                "note": note,
            });
            serde_json::to_string_pretty(&doc).expect("metrics serialize") + "\n"
        }
    })
}
