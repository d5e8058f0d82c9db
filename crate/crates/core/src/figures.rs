//! Presets for the standard frequency-response plots `fig1` to `fig7`.

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::hahn::HahnFilterParams;
use crate::transfer::{Convention, FrequencyGrid, SweepReport, TransferSpec};

pub const PRESETS: [&str; 7] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"];

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: &'static str,
    pub title: &'static str,
    pub grid: FrequencyGrid,
    pub curves: Vec<(String, TransferSpec)>,
}

impl Figure {
    pub fn render(&self, run_id: &str, exec: Execution) -> SweepReport {
        self.render_on(&self.grid, run_id, exec)
    }

    pub fn render_on(&self, grid: &FrequencyGrid, run_id: &str, exec: Execution) -> SweepReport {
        let curves = self.curves.iter().map(|(label, spec)| spec.curve(label.clone(), grid, exec)).collect();
        SweepReport::new(run_id, curves)
    }
}

fn gram(window: u32, nu: f64, history: usize) -> Result<HahnFilterParams> {
    HahnFilterParams::new(0.0, 0.0, window, 1, nu, 1.0, history)
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<Figure> {
    let log = FrequencyGrid::logarithmic;
    let fig = match name {
        "fig1" => Figure {
            name: "fig1",
            title: "ideal n-th order differentiator, n = 1, 2, 5",
            grid: log(1e-2, 1e2, 201)?,
            curves: [1.0, 2.0, 5.0]
                .iter()
                .map(|&nu| (format!("n={nu}"), TransferSpec::Ideal { nu, convention: Convention::Weyl }))
                .collect(),
        },
        "fig2" => Figure {
            name: "fig2",
            title: "first order Legendre derivative, delta = 1",
            grid: log(1e-3, 1e2, 501)?,
            curves: vec![("n=1 nu=1".into(), TransferSpec::Legendre { n: 1, nu: 1.0, delta: 1.0 })],
        },
        "fig3" => Figure {
            name: "fig3",
            title: "ideal fractional differentiator, nu = 1, 1.5, 2",
            grid: log(1e-2, 1e2, 201)?,
            curves: [1.0, 1.5, 2.0]
                .iter()
                .map(|&nu| (format!("nu={nu}"), TransferSpec::Ideal { nu, convention: Convention::Weyl }))
                .collect(),
        },
        "fig4" => Figure {
            name: "fig4",
            title: "fractional Legendre derivative, n = 1, delta = 1",
            grid: log(1e-3, 1e2, 501)?,
            curves: [0.25, 0.5, 0.75, 1.0]
                .iter()
                .map(|&nu| (format!("nu={nu}"), TransferSpec::Legendre { n: 1, nu, delta: 1.0 }))
                .collect(),
        },
        "fig5" => Figure {
            name: "fig5",
            title: "fractional Gram derivative, nu = 0.5, delta = 1",
            grid: log(1e-2, std::f64::consts::PI, 301)?,
            curves: [1, 2, 4, 7]
                .iter()
                .map(|&w| Ok((format!("N={w}"), TransferSpec::Hahn(gram(w, 0.5, 1)?))))
                .collect::<Result<_>>()?,
        },
        "fig6" => Figure {
            name: "fig6",
            title: "truncated fractional Hahn derivative, N = 7, nu = 0.5, delta = 1",
            grid: log(1e-4, std::f64::consts::PI, 301)?,
            curves: [16, 64, 256, 1024]
                .iter()
                .map(|&m| Ok((format!("M={m}"), TransferSpec::HahnTruncated(gram(7, 0.5, m)?))))
                .collect::<Result<_>>()?,
        },
        "fig7" => Figure {
            name: "fig7",
            title: "fractional Butterworth derivative, n = 7, nu = 0.5, omega0 = 1",
            grid: log(1e-2, 1e3, 301)?,
            curves: vec![("n=7 nu=0.5".into(), TransferSpec::Butterworth { nu: 0.5, n: 7, omega0: 1.0 })],
        },
        other => return invalid(format!("unknown preset '{other}', expected one of fig1..fig7")),
    };
    Ok(fig)
}
