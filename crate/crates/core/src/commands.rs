//! Subcommands: each turns a run configuration into a result table.

use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{parse_value, RunConfig};
use crate::constants::PhysicalConstants;
use crate::error::{OmitError, Result};
use crate::inversion::{
    classify, detection_metrics, estimate_charge, width_of_n, width_step_per_charge,
};
use crate::oracle::{rhs_residual_at, verify_cplus};
use crate::params::{derive, validate, DerivedParams, SystemParams};
use crate::response::{
    default_half_span, merge_threshold, spectrum_for_state, sweep_charge, tuning_points,
    uniform_grid,
};
use crate::steady_state::{approx_steady_state, solve_steady_state};
use crate::table::{
    format_float, parse_provenance, render, Cell, OutputFormat, Provenance, ResultTable,
};

pub const TOOL_NAME: &str = "omit";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Derive,
    Steady,
    Spectrum,
    SweepN,
    Tuning,
    Invert,
    Oracle,
    Metrics,
    Fig2,
    Fig3,
    Fig4,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Derive,
        Command::Steady,
        Command::Spectrum,
        Command::SweepN,
        Command::Tuning,
        Command::Invert,
        Command::Oracle,
        Command::Metrics,
        Command::Fig2,
        Command::Fig3,
        Command::Fig4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Derive => "derive",
            Command::Steady => "steady",
            Command::Spectrum => "spectrum",
            Command::SweepN => "sweep-n",
            Command::Tuning => "tuning",
            Command::Invert => "invert",
            Command::Oracle => "oracle",
            Command::Metrics => "metrics",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
        }
    }
}

impl FromStr for Command {
    type Err = OmitError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| OmitError::Config(format!("unknown command '{s}'")))
    }
}

fn derived(params: &SystemParams) -> Result<DerivedParams> {
    derive(params, &PhysicalConstants::default())
}

fn f(x: f64) -> Cell {
    Cell::Float(x)
}

pub fn run_command(cfg: &RunConfig, cmd: Command) -> Result<ResultTable> {
    match cmd {
        Command::Derive => derive_table(cfg),
        Command::Steady => steady_table(cfg),
        Command::Spectrum => spectrum_table(cfg),
        Command::SweepN => sweep_table(cfg),
        Command::Tuning => tuning_table(cfg),
        Command::Invert => invert_table(cfg),
        Command::Oracle => oracle_table(cfg),
        Command::Metrics => metrics_table(cfg),
        Command::Fig2 => fig2_table(cfg),
        Command::Fig3 => fig3_table(cfg),
        Command::Fig4 => fig4_table(cfg),
    }
}

fn derive_table(cfg: &RunConfig) -> Result<ResultTable> {
    let consts = PhysicalConstants::default();
    let report = validate(&cfg.params, &consts);
    if !report.is_ok() {
        return Err(OmitError::InvalidParams(report.errors));
    }
    let dp = derive(&cfg.params, &consts)?;
    let mut t = ResultTable::new(&[
        "omega_c[rad_s]",
        "chi[N]",
        "q_mr[C]",
        "eta[N]",
        "eps_l[1_s]",
        "delta_c[rad_s]",
        "omega_m_over_kappa",
    ]);
    let p = &dp.params;
    t.push(vec![
        f(dp.omega_c),
        f(dp.chi),
        f(dp.q_mr),
        f(dp.eta),
        f(dp.eps_l),
        f(dp.delta_c),
        f(p.omega_m / p.kappa),
    ]);
    t.notes = report
        .warnings
        .iter()
        .map(|w| format!("warning: {w}"))
        .collect();
    Ok(t)
}

fn steady_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let ss = solve_steady_state(&dp, cfg.params.n_charge)?;
    let mut t = ResultTable::new(&[
        "n",
        "q_s[m]",
        "p_s[kg_m_s]",
        "re_c_s",
        "im_c_s",
        "n_photon",
        "delta_eff[rad_s]",
        "beta[rad2_s2]",
        "multistable",
        "real_roots",
    ]);
    t.push(vec![
        cfg.params.n_charge.into(),
        f(ss.q_s),
        f(ss.p_s),
        f(ss.c_s.re),
        f(ss.c_s.im),
        f(ss.n_photon),
        f(ss.delta_eff),
        f(ss.beta),
        ss.multistable.into(),
        ss.all_real_roots.len().into(),
    ]);
    let roots: Vec<String> = ss.all_real_roots.iter().map(|&r| format_float(r)).collect();
    t.notes.push(format!("real roots [m]: {}", roots.join(" ")));
    Ok(t)
}

fn spectrum_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let s = &cfg.spectrum;
    let ss = solve_steady_state(&dp, s.n)?;
    let (lo, hi) = s.x_range.unwrap_or_else(|| {
        let h = default_half_span(&dp, &ss);
        (-h, h)
    });
    let resp = spectrum_for_state(&dp, &ss, lo, hi, s.points)?;
    let mut t = ResultTable::new(&[
        "x[rad_s]",
        "re_eps_t_exact",
        "im_eps_t_exact",
        "re_eps_t_approx",
        "im_eps_t_approx",
        "re_t_p",
        "im_t_p",
    ]);
    for i in 0..resp.x_grid.len() {
        let (e, a, tp) = (resp.eps_t_exact[i], resp.eps_t_approx[i], resp.t_p[i]);
        t.push(vec![
            f(resp.x_grid[i]),
            f(e.re),
            f(e.im),
            f(a.re),
            f(a.im),
            f(tp.re),
            f(tp.im),
        ]);
    }
    t.notes.push(format!(
        "n = {}, beta = {} rad^2/s^2",
        s.n,
        format_float(ss.beta)
    ));
    Ok(t)
}

fn sweep_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let rows = sweep_charge(&dp, cfg.sweep.n_min, cfg.sweep.n_max)?;
    let mut t = ResultTable::new(&[
        "n",
        "q_s[m]",
        "n_photon",
        "beta[rad2_s2]",
        "x_plus[rad_s]",
        "width[rad_s]",
    ]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            f(r.q_s),
            f(r.n_photon),
            f(r.beta),
            f(r.x_plus),
            f(r.width),
        ]);
    }
    Ok(t)
}

fn tuning_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let ss = solve_steady_state(&dp, cfg.params.n_charge)?;
    let p = &dp.params;
    let tp = tuning_points(p.kappa, p.gamma_m, ss.beta)?;
    let mut t = ResultTable::new(&[
        "n",
        "beta[rad2_s2]",
        "x_plus[rad_s]",
        "x_minus[rad_s]",
        "x_zero[rad_s]",
        "width[rad_s]",
        "merge_threshold[rad2_s2]",
    ]);
    t.push(vec![
        cfg.params.n_charge.into(),
        f(ss.beta),
        f(tp.x_plus),
        f(tp.x_minus),
        f(tp.x_zero),
        f(tp.width),
        f(merge_threshold(p.kappa, p.gamma_m)),
    ]);
    Ok(t)
}

fn invert_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let width = cfg.invert.width.ok_or_else(|| {
        OmitError::Config("invert needs invert.width_hz or invert.width_rad_s".into())
    })?;
    let range = cfg.invert.range;
    let est = estimate_charge(&dp, width, range.n_min, range.n_max)?;
    let step = width_step_per_charge(&dp, est.n_int)?;
    let mut t = ResultTable::new(&[
        "width[rad_s]",
        "n_hat",
        "n_int",
        "residual[rad_s]",
        "ambiguous",
        "candidates",
        "width_step[rad_s]",
    ]);
    t.push(vec![
        f(width),
        f(est.n_hat),
        est.n_int.into(),
        f(est.residual),
        est.ambiguous.into(),
        est.candidates.len().into(),
        f(step),
    ]);
    for c in &est.candidates {
        t.notes.push(format!(
            "candidate: n_hat = {}, n_int = {}",
            format_float(c.n_hat),
            c.n_int
        ));
    }
    Ok(t)
}

fn oracle_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.oracle_params())?;
    let o = &cfg.oracle;
    let ss = solve_steady_state(&dp, o.n)?;
    let half = o.span_sqrt_beta * ss.beta.sqrt();
    let xs = match o.detunings {
        0 => {
            return Err(OmitError::InvalidArgument(
                "oracle.detunings must be >= 1".into(),
            ))
        }
        1 => vec![0.0],
        k => uniform_grid(-half, half, k),
    };
    let omega_m = dp.params.omega_m;
    let deltas: Vec<f64> = xs.iter().map(|x| omega_m + x).collect();
    let rows = verify_cplus(&dp, o.n, &deltas, &o.settings)?;
    let mut t = ResultTable::new(&[
        "delta[rad_s]",
        "x[rad_s]",
        "re_c_plus_analytic",
        "im_c_plus_analytic",
        "re_c_plus_numeric",
        "im_c_plus_numeric",
        "rel_error",
        "fit_residual",
    ]);
    for (r, x) in rows.iter().zip(&xs) {
        t.push(vec![
            f(r.delta),
            f(*x),
            f(r.analytic.re),
            f(r.analytic.im),
            f(r.numeric.re),
            f(r.numeric.im),
            f(r.rel_error),
            f(r.residual),
        ]);
    }
    t.notes.push(format!(
        "rhs residual at analytic steady state: {}",
        format_float(rhs_residual_at(&dp, &ss))
    ));
    Ok(t)
}

fn metrics_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let m = detection_metrics(&dp);
    let mut t = ResultTable::new(&[
        "u_bias[V]",
        "r0[m]",
        "min_force[N]",
        "surface_density[1_cm2]",
    ]);
    t.push(vec![
        f(cfg.params.u_bias),
        f(cfg.params.r0),
        f(m.min_force),
        f(m.surface_density_sensitivity),
    ]);
    Ok(t)
}

fn fig2_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let r = cfg.fig2;
    let rows = (r.n_min..=r.n_max)
        .into_par_iter()
        .map(|n| {
            let exact = solve_steady_state(&dp, n)?;
            let approx = approx_steady_state(&dp, n)?;
            Ok(vec![
                n.into(),
                f(exact.q_s),
                f(approx.q_s),
                f(exact.n_photon),
                f(approx.n_photon),
                f(exact.beta),
                f(approx.beta),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = ResultTable::new(&[
        "n",
        "q_s_exact[m]",
        "q_s_approx[m]",
        "n_photon_exact",
        "n_photon_approx",
        "beta_exact[rad2_s2]",
        "beta_approx[rad2_s2]",
    ]);
    t.rows = rows;
    Ok(t)
}

fn fig3_table(cfg: &RunConfig) -> Result<ResultTable> {
    let dp = derived(&cfg.params)?;
    let s = &cfg.fig3;
    let kappa = dp.params.kappa;
    let panels = (s.range.n_min..=s.range.n_max)
        .into_par_iter()
        .map(|n| {
            let ss = solve_steady_state(&dp, n)?;
            let unit = if ss.beta > 0.0 { ss.beta.sqrt() } else { kappa };
            let half = s.span_sqrt_beta * unit;
            let resp = spectrum_for_state(&dp, &ss, -half, half, s.points)?;
            Ok((0..resp.x_grid.len())
                .map(|i| {
                    vec![
                        n.into(),
                        f(resp.x_grid[i]),
                        f(resp.eps_t_exact[i].re),
                        f(resp.eps_t_approx[i].re),
                    ]
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = ResultTable::new(&["n", "x[rad_s]", "re_eps_t_exact", "re_eps_t_approx"]);
    t.rows = panels.into_iter().flatten().collect();
    Ok(t)
}

fn fig4_table(cfg: &RunConfig) -> Result<ResultTable> {
    let r = cfg.fig4.range;
    let mut t = ResultTable::new(&["curve", "n", "x_plus[rad_s]", "width[rad_s]"]);
    for (i, curve) in cfg.fig4.curves.iter().enumerate() {
        let params = SystemParams {
            m_eff: curve.m_eff,
            u_bias: curve.u_bias,
            ..cfg.params
        };
        let dp = derived(&params)?;
        let widths = (r.n_min..=r.n_max)
            .into_par_iter()
            .map(|n| width_of_n(&dp, n as f64))
            .collect::<Result<Vec<_>>>()?;
        for (k, w) in widths.iter().enumerate() {
            t.push(vec![
                i.into(),
                (r.n_min + k as u32).into(),
                f(0.5 * w),
                f(*w),
            ]);
        }
        let shape = if widths.len() > 1 {
            classify(r.n_min, &widths).shape.as_str()
        } else {
            "single_point"
        };
        t.notes.push(format!(
            "curve {i} ({}): m_eff = {} kg, u_bias = {} V, shape = {shape}",
            curve.label,
            format_float(curve.m_eff),
            format_float(curve.u_bias)
        ));
    }
    Ok(t)
}

/// Provenance for `cmd` under `cfg`. Paths are left out so that the block
/// depends only on what determines the numbers.
pub fn provenance(cfg: &RunConfig, cmd: Command, format: OutputFormat) -> Provenance {
    Provenance {
        tool: format!("{TOOL_NAME} {}", env!("CARGO_PKG_VERSION")),
        command: format!("{TOOL_NAME} {} --format {}", cmd.as_str(), format.as_str()),
        constants: serde_json::to_value(PhysicalConstants::default()).expect("constants serialise"),
        config: cfg.resolved.clone(),
    }
}

/// Runs `cmd` and renders the complete output file.
pub fn execute(cfg: &RunConfig, cmd: Command, format: OutputFormat) -> Result<String> {
    let table = run_command(cfg, cmd)?;
    Ok(render(format, &provenance(cfg, cmd, format), &table))
}

/// Re-runs the command recorded in an output file's provenance block.
pub fn rerun(output: &str) -> Result<String> {
    let prov = parse_provenance(output)?;
    let cmd: Command = prov
        .command_name()
        .ok_or_else(|| OmitError::Config("provenance command line is empty".into()))?
        .parse()?;
    let format = prov.format().unwrap_or(OutputFormat::Csv);
    let cfg = parse_value(&prov.config)?;
    execute(&cfg, cmd, format)
}
