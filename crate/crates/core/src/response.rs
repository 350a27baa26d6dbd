//! Probe-field response: output quadrature, transmission, OMIT tuning points.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{OmitError, Result};
use crate::params::DerivedParams;
use crate::steady_state::{solve_steady_state, SteadyState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Probe-sideband amplitude `c_+` of the intracavity field at probe-pump
/// detuning `delta` (rad/s), linearised around `ss`.
pub fn c_plus(dp: &DerivedParams, ss: &SteadyState, delta: f64) -> Result<Complex64> {
    let p = &dp.params;
    let (kappa, wm, gm) = (p.kappa, p.omega_m, p.gamma_m);
    let big_delta = ss.delta_eff;
    let beta = ss.beta;

    // delta^2 - omega_m^2 factored to keep precision near delta ~ omega_m
    let mech = Complex64::new((delta - wm) * (delta + wm), gm * delta);
    let num = mech * Complex64::new(kappa, -(big_delta + delta)) - 2.0 * I * wm * beta;
    let k_minus = Complex64::new(kappa, -delta);
    let cav = big_delta * big_delta + k_minus * k_minus;
    let lead = cav * mech;
    let coupling = 4.0 * big_delta * wm * beta;
    let den = lead + coupling;

    let scale = lead.norm() + coupling.abs();
    let magnitude = den.norm();
    if !(magnitude > 1e-30 * scale) {
        return Err(OmitError::Singularity {
            delta,
            magnitude,
            scale,
        });
    }
    Ok(num / den)
}

/// Output quadrature `2 kappa c_+` from the full linear response.
pub fn epsilon_t_exact(dp: &DerivedParams, ss: &SteadyState, delta: f64) -> Result<Complex64> {
    Ok(2.0 * dp.params.kappa * c_plus(dp, ss, delta)?)
}

/// Output quadrature near the anti-Stokes resonance, `x = delta - omega_m`.
pub fn epsilon_t_approx(kappa: f64, gamma_m: f64, beta: f64, x: f64) -> Complex64 {
    let mech = Complex64::new(0.5 * gamma_m, -x);
    2.0 * kappa / (Complex64::new(kappa, -x) + beta / mech)
}

/// Probe transmission `t_p = 1 - eps_T`.
pub fn transmission(eps_t: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) - eps_t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuningPoints {
    pub x_plus: f64,
    pub x_minus: f64,
    pub x_zero: f64,
    /// `x_plus - x_minus` (rad/s).
    pub width: f64,
}

/// Below this coupling the two absorption flank maxima merge at x = 0.
pub fn merge_threshold(kappa: f64, gamma_m: f64) -> f64 {
    gamma_m.powi(3) / (8.0 * (kappa + gamma_m))
}

/// Flank maxima of `Re[epsilon_t_approx]` about the transparency dip.
///
/// For `beta` below [`merge_threshold`] the radicand is negative, there is a
/// single absorption maximum at x = 0 and `x_plus` collapses to zero.
pub fn tuning_points(kappa: f64, gamma_m: f64, beta: f64) -> Result<TuningPoints> {
    let domain_err = || OmitError::FormulaDomain {
        beta,
        kappa,
        gamma_m,
    };
    if !(kappa.is_finite() && kappa > 0.0)
        || !(gamma_m.is_finite() && gamma_m >= 0.0)
        || !(beta.is_finite() && beta >= 0.0)
    {
        return Err(domain_err());
    }
    let load = 2.0 * beta + kappa * gamma_m;
    let radicand = (std::f64::consts::SQRT_2 * (2.0 * kappa + gamma_m) * (beta * load).sqrt()
        - gamma_m * load)
        / (4.0 * kappa);
    let x_plus = if radicand >= 0.0 {
        radicand.sqrt()
    } else if beta < merge_threshold(kappa, gamma_m) * (1.0 + 1e-9) {
        0.0
    } else {
        return Err(domain_err());
    };
    Ok(TuningPoints {
        x_plus,
        x_minus: -x_plus,
        x_zero: 0.0,
        width: 2.0 * x_plus,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResponse {
    pub n: u32,
    /// `x = delta - omega_m` (rad/s), strictly increasing.
    pub x_grid: Vec<f64>,
    pub eps_t_exact: Vec<Complex64>,
    pub eps_t_approx: Vec<Complex64>,
    pub t_p: Vec<Complex64>,
    pub steady: SteadyState,
}

/// Uniform grid of `points` values from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

/// Default spectrum half-span: four times `sqrt(beta)`, or `4 kappa` without pump.
pub fn default_half_span(dp: &DerivedParams, ss: &SteadyState) -> f64 {
    if ss.beta > 0.0 {
        4.0 * ss.beta.sqrt()
    } else {
        4.0 * dp.params.kappa
    }
}

pub const DEFAULT_SPECTRUM_POINTS: usize = 2001;

pub fn spectrum_for_state(
    dp: &DerivedParams,
    ss: &SteadyState,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<ProbeResponse> {
    if points < 2 {
        return Err(OmitError::InvalidArgument(format!(
            "spectrum needs at least 2 points (got {points})"
        )));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
        return Err(OmitError::InvalidArgument(format!(
            "spectrum range must satisfy x_min < x_max (got {x_min}, {x_max})"
        )));
    }
    let p = &dp.params;
    let x_grid = uniform_grid(x_min, x_max, points);
    let exact = x_grid
        .par_iter()
        .map(|&x| epsilon_t_exact(dp, ss, p.omega_m + x))
        .collect::<Result<Vec<_>>>()?;
    let approx: Vec<Complex64> = x_grid
        .iter()
        .map(|&x| epsilon_t_approx(p.kappa, p.gamma_m, ss.beta, x))
        .collect();
    let t_p = exact.iter().map(|&e| transmission(e)).collect();
    Ok(ProbeResponse {
        n: ss.n.round() as u32,
        x_grid,
        eps_t_exact: exact,
        eps_t_approx: approx,
        t_p,
        steady: ss.clone(),
    })
}

pub fn sweep_spectrum(
    dp: &DerivedParams,
    n: u32,
    x_min: f64,
    x_max: f64,
    points: usize,
) -> Result<ProbeResponse> {
    let ss = solve_steady_state(dp, n)?;
    spectrum_for_state(dp, &ss, x_min, x_max, points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargeRow {
    pub n: u32,
    pub q_s: f64,
    pub n_photon: f64,
    pub beta: f64,
    pub x_plus: f64,
    pub width: f64,
}

pub fn sweep_charge(dp: &DerivedParams, n_min: u32, n_max: u32) -> Result<Vec<ChargeRow>> {
    if n_min > n_max {
        return Err(OmitError::InvalidArgument(format!(
            "n_min ({n_min}) must not exceed n_max ({n_max})"
        )));
    }
    let p = &dp.params;
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let ss = solve_steady_state(dp, n)?;
            let tp = tuning_points(p.kappa, p.gamma_m, ss.beta)?;
            Ok(ChargeRow {
                n,
                q_s: ss.q_s,
                n_photon: ss.n_photon,
                beta: ss.beta,
                x_plus: tp.x_plus,
                width: tp.width,
            })
        })
        .collect()
}
