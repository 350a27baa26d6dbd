//! Experimental inputs and the coupling constants derived from them.
//!
//! All frequencies are angular (rad/s) here; the config layer converts from Hz.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{OmitError, Result};
use crate::steady_state;

/// How the bare pump-cavity detuning `Delta_c = omega_c - omega_l` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DetuningPolicy {
    /// Fixed value in rad/s.
    Explicit(f64),
    /// Pick `Delta_c` so that the effective detuning equals `omega_m` at n = 0.
    ResonantAtZeroCharge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Pump / cavity wavelength (m).
    pub lambda_c: f64,
    /// Cavity length (m).
    pub cavity_length: f64,
    /// Effective mass of the mechanical resonator (kg).
    pub m_eff: f64,
    /// Mechanical frequency (rad/s).
    pub omega_m: f64,
    /// Mechanical damping (rad/s).
    pub gamma_m: f64,
    /// Cavity decay rate (rad/s).
    pub kappa: f64,
    /// Resonator-body equilibrium distance (m).
    pub r0: f64,
    /// Gate capacitance (F).
    pub c_bias: f64,
    /// Gate voltage (V). Zero switches the Coulomb coupling off.
    pub u_bias: f64,
    /// Pump power (W). Zero leaves the cavity undriven.
    pub p_pump: f64,
    /// Number of elementary charges on the nearby body.
    pub n_charge: u32,
    pub delta_c_policy: DetuningPolicy,
    /// Negates the Coulomb force (like-sign charges).
    pub coulomb_repulsive: bool,
}

impl SystemParams {
    /// Parameter set of the reference charge-number sweeps: 1064 nm pump,
    /// 25 mm cavity, 145 ng resonator at 947 kHz, C = 27.5 nF, U = 1 V.
    pub fn fig2() -> Self {
        Self {
            lambda_c: 1064e-9,
            cavity_length: 25e-3,
            m_eff: 145e-12,
            omega_m: 2.0 * PI * 947e3,
            gamma_m: 2.0 * PI * 141.0,
            kappa: 2.0 * PI * 215e3,
            r0: 67e-6,
            c_bias: 27.5e-9,
            u_bias: 1.0,
            p_pump: 1e-3,
            n_charge: 0,
            delta_c_policy: DetuningPolicy::ResonantAtZeroCharge,
            coulomb_repulsive: false,
        }
    }

    /// Same as [`fig2`](Self::fig2) with a 1.45 ng resonator biased at 0.1 V.
    pub fn light_resonator() -> Self {
        Self {
            m_eff: 1.45e-12,
            u_bias: 0.1,
            ..Self::fig2()
        }
    }

    /// Fast-settling set for the time-domain check: mechanical damping raised
    /// to 2 pi x 10 kHz and pump power to 10 mW, keeping
    /// `omega_m > kappa > gamma_m` and `2 beta >> kappa gamma_m`.
    pub fn oracle_scaled() -> Self {
        Self {
            gamma_m: 2.0 * PI * 10e3,
            p_pump: 10e-3,
            ..Self::fig2()
        }
    }

    fn positive_fields(&self) -> [(&'static str, f64); 8] {
        [
            ("lambda_c", self.lambda_c),
            ("cavity_length", self.cavity_length),
            ("m_eff", self.m_eff),
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("kappa", self.kappa),
            ("r0", self.r0),
            ("c_bias", self.c_bias),
        ]
    }

    /// Non-physical values; an empty list means the set is usable.
    pub fn errors(&self) -> Vec<String> {
        let mut errors: Vec<String> = self
            .positive_fields()
            .iter()
            .filter(|(_, v)| !(v.is_finite() && *v > 0.0))
            .map(|(name, v)| format!("{name} must be strictly positive (got {v})"))
            .collect();
        for (name, v) in [("u_bias", self.u_bias), ("p_pump", self.p_pump)] {
            if !(v.is_finite() && v >= 0.0) {
                errors.push(format!("{name} must be non-negative (got {v})"));
            }
        }
        if let DetuningPolicy::Explicit(d) = self.delta_c_policy {
            if !d.is_finite() {
                errors.push(format!("delta_c must be finite (got {d})"));
            }
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub params: SystemParams,
    pub consts: PhysicalConstants,
    /// Cavity frequency (rad/s).
    pub omega_c: f64,
    /// Radiation-pressure force per photon (N).
    pub chi: f64,
    /// Charge on the resonator (C).
    pub q_mr: f64,
    /// Coulomb force per elementary charge on the body (N), always >= 0.
    pub eta: f64,
    /// Pump amplitude, real and non-negative.
    pub eps_l: f64,
    /// Resolved bare detuning (rad/s).
    pub delta_c: f64,
}

impl DerivedParams {
    /// Mechanical spring constant `m omega_m^2` (N/m).
    pub fn stiffness(&self) -> f64 {
        self.params.m_eff * self.params.omega_m * self.params.omega_m
    }

    /// `chi / hbar`, the detuning shift per metre of displacement.
    pub fn chi_over_hbar(&self) -> f64 {
        self.chi / self.consts.hbar
    }

    /// Signed Coulomb force per charge along the radiation-pressure direction.
    pub fn force_per_charge(&self) -> f64 {
        if self.params.coulomb_repulsive {
            -self.eta
        } else {
            self.eta
        }
    }

    /// Returns a copy with the bare detuning pinned to `delta_c`.
    pub fn with_delta_c(&self, delta_c: f64) -> Self {
        let mut out = *self;
        out.delta_c = delta_c;
        out.params.delta_c_policy = DetuningPolicy::Explicit(delta_c);
        out
    }
}

/// Coulomb force between one elementary charge and `q_mr` at distance `r0`.
pub fn coulomb_force_per_charge(consts: &PhysicalConstants, q_mr: f64, r0: f64) -> f64 {
    consts.k_coulomb * consts.e_charge * q_mr / (r0 * r0)
}

pub fn derive(params: &SystemParams, consts: &PhysicalConstants) -> Result<DerivedParams> {
    let mut errors = params.errors();
    errors.extend(
        consts
            .invalid_fields()
            .into_iter()
            .map(|name| format!("constant {name} must be strictly positive")),
    );
    if !errors.is_empty() {
        return Err(OmitError::InvalidParams(errors));
    }

    let omega_c = 2.0 * PI * consts.c_light / params.lambda_c;
    let chi = consts.hbar * omega_c / params.cavity_length;
    let q_mr = params.c_bias * params.u_bias;
    let eta = coulomb_force_per_charge(consts, q_mr, params.r0);
    let eps_l = (2.0 * params.p_pump * params.kappa / (consts.hbar * omega_c)).sqrt();

    let mut dp = DerivedParams {
        params: *params,
        consts: *consts,
        omega_c,
        chi,
        q_mr,
        eta,
        eps_l,
        delta_c: 0.0,
    };
    dp.delta_c = match params.delta_c_policy {
        DetuningPolicy::Explicit(d) => d,
        DetuningPolicy::ResonantAtZeroCharge => resolve_resonant_detuning(&dp)?,
    };
    Ok(dp)
}

/// With `Delta = omega_m` at n = 0 the photon number is fixed, hence so is
/// `q_s(0)`, and `Delta_c = omega_m + (chi/hbar) q_s(0)`. The result is
/// checked against the cubic's physical roots at n = 0.
fn resolve_resonant_detuning(dp: &DerivedParams) -> Result<f64> {
    let p = &dp.params;
    let photons = dp.eps_l * dp.eps_l / (p.kappa * p.kappa + p.omega_m * p.omega_m);
    let q0 = dp.chi * photons / dp.stiffness();
    let delta_c = p.omega_m + dp.chi_over_hbar() * q0;

    let trial = dp.with_delta_c(delta_c);
    let roots = steady_state::physical_roots(&trial, 0.0);
    let scale = steady_state::length_scale(&trial).max(q0.abs());
    let found = roots.iter().any(|r| (r - q0).abs() <= 1e-8 * scale);
    if !found {
        return Err(OmitError::Derivation(format!(
            "q_s(0) = {q0:e} m is not a physical root at Delta_c = {delta_c} rad/s (roots: {roots:?})"
        )));
    }
    Ok(delta_c)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Relative displacement above which the linearised Coulomb term is suspect.
pub const LINEARIZATION_LIMIT: f64 = 0.01;

pub fn validate(params: &SystemParams, consts: &PhysicalConstants) -> ValidationReport {
    let mut report = ValidationReport {
        errors: params.errors(),
        warnings: Vec::new(),
    };
    if !report.errors.is_empty() {
        return report;
    }
    let ratio = params.omega_m / params.kappa;
    if ratio <= 1.0 {
        report.warnings.push(format!(
            "sideband unresolved: omega_m / kappa = {ratio:.4} <= 1"
        ));
    }
    match derive(params, consts)
        .and_then(|dp| steady_state::solve_steady_state(&dp, params.n_charge))
    {
        Ok(ss) => {
            let rel = ss.q_s / params.r0;
            if rel >= LINEARIZATION_LIMIT {
                report.warnings.push(format!(
                    "linearised Coulomb term questionable: q_s / r0 = {rel:.4e} >= {LINEARIZATION_LIMIT}"
                ));
            }
        }
        Err(e) => report.warnings.push(format!(
            "steady state unavailable at n = {}: {e}",
            params.n_charge
        )),
    }
    report
}
