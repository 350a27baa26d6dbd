//! Self-consistent steady state of the driven cavity and charged resonator.
//!
//! Force balance `m omega_m^2 q = chi |c_s|^2 + n eta` together with
//! `|c_s|^2 = eps_l^2 / (kappa^2 + (Delta_c - chi q / hbar)^2)` is a cubic in q.
//! Its SI coefficients span tens of decades, so roots are computed in the
//! dimensionless variable `u = q chi / (hbar kappa)` and then Newton-polished.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{OmitError, Result};
use crate::params::DerivedParams;

/// `a q^3 + b q^2 + f q + d = 0` in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicCoefficients {
    pub a: f64,
    pub b: f64,
    pub f: f64,
    pub d: f64,
}

impl CubicCoefficients {
    pub fn eval(&self, q: f64) -> f64 {
        ((self.a * q + self.b) * q + self.f) * q + self.d
    }

    /// `|p(q)|` normalised by the sum of term magnitudes at `max(|q|, q_scale)`.
    pub fn relative_residual(&self, q: f64, q_scale: f64) -> f64 {
        let qb = q.abs().max(q_scale);
        let denom =
            self.a.abs() * qb.powi(3) + self.b.abs() * qb * qb + self.f.abs() * qb + self.d.abs();
        if denom == 0.0 {
            return 0.0;
        }
        self.eval(q).abs() / denom
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyState {
    /// Charge number the state was solved at (possibly non-integer).
    pub n: f64,
    /// Static resonator displacement (m).
    pub q_s: f64,
    /// Static momentum, identically zero.
    pub p_s: f64,
    pub c_s: Complex64,
    /// Intracavity photon number `|c_s|^2`.
    pub n_photon: f64,
    /// Effective detuning `Delta_c - chi q_s / hbar` (rad/s).
    pub delta_eff: f64,
    /// Optomechanical rate `chi^2 |c_s|^2 / (2 m hbar omega_m)` ((rad/s)^2).
    pub beta: f64,
    /// Every real root of the cubic, ascending (m).
    pub all_real_roots: Vec<f64>,
    /// True when the cubic has three distinct real roots.
    pub multistable: bool,
}

pub fn cubic_coefficients(dp: &DerivedParams, n: f64) -> CubicCoefficients {
    let p = &dp.params;
    let k = dp.stiffness();
    let g = dp.chi_over_hbar();
    let neta = n * dp.force_per_charge();
    let dc = dp.delta_c;
    let kk = p.kappa * p.kappa;
    CubicCoefficients {
        a: k * g * g,
        b: -2.0 * k * g * dc - neta * g * g,
        f: k * (kk + dc * dc) + 2.0 * neta * dc * g,
        d: -neta * (kk + dc * dc) - dp.chi * dp.eps_l * dp.eps_l,
    }
}

/// Length unit of the scaled cubic, `hbar kappa / chi` (m).
pub fn length_scale(dp: &DerivedParams) -> f64 {
    dp.params.kappa / dp.chi_over_hbar()
}

/// Monic cubic in `u = q / length_scale`, built from dimensionless groups.
#[derive(Debug, Clone, Copy)]
struct ScaledCubic {
    b: f64,
    f: f64,
    d: f64,
}

impl ScaledCubic {
    fn new(dp: &DerivedParams, n: f64) -> Self {
        let p = &dp.params;
        let k = dp.stiffness();
        let g = dp.chi_over_hbar();
        let dc = dp.delta_c / p.kappa;
        let coulomb = n * dp.force_per_charge() * g / (k * p.kappa);
        let pump = dp.chi * dp.eps_l * dp.eps_l * g / (k * p.kappa.powi(3));
        Self {
            b: -2.0 * dc - coulomb,
            f: 1.0 + dc * dc + 2.0 * coulomb * dc,
            d: -coulomb * (1.0 + dc * dc) - pump,
        }
    }

    fn eval(&self, u: f64) -> f64 {
        ((u + self.b) * u + self.f) * u + self.d
    }

    fn deriv(&self, u: f64) -> f64 {
        (3.0 * u + 2.0 * self.b) * u + self.f
    }

    fn polish(&self, mut u: f64) -> f64 {
        for _ in 0..60 {
            let dv = self.deriv(u);
            if dv == 0.0 || !dv.is_finite() {
                break;
            }
            let step = self.eval(u) / dv;
            if !step.is_finite() {
                break;
            }
            u -= step;
            if step.abs() <= 1e-15 * u.abs().max(1e-300) {
                break;
            }
        }
        u
    }

    /// Real roots, ascending, distinct to relative 1e-9.
    fn real_roots(&self) -> Vec<f64> {
        let mut roots = if self.d == 0.0 {
            let mut r = vec![0.0];
            r.extend(real_quadratic_roots(self.b, self.f));
            r
        } else {
            depressed_cubic_roots(self.b, self.f, self.d)
                .into_iter()
                .map(|u| self.polish(u))
                .collect()
        };
        roots.retain(|u| u.is_finite());
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-12));
        roots
    }
}

fn real_quadratic_roots(b: f64, c: f64) -> Vec<f64> {
    // u^2 + b u + c = 0
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q, c / q]
}

/// Closed-form seeds for `u^3 + b u^2 + f u + d = 0`.
fn depressed_cubic_roots(b: f64, f: f64, d: f64) -> Vec<f64> {
    let shift = b / 3.0;
    let p = f - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * f / 3.0 + d;
    let half_q = 0.5 * q;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    let ts: Vec<f64> = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc > 0.0 {
        let a = -half_q.signum() * (half_q.abs() + disc.sqrt()).cbrt();
        let t = if a == 0.0 { 0.0 } else { a - third_p / a };
        vec![t]
    } else {
        let r = (-third_p).sqrt();
        let cos_arg = (-half_q / (r * r * r)).clamp(-1.0, 1.0);
        let phi = cos_arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        (0..3)
            .map(|k| 2.0 * r * (phi - tau * k as f64).cos())
            .collect()
    };
    ts.into_iter().map(|t| t - shift).collect()
}

/// All real roots of the steady-state cubic at (real) charge number `n`, ascending (m).
pub fn real_roots(dp: &DerivedParams, n: f64) -> Vec<f64> {
    let s = length_scale(dp);
    ScaledCubic::new(dp, n)
        .real_roots()
        .into_iter()
        .map(|u| u * s)
        .collect()
}

/// Real roots inside `[0, r0)`.
pub fn physical_roots(dp: &DerivedParams, n: f64) -> Vec<f64> {
    real_roots(dp, n)
        .into_iter()
        .filter(|&q| q >= 0.0 && q < dp.params.r0)
        .collect()
}

/// Builds the full steady state around a given displacement.
pub fn state_at_displacement(dp: &DerivedParams, n: f64, q_s: f64) -> SteadyState {
    let p = &dp.params;
    let delta_eff = dp.delta_c - dp.chi_over_hbar() * q_s;
    let n_photon = dp.eps_l * dp.eps_l / (p.kappa * p.kappa + delta_eff * delta_eff);
    let c_s = Complex64::new(dp.eps_l, 0.0) / Complex64::new(p.kappa, delta_eff);
    let beta = dp.chi * dp.chi * n_photon / (2.0 * p.m_eff * dp.consts.hbar * p.omega_m);
    SteadyState {
        n,
        q_s,
        p_s: 0.0,
        c_s,
        n_photon,
        delta_eff,
        beta,
        all_real_roots: vec![q_s],
        multistable: false,
    }
}

/// Exact steady state at a real-valued charge number.
///
/// Among physical roots the one with the fewest intracavity photons is kept
/// (lower branch of the bistable response).
pub fn solve_steady_state_relaxed(dp: &DerivedParams, n: f64) -> Result<SteadyState> {
    if !(n.is_finite() && n >= 0.0) {
        return Err(OmitError::InvalidArgument(format!(
            "charge number must be finite and >= 0 (got {n})"
        )));
    }
    let roots = real_roots(dp, n);
    let multistable = roots.len() == 3;
    let best = roots
        .iter()
        .copied()
        .filter(|&q| q >= 0.0 && q < dp.params.r0)
        .map(|q| state_at_displacement(dp, n, q))
        .min_by(|x, y| x.n_photon.partial_cmp(&y.n_photon).unwrap());
    match best {
        Some(mut ss) => {
            ss.all_real_roots = roots;
            ss.multistable = multistable;
            Ok(ss)
        }
        None => Err(OmitError::SteadyStateDomain { n, roots }),
    }
}

pub fn solve_steady_state(dp: &DerivedParams, n: u32) -> Result<SteadyState> {
    solve_steady_state_relaxed(dp, n as f64)
}

/// Steady state when the Coulomb force dominates radiation pressure.
///
/// For n = 0 the exact zero-charge photon number is used; for n >= 1 the
/// displacement is the static Coulomb deflection `n eta / (m omega_m^2)`.
pub fn approx_steady_state(dp: &DerivedParams, n: u32) -> Result<SteadyState> {
    let q_s = if n == 0 {
        let exact = solve_steady_state(dp, 0)?;
        dp.chi * exact.n_photon / dp.stiffness()
    } else {
        n as f64 * dp.force_per_charge() / dp.stiffness()
    };
    Ok(state_at_displacement(dp, n as f64, q_s))
}

/// Relative violation of the force balance `m omega_m^2 q = chi |c|^2 + n eta`.
pub fn force_balance_residual(dp: &DerivedParams, ss: &SteadyState) -> f64 {
    let spring = dp.stiffness() * ss.q_s;
    let radiation = dp.chi * ss.n_photon;
    let coulomb = ss.n * dp.force_per_charge();
    let scale = spring.abs().max(radiation.abs()).max(coulomb.abs());
    if scale == 0.0 {
        return 0.0;
    }
    (spring - radiation - coulomb).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::params::{derive, SystemParams};
    use proptest::prelude::*;

    fn fig2() -> DerivedParams {
        derive(&SystemParams::fig2(), &PhysicalConstants::default()).unwrap()
    }

    /// Plain fixed-point iteration of the force balance from q = 0; the map
    /// is a contraction for the reference parameters.
    fn fixed_point_q(dp: &DerivedParams, n: f64) -> f64 {
        let p = &dp.params;
        let g = dp.chi / dp.consts.hbar;
        let k = p.m_eff * p.omega_m * p.omega_m;
        let mut q = 0.0f64;
        for _ in 0..200_000 {
            let delta = dp.delta_c - g * q;
            let photons = dp.eps_l * dp.eps_l / (p.kappa * p.kappa + delta * delta);
            let next = (dp.chi * photons + n * dp.eta) / k;
            if (next - q).abs() <= 1e-15 * next.abs() {
                return next;
            }
            q = next;
        }
        q
    }

    #[test]
    fn coefficient_signs_at_zero_charge() {
        let dp = fig2();
        let c = cubic_coefficients(&dp, 0.0);
        assert!(c.a > 0.0);
        assert!(c.d < 0.0);
        assert_eq!(c.d, -dp.chi * dp.eps_l * dp.eps_l);
        assert!(!physical_roots(&dp, 0.0).is_empty());
        assert!(real_roots(&dp, 0.0).iter().any(|&q| q > 0.0));
    }

    #[test]
    fn coefficients_shift_linearly_in_n() {
        let dp = fig2();
        let c0 = cubic_coefficients(&dp, 0.0);
        let c10 = cubic_coefficients(&dp, 10.0);
        let c20 = cubic_coefficients(&dp, 20.0);
        assert_eq!(c0.a, c10.a);
        for (x0, x1, x2) in [
            (c0.b, c10.b, c20.b),
            (c0.f, c10.f, c20.f),
            (c0.d, c10.d, c20.d),
        ] {
            let d1 = x1 - x0;
            let d2 = x2 - x1;
            assert!((d2 - d1).abs() <= 1e-9 * d1.abs(), "{d1} vs {d2}");
        }
    }

    #[test]
    fn weak_coupling_limit_degenerates() {
        let base = fig2();
        let p = SystemParams {
            cavity_length: 25e9,
            delta_c_policy: crate::params::DetuningPolicy::Explicit(base.delta_c),
            ..SystemParams::fig2()
        };
        let dp = derive(&p, &PhysicalConstants::default()).unwrap();
        let c = cubic_coefficients(&dp, 0.0);
        let c_ref = cubic_coefficients(&base, 0.0);
        // d = -chi eps_l^2 shrinks with chi; f keeps only the detuning terms
        assert!((c.d / c_ref.d - 1e-12).abs() < 1e-24);
        let k = dp.stiffness();
        assert_eq!(c.f, k * (p.kappa * p.kappa + dp.delta_c * dp.delta_c));
        assert_eq!(c.b, -2.0 * k * dp.chi_over_hbar() * dp.delta_c);
    }

    #[test]
    fn zero_charge_matches_fixed_point() {
        let dp = fig2();
        let ss = solve_steady_state(&dp, 0).unwrap();
        let oracle = fixed_point_q(&dp, 0.0);
        assert!((ss.q_s - oracle).abs() / oracle < 1e-9);
        assert!((ss.q_s - 5.7e-13).abs() / 5.7e-13 < 0.02);
        assert!((ss.n_photon - 3.9e8).abs() / 3.9e8 < 0.01);
        assert_eq!(ss.p_s, 0.0);
        assert!(!ss.multistable);
    }

    #[test]
    fn ten_charges_near_coulomb_deflection() {
        let dp = fig2();
        let ss = solve_steady_state(&dp, 10).unwrap();
        let oracle = fixed_point_q(&dp, 10.0);
        assert!((ss.q_s - oracle).abs() / oracle < 1e-9);
        let coulomb = 10.0 * dp.eta / dp.stiffness();
        assert!((coulomb - 1.72e-11).abs() / 1.72e-11 < 0.01);
        assert!((ss.q_s - coulomb).abs() / ss.q_s < 0.05);
    }

    #[test]
    fn undriven_cavity_rests() {
        let p = SystemParams {
            p_pump: 0.0,
            ..SystemParams::fig2()
        };
        let dp = derive(&p, &PhysicalConstants::default()).unwrap();
        let ss = solve_steady_state(&dp, 0).unwrap();
        assert_eq!(ss.q_s, 0.0);
        assert_eq!(ss.c_s, Complex64::new(0.0, 0.0));
        assert_eq!(ss.beta, 0.0);
    }

    #[test]
    fn approx_matches_closed_forms() {
        let dp = fig2();
        let a20 = approx_steady_state(&dp, 20).unwrap();
        assert!((a20.q_s - 3.44e-11).abs() / 3.44e-11 < 0.01);
        assert_eq!(a20.q_s, 20.0 * dp.eta / dp.stiffness());
        assert!(!a20.multistable);

        let a0 = approx_steady_state(&dp, 0).unwrap();
        let e0 = solve_steady_state(&dp, 0).unwrap();
        assert!((a0.n_photon - e0.n_photon).abs() / e0.n_photon < 1e-12);
        assert!((a0.q_s - e0.q_s).abs() / e0.q_s < 1e-12);
    }

    #[test]
    fn approx_error_bounded_by_neglected_share() {
        let dp = fig2();
        let exact = solve_steady_state(&dp, 1).unwrap();
        let approx = approx_steady_state(&dp, 1).unwrap();
        let rel = (exact.q_s - approx.q_s).abs() / exact.q_s;
        let share = dp.chi * exact.n_photon / dp.eta;
        assert!(rel <= share * (1.0 + 1e-9), "{rel} > {share}");
    }

    #[test]
    fn approx_displacement_independent_of_pump() {
        let c = PhysicalConstants::default();
        let base = fig2();
        let pumped = derive(
            &SystemParams {
                p_pump: 4e-3,
                delta_c_policy: crate::params::DetuningPolicy::Explicit(base.delta_c),
                ..SystemParams::fig2()
            },
            &c,
        )
        .unwrap();
        assert!((pumped.eps_l - 2.0 * base.eps_l).abs() < 1e-9 * base.eps_l);
        for n in [5, 30, 60] {
            let a = approx_steady_state(&base, n).unwrap();
            let b = approx_steady_state(&pumped, n).unwrap();
            assert_eq!(a.q_s, b.q_s);
        }
    }

    #[test]
    fn sweep_structure_on_reference_set() {
        let dp = fig2();
        let exact: Vec<_> = (0..=80)
            .map(|n| solve_steady_state(&dp, n).unwrap())
            .collect();
        for w in exact.windows(2) {
            assert!(w[1].q_s > w[0].q_s);
        }
        // single interior maximum of the photon number where Delta crosses zero
        let photons: Vec<f64> = exact.iter().map(|s| s.n_photon).collect();
        let argmax = (0..photons.len())
            .max_by(|&i, &j| photons[i].partial_cmp(&photons[j]).unwrap())
            .unwrap();
        assert!(argmax > 0 && argmax < 80);
        assert!(photons[..=argmax].windows(2).all(|w| w[1] > w[0]));
        assert!(photons[argmax..].windows(2).all(|w| w[1] < w[0]));
        assert!(exact[argmax - 1].delta_eff * exact[argmax + 1].delta_eff < 0.0);
    }

    #[test]
    fn bistable_set_reports_three_roots_and_takes_lower_branch() {
        let p = SystemParams {
            m_eff: 14.5e-12,
            u_bias: 0.1,
            ..SystemParams::fig2()
        };
        let dp = derive(&p, &PhysicalConstants::default()).unwrap();
        let ss = (0..=40)
            .map(|n| solve_steady_state(&dp, n).unwrap())
            .find(|s| s.multistable)
            .expect("a bistable point");
        assert_eq!(ss.all_real_roots.len(), 3);
        for &q in &ss.all_real_roots {
            let other = state_at_displacement(&dp, ss.n, q);
            if q >= 0.0 && q < p.r0 {
                assert!(ss.n_photon <= other.n_photon);
            }
        }
    }

    #[test]
    fn no_physical_root_is_domain_error() {
        let p = SystemParams {
            r0: 1e-13,
            ..SystemParams::fig2()
        };
        let dp = derive(
            &SystemParams {
                delta_c_policy: crate::params::DetuningPolicy::Explicit(6e6),
                ..p
            },
            &PhysicalConstants::default(),
        )
        .unwrap();
        assert!(matches!(
            solve_steady_state(&dp, 3),
            Err(OmitError::SteadyStateDomain { .. })
        ));
    }

    #[test]
    fn depressed_cubic_known_roots() {
        // (u - 1)(u - 2)(u - 3) = u^3 - 6u^2 + 11u - 6
        let c = ScaledCubic {
            b: -6.0,
            f: 11.0,
            d: -6.0,
        };
        let r = c.real_roots();
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        // (u - 2)(u^2 + 1)
        let c = ScaledCubic {
            b: -2.0,
            f: 1.0,
            d: -2.0,
        };
        let r = c.real_roots();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn steady_state_invariants(
            n in 0u32..120,
            p_mw in 0.01f64..20.0,
            u in 0.0f64..2.0,
            mass_ng in 1.0f64..2000.0,
        ) {
            let params = SystemParams {
                p_pump: p_mw * 1e-3,
                u_bias: u,
                m_eff: mass_ng * 1e-12,
                ..SystemParams::fig2()
            };
            let dp = derive(&params, &PhysicalConstants::default()).unwrap();
            let coeffs = cubic_coefficients(&dp, n as f64);
            let scale = length_scale(&dp);
            for q in real_roots(&dp, n as f64) {
                prop_assert!(coeffs.relative_residual(q, scale) < 1e-10);
            }
            if let Ok(ss) = solve_steady_state(&dp, n) {
                prop_assert!(force_balance_residual(&dp, &ss) < 1e-10);
                let expect = dp.eps_l.powi(2) / (params.kappa.powi(2) + ss.delta_eff.powi(2));
                prop_assert!((ss.n_photon - expect).abs() <= 1e-12 * expect.max(1e-300));
                prop_assert_eq!(ss.p_s, 0.0);
                prop_assert_eq!(ss.multistable, ss.all_real_roots.len() == 3);
            }
        }
    }
}
