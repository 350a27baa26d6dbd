//! Electrometer logic: window width to charge number.
//!
//! The calibration curve is the window width `2 x_plus(beta(n))` evaluated on
//! the exact steady state with `n` relaxed to a real number. Inversion
//! bisects that curve on each monotone stretch and reports every preimage.

use serde::Serialize;

use crate::error::{OmitError, Result};
use crate::params::{coulomb_force_per_charge, DerivedParams};
use crate::response::tuning_points;
use crate::steady_state::solve_steady_state_relaxed;

/// Window width `x_plus - x_minus` (rad/s) at real-valued charge number `n`.
pub fn width_of_n(dp: &DerivedParams, n: f64) -> Result<f64> {
    let ss = solve_steady_state_relaxed(dp, n)?;
    let p = &dp.params;
    Ok(tuning_points(p.kappa, p.gamma_m, ss.beta)?.width)
}

/// Width change when one more charge is added at `n` (rad/s).
pub fn width_step_per_charge(dp: &DerivedParams, n: u32) -> Result<f64> {
    Ok(width_of_n(dp, n as f64 + 1.0)? - width_of_n(dp, n as f64)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Region {
    pub n_start: u32,
    pub n_end: u32,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    MonotoneIncreasing,
    MonotoneDecreasing,
    Humped,
    Other,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::MonotoneIncreasing => "monotone_increasing",
            Shape::MonotoneDecreasing => "monotone_decreasing",
            Shape::Humped => "humped",
            Shape::Other => "other",
        }
    }
}

/// Consecutive regions share their boundary charge number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub regions: Vec<Region>,
    pub shape: Shape,
}

/// Splits `values[i]` (taken at `n_min + i`) into runs of constant slope sign.
/// Flat steps join the run they follow.
pub fn classify(n_min: u32, values: &[f64]) -> MonotonicityReport {
    let mut regions: Vec<Region> = Vec::new();
    for (i, w) in values.windows(2).enumerate() {
        let n = n_min + i as u32;
        let dir = match w[1].partial_cmp(&w[0]) {
            Some(std::cmp::Ordering::Less) => Direction::Decreasing,
            Some(std::cmp::Ordering::Greater) => Direction::Increasing,
            _ => regions
                .last()
                .map(|r| r.direction)
                .unwrap_or(Direction::Increasing),
        };
        match regions.last_mut() {
            Some(r) if r.direction == dir => r.n_end = n + 1,
            _ => regions.push(Region {
                n_start: n,
                n_end: n + 1,
                direction: dir,
            }),
        }
    }
    let shape = match regions.as_slice() {
        [r] if r.direction == Direction::Increasing => Shape::MonotoneIncreasing,
        [_] => Shape::MonotoneDecreasing,
        [a, b] if a.direction == Direction::Increasing && b.direction == Direction::Decreasing => {
            Shape::Humped
        }
        _ => Shape::Other,
    };
    MonotonicityReport { regions, shape }
}

fn check_bracket(n_min: u32, n_max: u32) -> Result<()> {
    if n_min >= n_max {
        return Err(OmitError::InvalidArgument(format!(
            "need n_min < n_max (got {n_min}, {n_max})"
        )));
    }
    Ok(())
}

fn integer_widths<F>(width: &F, n_min: u32, n_max: u32) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    (n_min..=n_max).map(|n| width(n as f64)).collect()
}

pub fn monotonicity_scan(dp: &DerivedParams, n_min: u32, n_max: u32) -> Result<MonotonicityReport> {
    check_bracket(n_min, n_max)?;
    let widths = integer_widths(&|n| width_of_n(dp, n), n_min, n_max)?;
    Ok(classify(n_min, &widths))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub n_hat: f64,
    pub n_int: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeEstimate {
    /// Continuous estimate of the first preimage.
    pub n_hat: f64,
    pub n_int: u32,
    /// `width(n_int) - width_measured` (rad/s).
    pub residual: f64,
    pub bracket: (u32, u32),
    pub ambiguous: bool,
    /// Every preimage in bracket order.
    pub candidates: Vec<Candidate>,
}

/// Relative width tolerance of the bisection.
pub const WIDTH_TOLERANCE: f64 = 1e-6;

pub fn estimate_charge(
    dp: &DerivedParams,
    width_measured: f64,
    n_min: u32,
    n_max: u32,
) -> Result<ChargeEstimate> {
    estimate_charge_with(|n| width_of_n(dp, n), width_measured, n_min, n_max)
}

/// Inversion against an arbitrary calibration curve. `width` is only ever
/// evaluated inside `[n_min, n_max]`.
pub fn estimate_charge_with<F>(
    width: F,
    width_measured: f64,
    n_min: u32,
    n_max: u32,
) -> Result<ChargeEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    check_bracket(n_min, n_max)?;
    if !(width_measured.is_finite() && width_measured >= 0.0) {
        return Err(OmitError::InvalidArgument(format!(
            "measured width must be finite and >= 0 (got {width_measured})"
        )));
    }
    let widths = integer_widths(&width, n_min, n_max)?;
    let report = classify(n_min, &widths);
    let tol = WIDTH_TOLERANCE * width_measured.max(f64::MIN_POSITIVE);

    let mut hats: Vec<f64> = Vec::new();
    for r in &report.regions {
        let w_start = widths[(r.n_start - n_min) as usize];
        let w_end = widths[(r.n_end - n_min) as usize];
        let (lo, hi) = (w_start.min(w_end), w_start.max(w_end));
        if width_measured < lo - tol || width_measured > hi + tol {
            continue;
        }
        let n_hat = if (w_start - width_measured).abs() <= tol {
            r.n_start as f64
        } else if (w_end - width_measured).abs() <= tol {
            r.n_end as f64
        } else {
            bisect(&width, width_measured, tol, r)?
        };
        if hats.last().is_none_or(|&prev| (n_hat - prev).abs() > 1e-6) {
            hats.push(n_hat);
        }
    }

    if hats.is_empty() {
        let min = widths.iter().copied().fold(f64::INFINITY, f64::min);
        let max = widths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return Err(OmitError::OutOfRange {
            width: width_measured,
            min,
            max,
        });
    }

    let mut candidates: Vec<Candidate> = Vec::new();
    for n_hat in hats {
        let n_int = n_hat.round() as u32;
        if candidates.last().is_none_or(|c| c.n_int != n_int) {
            candidates.push(Candidate { n_hat, n_int });
        }
    }
    let first = candidates[0];
    let residual = width(first.n_int as f64)? - width_measured;
    Ok(ChargeEstimate {
        n_hat: first.n_hat,
        n_int: first.n_int,
        residual,
        bracket: (n_min, n_max),
        ambiguous: candidates.len() > 1,
        candidates,
    })
}

fn bisect<F>(width: &F, target: f64, tol: f64, region: &Region) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let sign = match region.direction {
        Direction::Increasing => 1.0,
        Direction::Decreasing => -1.0,
    };
    let (mut lo, mut hi) = (region.n_start as f64, region.n_end as f64);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let g = width(mid)? - target;
        if g.abs() <= tol {
            return Ok(mid);
        }
        if sign * g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    // a jump in the curve (bistable branch switch) ends here
    Ok(mid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionMetrics {
    /// Coulomb force of a single elementary charge on the resonator (N).
    pub min_force: f64,
    /// `1 / (0.1 r0)^2` with r0 in cm (cm^-2).
    pub surface_density_sensitivity: f64,
}

pub fn detection_metrics(dp: &DerivedParams) -> DetectionMetrics {
    let r0_cm = dp.params.r0 * 100.0;
    let patch = 0.1 * r0_cm;
    DetectionMetrics {
        min_force: coulomb_force_per_charge(&dp.consts, dp.q_mr, dp.params.r0),
        surface_density_sensitivity: 1.0 / (patch * patch),
    }
}
