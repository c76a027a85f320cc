//! Air-to-ground and air-to-air link budgets.
//!
//! The A2G loss mixes LoS and NLoS excess losses by an elevation-dependent
//! logistic LoS probability; A2A links are free space. Coverage radii are the
//! horizontal (A2G) and direct (A2A) distances at which the loss reaches the
//! link budget.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SPEED_OF_LIGHT: f64 = 2.998e8;

const BISECTION_TOL_DB: f64 = 1e-7;
const BRACKET_START: f64 = 1e7;
const BRACKET_MAX: f64 = 1e15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadioError {
    #[error("invalid propagation parameter: {0}")]
    InvalidParams(String),
    #[error("distance must be finite and non-negative, got {0}")]
    InvalidDistance(f64),
    #[error("{link} budget {budget_db} dB is below the minimum achievable loss {min_loss_db} dB")]
    InfeasibleBudget { link: &'static str, budget_db: f64, min_loss_db: f64 },
}

/// Environment and radio constants. Powers are dBm, losses and SNR dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PropagationParams {
    pub a: f64,
    pub b: f64,
    pub eta_los: f64,
    pub eta_nlos: f64,
    /// Carrier frequency, Hz.
    pub fc: f64,
    /// UAV altitude, m.
    pub altitude_h: f64,
    pub noise_power: f64,
    pub snr_min: f64,
    pub p_ue: f64,
    pub p_uav: f64,
    pub light_speed: f64,
}

impl Default for PropagationParams {
    /// Urban environment at 2 km altitude and 2 GHz.
    fn default() -> Self {
        Self {
            a: 9.61,
            b: 0.16,
            eta_los: 1.0,
            eta_nlos: 20.0,
            fc: 2e9,
            altitude_h: 2000.0,
            noise_power: -90.0,
            snr_min: -4.0,
            p_ue: 20.0,
            p_uav: 110.0,
            light_speed: SPEED_OF_LIGHT,
        }
    }
}

impl PropagationParams {
    pub fn validate(&self) -> Result<(), RadioError> {
        let all = [
            self.a,
            self.b,
            self.eta_los,
            self.eta_nlos,
            self.fc,
            self.altitude_h,
            self.noise_power,
            self.snr_min,
            self.p_ue,
            self.p_uav,
            self.light_speed,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(RadioError::InvalidParams("non-finite value".into()));
        }
        if self.a <= 0.0 || self.b <= 0.0 {
            return Err(RadioError::InvalidParams("a and b must be positive".into()));
        }
        if self.fc <= 0.0 {
            return Err(RadioError::InvalidParams("carrier frequency must be positive".into()));
        }
        if self.altitude_h <= 0.0 {
            return Err(RadioError::InvalidParams("altitude must be positive".into()));
        }
        if (self.light_speed / SPEED_OF_LIGHT - 1.0).abs() > 1e-3 {
            return Err(RadioError::InvalidParams(format!("light speed {} out of range", self.light_speed)));
        }
        if self.p_ue > self.p_uav {
            return Err(RadioError::InvalidParams("UE power exceeds UAV power".into()));
        }
        Ok(())
    }

    /// `4 pi fc / c`, the free-space loss factor per meter.
    fn fspl_factor(&self) -> f64 {
        4.0 * PI * self.fc / self.light_speed
    }
}

fn check_distance(r: f64) -> Result<(), RadioError> {
    if !r.is_finite() || r < 0.0 {
        return Err(RadioError::InvalidDistance(r));
    }
    Ok(())
}

/// Elevation angle in degrees seen from horizontal distance `r`; 90 at `r = 0`.
fn elevation_deg(h: f64, r: f64) -> f64 {
    if r == 0.0 {
        90.0
    } else {
        (h / r).atan().to_degrees()
    }
}

/// LoS probability at horizontal distance `r`.
pub fn p_los(params: &PropagationParams, r: f64) -> Result<f64, RadioError> {
    params.validate()?;
    check_distance(r)?;
    let theta = elevation_deg(params.altitude_h, r);
    Ok(1.0 / (1.0 + params.a * (-params.b * (theta - params.a)).exp()))
}

fn free_space(params: &PropagationParams, d: f64) -> f64 {
    20.0 * (params.fspl_factor() * d).log10()
}

/// Mean A2G path loss (dB) at horizontal distance `r`.
pub fn a2g_path_loss(params: &PropagationParams, r: f64) -> Result<f64, RadioError> {
    let plos = p_los(params, r)?;
    let d = params.altitude_h.hypot(r);
    let fs = free_space(params, d);
    Ok(plos * (fs + params.eta_los) + (1.0 - plos) * (fs + params.eta_nlos))
}

/// Free-space A2A path loss (dB) at distance `dist`.
pub fn a2a_path_loss(params: &PropagationParams, dist: f64) -> Result<f64, RadioError> {
    params.validate()?;
    if !dist.is_finite() || dist <= 0.0 {
        return Err(RadioError::InvalidDistance(dist));
    }
    Ok(free_space(params, dist))
}

/// Largest tolerable path loss for a transmitter: `P_tx - snr_min - noise`.
pub fn budget_from_power(params: &PropagationParams, p_tx_dbm: f64) -> f64 {
    p_tx_dbm - params.snr_min - params.noise_power
}

/// How the A2G and A2A loss budgets are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum BudgetMode {
    /// Explicit budgets in dB.
    Fixed { a2g_db: f64, a2a_db: f64 },
    /// Derived from the UE and UAV transmit powers, SNR threshold and noise.
    FromPowers,
}

impl Default for BudgetMode {
    fn default() -> Self {
        BudgetMode::Fixed { a2g_db: 110.0, a2a_db: 110.0 }
    }
}

impl BudgetMode {
    /// `(a2g, a2a)` budgets in dB.
    pub fn budgets(&self, params: &PropagationParams) -> (f64, f64) {
        match *self {
            BudgetMode::Fixed { a2g_db, a2a_db } => (a2g_db, a2a_db),
            BudgetMode::FromPowers => (budget_from_power(params, params.p_ue), budget_from_power(params, params.p_uav)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRadii {
    /// Horizontal A2G coverage radius, m.
    pub r1_a2g: f64,
    /// A2A coverage radius, m.
    pub r2_a2a: f64,
    pub loss_budget_a2g: f64,
    pub loss_budget_a2a: f64,
}

/// Inverts a strictly increasing loss curve on `[lo, inf)`.
fn invert_increasing(
    loss: impl Fn(f64) -> Result<f64, RadioError>,
    lo: f64,
    budget: f64,
) -> Result<f64, RadioError> {
    let mut lo = lo;
    let mut hi = BRACKET_START;
    while loss(hi)? < budget {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_MAX {
            return Err(RadioError::InvalidParams(format!("budget {budget} dB not reached below {BRACKET_MAX} m")));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let l = loss(mid)?;
        if (l - budget).abs() <= BISECTION_TOL_DB {
            return Ok(mid);
        }
        if l < budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves the A2G and A2A loss curves for the distances that exhaust the
/// given budgets.
pub fn coverage_radii(params: &PropagationParams, budget_a2g: f64, budget_a2a: f64) -> Result<CoverageRadii, RadioError> {
    params.validate()?;
    let min_a2g = a2g_path_loss(params, 0.0)?;
    if !budget_a2g.is_finite() || budget_a2g <= min_a2g {
        return Err(RadioError::InfeasibleBudget { link: "A2G", budget_db: budget_a2g, min_loss_db: min_a2g });
    }
    if !budget_a2a.is_finite() {
        return Err(RadioError::InfeasibleBudget { link: "A2A", budget_db: budget_a2a, min_loss_db: f64::NEG_INFINITY });
    }
    let r1 = invert_increasing(|r| a2g_path_loss(params, r), 0.0, budget_a2g)?;
    // free-space loss hits 0 dB at c / (4 pi fc); start well below any budget
    let floor = 1e-9 / params.fspl_factor();
    let r2 = invert_increasing(|d| a2a_path_loss(params, d), floor, budget_a2a)?;
    Ok(CoverageRadii { r1_a2g: r1, r2_a2a: r2, loss_budget_a2g: budget_a2g, loss_budget_a2a: budget_a2a })
}

/// Coverage radii under a [`BudgetMode`].
pub fn coverage_radii_for(params: &PropagationParams, mode: &BudgetMode) -> Result<CoverageRadii, RadioError> {
    let (a2g, a2a) = mode.budgets(params);
    coverage_radii(params, a2g, a2a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn urban() -> PropagationParams {
        PropagationParams::default()
    }

    // Reference values below were evaluated independently at 30 significant
    // digits (mpmath) from the closed-form expressions.

    #[test]
    fn p_los_overhead_and_far_field() {
        let p = urban();
        assert!((p_los(&p, 0.0).unwrap() - 0.999975074537903).abs() < 1e-12);
        assert!((p_los(&p, 1e-6).unwrap() - 0.999975074537789).abs() < 1e-12);
        assert!((p_los(&p, 2214.0).unwrap() - 0.949523392551844).abs() < 1e-12);
        let limit = 1.0 / (1.0 + p.a * (p.a * p.b).exp());
        assert!((p_los(&p, 1e12).unwrap() - limit).abs() < 1e-9);
    }

    #[test]
    fn a2g_reference_points() {
        let p = urban();
        assert!((a2g_path_loss(&p, 2214.0).unwrap() - 109.921996539530).abs() < 1e-9);
        assert!((a2g_path_loss(&p, 0.0).unwrap() - 105.489238120536).abs() < 1e-9);
        assert!(a2g_path_loss(&p, 3000.0).unwrap() > a2g_path_loss(&p, 2214.0).unwrap());
    }

    #[test]
    fn a2a_reference_points() {
        let p = urban();
        assert!((a2a_path_loss(&p, 3774.0).unwrap() - 110.004202540055).abs() < 1e-9);
        let unit = p.light_speed / (4.0 * PI * p.fc);
        assert!(a2a_path_loss(&p, unit).unwrap().abs() < 1e-9);
        let d = a2a_path_loss(&p, 2000.0).unwrap();
        let d2 = a2a_path_loss(&p, 4000.0).unwrap();
        assert!((d2 - d - 20.0 * 2f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn invalid_inputs() {
        let p = urban();
        assert!(matches!(p_los(&p, -1.0), Err(RadioError::InvalidDistance(_))));
        assert!(matches!(p_los(&p, f64::NAN), Err(RadioError::InvalidDistance(_))));
        assert!(matches!(a2a_path_loss(&p, 0.0), Err(RadioError::InvalidDistance(_))));
        let bad = PropagationParams { fc: 0.0, ..p };
        assert!(matches!(a2g_path_loss(&bad, 10.0), Err(RadioError::InvalidParams(_))));
        let bad = PropagationParams { p_ue: 200.0, ..p };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn radii_reproduce_published_ranges() {
        let r = coverage_radii(&urban(), 110.0, 110.0).unwrap();
        assert!((r.r1_a2g - 2233.21546434828).abs() < 1e-3);
        assert!((r.r2_a2a - 3772.17444723130).abs() < 1e-3);
        assert!((r.r1_a2g / 2214.0 - 1.0).abs() < 0.02);
        assert!((r.r2_a2a / 3774.0 - 1.0).abs() < 0.005);
        assert!(r.r2_a2a >= r.r1_a2g);
    }

    #[test]
    fn infeasible_budget_is_an_error() {
        let err = coverage_radii(&urban(), 100.0, 110.0).unwrap_err();
        assert!(matches!(err, RadioError::InfeasibleBudget { link: "A2G", .. }));
    }

    #[test]
    fn power_derived_budgets() {
        let p = urban();
        let (a2g, a2a) = BudgetMode::FromPowers.budgets(&p);
        assert_eq!(a2g, 114.0);
        assert_eq!(a2a, 204.0);
        let r = coverage_radii_for(&p, &BudgetMode::FromPowers).unwrap();
        assert!((r.r1_a2g - 3030.03748228906).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn a2g_strictly_increasing(r1 in 0.0..50_000.0f64, dr in 1e-3..50_000.0f64) {
            let p = urban();
            prop_assert!(a2g_path_loss(&p, r1 + dr).unwrap() > a2g_path_loss(&p, r1).unwrap());
        }

        #[test]
        fn p_los_in_unit_interval_and_decreasing(r1 in 0.0..1e6f64, dr in 1e-2..1e6f64) {
            let p = urban();
            let a = p_los(&p, r1).unwrap();
            let b = p_los(&p, r1 + dr).unwrap();
            prop_assert!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0);
            prop_assert!(b < a);
        }

        #[test]
        fn radii_invert_losses(b1 in 105.6..160.0f64, b2 in 40.0..200.0f64) {
            let p = urban();
            let r = coverage_radii(&p, b1, b2).unwrap();
            prop_assert!((a2g_path_loss(&p, r.r1_a2g).unwrap() - b1).abs() <= 1e-6);
            prop_assert!((a2a_path_loss(&p, r.r2_a2a).unwrap() - b2).abs() <= 1e-6);
        }

        #[test]
        fn a2a_doubling_law(d in 1.0..1e6f64) {
            let p = urban();
            let diff = a2a_path_loss(&p, 2.0 * d).unwrap() - a2a_path_loss(&p, d).unwrap();
            prop_assert!((diff - 20.0 * 2f64.log10()).abs() <= 1e-9);
        }
    }
}
