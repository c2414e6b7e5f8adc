//! Locating the blow-up time of the `s'' = 6 s^2 + 6 t` transcendent.
//!
//! For any `tau > 0` before blow-up, `s' > 2 s^{3/2}` integrates to
//! `t_inf <= tau + s(tau)^{-1/2}`, so each state on the trajectory yields a
//! bracket `[tau, tau + s(tau)^{-1/2}]`. The brackets shrink like
//! `s^{-1/2}` as the guard on `s` is raised.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig, Termination, Trajectory};
use crate::quadrature::{self, QuadResult};
use crate::series::EquationForm;

/// Guards `10^{2k}` are always visited up to this value.
pub const LADDER_CAP: f64 = 1e12;

/// Upper bound on the blow-up time proved a priori; integration never needs
/// to go beyond it.
const HORIZON: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    /// Guard value that produced this bracket.
    pub guard: f64,
    pub s_at_tau: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, other: &Bracket) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupEstimate {
    pub lower: f64,
    pub upper: f64,
    pub tau_used: f64,
    pub s_at_tau: f64,
    /// Every bracket recorded up to and including the final one.
    pub history: Vec<Bracket>,
    /// False when the requested width could not be reached.
    pub width_reached: bool,
    /// Extrapolated pole location from the last two states, assuming
    /// `s ~ C / (T - t)^2`. Not a bound.
    pub pole_fit: Option<f64>,
    pub termination: Termination,
}

/// `(tau, tau + s_tau^{-1/2})` for a state `(tau, s_tau)` on the trajectory.
pub fn bracket_from_state(tau: f64, s_tau: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0) || !(s_tau > 0.0) {
        return Err(Error::Domain(format!("bracket needs tau > 0 and s > 0, got tau={tau}, s={s_tau}")));
    }
    Ok((tau, tau + s_tau.powf(-0.5)))
}

/// Blow-up estimate together with the trajectory it was read from.
pub fn run_blowup(config: &IntegratorConfig, width_tol: f64) -> Result<(BlowupEstimate, Trajectory)> {
    if !(width_tol > 0.0) {
        return Err(Error::Domain(format!("width_tol must be positive, got {width_tol}")));
    }
    let cap = LADDER_CAP.max(config.s_max);
    let run_cfg = IntegratorConfig { s_max: cap, t_max: config.t_max.max(HORIZON), ..*config };
    let traj = integrate(EquationForm::PiPlus, &run_cfg)?;

    let mut rungs = Vec::new();
    let mut guard = 100.0;
    while guard < cap {
        rungs.push(guard);
        guard *= 100.0;
    }
    rungs.push(cap);

    let mut all = Vec::new();
    let mut steps = traj.steps().iter().map(|s| s.end).filter(|st| st.t > 0.0).peekable();
    for &g in &rungs {
        while steps.peek().is_some_and(|st| st.s < g) {
            steps.next();
        }
        let Some(st) = steps.peek() else { break };
        let (lower, upper) = bracket_from_state(st.t, st.s)?;
        all.push(Bracket { lower, upper, guard: g, s_at_tau: st.s });
    }
    if all.is_empty() {
        return Err(Error::Domain(format!(
            "no blow-up guard reached (termination {:?} at t = {})",
            traj.termination(),
            traj.last_state().t
        )));
    }

    let chosen = all
        .iter()
        .position(|b| b.guard >= config.s_max.min(cap) && b.width() <= width_tol)
        .unwrap_or(all.len() - 1);
    let history: Vec<Bracket> = all[..=chosen].to_vec();
    let last = history[chosen];
    let estimate = BlowupEstimate {
        lower: last.lower,
        upper: last.upper,
        tau_used: last.lower,
        s_at_tau: last.s_at_tau,
        width_reached: last.width() <= width_tol,
        pole_fit: pole_fit(&traj, last.lower),
        termination: traj.termination(),
        history,
    };
    Ok((estimate, traj))
}

/// Integrate the blow-up form and tighten the bracket along the guard ladder
/// `10^2, 10^4, ...` until its width is at most `width_tol`.
///
/// Every guard up to `config.s_max` is visited even if the width is reached
/// earlier. If `width_tol` cannot be met by the top guard, the best bracket
/// is returned with `width_reached == false`.
pub fn estimate_blowup(config: &IntegratorConfig, width_tol: f64) -> Result<BlowupEstimate> {
    run_blowup(config, width_tol).map(|(e, _)| e)
}

fn pole_fit(traj: &Trajectory, tau: f64) -> Option<f64> {
    let pts: Vec<_> = traj.states().filter(|st| st.t > 0.0 && st.t <= tau && st.s > 0.0).collect();
    let [.., a, b] = pts.as_slice() else { return None };
    let (ua, ub) = (a.s.powf(-0.5), b.s.powf(-0.5));
    if ua <= ub {
        return None;
    }
    Some(b.t + ub * (b.t - a.t) / (ua - ub))
}

/// Range of `s (t_mid - t)^2` over stored states whose `s` is within the
/// last decade below `s_final`.
pub fn pole_shape_range(traj: &Trajectory, t_mid: f64, s_final: f64) -> Option<(f64, f64)> {
    let vals: Vec<f64> = traj
        .states()
        .filter(|st| st.s >= s_final / 10.0 && st.s <= s_final && st.t < t_mid)
        .map(|st| st.s * (t_mid - st.t).powi(2))
        .collect();
    if vals.is_empty() {
        return None;
    }
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some((lo, hi))
}

/// `sqrt(3/2) atan(sqrt(2/3)) + (2/3) ln(5/2)`, a closed-form lower bound on
/// the blow-up time.
pub fn analytic_lower_bound() -> f64 {
    1.5f64.sqrt() * (2.0f64 / 3.0).sqrt().atan() + 2.0 / 3.0 * 2.5f64.ln()
}

/// Minimum over `tau` of `tau + tau^{-3/2}`, attained at `tau = (3/2)^{2/5}`:
/// an a-priori upper bound on the blow-up time.
pub fn minimal_upper_bound() -> f64 {
    1.5f64.powf(0.4) + (2.0f64 / 3.0).powf(0.6)
}

/// Where [`minimal_upper_bound`] is attained.
pub fn minimal_upper_bound_tau() -> f64 {
    1.5f64.powf(0.4)
}

/// `\int_0^\infty ds / (2 s^{3/2} + 3 s^{2/3})`, the lower bound on the
/// blow-up time before it is estimated from below in closed form.
pub fn bounding_integral() -> f64 {
    bounding_integral_detailed().value
}

/// Quadrature details for [`bounding_integral`]. On `(0, 1)` the substitution
/// `s = r^3` gives `1 / ((2/3) r^{5/2} + 1)`; on `(1, inf)` the substitution
/// `s = r^2` followed by `r = 1/u` gives `2 / (2 + 3 u^{5/3})` on `(0, 1)`.
pub fn bounding_integral_detailed() -> QuadResult {
    let head = quadrature::integrate(|r: f64| 1.0 / (2.0 / 3.0 * r.powf(2.5) + 1.0), 0.0, 1.0, 1e-15, 1e-13);
    let tail = quadrature::integrate(|u: f64| 2.0 / (2.0 + 3.0 * u.powf(5.0 / 3.0)), 0.0, 1.0, 1e-15, 1e-13);
    QuadResult {
        value: head.value + tail.value,
        error_estimate: head.error_estimate + tail.error_estimate,
        evaluations: head.evaluations + tail.evaluations,
        converged: head.converged && tail.converged,
    }
}
