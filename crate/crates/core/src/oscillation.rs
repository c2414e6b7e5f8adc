//! Behaviour of the `s'' = 6 t - 6 s^2` transcendent on `[0, inf)`.
//!
//! The solution stays positive, stays below `sqrt(3 t)`, and oscillates
//! about `sqrt(t)`. Writing `f = s - sqrt(t)` gives
//! `f'' = phi - Phi f` with `phi = 1 / (4 t^{3/2})` and
//! `Phi = 6 (sqrt(t) + s)`, and comparing `f` with `sin(sqrt(lambda) t)`
//! bounds the spacing of consecutive crossings.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{State, Trajectory};
use crate::quadrature;
use crate::series::EquationForm;

/// Crossing search starts here; `s - sqrt(t)` has infinite slope at 0.
pub const CROSSING_EPS: f64 = 1e-6;

/// Dense samples per accepted step for envelope and sign scans.
pub const SAMPLES_PER_STEP: usize = 64;

/// `pi / sqrt(6)`: an interval below `sqrt` starting at `a` is shorter than
/// this times `a^{-1/4}`.
pub fn below_gap_constant() -> f64 {
    PI / 6f64.sqrt()
}

/// `pi / sqrt(6 (1 + sqrt 3))`: an interval above `sqrt` ending at `b` is
/// longer than this times `b^{-1/4}`.
pub fn above_gap_constant() -> f64 {
    PI / (6.0 * (1.0 + 3f64.sqrt())).sqrt()
}

/// Upper end of the window where `t^3 - (3/28) t^8` is positive.
pub fn squeeze_window() -> f64 {
    (28.0f64 / 3.0).powf(0.2)
}

/// `(5/4)^{2/5}`, the a-priori upper bound on the first crossing.
pub fn first_crossing_upper_bound() -> f64 {
    1.25f64.powf(0.4)
}

pub fn squeeze_lower(t: f64) -> f64 {
    t.powi(3) - 3.0 / 28.0 * t.powi(8)
}

pub fn squeeze_upper(t: f64) -> f64 {
    t.powi(3)
}

/// `t^3 - (3/28) t^8 + (3/364) t^13 - (3/13328) t^18`
pub fn refined_squeeze_upper(t: f64) -> f64 {
    t.powi(3) - 3.0 / 28.0 * t.powi(8) + 3.0 / 364.0 * t.powi(13) - 3.0 / 13328.0 * t.powi(18)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upward,
    Downward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Upward => "upward",
            Direction::Downward => "downward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub index: usize,
    pub t: f64,
    pub direction: Direction,
    pub refinement_width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapBoundKind {
    /// `b - a < pi 6^{-1/2} a^{-1/4}` on intervals below `sqrt`.
    BelowMaxGap,
    /// `b - a > pi (6(1 + sqrt 3))^{-1/2} b^{-1/4}` on intervals above `sqrt`.
    AboveMinGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub a: f64,
    pub b: f64,
    pub side: Side,
    pub gap: f64,
    pub bound_value: f64,
    pub bound_kind: GapBoundKind,
    /// Positive when the inequality holds.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeStats {
    pub window: (f64, f64),
    /// Largest `s / sqrt(t)` seen.
    pub max_ratio: f64,
    /// Largest `|s - sqrt(t)| t^{1/8}` seen.
    pub max_scaled_dev: f64,
    pub samples: usize,
}

/// Summary of one inequality over a probe set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityAudit {
    pub name: String,
    pub probes: usize,
    pub violations: usize,
    /// Smallest margin seen (negative on violation); `None` if no probe applied.
    pub worst_margin: Option<f64>,
    pub worst_t: Option<f64>,
}

impl InequalityAudit {
    fn new(name: &str) -> Self {
        InequalityAudit { name: name.to_string(), probes: 0, violations: 0, worst_margin: None, worst_t: None }
    }

    fn record(&mut self, t: f64, margin: f64) {
        self.probes += 1;
        if !(margin > 0.0) {
            self.violations += 1;
        }
        if self.worst_margin.is_none_or(|w| margin < w || margin.is_nan()) {
            self.worst_margin = Some(margin);
            self.worst_t = Some(t);
        }
    }

    pub fn passed(&self) -> bool {
        self.probes > 0 && self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsAudit {
    /// `s > 0`
    pub positivity: InequalityAudit,
    /// `|s| < sqrt(3 t)`
    pub sqrt3t: InequalityAudit,
    /// `s > t^3 - (3/28) t^8`, probes below [`squeeze_window`]
    pub squeeze_lower: InequalityAudit,
    /// `s < t^3`, probes below [`squeeze_window`]
    pub squeeze_upper: InequalityAudit,
    /// `s <` [`refined_squeeze_upper`], probes below [`squeeze_window`]
    pub refined_upper: InequalityAudit,
}

fn require_minus(traj: &Trajectory) -> Result<()> {
    if traj.form() != EquationForm::PiMinus {
        return Err(Error::WrongForm { expected: EquationForm::PiMinus.name(), found: traj.form().name() });
    }
    Ok(())
}

fn deviation(st: &State) -> f64 {
    st.s - st.t.sqrt()
}

/// All crossings of `s` and `sqrt(t)` in `(0, t_max]`.
pub fn crossings(traj: &Trajectory, t_max: f64) -> Result<Vec<CrossingEvent>> {
    require_minus(traj)?;
    if t_max <= CROSSING_EPS {
        return Ok(Vec::new());
    }
    let roots = traj.find_roots(deviation, (CROSSING_EPS, t_max))?;
    roots
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            let st = traj.dense_eval(r.t)?;
            let slope = st.sdot - 0.5 / r.t.sqrt();
            let direction = if slope > 0.0 { Direction::Upward } else { Direction::Downward };
            Ok(CrossingEvent { index, t: r.t, direction, refinement_width: r.width })
        })
        .collect()
}

/// `s'^2 + 4 s^3 + 12 q - 12 t s`, which vanishes on the exact solution.
pub fn first_integral_residual(traj: &Trajectory, t: f64) -> Result<f64> {
    require_minus(traj)?;
    if t < 0.0 {
        return Err(Error::Domain(format!("first integral needs t >= 0, got {t}")));
    }
    let st = traj.dense_eval(t)?;
    Ok(st.sdot * st.sdot + 4.0 * st.s.powi(3) + 12.0 * st.q - 12.0 * st.t * st.s)
}

/// Check the pointwise bounds at each probe.
pub fn bounds_audit(traj: &Trajectory, probes: &[f64]) -> Result<BoundsAudit> {
    require_minus(traj)?;
    let mut audit = BoundsAudit {
        positivity: InequalityAudit::new("positivity"),
        sqrt3t: InequalityAudit::new("below_sqrt_3t"),
        squeeze_lower: InequalityAudit::new("squeeze_lower"),
        squeeze_upper: InequalityAudit::new("squeeze_upper"),
        refined_upper: InequalityAudit::new("refined_squeeze_upper"),
    };
    let window = squeeze_window();
    for &t in probes {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("probes must be positive, got {t}")));
        }
        let s = traj.dense_eval(t)?.s;
        audit.positivity.record(t, s);
        audit.sqrt3t.record(t, (3.0 * t).sqrt() - s.abs());
        if t < window {
            audit.squeeze_lower.record(t, s - squeeze_lower(t));
            audit.squeeze_upper.record(t, squeeze_upper(t) - s);
            audit.refined_upper.record(t, refined_squeeze_upper(t) - s);
        }
    }
    Ok(audit)
}

/// Compare each pair of consecutive crossings with the applicable gap bound.
pub fn gap_audit(events: &[CrossingEvent]) -> Vec<GapRecord> {
    events
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].t, w[1].t);
            let gap = b - a;
            let side = match w[0].direction {
                Direction::Upward => Side::Above,
                Direction::Downward => Side::Below,
            };
            let (bound_value, bound_kind, margin) = match side {
                Side::Below => {
                    let bound = below_gap_constant() * a.powf(-0.25);
                    (bound, GapBoundKind::BelowMaxGap, bound - gap)
                }
                Side::Above => {
                    let bound = above_gap_constant() * b.powf(-0.25);
                    (bound, GapBoundKind::AboveMinGap, gap - bound)
                }
            };
            GapRecord { a, b, side, gap, bound_value, bound_kind, margin, passed: margin > 0.0 }
        })
        .collect()
}

/// `f'' - (phi - Phi f)` at `t`, with `f'' = s'' + t^{-3/2}/4` and `s''`
/// taken from the equation. Zero up to rounding.
pub fn deviation_residual(traj: &Trajectory, t: f64) -> Result<f64> {
    require_minus(traj)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("deviation equation is singular at t = {t}")));
    }
    let st = traj.dense_eval(t)?;
    Ok(deviation_residual_at(t, st.s))
}

/// Same identity for an arbitrary value `s` at `t`.
pub fn deviation_residual_at(t: f64, s: f64) -> f64 {
    let root = t.sqrt();
    let f = s - root;
    let sddot = 6.0 * t - 6.0 * s * s;
    let fddot = sddot + 0.25 / (t * root);
    let phi = 0.25 / (t * root);
    let big_phi = 6.0 * (root + s);
    fddot - (phi - big_phi * f)
}

/// Both sides of the comparison identity
/// `\int_a^b (phi + (lambda - Phi) f) g = [f' g - f g']_a^b`
/// with `g(t) = sin(sqrt(lambda) (t - a))`.
pub fn comparison_identity(traj: &Trajectory, a: f64, b: f64, lambda: f64) -> Result<(f64, f64)> {
    require_minus(traj)?;
    if !(a > 0.0 && b > a && lambda > 0.0) {
        return Err(Error::Domain(format!("need 0 < a < b and lambda > 0, got a={a} b={b} lambda={lambda}")));
    }
    let (_, hi) = traj.coverage();
    if b > hi {
        return Err(Error::OutOfRange { t: b, lo: 0.0, hi });
    }
    let omega = lambda.sqrt();
    let g = |t: f64| (omega * (t - a)).sin();
    let gdot = |t: f64| omega * (omega * (t - a)).cos();
    let integrand = |t: f64| {
        let st = traj.dense_eval(t).expect("inside coverage");
        let root = t.sqrt();
        let f = st.s - root;
        let phi = 0.25 / (t * root);
        let big_phi = 6.0 * (root + st.s);
        (phi + (lambda - big_phi) * f) * g(t)
    };
    let lhs = quadrature::integrate(integrand, a, b, 1e-13, 1e-11).value;
    let boundary = |t: f64| -> Result<f64> {
        let st = traj.dense_eval(t)?;
        let root = t.sqrt();
        let f = st.s - root;
        let fdot = st.sdot - 0.5 / root;
        Ok(fdot * g(t) - f * gdot(t))
    };
    let rhs = boundary(b)? - boundary(a)?;
    Ok((lhs, rhs))
}

/// Call `visit` on [`SAMPLES_PER_STEP`] dense points per accepted step inside
/// `(lo, hi]`.
fn scan<F: FnMut(&State)>(traj: &Trajectory, lo: f64, hi: f64, mut visit: F) -> usize {
    let mut count = 0;
    for step in traj.steps() {
        let (a, b) = (step.start.t.min(step.end.t), step.start.t.max(step.end.t));
        if b <= lo || a >= hi {
            continue;
        }
        for k in 1..=SAMPLES_PER_STEP {
            let t = a + (b - a) * k as f64 / SAMPLES_PER_STEP as f64;
            if t > lo && t <= hi {
                visit(&step.interpolate(t));
                count += 1;
            }
        }
    }
    count
}

/// Envelope statistics over the window `(lo, hi]`.
pub fn envelope_stats(traj: &Trajectory, window: (f64, f64)) -> Result<EnvelopeStats> {
    require_minus(traj)?;
    let (lo, hi) = window;
    let (_, cov) = traj.coverage();
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::Domain(format!("bad envelope window ({lo}, {hi}]")));
    }
    if hi > cov {
        return Err(Error::OutOfRange { t: hi, lo: 0.0, hi: cov });
    }
    let mut max_ratio = f64::NEG_INFINITY;
    let mut max_scaled_dev = f64::NEG_INFINITY;
    let samples = scan(traj, lo, hi, |st| {
        let root = st.t.sqrt();
        max_ratio = max_ratio.max(st.s / root);
        max_scaled_dev = max_scaled_dev.max((st.s - root).abs() * st.t.powf(0.125));
    });
    Ok(EnvelopeStats { window, max_ratio, max_scaled_dev, samples })
}

/// Dense probes between consecutive crossings where `s - sqrt(t)` has the
/// wrong sign. Probes within `guard` of a crossing are skipped.
pub fn sign_violations(traj: &Trajectory, events: &[CrossingEvent], guard: f64) -> Result<usize> {
    require_minus(traj)?;
    let mut bad = 0;
    for w in events.windows(2) {
        let expect = match w[0].direction {
            Direction::Upward => 1.0,
            Direction::Downward => -1.0,
        };
        scan(traj, w[0].t + guard, w[1].t - guard, |st| {
            if deviation(st) * expect <= 0.0 {
                bad += 1;
            }
        });
    }
    Ok(bad)
}

/// Dense probes in `(lo, hi]` where the curvature of the interpolated
/// solution disagrees in sign with `t - s^2`. The curvature is a central
/// difference of the interpolated `s'`, independent of the equation.
/// Probes with `|t - s^2| <= slack * t` are skipped.
pub fn inflection_violations(traj: &Trajectory, window: (f64, f64), slack: f64) -> Result<(usize, usize)> {
    require_minus(traj)?;
    let (lo, hi) = window;
    let (_, cov) = traj.coverage();
    let mut checked = 0;
    let mut bad = 0;
    scan(traj, lo, hi, |st| {
        let t = st.t;
        let h = 1e-5 * t.max(1.0);
        if t - h <= 0.0 || t + h > cov {
            return;
        }
        let gap = t - st.s * st.s;
        if gap.abs() <= slack * t {
            return;
        }
        let (Ok(l), Ok(r)) = (traj.dense_eval(t - h), traj.dense_eval(t + h)) else { return };
        let curvature = (r.sdot - l.sdot) / (2.0 * h);
        checked += 1;
        if curvature.signum() != gap.signum() {
            bad += 1;
        }
    });
    Ok((checked, bad))
}
