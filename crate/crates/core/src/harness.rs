//! One-shot verification of every claimed property of the transcendent.
//!
//! The registry is a static table of `(id, anchor, run)` entries. Each check
//! reads from a shared [`Context`] of precomputed trajectories and returns a
//! status, the worst margin it saw (positive means the claim held with room
//! to spare), and a short human-readable detail string.

use std::f64::consts::SQRT_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::blowup::{self, BlowupEstimate};
use crate::error::Result;
use crate::integrator::{integrate, IntegratorConfig, Termination, Trajectory};
use crate::oscillation::{self, CrossingEvent, Direction, GapBoundKind, GapRecord, InequalityAudit};
use crate::series::{convert_form, taylor_coefficients, EquationForm, Point};

pub const SCHEMA_VERSION: u32 = 1;

/// Width requested from the blow-up ladder.
pub const BLOWUP_WIDTH_TOL: f64 = 0.01;
/// Oscillation checks that look at the first stretch of crossings stop here.
pub const AUDIT_HORIZON: f64 = 100.0;
/// Envelope windows: `(0, 200]` for the ratio bound, `(10, 100]` against
/// `(100, 500]` for the decay check.
pub const RATIO_HORIZON: f64 = 200.0;
pub const DECAY_HORIZON: f64 = 500.0;

const SQUEEZE_TOL: f64 = 1e-14;
const SQUEEZE_PROBES: (f64, f64, usize) = (0.3, 0.9, 31);
const CROSS_FORM_PROBES: usize = 20;
const CROSS_FORM_TOL: f64 = 1e-8;
/// Absolute tolerance for the cross-form runs, which compare values as small
/// as `1e-4` in relative terms.
pub const CROSS_FORM_ABS_TOL: f64 = 1e-14;
const FIRST_INTEGRAL_PROBES: usize = 100;
const FIRST_INTEGRAL_TOL: f64 = 1e-7;
const FIRST_CROSSING_STABILITY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub integrator: IntegratorConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { integrator: IntegratorConfig::default().with_t_max(DECAY_HORIZON) }
    }
}

impl VerifyConfig {
    pub fn t_max(&self) -> f64 {
        self.integrator.t_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub anchor: String,
    pub status: CheckStatus,
    pub worst_margin: Option<f64>,
    pub details: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: VerifyConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    /// True when no executed check failed.
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }
}

/// What a single check produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: CheckStatus,
    pub worst_margin: Option<f64>,
    pub details: String,
}

impl Outcome {
    fn judged(margin: f64, details: String) -> Self {
        let status = if margin > 0.0 { CheckStatus::Pass } else { CheckStatus::Fail };
        Outcome { status, worst_margin: Some(margin), details }
    }

    fn flag(ok: bool, details: String) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Outcome { status, worst_margin: None, details }
    }

    fn skipped(details: impl Into<String>) -> Self {
        Outcome { status: CheckStatus::Skipped, worst_margin: None, details: details.into() }
    }

    fn from_audit(audit: &InequalityAudit) -> Self {
        let details = format!(
            "{} probes, {} violations, worst at t = {}",
            audit.probes,
            audit.violations,
            audit.worst_t.map_or("-".to_string(), |t| t.to_string())
        );
        Outcome { status: if audit.passed() { CheckStatus::Pass } else { CheckStatus::Fail }, worst_margin: audit.worst_margin, details }
    }
}

pub struct Check {
    pub id: &'static str,
    pub anchor: &'static str,
    pub run: fn(&Context) -> Result<Outcome>,
}

/// Trajectories and derived data shared by all checks. Integration failures
/// are kept as errors so the checks depending on them fail individually.
pub struct Context {
    pub config: VerifyConfig,
    pub minus: Result<Trajectory>,
    pub minus_fine: Result<Trajectory>,
    pub minus_half: Result<Trajectory>,
    pub squeeze: Result<Trajectory>,
    pub blowup: Result<(BlowupEstimate, Trajectory)>,
    pub pi_forward: Result<Trajectory>,
    pub pi_backward: Result<Trajectory>,
    pub plus_unit: Result<Trajectory>,
    pub minus_unit: Result<Trajectory>,
    pub events: Result<Vec<CrossingEvent>>,
}

impl Context {
    pub fn build(config: VerifyConfig) -> Result<Self> {
        config.integrator.validate()?;
        let base = config.integrator;
        let t_max = base.t_max.max(0.0);
        let audit_end = t_max.min(AUDIT_HORIZON);
        let run = |form: EquationForm, cfg: IntegratorConfig| integrate(form, &cfg);
        let alpha = EquationForm::PiPlus.scaling_from_pi().0;
        let relative = IntegratorConfig { abs_tol: base.abs_tol.min(CROSS_FORM_ABS_TOL), ..base };

        let (minus, minus_fine, minus_half, squeeze, blowup, pi_forward, pi_backward, plus_unit, minus_unit) =
            std::thread::scope(|sc| {
                let minus = sc.spawn(|| run(EquationForm::PiMinus, base.with_t_max(t_max)));
                let fine = sc.spawn(|| run(EquationForm::PiMinus, base.scale_tolerances(0.1).with_t_max(audit_end)));
                let half = sc.spawn(|| {
                    run(EquationForm::PiMinus, base.scale_tolerances(0.5).with_t_max(t_max.min(2.0)))
                });
                let squeeze = sc.spawn(|| {
                    let cfg = IntegratorConfig { rel_tol: SQUEEZE_TOL, abs_tol: SQUEEZE_TOL, ..base };
                    run(EquationForm::PiMinus, cfg.with_t_max(oscillation::squeeze_window().min(0.9)))
                });
                let blow = sc.spawn(|| blowup::run_blowup(&base, BLOWUP_WIDTH_TOL));
                let fwd = sc.spawn(|| run(EquationForm::Pi, relative.with_t_max(alpha + 0.05)));
                let bwd = sc.spawn(|| run(EquationForm::Pi, relative.with_t_max(-(alpha + 0.05))));
                let plus_unit = run(EquationForm::PiPlus, relative.with_t_max(1.0));
                let minus_unit = run(EquationForm::PiMinus, relative.with_t_max(1.0));
                (
                    minus.join().expect("integration thread"),
                    fine.join().expect("integration thread"),
                    half.join().expect("integration thread"),
                    squeeze.join().expect("integration thread"),
                    blow.join().expect("integration thread"),
                    fwd.join().expect("integration thread"),
                    bwd.join().expect("integration thread"),
                    plus_unit,
                    minus_unit,
                )
            });

        let events = minus.as_ref().map_err(Clone::clone).and_then(|tr| {
            let end = tr.coverage().1.min(t_max);
            oscillation::crossings(tr, end)
        });
        Ok(Context {
            config,
            minus,
            minus_fine,
            minus_half,
            squeeze,
            blowup,
            pi_forward,
            pi_backward,
            plus_unit,
            minus_unit,
            events,
        })
    }

    fn t_max(&self) -> f64 {
        self.config.t_max()
    }

    fn minus(&self) -> Result<&Trajectory> {
        self.minus.as_ref().map_err(Clone::clone)
    }

    fn events(&self) -> Result<&[CrossingEvent]> {
        self.events.as_ref().map(Vec::as_slice).map_err(Clone::clone)
    }

    fn blowup(&self) -> Result<&(BlowupEstimate, Trajectory)> {
        self.blowup.as_ref().map_err(Clone::clone)
    }

    /// Crossings inside `(0, AUDIT_HORIZON]`.
    fn audit_events(&self) -> Result<&[CrossingEvent]> {
        let ev = self.events()?;
        let n = ev.partition_point(|e| e.t <= AUDIT_HORIZON);
        Ok(&ev[..n])
    }

    /// True when the main trajectory ended before the requested `t_max`.
    fn cut_short(&self) -> Result<bool> {
        Ok(self.minus()?.termination() != Termination::ReachedTMax)
    }

    /// `n` log-spaced points in `[lo, hi]`, keeping only those the main
    /// trajectory covers.
    fn log_probes(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
        let cov = self.minus()?.coverage().1;
        Ok(log_spaced(lo, hi, n).into_iter().filter(|&t| t <= cov).collect())
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| if k + 1 == n { hi } else { (a + (b - a) * k as f64 / (n - 1) as f64).exp() }).collect()
}

fn lin_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn min_margin(margins: impl IntoIterator<Item = f64>) -> f64 {
    margins.into_iter().fold(f64::INFINITY, |m, x| if x.is_nan() { f64::NAN } else { m.min(x) })
}

// ---- series ---------------------------------------------------------------

fn series_sparsity(_: &Context) -> Result<Outcome> {
    let mut bad = Vec::new();
    for form in EquationForm::ALL {
        let ser = taylor_coefficients(form, 60)?;
        for (n, c) in ser.coeffs().iter().enumerate() {
            if n % 5 != 3 && !c.is_zero() {
                bad.push(format!("{form} a_{n}"));
            }
            if n % 5 == 3 && c.is_zero() {
                bad.push(format!("{form} a_{n} vanishes"));
            }
        }
    }
    Ok(Outcome::flag(bad.is_empty(), format!("orders 0..=60, all forms; offending: {bad:?}")))
}

fn series_coefficients(_: &Context) -> Result<Outcome> {
    let ser = taylor_coefficients(EquationForm::PiMinus, 28)?;
    let expected = [(3, rational(1, 1)), (8, rational(-3, 28)), (13, rational(3, 364))];
    let bad: Vec<String> = expected
        .iter()
        .filter(|(n, v)| &ser.coeff(*n) != v)
        .map(|(n, v)| format!("a_{n} = {} (expected {v})", ser.coeff(*n)))
        .collect();
    Ok(Outcome::flag(bad.is_empty(), format!("a_3, a_8, a_13 exact; mismatches: {bad:?}")))
}

fn series_a18(_: &Context) -> Result<Outcome> {
    let a18 = taylor_coefficients(EquationForm::PiMinus, 18)?.coeff(18);
    let naive = rational(-3, 13328);
    Ok(Outcome::flag(a18 != naive, format!("a_18 = {a18}, differs from {naive}")))
}

fn series_pi_origin(_: &Context) -> Result<Outcome> {
    let ser = taylor_coefficients(EquationForm::Pi, 8)?;
    let low_zero = (0..3).all(|n| ser.coeff(n).is_zero());
    let third = ser.coeff(3) * BigRational::from_integer(BigInt::from(6));
    let ok = low_zero && third == rational(1, 1);
    Ok(Outcome::flag(ok, format!("w(0) = w'(0) = w''(0) = 0: {low_zero}; w'''(0) = {third}")))
}

fn series_remainder(_: &Context) -> Result<Outcome> {
    let mut worst = usize::MAX;
    for form in EquationForm::ALL {
        let ser = taylor_coefficients(form, 40)?;
        let v = ser.remainder_valuation().unwrap_or(usize::MAX);
        worst = worst.min(v);
    }
    // an order-N truncation leaves a residual starting at degree N - 1
    Ok(Outcome::flag(worst >= 39, format!("lowest residual degree over all forms at order 40: {worst}")))
}

fn series_seed(ctx: &Context) -> Result<Outcome> {
    let mut margins = Vec::new();
    for (form, traj) in [(EquationForm::PiPlus, &ctx.plus_unit), (EquationForm::PiMinus, &ctx.minus_unit)] {
        let traj = traj.as_ref().map_err(Clone::clone)?;
        let ser = taylor_coefficients(form, 60)?;
        for t in [0.2, 0.4, 0.6] {
            let (s, sdot) = ser.eval(t)?;
            let st = traj.dense_eval(t)?;
            let err = ((st.s - s).abs() / s.abs()).max((st.sdot - sdot).abs() / sdot.abs());
            margins.push(1e-8 - err);
        }
    }
    let m = min_margin(margins);
    Ok(Outcome::judged(m, format!("series against integration at t = 0.2, 0.4, 0.6; worst relative error {:e}", 1e-8 - m)))
}

// ---- forms ----------------------------------------------------------------

fn form_round_trip(_: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &from in &EquationForm::ALL {
        for &to in &EquationForm::ALL {
            for k in 1..=10 {
                let p = Point { t: 0.37 * k as f64, s: 1.0 - 0.21 * k as f64, sdot: 0.5 * k as f64 - 2.0 };
                let back = convert_form(convert_form(p, from, to), to, from);
                for (x, y) in [(p.t, back.t), (p.s, back.s), (p.sdot, back.sdot)] {
                    worst = worst.max((x - y).abs() / x.abs().max(1.0));
                }
            }
        }
    }
    let tol = 8.0 * f64::EPSILON;
    Ok(Outcome::judged(tol - worst, format!("worst relative round-trip error {worst:e} (tolerance 8 eps)")))
}

fn cross_form(ctx: &Context) -> Result<Outcome> {
    let fwd = ctx.pi_forward.as_ref().map_err(Clone::clone)?;
    let bwd = ctx.pi_backward.as_ref().map_err(Clone::clone)?;
    let mut worst: f64 = 0.0;
    for (form, traj) in [(EquationForm::PiPlus, &ctx.plus_unit), (EquationForm::PiMinus, &ctx.minus_unit)] {
        let traj = traj.as_ref().map_err(Clone::clone)?;
        for t in lin_spaced(0.05, 1.0, CROSS_FORM_PROBES) {
            let st = traj.dense_eval(t)?;
            let p = convert_form(Point { t, s: st.s, sdot: st.sdot }, form, EquationForm::Pi);
            let reference = if p.t >= 0.0 { fwd } else { bwd }.dense_eval(p.t)?;
            let es = (p.s - reference.s).abs() / reference.s.abs();
            let ed = (p.sdot - reference.sdot).abs() / reference.sdot.abs();
            worst = worst.max(es).max(ed);
        }
    }
    Ok(Outcome::judged(
        CROSS_FORM_TOL - worst,
        format!("{CROSS_FORM_PROBES} probes per form in [0.05, 1]; worst relative deviation {worst:e}"),
    ))
}

// ---- blow-up form ---------------------------------------------------------

fn plus_growth(ctx: &Context) -> Result<Outcome> {
    let (_, traj) = ctx.blowup()?;
    let mut margins = Vec::new();
    let mut prev_s = 0.0;
    for st in traj.states().filter(|st| st.t > 0.05) {
        margins.push((st.s - st.t.powi(3)) / st.s.abs().max(1.0));
        margins.push((st.sdot - 3.0 * st.t * st.t) / st.sdot.abs().max(1.0));
        margins.push((st.s - prev_s) / st.s.abs().max(1.0));
        prev_s = st.s;
    }
    let m = min_margin(margins);
    Ok(Outcome::judged(m, "s > t^3, s' > 3 t^2 and s increasing on every stored state with t > 0.05".into()))
}

fn plus_energy(ctx: &Context) -> Result<Outcome> {
    let (_, traj) = ctx.blowup()?;
    let mut prev = f64::NEG_INFINITY;
    let mut worst = f64::INFINITY;
    for st in traj.states() {
        let energy = st.sdot * st.sdot - 4.0 * st.s.powi(3);
        let scale = (st.sdot * st.sdot).max(1.0);
        if prev.is_finite() {
            worst = worst.min((energy - prev) / scale + 1e-9);
        }
        prev = energy;
    }
    Ok(Outcome::judged(worst, "s'^2 - 4 s^3 non-decreasing along the run (relative slack 1e-9)".into()))
}

fn plus_slope(ctx: &Context) -> Result<Outcome> {
    let (_, traj) = ctx.blowup()?;
    let margins: Vec<f64> = traj
        .states()
        .filter(|st| st.t > 0.05 && st.s <= 1e4)
        .map(|st| (st.sdot - 2.0 * st.s.powf(1.5)) / st.sdot)
        .collect();
    let n = margins.len();
    Ok(Outcome::judged(min_margin(margins), format!("s' > 2 s^(3/2) on {n} stored states with t > 0.05, s <= 1e4")))
}

fn blowup_nesting(ctx: &Context) -> Result<Outcome> {
    let (est, _) = ctx.blowup()?;
    let nested = est.history.windows(2).all(|w| w[0].contains(&w[1]));
    Ok(Outcome::flag(nested, format!("{} brackets along the guard ladder", est.history.len())))
}

fn blowup_window(ctx: &Context) -> Result<Outcome> {
    let (est, _) = ctx.blowup()?;
    let m = (est.lower - 1.82).min(1.83 - est.upper);
    let mut out = Outcome::judged(m, format!("bracket [{}, {}] inside (1.82, 1.83)", est.lower, est.upper));
    if !est.width_reached {
        out.status = CheckStatus::Fail;
        out.details.push_str("; requested width not reached");
    }
    Ok(out)
}

fn blowup_lower(ctx: &Context) -> Result<Outcome> {
    let (est, _) = ctx.blowup()?;
    let a = blowup::analytic_lower_bound();
    let i = blowup::bounding_integral();
    let m = (i - a).min(est.lower - i);
    Ok(Outcome::judged(m - 1e-3, format!("closed form {a} < integral {i} < bracket lower edge {} (margins > 1e-3)", est.lower)))
}

fn blowup_upper(ctx: &Context) -> Result<Outcome> {
    let (est, _) = ctx.blowup()?;
    let u = blowup::minimal_upper_bound();
    let m = (est.upper - est.lower).min(u - est.upper);
    Ok(Outcome::judged(m, format!("bracket [{}, {}] below a-priori bound {u}", est.lower, est.upper)))
}

fn blowup_ordering(ctx: &Context) -> Result<Outcome> {
    let (est, _) = ctx.blowup()?;
    let a = blowup::analytic_lower_bound();
    let i = blowup::bounding_integral();
    let u = blowup::minimal_upper_bound();
    let separated = min_margin([i - a, est.lower - i, u - est.upper].map(|g| g - 1e-3));
    let mut out = Outcome::judged(
        separated,
        format!("{a} < {i} < [{}, {}] < {u}; the a-priori bounds clear the bracket by more than 1e-3", est.lower, est.upper),
    );
    if !(est.lower < est.upper) {
        out.status = CheckStatus::Fail;
    }
    Ok(out)
}

fn blowup_pole(ctx: &Context) -> Result<Outcome> {
    let (est, traj) = ctx.blowup()?;
    let Some(t_pole) = est.pole_fit else {
        return Ok(Outcome::flag(false, "no pole fit available".into()));
    };
    let s_final = traj.last_state().s;
    let Some((lo, hi)) = blowup::pole_shape_range(traj, t_pole, s_final) else {
        return Ok(Outcome::flag(false, "no states in the last decade".into()));
    };
    let m = (lo - 0.9).min(1.1 - hi);
    Ok(Outcome::judged(
        m,
        format!("fitted pole {t_pole} (bracket upper edge {}); s (T - t)^2 in [{lo}, {hi}] over the last decade", est.upper),
    ))
}

// ---- oscillating form -----------------------------------------------------

fn minus_existence(ctx: &Context) -> Result<Outcome> {
    let tr = ctx.minus()?;
    let last = tr.last_state();
    Ok(Outcome::flag(
        tr.termination() == Termination::ReachedTMax,
        format!("termination {:?} at t = {}, |s| = {}", tr.termination(), last.t, last.s.abs()),
    ))
}

fn first_integral_margins(tr: &Trajectory, probes: &[f64]) -> Result<(f64, f64)> {
    let mut worst_margin = f64::INFINITY;
    let mut worst_abs: f64 = 0.0;
    for &t in probes {
        let r = oscillation::first_integral_residual(tr, t)?;
        let st = tr.dense_eval(t)?;
        let allowed = FIRST_INTEGRAL_TOL * (12.0 * t * st.s).abs().max(1.0);
        worst_margin = worst_margin.min((allowed - r.abs()) / allowed);
        worst_abs = worst_abs.max(r.abs());
    }
    Ok((worst_margin, worst_abs))
}

fn first_integral(ctx: &Context) -> Result<Outcome> {
    let probes = ctx.log_probes(1e-2, ctx.t_max().min(AUDIT_HORIZON), FIRST_INTEGRAL_PROBES)?;
    let (m, worst) = first_integral_margins(ctx.minus()?, &probes)?;
    Ok(Outcome::judged(m, format!("{} log-spaced probes; largest |residual| {worst:e}", probes.len())))
}

fn first_integral_convergence(ctx: &Context) -> Result<Outcome> {
    let end = ctx.t_max().min(AUDIT_HORIZON);
    let probes = ctx.log_probes(1e-2, end, FIRST_INTEGRAL_PROBES)?;
    let fine = ctx.minus_fine.as_ref().map_err(Clone::clone)?;
    let (_, coarse_err) = first_integral_margins(ctx.minus()?, &probes)?;
    let (_, fine_err) = first_integral_margins(fine, &probes)?;
    let ratio = coarse_err / fine_err;
    Ok(Outcome::judged(ratio / 5.0 - 1.0, format!("largest residual {coarse_err:e} -> {fine_err:e} at 10x tighter tolerances (ratio {ratio:.2}, need >= 5)")))
}

fn bounds(ctx: &Context) -> Result<oscillation::BoundsAudit> {
    let probes = ctx.log_probes(1e-2, ctx.t_max().min(AUDIT_HORIZON), FIRST_INTEGRAL_PROBES)?;
    oscillation::bounds_audit(ctx.minus()?, &probes)
}

fn positivity(ctx: &Context) -> Result<Outcome> {
    if ctx.t_max() <= 0.0 {
        return Ok(Outcome::skipped("t_max <= 0"));
    }
    Ok(Outcome::from_audit(&bounds(ctx)?.positivity))
}

fn below_sqrt_3t(ctx: &Context) -> Result<Outcome> {
    if ctx.t_max() <= 0.0 {
        return Ok(Outcome::skipped("t_max <= 0"));
    }
    Ok(Outcome::from_audit(&bounds(ctx)?.sqrt3t))
}

fn squeeze_audit(ctx: &Context) -> Result<oscillation::BoundsAudit> {
    let tr = ctx.squeeze.as_ref().map_err(Clone::clone)?;
    let (lo, hi, n) = SQUEEZE_PROBES;
    oscillation::bounds_audit(tr, &lin_spaced(lo, hi, n))
}

fn squeeze(ctx: &Context) -> Result<Outcome> {
    let a = squeeze_audit(ctx)?;
    let mut out = Outcome::from_audit(&a.squeeze_lower);
    let upper = Outcome::from_audit(&a.squeeze_upper);
    if upper.status == CheckStatus::Fail {
        out.status = CheckStatus::Fail;
    }
    out.worst_margin = match (out.worst_margin, upper.worst_margin) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    out.details = format!("t^3 - (3/28) t^8 < s < t^3: lower [{}], upper [{}]", out.details, upper.details);
    Ok(out)
}

fn refined_squeeze(ctx: &Context) -> Result<Outcome> {
    let a = squeeze_audit(ctx)?;
    Ok(Outcome::from_audit(&a.refined_upper))
}

fn first_crossing(ctx: &Context) -> Result<Outcome> {
    let bound = oscillation::first_crossing_upper_bound();
    if ctx.t_max() < bound {
        return Ok(Outcome::skipped(format!("t_max below {bound}")));
    }
    let ev = ctx.events()?;
    let Some(first) = ev.first() else {
        return Ok(Outcome::flag(false, "no crossing found".into()));
    };
    let half = ctx.minus_half.as_ref().map_err(Clone::clone)?;
    let again = oscillation::crossings(half, bound.min(half.coverage().1))?;
    let drift = again.first().map_or(f64::INFINITY, |e| (e.t - first.t).abs());
    let m = (first.t - 1.0).min(bound - first.t);
    let mut out = Outcome::judged(m, format!("t0 = {} in (1, {bound}); drift under halved tolerances {drift:e}", first.t));
    if first.direction != Direction::Upward || !(drift <= FIRST_CROSSING_STABILITY) {
        out.status = CheckStatus::Fail;
    }
    Ok(out)
}

fn deviation_identity(ctx: &Context) -> Result<Outcome> {
    let tr = ctx.minus()?;
    let end = tr.coverage().1.min(50.0);
    if end <= 0.1 {
        return Ok(Outcome::skipped("coverage ends before t = 0.1"));
    }
    // golden-ratio sequence: deterministic, evenly spread
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut worst: f64 = 0.0;
    for k in 1..=100 {
        let t = 0.1 + (end - 0.1) * (k as f64 * phi).fract();
        let st = tr.dense_eval(t)?;
        let r = oscillation::deviation_residual(tr, t)?;
        let scale = (6.0 * (t + st.s * st.s)).max(0.25 * t.powf(-1.5)).max(1.0);
        worst = worst.max(r.abs() / scale);
    }
    Ok(Outcome::judged(1e-12 - worst, format!("100 probes in (0.1, {end}]; worst scaled residual {worst:e}")))
}

fn comparison(ctx: &Context) -> Result<Outcome> {
    let ev = ctx.audit_events()?;
    if ev.len() < 2 {
        return skip_or_fail(ctx, "fewer than two crossings");
    }
    let tr = ctx.minus()?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for w in ev.windows(2).take(10) {
        let (a, b) = (w[0].t, w[1].t);
        for lambda in [6.0 * a.sqrt(), (std::f64::consts::PI / (b - a)).powi(2)] {
            let (lhs, rhs) = oscillation::comparison_identity(tr, a, b, lambda)?;
            worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
            count += 1;
        }
    }
    Ok(Outcome::judged(1e-6 - worst, format!("{count} interval/lambda pairs; worst relative mismatch {worst:e}")))
}

fn skip_or_fail(ctx: &Context, why: &str) -> Result<Outcome> {
    if ctx.cut_short()? {
        Ok(Outcome::flag(false, format!("{why}: trajectory ended early")))
    } else {
        Ok(Outcome::skipped(why.to_string()))
    }
}

fn gap_check(ctx: &Context, kind: GapBoundKind) -> Result<Outcome> {
    let ev = ctx.audit_events()?;
    let gaps: Vec<GapRecord> = oscillation::gap_audit(ev).into_iter().filter(|g| g.bound_kind == kind).collect();
    if gaps.is_empty() {
        return skip_or_fail(ctx, "no complete crossing interval of this kind");
    }
    let failed = gaps.iter().filter(|g| !g.passed).count();
    let worst = gaps.iter().min_by(|x, y| x.margin.total_cmp(&y.margin)).expect("nonempty");
    let mut out = Outcome::judged(
        worst.margin,
        format!("{} intervals, {failed} violations; tightest [{}, {}] gap {} vs bound {}", gaps.len(), worst.a, worst.b, worst.gap, worst.bound_value),
    );
    if failed > 0 {
        out.status = CheckStatus::Fail;
    }
    Ok(out)
}

fn gap_below(ctx: &Context) -> Result<Outcome> {
    gap_check(ctx, GapBoundKind::BelowMaxGap)
}

fn gap_above(ctx: &Context) -> Result<Outcome> {
    gap_check(ctx, GapBoundKind::AboveMinGap)
}

fn alternation(ctx: &Context) -> Result<Outcome> {
    let ev = ctx.events()?;
    if ev.len() < 2 {
        return skip_or_fail(ctx, "fewer than two crossings");
    }
    let alternate = ev.windows(2).all(|w| w[0].direction != w[1].direction);
    let starts_up = ev[0].direction == Direction::Upward;
    let bad = oscillation::sign_violations(ctx.minus()?, ev, 1e-9)?;
    Ok(Outcome::flag(
        alternate && starts_up && bad == 0,
        format!("{} crossings; alternating {alternate}; first upward {starts_up}; {bad} sign violations between crossings", ev.len()),
    ))
}

fn inflection(ctx: &Context) -> Result<Outcome> {
    let tr = ctx.minus()?;
    let end = tr.coverage().1.min(AUDIT_HORIZON);
    if end <= 0.1 {
        return Ok(Outcome::skipped("coverage ends before t = 0.1"));
    }
    let (checked, bad) = oscillation::inflection_violations(tr, (0.1, end), 1e-3)?;
    Ok(Outcome::flag(checked > 0 && bad == 0, format!("{checked} probes in (0.1, {end}], {bad} with curvature of the wrong sign")))
}

fn envelope_ratio(ctx: &Context) -> Result<Outcome> {
    if ctx.t_max() < RATIO_HORIZON {
        return Ok(Outcome::skipped(format!("t_max below {RATIO_HORIZON}")));
    }
    let stats = oscillation::envelope_stats(ctx.minus()?, (0.0, RATIO_HORIZON))?;
    let m = (stats.max_ratio - 1.0).min(SQRT_2 - stats.max_ratio);
    Ok(Outcome::judged(m, format!("max s/sqrt(t) on (0, {RATIO_HORIZON}] = {} from {} samples", stats.max_ratio, stats.samples)))
}

fn envelope_decay(ctx: &Context) -> Result<Outcome> {
    if ctx.t_max() < DECAY_HORIZON {
        return Ok(Outcome::skipped(format!("t_max below {DECAY_HORIZON}")));
    }
    let tr = ctx.minus()?;
    let early = oscillation::envelope_stats(tr, (10.0, AUDIT_HORIZON))?;
    let late = oscillation::envelope_stats(tr, (AUDIT_HORIZON, DECAY_HORIZON))?;
    Ok(Outcome::judged(
        early.max_scaled_dev - late.max_scaled_dev,
        format!("max |s - sqrt(t)| t^(1/8): {} on (10, 100], {} on (100, 500]", early.max_scaled_dev, late.max_scaled_dev),
    ))
}

pub static REGISTRY: &[Check] = &[
    Check { id: "series-sparsity", anchor: "series-exponents", run: series_sparsity },
    Check { id: "series-coefficients", anchor: "squeeze", run: series_coefficients },
    Check { id: "series-a18-differs", anchor: "refined-squeeze", run: series_a18 },
    Check { id: "series-pi-origin", anchor: "triple-zero", run: series_pi_origin },
    Check { id: "series-remainder", anchor: "series-recurrence", run: series_remainder },
    Check { id: "series-seed", anchor: "series-recurrence", run: series_seed },
    Check { id: "forms-round-trip", anchor: "scaling", run: form_round_trip },
    Check { id: "forms-cross-consistency", anchor: "scaling", run: cross_form },
    Check { id: "plus-growth", anchor: "blowup-monotonicity", run: plus_growth },
    Check { id: "plus-energy", anchor: "blowup-monotonicity", run: plus_energy },
    Check { id: "plus-slope", anchor: "blowup-upper-bracket", run: plus_slope },
    Check { id: "blowup-nesting", anchor: "blowup-upper-bracket", run: blowup_nesting },
    Check { id: "blowup-window", anchor: "blowup-window", run: blowup_window },
    Check { id: "blowup-lower-bounds", anchor: "blowup-lower-bound", run: blowup_lower },
    Check { id: "blowup-upper-bound", anchor: "blowup-upper-bracket", run: blowup_upper },
    Check { id: "blowup-ordering", anchor: "blowup-lower-bound", run: blowup_ordering },
    Check { id: "blowup-pole-shape", anchor: "pole-structure", run: blowup_pole },
    Check { id: "minus-global-existence", anchor: "global-existence", run: minus_existence },
    Check { id: "minus-first-integral", anchor: "first-integral", run: first_integral },
    Check { id: "minus-first-integral-convergence", anchor: "first-integral", run: first_integral_convergence },
    Check { id: "minus-positivity", anchor: "positivity", run: positivity },
    Check { id: "minus-below-sqrt-3t", anchor: "below-sqrt-3t", run: below_sqrt_3t },
    Check { id: "minus-squeeze", anchor: "squeeze", run: squeeze },
    Check { id: "minus-refined-squeeze", anchor: "refined-squeeze", run: refined_squeeze },
    Check { id: "minus-first-crossing", anchor: "first-crossing", run: first_crossing },
    Check { id: "minus-deviation-identity", anchor: "deviation-equation", run: deviation_identity },
    Check { id: "minus-comparison-identity", anchor: "comparison-identity", run: comparison },
    Check { id: "minus-gap-below", anchor: "gap-below-max", run: gap_below },
    Check { id: "minus-gap-above", anchor: "gap-above-min", run: gap_above },
    Check { id: "minus-alternation", anchor: "oscillation", run: alternation },
    Check { id: "minus-inflection", anchor: "oscillation", run: inflection },
    Check { id: "minus-envelope-ratio", anchor: "envelope", run: envelope_ratio },
    Check { id: "minus-envelope-decay", anchor: "envelope", run: envelope_decay },
];

/// Run every registered check. Fails only if the configuration is invalid;
/// a check whose computation errors is recorded as failed.
pub fn verify(config: VerifyConfig) -> Result<VerificationReport> {
    let ctx = Context::build(config)?;
    Ok(run_registry(&ctx, REGISTRY))
}

pub fn run_registry(ctx: &Context, registry: &[Check]) -> VerificationReport {
    let mut checks: Vec<CheckRecord> = registry
        .iter()
        .map(|c| {
            let outcome = (c.run)(ctx).unwrap_or_else(|e| Outcome::flag(false, format!("error: {e}")));
            let worst_margin = outcome.worst_margin.filter(|m| m.is_finite());
            CheckRecord {
                check_id: c.id.to_string(),
                anchor: c.anchor.to_string(),
                status: outcome.status,
                worst_margin,
                details: outcome.details,
            }
        })
        .collect();
    checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            CheckStatus::Pass => summary.passed += 1,
            CheckStatus::Fail => summary.failed += 1,
            CheckStatus::Skipped => summary.skipped += 1,
        }
    }
    VerificationReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: ctx.config,
        checks,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_are_unique() {
        let ids: HashSet<_> = REGISTRY.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), REGISTRY.len());
        assert!(REGISTRY.len() >= 30);
    }

    #[test]
    fn spacing_helpers() {
        let p = log_spaced(0.01, 100.0, 5);
        assert_eq!(p.len(), 5);
        assert_eq!(p[4], 100.0);
        assert!((p[2] - 1.0).abs() < 1e-12);
        assert_eq!(lin_spaced(0.3, 0.9, 31)[30], 0.9);
    }

    #[test]
    fn min_margin_propagates_nan() {
        assert_eq!(min_margin([1.0, -2.0, 3.0]), -2.0);
        assert!(min_margin([1.0, f64::NAN]).is_nan());
        assert_eq!(min_margin([]), f64::INFINITY);
    }

    #[test]
    fn invalid_config_is_an_error() {
        let mut cfg = VerifyConfig::default();
        cfg.integrator.rel_tol = -1.0;
        assert!(verify(cfg).is_err());
    }

    #[test]
    fn rational_helper() {
        assert!(rational(-3, 28) < rational(0, 1));
    }
}
