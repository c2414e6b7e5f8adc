//! Adaptive Dormand–Prince 5(4) integration of the triple-zero transcendent.
//!
//! The integrated system is `(s, s', q)' = (s', rhs(t, s), s)` from the
//! origin with zero data, so `q(t)` carries `\int_0^t s`. Every accepted
//! step keeps its fourth-order continuous extension, which is what
//! [`Trajectory::dense_eval`] and [`Trajectory::find_roots`] run on.

use serde::{Deserialize, Serialize};

use crate::brent;
use crate::error::{Error, Result};
use crate::series::EquationForm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub t: f64,
    pub s: f64,
    pub sdot: f64,
    /// Accumulated integral of `s` from the origin.
    pub q: f64,
}

impl State {
    pub const ORIGIN: State = State { t: 0.0, s: 0.0, sdot: 0.0, q: 0.0 };

    fn from_vec(t: f64, y: [f64; 3]) -> Self {
        State { t, s: y[0], sdot: y[1], q: y[2] }
    }
}

/// Deliberate right-hand-side corruption used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Flip the sign of the term linear in `t`.
    FlipLinearTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
    /// Integration stops once `|s|` reaches this value.
    pub s_max: f64,
    /// End of the integration interval; negative values integrate backwards.
    pub t_max: f64,
    /// Width to which [`Trajectory::find_roots`] refines each root.
    pub root_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fault: Option<Fault>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_step: 0.1,
            initial_step: 1e-3,
            s_max: 1e8,
            t_max: 100.0,
            root_tol: 1e-12,
            fault: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_s_max(mut self, s_max: f64) -> Self {
        self.s_max = s_max;
        self
    }

    /// Same configuration with both tolerances multiplied by `factor`.
    pub fn scale_tolerances(mut self, factor: f64) -> Self {
        self.rel_tol *= factor;
        self.abs_tol *= factor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("max_step", self.max_step)?;
        positive("initial_step", self.initial_step)?;
        positive("s_max", self.s_max)?;
        positive("root_tol", self.root_tol)?;
        if self.rel_tol < 10.0 * f64::EPSILON {
            return Err(Error::InvalidConfig(format!(
                "rel_tol {} is below 10 * machine epsilon",
                self.rel_tol
            )));
        }
        if !self.t_max.is_finite() {
            return Err(Error::InvalidConfig("t_max must be finite".into()));
        }
        Ok(())
    }

    fn rhs(&self, form: EquationForm, t: f64, s: f64) -> f64 {
        let c1 = match self.fault {
            Some(Fault::FlipLinearTerm) => -(form.linear_coeff() as f64),
            None => form.linear_coeff() as f64,
        };
        form.quadratic_coeff() as f64 * s * s + c1 * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTMax,
    BlowupGuard,
    StepUnderflow,
}

/// One accepted step together with its continuous extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub start: State,
    pub end: State,
    pub error_estimate: f64,
    /// Interpolation coefficients per component (s, s', q).
    pub dense: [[f64; 5]; 3],
}

impl Step {
    pub fn h(&self) -> f64 {
        self.end.t - self.start.t
    }

    /// Continuous extension at `t`; reproduces the stored endpoints exactly.
    pub fn interpolate(&self, t: f64) -> State {
        if t == self.end.t {
            return self.end;
        }
        if t == self.start.t {
            return self.start;
        }
        let theta = (t - self.start.t) / self.h();
        let theta1 = 1.0 - theta;
        let mut y = [0.0; 3];
        for (yi, r) in y.iter_mut().zip(&self.dense) {
            *yi = r[0] + theta * (r[1] + theta1 * (r[2] + theta * (r[3] + theta1 * r[4])));
        }
        State::from_vec(t, y)
    }
}

/// A refined root of a scalar function along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub t: f64,
    /// Width of the final sign-change bracket.
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    form: EquationForm,
    config: IntegratorConfig,
    steps: Vec<Step>,
    termination: Termination,
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

type Vec3 = [f64; 3];

fn axpy(y: &Vec3, terms: &[(f64, &Vec3)], h: f64) -> Vec3 {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrate `form` from the triple-zero data according to `config`.
pub fn integrate(form: EquationForm, config: &IntegratorConfig) -> Result<Trajectory> {
    config.validate()?;
    let cfg = *config;
    let f = |t: f64, y: &Vec3| -> Vec3 { [y[1], cfg.rhs(form, t, y[0]), y[0]] };

    let mut steps = Vec::new();
    if cfg.t_max == 0.0 {
        return Ok(Trajectory { form, config: cfg, steps, termination: Termination::ReachedTMax });
    }

    let dir = cfg.t_max.signum();
    let mut t = 0.0;
    let mut y: Vec3 = [0.0; 3];
    let mut k1 = f(t, &y);
    let mut h = cfg.initial_step.min(cfg.max_step) * dir;
    let mut err_old: f64 = 1e-4;
    let mut rejected = false;

    let termination = loop {
        let remaining = cfg.t_max - t;
        let last = h.abs() >= remaining.abs();
        if last {
            h = remaining;
        }

        let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(t + C5 * h, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
        let y6 = axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h);
        let t_new = if last { cfg.t_max } else { t + h };
        let k6 = f(t + h, &y6);
        let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
        let k7 = f(t_new, &y_new);

        let mut sq = 0.0;
        for i in 0..3 {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            sq += (e / scale).powi(2);
        }
        let err = (sq / 3.0).sqrt();

        if err.is_finite() && err <= 1.0 {
            let mut dense = [[0.0; 5]; 3];
            for i in 0..3 {
                let r2 = y_new[i] - y[i];
                let r3 = h * k1[i] - r2;
                let r4 = r2 - h * k7[i] - r3;
                let r5 = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                dense[i] = [y[i], r2, r3, r4, r5];
            }
            steps.push(Step {
                start: State::from_vec(t, y),
                end: State::from_vec(t_new, y_new),
                error_estimate: err,
                dense,
            });
            t = t_new;
            y = y_new;
            k1 = k7;

            if y[0].abs() >= cfg.s_max {
                break Termination::BlowupGuard;
            }
            if last {
                break Termination::ReachedTMax;
            }
            let mut fac = (SAFETY * err_old.powf(BETA) / err.max(1e-300).powf(EXPO)).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            if rejected {
                fac = fac.min(1.0);
            }
            err_old = err.max(1e-4);
            h = (h * fac).abs().min(cfg.max_step) * dir;
            rejected = false;
        } else {
            let fac = if err.is_finite() { (SAFETY * err.powf(-0.2)).max(FAC_MIN) } else { FAC_MIN };
            h *= fac;
            rejected = true;
        }

        if h.abs() <= 10.0 * f64::EPSILON * t.abs() || h.abs() < f64::MIN_POSITIVE {
            if steps.is_empty() {
                return Err(Error::StepUnderflow { t });
            }
            break Termination::StepUnderflow;
        }
    };

    Ok(Trajectory { form, config: cfg, steps, termination })
}

impl Trajectory {
    pub fn form(&self) -> EquationForm {
        self.form
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    /// Direction of integration: `1.0`, `-1.0`, or `0.0` for the bare origin.
    pub fn direction(&self) -> f64 {
        self.steps.first().map_or(0.0, |s| s.h().signum())
    }

    pub fn last_state(&self) -> State {
        self.steps.last().map_or(State::ORIGIN, |s| s.end)
    }

    /// Stored states: the origin followed by every accepted step end.
    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        std::iter::once(State::ORIGIN).chain(self.steps.iter().map(|s| s.end))
    }

    /// Closed interval of `t` covered by the accepted steps.
    pub fn coverage(&self) -> (f64, f64) {
        let end = self.last_state().t;
        (end.min(0.0), end.max(0.0))
    }

    fn covers(&self, t: f64) -> bool {
        let (lo, hi) = self.coverage();
        t >= lo && t <= hi
    }

    fn range_error(&self, t: f64) -> Error {
        let (lo, hi) = self.coverage();
        Error::OutOfRange { t, lo, hi }
    }

    fn step_index(&self, t: f64) -> usize {
        let dir = self.direction();
        let idx = self.steps.partition_point(|s| dir * s.end.t < dir * t);
        idx.min(self.steps.len() - 1)
    }

    /// Interpolated state at `t`.
    pub fn dense_eval(&self, t: f64) -> Result<State> {
        if !self.covers(t) {
            return Err(self.range_error(t));
        }
        if self.steps.is_empty() || t == 0.0 {
            return Ok(State::ORIGIN);
        }
        Ok(self.steps[self.step_index(t)].interpolate(t))
    }

    /// Roots of `g` along the trajectory in the half-open window `(lo, hi]`.
    ///
    /// Each accepted step is scanned at a few interior points for sign
    /// changes, and every bracketed change is refined to `root_tol` with
    /// Brent's method on the continuous extension. Tangential contacts that
    /// do not change sign are not guaranteed to be found.
    pub fn find_roots<G>(&self, g: G, window: (f64, f64)) -> Result<Vec<Root>>
    where
        G: Fn(&State) -> f64,
    {
        const SUBDIVISIONS: usize = 4;
        let (lo, hi) = window;
        if !(lo < hi) {
            return Err(Error::Domain(format!("empty root window ({lo}, {hi}]")));
        }
        if !self.covers(lo) {
            return Err(self.range_error(lo));
        }
        if !self.covers(hi) {
            return Err(self.range_error(hi));
        }
        let tol = self.config.root_tol;
        let mut roots: Vec<Root> = Vec::new();
        if self.steps.is_empty() {
            return Ok(roots);
        }

        let push = |r: Root, roots: &mut Vec<Root>| {
            if roots.last().is_none_or(|p| (r.t - p.t).abs() > 2.0 * tol) {
                roots.push(r);
            }
        };

        let eval = |t: f64| -> f64 {
            let step = &self.steps[self.step_index(t)];
            g(&step.interpolate(t))
        };

        // sample points in increasing t
        let mut points: Vec<f64> = vec![lo];
        let mut ordered: Vec<&Step> = self.steps.iter().collect();
        if self.direction() < 0.0 {
            ordered.reverse();
        }
        for step in ordered {
            let (a, b) = if step.start.t < step.end.t { (step.start.t, step.end.t) } else { (step.end.t, step.start.t) };
            if b <= lo || a >= hi {
                continue;
            }
            for k in 1..=SUBDIVISIONS {
                let p = a + (b - a) * k as f64 / SUBDIVISIONS as f64;
                if p > lo && p < hi {
                    points.push(p);
                }
            }
        }
        points.push(hi);
        points.dedup();

        let mut prev_t = lo;
        let mut prev_g = eval(lo);
        for &p in &points[1..] {
            let gp = eval(p);
            if gp == 0.0 {
                push(Root { t: p, width: 0.0 }, &mut roots);
            } else if prev_g != 0.0 && prev_g.signum() != gp.signum() {
                if let Some(r) = brent::brent(eval, prev_t, p, 0.5 * tol) {
                    push(Root { t: r.root, width: r.width }, &mut roots);
                }
            }
            if gp != 0.0 || prev_g == 0.0 {
                prev_g = gp;
            }
            prev_t = p;
        }
        Ok(roots)
    }

    /// States sampled every `spacing` from the origin to the end of coverage,
    /// always including the final state.
    pub fn sample(&self, spacing: f64) -> Result<Vec<State>> {
        if !(spacing > 0.0) {
            return Err(Error::Domain(format!("sample spacing must be positive, got {spacing}")));
        }
        let end = self.last_state().t;
        let dir = self.direction();
        let mut out = vec![State::ORIGIN];
        if dir == 0.0 {
            return Ok(out);
        }
        let n = (end.abs() / spacing).floor() as usize;
        for k in 1..=n {
            let t = dir * k as f64 * spacing;
            if t.abs() < end.abs() {
                out.push(self.dense_eval(t)?);
            }
        }
        out.push(self.last_state());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minus(t_max: f64) -> Trajectory {
        integrate(EquationForm::PiMinus, &IntegratorConfig::default().with_t_max(t_max)).unwrap()
    }

    #[test]
    fn zero_horizon_gives_origin_only() {
        let tr = minus(0.0);
        assert!(tr.steps().is_empty());
        assert_eq!(tr.termination(), Termination::ReachedTMax);
        assert_eq!(tr.dense_eval(0.0).unwrap(), State::ORIGIN);
        assert_eq!(tr.states().collect::<Vec<_>>(), vec![State::ORIGIN]);
    }

    #[test]
    fn pi_plus_hits_blowup_guard_before_1_83() {
        let tr = integrate(EquationForm::PiPlus, &IntegratorConfig::default()).unwrap();
        assert_eq!(tr.termination(), Termination::BlowupGuard);
        let last = tr.last_state();
        assert!(last.s >= 1e8);
        assert!(last.t < 1.83 && last.t > 1.82, "{}", last.t);
    }

    #[test]
    fn pi_minus_reaches_100_below_sqrt_300() {
        let tr = minus(100.0);
        assert_eq!(tr.termination(), Termination::ReachedTMax);
        let last = tr.last_state();
        assert_eq!(last.t, 100.0);
        assert!(last.s > 0.0 && last.s < 300f64.sqrt());
    }

    #[test]
    fn endpoints_are_strictly_increasing_and_reproduced() {
        let tr = minus(20.0);
        for w in tr.steps().windows(2) {
            assert!(w[0].end.t < w[1].end.t);
            assert_eq!(w[0].end, w[1].start);
        }
        for step in tr.steps() {
            assert_eq!(tr.dense_eval(step.end.t).unwrap(), step.end);
            assert_eq!(step.interpolate(step.start.t), step.start);
        }
    }

    #[test]
    fn dense_output_is_continuous_across_steps() {
        let tr = minus(10.0);
        for w in tr.steps().windows(2) {
            let t = w[0].end.t;
            let eps = 1e-9 * t;
            let left = w[0].interpolate(t - eps);
            let right = w[1].interpolate(t + eps);
            assert!((left.s - right.s).abs() < 1e-7, "{t}");
        }
    }

    #[test]
    fn dense_eval_squeeze_points() {
        let tr = minus(2.0);
        let s = tr.dense_eval(0.5).unwrap().s;
        assert!(s > 0.124_581_47 && s < 0.125, "{s}");
        assert!(tr.dense_eval(1.0).unwrap().s < 1.0);
        assert!(matches!(tr.dense_eval(2.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(tr.dense_eval(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn backward_integration_mirrors_pi_plus() {
        // s_minus(t) = -s_plus(-t)
        let back = integrate(EquationForm::PiPlus, &IntegratorConfig::default().with_t_max(-1.5)).unwrap();
        let fwd = minus(1.5);
        assert_eq!(back.coverage(), (-1.5, 0.0));
        for k in 1..=15 {
            let t = 0.1 * k as f64;
            let a = fwd.dense_eval(t).unwrap();
            let b = back.dense_eval(-t).unwrap();
            assert!((a.s + b.s).abs() < 1e-9, "{t}");
            assert!((a.sdot - b.sdot).abs() < 1e-9, "{t}");
        }
        for w in back.steps().windows(2) {
            assert!(w[0].end.t > w[1].end.t);
        }
    }

    #[test]
    fn tolerance_halving_changes_little() {
        let coarse = IntegratorConfig::default().with_t_max(50.0);
        let fine = coarse.scale_tolerances(0.5);
        let a = integrate(EquationForm::PiMinus, &coarse).unwrap();
        let b = integrate(EquationForm::PiMinus, &fine).unwrap();
        for t in [0.5, 1.0, 5.0, 12.5, 33.0, 50.0] {
            let d = (a.dense_eval(t).unwrap().s - b.dense_eval(t).unwrap().s).abs();
            assert!(d < 10.0 * coarse.rel_tol * 50.0, "t={t} diff={d}");
        }
    }

    #[test]
    fn quadrature_channel_matches_composite_simpson() {
        let tr = minus(30.0);
        let n = 60_000;
        let h = 30.0 / n as f64;
        let s = |t: f64| tr.dense_eval(t).unwrap().s;
        let mut acc = s(0.0) + s(30.0);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * s(i as f64 * h);
        }
        let simpson = acc * h / 3.0;
        let q = tr.last_state().q;
        assert!((simpson - q).abs() < 1e-7 * q.abs(), "{simpson} vs {q}");
    }

    #[test]
    fn pi_plus_lower_bounds_and_energy_growth() {
        let tr = integrate(EquationForm::PiPlus, &IntegratorConfig::default()).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for st in tr.steps().iter().map(|s| s.end) {
            if st.t > 0.05 {
                assert!(st.s > st.t.powi(3), "s at {}", st.t);
                assert!(st.sdot > 3.0 * st.t * st.t, "sdot at {}", st.t);
            }
            // sdot^2 - 4 s^3 relative to its size
            let energy = st.sdot * st.sdot - 4.0 * st.s.powi(3);
            let scale = (st.sdot * st.sdot).max(1.0);
            assert!(energy > prev - 1e-9 * scale, "energy at {}", st.t);
            prev = energy;
        }
    }

    #[test]
    fn roots_examples() {
        let tr = minus(10.0);
        assert!(tr.find_roots(|st| st.s, (0.0, 10.0)).unwrap().is_empty());
        let r = tr.find_roots(|st| st.s - st.t.sqrt(), (1e-6, 1.1)).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].t > 1.0 && r[0].t < 1.25f64.powf(0.4));
        assert!(r[0].width <= 1e-12, "{:?}", r);

        let plus = integrate(EquationForm::PiPlus, &IntegratorConfig::default()).unwrap();
        // below t ~ 0.05 the margin 6t^7/7 is smaller than the default tolerance
        let r = plus.find_roots(|st| st.sdot - 3.0 * st.t * st.t, (0.05, 1.0)).unwrap();
        assert!(r.is_empty(), "{r:?}");
    }

    #[test]
    fn roots_are_sorted_and_distinct() {
        let tr = minus(30.0);
        let r = tr.find_roots(|st| st.s - st.t.sqrt(), (1e-6, 30.0)).unwrap();
        assert!(r.len() > 10);
        for w in r.windows(2) {
            assert!(w[1].t > w[0].t + 1e-6);
        }
        assert!(tr.find_roots(|st| st.s, (0.0, 31.0)).is_err());
        assert!(tr.find_roots(|st| st.s, (3.0, 2.0)).is_err());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = IntegratorConfig::default();
        for bad in [
            IntegratorConfig { rel_tol: 0.0, ..base },
            IntegratorConfig { abs_tol: -1.0, ..base },
            IntegratorConfig { rel_tol: 1e-17, ..base },
            IntegratorConfig { max_step: 0.0, ..base },
            IntegratorConfig { t_max: f64::NAN, ..base },
        ] {
            assert!(matches!(integrate(EquationForm::Pi, &bad), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn flip_linear_fault_drives_pi_minus_negative() {
        let cfg = IntegratorConfig { fault: Some(Fault::FlipLinearTerm), ..IntegratorConfig::default() };
        let tr = integrate(EquationForm::PiMinus, &cfg).unwrap();
        assert_ne!(tr.termination(), Termination::ReachedTMax);
        assert!(tr.last_state().s < -1e7);
    }

    #[test]
    fn sample_spacing() {
        let tr = minus(1.0);
        let pts = tr.sample(0.25).unwrap();
        let ts: Vec<f64> = pts.iter().map(|p| p.t).collect();
        assert_eq!(ts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(tr.sample(0.0).is_err());
    }
}
