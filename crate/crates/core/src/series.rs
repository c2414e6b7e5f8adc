//! Exact Taylor expansion of the triple-zero transcendent about the origin.
//!
//! Every supported equation has the shape `s'' = c2 * s^2 + c1 * t`. Writing
//! `s = sum a_n t^n` and matching powers gives
//!
//! ```text
//! (n + 2)(n + 1) a_{n+2} = c1 [n == 1] + c2 * sum_{i+j=n} a_i a_j
//! ```
//!
//! with `a_0 = a_1 = 0`. The coefficients are kept as arbitrary-precision
//! rationals and only rounded when a series is evaluated.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order `taylor_coefficients` will compute.
pub const MAX_SERIES_ORDER: usize = 500;

/// Default expansion order: terms through `t^28`, six nonzero coefficients.
pub const DEFAULT_SERIES_ORDER: usize = 28;

/// Default bound on `|t|` accepted by [`SeriesExpansion::eval`].
pub const DEFAULT_TRUST_RADIUS: f64 = 0.8;

/// The three real normalisations of the first Painlevé equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationForm {
    /// `w'' = 6 w^2 + z`
    Pi,
    /// `s'' = 6 s^2 + 6 t`, the Boutroux normalisation.
    PiPlus,
    /// `s'' = 6 t - 6 s^2`
    PiMinus,
}

impl EquationForm {
    pub const ALL: [EquationForm; 3] = [EquationForm::Pi, EquationForm::PiPlus, EquationForm::PiMinus];

    /// Coefficient of `s^2` on the right-hand side.
    pub fn quadratic_coeff(self) -> i64 {
        match self {
            EquationForm::Pi | EquationForm::PiPlus => 6,
            EquationForm::PiMinus => -6,
        }
    }

    /// Coefficient of `t` on the right-hand side.
    pub fn linear_coeff(self) -> i64 {
        match self {
            EquationForm::Pi => 1,
            EquationForm::PiPlus | EquationForm::PiMinus => 6,
        }
    }

    pub fn rhs(self, t: f64, s: f64) -> f64 {
        self.quadratic_coeff() as f64 * s * s + self.linear_coeff() as f64 * t
    }

    /// Scaling `(alpha, beta)` such that `W(z) = beta * w(alpha * z)` maps a
    /// solution `w` of the `Pi` form onto a solution `W` of this form.
    pub fn scaling_from_pi(self) -> (f64, f64) {
        let alpha = 6f64.powf(0.2);
        let beta = 6f64.powf(0.4);
        match self {
            EquationForm::Pi => (1.0, 1.0),
            EquationForm::PiPlus => (alpha, beta),
            EquationForm::PiMinus => (-alpha, -beta),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EquationForm::Pi => "pi",
            EquationForm::PiPlus => "pi-plus",
            EquationForm::PiMinus => "pi-minus",
        }
    }
}

impl fmt::Display for EquationForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pi" => Ok(EquationForm::Pi),
            "pi-plus" | "piplus" | "pi+" => Ok(EquationForm::PiPlus),
            "pi-minus" | "piminus" | "pi-" => Ok(EquationForm::PiMinus),
            other => Err(format!("unknown equation form `{other}` (expected pi, pi-plus or pi-minus)")),
        }
    }
}

/// A point `(t, s, s')` on a solution curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub s: f64,
    pub sdot: f64,
}

/// Map a point on a solution of `from` to the corresponding point on the
/// rescaled solution of `to`.
pub fn convert_form(p: Point, from: EquationForm, to: EquationForm) -> Point {
    if from == to {
        return p;
    }
    let (a_from, b_from) = from.scaling_from_pi();
    let (a_to, b_to) = to.scaling_from_pi();
    // back to the Pi normalisation first
    let t = a_from * p.t;
    let w = p.s / b_from;
    let wdot = p.sdot / (b_from * a_from);
    Point { t: t / a_to, s: b_to * w, sdot: b_to * a_to * wdot }
}

/// One nonzero coefficient in exported form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub n: usize,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    form: EquationForm,
    coeffs: Vec<BigRational>,
    trust_radius: f64,
}

/// Exact Taylor coefficients `a_0..=a_order` of the triple-zero solution of `form`.
pub fn taylor_coefficients(form: EquationForm, order: usize) -> Result<SeriesExpansion> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::OrderTooLarge { requested: order, cap: MAX_SERIES_ORDER });
    }
    let c2 = BigRational::from_integer(BigInt::from(form.quadratic_coeff()));
    let c1 = BigRational::from_integer(BigInt::from(form.linear_coeff()));
    let mut a = vec![BigRational::zero(); order + 1];
    for m in 2..=order {
        let n = m - 2;
        let mut acc = if n == 1 { c1.clone() } else { BigRational::zero() };
        let mut conv = BigRational::zero();
        for i in 0..=n {
            if !a[i].is_zero() && !a[n - i].is_zero() {
                conv += &a[i] * &a[n - i];
            }
        }
        acc += &c2 * conv;
        let denom = BigInt::from((m * (m - 1)) as u64);
        a[m] = acc / BigRational::from_integer(denom);
    }
    Ok(SeriesExpansion { form, coeffs: a, trust_radius: DEFAULT_TRUST_RADIUS })
}

impl SeriesExpansion {
    pub fn form(&self) -> EquationForm {
        self.form
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^n`; zero beyond the computed order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn trust_radius(&self) -> f64 {
        self.trust_radius
    }

    pub fn with_trust_radius(mut self, radius: f64) -> Self {
        self.trust_radius = radius;
        self
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn nonzero_entries(&self) -> Vec<CoefficientEntry> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| CoefficientEntry {
                n,
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
            })
            .collect()
    }

    /// Evaluate the truncated series and its derivative at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !(t.abs() <= self.trust_radius) {
            return Err(Error::OutsideTrustRadius { t: t.abs(), radius: self.trust_radius });
        }
        let c = self.coeffs_f64();
        let mut s = 0.0;
        let mut sdot = 0.0;
        for (n, &a) in c.iter().enumerate().rev() {
            s = s * t + a;
            if n > 0 {
                sdot = sdot * t + n as f64 * a;
            }
        }
        Ok((s, sdot))
    }

    /// Coefficients of `s'' - c2 s^2 - c1 t` for the truncated polynomial,
    /// indexed by power of `t`. For an order-`N` expansion every entry below
    /// degree `N - 1` vanishes.
    pub fn ode_remainder(&self) -> Vec<BigRational> {
        let n = self.order();
        let mut out = vec![BigRational::zero(); 2 * n + 1];
        for (k, a) in self.coeffs.iter().enumerate().skip(2) {
            out[k - 2] += a * BigRational::from_integer(BigInt::from((k * (k - 1)) as u64));
        }
        let c2 = BigRational::from_integer(BigInt::from(self.form.quadratic_coeff()));
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, aj) in self.coeffs.iter().enumerate() {
                if !aj.is_zero() {
                    out[i + j] -= &c2 * ai * aj;
                }
            }
        }
        if out.len() > 1 {
            out[1] -= BigRational::from_integer(BigInt::from(self.form.linear_coeff()));
        }
        out
    }

    /// Lowest power of `t` with a nonzero entry in [`ode_remainder`](Self::ode_remainder).
    pub fn remainder_valuation(&self) -> Option<usize> {
        self.ode_remainder().iter().position(|c| !c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pi_minus_low_orders() {
        let s = taylor_coefficients(EquationForm::PiMinus, 8).unwrap();
        assert_eq!(s.coeff(3), q(1, 1));
        assert_eq!(s.coeff(8), q(-3, 28));
        for n in [0, 1, 2, 4, 5, 6, 7] {
            assert!(s.coeff(n).is_zero(), "a_{n}");
        }
        let s13 = taylor_coefficients(EquationForm::PiMinus, 13).unwrap();
        assert_eq!(s13.coeff(13), q(3, 364));
    }

    #[test]
    fn a18_differs_from_the_squeeze_polynomial() {
        // convolution written out by hand: 306 a18 = -6 (2 a3 a13 + a8^2)
        let a3 = q(1, 1);
        let a8 = q(-3, 28);
        let a13 = q(3, 364);
        let by_hand = q(-6, 306) * (q(2, 1) * &a3 * &a13 + &a8 * &a8);
        assert_eq!(by_hand, q(-95, 173264));
        let s = taylor_coefficients(EquationForm::PiMinus, 18).unwrap();
        assert_eq!(s.coeff(18), by_hand);
        assert_ne!(s.coeff(18), q(-3, 13328));
    }

    #[test]
    fn pi_third_derivative_is_one() {
        let s = taylor_coefficients(EquationForm::Pi, 3).unwrap();
        assert_eq!(s.coeff(3), q(1, 6));
        let p = taylor_coefficients(EquationForm::PiPlus, 3).unwrap();
        assert_eq!(p.coeff(3), q(1, 1));
    }

    #[test]
    fn sparsity_mod_five() {
        for form in EquationForm::ALL {
            let s = taylor_coefficients(form, 60).unwrap();
            for n in 0..=60 {
                assert_eq!(s.coeff(n).is_zero(), n % 5 != 3, "{form} a_{n}");
            }
        }
    }

    #[test]
    fn remainder_starts_at_order_minus_one_or_later() {
        for form in EquationForm::ALL {
            for order in [3, 8, 13, 18, 28, 31] {
                let s = taylor_coefficients(form, order).unwrap();
                let v = s.remainder_valuation().expect("truncation leaves a remainder");
                assert!(v + 1 >= order, "{form} order {order} valuation {v}");
            }
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(
            taylor_coefficients(EquationForm::Pi, MAX_SERIES_ORDER + 1),
            Err(Error::OrderTooLarge { .. })
        ));
        assert_eq!(taylor_coefficients(EquationForm::Pi, 0).unwrap().order(), 0);
    }

    #[test]
    fn eval_matches_squeeze_at_half() {
        let s = taylor_coefficients(EquationForm::PiMinus, 8).unwrap();
        assert_eq!(s.eval(0.0).unwrap(), (0.0, 0.0));
        let (v, _) = s.eval(0.5).unwrap();
        let lower = 0.125 - 3.0 / 28.0 * 0.5f64.powi(8);
        assert!(v > 0.124_581_47 && v < 0.125, "{v}");
        assert!(v >= lower);
        let p = taylor_coefficients(EquationForm::PiPlus, 8).unwrap();
        assert!(p.eval(0.2).unwrap().0 > 0.008);
    }

    #[test]
    fn eval_refuses_outside_trust_radius() {
        let s = taylor_coefficients(EquationForm::PiMinus, DEFAULT_SERIES_ORDER).unwrap();
        assert!(matches!(s.eval(0.81), Err(Error::OutsideTrustRadius { .. })));
        assert!(s.eval(f64::NAN).is_err());
        assert!(s.clone().with_trust_radius(1.0).eval(0.9).is_ok());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = taylor_coefficients(EquationForm::PiPlus, DEFAULT_SERIES_ORDER).unwrap();
        let h = 1e-6;
        let t = 0.6;
        let fd = (s.eval(t + h).unwrap().0 - s.eval(t - h).unwrap().0) / (2.0 * h);
        assert!((fd - s.eval(t).unwrap().1).abs() < 1e-8);
    }

    #[test]
    fn export_lists_only_nonzero_terms() {
        let s = taylor_coefficients(EquationForm::PiMinus, 18).unwrap();
        let e = s.nonzero_entries();
        assert_eq!(e.iter().map(|c| c.n).collect::<Vec<_>>(), vec![3, 8, 13, 18]);
        assert_eq!(e[1].numerator, "-3");
        assert_eq!(e[1].denominator, "28");
    }

    #[test]
    fn conversion_scalings() {
        let p = Point { t: 0.3, s: -0.2, sdot: 1.5 };
        assert_eq!(convert_form(p, EquationForm::Pi, EquationForm::Pi), p);
        let a = 6f64.powf(0.2);
        let b = 6f64.powf(0.4);
        let plus = convert_form(p, EquationForm::Pi, EquationForm::PiPlus);
        assert!((plus.t - p.t / a).abs() < 1e-15);
        assert!((plus.s - b * p.s).abs() < 1e-15);
        assert!((plus.sdot - a * b * p.sdot).abs() < 1e-14);
        let minus = convert_form(p, EquationForm::Pi, EquationForm::PiMinus);
        assert!((minus.t + p.t / a).abs() < 1e-15);
        assert!((minus.s + b * p.s).abs() < 1e-15);
        assert!((minus.sdot - a * b * p.sdot).abs() < 1e-14);
    }

    #[test]
    fn scaled_series_agree_across_forms() {
        // W(z) = beta w(alpha z) implies a_n(W) = beta alpha^n a_n(w)
        let pi = taylor_coefficients(EquationForm::Pi, 28).unwrap().coeffs_f64();
        for form in [EquationForm::PiPlus, EquationForm::PiMinus] {
            let (a, b) = form.scaling_from_pi();
            let other = taylor_coefficients(form, 28).unwrap().coeffs_f64();
            for n in 0..=28 {
                let expect = b * a.powi(n as i32) * pi[n];
                assert!((other[n] - expect).abs() <= 1e-13 * expect.abs().max(1e-300), "{form} n={n}");
            }
        }
    }

    #[test]
    fn form_names_round_trip() {
        for form in EquationForm::ALL {
            assert_eq!(form.name().parse::<EquationForm>().unwrap(), form);
        }
        assert!("pii".parse::<EquationForm>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_form() -> impl Strategy<Value = EquationForm> {
            prop_oneof![Just(EquationForm::Pi), Just(EquationForm::PiPlus), Just(EquationForm::PiMinus)]
        }

        proptest! {
            #[test]
            fn convert_round_trip(from in any_form(), to in any_form(),
                                  t in -50.0f64..50.0, s in -1e3f64..1e3, sdot in -1e4f64..1e4) {
                let p = Point { t, s, sdot };
                let back = convert_form(convert_form(p, from, to), to, from);
                let close = |x: f64, y: f64| (x - y).abs() <= 8.0 * f64::EPSILON * x.abs().max(y.abs()) + 1e-300;
                prop_assert!(close(back.t, t) && close(back.s, s) && close(back.sdot, sdot),
                    "{:?} -> {:?}", p, back);
            }
        }
    }
}
