use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use triple_zero::blowup::{analytic_lower_bound, bounding_integral, estimate_blowup, minimal_upper_bound};
use triple_zero::harness::{verify, CheckStatus, VerifyConfig};
use triple_zero::integrator::Fault;
use triple_zero::oscillation::{self, first_crossing_upper_bound, GapBoundKind};
use triple_zero::{convert_form, integrate, taylor_coefficients, EquationForm, IntegratorConfig, Point, Trajectory};

type Verdict = (bool, String);

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| if k + 1 == n { hi } else { (a + (b - a) * k as f64 / (n - 1) as f64).exp() }).collect()
}

fn minus(cfg: IntegratorConfig, t_max: f64) -> Trajectory {
    integrate(EquationForm::PiMinus, &cfg.with_t_max(t_max)).expect("pi-minus integration")
}

fn blowup_window() -> Verdict {
    let cfg = IntegratorConfig::default();
    let start = Instant::now();
    let est = estimate_blowup(&cfg, 0.01).expect("blow-up estimate");
    let elapsed = start.elapsed();
    let ok = 1.82 < est.lower && est.upper < 1.83 && est.width_reached && elapsed < Duration::from_secs(1);
    (ok, format!("bracket [{}, {}] in {:.3} s", est.lower, est.upper, elapsed.as_secs_f64()))
}

fn bounds_ordering() -> Verdict {
    let est = estimate_blowup(&IntegratorConfig::default(), 0.01).expect("blow-up estimate");
    let chain = [analytic_lower_bound(), bounding_integral(), est.lower, est.upper, minimal_upper_bound()];
    let gaps: Vec<f64> = chain.windows(2).map(|w| w[1] - w[0]).collect();
    let ok = (1.449..1.450).contains(&chain[0]) && (1.960..1.961).contains(&chain[4]) && gaps.iter().all(|&g| g > 1e-3);
    (ok, format!("chain {chain:?}, gaps {gaps:?}"))
}

fn first_crossing() -> Verdict {
    let cfg = IntegratorConfig::default();
    let t0 = |c: IntegratorConfig| oscillation::crossings(&minus(c, 1.5), 1.5).expect("crossings")[0];
    let base = t0(cfg);
    let halved = t0(cfg.scale_tolerances(0.5));
    let drift = (base.t - halved.t).abs();
    let ok = 1.0 < base.t && base.t < first_crossing_upper_bound() && drift <= 1e-8;
    (ok, format!("t0 = {}, bound {}, drift {drift:e}", base.t, first_crossing_upper_bound()))
}

fn series_exactness() -> Verdict {
    let ser = taylor_coefficients(EquationForm::PiMinus, 28).expect("series");
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let exact = ser.coeff(3) == r(1, 1) && ser.coeff(8) == r(-3, 28) && ser.coeff(13) == r(3, 364);
    let a18 = ser.coeff(18);
    let differs = a18 != r(-3, 13328);
    let sparse = (0..=28).all(|n| n % 5 == 3 || ser.coeff(n).is_zero());
    (exact && differs && sparse, format!("exact {exact}, a18 = {a18} differs {differs}, sparse {sparse}"))
}

fn first_integral() -> Verdict {
    let probes = log_spaced(1e-2, 100.0, 100);
    let worst = |tr: &Trajectory| {
        let mut ratio: f64 = 0.0;
        let mut largest: f64 = 0.0;
        for &t in &probes {
            let res = oscillation::first_integral_residual(tr, t).expect("residual").abs();
            let s = tr.dense_eval(t).expect("dense").s;
            ratio = ratio.max(res / (1e-7 * (12.0 * t * s).abs().max(1.0)));
            largest = largest.max(res);
        }
        (ratio, largest)
    };
    let cfg = IntegratorConfig::default();
    let (ratio, coarse) = worst(&minus(cfg, 100.0));
    let (_, fine) = worst(&minus(cfg.scale_tolerances(0.1), 100.0));
    let shrink = coarse / fine;
    let ok = ratio <= 1.0 && shrink >= 5.0;
    (ok, format!("worst residual/allowance {ratio:.3e}, largest residual {coarse:e} -> {fine:e} (x{shrink:.2})"))
}

fn bounds_audit() -> Verdict {
    let tr = minus(IntegratorConfig::default(), 100.0);
    let mut probes = log_spaced(1e-3, 100.0, 200);
    probes.extend(tr.states().map(|st| st.t).filter(|&t| t > 0.0));
    let main = oscillation::bounds_audit(&tr, &probes).expect("audit");
    let fine = IntegratorConfig { rel_tol: 1e-14, abs_tol: 1e-14, ..IntegratorConfig::default() };
    let sq = minus(fine, 0.9);
    let sq_probes: Vec<f64> = (0..31).map(|k| 0.3 + 0.02 * k as f64).collect();
    let squeeze = oscillation::bounds_audit(&sq, &sq_probes).expect("audit");
    let parts = [&main.positivity, &main.sqrt3t, &squeeze.squeeze_lower, &squeeze.squeeze_upper, &squeeze.refined_upper];
    let ok = parts.iter().all(|a| a.passed());
    let text = parts
        .iter()
        .map(|a| format!("{} {}/{} min margin {:e}", a.name, a.probes - a.violations, a.probes, a.worst_margin.unwrap_or(f64::NAN)))
        .collect::<Vec<_>>()
        .join("; ");
    (ok, text)
}

fn gap_audit() -> Verdict {
    let tr = minus(IntegratorConfig::default(), 100.0);
    let events = oscillation::crossings(&tr, 100.0).expect("crossings");
    let gaps = oscillation::gap_audit(&events);
    let worst = |kind| gaps.iter().filter(|g| g.bound_kind == kind).map(|g| g.margin).fold(f64::INFINITY, f64::min);
    let (below, above) = (worst(GapBoundKind::BelowMaxGap), worst(GapBoundKind::AboveMinGap));
    let ok = gaps.len() >= 20 && below > 0.0 && above > 0.0;
    (ok, format!("{} intervals, worst margins below {below:.4}, above {above:.4}", gaps.len()))
}

fn envelope() -> Verdict {
    let tr = minus(IntegratorConfig::default(), 500.0);
    let ratio = oscillation::envelope_stats(&tr, (0.0, 200.0)).expect("envelope").max_ratio;
    let early = oscillation::envelope_stats(&tr, (10.0, 100.0)).expect("envelope").max_scaled_dev;
    let late = oscillation::envelope_stats(&tr, (100.0, 500.0)).expect("envelope").max_scaled_dev;
    let ok = 1.0 < ratio && ratio < SQRT_2 && late <= early;
    (ok, format!("max s/sqrt(t) = {ratio}, scaled deviation {early} -> {late}"))
}

fn cross_form() -> Verdict {
    let cfg = IntegratorConfig { abs_tol: 1e-14, ..IntegratorConfig::default() };
    let alpha = EquationForm::PiPlus.scaling_from_pi().0;
    let fwd = integrate(EquationForm::Pi, &cfg.with_t_max(alpha + 0.05)).expect("pi forward");
    let bwd = integrate(EquationForm::Pi, &cfg.with_t_max(-alpha - 0.05)).expect("pi backward");
    let mut worst: f64 = 0.0;
    for form in [EquationForm::PiPlus, EquationForm::PiMinus] {
        let tr = integrate(form, &cfg.with_t_max(1.0)).expect("integration");
        for k in 0..20 {
            let t = 0.05 + 0.05 * k as f64;
            let st = tr.dense_eval(t).expect("dense");
            let p = convert_form(Point { t, s: st.s, sdot: st.sdot }, form, EquationForm::Pi);
            let r = if p.t >= 0.0 { &fwd } else { &bwd }.dense_eval(p.t).expect("dense");
            worst = worst.max((p.s - r.s).abs() / r.s.abs()).max((p.sdot - r.sdot).abs() / r.sdot.abs());
        }
    }
    (worst <= 1e-8, format!("20 probes per form, worst relative deviation {worst:e}"))
}

fn negative_control() -> Verdict {
    let mut cfg = VerifyConfig::default();
    cfg.integrator.t_max = 100.0;
    cfg.integrator.fault = Some(Fault::FlipLinearTerm);
    let report = verify(cfg).expect("report");
    let status = |id: &str| report.get(id).map(|c| c.status);
    let pos = status("minus-positivity");
    let below = status("minus-below-sqrt-3t");
    let ok = pos == Some(CheckStatus::Fail) && below == Some(CheckStatus::Fail) && !report.all_passed();
    (ok, format!("with the linear term flipped: positivity {pos:?}, below sqrt(3t) {below:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("blow-up window", blowup_window),
        ("analytic bounds ordering", bounds_ordering),
        ("first crossing", first_crossing),
        ("series exactness", series_exactness),
        ("first integral", first_integral),
        ("bounds audit", bounds_audit),
        ("gap audit", gap_audit),
        ("envelope", envelope),
        ("cross-form consistency", cross_form),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
