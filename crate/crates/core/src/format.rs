//! Text output formats: trajectory CSV, crossing tables, float formatting.
//!
//! Floats are written as the shortest decimal that round-trips to the same
//! `f64` (never more than 17 significant digits). Plain notation is used for
//! magnitudes in `[1e-4, 1e15)` and zero, exponent notation (`1.5e-7`)
//! otherwise. Non-finite values are written as `NaN`, `inf`, `-inf`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::integrator::State;
use crate::oscillation::{CrossingEvent, GapRecord};
use crate::series::CoefficientEntry;

pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub const TRACE_HEADER: &str = "t,s,sdot,q";

pub fn trace_csv(states: &[State]) -> String {
    let mut out = String::with_capacity(64 * (states.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for st in states {
        let _ = writeln!(out, "{},{},{},{}", fmt_f64(st.t), fmt_f64(st.s), fmt_f64(st.sdot), fmt_f64(st.q));
    }
    out
}

pub const CROSSINGS_HEADER: &str = "index,t,direction,gap_to_prev,bound,passed";

/// One row per crossing. `gap_to_prev`, `bound` and `passed` describe the
/// interval ending at this crossing and are empty on the first row.
pub fn crossings_csv(events: &[CrossingEvent], gaps: &[GapRecord]) -> String {
    let mut out = String::new();
    out.push_str(CROSSINGS_HEADER);
    out.push('\n');
    for (i, ev) in events.iter().enumerate() {
        let tail = match i.checked_sub(1).and_then(|j| gaps.get(j)) {
            Some(g) => format!("{},{},{}", fmt_f64(g.gap), fmt_f64(g.bound_value), g.passed),
            None => ",,".to_string(),
        };
        let _ = writeln!(out, "{},{},{},{}", ev.index, fmt_f64(ev.t), ev.direction.as_str(), tail);
    }
    out
}

pub const SERIES_HEADER: &str = "n,numerator,denominator,value";

pub fn series_csv(entries: &[CoefficientEntry], values: &[f64]) -> String {
    let mut out = String::new();
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for e in entries {
        let _ = writeln!(out, "{},{},{},{}", e.n, e.numerator, e.denominator, fmt_f64(values[e.n]));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillation::Direction;

    #[test]
    fn floats_round_trip() {
        for x in [0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-10, 123456.789, 1e20, 2.0f64.sqrt(), -7.25e-300] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
            assert!(digits <= 17 + 3, "{s}");
        }
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(1e-10), "1e-10");
        assert_eq!(fmt_f64(100.0), "100");
    }

    #[test]
    fn crossing_rows() {
        let events = [
            CrossingEvent { index: 0, t: 1.5, direction: Direction::Upward, refinement_width: 0.0 },
            CrossingEvent { index: 1, t: 2.25, direction: Direction::Downward, refinement_width: 0.0 },
        ];
        let gaps = crate::oscillation::gap_audit(&events);
        let csv = crossings_csv(&events, &gaps);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CROSSINGS_HEADER);
        assert_eq!(lines[1], "0,1.5,upward,,,");
        assert!(lines[2].starts_with("1,2.25,downward,0.75,"));
        assert!(lines[2].ends_with(",true"));
    }

    #[test]
    fn trace_rows() {
        let csv = trace_csv(&[State::ORIGIN, State { t: 0.5, s: 0.125, sdot: 0.75, q: 1e-20 }]);
        assert_eq!(csv, "t,s,sdot,q\n0,0,0,0\n0.5,0.125,0.75,1e-20\n");
    }
}
