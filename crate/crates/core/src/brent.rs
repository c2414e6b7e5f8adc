//! Safeguarded bracketing root refinement (Brent's method).

/// Result of a refinement: the root estimate and the width of the final
/// sign-change bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub root: f64,
    pub width: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 200;

/// Refine a root of `f` inside `[a, b]`, where `f(a)` and `f(b)` have opposite
/// signs (or one of them is zero). Returns `None` if the endpoints do not
/// bracket a root.
///
/// Iteration stops once the bracket is no wider than `xtol` (plus a few ulps
/// of the root), so the returned root is within `xtol` of a sign change.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Option<Refined>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(Refined { root: a, width: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Some(Refined { root: b, width: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if fb == 0.0 {
            return Some(Refined { root: b, width: 0.0, iterations: iter });
        }
        if m.abs() <= tol {
            return Some(Refined { root: b, width: (c - b).abs(), iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // interpolation step: secant or inverse quadratic
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Some(Refined { root: b, width: (c - b).abs(), iterations: MAX_ITER })
}
