//! Bracketed scalar root finding.
//!
//! Every transcendental equation in this crate (string wavenumbers, the
//! secular equation, the quasicontinuum resonance condition) is solved inside
//! a bracket that is known analytically, so the solver never needs to hunt
//! for sign changes and never evaluates outside the bracket. Functions with
//! poles at the bracket edges are handled by the callers, which shrink the
//! bracket by a guard before calling in.

use libm::fabs;

/// Maximum iterations; bisection alone reaches f64 resolution in ~60.
const MAX_ITER: usize = 128;

/// Brent's method: root of `f` on `[a, b]` given `f(a)` and `f(b)` of
/// opposite sign. Combines inverse quadratic interpolation, secant steps,
/// and bisection, keeping the bracket at every step.
///
/// Converges to `|interval| <= abs_tol + rel_tol * |root|` (floored at a few
/// ulps). Returns `None` when the endpoints do not straddle a sign change.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, x1: f64, x2: f64, rel_tol: f64, abs_tol: f64) -> Option<f64> {
    let (mut a, mut b) = (x1, x2);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return None;
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..MAX_ITER {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fabs(fc) < fabs(fb) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        // Convergence test on the half-interval, with an ulp floor so a
        // zero abs_tol still terminates.
        let tol1 = 2.0 * f64::EPSILON * fabs(b) + 0.5 * (abs_tol + rel_tol * fabs(b));
        let xm = 0.5 * (c - b);
        if fabs(xm) <= tol1 || fb == 0.0 {
            return Some(b);
        }
        if fabs(e) >= tol1 && fabs(fa) > fabs(fb) {
            // Attempt interpolation: secant if only two points are distinct,
            // inverse quadratic when all three are.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let r0 = fa / fc;
                let r1 = fb / fc;
                p = s * (2.0 * xm * r0 * (r0 - r1) - (b - a) * (r1 - 1.0));
                q = (r0 - 1.0) * (r1 - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = fabs(p);
            let min1 = 3.0 * xm * q - fabs(tol1 * q);
            let min2 = fabs(e * q);
            if 2.0 * p < if min1 < min2 { min1 } else { min2 } {
                // Interpolation accepted.
                e = d;
                d = p / q;
            } else {
                // Interpolation would leave the bracket or converge too
                // slowly; bisect.
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if fabs(d) > tol1 {
            b += d;
        } else {
            b += if xm >= 0.0 { tol1 } else { -tol1 };
        }
        fb = f(b);
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_root() {
        let r = brent(libm::cos, 0.0, 3.0, 1e-15, 0.0).unwrap();
        assert!((r - core::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn finds_cubic_root() {
        // x^3 - 2x - 5 has a single real root near 2.0945515.
        let r = brent(|x| x * x * x - 2.0 * x - 5.0, 2.0, 3.0, 1e-15, 0.0).unwrap();
        assert!((r - 2.094_551_481_542_326_5).abs() < 1e-14);
    }

    #[test]
    fn rejects_unbracketed_interval() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 0.0).is_none());
    }

    #[test]
    fn exact_endpoint_root_returned() {
        assert_eq!(brent(|x| x, 0.0, 1.0, 1e-12, 0.0), Some(0.0));
    }

    #[test]
    fn steep_function_near_pole() {
        // tan(x) + 0.3 x crosses zero between pi/2 and pi; the pole at pi/2
        // sits just outside the bracket.
        let f = |x: f64| libm::tan(x) + 0.3 * x;
        let lo = core::f64::consts::FRAC_PI_2 + 1e-9;
        let hi = core::f64::consts::PI - 1e-9;
        let r = brent(f, lo, hi, 1e-15, 0.0).unwrap();
        assert!(f(r).abs() < 1e-9, "residual {}", f(r));
    }
}
