//! Scalar root bracketing and maximisation helpers.

/// Bisection for a sign change of `f` on `[lo, hi]`. Returns the midpoint of the final
/// bracket once it is narrower than `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`. On exact ties the lower abscissa is kept.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Vertex of the parabola through three equally spaced samples `(x - h, x, x + h)`.
/// Falls back to the middle sample when the samples are collinear.
pub fn parabolic_peak(x: f64, h: f64, y_left: f64, y_mid: f64, y_right: f64) -> (f64, f64) {
    let curvature = y_left - 2.0 * y_mid + y_right;
    if curvature >= 0.0 {
        return (x, y_mid);
    }
    let shift = 0.5 * (y_left - y_right) / curvature;
    let peak = y_mid - 0.25 * (y_left - y_right) * shift;
    (x + shift * h, peak)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        // a flat maximum is only located to about sqrt(machine epsilon)
        let (x, y) = golden_max(|x| 3.0 - (x - 0.3).powi(2), -1.0, 2.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((y - 3.0).abs() < 1e-15);
    }

    #[test]
    fn parabolic_peak_is_exact_for_parabolas() {
        let g = |x: f64| 1.0 - 2.0 * (x - 5.4).powi(2);
        let (x, y) = parabolic_peak(5.5, 0.25, g(5.25), g(5.5), g(5.75));
        assert!((x - 5.4).abs() < 1e-12);
        assert!((y - 1.0).abs() < 1e-12);
    }
}
