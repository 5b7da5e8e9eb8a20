//! Golden-section search for strictly unimodal objectives.

/// Minimizes a strictly unimodal function on [lo, hi] by golden-section
/// search, shrinking the bracket until it is narrower than `tol`, and
/// returns the bracket midpoint.
///
/// The final bracket width bounds the argument error by `tol`/2; callers
/// that need the argmin to better than the ~√ε floating-point noise floor of
/// function comparisons should polish the result with derivative
/// information.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    assert!(lo < hi, "golden_section_min: empty bracket");
    const INVPHI: f64 = 0.6180339887498949; // (√5 − 1)/2
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let m = golden_section_min(|x| (x - 2.5) * (x - 2.5) + 1.0, -10.0, 10.0, 1e-12);
        assert!((m - 2.5).abs() < 1e-7);
    }

    #[test]
    fn finds_asymmetric_minimum() {
        // y + 4/y on (0, ∞) has its minimum at y = 2.
        let m = golden_section_min(|x: f64| x + 4.0 / x, 0.1, 50.0, 1e-12);
        assert!((m - 2.0).abs() < 1e-6);
    }
}
