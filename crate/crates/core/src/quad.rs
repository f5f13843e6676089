//! One-dimensional quadrature helpers.

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || !delta.is_finite() {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫_a^b f(t) dt` for `0 < a < b`, integrated in `x = log t` so that each
/// decade gets the same resolution. `rel_tol` is relative to a coarse
/// estimate of the integral.
pub fn log_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let g = |x: f64| {
        let t = x.exp();
        f(t) * t
    };
    let (la, lb) = (a.ln(), b.ln());
    let coarse = midpoint(&g, la, lb, 64).abs();
    let tol = (rel_tol * coarse).max(f64::MIN_POSITIVE);
    adaptive_simpson(&g, la, lb, tol)
}

/// Composite midpoint rule with `n` cells.
pub fn midpoint(f: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|k| f(a + (k as f64 + 0.5) * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        let v = log_simpson(&|t: f64| 1.0 / t, 1.0, 1e6, 1e-12);
        assert!((v - 1e6f64.ln()).abs() < 1e-9);
        let v = log_simpson(&|t: f64| t.powf(-1.5), 1.0, 1e8, 1e-12);
        assert!((v - 2.0 * (1.0 - 1e-4)).abs() < 1e-9);
    }

    #[test]
    fn midpoint_is_exact_for_linear_functions() {
        assert!((midpoint(&|x| 3.0 * x + 1.0, 0.0, 2.0, 7) - 8.0).abs() < 1e-14);
    }
}
