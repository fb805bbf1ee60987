//! Real roots of the small polynomials behind the preset thresholds.

/// Evaluates `Σ cᵢ xⁱ` (coefficients from the constant term up) and its derivative.
fn horner(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Safeguarded Newton iteration on a bracketing interval `[lo, hi]`.
///
/// Falls back to bisection whenever a Newton step leaves the bracket. Panics
/// if the polynomial does not change sign on the interval.
pub fn bracketed_root(coeffs: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let (flo, fhi) = (horner(coeffs, lo).0, horner(coeffs, hi).0);
    assert!(flo * fhi <= 0.0, "no sign change on [{lo}, {hi}]");
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    let rising = fhi > 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (p, dp) = horner(coeffs, x);
        if p == 0.0 {
            return x;
        }
        if (p > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - p / dp;
        let next = if dp != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

/// Positive root of `x³ − 2x² + x − 1` (≈ 1.7549).
pub fn solve_high_phi() -> f64 {
    bracketed_root(&[-1.0, 1.0, -2.0, 1.0], 1.0, 3.0)
}

/// Real root of `x³ − x − 1` (≈ 1.3247), the smallest Pisot number.
pub fn smallest_pisot() -> f64 {
    bracketed_root(&[-1.0, -1.0, 0.0, 1.0], 1.0, 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = bracketed_root(&[-2.0, 0.0, 1.0], 0.0, 2.0);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn high_phi_residual_and_bracket() {
        let x = solve_high_phi();
        assert!((x.powi(3) - 2.0 * x * x + x - 1.0).abs() <= 1e-14);
        assert!(x > 1.75 && x < 1.76);
    }
}
