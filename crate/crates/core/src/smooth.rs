//! C-infinity step and cutoff functions built from the `exp(-1/x)` mollifier.

fn mollifier(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`, monotone in between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let f = mollifier(x);
    let g = mollifier(1.0 - x);
    f / (f + g)
}

pub fn smooth_step_derivative(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let f = mollifier(x);
    let g = mollifier(1.0 - x);
    let df = f / (x * x);
    let dg = g / ((1.0 - x) * (1.0 - x));
    (df * g + f * dg) / ((f + g) * (f + g))
}

/// Virial cutoff: 1 on `|x| <= 1/3`, 0 on `|x| >= 2/3`, nonincreasing in `|x|`.
pub fn cutoff(x: f64) -> f64 {
    smooth_step(2.0 - 3.0 * x.abs())
}

pub fn cutoff_derivative(x: f64) -> f64 {
    -3.0 * x.signum() * smooth_step_derivative(2.0 - 3.0 * x.abs())
}

/// Window equal to 1 on `[a + w, b - w]` and 0 outside `(a, b)`.
pub fn window(r: f64, a: f64, b: f64, width: f64) -> f64 {
    smooth_step((r - a) / width) * smooth_step((b - r) / width)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_support() {
        for &x in &[0.0, 0.1, -0.2, 1.0 / 3.0] {
            assert_eq!(cutoff(x), 1.0);
        }
        for &x in &[2.0 / 3.0, 0.7, -5.0] {
            assert_eq!(cutoff(x), 0.0);
        }
        let mut prev = 1.0;
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            let c = cutoff(x);
            assert!(c <= prev + 1e-15);
            assert!(cutoff_derivative(x) <= 0.0);
            prev = c;
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for k in 1..20 {
            let x = k as f64 / 20.0;
            let fd = (smooth_step(x + h) - smooth_step(x - h)) / (2.0 * h);
            assert!((fd - smooth_step_derivative(x)).abs() < 1e-6, "x={x}");
            let y = 0.3 + x * 0.4;
            let fd = (cutoff(y + h) - cutoff(y - h)) / (2.0 * h);
            assert!((fd - cutoff_derivative(y)).abs() < 1e-5, "y={y}");
        }
    }
}
