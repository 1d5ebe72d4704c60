//! The smooth cutoff `η` behind the Littlewood–Paley projectors and the
//! profile truncations.

fn flat(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn flat_prime(s: f64) -> f64 {
    if s > 0.0 {
        flat(s) / (s * s)
    } else {
        0.0
    }
}

/// Even `C^∞` cutoff: `1` on `|x| ≤ 1`, `0` on `|x| ≥ 2`, and the
/// normalized smooth step `h(2-|x|) / (h(2-|x|) + h(|x|-1))` with
/// `h(s) = exp(-1/s)` in between.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BumpFunction;

impl BumpFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        if r <= 1.0 {
            1.0
        } else if r >= 2.0 {
            0.0
        } else {
            let a = flat(2.0 - r);
            a / (a + flat(r - 1.0))
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let r = x.abs();
        if r <= 1.0 || r >= 2.0 {
            return 0.0;
        }
        let (a, b) = (2.0 - r, r - 1.0);
        let (ha, hb) = (flat(a), flat(b));
        let d = -(flat_prime(a) * hb + ha * flat_prime(b)) / (ha + hb).powi(2);
        d * x.signum()
    }
}

/// `η(x)`.
pub fn eta(x: f64) -> f64 {
    BumpFunction.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        for x in [0.0, 0.3, -0.99, 1.0, -1.0] {
            assert_eq!(eta(x), 1.0);
        }
        for x in [2.0, -2.0, 2.5, 100.0] {
            assert_eq!(eta(x), 0.0);
        }
    }

    #[test]
    fn bounded_and_monotone_on_transition() {
        let mut prev = 1.0;
        for i in 0..=2000 {
            let x = 1.0 + i as f64 / 2000.0;
            let v = eta(x);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        assert!((eta(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-6;
        for x in [1.1, 1.3, 1.5, 1.77, 1.95, -1.4] {
            let fd = (eta(x + h) - eta(x - h)) / (2.0 * h);
            assert!((fd - BumpFunction.derivative(x)).abs() < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn even() {
        for x in [0.5, 1.2, 1.8, 3.0] {
            assert_eq!(eta(x), eta(-x));
        }
    }
}
