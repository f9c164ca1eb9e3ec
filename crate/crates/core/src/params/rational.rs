//! Continued-fraction reconstruction of rationals from floating values.

use num_rational::Rational64;

/// Closest continued-fraction convergent to `x` with denominator at most
/// `max_den`, provided it lies within `tol` of `x`.
pub fn approximate(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    if !x.is_finite() || max_den < 1 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (x - p1 as f64 / q1 as f64).abs() <= tol {
            return Some(Rational64::new(p1 as i64, q1 as i64));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 > 0 && (x - p1 as f64 / q1 as f64).abs() <= tol {
        Some(Rational64::new(p1 as i64, q1 as i64))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_fractions() {
        assert_eq!(approximate(2.5, 64, 1e-9), Some(Rational64::new(5, 2)));
        assert_eq!(approximate(7.0 / 3.0 + 1e-11, 64, 1e-9), Some(Rational64::new(7, 3)));
        assert_eq!(approximate(-0.75, 64, 1e-9), Some(Rational64::new(-3, 4)));
        assert_eq!(approximate(3.0, 64, 1e-9), Some(Rational64::from_integer(3)));
        assert_eq!(approximate(std::f64::consts::PI, 64, 1e-9), None);
        assert_eq!(approximate(f64::NAN, 64, 1e-9), None);
    }

    #[test]
    fn large_denominators() {
        let x = 123_457.0 / 999_983.0;
        assert_eq!(approximate(x, 1_000_000, 1e-13), Some(Rational64::new(123_457, 999_983)));
        assert_eq!(approximate(x, 1000, 1e-13), None);
    }
}
