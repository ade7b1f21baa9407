use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument accepted by [`gamma`].
pub const GAMMA_MAX_ARG: f64 = 50.0;

/// Euler's gamma function on `(0, 50]`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || x > lit(GAMMA_MAX_ARG) {
        return Err(Error::Domain(format!(
            "gamma is evaluated on (0, {GAMMA_MAX_ARG}], got {}",
            x.to_f64_lossy()
        )));
    }
    Ok(gamma_unchecked(x))
}

/// Lanczos evaluation without range checks; reflection below 1/2.
pub(crate) fn gamma_unchecked<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        // Reflection keeps the series in its accurate half-plane.
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma_unchecked(T::one() - x));
    }
    let z = x - T::one();
    let mut acc = lit::<T>(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += lit::<T>(c) / (z + T::from_usize_lossy(i));
    }
    let t = z + lit::<T>(LANCZOS_G) + half;
    // Split the power to avoid overflow of t^(z+1/2) near the top of the range.
    let p = t.powf(lit::<T>(0.5) * (z + half));
    (T::PI() + T::PI()).sqrt() * p * ((-t).exp() * p) * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn identity_values() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-13);
        assert!(rel(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-13);
    }

    #[test]
    fn factorials_over_the_whole_range() {
        let mut fact = 1.0f64;
        for k in 1..50u32 {
            // gamma(k + 1) = k!
            fact *= k as f64;
            let g = gamma(k as f64 + 1.0).unwrap();
            assert!(rel(g, fact) < 1e-12, "k={k}: {g} vs {fact}");
        }
    }

    #[test]
    fn half_integers_follow_the_recurrence() {
        // gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
        let mut v = std::f64::consts::PI.sqrt();
        for n in 0..40 {
            let x = n as f64 + 0.5;
            assert!(rel(gamma(x).unwrap(), v) < 1e-12, "x={x}");
            v *= x;
        }
    }

    #[test]
    fn reflection_region_matches_recurrence() {
        for &x in &[0.01, 0.1, 0.25, 0.4, 0.49] {
            let lhs = gamma(x).unwrap();
            let rhs = gamma(x + 1.0).unwrap() / x;
            assert!(rel(lhs, rhs) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(50.5).is_err());
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn single_precision_is_usable() {
        let g = gamma(4.5f32).unwrap();
        assert!(((g - 11.631_728) / 11.631_728).abs() < 1e-5);
    }
}
