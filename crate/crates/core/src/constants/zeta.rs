//! Riemann and Hurwitz zeta functions for real arguments, by Euler-Maclaurin
//! summation. Used for the lattice corrections of singular pair sums.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

// B_{2j} / (2j)!
const BERNOULLI_OVER_FACT: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
];

/// Hurwitz zeta `sum_{k>=0} (k + a)^{-s}`, analytically continued to all real
/// `s != 1`; requires `a > 0`.
pub fn hurwitz_zeta<T: Real>(s: T, a: T) -> Result<T> {
    if (s - T::one()).abs() < lit(1e-12) {
        return Err(Error::Domain("zeta has a pole at s = 1".into()));
    }
    if !(a > T::zero()) {
        return Err(Error::Domain("hurwitz zeta needs a > 0".into()));
    }
    // Enough terms that the Bernoulli tail is far below double precision for
    // the moderate |s| this crate uses.
    let n = 24usize.max((s.abs().to_f64_lossy() * 2.0) as usize + 8);
    let mut sum = T::zero();
    for k in 0..n {
        sum += (T::from_usize_lossy(k) + a).powf(-s);
    }
    let big = T::from_usize_lossy(n) + a;
    sum += big.powf(T::one() - s) / (s - T::one());
    sum += lit::<T>(0.5) * big.powf(-s);
    // Rising factorial s (s+1) ... (s + 2j - 2).
    let mut rising = s;
    let mut power = big.powf(-s - T::one());
    let inv_big2 = T::one() / (big * big);
    for (j, &b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        if j > 0 {
            let k = T::from_usize_lossy(2 * j);
            rising = rising * (s + k - T::one()) * (s + k);
            power = power * inv_big2;
        }
        sum += lit::<T>(b) * rising * power;
    }
    Ok(sum)
}

/// Riemann zeta for real `s != 1`.
pub fn zeta<T: Real>(s: T) -> Result<T> {
    hurwitz_zeta(s, T::one())
}
