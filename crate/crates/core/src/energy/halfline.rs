//! Half-line energy of `u(x) = x^{(alpha-1)/2} v(ln x)` in logarithmic variables.
//!
//! With `x = e^s`, `y = e^t`, `beta = (alpha-1)/2` and `tau = s - t > 0`,
//! `int int_{(0,inf)^2} |u(x)-u(y)|^2 |x-y|^{-1-alpha}
//!   = 2 int int_{s>t} K(tau) |v(s) - e^{-beta tau} v(t)|^2 ds dt`,
//! `K(tau) = e^{-tau} (1 - e^{-tau})^{-1-alpha}`, and `int u^2 x^{-alpha} dx = int v^2 ds`.

use crate::constants::zeta;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::scalar::{lit, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogEnergy<T> {
    /// Half-line energy without the leading 1/2.
    pub energy: T,
    /// `int |u|^2 x^{-alpha} dx`.
    pub mass: T,
}

/// Energy and weighted mass for samples `v_i = v(s0 + i hs)` vanishing at both ends.
pub fn log_profile_energy<T: Real>(values: &[T], hs: T, alpha: T) -> Result<LogEnergy<T>> {
    if !(alpha > T::one() && alpha < lit(2.0)) {
        return Err(Error::Parameter("alpha must lie in (1, 2)".into()));
    }
    let n = values.len();
    let beta = (alpha - T::one()) * lit(0.5);
    let expo = -T::one() - alpha;
    let kernel: Vec<T> = (0..n)
        .map(|d| {
            let tau = T::from_usize_lossy(d) * hs;
            if d == 0 {
                T::zero()
            } else {
                (-tau).exp() * (-(-tau).exp_m1()).powf(expo)
            }
        })
        .collect();
    let damp: Vec<T> = (0..n).map(|d| (-beta * T::from_usize_lossy(d) * hs).exp()).collect();
    let mut pairs = T::zero();
    for i in 0..n {
        let mut row = T::zero();
        for j in 0..i {
            if values[i] == T::zero() && values[j] == T::zero() {
                continue;
            }
            let d = values[i] - damp[i - j] * values[j];
            row += d * d * kernel[i - j];
        }
        pairs += row;
    }
    let pairs = lit::<T>(2.0) * pairs * hs * hs;
    // singular diagonal: the pair difference behaves like tau (v' + beta v)
    let lam = -lit::<T>(2.0) * zeta(alpha - T::one())?;
    let inv2h = (hs + hs).recip();
    let mut grad = T::zero();
    for i in 0..n {
        let a = if i + 1 < n { values[i + 1] } else { T::zero() };
        let b = if i > 0 { values[i - 1] } else { T::zero() };
        let g = (a - b) * inv2h + beta * values[i];
        grad += g * g;
    }
    let diag = hs.powf(lit::<T>(3.0) - alpha) * lam * grad;
    // pairs with one point beyond the sampled cells
    let half = lit::<T>(0.5) * hs;
    let upper_tail = |tau0: T| -> Result<T> {
        let rho = (-tau0).exp();
        if rho <= lit(0.5) {
            // int_0^rho r^{alpha-1} (1-r)^{-1-alpha} dr as a binomial series
            let mut coef = T::one();
            let mut pow = rho.powf(alpha);
            let mut acc = T::zero();
            for k in 0..200usize {
                let kk = T::from_usize_lossy(k);
                let term = coef * pow / (alpha + kk);
                acc += term;
                if term < acc * lit(1e-17) {
                    break;
                }
                coef = coef * (T::one() + alpha + kk) / (kk + T::one());
                pow = pow * rho;
            }
            return Ok(acc);
        }
        let q0 = -(-tau0).exp_m1();
        Ok(integrate(
            |q: T| (T::one() - q).powf(alpha - T::one()) * q.powf(expo),
            q0,
            T::one(),
            Tolerance::relative(1e-12),
        )?
        .value)
    };
    let mut tails = T::zero();
    for i in 0..n {
        let v = values[i];
        if v == T::zero() {
            continue;
        }
        let below = T::from_usize_lossy(i) * hs + half;
        let above = T::from_usize_lossy(n - 1 - i) * hs + half;
        let q = -(-below).exp_m1();
        let lower = (q.powf(-alpha) - T::one()) / alpha;
        tails += v * v * (lower + upper_tail(above)?);
    }
    let tails = lit::<T>(2.0) * tails * hs;
    let mass = values.iter().map(|v| *v * *v).sum::<T>() * hs;
    Ok(LogEnergy { energy: pairs + diag + tails, mass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_sits_above_the_sharp_constant() {
        let alpha = 1.5f64;
        let r = 8.0;
        let hs = 1.0 / 16.0;
        let n = (2.0 * r / hs) as usize + 1;
        let v: Vec<f64> = (0..n)
            .map(|i| {
                let t = (-r + i as f64 * hs) / r;
                if t.abs() < 1.0 {
                    (-1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            })
            .collect();
        let e = log_profile_energy(&v, hs, alpha).unwrap();
        let q = 0.5 * e.energy / e.mass;
        let k = crate::constants::kappa(1, alpha).unwrap();
        assert!(q > k && q < 2.0 * k, "{q} {k}");
    }
}
