use crate::energy::{log_profile_energy, LogEnergy};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const MIN_STEP: f64 = 1.0 / 256.0;

/// Member `k` of the half-line trial family
/// `u_k(x) = x^{(alpha-1)/2} psi(ln x / R_k)`, `R_k = 2^{k+1}`, with `psi` the
/// standard bump on `(-1, 1)`; stored on a uniform lattice in `s = ln x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalflineProfile<T> {
    pub alpha: T,
    pub k: usize,
    pub radius: T,
    pub hs: T,
    pub s0: T,
    pub values: Vec<T>,
}

fn psi<T: Real>(t: T) -> T {
    if t.abs() < T::one() {
        (-T::one() / (T::one() - t * t)).exp()
    } else {
        T::zero()
    }
}

fn sample<T: Real>(radius: T, hs: T) -> (T, Vec<T>) {
    let half = (radius / hs).round().to_f64_lossy() as usize;
    let s0 = -T::from_usize_lossy(half) * hs;
    let values = (0..=2 * half)
        .map(|i| psi((s0 + T::from_usize_lossy(i) * hs) / radius))
        .collect();
    (s0, values)
}

impl<T: Real> HalflineProfile<T> {
    pub fn eval(&self, x: T) -> T {
        if !(x > T::zero()) {
            return T::zero();
        }
        x.powf((self.alpha - T::one()) * lit(0.5)) * psi(x.ln() / self.radius)
    }

    /// Support `(e^{-R}, e^{R})`.
    pub fn support(&self) -> (T, T) {
        ((-self.radius).exp(), self.radius.exp())
    }

    pub fn energy(&self) -> Result<LogEnergy<T>> {
        log_profile_energy(&self.values, self.hs, self.alpha)
    }

    /// `(1/2) E / int |u|^2 x^{-alpha}`.
    pub fn quotient(&self) -> Result<T> {
        let e = self.energy()?;
        Ok(lit::<T>(0.5) * e.energy / e.mass)
    }
}

/// Builds member `k`, halving the log-step from 1/16 until the energy quotient
/// moves by less than 1% under one more halving.
pub fn halfline_sharpness_family<T: Real>(alpha: T, k: usize) -> Result<HalflineProfile<T>> {
    if !(alpha > T::one() && alpha < lit(2.0)) {
        return Err(Error::Parameter("alpha must lie in (1, 2)".into()));
    }
    if k == 0 || k > 12 {
        return Err(Error::Parameter("family index must lie in 1..=12".into()));
    }
    let radius = lit::<T>(2f64.powi(k as i32 + 1));
    let mut hs = lit::<T>(1.0 / 16.0);
    loop {
        let (s0, values) = sample(radius, hs);
        let member = HalflineProfile { alpha, k, radius, hs, s0, values };
        let (s1, fine) = sample(radius, hs * lit(0.5));
        let finer = HalflineProfile { hs: hs * lit(0.5), s0: s1, values: fine, ..member.clone() };
        let (a, b) = (member.quotient()?, finer.quotient()?);
        if ((a - b) / b).abs() < lit(0.01) {
            return Ok(member);
        }
        hs = hs * lit(0.5);
        if hs < lit(MIN_STEP) {
            return Err(Error::Resolution(format!(
                "family member {k} does not settle to 1% before log-step {MIN_STEP}"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_vanishes_near_zero_and_matches_samples() {
        let m = halfline_sharpness_family(1.5f64, 2).unwrap();
        assert_eq!(m.eval(1e-6), 0.0);
        assert_eq!(m.eval(0.0), 0.0);
        let i = m.values.len() / 2;
        assert!((m.s0 + i as f64 * m.hs).abs() < 1e-15);
        assert_eq!(m.eval(1.0), m.values[i]);
        let (lo, hi) = m.support();
        assert!(lo > 0.0 && hi > 1.0);
    }
}
