//! Regularized lattice constants for the singular diagonal of n-D pair sums.
//!
//! For a unit vector `v` the correction constant is
//! `Lambda(v) = lim_R [ int_{R^n} g_R - sum_{m in Z^n, m != 0} g_R(m) ]` with
//! `g_R(z) = |v.z|^p |z|^{-n-alpha} phi(|z| / R)` and `phi` a smooth cutoff.
//! Adding `h^{n+p-alpha} |grad f|^p Lambda` per node turns the punctured lattice
//! sum into the integral up to higher-order terms.

use crate::constants::abs_moment;
use crate::energy::one_d::diagonal_constant_1d;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::scalar::{lit, Real};

fn smooth_step<T: Real>(t: T) -> T {
    let g = |u: T| if u > T::zero() { (-u.recip()).exp() } else { T::zero() };
    let a = g(T::one() - t);
    a / (a + g(t))
}

/// Cutoff equal to 1 on `[0, 1/2]`, 0 from 1 on, smooth in between.
fn cutoff<T: Real>(s: T) -> T {
    let half = lit::<T>(0.5);
    if s <= half {
        T::one()
    } else if s >= T::one() {
        T::zero()
    } else {
        smooth_step(s + s - T::one())
    }
}

fn radius_for(n: usize) -> i64 {
    match n {
        2 => 32,
        _ => 16,
    }
}

/// `Lambda(v)` by direct regularized summation with cutoff radius `r`.
pub(crate) fn lattice_constant<T: Real>(n: usize, p: T, alpha: T, v: &[T], r: i64) -> Result<T> {
    let e = p - alpha;
    let radial = integrate(
        |s: T| s.powf(e - T::one()) * cutoff(s),
        lit(0.5),
        T::one(),
        Tolerance::relative(1e-14),
    )?
    .value
        + lit::<T>(0.5).powf(e) / e;
    let rr = T::from_i64(r).unwrap();
    let integral = abs_moment(n, p)? * rr.powf(e) * radial;
    let expo = -T::from_usize_lossy(n) - alpha;
    let mut sum = T::zero();
    let term = |m: &[i64]| -> T {
        let mf: Vec<T> = m.iter().map(|&c| T::from_i64(c).unwrap()).collect();
        let len2 = mf.iter().fold(T::zero(), |a, &c| a + c * c);
        let len = len2.sqrt();
        let w = cutoff(len / rr);
        if w == T::zero() {
            return T::zero();
        }
        let dot = mf.iter().zip(v).fold(T::zero(), |a, (c, d)| a + *c * *d);
        dot.abs().powf(p) * len.powf(expo) * w
    };
    match n {
        2 => {
            for a in -r..=r {
                let mut row = T::zero();
                for b in -r..=r {
                    if a != 0 || b != 0 {
                        row += term(&[a, b]);
                    }
                }
                sum += row;
            }
        }
        3 => {
            for a in -r..=r {
                let mut plane = T::zero();
                for b in -r..=r {
                    for c in -r..=r {
                        if a != 0 || b != 0 || c != 0 {
                            plane += term(&[a, b, c]);
                        }
                    }
                }
                sum += plane;
            }
        }
        _ => return Err(Error::UnsupportedDimension(n)),
    }
    Ok(integral - sum)
}

#[derive(Clone, Debug)]
enum Shape<T> {
    Constant(T),
    /// Samples on `[0, pi/4]`, extended by the square lattice symmetries.
    Angular(Vec<T>),
    Direct,
}

/// Diagonal correction `|g|^p Lambda(g / |g|)` for a given gradient `g`.
#[derive(Clone, Debug)]
pub struct LatticeCorrection<T> {
    n: usize,
    p: T,
    alpha: T,
    shape: Shape<T>,
}

const ANGLE_SAMPLES: usize = 129;

impl<T: Real> LatticeCorrection<T> {
    pub fn new(n: usize, p: T, alpha: T) -> Result<Self> {
        crate::energy::one_d::check_pa(p, alpha)?;
        let shape = match n {
            1 => Shape::Constant(diagonal_constant_1d(p, alpha)?),
            2 | 3 if p == lit(2.0) => {
                // quadratic forms on a cubic lattice are isotropic
                let mut e = vec![T::zero(); n];
                e[0] = T::one();
                Shape::Constant(lattice_constant(n, p, alpha, &e, radius_for(n))?)
            }
            2 => {
                let step = T::FRAC_PI_4() / T::from_usize_lossy(ANGLE_SAMPLES - 1);
                let table = (0..ANGLE_SAMPLES)
                    .map(|k| {
                        let th = T::from_usize_lossy(k) * step;
                        lattice_constant(2, p, alpha, &[th.cos(), th.sin()], radius_for(2))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Shape::Angular(table)
            }
            3 => Shape::Direct,
            _ => return Err(Error::UnsupportedDimension(n)),
        };
        Ok(Self { n, p, alpha, shape })
    }

    /// `Lambda(v)` for a unit vector.
    pub fn constant(&self, v: &[T]) -> T {
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Angular(table) => {
                let (a, b) = (v[0].abs(), v[1].abs());
                let (lo, hi) = if a >= b { (b, a) } else { (a, b) };
                let th = lo.atan2(hi);
                let u = th / (T::FRAC_PI_4() / T::from_usize_lossy(ANGLE_SAMPLES - 1));
                let k = (u.floor().to_f64_lossy() as usize).min(ANGLE_SAMPLES - 2);
                let t = u - T::from_usize_lossy(k);
                table[k] * (T::one() - t) + table[k + 1] * t
            }
            Shape::Direct => lattice_constant(self.n, self.p, self.alpha, v, radius_for(self.n))
                .unwrap_or_else(|_| T::nan()),
        }
    }

    pub fn value(&self, grad: &[T]) -> T {
        let len = grad.iter().fold(T::zero(), |a, &c| a + c * c).sqrt();
        if len == T::zero() {
            return T::zero();
        }
        let v: Vec<T> = grad.iter().map(|&c| c / len).collect();
        len.powf(self.p) * self.constant(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{hurwitz_zeta, zeta};

    fn dirichlet_beta(s: f64) -> f64 {
        4f64.powf(-s) * (hurwitz_zeta(s, 0.25).unwrap() - hurwitz_zeta(s, 0.75).unwrap())
    }

    #[test]
    fn one_dimensional_sum_matches_zeta() {
        // the 1-D analogue of the regularized sum, evaluated directly
        for (p, a) in [(2.0f64, 1.5f64), (3.0, 2.0), (2.0, 1.25)] {
            let r = 64i64;
            let e = p - a;
            let radial = integrate(|s: f64| s.powf(e - 1.0) * cutoff(s), 0.5, 1.0, Tolerance::relative(1e-14))
                .unwrap()
                .value
                + 0.5f64.powf(e) / e;
            let integral = 2.0 * (r as f64).powf(e) * radial;
            let sum: f64 = (1..=r).map(|m| 2.0 * (m as f64).powf(e - 1.0) * cutoff(m as f64 / r as f64)).sum();
            let want = -2.0 * zeta(1.0 + a - p).unwrap();
            assert!((integral - sum - want).abs() < 1e-9, "{} {want}", integral - sum);
        }
    }

    #[test]
    fn square_lattice_matches_epstein_zeta() {
        for a in [1.25f64, 1.5, 1.75] {
            let got = LatticeCorrection::new(2, 2.0, a).unwrap().constant(&[1.0, 0.0]);
            let want = -2.0 * zeta(a / 2.0).unwrap() * dirichlet_beta(a / 2.0);
            assert!((got - want).abs() < 1e-7 * want.abs(), "a={a} {got} {want}");
        }
    }

    #[test]
    fn cubic_lattice_is_stable_in_radius() {
        let e = [1.0, 0.0, 0.0];
        let a = lattice_constant(3, 2.0f64, 1.5, &e, 12).unwrap();
        let b = lattice_constant(3, 2.0f64, 1.5, &e, 16).unwrap();
        assert!((a - b).abs() < 1e-5 * b.abs(), "{a} {b}");
        // isotropy
        let s = 1.0 / 3f64.sqrt();
        let c = lattice_constant(3, 2.0f64, 1.5, &[s, s, s], 16).unwrap();
        assert!((c - b).abs() < 1e-8 * b.abs());
    }

    #[test]
    fn anisotropic_table_is_symmetric_and_converged() {
        let lc = LatticeCorrection::new(2, 3.0f64, 1.5).unwrap();
        let v = [0.6, 0.8];
        let a = lc.constant(&v);
        assert_eq!(a, lc.constant(&[0.8, -0.6]));
        let direct = lattice_constant(2, 3.0, 1.5, &v, 32).unwrap();
        assert!((a - direct).abs() < 1e-4 * direct.abs(), "{a} {direct}");
        let wider = lattice_constant(2, 3.0, 1.5, &v, 48).unwrap();
        assert!((wider - direct).abs() < 1e-5 * direct.abs(), "{wider} {direct}");
    }
}
