//! Sharp constants and the special functions they are built from.
//!
//! * [`kappa`]: constant of the two-sided `p = 2` Hardy inequalities
//!   (half-space, interval, `M_alpha` weight).
//! * [`fs_constant`]: constant of the `L^p` inequalities with the one-sided
//!   `m_alpha` / distance weights.
//! * [`sphere_alpha_integral`]: `int_{S^{n-1}} |w_n|^alpha dw`, the normalizer
//!   of every direction average.

mod gamma;
mod zeta;

pub use gamma::{gamma, GAMMA_MAX_ARG};
pub use zeta::{hurwitz_zeta, zeta};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::scalar::{lit, Real};

/// Dimension and exponents of a fractional Hardy problem.
///
/// Each operation checks the window it needs; construction only enforces `n >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FracParams {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
}

impl FracParams {
    pub fn new(n: usize, alpha: f64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if !alpha.is_finite() || !p.is_finite() {
            return Err(Error::Parameter("alpha and p must be finite".into()));
        }
        Ok(Self { n, alpha, p })
    }

    /// `0 < alpha < 2`, needed by [`kappa`].
    pub fn check_kappa_window(&self) -> Result<()> {
        check_open(self.alpha, 0.0, 2.0, "alpha")
    }

    /// `1 < alpha < 2`, needed by the two-sided interval and `M_alpha` results.
    pub fn check_two_sided_window(&self) -> Result<()> {
        check_open(self.alpha, 1.0, 2.0, "alpha")
    }

    /// `1 < p < inf` and `1 < alpha < p`, needed by [`fs_constant`].
    pub fn check_fs_window(&self) -> Result<()> {
        check_open(self.p, 1.0, f64::INFINITY, "p")?;
        check_open(self.alpha, 1.0, self.p, "alpha")
    }
}

pub(crate) fn check_open(v: f64, lo: f64, hi: f64, name: &str) -> Result<()> {
    if v > lo && v < hi {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} = {v} outside the open window ({lo}, {hi})"
        )))
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Parameter("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `int_{S^{n-1}} |w_1|^q dw = 2 pi^{(n-1)/2} Gamma((1+q)/2) / Gamma((n+q)/2)` for any `q > -1`.
pub(crate) fn abs_moment<T: Real>(n: usize, q: T) -> Result<T> {
    let half = lit::<T>(0.5);
    let nn = T::from_usize_lossy(n);
    let num = gamma(half * (T::one() + q))?;
    let den = gamma(half * (nn + q))?;
    Ok(lit::<T>(2.0) * T::PI().powf(half * (nn - T::one())) * num / den)
}

/// Closed form of `int_{S^{n-1}} |w_n|^alpha dw` for `alpha in (0, 2]`.
pub fn sphere_alpha_integral<T: Real>(n: usize, alpha: T) -> Result<T> {
    check_dim(n)?;
    if !(alpha > T::zero() && alpha <= lit(2.0)) {
        return Err(Error::Parameter(format!(
            "sphere integral needs alpha in (0, 2], got {}",
            alpha.to_f64_lossy()
        )));
    }
    abs_moment(n, alpha)
}

/// Sharp half-space constant
/// `pi^{(n-1)/2} Gamma((1+a)/2)/Gamma((n+a)/2) (1/a) [2^{1-a} pi^{-1/2} Gamma((2-a)/2) Gamma((1+a)/2) - 1]`.
///
/// Vanishes at `alpha = 1` and is positive elsewhere on `(0, 2)`.
pub fn kappa<T: Real>(n: usize, alpha: T) -> Result<T> {
    check_dim(n)?;
    check_open(alpha.to_f64_lossy(), 0.0, 2.0, "alpha")?;
    let half = lit::<T>(0.5);
    let one = T::one();
    let nn = T::from_usize_lossy(n);
    let g1 = gamma(half * (one + alpha))?;
    let prefactor = T::PI().powf(half * (nn - one)) * g1 / gamma(half * (nn + alpha))?;
    let two = lit::<T>(2.0);
    let bracket = two.powf(one - alpha) / T::PI().sqrt() * gamma(half * (two - alpha))? * g1 - one;
    Ok(prefactor * bracket / alpha)
}

/// Radial integral `int_0^1 |1 - r^{(alpha-1)/p}|^p (1-r)^{-1-alpha} dr`.
///
/// Split at `r = 1/2`; the upper half is written in `u = 1 - r` and further
/// substituted `u = v^m`, `m = 1/(p - alpha)`, which turns the endpoint
/// behaviour `u^{p-1-alpha}` into a bounded integrand.
pub fn fs_radial_integral<T: Real>(p: T, alpha: T) -> Result<T> {
    let one = T::one();
    let half = lit::<T>(0.5);
    let gam = (alpha - one) / p;
    let tol = Tolerance {
        abs: 1e-13,
        rel: 1e-13,
        max_intervals: 4000,
    };
    if gam == T::zero() {
        return Ok(T::zero());
    }
    let lower = integrate(
        |r: T| (one - r.powf(gam)).abs().powf(p) * (one - r).powf(-one - alpha),
        T::zero(),
        half,
        tol,
    )?;
    let m = one / (p - alpha);
    let vmax = half.powf(p - alpha);
    let upper = integrate(
        |v: T| {
            if v <= T::zero() {
                return T::zero();
            }
            let u = v.powf(m);
            // 1 - (1-u)^gam without cancellation.
            let diff = -(gam * (-u).ln_1p()).exp_m1();
            // diff^p u^{-1-alpha} du, du = m v^{m-1} dv
            let ratio = diff / u;
            m * ratio.abs().powf(p) * v.powf(m * (p - one - alpha) + m - one)
        },
        T::zero(),
        vmax,
        tol,
    )?;
    Ok(lower.value + upper.value)
}

/// Sharp constant of the `L^p` inequalities,
/// `2 pi^{(n-1)/2} Gamma((1+a)/2)/Gamma((n+a)/2) * fs_radial_integral(p, a)`.
pub fn fs_constant<T: Real>(n: usize, p: T, alpha: T) -> Result<T> {
    check_dim(n)?;
    check_open(p.to_f64_lossy(), 1.0, f64::INFINITY, "p")?;
    check_open(alpha.to_f64_lossy(), 1.0, p.to_f64_lossy(), "alpha")?;
    Ok(abs_moment(n, alpha)? * fs_radial_integral(p, alpha)?)
}
