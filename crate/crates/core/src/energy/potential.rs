//! Ground-state potential `V(x) = 2 omega(x)^{1-p} PV int (omega(x) - omega(y))
//! |omega(x) - omega(y)|^{p-2} |x - y|^{-1-alpha} dy` with `omega(y) = y^{(alpha-1)/p}`.

use crate::energy::one_d::check_pa;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breaks, Tolerance};
use crate::scalar::{lit, Real};

fn tol() -> Tolerance {
    Tolerance { abs: 0.0, rel: 1e-10, max_intervals: 4000 }
}

#[inline]
fn signed_pow<T: Real>(u: T, q: T) -> T {
    if u >= T::zero() {
        u.powf(q)
    } else {
        -(-u).powf(q)
    }
}

/// `2 - (1+t)^g - (1-t)^g` without cancellation for small `t`.
fn second_difference<T: Real>(t: T, g: T) -> T {
    if t < lit(0.1) {
        // -2 sum_{k>=1} binom(g, 2k) t^{2k}
        let mut coef = T::one();
        let mut acc = T::zero();
        let t2 = t * t;
        let mut pw = T::one();
        for k in 1..=16 {
            let j = T::from_usize_lossy(2 * k);
            coef = coef * (g - j + lit(2.0)) * (g - j + T::one()) / ((j - T::one()) * j);
            pw = pw * t2;
            acc += coef * pw;
        }
        -(acc + acc)
    } else {
        let two = lit::<T>(2.0);
        two - (T::one() + t).powf(g) - (T::one() - t).powf(g)
    }
}

struct Setup<T> {
    x: T,
    p: T,
    alpha: T,
    g: T,
    wx: T,
}

impl<T: Real> Setup<T> {
    fn new(x: T, p: T, alpha: T) -> Result<Self> {
        check_pa(p, alpha)?;
        if !(alpha > T::one()) {
            return Err(Error::Parameter("alpha must exceed 1".into()));
        }
        let g = (alpha - T::one()) / p;
        Ok(Self { x, p, alpha, g, wx: x.powf(g) })
    }

    /// One-sided integrand at `y`.
    fn integrand(&self, y: T) -> T {
        let u = self.wx - y.powf(self.g);
        signed_pow(u, self.p - T::one()) * (self.x - y).abs().powf(-T::one() - self.alpha)
    }

    /// `G(x + tau) + G(x - tau)`, stable as `tau -> 0`.
    fn paired(&self, tau: T) -> T {
        let t = tau / self.x;
        let g = self.g;
        // u_- = omega(x) - omega(x - tau) > 0 and b = -u_+ > 0; the pair sums to
        // u_-^q - b^q with u_- - b a second difference
        let b = self.wx * (g * t.ln_1p()).exp_m1();
        let diff = self.wx * second_difference(t, g);
        let q = self.p - T::one();
        let num = b.powf(q) * (q * (diff / b).ln_1p()).exp_m1();
        num * tau.powf(-T::one() - self.alpha)
    }

    /// `int_0^r [G(x + tau) + G(x - tau)] dtau` with `tau = r v^m`.
    fn symmetric_part(&self, r: T) -> Result<T> {
        let m = (self.p - self.alpha).recip();
        let f = |v: T| {
            if v <= T::zero() {
                return T::zero();
            }
            let tau = r * v.powf(m);
            self.paired(tau) * r * m * v.powf(m - T::one())
        };
        Ok(integrate(f, T::zero(), T::one(), tol())?.value)
    }
}

/// `V(x)` for the unit interval, `x in (0, 1)`.
pub fn fs_potential<T: Real>(x: T, p: T, alpha: T) -> Result<T> {
    if !(x > T::zero() && x < T::one()) {
        return Err(Error::Domain("fs_potential needs x in (0, 1)".into()));
    }
    let s = Setup::new(x, p, alpha)?;
    let r = x.min(T::one() - x);
    let mut total = s.symmetric_part(r)?;
    let two_x = x + x;
    if two_x < T::one() {
        let f = |y: T| s.integrand(y);
        let brk = [two_x, (two_x + T::one()) * lit(0.5), T::one()];
        total += integrate_with_breaks(f, &brk, tol())?.value;
    } else if two_x > T::one() {
        // substitute y = z^{1/g} to flatten the root singularity of omega at 0
        let top = (two_x - T::one()).powf(s.g);
        let ig = s.g.recip();
        let f = |z: T| {
            if z <= T::zero() {
                return T::zero();
            }
            let y = z.powf(ig);
            s.integrand(y) * ig * y / z
        };
        total += integrate(f, T::zero(), top, tol())?.value;
    }
    Ok(lit::<T>(2.0) * total / s.wx.powf(p - T::one()))
}

/// `V_Y(x)`: the potential with `int_0^Y` in place of `int_0^1`, and a bound on
/// `|V_Y(x) - V_inf(x)|` from the kernel decay.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalflinePotential<T> {
    pub value: T,
    pub tail_bound: T,
}

pub fn fs_potential_halfline<T: Real>(x: T, p: T, alpha: T, y_max: T) -> Result<HalflinePotential<T>> {
    if !(x > T::zero() && x + x < y_max) {
        return Err(Error::Domain("half-line potential needs 0 < 2x < Y".into()));
    }
    let s = Setup::new(x, p, alpha)?;
    let mut total = s.symmetric_part(x)?;
    let two_x = x + x;
    let mut brk = vec![two_x];
    let mut b = two_x;
    while b * lit(4.0) < y_max {
        b = b * lit(4.0);
        brk.push(b);
    }
    brk.push(y_max);
    total += integrate_with_breaks(|y: T| s.integrand(y), &brk, tol())?.value;
    let norm = s.wx.powf(p - T::one());
    let e = s.g * (p - T::one()) - alpha;
    let tail = lit::<T>(2.0) * (T::one() - x / y_max).powf(-T::one() - alpha) * y_max.powf(e) / (-e * norm);
    Ok(HalflinePotential {
        value: lit::<T>(2.0) * total / norm,
        tail_bound: tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::fs_constant;

    #[test]
    fn second_difference_matches_direct_formula() {
        for &t in &[0.05f64, 0.09, 0.11, 0.3] {
            let g = 0.37;
            let d = 2.0 - (1.0 + t).powf(g) - (1.0 - t).powf(g);
            assert!((second_difference(t, g) - d).abs() < 1e-14);
        }
    }

    #[test]
    fn pairing_matches_naive_sum_away_from_zero() {
        let s = Setup::new(0.4f64, 2.5, 1.25).unwrap();
        for &tau in &[0.01, 0.1, 0.3] {
            let naive = s.integrand(0.4 + tau) + s.integrand(0.4 - tau);
            assert!((s.paired(tau) - naive).abs() < 1e-9 * naive.abs().max(1.0));
        }
    }

    #[test]
    fn lower_bound_holds_on_grid() {
        for (p, a) in [(2.0, 1.5), (3.0, 2.0), (2.5, 1.25)] {
            let d = fs_constant(1, p, a).unwrap();
            for k in 1..10 {
                let x = k as f64 / 10.0;
                let v = fs_potential(x, p, a).unwrap();
                assert!(v * x.powf(a) / d - 1.0 >= -1e-4, "p={p} a={a} x={x}");
            }
        }
    }

    #[test]
    fn halfline_identity_within_tail_bound() {
        for (p, a) in [(2.0, 1.5), (3.0, 2.0), (2.5, 1.25)] {
            let d = fs_constant(1, p, a).unwrap();
            for &x in &[0.1f64, 0.5, 0.9] {
                let r = fs_potential_halfline(x, p, a, 1e3).unwrap();
                let target = d / x.powf(a);
                assert!((r.value - target).abs() <= r.tail_bound + 1e-7 * target, "p={p} a={a} x={x}");
            }
        }
    }
}
