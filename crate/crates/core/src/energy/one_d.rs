use crate::constants::zeta;
use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::geometry::complement_tail;
use crate::scalar::{lit, Real};

pub(crate) fn check_pa<T: Real>(p: T, alpha: T) -> Result<()> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::Parameter(format!("p = {} must exceed 1", p.to_f64_lossy())));
    }
    if !(alpha > T::zero() && alpha < p) {
        return Err(Error::Parameter(format!(
            "alpha = {} must lie in (0, p)",
            alpha.to_f64_lossy()
        )));
    }
    Ok(())
}

/// Lattice defect `int - sum` for `|m|^{p-1-alpha}` on `Z \ {0}`.
pub(crate) fn diagonal_constant_1d<T: Real>(p: T, alpha: T) -> Result<T> {
    Ok(-lit::<T>(2.0) * zeta(T::one() + alpha - p)?)
}

#[inline]
pub(crate) fn pow_abs<T: Real>(d: T, p: T, square: bool) -> T {
    if square {
        d * d
    } else {
        d.abs().powf(p)
    }
}

/// `sum_{i != j} |f_i - f_j|^p / |s_i - s_j|^{1+alpha} h^2` plus the lattice
/// correction of the singular diagonal, `h^{1+p-alpha} (-2 zeta(1+alpha-p)) sum |f'_i|^p`.
pub fn one_d_energy<T: Real>(samples: &[T], p: T, alpha: T, h: T) -> Result<T> {
    check_pa(p, alpha)?;
    if !(h > T::zero()) {
        return Err(Error::Parameter("spacing must be positive".into()));
    }
    let n = samples.len();
    if n == 0 {
        return Ok(T::zero());
    }
    let square = p == lit(2.0);
    let scale = h.powf(T::one() - alpha);
    let expo = -T::one() - alpha;
    let kernel: Vec<T> = (0..n).map(|d| if d == 0 { T::zero() } else { T::from_usize_lossy(d).powf(expo) }).collect();
    let mut pairs = T::zero();
    for i in 0..n {
        let fi = samples[i];
        let mut row = T::zero();
        for j in i + 1..n {
            let fj = samples[j];
            if fi == T::zero() && fj == T::zero() {
                continue;
            }
            row += pow_abs(fi - fj, p, square) * kernel[j - i];
        }
        pairs += row;
    }
    let lam = diagonal_constant_1d(p, alpha)?;
    let inv2h = (h + h).recip();
    let mut grad = T::zero();
    for i in 0..n {
        let a = if i + 1 < n { samples[i + 1] } else { T::zero() };
        let b = if i > 0 { samples[i - 1] } else { T::zero() };
        grad += pow_abs((a - b) * inv2h, p, square);
    }
    Ok(lit::<T>(2.0) * pairs * scale + h.powf(T::one() + p - alpha) * lam * grad)
}

/// Energy over `(a, b) x (a, b)` of a 1-D lattice function supported inside `(a, b)`.
pub fn interval_energy<T: Real>(f: &GridFunction<T>, a: T, b: T, p: T, alpha: T) -> Result<T> {
    if f.dim() != 1 {
        return Err(Error::UnsupportedDimension(f.dim()));
    }
    let (lo, hi) = f.cell_box();
    let mut acc = one_d_energy(f.values(), p, alpha, f.h())?;
    let mut tails = T::zero();
    for i in f.support() {
        let x = f.node(i)[0];
        let inner = complement_tail(x, lo[0], hi[0], alpha)?;
        let outer = complement_tail(x, a, b, alpha)?;
        tails += f.values()[i].abs().powf(p) * (inner - outer);
    }
    acc += lit::<T>(2.0) * tails * f.h();
    Ok(acc)
}

/// Energy over `R x R` of the extension by zero of a 1-D lattice function.
pub fn fullline_energy<T: Real>(f: &GridFunction<T>, p: T, alpha: T) -> Result<T> {
    interval_energy(f, T::neg_infinity(), T::infinity(), p, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{sample_bump, BumpSpec};
    use crate::geometry::DomainSpec;
    use crate::quadrature::{integrate, Tolerance};

    fn bump_energy_oracle(c: f64, r: f64, a: f64, b: f64, alpha: f64) -> f64 {
        // E = int int_{(a,b)^2} (f(x)-f(y))^2 |x-y|^{-1-alpha}
        //   = 2 int_a^b dx int_0^{b-x} (f(x)-f(x+t))^2 t^{-1-alpha} dt
        let f = |x: f64| {
            let u = (x - c) / r;
            if u.abs() < 1.0 {
                (-1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        };
        let tol = Tolerance { abs: 1e-11, rel: 1e-10, max_intervals: 20_000 };
        // t = u^m with m = 1/(2 - alpha) removes the t^{1-alpha} endpoint singularity
        let m = 1.0 / (2.0 - alpha);
        let outer = |x: f64| {
            let inner = |u: f64| {
                if u <= 0.0 {
                    return 0.0;
                }
                let t = u.powf(m);
                let d = f(x) - f(x + t);
                d * d * t.powf(-1.0 - alpha) * m * u.powf(m - 1.0)
            };
            let top = (b - x).powf(1.0 / m);
            integrate(inner, 0.0, top, tol).unwrap().value
        };
        2.0 * integrate(outer, a, b, tol).unwrap().value
    }

    #[test]
    fn zero_and_homogeneity() {
        assert_eq!(one_d_energy(&[0.0; 10], 2.0, 1.5, 0.1).unwrap(), 0.0);
        let f: Vec<f64> = (0..40).map(|i| ((i as f64) * 0.2).sin().powi(2)).collect();
        let g: Vec<f64> = f.iter().map(|v| -3.0 * v).collect();
        let a = one_d_energy(&f, 2.5, 1.5, 0.05).unwrap();
        let b = one_d_energy(&g, 2.5, 1.5, 0.05).unwrap();
        assert!((b / a - 3f64.powf(2.5)).abs() < 1e-11);
        assert!(one_d_energy(&f, 2.0, 2.0, 0.05).is_err());
    }

    #[test]
    fn bump_energy_matches_quadrature_oracle() {
        let dom = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let spec = BumpSpec::new(vec![0.5], 0.4);
        let exact = bump_energy_oracle(0.5, 0.4, 0.0, 1.0, 1.5);
        let e1 = interval_energy(&sample_bump(&spec, &dom, 0.01).unwrap(), 0.0, 1.0, 2.0, 1.5).unwrap();
        let e2 = interval_energy(&sample_bump(&spec, &dom, 0.005).unwrap(), 0.0, 1.0, 2.0, 1.5).unwrap();
        let rich = e2 + (e2 - e1) / 3.0;
        assert!((e1 / exact - 1.0).abs() < 1e-2, "{e1} {exact}");
        assert!((rich / exact - 1.0).abs() < 1e-3, "{rich} {exact}");
    }

    #[test]
    fn shift_invariance() {
        let spec = BumpSpec::new(vec![0.5], 0.3);
        let f = sample_bump(&spec, &DomainSpec::<f64>::interval(0.0, 1.0).unwrap(), 0.01).unwrap();
        let g = f.translated(&[3.0]);
        let a = interval_energy(&f, 0.0, 1.0, 2.0, 1.25).unwrap();
        let b = interval_energy(&g, 3.0, 4.0, 2.0, 1.25).unwrap();
        assert!((a / b - 1.0).abs() < 1e-12);
    }
}
