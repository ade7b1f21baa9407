use crate::constants::{abs_moment, check_open};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, SphereQuadrature};
use crate::scalar::Real;

#[inline]
fn recip<T: Real>(v: T) -> T {
    if v.is_infinite() {
        T::zero()
    } else {
        v.recip()
    }
}

/// Directional exit distance `d_w` and farthest reach `delta_w` along `w`.
pub fn dir_dist<T: Real>(domain: &DomainSpec<T>, x: &[T], w: &[T]) -> Result<(T, T)> {
    let tr = domain.ray_intervals(x, w)?;
    let (lo, hi) = tr.component_at_zero().ok_or_else(|| Error::outside(x))?;
    let d = (-lo).min(hi);
    let first = tr.inf().expect("nonempty trace");
    let last = tr.sup().expect("nonempty trace");
    Ok((d, first.abs().max(last)))
}

/// Direction-averaged weight: `1/M_alpha^alpha` when `two_sided`, else `1/m_alpha^alpha`.
pub fn m_weight<T: Real>(
    domain: &DomainSpec<T>,
    x: &[T],
    alpha: T,
    quad: &SphereQuadrature<T>,
    two_sided: bool,
) -> Result<T> {
    let n = domain.dim();
    if quad.dim() != n {
        return Err(Error::QuadratureResolution(format!(
            "rule lives on S^{} but the domain is {n}-dimensional",
            quad.dim() - 1
        )));
    }
    if !(alpha > T::zero()) {
        return Err(Error::Parameter("alpha must be positive".into()));
    }
    let norm = abs_moment(n, alpha)?;
    let mut acc = T::zero();
    // d_w and delta_w are even in w, so one node per antipodal pair suffices
    for (w, c) in quad.hemisphere() {
        let (d, delta) = dir_dist(domain, x, w)?;
        let s = if two_sided { recip(d) + recip(delta) } else { recip(d) };
        acc += (c + c) * s.powf(alpha);
    }
    Ok(acc / norm)
}

/// `[1/d_Omega + 1/(D_Omega - d_Omega)]^alpha` on a convex domain.
pub fn convex_weight<T: Real>(domain: &DomainSpec<T>, x: &[T], alpha: T) -> Result<T> {
    check_open(alpha.to_f64_lossy(), 1.0, 2.0, "alpha")?;
    let width = domain.width(x)?;
    let d = domain.dist_to_boundary(x)?;
    Ok((d.recip() + recip(width - d)).powf(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_sphere_quadrature;

    #[test]
    fn interval_dir_dist() {
        let d = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        assert_eq!(dir_dist(&d, &[0.25], &[1.0]).unwrap(), (0.25, 0.75));
        let u = DomainSpec::IntervalUnion { intervals: vec![[0.0, 1.0], [2.0, 3.0]] };
        assert_eq!(dir_dist(&u, &[0.5], &[1.0]).unwrap(), (0.5, 2.5));
        assert_eq!(dir_dist(&u, &[0.5], &[-1.0]).unwrap(), (0.5, 2.5));
    }

    #[test]
    fn halfspace_dir_dist() {
        let h = DomainSpec::<f64>::halfspace(vec![0.0, 1.0], 0.0).unwrap();
        let w = [0.6, -0.8];
        let (d, delta) = dir_dist(&h, &[0.1, 0.4], &w).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert!(delta.is_infinite());
    }

    #[test]
    fn m_weight_examples() {
        let q1 = build_sphere_quadrature::<f64>(1, 2).unwrap();
        let iv = DomainSpec::<f64>::interval(-1.0, 1.0).unwrap();
        for a in [1.2, 1.5, 1.8] {
            let v = m_weight(&iv, &[0.0], a, &q1, true).unwrap();
            assert!((v - 2f64.powf(a)).abs() < 1e-13);
        }
        let q2 = build_sphere_quadrature::<f64>(2, 720).unwrap();
        let h = DomainSpec::<f64>::halfspace(vec![0.0, 1.0], 0.0).unwrap();
        let v = m_weight(&h, &[0.3, 0.25], 1.5, &q2, true).unwrap();
        assert!((v * 0.25f64.powf(1.5) - 1.0).abs() < 1e-4);
        let ball = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0).unwrap();
        let v = m_weight(&ball, &[0.0, 0.0], 1.5, &q2, true).unwrap();
        let expect = 2f64.powf(1.5) * std::f64::consts::TAU / abs_moment(2, 1.5).unwrap();
        assert!((v / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convex_weight_examples() {
        let iv = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let x: f64 = 0.3;
        let v = convex_weight(&iv, &[x], 1.5).unwrap();
        assert!((v - (1.0 / x + 1.0 / (1.0 - x)).powf(1.5)).abs() < 1e-12);
        let ball = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0).unwrap();
        let v = convex_weight(&ball, &[0.5, 0.0], 1.5).unwrap();
        assert!((v - (8.0f64 / 3.0).powf(1.5)).abs() < 1e-12);
        let h = DomainSpec::<f64>::halfspace(vec![0.0, 1.0], 0.0).unwrap();
        assert!((convex_weight(&h, &[0.0, 0.2], 1.5).unwrap() - 0.2f64.powf(-1.5)).abs() < 1e-9);
    }
}
