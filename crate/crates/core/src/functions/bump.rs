use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::geometry::DomainSpec;
use crate::scalar::{lit, Real};

/// Node cap for a single sampled trial function.
pub const MAX_NODES: usize = 20_000_000;

/// `amplitude * exp(-1 / (1 - |x - c|^2 / r^2))` inside the ball, zero outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Real"))]
pub struct BumpSpec<T> {
    pub center: Vec<T>,
    pub radius: T,
    #[serde(default = "one")]
    pub amplitude: T,
}

fn one<T: Real>() -> T {
    T::one()
}

impl<T: Real> BumpSpec<T> {
    pub fn new(center: Vec<T>, radius: T) -> Self {
        Self {
            center,
            radius,
            amplitude: T::one(),
        }
    }

    pub fn eval(&self, x: &[T]) -> T {
        let r2 = x
            .iter()
            .zip(&self.center)
            .fold(T::zero(), |a, (p, c)| a + (*p - *c) * (*p - *c))
            / (self.radius * self.radius);
        if r2 < T::one() {
            self.amplitude * (-T::one() / (T::one() - r2)).exp()
        } else {
            T::zero()
        }
    }

    fn check(&self, domain: &DomainSpec<T>) -> Result<()> {
        if self.center.len() != domain.dim() {
            return Err(Error::Parameter("bump and domain dimensions differ".into()));
        }
        if !(self.radius > T::zero()) {
            return Err(Error::Parameter("bump radius must be positive".into()));
        }
        let leak = || {
            Error::SupportViolation(format!(
                "ball of radius {} around {:?} is not inside the domain",
                self.radius.to_f64_lossy(),
                self.center.iter().map(|v| v.to_f64_lossy()).collect::<Vec<_>>()
            ))
        };
        let d = domain.dist_to_boundary(&self.center).map_err(|_| leak())?;
        if !(d > self.radius) {
            return Err(leak());
        }
        Ok(())
    }
}

/// Samples several bumps on one lattice anchored at the first center.
pub fn sample_bumps<T: Real>(specs: &[BumpSpec<T>], domain: &DomainSpec<T>, h: T) -> Result<GridFunction<T>> {
    let first = specs.first().ok_or_else(|| Error::Parameter("no bumps given".into()))?;
    if !(h > T::zero()) {
        return Err(Error::Parameter("lattice spacing must be positive".into()));
    }
    for s in specs {
        s.check(domain)?;
        if s.radius + s.radius < lit::<T>(8.0) * h {
            return Err(Error::Resolution(format!(
                "spacing {} leaves fewer than 8 nodes across a bump of radius {}",
                h.to_f64_lossy(),
                s.radius.to_f64_lossy()
            )));
        }
    }
    let n = domain.dim();
    let mut origin = Vec::with_capacity(n);
    let mut dims = Vec::with_capacity(n);
    for k in 0..n {
        // integer node offsets from the first center, two spare nodes per side
        let lo = specs
            .iter()
            .map(|s| ((s.center[k] - s.radius - first.center[k]) / h).floor() - lit(2.0))
            .fold(T::infinity(), T::min);
        let hi = specs
            .iter()
            .map(|s| ((s.center[k] + s.radius - first.center[k]) / h).ceil() + lit(2.0))
            .fold(T::neg_infinity(), T::max);
        origin.push(first.center[k] + lo * h);
        dims.push((hi - lo).to_f64_lossy() as usize + 1);
    }
    let total = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
    if total.map_or(true, |t| t > MAX_NODES) {
        return Err(Error::Resolution(format!("lattice exceeds the cap of {MAX_NODES} nodes")));
    }
    let g = GridFunction::from_fn(origin, h, dims, |x| specs.iter().map(|s| s.eval(x)).sum())?;
    g.check_support(domain)?;
    Ok(g)
}

pub fn sample_bump<T: Real>(spec: &BumpSpec<T>, domain: &DomainSpec<T>, h: T) -> Result<GridFunction<T>> {
    sample_bumps(std::slice::from_ref(spec), domain, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_value_and_nonnegativity() {
        let dom = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let spec = BumpSpec { center: vec![0.5], radius: 0.4, amplitude: 2.0 };
        let g = sample_bump(&spec, &dom, 0.01).unwrap();
        let c = g.flat_index(&[((0.5 - g.origin()[0]) / 0.01).round() as usize]);
        assert_eq!(g.node(c), vec![0.5]);
        assert!((g.values()[c] - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(g.values().iter().all(|&v| v >= 0.0));
        assert_eq!(g.values()[0], 0.0);
        assert_eq!(*g.values().last().unwrap(), 0.0);
    }

    #[test]
    fn leaking_ball_is_rejected() {
        let dom = DomainSpec::<f64>::unit_box(2);
        let spec = BumpSpec::new(vec![0.3, 0.5], 0.35);
        assert!(matches!(sample_bump(&spec, &dom, 0.01), Err(Error::SupportViolation(_))));
        let coarse = BumpSpec::new(vec![0.5, 0.5], 0.2);
        assert!(matches!(sample_bump(&coarse, &dom, 0.06), Err(Error::Resolution(_))));
    }

    #[test]
    fn l2_norm_converges_quadratically() {
        let dom = DomainSpec::<f64>::unit_box(2);
        let spec = BumpSpec::new(vec![0.5, 0.5], 0.4);
        let exact = {
            // radial quadrature of the squared profile
            let q = crate::quadrature::integrate(
                |r: f64| 2.0 * std::f64::consts::PI * r * (-2.0 / (1.0 - r * r / 0.16)).exp(),
                0.0,
                0.4,
                crate::quadrature::Tolerance::relative(1e-13),
            )
            .unwrap()
            .value;
            q.sqrt()
        };
        let e1 = (sample_bump(&spec, &dom, 0.04).unwrap().l2_norm() - exact).abs();
        let e2 = (sample_bump(&spec, &dom, 0.02).unwrap().l2_norm() - exact).abs();
        assert!(e2 <= e1 / 3.0 + 1e-14, "{e1} {e2}");
    }
}
