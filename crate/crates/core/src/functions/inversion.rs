use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::scalar::{lit, Real};

/// `g(x) = |x|^{alpha - 1} f(1/x)` resampled on a lattice covering the image of the
/// support, with spacing fine enough that the image lattice resolves `f` everywhere.
pub fn inversion_1d<T: Real>(f: &GridFunction<T>, alpha: T) -> Result<GridFunction<T>> {
    if f.dim() != 1 {
        return Err(Error::UnsupportedDimension(f.dim()));
    }
    if !(alpha > T::zero() && alpha < lit(2.0)) {
        return Err(Error::Parameter("alpha must lie in (0, 2)".into()));
    }
    let supp = f.support();
    let (Some(&first), Some(&last)) = (supp.first(), supp.last()) else {
        return Err(Error::ZeroFunction);
    };
    let h = f.h();
    let lo = f.node(first)[0] - h - h;
    let hi = f.node(last)[0] + h + h;
    if !(lo > T::zero()) {
        return Err(Error::SupportViolation("support touches or crosses zero".into()));
    }
    let hg = h / (hi * hi);
    let a = hi.recip() - lit::<T>(2.0) * hg;
    let b = lo.recip() + lit::<T>(2.0) * hg;
    let count = ((b - a) / hg).ceil().to_f64_lossy() as usize + 1;
    GridFunction::from_fn(vec![a], hg, vec![count], |y| {
        let x = y[0];
        if x > T::zero() {
            x.powf(alpha - T::one()) * f.interpolate(&[x.recip()])
        } else {
            T::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{sample_bump, BumpSpec};
    use crate::geometry::DomainSpec;

    fn bump() -> GridFunction<f64> {
        let dom = DomainSpec::<f64>::interval(1.0, 2.0).unwrap();
        sample_bump(&BumpSpec::new(vec![1.5], 0.4), &dom, 0.002).unwrap()
    }

    #[test]
    fn support_maps_into_reciprocal_interval() {
        let g = inversion_1d(&bump(), 1.5).unwrap();
        for i in g.support() {
            let x = g.node(i)[0];
            assert!(x > 0.5 && x < 1.0, "{x}");
        }
    }

    #[test]
    fn double_inversion_is_identity() {
        let f = bump();
        let g = inversion_1d(&inversion_1d(&f, 1.25).unwrap(), 1.25).unwrap();
        let peak = f.values().iter().cloned().fold(0.0, f64::max);
        for i in 0..f.len() {
            let x = f.node(i);
            assert!((g.interpolate(&x) - f.values()[i]).abs() < 1e-6 * peak);
        }
    }

    #[test]
    fn alpha_one_is_plain_composition() {
        let f = bump();
        let g = inversion_1d(&f, 1.0).unwrap();
        for i in g.support() {
            let y = g.node(i)[0];
            assert_eq!(g.values()[i], f.interpolate(&[1.0 / y]));
        }
    }

    #[test]
    fn support_near_zero_is_rejected() {
        let dom = DomainSpec::<f64>::interval(-1.0, 1.0).unwrap();
        let f = sample_bump(&BumpSpec::new(vec![0.1], 0.3), &dom, 0.002).unwrap();
        assert!(matches!(inversion_1d(&f, 1.5), Err(Error::SupportViolation(_))));
    }
}
