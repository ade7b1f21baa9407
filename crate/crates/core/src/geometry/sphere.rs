use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::{lit, norm, Real};

/// Unit vector in `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Direction<T>(Vec<T>);

impl<T: Real> Direction<T> {
    /// Normalizes `v`; fails for the zero vector.
    pub fn new(v: Vec<T>) -> Result<Self> {
        let l = norm(&v);
        if !(l > T::zero()) || !l.is_finite() {
            return Err(Error::Parameter("direction must be a nonzero finite vector".into()));
        }
        Ok(Direction(v.into_iter().map(|c| c / l).collect()))
    }

    pub fn axis(n: usize, k: usize) -> Self {
        let mut v = vec![T::zero(); n];
        v[k] = T::one();
        Direction(v)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        Direction(self.0.iter().map(|&c| -c).collect())
    }
}

impl<T> std::ops::Deref for Direction<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Nodes and weights on `S^{n-1}`; node `2k + 1` is the antipode of node `2k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct SphereQuadrature<T> {
    n: usize,
    resolution: usize,
    nodes: Vec<Direction<T>>,
    weights: Vec<T>,
}

/// `|S^{n-1}|`.
pub fn sphere_area<T: Real>(n: usize) -> T {
    match n {
        1 => lit(2.0),
        2 => T::TAU(),
        3 => lit::<T>(4.0) * T::PI(),
        _ => {
            let half = lit::<T>(0.5) * T::from_usize_lossy(n);
            lit::<T>(2.0) * T::PI().powf(half) / crate::constants::gamma(half).expect("gamma in range")
        }
    }
}

impl<T: Real> SphereQuadrature<T> {
    /// Builds a rule from raw parts and runs the structural checks.
    pub fn from_parts(n: usize, resolution: usize, nodes: Vec<Direction<T>>, weights: Vec<T>) -> Result<Self> {
        let q = Self { n, resolution, nodes, weights };
        q.check()?;
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Direction<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Direction<T>, T)> + '_ {
        self.nodes.iter().zip(self.weights.iter().copied())
    }

    /// One representative per antipodal pair.
    pub fn hemisphere(&self) -> impl Iterator<Item = (&Direction<T>, T)> + '_ {
        self.iter().step_by(2)
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn integrate<F: FnMut(&[T]) -> T>(&self, mut f: F) -> T {
        self.iter().map(|(w, c)| c * f(w)).sum()
    }

    /// Antipodal pairing, unit norms, positive weights and total surface measure.
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::QuadratureResolution(m.into()));
        if self.nodes.len() != self.weights.len() || self.nodes.is_empty() || self.nodes.len() % 2 != 0 {
            return bad("node and weight lists must be nonempty, equal and of even length");
        }
        let tol = lit::<T>(1e-12);
        for (w, c) in self.iter() {
            if w.dim() != self.n || (norm(w) - T::one()).abs() > tol {
                return bad("nodes must be unit vectors of the declared dimension");
            }
            if !(c > T::zero()) {
                return bad("weights must be positive");
            }
        }
        for k in 0..self.nodes.len() / 2 {
            let (a, b) = (&self.nodes[2 * k], &self.nodes[2 * k + 1]);
            if a.iter().zip(b.iter()).any(|(x, y)| (*x + *y).abs() > tol) || self.weights[2 * k] != self.weights[2 * k + 1]
            {
                return bad("node set is not antipodally symmetric");
            }
        }
        let area = sphere_area::<T>(self.n);
        if (self.total_weight() - area).abs() > tol * area {
            return bad("weights do not sum to the surface measure");
        }
        Ok(())
    }
}

/// Direction rule on `S^{n-1}`, `n <= 3`.
///
/// `n = 2` uses `resolution` (rounded up to even) equally spaced angles; `n = 3` uses
/// `resolution` Gauss nodes per hemisphere in the polar cosine times `2 resolution`
/// azimuths.
pub fn build_sphere_quadrature<T: Real>(n: usize, resolution: usize) -> Result<SphereQuadrature<T>> {
    let resolution = resolution.max(2);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut push = |v: Vec<T>, c: T| {
        let neg = v.iter().map(|&x| -x).collect();
        nodes.push(Direction(v));
        nodes.push(Direction(neg));
        weights.push(c);
        weights.push(c);
    };
    match n {
        1 => push(vec![T::one()], T::one()),
        2 => {
            let m = resolution + resolution % 2;
            let step = T::TAU() / T::from_usize_lossy(m);
            for k in 0..m / 2 {
                let th = (T::from_usize_lossy(k) + lit(0.5)) * step;
                push(vec![th.cos(), th.sin()], step);
            }
        }
        3 => {
            let (z, wz) = gauss_legendre::<T>(resolution);
            let naz = 2 * resolution;
            let dphi = T::TAU() / T::from_usize_lossy(naz);
            for (zi, wi) in z.iter().zip(&wz) {
                // map [-1,1] onto the upper polar cosine range (0,1]
                let c = lit::<T>(0.5) * (*zi + T::one());
                let wc = lit::<T>(0.5) * *wi;
                let s = (T::one() - c * c).max(T::zero()).sqrt();
                for j in 0..naz {
                    let ph = (T::from_usize_lossy(j) + lit(0.5)) * dphi;
                    push(vec![s * ph.cos(), s * ph.sin(), c], wc * dphi);
                }
            }
        }
        _ => return Err(Error::UnsupportedDimension(n)),
    }
    SphereQuadrature::from_parts(n, resolution, nodes, weights)
}

/// Loads a rule from the JSON cache directory or builds and stores it.
///
/// Cache failures never surface; a bad cache entry is rebuilt.
pub fn cached_sphere_quadrature(dir: Option<&Path>, n: usize, resolution: usize) -> Result<SphereQuadrature<f64>> {
    let Some(dir) = dir else {
        return build_sphere_quadrature(n, resolution);
    };
    let path = dir.join(format!("sphere-n{n}-r{resolution}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(q) = serde_json::from_str::<SphereQuadrature<f64>>(&text) {
            if q.n == n && q.resolution == resolution.max(2) && q.check().is_ok() {
                return Ok(q);
            }
        }
    }
    let q = build_sphere_quadrature(n, resolution)?;
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(&path, serde_json::to_string(&q).expect("quadrature serializes"));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::sphere_alpha_integral;

    #[test]
    fn one_dimensional_rule() {
        let q = build_sphere_quadrature::<f64>(1, 7).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.nodes()[0].as_slice(), &[1.0]);
        assert_eq!(q.nodes()[1].as_slice(), &[-1.0]);
        assert_eq!(q.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn circle_total_weight() {
        let q = build_sphere_quadrature::<f64>(2, 360).unwrap();
        assert!((q.total_weight() - std::f64::consts::TAU).abs() < 1e-12);
        assert_eq!(q.len(), 360);
    }

    #[test]
    fn moments_match_closed_form() {
        // |w_n|^alpha has a kink on the equator, so convergence is algebraic
        for (n, res) in [(2, 4096), (3, 64)] {
            let q = build_sphere_quadrature::<f64>(n, res).unwrap();
            for a in [1.1, 1.5, 1.9] {
                let num = q.integrate(|w| w[n - 1].abs().powf(a));
                let exact = sphere_alpha_integral(n, a).unwrap();
                assert!((num / exact - 1.0).abs() < 1e-6, "n={n} a={a} {num} {exact}");
            }
        }
    }

    #[test]
    fn rejects_broken_symmetry() {
        let q = build_sphere_quadrature::<f64>(2, 8).unwrap();
        let mut nodes = q.nodes().to_vec();
        nodes.swap(1, 2);
        assert!(SphereQuadrature::from_parts(2, 8, nodes, q.weights().to_vec()).is_err());
        assert!(matches!(build_sphere_quadrature::<f64>(4, 8), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("fh-sphere-cache-{}", std::process::id()));
        let a = cached_sphere_quadrature(Some(&dir), 3, 6).unwrap();
        let b = cached_sphere_quadrature(Some(&dir), 3, 6).unwrap();
        assert_eq!(a, b);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
