use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::scalar::{lit, Real};

pub const GRID_SCHEMA: &str = "frac-hardy.grid/1";
const MAGIC: &[u8; 4] = b"FHGF";
const BINARY_VERSION: u32 = 1;

/// Values on the lattice `origin + i h`, `0 <= i_k < dims[k]`, row-major with the
/// last axis fastest. Off-lattice values are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    origin: Vec<T>,
    h: T,
    dims: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(origin: Vec<T>, h: T, dims: Vec<usize>, values: Vec<T>) -> Result<Self> {
        let n = origin.len();
        if !(1..=3).contains(&n) || dims.len() != n {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::Parameter("lattice spacing must be positive".into()));
        }
        if dims.iter().any(|&d| d == 0) || dims.iter().product::<usize>() != values.len() {
            return Err(Error::Format("value count does not match lattice dimensions".into()));
        }
        if values.iter().chain(origin.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Format("non-finite lattice data".into()));
        }
        Ok(Self { origin, h, dims, values })
    }

    pub fn from_fn<F: Fn(&[T]) -> T>(origin: Vec<T>, h: T, dims: Vec<usize>, f: F) -> Result<Self> {
        let total: usize = dims.iter().product();
        let mut g = Self::new(origin, h, dims, vec![T::zero(); total])?;
        let mut x = vec![T::zero(); g.dim()];
        for i in 0..total {
            g.node_into(i, &mut x);
            g.values[i] = f(&x);
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn origin(&self) -> &[T] {
        &self.origin
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut m = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            m[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        m
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.dims).fold(0, |acc, (i, d)| acc * d + i)
    }

    pub fn node_into(&self, flat: usize, out: &mut [T]) {
        let mut f = flat;
        for k in (0..self.dim()).rev() {
            let i = f % self.dims[k];
            f /= self.dims[k];
            out[k] = self.origin[k] + T::from_usize_lossy(i) * self.h;
        }
    }

    pub fn node(&self, flat: usize) -> Vec<T> {
        let mut x = vec![T::zero(); self.dim()];
        self.node_into(flat, &mut x);
        x
    }

    /// The union of the lattice cells centred on the nodes.
    pub fn cell_box(&self) -> (Vec<T>, Vec<T>) {
        let half = lit::<T>(0.5) * self.h;
        let lo = self.origin.iter().map(|&o| o - half).collect();
        let hi = self
            .origin
            .iter()
            .zip(&self.dims)
            .map(|(&o, &d)| o + T::from_usize_lossy(d - 1) * self.h + half)
            .collect();
        (lo, hi)
    }

    pub fn cell_box_domain(&self) -> DomainSpec<T> {
        let (min, max) = self.cell_box();
        DomainSpec::Box { min, max }
    }

    fn get(&self, multi: &[isize]) -> T {
        let mut flat = 0usize;
        for (k, &i) in multi.iter().enumerate() {
            if i < 0 || i as usize >= self.dims[k] {
                return T::zero();
            }
            flat = flat * self.dims[k] + i as usize;
        }
        self.values[flat]
    }

    /// Tensor-product cubic Lagrange interpolation; zero outside the lattice.
    pub fn interpolate(&self, x: &[T]) -> T {
        let n = self.dim();
        let mut base = [0isize; 3];
        let mut w = [[T::zero(); 4]; 3];
        for k in 0..n {
            let u = (x[k] - self.origin[k]) / self.h;
            if !(u > lit(-2.0)) || !(u < T::from_usize_lossy(self.dims[k] + 1)) {
                return T::zero();
            }
            let fl = u.floor();
            let t = u - fl;
            base[k] = fl.to_f64_lossy() as isize - 1;
            let one = T::one();
            let two = lit::<T>(2.0);
            let six = lit::<T>(6.0);
            w[k] = [
                -t * (t - one) * (t - two) / six,
                (t + one) * (t - one) * (t - two) / two,
                -(t + one) * t * (t - two) / two,
                (t + one) * t * (t - one) / six,
            ];
        }
        let mut acc = T::zero();
        let mut idx = [0isize; 3];
        let total = 4usize.pow(n as u32);
        for c in 0..total {
            let mut r = c;
            let mut wt = T::one();
            for k in (0..n).rev() {
                let j = r % 4;
                r /= 4;
                idx[k] = base[k] + j as isize;
                wt *= w[k][j];
            }
            let v = self.get(&idx[..n]);
            if v != T::zero() {
                acc += wt * v;
            }
        }
        acc
    }

    /// Central-difference gradient at a node.
    pub fn gradient(&self, flat: usize) -> Vec<T> {
        let m: Vec<isize> = self.multi_index(flat).into_iter().map(|i| i as isize).collect();
        let inv = T::one() / (self.h + self.h);
        (0..self.dim())
            .map(|k| {
                let mut a = m.clone();
                let mut b = m.clone();
                a[k] += 1;
                b[k] -= 1;
                (self.get(&a) - self.get(&b)) * inv
            })
            .collect()
    }

    /// Keeps the nodes with even indices: spacing doubles, origin is kept.
    pub fn coarsen(&self) -> Result<Self> {
        if self.dims.iter().any(|&d| d < 3) {
            return Err(Error::Resolution("lattice too small to coarsen".into()));
        }
        let dims: Vec<usize> = self.dims.iter().map(|d| (d - 1) / 2 + 1).collect();
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        let coarse = Self::new(self.origin.clone(), self.h + self.h, dims, vec![T::zero(); total])?;
        for i in 0..total {
            let m: Vec<usize> = coarse.multi_index(i).into_iter().map(|j| 2 * j).collect();
            values.push(self.values[self.flat_index(&m)]);
        }
        Self::new(coarse.origin, coarse.h, coarse.dims, values)
    }

    /// `sum |f_i|^p h^n`.
    pub fn lp_mass(&self, p: T) -> T {
        let cell = self.h.powi(self.dim() as i32);
        self.values.iter().map(|v| v.abs().powf(p)).sum::<T>() * cell
    }

    pub fn l2_norm(&self) -> T {
        self.lp_mass(lit(2.0)).sqrt()
    }

    pub fn scaled(&self, lambda: T) -> Self {
        Self {
            values: self.values.iter().map(|&v| v * lambda).collect(),
            ..self.clone()
        }
    }

    pub fn translated(&self, shift: &[T]) -> Self {
        Self {
            origin: self.origin.iter().zip(shift).map(|(o, s)| *o + *s).collect(),
            ..self.clone()
        }
    }

    /// Flat indices of nonzero nodes.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i] != T::zero()).collect()
    }

    /// Every nonzero node lies at distance `> h` from the complement, and the
    /// support spans at least 8 nodes along each axis.
    pub fn check_support(&self, domain: &DomainSpec<T>) -> Result<()> {
        if domain.dim() != self.dim() {
            return Err(Error::Parameter("grid and domain dimensions differ".into()));
        }
        let n = self.dim();
        let mut lo = vec![usize::MAX; n];
        let mut hi = vec![0usize; n];
        let mut x = vec![T::zero(); n];
        for i in self.support() {
            self.node_into(i, &mut x);
            let ok = domain.contains(&x) && domain.dist_to_boundary(&x).map_or(false, |d| d > self.h);
            if !ok {
                return Err(Error::SupportViolation(format!(
                    "nonzero value at {:?} within one lattice step of the boundary",
                    x.iter().map(|v| v.to_f64_lossy()).collect::<Vec<_>>()
                )));
            }
            for (k, m) in self.multi_index(i).into_iter().enumerate() {
                lo[k] = lo[k].min(m);
                hi[k] = hi[k].max(m);
            }
        }
        if lo[0] == usize::MAX {
            return Err(Error::ZeroFunction);
        }
        for k in 0..n {
            if hi[k] - lo[k] + 1 < 8 {
                return Err(Error::Resolution(format!(
                    "support spans {} nodes along axis {k}; at least 8 are required",
                    hi[k] - lo[k] + 1
                )));
            }
        }
        Ok(())
    }

    /// CSV with a commented header carrying the lattice geometry.
    pub fn to_csv(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let mut s = String::new();
        let _ = writeln!(s, "# {GRID_SCHEMA}");
        let _ = writeln!(
            s,
            "# n={} h={:e} dims={} origin={}",
            self.dim(),
            self.h.to_f64_lossy(),
            join(&self.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>()),
            join(&self.origin.iter().map(|o| format!("{:e}", o.to_f64_lossy())).collect::<Vec<_>>())
        );
        let cols: Vec<String> = (0..self.dim()).map(|k| format!("x{k}")).chain(["value".to_string()]).collect();
        let _ = writeln!(s, "{}", join(&cols));
        let mut x = vec![T::zero(); self.dim()];
        for i in 0..self.len() {
            self.node_into(i, &mut x);
            let row: Vec<String> = x
                .iter()
                .chain(std::iter::once(&self.values[i]))
                .map(|v| format!("{:e}", v.to_f64_lossy()))
                .collect();
            let _ = writeln!(s, "{}", join(&row));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Format(format!("grid csv: {m}"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(&format!("# {GRID_SCHEMA}")) {
            return Err(bad("missing or unknown schema line"));
        }
        let meta = lines.next().ok_or_else(|| bad("missing geometry line"))?;
        let mut n = None;
        let mut h = None;
        let mut dims = None;
        let mut origin = None;
        for field in meta.trim_start_matches('#').split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| bad("malformed geometry field"))?;
            let nums = |v: &str| -> Result<Vec<f64>> {
                v.split(',').map(|t| t.parse::<f64>().map_err(|_| bad("bad number"))).collect()
            };
            match k {
                "n" => n = Some(v.parse::<usize>().map_err(|_| bad("bad n"))?),
                "h" => h = Some(v.parse::<f64>().map_err(|_| bad("bad h"))?),
                "dims" => {
                    dims = Some(
                        v.split(',')
                            .map(|t| t.parse::<usize>().map_err(|_| bad("bad dims")))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "origin" => origin = Some(nums(v)?),
                _ => return Err(bad("unknown geometry field")),
            }
        }
        let (n, h, dims, origin) = match (n, h, dims, origin) {
            (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
            _ => return Err(bad("incomplete geometry line")),
        };
        lines.next().ok_or_else(|| bad("missing column header"))?;
        let mut values = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != n + 1 {
                return Err(bad("wrong column count"));
            }
            values.push(lit::<T>(cells[n].trim().parse::<f64>().map_err(|_| bad("bad value"))?));
        }
        if origin.len() != n {
            return Err(bad("origin length differs from n"));
        }
        Self::new(origin.into_iter().map(lit).collect(), lit(h), dims, values)
    }

    /// Little-endian binary: magic, version, n, dims, h, origin, values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(32 + 8 * self.len());
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&BINARY_VERSION.to_le_bytes());
        b.extend_from_slice(&(self.dim() as u32).to_le_bytes());
        for &d in &self.dims {
            b.extend_from_slice(&(d as u64).to_le_bytes());
        }
        b.extend_from_slice(&self.h.to_f64_lossy().to_le_bytes());
        for v in self.origin.iter().chain(&self.values) {
            b.extend_from_slice(&v.to_f64_lossy().to_le_bytes());
        }
        b
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Format(format!("grid binary: {m}"));
        let mut pos = 0usize;
        let mut take = |k: usize| -> Result<&[u8]> {
            let s = bytes.get(pos..pos + k).ok_or_else(|| bad("truncated"))?;
            pos += k;
            Ok(s)
        };
        if take(4)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != BINARY_VERSION {
            return Err(bad("unsupported version"));
        }
        let n = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        let mut dims = Vec::with_capacity(n);
        for _ in 0..n {
            dims.push(u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize);
        }
        let mut f64s = |k: usize| -> Result<Vec<T>> {
            (0..k)
                .map(|_| Ok(lit(f64::from_le_bytes(take(8)?.try_into().unwrap()))))
                .collect()
        };
        let h = f64s(1)?[0];
        let origin = f64s(n)?;
        let total = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d)).ok_or_else(|| bad("dims overflow"))?;
        if bytes.len() != 12 + 8 * n + 8 + 8 * n + 8 * total {
            return Err(bad("length does not match header"));
        }
        let values = f64s(total)?;
        Self::new(origin, h, dims, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridFunction<f64> {
        GridFunction::from_fn(vec![0.0, 1.0], 0.1, vec![5, 7], |x| x[0] * x[0] - 2.0 * x[1] + x[0] * x[1]).unwrap()
    }

    #[test]
    fn index_round_trip() {
        let g = sample();
        for i in 0..g.len() {
            assert_eq!(g.flat_index(&g.multi_index(i)), i);
        }
        assert_eq!(g.node(8), vec![0.1, 1.1]);
    }

    #[test]
    fn cubic_interpolation_reproduces_quadratics_inside() {
        let g = sample();
        let x = [0.17, 1.33];
        let exact = x[0] * x[0] - 2.0 * x[1] + x[0] * x[1];
        assert!((g.interpolate(&x) - exact).abs() < 1e-12);
        for i in 0..g.len() {
            assert!((g.interpolate(&g.node(i)) - g.values()[i]).abs() < 1e-12);
        }
        assert_eq!(g.interpolate(&[5.0, 1.2]), 0.0);
    }

    #[test]
    fn coarsen_keeps_even_nodes() {
        let g = sample();
        let c = g.coarsen().unwrap();
        assert_eq!(c.dims(), &[3, 4]);
        assert_eq!(c.h(), 0.2);
        assert_eq!(c.values()[c.flat_index(&[1, 2])], g.values()[g.flat_index(&[2, 4])]);
    }

    #[test]
    fn csv_and_binary_round_trip() {
        let g = sample();
        assert_eq!(GridFunction::<f64>::from_bytes(&g.to_bytes()).unwrap(), g);
        let back = GridFunction::<f64>::from_csv(&g.to_csv()).unwrap();
        assert_eq!(back.dims(), g.dims());
        for (a, b) in back.values().iter().zip(g.values()) {
            assert!((a - b).abs() <= 1e-15 * (1.0 + b.abs()));
        }
        assert!(GridFunction::<f64>::from_bytes(&g.to_bytes()[..20]).is_err());
        assert!(GridFunction::<f64>::from_csv("x0,value\n1,2\n").is_err());
    }

    #[test]
    fn support_check_flags_boundary_values() {
        let dom = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let g = GridFunction::from_fn(vec![0.0], 0.05, vec![21], |x| if x[0] > 0.02 && x[0] < 0.9 { 1.0 } else { 0.0 })
            .unwrap();
        assert!(matches!(g.check_support(&dom), Err(Error::SupportViolation(_))));
        let thin = GridFunction::from_fn(vec![0.0], 0.05, vec![21], |x: &[f64]| if (x[0] - 0.5).abs() < 0.1 { 1.0 } else { 0.0 })
            .unwrap();
        assert!(matches!(thin.check_support(&dom), Err(Error::Resolution(_))));
    }
}
