use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::scalar::{dot, lit, norm, Real};

/// Samples `g_j = f(base + s_j w)` at `s_j = s0 + j h`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineSamples<T> {
    pub s0: T,
    pub h: T,
    pub values: Vec<T>,
}

impl<T: Real> LineSamples<T> {
    pub fn position(&self, j: usize) -> T {
        self.s0 + T::from_usize_lossy(j) * self.h
    }

    /// Cells of the sample lattice, `[s0 - h/2, s_last + h/2]`.
    pub fn cell_interval(&self) -> (T, T) {
        let half = lit::<T>(0.5) * self.h;
        (self.s0 - half, self.position(self.values.len().saturating_sub(1)) + half)
    }
}

/// Restriction of `f` to the line `base + s w`, on an `s`-lattice anchored at the
/// projection of the lattice origin; values come from cubic interpolation.
pub fn restrict_to_line<T: Real>(f: &GridFunction<T>, base: &[T], w: &[T], h_line: T) -> Result<LineSamples<T>> {
    if base.len() != f.dim() || w.len() != f.dim() {
        return Err(Error::Parameter("line and grid dimensions differ".into()));
    }
    if (norm(w) - T::one()).abs() > lit(1e-12) {
        return Err(Error::Parameter("line direction must be a unit vector".into()));
    }
    if !(h_line > T::zero()) {
        return Err(Error::Parameter("line spacing must be positive".into()));
    }
    let rel: Vec<T> = f.origin().iter().zip(base).map(|(o, b)| *o - *b).collect();
    let anchor = dot(&rel, w);
    let trace = f.cell_box_domain().trace_raw(base, w);
    let empty = LineSamples { s0: anchor, h: h_line, values: Vec::new() };
    let Some(&(lo, hi)) = trace.intervals.first() else {
        return Ok(empty);
    };
    let jmin = ((lo - anchor) / h_line).ceil();
    let jmax = ((hi - anchor) / h_line).floor();
    if jmax < jmin {
        return Ok(empty);
    }
    let count = (jmax - jmin).to_f64_lossy() as usize + 1;
    let s0 = anchor + jmin * h_line;
    let mut x = vec![T::zero(); f.dim()];
    let values = (0..count)
        .map(|j| {
            let s = s0 + T::from_usize_lossy(j) * h_line;
            for k in 0..x.len() {
                x[k] = base[k] + s * w[k];
            }
            f.interpolate(&x)
        })
        .collect();
    Ok(LineSamples { s0, h: h_line, values })
}

/// Orthonormal basis of the hyperplane `w^perp`.
pub fn plane_basis<T: Real>(w: &[T]) -> Vec<Vec<T>> {
    match w.len() {
        1 => Vec::new(),
        2 => vec![vec![-w[1], w[0]]],
        _ => {
            // start from the axis least aligned with w
            let k = (0..3)
                .min_by(|&a, &b| w[a].abs().partial_cmp(&w[b].abs()).unwrap())
                .unwrap();
            let mut e = vec![T::zero(); 3];
            e[k] = T::one();
            let c = dot(&e, w);
            let mut u: Vec<T> = e.iter().zip(w).map(|(a, b)| *a - c * *b).collect();
            let l = norm(&u);
            u.iter_mut().for_each(|v| *v /= l);
            let v = vec![
                w[1] * u[2] - w[2] * u[1],
                w[2] * u[0] - w[0] * u[2],
                w[0] * u[1] - w[1] * u[0],
            ];
            vec![u, v]
        }
    }
}

/// Base points of lines parallel to `w` through the cell box of `f`, on a lattice of
/// spacing `h_line` in `w^perp` anchored at the projection of the grid origin.
pub fn line_base_points<T: Real>(f: &GridFunction<T>, w: &[T], h_line: T) -> Vec<Vec<T>> {
    let n = f.dim();
    let basis = plane_basis(w);
    let c = dot(f.origin(), w);
    let anchor: Vec<T> = f.origin().iter().zip(w).map(|(o, wk)| *o - c * *wk).collect();
    if n == 1 {
        return vec![anchor];
    }
    let (lo, hi) = f.cell_box();
    let mut ranges = Vec::with_capacity(n - 1);
    for e in &basis {
        let mut mn = T::infinity();
        let mut mx = T::neg_infinity();
        for corner in 0..(1usize << n) {
            let mut acc = T::zero();
            for k in 0..n {
                let v = if corner >> k & 1 == 1 { hi[k] } else { lo[k] };
                acc += (v - anchor[k]) * e[k];
            }
            mn = mn.min(acc);
            mx = mx.max(acc);
        }
        let a = (mn / h_line).floor().to_f64_lossy() as i64;
        let b = (mx / h_line).ceil().to_f64_lossy() as i64;
        ranges.push((a, b));
    }
    let mut out = Vec::new();
    let mut push = |coef: &[i64]| {
        let mut p = anchor.clone();
        for (e, &c) in basis.iter().zip(coef) {
            let t = T::from_f64(c as f64).unwrap() * h_line;
            for k in 0..n {
                p[k] += t * e[k];
            }
        }
        out.push(p);
    };
    if n == 2 {
        for a in ranges[0].0..=ranges[0].1 {
            push(&[a]);
        }
    } else {
        for a in ranges[0].0..=ranges[0].1 {
            for b in ranges[1].0..=ranges[1].1 {
                push(&[a, b]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{sample_bump, BumpSpec};
    use crate::geometry::DomainSpec;

    #[test]
    fn axis_line_through_lattice_is_exact_column() {
        let dom = DomainSpec::<f64>::unit_box(2);
        let f = sample_bump(&BumpSpec::new(vec![0.5, 0.5], 0.3), &dom, 0.02).unwrap();
        let j = 7;
        let x1 = f.origin()[1] + j as f64 * f.h();
        let line = restrict_to_line(&f, &[0.0, x1], &[1.0, 0.0], f.h()).unwrap();
        assert_eq!(line.values.len(), f.dims()[0]);
        for (i, v) in line.values.iter().enumerate() {
            let want = f.values()[f.flat_index(&[i, j])];
            assert!((v - want).abs() < 1e-13, "{v} {want}");
        }
    }

    #[test]
    fn radial_profiles_agree_across_directions() {
        let dom = DomainSpec::<f64>::unit_box(2);
        let f = sample_bump(&BumpSpec::new(vec![0.5, 0.5], 0.3), &dom, 0.005).unwrap();
        let spec = BumpSpec::new(vec![0.5, 0.5], 0.3);
        for th in [0.0f64, 0.4, 1.1] {
            let w = [th.cos(), th.sin()];
            let base = [0.5 - 0.5 * w[0] - 0.5 * w[1], 0.0];
            // move base onto w^perp through the center
            let c = [0.5, 0.5];
            let t = (c[0] - base[0]) * w[0] + (c[1] - base[1]) * w[1];
            let b = [c[0] - t * w[0], c[1] - t * w[1]];
            let line = restrict_to_line(&f, &b, &w, 0.01).unwrap();
            for (j, v) in line.values.iter().enumerate() {
                let s = line.position(j);
                let exact = spec.eval(&[b[0] + s * w[0], b[1] + s * w[1]]);
                assert!((v - exact).abs() < 2e-4, "th={th} s={s} {v} {exact}");
            }
        }
    }

    #[test]
    fn plane_basis_is_orthonormal() {
        let w = [0.48f64, -0.6, 0.64];
        let b = plane_basis(&w);
        for u in &b {
            assert!((norm(u) - 1.0).abs() < 1e-14);
            assert!(dot(u, &w).abs() < 1e-14);
        }
        assert!(dot(&b[0], &b[1]).abs() < 1e-14);
    }
}
