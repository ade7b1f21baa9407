//! Kernel mass `k_A(x) = int_A |x - y|^{-n-alpha} dy` of sets seen from a point.

use crate::constants::abs_moment;
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, RayTrace};
use crate::quadrature::{integrate, integrate_with_breaks, Tolerance};
use crate::scalar::{dot, lit, Real};

fn tol<T: Real>() -> Tolerance {
    Tolerance::relative(1e-10)
}

#[inline]
fn seg<T: Real>(r1: T, r2: T, alpha: T) -> T {
    // int_{r1}^{r2} r^{-1-alpha} dr, r2 may be infinite
    let a = r1.powf(-alpha);
    let b = if r2.is_infinite() { T::zero() } else { r2.powf(-alpha) };
    (a - b) / alpha
}

/// `int_{t > 0, t not in T} t^{-1-alpha} dt` for a trace whose component at zero exists.
pub fn forward_complement_mass<T: Real>(trace: &RayTrace<T>, alpha: T) -> T {
    let Some((_, mut cur)) = trace.component_at_zero() else {
        return T::infinity();
    };
    let mut acc = T::zero();
    for &(lo, hi) in &trace.intervals {
        if lo >= cur {
            acc += seg(cur, lo, alpha);
            cur = hi;
        }
    }
    if cur.is_finite() {
        acc += seg(cur, T::infinity(), alpha);
    }
    acc
}

/// `int_{R \ T} |t|^{-1-alpha} dt` for a 1-D trace around the origin.
pub fn line_complement_mass<T: Real>(trace: &RayTrace<T>, alpha: T) -> T {
    let mirrored = RayTrace {
        intervals: trace.intervals.iter().rev().map(|&(a, b)| (-b, -a)).collect(),
    };
    forward_complement_mass(trace, alpha) + forward_complement_mass(&mirrored, alpha)
}

/// `int_{t > 0, t in T} t^{-1-alpha} dt` for a trace not containing zero.
fn forward_inside_mass<T: Real>(trace: &RayTrace<T>, alpha: T) -> T {
    trace
        .intervals
        .iter()
        .filter(|iv| iv.1 > T::zero())
        .map(|&(lo, hi)| seg(lo.max(T::zero()), hi, alpha))
        .fold(T::zero(), |a, b| a + b)
}

/// `int_{R \ (a,b)} |x - y|^{-1-alpha} dy` for `a < x < b`.
pub fn complement_tail<T: Real>(x: T, a: T, b: T, alpha: T) -> Result<T> {
    if !(a < x && x < b) {
        return Err(Error::Domain(format!(
            "point {} is not inside ({}, {})",
            x.to_f64_lossy(),
            a.to_f64_lossy(),
            b.to_f64_lossy()
        )));
    }
    if !(alpha > T::zero()) {
        return Err(Error::Parameter("alpha must be positive".into()));
    }
    Ok(seg(x - a, T::infinity(), alpha) + seg(b - x, T::infinity(), alpha))
}

fn cos_pow_integral<T: Real>(a: T, b: T, q: T) -> Result<T> {
    if !(b > a) {
        return Ok(T::zero());
    }
    Ok(integrate(|t: T| t.cos().max(T::zero()).powf(q), a, b, tol::<T>())?.value)
}

fn polygon_edges<T: Real>(domain: &DomainSpec<T>) -> Vec<(Vec<T>, T, [Vec<T>; 2])> {
    // (inward unit normal, offset, endpoints)
    let (hs, verts): (Vec<(Vec<T>, T)>, Vec<Vec<T>>) = match domain {
        DomainSpec::Box { min, max } => {
            let c = [
                vec![min[0], min[1]],
                vec![max[0], min[1]],
                vec![max[0], max[1]],
                vec![min[0], max[1]],
            ];
            return vec![
                (vec![T::zero(), T::one()], min[1], [c[0].clone(), c[1].clone()]),
                (vec![-T::one(), T::zero()], -max[0], [c[1].clone(), c[2].clone()]),
                (vec![T::zero(), -T::one()], -max[1], [c[2].clone(), c[3].clone()]),
                (vec![T::one(), T::zero()], min[0], [c[3].clone(), c[0].clone()]),
            ];
        }
        DomainSpec::Polytope(p) => (
            p.halfspaces.iter().map(|h| (h.normal.clone(), h.offset)).collect(),
            p.clipped_vertices().to_vec(),
        ),
        _ => unreachable!("polygon edges requested for a non-polygon"),
    };
    let mut out = Vec::new();
    for (nu, off) in hs {
        let scale = verts
            .iter()
            .map(|v| v[0].abs().max(v[1].abs()))
            .fold(T::one(), T::max);
        let on: Vec<&Vec<T>> = verts
            .iter()
            .filter(|v| (dot(&nu, v) - off).abs() <= lit::<T>(1e-9) * scale)
            .collect();
        let tau = [-nu[1], nu[0]];
        let mut lo: Option<(&Vec<T>, T)> = None;
        let mut hi: Option<(&Vec<T>, T)> = None;
        for v in on {
            let s = dot(&tau, v);
            if lo.map_or(true, |(_, m)| s < m) {
                lo = Some((v, s));
            }
            if hi.map_or(true, |(_, m)| s > m) {
                hi = Some((v, s));
            }
        }
        if let (Some((a, sa)), Some((b, sb))) = (lo, hi) {
            if sb > sa {
                out.push((nu, off, [a.clone(), b.clone()]));
            }
        }
    }
    out
}

fn polygon_mass<T: Real>(domain: &DomainSpec<T>, x: &[T], alpha: T) -> Result<T> {
    let mut acc = T::zero();
    for (nu, off, ends) in polygon_edges(domain) {
        let d = dot(&nu, x) - off;
        let tau = [-nu[1], nu[0]];
        let ang = |p: &[T]| {
            let u = [p[0] - x[0], p[1] - x[1]];
            dot(&tau, &u).atan2(d)
        };
        let (t1, t2) = (ang(&ends[0]), ang(&ends[1]));
        let (a, b) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        acc += d.powf(-alpha) * cos_pow_integral(a, b, alpha)? / alpha;
    }
    Ok(acc)
}

fn box3_mass<T: Real>(min: &[T], max: &[T], x: &[T], alpha: T) -> Result<T> {
    let mut acc = T::zero();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        for d in [x[k] - min[k], max[k] - x[k]] {
            let (u1, u2) = (min[i] - x[i], max[i] - x[i]);
            let (v1, v2) = (min[j] - x[j], max[j] - x[j]);
            let inner = |a: T| -> T {
                let r = d / a.cos();
                let lo = (v1 / r).atan();
                let hi = (v2 / r).atan();
                a.cos().powf(alpha)
                    * cos_pow_integral(lo, hi, T::one() + alpha).unwrap_or_else(|_| T::nan())
            };
            let v = integrate(inner, (u1 / d).atan(), (u2 / d).atan(), tol::<T>())?.value;
            if v.is_nan() {
                return Err(Error::NonConvergence("box face kernel mass".into()));
            }
            acc += d.powf(-alpha) * v / alpha;
        }
    }
    Ok(acc)
}

fn ball_mass<T: Real>(center: &[T], radius: T, x: &[T], alpha: T) -> Result<T> {
    let n = x.len();
    let rel: Vec<T> = x.iter().zip(center).map(|(a, c)| *a - *c).collect();
    let r0 = dot(&rel, &rel).sqrt();
    let rho = |th: T| -> T {
        let s = th.sin();
        -r0 * th.cos() + (radius * radius - r0 * r0 * s * s).max(T::zero()).sqrt()
    };
    match n {
        2 => Ok(lit::<T>(2.0) * integrate(|t| rho(t).powf(-alpha), T::zero(), T::PI(), tol::<T>())?.value / alpha),
        3 => Ok(T::TAU()
            * integrate(|t: T| t.sin() * rho(t).powf(-alpha), T::zero(), T::PI(), tol::<T>())?.value
            / alpha),
        _ => unreachable!(),
    }
}

/// Integrates a per-direction ray quantity over `S^{n-1}` adaptively.
fn sphere_integral<T: Real, F: Fn(&[T]) -> T>(n: usize, f: F) -> Result<T> {
    match n {
        1 => Ok(f(&[T::one()]) + f(&[-T::one()])),
        2 => {
            let quarter = T::FRAC_PI_2();
            let breaks: Vec<T> = (0..=4).map(|k| quarter * T::from_usize_lossy(k)).collect();
            Ok(integrate_with_breaks(|t: T| f(&[t.cos(), t.sin()]), &breaks, tol::<T>())?.value)
        }
        3 => {
            let inner = |z: T| -> T {
                let s = (T::one() - z * z).max(T::zero()).sqrt();
                let g = |ph: T| f(&[s * ph.cos(), s * ph.sin(), z]);
                integrate(g, T::zero(), T::TAU(), Tolerance::relative(1e-9))
                    .map(|e| e.value)
                    .unwrap_or_else(|_| T::nan())
            };
            let v = integrate(inner, -T::one(), T::one(), Tolerance::relative(1e-9))?.value;
            if v.is_nan() {
                return Err(Error::NonConvergence("sphere integral of ray masses".into()));
            }
            Ok(v)
        }
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// `k_{Omega^c}(x)` for `x` in the domain.
pub fn exterior_kernel_mass<T: Real>(domain: &DomainSpec<T>, x: &[T], alpha: T) -> Result<T> {
    if !domain.contains(x) {
        return Err(Error::outside(x));
    }
    let n = domain.dim();
    match domain {
        _ if n == 1 => sphere_integral(1, |w| forward_complement_mass(&domain.trace_raw(x, w), alpha)),
        DomainSpec::Halfspace { normal, offset } => {
            let d = dot(normal, x) - *offset;
            Ok(lit::<T>(0.5) * abs_moment(n, alpha)? * d.powf(-alpha) / alpha)
        }
        DomainSpec::Box { .. } if n == 2 => polygon_mass(domain, x, alpha),
        DomainSpec::Polytope(_) if n == 2 => polygon_mass(domain, x, alpha),
        DomainSpec::Box { min, max } => box3_mass(min, max, x, alpha),
        DomainSpec::Ball { center, radius } => ball_mass(center, *radius, x, alpha),
        DomainSpec::ConvexUnion { parts } => {
            let own = parts.iter().find(|p| p.contains(x)).expect("member lies in a part");
            let mut acc = exterior_kernel_mass(own, x, alpha)?;
            for other in parts.iter().filter(|p| !p.contains(x)) {
                acc -= sphere_integral(n, |w| forward_inside_mass(&other.trace_raw(x, w), alpha))?;
            }
            Ok(acc)
        }
        _ => sphere_integral(n, |w| forward_complement_mass(&domain.trace_raw(x, w), alpha)),
    }
}
