use crate::energy::one_d::check_pa;
use crate::energy::{one_d_energy, EnergyMethod, EnergyOptions, EnergyResult};
use crate::error::{Error, Result};
use crate::functions::{line_base_points, restrict_to_line, GridFunction};
use crate::geometry::{complement_tail, line_complement_mass, DomainSpec, SphereQuadrature};
use crate::parallel::Workers;
use crate::scalar::{lit, Real};

/// Energy of `f` restricted to the line `base + s w`, over `(line cap Omega)^2`.
fn line_energy<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    base: &[T],
    w: &[T],
    h_line: T,
    p: T,
    alpha: T,
) -> Result<T> {
    let mut line = restrict_to_line(f, base, w, h_line)?;
    let n = f.dim();
    let mut x = vec![T::zero(); n];
    let at = |s: T, x: &mut Vec<T>| {
        for k in 0..n {
            x[k] = base[k] + s * w[k];
        }
    };
    let mut any = false;
    for j in 0..line.values.len() {
        at(line.position(j), &mut x);
        if line.values[j] != T::zero() {
            if domain.contains(&x) {
                any = true;
            } else {
                line.values[j] = T::zero();
            }
        }
    }
    if !any {
        return Ok(T::zero());
    }
    let (lo, hi) = line.cell_interval();
    let mut tails = T::zero();
    for (j, &g) in line.values.iter().enumerate() {
        if g == T::zero() {
            continue;
        }
        let s = line.position(j);
        at(s, &mut x);
        let outside = line_complement_mass(&domain.trace_raw(&x, w), alpha);
        tails += g.abs().powf(p) * (complement_tail(s, lo, hi, alpha)? - outside);
    }
    Ok(one_d_energy(&line.values, p, alpha, h_line)? + lit::<T>(2.0) * tails * h_line)
}

fn reduced_raw<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    p: T,
    alpha: T,
    quad: &SphereQuadrature<T>,
    h_line: T,
    workers: &Workers,
) -> Result<T> {
    let mut jobs: Vec<(usize, Vec<T>)> = Vec::new();
    let dirs: Vec<(&[T], T)> = quad.hemisphere().map(|(w, c)| (w.as_slice(), c)).collect();
    for (d, (w, _)) in dirs.iter().enumerate() {
        for b in line_base_points(f, w, h_line) {
            jobs.push((d, b));
        }
    }
    let parts = workers.try_map(jobs.len(), |k| {
        let (d, ref b) = jobs[k];
        line_energy(f, domain, b, dirs[d].0, h_line, p, alpha)
    })?;
    let mut per_dir = vec![T::zero(); dirs.len()];
    for ((d, _), e) in jobs.iter().zip(parts) {
        per_dir[*d] += e;
    }
    // antipodal lines coincide, so each hemisphere node carries the 1/2 of the pair
    let cell = h_line.powi(f.dim() as i32 - 1);
    Ok(per_dir.iter().zip(&dirs).fold(T::zero(), |a, (e, (_, c))| a + *e * *c) * cell)
}

/// Line reduction: direction average over planes of 1-D line energies.
pub fn gagliardo_reduced<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    p: T,
    alpha: T,
    quad: &SphereQuadrature<T>,
    h_line: T,
    opts: &EnergyOptions,
) -> Result<EnergyResult<T>> {
    check_pa(p, alpha)?;
    if domain.dim() != f.dim() || quad.dim() != f.dim() {
        return Err(Error::Parameter("grid, domain and quadrature dimensions differ".into()));
    }
    quad.check()?;
    if !(h_line > T::zero()) {
        return Err(Error::Parameter("line spacing must be positive".into()));
    }
    let zero = EnergyResult {
        value: T::zero(),
        h: f.h(),
        error: T::zero(),
        method: EnergyMethod::Reduced,
    };
    if f.is_zero() {
        return Ok(zero);
    }
    f.check_support(domain)?;
    let value = reduced_raw(f, domain, p, alpha, quad, h_line, &opts.workers)?;
    let error = if opts.richardson {
        let v2 = reduced_raw(&f.coarsen()?, domain, p, alpha, quad, h_line + h_line, &opts.workers)?;
        (value - v2).abs() / lit(3.0)
    } else {
        T::zero()
    };
    Ok(EnergyResult { value: value.max(T::zero()), error, ..zero })
}
