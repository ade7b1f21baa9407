use crate::energy::one_d::{check_pa, pow_abs};
use crate::energy::{EnergyMethod, EnergyOptions, EnergyResult, LatticeCorrection};
use crate::error::{Error, Result};
use crate::functions::GridFunction;
use crate::geometry::{exterior_kernel_mass, DomainSpec};
use crate::parallel::Workers;
use crate::scalar::{lit, Real};

const CHUNK: usize = 64;

/// `k_{B^c}(x) - k_{Omega^c}(x)` with `B` the cell box of `f`.
pub fn kernel_mass_gap<T: Real>(f: &GridFunction<T>, domain: &DomainSpec<T>, x: &[T], alpha: T) -> Result<T> {
    let cells = f.cell_box_domain();
    Ok(exterior_kernel_mass(&cells, x, alpha)? - exterior_kernel_mass(domain, x, alpha)?)
}

pub(crate) fn direct_raw<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    p: T,
    alpha: T,
    corr: &LatticeCorrection<T>,
    workers: &Workers,
) -> Result<T> {
    let n = f.dim();
    let dims = f.dims();
    let h = f.h();
    let vals = f.values();
    // offset table over (2 d_k - 1) per axis
    let tdims: Vec<usize> = dims.iter().map(|d| 2 * d - 1).collect();
    let mut tstride = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        tstride[k] = tstride[k + 1] * tdims[k + 1];
    }
    let expo = -T::from_usize_lossy(n) - alpha;
    let scale = h.powf(T::from_usize_lossy(n) - alpha);
    let tsize: usize = tdims.iter().product();
    let table: Vec<T> = workers
        .map(tsize.div_ceil(4096), |b| {
            (b * 4096..((b + 1) * 4096).min(tsize))
                .map(|t| {
                    let mut r = t;
                    let mut len2 = T::zero();
                    for k in (0..n).rev() {
                        let o = (r % tdims[k]) as i64 - (dims[k] as i64 - 1);
                        r /= tdims[k];
                        let of = T::from_i64(o).unwrap();
                        len2 += of * of;
                    }
                    if len2 == T::zero() {
                        T::zero()
                    } else {
                        len2.sqrt().powf(expo) * scale
                    }
                })
                .collect::<Vec<T>>()
        })
        .into_iter()
        .flatten()
        .collect();
    let lin: Vec<usize> = (0..f.len())
        .map(|j| f.multi_index(j).iter().zip(&tstride).map(|(m, s)| m * s).sum())
        .collect();
    let center: usize = dims.iter().zip(&tstride).map(|(d, s)| (d - 1) * s).sum();
    let support = f.support();
    let square = p == lit(2.0);
    let pairs = workers.chunked_sum(support.len(), CHUNK, |range| {
        let mut acc = T::zero();
        for &i in &support[range] {
            let fi = vals[i];
            let base = center - lin[i];
            let mut row = T::zero();
            for j in 0..vals.len() {
                let fj = vals[j];
                if j == i || (fj != T::zero() && j < i) {
                    continue;
                }
                row += pow_abs(fi - fj, p, square) * table[base + lin[j]];
            }
            acc += row;
        }
        acc
    });
    let cell = h.powi(n as i32);
    let diag = workers.chunked_sum(f.len(), 1024, |range| {
        let mut acc = T::zero();
        for i in range {
            let g = f.gradient(i);
            if g.iter().any(|c| *c != T::zero()) {
                acc += corr.value(&g);
            }
        }
        acc
    }) * cell
        * h.powf(p - alpha);
    let gaps = workers.try_map(support.len(), |k| {
        let i = support[k];
        let x = f.node(i);
        Ok(vals[i].abs().powf(p) * kernel_mass_gap(f, domain, &x, alpha)?)
    })?;
    let boundary = gaps.into_iter().fold(T::zero(), |a, b| a + b) * cell;
    Ok(lit::<T>(2.0) * (pairs + boundary) + diag)
}

/// Direct double sum over the lattice with singular-diagonal and boundary corrections.
pub fn gagliardo_direct<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    p: T,
    alpha: T,
    opts: &EnergyOptions,
) -> Result<EnergyResult<T>> {
    check_pa(p, alpha)?;
    if domain.dim() != f.dim() {
        return Err(Error::Parameter("grid and domain dimensions differ".into()));
    }
    let zero = EnergyResult {
        value: T::zero(),
        h: f.h(),
        error: T::zero(),
        method: EnergyMethod::Direct,
    };
    if f.is_zero() {
        return Ok(zero);
    }
    f.check_support(domain)?;
    let corr = LatticeCorrection::new(f.dim(), p, alpha)?;
    let value = direct_raw(f, domain, p, alpha, &corr, &opts.workers)?;
    let error = if opts.richardson {
        let coarse = f.coarsen()?;
        let v2 = direct_raw(&coarse, domain, p, alpha, &corr, &opts.workers)?;
        (value - v2).abs() / lit(3.0)
    } else {
        T::zero()
    };
    Ok(EnergyResult { value: value.max(T::zero()), error, ..zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::interval_energy;
    use crate::functions::{sample_bump, BumpSpec};

    #[test]
    fn one_d_direct_matches_interval_energy() {
        let dom = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let f = sample_bump(&BumpSpec::new(vec![0.45], 0.35), &dom, 0.01).unwrap();
        let a = gagliardo_direct(&f, &dom, 2.0, 1.5, &EnergyOptions::default()).unwrap();
        let b = interval_energy(&f, 0.0, 1.0, 2.0, 1.5).unwrap();
        assert!((a.value / b - 1.0).abs() < 1e-10, "{} {b}", a.value);
        assert!(a.error >= 0.0);
    }

    #[test]
    fn zero_function_and_translation() {
        let dom = DomainSpec::<f64>::unit_box(2);
        let f = sample_bump(&BumpSpec::new(vec![0.5, 0.5], 0.3), &dom, 0.04).unwrap();
        let z = f.scaled(0.0);
        let opts = EnergyOptions { richardson: false, ..Default::default() };
        assert_eq!(gagliardo_direct(&z, &dom, 2.0, 1.5, &opts).unwrap().value, 0.0);
        let moved = DomainSpec::Box { min: vec![2.0, -1.0], max: vec![3.0, 0.0] };
        let g = f.translated(&[2.0, -1.0]);
        let a = gagliardo_direct(&f, &dom, 2.0, 1.5, &opts).unwrap().value;
        let b = gagliardo_direct(&g, &moved, 2.0, 1.5, &opts).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-9, "{a} {b}");
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let dom = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0).unwrap();
        let f = sample_bump(&BumpSpec::new(vec![0.1, 0.0], 0.5), &dom, 0.05).unwrap();
        let a = gagliardo_direct(&f, &dom, 2.0, 1.5, &EnergyOptions::with_workers(Workers::serial())).unwrap();
        let b = gagliardo_direct(&f, &dom, 2.0, 1.5, &EnergyOptions::with_workers(Workers::new(4).unwrap())).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
