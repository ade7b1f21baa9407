use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `1 - x^alpha - (1 - x)^alpha`.
pub fn remainder<T: Real>(x: T, alpha: T) -> T {
    T::one() - x.powf(alpha) - (T::one() - x).powf(alpha)
}

/// Denominator of the rational upper bounds, `2^50`.
const BOUND_BITS: u64 = 50;

/// Exact sign certificate for `1 - x^alpha - (1-x)^alpha` on a rational grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderCertificate {
    /// `alpha = num / den` in lowest terms.
    pub alpha_num: u64,
    pub alpha_den: u64,
    /// Grid `x = k / grid` for `k = 0..=grid`.
    pub grid: u64,
    /// Points where nonnegativity was proven exactly.
    pub certified: usize,
    /// Grid indices where the proof failed.
    pub failures: Vec<u64>,
    /// Smallest floating point value of the remainder on the grid.
    pub min_value: f64,
}

impl RemainderCertificate {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smallest integer `c` found with `(c / 2^B)^den >= (k / grid)^num`, i.e. a certified
/// upper bound on `(k/grid)^{num/den}` with denominator `2^B`.
fn upper_numerator(k: u64, grid: u64, num: u32, den: u32, grid_pow: &BigUint) -> Option<u64> {
    let approx = (k as f64 / grid as f64).powf(num as f64 / den as f64);
    let scale = (1u64 << BOUND_BITS) as f64;
    let rhs = BigUint::from(k).pow(num) << (BOUND_BITS as usize * den as usize);
    let mut c = (approx * scale).floor() as u64 + 1;
    for _ in 0..8 {
        if BigUint::from(c).pow(den) * grid_pow >= rhs {
            return Some(c);
        }
        c += 2;
    }
    None
}

/// Proves `x^alpha + (1-x)^alpha <= 1` for `x = k/grid`, `alpha = num/den`, using
/// integer arithmetic only: each power gets a rational upper bound whose validity is
/// checked by raising both sides to the `den`-th power.
pub fn certify_remainder(alpha_num: u64, alpha_den: u64, grid: u64) -> Result<RemainderCertificate> {
    if alpha_den == 0 || grid == 0 {
        return Err(Error::Parameter("denominators must be positive".into()));
    }
    let g = gcd(alpha_num, alpha_den);
    let (num, den) = (alpha_num / g, alpha_den / g);
    if !(num > den && num < 2 * den) {
        return Err(Error::Parameter("alpha must lie in (1, 2)".into()));
    }
    if num > 1000 || grid > 1_000_000 {
        return Err(Error::Parameter("certificate sizes are capped at num <= 1000, grid <= 10^6".into()));
    }
    let (num32, den32) = (num as u32, den as u32);
    let grid_pow = BigUint::from(grid).pow(num32);
    let limit = 1u64 << BOUND_BITS;
    let uppers: Vec<Option<u64>> = (0..=grid)
        .map(|k| match k {
            0 => Some(0),
            k if k == grid => Some(limit),
            k => upper_numerator(k, grid, num32, den32, &grid_pow),
        })
        .collect();
    let alpha = num as f64 / den as f64;
    let mut failures = Vec::new();
    let mut min_value = f64::INFINITY;
    for k in 0..=grid {
        let x = k as f64 / grid as f64;
        min_value = min_value.min(remainder(x, alpha));
        let ok = match (uppers[k as usize], uppers[(grid - k) as usize]) {
            (Some(a), Some(b)) => a + b <= limit,
            _ => false,
        };
        if !ok {
            failures.push(k);
        }
    }
    Ok(RemainderCertificate {
        alpha_num: num,
        alpha_den: den,
        grid,
        certified: (grid + 1) as usize - failures.len(),
        failures,
        min_value,
    })
}
