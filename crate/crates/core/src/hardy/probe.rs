use serde::{Deserialize, Serialize};

use crate::constants::kappa;
use crate::error::{Error, Result};
use crate::functions::halfline_sharpness_family;
use crate::hardy::WeightKind;
use crate::scalar::Real;

/// Quotients of the half-line sharpness family against `x^{-alpha}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessProbe {
    pub alpha: f64,
    pub kappa: f64,
    pub quotients: Vec<f64>,
    /// `quotients.last() / kappa - 1`.
    pub gap: f64,
    pub nonincreasing: bool,
}

pub fn sharpness_probe<T: Real>(alpha: T, k_max: usize) -> Result<SharpnessProbe> {
    if !(alpha > T::one() && alpha < T::lit(2.0)) {
        return Err(Error::Parameter("sharpness probe needs alpha in (1, 2)".into()));
    }
    if k_max == 0 {
        return Err(Error::Parameter("k_max must be at least 1".into()));
    }
    let factor = WeightKind::HalfLine.energy_factor::<T>();
    let quotients = (1..=k_max)
        .map(|k| {
            let e = halfline_sharpness_family(alpha, k)?.energy()?;
            Ok((factor * e.energy / e.mass).to_f64_lossy())
        })
        .collect::<Result<Vec<f64>>>()?;
    let kappa = kappa(1, alpha)?.to_f64_lossy();
    let gap = quotients[k_max - 1] / kappa - 1.0;
    let nonincreasing = quotients.windows(2).all(|w| w[1] <= w[0]);
    Ok(SharpnessProbe { alpha: alpha.to_f64_lossy(), kappa, quotients, gap, nonincreasing })
}
