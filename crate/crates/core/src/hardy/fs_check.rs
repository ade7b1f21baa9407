use serde::{Deserialize, Serialize};

use crate::constants::fs_constant;
use crate::energy::{fs_potential, fs_potential_halfline};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Margin of `V(x) >= D_{1,p,alpha} / x^alpha` at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsPoint {
    pub x: f64,
    pub potential: f64,
    pub bound: f64,
    /// `V(x) x^alpha / D - 1`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsReport {
    pub p: f64,
    pub alpha: f64,
    pub constant: f64,
    pub points: Vec<FsPoint>,
    pub min_margin: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluates the interval potential on `xs` and compares with `D_{1,p,alpha} / x^alpha`;
/// passes iff every margin is at least `-tol`.
pub fn fs_inequality_check<T: Real>(p: T, alpha: T, xs: &[T], tol: f64) -> Result<FsReport> {
    if xs.is_empty() {
        return Err(Error::Parameter("empty x grid".into()));
    }
    let d = fs_constant(1, p, alpha)?;
    let points = xs
        .iter()
        .map(|&x| {
            let v = fs_potential(x, p, alpha)?;
            let bound = d / x.powf(alpha);
            Ok(FsPoint {
                x: x.to_f64_lossy(),
                potential: v.to_f64_lossy(),
                bound: bound.to_f64_lossy(),
                margin: (v / bound - T::one()).to_f64_lossy(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_margin = points.iter().map(|q| q.margin).fold(f64::INFINITY, f64::min);
    Ok(FsReport {
        p: p.to_f64_lossy(),
        alpha: alpha.to_f64_lossy(),
        constant: d.to_f64_lossy(),
        points,
        min_margin,
        tol,
        pass: min_margin >= -tol,
    })
}

/// Truncated half-line identity `V_Y(x) ~ D_{1,p,alpha} / x^alpha` at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FsHalflinePoint {
    pub x: f64,
    pub y_max: f64,
    pub value: f64,
    pub target: f64,
    pub defect: f64,
    pub tail_bound: f64,
    pub within: bool,
}

/// Compares the truncated potential with the exact half-line value; `within` allows the
/// computed tail bound plus `1e-7` relative quadrature slack.
pub fn fs_halfline_identity<T: Real>(p: T, alpha: T, x: T, y_max: T) -> Result<FsHalflinePoint> {
    let d = fs_constant(1, p, alpha)?;
    let r = fs_potential_halfline(x, p, alpha, y_max)?;
    let target = (d / x.powf(alpha)).to_f64_lossy();
    let value = r.value.to_f64_lossy();
    let defect = (value - target).abs();
    let tail_bound = r.tail_bound.to_f64_lossy();
    Ok(FsHalflinePoint {
        x: x.to_f64_lossy(),
        y_max: y_max.to_f64_lossy(),
        value,
        target,
        defect,
        tail_bound,
        within: defect <= tail_bound + 1e-7 * target,
    })
}
