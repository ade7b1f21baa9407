use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{check_open, fs_constant, kappa};
use crate::error::{Error, Result};
use crate::geometry::{convex_weight, dir_dist, m_weight, DomainSpec, SphereQuadrature};
use crate::scalar::{lit, Real};

/// Weight on the right-hand side of a Hardy inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightKind {
    /// `1/M_alpha(x)^alpha`, any domain, `p = 2`.
    MAlpha,
    /// `[1/d + 1/(D - d)]^alpha` on convex domains, `p = 2`.
    ConvexTwoSided,
    /// `d(x)^{-alpha}` on convex domains, general `p`.
    Dist,
    /// `1/m_alpha(x)^alpha`, any domain, general `p`.
    MSmall,
    /// `(1/(x-a) + 1/(b-x))^alpha` on an interval, `p = 2`.
    OneDTwoSided,
    /// `(1/d_J + 1/delta_J)^alpha` on an open subset of the line, `p = 2`.
    OneDUnion,
    /// `min(x-a, b-x)^{-alpha}` on an interval, general `p`.
    MinDist,
    /// `x_n^{-alpha}` on a half-space, `p = 2`.
    HalfLine,
}

pub const ALL_KINDS: [WeightKind; 8] = [
    WeightKind::MAlpha,
    WeightKind::ConvexTwoSided,
    WeightKind::Dist,
    WeightKind::MSmall,
    WeightKind::OneDTwoSided,
    WeightKind::OneDUnion,
    WeightKind::MinDist,
    WeightKind::HalfLine,
];

impl WeightKind {
    pub fn name(self) -> &'static str {
        match self {
            WeightKind::MAlpha => "M_ALPHA",
            WeightKind::ConvexTwoSided => "CONVEX_TWO_SIDED",
            WeightKind::Dist => "DIST",
            WeightKind::MSmall => "M_SMALL",
            WeightKind::OneDTwoSided => "ONE_D_TWO_SIDED",
            WeightKind::OneDUnion => "ONE_D_UNION",
            WeightKind::MinDist => "MIN_DIST",
            WeightKind::HalfLine => "HALF_LINE",
        }
    }

    /// Kinds whose constant is `kappa` and whose energy carries a leading 1/2.
    pub fn is_two_sided(self) -> bool {
        !matches!(self, WeightKind::Dist | WeightKind::MSmall | WeightKind::MinDist)
    }

    /// Factor multiplying the energy in the quotient.
    pub fn energy_factor<T: Real>(self) -> T {
        if self.is_two_sided() {
            lit(0.5)
        } else {
            T::one()
        }
    }

    fn mismatch(self, reason: impl Into<String>) -> Error {
        Error::KindMismatch { kind: self.name().into(), reason: reason.into() }
    }

    /// Checks the dimension, exponent and geometry window of the kind.
    pub fn check<T: Real>(self, domain: &DomainSpec<T>, alpha: f64, p: f64) -> Result<()> {
        if self.is_two_sided() {
            if p != 2.0 {
                return Err(self.mismatch(format!("needs p = 2, got {p}")));
            }
            if self == WeightKind::HalfLine {
                check_open(alpha, 0.0, 2.0, "alpha")?;
            } else {
                check_open(alpha, 1.0, 2.0, "alpha")?;
            }
        } else {
            check_open(p, 1.0, f64::INFINITY, "p")?;
            check_open(alpha, 1.0, p, "alpha")?;
        }
        let n = domain.dim();
        match self {
            WeightKind::MAlpha | WeightKind::MSmall => Ok(()),
            WeightKind::ConvexTwoSided | WeightKind::Dist => {
                if domain.is_convex() {
                    Ok(())
                } else {
                    Err(self.mismatch(format!("{} is not convex", domain.kind_name())))
                }
            }
            WeightKind::OneDTwoSided | WeightKind::MinDist => match domain {
                DomainSpec::Interval { a, b } if a.is_finite() && b.is_finite() => Ok(()),
                _ => Err(self.mismatch("needs a bounded interval")),
            },
            WeightKind::OneDUnion => match domain {
                DomainSpec::Interval { .. } | DomainSpec::IntervalUnion { .. } => Ok(()),
                _ => Err(self.mismatch("needs an interval or a union of intervals")),
            },
            WeightKind::HalfLine => match domain {
                DomainSpec::Halfspace { .. } => Ok(()),
                _ => Err(self.mismatch(format!("needs a half-space, got {} in dimension {n}", domain.kind_name()))),
            },
        }
    }

    /// Sharp constant of the inequality: `kappa_{n,alpha}` for the two-sided kinds,
    /// `D_{n,p,alpha}` otherwise.
    pub fn constant<T: Real>(self, n: usize, alpha: T, p: T) -> Result<T> {
        if self.is_two_sided() {
            kappa(n, alpha)
        } else {
            fs_constant(n, p, alpha)
        }
    }

    /// Weight at one interior point. `quad` is used by the direction-averaged kinds.
    pub fn weight_at<T: Real>(
        self,
        domain: &DomainSpec<T>,
        x: &[T],
        alpha: T,
        quad: &SphereQuadrature<T>,
    ) -> Result<T> {
        match self {
            WeightKind::MAlpha => m_weight(domain, x, alpha, quad, true),
            WeightKind::MSmall => m_weight(domain, x, alpha, quad, false),
            WeightKind::ConvexTwoSided => convex_weight(domain, x, alpha),
            WeightKind::Dist | WeightKind::MinDist | WeightKind::HalfLine => {
                Ok(domain.dist_to_boundary(x)?.powf(-alpha))
            }
            WeightKind::OneDTwoSided | WeightKind::OneDUnion => {
                let (d, delta) = dir_dist(domain, x, &[T::one()])?;
                let far = if delta.is_finite() { delta.recip() } else { T::zero() };
                Ok((d.recip() + far).powf(alpha))
            }
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        ALL_KINDS
            .iter()
            .copied()
            .find(|k| k.name() == up)
            .ok_or_else(|| Error::Parameter(format!("unknown weight kind '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_sphere_quadrature;

    #[test]
    fn names_round_trip() {
        for k in ALL_KINDS {
            assert_eq!(k.name().parse::<WeightKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert_eq!("one-d-union".parse::<WeightKind>().unwrap(), WeightKind::OneDUnion);
        assert!("bogus".parse::<WeightKind>().is_err());
    }

    #[test]
    fn weight_examples() {
        let q = build_sphere_quadrature::<f64>(1, 2).unwrap();
        let iv = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let w = WeightKind::OneDTwoSided.weight_at(&iv, &[0.5], 1.5, &q).unwrap();
        assert!((w - 4f64.powf(1.5)).abs() < 1e-12);
        let iv = DomainSpec::<f64>::interval(2.0, 5.0).unwrap();
        let w = WeightKind::MinDist.weight_at(&iv, &[4.5], 1.5, &q).unwrap();
        assert!((w - 0.5f64.powf(-1.5)).abs() < 1e-12);
        let u = DomainSpec::IntervalUnion { intervals: vec![[0.0, 1.0], [2.0, 3.0]] };
        let w = WeightKind::OneDUnion.weight_at(&u, &[0.5], 1.5, &q).unwrap();
        assert!((w - (2.0f64 + 1.0 / 2.5).powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn windows() {
        let sq = DomainSpec::<f64>::unit_box(2);
        assert!(WeightKind::MAlpha.check(&sq, 1.5, 2.0).is_ok());
        assert!(WeightKind::MAlpha.check(&sq, 1.5, 3.0).is_err());
        assert!(WeightKind::MAlpha.check(&sq, 1.0, 2.0).is_err());
        assert!(WeightKind::Dist.check(&sq, 2.5, 3.0).is_ok());
        assert!(WeightKind::Dist.check(&sq, 3.5, 3.0).is_err());
        assert!(matches!(WeightKind::HalfLine.check(&sq, 1.5, 2.0), Err(Error::KindMismatch { .. })));
        let u = DomainSpec::IntervalUnion { intervals: vec![[0.0, 1.0], [2.0, 3.0]] };
        assert!(WeightKind::OneDTwoSided.check(&u, 1.5, 2.0).is_err());
        assert!(WeightKind::OneDUnion.check(&u, 1.5, 2.0).is_ok());
        assert!(WeightKind::ConvexTwoSided.check(&u, 1.5, 2.0).is_err());
    }

    #[test]
    fn constants_follow_the_kind() {
        let k = WeightKind::MAlpha.constant(2, 1.5f64, 2.0).unwrap();
        assert_eq!(k, kappa(2, 1.5).unwrap());
        let d = WeightKind::Dist.constant(2, 1.5f64, 2.0).unwrap();
        assert!((d / k - 2.0).abs() < 1e-9);
        assert_eq!(WeightKind::MinDist.energy_factor::<f64>(), 1.0);
        assert_eq!(WeightKind::OneDUnion.energy_factor::<f64>(), 0.5);
    }
}
