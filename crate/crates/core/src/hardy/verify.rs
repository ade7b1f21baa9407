use serde::{Deserialize, Serialize};

use crate::constants::FracParams;
use crate::energy::{gagliardo_direct, EnergyOptions, EnergyResult};
use crate::error::{Error, Result};
use crate::functions::{halfline_sharpness_family, sample_bumps, BumpSpec, GridFunction, HalflineProfile};
use crate::geometry::{build_sphere_quadrature, DomainSpec, SphereQuadrature};
use crate::hardy::{Discretization, VerificationReport, WeightKind};
use crate::scalar::{lit, Real};

/// Default relative tolerance of a verification.
pub const DEFAULT_TOL: f64 = 0.02;

/// Sphere resolution used when none is configured.
pub fn default_sphere_res(n: usize) -> usize {
    match n {
        1 => 2,
        2 => 512,
        _ => 32,
    }
}

/// A member of a trial family.
#[derive(Clone, Debug)]
pub enum TrialFunction<T> {
    Grid { id: String, f: GridFunction<T> },
    Halfline(HalflineProfile<T>),
}

impl<T: Real> TrialFunction<T> {
    pub fn id(&self) -> String {
        match self {
            TrialFunction::Grid { id, .. } => id.clone(),
            TrialFunction::Halfline(m) => format!("sharpness-k{}", m.k),
        }
    }
}

/// Declarative description of a trial family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de> + Real"))]
pub enum FamilySpec<T> {
    /// Three bumps placed from the domain's reference points.
    Bumps,
    /// Half-line sharpness profiles `1..=k_max`.
    Sharpness { k_max: usize },
    /// Explicit members, each a sum of bumps.
    Custom { members: Vec<Vec<BumpSpec<T>>> },
}

impl<T: Real> FamilySpec<T> {
    /// Samples the family. `h = None` picks a spacing per member from its smallest radius.
    pub fn build(&self, domain: &DomainSpec<T>, alpha: T, h: Option<T>) -> Result<Vec<TrialFunction<T>>> {
        match self {
            FamilySpec::Bumps => sample_members(&default_bumps(domain)?, domain, h),
            FamilySpec::Sharpness { k_max } => sharpness_family(alpha, *k_max),
            FamilySpec::Custom { members } => sample_members(members, domain, h),
        }
    }
}

fn sample_members<T: Real>(
    members: &[Vec<BumpSpec<T>>],
    domain: &DomainSpec<T>,
    h: Option<T>,
) -> Result<Vec<TrialFunction<T>>> {
    if members.iter().any(|m| m.is_empty()) {
        return Err(Error::Parameter("trial family member without bumps".into()));
    }
    members
        .iter()
        .enumerate()
        .map(|(i, specs)| {
            let h = match h {
                Some(h) => h,
                None => default_spacing(specs, domain.dim()),
            };
            Ok(TrialFunction::Grid { id: format!("bump-{i}"), f: sample_bumps(specs, domain, h)? })
        })
        .collect()
}

/// Spacing resolving the smallest bump radius with a dimension-dependent node count.
pub fn default_spacing<T: Real>(specs: &[BumpSpec<T>], n: usize) -> T {
    let r = specs.iter().map(|s| s.radius).fold(T::infinity(), T::min);
    let per_radius = match n {
        1 => 200.0,
        2 => 16.0,
        _ => 6.0,
    };
    r / lit(per_radius)
}

/// Wide centered, narrow centered, and off-center bumps at every reference point.
pub fn default_bumps<T: Real>(domain: &DomainSpec<T>) -> Result<Vec<Vec<BumpSpec<T>>>> {
    let refs = domain.reference_points();
    let mut wide = Vec::new();
    let mut narrow = Vec::new();
    let mut offset = Vec::new();
    for c in refs {
        let d = domain.dist_to_boundary(&c)?;
        wide.push(BumpSpec::new(c.clone(), lit::<T>(0.75) * d));
        narrow.push(BumpSpec::new(c.clone(), lit::<T>(0.4) * d));
        let mut moved = c.clone();
        let last = moved.len() - 1;
        moved[last] -= lit::<T>(0.4) * d;
        let (center, dm) = match domain.dist_to_boundary(&moved) {
            Ok(dm) if domain.contains(&moved) => (moved, dm),
            _ => (c, d),
        };
        offset.push(BumpSpec::new(center, lit::<T>(0.8) * dm));
    }
    Ok(vec![wide, narrow, offset])
}

/// Sharpness profiles `1..=k_max` as trial functions.
pub fn sharpness_family<T: Real>(alpha: T, k_max: usize) -> Result<Vec<TrialFunction<T>>> {
    if k_max == 0 {
        return Err(Error::Parameter("sharpness family needs k_max >= 1".into()));
    }
    (1..=k_max)
        .map(|k| Ok(TrialFunction::Halfline(halfline_sharpness_family(alpha, k)?)))
        .collect()
}

/// Weights of `kind` at the support nodes of `f`, in support order.
pub fn weight_field<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    alpha: T,
    p: T,
    kind: WeightKind,
    quad: &SphereQuadrature<T>,
    opts: &EnergyOptions,
) -> Result<Vec<(Vec<T>, T)>> {
    kind.check(domain, alpha.to_f64_lossy(), p.to_f64_lossy())?;
    let support = f.support();
    opts.workers.try_map(support.len(), |k| {
        let x = f.node(support[k]);
        let w = kind.weight_at(domain, &x, alpha, quad)?;
        Ok((x, w))
    })
}

/// Rayleigh-type quotient together with the energy it was built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quotient<T> {
    pub value: T,
    pub energy: EnergyResult<T>,
    /// `sum |f_i|^p weight(x_i) h^n`.
    pub denominator: T,
}

/// `c E_p[f] / sum |f_i|^p weight(x_i) h^n`, `c` the kind's energy factor.
pub fn quotient<T: Real>(
    f: &GridFunction<T>,
    domain: &DomainSpec<T>,
    alpha: T,
    p: T,
    kind: WeightKind,
    quad: &SphereQuadrature<T>,
    opts: &EnergyOptions,
) -> Result<Quotient<T>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let field = weight_field(f, domain, alpha, p, kind, quad, opts)?;
    let cell = f.h().powi(f.dim() as i32);
    let vals = f.values();
    let denominator = f
        .support()
        .iter()
        .zip(&field)
        .fold(T::zero(), |acc, (&i, (_, w))| acc + vals[i].abs().powf(p) * *w)
        * cell;
    if !(denominator > T::zero()) {
        return Err(Error::ZeroFunction);
    }
    let energy = gagliardo_direct(f, domain, p, alpha, opts)?;
    Ok(Quotient {
        value: kind.energy_factor::<T>() * energy.value / denominator,
        energy,
        denominator,
    })
}

/// Settings shared by every cell of a verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions<T> {
    pub tol: f64,
    /// Multiplies the theoretical constant; values above 1 act as a negative control.
    pub constant_scale: f64,
    /// Direction rule; built at [`default_sphere_res`] when absent.
    pub quad: Option<SphereQuadrature<T>>,
    pub energy: EnergyOptions,
}

impl<T> Default for VerifyOptions<T> {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, constant_scale: 1.0, quad: None, energy: EnergyOptions::default() }
    }
}

fn is_positive_half_line<T: Real>(domain: &DomainSpec<T>) -> bool {
    matches!(domain, DomainSpec::Halfspace { normal, offset }
        if normal.len() == 1 && normal[0] == T::one() && *offset == T::zero())
}

/// Checks `kind`'s inequality for every member of `family`; one report per member.
pub fn verify<T: Real>(
    domain: &DomainSpec<T>,
    alpha: T,
    p: T,
    kind: WeightKind,
    family: &[TrialFunction<T>],
    opts: &VerifyOptions<T>,
) -> Result<Vec<VerificationReport>> {
    if family.is_empty() {
        return Err(Error::Parameter("trial family is empty".into()));
    }
    if !(opts.tol >= 0.0 && opts.tol < 1.0) {
        return Err(Error::Parameter(format!("tolerance {} outside [0, 1)", opts.tol)));
    }
    if !(opts.constant_scale > 0.0) || !opts.constant_scale.is_finite() {
        return Err(Error::Parameter("constant scale must be positive".into()));
    }
    let (a64, p64) = (alpha.to_f64_lossy(), p.to_f64_lossy());
    kind.check(domain, a64, p64)?;
    let n = domain.dim();
    let params = FracParams::new(n, a64, p64)?;
    let constant = kind.constant(n, alpha, p)?.to_f64_lossy() * opts.constant_scale;
    if !(constant > 0.0) {
        return Err(Error::Parameter(format!(
            "the constant of {kind} vanishes at alpha = {a64}; the check would be vacuous"
        )));
    }
    let built;
    let quad = match &opts.quad {
        Some(q) if q.dim() == n => q,
        Some(q) => {
            return Err(Error::QuadratureResolution(format!(
                "rule lives on S^{} but the domain is {n}-dimensional",
                q.dim() - 1
            )))
        }
        None => {
            built = build_sphere_quadrature(n, default_sphere_res(n))?;
            &built
        }
    };
    quad.check()?;
    let uses_quad = matches!(kind, WeightKind::MAlpha | WeightKind::MSmall) && n > 1;
    let sphere_res = uses_quad.then(|| quad.resolution());
    family
        .iter()
        .map(|member| {
            let (q, disc) = match member {
                TrialFunction::Grid { f, .. } => {
                    let q = quotient(f, domain, alpha, p, kind, quad, &opts.energy)?;
                    let e = q.energy;
                    let rel = if e.value > T::zero() { (e.error / e.value).to_f64_lossy() } else { 0.0 };
                    let disc = Discretization {
                        h: f.h().to_f64_lossy(),
                        sphere_res,
                        energy_error: e.error.to_f64_lossy(),
                        quotient_rel_error: rel,
                    };
                    (q.value.to_f64_lossy(), disc)
                }
                TrialFunction::Halfline(m) => {
                    if kind != WeightKind::HalfLine || !is_positive_half_line(domain) {
                        return Err(Error::KindMismatch {
                            kind: kind.name().into(),
                            reason: "half-line profiles need HALF_LINE on the half-line x > 0".into(),
                        });
                    }
                    if m.alpha != alpha {
                        return Err(Error::Parameter("profile built for a different alpha".into()));
                    }
                    let e = m.energy()?;
                    let q = kind.energy_factor::<T>() * e.energy / e.mass;
                    let disc = Discretization {
                        h: m.hs.to_f64_lossy(),
                        sphere_res: None,
                        energy_error: 0.0,
                        quotient_rel_error: 0.0,
                    };
                    (q.to_f64_lossy(), disc)
                }
            };
            Ok(VerificationReport::new(
                kind,
                domain.kind_name(),
                params,
                member.id(),
                q,
                constant,
                opts.tol,
                disc,
            ))
        })
        .collect()
}

/// `true` iff every report passes.
pub fn suite_passes(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::kappa;

    fn fast() -> VerifyOptions<f64> {
        VerifyOptions { energy: EnergyOptions { richardson: false, ..Default::default() }, ..Default::default() }
    }

    #[test]
    fn interval_bumps_pass() {
        let iv = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let fam = FamilySpec::Bumps.build(&iv, 1.5, None).unwrap();
        assert_eq!(fam.len(), 3);
        let r = verify(&iv, 1.5, 2.0, WeightKind::OneDTwoSided, &fam, &fast()).unwrap();
        assert!(suite_passes(&r), "{r:?}");
        assert!(r.iter().all(|x| x.constant == kappa(1, 1.5).unwrap()));
    }

    #[test]
    fn quotient_is_homogeneous() {
        let iv = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let f = sample_bumps(&[BumpSpec::new(vec![0.4], 0.3)], &iv, 0.005).unwrap();
        let q = build_sphere_quadrature(1, 2).unwrap();
        let o = EnergyOptions { richardson: false, ..Default::default() };
        let a = quotient(&f, &iv, 1.5, 2.0, WeightKind::OneDTwoSided, &q, &o).unwrap().value;
        let b = quotient(&f.scaled(-3.0), &iv, 1.5, 2.0, WeightKind::OneDTwoSided, &q, &o).unwrap().value;
        assert!((a / b - 1.0).abs() < 1e-12);
        assert!(matches!(
            quotient(&f.scaled(0.0), &iv, 1.5, 2.0, WeightKind::OneDTwoSided, &q, &o),
            Err(Error::ZeroFunction)
        ));
    }

    #[test]
    fn refuses_vacuous_and_mismatched_checks() {
        let hl = DomainSpec::<f64>::halfspace(vec![1.0], 0.0).unwrap();
        let fam = FamilySpec::Bumps.build(&hl, 1.0, None).unwrap();
        assert!(matches!(
            verify(&hl, 1.0, 2.0, WeightKind::HalfLine, &fam, &fast()),
            Err(Error::Parameter(_))
        ));
        let iv = DomainSpec::<f64>::interval(0.0, 1.0).unwrap();
        let sharp = sharpness_family(1.5, 1).unwrap();
        assert!(verify(&iv, 1.5, 2.0, WeightKind::OneDTwoSided, &sharp, &fast()).is_err());
        assert!(verify(&iv, 1.5, 2.0, WeightKind::OneDTwoSided, &[], &fast()).is_err());
    }

    #[test]
    fn sharpness_family_against_scaled_constant() {
        let hl = DomainSpec::<f64>::halfspace(vec![1.0], 0.0).unwrap();
        let fam = sharpness_family(1.5, 5).unwrap();
        let ok = verify(&hl, 1.5, 2.0, WeightKind::HalfLine, &fam, &fast()).unwrap();
        assert!(suite_passes(&ok));
        let opts = VerifyOptions { constant_scale: 1.1, ..fast() };
        let bad = verify(&hl, 1.5, 2.0, WeightKind::HalfLine, &fam, &opts).unwrap();
        assert!(!suite_passes(&bad));
    }
}
