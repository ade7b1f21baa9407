use std::io::Write;
use std::path::{Path, PathBuf};

use frac_hardy::constants::{fs_constant, kappa, sphere_alpha_integral};
use frac_hardy::energy::EnergyOptions;
use frac_hardy::geometry::{cached_sphere_quadrature, convex_weight, m_weight, DomainSpec, SphereQuadrature};
use frac_hardy::hardy::{
    default_sphere_res, reports_to_csv, reports_to_jsonl, suite_passes, verify as run_verify, FamilySpec,
    VerifyOptions, WeightKind,
};
use frac_hardy::parallel::Workers;
use frac_hardy::selftest::{run_selftest, Level, SelftestOptions};
use frac_hardy::{Error, Result};
use serde::Serialize;

use crate::config::RunConfig;

pub const CONSTANTS_SCHEMA: &str = "frac-hardy.constants/1";
pub const WEIGHT_SCHEMA: &str = "frac-hardy.weight/1";

/// Sample lattice cap for `weight`.
const MAX_SAMPLES: usize = 2_000_000;

pub fn workers(count: Option<usize>) -> Result<Workers> {
    match count {
        Some(c) => Workers::new(c),
        None => Ok(Workers::default()),
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("FRAC_HARDY_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn sphere(n: usize, res: Option<usize>, fallback: usize) -> Result<SphereQuadrature<f64>> {
    cached_sphere_quadrature(cache_dir().as_deref(), n, res.unwrap_or(fallback))
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("--{flag} is required")))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct ConstantsRow {
    schema: &'static str,
    n: usize,
    alpha: f64,
    p: Option<f64>,
    kappa: Option<f64>,
    sphere_alpha_integral: f64,
    fs_constant: Option<f64>,
    fs_over_kappa: Option<f64>,
}

pub fn constants(cfg: &RunConfig, json: bool) -> Result<u8> {
    let n = required(cfg.n, "n")?;
    let alpha = required(cfg.alpha, "alpha")?;
    if n == 0 {
        return Err(Error::Parameter("--n must be at least 1".into()));
    }
    let kappa = match cfg.p {
        Some(_) if !(alpha > 0.0 && alpha < 2.0) => None,
        _ => Some(kappa(n, alpha)?),
    };
    let fs = cfg.p.map(|p| fs_constant(n, p, alpha)).transpose()?;
    let row = ConstantsRow {
        schema: CONSTANTS_SCHEMA,
        n,
        alpha,
        p: cfg.p,
        kappa,
        sphere_alpha_integral: sphere_alpha_integral(n, alpha)?,
        fs_constant: fs,
        fs_over_kappa: match (fs, kappa) {
            (Some(d), Some(k)) if k != 0.0 => Some(d / k),
            _ => None,
        },
    };
    let text = serde_json::to_string(&row).expect("row serializes") + "\n";
    if let Some(out) = &cfg.out {
        write_out(out, &text)?;
    }
    if json {
        print!("{text}");
        return Ok(0);
    }
    let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.15e}"));
    println!("{:<22}{}", "n", n);
    println!("{:<22}{}", "alpha", alpha);
    println!("{:<22}{}", "p", cfg.p.map_or("-".to_string(), |p| p.to_string()));
    println!("{:<22}{}", "kappa", fmt(row.kappa));
    println!("{:<22}{}", "sphere_alpha_integral", fmt(Some(row.sphere_alpha_integral)));
    println!("{:<22}{}", "fs_constant", fmt(row.fs_constant));
    println!("{:<22}{}", "fs_constant/kappa", fmt(row.fs_over_kappa));
    Ok(0)
}

/// Sampling window: the bounding box, with infinite sides cut 2 units past the
/// first reference point.
fn window(domain: &DomainSpec<f64>) -> (Vec<f64>, Vec<f64>) {
    let (mut lo, mut hi) = domain.bounding_box();
    let r = &domain.reference_points()[0];
    for k in 0..lo.len() {
        if !lo[k].is_finite() {
            lo[k] = r[k] - 2.0;
        }
        if !hi[k].is_finite() {
            hi[k] = r[k] + 2.0;
        }
    }
    (lo, hi)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn weight(cfg: &RunConfig, workers: &Workers) -> Result<u8> {
    let domain = cfg.domain.as_ref().ok_or_else(|| Error::Parameter("--domain is required".into()))?;
    let alpha = required(cfg.alpha, "alpha")?;
    if !(alpha > 0.0) {
        return Err(Error::Parameter("--alpha must be positive".into()));
    }
    let n = domain.dim();
    let quad = sphere(n, cfg.sphere_res, if n == 2 { 4096 } else { 64 })?;
    let (lo, hi) = window(domain);
    let h = cfg.h.unwrap_or_else(|| lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max) / 40.0);
    if !(h > 0.0) {
        return Err(Error::Parameter("--h must be positive".into()));
    }
    let counts: Vec<usize> = lo.iter().zip(&hi).map(|(a, b)| ((b - a) / h).floor().max(1.0) as usize).collect();
    let total = counts.iter().try_fold(1usize, |a, &c| a.checked_mul(c));
    if total.map_or(true, |t| t > MAX_SAMPLES) {
        return Err(Error::Parameter(format!("sample grid exceeds {MAX_SAMPLES} points; raise --h")));
    }
    let mut points = Vec::new();
    for flat in 0..total.unwrap_or(0) {
        let mut rest = flat;
        let x: Vec<f64> = (0..n)
            .map(|k| {
                let i = rest % counts[k];
                rest /= counts[k];
                lo[k] + (i as f64 + 0.5) * h
            })
            .collect();
        if domain.contains(&x) {
            points.push(x);
        }
    }
    let convex = domain.is_convex();
    let two_sided = alpha > 1.0 && alpha < 2.0;
    let rows = workers.try_map(points.len(), |i| {
        let x = &points[i];
        let d = domain.dist_to_boundary(x)?;
        let width = if convex { Some(domain.width(x)?) } else { None };
        let m_big = m_weight(domain, x, alpha, &quad, true)?;
        let m_small = m_weight(domain, x, alpha, &quad, false)?;
        let bound = if convex && two_sided { Some(convex_weight(domain, x, alpha)?) } else { None };
        let bound_holds = bound.map(|b| m_big >= b * (1.0 - 1e-6));
        let mut line: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        line.extend([
            d.to_string(),
            cell(width),
            d.powf(-alpha).to_string(),
            m_big.to_string(),
            cell(bound),
            m_small.to_string(),
            bound_holds.map(|b| b.to_string()).unwrap_or_default(),
        ]);
        Ok(line.join(","))
    })?;
    let mut header: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
    for c in ["d", "width", "dist_weight", "m_alpha_weight", "convex_weight", "m_small_weight", "bound_holds"] {
        header.push(c.into());
    }
    let mut text = format!(
        "# {WEIGHT_SCHEMA} alpha={alpha} h={h} sphere_res={}\n{}\n",
        quad.resolution(),
        header.join(",")
    );
    for r in rows {
        text += &r;
        text.push('\n');
    }
    match &cfg.out {
        Some(out) => write_out(out, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

pub fn verify(cfg: &RunConfig, workers: &Workers) -> Result<u8> {
    let family = cfg.family.clone().unwrap_or(FamilySpec::Bumps);
    let sharp = matches!(family, FamilySpec::Sharpness { .. });
    let domain = match (&cfg.domain, sharp) {
        (Some(d), _) => d.clone(),
        (None, true) => DomainSpec::halfspace(vec![1.0], 0.0)?,
        (None, false) => return Err(Error::Parameter("--domain is required".into())),
    };
    let kind = match (cfg.kind, sharp) {
        (Some(k), _) => k,
        (None, true) => WeightKind::HalfLine,
        (None, false) => return Err(Error::Parameter("--kind is required".into())),
    };
    let alpha = required(cfg.alpha, "alpha")?;
    let p = cfg.p.unwrap_or(2.0);
    if alpha == 1.0 {
        return Err(Error::Parameter("alpha = 1 makes kappa vanish; the check would be vacuous".into()));
    }
    kind.check(&domain, alpha, p)?;
    if let Some(h) = cfg.h {
        if !(h > 0.0) {
            return Err(Error::Parameter("--h must be positive".into()));
        }
    }
    let n = domain.dim();
    let quad = if matches!(kind, WeightKind::MAlpha | WeightKind::MSmall) {
        Some(sphere(n, cfg.sphere_res, default_sphere_res(n))?)
    } else {
        None
    };
    let members = family.build(&domain, alpha, cfg.h)?;
    let opts = VerifyOptions {
        tol: cfg.tol,
        constant_scale: cfg.constant_scale,
        quad,
        energy: EnergyOptions::with_workers(workers.clone()),
    };
    let reports = run_verify(&domain, alpha, p, kind, &members, &opts)?;
    let jsonl = reports_to_jsonl(&reports);
    print!("{jsonl}");
    if let Some(out) = &cfg.out {
        write_out(out, &jsonl)?;
        write_out(&out.with_extension("csv"), &reports_to_csv(&reports))?;
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    eprintln!("{passed}/{} reports pass ({kind}, alpha={alpha}, p={p})", reports.len());
    Ok(if suite_passes(&reports) { 0 } else { 1 })
}

pub fn selftest(cfg: &RunConfig, workers: &Workers, full: bool) -> Result<u8> {
    let opts = SelftestOptions {
        level: if full { Level::Full } else { Level::Reduced },
        workers: workers.clone(),
        constant_scale: cfg.constant_scale,
    };
    let report = run_selftest(&opts)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    if let Some(out) = &cfg.out {
        write_out(out, &report.to_json())?;
    }
    println!("selftest: {}", if report.pass { "PASS" } else { "FAIL" });
    Ok(if report.pass { 0 } else { 1 })
}
