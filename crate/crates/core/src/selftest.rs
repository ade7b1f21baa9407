//! The acceptance matrix as a library routine.
//!
//! [`run_selftest`] evaluates twelve criteria at [`Level::Reduced`] resolution and
//! returns a report whose JSON is independent of the worker count. The same
//! criteria run at [`Level::Full`] from the acceptance test suite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constants::{fs_constant, kappa, sphere_alpha_integral};
use crate::energy::{fullline_energy, gagliardo_direct, gagliardo_reduced, EnergyOptions};
use crate::error::{Error, Result};
use crate::functions::{inversion_1d, sample_bump, BumpSpec};
use crate::geometry::{build_sphere_quadrature, convex_weight, m_weight, DomainSpec};
use crate::hardy::{
    certify_remainder, fs_halfline_identity, fs_inequality_check, sharpness_family, sharpness_probe,
    suite_passes, verify, FamilySpec, VerifyOptions, WeightKind,
};
use crate::parallel::Workers;

pub const SELFTEST_SCHEMA: &str = "frac-hardy.selftest/1";

pub const CRITERIA: [&str; 12] = [
    "constant identity",
    "sphere integral",
    "kappa vanishing",
    "half-space weight",
    "weight-bound inequality",
    "reduction equivalence",
    "inversion invariance",
    "hardy inequalities",
    "sharpness",
    "remainder positivity",
    "fs potential",
    "determinism",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Coarser lattices and smaller samples; minutes in total.
    Reduced,
    /// Resolutions and sample counts of the acceptance criteria.
    Full,
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub level: Level,
    pub workers: Workers,
    /// Multiplies the sharp constants in the inequality checks; `1` for a genuine run.
    pub constant_scale: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { level: Level::Reduced, workers: Workers::serial(), constant_scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    /// Number of individual comparisons.
    pub checks: usize,
    /// Named summary numbers (worst errors, gaps, margins).
    pub metrics: BTreeMap<String, f64>,
    /// First failing comparison, if any.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema: String,
    pub level: Level,
    pub constant_scale: f64,
    pub criteria: Vec<CriterionOutcome>,
    pub pass: bool,
}

impl SelftestReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One `criterion N (name): PASS|FAIL` line per criterion.
    pub fn summary_lines(&self) -> Vec<String> {
        self.criteria.iter().map(CriterionOutcome::line).collect()
    }
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let metrics: Vec<String> = self.metrics.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
        let mut s = format!(
            "criterion {:>2} ({}): {} [{} checks; {}]",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.checks,
            metrics.join(", ")
        );
        if let Some(f) = &self.failure {
            s += &format!(" first failure: {f}");
        }
        s
    }
}

/// Collects comparisons for one criterion.
struct Tally {
    checks: usize,
    metrics: BTreeMap<String, f64>,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self { checks: 0, metrics: BTreeMap::new(), failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn max(&mut self, key: &str, v: f64) {
        let e = self.metrics.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        *e = e.max(v);
    }

    fn min(&mut self, key: &str, v: f64) {
        let e = self.metrics.entry(key.to_string()).or_insert(f64::INFINITY);
        *e = e.min(v);
    }

    fn finish(self, id: usize) -> CriterionOutcome {
        CriterionOutcome {
            id,
            name: CRITERIA[id - 1].to_string(),
            pass: self.failure.is_none() && self.checks > 0,
            checks: self.checks,
            metrics: self.metrics,
            failure: self.failure,
        }
    }
}

const ALPHAS: [f64; 3] = [1.25, 1.5, 1.75];

fn energy_opts(opts: &SelftestOptions, richardson: bool) -> EnergyOptions {
    EnergyOptions { workers: opts.workers.clone(), richardson }
}

/// Deterministic low-discrepancy points of `domain` inside the window `[lo, hi]`.
pub fn sample_points(domain: &DomainSpec<f64>, lo: &[f64], hi: &[f64], count: usize) -> Vec<Vec<f64>> {
    const BASES: [u64; 3] = [2, 3, 5];
    let radical = |mut i: u64, b: u64| {
        let mut f = 1.0;
        let mut r = 0.0;
        while i > 0 {
            f /= b as f64;
            r += f * (i % b) as f64;
            i /= b;
        }
        r
    };
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count && i < 1_000_000 {
        let x: Vec<f64> = (0..lo.len()).map(|k| lo[k] + (hi[k] - lo[k]) * radical(i, BASES[k])).collect();
        if domain.contains(&x) {
            out.push(x);
        }
        i += 1;
    }
    out
}

fn c1_constant_identity(t: &mut Tally) -> Result<()> {
    for n in 1..=3 {
        for j in 1..=19 {
            let a = 1.0 + 0.05 * j as f64;
            let d = (fs_constant(n, 2.0, a)? - 2.0 * kappa(n, a)?).abs();
            t.max("max_abs_diff", d);
            t.check(d <= 1e-9, || format!("n={n} alpha={a}: |D - 2 kappa| = {d:e}"));
        }
    }
    Ok(())
}

fn c2_sphere_integral(t: &mut Tally) -> Result<()> {
    for (n, res) in [(2, 4096), (3, 64)] {
        let q = build_sphere_quadrature::<f64>(n, res)?;
        for a in [1.1, 1.5, 1.9] {
            let num = q.integrate(|w| w[n - 1].abs().powf(a));
            let rel = (num / sphere_alpha_integral(n, a)? - 1.0).abs();
            t.max("max_rel_err", rel);
            t.check(rel <= 1e-6, || format!("n={n} alpha={a}: relative error {rel:e}"));
        }
    }
    Ok(())
}

fn c3_kappa_vanishing(t: &mut Tally) -> Result<()> {
    for n in 1..=4 {
        let k = kappa(n, 1.0f64)?.abs();
        t.max("max_abs", k);
        t.check(k <= 1e-12, || format!("n={n}: |kappa| = {k:e}"));
    }
    Ok(())
}

fn c4_halfspace_weight(t: &mut Tally) -> Result<()> {
    let a = 1.5;
    let cases: [(Vec<f64>, usize); 2] = [(vec![0.6, 0.8], 1024), (vec![2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0], 64)];
    for (normal, res) in cases {
        let n = normal.len();
        let dom = DomainSpec::halfspace(normal.clone(), 0.0)?;
        let q = build_sphere_quadrature::<f64>(n, res)?;
        for i in 0..20 {
            let d = 0.05 + 0.1 * i as f64;
            // tangential offset orthogonal to the normal
            let mut x: Vec<f64> = normal.iter().map(|v| d * v).collect();
            let s = 0.37 * i as f64 - 2.0;
            x[0] += s * normal[1];
            x[1] -= s * normal[0];
            let w = m_weight(&dom, &x, a, &q, true)?;
            let rel = (w * d.powf(a) - 1.0).abs();
            t.max("max_rel_err", rel);
            t.check(rel <= 1e-4, || format!("n={n} x_n={d}: relative error {rel:e}"));
        }
    }
    Ok(())
}

fn c5_weight_bound(t: &mut Tally, opts: &SelftestOptions) -> Result<()> {
    let count = match opts.level {
        Level::Reduced => 60,
        Level::Full => 200,
    };
    let q2 = build_sphere_quadrature::<f64>(2, 4096)?;
    let q3 = build_sphere_quadrature::<f64>(3, 64)?;
    let cases: Vec<(&str, DomainSpec<f64>, Vec<f64>, Vec<f64>)> = vec![
        ("square", DomainSpec::unit_box(2), vec![0.0, 0.0], vec![1.0, 1.0]),
        ("disk", DomainSpec::ball(vec![0.0, 0.0], 1.0)?, vec![-1.0, -1.0], vec![1.0, 1.0]),
        ("cube", DomainSpec::unit_box(3), vec![0.0; 3], vec![1.0; 3]),
        ("slab", DomainSpec::slab(2, 1, 0.0, 1.0)?, vec![-5.0, 0.0], vec![5.0, 1.0]),
        ("slab3", DomainSpec::slab(3, 2, 0.0, 1.0)?, vec![-5.0, -5.0, 0.0], vec![5.0, 5.0, 1.0]),
    ];
    for (name, dom, lo, hi) in &cases {
        let pts = sample_points(dom, lo, hi, count);
        if pts.len() < count {
            return Err(Error::Resolution(format!("only {} sample points in {name}", pts.len())));
        }
        let q = if dom.dim() == 2 { &q2 } else { &q3 };
        for a in ALPHAS {
            let rows = opts.workers.try_map(pts.len(), |i| {
                let m = m_weight(dom, &pts[i], a, q, true)?;
                let c = convex_weight(dom, &pts[i], a)?;
                Ok((m, c))
            })?;
            for (x, (m, c)) in pts.iter().zip(rows) {
                let ratio = m / c - 1.0;
                t.min("min_rel_gap", ratio);
                t.check(ratio >= -1e-6, || format!("{name} alpha={a} x={x:?}: M-weight/convex - 1 = {ratio:e}"));
            }
        }
    }
    Ok(())
}

/// Bump, domain, sphere resolution and the coarse spacing of one reduction case.
type ReductionCase = (&'static str, DomainSpec<f64>, BumpSpec<f64>, usize, f64);

fn c6_reduction(t: &mut Tally, opts: &SelftestOptions) -> Result<()> {
    let mut cases: Vec<ReductionCase> = vec![
        ("interval", DomainSpec::interval(0.0, 1.0)?, BumpSpec::new(vec![0.45], 0.4), 2, 0.01),
        ("square", DomainSpec::unit_box(2), BumpSpec::new(vec![0.5, 0.5], 0.4), 128, 0.02),
        ("disk", DomainSpec::ball(vec![0.0, 0.0], 1.0)?, BumpSpec::new(vec![0.2, 0.1], 0.6), 128, 0.03),
    ];
    match opts.level {
        Level::Reduced => {
            cases[0].4 = 0.02;
            cases[1].4 = 0.04;
            cases[2].4 = 0.06;
        }
        Level::Full => {
            cases.push(("cube", DomainSpec::unit_box(3), BumpSpec::new(vec![0.5, 0.5, 0.5], 0.4), 12, 0.05));
        }
    }
    let eo = energy_opts(opts, false);
    for (name, dom, bump, res, h0) in &cases {
        let q = build_sphere_quadrature::<f64>(dom.dim(), *res)?;
        let bound = if *name == "cube" { 0.05 } else { 0.02 };
        for a in ALPHAS {
            let mut gaps = [0.0; 2];
            for (g, h) in gaps.iter_mut().zip([*h0, 0.5 * h0]) {
                let f = sample_bump(bump, dom, h)?;
                let d = gagliardo_direct(&f, dom, 2.0, a, &eo)?.value;
                let r = gagliardo_reduced(&f, dom, 2.0, a, &q, 0.75 * h, &eo)?.value;
                *g = (d - r).abs() / d;
            }
            t.max(&format!("max_gap_{name}"), gaps[1]);
            t.check(gaps[0] <= bound && gaps[1] <= bound, || {
                format!("{name} alpha={a}: gaps {:e}, {:e} exceed {bound}", gaps[0], gaps[1])
            });
            t.check(gaps[1] < gaps[0], || {
                format!("{name} alpha={a}: gap does not shrink ({:e} -> {:e})", gaps[0], gaps[1])
            });
        }
    }
    Ok(())
}

fn c7_inversion(t: &mut Tally, opts: &SelftestOptions) -> Result<()> {
    let dom = DomainSpec::interval(1.0, 2.0)?;
    let h = match opts.level {
        Level::Reduced => 0.004,
        Level::Full => 0.002,
    };
    let bumps = [(1.5, 0.4), (1.3, 0.2), (1.62, 0.3)];
    for (c, r) in bumps {
        let f = sample_bump(&BumpSpec::new(vec![c], r), &dom, h)?;
        for a in ALPHAS {
            let g = inversion_1d(&f, a)?;
            let ef = fullline_energy(&f, 2.0, a)?;
            let eg = fullline_energy(&g, 2.0, a)?;
            let rel = (ef - eg).abs() / ef;
            t.max("max_rel_defect", rel);
            t.check(rel <= 1e-3, || format!("bump ({c}, {r}) alpha={a}: defect {rel:e}"));
        }
    }
    Ok(())
}

/// One row of the inequality matrix.
struct Cell {
    label: &'static str,
    domain: DomainSpec<f64>,
    kind: WeightKind,
    p: f64,
    family: FamilySpec<f64>,
}

fn bumps(members: &[&[(&[f64], f64)]]) -> FamilySpec<f64> {
    FamilySpec::Custom {
        members: members
            .iter()
            .map(|m| m.iter().map(|(c, r)| BumpSpec::new(c.to_vec(), *r)).collect())
            .collect(),
    }
}

fn hardy_cells() -> Result<Vec<Cell>> {
    let square = DomainSpec::unit_box(2);
    let disk = DomainSpec::ball(vec![0.0, 0.0], 1.0)?;
    let tall = DomainSpec::Box { min: vec![0.0, 0.0], max: vec![1.0, 10.0] };
    let tall_family = bumps(&[&[(&[0.5, 0.55], 0.4)], &[(&[0.5, 0.3], 0.2)], &[(&[0.4, 1.2], 0.35)]]);
    let union = DomainSpec::IntervalUnion { intervals: vec![[0.0, 1.0], [2.0, 3.0]] };
    let mut cells = vec![
        Cell { label: "interval", domain: DomainSpec::interval(0.0, 1.0)?, kind: WeightKind::OneDTwoSided, p: 2.0, family: FamilySpec::Bumps },
        Cell { label: "union", domain: union, kind: WeightKind::OneDUnion, p: 2.0, family: FamilySpec::Bumps },
    ];
    for kind in [WeightKind::MAlpha, WeightKind::ConvexTwoSided] {
        cells.push(Cell { label: "square", domain: square.clone(), kind, p: 2.0, family: FamilySpec::Bumps });
        cells.push(Cell { label: "disk", domain: disk.clone(), kind, p: 2.0, family: FamilySpec::Bumps });
        cells.push(Cell { label: "box-slab", domain: tall.clone(), kind, p: 2.0, family: tall_family.clone() });
    }
    for kind in [WeightKind::MSmall, WeightKind::Dist] {
        for p in [2.0, 3.0] {
            cells.push(Cell { label: "square", domain: square.clone(), kind, p, family: FamilySpec::Bumps });
        }
    }
    cells.push(Cell { label: "interval", domain: DomainSpec::interval(0.0, 1.0)?, kind: WeightKind::MinDist, p: 3.0, family: FamilySpec::Bumps });
    let near_origin = bumps(&[&[(&[1.0], 0.9)], &[(&[0.3], 0.2)], &[(&[2.0], 1.5)]]);
    cells.push(Cell { label: "half-line", domain: DomainSpec::halfspace(vec![1.0], 0.0)?, kind: WeightKind::HalfLine, p: 2.0, family: near_origin });
    Ok(cells)
}

fn c8_hardy(t: &mut Tally, opts: &SelftestOptions) -> Result<()> {
    let vo = VerifyOptions::<f64> {
        constant_scale: opts.constant_scale,
        energy: energy_opts(opts, opts.level == Level::Full),
        ..Default::default()
    };
    for cell in hardy_cells()? {
        for a in ALPHAS {
            let fam = cell.family.build(&cell.domain, a, None)?;
            let reports = verify(&cell.domain, a, cell.p, cell.kind, &fam, &vo)?;
            for r in &reports {
                t.min("min_margin", r.margin);
                t.max("max_quotient_rel_error", r.discretization.quotient_rel_error);
                t.check(r.pass, || {
                    format!(
                        "{} {} p={} alpha={a} {}: quotient {} vs constant {}",
                        cell.kind, cell.label, cell.p, r.trial, r.quotient, r.constant
                    )
                });
            }
        }
    }
    Ok(())
}

fn c9_sharpness(t: &mut Tally, opts: &SelftestOptions) -> Result<()> {
    let hl = DomainSpec::halfspace(vec![1.0], 0.0)?;
    for a in ALPHAS {
        let probe = sharpness_probe(a, 6)?;
        let gap = probe.quotients[5] / (probe.kappa * opts.constant_scale) - 1.0;
        t.max("max_final_gap", gap);
        t.min("min_final_gap", gap);
        t.check(probe.nonincreasing, || format!("alpha={a}: quotients not monotone {:?}", probe.quotients));
        t.check((-0.02..=0.05).contains(&gap), || format!("alpha={a}: final gap {gap:e}"));
        // harness must reject a constant 10% above the sharp one
        let fam = sharpness_family(a, 6)?;
        let control = VerifyOptions::<f64> {
            constant_scale: 1.1 * opts.constant_scale,
            energy: energy_opts(opts, false),
            ..Default::default()
        };
        let reports = verify(&hl, a, 2.0, WeightKind::HalfLine, &fam, &control)?;
        t.check(!suite_passes(&reports), || format!("alpha={a}: negative control passed"));
    }
    Ok(())
}

fn c10_remainder(t: &mut Tally) -> Result<()> {
    for j in 0..50u64 {
        let num = 101 + 2 * j;
        let cert = certify_remainder(num, 100, 1000)?;
        t.min("min_value", cert.min_value);
        t.check(cert.holds(), || format!("alpha={num}/100: uncertified at k = {:?}", cert.failures));
    }
    Ok(())
}

fn c11_fs(t: &mut Tally) -> Result<()> {
    let xs: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    for (p, a) in [(2.0, 1.5), (3.0, 2.0), (2.5, 1.25)] {
        let r = fs_inequality_check(p, a, &xs, 1e-4)?;
        t.min("min_margin", r.min_margin);
        t.check(r.pass, || format!("p={p} alpha={a}: margin {:e}", r.min_margin));
        for x in [0.1, 0.5, 0.9] {
            let h = fs_halfline_identity(p, a, x, 1e3)?;
            t.max("max_defect_over_tail", h.defect / h.tail_bound);
            t.check(h.within, || format!("p={p} alpha={a} x={x}: defect {:e} > tail {:e}", h.defect, h.tail_bound));
        }
    }
    Ok(())
}

fn c12_determinism(t: &mut Tally, opts: &SelftestOptions) -> Result<()> {
    match opts.level {
        Level::Reduced => {
            let dom = DomainSpec::<f64>::ball(vec![0.0, 0.0], 1.0)?;
            let f = sample_bump(&BumpSpec::new(vec![0.1, -0.2], 0.5), &dom, 0.05)?;
            let q = build_sphere_quadrature(2, 64)?;
            let serial = EnergyOptions { workers: Workers::serial(), richardson: true };
            let pool = energy_opts(opts, true);
            let a = gagliardo_direct(&f, &dom, 2.0, 1.5, &serial)?;
            let b = gagliardo_direct(&f, &dom, 2.0, 1.5, &pool)?;
            t.check(a.value.to_bits() == b.value.to_bits() && a.error.to_bits() == b.error.to_bits(), || {
                "direct energy depends on the worker count".into()
            });
            let a = gagliardo_reduced(&f, &dom, 2.0, 1.5, &q, 0.04, &serial)?;
            let b = gagliardo_reduced(&f, &dom, 2.0, 1.5, &q, 0.04, &pool)?;
            t.check(a.value.to_bits() == b.value.to_bits(), || "reduced energy depends on the worker count".into());
        }
        Level::Full => {
            let run = |w: usize| -> Result<String> {
                let o = SelftestOptions { level: Level::Reduced, workers: Workers::new(w)?, constant_scale: opts.constant_scale };
                Ok(run_selftest(&o)?.to_json())
            };
            let (a, b) = (run(1)?, run(4)?);
            t.check(a == b, || "selftest JSON differs between 1 and 4 workers".into());
        }
    }
    Ok(())
}

/// Runs criterion `id` (1-based). Errors inside a criterion count as failures.
pub fn run_criterion(id: usize, opts: &SelftestOptions) -> CriterionOutcome {
    let mut t = Tally::new();
    let res = match id {
        1 => c1_constant_identity(&mut t),
        2 => c2_sphere_integral(&mut t),
        3 => c3_kappa_vanishing(&mut t),
        4 => c4_halfspace_weight(&mut t),
        5 => c5_weight_bound(&mut t, opts),
        6 => c6_reduction(&mut t, opts),
        7 => c7_inversion(&mut t, opts),
        8 => c8_hardy(&mut t, opts),
        9 => c9_sharpness(&mut t, opts),
        10 => c10_remainder(&mut t),
        11 => c11_fs(&mut t),
        12 => c12_determinism(&mut t, opts),
        _ => Err(Error::Parameter(format!("no criterion {id}"))),
    };
    if let Err(e) = res {
        t.checks += 1;
        t.failure.get_or_insert(format!("error: {e}"));
    }
    if id == 0 || id > CRITERIA.len() {
        return CriterionOutcome {
            id,
            name: "unknown".into(),
            pass: false,
            checks: 0,
            metrics: BTreeMap::new(),
            failure: t.failure,
        };
    }
    t.finish(id)
}

/// All twelve criteria in order.
pub fn run_selftest(opts: &SelftestOptions) -> Result<SelftestReport> {
    if !(opts.constant_scale > 0.0) {
        return Err(Error::Parameter("constant scale must be positive".into()));
    }
    let criteria: Vec<CriterionOutcome> = (1..=CRITERIA.len()).map(|id| run_criterion(id, opts)).collect();
    let pass = criteria.iter().all(|c| c.pass);
    Ok(SelftestReport {
        schema: SELFTEST_SCHEMA.into(),
        level: opts.level,
        constant_scale: opts.constant_scale,
        criteria,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_points_lie_inside() {
        let d = DomainSpec::ball(vec![0.0, 0.0], 1.0).unwrap();
        let pts = sample_points(&d, &[-1.0, -1.0], &[1.0, 1.0], 50);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|x| d.contains(x)));
    }

    #[test]
    fn cheap_criteria_pass() {
        let o = SelftestOptions::default();
        for id in [1, 3, 4, 11] {
            let c = run_criterion(id, &o);
            assert!(c.pass, "{}", c.line());
        }
        assert!(!run_criterion(13, &o).pass);
    }
}
