use serde::{Deserialize, Serialize};

use crate::constants::FracParams;
use crate::error::{Error, Result};
use crate::hardy::WeightKind;

/// Schema tag carried by every report line and CSV table.
pub const REPORT_SCHEMA: &str = "frac-hardy.report/1";

/// Lattice and quadrature data a quotient was computed at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    /// Lattice spacing (log-step for half-line profiles).
    pub h: f64,
    /// Sphere rule resolution, when a direction average was taken.
    pub sphere_res: Option<usize>,
    /// Richardson estimate of the energy error.
    pub energy_error: f64,
    /// Resulting relative uncertainty of the quotient.
    pub quotient_rel_error: f64,
}

/// Outcome of one inequality check for one trial function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub kind: WeightKind,
    pub domain: String,
    pub params: FracParams,
    pub trial: String,
    pub quotient: f64,
    /// Constant the quotient is compared against (already multiplied by any scale).
    pub constant: f64,
    /// `quotient / constant - 1`.
    pub margin: f64,
    pub tol: f64,
    pub discretization: Discretization,
    pub pass: bool,
}

impl VerificationReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: WeightKind,
        domain: &str,
        params: FracParams,
        trial: String,
        quotient: f64,
        constant: f64,
        tol: f64,
        discretization: Discretization,
    ) -> Self {
        let margin = quotient / constant - 1.0;
        Self {
            schema: REPORT_SCHEMA.into(),
            kind,
            domain: domain.into(),
            params,
            trial,
            quotient,
            constant,
            margin,
            tol,
            discretization,
            pass: quotient >= constant * (1.0 - tol),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(line).map_err(|e| Error::Format(e.to_string()))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Format(format!("unexpected report schema '{}'", r.schema)));
        }
        Ok(r)
    }
}

/// One JSON object per line.
pub fn reports_to_jsonl(reports: &[VerificationReport]) -> String {
    reports.iter().map(|r| r.to_json() + "\n").collect()
}

pub fn reports_from_jsonl(text: &str) -> Result<Vec<VerificationReport>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(VerificationReport::from_json).collect()
}

pub const CSV_COLUMNS: &str = "kind,domain,n,alpha,p,trial,quotient,constant,margin,tol,h,sphere_res,energy_error,quotient_rel_error,pass";

/// Summary table with a schema comment line and a header row.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = format!("# {REPORT_SCHEMA}\n{CSV_COLUMNS}\n");
    for r in reports {
        let d = &r.discretization;
        out += &format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.kind,
            r.domain,
            r.params.n,
            r.params.alpha,
            r.params.p,
            r.trial,
            r.quotient,
            r.constant,
            r.margin,
            r.tol,
            d.h,
            d.sphere_res.map(|v| v.to_string()).unwrap_or_default(),
            d.energy_error,
            d.quotient_rel_error,
            r.pass
        );
    }
    out
}
