use std::path::{Path, PathBuf};

use frac_hardy::geometry::DomainSpec;
use frac_hardy::hardy::{FamilySpec, WeightKind, DEFAULT_TOL};
use frac_hardy::{Error, Result};
use serde::{Deserialize, Serialize};

pub const CONFIG_SCHEMA: &str = "frac-hardy.config/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Constants,
    Weight,
    Verify,
    Selftest,
}

/// Fully resolved run description. Serializes to a canonical JSON form that
/// parses back to the same bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub command: CommandName,
    pub domain: Option<DomainSpec<f64>>,
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub h: Option<f64>,
    pub sphere_res: Option<usize>,
    pub kind: Option<WeightKind>,
    pub family: Option<FamilySpec<f64>>,
    pub out: Option<PathBuf>,
    pub tol: f64,
    pub constant_scale: f64,
}

impl RunConfig {
    pub fn new(command: CommandName) -> Self {
        Self {
            schema: CONFIG_SCHEMA.into(),
            command,
            domain: None,
            n: None,
            alpha: None,
            p: None,
            h: None,
            sphere_res: None,
            kind: None,
            family: None,
            out: None,
            tol: DEFAULT_TOL,
            constant_scale: 1.0,
        }
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::Format(format!("config: {e}")))?;
        if c.schema != CONFIG_SCHEMA {
            return Err(Error::Format(format!("unexpected config schema '{}'", c.schema)));
        }
        if let Some(d) = c.domain.clone() {
            d.normalized()?;
        }
        Ok(c)
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn read_inline_or_path(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Io(format!("{arg}: {e}")))
    }
}

pub fn parse_domain(arg: &str) -> Result<DomainSpec<f64>> {
    DomainSpec::from_json(&read_inline_or_path(arg)?)
}

/// `bumps`, `sharpness`, `sharpness:K`, or a family JSON document (inline or path).
pub fn parse_family(arg: &str) -> Result<FamilySpec<f64>> {
    let t = arg.trim();
    if t == "bumps" {
        return Ok(FamilySpec::Bumps);
    }
    if t == "sharpness" {
        return Ok(FamilySpec::Sharpness { k_max: 6 });
    }
    if let Some(k) = t.strip_prefix("sharpness:") {
        let k_max = k.parse().map_err(|_| Error::Parameter(format!("bad family index '{k}'")))?;
        return Ok(FamilySpec::Sharpness { k_max });
    }
    serde_json::from_str(&read_inline_or_path(t)?).map_err(|e| Error::Format(format!("family: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_json_round_trips() {
        let mut c = RunConfig::new(CommandName::Verify);
        c.domain = Some(DomainSpec::ball(vec![0.1, -0.3], 0.7).unwrap());
        c.alpha = Some(1.3);
        c.p = Some(2.0);
        c.kind = Some(WeightKind::ConvexTwoSided);
        c.family = Some(FamilySpec::Sharpness { k_max: 4 });
        c.h = Some(0.1 + 0.2);
        let text = c.to_canonical_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_canonical_json(), text);
    }

    #[test]
    fn family_arguments() {
        assert_eq!(parse_family("bumps").unwrap(), FamilySpec::Bumps);
        assert_eq!(parse_family("sharpness:3").unwrap(), FamilySpec::Sharpness { k_max: 3 });
        let f = parse_family(r#"{"type":"custom","members":[[{"center":[0.5],"radius":0.2}]]}"#).unwrap();
        assert!(matches!(f, FamilySpec::Custom { .. }));
        assert!(parse_family("sharpness:x").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = RunConfig::new(CommandName::Selftest).to_canonical_json().replace("\"tol\"", "\"tolerance\"");
        assert!(RunConfig::from_json(&text).is_err());
    }
}
