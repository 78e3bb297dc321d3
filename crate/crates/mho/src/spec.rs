//! JSON problem-spec documents: the on-disk format the CLI ingests,
//! validated into [`ProblemSpec`] values with field-level diagnostics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::regions::{GridConfig, Mode, ProblemSpec, RegionError};
use crate::tol::DEFAULT_MAX_N;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("spec is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0:?}; this tool reads version \"1\"")]
    SchemaVersion(String),
    #[error("field n is {n} but {p} crossovers were given; p must list n - 1 values")]
    SourceCountMismatch { n: usize, p: usize },
    #[error("mode {0:?} is not one of \"strong\", \"weak\"")]
    UnknownMode(String),
    #[error("strong mode requires a D list with one distortion cap per helper")]
    MissingCaps,
    #[error("weak mode takes no D list")]
    UnexpectedCaps,
    #[error("unknown tolerance key {0:?}; known keys: \"membership\"")]
    ToleranceKey(String),
    #[error("tolerance {key} is {value}; tolerances must be positive and finite")]
    ToleranceRange { key: String, value: f64 },
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("MHO_MAX_N is {0:?}; it must be an integer of at least 2")]
    MaxSourcesEnv(String),
}

/// The parsed spec file. Unknown fields are rejected so that typos in
/// the p or D lists fail loudly instead of silently defaulting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema_version: String,
    pub n: usize,
    pub p: Vec<f64>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<f64>>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<BTreeMap<String, f64>>,
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Full validation: schema version, counts, mode consistency,
    /// parameter ranges, sweep step, and tolerance entries.
    pub fn to_problem_spec(&self) -> Result<ProblemSpec, SpecError> {
        if self.schema_version != "1" {
            return Err(SpecError::SchemaVersion(self.schema_version.clone()));
        }
        if self.n != self.p.len() + 1 {
            return Err(SpecError::SourceCountMismatch {
                n: self.n,
                p: self.p.len(),
            });
        }
        if let Some(step) = self.grid_step {
            // Reuse the region-level validation for the step value.
            GridConfig::new(step)?;
        }
        if let Some(tolerances) = &self.tolerances {
            for (key, &value) in tolerances {
                if key != "membership" {
                    return Err(SpecError::ToleranceKey(key.clone()));
                }
                if !value.is_finite() || value <= 0.0 {
                    return Err(SpecError::ToleranceRange {
                        key: key.clone(),
                        value,
                    });
                }
            }
        }
        let spec = match self.mode.as_str() {
            "strong" => {
                let caps = self.caps.as_ref().ok_or(SpecError::MissingCaps)?;
                ProblemSpec::strong(&self.p, caps)?
            }
            "weak" => {
                if self.caps.is_some() {
                    return Err(SpecError::UnexpectedCaps);
                }
                ProblemSpec::weak(&self.p)?
            }
            other => return Err(SpecError::UnknownMode(other.to_string())),
        };
        Ok(spec)
    }

    /// Sweep configuration with precedence: explicit override, then the
    /// spec's own grid_step, then the library default.
    pub fn grid_config(
        &self,
        override_step: Option<f64>,
        max_sources: usize,
    ) -> Result<GridConfig, SpecError> {
        let config = match override_step.or(self.grid_step) {
            Some(step) => GridConfig::new(step)?,
            None => GridConfig::default(),
        };
        Ok(config.with_max_sources(max_sources))
    }

    /// The membership tolerance named in the spec, if any; validity is
    /// established by [`Self::to_problem_spec`].
    pub fn membership_tolerance(&self) -> Option<f64> {
        self.tolerances
            .as_ref()
            .and_then(|t| t.get("membership"))
            .copied()
    }

    pub fn mode(&self) -> Option<Mode> {
        match self.mode.as_str() {
            "strong" => Some(Mode::Strong),
            "weak" => Some(Mode::Weak),
            _ => None,
        }
    }
}

fn parse_max_sources(raw: &str) -> Result<usize, SpecError> {
    raw.trim()
        .parse::<usize>()
        .ok()
        .filter(|&v| v >= 2)
        .ok_or_else(|| SpecError::MaxSourcesEnv(raw.to_string()))
}

/// The source-count cap: `MHO_MAX_N` when set, the library default
/// otherwise.
pub fn max_sources_cap() -> Result<usize, SpecError> {
    match std::env::var("MHO_MAX_N") {
        Ok(raw) => parse_max_sources(&raw),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_N),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(SpecError::MaxSourcesEnv("<non-unicode>".to_string()))
        }
    }
}
