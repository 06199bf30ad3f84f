//! Run configuration: a JSON file, overridden field by field by flags.

use std::fs;
use std::path::{Path, PathBuf};

use gmc_core::gmc::ToleranceTable;
use gmc_core::heisenberg::SchrodingerConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    #[default]
    Torus,
    Heisenberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub torus: Option<f64>,
    pub heisenberg: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub legendre_nodes: Option<usize>,
    pub x_nodes: Option<usize>,
    pub inner_extra: Option<usize>,
    pub fd_step: Option<f64>,
    pub smooth_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub group: Group,
    #[serde(default)]
    pub tolerance: ToleranceOverrides,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    pub truncation: Option<usize>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn check_positive(name: &str, x: Option<f64>) -> Result<(), CliError> {
    match x {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(CliError::Config(format!("{name} must be positive, got {v}"))),
        _ => Ok(()),
    }
}

fn check_count(name: &str, x: Option<usize>) -> Result<(), CliError> {
    match x {
        Some(0) => Err(CliError::Config(format!("{name} must be positive"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check_positive("tolerance.torus", self.tolerance.torus)?;
        check_positive("tolerance.heisenberg", self.tolerance.heisenberg)?;
        check_count("quadrature.legendre_nodes", self.quadrature.legendre_nodes)?;
        check_count("quadrature.x_nodes", self.quadrature.x_nodes)?;
        check_count("quadrature.inner_extra", self.quadrature.inner_extra)?;
        check_positive("quadrature.fd_step", self.quadrature.fd_step)?;
        check_positive("quadrature.smooth_tol", self.quadrature.smooth_tol)?;
        check_count("truncation", self.truncation)
    }

    pub fn schrodinger(&self) -> SchrodingerConfig {
        let d = SchrodingerConfig::default();
        let q = &self.quadrature;
        SchrodingerConfig {
            truncation: self.truncation.unwrap_or(d.truncation),
            inner_extra: q.inner_extra.unwrap_or(d.inner_extra),
            x_nodes: q.x_nodes.unwrap_or(d.x_nodes),
            legendre_nodes: q.legendre_nodes.unwrap_or(d.legendre_nodes),
            fd_step: q.fd_step.unwrap_or(d.fd_step),
            smooth_tol: q.smooth_tol.unwrap_or(d.smooth_tol),
            ..d
        }
    }

    pub fn tolerances(&self) -> ToleranceTable {
        let d = ToleranceTable::default();
        ToleranceTable {
            torus: self.tolerance.torus.unwrap_or(d.torus),
            heisenberg: self.tolerance.heisenberg.unwrap_or(d.heisenberg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        let c = RunConfig::from_json("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.schrodinger(), SchrodingerConfig::default());
    }

    #[test]
    fn overrides_apply() {
        let c = RunConfig::from_json(
            r#"{"group":"heisenberg","truncation":24,"seed":9,
                "tolerance":{"heisenberg":1e-3},"quadrature":{"legendre_nodes":20}}"#,
        )
        .unwrap();
        assert_eq!(c.group, Group::Heisenberg);
        assert_eq!(c.schrodinger().truncation, 24);
        assert_eq!(c.schrodinger().legendre_nodes, 20);
        assert_eq!(c.tolerances().heisenberg, 1e-3);
        assert_eq!(c.tolerances().torus, 1e-13);
    }

    #[test]
    fn rejects_unknown_keys_and_nonpositive_values() {
        assert!(RunConfig::from_json(r#"{"grup":"torus"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"quadrature":{"nodes":3}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tolerance":{"torus":0}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tolerance":{"torus":-1e-3}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"truncation":0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"group":"sl2"}"#).is_err());
    }
}
