use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Warn,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Warn => "warn",
            CheckStatus::Skipped => "skipped",
        };
        f.pad(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub residual: f64,
    pub detail: String,
}

/// Ordered list of named checks with residuals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(
        &mut self,
        name: impl Into<String>,
        status: CheckStatus,
        residual: f64,
        detail: impl Into<String>,
    ) {
        let name = name.into();
        debug_assert!(self.get(&name).is_none(), "duplicate check {name}");
        self.checks.push(Check {
            name,
            status,
            residual,
            detail: detail.into(),
        });
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.get(name).map(|c| c.status)
    }

    /// True when no check failed. Warnings and skips are allowed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  {:<7}  {:>12}  detail", "check", "status", "residual")?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<width$}  {:<7}  {:>12.3e}  {}",
                c.name, c.status, c.residual, c.detail
            )?;
        }
        Ok(())
    }
}
