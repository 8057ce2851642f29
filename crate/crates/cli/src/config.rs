//! Run configuration, read from a TOML file or assembled from flags.

use std::path::PathBuf;
use std::str::FromStr;

use qcong_core::congruence::CheckKind;
use qcong_core::padic::{is_prime, ClassicalKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentPolicy {
    Proven,
    Conjectural,
    #[default]
    Both,
}

impl ExponentPolicy {
    pub fn admits(self, conjectural: bool) -> bool {
        match self {
            ExponentPolicy::Proven => !conjectural,
            ExponentPolicy::Conjectural => conjectural,
            ExponentPolicy::Both => true,
        }
    }
}

impl FromStr for ExponentPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "proven" => Ok(ExponentPolicy::Proven),
            "conjectural" => Ok(ExponentPolicy::Conjectural),
            "both" => Ok(ExponentPolicy::Both),
            _ => Err(format!("unknown exponent policy `{s}` (expected proven, conjectural or both)")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (expected json, csv or text)")),
        }
    }
}

/// A named check, q-side or classical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Q(CheckKind),
    Classical(ClassicalKind),
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Q(k) => k.name(),
            Check::Classical(k) => k.name(),
        }
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(k) = s.parse::<CheckKind>() {
            return Ok(Check::Q(k));
        }
        if let Ok(k) = s.parse::<ClassicalKind>() {
            return Ok(Check::Classical(k));
        }
        Err(format!("unknown check `{s}` (see `qcong list`)"))
    }
}

fn default_n() -> Vec<u64> {
    vec![3]
}
fn default_r_max() -> u64 {
    1
}
fn default_d() -> Vec<u64> {
    vec![1]
}
fn default_t() -> Vec<i64> {
    vec![3, 5, 7]
}
fn default_c() -> Vec<i64> {
    vec![2]
}
fn default_dwork_k() -> u64 {
    50
}
fn default_parallelism() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default = "default_n")]
    pub n_values: Vec<u64>,
    #[serde(default = "default_r_max")]
    pub r_max: u64,
    #[serde(default = "default_d")]
    pub d_values: Vec<u64>,
    #[serde(default)]
    pub primes: Vec<u64>,
    /// Exponents `t` of the `a = q^t` samples.
    #[serde(default = "default_t")]
    pub t_values: Vec<i64>,
    /// Constants `a = c` of the generic samples.
    #[serde(default = "default_c")]
    pub c_values: Vec<i64>,
    /// Degree cap of the Dwork check.
    #[serde(default = "default_dwork_k")]
    pub dwork_k: u64,
    #[serde(default)]
    pub exponent_policy: ExponentPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            checks: Vec::new(),
            n_values: default_n(),
            r_max: default_r_max(),
            d_values: default_d(),
            primes: Vec::new(),
            t_values: default_t(),
            c_values: default_c(),
            dwork_k: default_dwork_k(),
            exponent_policy: ExponentPolicy::Both,
            output: None,
            format: Format::Json,
            parallelism: default_parallelism(),
            deterministic: false,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parsed_checks(&self) -> Result<Vec<Check>, CliError> {
        self.checks
            .iter()
            .map(|s| s.parse::<Check>().map_err(|e| CliError::Config(format!("checks: {e}"))))
            .collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, msg: String| Err(CliError::Config(format!("{field}: {msg}")));
        let checks = self.parsed_checks()?;
        if let Some(n) = self.n_values.iter().find(|&&n| n < 3 || n % 2 == 0) {
            return bad("n_values", format!("{n} must be odd and at least 3"));
        }
        if self.r_max == 0 {
            return bad("r_max", "must be at least 1".into());
        }
        if let Some(d) = self.d_values.iter().find(|&&d| d != 1 && d != 2) {
            return bad("d_values", format!("{d} must be 1 or 2"));
        }
        if let Some(t) = self.t_values.iter().find(|&&t| t % 2 == 0) {
            return bad("t_values", format!("{t} must be odd"));
        }
        if let Some(c) = self.c_values.iter().find(|&&c| c.abs() < 2) {
            return bad("c_values", format!("{c} must satisfy |c| >= 2"));
        }
        if let Some(p) = self.primes.iter().find(|&&p| p == 2 || !is_prime(p)) {
            return bad("primes", format!("{p} must be an odd prime"));
        }
        let wants_large = checks
            .iter()
            .any(|c| matches!(c, Check::Classical(k) if k.needs_p_above_three()));
        if wants_large {
            if let Some(p) = self.primes.iter().find(|&&p| p <= 3) {
                return bad("primes", format!("{p} must exceed 3 for the requested classical checks"));
            }
        }
        if self.parallelism == 0 {
            return bad("parallelism", "must be positive".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, with the output location and
    /// format left out since they do not affect the entries.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = None;
        canonical.format = Format::Json;
        canonical.parallelism = 1;
        digest_of(&serde_json::to_string(&canonical).expect("config serializes"))
    }
}

pub fn digest_of(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}
