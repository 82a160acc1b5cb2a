use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::elements::WiringConfig;
use crate::experiment::ExperimentConfig;

pub const SUPPORTED_CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    /// Directory the result files are written to.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

/// Per-run overrides of the base `[experiment]` table.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub name: String,
    pub qubit_hwp_angle: Option<f64>,
    pub wiring: Option<WiringConfig>,
    pub overlap_v: Option<f64>,
    pub imperfection_eps: Option<f64>,
    pub pc_enabled: Option<bool>,
    pub thetas: Option<Vec<f64>>,
    pub pair_rate: Option<f64>,
    pub duration: Option<f64>,
    pub seed: Option<u64>,
}

impl RunSpec {
    fn apply(&self, base: &ExperimentConfig) -> ExperimentConfig {
        let mut c = base.clone();
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(x) = &self.$f { c.$f = x.clone(); } )* };
        }
        take!(
            qubit_hwp_angle,
            wiring,
            overlap_v,
            imperfection_eps,
            pc_enabled,
            thetas,
            pair_rate,
            duration,
            seed
        );
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomScanSpec {
    pub delays_s: Vec<f64>,
    pub sigma_s: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub config_version: u32,
    pub experiment: Option<ExperimentConfig>,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
    pub hom_scan: Option<HomScanSpec>,
    #[serde(default)]
    pub outputs: OutputSpec,
}

impl RunManifest {
    /// Reads a TOML manifest, or JSON when the file extension is `.json`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        let manifest = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        };
        manifest.map_err(|message| CliError::Manifest {
            path: path.to_owned(),
            message,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        let m: RunManifest = toml::from_str(text).map_err(|e| e.message().to_owned())?;
        m.check_version()?;
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let m: RunManifest = serde_json::from_str(text).map_err(|e| e.to_string())?;
        m.check_version()?;
        Ok(m)
    }

    fn check_version(&self) -> Result<(), String> {
        if self.config_version != SUPPORTED_CONFIG_VERSION {
            return Err(format!(
                "config_version: unsupported version {} (expected {SUPPORTED_CONFIG_VERSION})",
                self.config_version
            ));
        }
        Ok(())
    }

    /// Named experiment configurations to run, with `seed` overriding every
    /// run's seed when given.
    pub fn experiments(
        &self,
        seed: Option<u64>,
    ) -> Result<Vec<(String, ExperimentConfig)>, String> {
        let base = self
            .experiment
            .as_ref()
            .ok_or_else(|| "missing table `experiment`".to_owned())?;
        let mut runs: Vec<(String, ExperimentConfig)> = if self.runs.is_empty() {
            vec![("sweep".to_owned(), base.clone())]
        } else {
            self.runs
                .iter()
                .map(|r| (r.name.clone(), r.apply(base)))
                .collect()
        };
        let mut names = std::collections::BTreeSet::new();
        for (name, _) in &runs {
            if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
                return Err(format!("runs.name: `{name}` is not a valid file stem"));
            }
            if !names.insert(name.clone()) {
                return Err(format!("runs.name: `{name}` is used twice"));
            }
        }
        if let Some(seed) = seed {
            for (_, c) in &mut runs {
                c.seed = seed;
            }
        }
        Ok(runs)
    }
}
