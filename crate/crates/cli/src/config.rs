//! Run configuration: one TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use ustar::beveridge::DEFAULT_TRIM;
use ustar::ingest::Era;
use ustar::models::Ms16Params;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
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

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    manifest: Option<PathBuf>,
    era: Option<Era>,
    out: Option<PathBuf>,
    format: Option<Format>,
    tol: Option<f64>,
    #[serde(default)]
    breaks: BreaksSection,
    ms16: Option<Ms16Section>,
    #[serde(default)]
    policy: PolicySection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BreaksSection {
    max_breaks: Option<usize>,
    min_seg: Option<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ms16Section {
    eps: f64,
    zeta: f64,
    kappa: f64,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicySection {
    multiplier: Option<f64>,
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Configuration file (TOML). Defaults to `ustar.toml` in the working directory if present.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub era: Option<Era>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub max_breaks: Option<usize>,
    /// Minimum segment length as a fraction of the sample.
    #[arg(long, global = true, value_name = "FRAC")]
    pub min_seg: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    pub eps: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    pub zeta: Option<f64>,
    #[arg(long, global = true, value_name = "X")]
    pub kappa: Option<f64>,
    /// Percentage points of unemployment per percentage point of interest.
    #[arg(long, global = true, value_name = "X")]
    pub multiplier: Option<f64>,
    /// Classification tolerance on |v − u|.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub era: Era,
    pub out: PathBuf,
    pub format: Format,
    pub tol: f64,
    pub max_breaks: usize,
    pub min_seg_fraction: f64,
    pub ms16: Option<Ms16Params>,
    pub multiplier: Option<f64>,
}

pub const DEFAULT_CONFIG: &str = "ustar.toml";
pub const DEFAULT_MAX_BREAKS: usize = 7;

fn resolve(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_relative() {
        base.join(p)
    } else {
        p
    }
}

impl RunConfig {
    pub fn load(o: &Overrides) -> Result<Self, CliError> {
        let (file, base) = match &o.config {
            Some(path) => (read_file(path)?, path.parent().unwrap_or(Path::new("")).to_owned()),
            None if Path::new(DEFAULT_CONFIG).is_file() => (read_file(Path::new(DEFAULT_CONFIG))?, PathBuf::new()),
            None => (FileConfig::default(), PathBuf::new()),
        };
        Self::merge(file, &base, o)
    }

    #[cfg(test)]
    pub fn from_toml_str(text: &str, base: &Path, o: &Overrides) -> Result<Self, CliError> {
        let file: FileConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        Self::merge(file, base, o)
    }

    fn merge(file: FileConfig, base: &Path, o: &Overrides) -> Result<Self, CliError> {
        let manifest = file.manifest.map(|p| resolve(base, p)).unwrap_or_else(|| PathBuf::from("data/manifest.toml"));
        let out = o.out.clone().or_else(|| file.out.map(|p| resolve(base, p))).unwrap_or_else(|| PathBuf::from("out"));

        let ms16 = match (file.ms16, o.eps, o.zeta, o.kappa) {
            (None, Some(eps), Some(zeta), Some(kappa)) => Some((eps, zeta, kappa)),
            (None, None, None, None) => None,
            (None, ..) => {
                return Err(CliError::Usage(
                    "--eps, --zeta and --kappa must be given together when the config has no [ms16] table".into(),
                ))
            }
            (Some(s), eps, zeta, kappa) => {
                Some((eps.unwrap_or(s.eps), zeta.unwrap_or(s.zeta), kappa.unwrap_or(s.kappa)))
            }
        };
        let ms16 = ms16
            .map(|(e, z, k)| Ms16Params::new(e, z, k))
            .transpose()
            .map_err(|e| CliError::Usage(e.to_string()))?;

        let cfg = RunConfig {
            manifest,
            era: o.era.or(file.era).unwrap_or(Era::Postwar),
            out,
            format: o.format.or(file.format).unwrap_or_default(),
            tol: o.tol.or(file.tol).unwrap_or(0.0),
            max_breaks: o.max_breaks.or(file.breaks.max_breaks).unwrap_or(DEFAULT_MAX_BREAKS),
            min_seg_fraction: o.min_seg.or(file.breaks.min_seg).unwrap_or(DEFAULT_TRIM),
            ms16,
            multiplier: o.multiplier.or(file.policy.multiplier),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be a nonnegative number, got {}", self.tol)));
        }
        if !(self.min_seg_fraction > 0.0 && self.min_seg_fraction < 0.5) {
            return Err(CliError::Usage(format!("--min-seg must lie in (0, 0.5), got {}", self.min_seg_fraction)));
        }
        if let Some(m) = self.multiplier {
            if !(m > 0.0 && m.is_finite()) {
                return Err(CliError::Usage(format!("--multiplier must be positive, got {m}")));
            }
        }
        Ok(())
    }

    pub fn ms16(&self) -> Result<Ms16Params, CliError> {
        self.ms16.ok_or_else(|| {
            CliError::Usage("no MS16 calibration: add an [ms16] table to the config or pass --eps, --zeta and --kappa".into())
        })
    }

    pub fn multiplier(&self) -> Result<f64, CliError> {
        self.multiplier
            .ok_or_else(|| CliError::Usage("no policy multiplier: set [policy] multiplier or pass --multiplier".into()))
    }
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
