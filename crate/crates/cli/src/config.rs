//! Run configuration, layered as flags > environment > TOML file > defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::Config(format!("unknown format {s:?}, expected json or csv"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cache: PathBuf,
    /// Working precision in bits for printed enclosures.
    pub precision: u32,
    /// Tolerance reported against quadrature error estimates.
    pub quad_tol: f64,
    pub gmin: u32,
    pub gmax: u32,
    pub workers: usize,
    pub format: Format,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache: PathBuf::from("wpvol-cache.tsv"),
            precision: 256,
            quad_tol: 1e-8,
            gmin: 5,
            gmax: 12,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            format: Format::Json,
            seed: 20_240_901,
        }
    }
}

/// Values given on the command line; `None` leaves lower layers in place.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub cache: Option<PathBuf>,
    pub precision: Option<u32>,
    pub quad_tol: Option<f64>,
    pub gmin: Option<u32>,
    pub gmax: Option<u32>,
    pub workers: Option<usize>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

fn parse_env<T: FromStr>(key: &str, raw: String) -> CliResult<T> {
    raw.parse().map_err(|_| CliError::Config(format!("cannot parse {key}={raw:?}")))
}

impl Config {
    /// Resolves the layers. `env` is a lookup so tests can inject variables.
    pub fn resolve(
        file: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
        flags: &Overrides,
    ) -> CliResult<Config> {
        let mut cfg = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Config::default(),
        };
        if let Some(v) = env("WPVOL_CACHE") {
            cfg.cache = PathBuf::from(v);
        }
        if let Some(v) = env("WPVOL_WORKERS") {
            cfg.workers = parse_env("WPVOL_WORKERS", v)?;
        }
        if let Some(v) = env("WPVOL_PRECISION") {
            cfg.precision = parse_env("WPVOL_PRECISION", v)?;
        }
        if let Some(v) = env("WPVOL_FORMAT") {
            cfg.format = v.parse()?;
        }
        if let Some(v) = env("WPVOL_SEED") {
            cfg.seed = parse_env("WPVOL_SEED", v)?;
        }
        let f = flags.clone();
        cfg.cache = f.cache.unwrap_or(cfg.cache);
        cfg.precision = f.precision.unwrap_or(cfg.precision);
        cfg.quad_tol = f.quad_tol.unwrap_or(cfg.quad_tol);
        cfg.gmin = f.gmin.unwrap_or(cfg.gmin);
        cfg.gmax = f.gmax.unwrap_or(cfg.gmax);
        cfg.workers = f.workers.unwrap_or(cfg.workers);
        cfg.format = f.format.unwrap_or(cfg.format);
        cfg.seed = f.seed.unwrap_or(cfg.seed);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.quad_tol > 0.0) {
            return Err(CliError::Config(format!("quad_tol must be positive, got {}", self.quad_tol)));
        }
        if self.precision == 0 {
            return Err(CliError::Config("precision must be positive".into()));
        }
        if self.gmin > self.gmax {
            return Err(CliError::Usage(format!("empty genus range {}..={}", self.gmin, self.gmax)));
        }
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn precedence() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("wpvol.toml");
        std::fs::write(&file, "cache = \"from-file\"\nworkers = 3\ngmax = 9\n").unwrap();
        let env: HashMap<&str, &str> = [("WPVOL_CACHE", "from-env"), ("WPVOL_WORKERS", "5")].into();
        let lookup = |k: &str| env.get(k).map(|v| v.to_string());

        let c = Config::resolve(Some(&file), |_| None, &Overrides::default()).unwrap();
        assert_eq!((c.cache.to_str().unwrap(), c.workers, c.gmax), ("from-file", 3, 9));

        let c = Config::resolve(Some(&file), lookup, &Overrides::default()).unwrap();
        assert_eq!((c.cache.to_str().unwrap(), c.workers), ("from-env", 5));

        let flags = Overrides { cache: Some("from-flag".into()), ..Default::default() };
        let c = Config::resolve(Some(&file), lookup, &flags).unwrap();
        assert_eq!((c.cache.to_str().unwrap(), c.workers), ("from-flag", 5));
    }

    #[test]
    fn invariants() {
        let bad = Overrides { gmin: Some(9), gmax: Some(4), ..Default::default() };
        assert!(matches!(Config::resolve(None, |_| None, &bad), Err(CliError::Usage(_))));
        let bad = Overrides { workers: Some(0), ..Default::default() };
        assert!(Config::resolve(None, |_| None, &bad).is_err());
        let bad = Overrides { quad_tol: Some(0.0), ..Default::default() };
        assert!(Config::resolve(None, |_| None, &bad).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("wpvol.toml");
        std::fs::write(&file, "cahce = \"typo\"\n").unwrap();
        assert!(Config::resolve(Some(&file), |_| None, &Overrides::default()).is_err());
    }
}
