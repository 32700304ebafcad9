//! Run configuration, stored as TOML:
//!
//! ```toml
//! output_format = "png"
//! dump_debug = false
//!
//! [geometry]
//! grid_rows = 21
//! grid_cols = 21
//! ```
//!
//! Missing keys take their defaults; unknown keys are rejected.

use std::path::Path;

use dewarp_core::pipeline::GeometryConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Png,
    /// Baseline JPEG at quality 95.
    Jpeg,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Png => "png",
            OutputFormat::Jpeg => "jpg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub output_format: OutputFormat,
    /// Write contour, grid, overlay and displacement dumps next to each output.
    pub dump_debug: bool,
    pub geometry: GeometryConfig,
}

const TOP_LEVEL_KEYS: [&str; 2] = ["output_format", "dump_debug"];

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::BadArgs(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.is_file() {
            return Err(CliError::MissingInput(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| CliError::BadArgs(format!("{}: {e}", path.display())))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate().map_err(|e| CliError::BadArgs(format!("config: {e}")))
    }

    /// Applies `key=value` overrides. Keys are either top-level
    /// (`output_format`, `dump_debug`), dotted (`geometry.grid_rows`) or bare
    /// geometry keys (`grid_rows`). Values are TOML literals; bare words are
    /// taken as strings.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut table = toml::Table::try_from(self).map_err(|e| CliError::Internal(e.to_string()))?;
        for item in overrides {
            let item = item.as_ref();
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| CliError::BadArgs(format!("override `{item}` is not key=value")))?;
            let (key, raw) = (key.trim(), raw.trim());
            let value = parse_value(raw);
            let path: Vec<&str> = match key.split_once('.') {
                Some((section, k)) => vec![section, k],
                None if TOP_LEVEL_KEYS.contains(&key) => vec![key],
                None => vec!["geometry", key],
            };
            let mut target = &mut table;
            for section in &path[..path.len() - 1] {
                target = target
                    .get_mut(*section)
                    .and_then(toml::Value::as_table_mut)
                    .ok_or_else(|| CliError::BadArgs(format!("unknown config section `{section}`")))?;
            }
            target.insert(path[path.len() - 1].to_string(), value);
        }
        let cfg: Self = table.try_into().map_err(|e| CliError::BadArgs(format!("override: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut cfg = PipelineConfig::default();
        cfg.output_format = OutputFormat::Jpeg;
        cfg.dump_debug = true;
        cfg.geometry.grid_rows = 31;
        cfg.geometry.dp_tolerance = 0.015;
        let text = cfg.to_toml_string();
        assert_eq!(PipelineConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_files_take_defaults() {
        let cfg = PipelineConfig::from_toml_str("[geometry]\ngrid_cols = 11\n").unwrap();
        assert_eq!(cfg.geometry.grid_cols, 11);
        assert_eq!(cfg.geometry.grid_rows, 21);
        assert_eq!(cfg.output_format, OutputFormat::Png);
        assert_eq!(PipelineConfig::from_toml_str("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(PipelineConfig::from_toml_str("colour = 1").is_err());
        assert!(PipelineConfig::from_toml_str("[geometry]\nwindow = 3").is_err());
        let e = PipelineConfig::from_toml_str("[geometry]\nsg_window = 4").unwrap_err();
        assert_eq!(e.exit_code(), crate::exit::BAD_ARGS);
    }

    #[test]
    fn overrides() {
        let base = PipelineConfig::default();
        let cfg = base
            .with_overrides(&["grid_rows=11", "geometry.sg_window = 7", "output_format=jpeg", "dump_debug=true"])
            .unwrap();
        assert_eq!(cfg.geometry.grid_rows, 11);
        assert_eq!(cfg.geometry.sg_window, 7);
        assert_eq!(cfg.output_format, OutputFormat::Jpeg);
        assert!(cfg.dump_debug);
        assert!(base.with_overrides(&["nope=1"]).is_err());
        assert!(base.with_overrides(&["grid_rows"]).is_err());
        assert!(base.with_overrides(&["sg_window=8"]).is_err());
        assert!(base.with_overrides(&["grid_rows=\"x\""]).is_err());
    }
}
