//! `key = value` scene files.
//!
//! ```text
//! # tube and observer
//! radius = 2.5cm
//! eye_distance = 25cm
//! eye_height = 40cm
//! distance_from = surface
//! ```
//!
//! Keys may use `-` or `_`. Values carry units exactly as on the command
//! line. Unknown keys are rejected so that typos do not silently fall back
//! to defaults.

use std::path::Path;

use catoptrics_core::units::Length;

use crate::args::DistanceFrom;
use crate::diag::CliError;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    pub radius: Option<Length>,
    pub eye_distance: Option<Length>,
    pub eye_height: Option<Length>,
    pub distance_from: Option<DistanceFrom>,
    pub cylinder_height: Option<Length>,
    pub depth: Option<Length>,
    pub n: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = FileConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(lineno, "", "expected key = value"))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let length = || {
                value
                    .parse::<Length>()
                    .map(Some)
                    .map_err(|e| CliError::config(lineno, &key, &e.to_string()))
            };
            match key.as_str() {
                "radius" => cfg.radius = length()?,
                "eye_distance" => cfg.eye_distance = length()?,
                "eye_height" => cfg.eye_height = length()?,
                "cylinder_height" => cfg.cylinder_height = length()?,
                "depth" => cfg.depth = length()?,
                "distance_from" => {
                    cfg.distance_from = Some(match value {
                        "surface" => DistanceFrom::Surface,
                        "axis" => DistanceFrom::Axis,
                        _ => {
                            return Err(CliError::config(lineno, &key, "expected surface or axis"))
                        }
                    })
                }
                "n" | "n_water" => {
                    cfg.n = Some(
                        value
                            .parse()
                            .map_err(|_| CliError::config(lineno, &key, "expected a number"))?,
                    )
                }
                _ => return Err(CliError::config(lineno, &key, "unknown key")),
            }
        }
        Ok(cfg)
    }
}
