//! Gas constants: named preset, then config file, then individual flags.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use saha_core::GasModel;
use serde::Deserialize;

use crate::error::{usage, CliError};

/// Directory searched for `<name>.json` presets before the built-in ones.
pub const PRESET_DIR_VAR: &str = "SAHA_PRESET_DIR";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GasFile {
    a2: Option<f64>,
    kappa: Option<f64>,
    #[serde(rename = "Ti")]
    ti: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct GasOverrides {
    pub a2: Option<f64>,
    pub kappa: Option<f64>,
    pub ti: Option<f64>,
}

fn builtin(name: &str) -> Option<GasModel> {
    match name {
        "hydrogen" => Some(GasModel::HYDROGEN),
        _ => None,
    }
}

fn read_file(path: &Path) -> Result<GasFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Config {
        path: path.to_owned(),
        source,
    })
}

fn apply(base: &mut (f64, f64, f64), a2: Option<f64>, kappa: Option<f64>, ti: Option<f64>) {
    if let Some(x) = a2 {
        base.0 = x;
    }
    if let Some(x) = kappa {
        base.1 = x;
    }
    if let Some(x) = ti {
        base.2 = x;
    }
}

pub fn resolve(
    preset: &str,
    config: Option<&Path>,
    overrides: &GasOverrides,
) -> Result<GasModel, CliError> {
    let from_dir = env::var_os(PRESET_DIR_VAR)
        .map(|dir| PathBuf::from(dir).join(format!("{preset}.json")))
        .filter(|p| p.is_file());
    let mut c = match (from_dir, builtin(preset)) {
        (Some(path), fallback) => {
            let f = read_file(&path)?;
            let base = fallback.unwrap_or(GasModel::HYDROGEN);
            let mut c = (base.a2, base.kappa, base.ti);
            if fallback.is_none() && (f.a2.is_none() || f.kappa.is_none() || f.ti.is_none()) {
                return Err(usage(format!(
                    "preset {} must define a2, kappa and Ti",
                    path.display()
                )));
            }
            apply(&mut c, f.a2, f.kappa, f.ti);
            c
        }
        (None, Some(g)) => (g.a2, g.kappa, g.ti),
        (None, None) => return Err(usage(format!("unknown gas preset `{preset}`"))),
    };
    if let Some(path) = config {
        let f = read_file(path)?;
        apply(&mut c, f.a2, f.kappa, f.ti);
    }
    apply(&mut c, overrides.a2, overrides.kappa, overrides.ti);
    Ok(GasModel::new(c.0, c.1, c.2)?)
}
