use std::path::Path;

use gpade_core::constants::ConstantsConfig;
use gpade_core::exact::interval::digits_to_bits;
use gpade_core::exact::rational::parse_rational;
use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "GPADE_CONFIG";

/// Config file schema. Every key is optional.
///
/// ```toml
/// precision = 128       # decimal digits
/// max_precision = 1024
/// h0 = "1"
/// h1 = "1"
/// h2 = "1"
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    precision: Option<u32>,
    max_precision: Option<u32>,
    h0: Option<String>,
    h1: Option<String>,
    h2: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub precision: u32,
    pub max_precision: u32,
    pub constants: ConstantsConfig,
}

/// Flags override the file; the file is `--config` or `$GPADE_CONFIG`.
pub fn load(path: Option<&Path>, precision: Option<u32>, max_precision: Option<u32>) -> Result<Config, CliError> {
    let env = std::env::var_os(CONFIG_ENV);
    let path = path.or(env.as_deref().map(Path::new));
    let file = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let mut constants = ConstantsConfig::default();
    let parse = |s: &str, name: &str| {
        parse_rational(s).map_err(|e| CliError::Usage(format!("config {name}: {e}")))
    };
    if let Some(h) = &file.h0 {
        constants.h0 = parse(h, "h0")?;
    }
    if let Some(h) = &file.h1 {
        constants.h1 = parse(h, "h1")?;
    }
    if let Some(h) = &file.h2 {
        constants.h2 = parse(h, "h2")?;
    }
    let precision = precision.or(file.precision).unwrap_or(128);
    let max_precision = max_precision.or(file.max_precision).unwrap_or(1024).max(precision);
    if precision == 0 {
        return Err(CliError::Usage("precision must be positive".into()));
    }
    constants.bits = digits_to_bits(precision);
    constants.max_bits = digits_to_bits(max_precision);
    Ok(Config { precision, max_precision, constants })
}
