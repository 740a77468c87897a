use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use matgraph_core::fields::FieldSpec;
use matgraph_core::matrices::DEFAULT_STATE_CAP;
use serde::Deserialize;

use crate::CliError;

/// Settings read from `--config <file.toml>`; every key is optional.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// File of `field p=.. k=.. poly=..` lines overriding the shipped table.
    pub field_table: Option<PathBuf>,
    pub state_cap: u64,
    pub seed: u64,
    /// Relative `--out` paths resolve here.
    pub output_dir: Option<PathBuf>,
    #[serde(skip)]
    pub fields: Vec<FieldSpec>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            field_table: None,
            state_cap: DEFAULT_STATE_CAP,
            seed: 0,
            output_dir: None,
            fields: Vec::new(),
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Config::parse(&text)?;
        if let Some(table) = &cfg.field_table {
            let table = match path.parent() {
                Some(dir) if table.is_relative() => dir.join(table),
                _ => table.clone(),
            };
            let text = fs::read_to_string(&table).map_err(|e| CliError::io(&table, e))?;
            cfg.fields = parse_field_table(&text)?;
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Config, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        if cfg.state_cap == 0 {
            return Err(CliError::Usage("config: state_cap must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn out_path(&self, p: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }
}

pub fn parse_field_table(text: &str) -> Result<Vec<FieldSpec>, CliError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| FieldSpec::from_str(l).map_err(|e| CliError::Usage(format!("field table line {i}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_keys() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
        let c = Config::parse("state_cap = 5\nseed = 9\noutput_dir = \"out\"").unwrap();
        assert_eq!((c.state_cap, c.seed), (5, 9));
        assert_eq!(c.out_path(Path::new("a.txt")), PathBuf::from("out/a.txt"));
        assert_eq!(c.out_path(Path::new("/tmp/a.txt")), PathBuf::from("/tmp/a.txt"));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Config::parse("state_cap = 0").is_err());
        assert!(Config::parse("colour = 1").is_err());
    }

    #[test]
    fn field_table_lines() {
        let v = parse_field_table("# comment\nfield p=2 k=2 poly=1,1,1\n").unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].order(), 4);
        assert!(parse_field_table("field p=2 k=2 poly=1,0,1").is_err());
    }
}
