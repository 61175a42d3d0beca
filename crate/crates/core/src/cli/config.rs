//! Resolved run settings: flags, then config file, then defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{Command, GridArgs, ModelArgs};
use crate::potentials::{Convention, Family};
use crate::{Error, Result};

const DEFAULT_FAMILY: Family = Family::DimensionConsistent;
const DEFAULT_DIMENSION: u32 = 3;
const DEFAULT_CHARGE: f64 = 1.0;
const DEFAULT_CUTOFF: f64 = 1.0;
const DEFAULT_STATES: usize = 1;
const DEFAULT_RADII: [f64; 1] = [1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Spectrum,
    ScanD,
    Potential,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub family: Family,
    pub convention: Convention,
    pub dims: Vec<u32>,
    pub ls: Vec<u32>,
    pub charge: f64,
    pub r0: f64,
    pub n_states: usize,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub interior_points: Option<usize>,
    pub rungs: Option<usize>,
    pub r_samples: Vec<f64>,
    /// Empty means every verification case.
    pub cases: Vec<String>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

const KNOWN_KEYS: &[&str] = &[
    "family", "convention", "dim", "dims", "l", "z", "r0", "states", "r_min", "r_max", "points",
    "rungs", "r", "case", "format", "out",
];

/// Flat `key = value` file; `#` starts a comment, `-` and `_` are
/// interchangeable in keys.
#[derive(Debug, Default)]
struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected key = value", number + 1)))?;
            let key = key.trim().replace('-', "_").to_ascii_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("config line {}: unknown key `{key}`", number + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| v.parse().map_err(|_| Error::Config(format!("config key `{key}`: cannot parse `{v}`"))))
            .transpose()
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.values.get(key) else { return Ok(None) };
        v.split(',')
            .map(|item| {
                item.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("config key `{key}`: cannot parse `{item}`")))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }
}

fn pick<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str, default: T) -> Result<T> {
    Ok(match flag {
        Some(v) => v,
        None => file.get(key)?.unwrap_or(default),
    })
}

fn pick_opt<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

fn pick_list<T: FromStr + Clone>(flag: Vec<T>, file: &ConfigFile, keys: &[&str], default: &[T]) -> Result<Vec<T>> {
    if !flag.is_empty() {
        return Ok(flag);
    }
    for key in keys {
        if let Some(v) = file.list(key)? {
            return Ok(v);
        }
    }
    Ok(default.to_vec())
}

impl RunConfig {
    pub(super) fn from_cli(command: Command) -> Result<Self> {
        let empty_grid = GridArgs::default();
        let (kind, model, grid, dims, ls, states, radii, cases) = match command {
            Command::Spectrum(a) => {
                (CommandKind::Spectrum, a.model, a.grid, a.dim, a.l, a.states, Vec::new(), Vec::new())
            }
            Command::ScanD(a) => (
                CommandKind::ScanD,
                a.model,
                empty_grid,
                a.dims,
                a.l.into_iter().collect(),
                None,
                Vec::new(),
                Vec::new(),
            ),
            Command::Potential(a) => (
                CommandKind::Potential,
                a.model,
                empty_grid,
                a.dim.into_iter().collect(),
                Vec::new(),
                None,
                a.r,
                Vec::new(),
            ),
            Command::Verify(a) => (
                CommandKind::Verify,
                a.model,
                empty_grid,
                Vec::new(),
                a.l.into_iter().collect(),
                None,
                Vec::new(),
                a.case,
            ),
        };
        let file = match &model.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Self::resolve(kind, model, grid, dims, ls, states, radii, cases, &file)
    }

    #[allow(clippy::too_many_arguments)]
    fn resolve(
        command: CommandKind,
        model: ModelArgs,
        grid: GridArgs,
        dims: Vec<u32>,
        ls: Vec<u32>,
        states: Option<usize>,
        radii: Vec<f64>,
        cases: Vec<String>,
        file: &ConfigFile,
    ) -> Result<Self> {
        let family = match model.family {
            Some(s) => s.parse()?,
            None => file.get::<String>("family")?.map(|s| s.parse()).transpose()?.unwrap_or(DEFAULT_FAMILY),
        };
        let convention = match model.convention {
            Some(s) => s.parse()?,
            None => file
                .get::<String>("convention")?
                .map(|s| s.parse())
                .transpose()?
                .unwrap_or_default(),
        };
        let format = match model.format {
            Some(s) => s.parse()?,
            None => file.get::<String>("format")?.map(|s| s.parse()).transpose()?.unwrap_or_default(),
        };
        let dim_keys: &[&str] = if command == CommandKind::ScanD { &["dims", "dim"] } else { &["dim", "dims"] };
        let dims = pick_list(dims, file, dim_keys, &[DEFAULT_DIMENSION])?;
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Config("dimensions must be >= 1".into()));
        }
        if command == CommandKind::Potential && dims.len() != 1 {
            return Err(Error::Config("potential takes a single --dim".into()));
        }
        let ls = pick_list(ls, file, &["l"], &[0])?;
        if command == CommandKind::ScanD && ls.len() != 1 {
            return Err(Error::Config("scan-d takes a single --l".into()));
        }
        let n_states = pick(states, file, "states", DEFAULT_STATES)?;
        if n_states == 0 {
            return Err(Error::Config("--states must be >= 1".into()));
        }
        let rungs = pick_opt(grid.rungs, file, "rungs")?;
        if rungs == Some(0) {
            return Err(Error::Config("--rungs must be >= 1".into()));
        }
        Ok(Self {
            command,
            family,
            convention,
            dims,
            ls,
            charge: pick(model.z, file, "z", DEFAULT_CHARGE)?,
            r0: pick(model.r0, file, "r0", DEFAULT_CUTOFF)?,
            n_states,
            r_min: pick_opt(grid.r_min, file, "r_min")?,
            r_max: pick_opt(grid.r_max, file, "r_max")?,
            interior_points: pick_opt(grid.points, file, "points")?,
            rungs,
            r_samples: pick_list(radii, file, &["r"], &DEFAULT_RADII)?,
            cases: pick_list(cases, file, &["case"], &[])?,
            format,
            out: match model.out {
                Some(p) => Some(p),
                None => file.get::<String>("out")?.map(PathBuf::from),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let f = ConfigFile::parse("# comment\nz = 2\nfamily=newtonian # trailing\n\nr-max = 50\ndims = 4, 6\n")
            .unwrap();
        assert_eq!(f.get::<f64>("z").unwrap(), Some(2.0));
        assert_eq!(f.get::<String>("family").unwrap().as_deref(), Some("newtonian"));
        assert_eq!(f.get::<f64>("r_max").unwrap(), Some(50.0));
        assert_eq!(f.list::<u32>("dims").unwrap(), Some(vec![4, 6]));
        assert_eq!(f.get::<f64>("r0").unwrap(), None);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("z 2").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("z = two").unwrap().get::<f64>("z").is_err());
    }

    #[test]
    fn precedence() {
        let f = ConfigFile::parse("z = 2\nstates = 3").unwrap();
        assert_eq!(pick(Some(5.0), &f, "z", 1.0).unwrap(), 5.0);
        assert_eq!(pick(None, &f, "z", 1.0).unwrap(), 2.0);
        assert_eq!(pick(None, &f, "r0", 1.0).unwrap(), 1.0);
        assert_eq!(pick(None::<usize>, &f, "states", 1).unwrap(), 3);
    }
}
