//! Command-line flags, config files and the settings resolved from both.
//!
//! A config file is TOML, or JSON when its name ends in `.json`:
//!
//! ```toml
//! ring = "x, y"          # or: ring = 3, or [ring] names = ["a", "b"]
//! family = "power(x^2, y^3)"
//! family2 = "power(x, y^2)"
//! N = 64
//! tol = 0.01
//! c = 1
//! module = ["x^2, x*y", "1"]
//!
//! [output]
//! dir = "reports"
//! svg = true
//! cache_dir = ".cache"
//! threads = 4
//! ```
//!
//! Flags override the file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use asymlen::{parse_family, AmbientRing, FamilySpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "asymlen", version, about = "Asymptotic lengths of graded families of monomial ideals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Default, Args)]
pub struct Options {
    /// TOML or JSON job file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Variable names (`x, y, z`) or a dimension (`3`).
    #[arg(long, global = true)]
    pub ring: Option<String>,

    #[arg(long, global = true, value_name = "SPEC")]
    pub family: Option<String>,

    #[arg(long, global = true, value_name = "SPEC")]
    pub family2: Option<String>,

    /// Largest index computed.
    #[arg(long = "N", global = true, value_name = "N")]
    pub n: Option<u32>,

    /// Relative tail range accepted as convergence.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Box constant for `okounkov`, or the power bound `m^c ⊆ I_1` for `diff`.
    #[arg(long = "c", global = true)]
    pub c: Option<u32>,

    /// Output directory for the CSV, JSON and SVG artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Also write an SVG plot.
    #[arg(long, global = true)]
    pub svg: bool,

    #[arg(long = "cache-dir", global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Operations on a single family.
    Family {
        #[command(subcommand)]
        action: FamilyAction,
    },
    /// Length sequence and limit estimate.
    Limits,
    /// Normalized first differences and the filtration bound.
    Diff,
    /// Minkowski inequality for two families.
    Minkowski,
    /// Epsilon multiplicity of an ideal or a module.
    Epsilon,
    /// Multiplicity limit of symbolic powers.
    Symbolic,
    /// Okounkov body of the family semigroup.
    Okounkov,
    /// Root-sum covolume inequality for two Newton regions.
    Kt,
    /// Prebuilt demonstrations of families without a limit difference.
    Counterexample {
        #[arg(value_enum)]
        which: Which,
    },
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum FamilyAction {
    /// Table of the members `I_n` and their colengths.
    Eval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Sigma,
    Log,
}

/// The contents of a job file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub ring: Option<RingConfig>,
    pub family: Option<String>,
    pub family2: Option<String>,
    #[serde(rename = "N", alias = "n")]
    pub n: Option<u32>,
    pub tol: Option<f64>,
    pub c: Option<u32>,
    pub module: Option<Vec<String>>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RingConfig {
    Dim(usize),
    Names(String),
    Table { d: Option<usize>, names: Option<Vec<String>> },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(format!("reading {}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|message| CliError::Config { path: path.to_path_buf(), message: message.trim_end().to_string() })
    }
}

#[derive(Debug)]
pub struct Settings {
    pub ring: Arc<AmbientRing>,
    pub family: Option<String>,
    pub family2: Option<String>,
    pub n: Option<u32>,
    pub tol: f64,
    pub c: Option<u32>,
    pub module: Option<Vec<String>>,
    pub out: PathBuf,
    pub svg: bool,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Settings {
    pub fn resolve(options: Options) -> Result<Self> {
        let file = match &options.config {
            Some(path) => JobConfig::load(path)?,
            None => JobConfig::default(),
        };
        let ring = match (options.ring, file.ring) {
            (Some(text), _) => ring_from_text(&text)?,
            (None, Some(RingConfig::Dim(d))) => AmbientRing::standard(d)?,
            (None, Some(RingConfig::Names(text))) => ring_from_text(&text)?,
            (None, Some(RingConfig::Table { names: Some(names), d })) => {
                if d.is_some_and(|d| d != names.len()) {
                    return Err(CliError::Usage("ring: `d` disagrees with the number of names".into()));
                }
                AmbientRing::new(&names)?
            }
            (None, Some(RingConfig::Table { names: None, d: Some(d) })) => AmbientRing::standard(d)?,
            (None, Some(RingConfig::Table { names: None, d: None })) => {
                return Err(CliError::Usage("ring: give `d` or `names`".into()))
            }
            (None, None) => AmbientRing::standard(2)?,
        };
        let s = Settings {
            ring,
            family: options.family.or(file.family),
            family2: options.family2.or(file.family2),
            n: options.n.or(file.n),
            tol: options.tol.or(file.tol).unwrap_or(asymlen::asymptotics::DEFAULT_TOLERANCE),
            c: options.c.or(file.c),
            module: file.module,
            out: options.out.or(file.output.dir).unwrap_or_else(|| PathBuf::from(".")),
            svg: options.svg || file.output.svg,
            cache_dir: options.cache_dir.or(file.output.cache_dir),
            threads: options.threads.or(file.output.threads),
        };
        if s.n == Some(0) {
            return Err(CliError::Usage("N must be at least 1".into()));
        }
        if !(s.tol > 0.0 && s.tol.is_finite()) {
            return Err(CliError::Usage("tol must be positive".into()));
        }
        if s.threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        Ok(s)
    }

    pub fn n_or(&self, default: u32) -> u32 {
        self.n.unwrap_or(default)
    }

    pub fn family_spec(&self) -> Result<FamilySpec> {
        let text = self.family.as_deref().ok_or_else(|| CliError::Usage("missing --family".into()))?;
        Ok(parse_family(&self.ring, text)?)
    }

    pub fn family2_spec(&self) -> Result<FamilySpec> {
        let text = self.family2.as_deref().ok_or_else(|| CliError::Usage("missing --family2".into()))?;
        Ok(parse_family(&self.ring, text)?)
    }

    /// The inputs echoed into the JSON report.
    pub fn inputs(&self, n: Option<u32>) -> Value {
        let mut m = Map::new();
        m.insert("ring".into(), json!(self.ring.names()));
        if let Some(f) = &self.family {
            m.insert("family".into(), json!(f));
        }
        if let Some(f) = &self.family2 {
            m.insert("family2".into(), json!(f));
        }
        if let Some(module) = &self.module {
            m.insert("module".into(), json!(module));
        }
        if let Some(n) = n {
            m.insert("N".into(), json!(n));
        }
        m.insert("tol".into(), json!(self.tol));
        if let Some(c) = self.c {
            m.insert("c".into(), json!(c));
        }
        Value::Object(m)
    }
}

fn ring_from_text(text: &str) -> Result<Arc<AmbientRing>> {
    let t = text.trim();
    if let Ok(d) = t.parse::<usize>() {
        return Ok(AmbientRing::standard(d)?);
    }
    let names: Vec<&str> = t.split(',').map(str::trim).collect();
    Ok(AmbientRing::new(&names)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings_from_text() {
        assert_eq!(ring_from_text("3").unwrap().names(), ["x", "y", "z"]);
        assert_eq!(ring_from_text("4").unwrap().names(), ["x1", "x2", "x3", "x4"]);
        assert_eq!(ring_from_text(" a, b ").unwrap().names(), ["a", "b"]);
        assert!(ring_from_text("a, a").is_err());
    }

    #[test]
    fn ring_tables_deserialize() {
        let c: JobConfig = toml::from_str("[ring]\nnames = [\"u\", \"v\"]\n").unwrap();
        assert!(matches!(c.ring, Some(RingConfig::Table { names: Some(_), d: None })));
        let c: JobConfig = toml::from_str("ring = 2\nN = 5\n").unwrap();
        assert!(matches!(c.ring, Some(RingConfig::Dim(2))));
        assert_eq!(c.n, Some(5));
    }
}
