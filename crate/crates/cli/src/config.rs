//! Run configuration: defaults, then a JSON file, then command-line flags.

use std::path::Path;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use wakimoto_core::fock::Mode;
use wakimoto_core::scalar::{fmt_q, parse_rational};
use wakimoto_core::singular::RaisingSet;
use wakimoto_core::{Level, Q};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    #[default]
    Text,
    Json,
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// JSON config file (keys as the long flag names, `D` for the truncation).
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Level: a rational `p/q` or `symbolic`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// χ(H_(0,1)) as a rational `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub chi: Option<String>,
    /// Truncation degree, in (1/2)ℤ.
    #[arg(long = "D", global = true)]
    pub d: Option<String>,
    /// Lowest α-shift kept below the highest weight.
    #[arg(long, global = true)]
    pub depth: Option<i64>,
    #[arg(long, global = true)]
    pub mode_bound: Option<String>,
    /// Genericity scan bound on |n|·(δ-degree of β).
    #[arg(long = "bound", global = true)]
    pub genericity_bound: Option<u32>,
    /// Degree bound of a singular vector scan.
    #[arg(long, global = true)]
    pub deg: Option<String>,
    /// Critical level k = −3.
    #[arg(long, global = true)]
    pub critical: bool,
    /// Use W̄ (no Heisenberg oscillators); requires the critical level.
    #[arg(long, global = true)]
    pub restricted: bool,
    /// Scan the contragredient of W̄.
    #[arg(long, global = true)]
    pub contragredient: bool,
    /// full | loop-nilpotent | chevalley
    #[arg(long, global = true)]
    pub raising: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    pub output: Option<Output>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

/// A rational given either as a JSON number or a `p/q` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Rat {
    Int(i64),
    Str(String),
}

impl Rat {
    fn into_string(self) -> String {
        match self {
            Rat::Int(n) => n.to_string(),
            Rat::Str(s) => s,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    algebra: Option<String>,
    k: Option<Rat>,
    chi: Option<Rat>,
    #[serde(rename = "D")]
    d: Option<Rat>,
    depth: Option<i64>,
    mode_bound: Option<Rat>,
    genericity_bound: Option<u32>,
    deg: Option<Rat>,
    critical: Option<bool>,
    restricted: Option<bool>,
    contragredient: Option<bool>,
    raising: Option<String>,
    seed: Option<u64>,
    output: Option<Output>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub algebra: &'static str,
    #[serde(serialize_with = "ser_level")]
    pub k: Level,
    #[serde(serialize_with = "ser_q")]
    pub chi: Q,
    #[serde(rename = "D")]
    pub d: Mode,
    pub depth: i64,
    pub mode_bound: Mode,
    pub genericity_bound: u32,
    pub deg: Mode,
    pub restricted: bool,
    pub contragredient: bool,
    pub raising: RaisingSet,
    pub seed: u64,
    #[serde(skip)]
    pub output: Output,
    #[serde(skip)]
    pub out: Option<std::path::PathBuf>,
}

fn ser_level<S: serde::Serializer>(k: &Level, s: S) -> Result<S::Ok, S::Error> {
    match k {
        Level::Symbolic => s.serialize_str("symbolic"),
        Level::Value(x) => s.serialize_str(&fmt_q(x)),
    }
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn half_integral(name: &str, s: &str) -> Result<Mode, CliError> {
    let m: Mode = s.parse().map_err(usage)?;
    if !m.times(2).is_integer() {
        return Err(usage(format!("--{name} must lie in (1/2)ℤ, got {s}")));
    }
    if m.is_negative() {
        return Err(usage(format!("--{name} must be non-negative, got {s}")));
    }
    Ok(m)
}

impl RunConfig {
    /// `depth` is the per-command default window depth.
    pub fn resolve(flags: &Flags, depth: i64) -> Result<RunConfig, CliError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        if let Some(a) = &file.algebra {
            if a != "A2_2" {
                return Err(usage(format!("unsupported algebra {a:?}; only A2_2 is available")));
            }
        }
        let pick = |flag: &Option<String>, f: Option<Rat>, default: &str| flag.clone().or(f.map(Rat::into_string)).unwrap_or_else(|| default.to_string());
        let critical = flags.critical || file.critical.unwrap_or(false);
        let restricted = flags.restricted || file.restricted.unwrap_or(false);
        let contragredient = flags.contragredient || file.contragredient.unwrap_or(false);
        let k_str = pick(&flags.k, file.k, if critical || restricted || contragredient { "-3" } else { "0" });
        let k: Level = k_str.parse().map_err(usage)?;
        let crit = Level::Value(Q::from_integer((-3).into()));
        if (critical || restricted || contragredient) && k != crit {
            return Err(usage(format!("--critical/--restricted/--contragredient need k = -3, got {k_str}")));
        }
        let chi = parse_rational(&pick(&flags.chi, file.chi, "0")).map_err(usage)?;
        let d = half_integral("D", &pick(&flags.d, file.d, "2"))?;
        let mode_bound = half_integral("mode-bound", &pick(&flags.mode_bound, file.mode_bound, "1"))?;
        let deg = half_integral("deg", &pick(&flags.deg, file.deg, &d.to_string()))?;
        let depth = flags.depth.or(file.depth).unwrap_or(depth);
        if depth < 0 {
            return Err(usage("--depth must be non-negative"));
        }
        let raising = match flags.raising.clone().or(file.raising) {
            Some(s) => s.parse().map_err(usage)?,
            None => RaisingSet::default(),
        };
        Ok(RunConfig {
            algebra: "A2_2",
            k,
            chi,
            d,
            depth,
            mode_bound,
            genericity_bound: flags.genericity_bound.or(file.genericity_bound).unwrap_or(10),
            deg,
            restricted,
            contragredient,
            raising,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            output: flags.output.or(file.output).unwrap_or_default(),
            out: flags.out.clone(),
        })
    }

    pub fn numeric_level(&self) -> Result<Q, CliError> {
        self.k.value().cloned().ok_or_else(|| usage("this command needs a numeric level"))
    }

    pub fn is_critical(&self) -> bool {
        self.k.value().is_some_and(|k| *k == Q::from_integer((-3).into()))
    }
}

fn read_file(p: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", p.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::resolve(&Flags::default(), 0).unwrap();
        assert_eq!((c.d, c.mode_bound, c.deg, c.depth), (Mode::int(2), Mode::int(1), Mode::int(2), 0));
        let f = Flags { k: Some("7/3".into()), d: Some("3/2".into()), ..Flags::default() };
        let c = RunConfig::resolve(&f, 1).unwrap();
        assert_eq!(c.k.to_string(), "7/3");
        assert_eq!(c.deg, Mode::new(3, 2));
        let c = RunConfig::resolve(&Flags { critical: true, ..Flags::default() }, 0).unwrap();
        assert!(c.is_critical());
    }

    #[test]
    fn rejects_bad_input() {
        for f in [
            Flags { k: Some("1/0".into()), ..Flags::default() },
            Flags { chi: Some("x".into()), ..Flags::default() },
            Flags { d: Some("1/3".into()), ..Flags::default() },
            Flags { k: Some("1".into()), restricted: true, ..Flags::default() },
            Flags { raising: Some("all".into()), ..Flags::default() },
        ] {
            assert!(matches!(RunConfig::resolve(&f, 0), Err(CliError::Usage(_))), "{f:?}");
        }
    }

    #[test]
    fn file_then_flags() {
        let dir = std::env::temp_dir().join(format!("wakimoto-cfg-{}", std::process::id()));
        std::fs::write(&dir, r#"{"k": "7/3", "chi": 1, "D": "3", "seed": 5}"#).unwrap();
        let f = Flags { config: Some(dir.clone()), chi: Some("2/7".into()), ..Flags::default() };
        let c = RunConfig::resolve(&f, 0).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!((c.k.to_string(), fmt_q(&c.chi), c.d, c.seed), ("7/3".into(), "2/7".into(), Mode::int(3), 5));
    }
}
