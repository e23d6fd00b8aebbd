//! Flat `key = value` configuration with named figure presets.
//!
//! Values are layered: built-in defaults, then the preset, the config file,
//! `--set` overrides, `--paper-scale`, and finally `--seed`. A run manifest
//! is itself a valid config file: its `config.*` lines are the resolved
//! settings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use wisfbm::SolverKind;

use crate::error::{CliError, Result};
use crate::registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SamplePath,
    Converge,
    RateSweep,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::SamplePath => "sample-path",
            Command::Converge => "converge",
            Command::RateSweep => "rate-sweep",
        })
    }
}

pub const KEYS: [&str; 16] = [
    "alpha",
    "batches",
    "beta",
    "drift",
    "dt",
    "dt_list",
    "endpoint_only",
    "hurst",
    "methods",
    "ref_steps",
    "sampler",
    "samples",
    "seed",
    "stream",
    "t_final",
    "x0",
];

const DEFAULTS: [(&str, &str); 16] = [
    ("alpha", "1"),
    ("batches", "10"),
    ("beta", "1"),
    ("drift", "quasi_rational"),
    ("dt", "0.001"),
    ("dt_list", "2^-6,2^-7,2^-8,2^-9,2^-10"),
    ("endpoint_only", "false"),
    ("hurst", "0.25"),
    ("methods", "GBMEM"),
    ("ref_steps", "16384"),
    ("sampler", "circulant"),
    ("samples", "500"),
    ("seed", "2024"),
    ("stream", "0"),
    ("t_final", "1"),
    ("x0", "1"),
];

/// Ordered key-value store; later layers overwrite earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues(BTreeMap<String, String>);

impl KeyValues {
    pub fn defaults() -> Self {
        let mut kv = Self::default();
        for (k, v) in DEFAULTS {
            kv.0.insert(k.into(), v.into());
        }
        kv
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            kv.0.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(kv)
    }

    /// Reads a config file. If the file is a run manifest, only its
    /// `config.*` entries are used.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let kv = Self::parse(&text)?;
        if kv.0.keys().any(|k| k.starts_with("config.")) {
            let inner = kv
                .0
                .into_iter()
                .filter_map(|(k, v)| k.strip_prefix("config.").map(|s| (s.to_string(), v)))
                .collect();
            return Ok(Self(inner));
        }
        Ok(kv)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown key '{key}' (known: {})", KEYS.join(", "))));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override '{pair}' is not key=value")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn merge(&mut self, other: &KeyValues) -> Result<()> {
        for (k, v) in &other.0 {
            self.set(k, v.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.0.get(key).map(String::as_str).ok_or_else(|| CliError::Config(format!("missing key '{key}'")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Parses a real number; `b^e` is accepted for powers such as `2^-6`.
pub fn parse_real(s: &str) -> Result<f64> {
    let bad = || CliError::Config(format!("'{s}' is not a number"));
    let s = s.trim();
    let v = match s.split_once('^') {
        Some((b, e)) => {
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            let e: f64 = e.trim().parse().map_err(|_| bad())?;
            b.powf(e)
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(item).collect()
}

fn parse_int<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| CliError::Config(format!("{key}: '{s}' is not a nonnegative integer")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerChoice {
    Circulant,
    Cholesky,
}

/// Typed view of a resolved [`KeyValues`].
#[derive(Debug, Clone)]
pub struct Settings {
    pub hurst: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub x0: f64,
    pub t_final: f64,
    pub drift: String,
    pub methods: Vec<SolverKind>,
    pub dt: f64,
    pub dt_list: Vec<f64>,
    pub ref_steps: usize,
    pub samples: usize,
    pub batches: usize,
    pub seed: u64,
    pub stream: u64,
    pub endpoint_only: bool,
    pub sampler: SamplerChoice,
}

impl Settings {
    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let real = |k: &str| {
            parse_real(kv.get(k)?).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{k}: {m}")),
                other => other,
            })
        };
        let drift = kv.get("drift")?.to_string();
        if registry::lookup(&drift).is_none() {
            return Err(CliError::Config(format!("unknown drift '{drift}' (known: {})", registry::names())));
        }
        let methods = parse_list(kv.get("methods")?, |m| {
            m.parse::<SolverKind>().map_err(|e| CliError::Config(e.to_string()))
        })?;
        let endpoint_only = match kv.get("endpoint_only")? {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => return Err(CliError::Config(format!("endpoint_only: '{other}' is not a boolean"))),
        };
        let sampler = match kv.get("sampler")? {
            "circulant" => SamplerChoice::Circulant,
            "cholesky" => SamplerChoice::Cholesky,
            other => return Err(CliError::Config(format!("sampler: '{other}' is not circulant or cholesky"))),
        };
        Ok(Self {
            hurst: parse_list(kv.get("hurst")?, parse_real)?,
            alpha: real("alpha")?,
            beta: real("beta")?,
            x0: real("x0")?,
            t_final: real("t_final")?,
            drift,
            methods,
            dt: real("dt")?,
            dt_list: parse_list(kv.get("dt_list")?, parse_real)?,
            ref_steps: parse_int("ref_steps", kv.get("ref_steps")?)?,
            samples: parse_int("samples", kv.get("samples")?)?,
            batches: parse_int("batches", kv.get("batches")?)?,
            seed: parse_int("seed", kv.get("seed")?)?,
            stream: parse_int("stream", kv.get("stream")?)?,
            endpoint_only,
            sampler,
        })
    }
}

pub struct Preset {
    pub name: &'static str,
    pub command: Command,
    pub caption: &'static str,
    pub values: &'static [(&'static str, &'static str)],
    /// Applied on top of `values` with `--paper-scale`.
    pub paper_scale: &'static [(&'static str, &'static str)],
}

const SWEEP_H: &str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
const PATH_H: &str = "0.1,0.25,0.5,0.75,0.9";
const ALL_METHODS: &str = "GBMEM,MishuraEM,ExpFreeze,Rosenbrock";
const PAPER_REF: (&str, &str) = ("ref_steps", "524288");

pub const PRESETS: [Preset; 11] = [
    Preset {
        name: "fig1a",
        command: Command::SamplePath,
        caption: "paths for several H, alpha = 0 (MishuraEM), dt = 0.001",
        values: &[("hurst", PATH_H), ("alpha", "0"), ("methods", "MishuraEM"), ("dt", "0.001")],
        paper_scale: &[],
    },
    Preset {
        name: "fig1b",
        command: Command::SamplePath,
        caption: "paths for several H, alpha = 1 (GBMEM), dt = 0.001",
        values: &[("hurst", PATH_H), ("alpha", "1"), ("methods", "GBMEM"), ("dt", "0.001")],
        paper_scale: &[],
    },
    Preset {
        name: "fig2a",
        command: Command::SamplePath,
        caption: "four methods on one path, H = 0.25",
        values: &[("hurst", "0.25"), ("alpha", "1"), ("methods", ALL_METHODS), ("dt", "0.001")],
        paper_scale: &[],
    },
    Preset {
        name: "fig2b",
        command: Command::SamplePath,
        caption: "four methods on one path, H = 0.75",
        values: &[("hurst", "0.75"), ("alpha", "1"), ("methods", ALL_METHODS), ("dt", "0.001")],
        paper_scale: &[],
    },
    Preset {
        name: "fig3a",
        command: Command::Converge,
        caption: "RMSE vs dt, H = 0.25, alpha = 1",
        values: &[("hurst", "0.25"), ("alpha", "1"), ("methods", ALL_METHODS)],
        paper_scale: &[PAPER_REF],
    },
    Preset {
        name: "fig3b",
        command: Command::Converge,
        caption: "RMSE vs dt, H = 0.75, alpha = 1",
        values: &[("hurst", "0.75"), ("alpha", "1"), ("methods", ALL_METHODS)],
        paper_scale: &[PAPER_REF],
    },
    Preset {
        name: "fig4a",
        command: Command::RateSweep,
        caption: "rate vs H, alpha = 0 (MishuraEM)",
        values: &[("hurst", SWEEP_H), ("alpha", "0"), ("methods", "MishuraEM")],
        paper_scale: &[PAPER_REF],
    },
    Preset {
        name: "fig4b",
        command: Command::RateSweep,
        caption: "rate vs H, alpha = 1 (GBMEM)",
        values: &[("hurst", SWEEP_H), ("alpha", "1"), ("methods", "GBMEM")],
        paper_scale: &[PAPER_REF],
    },
    Preset {
        name: "fig5a",
        command: Command::RateSweep,
        caption: "rate vs H, alpha = 1, beta = 2 (GBMEM)",
        values: &[("hurst", SWEEP_H), ("alpha", "1"), ("beta", "2"), ("methods", "GBMEM")],
        paper_scale: &[PAPER_REF],
    },
    Preset {
        name: "fig5b",
        command: Command::RateSweep,
        caption: "rate vs H, a = cos x, alpha = -1, beta = 0.5, x0 = 10 (GBMEM)",
        values: &[
            ("hurst", SWEEP_H),
            ("alpha", "-1"),
            ("beta", "0.5"),
            ("x0", "10"),
            ("drift", "cosine"),
            ("methods", "GBMEM"),
        ],
        paper_scale: &[PAPER_REF],
    },
    Preset {
        name: "fig6",
        command: Command::RateSweep,
        caption: "rate and error constant vs H, a = 25 log(1+x^2), beta = 5, x0 = 25 (MishuraEM)",
        values: &[
            ("hurst", SWEEP_H),
            ("alpha", "0"),
            ("beta", "5"),
            ("x0", "25"),
            ("drift", "log_square"),
            ("methods", "MishuraEM"),
        ],
        paper_scale: &[PAPER_REF, ("samples", "2500"), ("batches", "10")],
    },
];

pub fn preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Config(format!("unknown preset '{name}' (known: {})", names.join(", ")))
    })
}

/// Command-line inputs that feed resolution.
#[derive(Debug, Default)]
pub struct Layers<'a> {
    pub preset: Option<&'a str>,
    pub file: Option<&'a Path>,
    pub overrides: &'a [String],
    pub paper_scale: bool,
    pub seed: Option<u64>,
    pub endpoint_only: bool,
}

pub fn resolve(command: Command, layers: &Layers<'_>) -> Result<KeyValues> {
    let mut kv = KeyValues::defaults();
    let preset = layers.preset.map(preset).transpose()?;
    if let Some(p) = preset {
        if p.command != command {
            return Err(CliError::Config(format!("preset {} belongs to '{}', not '{command}'", p.name, p.command)));
        }
        for (k, v) in p.values {
            kv.set(k, *v)?;
        }
    }
    if let Some(path) = layers.file {
        kv.merge(&KeyValues::from_file(path)?)?;
    }
    for pair in layers.overrides {
        kv.set_pair(pair)?;
    }
    if layers.paper_scale {
        match preset {
            Some(p) => {
                for (k, v) in p.paper_scale {
                    kv.set(k, *v)?;
                }
            }
            None if command != Command::SamplePath => kv.set(PAPER_REF.0, PAPER_REF.1)?,
            None => {}
        }
    }
    if let Some(seed) = layers.seed {
        kv.set("seed", seed.to_string())?;
    }
    if layers.endpoint_only {
        kv.set("endpoint_only", "true")?;
    }
    Ok(kv)
}
