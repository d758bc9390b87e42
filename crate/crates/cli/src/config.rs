//! Experiment configuration: `key = value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use modp_qfa::circuit::{BuildSpec, Variant};
use modp_qfa::ksearch::{Enumeration, SearchScheme};
use modp_qfa::sampling::NoiseModel;
use modp_qfa::synthesis::{BasisSet, DecompositionStyle};

/// Keys accepted in a config file and as `--flag` names (with `-` for `_`).
pub const KEYS: &[&str] = &[
    "p",
    "k",
    "variant",
    "m",
    "m_max",
    "shots",
    "noise_p1",
    "noise_p2",
    "noise_readout",
    "basis",
    "fuse",
    "seed",
    "out",
    "decomp",
    "d",
    "scheme",
    "enumeration",
    "shots_dir",
];

/// Raw settings keyed by canonical name; later layers win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig(BTreeMap<String, String>);

fn canonical(key: &str) -> Result<String> {
    let key = key.trim().trim_start_matches("--").replace('-', "_");
    if KEYS.contains(&key.as_str()) {
        Ok(key)
    } else {
        bail!("unknown config key `{key}`")
    }
}

impl RawConfig {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected `key = value`", i + 1))?;
            let key = canonical(key).with_context(|| format!("config line {}", i + 1))?;
            map.insert(key, value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        self.0.insert(canonical(key)?, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// `other` overrides `self`.
    pub fn merged(mut self, other: RawConfig) -> Self {
        self.0.extend(other.0);
        self
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub p: u64,
    pub k: Vec<u64>,
    pub variant: Variant,
    /// Whether `variant` was chosen explicitly.
    pub variant_set: bool,
    /// Word length for single-circuit commands.
    pub m: usize,
    pub m_max: usize,
    pub shots: u64,
    pub noise: NoiseModel,
    pub basis: Option<BasisSet>,
    pub fuse: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub decomp: Option<DecompositionStyle>,
    pub d: usize,
    pub scheme: SearchScheme,
    pub enumeration: Enumeration,
    pub shots_dir: Option<PathBuf>,
}

fn field<T: FromStr>(raw: &RawConfig, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    raw.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|e| anyhow!("invalid config field `{key}` = `{v}`: {e}"))
        })
        .transpose()
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => bail!("invalid config field `{key}` = `{v}`: expected true or false"),
    }
}

fn parse_enumeration(v: &str) -> Result<Enumeration> {
    match v {
        "distinct" => Ok(Enumeration::Distinct),
        "multiset" => Ok(Enumeration::Multiset),
        _ => bail!("invalid config field `enumeration` = `{v}`: expected distinct or multiset"),
    }
}

fn parse_k(v: &str) -> Result<Vec<u64>> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| anyhow!("invalid config field `k` = `{v}`: {e}"))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn resolve(raw: &RawConfig) -> Result<Self> {
        let p = field(raw, "p")?.unwrap_or(11);
        let variant_set = raw.get("variant").is_some();
        let variant: Variant = field(raw, "variant")?.unwrap_or(Variant::Optimized);
        let k = match raw.get("k") {
            Some(v) => parse_k(v)?,
            None => variant.default_k(p),
        };
        let noise = NoiseModel::new(
            field(raw, "noise_p1")?.unwrap_or(0.0),
            field(raw, "noise_p2")?.unwrap_or(0.0),
            field(raw, "noise_readout")?.unwrap_or(0.0),
        )
        .map_err(|e| anyhow!("invalid config field `noise`: {e}"))?;
        let cfg = Self {
            p,
            k,
            variant,
            variant_set,
            m: field(raw, "m")?.unwrap_or(p as usize),
            m_max: field(raw, "m_max")?.unwrap_or(2 * p as usize),
            shots: field(raw, "shots")?.unwrap_or(1000),
            noise,
            basis: field(raw, "basis")?,
            fuse: raw
                .get("fuse")
                .map(|v| parse_bool("fuse", v))
                .transpose()?
                .unwrap_or(false),
            seed: field(raw, "seed")?.unwrap_or(0),
            out: raw.get("out").map(PathBuf::from),
            decomp: field(raw, "decomp")?,
            d: field(raw, "d")?.unwrap_or(3),
            scheme: field(raw, "scheme")?.unwrap_or(SearchScheme::Parallel),
            enumeration: raw
                .get("enumeration")
                .map(parse_enumeration)
                .transpose()?
                .unwrap_or_default(),
            shots_dir: raw.get("shots_dir").map(PathBuf::from),
        };
        if cfg.shots == 0 {
            bail!("invalid config field `shots`: must be positive");
        }
        Ok(cfg)
    }

    /// Build request for word length `m`, validated against the variant.
    pub fn spec(&self, variant: Variant, k: &[u64], m: usize) -> Result<BuildSpec> {
        let mut spec = BuildSpec::new(self.p, k.to_vec(), m, variant);
        if let Some(style) = self.decomp {
            spec = spec.with_decomposition(style);
        }
        spec.validate().map_err(|e| {
            let key = if matches!(e, modp_qfa::Error::NotPrime(_)) {
                "p"
            } else {
                "k"
            };
            anyhow!("invalid config field `{key}` for variant {variant}: {e}")
        })?;
        Ok(spec)
    }
}
