//! One experiment, whether it came from flags or from a TOML document.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use darboux_core::counterexamples::{FatCoverConfig, SequenceKind};
use darboux_core::darboux::Partition;
use darboux_core::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A rational given either as a string (`"1/3"`, `"0.25"`) or a TOML integer.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RatArg {
    Int(i64),
    Str(String),
}

impl RatArg {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            RatArg::Int(i) => Ok(Rational::integer(*i)),
            RatArg::Str(s) => parse_rational(s),
        }
    }
}

impl From<String> for RatArg {
    fn from(s: String) -> Self {
        RatArg::Str(s)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse::<Rational>().map_err(|e| anyhow!("{e}"))
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub ell: Option<RatArg>,
    pub seed: Option<u64>,
    pub kind: Option<String>,
    pub eps: Option<RatArg>,
    pub j: Option<u64>,
    pub k: Option<u64>,
    pub probe_m: Option<u64>,
    pub x: Option<RatArg>,
    /// Coefficient of √2 added to `x`.
    pub sqrt2: Option<RatArg>,
    pub jmax: Option<u64>,
    pub g: Option<String>,
    pub mode: Option<String>,
    pub scaled: Option<bool>,
    pub function: Option<String>,
    pub partition: Option<String>,
    #[serde(rename = "K")]
    pub depth: Option<u64>,
    pub edit: Option<Vec<String>>,
    pub source: Option<String>,
    pub freq: Option<Vec<RatArg>>,
    pub prec: Option<u32>,
    pub direction: Option<String>,
    pub untruncated: Option<bool>,
    #[serde(rename = "R")]
    pub radii: Option<Vec<RatArg>>,
    pub n: Option<u64>,
    pub gap_depth: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid experiment config")
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn fat_cover(&self) -> Result<FatCoverConfig> {
        match &self.ell {
            None => Ok(FatCoverConfig::default()),
            Some(e) => FatCoverConfig::new(e.parse()?).map_err(|e| anyhow!("{e}")),
        }
    }

    pub fn kind(&self) -> Result<SequenceKind> {
        let name = self.kind.as_deref().ok_or_else(|| anyhow!("missing --kind"))?;
        SequenceKind::parse(name, self.fat_cover()?).map_err(|e| anyhow!("{e}"))
    }

    pub fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
        v.clone().ok_or_else(|| anyhow!("missing {flag}"))
    }

    pub fn rational(v: &Option<RatArg>, flag: &str) -> Result<Rational> {
        v.as_ref().ok_or_else(|| anyhow!("missing {flag}"))?.parse()
    }

    pub fn rationals(v: &Option<Vec<RatArg>>, flag: &str) -> Result<Vec<Rational>> {
        v.as_ref()
            .ok_or_else(|| anyhow!("missing {flag}"))?
            .iter()
            .map(RatArg::parse)
            .collect()
    }

    /// `uniform:n`, `random:n[:seed]` (seed defaults to `--seed`), or an
    /// explicit comma-separated list of breakpoints.
    pub fn partition(&self) -> Result<Partition> {
        let spec = self.partition.as_deref().unwrap_or("uniform:2");
        let parts: Vec<&str> = spec.split(':').collect();
        let core = |e: darboux_core::Error| anyhow!("{e}");
        match parts.as_slice() {
            ["uniform", n] => Partition::uniform(n.parse().context("uniform:n needs an integer")?).map_err(core),
            ["random", n] => Partition::random(
                n.parse().context("random:n needs an integer")?,
                self.seed.unwrap_or(0),
            )
            .map_err(core),
            ["random", n, seed] => Partition::random(
                n.parse().context("random:n:seed needs an integer n")?,
                seed.parse().context("random:n:seed needs an integer seed")?,
            )
            .map_err(core),
            [list] => {
                let pts = list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
                Partition::new(pts).map_err(core)
            }
            _ => bail!("unrecognized partition spec {spec:?}"),
        }
    }

    /// `--edit p/q=v` pairs.
    pub fn edits(&self) -> Result<Vec<(Rational, Rational)>> {
        self.edit
            .iter()
            .flatten()
            .map(|e| {
                let (x, v) = e
                    .split_once('=')
                    .ok_or_else(|| anyhow!("edit {e:?} must look like point=value"))?;
                Ok((parse_rational(x)?, parse_rational(v)?))
            })
            .collect()
    }
}
